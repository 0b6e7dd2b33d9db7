//! Point-to-point AWGN capacity in bits per real channel use.

use crate::error::{Error, Result};

/// `½·log₂(1 + snr)`.
pub fn gaussian_capacity(snr: f64) -> Result<f64> {
    if !snr.is_finite() || snr < 0.0 {
        return Err(Error::Domain(snr));
    }
    Ok(cap(snr))
}

/// Inverse of [`gaussian_capacity`]: `2^{2·bits} − 1`.
pub fn inverse_capacity(bits: f64) -> Result<f64> {
    if !bits.is_finite() || bits < 0.0 {
        return Err(Error::Domain(bits));
    }
    Ok((2.0 * bits * std::f64::consts::LN_2).exp_m1())
}

/// Unchecked capacity for internal callers whose argument is a sum of
/// nonnegative powers over positive noise.
#[inline]
pub(crate) fn cap(snr: f64) -> f64 {
    0.5 * snr.ln_1p() / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn capacity_examples() {
        assert_eq!(gaussian_capacity(0.0).unwrap(), 0.0);
        assert!((gaussian_capacity(3.0).unwrap() - 1.0).abs() < 1e-15);
        // ½·log₂(10.75) evaluated independently
        let expected = 0.5 * 10.75_f64.log2();
        assert!((gaussian_capacity(9.75).unwrap() - expected).abs() < 1e-14);
        assert!((gaussian_capacity(9.75).unwrap() - 1.713132).abs() < 1e-6);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse_capacity(0.0).unwrap(), 0.0);
        assert_eq!(inverse_capacity(1.0).unwrap(), 3.0);
        let bits = gaussian_capacity(3.0 / 1.75).unwrap();
        assert!((bits - 0.720287).abs() < 1e-6);
        assert!((inverse_capacity(bits).unwrap() - 1.714286).abs() < 1e-4);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(gaussian_capacity(-1e-9), Err(Error::Domain(-1e-9)));
        assert!(gaussian_capacity(f64::NAN).is_err());
        assert!(gaussian_capacity(f64::INFINITY).is_err());
        assert!(inverse_capacity(-0.5).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(bits in 0.0f64..60.0) {
            let back = gaussian_capacity(inverse_capacity(bits).unwrap()).unwrap();
            prop_assert!((back - bits).abs() <= 1e-9 * bits);
        }

        #[test]
        fn monotone(x in 0.0f64..1e6, dx in 0.0f64..1e3) {
            prop_assert!(gaussian_capacity(x + dx).unwrap() >= gaussian_capacity(x).unwrap());
        }
    }
}
