//! Channel parameters in standard form and the normalization of arbitrary
//! gains and noise variances onto it.
//!
//! In standard form receiver 1 sees `Y₁ = X₁ + Z₁` and receiver `i ≥ 2` sees
//! `Yᵢ = Xᵢ + aᵢ₋₁·Xᵢ₋₁ + Zᵢ` with unit-variance noise and input power `Pᵢ`.
//! Gains are kept as magnitudes; every formula downstream uses `aᵢ²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationError};

/// Standard-form cascade channel: `K` users, `K − 1` interference gains and
/// `K` powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStandard", into = "RawStandard")]
pub struct ChannelConfig {
    gains: Vec<f64>,
    powers: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawStandard {
    #[serde(rename = "K")]
    k: Option<usize>,
    a: Vec<f64>,
    #[serde(rename = "P")]
    p: Vec<f64>,
}

impl TryFrom<RawStandard> for ChannelConfig {
    type Error = ValidationError;

    fn try_from(raw: RawStandard) -> std::result::Result<Self, Self::Error> {
        let k = raw.k.unwrap_or(raw.p.len());
        validate(k, &raw.a, &raw.p)?;
        Ok(ChannelConfig {
            gains: raw.a,
            powers: raw.p,
        })
    }
}

impl From<ChannelConfig> for RawStandard {
    fn from(cfg: ChannelConfig) -> Self {
        RawStandard {
            k: Some(cfg.users()),
            a: cfg.gains,
            p: cfg.powers,
        }
    }
}

/// Checks every standard-form invariant and reports the first violation.
///
/// Order: user count, lengths, then `a` entries, then `P` entries.
pub fn validate(k: usize, gains: &[f64], powers: &[f64]) -> std::result::Result<(), ValidationError> {
    if k < 2 {
        return Err(ValidationError::TooFewUsers { k });
    }
    if gains.len() != k - 1 {
        return Err(ValidationError::Length {
            field: "a",
            expected: k - 1,
            found: gains.len(),
        });
    }
    if powers.len() != k {
        return Err(ValidationError::Length {
            field: "P",
            expected: k,
            found: powers.len(),
        });
    }
    for (index, &value) in gains.iter().enumerate() {
        if !value.is_finite() {
            return Err(ValidationError::NonFinite { field: "a", index, value });
        }
        if value < 0.0 {
            return Err(ValidationError::NegativeGain { index, value });
        }
    }
    for (index, &value) in powers.iter().enumerate() {
        if !value.is_finite() {
            return Err(ValidationError::NonFinite { field: "P", index, value });
        }
        if value <= 0.0 {
            return Err(ValidationError::NonPositive { field: "P", index, value });
        }
    }
    Ok(())
}

impl ChannelConfig {
    /// Builds a validated configuration; `K` is implied by `powers.len()`.
    pub fn new(gains: Vec<f64>, powers: Vec<f64>) -> std::result::Result<Self, ValidationError> {
        validate(powers.len(), &gains, &powers)?;
        Ok(ChannelConfig { gains, powers })
    }

    /// Number of users `K`.
    pub fn users(&self) -> usize {
        self.powers.len()
    }

    /// Interference gains; entry `i` (zero-based) couples user `i` into
    /// receiver `i + 1`.
    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    /// Channel formed by users `start..end` (zero-based, half-open) with the
    /// gains between them. `None` when fewer than two users remain.
    pub fn sub_chain(&self, start: usize, end: usize) -> Option<ChannelConfig> {
        if end > self.users() || end < start + 2 {
            return None;
        }
        Some(ChannelConfig {
            gains: self.gains[start..end - 1].to_vec(),
            powers: self.powers[start..end].to_vec(),
        })
    }

    /// Threshold `√(1 + P_{i+1})` at and above which gain `i` is very strong.
    pub fn very_strong_threshold(&self, i: usize) -> f64 {
        (1.0 + self.powers[i + 1]).sqrt()
    }
}

/// Cascade channel with arbitrary direct gains `d`, cross gains `c`, noise
/// variances and power limits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralChannel {
    pub d: Vec<f64>,
    pub c: Vec<f64>,
    pub sigma2: Vec<f64>,
    #[serde(rename = "Q")]
    pub q: Vec<f64>,
}

impl GeneralChannel {
    fn check(&self) -> Result<()> {
        let k = self.d.len();
        if k < 2 {
            return Err(ValidationError::TooFewUsers { k }.into());
        }
        let lengths = [("c", k - 1, self.c.len()), ("sigma2", k, self.sigma2.len()), ("Q", k, self.q.len())];
        for (field, expected, found) in lengths {
            if expected != found {
                return Err(ValidationError::Length { field, expected, found }.into());
            }
        }
        for (field, values) in [("d", &self.d), ("c", &self.c), ("sigma2", &self.sigma2), ("Q", &self.q)] {
            if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
                return Err(ValidationError::NonFinite { field, index, value }.into());
            }
        }
        if let Some(index) = self.d.iter().position(|&d| d == 0.0) {
            return Err(Error::DegenerateChannel { index });
        }
        for (field, values) in [("sigma2", &self.sigma2), ("Q", &self.q)] {
            if let Some((index, &value)) = values.iter().enumerate().find(|(_, &v)| v <= 0.0) {
                return Err(ValidationError::NonPositive { field, index, value }.into());
            }
        }
        Ok(())
    }
}

/// Normalizes noise to unit variance and direct gains to one:
/// `Pᵢ = dᵢ²Qᵢ/σᵢ²` and `aᵢ = |cᵢ|·σᵢ / (|dᵢ|·σᵢ₊₁)`.
pub fn to_standard_form(g: &GeneralChannel) -> Result<ChannelConfig> {
    g.check()?;
    let powers: Vec<f64> = (0..g.d.len()).map(|i| g.d[i] * g.d[i] * g.q[i] / g.sigma2[i]).collect();
    let gains: Vec<f64> = (0..g.c.len())
        .map(|i| (g.c[i] * g.sigma2[i].sqrt() / (g.d[i] * g.sigma2[i + 1].sqrt())).abs())
        .collect();
    Ok(ChannelConfig::new(gains, powers)?)
}

/// Channel as accepted on the command line: either standard form or
/// `{"general": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelSpec {
    General { general: GeneralChannel },
    Standard(ChannelConfig),
}

impl ChannelSpec {
    pub fn into_standard(self) -> Result<ChannelConfig> {
        match self {
            ChannelSpec::Standard(cfg) => Ok(cfg),
            ChannelSpec::General { general } => to_standard_form(&general),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn general(d: &[f64], c: &[f64], sigma2: &[f64], q: &[f64]) -> GeneralChannel {
        GeneralChannel {
            d: d.to_vec(),
            c: c.to_vec(),
            sigma2: sigma2.to_vec(),
            q: q.to_vec(),
        }
    }

    #[test]
    fn standard_form_examples() {
        let cfg = to_standard_form(&general(&[1.0, 1.0], &[0.5], &[1.0, 1.0], &[3.0, 3.0])).unwrap();
        assert_eq!(cfg.users(), 2);
        assert_eq!(cfg.gains(), &[0.5]);
        assert_eq!(cfg.powers(), &[3.0, 3.0]);

        let cfg = to_standard_form(&general(&[2.0, 1.0], &[1.0], &[1.0, 4.0], &[3.0, 12.0])).unwrap();
        assert_eq!(cfg.gains(), &[0.25]);
        assert_eq!(cfg.powers(), &[12.0, 3.0]);

        let cfg = to_standard_form(&general(&[1.0, -1.0], &[0.5], &[1.0, 1.0], &[3.0, 3.0])).unwrap();
        assert_eq!(cfg.gains(), &[0.5]);
        assert_eq!(cfg.powers(), &[3.0, 3.0]);

        // negative cross gain and negative first direct gain
        let cfg = to_standard_form(&general(&[-2.0, 1.0], &[-1.0], &[1.0, 4.0], &[3.0, 12.0])).unwrap();
        assert_eq!(cfg.gains(), &[0.25]);
    }

    #[test]
    fn degenerate_direct_gain() {
        let err = to_standard_form(&general(&[1.0, 0.0], &[0.5], &[1.0, 1.0], &[3.0, 3.0])).unwrap_err();
        assert_eq!(err, Error::DegenerateChannel { index: 1 });
    }

    #[test]
    fn general_validation() {
        let err = to_standard_form(&general(&[1.0, 1.0], &[0.5], &[1.0, 0.0], &[3.0, 3.0])).unwrap_err();
        assert!(matches!(err, Error::Invalid(ValidationError::NonPositive { field: "sigma2", index: 1, .. })));
        let err = to_standard_form(&general(&[1.0, 1.0], &[], &[1.0, 1.0], &[3.0, 3.0])).unwrap_err();
        assert!(matches!(err, Error::Invalid(ValidationError::Length { field: "c", .. })));
    }

    #[test]
    fn validate_examples() {
        assert!(validate(3, &[0.5, 0.4], &[3.0, 3.0, 3.0]).is_ok());

        let err = validate(3, &[0.5], &[3.0, 3.0, 3.0]).unwrap_err();
        assert_eq!(err, ValidationError::Length { field: "a", expected: 2, found: 1 });
        assert_eq!(err.field(), "a");

        let err = validate(2, &[-0.1], &[3.0, 3.0]).unwrap_err();
        assert_eq!(err, ValidationError::NegativeGain { index: 0, value: -0.1 });
        assert_eq!(err.index(), Some(0));
    }

    #[test]
    fn validate_other_invariants() {
        assert_eq!(validate(1, &[], &[3.0]), Err(ValidationError::TooFewUsers { k: 1 }));
        assert!(matches!(
            validate(2, &[0.5], &[3.0, 0.0]),
            Err(ValidationError::NonPositive { field: "P", index: 1, .. })
        ));
        assert!(matches!(
            validate(2, &[f64::NAN], &[3.0, 3.0]),
            Err(ValidationError::NonFinite { field: "a", index: 0, .. })
        ));
        assert!(matches!(
            validate(3, &[0.5, 0.4], &[3.0, 3.0]),
            Err(ValidationError::Length { field: "P", .. })
        ));
    }

    #[test]
    fn json_interchange() {
        let spec: ChannelSpec = serde_json::from_str(r#"{"K":3,"a":[0.5,0.4],"P":[3,3,3]}"#).unwrap();
        let cfg = spec.into_standard().unwrap();
        assert_eq!(cfg.gains(), &[0.5, 0.4]);

        let spec: ChannelSpec =
            serde_json::from_str(r#"{"general":{"d":[2,1],"c":[1],"sigma2":[1,4],"Q":[3,12]}}"#).unwrap();
        assert_eq!(spec.into_standard().unwrap().powers(), &[12.0, 3.0]);

        assert!(serde_json::from_str::<ChannelConfig>(r#"{"K":3,"a":[0.5],"P":[3,3,3]}"#).is_err());

        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(text, r#"{"K":3,"a":[0.5,0.4],"P":[3.0,3.0,3.0]}"#);
    }

    #[test]
    fn sub_chain_bounds() {
        let cfg = ChannelConfig::new(vec![0.5, 0.4, 1.7], vec![3.0, 3.0, 3.0, 3.0]).unwrap();
        let sub = cfg.sub_chain(1, 4).unwrap();
        assert_eq!(sub.gains(), &[0.4, 1.7]);
        assert!(cfg.sub_chain(3, 4).is_none());
        assert!(cfg.sub_chain(2, 5).is_none());
    }

    proptest! {
        #[test]
        fn already_standard_is_identity(
            (gains, powers) in (2usize..7).prop_flat_map(|k| (
                proptest::collection::vec(0.0f64..5.0, k - 1),
                proptest::collection::vec(0.01f64..100.0, k),
            ))
        ) {
            let k = powers.len();
            let g = GeneralChannel { d: vec![1.0; k], c: gains.clone(), sigma2: vec![1.0; k], q: powers.clone() };
            let cfg = to_standard_form(&g).unwrap();
            for (x, y) in cfg.gains().iter().zip(&gains) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
            for (x, y) in cfg.powers().iter().zip(&powers) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }

        #[test]
        fn normalized_output_validates(
            (d, c, sigma2, q) in (2usize..6).prop_flat_map(|k| (
                proptest::collection::vec(prop_oneof![-10.0f64..-0.01, 0.01f64..10.0], k),
                proptest::collection::vec(-10.0f64..10.0, k - 1),
                proptest::collection::vec(0.01f64..10.0, k),
                proptest::collection::vec(0.01f64..100.0, k),
            ))
        ) {
            let g = GeneralChannel { d, c, sigma2, q };
            let cfg = to_standard_form(&g).unwrap();
            prop_assert!(validate(cfg.users(), cfg.gains(), cfg.powers()).is_ok());
            // received signal and interference SNRs are preserved
            for i in 0..cfg.users() {
                let snr = g.d[i] * g.d[i] * g.q[i] / g.sigma2[i];
                prop_assert!((cfg.powers()[i] - snr).abs() <= 1e-12 * snr);
            }
            for i in 0..cfg.users() - 1 {
                let inr = g.c[i] * g.c[i] * g.q[i] / g.sigma2[i + 1];
                let a = cfg.gains()[i];
                prop_assert!((a * a * cfg.powers()[i] - inr).abs() <= 1e-12 * inr.max(1e-300));
            }
        }
    }
}
