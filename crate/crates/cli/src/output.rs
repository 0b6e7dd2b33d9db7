use serde::Serialize;
use serde_json::Value;

/// Version stamped on every JSON document the CLI emits.
pub const SCHEMA_VERSION: u32 = 1;

/// Significant digits kept in printed rates.
pub const SIGNIFICANT_DIGITS: usize = 9;

/// Rounds to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("scientific notation round-trips")
}

fn round_floats(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("checked f64"), SIGNIFICANT_DIGITS);
            if let Some(rounded) = serde_json::Number::from_f64(x) {
                *n = rounded;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to nine significant digits.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut tree = serde_json::to_value(value)?;
    round_floats(&mut tree);
    serde_json::to_string_pretty(&tree)
}

/// CSV cell for a rate.
pub fn format_rate(x: f64) -> String {
    round_sig(x, SIGNIFICANT_DIGITS).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(2.519237073907318, 9), 2.51923707);
        assert_eq!(round_sig(0.0, 9), 0.0);
        assert_eq!(round_sig(1234567890123.0, 9), 1234567890000.0);
        assert_eq!(round_sig(-1.23456789012e-7, 9), -1.23456789e-7);
    }

    #[test]
    fn json_rounds_nested_floats() {
        let text = to_json(&serde_json::json!({"x": [1.0 / 3.0], "k": 3})).unwrap();
        assert!(text.contains("0.333333333"));
        assert!(!text.contains("0.3333333333"));
        assert!(text.contains("\"k\": 3"));
    }
}
