//! Versioned envelope shared by every machine-readable report.

use serde::Serialize;

pub const SCHEMA_VERSION: &str = "perminv/1";

/// `{"schema": …, "suite": …, "pass": …, "report": {...}}`
#[derive(Clone, Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema: &'static str,
    pub suite: String,
    pub pass: bool,
    pub report: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(suite: impl Into<String>, pass: bool, report: T) -> Self {
        Envelope {
            schema: SCHEMA_VERSION,
            suite: suite.into(),
            pass,
            report,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

/// Rounds to 12 significant digits so reports are stable across summation orders.
pub fn stable(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = 12 - x.abs().log10().ceil() as i32;
    let scale = 10f64.powi(digits.clamp(-300, 300));
    (x * scale).round() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_carries_schema() {
        let e = Envelope::new("demo", true, vec![1, 2]);
        let json = e.to_json().unwrap();
        assert!(json.contains("\"schema\": \"perminv/1\""));
    }

    #[test]
    fn stable_rounding() {
        assert_eq!(stable(1.0 / 3.0), 0.333333333333);
        assert_eq!(stable(0.0), 0.0);
        assert_eq!(stable(1.5), 1.5);
    }
}
