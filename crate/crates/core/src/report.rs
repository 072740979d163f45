//! Shared output helpers: number formatting and machine-readable discrepancy flags.

use serde::{Deserialize, Serialize};

/// Format a real with 17 significant digits in scientific notation.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// A documented mismatch between a closed-form statement and the value this
/// crate computes, carried alongside results so that it can be checked
/// programmatically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub code: String,
    pub detail: String,
    /// The value as commonly stated for this quantity.
    pub stated: f64,
    /// The value computed here.
    pub computed: f64,
}

impl Discrepancy {
    pub fn new(code: &str, detail: impl Into<String>, stated: f64, computed: f64) -> Self {
        Self {
            code: code.to_owned(),
            detail: detail.into(),
            stated,
            computed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_real(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_real(0.0), "0.0000000000000000e0");
        let x = 0.123_456_789_012_345_67;
        assert_eq!(fmt_real(x).parse::<f64>().unwrap(), x);
    }
}
