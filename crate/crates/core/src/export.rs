//! Plain-text number formatting shared by CSV and JSON emitters.

use crate::scalar::Real;

/// 17 significant digits, scientific notation, `.` decimal separator.
/// Parses back to the identical `f64`.
pub fn fmt_real<T: Real>(x: T) -> String {
    format!("{:.16e}", x.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for &x in &[0.1, -2.0f64.sqrt(), 1e-300, 12345.678, 0.0, std::f64::consts::PI] {
            assert_eq!(fmt_real(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_real(1.0f64), "1.0000000000000000e0");
    }
}
