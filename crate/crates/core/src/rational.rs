//! Small exact-rational helpers for reporting.

use num_rational::Ratio;

pub type Rational = Ratio<i64>;

/// Smallest-denominator fraction within `tol` of `x`, searching
/// denominators up to `max_den`.
pub fn recover_rational(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    (1..=max_den).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() <= tol).then(|| Rational::new(p as i64, q))
    })
}

/// `"p/q"` for values close to a fraction with denominator at most 10000,
/// `None` otherwise.
pub fn rational_string(x: f64) -> Option<String> {
    recover_rational(x, 10_000, 1e-9).map(|r| r.to_string())
}

pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_fractions() {
        assert_eq!(rational_string(5.0 / 3.0).as_deref(), Some("5/3"));
        assert_eq!(rational_string(-0.74).as_deref(), Some("-37/50"));
        assert_eq!(rational_string(1.0).as_deref(), Some("1"));
        assert_eq!(rational_string(0.0).as_deref(), Some("0"));
        assert_eq!(rational_string(std::f64::consts::PI), None);
        assert_eq!(rational_string(f64::NAN), None);
    }
}
