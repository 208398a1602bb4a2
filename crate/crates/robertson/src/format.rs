/// Shortest decimal that parses back to the same `f64`. Plain notation for
/// moderate magnitudes, exponent notation otherwise; non-finite values are empty.
pub fn fmt_f64(v: f64) -> String {
    if !v.is_finite() {
        return String::new();
    }
    let a = v.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for v in [0.0, -0.0, 1.0, 0.1, 1e-9, 3.6515e-5, 1.0 / 3.0, 1e300, -2.5e-310, 12345.678, 1e16] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(1e-9), "1e-9");
        assert_eq!(fmt_f64(0.25), "0.25");
        assert_eq!(fmt_f64(f64::NAN), "");
    }
}
