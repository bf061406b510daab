/// Decimal text of `v` rounded to 1e-9, without trailing zeros and never `-0`.
pub fn format_number(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let s = format!("{v:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// `v` rounded to 1e-9 where that is representable, for JSON output.
pub(crate) fn round9(v: f64) -> f64 {
    let r = (v * 1e9).round() / 1e9;
    // adding zero turns -0 into 0
    if r.is_finite() {
        r + 0.0
    } else {
        v
    }
}
