//! Number rendering for machine-readable output.

/// Significant digits used in csv and json output.
pub const SIG_DIGITS: usize = 12;

/// `v` with exactly 12 significant digits: positional notation for
/// magnitudes in `[1e-5, 1e12)`, scientific otherwise.
pub fn sig12(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return format!("{:.*}", SIG_DIGITS - 1, 0.0);
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("scientific rendering has an exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        format!("{:.*}", (SIG_DIGITS as i32 - 1 - exp) as usize, v)
    } else {
        sci
    }
}

/// `v` rounded to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    format!("{:.*e}", SIG_DIGITS - 1, v).parse().unwrap_or(v)
}
