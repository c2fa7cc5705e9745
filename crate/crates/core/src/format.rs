//! Deterministic float formatting for CSV and JSON-adjacent text output.

/// Formats with 12 significant digits, trimming trailing zeros: fixed
/// notation for moderate magnitudes, scientific otherwise. Output is
/// byte-stable across platforms, which is what golden-file tests rely on.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp: i32 = {
        let s = format!("{x:e}");
        s[s.find('e').unwrap() + 1..].parse().unwrap()
    };
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_fixed(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, tail) = s.split_once('e').unwrap();
        format!("{}e{}", trim_fixed(mantissa.to_string()), tail)
    }
}

fn trim_fixed(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}
