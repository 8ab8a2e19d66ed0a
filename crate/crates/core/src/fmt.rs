/// Formats `x` with six significant digits, `%g`-style.
pub fn sig6(x: f64) -> String {
    sig(x, 6)
}

pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let rounded: f64 = format!("{:.*e}", digits - 1, x).parse().unwrap_or(x);
    let exp = if rounded != 0.0 { rounded.abs().log10().floor() as i32 } else { exp };
    if exp < -4 || exp >= digits as i32 {
        let s = format!("{:.*e}", digits - 1, x);
        let (mantissa, e) = s.split_once('e').unwrap_or((&s, "0"));
        format!("{}e{}", trim_zeros(mantissa), e)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(20122.345678), "20122.3");
        assert_eq!(sig6(-34950.0), "-34950");
        assert_eq!(sig6(0.099_999_17), "0.0999992");
        assert_eq!(sig6(1.5e-7), "1.5e-7");
        assert_eq!(sig6(123_456_789.0), "1.23457e8");
        assert_eq!(sig6(999_999.7), "1e6");
        assert_eq!(sig6(0.5), "0.5");
    }
}
