/// Fixed-point text with 12 significant digits, independent of locale.
pub fn format(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    let text = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit, e.g. 9.9999999999996
    let digits = text.chars().filter(char::is_ascii_digit).skip_while(|&c| c == '0').count();
    if digits > 12 && decimals > 0 {
        let decimals = decimals - 1;
        return format!("{x:.decimals$}");
    }
    text
}

#[cfg(test)]
mod tests {
    use super::format;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format(0.0), "0.000000000000");
        assert_eq!(format(8f64.sqrt()), "2.82842712475");
        assert_eq!(format(0.5), "0.500000000000");
        assert_eq!(format(-0.00123), "-0.00123000000000");
        assert_eq!(format(123456.0), "123456.000000");
        assert_eq!(format(9.9999999999996), "10.0000000000");
        assert_eq!(format(1e13), "10000000000000");
    }
}
