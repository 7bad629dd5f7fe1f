use uiscatter::Complex64;

/// Parses `"re,im"`, allowing whitespace around either part.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let usage = || format!("expected a complex number as \"re,im\", got {s:?}");
    let mut parts = s.split(',');
    let (Some(re), Some(im), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(usage());
    };
    let re: f64 = re.trim().parse().map_err(|_| usage())?;
    let im: f64 = im.trim().parse().map_err(|_| usage())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(usage());
    }
    Ok(Complex64::new(re, im))
}
