//! Number formatting and CSV emission.

use std::io::Write;

use ecokit_core::hub::CurvePoint;
use ecokit_core::viability::ViabilityRegion;

/// Formats `x` rounded to `digits` significant digits, without trailing
/// zeros. Very large or small magnitudes switch to exponent notation.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let digits = digits.max(1);
    // exponent after rounding, so 9.9999999999 becomes 10
    let rounded: f64 = format!("{:.*e}", digits - 1, x).parse().unwrap_or(x);
    let exp = rounded.abs().log10().floor() as i32;
    if exp < -5 || exp >= digits as i32 {
        let s = format!("{:.*e}", digits - 1, x);
        let (mantissa, e) = s.split_once('e').unwrap_or((&s, "0"));
        return format!("{}e{}", trim_zeros(mantissa), e);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Nine significant digits, used in reports and CSV files.
pub fn num(x: f64) -> String {
    sig(x, 9)
}

/// Writes the region as `n,m,margin,feasible`, rows sorted by `n` then `m`.
pub fn write_region_csv<W: Write>(region: &ViabilityRegion, out: W) -> csv::Result<()> {
    let mut cells = region.cells.clone();
    cells.sort_by_key(|c| (c.n, c.m));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "m", "margin", "feasible"])?;
    for c in &cells {
        w.write_record([c.n.to_string(), c.m.to_string(), num(c.margin), c.feasible.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the hub curve as `n,margin,feasible`.
pub fn write_curve_csv<W: Write>(curve: &[CurvePoint], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "margin", "feasible"])?;
    for p in curve {
        w.write_record([p.n.to_string(), num(p.margin), p.feasible.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
