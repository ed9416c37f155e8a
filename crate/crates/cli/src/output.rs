//! CSV writers.

use std::fmt::Write;

use btz_detector::probability::SweepPoint;
use btz_detector::spectrum::SpectrumSample;

pub const SWEEP_HEADER: &str = "sweep_coordinate,f1,f2,f12,p_plus,p_minus,singular_flag,error_estimate";
pub const SPECTRUM_HEADER: &str = "K,regular_part,singular_part,total";

const SIGNIFICANT: i32 = 12;

/// `v` with 12 significant digits: positional between 1e-5 and 1e15,
/// scientific otherwise.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-5..1e15).contains(&a) {
        return format!("{:.*e}", (SIGNIFICANT - 1) as usize, v);
    }
    let exp = a.log10().floor() as i32;
    let decimals = (SIGNIFICANT - 1 - exp).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // rounding up to the next power of ten adds a digit
    let digits = s.chars().filter(char::is_ascii_digit).collect::<String>();
    if digits.trim_start_matches('0').len() > SIGNIFICANT as usize && decimals > 0 {
        return format!("{:.*}", decimals - 1, v);
    }
    s
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for p in points {
        let cols = match &p.result {
            Ok(s) => vec![
                format_value(s.sweep_coordinate),
                format_value(s.f1),
                format_value(s.f2),
                format_value(s.f12),
                format_value(s.p_plus),
                format_value(s.p_minus),
                u8::from(s.singular).to_string(),
                format_value(s.error_estimate),
            ],
            Err(_) => std::iter::once(format_value(p.coordinate))
                .chain(std::iter::repeat("NaN".to_string()).take(7))
                .collect(),
        };
        let _ = writeln!(out, "{}", cols.join(","));
    }
    out
}

pub fn spectrum_csv(samples: &[SpectrumSample]) -> String {
    let mut out = String::from(SPECTRUM_HEADER);
    out.push('\n');
    for s in samples {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_value(s.k),
            format_value(s.regular_part),
            format_value(s.singular_part),
            format_value(s.total)
        );
    }
    out
}
