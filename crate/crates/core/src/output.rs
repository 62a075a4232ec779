//! Text formats shared by the CLI: 6-significant-digit numbers and the CSV
//! layouts for sweeps and spectra.

use std::fmt::Write;

use crate::dynamics::SweepResult;
use crate::spectrum::SpectrumTrace;

/// Formats like C's `%.6g`.
pub fn fmt_sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // the exponent after rounding to 6 digits decides the style
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}"))
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// `x` rounded to 6 significant digits.
pub fn round_sig6(x: f64) -> f64 {
    if x.is_finite() {
        fmt_sig6(x).parse().unwrap_or(x)
    } else {
        x
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".into(), fmt_sig6)
}

/// Columns `t_prime,p_s,norm_drift`.
pub fn sweep_csv(sweep: &SweepResult) -> String {
    let mut out = String::from("t_prime,p_s,norm_drift\n");
    for p in &sweep.points {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_sig6(p.t_prime),
            opt(p.p_s),
            opt(p.norm_drift)
        );
    }
    out
}

/// Columns `s,level_0..level_{k-1}`.
pub fn spectrum_csv(trace: &SpectrumTrace) -> String {
    let mut out = String::from("s");
    for i in 0..trace.k {
        let _ = write!(out, ",level_{i}");
    }
    out.push('\n');
    for (s, lv) in trace.s_grid.iter().zip(&trace.levels) {
        out.push_str(&fmt_sig6(*s));
        match lv {
            Some(v) => v.iter().for_each(|x| {
                let _ = write!(out, ",{}", fmt_sig6(clean_zero(*x)));
            }),
            None => (0..trace.k).for_each(|_| out.push_str(",nan")),
        }
        out.push('\n');
    }
    out
}

/// Maps round-off residue such as `-3e-16` to zero so printed levels are
/// stable across platforms.
pub fn clean_zero(x: f64) -> f64 {
    if x.abs() < 1e-9 {
        0.0
    } else {
        x
    }
}

/// Recursively rounds every float in a JSON document to 6 significant
/// digits. Integers are left alone.
pub fn round_json(v: &mut serde_json::Value) {
    use serde_json::Value;
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig6(clean_zero(n.as_f64().expect("f64")));
            if let Some(r) = serde_json::Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_json),
        Value::Object(o) => o.values_mut().for_each(round_json),
        _ => {}
    }
}
