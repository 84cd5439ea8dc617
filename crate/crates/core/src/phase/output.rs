use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::{PhasePoint, Polyline};

pub const CSV_HEADER: &str = "x,y,p,q,r,phase,entropy_bits,holevo_bits,correlation";

/// `{"level": …, "polylines": [[[x, y], …], …]}`; `level` is null for phase boundaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolylineDocument {
    pub level: Option<f64>,
    pub polylines: Vec<Polyline>,
}

/// `x` with 12 significant digits, in the style of C's `%.12g`.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(points: &[PhasePoint], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            format_sig(p.x),
            format_sig(p.y),
            format_sig(p.p),
            format_sig(p.q),
            format_sig(p.r),
            p.phase.as_str(),
            format_sig(p.entropy_bits),
            format_sig(p.holevo_bits),
            format_sig(p.correlation),
        )?;
    }
    out.flush()
}
