//! CSV writers. Numbers use 17 significant digits so values round-trip.

use crate::engine::TracePoint;
use crate::montecarlo::McTracePoint;

pub const TRACE_HEADER: &str = "M,I_chsh,A00,A01,A10,A11";
pub const MC_TRACE_HEADER: &str =
    "M,I_chsh,A00,A01,A10,A11,stderr_I_chsh,stderr_A00,stderr_A01,stderr_A10,stderr_A11";

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn trace_csv(points: &[TracePoint]) -> String {
    let mut s = format!("{TRACE_HEADER}\n");
    for p in points {
        s.push_str(&p.m.to_string());
        for v in std::iter::once(p.chsh).chain(p.a) {
            s.push(',');
            s.push_str(&num(v));
        }
        s.push('\n');
    }
    s
}

pub fn mc_trace_csv(points: &[McTracePoint]) -> String {
    let mut s = format!("{MC_TRACE_HEADER}\n");
    for p in points {
        s.push_str(&p.m.to_string());
        let vals = std::iter::once(p.chsh)
            .chain(p.a)
            .chain(std::iter::once(p.chsh_stderr))
            .chain(p.a_stderr);
        for v in vals {
            s.push(',');
            s.push_str(&num(v));
        }
        s.push('\n');
    }
    s
}
