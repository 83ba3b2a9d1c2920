use serde::Serialize;

use crate::chsh::LOCAL_BOUND;
use crate::engine::TracePoint;
use crate::error::{Error, Result};

pub const DEFAULT_WINDOW: usize = 5;
pub const DEFAULT_TOL: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Limit {
    /// Tail of the trace stays at or below the local bound 2.
    MacroLocal,
    /// Tail of the trace sits at the algebraic maximum 4.
    MacroMaximal,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitLabel {
    pub label: Limit,
    pub trace: Vec<(usize, f64)>,
    pub final_value: f64,
}

/// Labels a CHSH trace by its last `window` values: `MacroLocal` if all are
/// `<= 2 + tol`, `MacroMaximal` if all are `>= 4 - tol`, else `Indeterminate`.
pub fn limit_classify(trace: &[TracePoint], window: usize, tol: f64) -> Result<LimitLabel> {
    if window == 0 || trace.len() < window {
        return Err(Error::TraceTooShort {
            len: trace.len(),
            window,
        });
    }
    let tail = &trace[trace.len() - window..];
    let label = if tail.iter().all(|p| p.chsh <= LOCAL_BOUND + tol) {
        Limit::MacroLocal
    } else if tail.iter().all(|p| p.chsh >= 4.0 - tol) {
        Limit::MacroMaximal
    } else {
        Limit::Indeterminate
    };
    Ok(LimitLabel {
        label,
        trace: trace.iter().map(|p| (p.m, p.chsh)).collect(),
        final_value: trace[trace.len() - 1].chsh,
    })
}
