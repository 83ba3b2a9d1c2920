use serde::Serialize;

use crate::boxes::{CorrelationBox, EPS_PROB};
use crate::chsh::{chsh, ChshReport};
use crate::engine::{m_range, macro_chsh_trace};
use crate::error::Result;
use crate::ic::{ic_necessary, IcReport};
use crate::limit::{limit_classify, LimitLabel, DEFAULT_TOL, DEFAULT_WINDOW};
use crate::polytope::{is_local, is_no_signaling, tsirelson_check, DecompositionCertificate};
use crate::voting::VotingRule;

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub m_values: Vec<usize>,
    pub rule: VotingRule,
    pub window: usize,
    pub tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            m_values: m_range(2, 200, 2),
            rule: VotingRule::Majority,
            window: DEFAULT_WINDOW,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub no_signaling: bool,
    pub local: bool,
    /// Certificate of the locality verdict.
    pub locality_certificate: DecompositionCertificate,
    /// `max_violation - 2` when positive.
    pub violation: f64,
    /// CHSH within the Tsirelson bound; necessary for a quantum box only.
    pub within_tsirelson: bool,
    /// Necessary condition of information causality.
    pub ic: IcReport,
    pub chsh: ChshReport,
    pub limit: LimitLabel,
}

pub fn classify(b: &CorrelationBox, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let ns = is_no_signaling(b.table(), EPS_PROB)?;
    let local = is_local(b, EPS_PROB)?;
    let report = chsh(b);
    let trace = macro_chsh_trace(b, &opts.m_values, opts.rule)?;
    Ok(ClassificationReport {
        no_signaling: ns.in_set,
        local: local.in_set,
        locality_certificate: local.certificate,
        violation: (report.max_violation - 2.0).max(0.0),
        within_tsirelson: tsirelson_check(b),
        ic: ic_necessary(b),
        chsh: report,
        limit: limit_classify(&trace, opts.window, opts.tol)?,
    })
}
