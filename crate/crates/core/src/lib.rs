//! No-signaling boxes in the 2-2-2 scenario and their behaviour under
//! majority-vote coarse-graining of many independent copies.
//!
//! The crate covers box validation and constructors, CHSH evaluation over all
//! eight facets, local and no-signaling polytope membership by linear
//! programming, the exact macroscopic box for `M` copies, a seeded sampler for
//! very large `M`, and the information-causality necessary test.

pub mod boxes;
pub mod chsh;
pub mod classify;
pub mod closed_form;
pub mod engine;
pub mod error;
pub mod exact;
pub mod figures;
pub mod ic;
pub mod limit;
pub mod lp;
pub mod montecarlo;
pub mod numeric;
pub mod philox;
pub mod polytope;
pub mod report;
pub mod voting;

pub use boxes::{
    class_generator, deterministic_vertex, local_vertices, mix, pr_box, uniform_box, ClassBox,
    ClassId, Component, CorrelationBox, LocalVertex, MixtureSpec, Relabeling, Table, EPS_PROB,
};
pub use chsh::{chsh, ChshReport, Facet, FACETS};
pub use classify::{classify, ClassificationReport, ClassifyOptions};
pub use closed_form::closed_form_case;
pub use engine::{coarse_grain_setting, macro_box, macro_chsh_trace, MacroBox, Method, TracePoint};
pub use error::{Error, Result};
pub use ic::{class_v_F, cross_check_class_v, fig6_grid, ic_necessary, IcReport};
pub use limit::{limit_classify, Limit, LimitLabel};
pub use montecarlo::{mc_chsh, sample_macro, McEstimate};
pub use polytope::{
    decompose_ns, is_local, is_no_signaling, tsirelson_check, CertificateKind,
    DecompositionCertificate, MembershipVerdict,
};
pub use voting::{TiePolicy, VotingRule};
