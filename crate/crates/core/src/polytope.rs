//! Membership in the local polytope L and the no-signaling polytope NS.
//!
//! Both linear programs work in the eight affine coordinates of the NS
//! subspace, `(<A0>, <A1>, <B0>, <B1>, <00>, <01>, <10>, <11>)`, plus the
//! normalization row. On NS boxes this is equivalent to matching all sixteen
//! table entries, and the constraint matrix has full row rank.

use indexmap::IndexMap;
use serde::Serialize;

use crate::boxes::{local_vertices, ConstraintReport, CorrelationBox, Table, EPS_PROB};
use crate::chsh::{chsh, pr_on_facet, LOCAL_BOUND, TSIRELSON};
use crate::error::{Error, Result};
use crate::lp::{solve, LinearProgram, LpStatus, SimplexOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertificateKind {
    LocalDecomposition,
    NsDecomposition,
    FacetViolation,
    /// The raw table breaks positivity, normalization or no-signaling.
    ConstraintViolation,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionCertificate {
    pub kind: CertificateKind,
    /// Vertex name to weight, in vertex enumeration order. Empty for violations.
    pub weights: IndexMap<String, f64>,
    /// CHSH facet of the PR term (NS decompositions) or the violated facet.
    pub facet: Option<usize>,
    pub violation: Option<f64>,
    /// Max entry-wise distance between the weighted vertices and the input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reconstruction_error: Option<f64>,
}

impl DecompositionCertificate {
    pub fn weight(&self, name: &str) -> f64 {
        self.weights.get(name).copied().unwrap_or(0.0)
    }

    /// Weight of the nonlocal term of an NS decomposition.
    pub fn pr_weight(&self) -> f64 {
        self.weights
            .iter()
            .filter(|(k, _)| k.starts_with("PR_"))
            .map(|(_, w)| *w)
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MembershipVerdict {
    pub in_set: bool,
    pub certificate: DecompositionCertificate,
    pub tolerance_used: f64,
}

fn coordinates(b: &CorrelationBox) -> [f64; 9] {
    [
        b.alice_mean(0),
        b.alice_mean(1),
        b.bob_mean(0),
        b.bob_mean(1),
        b.correlator(0),
        b.correlator(1),
        b.correlator(2),
        b.correlator(3),
        1.0,
    ]
}

fn constraint_matrix(columns: &[CorrelationBox]) -> Vec<Vec<f64>> {
    let coords: Vec<[f64; 9]> = columns.iter().map(coordinates).collect();
    (0..9)
        .map(|row| coords.iter().map(|c| c[row]).collect())
        .collect()
}

fn reconstruct(columns: &[CorrelationBox], weights: &[f64]) -> Table {
    let mut t = [[0.0; 4]; 4];
    for (b, w) in columns.iter().zip(weights) {
        for r in 0..4 {
            for c in 0..4 {
                t[r][c] += w * b.table()[r][c];
            }
        }
    }
    t
}

fn reconstruction_error(target: &CorrelationBox, columns: &[CorrelationBox], w: &[f64]) -> f64 {
    let rec = CorrelationBox::from_table_unchecked(reconstruct(columns, w));
    rec.max_abs_diff(target)
}

fn violation_certificate(b: &CorrelationBox) -> Option<DecompositionCertificate> {
    let report = chsh(b);
    let excess = report.max_violation - LOCAL_BOUND;
    (excess > 0.0).then(|| DecompositionCertificate {
        kind: CertificateKind::FacetViolation,
        weights: IndexMap::new(),
        facet: Some(report.best_facet),
        violation: Some(excess),
        reconstruction_error: None,
    })
}

/// Checks positivity, normalization and no-signaling of a raw table. On
/// success the certificate is the minimal-PR-weight NS decomposition.
pub fn is_no_signaling(table: &Table, tol: f64) -> Result<MembershipVerdict> {
    let rep = ConstraintReport::of(table);
    let finite = table.iter().flatten().all(|v| v.is_finite());
    let worst = rep.range.0.max(rep.normalization.0).max(rep.signaling.0);
    if !finite || worst > tol {
        return Ok(MembershipVerdict {
            in_set: false,
            certificate: DecompositionCertificate {
                kind: CertificateKind::ConstraintViolation,
                weights: IndexMap::new(),
                facet: None,
                violation: Some(if finite { worst } else { f64::INFINITY }),
                reconstruction_error: None,
            },
            tolerance_used: tol,
        });
    }
    let b = CorrelationBox::new(*table, tol)?;
    Ok(MembershipVerdict {
        in_set: true,
        certificate: decompose_ns_with_tol(&b, tol)?,
        tolerance_used: tol,
    })
}

/// Decides membership in L by a feasibility program over the sixteen local
/// vertices. Infeasible boxes get the most violated CHSH facet as certificate.
pub fn is_local(b: &CorrelationBox, tol: f64) -> Result<MembershipVerdict> {
    let verts = local_vertices();
    let columns: Vec<CorrelationBox> = verts.iter().map(|v| v.to_box()).collect();
    let lp = LinearProgram {
        a: constraint_matrix(&columns),
        b: coordinates(b).to_vec(),
        c: vec![0.0; columns.len()],
    };
    let opts = SimplexOptions {
        feas_tol: tol,
        ..Default::default()
    };
    match solve(&lp, opts)? {
        LpStatus::Optimal { x, .. } => {
            let weights = verts.iter().map(|v| v.name()).zip(x.iter().copied()).collect();
            Ok(MembershipVerdict {
                in_set: true,
                certificate: DecompositionCertificate {
                    kind: CertificateKind::LocalDecomposition,
                    weights,
                    facet: None,
                    violation: None,
                    reconstruction_error: Some(reconstruction_error(b, &columns, &x)),
                },
                tolerance_used: tol,
            })
        }
        LpStatus::Infeasible { residual } => match violation_certificate(b) {
            Some(certificate) => Ok(MembershipVerdict {
                in_set: false,
                certificate,
                tolerance_used: tol,
            }),
            None => Err(Error::LpNumericalFailure(format!(
                "locality program infeasible (residual {residual:e}) yet no CHSH facet is violated"
            ))),
        },
        LpStatus::Unbounded => Err(Error::LpNumericalFailure(
            "feasibility program reported unbounded".into(),
        )),
    }
}

/// Writes the box as local vertices plus one PR term on its most violated
/// facet (the canonical PR box when none is violated), minimizing the PR weight.
pub fn decompose_ns(b: &CorrelationBox) -> Result<DecompositionCertificate> {
    decompose_ns_with_tol(b, EPS_PROB)
}

fn decompose_ns_with_tol(b: &CorrelationBox, ns_tol: f64) -> Result<DecompositionCertificate> {
    let sig = ConstraintReport::of(b.table()).signaling.0;
    if sig > ns_tol {
        return Err(Error::NotNoSignaling { deviation: sig });
    }
    let report = chsh(b);
    let facet = if report.max_violation > LOCAL_BOUND {
        report.best_facet
    } else {
        0
    };
    let verts = local_vertices();
    let mut columns: Vec<CorrelationBox> = verts.iter().map(|v| v.to_box()).collect();
    columns.push(pr_on_facet(facet));
    let mut c = vec![0.0; columns.len()];
    c[16] = 1.0;
    let lp = LinearProgram {
        a: constraint_matrix(&columns),
        b: coordinates(b).to_vec(),
        c,
    };
    match solve(&lp, SimplexOptions::default())? {
        LpStatus::Optimal { x, .. } => {
            let mut weights: IndexMap<String, f64> =
                verts.iter().map(|v| v.name()).zip(x.iter().copied()).collect();
            weights.insert(format!("PR_{facet}"), x[16]);
            Ok(DecompositionCertificate {
                kind: CertificateKind::NsDecomposition,
                weights,
                facet: Some(facet),
                violation: None,
                reconstruction_error: Some(reconstruction_error(b, &columns, &x)),
            })
        }
        other => Err(Error::LpNumericalFailure(format!(
            "NS decomposition program returned {other:?}"
        ))),
    }
}

/// Necessary condition for a quantum realization: CHSH at most `2·sqrt(2)`.
pub fn tsirelson_check(b: &CorrelationBox) -> bool {
    chsh(b).max_violation <= TSIRELSON + EPS_PROB
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::EPS_LP;
    use crate::boxes::*;

    #[test]
    fn vertex_is_local_with_unit_weight() {
        let d = deterministic_vertex(3, 1).unwrap();
        let v = is_local(&d, EPS_LP).unwrap();
        assert!(v.in_set);
        assert!((v.certificate.weight("D3_1") - 1.0).abs() < 1e-12);
        assert!(v.certificate.reconstruction_error.unwrap() < 1e-12);
    }

    #[test]
    fn pr_is_nonlocal() {
        let v = is_local(&pr_box(), EPS_LP).unwrap();
        assert!(!v.in_set);
        assert_eq!(v.certificate.kind, CertificateKind::FacetViolation);
        assert_eq!(v.certificate.facet, Some(0));
        assert!((v.certificate.violation.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn isotropic_half_is_on_boundary() {
        let b = mix(&MixtureSpec::new()
            .with(0.5, Component::Pr(0))
            .with(0.5, Component::Box(uniform_box())))
        .unwrap();
        assert!((chsh(&b).canonical_value - 2.0).abs() < 1e-15);
        assert!(is_local(&b, EPS_LP).unwrap().in_set);
    }

    #[test]
    fn ns_decompositions() {
        let d = decompose_ns(&pr_box()).unwrap();
        assert!((d.weight("PR_0") - 1.0).abs() < 1e-12);
        assert!(d.weights.values().filter(|w| **w > 1e-12).count() == 1);

        let c = class_generator(ClassId::I, &[0.6], true).unwrap();
        let d = decompose_ns(&c.boxed).unwrap();
        assert!((d.pr_weight() - 0.6).abs() < 1e-10);
        assert!((d.weight("D1_0") - 0.4).abs() < 1e-10);

        let local = mix(&MixtureSpec::new()
            .with(0.3, Component::Local(LocalVertex::from_family(2, 1).unwrap()))
            .with(0.7, Component::Box(uniform_box())))
        .unwrap();
        assert!(decompose_ns(&local).unwrap().pr_weight().abs() < 1e-12);
    }

    #[test]
    fn signaling_table_rejected() {
        let mut t = *deterministic_vertex(1, 0).unwrap().table();
        t[1] = [0.0, 0.0, 1.0, 0.0];
        let v = is_no_signaling(&t, EPS_PROB).unwrap();
        assert!(!v.in_set);
        assert_eq!(v.certificate.kind, CertificateKind::ConstraintViolation);
        assert!(v.certificate.violation.unwrap() > 0.5);

        let v = is_no_signaling(pr_box().table(), EPS_PROB).unwrap();
        assert!(v.in_set);
        for d in all_local_vertices() {
            assert!(is_no_signaling(d.table(), EPS_PROB).unwrap().in_set);
        }
    }

    #[test]
    fn tsirelson() {
        assert!(!tsirelson_check(&pr_box()));
        assert!(tsirelson_check(&deterministic_vertex(1, 0).unwrap()));
        let c = class_generator(ClassId::V, &[0.41, 0.1475, 0.1475, 0.1475, 0.1475], true).unwrap();
        assert!(tsirelson_check(&c.boxed));
    }

    #[test]
    fn certificate_json_shape() {
        let d = decompose_ns(&pr_box()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&d.to_json()).unwrap();
        assert_eq!(v["kind"], "NsDecomposition");
        assert_eq!(v["facet"], 0);
        assert!(v["weights"]["D1_0"].is_number());
        assert!(v["weights"]["PR_0"].is_number());
        assert!(v["violation"].is_null());
    }
}
