//! Necessary condition for information causality, `E1^2 + E2^2 <= 1`, with
//!
//! ```text
//! Q1 = [P(a=b|00) + P(a=b|10)] / 2
//! Q2 = [P(a=b|01) + P(a!=b|11)] / 2
//! Ei = 2 Qi - 1
//! ```
//!
//! Passing the test does not make a box quantum.

use serde::Serialize;

use crate::boxes::{class_generator, ClassId, CorrelationBox, EPS_PROB};
use crate::chsh::FACETS;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IcReport {
    pub q1: f64,
    pub q2: f64,
    pub e1: f64,
    pub e2: f64,
    pub lhs: f64,
    pub satisfied: bool,
    /// Largest `lhs` over the eight facet relabelings of the box.
    pub lhs_relabel_max: f64,
    pub satisfied_relabel_max: bool,
}

fn equal(b: &CorrelationBox, s: usize) -> f64 {
    let r = b.row(s);
    r[0] + r[3]
}

fn raw_lhs(b: &CorrelationBox) -> (f64, f64, f64) {
    let q1 = 0.5 * (equal(b, 0) + equal(b, 2));
    let q2 = 0.5 * (equal(b, 1) + (1.0 - equal(b, 3)));
    let (e1, e2) = (2.0 * q1 - 1.0, 2.0 * q2 - 1.0);
    (q1, q2, e1 * e1 + e2 * e2)
}

pub fn ic_necessary(b: &CorrelationBox) -> IcReport {
    let (q1, q2, lhs) = raw_lhs(b);
    let lhs_relabel_max = FACETS
        .iter()
        .map(|f| raw_lhs(&b.relabel(f.relabeling())).2)
        .fold(lhs, f64::max);
    IcReport {
        q1,
        q2,
        e1: 2.0 * q1 - 1.0,
        e2: 2.0 * q2 - 1.0,
        lhs,
        satisfied: lhs <= 1.0 + EPS_PROB,
        lhs_relabel_max,
        satisfied_relabel_max: lhs_relabel_max <= 1.0 + EPS_PROB,
    }
}

/// `F(p1, y) = p1^2 - 2y + 2 p1 y + 2 y^2`; with `y = p3 + p5` this is
/// `p1^2 - 2(p3+p5)(p2+p4)` for the class-V mixture.
#[allow(non_snake_case)]
pub fn class_v_F(p1: f64, y: f64) -> Result<f64> {
    for (name, v) in [("p1", p1), ("y", y)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange {
                name,
                value: v,
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    Ok(p1 * p1 - 2.0 * y + 2.0 * p1 * y + 2.0 * y * y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridCell {
    pub p1: f64,
    pub y: f64,
    #[serde(rename = "F")]
    pub f: f64,
}

impl GridCell {
    pub fn passes(&self) -> bool {
        self.f <= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub p1_range: (f64, f64),
    pub y_range: (f64, f64),
    pub steps: (usize, usize),
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            p1_range: (0.0, std::f64::consts::SQRT_2 - 1.0),
            y_range: (0.0, 1.0),
            steps: (200, 200),
        }
    }
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Grid of `F`, row-major in `p1` then `y`, both axes including endpoints.
pub fn fig6_grid(spec: GridSpec) -> Result<Vec<GridCell>> {
    let ps = axis(spec.p1_range.0, spec.p1_range.1, spec.steps.0);
    let ys = axis(spec.y_range.0, spec.y_range.1, spec.steps.1);
    let mut out = Vec::with_capacity(ps.len() * ys.len());
    for &p1 in &ps {
        for &y in &ys {
            out.push(GridCell {
                p1,
                y,
                f: class_v_F(p1, y)?,
            });
        }
    }
    Ok(out)
}

pub fn grid_csv(cells: &[GridCell]) -> String {
    let mut s = String::from("p1,y,F\n");
    for c in cells {
        s.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", c.p1, c.y, c.f));
    }
    s
}

/// Compares the IC test on the class-V mixture with the sign of `F`.
/// Weights are `[p1, p2, p3, p4, p5]` with `p1` on the PR box.
pub fn cross_check_class_v(params: &[f64]) -> Result<(IcReport, f64)> {
    let cb = class_generator(ClassId::V, params, false)?;
    let report = ic_necessary(&cb.boxed);
    let y = (params[2] + params[4]).clamp(0.0, 1.0);
    let f = class_v_F(params[0], y)?;
    let diff = report.lhs - 1.0;
    let agrees = (diff - f).abs() <= EPS_PROB
        || (diff > EPS_PROB && f > 0.0)
        || (diff <= EPS_PROB && f <= EPS_PROB);
    if !agrees {
        return Err(Error::MismatchDetected {
            lhs_minus_one: diff,
            f,
        });
    }
    Ok((report, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::*;

    #[test]
    fn reference_boxes() {
        let r = ic_necessary(&pr_box());
        assert_eq!((r.q1, r.q2, r.lhs, r.satisfied), (1.0, 1.0, 2.0, false));
        let r = ic_necessary(&deterministic_vertex(1, 0).unwrap());
        assert_eq!((r.q1, r.q2, r.lhs, r.satisfied), (1.0, 0.5, 1.0, true));
        let r = ic_necessary(&uniform_box());
        assert_eq!((r.q1, r.q2, r.lhs, r.satisfied), (0.5, 0.5, 0.0, true));
    }

    #[test]
    fn f_values() {
        assert_eq!(class_v_F(0.0, 0.0).unwrap(), 0.0);
        assert!((class_v_F(0.4, 0.5).unwrap() - 0.06).abs() < 1e-15);
        assert!((class_v_F(0.41, 0.05).unwrap() - 0.1141).abs() < 1e-15);
        assert!(matches!(
            class_v_F(1.2, 0.0),
            Err(Error::OutOfRange { name: "p1", .. })
        ));
    }

    #[test]
    fn cross_check_examples() {
        let (r, f) = cross_check_class_v(&[0.4, 0.25, 0.05, 0.25, 0.05]).unwrap();
        assert!((r.e1 - 0.9).abs() < 1e-12 && (r.e2 - 0.5).abs() < 1e-12);
        assert!((r.lhs - 1.06).abs() < 1e-12 && (f - 0.06).abs() < 1e-12);
        let (r, f) = cross_check_class_v(&[0.1, 0.225, 0.225, 0.225, 0.225]).unwrap();
        assert!((r.lhs - 0.605).abs() < 1e-12 && f < 0.0);
        let (r, f) = cross_check_class_v(&[1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!((r.lhs, f), (2.0, 1.0));
    }

    #[test]
    fn default_grid_shape() {
        let g = fig6_grid(GridSpec::default()).unwrap();
        assert_eq!(g.len(), 40_000);
        assert!(g.iter().any(|c| c.p1 > 0.0 && c.passes()));
        assert!(g.iter().filter(|c| c.p1 == 0.0).all(|c| c.passes()));
        assert!(grid_csv(&g[..1]).starts_with("p1,y,F\n"));
    }
}
