//! Exact macroscopic box of `M` independent copies under a voting rule.
//!
//! For one setting with row `p = (p00, p01, p10, p11)` the copy tallies
//! `(k00, k01, k10, k11)` are multinomial. Alice counts `n0 = k00 + k01`
//! zeros, Bob counts `n0 = k00 + k10`, and each side votes on its own count.
//!
//! Two evaluation orders of the same sum are provided:
//!
//! * [`Method::Compositions`] walks every composition of `M` into four parts
//!   with log-space multinomial weights, `O(M^3)` terms.
//! * [`Method::Factorized`] conditions on Alice's count `i ~ Bin(M, pA0)`.
//!   Bob's count is then `U + V` with `U ~ Bin(i, p00/pA0)` and
//!   `V ~ Bin(M-i, p10/pA1)`, and the voting rule only needs tail sums of
//!   `U + V`, giving `O(M^2)` work.
//!
//! Both partition their outer axis into fixed chunks and reduce the chunk
//! partials in order, so results do not depend on the rayon thread count.

use rayon::prelude::*;
use serde::Serialize;

use crate::boxes::{CorrelationBox, EPS_PROB};
use crate::chsh::chsh;
use crate::error::{Error, Result};
use crate::numeric::{binomial_pmf, ln_multinomial, CompensatedSum, Pmf};
use crate::voting::VotingRule;

const CHUNK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Method {
    #[default]
    Factorized,
    Compositions,
}

/// Coarse-grained distribution `P(ab|XY)` of one setting, in outcome order
/// 00, 01, 10, 11.
pub fn coarse_grain_setting(
    source: &CorrelationBox,
    m: usize,
    setting: usize,
    rule: VotingRule,
) -> Result<[f64; 4]> {
    coarse_grain_row(source.row(setting), m, rule, Method::default())
}

pub fn coarse_grain_row(row: [f64; 4], m: usize, rule: VotingRule, method: Method) -> Result<[f64; 4]> {
    let w = rule.weights(m)?;
    let row = row.map(|p| p.max(0.0));
    Ok(match method {
        Method::Factorized => factorized(row, m, &w),
        Method::Compositions => compositions(row, m, &w),
    })
}

fn reduce(parts: Vec<[CompensatedSum; 4]>) -> [f64; 4] {
    let mut acc = [CompensatedSum::default(); 4];
    for part in parts {
        for (a, p) in acc.iter_mut().zip(part) {
            a.merge(p);
        }
    }
    acc.map(|s| s.value())
}

fn chunks(n: usize) -> Vec<(usize, usize)> {
    (0..n.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(n)))
        .collect()
}

/// Routes probability mass `p` with side counts `(na, nb)` to macro outcomes.
#[inline]
fn route(acc: &mut [CompensatedSum; 4], p: f64, wa: f64, wb: f64) {
    if wa > 0.0 {
        if wb > 0.0 {
            acc[0].add(p * wa * wb);
        }
        if wb < 1.0 {
            acc[1].add(p * wa * (1.0 - wb));
        }
    }
    if wa < 1.0 {
        if wb > 0.0 {
            acc[2].add(p * (1.0 - wa) * wb);
        }
        if wb < 1.0 {
            acc[3].add(p * (1.0 - wa) * (1.0 - wb));
        }
    }
}

fn compositions(row: [f64; 4], m: usize, w: &[f64]) -> [f64; 4] {
    let ln_p = row.map(|p| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY });
    let term = |k: [usize; 4]| -> f64 {
        let mut s = ln_multinomial(m, k);
        for i in 0..4 {
            if k[i] > 0 {
                s += k[i] as f64 * ln_p[i];
            }
        }
        s.exp()
    };
    let parts: Vec<[CompensatedSum; 4]> = chunks(m + 1)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut acc = [CompensatedSum::default(); 4];
            for k00 in lo..hi {
                if k00 > 0 && row[0] == 0.0 {
                    break;
                }
                for k01 in 0..=m - k00 {
                    if k01 > 0 && row[1] == 0.0 {
                        break;
                    }
                    let wa = w[k00 + k01];
                    for k10 in 0..=m - k00 - k01 {
                        if k10 > 0 && row[2] == 0.0 {
                            break;
                        }
                        let k11 = m - k00 - k01 - k10;
                        if k11 > 0 && row[3] == 0.0 {
                            continue;
                        }
                        let p = term([k00, k01, k10, k11]);
                        route(&mut acc, p, wa, w[k00 + k10]);
                    }
                }
            }
            acc
        })
        .collect();
    reduce(parts)
}

/// Prefix (`P(V < s)`) and suffix (`P(V >= s)`) sums of a pmf over its support.
struct Tails {
    start: usize,
    head: Vec<f64>,
    tail: Vec<f64>,
}

impl Tails {
    fn new(pmf: &Pmf) -> Self {
        let n = pmf.probs.len();
        let mut head = vec![0.0; n + 1];
        for i in 0..n {
            head[i + 1] = head[i] + pmf.probs[i];
        }
        let mut tail = vec![0.0; n + 1];
        for i in (0..n).rev() {
            tail[i] = tail[i + 1] + pmf.probs[i];
        }
        Tails {
            start: pmf.start,
            head,
            tail,
        }
    }

    fn idx(&self, s: i64) -> usize {
        (s - self.start as i64).clamp(0, self.tail.len() as i64 - 1) as usize
    }

    /// `P(V >= s)`.
    fn at_least(&self, s: i64) -> f64 {
        self.tail[self.idx(s)]
    }

    /// `P(V < s)`.
    fn below(&self, s: i64) -> f64 {
        self.head[self.idx(s)]
    }
}

fn factorized(row: [f64; 4], m: usize, w: &[f64]) -> [f64; 4] {
    let pa0 = (row[0] + row[1]).min(1.0);
    let pa1 = row[2] + row[3];
    let q0 = if pa0 > 0.0 { row[0] / pa0 } else { 0.0 };
    let q1 = if pa1 > 0.0 { row[2] / pa1 } else { 0.0 };
    let alice = binomial_pmf(m, pa0);

    // Steps of the nondecreasing zero-weight function: w(s) = w(0) + sum dt [s >= t].
    let steps: Vec<(i64, f64)> = (1..=m)
        .filter_map(|t| {
            let d = w[t] - w[t - 1];
            (d != 0.0).then_some((t as i64, d))
        })
        .collect();
    debug_assert!(steps.iter().all(|&(_, d)| d > 0.0));
    let (w_lo, w_hi) = (w[0], w[m]);

    let parts: Vec<[CompensatedSum; 4]> = chunks(alice.probs.len())
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut acc = [CompensatedSum::default(); 4];
            for idx in lo..hi {
                let i = alice.start + idx;
                let pi = alice.probs[idx];
                let u = binomial_pmf(i, q0);
                let v = Tails::new(&binomial_pmf(m - i, q1));
                // E[w(nB)] and E[1 - w(nB)] given Alice's count i.
                let mut e0 = CompensatedSum::default();
                let mut e1 = CompensatedSum::default();
                e0.add(w_lo);
                e1.add(1.0 - w_hi);
                for &(t, d) in &steps {
                    let mut ge = CompensatedSum::default();
                    let mut lt = CompensatedSum::default();
                    for (j, pu) in u.probs.iter().enumerate() {
                        let s = t - (u.start + j) as i64;
                        ge.add(pu * v.at_least(s));
                        lt.add(pu * v.below(s));
                    }
                    e0.add(d * ge.value());
                    e1.add(d * lt.value());
                }
                let (e0, e1) = (e0.value(), e1.value());
                let wa = w[i];
                acc[0].add(pi * wa * e0);
                acc[1].add(pi * wa * e1);
                acc[2].add(pi * (1.0 - wa) * e0);
                acc[3].add(pi * (1.0 - wa) * e1);
            }
            acc
        })
        .collect();
    reduce(parts)
}

#[derive(Debug, Clone, Serialize)]
pub struct MacroBox {
    #[serde(rename = "box")]
    pub boxed: CorrelationBox,
    pub m: usize,
    pub rule: VotingRule,
    pub source: CorrelationBox,
}

pub fn macro_box(source: &CorrelationBox, m: usize, rule: VotingRule) -> Result<MacroBox> {
    macro_box_with(source, m, rule, Method::default())
}

pub fn macro_box_with(
    source: &CorrelationBox,
    m: usize,
    rule: VotingRule,
    method: Method,
) -> Result<MacroBox> {
    let rows: Vec<[f64; 4]> = (0..4)
        .map(|s| coarse_grain_row(source.row(s), m, rule, method))
        .collect::<Result<_>>()?;
    let table = [rows[0], rows[1], rows[2], rows[3]];
    Ok(MacroBox {
        boxed: CorrelationBox::new(table, EPS_PROB)?,
        m,
        rule,
        source: source.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub m: usize,
    /// Largest of the eight facet values of the macro box.
    pub chsh: f64,
    pub canonical: f64,
    /// `A_XY` of the macro box, settings 00, 01, 10, 11.
    pub a: [f64; 4],
}

impl TracePoint {
    pub fn of(m: usize, b: &CorrelationBox) -> Self {
        let r = chsh(b);
        TracePoint {
            m,
            chsh: r.max_violation,
            canonical: r.canonical_value,
            a: r.a_coefficients,
        }
    }
}

pub fn macro_chsh_trace(
    source: &CorrelationBox,
    m_values: &[usize],
    rule: VotingRule,
) -> Result<Vec<TracePoint>> {
    if m_values.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::BadParams("M values must be sorted ascending".into()));
    }
    m_values
        .par_iter()
        .map(|&m| macro_box(source, m, rule).map(|mb| TracePoint::of(m, &mb.boxed)))
        .collect()
}

/// `start, start+step, ..., <= end`.
pub fn m_range(start: usize, end: usize, step: usize) -> Vec<usize> {
    if step == 0 || start > end {
        return Vec::new();
    }
    (start..=end).step_by(step).collect()
}
