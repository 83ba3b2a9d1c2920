//! Seeded sampling estimate of the macroscopic box.
//!
//! Trials of each setting are split into fixed chunks of [`CHUNK_TRIALS`].
//! Chunk `c` of setting `s` draws from the Philox stream with key `seed` and
//! stream id `(s << 32) | c`, so the estimate does not depend on how chunks
//! are scheduled across threads. One experiment draws the tally
//! `(k00, k01, k10, k11)` by three sequential binomial conditionals, then
//! votes on each side (a tie under a fair-coin policy takes one more uniform).

use rayon::prelude::*;
use serde::Serialize;

use crate::boxes::CorrelationBox;
use crate::chsh::FACETS;
use crate::error::{Error, Result};
use crate::numeric::ln_binomial_pmf;
use crate::philox::PhiloxStream;
use crate::voting::VotingRule;

pub const CHUNK_TRIALS: u64 = 4096;

/// Binomial(n, p) by inversion, visiting outcomes from the mode outward
/// (mode, mode-1, mode+1, mode-2, ...).
pub fn sample_binomial(n: u64, p: f64, rng: &mut PhiloxStream) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    let q = 1.0 - p;
    let mode = (((n + 1) as f64 * p).floor() as u64).min(n);
    let pm = ln_binomial_pmf(n, mode, p).exp();
    let mut u = rng.next_f64();
    if u < pm {
        return mode;
    }
    u -= pm;
    let (mut lo, mut hi) = (mode, mode);
    let (mut plo, mut phi) = (pm, pm);
    loop {
        let mut moved = false;
        if lo > 0 {
            plo *= lo as f64 / (n - lo + 1) as f64 * (q / p);
            lo -= 1;
            moved = true;
            if u < plo {
                return lo;
            }
            u -= plo;
        }
        if hi < n {
            phi *= (n - hi) as f64 / (hi + 1) as f64 * (p / q);
            hi += 1;
            moved = true;
            if u < phi {
                return hi;
            }
            u -= phi;
        }
        // Leftover mass from rounding, or both tails underflowed.
        if !moved || (plo == 0.0 && phi == 0.0) {
            return mode;
        }
    }
}

fn vote(w: f64, rng: &mut PhiloxStream) -> usize {
    if w >= 1.0 {
        0
    } else if w <= 0.0 {
        1
    } else if rng.next_f64() < w {
        0
    } else {
        1
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        (num / den).min(1.0)
    } else {
        0.0
    }
}

fn sample_chunk(row: [f64; 4], m: u64, weights: &[f64], n: u64, rng: &mut PhiloxStream) -> [u64; 4] {
    let row = row.map(|p| p.max(0.0));
    let c01 = ratio(row[1], row[1] + row[2] + row[3]);
    let c10 = ratio(row[2], row[2] + row[3]);
    let mut counts = [0u64; 4];
    for _ in 0..n {
        let k00 = sample_binomial(m, row[0], rng);
        let rest = m - k00;
        let k01 = sample_binomial(rest, c01, rng);
        let k10 = sample_binomial(rest - k01, c10, rng);
        let a = vote(weights[(k00 + k01) as usize], rng);
        let b = vote(weights[(k00 + k10) as usize], rng);
        counts[2 * a + b] += 1;
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub m: usize,
    pub counts: [[u64; 4]; 4],
    pub macro_distribution: [[f64; 4]; 4],
    /// `sqrt(p(1-p)/trials)` per cell.
    pub stderr: [[f64; 4]; 4],
    pub trials: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `A_XY = P(01) + P(10)` per setting.
    pub fn a_coefficients(&self) -> [f64; 4] {
        self.macro_distribution.map(|r| r[1] + r[2])
    }

    pub fn a_stderr(&self) -> [f64; 4] {
        let n = self.trials as f64;
        self.a_coefficients().map(|a| (a * (1.0 - a) / n).sqrt())
    }
}

pub fn sample_macro(
    source: &CorrelationBox,
    m: usize,
    rule: VotingRule,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::BadParams("trials must be at least 1".into()));
    }
    let weights = rule.weights(m)?;
    let n_chunks = trials.div_ceil(CHUNK_TRIALS);
    let mut counts = [[0u64; 4]; 4];
    for (s, row_counts) in counts.iter_mut().enumerate() {
        let row = source.row(s);
        let parts: Vec<[u64; 4]> = (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let n = CHUNK_TRIALS.min(trials - c * CHUNK_TRIALS);
                let mut rng = PhiloxStream::new(seed, (s as u64) << 32 | c);
                sample_chunk(row, m as u64, &weights, n, &mut rng)
            })
            .collect();
        for p in parts {
            for k in 0..4 {
                row_counts[k] += p[k];
            }
        }
    }
    let n = trials as f64;
    let macro_distribution = counts.map(|r| r.map(|c| c as f64 / n));
    let stderr = macro_distribution.map(|r| r.map(|p| (p * (1.0 - p) / n).sqrt()));
    Ok(McEstimate {
        m,
        counts,
        macro_distribution,
        stderr,
        trials,
        seed,
    })
}

/// Largest facet CHSH value of the sampled box, with a delta-method standard
/// error `sqrt(sum_XY 4·A_XY(1-A_XY)/trials)`.
pub fn chsh_estimate(est: &McEstimate) -> (f64, f64) {
    let a = est.a_coefficients();
    let corr = a.map(|x| 1.0 - 2.0 * x);
    let mut best = f64::NEG_INFINITY;
    for f in FACETS {
        let v: f64 = f.signs().iter().zip(&corr).map(|(s, e)| s * e).sum();
        if v > best + 1e-12 {
            best = v;
        }
    }
    let var: f64 = a
        .iter()
        .map(|x| 4.0 * x * (1.0 - x) / est.trials as f64)
        .sum();
    (best, var.sqrt())
}

pub fn mc_chsh(
    source: &CorrelationBox,
    m: usize,
    rule: VotingRule,
    trials: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    Ok(chsh_estimate(&sample_macro(source, m, rule, trials, seed)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McTracePoint {
    pub m: usize,
    pub chsh: f64,
    pub chsh_stderr: f64,
    pub a: [f64; 4],
    pub a_stderr: [f64; 4],
}

/// One sampled estimate per `M`, each with the same seed.
pub fn mc_trace(
    source: &CorrelationBox,
    m_values: &[usize],
    rule: VotingRule,
    trials: u64,
    seed: u64,
) -> Result<Vec<McTracePoint>> {
    m_values
        .iter()
        .map(|&m| {
            let est = sample_macro(source, m, rule, trials, seed)?;
            let (chsh, chsh_stderr) = chsh_estimate(&est);
            Ok(McTracePoint {
                m,
                chsh,
                chsh_stderr,
                a: est.a_coefficients(),
                a_stderr: est.a_stderr(),
            })
        })
        .collect()
}
