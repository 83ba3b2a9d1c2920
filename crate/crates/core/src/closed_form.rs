//! Closed-form sums for `A^(M) = P(01) + P(10)` of the coarse-grained setting
//! under majority voting, one per zero pattern of the single-copy row
//! `(alpha, beta, delta, gamma) = (P00, P01, P10, P11)`. `M` must be even;
//! `h = M/2` below.
//!
//! | case | row pattern                | sum                                                         |
//! |------|----------------------------|-------------------------------------------------------------|
//! | 1    | `(alpha, 0, 0, gamma)`     | 0                                                           |
//! | 2    | `(0, beta, delta, 0)`      | `(beta+delta)^M - C(M, h)(beta·delta)^h`                    |
//! | 3    | `(alpha, beta, delta, 0)`  | `k < h`, `j <= h-k-1`                                       |
//! | 4    | `(0, beta, delta, gamma)`  | `k <= h`, `j <= min(h-k, h-1)`                              |
//! | 5    | `(alpha, 0, delta, gamma)` | `k < h`, `j <= h-k`, plus the `n` tail when `k + j = h`     |
//! | 6    | `(alpha, beta, 0, gamma)`  | as case 5 with `beta` in place of `delta`                   |
//! | 7    | `(alpha, beta, delta, gamma)` | `k1 < h`, `k2 <= h`, `j <= min(h-1-k1, h-k2)`            |
//!
//! Cases 2, 4 and 7 fix the central coefficient and summation limits of the
//! forms usually quoted; those are kept in [`uncorrected_form`] (see also the
//! README). The general engine is the reference these sums are tested against.

use crate::boxes::EPS_PROB;
use crate::error::{Error, Result};
use crate::numeric::{ln_choose, ln_multinomial, CompensatedSum};

fn check(case: u8, row: [f64; 4], m: usize) -> Result<()> {
    if !(1..=7).contains(&case) {
        return Err(Error::BadParams(format!("case must be 1..=7, got {case}")));
    }
    if m == 0 {
        return Err(Error::ZeroCopies);
    }
    if m % 2 == 1 {
        return Err(Error::OddM(m));
    }
    if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::BadParams(format!("negative parameter in {row:?}")));
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > EPS_PROB {
        return Err(Error::BadParams(format!("parameters sum to {sum}")));
    }
    let zeros: &[usize] = match case {
        1 => &[1, 2],
        2 => &[0, 3],
        3 => &[3],
        4 => &[0],
        5 => &[1],
        6 => &[2],
        _ => &[],
    };
    if let Some(&z) = zeros.iter().find(|&&z| row[z] != 0.0) {
        return Err(Error::BadParams(format!(
            "case {case} requires P{} = 0, got {}",
            ["00", "01", "10", "11"][z],
            row[z]
        )));
    }
    Ok(())
}

struct Terms {
    m: usize,
    ln_p: [f64; 4],
    sum: CompensatedSum,
}

impl Terms {
    fn new(row: [f64; 4], m: usize) -> Self {
        Terms {
            m,
            ln_p: row.map(|p| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY }),
            sum: CompensatedSum::default(),
        }
    }

    /// Adds `M!/(k00! k01! k10! k11!) · prod p^k` with `0^0 = 1`.
    fn add(&mut self, k: [usize; 4]) {
        debug_assert_eq!(k.iter().sum::<usize>(), self.m);
        let mut s = ln_multinomial(self.m, k);
        for i in 0..4 {
            if k[i] > 0 {
                s += k[i] as f64 * self.ln_p[i];
            }
        }
        self.sum.add(s.exp());
    }

    fn value(&self) -> f64 {
        self.sum.value()
    }
}

/// `A^(M)` for the given case and single-copy row.
pub fn closed_form_case(case: u8, row: [f64; 4], m: usize) -> Result<f64> {
    check(case, row, m)?;
    let h = m / 2;
    let mut t = Terms::new(row, m);
    match case {
        1 => return Ok(0.0),
        2 => {
            for j in 0..h {
                t.add([0, m - j, j, 0]);
                t.add([0, j, m - j, 0]);
            }
        }
        3 => {
            for k in 0..h {
                for j in 0..h - k {
                    t.add([k, m - k - j, j, 0]);
                    t.add([k, j, m - k - j, 0]);
                }
            }
        }
        4 => {
            for k in 0..=h {
                for j in 0..=(h - k).min(h - 1) {
                    t.add([0, m - k - j, j, k]);
                    t.add([0, j, m - k - j, k]);
                }
            }
        }
        5 | 6 => {
            // case 5 places the free mass on P10, case 6 on P01
            let put = |k: usize, rest: usize, j: usize| {
                if case == 5 {
                    [k, 0, rest, j]
                } else {
                    [k, rest, 0, j]
                }
            };
            for k in 0..h {
                for j in 0..=h - k {
                    t.add(put(k, m - k - j, j));
                    if k + j == h {
                        for n in j + 1..=h {
                            t.add(put(k, m - k - n, n));
                        }
                    }
                }
            }
        }
        _ => {
            for k1 in 0..h {
                for k2 in 0..=h {
                    for j in 0..=(h - 1 - k1).min(h - k2) {
                        let rest = m - k1 - k2 - j;
                        t.add([k1, rest, j, k2]);
                        t.add([k1, j, rest, k2]);
                    }
                }
            }
        }
    }
    Ok(t.value())
}

/// `(beta + delta)^M - C(M, M/2)·(beta·delta)^(M/2)`.
pub fn case2_telescoped(beta: f64, delta: f64, m: usize) -> f64 {
    let h = m / 2;
    (beta + delta).powi(m as i32) - (ln_choose(m, h) + h as f64 * (beta * delta).ln()).exp()
}

/// Quoted forms that disagree with exact enumeration, kept so the
/// discrepancy stays reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UncorrectedForm {
    /// Case 2 with `M!/(M/2)!` in place of `C(M, M/2)`.
    Case2Factorial,
    /// Case 4 with the inner limit `j <= h-k-1`.
    Case4,
    /// Case 7 with the inner limit `j <= h-k1-k2-1` (and `k1! k2!`).
    Case7,
}

pub fn uncorrected_form(which: UncorrectedForm, row: [f64; 4], m: usize) -> Result<f64> {
    let case = match which {
        UncorrectedForm::Case2Factorial => 2,
        UncorrectedForm::Case4 => 4,
        UncorrectedForm::Case7 => 7,
    };
    check(case, row, m)?;
    let h = m / 2;
    let mut t = Terms::new(row, m);
    match which {
        UncorrectedForm::Case2Factorial => {
            let ln_coeff: f64 = (h + 1..=m).map(|k| (k as f64).ln()).sum();
            let (b, d) = (row[1], row[2]);
            return Ok((b + d).powi(m as i32) - (ln_coeff + h as f64 * (b * d).ln()).exp());
        }
        UncorrectedForm::Case4 => {
            for k in 0..=h {
                for j in 0..(h - k) {
                    t.add([0, m - k - j, j, k]);
                    t.add([0, j, m - k - j, k]);
                }
            }
        }
        UncorrectedForm::Case7 => {
            for k1 in 0..h {
                for k2 in 0..=h {
                    if k1 + k2 >= h {
                        continue;
                    }
                    for j in 0..(h - k1 - k2) {
                        let rest = m - k1 - k2 - j;
                        t.add([k1, rest, j, k2]);
                        t.add([k1, j, rest, k2]);
                    }
                }
            }
        }
    }
    Ok(t.value())
}
