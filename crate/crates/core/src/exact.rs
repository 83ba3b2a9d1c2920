//! Exact rational coarse-graining for boxes with rational entries.
//!
//! Every row is brought to a common denominator `D`, so each composition
//! contributes an integer `multinomial · prod N_i^k_i` over `D^M`. Only
//! integer arithmetic happens inside the sum.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::boxes::{setting_index, CorrelationBox, EPS_PROB};
use crate::error::{Error, Result};
use crate::voting::VotingRule;

/// Largest copy count accepted by the exact mode.
pub const MAX_EXACT_M: usize = 60;

pub type RationalRow = [BigRational; 4];

#[derive(Debug, Clone, PartialEq)]
pub struct RationalBox {
    rows: [RationalRow; 4],
}

impl RationalBox {
    /// Validates positivity, normalization and no-signaling exactly.
    pub fn new(rows: [RationalRow; 4]) -> Result<Self> {
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if v.is_negative() {
                    return Err(Error::NegativeEntry {
                        row: r,
                        col: c,
                        value: v.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
            let sum: BigRational = row.iter().cloned().sum();
            if !sum.is_one() {
                return Err(Error::RowNotNormalized {
                    row: r,
                    setting: crate::boxes::SETTING_LABELS[r],
                    sum: sum.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        for i in 0..2u8 {
            let a = |y: u8| {
                let row = &rows[setting_index(i, y)];
                &row[0] + &row[1]
            };
            let b = |x: u8| {
                let row = &rows[setting_index(x, i)];
                &row[0] + &row[2]
            };
            for (party, lhs, rhs) in [
                (crate::boxes::Party::Alice, a(0), a(1)),
                (crate::boxes::Party::Bob, b(0), b(1)),
            ] {
                if lhs != rhs {
                    return Err(Error::SignalingDetected {
                        party,
                        input: i,
                        deviation: (lhs - rhs).abs().to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        Ok(RationalBox { rows })
    }

    /// Exact rational image of a float box (every finite double is rational).
    pub fn from_box(b: &CorrelationBox) -> Result<Self> {
        let conv = |x: f64| BigRational::from_float(x).expect("finite entry");
        let rows = b.table().map(|row| row.map(conv));
        RationalBox::new(rows)
    }

    pub fn rows(&self) -> &[RationalRow; 4] {
        &self.rows
    }

    pub fn to_box(&self) -> Result<CorrelationBox> {
        let t = self.rows.clone().map(|r| r.map(|v| to_f64(&v)));
        CorrelationBox::new(t, EPS_PROB)
    }
}

pub fn to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn pascal(m: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for n in 1..=m {
        let prev = &rows[n - 1];
        let mut row = vec![BigUint::one(); n + 1];
        for k in 1..n {
            row[k] = &prev[k - 1] + &prev[k];
        }
        rows.push(row);
    }
    rows
}

/// Exact coarse-grained distribution of one row, outcome order 00, 01, 10, 11.
pub fn coarse_grain_exact(row: &RationalRow, m: usize, rule: VotingRule) -> Result<RationalRow> {
    if m > MAX_EXACT_M {
        return Err(Error::BadParams(format!(
            "exact mode supports M <= {MAX_EXACT_M}, got {m}"
        )));
    }
    // zero weights doubled: 0, 1 or 2
    let w2: Vec<u32> = rule
        .weights(m)?
        .iter()
        .map(|w| (2.0 * w).round() as u32)
        .collect();

    let denom = row
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let nums: Vec<BigUint> = row
        .iter()
        .map(|v| {
            (v.numer() * (&denom / v.denom()))
                .to_biguint()
                .expect("non-negative entry")
        })
        .collect();
    let powers: Vec<Vec<BigUint>> = nums
        .iter()
        .map(|n| {
            let mut p = vec![BigUint::one()];
            for k in 1..=m {
                let next = &p[k - 1] * n;
                p.push(next);
            }
            p
        })
        .collect();
    let binom = pascal(m);

    let mut acc: [BigUint; 4] = Default::default();
    for k00 in 0..=m {
        if k00 > 0 && nums[0].is_zero() {
            break;
        }
        let c0 = &binom[m][k00] * &powers[0][k00];
        for k01 in 0..=m - k00 {
            if k01 > 0 && nums[1].is_zero() {
                break;
            }
            let c1 = &c0 * &binom[m - k00][k01] * &powers[1][k01];
            let wa = w2[k00 + k01];
            for k10 in 0..=m - k00 - k01 {
                if k10 > 0 && nums[2].is_zero() {
                    break;
                }
                let k11 = m - k00 - k01 - k10;
                if k11 > 0 && nums[3].is_zero() {
                    continue;
                }
                let term = &c1 * &binom[m - k00 - k01][k10] * &powers[2][k10] * &powers[3][k11];
                let wb = w2[k00 + k10];
                let parts = [wa * wb, wa * (2 - wb), (2 - wa) * wb, (2 - wa) * (2 - wb)];
                for (a, f) in acc.iter_mut().zip(parts) {
                    if f > 0 {
                        *a += &term * f;
                    }
                }
            }
        }
    }
    let total = BigInt::from(4u32) * num_traits::pow(denom, m);
    Ok(acc.map(|a| BigRational::new(BigInt::from(a), total.clone())))
}

pub fn macro_box_exact(source: &RationalBox, m: usize, rule: VotingRule) -> Result<RationalBox> {
    let rows: Vec<RationalRow> = source
        .rows
        .iter()
        .map(|r| coarse_grain_exact(r, m, rule))
        .collect::<Result<_>>()?;
    let rows: [RationalRow; 4] = rows.try_into().expect("four rows");
    RationalBox::new(rows)
}
