//! Data behind the `A^(M)` curves and the `F(p1, y)` surface.
//!
//! | id | row `(P00, P01, P10, P11)`           | curves                     |
//! |----|--------------------------------------|----------------------------|
//! | 1  | `(0, beta, 1-beta, 0)`               | beta = 0.5, 0.4, 0.8       |
//! | 2  | `(alpha, b, b, 0)`, `b = (1-alpha)/2`| alpha = 0.4, 0.5, 0.6      |
//! | 3  | `(0, b, b, gamma)`, `b = (1-gamma)/2`| gamma = 0.6, 0.5, 0.4      |
//! | 4  | `(alpha, 0, 1-2alpha, alpha)`        | alpha = 0.2, 0.25, 0.3     |
//! | 5  | `(alpha, b, b, alpha)`, `b = 1/2-alpha` | alpha = 0.2, 0.25, 0.3  |
//! | 6  | `F(p1, y)` grid                      |                            |

use rayon::prelude::*;

use crate::engine::{coarse_grain_row, m_range, Method};
use crate::error::{Error, Result};
use crate::ic::{fig6_grid, grid_csv, GridSpec};
use crate::report::num;
use crate::voting::VotingRule;

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub row: [f64; 4],
}

/// The three curves of figures 1 to 5.
pub fn curves(id: u8) -> Result<Vec<Curve>> {
    let (name, vals, row): (&str, [f64; 3], fn(f64) -> [f64; 4]) = match id {
        1 => ("beta", [0.5, 0.4, 0.8], |b| [0.0, b, 1.0 - b, 0.0]),
        2 => ("alpha", [0.4, 0.5, 0.6], |a| {
            let b = (1.0 - a) / 2.0;
            [a, b, b, 0.0]
        }),
        3 => ("gamma", [0.6, 0.5, 0.4], |g| {
            let b = (1.0 - g) / 2.0;
            [0.0, b, b, g]
        }),
        4 => ("alpha", [0.2, 0.25, 0.3], |a| [a, 0.0, 1.0 - 2.0 * a, a]),
        5 => ("alpha", [0.2, 0.25, 0.3], |a| {
            let b = 0.5 - a;
            [a, b, b, a]
        }),
        _ => {
            return Err(Error::BadParams(format!(
                "curve figures are 1..=5, got {id}"
            )))
        }
    };
    Ok(vals
        .iter()
        .map(|&v| Curve {
            label: format!("{name}={v}"),
            row: row(v),
        })
        .collect())
}

pub fn default_m_values() -> Vec<usize> {
    m_range(2, 100, 2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub id: u8,
    pub labels: Vec<String>,
    pub m_values: Vec<usize>,
    /// `values[i][c]` is curve `c` at `m_values[i]`.
    pub values: Vec<Vec<f64>>,
}

impl FigureData {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("M");
        for l in &self.labels {
            s.push(',');
            s.push_str(l);
        }
        s.push('\n');
        for (m, row) in self.m_values.iter().zip(&self.values) {
            s.push_str(&m.to_string());
            for v in row {
                s.push(',');
                s.push_str(&num(*v));
            }
            s.push('\n');
        }
        s
    }
}

/// `A^(M) = P(01) + P(10)` of the majority-voted row for each curve.
pub fn curve_figure(id: u8, m_values: &[usize]) -> Result<FigureData> {
    let cs = curves(id)?;
    let values = m_values
        .par_iter()
        .map(|&m| {
            cs.iter()
                .map(|c| {
                    coarse_grain_row(c.row, m, VotingRule::Majority, Method::default())
                        .map(|r| r[1] + r[2])
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FigureData {
        id,
        labels: cs.into_iter().map(|c| c.label).collect(),
        m_values: m_values.to_vec(),
        values,
    })
}

/// CSV for any figure id; `m_values` is ignored for figure 6.
pub fn figure_csv(id: u8, m_values: &[usize]) -> Result<String> {
    match id {
        6 => Ok(grid_csv(&fig6_grid(GridSpec::default())?)),
        _ => Ok(curve_figure(id, m_values)?.to_csv()),
    }
}
