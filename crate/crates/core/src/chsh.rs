//! CHSH evaluation and the eight facet relabelings.
//!
//! Facet `f` (0..8) is the canonical expression evaluated on the box relabeled
//! by `X -> X ^ bit2(f)`, `Y -> Y ^ bit1(f)` with Alice's output flipped when
//! `bit0(f)` is set. Facet 0 is `<00> + <01> + <10> - <11>`.

use serde::Serialize;

use crate::boxes::{outcome_index, setting_index, CorrelationBox, Relabeling};

pub const TSIRELSON: f64 = 2.0 * std::f64::consts::SQRT_2;
pub const LOCAL_BOUND: f64 = 2.0;

/// Ties between facet values closer than this pick the lower index.
const FACET_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Facet {
    pub index: usize,
    pub x_flip: u8,
    pub y_flip: u8,
    pub out_flip: u8,
}

impl Facet {
    pub const fn new(index: usize) -> Self {
        Facet {
            index,
            x_flip: ((index >> 2) & 1) as u8,
            y_flip: ((index >> 1) & 1) as u8,
            out_flip: (index & 1) as u8,
        }
    }

    pub fn relabeling(self) -> Relabeling {
        Relabeling {
            x_flip: self.x_flip,
            y_flip: self.y_flip,
            alice_out: [self.out_flip; 2],
            bob_out: [0, 0],
        }
    }

    /// Sign attached to each original correlator `<XY>` in this facet.
    pub fn signs(self) -> [f64; 4] {
        let global = if self.out_flip == 1 { -1.0 } else { 1.0 };
        let mut s = [global; 4];
        s[setting_index(1 ^ self.x_flip, 1 ^ self.y_flip)] *= -1.0;
        s
    }

    pub fn evaluate(self, b: &CorrelationBox) -> f64 {
        self.signs()
            .iter()
            .enumerate()
            .map(|(s, sign)| sign * b.correlator(s))
            .sum()
    }
}

pub const FACETS: [Facet; 8] = [
    Facet::new(0),
    Facet::new(1),
    Facet::new(2),
    Facet::new(3),
    Facet::new(4),
    Facet::new(5),
    Facet::new(6),
    Facet::new(7),
];

/// The nonlocal vertex reaching 4 on facet `f`.
pub fn pr_on_facet(f: usize) -> CorrelationBox {
    let facet = Facet::new(f);
    let mut t = [[0.0; 4]; 4];
    for x in 0..2u8 {
        for y in 0..2u8 {
            let parity = facet.out_flip ^ ((x ^ facet.x_flip) & (y ^ facet.y_flip));
            for a in 0..2u8 {
                t[setting_index(x, y)][outcome_index(a, a ^ parity)] = 0.5;
            }
        }
    }
    CorrelationBox::from_table_unchecked(t)
}

#[derive(Debug, Clone, Serialize)]
pub struct ChshReport {
    /// `|<00> + <01> + <10> - <11>|`.
    pub canonical_value: f64,
    /// Signed facet values in [`FACETS`] order.
    pub symmetrized_values: [f64; 8],
    pub max_violation: f64,
    /// Lowest-index facet attaining `max_violation`.
    pub best_facet: usize,
    /// `A_XY` in setting order 00, 01, 10, 11.
    pub a_coefficients: [f64; 4],
    pub correlators: [f64; 4],
}

/// Correlator form: `|<00> + <01> + <10> - <11>|`.
pub fn chsh_from_correlators(b: &CorrelationBox) -> f64 {
    (b.correlator(0) + b.correlator(1) + b.correlator(2) - b.correlator(3)).abs()
}

/// Anticorrelation form: `|2 + 2(A11 - A00 - A01 - A10)|`.
pub fn chsh_from_anticorrelations(b: &CorrelationBox) -> f64 {
    let a: Vec<f64> = (0..4).map(|s| b.anti_correlation(s)).collect();
    (2.0 + 2.0 * (a[3] - a[0] - a[1] - a[2])).abs()
}

pub fn chsh(b: &CorrelationBox) -> ChshReport {
    let canonical_value = chsh_from_correlators(b);
    debug_assert!((canonical_value - chsh_from_anticorrelations(b)).abs() < 1e-12);
    let mut symmetrized_values = [0.0; 8];
    for f in FACETS {
        symmetrized_values[f.index] = f.evaluate(b);
    }
    let (best_facet, max_violation) = argmax_facet(&symmetrized_values);
    ChshReport {
        canonical_value,
        symmetrized_values,
        max_violation,
        best_facet,
        a_coefficients: [0, 1, 2, 3].map(|s| b.anti_correlation(s)),
        correlators: [0, 1, 2, 3].map(|s| b.correlator(s)),
    }
}

fn argmax_facet(values: &[f64; 8]) -> (usize, f64) {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let idx = values
        .iter()
        .position(|&v| v >= max - FACET_TIE)
        .expect("non-empty");
    (idx, max)
}
