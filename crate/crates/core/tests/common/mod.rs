#![allow(dead_code)]

use nsmacro::boxes::all_local_vertices;
use nsmacro::chsh::pr_on_facet;
use nsmacro::{CorrelationBox, Table, EPS_PROB};
use rand::rngs::StdRng;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// The 16 local vertices followed by the 8 PR boxes.
pub fn ns_vertices() -> Vec<CorrelationBox> {
    let mut v = all_local_vertices();
    v.extend((0..8).map(pr_on_facet));
    v
}

/// Flat-Dirichlet mixture of between one and six distinct boxes from `pool`.
pub fn random_mixture(rng: &mut StdRng, pool: &[CorrelationBox]) -> CorrelationBox {
    let k = rng.gen_range(1..=6usize).min(pool.len());
    let idx = sample(rng, pool.len(), k);
    let raw: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    let mut t: Table = [[0.0; 4]; 4];
    for (w, i) in raw.iter().zip(idx.iter()) {
        for s in 0..4 {
            for c in 0..4 {
                t[s][c] += w / total * pool[i].table()[s][c];
            }
        }
    }
    CorrelationBox::new(t, EPS_PROB).expect("mixture of NS vertices")
}

/// Flat-Dirichlet mixture of all boxes in `pool`.
pub fn full_mixture(rng: &mut StdRng, pool: &[CorrelationBox]) -> CorrelationBox {
    let raw: Vec<f64> = pool.iter().map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    let mut t: Table = [[0.0; 4]; 4];
    for (w, v) in raw.iter().zip(pool) {
        for s in 0..4 {
            for c in 0..4 {
                t[s][c] += w / total * v.table()[s][c];
            }
        }
    }
    CorrelationBox::new(t, EPS_PROB).expect("mixture of NS vertices")
}

pub fn random_ns(rng: &mut StdRng) -> CorrelationBox {
    random_mixture(rng, &ns_vertices())
}

pub fn random_local(rng: &mut StdRng) -> CorrelationBox {
    random_mixture(rng, &all_local_vertices())
}

/// All 4^m outcome strings of one setting, voted by `zero(n0, m)` in {0, 1/2, 1}.
pub fn brute_force_row(row: [f64; 4], m: usize, zero: impl Fn(usize, usize) -> f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    for code in 0..4usize.pow(m as u32) {
        let mut c = code;
        let (mut prob, mut na0, mut nb0) = (1.0, 0, 0);
        for _ in 0..m {
            let o = c % 4;
            c /= 4;
            prob *= row[o];
            if o >> 1 == 0 {
                na0 += 1;
            }
            if o & 1 == 0 {
                nb0 += 1;
            }
        }
        let (wa, wb) = (zero(na0, m), zero(nb0, m));
        out[0] += prob * wa * wb;
        out[1] += prob * wa * (1.0 - wb);
        out[2] += prob * (1.0 - wa) * wb;
        out[3] += prob * (1.0 - wa) * (1.0 - wb);
    }
    out
}

pub fn majority(n0: usize, m: usize) -> f64 {
    if 2 * n0 >= m {
        1.0
    } else {
        0.0
    }
}

/// The eight CHSH expressions
/// `(-1)^o sum_XY (-1)^((X^x)(Y^y)) <XY>` for `(x, y, o)` in binary order.
pub fn facet_values(b: &CorrelationBox) -> [f64; 8] {
    let corr = |x: usize, y: usize| {
        let r = b.table()[2 * x + y];
        r[0] - r[1] - r[2] + r[3]
    };
    let mut v = [0.0; 8];
    for (f, slot) in v.iter_mut().enumerate() {
        let (xf, yf, of) = (f >> 2 & 1, f >> 1 & 1, f & 1);
        let mut s = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                let sign = if (x ^ xf) & (y ^ yf) == 1 { -1.0 } else { 1.0 };
                s += sign * corr(x, y);
            }
        }
        *slot = if of == 1 { -s } else { s };
    }
    v
}

pub fn max_facet(b: &CorrelationBox) -> f64 {
    facet_values(b).into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// `C(n, k) / 2^n` by a product that never overflows.
pub fn central_binomial_over_pow2(n: usize) -> f64 {
    let k = n / 2;
    let mut v = 1.0f64;
    let mut halvings = n;
    for i in 0..k {
        v *= (n - i) as f64 / (k - i) as f64;
        while v > 1.0 && halvings > 0 {
            v /= 2.0;
            halvings -= 1;
        }
    }
    v / 2f64.powi(halvings as i32)
}
