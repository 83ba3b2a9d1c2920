//! Summation and binomial helpers shared by the exact engines and the sampler.

use statrs::function::factorial::{ln_binomial, ln_factorial};

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Probability mass function on a contiguous support `start..start+probs.len()`.
/// Entries that underflow to zero are trimmed from both ends.
#[derive(Debug, Clone)]
pub struct Pmf {
    pub start: usize,
    pub probs: Vec<f64>,
}

impl Pmf {
    pub fn point(k: usize) -> Self {
        Pmf {
            start: k,
            probs: vec![1.0],
        }
    }

    pub fn end(&self) -> usize {
        self.start + self.probs.len()
    }

    pub fn get(&self, k: usize) -> f64 {
        if k < self.start || k >= self.end() {
            0.0
        } else {
            self.probs[k - self.start]
        }
    }
}

/// `ln C(n,k) + k ln p + (n-k) ln(1-p)` for `0 < p < 1`.
pub fn ln_binomial_pmf(n: u64, k: u64, p: f64) -> f64 {
    ln_binomial(n, k) + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()
}

/// Binomial(n, p) mass, evaluated in log space at the mode and extended
/// outward by the ratio recurrence until it underflows. The result is
/// rescaled to unit total, which removes the rounding of `ln C(n, mode)`
/// shared by every term.
pub fn binomial_pmf(n: usize, p: f64) -> Pmf {
    let p = p.clamp(0.0, 1.0);
    if p == 0.0 || n == 0 {
        return Pmf::point(0);
    }
    if p == 1.0 {
        return Pmf::point(n);
    }
    let q = 1.0 - p;
    let mode = (((n + 1) as f64 * p).floor() as usize).min(n);
    let at_mode = ln_binomial_pmf(n as u64, mode as u64, p).exp();

    let mut below = Vec::new();
    let mut v = at_mode;
    let mut k = mode;
    while k > 0 {
        v *= k as f64 / (n - k + 1) as f64 * (q / p);
        if v == 0.0 {
            break;
        }
        k -= 1;
        below.push(v);
    }
    let start = mode - below.len();
    let mut probs: Vec<f64> = below.into_iter().rev().collect();
    probs.push(at_mode);
    let mut v = at_mode;
    let mut k = mode;
    while k < n {
        v *= (n - k) as f64 / (k + 1) as f64 * (p / q);
        if v == 0.0 {
            break;
        }
        k += 1;
        probs.push(v);
    }
    let mut total = CompensatedSum::default();
    for &v in &probs {
        total.add(v);
    }
    let total = total.value();
    for v in &mut probs {
        *v /= total;
    }
    Pmf { start, probs }
}

/// `ln(m! / (k0! k1! k2! k3!))`.
pub fn ln_multinomial(m: usize, k: [usize; 4]) -> f64 {
    ln_factorial(m as u64) - k.iter().map(|&x| ln_factorial(x as u64)).sum::<f64>()
}

/// `ln C(n, k)` as an f64.
pub fn ln_choose(n: usize, k: usize) -> f64 {
    ln_binomial(n as u64, k as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_beats_naive() {
        let mut s = CompensatedSum::default();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-15).abs() < 1e-30);
    }

    #[test]
    fn binomial_small_exact() {
        let pmf = binomial_pmf(4, 0.5);
        let expect = [1.0, 4.0, 6.0, 4.0, 1.0].map(|c| c / 16.0);
        for (k, e) in expect.iter().enumerate() {
            assert!((pmf.get(k) - e).abs() < 1e-15);
        }
        assert_eq!(binomial_pmf(7, 0.0).get(0), 1.0);
        assert_eq!(binomial_pmf(7, 1.0).get(7), 1.0);
    }

    #[test]
    fn binomial_large_normalized() {
        for &(n, p) in &[(10_000usize, 0.3), (1000, 1e-4), (500, 0.999)] {
            let pmf = binomial_pmf(n, p);
            let total: f64 = pmf.probs.iter().sum();
            assert!((total - 1.0).abs() < 1e-12, "n={n} p={p} total={total}");
            let mean: f64 = pmf
                .probs
                .iter()
                .enumerate()
                .map(|(i, v)| (pmf.start + i) as f64 * v)
                .sum();
            assert!((mean - n as f64 * p).abs() < 1e-8 * n as f64);
        }
    }

    #[test]
    fn multinomial_coefficient() {
        // 4!/(1!1!1!1!) = 24
        assert!((ln_multinomial(4, [1, 1, 1, 1]).exp() - 24.0).abs() < 1e-12);
        assert!((ln_choose(100, 50).exp() / 1.008_913_445_455_642e29 - 1.0).abs() < 1e-12);
    }
}
