//! Small numerical helpers shared by the distribution and estimation code.

use statrs::function::gamma::ln_gamma;

/// Neumaier-compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Compensated sum of an iterator of values.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(values);
    acc.value()
}

/// `log(sum(exp(x)))` with the usual max shift. Empty input or all `-inf` gives `-inf`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + values.iter().map(|&x| (x - max).exp()).sum::<f64>().ln()
}

/// `(1 - p)^m` evaluated as `exp(m * log1p(-p))`.
#[inline]
pub fn pow_complement(p: f64, m: u64) -> f64 {
    (m as f64 * (-p).ln_1p()).exp()
}

/// `1 - (1 - p)^m` evaluated as `-expm1(m * log1p(-p))`.
#[inline]
pub fn one_minus_pow_complement(p: f64, m: u64) -> f64 {
    -(m as f64 * (-p).ln_1p()).exp_m1()
}

/// Log of the Poisson probability `lambda^k e^{-lambda} / k!`.
pub fn ln_poisson_pmf(k: u64, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    k as f64 * lambda.ln() - lambda - ln_gamma(k as f64 + 1.0)
}

/// Binomial coefficients `C(n, k)` for `0 <= k <= n <= max_n`, as `f64`.
///
/// Exact for `max_n <= 56`, which covers every use in the exact module.
pub fn binomial_table(max_n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let mut row = vec![1.0; n + 1];
        for k in 1..n {
            row[k] = rows[n - 1][k - 1] + rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// Stops when the bracket is narrower than `tol`; returns the best point
/// evaluated, including the endpoints.
pub fn golden_section_max<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> (f64, f64) {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut best = (a, f(a));
    let fb = f(b);
    if fb > best.1 {
        best = (b, fb);
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        for (x, fx) in [(c, fc), (d, fd)] {
            if fx > best.1 {
                best = (x, fx);
            }
        }
    }
    best
}

/// Maximizes `f` over a sorted grid, then refines with golden-section search
/// on the interval between the neighbours of the best grid point.
///
/// The returned value is never worse than the best grid value. `-inf`
/// everywhere yields the first grid point with `-inf`.
pub fn maximize_on_grid<F: FnMut(f64) -> f64>(mut f: F, grid: &[f64], tol: f64) -> (f64, f64) {
    assert!(!grid.is_empty(), "grid must be nonempty");
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut best_idx = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best_idx] {
            best_idx = i;
        }
    }
    let best = (grid[best_idx], values[best_idx]);
    if best.1 == f64::NEG_INFINITY || grid.len() == 1 {
        return best;
    }
    let lo = grid[best_idx.saturating_sub(1)];
    let hi = grid[(best_idx + 1).min(grid.len() - 1)];
    let refined = golden_section_max(&mut f, lo, hi, tol);
    if refined.1 > best.1 {
        refined
    } else {
        best
    }
}

/// SplitMix64 finalizer, used to derive independent seeds.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
