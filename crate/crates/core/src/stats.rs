//! Summary statistics used to compare simulations with closed forms.

use rand::Rng;

use crate::rng::run_stream;

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n − 1 denominator).
pub fn sample_std(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return f64::NAN;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (n - 1) as f64).sqrt()
}

/// Bootstrap standard error of `statistic` over `resamples` resamples of
/// `data` drawn with replacement. Deterministic in `seed`.
pub fn bootstrap_se<T, F>(data: &[T], statistic: F, resamples: usize, seed: u64) -> f64
where
    T: Clone,
    F: Fn(&[T]) -> f64,
{
    let n = data.len();
    let mut rng = run_stream(seed, 0);
    let mut buf = Vec::with_capacity(n);
    let replicas: Vec<f64> = (0..resamples)
        .map(|_| {
            buf.clear();
            buf.extend((0..n).map(|_| data[rng.random_range(0..n)].clone()));
            statistic(&buf)
        })
        .collect();
    sample_std(&replicas)
}

/// Two-sample Kolmogorov–Smirnov test. Returns (D, asymptotic p-value).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len(), y.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let v = x[i].min(y[j]);
        while i < n && x[i] <= v {
            i += 1;
        }
        while j < m && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let en = ((n * m) as f64 / (n + m) as f64).sqrt();
    let lambda = (en + 0.12 + 0.11 / en) * d;
    (d, kolmogorov_q(lambda))
}

/// Survival function of the Kolmogorov distribution.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=200 {
        let k = k as f64;
        let term = 2.0 * (-2.0 * k * k * lambda * lambda).exp();
        sum += if k as u64 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

/// Normal-approximation interval half-width for a binomial proportion,
/// `z` standard errors wide.
pub fn binomial_half_width(p: f64, trials: usize, z: f64) -> f64 {
    z * (p * (1.0 - p) / trials as f64).sqrt()
}
