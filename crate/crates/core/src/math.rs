//! Small numeric helpers shared by the analytic and simulation modules.

/// ln(k!) for k = 0..=n.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// `exp * ln_base`, with the convention 0 · ln 0 = 0.
pub(crate) fn ln_pow(ln_base: f64, exp: usize) -> f64 {
    if exp == 0 {
        0.0
    } else {
        exp as f64 * ln_base
    }
}

/// Log of the binomial pmf, k = 0..=n, success probability `p` in [0, 1].
pub(crate) fn binomial_ln_pmf(n: usize, p: f64) -> Vec<f64> {
    let lf = ln_factorials(n);
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p();
    (0..=n)
        .map(|k| lf[n] - lf[k] - lf[n - k] + ln_pow(ln_p, k) + ln_pow(ln_q, n - k))
        .collect()
}

/// 1 − (1 − p)^n without cancellation for small p.
pub(crate) fn one_minus_complement_pow(p: f64, n: usize) -> f64 {
    -(n as f64 * (-p).ln_1p()).exp_m1()
}

/// Sum of non-negative terms, largest first.
pub(crate) fn sum_descending(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(|a, b| b.total_cmp(a));
    terms.into_iter().sum()
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

/// Bisection for a sign change of `f` on [lo, hi].
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 || (hi - lo) < tol {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_pmf_sums_to_one() {
        for (n, p) in [(1, 0.3), (7, 0.5), (40, 0.9), (500, 0.01), (3, 1.0)] {
            let s: f64 = binomial_ln_pmf(n, p).iter().map(|l| l.exp()).sum();
            assert!((s - 1.0).abs() < 1e-12, "n={n} p={p} sum={s}");
        }
    }

    #[test]
    fn binomial_pmf_edge_probabilities() {
        let pmf: Vec<f64> = binomial_ln_pmf(4, 1.0).iter().map(|l| l.exp()).collect();
        assert_eq!(pmf, vec![0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn complement_pow() {
        assert!((one_minus_complement_pow(0.5, 2) - 0.75).abs() < 1e-15);
        assert_eq!(one_minus_complement_pow(1.0, 5), 1.0);
        assert!((one_minus_complement_pow(1e-12, 3) / 3e-12 - 1.0).abs() < 1e-11);
    }

    #[test]
    fn normal_cdf_values() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.959963984540054) - 0.975).abs() < 1e-9);
        assert!((normal_cdf(-1.0) - 0.158_655_253_931_457_05).abs() < 1e-9);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-14).is_none());
    }
}
