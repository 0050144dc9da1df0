use num_complex::Complex64;

use super::density::{CMatrix, DensityMatrix};
use crate::error::{check_count, check_eta, QposError, Result};
use crate::math::ln_factorials;

/// Kraus operators V_0..V_{dim−1} of a loss channel on `dim` Fock levels.
#[derive(Debug, Clone)]
pub struct KrausSet {
    eta: f64,
    operators: Vec<CMatrix>,
}

/// ⟨m−n|Vₙ|m⟩ = sqrt(C(m,n)) η^((m−n)/2) (1−η)^(n/2), zero elsewhere.
pub fn kraus_operators(eta: f64, dim: usize) -> Result<KrausSet> {
    check_eta(eta)?;
    check_count("dim", dim, 1)?;
    let lf = ln_factorials(dim);
    let operators = (0..dim)
        .map(|n| {
            let mut v = CMatrix::zeros(dim, dim);
            for m in n..dim {
                let binom = (0.5 * (lf[m] - lf[n] - lf[m - n])).exp();
                let amp = binom * eta.powf(0.5 * (m - n) as f64) * (1.0 - eta).powf(0.5 * n as f64);
                v[(m - n, m)] = Complex64::new(amp, 0.0);
            }
            v
        })
        .collect();
    Ok(KrausSet { eta, operators })
}

impl KrausSet {
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn dim(&self) -> usize {
        self.operators[0].nrows()
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// max |Σ Vₙ†Vₙ − 1| over matrix entries.
    pub fn completeness_error(&self) -> f64 {
        let dim = self.dim();
        let sum = self
            .operators
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, v| acc + v.adjoint() * v);
        (sum - CMatrix::identity(dim, dim)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Σ Vₙ ρ Vₙ† on an arbitrary (not necessarily physical) operator.
    pub fn apply_raw(&self, rho: &CMatrix) -> Result<CMatrix> {
        let dim = self.dim();
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(QposError::DimensionMismatch {
                expected: dim,
                actual: rho.nrows(),
            });
        }
        Ok(self
            .operators
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, v| acc + v * rho * v.adjoint()))
    }
}

/// Applies the loss channel to a density matrix.
pub fn apply_loss(rho: &DensityMatrix, kraus: &KrausSet) -> Result<DensityMatrix> {
    let out = kraus.apply_raw(rho.matrix())?;
    // CPTP on the truncated space: the output is a density matrix
    Ok(DensityMatrix::from_raw(out))
}
