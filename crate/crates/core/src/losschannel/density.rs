use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{QposError, Result};

pub type CMatrix = DMatrix<Complex64>;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_FLOOR: f64 = -1e-10;

/// Density operator on a finite-dimensional space.
///
/// Construction checks Hermiticity (1e-12), unit trace (1e-12) and positive
/// semidefiniteness (smallest eigenvalue ≥ −1e-10).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: CMatrix,
}

impl DensityMatrix {
    pub fn new(data: CMatrix) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(QposError::DimensionMismatch {
                expected: data.nrows(),
                actual: data.ncols(),
            });
        }
        if data.nrows() == 0 {
            return Err(QposError::param("dim", "must be at least 1"));
        }
        let rho = Self { data };
        let herm = rho.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(QposError::param("rho", format!("not Hermitian (error {herm:e})")));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(QposError::param("rho", format!("trace {tr} differs from 1")));
        }
        let min_eig = rho.min_eigenvalue();
        if min_eig < PSD_FLOOR {
            return Err(QposError::param(
                "rho",
                format!("not positive semidefinite (eigenvalue {min_eig:e})"),
            ));
        }
        Ok(rho)
    }

    /// |ψ⟩⟨ψ| for a normalised state vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        Self::new(&v * v.adjoint())
    }

    /// Fock projector |n⟩⟨n| in a space of dimension `dim`.
    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(QposError::param("n", format!("Fock level {n} outside dim {dim}")));
        }
        let mut data = CMatrix::zeros(dim, dim);
        data[(n, n)] = Complex64::new(1.0, 0.0);
        Ok(Self { data })
    }

    /// Random full-rank state A·A†/tr(A·A†) with A uniform in the unit box.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        if dim == 0 {
            return Err(QposError::param("dim", "must be at least 1"));
        }
        let a = CMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let p = &a * a.adjoint();
        let tr = p.trace();
        Self::new(p / tr)
    }

    pub(crate) fn from_raw(data: CMatrix) -> Self {
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.data - self.data.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.data + self.data.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Populations ⟨n|ρ|n⟩.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.data[(i, i)].re).collect()
    }
}
