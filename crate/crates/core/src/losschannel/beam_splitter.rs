use num_complex::Complex64;

use super::density::CMatrix;
use super::expm::matrix_exp;
use super::kraus::kraus_operators;
use crate::error::{check_count, check_eta, Result};

fn annihilation(dim: usize) -> CMatrix {
    let mut a = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Beam-splitter unitary exp[−θ(a b† − a† b)] with tan θ = sqrt((1−η)/η),
/// on two modes each truncated to `dim` levels (mode a is the slow index).
fn beam_splitter_unitary(eta: f64, dim: usize) -> CMatrix {
    let theta = ((1.0 - eta) / eta).sqrt().atan();
    let a1 = annihilation(dim);
    let id = CMatrix::identity(dim, dim);
    let a = kron(&a1, &id);
    let b = kron(&id, &a1);
    let generator = &a * b.adjoint() - a.adjoint() * &b;
    matrix_exp(&(generator * Complex64::new(-theta, 0.0)))
}

/// Tr_b[U (ρ ⊗ |0⟩⟨0|) U†] for an operator ρ on mode a.
pub fn beam_splitter_channel(rho: &CMatrix, eta: f64) -> Result<CMatrix> {
    check_eta(eta)?;
    let dim = rho.nrows();
    check_count("dim", dim, 1)?;
    let u = beam_splitter_unitary(eta, dim);
    Ok(channel_with(&u, rho))
}

fn channel_with(u: &CMatrix, rho: &CMatrix) -> CMatrix {
    let dim = rho.nrows();
    let mut vac = CMatrix::zeros(dim, dim);
    vac[(0, 0)] = Complex64::new(1.0, 0.0);
    let joint = u * kron(rho, &vac) * u.adjoint();
    CMatrix::from_fn(dim, dim, |i, j| {
        (0..dim).map(|k| joint[(i * dim + k, j * dim + k)]).sum()
    })
}

/// Largest entry-wise difference between the beam-splitter channel and the
/// Kraus map over the basis inputs |i⟩⟨j| with i, j ≤ `max_photons`.
pub fn beam_splitter_deviation(eta: f64, dim: usize, max_photons: usize) -> Result<f64> {
    check_eta(eta)?;
    check_count("dim", dim, 2)?;
    let kraus = kraus_operators(eta, dim)?;
    let u = beam_splitter_unitary(eta, dim);
    let top = max_photons.min(dim - 1);
    let mut worst: f64 = 0.0;
    for i in 0..=top {
        for j in 0..=top {
            let mut e = CMatrix::zeros(dim, dim);
            e[(i, j)] = Complex64::new(1.0, 0.0);
            let via_unitary = channel_with(&u, &e);
            let via_kraus = kraus.apply_raw(&e)?;
            let dev = (via_unitary - via_kraus).iter().map(|z| z.norm()).fold(0.0, f64::max);
            worst = worst.max(dev);
        }
    }
    Ok(worst)
}

/// Deviation on inputs with at most `dim − 2` photons, keeping one level of
/// headroom below the truncation.
pub fn beam_splitter_check(eta: f64, dim: usize) -> Result<f64> {
    check_count("dim", dim, 2)?;
    beam_splitter_deviation(eta, dim, dim - 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_efficiency_exact() {
        for dim in 2..=6 {
            assert_eq!(beam_splitter_check(1.0, dim).unwrap(), 0.0);
        }
    }

    #[test]
    fn matches_kraus_inside_guard_band() {
        assert!(beam_splitter_check(0.36, 5).unwrap() < 1e-8);
        for eta in [0.1, 0.5, 0.9] {
            assert!(beam_splitter_check(eta, 6).unwrap() < 1e-8);
        }
    }

    #[test]
    fn unitary_is_unitary() {
        let u = beam_splitter_unitary(0.42, 4);
        let err = (&u * u.adjoint() - CMatrix::identity(16, 16))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn single_photon_transmission() {
        let mut one = CMatrix::zeros(3, 3);
        one[(1, 1)] = Complex64::new(1.0, 0.0);
        let out = beam_splitter_channel(&one, 0.25).unwrap();
        assert!((out[(1, 1)].re - 0.25).abs() < 1e-13);
        assert!((out[(0, 0)].re - 0.75).abs() < 1e-13);
    }

    #[test]
    fn rejects_small_dim() {
        assert!(beam_splitter_check(0.5, 1).is_err());
        assert!(beam_splitter_check(0.0, 4).is_err());
    }
}
