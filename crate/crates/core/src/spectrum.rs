//! Gaussian single-photon spectra.
//!
//! A spectrum of angular-frequency standard deviation σ_ω gives an
//! arrival-time density |g(t)|² that is Gaussian with standard deviation
//! Δτ = 1/(2σ_ω). The carrier frequency is fixed at zero.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumModel {
    sigma_omega: f64,
}

impl SpectrumModel {
    pub fn new(sigma_omega: f64) -> Result<Self> {
        check_positive("sigma_omega", sigma_omega)?;
        Ok(Self { sigma_omega })
    }

    /// Spectrum whose arrival-time width equals `dtau`.
    pub fn from_time_std(dtau: f64) -> Result<Self> {
        check_positive("dtau", dtau)?;
        Ok(Self {
            sigma_omega: 1.0 / (2.0 * dtau),
        })
    }

    pub fn sigma_omega(&self) -> f64 {
        self.sigma_omega
    }

    /// Arrival-time standard deviation Δτ = 1/(2σ_ω).
    pub fn time_std(&self) -> f64 {
        1.0 / (2.0 * self.sigma_omega)
    }

    /// |g(t)|²: zero-mean Gaussian density of width Δτ.
    pub fn arrival_density(&self, t: f64) -> f64 {
        let dtau = self.time_std();
        (-(t * t) / (2.0 * dtau * dtau)).exp() / ((2.0 * PI).sqrt() * dtau)
    }

    /// |φ(ω)|²: zero-mean Gaussian density of width σ_ω.
    pub fn spectral_density(&self, omega: f64) -> f64 {
        let s = self.sigma_omega;
        (-(omega * omega) / (2.0 * s * s)).exp() / ((2.0 * PI).sqrt() * s)
    }
}

/// Two-level spectrum of the group-entangled state: carrier spread ΔΩ
/// shared between groups, intra-group spread Δω around the carrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupSpectrum {
    delta_big_omega: f64,
    delta_omega: f64,
}

impl GroupSpectrum {
    pub fn new(delta_big_omega: f64, delta_omega: f64) -> Result<Self> {
        check_positive("delta_Omega", delta_big_omega)?;
        check_positive("delta_omega", delta_omega)?;
        Ok(Self {
            delta_big_omega,
            delta_omega,
        })
    }

    /// Spectrum with ΔΩ = 1 and Δω² / ΔΩ² = `ratio`.
    pub fn from_ratio(ratio: f64) -> Result<Self> {
        check_positive("ratio", ratio)?;
        Self::new(1.0, ratio.sqrt())
    }

    pub fn delta_big_omega(&self) -> f64 {
        self.delta_big_omega
    }

    pub fn delta_omega(&self) -> f64 {
        self.delta_omega
    }

    /// Single-photon marginal: Gaussian with variance Δω² + ΔΩ².
    pub fn effective(&self) -> SpectrumModel {
        SpectrumModel {
            sigma_omega: self.delta_omega.hypot(self.delta_big_omega),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn time_std_examples() {
        assert_eq!(SpectrumModel::new(0.5).unwrap().time_std(), 1.0);
        assert_eq!(SpectrumModel::new(2.0).unwrap().time_std(), 0.25);
        let g = GroupSpectrum::new(1.0, 3f64.sqrt()).unwrap();
        assert!((g.effective().sigma_omega() - 2.0).abs() < 1e-15);
        assert!((g.effective().time_std() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_nonpositive_width() {
        assert!(SpectrumModel::new(0.0).is_err());
        assert!(SpectrumModel::new(-1.0).is_err());
        assert!(SpectrumModel::new(f64::NAN).is_err());
        assert!(GroupSpectrum::new(1.0, 0.0).is_err());
    }

    #[test]
    fn density_peak_and_symmetry() {
        let s = SpectrumModel::new(0.5).unwrap();
        assert!((s.arrival_density(0.0) - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        for t in [0.1, 0.7, 2.3, 5.0] {
            assert_eq!(s.arrival_density(t), s.arrival_density(-t));
        }
    }

    #[test]
    fn density_normalized_with_variance_dtau_squared() {
        for sigma in [0.5, 1.3, 4.0] {
            let s = SpectrumModel::new(sigma).unwrap();
            let d = s.time_std();
            let norm = simpson(|t| s.arrival_density(t), -8.0 * d, 8.0 * d, 4000);
            assert!((norm - 1.0).abs() < 1e-10, "norm {norm}");
            let var = simpson(|t| t * t * s.arrival_density(t), -12.0 * d, 12.0 * d, 6000);
            assert!((var - d * d).abs() < 1e-8 * d * d.max(1.0), "var {var}");
            let spec_norm = simpson(|w| s.spectral_density(w), -10.0 * sigma, 10.0 * sigma, 4000);
            assert!((spec_norm - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn time_std_strictly_decreasing() {
        let widths: Vec<f64> = (1..200).map(|i| i as f64 * 0.05).collect();
        for w in widths.windows(2) {
            let a = SpectrumModel::new(w[0]).unwrap().time_std();
            let b = SpectrumModel::new(w[1]).unwrap().time_std();
            assert!(b < a);
        }
    }
}
