//! Multi-channel loss on a discretised frequency grid.
//!
//! Each channel carries either vacuum or one photon in one of K frequency
//! modes, so its local basis is {|0⟩, |ω_1⟩, …, |ω_K⟩}. Loss acts on every
//! frequency mode with the single-mode Kraus operators of a two-level Fock
//! space; restricted to at most one excitation per channel this leaves one
//! "no loss" operator and one "photon at ω_j lost" operator per mode.
//!
//! The entangled state Σ_j φ_j |ω_j⟩^⊗M is stored sparsely: after loss only
//! the intact block keeps frequency coherences, every sector with a missing
//! photon is diagonal in frequency. The unentangled state is a product, so
//! it is evolved channel by channel.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::density::{CMatrix, DensityMatrix};
use super::kraus::{kraus_operators, KrausSet};
use crate::error::{check_count, check_eta, check_positive, QposError, Result};

pub const MAX_CHANNELS: usize = 4;
pub const MAX_GRID_POINTS: usize = 8;
const MAX_DENSE_DIM: usize = 4096;

/// Discretised single-photon spectrum: amplitudes φ_j at frequencies ω_j,
/// normalised so that Σ|φ_j|² = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    omegas: Vec<f64>,
    amplitudes: Vec<Complex64>,
}

impl FrequencyGrid {
    /// Gaussian spectrum of width `sigma_omega` sampled at `points`
    /// equally spaced frequencies over ±2.5σ, with the linear phase
    /// e^{−iωδ} of a pulse delayed by `delay`.
    pub fn gaussian(points: usize, sigma_omega: f64, delay: f64) -> Result<Self> {
        check_count("omega_grid", points, 1)?;
        check_positive("sigma_omega", sigma_omega)?;
        let omegas: Vec<f64> = if points == 1 {
            vec![0.0]
        } else {
            let span = 5.0 * sigma_omega;
            (0..points)
                .map(|j| -0.5 * span + span * j as f64 / (points - 1) as f64)
                .collect()
        };
        let raw: Vec<f64> = omegas
            .iter()
            .map(|w| (-(w * w) / (2.0 * sigma_omega * sigma_omega)).exp())
            .collect();
        let total: f64 = raw.iter().sum();
        let amplitudes = omegas
            .iter()
            .zip(&raw)
            .map(|(w, p)| Complex64::from_polar((p / total).sqrt(), -w * delay))
            .collect();
        Ok(Self { omegas, amplitudes })
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Single-photon wavepacket ρ_i = Σ φ_j φ_k* |ω_j⟩⟨ω_k| in the local
    /// basis {|0⟩, |ω_1⟩, …}.
    pub fn wavepacket(&self) -> CMatrix {
        let k = self.len();
        CMatrix::from_fn(k + 1, k + 1, |r, c| {
            if r == 0 || c == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                self.amplitudes[r - 1] * self.amplitudes[c - 1].conj()
            }
        })
    }
}

/// Loss operators for one channel on the basis {|0⟩, |ω_1⟩, …, |ω_K⟩},
/// assembled from the two-level single-mode Kraus set.
fn channel_kraus(single_mode: &KrausSet, points: usize) -> Vec<CMatrix> {
    let v0 = &single_mode.operators()[0];
    let v1 = &single_mode.operators()[1];
    let local = points + 1;
    let mut ops = Vec::with_capacity(points + 1);
    let mut keep = CMatrix::zeros(local, local);
    keep[(0, 0)] = v0[(0, 0)];
    for j in 1..local {
        // photon kept at ω_j, every other mode stays in vacuum
        keep[(j, j)] = v0[(1, 1)] * v0[(0, 0)].powu((points - 1) as u32);
    }
    ops.push(keep);
    for j in 1..local {
        let mut lose = CMatrix::zeros(local, local);
        lose[(0, j)] = v1[(0, 1)] * v0[(0, 0)].powu((points - 1) as u32);
        ops.push(lose);
    }
    ops
}

/// Sparse operator on M channels with local dimension K + 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRegister {
    channels: usize,
    local_dim: usize,
    entries: BTreeMap<(usize, usize), Complex64>,
}

impl ChannelRegister {
    fn empty(channels: usize, local_dim: usize) -> Self {
        Self {
            channels,
            local_dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.channels as u32)
    }

    /// Nonzero entries keyed by (row, column) global index.
    pub fn entries(&self) -> &BTreeMap<(usize, usize), Complex64> {
        &self.entries
    }

    /// Global index of a per-channel basis assignment; channel 0 is the
    /// most significant digit.
    pub fn index(&self, locals: &[usize]) -> usize {
        locals.iter().fold(0, |acc, &l| acc * self.local_dim + l)
    }

    pub fn locals(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.channels];
        for slot in out.iter_mut().rev() {
            *slot = index % self.local_dim;
            index /= self.local_dim;
        }
        out
    }

    /// Which channels hold a photon in basis state `index`.
    pub fn survivors(&self, index: usize) -> Vec<bool> {
        self.locals(index).into_iter().map(|l| l != 0).collect()
    }

    pub fn entry(&self, row: &[usize], col: &[usize]) -> Complex64 {
        self.entries
            .get(&(self.index(row), self.index(col)))
            .copied()
            .unwrap_or_default()
    }

    pub fn trace(&self) -> f64 {
        self.entries
            .iter()
            .filter(|((r, c), _)| r == c)
            .map(|(_, v)| v.re)
            .sum()
    }

    fn add(&mut self, row: usize, col: usize, value: Complex64) {
        if value != Complex64::new(0.0, 0.0) {
            *self.entries.entry((row, col)).or_default() += value;
        }
    }

    fn pure(channels: usize, local_dim: usize, amplitudes: &[(Vec<usize>, Complex64)]) -> Self {
        let mut reg = Self::empty(channels, local_dim);
        for (r, a) in amplitudes {
            for (c, b) in amplitudes {
                let (ri, ci) = (reg.index(r), reg.index(c));
                reg.add(ri, ci, *a * b.conj());
            }
        }
        reg
    }

    /// Applies the per-channel operators `ops` (as a Kraus map) to one
    /// channel of the register.
    fn apply_on_channel(&self, channel: usize, ops: &[CMatrix]) -> Self {
        let mut out = Self::empty(self.channels, self.local_dim);
        for (&(r, c), &val) in &self.entries {
            let mut rl = self.locals(r);
            let mut cl = self.locals(c);
            let (r0, c0) = (rl[channel], cl[channel]);
            for op in ops {
                for r_new in 0..self.local_dim {
                    let a = op[(r_new, r0)];
                    if a == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for c_new in 0..self.local_dim {
                        let b = op[(c_new, c0)];
                        if b == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        rl[channel] = r_new;
                        cl[channel] = c_new;
                        let (ri, ci) = (out.index(&rl), out.index(&cl));
                        out.add(ri, ci, a * val * b.conj());
                    }
                }
            }
        }
        out
    }

    /// Total weight of each survival pattern (diagonal entries grouped by
    /// which channels hold a photon).
    pub fn sector_weights(&self) -> BTreeMap<Vec<bool>, f64> {
        let mut out = BTreeMap::new();
        for (&(r, c), v) in &self.entries {
            if r == c {
                *out.entry(self.survivors(r)).or_insert(0.0) += v.re;
            }
        }
        out
    }

    /// Operator restricted to one survival pattern (unnormalised).
    pub fn project_sector(&self, pattern: &[bool]) -> Self {
        let mut out = Self::empty(self.channels, self.local_dim);
        for (&(r, c), &v) in &self.entries {
            if self.survivors(r) == pattern && self.survivors(c) == pattern {
                out.entries.insert((r, c), v);
            }
        }
        out
    }

    /// Partial trace over every channel except `keep`.
    pub fn reduce_to_channel(&self, keep: usize) -> CMatrix {
        let mut out = CMatrix::zeros(self.local_dim, self.local_dim);
        for (&(r, c), &v) in &self.entries {
            let rl = self.locals(r);
            let cl = self.locals(c);
            let traced_equal = (0..self.channels).all(|i| i == keep || rl[i] == cl[i]);
            if traced_equal {
                out[(rl[keep], cl[keep])] += v;
            }
        }
        out
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let dim = self.dim();
        if dim > MAX_DENSE_DIM {
            return Err(QposError::SizeLimit(format!(
                "dense form of a {dim}-dimensional register"
            )));
        }
        let mut m = CMatrix::zeros(dim, dim);
        for (&(r, c), &v) in &self.entries {
            m[(r, c)] = v;
        }
        Ok(m)
    }

    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.to_matrix()?)
    }
}

/// Weight of one survival pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorWeight {
    pub survivors: Vec<bool>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntangledLossReport {
    /// Weight of the intact (all photons present) block; η^M.
    pub intact_weight: f64,
    /// max |ρ'_intact − η^M ρ_en|.
    pub intact_block_error: f64,
    /// Largest frequency off-diagonal element in any sector with a lost
    /// photon, including coherences between different sectors.
    pub loss_sector_coherence: f64,
    /// max |⟨ω_j…|ρ'|ω_j…⟩ − η^m (1−η)^(M−m) |φ_j|²| over loss sectors.
    pub loss_sector_spectrum_error: f64,
    pub trace_error: f64,
    pub sectors: Vec<SectorWeight>,
}

#[derive(Debug, Clone)]
pub struct PostLossEntangled {
    pub register: ChannelRegister,
    pub report: EntangledLossReport,
}

fn check_sizes(channels: usize, grid: &FrequencyGrid) -> Result<()> {
    check_count("M", channels, 1)?;
    if channels > MAX_CHANNELS {
        return Err(QposError::SizeLimit(format!(
            "M = {channels} exceeds {MAX_CHANNELS} channels"
        )));
    }
    if grid.is_empty() || grid.len() > MAX_GRID_POINTS {
        return Err(QposError::SizeLimit(format!(
            "frequency grid of {} points (1..={MAX_GRID_POINTS} supported)",
            grid.len()
        )));
    }
    Ok(())
}

fn sectors_of(weights: BTreeMap<Vec<bool>, f64>) -> Vec<SectorWeight> {
    weights
        .into_iter()
        .rev()
        .map(|(survivors, weight)| SectorWeight { survivors, weight })
        .collect()
}

/// Entangled register Σ_j φ_j |ω_j⟩^⊗M before loss.
pub fn entangled_register(channels: usize, grid: &FrequencyGrid) -> Result<ChannelRegister> {
    check_sizes(channels, grid)?;
    let amps: Vec<(Vec<usize>, Complex64)> = grid
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(j, a)| (vec![j + 1; channels], *a))
        .collect();
    Ok(ChannelRegister::pure(channels, grid.len() + 1, &amps))
}

/// Applies frequency-independent loss to every channel of the maximally
/// entangled one-photon-per-channel state and checks the block structure of
/// the result.
pub fn post_loss_entangled(channels: usize, eta: f64, grid: &FrequencyGrid) -> Result<PostLossEntangled> {
    check_eta(eta)?;
    let initial = entangled_register(channels, grid)?;
    let ops = channel_kraus(&kraus_operators(eta, 2)?, grid.len());
    let register = (0..channels).fold(initial.clone(), |reg, ch| reg.apply_on_channel(ch, &ops));

    let intact = vec![true; channels];
    let intact_weight_expected = eta.powi(channels as i32);
    let mut intact_block_error: f64 = 0.0;
    let mut loss_sector_coherence: f64 = 0.0;
    let mut loss_sector_spectrum_error: f64 = 0.0;

    for (&(r, c), &v) in &register.entries {
        let (sr, sc) = (register.survivors(r), register.survivors(c));
        if sr == intact && sc == intact {
            let expected = initial.entries.get(&(r, c)).copied().unwrap_or_default()
                * intact_weight_expected;
            intact_block_error = intact_block_error.max((v - expected).norm());
        } else if r != c {
            loss_sector_coherence = loss_sector_coherence.max(v.norm());
        }
    }
    // loss sectors: every survivor of a pattern with m photons sits at the
    // same ω_j with weight η^m (1−η)^(M−m) |φ_j|²
    for pattern in all_patterns(channels).into_iter().filter(|p| *p != intact) {
        let m = pattern.iter().filter(|s| **s).count();
        let w = eta.powi(m as i32) * (1.0 - eta).powi((channels - m) as i32);
        let options: Vec<usize> = if m == 0 { vec![0] } else { (1..=grid.len()).collect() };
        for j in options {
            let locals: Vec<usize> = pattern.iter().map(|&s| if s { j } else { 0 }).collect();
            let expected = if m == 0 { w } else { w * grid.amplitudes()[j - 1].norm_sqr() };
            let got = register.entry(&locals, &locals);
            loss_sector_spectrum_error = loss_sector_spectrum_error.max((got - expected).norm());
        }
    }

    let intact_weight = register
        .sector_weights()
        .get(&intact)
        .copied()
        .unwrap_or(0.0);
    let report = EntangledLossReport {
        intact_weight,
        intact_block_error,
        loss_sector_coherence,
        loss_sector_spectrum_error,
        trace_error: (register.trace() - 1.0).abs(),
        sectors: sectors_of(register.sector_weights()),
    };
    Ok(PostLossEntangled { register, report })
}

fn all_patterns(channels: usize) -> Vec<Vec<bool>> {
    (0..1usize << channels)
        .map(|bits| (0..channels).map(|i| bits & (1 << (channels - 1 - i)) != 0).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnentangledLossReport {
    /// max |⟨ω_j|ρ'_i|ω_k⟩ − η φ_j φ_k*| over channels and grid points.
    pub coherence_error: f64,
    /// Smallest |⟨ω_j|ρ'_i|ω_k⟩| for j ≠ k (zero on a one-point grid).
    pub min_offdiag: f64,
    /// Largest coherence between vacuum and one-photon components.
    pub vacuum_coherence: f64,
    pub trace_error: f64,
    pub sectors: Vec<SectorWeight>,
}

/// Result for the product state: one reduced density matrix per channel.
#[derive(Debug, Clone)]
pub struct PostLossUnentangled {
    pub channels: Vec<DensityMatrix>,
    pub report: UnentangledLossReport,
}

impl PostLossUnentangled {
    /// Sparse form of the full product operator.
    pub fn to_register(&self) -> ChannelRegister {
        let local = self.channels[0].dim();
        let mut reg = ChannelRegister::empty(self.channels.len(), local);
        let dim = reg.dim();
        for r in 0..dim {
            for c in 0..dim {
                let (rl, cl) = (reg.locals(r), reg.locals(c));
                let v = self
                    .channels
                    .iter()
                    .enumerate()
                    .fold(Complex64::new(1.0, 0.0), |acc, (i, rho)| acc * rho.matrix()[(rl[i], cl[i])]);
                reg.add(r, c, v);
            }
        }
        reg
    }
}

/// Unentangled register ⊗_i ρ_i before loss.
pub fn unentangled_register(channels: usize, grid: &FrequencyGrid) -> Result<ChannelRegister> {
    check_sizes(channels, grid)?;
    let local = grid.len() + 1;
    let mut amps: Vec<(Vec<usize>, Complex64)> = vec![(Vec::new(), Complex64::new(1.0, 0.0))];
    for _ in 0..channels {
        amps = amps
            .into_iter()
            .flat_map(|(locals, a)| {
                grid.amplitudes().iter().enumerate().map(move |(j, phi)| {
                    let mut l = locals.clone();
                    l.push(j + 1);
                    (l, a * phi)
                })
            })
            .collect();
    }
    Ok(ChannelRegister::pure(channels, local, &amps))
}

/// Applies loss to M independent single-photon wavepackets.
pub fn post_loss_unentangled(channels: usize, eta: f64, grid: &FrequencyGrid) -> Result<PostLossUnentangled> {
    check_eta(eta)?;
    check_sizes(channels, grid)?;
    let ops = channel_kraus(&kraus_operators(eta, 2)?, grid.len());
    let local_kraus = LocalKraus(ops);
    let packet = DensityMatrix::new(grid.wavepacket())?;
    let evolved: Vec<DensityMatrix> = (0..channels)
        .map(|_| local_kraus.apply(&packet))
        .collect::<Result<_>>()?;

    let k = grid.len();
    let mut coherence_error: f64 = 0.0;
    let mut min_offdiag = if k > 1 { f64::INFINITY } else { 0.0 };
    let mut vacuum_coherence: f64 = 0.0;
    for rho in &evolved {
        let m = rho.matrix();
        for j in 1..=k {
            vacuum_coherence = vacuum_coherence.max(m[(0, j)].norm()).max(m[(j, 0)].norm());
            for l in 1..=k {
                let expected = grid.amplitudes()[j - 1] * grid.amplitudes()[l - 1].conj() * eta;
                coherence_error = coherence_error.max((m[(j, l)] - expected).norm());
                if j != l {
                    min_offdiag = min_offdiag.min(m[(j, l)].norm());
                }
            }
        }
    }

    let survive: Vec<f64> = evolved.iter().map(|r| 1.0 - r.matrix()[(0, 0)].re).collect();
    let sectors = all_patterns(channels)
        .into_iter()
        .rev()
        .map(|pattern| {
            let weight = pattern
                .iter()
                .zip(&survive)
                .map(|(&s, &p)| if s { p } else { 1.0 - p })
                .product();
            SectorWeight { survivors: pattern, weight }
        })
        .collect();
    let trace: f64 = evolved.iter().map(|r| r.trace()).product();
    let report = UnentangledLossReport {
        coherence_error,
        min_offdiag,
        vacuum_coherence,
        trace_error: (trace - 1.0).abs(),
        sectors,
    };
    Ok(PostLossUnentangled { channels: evolved, report })
}

struct LocalKraus(Vec<CMatrix>);

impl LocalKraus {
    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let dim = rho.dim();
        let out = self
            .0
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, v| acc + v * rho.matrix() * v.adjoint());
        DensityMatrix::new(out)
    }
}
