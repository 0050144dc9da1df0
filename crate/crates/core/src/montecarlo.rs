//! Seeded simulation of experimental runs.
//!
//! Each sampler draws one run: which photons (or groups) survive the lossy
//! channel and, when the run passes the family's post-selection rule, the
//! value of the timing statistic T for that run.
//!
//! Maximally entangled photons have a joint arrival density that depends
//! only on the sum of their arrival times, so a single photon's time has no
//! proper marginal. The entangled samplers therefore draw the sum statistic
//! directly instead of individual arrival times.

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{check_eta, check_positive, QposError, Result};
use crate::rng::map_runs;
use crate::spectrum::GroupSpectrum;
use crate::states::{group_tau, StateFamily};
use crate::stats::sample_std;

/// One simulated run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    /// Per channel (or per group) survival.
    pub survivors: Vec<bool>,
    /// Timing statistic; `None` when the run is discarded.
    pub statistic: Option<f64>,
    /// Photons (or groups) that contributed to the statistic.
    pub weight: usize,
}

impl RunOutcome {
    pub fn is_usable(&self) -> bool {
        self.statistic.is_some()
    }
}

/// Mean arrival time estimated from a batch of runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    /// Standard error of `mean`; infinite when only one run was usable.
    pub std_of_mean: f64,
    pub runs_used: usize,
    pub runs_total: usize,
}

impl Estimate {
    /// Standard deviation of the per-run statistic over usable runs.
    pub fn statistic_std(&self) -> f64 {
        self.std_of_mean * (self.runs_used as f64).sqrt()
    }

    /// Accuracy per attempted run: `std_of_mean * sqrt(runs_total)`.
    pub fn std_per_attempt(&self) -> f64 {
        self.std_of_mean * (self.runs_total as f64).sqrt()
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample::<f64, _>(StandardNormal)
}

fn survive<R: Rng + ?Sized>(rng: &mut R, eta: f64) -> bool {
    eta >= 1.0 || rng.random::<f64>() < eta
}

/// M independent single photons; the statistic is the mean of surviving
/// arrival times, discarded when nothing arrives.
pub fn sample_unentangled<R: Rng + ?Sized>(
    channels: usize,
    eta: f64,
    dtau: f64,
    true_offset: f64,
    rng: &mut R,
) -> RunOutcome {
    let survivors: Vec<bool> = (0..channels).map(|_| survive(rng, eta)).collect();
    let mut sum = 0.0;
    let mut count = 0;
    for _ in survivors.iter().filter(|s| **s) {
        sum += true_offset + dtau * gaussian(rng);
        count += 1;
    }
    RunOutcome {
        survivors,
        statistic: (count > 0).then(|| sum / count as f64),
        weight: count,
    }
}

/// Maximally entangled state with `photons` per channel: usable only when
/// all M·N photons arrive, then T = offset + Δτ·Z/(M·N).
pub fn sample_entangled<R: Rng + ?Sized>(
    channels: usize,
    photons: usize,
    eta: f64,
    dtau: f64,
    true_offset: f64,
    rng: &mut R,
) -> RunOutcome {
    let survivors: Vec<bool> = (0..channels)
        .map(|_| (0..photons).fold(true, |all, _| survive(rng, eta) && all))
        .collect();
    let intact = survivors.iter().all(|s| *s);
    let total = channels * photons;
    RunOutcome {
        survivors,
        statistic: intact.then(|| true_offset + dtau * gaussian(rng) / total as f64),
        weight: if intact { total } else { 0 },
    }
}

/// Group-entangled state: each group survives with probability η^K; with
/// g ≥ 1 intact groups, T = offset + Δτ_g·Z/(g·K).
pub fn sample_group<R: Rng + ?Sized>(
    groups: usize,
    group_size: usize,
    eta: f64,
    spectrum: &GroupSpectrum,
    true_offset: f64,
    rng: &mut R,
) -> RunOutcome {
    let survivors: Vec<bool> = (0..groups)
        .map(|_| (0..group_size).fold(true, |all, _| survive(rng, eta) && all))
        .collect();
    let intact = survivors.iter().filter(|s| **s).count();
    let statistic = (intact > 0).then(|| {
        let width = group_tau(intact, groups, spectrum).expect("1 <= g <= G");
        true_offset + width * gaussian(rng) / (intact * group_size) as f64
    });
    RunOutcome {
        survivors,
        statistic,
        weight: intact,
    }
}

/// Partially entangled state: the first Q channels are one entangled block
/// kept only when intact, the remaining channels are independent photons.
///
/// The statistic is the photon-weighted average of everything retained:
/// (S_Q + Σ t_i) / (Q + m) where S_Q is the block's arrival-time sum. With
/// no loss this is the plain average T over all M channels.
pub fn sample_partial<R: Rng + ?Sized>(
    channels: usize,
    entangled: usize,
    eta: f64,
    dtau: f64,
    true_offset: f64,
    rng: &mut R,
) -> RunOutcome {
    let survivors: Vec<bool> = (0..channels).map(|_| survive(rng, eta)).collect();
    let block = survivors[..entangled].iter().all(|s| *s);
    let mut sum = 0.0;
    let mut count = 0;
    if block {
        sum += entangled as f64 * true_offset + dtau * gaussian(rng);
        count += entangled;
    }
    for _ in survivors[entangled..].iter().filter(|s| **s) {
        sum += true_offset + dtau * gaussian(rng);
        count += 1;
    }
    RunOutcome {
        survivors,
        statistic: (count > 0).then(|| sum / count as f64),
        weight: count,
    }
}

/// Coherent pulses: Poisson(η·N̄) photons per channel, iid arrival times;
/// T averages the per-channel mean times over non-empty channels.
pub fn sample_classical<R: Rng + ?Sized>(
    channels: usize,
    mean_photons: f64,
    eta: f64,
    dtau: f64,
    true_offset: f64,
    rng: &mut R,
) -> RunOutcome {
    let poisson = Poisson::new(eta * mean_photons).expect("positive Poisson mean");
    let mut survivors = Vec::with_capacity(channels);
    let mut sum_of_means = 0.0;
    let mut nonempty = 0;
    let mut photons = 0;
    for _ in 0..channels {
        let n = poisson.sample(rng) as usize;
        survivors.push(n > 0);
        if n > 0 {
            let s: f64 = (0..n).map(|_| true_offset + dtau * gaussian(rng)).sum();
            sum_of_means += s / n as f64;
            nonempty += 1;
            photons += n;
        }
    }
    RunOutcome {
        survivors,
        statistic: (nonempty > 0).then(|| sum_of_means / nonempty as f64),
        weight: photons,
    }
}

/// Draws one run of any family. For [`StateFamily::GroupEntangled`] the
/// width comes from the family's spectrum and `dtau` is unused.
pub fn sample_run<R: Rng + ?Sized>(
    family: &StateFamily,
    eta: f64,
    dtau: f64,
    true_offset: f64,
    rng: &mut R,
) -> RunOutcome {
    match *family {
        StateFamily::Classical {
            channels,
            mean_photons,
        } => sample_classical(channels, mean_photons, eta, dtau, true_offset, rng),
        StateFamily::MaxEntangled { channels, photons } => {
            sample_entangled(channels, photons, eta, dtau, true_offset, rng)
        }
        StateFamily::Unentangled { channels } => {
            sample_unentangled(channels, eta, dtau, true_offset, rng)
        }
        StateFamily::PartialEntangled {
            channels,
            entangled,
        } => sample_partial(channels, entangled, eta, dtau, true_offset, rng),
        StateFamily::GroupEntangled {
            groups,
            group_size,
            spectrum,
        } => sample_group(groups, group_size, eta, &spectrum, true_offset, rng),
    }
}

/// Mean and standard error over the usable runs, accumulated in run order.
pub fn estimate(runs: &[RunOutcome]) -> Result<Estimate> {
    let stats: Vec<f64> = runs.iter().filter_map(|r| r.statistic).collect();
    estimate_from(&stats, runs.len())
}

pub(crate) fn estimate_from(stats: &[f64], runs_total: usize) -> Result<Estimate> {
    if stats.is_empty() {
        return Err(QposError::NoUsableRuns);
    }
    let n = stats.len();
    let mean = stats.iter().sum::<f64>() / n as f64;
    let std_of_mean = if n >= 2 {
        sample_std(stats) / (n as f64).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(Estimate {
        mean,
        std_of_mean,
        runs_used: n,
        runs_total,
    })
}

/// Empirical accuracy per attempted run from a list of per-run statistics
/// (`None` for discarded runs).
pub fn std_per_attempt(statistics: &[Option<f64>]) -> f64 {
    let used: Vec<f64> = statistics.iter().filter_map(|s| *s).collect();
    sample_std(&used) * (statistics.len() as f64 / used.len() as f64).sqrt()
}

/// A batch of runs under one master seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub family: StateFamily,
    pub eta: f64,
    pub dtau: f64,
    pub true_offset: f64,
    pub runs: usize,
    pub seed: u64,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        check_eta(self.eta)?;
        if !matches!(self.family, StateFamily::GroupEntangled { .. }) {
            check_positive("dtau", self.dtau)?;
        }
        if !self.true_offset.is_finite() {
            return Err(QposError::param("true_offset", "must be finite"));
        }
        if self.runs == 0 {
            return Err(QposError::param("runs", "must be at least 1"));
        }
        Ok(())
    }
}

/// Simulates `config.runs` runs; run i draws from stream i of the master
/// seed, so the result does not depend on `threads`.
pub fn simulate(config: &SimulationConfig, threads: Option<usize>) -> Result<Vec<RunOutcome>> {
    config.validate()?;
    let c = *config;
    Ok(map_runs(c.runs, c.seed, threads, move |_, rng| {
        sample_run(&c.family, c.eta, c.dtau, c.true_offset, rng)
    }))
}

pub fn simulate_estimate(config: &SimulationConfig, threads: Option<usize>) -> Result<Estimate> {
    estimate(&simulate(config, threads)?)
}
