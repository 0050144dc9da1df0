//! Pulse-state families and their closed-form timing accuracies.
//!
//! Two normalisations appear throughout:
//!
//! * *per usable run*: the standard deviation of the timing statistic,
//!   conditioned on the run surviving the family's post-selection rule;
//! * *r-run*: the accuracy of the pooled estimate over `r` attempted runs,
//!   `per_usable / sqrt(r * usable_fraction)`.
//!
//! Region maps and the gain Λ compare r-run accuracies, which is the only
//! fair comparison when families discard different fractions of runs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_count, check_eta, check_positive, QposError, Result};
use crate::math::{binomial_ln_pmf, bisect, one_minus_complement_pow, sum_descending};
use crate::spectrum::GroupSpectrum;

/// The five pulse-state constructions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StateFamily {
    /// M coherent pulses with mean photon number `mean_photons` each.
    Classical { channels: usize, mean_photons: f64 },
    /// Frequency maximally entangled, `photons` per channel (N = 1 is the
    /// one-photon-per-channel entangled state).
    MaxEntangled { channels: usize, photons: usize },
    /// M independent single-photon pulses.
    Unentangled { channels: usize },
    /// First `entangled` channels maximally entangled, the rest independent.
    PartialEntangled { channels: usize, entangled: usize },
    /// `groups` groups of `group_size` maximally entangled photons, groups
    /// correlated through a shared carrier.
    GroupEntangled {
        groups: usize,
        group_size: usize,
        spectrum: GroupSpectrum,
    },
}

impl StateFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StateFamily::Classical {
                channels,
                mean_photons,
            } => {
                check_count("M", channels, 1)?;
                check_positive("N_mean", mean_photons)
            }
            StateFamily::MaxEntangled { channels, photons } => {
                check_count("M", channels, 1)?;
                check_count("N", photons, 1)
            }
            StateFamily::Unentangled { channels } => check_count("M", channels, 1),
            StateFamily::PartialEntangled {
                channels,
                entangled,
            } => {
                check_count("M", channels, 1)?;
                check_count("Q", entangled, 1)?;
                if entangled > channels {
                    return Err(QposError::param(
                        "Q",
                        format!("must not exceed M = {channels}, got {entangled}"),
                    ));
                }
                Ok(())
            }
            StateFamily::GroupEntangled {
                groups, group_size, ..
            } => {
                check_count("G", groups, 1)?;
                check_count("K", group_size, 1)
            }
        }
    }

    /// Number of channels (one photon per channel except for the classical
    /// and N > 1 maximally entangled families).
    pub fn channels(&self) -> usize {
        match *self {
            StateFamily::Classical { channels, .. }
            | StateFamily::MaxEntangled { channels, .. }
            | StateFamily::Unentangled { channels }
            | StateFamily::PartialEntangled { channels, .. } => channels,
            StateFamily::GroupEntangled {
                groups, group_size, ..
            } => groups * group_size,
        }
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            StateFamily::Classical { .. } => "cl",
            StateFamily::MaxEntangled { .. } => "en",
            StateFamily::Unentangled { .. } => "un",
            StateFamily::PartialEntangled { .. } => "partial",
            StateFamily::GroupEntangled { .. } => "group",
        }
    }
}

/// Analytic accuracy of one family at one loss level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub delta_t_per_run: f64,
    pub delta_t_r_runs: f64,
    pub usable_run_fraction: f64,
}

/// Lossless accuracy Δt of a family with single-photon width `dtau`.
///
/// For [`StateFamily::GroupEntangled`] the width comes from the family's own
/// spectrum and `dtau` is ignored.
pub fn lossless_accuracy(family: &StateFamily, dtau: f64) -> Result<f64> {
    family.validate()?;
    if !matches!(family, StateFamily::GroupEntangled { .. }) {
        check_positive("dtau", dtau)?;
    }
    Ok(match *family {
        StateFamily::Classical {
            channels,
            mean_photons,
        } => dtau / (channels as f64 * mean_photons).sqrt(),
        StateFamily::MaxEntangled { channels, photons } => dtau / (channels * photons) as f64,
        StateFamily::Unentangled { channels } => dtau / (channels as f64).sqrt(),
        StateFamily::PartialEntangled {
            channels,
            entangled,
        } => {
            let m = channels as f64;
            dtau / m.sqrt() * ((m - entangled as f64 + 1.0) / m).sqrt()
        }
        StateFamily::GroupEntangled {
            groups,
            group_size,
            spectrum,
        } => {
            let g = groups as f64;
            let big = spectrum.delta_big_omega();
            let small = spectrum.delta_omega();
            1.0 / (2.0 * group_size as f64 * (g * (g * big * big + small * small)).sqrt())
        }
    })
}

/// Efficiency above which the entangled state beats the unentangled one in
/// the large-M approximation: (1/M)^(1/(M−1)).
pub fn threshold_eta(channels: usize) -> Result<f64> {
    check_count("M", channels, 2)?;
    let m = channels as f64;
    Ok((-(m.ln()) / (m - 1.0)).exp())
}

fn unentangled_inverse_count_mean(channels: usize, eta: f64) -> f64 {
    // E[1/m | m >= 1] for m ~ Binomial(M, eta)
    let ln_pmf = binomial_ln_pmf(channels, eta);
    let usable = one_minus_complement_pow(eta, channels);
    let terms = (1..=channels)
        .map(|m| (ln_pmf[m] - (m as f64).ln()).exp())
        .collect();
    sum_descending(terms) / usable
}

/// Per-usable-run accuracy of M independent single photons under loss:
/// Δτ · sqrt(E[1/m | m ≥ 1]).
pub fn unentangled_lossy_std(channels: usize, eta: f64, dtau: f64) -> Result<f64> {
    check_count("M", channels, 1)?;
    check_eta(eta)?;
    check_positive("dtau", dtau)?;
    Ok(dtau * unentangled_inverse_count_mean(channels, eta).sqrt())
}

/// r-run accuracy of the unentangled state (runs with no photon discarded).
pub fn unentangled_lossy_std_r(channels: usize, eta: f64, dtau: f64, runs: f64) -> Result<f64> {
    check_positive("r", runs)?;
    let per_run = unentangled_lossy_std(channels, eta, dtau)?;
    Ok(per_run / (runs * one_minus_complement_pow(eta, channels)).sqrt())
}

/// r-run accuracy of the one-photon-per-channel entangled state:
/// Δτ / (M · sqrt(r · η^M)).
pub fn entangled_lossy_std_r(channels: usize, eta: f64, dtau: f64, runs: f64) -> Result<f64> {
    check_count("M", channels, 1)?;
    check_eta(eta)?;
    check_positive("dtau", dtau)?;
    check_positive("r", runs)?;
    let m = channels as f64;
    Ok(dtau / (m * runs.sqrt()) * (-0.5 * m * eta.ln()).exp())
}

/// Accuracy gain Λ(M, η) of the entangled over the unentangled state at
/// equal numbers of attempted runs. Λ > 1 means entanglement wins.
pub fn gain_lambda(channels: usize, eta: f64) -> Result<f64> {
    check_count("M", channels, 1)?;
    check_eta(eta)?;
    let ln_pmf = binomial_ln_pmf(channels, eta);
    let usable = one_minus_complement_pow(eta, channels);
    let m_f = channels as f64;
    let ln_eta_m = m_f * eta.ln();
    let ln_usable_sq = 2.0 * usable.ln();
    let terms = (1..=channels)
        .map(|m| (ln_pmf[m] + ln_eta_m - (m as f64).ln() - ln_usable_sq).exp())
        .collect();
    Ok(m_f * sum_descending(terms).sqrt())
}

/// Efficiency η* at which Λ(M, η*) = 1.
pub fn gain_root(channels: usize) -> Result<f64> {
    check_count("M", channels, 2)?;
    bisect(
        |eta| gain_lambda(channels, eta).map(|l| l - 1.0).unwrap_or(f64::NAN),
        1e-9,
        1.0,
        1e-14,
    )
    .ok_or(QposError::NoRoot("gain_lambda - 1"))
}

/// Width of the arrival-time sum when `retained` of `groups` groups survive.
pub fn group_tau(retained: usize, groups: usize, spectrum: &GroupSpectrum) -> Result<f64> {
    check_count("g", retained, 1)?;
    if retained > groups {
        return Err(QposError::param(
            "g",
            format!("must not exceed G = {groups}, got {retained}"),
        ));
    }
    let (g, gg) = (retained as f64, groups as f64);
    let big2 = spectrum.delta_big_omega().powi(2);
    let small = spectrum.delta_omega();
    let small2 = small * small;
    Ok(g.sqrt() / (2.0 * small) * (((gg - g) * big2 + small2) / (gg * big2 + small2)).sqrt())
}

/// Probability that exactly `retained` groups arrive intact, conditioned on
/// at least one doing so.
pub fn retained_group_prob(groups: usize, group_size: usize, eta: f64, retained: usize) -> Result<f64> {
    check_count("G", groups, 1)?;
    check_count("K", group_size, 1)?;
    check_eta(eta)?;
    check_count("g", retained, 1)?;
    if retained > groups {
        return Err(QposError::param(
            "g",
            format!("must not exceed G = {groups}, got {retained}"),
        ));
    }
    Ok(retained_group_probs(groups, group_size, eta)[retained - 1])
}

/// P_g for g = 1..=G.
fn retained_group_probs(groups: usize, group_size: usize, eta: f64) -> Vec<f64> {
    let p_group = eta.powi(group_size as i32);
    let ln_pmf = binomial_ln_pmf(groups, p_group);
    let usable = one_minus_complement_pow(p_group, groups);
    let ln_usable = usable.ln();
    (1..=groups)
        .map(|g| (ln_pmf[g] - ln_usable).exp().min(1.0))
        .collect()
}

/// Fraction of group-entangled runs in which at least one group survives.
pub fn group_usable_fraction(groups: usize, group_size: usize, eta: f64) -> f64 {
    one_minus_complement_pow(eta.powi(group_size as i32), groups)
}

/// Per-usable-run accuracy of the group-entangled state.
pub fn group_lossy_std(groups: usize, group_size: usize, eta: f64, spectrum: &GroupSpectrum) -> Result<f64> {
    check_count("G", groups, 1)?;
    check_count("K", group_size, 1)?;
    check_eta(eta)?;
    let gg = groups as f64;
    let big2 = spectrum.delta_big_omega().powi(2);
    let small = spectrum.delta_omega();
    let small2 = small * small;
    let probs = retained_group_probs(groups, group_size, eta);
    let terms = probs
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let g = (i + 1) as f64;
            ((gg - g) * big2 + small2) / (g * (gg * big2 + small2)) * p
        })
        .collect();
    Ok(sum_descending(terms).sqrt() / (2.0 * group_size as f64 * small))
}

/// r-run accuracy of the group-entangled state.
pub fn group_lossy_std_r(
    groups: usize,
    group_size: usize,
    eta: f64,
    spectrum: &GroupSpectrum,
    runs: f64,
) -> Result<f64> {
    check_positive("r", runs)?;
    let per_run = group_lossy_std(groups, group_size, eta, spectrum)?;
    Ok(per_run / (runs * group_usable_fraction(groups, group_size, eta)).sqrt())
}

/// Per-usable-run accuracy of the partially entangled state under loss,
/// for the photon-weighted average estimator used by the Monte Carlo
/// sampler: the entangled block contributes its arrival-time sum (variance
/// Δτ²) when all `entangled` photons arrive, unentangled survivors each add
/// an independent time.
pub fn partial_lossy_std(channels: usize, entangled: usize, eta: f64, dtau: f64) -> Result<f64> {
    StateFamily::PartialEntangled {
        channels,
        entangled,
    }
    .validate()?;
    check_eta(eta)?;
    check_positive("dtau", dtau)?;
    let free = channels - entangled;
    let q = entangled as f64;
    let block = eta.powi(entangled as i32);
    let ln_pmf = binomial_ln_pmf(free, eta);
    let mut terms = Vec::with_capacity(2 * free + 1);
    for (m, lp) in ln_pmf.iter().enumerate() {
        let p = lp.exp();
        let mf = m as f64;
        terms.push(block * p * (1.0 + mf) / (q + mf).powi(2));
        if m > 0 {
            terms.push((1.0 - block) * p / mf);
        }
    }
    let usable = partial_usable_fraction(channels, entangled, eta);
    Ok(dtau * (sum_descending(terms) / usable).sqrt())
}

fn partial_usable_fraction(channels: usize, entangled: usize, eta: f64) -> f64 {
    let block_lost = -(entangled as f64 * eta.ln()).exp_m1();
    1.0 - block_lost * (1.0 - eta).powi((channels - entangled) as i32)
}

/// Fraction of attempted runs that survive the family's post-selection.
pub fn usable_fraction(family: &StateFamily, eta: f64) -> Result<f64> {
    family.validate()?;
    check_eta(eta)?;
    Ok(match *family {
        StateFamily::Classical {
            channels,
            mean_photons,
        } => -(-(eta * mean_photons * channels as f64)).exp_m1(),
        StateFamily::MaxEntangled { channels, photons } => {
            eta.powi((channels * photons) as i32)
        }
        StateFamily::Unentangled { channels } => one_minus_complement_pow(eta, channels),
        StateFamily::PartialEntangled {
            channels,
            entangled,
        } => partial_usable_fraction(channels, entangled, eta),
        StateFamily::GroupEntangled {
            groups, group_size, ..
        } => group_usable_fraction(groups, group_size, eta),
    })
}

/// Per-usable-run accuracy of any family at efficiency `eta`.
///
/// The classical entry is the lower bound Δτ/sqrt(M·η·N̄); the finite-N̄
/// excess is measured by simulation. The maximally entangled entry applies
/// all-or-nothing post-selection to all M·N photons.
pub fn lossy_std(family: &StateFamily, eta: f64, dtau: f64) -> Result<f64> {
    family.validate()?;
    check_eta(eta)?;
    match *family {
        StateFamily::Classical {
            channels,
            mean_photons,
        } => {
            check_positive("dtau", dtau)?;
            Ok(dtau / (channels as f64 * mean_photons * eta).sqrt())
        }
        StateFamily::MaxEntangled { .. } => lossless_accuracy(family, dtau),
        StateFamily::Unentangled { channels } => unentangled_lossy_std(channels, eta, dtau),
        StateFamily::PartialEntangled {
            channels,
            entangled,
        } => partial_lossy_std(channels, entangled, eta, dtau),
        StateFamily::GroupEntangled {
            groups,
            group_size,
            spectrum,
        } => group_lossy_std(groups, group_size, eta, &spectrum),
    }
}

/// Full accuracy report for `runs` attempted runs.
pub fn accuracy_report(family: &StateFamily, eta: f64, dtau: f64, runs: f64) -> Result<AccuracyReport> {
    check_positive("r", runs)?;
    let per_run = lossy_std(family, eta, dtau)?;
    let usable = usable_fraction(family, eta)?;
    let r_runs = match family {
        // Poisson photon number: every photon counts, no run-level post-selection.
        StateFamily::Classical { .. } => per_run / runs.sqrt(),
        _ => per_run / (runs * usable).sqrt(),
    };
    Ok(AccuracyReport {
        delta_t_per_run: per_run,
        delta_t_r_runs: r_runs,
        usable_run_fraction: usable,
    })
}

/// The three states compared on a region map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Contender {
    En,
    Group,
    Un,
}

impl Contender {
    pub fn symbol(self) -> &'static str {
        match self {
            Contender::En => "en",
            Contender::Group => "G",
            Contender::Un => "un",
        }
    }
}

/// Ordering of the three contenders, best (smallest Δt) first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionOrdering {
    pub ranking: [(Contender, f64); 3],
    /// `tied[i]` is set when ranks i and i+1 agree within 1e-12 relative.
    pub tied: [bool; 2],
}

impl RegionOrdering {
    pub fn best(&self) -> Contender {
        self.ranking[0].0
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RegionOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ranking[0].0.symbol())?;
        for i in 0..2 {
            let sep = if self.tied[i] { "=" } else { ">" };
            write!(f, "{sep}{}", self.ranking[i + 1].0.symbol())?;
        }
        Ok(())
    }
}

const TIE_REL: f64 = 1e-12;

/// Ranks the entangled, group-entangled and unentangled states of M photons
/// with matched single-photon spectra (Δω²/ΔΩ² = `ratio`) by their r-run
/// accuracy at r = 1.
pub fn classify_region(channels: usize, eta: f64, group_size: usize, ratio: f64) -> Result<RegionOrdering> {
    check_count("K", group_size, 1)?;
    check_count("M", channels, group_size)?;
    if !channels.is_multiple_of(group_size) {
        return Err(QposError::param(
            "M",
            format!("must be divisible by K = {group_size}, got {channels}"),
        ));
    }
    check_eta(eta)?;
    let spectrum = GroupSpectrum::from_ratio(ratio)?;
    let dtau = spectrum.effective().time_std();
    let groups = channels / group_size;
    let mut ranking = [
        (Contender::En, entangled_lossy_std_r(channels, eta, dtau, 1.0)?),
        (Contender::Group, group_lossy_std_r(groups, group_size, eta, &spectrum, 1.0)?),
        (Contender::Un, unentangled_lossy_std_r(channels, eta, dtau, 1.0)?),
    ];
    // stable: ties keep the canonical en, G, un order
    ranking.sort_by(|a, b| a.1.total_cmp(&b.1));
    let tie = |a: f64, b: f64| (a - b).abs() <= TIE_REL * a.abs().max(b.abs());
    let tied = [
        tie(ranking[0].1, ranking[1].1),
        tie(ranking[1].1, ranking[2].1),
    ];
    Ok(RegionOrdering { ranking, tied })
}
