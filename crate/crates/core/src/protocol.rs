//! Crypto-positioning sessions over a lossy channel.
//!
//! Alice keeps one photon of each entangled copy and sends the other M−1 to
//! Bob, who sits a delay `true_distance` away. Only the sum of the M arrival
//! times carries information, so each copy is modelled by a shared frequency
//! ω, a sum S ~ N(0, Δτ), and per-photon offsets: Bob's M−1 offsets are
//! uniform on a public frame of period L and Alice's offset closes the sum.
//! Bob reports his times modulo L, which makes every broadcast uniform on
//! [0, L) whatever the distance; Alice folds her own time back in and
//! recovers `true_distance` with per-copy error Δτ/(M−1).
//!
//! In the two-party session Alice and Bob each measure either time or
//! frequency on every copy, keep the copies where the choices agree, and
//! compare frequency outcomes binned to `freq_bin` to detect tampering.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_count, check_eta, check_positive, QposError, Result};
use crate::math::normal_cdf;
use crate::montecarlo::{estimate_from, Estimate};

const DEFAULT_FRAME_WIDTHS: f64 = 1000.0;
const MAX_COLLISION_BINS: f64 = 1.0e7;

/// Channel and geometry shared by both protocols.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSetup {
    pub channels: usize,
    pub eta: f64,
    pub dtau: f64,
    /// One-way delay between Alice and Bob.
    pub true_distance: f64,
    /// Period L of the public time frame Bob reports in.
    pub frame_period: f64,
}

impl ProtocolSetup {
    /// Setup with the default frame, wide enough that the folded sum never
    /// wraps in practice.
    pub fn new(channels: usize, eta: f64, dtau: f64, true_distance: f64) -> Result<Self> {
        let span = 8.0 * (channels.max(2) - 1) as f64 * true_distance.abs();
        let setup = ProtocolSetup {
            channels,
            eta,
            dtau,
            true_distance,
            frame_period: (DEFAULT_FRAME_WIDTHS * dtau).max(span + DEFAULT_FRAME_WIDTHS * dtau),
        };
        setup.validate()?;
        Ok(setup)
    }

    pub fn with_frame_period(mut self, frame_period: f64) -> Result<Self> {
        self.frame_period = frame_period;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_count("M", self.channels, 2)?;
        check_eta(self.eta)?;
        check_positive("dtau", self.dtau)?;
        check_positive("frame_period", self.frame_period)?;
        if !self.true_distance.is_finite() {
            return Err(QposError::param("true_distance", "must be finite"));
        }
        let folded = (self.channels - 1) as f64 * self.true_distance.abs() + 10.0 * self.dtau;
        if folded >= 0.5 * self.frame_period {
            return Err(QposError::param(
                "frame_period",
                format!(
                    "must exceed 2·((M−1)·|distance| + 10·dtau) = {}, got {}",
                    2.0 * folded,
                    self.frame_period
                ),
            ));
        }
        Ok(())
    }

    pub fn sigma_omega(&self) -> f64 {
        1.0 / (2.0 * self.dtau)
    }
}

/// One copy of the one-photon-per-channel entangled state in flight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntangledCopy {
    /// Frequency shared by all M photons.
    pub omega: f64,
    /// Per-photon arrival-time offsets; index 0 is Alice's photon. They sum
    /// to the copy's N(0, Δτ) time statistic.
    pub offsets: Vec<f64>,
    /// Set when the frequency correlation has been broken in transit.
    pub tampered: bool,
}

impl EntangledCopy {
    pub fn prepare<R: Rng + ?Sized>(setup: &ProtocolSetup, rng: &mut R) -> Self {
        let omega = setup.sigma_omega() * rng.sample::<f64, _>(StandardNormal);
        let sum = setup.dtau * rng.sample::<f64, _>(StandardNormal);
        let mut offsets = vec![0.0; setup.channels];
        for o in offsets.iter_mut().skip(1) {
            *o = rng.random::<f64>() * setup.frame_period;
        }
        offsets[0] = sum - offsets[1..].iter().sum::<f64>();
        EntangledCopy {
            omega,
            offsets,
            tampered: false,
        }
    }

    pub fn channels(&self) -> usize {
        self.offsets.len()
    }

    /// Alice's local arrival time.
    pub fn alice_time(&self) -> f64 {
        self.offsets[0]
    }

    /// Times Bob reads off the public frame for his M−1 photons.
    pub fn bob_times(&self, setup: &ProtocolSetup) -> Vec<f64> {
        self.offsets[1..]
            .iter()
            .map(|a| (setup.true_distance + a).rem_euclid(setup.frame_period))
            .collect()
    }
}

/// Observable measured by one party on one copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisChoice {
    Time,
    Frequency,
}

impl BasisChoice {
    fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        if rng.random::<bool>() {
            BasisChoice::Time
        } else {
            BasisChoice::Frequency
        }
    }
}

/// What an eavesdropper does to the photons travelling to Bob.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EveStrategy {
    #[default]
    None,
    /// Intercept-resend in the time basis: the resent photons keep their
    /// times but lose the frequency correlation with Alice's photon.
    MeasureTime,
    /// Frequency measurement: outcomes still agree with Alice's, but the
    /// resent photons carry no timing correlation.
    MeasureFrequency,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EveConfig {
    pub strategy: EveStrategy,
    /// Fraction of copies intercepted, in [0, 1].
    pub intercept_fraction: f64,
}

impl EveConfig {
    pub fn none() -> Self {
        EveConfig {
            strategy: EveStrategy::None,
            intercept_fraction: 0.0,
        }
    }

    pub fn intercept_all(strategy: EveStrategy) -> Self {
        EveConfig {
            strategy,
            intercept_fraction: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let f = self.intercept_fraction;
        if (0.0..=1.0).contains(&f) {
            Ok(())
        } else {
            Err(QposError::param(
                "intercept_fraction",
                format!("must lie in [0, 1], got {f}"),
            ))
        }
    }
}

impl Default for EveConfig {
    fn default() -> Self {
        EveConfig::none()
    }
}

/// Applies one interception to a copy.
pub fn eve_intercept<R: Rng + ?Sized>(
    mut copy: EntangledCopy,
    strategy: EveStrategy,
    setup: &ProtocolSetup,
    rng: &mut R,
) -> EntangledCopy {
    match strategy {
        EveStrategy::None => {}
        EveStrategy::MeasureTime => copy.tampered = true,
        EveStrategy::MeasureFrequency => {
            for o in copy.offsets.iter_mut().skip(1) {
                *o = rng.random::<f64>() * setup.frame_period;
            }
        }
    }
    copy
}

fn wrap_centered(x: f64, period: f64) -> f64 {
    x - period * (x / period).round()
}

/// Alice's per-copy distance estimate from her own time and Bob's report.
pub fn combine_times(alice_time: f64, bob_times: &[f64], setup: &ProtocolSetup) -> f64 {
    let folded = wrap_centered(alice_time + bob_times.iter().sum::<f64>(), setup.frame_period);
    folded / bob_times.len() as f64
}

fn all_survive<R: Rng + ?Sized>(channels: usize, eta: f64, rng: &mut R) -> bool {
    (0..channels).fold(true, |all, _| (eta >= 1.0 || rng.random::<f64>() < eta) && all)
}

/// Result of a protocol-one session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolOneOutcome {
    /// Alice's pooled estimate of `true_distance`.
    pub estimate: Estimate,
    /// Bob's public broadcasts, one entry per surviving copy.
    pub broadcasts: Vec<Vec<f64>>,
    pub copies_lost: usize,
}

/// Alice learns her distance from Bob's broadcast arrival times; copies
/// with any lost photon (hers included) are discarded.
pub fn run_protocol_one<R: Rng + ?Sized>(
    setup: &ProtocolSetup,
    copies: usize,
    rng: &mut R,
) -> Result<ProtocolOneOutcome> {
    setup.validate()?;
    check_count("copies", copies, 1)?;
    let mut values = Vec::with_capacity(copies);
    let mut broadcasts = Vec::with_capacity(copies);
    for _ in 0..copies {
        let copy = EntangledCopy::prepare(setup, rng);
        if !all_survive(setup.channels, setup.eta, rng) {
            continue;
        }
        let bob = copy.bob_times(setup);
        values.push(combine_times(copy.alice_time(), &bob, setup));
        broadcasts.push(bob);
    }
    let copies_lost = copies - values.len();
    Ok(ProtocolOneOutcome {
        estimate: estimate_from(&values, copies)?,
        broadcasts,
        copies_lost,
    })
}

/// Frequency bin index of a measurement outcome.
pub fn frequency_bin(omega: f64, freq_bin: f64) -> i64 {
    (omega / freq_bin).floor() as i64
}

/// Default bin width: σ_ω / 8.
pub fn default_freq_bin(dtau: f64) -> f64 {
    1.0 / (16.0 * dtau)
}

/// Probability Σ p_k² that two independent N(0, σ_ω) frequencies fall in
/// the same bin of width `freq_bin`.
pub fn collision_probability(sigma_omega: f64, freq_bin: f64) -> Result<f64> {
    check_positive("sigma_omega", sigma_omega)?;
    check_positive("freq_bin", freq_bin)?;
    let reach = (12.0 * sigma_omega / freq_bin).ceil();
    if reach > MAX_COLLISION_BINS {
        return Err(QposError::SizeLimit(format!(
            "freq_bin {freq_bin} needs more than {MAX_COLLISION_BINS} bins"
        )));
    }
    let reach = reach as i64;
    let mut terms: Vec<f64> = (-reach..reach)
        .map(|k| {
            let lo = k as f64 * freq_bin / sigma_omega;
            let hi = (k + 1) as f64 * freq_bin / sigma_omega;
            // difference taken on the far side of the tail for accuracy
            let p = if lo >= 0.0 {
                normal_cdf(-lo) - normal_cdf(-hi)
            } else {
                normal_cdf(hi) - normal_cdf(lo)
            };
            p * p
        })
        .collect();
    terms.sort_by(|a, b| a.total_cmp(b));
    Ok(terms.into_iter().sum::<f64>().min(1.0))
}

/// Probability that at least one of `checked` frequency comparisons fails
/// when each copy is intercepted in the time basis with probability
/// `fraction`.
pub fn detection_probability(collision: f64, fraction: f64, checked: usize) -> f64 {
    let miss = 1.0 - fraction * (1.0 - collision);
    1.0 - miss.powi(checked.min(i32::MAX as usize) as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Clean,
    EavesdropperDetected,
    /// No copy survived sifting, so nothing could be checked.
    Inconclusive,
}

/// Public data attached to one copy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Broadcast {
    None,
    FrequencyBins { alice: i64, bob: i64 },
    /// Alice's time, used by Bob.
    AliceTime { time: f64 },
    /// Bob's times, used by Alice.
    BobTimes { times: Vec<f64> },
}

/// Transcript line for one copy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopyRecord {
    pub index: usize,
    pub alice_basis: BasisChoice,
    pub bob_basis: BasisChoice,
    /// At least one photon lost; such copies are dropped before sifting.
    pub lost: bool,
    pub intercepted: bool,
    pub sifted: bool,
    /// Outcome of the frequency comparison, Frequency-Frequency copies only.
    pub freq_check_pass: Option<bool>,
    pub broadcast: Broadcast,
}

/// The two parties' estimates of the distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartyEstimates {
    /// From Bob's broadcasts on the second half of the Time-Time copies.
    pub alice: Estimate,
    /// From Alice's broadcasts on the first half.
    pub bob: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSummary {
    pub copies: usize,
    pub lost: usize,
    pub sifted: usize,
    pub frequency_checks: usize,
    pub frequency_mismatches: usize,
    pub time_copies: usize,
    pub collision_probability: f64,
    pub verdict: Verdict,
    pub estimate: Option<PartyEstimates>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTranscript {
    pub records: Vec<CopyRecord>,
    pub summary: ProtocolSummary,
}

impl ProtocolTranscript {
    pub fn verdict(&self) -> Verdict {
        self.summary.verdict
    }

    pub fn estimate(&self) -> Option<&PartyEstimates> {
        self.summary.estimate.as_ref()
    }
}

/// Two-party session over `copies` shared copies with frequency checks.
pub fn run_protocol_two<R: Rng + ?Sized>(
    setup: &ProtocolSetup,
    copies: usize,
    freq_bin: f64,
    eve: EveConfig,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    setup.validate()?;
    check_count("r", copies, 4)?;
    eve.validate()?;
    let collision = collision_probability(setup.sigma_omega(), freq_bin)?;

    let mut records = Vec::with_capacity(copies);
    let mut time_copies: Vec<(usize, f64, Vec<f64>)> = Vec::new();
    let mut checks = 0;
    let mut mismatches = 0;
    for index in 0..copies {
        let alice_basis = BasisChoice::draw(rng);
        let bob_basis = BasisChoice::draw(rng);
        let mut copy = EntangledCopy::prepare(setup, rng);
        let intercepted = eve.strategy != EveStrategy::None
            && eve.intercept_fraction > 0.0
            && rng.random::<f64>() < eve.intercept_fraction;
        if intercepted {
            copy = eve_intercept(copy, eve.strategy, setup, rng);
        }
        let lost = !all_survive(setup.channels, setup.eta, rng);
        let sifted = !lost && alice_basis == bob_basis;
        let mut record = CopyRecord {
            index,
            alice_basis,
            bob_basis,
            lost,
            intercepted,
            sifted,
            freq_check_pass: None,
            broadcast: Broadcast::None,
        };
        if sifted {
            match alice_basis {
                BasisChoice::Frequency => {
                    let bob_omega = if copy.tampered {
                        setup.sigma_omega() * rng.sample::<f64, _>(StandardNormal)
                    } else {
                        copy.omega
                    };
                    let alice = frequency_bin(copy.omega, freq_bin);
                    let bob = frequency_bin(bob_omega, freq_bin);
                    checks += 1;
                    if alice != bob {
                        mismatches += 1;
                    }
                    record.freq_check_pass = Some(alice == bob);
                    record.broadcast = Broadcast::FrequencyBins { alice, bob };
                }
                BasisChoice::Time => {
                    time_copies.push((records.len(), copy.alice_time(), copy.bob_times(setup)));
                }
            }
        }
        records.push(record);
    }

    let sifted = records.iter().filter(|r| r.sifted).count();
    let verdict = if sifted == 0 {
        Verdict::Inconclusive
    } else if mismatches > 0 {
        Verdict::EavesdropperDetected
    } else {
        Verdict::Clean
    };

    let mut estimate = None;
    if verdict == Verdict::Clean {
        let half = time_copies.len() / 2;
        let mut for_bob = Vec::with_capacity(half);
        let mut for_alice = Vec::with_capacity(time_copies.len() - half);
        for (k, (slot, alice_time, bob_times)) in time_copies.iter().enumerate() {
            let value = combine_times(*alice_time, bob_times, setup);
            if k < half {
                records[*slot].broadcast = Broadcast::AliceTime { time: *alice_time };
                for_bob.push(value);
            } else {
                records[*slot].broadcast = Broadcast::BobTimes {
                    times: bob_times.clone(),
                };
                for_alice.push(value);
            }
        }
        if half > 0 {
            estimate = Some(PartyEstimates {
                alice: estimate_from(&for_alice, for_alice.len())?,
                bob: estimate_from(&for_bob, for_bob.len())?,
            });
        }
    }

    let lost = records.iter().filter(|r| r.lost).count();
    Ok(ProtocolTranscript {
        summary: ProtocolSummary {
            copies,
            lost,
            sifted,
            frequency_checks: checks,
            frequency_mismatches: mismatches,
            time_copies: time_copies.len(),
            collision_probability: collision,
            verdict,
            estimate,
        },
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::run_stream;
    use crate::stats::ks_two_sample;

    fn setup(channels: usize, eta: f64, distance: f64) -> ProtocolSetup {
        ProtocolSetup::new(channels, eta, 1.0, distance).unwrap()
    }

    #[test]
    fn copy_offsets_close_the_sum() {
        let s = setup(4, 1.0, 3.0);
        let mut rng = run_stream(1, 0);
        for _ in 0..100 {
            let c = EntangledCopy::prepare(&s, &mut rng);
            assert_eq!(c.channels(), 4);
            let total: f64 = c.offsets.iter().sum();
            assert!(total.abs() < 8.0);
            assert!(c.offsets[1..].iter().all(|a| (0.0..s.frame_period).contains(a)));
        }
    }

    #[test]
    fn single_copy_recovers_distance_within_noise() {
        let s = setup(3, 1.0, -12.5);
        let mut rng = run_stream(2, 0);
        for _ in 0..200 {
            let c = EntangledCopy::prepare(&s, &mut rng);
            let sum: f64 = c.offsets.iter().sum();
            let est = combine_times(c.alice_time(), &c.bob_times(&s), &s);
            assert!((est - (-12.5 + sum / 2.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn protocol_one_accuracy() {
        let s = setup(2, 1.0, 4.0);
        let out = run_protocol_one(&s, 10_000, &mut run_stream(3, 0)).unwrap();
        assert_eq!(out.copies_lost, 0);
        assert!((out.estimate.std_of_mean - 0.01).abs() < 0.0005);
        assert!((out.estimate.mean - 4.0).abs() < 0.04);
    }

    #[test]
    fn protocol_one_loss_discards_whole_copies() {
        let s = setup(3, 0.8, 1.0);
        let out = run_protocol_one(&s, 20_000, &mut run_stream(4, 0)).unwrap();
        let kept = out.broadcasts.len() as f64 / 20_000.0;
        assert!((kept - 0.512).abs() < 0.015);
        assert!(out.broadcasts.iter().all(|b| b.len() == 2));
        assert!((out.estimate.statistic_std() - 0.5).abs() < 0.02);
    }

    #[test]
    fn protocol_one_total_loss_fails() {
        let s = setup(2, 1e-9, 1.0);
        let err = run_protocol_one(&s, 10, &mut run_stream(5, 0)).unwrap_err();
        assert_eq!(err, QposError::NoUsableRuns);
    }

    #[test]
    fn broadcast_marginal_ignores_distance() {
        let near = setup(3, 1.0, 0.0);
        let far = ProtocolSetup {
            true_distance: 37.0,
            ..near
        };
        let a = run_protocol_one(&near, 5_000, &mut run_stream(6, 0)).unwrap();
        let b = run_protocol_one(&far, 5_000, &mut run_stream(6, 1)).unwrap();
        let xa: Vec<f64> = a.broadcasts.iter().map(|v| v[0]).collect();
        let xb: Vec<f64> = b.broadcasts.iter().map(|v| v[0]).collect();
        let (_, p) = ks_two_sample(&xa, &xb);
        assert!(p > 0.01);
    }

    #[test]
    fn setup_validation() {
        assert!(ProtocolSetup::new(1, 1.0, 1.0, 0.0).is_err());
        assert!(ProtocolSetup::new(2, 0.0, 1.0, 0.0).is_err());
        assert!(ProtocolSetup::new(2, 1.0, 1.0, f64::NAN).is_err());
        let s = setup(5, 1.0, 100.0);
        assert!(s.with_frame_period(100.0).is_err());
    }

    #[test]
    fn collision_probability_limits() {
        // width-σ bins: Σ p_k² for the standard normal
        let c = collision_probability(1.0, 1.0).unwrap();
        assert!((c - 0.2708922931370283).abs() < 1e-9, "{c}");
        let coarse = collision_probability(1.0, 100.0).unwrap();
        assert!((coarse - 0.5).abs() < 1e-12);
        let fine = collision_probability(1.0, 1e-3).unwrap();
        // → bin / (2√π σ)
        assert!((fine / (1e-3 / (2.0 * std::f64::consts::PI.sqrt())) - 1.0).abs() < 1e-4);
        assert!(collision_probability(1.0, 1e-9).is_err());
    }

    #[test]
    fn eve_none_is_identity() {
        let s = setup(3, 1.0, 1.0);
        let mut rng = run_stream(7, 0);
        let c = EntangledCopy::prepare(&s, &mut rng);
        assert_eq!(eve_intercept(c.clone(), EveStrategy::None, &s, &mut rng), c);
        let t = eve_intercept(c.clone(), EveStrategy::MeasureTime, &s, &mut rng);
        assert!(t.tampered);
        assert_eq!(t.offsets, c.offsets);
        let f = eve_intercept(c.clone(), EveStrategy::MeasureFrequency, &s, &mut rng);
        assert!(!f.tampered);
        assert_eq!(f.omega, c.omega);
        assert_ne!(f.offsets[1], c.offsets[1]);
    }

    #[test]
    fn clean_sessions_agree_and_estimate() {
        let s = setup(3, 1.0, 2.0);
        let bin = default_freq_bin(1.0);
        for seed in 0..20 {
            let t = run_protocol_two(&s, 64, bin, EveConfig::none(), &mut run_stream(8, seed))
                .unwrap();
            assert_eq!(t.verdict(), Verdict::Clean);
            assert_eq!(t.summary.frequency_mismatches, 0);
            for r in &t.records {
                assert_eq!(r.sifted, r.alice_basis == r.bob_basis);
                assert_eq!(
                    r.freq_check_pass.is_some(),
                    r.sifted && r.alice_basis == BasisChoice::Frequency
                );
            }
            let e = t.estimate().unwrap();
            assert!((e.alice.mean - 2.0).abs() < 3.0);
            assert!((e.bob.mean - 2.0).abs() < 3.0);
        }
    }

    #[test]
    fn time_interception_is_detected() {
        let s = setup(2, 1.0, 0.0);
        let eve = EveConfig::intercept_all(EveStrategy::MeasureTime);
        let t = run_protocol_two(&s, 200, 0.5, eve, &mut run_stream(9, 0)).unwrap();
        assert_eq!(t.verdict(), Verdict::EavesdropperDetected);
        assert!(t.estimate().is_none());
    }

    #[test]
    fn frequency_interception_passes_checks() {
        let s = setup(2, 1.0, 0.0);
        let eve = EveConfig::intercept_all(EveStrategy::MeasureFrequency);
        let t = run_protocol_two(&s, 200, 0.5, eve, &mut run_stream(10, 0)).unwrap();
        assert_eq!(t.verdict(), Verdict::Clean);
        // but the timing is ruined
        let e = t.estimate().unwrap();
        assert!(e.alice.statistic_std() > 50.0);
    }

    #[test]
    fn lost_copies_are_never_sifted() {
        let s = setup(3, 0.5, 0.0);
        let t = run_protocol_two(&s, 400, 0.5, EveConfig::none(), &mut run_stream(11, 0)).unwrap();
        assert!(t.records.iter().all(|r| !(r.lost && r.sifted)));
        assert!(t.summary.lost > 250);
    }

    #[test]
    fn parameter_errors() {
        let s = setup(2, 1.0, 0.0);
        let mut rng = run_stream(12, 0);
        assert!(run_protocol_two(&s, 3, 0.5, EveConfig::none(), &mut rng).is_err());
        assert!(run_protocol_two(&s, 8, 0.0, EveConfig::none(), &mut rng).is_err());
        let bad = EveConfig {
            strategy: EveStrategy::MeasureTime,
            intercept_fraction: 1.5,
        };
        assert!(run_protocol_two(&s, 8, 0.5, bad, &mut rng).is_err());
    }

    #[test]
    fn detection_probability_formula() {
        assert_eq!(detection_probability(0.3, 1.0, 0), 0.0);
        assert!((detection_probability(0.3, 1.0, 2) - 0.91).abs() < 1e-15);
        assert!(detection_probability(0.3, 0.25, 5) < detection_probability(0.3, 0.5, 5));
    }
}
