use qpos_core::protocol::{
    collision_probability, default_freq_bin, detection_probability, run_protocol_one,
    run_protocol_two, EveConfig, EveStrategy, ProtocolSetup, Verdict,
};
use qpos_core::rng::{map_runs, run_stream};
use qpos_core::stats::{binomial_half_width, ks_two_sample};

#[test]
fn protocol_one_per_copy_accuracy() {
    let setup = ProtocolSetup::new(5, 1.0, 1.0, 3.5).unwrap();
    let out = run_protocol_one(&setup, 10_000, &mut run_stream(1, 0)).unwrap();
    let std = out.estimate.statistic_std();
    assert!((std / 0.25 - 1.0).abs() < 0.02, "per-copy std {std}");
    assert!((out.estimate.mean - 3.5).abs() < 4.0 * out.estimate.std_of_mean);
}

#[test]
fn protocol_one_pooled_accuracy_under_loss() {
    let setup = ProtocolSetup::new(3, 0.9, 1.0, 0.0).unwrap();
    let out = run_protocol_one(&setup, 40_000, &mut run_stream(2, 0)).unwrap();
    let expected = 0.5 / (40_000.0 * 0.9f64.powi(3)).sqrt();
    assert!((out.estimate.std_of_mean / expected - 1.0).abs() < 0.03);
}

#[test]
fn bob_broadcast_carries_no_distance() {
    let base = ProtocolSetup::new(5, 1.0, 1.0, 0.0).unwrap();
    let shifted = ProtocolSetup {
        true_distance: 91.0,
        ..base
    };
    let a = run_protocol_one(&base, 10_000, &mut run_stream(3, 0)).unwrap();
    let b = run_protocol_one(&shifted, 10_000, &mut run_stream(3, 1)).unwrap();
    let first = |o: &qpos_core::protocol::ProtocolOneOutcome| -> Vec<f64> {
        o.broadcasts.iter().map(|v| v[0]).collect()
    };
    let (_, p) = ks_two_sample(&first(&a), &first(&b));
    assert!(p > 0.01, "KS p = {p}");
}

#[test]
fn sifting_keeps_half_the_copies() {
    let setup = ProtocolSetup::new(3, 1.0, 1.0, 0.0).unwrap();
    let r = 4_000;
    let t = run_protocol_two(&setup, r, default_freq_bin(1.0), EveConfig::none(), &mut run_stream(4, 0))
        .unwrap();
    let frac = t.summary.sifted as f64 / r as f64;
    assert!((frac - 0.5).abs() < binomial_half_width(0.5, r, 3.0));
}

#[test]
fn clean_channel_always_clean() {
    let setup = ProtocolSetup::new(3, 1.0, 1.0, 1.0).unwrap();
    let verdicts = map_runs(100, 5, None, |_, rng| {
        run_protocol_two(&setup, 32, default_freq_bin(1.0), EveConfig::none(), rng)
            .unwrap()
            .verdict()
    });
    assert!(verdicts.iter().all(|v| *v == Verdict::Clean));
}

#[test]
fn detection_rate_matches_bin_model() {
    let setup = ProtocolSetup::new(2, 1.0, 1.0, 0.0).unwrap();
    let bin = setup.sigma_omega();
    let c = collision_probability(setup.sigma_omega(), bin).unwrap();
    let sessions = 500;
    let mut rates = Vec::new();
    for (k, f) in [0.25, 0.5, 1.0].into_iter().enumerate() {
        let eve = EveConfig {
            strategy: EveStrategy::MeasureTime,
            intercept_fraction: f,
        };
        let outcomes = map_runs(sessions, 6 + k as u64, None, |_, rng| {
            let t = run_protocol_two(&setup, 8, bin, eve, rng).unwrap();
            (
                t.verdict() == Verdict::EavesdropperDetected,
                detection_probability(c, f, t.summary.frequency_checks),
            )
        });
        let observed = outcomes.iter().filter(|o| o.0).count() as f64 / sessions as f64;
        let expected = outcomes.iter().map(|o| o.1).sum::<f64>() / sessions as f64;
        let hw = binomial_half_width(expected, sessions, 3.0);
        assert!((observed - expected).abs() < hw, "f={f}: {observed} vs {expected}");
        rates.push(observed);
    }
    assert!(rates.windows(2).all(|w| w[0] < w[1]), "{rates:?}");
}

#[test]
fn inconclusive_without_survivors() {
    let setup = ProtocolSetup::new(2, 1e-6, 1.0, 0.0).unwrap();
    let t = run_protocol_two(&setup, 16, 0.5, EveConfig::none(), &mut run_stream(9, 0)).unwrap();
    assert_eq!(t.verdict(), Verdict::Inconclusive);
    assert!(t.estimate().is_none());
}
