//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use qpos_cli::args::RegionMapArgs;
use qpos_cli::commands::region_map;
use qpos_cli::output::Cell;
use qpos_core::losschannel::{
    apply_loss, beam_splitter_deviation, kraus_operators, post_loss_entangled, post_loss_unentangled,
    DensityMatrix, FrequencyGrid,
};
use qpos_core::montecarlo::{simulate, simulate_estimate, std_per_attempt, SimulationConfig};
use qpos_core::protocol::{
    collision_probability, detection_probability, run_protocol_one, run_protocol_two, EveConfig,
    EveStrategy, ProtocolSetup, Verdict,
};
use qpos_core::rng::{map_runs, run_stream};
use qpos_core::states::{
    gain_lambda, gain_root, group_lossy_std, lossless_accuracy, retained_group_prob, threshold_eta,
    unentangled_lossy_std_r,
};
use qpos_core::stats::{binomial_half_width, bootstrap_se, ks_two_sample, sample_std};
use qpos_core::{GroupSpectrum, StateFamily};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn require(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn statistics(family: StateFamily, eta: f64, runs: usize, seed: u64) -> Vec<Option<f64>> {
    let config = SimulationConfig {
        family,
        eta,
        dtau: 1.0,
        true_offset: 0.0,
        runs,
        seed,
    };
    simulate(&config, None).unwrap().into_iter().map(|r| r.statistic).collect()
}

fn usable(stats: &[Option<f64>]) -> Vec<f64> {
    stats.iter().filter_map(|s| *s).collect()
}

fn gain_at_unit_efficiency() -> Check {
    let mut worst: f64 = 0.0;
    for m in [1usize, 2, 4, 9, 16, 64] {
        let err = (gain_lambda(m, 1.0).map_err(|e| e.to_string())? - (m as f64).sqrt()).abs();
        worst = worst.max(err);
    }
    require(worst <= 1e-12, format!("max |Λ(M,1) − √M| = {worst:.3e}"))
}

fn threshold_convergence() -> Check {
    let gap = |m: usize| -> Result<f64, String> {
        Ok((gain_root(m).map_err(|e| e.to_string())? - threshold_eta(m).map_err(|e| e.to_string())?).abs())
    };
    let mut worst_large: f64 = 0.0;
    for m in [50usize, 64, 100, 200, 500] {
        worst_large = worst_large.max(gap(m)?);
    }
    let small = gap(2)?;
    require(
        worst_large < 0.01 && small > 1e-3,
        format!("max gap M≥50 = {worst_large:.3e}, gap at M=2 = {small:.4}"),
    )
}

fn entangled_monte_carlo() -> Check {
    let start = Instant::now();
    let family = StateFamily::MaxEntangled {
        channels: 3,
        photons: 1,
    };
    let config = SimulationConfig {
        family,
        eta: 1.0,
        dtau: 1.0,
        true_offset: 0.0,
        runs: 100_000,
        seed: 3,
    };
    let est = simulate_estimate(&config, None).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    let rel = est.statistic_std() / (1.0 / 3.0) - 1.0;
    require(
        rel.abs() < 0.02 && elapsed < 5.0,
        format!("std/(Δτ/3) − 1 = {rel:+.4}, runtime {elapsed:.2} s"),
    )
}

fn lossy_unentangled() -> Check {
    let closed = unentangled_lossy_std_r(2, 0.5, 1.0, 1.0).map_err(|e| e.to_string())?;
    let oracle = (10.0f64 / 9.0).sqrt();
    let stats = statistics(StateFamily::Unentangled { channels: 2 }, 0.5, 100_000, 4);
    let empirical = std_per_attempt(&stats);
    let se = bootstrap_se(&stats, std_per_attempt, 200, 40);
    let z = (empirical - oracle) / se;
    require(
        (closed - oracle).abs() < 1e-12 && z.abs() < 3.0,
        format!("empirical {empirical:.5} vs √(10/9) = {oracle:.5} ({z:+.2} bootstrap σ)"),
    )
}

fn kraus_beam_splitter() -> Check {
    let mut dev: f64 = 0.0;
    let mut trace: f64 = 0.0;
    for (i, eta) in [0.1, 0.36, 0.5, 0.9, 1.0].into_iter().enumerate() {
        dev = dev.max(beam_splitter_deviation(eta, 6, 4).map_err(|e| e.to_string())?);
        let kraus = kraus_operators(eta, 6).map_err(|e| e.to_string())?;
        for s in 0..50u64 {
            let rho = DensityMatrix::random(6, &mut run_stream(500 + i as u64, s)).unwrap();
            let out = apply_loss(&rho, &kraus).map_err(|e| e.to_string())?;
            trace = trace.max((out.trace() - 1.0).abs());
        }
    }
    require(
        dev < 1e-8 && trace < 1e-12,
        format!("max channel deviation {dev:.3e}, max trace error {trace:.3e}"),
    )
}

fn loss_sector_structure() -> Check {
    let grid = FrequencyGrid::gaussian(6, 0.5, 0.3).map_err(|e| e.to_string())?;
    let en = post_loss_entangled(3, 0.6, &grid).map_err(|e| e.to_string())?;
    let un = post_loss_unentangled(3, 0.6, &grid).map_err(|e| e.to_string())?;
    let c = en.report.loss_sector_coherence;
    let u = &un.report;
    require(
        c < 1e-12 && u.coherence_error < 1e-12 && u.min_offdiag > 1e-6,
        format!(
            "entangled loss-sector coherence {c:.3e}; unentangled φφ* error {:.3e}, min off-diagonal {:.3e}",
            u.coherence_error, u.min_offdiag
        ),
    )
}

fn partial_entanglement() -> Check {
    let mut worst: f64 = 0.0;
    for (i, (m, q)) in [(4usize, 1usize), (4, 2), (4, 4)].into_iter().enumerate() {
        let family = StateFamily::PartialEntangled {
            channels: m,
            entangled: q,
        };
        let stats = usable(&statistics(family, 1.0, 100_000, 70 + i as u64));
        let target = lossless_accuracy(&family, 1.0).map_err(|e| e.to_string())?;
        worst = worst.max((sample_std(&stats) / target - 1.0).abs());
    }
    require(worst < 0.02, format!("max relative std error {worst:.4}"))
}

fn group_formulas() -> Check {
    let mut sum_err: f64 = 0.0;
    for groups in 1..=8 {
        for size in 1..=4 {
            for eta in [0.05, 0.3, 0.7, 0.95, 1.0] {
                let total: f64 = (1..=groups)
                    .map(|g| retained_group_prob(groups, size, eta, g).unwrap())
                    .sum();
                sum_err = sum_err.max((total - 1.0).abs());
            }
        }
    }
    let spectrum = GroupSpectrum::from_ratio(2.0).unwrap();
    let family = StateFamily::GroupEntangled {
        groups: 3,
        group_size: 2,
        spectrum,
    };
    let stats = usable(&statistics(family, 0.7, 100_000, 8));
    let se = bootstrap_se(&stats, sample_std, 200, 80);
    let analytic = group_lossy_std(3, 2, 0.7, &spectrum).map_err(|e| e.to_string())?;
    let z = (sample_std(&stats) - analytic) / se;
    require(
        sum_err <= 1e-12 && z.abs() < 3.0,
        format!("max |ΣP_g − 1| = {sum_err:.3e}; group std {z:+.2} bootstrap σ from closed form"),
    )
}

fn region_orderings() -> Check {
    let table = region_map(&RegionMapArgs::default()).map_err(|e| e.to_string())?;
    let col = table.column("region_label").unwrap();
    let labels: std::collections::BTreeSet<String> = table
        .rows
        .iter()
        .filter_map(|r| match &r[col] {
            Cell::Text(s) => Some(s.clone()),
            _ => None,
        })
        .collect();
    let wanted = ["en>G>un", "G>en>un", "G>un>en", "un>G>en"];
    let missing: Vec<&str> = wanted.iter().copied().filter(|w| !labels.contains(*w)).collect();
    require(
        missing.is_empty(),
        format!("{} cells, {} distinct labels, missing {missing:?}", table.rows.len(), labels.len()),
    )
}

fn protocol_one() -> Check {
    let setup = ProtocolSetup::new(5, 1.0, 1.0, 2.0).map_err(|e| e.to_string())?;
    let out = run_protocol_one(&setup, 10_000, &mut run_stream(10, 0)).map_err(|e| e.to_string())?;
    let rel = out.estimate.statistic_std() / 0.25 - 1.0;
    let shifted = ProtocolSetup {
        true_distance: 40.0,
        ..setup
    };
    let other = run_protocol_one(&shifted, 10_000, &mut run_stream(10, 1)).map_err(|e| e.to_string())?;
    let first = |b: &[Vec<f64>]| b.iter().map(|v| v[0]).collect::<Vec<f64>>();
    let (_, p) = ks_two_sample(&first(&out.broadcasts), &first(&other.broadcasts));
    require(
        rel.abs() < 0.02 && p > 0.01,
        format!("per-copy std/(Δτ/4) − 1 = {rel:+.4}; KS p = {p:.3}"),
    )
}

fn protocol_two() -> Check {
    let setup = ProtocolSetup::new(3, 1.0, 1.0, 1.0).map_err(|e| e.to_string())?;
    let bin = setup.sigma_omega();
    let clean = map_runs(100, 11, None, |_, rng| {
        run_protocol_two(&setup, 8, bin, EveConfig::none(), rng).map(|t| t.verdict())
    });
    let clean_count = clean.iter().filter(|v| matches!(v, Ok(Verdict::Clean))).count();

    let c = collision_probability(setup.sigma_omega(), bin).map_err(|e| e.to_string())?;
    let eve = EveConfig::intercept_all(EveStrategy::MeasureTime);
    let sessions = 500;
    let attacked = map_runs(sessions, 12, None, |_, rng| {
        run_protocol_two(&setup, 8, bin, eve, rng).map(|t| {
            (
                t.verdict() == Verdict::EavesdropperDetected,
                detection_probability(c, 1.0, t.summary.frequency_checks),
            )
        })
    });
    let attacked: Vec<(bool, f64)> = attacked.into_iter().collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let observed = attacked.iter().filter(|a| a.0).count() as f64 / sessions as f64;
    let expected = attacked.iter().map(|a| a.1).sum::<f64>() / sessions as f64;
    let hw = binomial_half_width(expected, sessions, 3.0);
    require(
        clean_count == 100 && (observed - expected).abs() <= hw,
        format!(
            "clean {clean_count}/100; detection {observed:.3} vs 1−c^n mean {expected:.3} ± {hw:.3} (c = {c:.4})"
        ),
    )
}

fn run_cli(args: &[&str], threads: &str, out: &Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_qpos"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("QPOS_THREADS", threads)
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("`qpos {}` exited with {status}", args.join(" ")));
    }
    std::fs::read(out).map_err(|e| e.to_string())
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let commands: [&[&str]; 8] = [
        &["accuracy", "--family", "un", "--M", "2", "--eta", "0.5,0.9", "--seed", "1"],
        &["region-map", "--seed", "1"],
        &["gain-surface", "--seed", "1", "--format", "json"],
        &["montecarlo", "--family", "group", "--G", "3", "--K", "2", "--eta", "0.7,1", "--runs", "20000", "--seed", "2"],
        &["montecarlo", "--family", "cl", "--M", "3", "--N", "2", "--eta", "0.5", "--runs", "20000", "--seed", "2"],
        &["kraus-verify", "--seed", "3"],
        &["protocol", "--mode", "two", "--sessions", "20", "--eve", "measure-time", "--intercept-fraction", "0.5", "--seed", "4"],
        &["protocol", "--mode", "one", "--sessions", "4", "--copies", "200", "--format", "csv", "--seed", "4"],
    ];
    for (i, args) in commands.iter().enumerate() {
        let a = run_cli(args, "1", &dir.path().join(format!("{i}-a")))?;
        let b = run_cli(args, "4", &dir.path().join(format!("{i}-b")))?;
        let c = run_cli(args, "4", &dir.path().join(format!("{i}-c")))?;
        if a != b || b != c {
            return Err(format!("`qpos {}` output differs between runs", args.join(" ")));
        }
    }
    Ok(format!("{} commands byte-identical under QPOS_THREADS ∈ {{1, 4}}", commands.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("gain at unit efficiency", gain_at_unit_efficiency),
        ("threshold convergence", threshold_convergence),
        ("entangled Monte Carlo", entangled_monte_carlo),
        ("lossy unentangled", lossy_unentangled),
        ("Kraus / beam-splitter equivalence", kraus_beam_splitter),
        ("loss-sector structure", loss_sector_structure),
        ("partial entanglement", partial_entanglement),
        ("group formulas", group_formulas),
        ("region map orderings", region_orderings),
        ("protocol one", protocol_one),
        ("protocol two", protocol_two),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
