use anyhow::{bail, ensure, Context, Result};
use serde_json::{json, Value};

use qpos_core::losschannel::{beam_splitter_deviation, kraus_operators, apply_loss, DensityMatrix};
use qpos_core::montecarlo::{simulate_estimate, SimulationConfig};
use qpos_core::protocol::{
    default_freq_bin, detection_probability, run_protocol_one, run_protocol_two, EveConfig,
    EveStrategy, ProtocolSetup, ProtocolTranscript,
};
use qpos_core::rng::{derive_seed, map_runs, run_stream};
use qpos_core::states::{self, classify_region, gain_lambda, threshold_eta};
use qpos_core::{GroupSpectrum, StateFamily};

use crate::args::{
    AccuracyArgs, EveArg, FamilyArgs, FamilyKind, GridArgs, KrausArgs, MonteCarloArgs,
    ProtocolArgs, ProtocolMode, RegionMapArgs,
};
use crate::grid::{AxisSpec, Scale, SweepGrid};
use crate::output::{normalize_numbers, Cell, Format, Report, Table};

/// Worker cap from `QPOS_THREADS`; unset means all cores.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var("QPOS_THREADS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .with_context(|| format!("QPOS_THREADS must be a positive integer, got {v:?}"))?;
            ensure!(n >= 1, "QPOS_THREADS must be at least 1");
            Ok(Some(n))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => bail!("QPOS_THREADS: {e}"),
    }
}

/// A family plus the flag values needed to print it back.
struct FamilySpec {
    family: StateFamily,
    ratio: Option<f64>,
}

impl FamilySpec {
    fn parse(a: &FamilyArgs) -> Result<Self> {
        let kind = a.family.context("--family is required")?;
        let need = |v: Option<usize>, flag: &str| v.with_context(|| format!("--{flag} is required for this family"));
        let mut ratio = None;
        let family = match kind {
            FamilyKind::Cl => StateFamily::Classical {
                channels: need(a.m, "M")?,
                mean_photons: a.n.unwrap_or(1.0),
            },
            FamilyKind::En => {
                let n = a.n.unwrap_or(1.0);
                ensure!(
                    n >= 1.0 && n.fract() == 0.0,
                    "--N must be a positive integer for the entangled family, got {n}"
                );
                StateFamily::MaxEntangled {
                    channels: need(a.m, "M")?,
                    photons: n as usize,
                }
            }
            FamilyKind::Un => StateFamily::Unentangled {
                channels: need(a.m, "M")?,
            },
            FamilyKind::Partial => StateFamily::PartialEntangled {
                channels: need(a.m, "M")?,
                entangled: need(a.q, "Q")?,
            },
            FamilyKind::Group => {
                let r = a.ratio.unwrap_or(2.0);
                ratio = Some(r);
                let groups = need(a.g, "G")?;
                let group_size = need(a.k, "K")?;
                if let Some(m) = a.m {
                    ensure!(m == groups * group_size, "--M = {m} must equal G·K = {}", groups * group_size);
                }
                StateFamily::GroupEntangled {
                    groups,
                    group_size,
                    spectrum: GroupSpectrum::from_ratio(r)?,
                }
            }
        };
        family.validate()?;
        Ok(FamilySpec { family, ratio })
    }

    /// family, M, N, Q, G, K
    fn cells(&self) -> Vec<Cell> {
        let f = &self.family;
        let (n, q, g, k) = match *f {
            StateFamily::Classical { mean_photons, .. } => (Cell::Float(mean_photons), None, None, None),
            StateFamily::MaxEntangled { photons, .. } => (photons.into(), None, None, None),
            StateFamily::Unentangled { .. } => (Cell::Empty, None, None, None),
            StateFamily::PartialEntangled { entangled, .. } => (Cell::Empty, Some(entangled), None, None),
            StateFamily::GroupEntangled {
                groups, group_size, ..
            } => (Cell::Empty, None, Some(groups), Some(group_size)),
        };
        vec![f.short_name().into(), f.channels().into(), n, q.into(), g.into(), k.into()]
    }
}

fn etas(given: &Option<Vec<f64>>, default: &[f64]) -> Result<Vec<f64>> {
    let v = given.clone().unwrap_or_else(|| default.to_vec());
    ensure!(!v.is_empty(), "--eta needs at least one value");
    Ok(v)
}

pub fn accuracy(a: &AccuracyArgs) -> Result<Table> {
    let spec = FamilySpec::parse(&a.family)?;
    let dtau = a.dtau.unwrap_or(1.0);
    let r = a.r.unwrap_or(1.0);
    let mut t = Table::new(vec![
        "family",
        "M",
        "N",
        "Q",
        "G",
        "K",
        "ratio",
        "eta",
        "dtau",
        "r",
        "delta_t_lossless",
        "delta_t_per_run",
        "delta_t_r_runs",
        "usable_run_fraction",
    ]);
    let lossless = states::lossless_accuracy(&spec.family, dtau)?;
    for eta in etas(&a.eta, &[1.0])? {
        let rep = states::accuracy_report(&spec.family, eta, dtau, r)?;
        let mut row = spec.cells();
        row.extend([
            spec.ratio.into(),
            eta.into(),
            dtau.into(),
            r.into(),
            lossless.into(),
            rep.delta_t_per_run.into(),
            rep.delta_t_r_runs.into(),
            rep.usable_run_fraction.into(),
        ]);
        t.push(row);
    }
    Ok(t)
}

fn grid(a: &GridArgs, m_default: (f64, f64, usize)) -> Result<SweepGrid> {
    let m = AxisSpec::new(
        "M",
        a.m_min.unwrap_or(m_default.0),
        a.m_max.unwrap_or(m_default.1),
        a.m_points.unwrap_or(m_default.2),
        a.m_scale.unwrap_or(Scale::Linear),
    )?;
    let eta = AxisSpec::new(
        "eta",
        a.eta_min.unwrap_or(0.02),
        a.eta_max.unwrap_or(1.0),
        a.eta_points.unwrap_or(50),
        a.eta_scale.unwrap_or(Scale::Linear),
    )?;
    SweepGrid::new(m, eta)
}

pub fn region_map(a: &RegionMapArgs) -> Result<Table> {
    let g = grid(&a.grid, (2.0, 60.0, 30))?;
    let k = a.k.unwrap_or(2);
    let ratio = a.ratio.unwrap_or(2.0);
    let mut t = Table::new(vec!["M", "eta", "lambda", "threshold", "region_label"]);
    for (m, eta) in g.points()? {
        ensure!(m >= 2, "region map needs M >= 2, got {m}");
        ensure!(m % k == 0, "M = {m} is not a multiple of K = {k}");
        let label = classify_region(m, eta, k, ratio)?;
        t.push(vec![
            m.into(),
            eta.into(),
            gain_lambda(m, eta)?.into(),
            threshold_eta(m)?.into(),
            label.to_string().into(),
        ]);
    }
    Ok(t)
}

pub fn gain_surface(a: &GridArgs) -> Result<Table> {
    let g = grid(a, (1.0, 64.0, 64))?;
    let mut t = Table::new(vec!["M", "eta", "lambda"]);
    for (m, eta) in g.points()? {
        t.push(vec![m.into(), eta.into(), gain_lambda(m, eta)?.into()]);
    }
    Ok(t)
}

pub fn montecarlo(a: &MonteCarloArgs, seed: u64, threads: Option<usize>) -> Result<Table> {
    let spec = FamilySpec::parse(&a.family)?;
    let runs = a.runs.unwrap_or(100_000);
    let dtau = a.dtau.unwrap_or(1.0);
    let mut t = Table::new(vec![
        "family",
        "M",
        "N",
        "Q",
        "G",
        "K",
        "eta",
        "runs",
        "runs_used",
        "mean",
        "std_of_mean",
        "analytic_std",
    ]);
    for (i, eta) in etas(&a.eta, &[1.0])?.into_iter().enumerate() {
        let config = SimulationConfig {
            family: spec.family,
            eta,
            dtau,
            true_offset: a.offset.unwrap_or(0.0),
            runs,
            seed: derive_seed(seed, i as u64),
        };
        let est = simulate_estimate(&config, threads)?;
        let mut row = spec.cells();
        row.extend([
            eta.into(),
            runs.into(),
            est.runs_used.into(),
            est.mean.into(),
            est.std_of_mean.into(),
            states::lossy_std(&spec.family, eta, dtau)?.into(),
        ]);
        t.push(row);
    }
    Ok(t)
}

pub fn kraus_verify(a: &KrausArgs, seed: u64) -> Result<Table> {
    let dim = a.dim.unwrap_or(6);
    ensure!(dim >= 2, "--dim must be at least 2, got {dim}");
    let max_photons = a.max_photons.unwrap_or(dim - 2);
    ensure!(max_photons < dim, "--max-photons must be below dim = {dim}");
    let samples = a.samples.unwrap_or(100);
    let mut t = Table::new(vec![
        "eta",
        "dim",
        "max_photons",
        "max_deviation",
        "completeness_error",
        "max_trace_error",
        "min_eigenvalue",
    ]);
    for (i, eta) in etas(&a.eta, &[0.1, 0.36, 0.5, 0.9, 1.0])?.into_iter().enumerate() {
        let kraus = kraus_operators(eta, dim)?;
        let mut trace_err: f64 = 0.0;
        let mut min_eig = f64::INFINITY;
        let row_seed = derive_seed(seed, i as u64);
        for s in 0..samples {
            let rho = DensityMatrix::random(dim, &mut run_stream(row_seed, s as u64))?;
            let out = apply_loss(&rho, &kraus)?;
            trace_err = trace_err.max((out.trace() - 1.0).abs());
            min_eig = min_eig.min(out.min_eigenvalue());
        }
        t.push(vec![
            eta.into(),
            dim.into(),
            max_photons.into(),
            beam_splitter_deviation(eta, dim, max_photons)?.into(),
            kraus.completeness_error().into(),
            trace_err.into(),
            if samples > 0 { min_eig.into() } else { Cell::Empty },
        ]);
    }
    Ok(t)
}

fn eve_config(a: &ProtocolArgs) -> Result<EveConfig> {
    let strategy = match a.eve.unwrap_or(EveArg::None) {
        EveArg::None => EveStrategy::None,
        EveArg::MeasureTime => EveStrategy::MeasureTime,
        EveArg::MeasureFrequency => EveStrategy::MeasureFrequency,
    };
    let default_fraction = if strategy == EveStrategy::None { 0.0 } else { 1.0 };
    let eve = EveConfig {
        strategy,
        intercept_fraction: a.intercept_fraction.unwrap_or(default_fraction),
    };
    eve.validate()?;
    Ok(eve)
}

pub fn protocol(a: &ProtocolArgs, seed: u64, threads: Option<usize>, format: Format) -> Result<Report> {
    let mode = a.mode.unwrap_or(ProtocolMode::Two);
    let dtau = a.dtau.unwrap_or(1.0);
    let mut setup = ProtocolSetup::new(a.m.unwrap_or(3), a.eta.unwrap_or(1.0), dtau, a.distance.unwrap_or(0.0))?;
    if let Some(l) = a.frame_period {
        setup = setup.with_frame_period(l)?;
    }
    let copies = a.copies.unwrap_or(64);
    let sessions = a.sessions.unwrap_or(1);
    ensure!(sessions >= 1, "--sessions must be at least 1");
    match mode {
        ProtocolMode::One => protocol_one(&setup, copies, sessions, seed, threads, format),
        ProtocolMode::Two => {
            let freq_bin = a.freq_bin.unwrap_or_else(|| default_freq_bin(dtau));
            let eve = eve_config(a)?;
            let results = map_runs(sessions, seed, threads, |_, rng| {
                run_protocol_two(&setup, copies, freq_bin, eve, rng)
            });
            let transcripts = results.into_iter().collect::<qpos_core::Result<Vec<_>>>()?;
            Ok(match format {
                Format::Json => Report::Records(protocol_two_records(&transcripts, eve)?),
                Format::Csv => Report::Table(protocol_two_table(&transcripts, eve)),
            })
        }
    }
}

fn protocol_one(
    setup: &ProtocolSetup,
    copies: usize,
    sessions: usize,
    seed: u64,
    threads: Option<usize>,
    format: Format,
) -> Result<Report> {
    let results = map_runs(sessions, seed, threads, |_, rng| run_protocol_one(setup, copies, rng));
    let outcomes = results.into_iter().collect::<qpos_core::Result<Vec<_>>>()?;
    Ok(match format {
        Format::Json => {
            let mut records = Vec::new();
            for (s, o) in outcomes.iter().enumerate() {
                for (i, b) in o.broadcasts.iter().enumerate() {
                    records.push(json!({"session": s, "index": i, "bob_times": b}));
                }
                records.push(json!({
                    "session": s,
                    "summary": {
                        "mode": "one",
                        "copies": copies,
                        "copies_lost": o.copies_lost,
                        "estimate": o.estimate,
                        "per_copy_std": o.estimate.statistic_std(),
                    }
                }));
            }
            records.iter_mut().for_each(normalize_numbers);
            Report::Records(records)
        }
        Format::Csv => {
            let mut t = Table::new(vec![
                "session",
                "copies",
                "copies_used",
                "mean",
                "std_of_mean",
                "per_copy_std",
            ]);
            for (s, o) in outcomes.iter().enumerate() {
                t.push(vec![
                    s.into(),
                    copies.into(),
                    o.estimate.runs_used.into(),
                    o.estimate.mean.into(),
                    o.estimate.std_of_mean.into(),
                    o.estimate.statistic_std().into(),
                ]);
            }
            Report::Table(t)
        }
    })
}

fn session_detection(t: &ProtocolTranscript, eve: EveConfig) -> f64 {
    let f = if eve.strategy == EveStrategy::MeasureTime {
        eve.intercept_fraction
    } else {
        0.0
    };
    detection_probability(t.summary.collision_probability, f, t.summary.frequency_checks)
}

fn protocol_two_records(transcripts: &[ProtocolTranscript], eve: EveConfig) -> Result<Vec<Value>> {
    let mut records = Vec::new();
    for (s, t) in transcripts.iter().enumerate() {
        for r in &t.records {
            let mut v = serde_json::to_value(r)?;
            v.as_object_mut()
                .expect("record is an object")
                .insert("session".into(), s.into());
            records.push(v);
        }
        let mut summary = serde_json::to_value(&t.summary)?;
        summary
            .as_object_mut()
            .expect("summary is an object")
            .insert("expected_detection".into(), json!(session_detection(t, eve)));
        records.push(json!({"session": s, "summary": summary}));
    }
    records.iter_mut().for_each(normalize_numbers);
    Ok(records)
}

fn protocol_two_table(transcripts: &[ProtocolTranscript], eve: EveConfig) -> Table {
    let mut table = Table::new(vec![
        "session",
        "copies",
        "lost",
        "sifted",
        "frequency_checks",
        "frequency_mismatches",
        "time_copies",
        "collision_probability",
        "expected_detection",
        "verdict",
        "alice_mean",
        "alice_std_of_mean",
        "bob_mean",
        "bob_std_of_mean",
    ]);
    for (s, t) in transcripts.iter().enumerate() {
        let sm = &t.summary;
        let verdict = serde_json::to_value(sm.verdict)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        let est = sm.estimate.as_ref();
        table.push(vec![
            s.into(),
            sm.copies.into(),
            sm.lost.into(),
            sm.sifted.into(),
            sm.frequency_checks.into(),
            sm.frequency_mismatches.into(),
            sm.time_copies.into(),
            sm.collision_probability.into(),
            session_detection(t, eve).into(),
            verdict.into(),
            est.map(|e| e.alice.mean).into(),
            est.map(|e| e.alice.std_of_mean).into(),
            est.map(|e| e.bob.mean).into(),
            est.map(|e| e.bob.std_of_mean).into(),
        ]);
    }
    table
}
