//! Python bindings: state families and their accuracies, the Monte Carlo
//! estimator, the loss channel and both protocols.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qpos_core::losschannel::{self, CMatrix, DensityMatrix};
use qpos_core::montecarlo::{self, SimulationConfig};
use qpos_core::protocol::{self as proto, EveConfig, EveStrategy, ProtocolSetup};
use qpos_core::rng::run_stream;
use qpos_core::{states, GroupSpectrum, QposError};

fn err(e: QposError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "StateFamily", frozen, from_py_object)]
#[derive(Clone)]
struct PyStateFamily {
    inner: states::StateFamily,
}

#[pymethods]
impl PyStateFamily {
    #[staticmethod]
    #[pyo3(signature = (channels, mean_photons = 1.0))]
    fn classical(channels: usize, mean_photons: f64) -> PyResult<Self> {
        Self::checked(states::StateFamily::Classical {
            channels,
            mean_photons,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (channels, photons = 1))]
    fn max_entangled(channels: usize, photons: usize) -> PyResult<Self> {
        Self::checked(states::StateFamily::MaxEntangled { channels, photons })
    }

    #[staticmethod]
    fn unentangled(channels: usize) -> PyResult<Self> {
        Self::checked(states::StateFamily::Unentangled { channels })
    }

    #[staticmethod]
    fn partial(channels: usize, entangled: usize) -> PyResult<Self> {
        Self::checked(states::StateFamily::PartialEntangled {
            channels,
            entangled,
        })
    }

    /// `ratio` is Δω²/ΔΩ² with ΔΩ = 1.
    #[staticmethod]
    #[pyo3(signature = (groups, group_size, ratio = 2.0))]
    fn group(groups: usize, group_size: usize, ratio: f64) -> PyResult<Self> {
        Self::checked(states::StateFamily::GroupEntangled {
            groups,
            group_size,
            spectrum: GroupSpectrum::from_ratio(ratio).map_err(err)?,
        })
    }

    #[getter]
    fn channels(&self) -> usize {
        self.inner.channels()
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.inner.short_name()
    }

    /// Lossless accuracy Δt.
    #[pyo3(signature = (dtau = 1.0))]
    fn lossless_accuracy(&self, dtau: f64) -> PyResult<f64> {
        states::lossless_accuracy(&self.inner, dtau).map_err(err)
    }

    /// (per usable run, over r attempted runs, usable-run fraction).
    #[pyo3(signature = (eta, dtau = 1.0, r = 1.0))]
    fn accuracy(&self, eta: f64, dtau: f64, r: f64) -> PyResult<(f64, f64, f64)> {
        let rep = states::accuracy_report(&self.inner, eta, dtau, r).map_err(err)?;
        Ok((rep.delta_t_per_run, rep.delta_t_r_runs, rep.usable_run_fraction))
    }

    fn __repr__(&self) -> String {
        format!("StateFamily({:?})", self.inner)
    }
}

impl PyStateFamily {
    fn checked(inner: states::StateFamily) -> PyResult<Self> {
        inner.validate().map_err(err)?;
        Ok(PyStateFamily { inner })
    }
}

#[pyclass(name = "Estimate", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyEstimate {
    mean: f64,
    std_of_mean: f64,
    runs_used: usize,
    runs_total: usize,
}

#[pymethods]
impl PyEstimate {
    /// Standard deviation of the per-run statistic.
    #[getter]
    fn statistic_std(&self) -> f64 {
        self.std_of_mean * (self.runs_used as f64).sqrt()
    }

    fn __repr__(&self) -> String {
        format!(
            "Estimate(mean={}, std_of_mean={}, runs_used={}, runs_total={})",
            self.mean, self.std_of_mean, self.runs_used, self.runs_total
        )
    }
}

impl From<montecarlo::Estimate> for PyEstimate {
    fn from(e: montecarlo::Estimate) -> Self {
        PyEstimate {
            mean: e.mean,
            std_of_mean: e.std_of_mean,
            runs_used: e.runs_used,
            runs_total: e.runs_total,
        }
    }
}

#[pyfunction]
fn gain_lambda(channels: usize, eta: f64) -> PyResult<f64> {
    states::gain_lambda(channels, eta).map_err(err)
}

#[pyfunction]
fn gain_root(channels: usize) -> PyResult<f64> {
    states::gain_root(channels).map_err(err)
}

#[pyfunction]
fn threshold_eta(channels: usize) -> PyResult<f64> {
    states::threshold_eta(channels).map_err(err)
}

/// Ordering label such as "en>G>un".
#[pyfunction]
fn classify_region(channels: usize, eta: f64, group_size: usize, ratio: f64) -> PyResult<String> {
    Ok(states::classify_region(channels, eta, group_size, ratio).map_err(err)?.to_string())
}

#[pyfunction]
#[pyo3(signature = (family, eta, runs, seed, dtau = 1.0, offset = 0.0, threads = None))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    py: Python<'_>,
    family: &PyStateFamily,
    eta: f64,
    runs: usize,
    seed: u64,
    dtau: f64,
    offset: f64,
    threads: Option<usize>,
) -> PyResult<PyEstimate> {
    let config = SimulationConfig {
        family: family.inner,
        eta,
        dtau,
        true_offset: offset,
        runs,
        seed,
    };
    let est = py.detach(|| montecarlo::simulate_estimate(&config, threads));
    Ok(est.map_err(err)?.into())
}

fn to_rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<CMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("density matrix must be square"));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// Kraus operators of a channel with efficiency `eta` on `dim` Fock levels.
#[pyfunction]
fn kraus_operators(eta: f64, dim: usize) -> PyResult<Vec<Vec<Vec<Complex64>>>> {
    let ks = losschannel::kraus_operators(eta, dim).map_err(err)?;
    Ok(ks.operators().iter().map(to_rows).collect())
}

/// Applies loss to a density matrix given as a list of rows.
#[pyfunction]
fn apply_loss(rho: Vec<Vec<Complex64>>, eta: f64) -> PyResult<Vec<Vec<Complex64>>> {
    let rho = DensityMatrix::new(from_rows(rho)?).map_err(err)?;
    let ks = losschannel::kraus_operators(eta, rho.dim()).map_err(err)?;
    Ok(to_rows(losschannel::apply_loss(&rho, &ks).map_err(err)?.matrix()))
}

#[pyfunction]
#[pyo3(signature = (eta, dim, max_photons = None))]
fn beam_splitter_deviation(eta: f64, dim: usize, max_photons: Option<usize>) -> PyResult<f64> {
    match max_photons {
        Some(n) => losschannel::beam_splitter_deviation(eta, dim, n),
        None => losschannel::beam_splitter_check(eta, dim),
    }
    .map_err(err)
}

fn setup(channels: usize, eta: f64, dtau: f64, distance: f64) -> PyResult<ProtocolSetup> {
    ProtocolSetup::new(channels, eta, dtau, distance).map_err(err)
}

/// Alice's estimate and Bob's broadcasts, one list per surviving copy.
#[pyfunction]
#[pyo3(signature = (channels, eta, copies, seed, dtau = 1.0, distance = 0.0))]
fn run_protocol_one(
    channels: usize,
    eta: f64,
    copies: usize,
    seed: u64,
    dtau: f64,
    distance: f64,
) -> PyResult<(PyEstimate, Vec<Vec<f64>>)> {
    let s = setup(channels, eta, dtau, distance)?;
    let out = proto::run_protocol_one(&s, copies, &mut run_stream(seed, 0)).map_err(err)?;
    Ok((out.estimate.into(), out.broadcasts))
}

#[pyclass(name = "ProtocolTranscript", frozen)]
struct PyTranscript {
    inner: proto::ProtocolTranscript,
}

#[pymethods]
impl PyTranscript {
    /// "clean", "eavesdropper_detected" or "inconclusive".
    #[getter]
    fn verdict(&self) -> PyResult<String> {
        let v = serde_json::to_value(self.inner.verdict()).map_err(json_err)?;
        Ok(v.as_str().unwrap_or_default().to_string())
    }

    #[getter]
    fn sifted(&self) -> usize {
        self.inner.summary.sifted
    }

    #[getter]
    fn frequency_checks(&self) -> usize {
        self.inner.summary.frequency_checks
    }

    #[getter]
    fn collision_probability(&self) -> f64 {
        self.inner.summary.collision_probability
    }

    /// (Alice's, Bob's) estimates when the session was clean.
    #[getter]
    fn estimates(&self) -> Option<(PyEstimate, PyEstimate)> {
        self.inner
            .estimate()
            .map(|e| (e.alice.into(), e.bob.into()))
    }

    /// One JSON record per copy followed by a summary record.
    fn to_jsonl(&self) -> PyResult<String> {
        let mut out = String::new();
        for r in &self.inner.records {
            out.push_str(&serde_json::to_string(r).map_err(json_err)?);
            out.push('\n');
        }
        let summary = serde_json::json!({ "summary": self.inner.summary });
        out.push_str(&summary.to_string());
        out.push('\n');
        Ok(out)
    }

    fn __len__(&self) -> usize {
        self.inner.records.len()
    }
}

#[pyfunction]
#[pyo3(signature = (
    channels, copies, eta, seed, dtau = 1.0, distance = 0.0, freq_bin = None,
    eve = "none", intercept_fraction = 1.0
))]
#[allow(clippy::too_many_arguments)]
fn run_protocol_two(
    channels: usize,
    copies: usize,
    eta: f64,
    seed: u64,
    dtau: f64,
    distance: f64,
    freq_bin: Option<f64>,
    eve: &str,
    intercept_fraction: f64,
) -> PyResult<PyTranscript> {
    let strategy = match eve {
        "none" => EveStrategy::None,
        "measure_time" => EveStrategy::MeasureTime,
        "measure_frequency" => EveStrategy::MeasureFrequency,
        other => return Err(PyValueError::new_err(format!("unknown eavesdropper strategy {other:?}"))),
    };
    let eve = EveConfig {
        strategy,
        intercept_fraction: if strategy == EveStrategy::None { 0.0 } else { intercept_fraction },
    };
    let s = setup(channels, eta, dtau, distance)?;
    let bin = freq_bin.unwrap_or_else(|| proto::default_freq_bin(dtau));
    let inner = proto::run_protocol_two(&s, copies, bin, eve, &mut run_stream(seed, 0)).map_err(err)?;
    Ok(PyTranscript { inner })
}

#[pymodule]
fn qpos(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStateFamily>()?;
    m.add_class::<PyEstimate>()?;
    m.add_class::<PyTranscript>()?;
    m.add_function(wrap_pyfunction!(gain_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(gain_root, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_eta, m)?)?;
    m.add_function(wrap_pyfunction!(classify_region, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(kraus_operators, m)?)?;
    m.add_function(wrap_pyfunction!(apply_loss, m)?)?;
    m.add_function(wrap_pyfunction!(beam_splitter_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(run_protocol_one, m)?)?;
    m.add_function(wrap_pyfunction!(run_protocol_two, m)?)?;
    Ok(())
}
