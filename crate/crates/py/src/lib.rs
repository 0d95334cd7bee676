//! Python bindings. Structured results (findings, verdicts, bounds, reports)
//! cross the boundary as plain dicts and lists with the same keys as the
//! CLI's JSON output.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;

use summoner::feasibility;
use summoner::quantum;
use summoner::scenario::{self, DemoName};
use summoner::spacetime::{self, Physics, Regime, Spacetime};
use summoner::strategies::{self, Builtin, SimOptions};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    PyModule::import(py, "json")?.call_method1("loads", (text,))
}

fn parse_regime(name: &str) -> PyResult<Regime> {
    let (st, ph) = name.split_once('-').ok_or_else(|| {
        value_error(format!(
            "regime {name:?} is not of the form spacetime-physics"
        ))
    })?;
    let spacetime = match st {
        "minkowski" => Spacetime::Minkowski,
        "galilean" => Spacetime::Galilean,
        _ => return Err(value_error(format!("unknown spacetime {st:?}"))),
    };
    let physics = match ph {
        "quantum" => Physics::Quantum,
        "classical" => Physics::Classical,
        _ => return Err(value_error(format!("unknown physics {ph:?}"))),
    };
    Ok(Regime::new(spacetime, physics))
}

#[pyclass(name = "Event", module = "summoner_py", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyEvent {
    inner: spacetime::Event,
}

#[pymethods]
impl PyEvent {
    #[new]
    fn new(t: f64, x: Vec<f64>) -> Self {
        PyEvent {
            inner: spacetime::Event::new(t, x),
        }
    }

    #[getter]
    fn t(&self) -> f64 {
        self.inner.t
    }

    #[getter]
    fn x(&self) -> Vec<f64> {
        self.inner.x.clone()
    }

    fn __repr__(&self) -> String {
        format!("Event(t={}, x={:?})", self.inner.t, self.inner.x)
    }

    fn __eq__(&self, other: &PyEvent) -> bool {
        self.inner == other.inner
    }
}

impl From<spacetime::Event> for PyEvent {
    fn from(inner: spacetime::Event) -> Self {
        PyEvent { inner }
    }
}

#[pyclass(name = "Scenario", module = "summoner_py", from_py_object)]
#[derive(Clone)]
pub struct PyScenario {
    inner: scenario::Scenario,
}

#[pymethods]
impl PyScenario {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyScenario {
            inner: scenario::Scenario::from_json(text).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn demo(name: &str) -> PyResult<Self> {
        let demo: DemoName = name.parse().map_err(value_error)?;
        Ok(PyScenario {
            inner: scenario::make_demo(demo),
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json_pretty()
    }

    #[getter]
    fn regime(&self) -> String {
        self.inner.regime.to_string()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d
    }

    #[setter]
    fn set_d(&mut self, d: usize) {
        self.inner.d = d;
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter(P)]
    fn p(&self) -> PyEvent {
        self.inner.p.clone().into()
    }

    #[getter]
    fn candidates(&self) -> Vec<PyEvent> {
        self.inner
            .candidates
            .iter()
            .cloned()
            .map(Into::into)
            .collect()
    }

    #[getter]
    fn t_prime(&self) -> f64 {
        self.inner.t_prime
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.validate())
    }

    fn return_points(&self) -> PyResult<Vec<PyEvent>> {
        Ok(self
            .inner
            .return_points()
            .map_err(value_error)?
            .into_iter()
            .map(|rp| rp.r.into())
            .collect())
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(
            py,
            &feasibility::classify(&self.inner).map_err(value_error)?,
        )
    }

    fn verdict(&self) -> PyResult<String> {
        Ok(feasibility::classify(&self.inner)
            .map_err(value_error)?
            .to_string())
    }

    fn compliance_bounds<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(
            py,
            &feasibility::compliance_bounds(&self.inner).map_err(value_error)?,
        )
    }

    #[pyo3(signature = (strategy, trials = 10_000, seed = None, binary_verification = false))]
    fn simulate<'py>(
        &self,
        py: Python<'py>,
        strategy: &str,
        trials: usize,
        seed: Option<u64>,
        binary_verification: bool,
    ) -> PyResult<Bound<'py, PyAny>> {
        let strat: Builtin = strategy.parse().map_err(value_error)?;
        let opts = SimOptions {
            trials,
            seed: seed.unwrap_or(self.inner.seed),
            binary_verification,
        };
        let s = &self.inner;
        let report = py
            .detach(|| strategies::simulate_with(s, &strat, opts))
            .map_err(value_error)?;
        to_py(py, &report)
    }

    #[pyo3(signature = (strategy, trials = 20, seed = 0))]
    fn no_signalling_check(
        &self,
        py: Python<'_>,
        strategy: &str,
        trials: usize,
        seed: u64,
    ) -> PyResult<f64> {
        let strat: Builtin = strategy.parse().map_err(value_error)?;
        let s = &self.inner;
        py.detach(|| strategies::no_signalling_check(s, &strat, trials, seed))
            .map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(regime={}, d={}, n={}, candidates={})",
            self.inner.regime,
            self.inner.d,
            self.inner.n,
            self.inner.candidates.len()
        )
    }
}

/// Squared interval `-(Δt)² + |Δx|²` and its class name.
#[pyfunction]
fn interval(a: &PyEvent, b: &PyEvent) -> PyResult<(f64, String)> {
    let iv = spacetime::interval(&a.inner, &b.inner).map_err(value_error)?;
    let class = format!("{:?}", iv.class).to_lowercase();
    Ok((iv.s2, class))
}

#[pyfunction]
#[pyo3(signature = (a, b, regime = "minkowski-quantum"))]
fn causally_precedes(a: &PyEvent, b: &PyEvent, regime: &str) -> PyResult<bool> {
    spacetime::causally_precedes(&a.inner, &b.inner, parse_regime(regime)?).map_err(value_error)
}

#[pyfunction]
fn proper_time(a: &PyEvent, b: &PyEvent) -> PyResult<f64> {
    spacetime::proper_time(&a.inner, &b.inner).map_err(value_error)
}

#[pyfunction]
fn boost(event: &PyEvent, velocity: Vec<f64>) -> PyResult<PyEvent> {
    let b = spacetime::Boost::new(velocity).map_err(value_error)?;
    Ok(b.apply(&event.inner).map_err(value_error)?.into())
}

#[pyfunction]
fn candidate_sphere(p: &PyEvent, t: f64, t_prime: f64, count: usize) -> PyResult<Vec<PyEvent>> {
    Ok(spacetime::candidate_sphere(&p.inner, t, t_prime, count)
        .map_err(value_error)?
        .into_iter()
        .map(Into::into)
        .collect())
}

#[pyfunction]
fn colinear_return(p: &PyEvent, q: &PyEvent, t_prime: f64, delta: f64) -> PyResult<PyEvent> {
    Ok(
        spacetime::colinear_return(&p.inner, &q.inner, t_prime, delta)
            .map_err(value_error)?
            .into(),
    )
}

#[pyfunction]
fn cloning_fidelity(d: usize, n: usize) -> PyResult<f64> {
    quantum::cloning_fidelity(d, n).map_err(value_error)
}

#[pyfunction]
fn measure_prepare_fidelity(d: usize) -> PyResult<f64> {
    quantum::measure_prepare_fidelity(d).map_err(value_error)
}

/// Haar-average single-clone fidelity of the constructed `1 → n` cloner.
#[pyfunction]
fn cloner_marginal_fidelity(py: Python<'_>, d: usize, n: usize) -> PyResult<f64> {
    py.detach(|| quantum::UniversalCloner::new(d, n).and_then(|c| c.average_marginal_fidelity(0)))
        .map_err(value_error)
}

#[pyfunction]
fn demo_names() -> Vec<&'static str> {
    DemoName::ALL.iter().map(|d| d.as_str()).collect()
}

/// Built-in strategy identifiers for a scenario with `candidates` points.
#[pyfunction]
fn strategy_names(candidates: usize) -> Vec<String> {
    Builtin::all(candidates)
        .iter()
        .map(|b| b.to_string())
        .collect()
}

#[pymodule]
pub fn summoner_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEvent>()?;
    m.add_class::<PyScenario>()?;
    m.add_function(wrap_pyfunction!(interval, m)?)?;
    m.add_function(wrap_pyfunction!(causally_precedes, m)?)?;
    m.add_function(wrap_pyfunction!(proper_time, m)?)?;
    m.add_function(wrap_pyfunction!(boost, m)?)?;
    m.add_function(wrap_pyfunction!(candidate_sphere, m)?)?;
    m.add_function(wrap_pyfunction!(colinear_return, m)?)?;
    m.add_function(wrap_pyfunction!(cloning_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(measure_prepare_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(cloner_marginal_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(demo_names, m)?)?;
    m.add_function(wrap_pyfunction!(strategy_names, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
