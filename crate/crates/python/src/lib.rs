//! Python bindings. Matrices cross the boundary as 8 lists of 8 complex numbers,
//! rows first.

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use spin72::compiler::{self, PulseSchedule, ScheduleParameters};
use spin72::dynamics::{self, IntegrationConfig};
use spin72::error::Error;
use spin72::gates::{self, GateSpec};
use spin72::linalg::{Mat8, DIM};
use spin72::pulse::{Axis, PulseParams, Tone};
use spin72::schedule_file;
use spin72::spin_system::{self as ss, Q2Form, SpectrumMethod};

type Matrix = Vec<Vec<Complex64>>;
type Transfers = Vec<(usize, usize, f64)>;

fn err(e: Error) -> PyErr {
    match e {
        Error::UnderResolved { .. }
        | Error::StepBudgetExceeded { .. }
        | Error::AmbiguousLabeling { .. }
        | Error::DegenerateFit(_) => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_rows(m: &Mat8) -> Matrix {
    (0..DIM).map(|r| (0..DIM).map(|c| m[(r, c)]).collect()).collect()
}

fn from_rows(rows: &Matrix) -> PyResult<Mat8> {
    if rows.len() != DIM || rows.iter().any(|r| r.len() != DIM) {
        return Err(PyValueError::new_err("expected an 8x8 matrix"));
    }
    Ok(Mat8::from_fn(|r, c| rows[r][c]))
}

fn method(name: &str) -> PyResult<SpectrumMethod> {
    match name {
        "pert" => Ok(SpectrumMethod::PerturbativeFirstOrder),
        "exact" => Ok(SpectrumMethod::Exact),
        other => Err(PyValueError::new_err(format!(
            "method must be 'pert' or 'exact', got {other:?}"
        ))),
    }
}

fn axis(name: &str) -> PyResult<Axis> {
    name.parse().map_err(err)
}

#[pyclass(name = "SpinSystem", frozen, from_py_object)]
#[derive(Clone)]
struct PySpinSystem {
    inner: ss::SpinSystem,
}

#[pymethods]
impl PySpinSystem {
    #[new]
    #[pyo3(signature = (omega0, omega_q, theta, phi = 0.0, q2_form = "as-printed"))]
    fn new(omega0: f64, omega_q: f64, theta: f64, phi: f64, q2_form: &str) -> PyResult<Self> {
        let form = match q2_form {
            "as-printed" => Q2Form::AsPrinted,
            "sin-squared" => Q2Form::SinSquared,
            other => return Err(PyValueError::new_err(format!("unknown q2_form {other:?}"))),
        };
        let inner = ss::SpinSystem::new(omega0, omega_q, theta, phi)
            .map_err(err)?
            .with_q2_form(form);
        Ok(Self { inner })
    }

    #[getter]
    fn omega0(&self) -> f64 {
        self.inner.omega0
    }

    #[getter]
    fn omega_q(&self) -> f64 {
        self.inner.omega_q
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.theta
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.inner.phi
    }

    fn hamiltonian(&self) -> Matrix {
        to_rows(&ss::build_hamiltonian(&self.inner))
    }

    #[pyo3(signature = (method = "exact"))]
    fn spectrum(&self, method: &str) -> PyResult<PySpectrum> {
        let inner = ss::spectrum(&self.inner, self::method(method)?).map_err(err)?;
        Ok(PySpectrum { inner })
    }

    fn __repr__(&self) -> String {
        let s = &self.inner;
        format!(
            "SpinSystem(omega0={}, omega_q={}, theta={}, phi={})",
            s.omega0, s.omega_q, s.theta, s.phi
        )
    }
}

#[pyclass(name = "Spectrum", frozen)]
struct PySpectrum {
    inner: ss::Spectrum,
}

#[pymethods]
impl PySpectrum {
    #[getter]
    fn energies(&self) -> Vec<f64> {
        self.inner.energies.to_vec()
    }

    #[getter]
    fn method(&self) -> &'static str {
        self.inner.method.short_name()
    }

    #[getter]
    fn outside_perturbative_regime(&self) -> bool {
        self.inner.outside_perturbative_regime
    }

    /// Eigenvectors as columns, in the `|χ_m⟩` basis.
    fn states(&self) -> Matrix {
        to_rows(&self.inner.states)
    }

    fn transition_frequency(&self, upper: usize, lower: usize) -> PyResult<f64> {
        check_pair(upper, lower)?;
        Ok(self.inner.transition_frequency(upper, lower))
    }

    fn ix_element(&self, upper: usize, lower: usize) -> PyResult<Complex64> {
        check_pair(upper, lower)?;
        Ok(self.inner.ix_element(upper, lower))
    }

    /// `(upper, lower, omega, |element|, allowed)` for all 28 pairs.
    fn transitions(&self) -> Vec<(usize, usize, f64, f64, bool)> {
        ss::transition_table(&self.inner)
            .into_iter()
            .map(|t| (t.upper, t.lower, t.omega, t.element, t.allowed))
            .collect()
    }
}

fn check_pair(upper: usize, lower: usize) -> PyResult<()> {
    if upper >= DIM || lower >= DIM || upper == lower {
        return Err(PyValueError::new_err(format!(
            "need two distinct levels in 0..8, got ({upper}, {lower})"
        )));
    }
    Ok(())
}

#[pyclass(name = "Gate", frozen, from_py_object)]
#[derive(Clone)]
struct PyGate {
    inner: GateSpec,
}

#[pymethods]
impl PyGate {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: text.parse().map_err(err)?,
        })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.name()
    }

    #[getter]
    fn target(&self) -> String {
        self.inner.target.letter().to_string()
    }

    #[getter]
    fn controls(&self) -> String {
        self.inner.controls.iter().map(|c| c.letter()).collect()
    }

    fn addressed_pairs(&self) -> Vec<(usize, usize)> {
        self.inner.addressed_pairs()
    }

    fn target_matrix(&self) -> Matrix {
        to_rows(&gates::target_gate(&self.inner))
    }

    fn compile(&self) -> PyResult<PySchedule> {
        Ok(PySchedule {
            inner: compiler::compile(&self.inner).map_err(err)?,
        })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Gate({:?})", self.inner.to_string())
    }
}

#[pyclass(name = "Schedule", frozen)]
struct PySchedule {
    inner: PulseSchedule,
}

#[pymethods]
impl PySchedule {
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: schedule_file::from_toml(text).map_err(err)?,
        })
    }

    fn to_toml(&self) -> String {
        schedule_file::to_toml(&self.inner)
    }

    #[getter]
    fn gate(&self) -> String {
        self.inner.gate.to_string()
    }

    /// `(upper, lower, angle, phase, axis)` per tone, groups flattened in order.
    fn tones(&self) -> Vec<(usize, usize, f64, f64, String)> {
        self.inner
            .tones()
            .map(|t| (t.upper, t.lower, t.angle, t.phase, t.axis.to_string()))
            .collect()
    }

    /// Fills in frequencies and durations for `system` at drive amplitude `gamma_hrf`.
    #[pyo3(signature = (system, gamma_hrf, method = "exact"))]
    fn resolve(&self, system: &PySpinSystem, gamma_hrf: f64, method: &str) -> PyResult<Self> {
        let spectrum = ss::spectrum(&system.inner, self::method(method)?).map_err(err)?;
        let params = PulseParams::new(gamma_hrf).map_err(err)?;
        Ok(Self {
            inner: self.inner.resolve(&system.inner, &spectrum, &params),
        })
    }

    /// `(omega0, omegaQ, theta, phi, gammaHrf)` of a resolved schedule.
    #[getter]
    fn parameters(&self) -> Option<(f64, f64, f64, f64, f64)> {
        self.inner.parameters.map(
            |ScheduleParameters {
                 omega0,
                 omega_q,
                 theta,
                 phi,
                 gamma_hrf,
             }| { (omega0, omega_q, theta, phi, gamma_hrf) },
        )
    }

    fn propagator(&self) -> PyResult<Matrix> {
        Ok(to_rows(&compiler::schedule_propagator(&self.inner).map_err(err)?))
    }
}

#[pyfunction]
#[pyo3(signature = (upper, lower, angle, phase = 0.0, axis = "X"))]
fn pulse_propagator(upper: usize, lower: usize, angle: f64, phase: f64, axis: &str) -> PyResult<Matrix> {
    let tone = Tone::new(upper, lower, angle, phase, self::axis(axis)?).map_err(err)?;
    Ok(to_rows(&spin72::pulse::pulse_propagator(&tone)))
}

/// `(verdict, max_deviation)` comparing `matrix` with the textbook gate.
#[pyfunction]
fn verify(gate: &PyGate, matrix: Matrix) -> PyResult<(&'static str, f64)> {
    let report = compiler::verify(&gate.inner, &from_rows(&matrix)?);
    Ok((report.verdict.as_str(), report.max_deviation))
}

/// `(input, output)` label pairs of a compiled bit-flip gate.
#[pyfunction]
fn truth_table(gate: &PyGate) -> PyResult<Vec<(usize, usize)>> {
    Ok(compiler::truth_table(&gate.inner)
        .map_err(err)?
        .into_iter()
        .map(|r| (r.input, r.output))
        .collect())
}

#[pyfunction]
fn log_sweep(start: f64, stop: f64, points: usize) -> PyResult<Vec<f64>> {
    dynamics::log_sweep(start, stop, points).map_err(err)
}

/// `([(ratio, |element|)], slope)` for the pair across `omegaQ/omega0` values.
#[pyfunction]
fn forbidden_scaling(
    system: &PySpinSystem,
    upper: usize,
    lower: usize,
    ratios: Vec<f64>,
) -> PyResult<(Vec<(f64, f64)>, f64)> {
    let sweep = dynamics::forbidden_scaling(&system.inner, (upper, lower), &ratios).map_err(err)?;
    Ok((sweep.points.iter().map(|p| (p.ratio, p.element)).collect(), sweep.slope))
}

#[pyfunction]
#[pyo3(signature = (system, upper, lower, angle, gamma_hrf, phase = 0.0, axis = "X", steps_per_period = 40))]
#[allow(clippy::too_many_arguments)]
fn rwa_deviation(
    system: &PySpinSystem,
    upper: usize,
    lower: usize,
    angle: f64,
    gamma_hrf: f64,
    phase: f64,
    axis: &str,
    steps_per_period: u32,
) -> PyResult<f64> {
    let tone = Tone::new(upper, lower, angle, phase, self::axis(axis)?).map_err(err)?;
    let params = PulseParams::new(gamma_hrf).map_err(err)?;
    dynamics::rwa_deviation(
        &system.inner,
        &tone,
        &params,
        &IntegrationConfig::with_steps(steps_per_period),
    )
    .map_err(err)
}

/// `(deviation, [(input, output, probability)], total_duration)`.
#[pyfunction]
#[pyo3(signature = (system, schedule, gamma_hrf, steps_per_period = 40))]
fn simulate(
    system: &PySpinSystem,
    schedule: &PySchedule,
    gamma_hrf: f64,
    steps_per_period: u32,
) -> PyResult<(f64, Transfers, f64)> {
    let params = PulseParams::new(gamma_hrf).map_err(err)?;
    let report = dynamics::simulate_schedule(
        &system.inner,
        &schedule.inner,
        &params,
        &IntegrationConfig::with_steps(steps_per_period),
    )
    .map_err(err)?;
    let transfers = report
        .transfers
        .iter()
        .map(|t| (t.input, t.output, t.probability))
        .collect();
    Ok((report.deviation, transfers, report.total_duration))
}

#[pymodule]
pub fn pyspin72(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpinSystem>()?;
    m.add_class::<PySpectrum>()?;
    m.add_class::<PyGate>()?;
    m.add_class::<PySchedule>()?;
    m.add_function(wrap_pyfunction!(pulse_propagator, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(truth_table, m)?)?;
    m.add_function(wrap_pyfunction!(log_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(forbidden_scaling, m)?)?;
    m.add_function(wrap_pyfunction!(rwa_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
