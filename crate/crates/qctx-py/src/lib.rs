//! Python bindings for the qctx toolkit.
//!
//! The module mirrors the CLI surface (every report function returns the same
//! JSON text the binary prints) and additionally exposes the core types, so a
//! Python session can poke at the operator algebra directly.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qctx::cli::{
    cmd_nchv_from_text, cmd_scan, cmd_simulate, cmd_verify_spatial, cmd_verify_temporal,
    report_to_json, CliError, SimulateConfig,
};
use qctx::contexts::{build_spatial_contexts, build_temporal_contexts, scalar_identity_eigenvalue};
use qctx::dynamics::evolve_letter;
use qctx::nchv::{enumerate_assignments, parity_certificate, cross_check};
use qctx::pauli::{PauliLetter, PauliPolynomial, PauliTerm};
use qctx::sign::Sign;
use qctx::{ContextSet, ContextVariant, PrecessionAngle};

fn value_error(message: impl ToString) -> PyErr {
    PyValueError::new_err(message.to_string())
}

fn cli_error(error: CliError) -> PyErr {
    value_error(error)
}

fn parse_axis(text: &str) -> PyResult<PauliLetter> {
    match text.to_ascii_lowercase().as_str() {
        "x" => Ok(PauliLetter::X),
        "y" => Ok(PauliLetter::Y),
        "z" => Ok(PauliLetter::Z),
        other => Err(value_error(format!("unknown axis {other:?}, expected x, y, or z"))),
    }
}

fn parse_variant(text: &str) -> PyResult<ContextVariant> {
    match text.to_ascii_lowercase().as_str() {
        "temporal" => Ok(ContextVariant::Temporal),
        "spatial" => Ok(ContextVariant::Spatial),
        other => Err(value_error(format!(
            "unknown variant {other:?}, expected temporal or spatial"
        ))),
    }
}

fn sign_from_int(value: i64) -> PyResult<Sign> {
    match value {
        1 => Ok(Sign::Plus),
        -1 => Ok(Sign::Minus),
        other => Err(value_error(format!("sign must be +1 or -1, got {other}"))),
    }
}

/// Precession angle, tracking exact quarter turns so that the right-angle
/// constructions stay exact instead of drifting through floating point.
#[pyclass(frozen, name = "Angle")]
struct PyAngle {
    inner: PrecessionAngle,
}

#[pymethods]
impl PyAngle {
    /// Parses "0", "pi/2", "3pi/2", "0.25pi", or a plain radian number.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<PyAngle> {
        PrecessionAngle::parse(text).map(|inner| PyAngle { inner }).map_err(value_error)
    }

    #[staticmethod]
    fn from_radians(radians: f64) -> PyAngle {
        PyAngle { inner: PrecessionAngle::from_radians(radians) }
    }

    /// The exact angle k * pi/2.
    #[staticmethod]
    fn quarter_turns(k: i64) -> PyAngle {
        PyAngle { inner: PrecessionAngle::quarter_turns(k) }
    }

    #[getter]
    fn radians(&self) -> f64 {
        self.inner.radians()
    }

    /// Some(k) when the angle is exactly k * pi/2.
    #[getter]
    fn quarter_index(&self) -> Option<i64> {
        self.inner.quarter_index()
    }

    fn is_exact_quarter(&self) -> bool {
        self.inner.is_exact_quarter()
    }

    /// Separation self - earlier, staying exact when both ends are exact.
    fn delta(&self, earlier: &PyAngle) -> PyAngle {
        PyAngle { inner: self.inner.delta(earlier.inner) }
    }

    fn __repr__(&self) -> String {
        match self.inner.quarter_index() {
            Some(k) => format!("Angle({k} * pi/2)"),
            None => format!("Angle({} rad)", self.inner.radians()),
        }
    }
}

/// A complex combination of Pauli words with exact integer-phase bookkeeping.
#[pyclass(name = "PauliPolynomial")]
struct PyPauliPolynomial {
    inner: PauliPolynomial,
}

#[pymethods]
impl PyPauliPolynomial {
    /// Parses a single signed word such as "X", "-Y", "iZ", or "XY".
    #[staticmethod]
    fn parse(text: &str) -> PyResult<PyPauliPolynomial> {
        let term = PauliTerm::parse(text)
            .ok_or_else(|| value_error(format!("cannot parse Pauli word {text:?}")))?;
        Ok(PyPauliPolynomial { inner: PauliPolynomial::from_term(&term) })
    }

    fn add(&self, other: &PyPauliPolynomial) -> PyResult<PyPauliPolynomial> {
        self.inner.add(&other.inner).map(|inner| PyPauliPolynomial { inner }).map_err(value_error)
    }

    fn sub(&self, other: &PyPauliPolynomial) -> PyResult<PyPauliPolynomial> {
        self.inner.sub(&other.inner).map(|inner| PyPauliPolynomial { inner }).map_err(value_error)
    }

    fn mul(&self, other: &PyPauliPolynomial) -> PyResult<PyPauliPolynomial> {
        self.inner.mul(&other.inner).map(|inner| PyPauliPolynomial { inner }).map_err(value_error)
    }

    fn scale(&self, factor: Complex64) -> PyPauliPolynomial {
        PyPauliPolynomial { inner: self.inner.scale(factor) }
    }

    fn commutator(&self, other: &PyPauliPolynomial) -> PyResult<PyPauliPolynomial> {
        self.inner
            .commutator(&other.inner)
            .map(|inner| PyPauliPolynomial { inner })
            .map_err(value_error)
    }

    fn commutes_with(&self, other: &PyPauliPolynomial) -> PyResult<bool> {
        self.inner.commutes_with(&other.inner).map_err(value_error)
    }

    fn is_hermitian(&self) -> bool {
        self.inner.is_hermitian()
    }

    /// +1 or -1 when the polynomial is exactly that multiple of identity.
    fn scalar_identity_eigenvalue(&self) -> Option<i8> {
        scalar_identity_eigenvalue(&self.inner).map(Sign::value)
    }

    /// Largest coefficient magnitude of self - other.
    fn distance(&self, other: &PyPauliPolynomial) -> PyResult<f64> {
        self.inner.distance(&other.inner).map_err(value_error)
    }

    /// Dense matrix in the computational basis, as nested lists of complex.
    fn dense(&self) -> Vec<Vec<Complex64>> {
        let matrix = self.inner.dense();
        (0..matrix.nrows())
            .map(|r| (0..matrix.ncols()).map(|c| matrix[(r, c)]).collect())
            .collect()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PauliPolynomial({})", self.inner)
    }

    fn __eq__(&self, other: &PyPauliPolynomial) -> bool {
        self.inner == other.inner
    }
}

/// Heisenberg-picture spin component after precessing by `theta`.
#[pyfunction]
fn evolve(axis: &str, theta: &PyAngle) -> PyResult<PyPauliPolynomial> {
    let letter = parse_axis(axis)?;
    Ok(PyPauliPolynomial { inner: evolve_letter(letter, theta.inner) })
}

/// A verified triple of measurement contexts.
#[pyclass(frozen, name = "ContextSet")]
struct PyContextSet {
    inner: ContextSet,
}

#[pymethods]
impl PyContextSet {
    /// Builds and verifies the two-time construction; raises ValueError with
    /// the failed commutation and Hermiticity diagnostics when rejected.
    #[staticmethod]
    fn temporal(theta1: &PyAngle, theta2: &PyAngle) -> PyResult<PyContextSet> {
        build_temporal_contexts(theta1.inner, theta2.inner)
            .map(|inner| PyContextSet { inner })
            .map_err(value_error)
    }

    /// The two-particle analogue on the singlet state.
    #[staticmethod]
    fn spatial() -> PyContextSet {
        PyContextSet { inner: build_spatial_contexts() }
    }

    #[getter]
    fn variant(&self) -> String {
        self.inner.variant().to_string()
    }

    fn ids(&self) -> Vec<String> {
        self.inner.contexts().iter().map(|c| c.id().to_string()).collect()
    }

    fn descriptions(&self) -> Vec<String> {
        self.inner.contexts().iter().map(|c| c.description()).collect()
    }

    /// The joint eigenvalue of each context, in order.
    fn eigenvalues(&self) -> Vec<i8> {
        self.inner.eigenvalues().into_iter().map(Sign::value).collect()
    }

    fn joint_operator(&self, index: usize) -> PyResult<PyPauliPolynomial> {
        let context = self
            .inner
            .contexts()
            .get(index)
            .ok_or_else(|| value_error(format!("context index {index} out of range")))?;
        Ok(PyPauliPolynomial { inner: context.joint_operator().clone() })
    }

    fn __len__(&self) -> usize {
        self.inner.contexts().len()
    }

    fn __repr__(&self) -> String {
        format!("ContextSet({}, {:?})", self.inner.variant(), self.ids())
    }
}

/// A system of parity constraints over sign-valued variables.
#[pyclass(name = "ConstraintSystem")]
struct PyConstraintSystem {
    inner: qctx::ConstraintSystem,
}

#[pymethods]
impl PyConstraintSystem {
    /// Builds a system from variable labels and (variables, sign) pairs.
    #[new]
    fn new(variables: Vec<String>, constraints: Vec<(Vec<String>, i64)>) -> PyResult<PyConstraintSystem> {
        let converted: Vec<(Vec<String>, Sign)> = constraints
            .into_iter()
            .map(|(vars, sign)| Ok((vars, sign_from_int(sign)?)))
            .collect::<PyResult<_>>()?;
        qctx::ConstraintSystem::new(variables, &converted)
            .map(|inner| PyConstraintSystem { inner })
            .map_err(value_error)
    }

    /// The value-assignment constraints induced by a context set.
    #[staticmethod]
    fn from_contexts(set: &PyContextSet) -> PyResult<PyConstraintSystem> {
        qctx::ConstraintSystem::from_contexts(&set.inner)
            .map(|inner| PyConstraintSystem { inner })
            .map_err(value_error)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyConstraintSystem> {
        qctx::ConstraintSystem::from_json_str(text)
            .map(|inner| PyConstraintSystem { inner })
            .map_err(value_error)
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    fn variables(&self) -> Vec<String> {
        self.inner.variables().to_vec()
    }

    fn constraint_count(&self) -> usize {
        self.inner.constraint_count()
    }

    /// Every satisfying assignment, each as a {label: sign} dict.
    fn satisfying_assignments(&self) -> PyResult<Vec<std::collections::BTreeMap<String, i8>>> {
        let found = enumerate_assignments(&self.inner).map_err(value_error)?;
        Ok(found
            .iter()
            .map(|assignment| {
                self.inner
                    .variables()
                    .iter()
                    .cloned()
                    .zip(assignment.values().iter().map(|s| s.value()))
                    .collect()
            })
            .collect())
    }

    /// Parity proof of unsatisfiability as (1-based constraint indices, sign
    /// product), or None when the system is satisfiable.
    fn certificate(&self) -> Option<(Vec<usize>, i8)> {
        parity_certificate(&self.inner).map(|cert| {
            let subset = cert.constraint_subset().iter().map(|&i| i + 1).collect();
            (subset, cert.parity_of_signs().value())
        })
    }

    /// Runs both deciders and asserts they agree.
    fn is_satisfiable(&self) -> PyResult<bool> {
        cross_check(&self.inner).map(|report| report.satisfiable()).map_err(value_error)
    }

    fn with_flipped_sign(&self, constraint_index: usize) -> PyResult<PyConstraintSystem> {
        if constraint_index >= self.inner.constraint_count() {
            return Err(value_error(format!("constraint index {constraint_index} out of range")));
        }
        Ok(PyConstraintSystem { inner: self.inner.with_flipped_sign(constraint_index) })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "ConstraintSystem({} variables, {} constraints)",
            self.inner.variable_count(),
            self.inner.constraint_count()
        )
    }
}

/// Temporal verification report as JSON text, byte-identical with the CLI.
#[pyfunction]
#[pyo3(signature = (theta1 = "0", theta2 = "pi/2"))]
fn verify_temporal(theta1: &str, theta2: &str) -> PyResult<String> {
    cmd_verify_temporal(theta1, theta2).map(|r| report_to_json(&r)).map_err(cli_error)
}

/// Spatial verification report as JSON text.
#[pyfunction]
fn verify_spatial() -> PyResult<String> {
    cmd_verify_spatial().map(|r| report_to_json(&r)).map_err(cli_error)
}

/// Sequential-measurement simulation report as JSON text.
#[pyfunction]
#[pyo3(signature = (variant = "temporal", theta1 = "0", theta2 = "pi/2", trials = 10_000, seed = 42, state = None))]
fn simulate(
    variant: &str,
    theta1: &str,
    theta2: &str,
    trials: u64,
    seed: u64,
    state: Option<String>,
) -> PyResult<String> {
    let config = SimulateConfig {
        variant: parse_variant(variant)?,
        theta1: theta1.to_string(),
        theta2: theta2.to_string(),
        trials,
        seed,
        state,
    };
    cmd_simulate(&config).map(|(report, _)| report_to_json(&report)).map_err(cli_error)
}

/// Separation-angle scan report as JSON text.
#[pyfunction]
#[pyo3(signature = (grid = 360))]
fn scan(grid: usize) -> PyResult<String> {
    cmd_scan(grid).map(|r| report_to_json(&r)).map_err(cli_error)
}

/// Cross-checked decision report for a constraint-system JSON document.
#[pyfunction]
fn nchv_report(text: &str) -> PyResult<String> {
    cmd_nchv_from_text(text, "<string>").map(|r| report_to_json(&r)).map_err(cli_error)
}

#[pymodule]
fn qctx_py(module: &Bound<'_, PyModule>) -> PyResult<()> {
    module.add_class::<PyAngle>()?;
    module.add_class::<PyPauliPolynomial>()?;
    module.add_class::<PyContextSet>()?;
    module.add_class::<PyConstraintSystem>()?;
    module.add_function(wrap_pyfunction!(evolve, module)?)?;
    module.add_function(wrap_pyfunction!(verify_temporal, module)?)?;
    module.add_function(wrap_pyfunction!(verify_spatial, module)?)?;
    module.add_function(wrap_pyfunction!(simulate, module)?)?;
    module.add_function(wrap_pyfunction!(scan, module)?)?;
    module.add_function(wrap_pyfunction!(nchv_report, module)?)?;
    Ok(())
}
