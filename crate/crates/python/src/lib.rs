//! Python bindings. Quantities are in gap units, as in the Rust crate.

use casimir_slabs as cs;
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(pycasimir, NumericalError, PyRuntimeError);

fn err(e: cs::Error) -> PyErr {
    if e.is_numerical() {
        NumericalError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

#[pyclass(name = "Material", frozen)]
#[derive(Clone, Copy)]
struct PyMaterial(cs::Material);

#[pymethods]
impl PyMaterial {
    #[staticmethod]
    #[pyo3(signature = (omega0, omega_pl, gamma0=0.0))]
    fn drude_lorentz(omega0: f64, omega_pl: f64, gamma0: f64) -> PyResult<Self> {
        cs::Material::drude_lorentz(omega0, omega_pl, gamma0).map(Self).map_err(err)
    }

    #[staticmethod]
    fn static_nd(omega0: f64, omega_pl: f64) -> PyResult<Self> {
        cs::Material::static_nd(omega0, omega_pl).map(Self).map_err(err)
    }

    #[staticmethod]
    fn vacuum() -> Self {
        Self(cs::Material::vacuum())
    }

    fn permittivity(&self, omega: f64) -> PyResult<Complex64> {
        self.0.permittivity(omega).map_err(err)
    }

    fn refractive_index(&self, omega: f64) -> PyResult<Complex64> {
        self.0.refractive_index(omega).map_err(err)
    }

    fn surface_reflection(&self, omega: f64) -> PyResult<Complex64> {
        self.0.surface_reflection(omega).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "Cavity", frozen)]
#[derive(Clone, Copy)]
struct PyCavity(cs::CavityConfig);

#[pymethods]
impl PyCavity {
    /// `right` defaults to `left`.
    #[new]
    #[pyo3(signature = (gap, width, left, right=None))]
    fn new(gap: f64, width: f64, left: PyMaterial, right: Option<PyMaterial>) -> PyResult<Self> {
        let right = right.unwrap_or(left);
        cs::CavityConfig::new(gap, width, left.0, right.0).map(Self).map_err(err)
    }

    #[getter]
    fn gap(&self) -> f64 {
        self.0.gap
    }

    #[getter]
    fn width(&self) -> f64 {
        self.0.width
    }

    fn swapped(&self) -> Self {
        Self(self.0.swapped())
    }

    /// Reflection and transmission of both slabs plus the gap multiple-reflection factor.
    fn coefficients<'py>(&self, py: Python<'py>, omega: f64) -> PyResult<Bound<'py, PyDict>> {
        let s = cs::cavity_coefficients(&self.0, omega).map_err(err)?;
        let d = PyDict::new_bound(py);
        d.set_item("r_left", s.left.r)?;
        d.set_item("t_left", s.left.t)?;
        d.set_item("r_right", s.right.r)?;
        d.set_item("t_right", s.right.t)?;
        d.set_item("multiple", s.multiple)?;
        d.set_item("ic_bracket", s.ic_bracket())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Cavity(gap={}, width={})", self.0.gap, self.0.width)
    }
}

#[pyclass(name = "FieldState", frozen)]
#[derive(Clone, Copy)]
struct PyFieldState(cs::FieldState);

#[pymethods]
impl PyFieldState {
    #[staticmethod]
    fn vacuum() -> Self {
        Self(cs::FieldState::Vacuum)
    }

    #[staticmethod]
    fn thermal(beta: f64) -> PyResult<Self> {
        cs::FieldState::thermal(beta).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (sigma, omega_center, scale=1.0))]
    fn squeezed_band(sigma: f64, omega_center: f64, scale: f64) -> PyResult<Self> {
        cs::FieldState::SqueezedBand { sigma, omega_center, scale }.validated().map(Self).map_err(err)
    }

    #[staticmethod]
    fn squeezed_delta(omega_center: f64) -> PyResult<Self> {
        cs::FieldState::SqueezedDelta { omega_center }.validated().map(Self).map_err(err)
    }

    #[staticmethod]
    fn squeezed_const(xi: f64) -> PyResult<Self> {
        cs::FieldState::SqueezedConst { xi }.validated().map(Self).map_err(err)
    }

    /// Mode weight at frequency k.
    fn weight(&self, k: f64) -> PyResult<f64> {
        cs::weight(&self.0, k).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "QuadratureSpec", frozen)]
#[derive(Clone, Copy)]
struct PySpec(cs::QuadratureSpec);

#[pymethods]
impl PySpec {
    #[new]
    #[pyo3(signature = (rel_tol=None, abs_tol=None, max_panels=None, averaging_tol=None, regulator=None))]
    fn new(
        rel_tol: Option<f64>,
        abs_tol: Option<f64>,
        max_panels: Option<usize>,
        averaging_tol: Option<f64>,
        regulator: Option<f64>,
    ) -> PyResult<Self> {
        let mut s = cs::QuadratureSpec::default();
        if let Some(v) = rel_tol {
            s.rel_tol = v;
        }
        if let Some(v) = abs_tol {
            s.abs_tol = v;
        }
        if let Some(v) = max_panels {
            s.max_panels = v;
        }
        if let Some(v) = averaging_tol {
            s.averaging_tol = v;
        }
        s.regulator = regulator;
        s.validate().map_err(err)?;
        Ok(Self(s))
    }

    #[getter]
    fn rel_tol(&self) -> f64 {
        self.0.rel_tol
    }
}

fn spec_or_default(spec: Option<PySpec>) -> cs::QuadratureSpec {
    spec.map(|s| s.0).unwrap_or_default()
}

#[pyclass(name = "ForceBreakdown", frozen)]
struct PyBreakdown(cs::ForceBreakdown);

#[pymethods]
impl PyBreakdown {
    #[getter]
    fn f_ic(&self) -> f64 {
        self.0.f_ic
    }
    #[getter]
    fn f_b(&self) -> f64 {
        self.0.f_b
    }
    #[getter]
    fn f_total(&self) -> f64 {
        self.0.f_total
    }
    #[getter]
    fn err_ic(&self) -> f64 {
        self.0.err_ic
    }
    #[getter]
    fn err_b(&self) -> f64 {
        self.0.err_b
    }
    #[getter]
    fn err_total(&self) -> f64 {
        self.0.err_total
    }
    #[getter]
    fn attractive(&self) -> bool {
        self.0.attractive()
    }

    fn __repr__(&self) -> String {
        let b = &self.0;
        format!("ForceBreakdown(f_ic={}, f_b={}, f_total={})", b.f_ic, b.f_b, b.f_total)
    }
}

type ValueError = (f64, f64);

fn pair(e: cs::Estimate) -> ValueError {
    (e.value, e.error)
}

/// (value, error) of the initial-condition force.
#[pyfunction]
#[pyo3(signature = (cavity, state, spec=None))]
fn force_ic(py: Python<'_>, cavity: PyCavity, state: PyFieldState, spec: Option<PySpec>) -> PyResult<ValueError> {
    let s = spec_or_default(spec);
    py.allow_threads(|| cs::force_ic(&cavity.0, &state.0, &s)).map(pair).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (cavity, beta_left, beta_right, spec=None))]
fn force_bath(py: Python<'_>, cavity: PyCavity, beta_left: f64, beta_right: f64, spec: Option<PySpec>) -> PyResult<ValueError> {
    let s = spec_or_default(spec);
    py.allow_threads(|| cs::force_bath(&cavity.0, beta_left, beta_right, &s)).map(pair).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (cavity, state, beta_left, beta_right, spec=None))]
fn force_total(
    py: Python<'_>,
    cavity: PyCavity,
    state: PyFieldState,
    beta_left: f64,
    beta_right: f64,
    spec: Option<PySpec>,
) -> PyResult<PyBreakdown> {
    let s = spec_or_default(spec);
    py.allow_threads(|| cs::force_total(&cavity.0, &state.0, beta_left, beta_right, &s)).map(PyBreakdown).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (cavity, state, spec=None))]
fn force_dissipationless(py: Python<'_>, cavity: PyCavity, state: PyFieldState, spec: Option<PySpec>) -> PyResult<ValueError> {
    let s = spec_or_default(spec);
    py.allow_threads(|| cs::force_dissipationless(&cavity.0, &state.0, &s)).map(pair).map_err(err)
}

#[pyfunction]
fn force_delta_squeezed(cavity: PyCavity, omega_center: f64) -> PyResult<f64> {
    cs::force_delta_squeezed(&cavity.0, omega_center).map_err(err)
}

/// Equilibrium force between the finite slabs as a Matsubara sum.
#[pyfunction]
#[pyo3(signature = (cavity, beta, spec=None))]
fn lifshitz_matsubara_slabs(cavity: PyCavity, beta: f64, spec: Option<PySpec>) -> PyResult<ValueError> {
    cs::lifshitz_matsubara_slabs(&cavity.0, beta, &spec_or_default(spec)).map(pair).map_err(err)
}

/// Equilibrium force between half-spaces as a Matsubara sum.
#[pyfunction]
#[pyo3(signature = (left, right, gap, beta, spec=None))]
fn lifshitz_matsubara(left: PyMaterial, right: PyMaterial, gap: f64, beta: f64, spec: Option<PySpec>) -> PyResult<ValueError> {
    cs::lifshitz_matsubara(&left.0, &right.0, gap, beta, &spec_or_default(spec)).map(pair).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (cavity, spec=None))]
fn lifshitz_zero_temperature(cavity: PyCavity, spec: Option<PySpec>) -> PyResult<ValueError> {
    cs::lifshitz_zero_temperature(&cavity.0, &spec_or_default(spec)).map(pair).map_err(err)
}

/// Thermal over squeezed-band ratios. Returns a list of dicts in
/// (omega_center, sigma) order; failed cells carry NaN and a `flag` string.
#[pyfunction]
#[pyo3(signature = (cavity, beta, sigmas, omega_centers, spec=None))]
fn sigma_sweep<'py>(
    py: Python<'py>,
    cavity: PyCavity,
    beta: f64,
    sigmas: Vec<f64>,
    omega_centers: Vec<f64>,
    spec: Option<PySpec>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let s = spec_or_default(spec);
    let sw = py.allow_threads(|| cs::sweep::sigma_sweep(&cavity.0, beta, &sigmas, &omega_centers, &s)).map_err(err)?;
    let mut out = Vec::new();
    for c in sw.rows.iter().flatten() {
        let d = PyDict::new_bound(py);
        d.set_item("omega_center", c.omega_center)?;
        d.set_item("sigma", c.sigma)?;
        d.set_item("ratio_ic", c.ratio_ic)?;
        d.set_item("ratio_total", c.ratio_total)?;
        d.set_item("f_ic", c.f_ic)?;
        d.set_item("f_total", c.f_total)?;
        d.set_item("err_delta", c.err_delta)?;
        d.set_item("flag", c.flag.clone())?;
        out.push(d);
    }
    Ok(out)
}

#[pyfunction]
fn kelvin_to_beta(t_kelvin: f64, gap_meters: f64) -> PyResult<f64> {
    cs::units::kelvin_to_beta(t_kelvin, gap_meters).map_err(err)
}

#[pymodule]
fn pycasimir(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMaterial>()?;
    m.add_class::<PyCavity>()?;
    m.add_class::<PyFieldState>()?;
    m.add_class::<PySpec>()?;
    m.add_class::<PyBreakdown>()?;
    m.add("NumericalError", m.py().get_type_bound::<NumericalError>())?;
    m.add_function(wrap_pyfunction!(force_ic, m)?)?;
    m.add_function(wrap_pyfunction!(force_bath, m)?)?;
    m.add_function(wrap_pyfunction!(force_total, m)?)?;
    m.add_function(wrap_pyfunction!(force_dissipationless, m)?)?;
    m.add_function(wrap_pyfunction!(force_delta_squeezed, m)?)?;
    m.add_function(wrap_pyfunction!(lifshitz_matsubara_slabs, m)?)?;
    m.add_function(wrap_pyfunction!(lifshitz_matsubara, m)?)?;
    m.add_function(wrap_pyfunction!(lifshitz_zero_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(kelvin_to_beta, m)?)?;
    Ok(())
}
