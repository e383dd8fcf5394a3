//! Python module `calkin`: maps, crossed-product elements, Fredholm reports
//! and essential-spectrum regions.

use calkin_core::json::{element_to_json, map_to_json, parse_element, parse_map};
use calkin_core::moebius::shift_algebra_structure;
use calkin_core::oracle::{omega_estimate, sigma_min, tau_matrix};
use calkin_core::spectra::{
    boundary_polynomials, essential_spectrum_triangular, fredholm_conditions, is_fredholm_triangular,
    spectral_inclusion, FredholmOptions,
};
use calkin_core::{Complex64, CrossedProductElement, LinearFractionalMap, SpectrumRegion};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: calkin_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serializes through JSON so Python receives plain dicts and lists.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<PyObject> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pyclass(name = "Map", frozen, module = "calkin")]
#[derive(Clone)]
struct Map {
    inner: LinearFractionalMap,
}

#[pymethods]
impl Map {
    #[new]
    fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> PyResult<Self> {
        Ok(Self { inner: LinearFractionalMap::new(a, b, c, d).map_err(err)? })
    }

    #[staticmethod]
    fn identity() -> Self {
        Self { inner: LinearFractionalMap::identity() }
    }

    #[staticmethod]
    fn rotation(omega: Complex64) -> PyResult<Self> {
        Ok(Self { inner: LinearFractionalMap::rotation(omega).map_err(err)? })
    }

    /// Parabolic non-automorphism fixing `zeta` with translation number `a`.
    #[staticmethod]
    fn rho(zeta: Complex64, a: Complex64) -> PyResult<Self> {
        Ok(Self { inner: LinearFractionalMap::rho(zeta, a).map_err(err)? })
    }

    /// Hyperbolic automorphism fixing `zeta` with derivative `t` there.
    #[staticmethod]
    fn psi(zeta: Complex64, t: f64) -> PyResult<Self> {
        Ok(Self { inner: LinearFractionalMap::psi(zeta, t).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: parse_map(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        map_to_json(&self.inner).to_string()
    }

    fn coeffs(&self) -> Vec<Complex64> {
        self.inner.coeffs().to_vec()
    }

    fn __call__(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.evaluate(z).map_err(err)
    }

    /// `self ∘ inner`.
    fn compose(&self, inner: &Map) -> Self {
        Self { inner: self.inner.compose(&inner.inner) }
    }

    fn inverse(&self) -> Self {
        Self { inner: self.inner.inverse() }
    }

    fn iterate(&self, n: i64) -> Self {
        Self { inner: self.inner.iterate(n) }
    }

    fn krein_adjoint(&self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.krein_adjoint().map_err(err)? })
    }

    fn is_self_map(&self) -> bool {
        self.inner.is_self_map()
    }

    fn is_automorphism(&self) -> bool {
        self.inner.is_automorphism()
    }

    fn contact_point(&self) -> Option<Complex64> {
        self.inner.contact_point()
    }

    fn classify(&self, py: Python<'_>) -> PyResult<PyObject> {
        to_py(py, &self.inner.classify().map_err(err)?)
    }

    /// `(zeta, t, a)` with `self = Ψ_{ζ,t} ∘ ρ_{ζ,a}`.
    fn canonical_decomposition(&self) -> PyResult<(Complex64, f64, Complex64)> {
        let d = self.inner.canonical_decomposition().map_err(err)?;
        Ok((d.zeta, d.t, d.a))
    }

    fn structure(&self, py: Python<'_>) -> PyResult<PyObject> {
        to_py(py, &shift_algebra_structure(&self.inner).map_err(err)?)
    }

    #[pyo3(signature = (other, tol = 1e-12))]
    fn approx_eq(&self, other: &Map, tol: f64) -> bool {
        self.inner.approx_eq(&other.inner, tol)
    }

    fn __repr__(&self) -> String {
        format!("Map({})", self.inner)
    }
}

#[pyclass(name = "Region", frozen, module = "calkin")]
struct Region {
    inner: SpectrumRegion,
}

#[pymethods]
impl Region {
    fn contains(&self, z: Complex64) -> bool {
        self.inner.contains(z)
    }

    fn radius(&self) -> f64 {
        self.inner.radius()
    }

    #[getter]
    fn kind(&self) -> String {
        format!("{:?}", self.inner.kind).to_lowercase()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    #[pyo3(signature = (per_disk = 256))]
    fn boundary_samples(&self, per_disk: usize) -> Vec<(String, usize, f64, Complex64)> {
        self.inner.boundary_samples(per_disk)
    }

    fn __repr__(&self) -> String {
        format!(
            "Region(kind={}, curves={}, disks={}, points={})",
            self.kind(),
            self.inner.curves.len(),
            self.inner.polynomial_disks.len(),
            self.inner.points.len()
        )
    }
}

#[pyclass(name = "Element", frozen, module = "calkin")]
struct Element {
    inner: CrossedProductElement,
}

#[pymethods]
impl Element {
    #[staticmethod]
    #[pyo3(signature = (text, base = None))]
    fn from_json(text: &str, base: Option<f64>) -> PyResult<Self> {
        Ok(Self { inner: parse_element(text, base).map_err(err)? })
    }

    #[staticmethod]
    fn coset(map: &Map, base: f64) -> PyResult<Self> {
        Ok(Self { inner: CrossedProductElement::coset_of_composition(&map.inner, base).map_err(err)? })
    }

    #[staticmethod]
    fn coset_of_adjoint(map: &Map, base: f64) -> PyResult<Self> {
        Ok(Self { inner: CrossedProductElement::coset_of_adjoint(&map.inner, base).map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (zeta, base, c = Complex64::new(1.0, 0.0)))]
    fn scalar(zeta: Complex64, base: f64, c: Complex64) -> PyResult<Self> {
        Ok(Self { inner: CrossedProductElement::scalar(zeta, base, c).map_err(err)? })
    }

    fn to_json(&self) -> String {
        element_to_json(&self.inner).to_string()
    }

    #[getter]
    fn zeta(&self) -> Complex64 {
        self.inner.zeta()
    }

    #[getter]
    fn base(&self) -> f64 {
        self.inner.base_t()
    }

    fn support(&self) -> Vec<i64> {
        self.inner.support()
    }

    /// Value of the coefficient function at index `n` and point `x ∈ [0, 1]`.
    fn coeff(&self, n: i64, x: f64) -> Complex64 {
        self.inner.coeff(n).eval(x)
    }

    fn is_triangular(&self) -> bool {
        self.inner.is_triangular()
    }

    fn __add__(&self, other: &Element) -> PyResult<Self> {
        Ok(Self { inner: self.inner.add(&other.inner).map_err(err)? })
    }

    fn __sub__(&self, other: &Element) -> PyResult<Self> {
        Ok(Self { inner: self.inner.sub(&other.inner).map_err(err)? })
    }

    fn __mul__(&self, other: &Element) -> PyResult<Self> {
        Ok(Self { inner: self.inner.multiply(&other.inner).map_err(err)? })
    }

    fn scale(&self, k: Complex64) -> Self {
        Self { inner: self.inner.scale(k) }
    }

    fn add_scalar(&self, c: Complex64) -> Self {
        Self { inner: self.inner.add_scalar(c) }
    }

    fn adjoint(&self) -> Self {
        Self { inner: self.inner.adjoint() }
    }

    fn rebase(&self, base: f64) -> PyResult<Self> {
        Ok(Self { inner: self.inner.rebase(base).map_err(err)? })
    }

    #[pyo3(signature = (other, tol = 1e-12))]
    fn approx_eq(&self, other: &Element, tol: f64) -> bool {
        self.inner.approx_eq(&other.inner, tol)
    }

    /// `((min_degree, coeffs), (min_degree, coeffs))` for `p0` and `p1`.
    fn boundary_polynomials(&self) -> ((i64, Vec<Complex64>), (i64, Vec<Complex64>)) {
        let (p0, p1) = boundary_polynomials(&self.inner);
        ((p0.min_degree(), p0.coeffs().to_vec()), (p1.min_degree(), p1.coeffs().to_vec()))
    }

    #[pyo3(signature = (nu = None, x_grid = None, tol = None))]
    fn fredholm(
        &self,
        py: Python<'_>,
        nu: Option<Vec<usize>>,
        x_grid: Option<Vec<f64>>,
        tol: Option<f64>,
    ) -> PyResult<PyObject> {
        let mut opts = FredholmOptions::default();
        if let Some(nu) = nu {
            opts.nu_schedule = nu;
        }
        if let Some(x) = x_grid {
            opts.x_grid = x;
        }
        if let Some(t) = tol {
            opts.tol = t;
        }
        let e = &self.inner;
        let report = py.allow_threads(|| fredholm_conditions(e, &opts));
        to_py(py, &report)
    }

    fn is_fredholm_triangular(&self) -> PyResult<bool> {
        is_fredholm_triangular(&self.inner).map_err(err)
    }

    fn essential_spectrum(&self) -> PyResult<Region> {
        Ok(Region { inner: essential_spectrum_triangular(&self.inner).map_err(err)? })
    }

    fn spectral_inclusion(&self) -> Region {
        Region { inner: spectral_inclusion(&self.inner) }
    }

    /// Smallest singular value of the truncated trajectorial matrix minus `lam`.
    fn sigma_min(&self, x: f64, nu: usize, lam: Complex64) -> f64 {
        sigma_min(&tau_matrix(&self.inner, x, nu), lam)
    }

    #[pyo3(signature = (x, mu, nu, kappa = 0))]
    fn omega(&self, x: f64, mu: usize, nu: usize, kappa: i64) -> PyResult<Complex64> {
        omega_estimate(&self.inner, x, mu, nu, kappa).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Element(zeta={}, base={}, support={:?})", self.inner.zeta(), self.inner.base_t(), self.inner.support())
    }
}

#[pyfunction]
fn membership(py: Python<'_>, phi: &Map, psi: &Map) -> PyResult<(bool, PyObject)> {
    let m = calkin_core::membership(&phi.inner, &psi.inner).map_err(err)?;
    Ok((m.member, to_py(py, &m.certificate)?))
}

#[pyfunction]
fn essential_norm_lower_bounds(terms: Vec<(Complex64, Map)>, zeta: Complex64) -> PyResult<(f64, f64)> {
    let terms: Vec<_> = terms.into_iter().map(|(c, m)| (c, m.inner)).collect();
    calkin_core::essential_norm_lower_bounds(&terms, zeta).map_err(err)
}

/// Winding number about `z0` of `Σ coeffs[k] z^(min_degree + k)` on the unit circle.
#[pyfunction]
#[pyo3(signature = (coeffs, min_degree = 0, z0 = Complex64::new(0.0, 0.0)))]
fn winding_number(coeffs: Vec<Complex64>, min_degree: i64, z0: Complex64) -> PyResult<i64> {
    calkin_core::winding_number(&calkin_core::LaurentPolynomial::new(min_degree, coeffs), z0).map_err(err)
}

#[pymodule]
fn calkin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Map>()?;
    m.add_class::<Element>()?;
    m.add_class::<Region>()?;
    m.add_function(wrap_pyfunction!(membership, m)?)?;
    m.add_function(wrap_pyfunction!(essential_norm_lower_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(winding_number, m)?)?;
    Ok(())
}
