//! Python module `gcsd`: scattering diagrams, theta functions, greedy
//! elements, cluster variables and log invariants.
//!
//! Structured results come back as plain Python objects decoded from the
//! engine's JSON encoding, so big coefficients arrive as decimal strings.

use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

use gcsd_core::data::{InitialData as CoreData, SideFunction};
use gcsd_core::expr::{format_poly, parse_poly as core_parse, parse_side};
use gcsd_core::gw::gw_extract;
use gcsd_core::json as js;
use gcsd_core::scattering::{
    compare_tight_vs_oracle, wall_function_tight, ScatteringDiagram, WallFunction as CoreWall,
};
use gcsd_core::thetagreedy::{
    default_endpoint, enumerate_broken_lines, greedy_element, theta_function, BrokenLineQuery,
    ClusterSeed, Point, PointedLaurent,
};

create_exception!(
    gcsd,
    GcsdError,
    PyValueError,
    "Raised when the engine rejects an input."
);

fn err(e: gcsd_core::Error) -> PyErr {
    GcsdError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn rational(v: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    let s = v.str()?.to_string();
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| PyValueError::new_err(format!("not a rational number: {s}")))
}

/// Initial functions `P1(x)` and `P2(y)` with constant term 1.
#[pyclass(module = "gcsd", frozen, skip_from_py_object)]
#[derive(Clone)]
struct InitialData {
    inner: CoreData,
}

#[pymethods]
impl InitialData {
    /// Each side is an expression such as "1+p[1,1]*x" or, when absent, a
    /// fully symbolic polynomial of degree `l1` or `l2`.
    #[new]
    #[pyo3(signature = (p1=None, p2=None, l1=None, l2=None))]
    fn new(p1: Option<&str>, p2: Option<&str>, l1: Option<u32>, l2: Option<u32>) -> PyResult<Self> {
        let side = |e: Option<&str>, l: Option<u32>, s: u8| -> PyResult<SideFunction> {
            match (e, l) {
                (Some(e), _) => parse_side(e, s).map_err(err),
                (None, Some(l)) => Ok(SideFunction::symbolic(s, l)),
                (None, None) => Err(PyValueError::new_err(format!("give p{s} or l{s}"))),
            }
        };
        Ok(InitialData {
            inner: CoreData::new(side(p1, l1, 1)?, side(p2, l2, 2)?),
        })
    }

    /// `1 + p[1,1] x + ... + p[1,l1] x^l1` and its y counterpart.
    #[staticmethod]
    fn symbolic(l1: u32, l2: u32) -> Self {
        InitialData {
            inner: CoreData::symbolic(l1, l2),
        }
    }

    /// `1 + x^l1` and `1 + y^l2`.
    #[staticmethod]
    fn cluster(l1: u32, l2: u32) -> Self {
        InitialData {
            inner: CoreData::cluster(l1, l2),
        }
    }

    /// `(1 + s x)^l1` and `(1 + t y)^l2`.
    #[staticmethod]
    fn binomial(l1: u32, l2: u32) -> Self {
        InitialData {
            inner: CoreData::binomial(l1, l2),
        }
    }

    fn __repr__(&self) -> String {
        let show = |side: u8, var: char| match self.inner.side(side) {
            SideFunction::Polynomial(c) => format_poly(var, c),
            SideFunction::OpenSymbolic { .. } => format!("1 + sum p[{side},j]*{var}^j"),
        };
        format!("InitialData(p1={:?}, p2={:?})", show(1, 'x'), show(2, 'y'))
    }
}

/// Function `1 + sum c_k z^k` attached to a wall of primitive direction (a, b).
#[pyclass(module = "gcsd", frozen, skip_from_py_object)]
struct WallFunction {
    inner: CoreWall,
}

#[pymethods]
impl WallFunction {
    #[getter]
    fn direction(&self) -> (i64, i64) {
        self.inner.direction()
    }

    #[getter]
    fn order(&self) -> u32 {
        self.inner.order()
    }

    /// Coefficients `c_0 = 1, c_1, ...` as canonical strings.
    fn coefficients(&self) -> Vec<String> {
        self.inner.coeffs().iter().map(|c| c.to_string()).collect()
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &js::wall_function(&self.inner))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// Laurent polynomial with a distinguished exponent.
#[pyclass(module = "gcsd", frozen, skip_from_py_object)]
struct Pointed {
    inner: PointedLaurent,
}

#[pymethods]
impl Pointed {
    #[getter]
    fn point(&self) -> (i64, i64) {
        self.inner.point()
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &js::pointed(&self.inner))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// Two initial lines plus outgoing rays, truncated at a fixed order.
#[pyclass(module = "gcsd", frozen, skip_from_py_object)]
struct Diagram {
    inner: ScatteringDiagram,
}

#[pymethods]
impl Diagram {
    /// Consistent completion by successive correction.
    #[staticmethod]
    fn complete(data: &InitialData, order: u32) -> PyResult<Self> {
        let d = ScatteringDiagram::two_line(&data.inner, order)
            .and_then(|d| d.ks_complete())
            .map_err(err)?;
        Ok(Diagram { inner: d })
    }

    /// Rays from tight grading sums.
    #[staticmethod]
    #[pyo3(signature = (data, order, epsilon=1))]
    fn tight(data: &InitialData, order: u32, epsilon: i8) -> PyResult<Self> {
        let d = ScatteringDiagram::tight(&data.inner, order, epsilon).map_err(err)?;
        Ok(Diagram { inner: d })
    }

    #[getter]
    fn order(&self) -> u32 {
        self.inner.order()
    }

    /// Outgoing ray of a primitive direction, if nontrivial.
    fn ray(&self, a: i64, b: i64) -> Option<WallFunction> {
        self.inner
            .ray((a, b))
            .map(|f| WallFunction { inner: f.clone() })
    }

    fn is_consistent(&self) -> PyResult<bool> {
        self.inner.is_consistent().map_err(err)
    }

    fn is_positive(&self) -> bool {
        self.inner.check_positivity()
    }

    /// Theta function of exponent (m1, m2). `endpoint` is a pair of
    /// rationals such as `(1, Fraction(1000004, 1000003))`.
    #[pyo3(signature = (m1, m2, endpoint=None))]
    fn theta(
        &self,
        m1: i64,
        m2: i64,
        endpoint: Option<(Bound<'_, PyAny>, Bound<'_, PyAny>)>,
    ) -> PyResult<Pointed> {
        let q = point(endpoint)?;
        let t = theta_function(&self.inner, (m1, m2), &q).map_err(err)?;
        Ok(Pointed { inner: t })
    }

    /// Every broken line of initial exponent (m1, m2) ending at `endpoint`.
    #[pyo3(signature = (m1, m2, endpoint=None))]
    fn broken_lines<'py>(
        &self,
        py: Python<'py>,
        m1: i64,
        m2: i64,
        endpoint: Option<(Bound<'py, PyAny>, Bound<'py, PyAny>)>,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let q = point(endpoint)?;
        let lines = enumerate_broken_lines(&self.inner, (m1, m2), &q, &BrokenLineQuery::default())
            .map_err(err)?;
        lines
            .iter()
            .map(|l| to_py(py, &js::broken_line(l)))
            .collect()
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &js::diagram(&self.inner))
    }
}

fn point(endpoint: Option<(Bound<'_, PyAny>, Bound<'_, PyAny>)>) -> PyResult<Point> {
    match endpoint {
        None => Ok(default_endpoint()),
        Some((x, y)) => Ok((rational(&x)?, rational(&y)?)),
    }
}

/// Canonical form of a polynomial expression in x or y.
#[pyfunction]
fn parse_poly(src: &str) -> PyResult<String> {
    Ok(core_parse(src).map_err(err)?.to_string())
}

/// Wall-function of the ray (a, b) from tight gradings.
#[pyfunction]
#[pyo3(signature = (data, a, b, order, epsilon=1))]
fn wall_function(
    data: &InitialData,
    a: i64,
    b: i64,
    order: u32,
    epsilon: i8,
) -> PyResult<WallFunction> {
    let f = wall_function_tight(a, b, &data.inner, order, epsilon).map_err(err)?;
    Ok(WallFunction { inner: f })
}

/// Greedy element `x[a1, a2]`.
#[pyfunction]
fn greedy(data: &InitialData, a1: i64, a2: i64) -> PyResult<Pointed> {
    Ok(Pointed {
        inner: greedy_element(a1, a2, &data.inner).map_err(err)?,
    })
}

/// Cluster variables `x_k` and normalized `X_k` for `lo <= k <= hi`.
#[pyfunction]
fn cluster_variables<'py>(
    py: Python<'py>,
    data: &InitialData,
    lo: i64,
    hi: i64,
) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let seed = ClusterSeed::new(data.inner.clone()).map_err(err)?;
    let mut out = Vec::new();
    for (k, x) in seed.pre_variables(lo, hi).map_err(err)? {
        let v = seed.normalize(k, x).map_err(err)?;
        out.push(to_py(py, &js::cluster_variable(&v))?);
    }
    Ok(out)
}

/// Invariants `(k, N_k)` of the ray (a, b) under `(1+sx)^l1`, `(1+ty)^l2`.
#[pyfunction]
fn gw_invariants<'py>(
    py: Python<'py>,
    l1: u32,
    l2: u32,
    a: i64,
    b: i64,
    order: u32,
) -> PyResult<Vec<(u32, Bound<'py, PyAny>)>> {
    let t = gw_extract(l1, l2, a, b, order).map_err(err)?;
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    t.rows
        .iter()
        .map(|(k, n)| Ok((*k, fraction.call1((n.to_string(),))?)))
        .collect()
}

/// Tight sums against the completion, plus consistency and positivity.
#[pyfunction]
fn check<'py>(py: Python<'py>, data: &InitialData, order: u32) -> PyResult<Bound<'py, PyAny>> {
    let report = compare_tight_vs_oracle(&data.inner, order, 1).map_err(err)?;
    let d = ScatteringDiagram::two_line(&data.inner, order)
        .and_then(|d| d.ks_complete())
        .map_err(err)?;
    let consistent = d.is_consistent().map_err(err)?;
    let positive = d.check_positivity();
    let v = serde_json::json!({
        "ok": report.is_equal() && consistent && positive,
        "comparison": js::comparison(&report),
        "consistent": consistent,
        "positive": positive,
    });
    to_py(py, &v)
}

#[pymodule]
fn gcsd(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GcsdError", m.py().get_type::<GcsdError>())?;
    m.add_class::<InitialData>()?;
    m.add_class::<WallFunction>()?;
    m.add_class::<Pointed>()?;
    m.add_class::<Diagram>()?;
    m.add_function(wrap_pyfunction!(parse_poly, m)?)?;
    m.add_function(wrap_pyfunction!(wall_function, m)?)?;
    m.add_function(wrap_pyfunction!(greedy, m)?)?;
    m.add_function(wrap_pyfunction!(cluster_variables, m)?)?;
    m.add_function(wrap_pyfunction!(gw_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}
