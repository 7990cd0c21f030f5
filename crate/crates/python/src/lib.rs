//! Python bindings.
//!
//! Scalars cross the boundary as strings in the `Display` form of a
//! Gaussian rational (`"3/2"`, `"1-2i"`); Python ints are accepted on
//! input. Points of ℂ² are `(x, y)` tuples, points of ℂ³ `(x, y, z)`
//! tuples, and reports come back as plain dicts and lists.

use std::collections::BTreeSet;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyTuple;
use serde::Serialize;

use cxdist::algebra::GR;
use cxdist::complex_plane::{self, PointC2};
use cxdist::harness::generate::{self as gen, Dataset, Generator};
use cxdist::harness::verify::{self, VerifyOptions};
use cxdist::lines::{self as lines3, LineC3, LinePairRelation, PointC3};
use cxdist::{esgk, incidence, real_geometry};

fn err(e: cxdist::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn scalar(obj: &Bound<'_, PyAny>) -> PyResult<GR> {
    if let Ok(n) = obj.extract::<i64>() {
        return Ok(GR::from_int(n));
    }
    let s: String = obj.extract()?;
    s.parse().map_err(err)
}

fn scalars<const N: usize>(obj: &Bound<'_, PyAny>) -> PyResult<[GR; N]> {
    let items: Vec<Bound<'_, PyAny>> = obj.try_iter()?.collect::<PyResult<_>>()?;
    if items.len() != N {
        return Err(PyValueError::new_err(format!("expected {N} coordinates, got {}", items.len())));
    }
    let v: Vec<GR> = items.iter().map(scalar).collect::<PyResult<_>>()?;
    Ok(v.try_into().expect("length checked"))
}

fn point2(obj: &Bound<'_, PyAny>) -> PyResult<PointC2> {
    let [x, y] = scalars::<2>(obj)?;
    Ok(PointC2::new(x, y))
}

fn points2(obj: &Bound<'_, PyAny>) -> PyResult<Vec<PointC2>> {
    obj.try_iter()?.map(|p| point2(&p?)).collect()
}

fn point3(obj: &Bound<'_, PyAny>) -> PyResult<PointC3> {
    let [x, y, z] = scalars::<3>(obj)?;
    Ok(PointC3::new(x, y, z))
}

fn scalar_set(obj: &Bound<'_, PyAny>) -> PyResult<BTreeSet<GR>> {
    obj.try_iter()?.map(|a| scalar(&a?)).collect()
}

/// Any serializable value as the Python object its JSON form decodes to.
fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn tuple2<'py>(py: Python<'py>, p: &PointC2) -> PyResult<Bound<'py, PyTuple>> {
    PyTuple::new(py, [p.x.to_string(), p.y.to_string()])
}

fn tuple3<'py>(py: Python<'py>, p: &PointC3) -> PyResult<Bound<'py, PyTuple>> {
    PyTuple::new(py, p.0.iter().map(GR::to_string))
}

/// A complex line in ℂ³, kept in canonical form.
#[pyclass(name = "Line3", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyLine(LineC3);

#[pymethods]
impl PyLine {
    #[new]
    fn new(base: &Bound<'_, PyAny>, direction: &Bound<'_, PyAny>) -> PyResult<Self> {
        LineC3::new(&scalars::<3>(base)?, &scalars::<3>(direction)?).map(PyLine).map_err(err)
    }

    #[staticmethod]
    fn through(p: &Bound<'_, PyAny>, q: &Bound<'_, PyAny>) -> PyResult<Self> {
        LineC3::through(&point3(p)?, &point3(q)?).map(PyLine).map_err(err)
    }

    #[getter]
    fn base<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyTuple>> {
        tuple3(py, &PointC3(self.0.base().clone()))
    }

    #[getter]
    fn direction<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyTuple>> {
        tuple3(py, &PointC3(self.0.dir().clone()))
    }

    fn contains(&self, p: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.0.contains(&point3(p)?))
    }

    fn is_standard(&self) -> bool {
        self.0.is_standard()
    }

    /// `"equal"`, `"intersecting"`, `"parallel"` or `"skew"`.
    fn relation(&self, other: &PyLine) -> &'static str {
        match lines3::line_pair_relation(&self.0, &other.0) {
            LinePairRelation::Equal => "equal",
            LinePairRelation::Intersecting { .. } => "intersecting",
            LinePairRelation::Parallel { .. } => "parallel",
            LinePairRelation::Skew => "skew",
        }
    }

    fn intersection<'py>(&self, py: Python<'py>, other: &PyLine) -> PyResult<Option<Bound<'py, PyTuple>>> {
        match lines3::line_pair_relation(&self.0, &other.0) {
            LinePairRelation::Intersecting { point, .. } => Some(tuple3(py, &point)).transpose(),
            _ => Ok(None),
        }
    }

    /// Real and imaginary parts of `(a, b, c, d)` for the standard form
    /// `(0, a, b) + t(1, c, d)`, as strings.
    fn chart(&self) -> PyResult<Vec<String>> {
        let g = real_geometry::g_coords(&self.0).map_err(err)?;
        Ok(g.to_array().iter().map(ToString::to_string).collect())
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

fn unwrap_lines(lines: Vec<PyLine>) -> Vec<LineC3> {
    lines.into_iter().map(|l| l.0).collect()
}

/// `Δ(p, q) = (p_x − q_x)² + (p_y − q_y)²`.
#[pyfunction]
fn delta(p: &Bound<'_, PyAny>, q: &Bound<'_, PyAny>) -> PyResult<String> {
    Ok(complex_plane::delta(&point2(p)?, &point2(q)?).to_string())
}

#[pyfunction]
fn distance_statistics<'py>(py: Python<'py>, points: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let s = complex_plane::distance_statistics(&points2(points)?).map_err(err)?;
    let histogram: Vec<(String, u64)> = s.histogram.iter().map(|(d, c)| (d.to_string(), *c)).collect();
    let distinct: Vec<String> = s.distinct_distances.iter().map(ToString::to_string).collect();
    let value = serde_json::json!({
        "n": s.n,
        "distinctDistanceCount": distinct.len(),
        "distinctDistances": distinct,
        "histogram": histogram,
        "quadrupleCount": s.quadruple_count,
        "zeroPairs": s.zero_pairs,
    });
    to_py(py, &value)
}

#[pyfunction]
#[pyo3(signature = (points, cap = complex_plane::DEFAULT_QUADRUPLE_CAP))]
fn quadruples_bruteforce(points: &Bound<'_, PyAny>, cap: usize) -> PyResult<u64> {
    complex_plane::quadruples_bruteforce(&points2(points)?, cap).map_err(err)
}

#[pyfunction]
fn growth_sets<'py>(py: Python<'py>, a: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &complex_plane::growth_sets(&scalar_set(a)?))
}

#[pyfunction]
fn check_reductions<'py>(py: Python<'py>, a: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &complex_plane::check_reductions(&scalar_set(a)?).map_err(err)?)
}

/// The line `ℓ_{a,c}`.
#[pyfunction]
fn esgk_line(a: &Bound<'_, PyAny>, c: &Bound<'_, PyAny>) -> PyResult<PyLine> {
    Ok(PyLine(esgk::esgk_line(&point2(a)?, &point2(c)?)))
}

/// `L(P)`, with `ℓ_{a,c}` at index `a·n + c`.
#[pyfunction]
fn esgk_family(points: &Bound<'_, PyAny>) -> PyResult<Vec<PyLine>> {
    let family = esgk::esgk_family(&points2(points)?).map_err(err)?;
    Ok(family.lines.into_iter().map(PyLine).collect())
}

#[pyfunction]
fn esgk_summary<'py>(py: Python<'py>, points: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let (_, summary) = esgk::esgk_summary(&points2(points)?).map_err(err)?;
    to_py(py, &summary)
}

#[pyfunction]
fn parallel_pair_count(points: &Bound<'_, PyAny>) -> PyResult<u64> {
    Ok(esgk::parallel_pair_count(&points2(points)?))
}

/// `{richness: [point, ...]}` for every point on two or more lines.
#[pyfunction]
fn rich_points<'py>(py: Python<'py>, lines: Vec<PyLine>) -> PyResult<Bound<'py, PyAny>> {
    let report = incidence::rich_points(&unwrap_lines(lines)).map_err(err)?;
    let dict = pyo3::types::PyDict::new(py);
    for (r, pts) in &report.points_by_richness {
        let list: Vec<Bound<'py, PyTuple>> = pts.iter().map(|p| tuple3(py, p)).collect::<PyResult<_>>()?;
        dict.set_item(r, list)?;
    }
    Ok(dict.into_any())
}

#[pyfunction]
#[pyo3(signature = (lines, threshold, triple_cap = incidence::DEFAULT_TRIPLE_CAP))]
fn rich_surfaces<'py>(py: Python<'py>, lines: Vec<PyLine>, threshold: usize, triple_cap: usize) -> PyResult<Bound<'py, PyAny>> {
    let report = incidence::rich_surfaces(&unwrap_lines(lines), threshold, triple_cap).map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (lines, r, epsilon = 0.1))]
fn structure_report<'py>(py: Python<'py>, lines: Vec<PyLine>, r: usize, epsilon: f64) -> PyResult<Bound<'py, PyAny>> {
    let report = incidence::structure_report(&unwrap_lines(lines), r, epsilon).map_err(err)?;
    to_py(py, &report)
}

/// Runs the invariant suite on a point set.
#[pyfunction]
#[pyo3(signature = (points, seed = 0))]
fn verify_points<'py>(py: Python<'py>, points: &Bound<'py, PyAny>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let opts = VerifyOptions { seed, ..VerifyOptions::default() };
    let report = verify::verify_points(&points2(points)?, None, &opts).map_err(err)?;
    to_py(py, &report)
}

/// Builds a dataset from a generator description such as
/// `{"kind": "grid", "k": 3}`; returns points or `Line3`s.
#[pyfunction]
#[pyo3(signature = (spec, seed = 0))]
fn generate<'py>(py: Python<'py>, spec: &Bound<'py, PyAny>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let text: String = py.import("json")?.call_method1("dumps", (spec,))?.extract()?;
    let generator: Generator = serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    match gen::generate(&generator, seed).map_err(err)? {
        Dataset::Points(p) => {
            let list: Vec<Bound<'py, PyTuple>> = p.iter().map(|q| tuple2(py, q)).collect::<PyResult<_>>()?;
            Ok(list.into_pyobject(py)?.into_any())
        }
        Dataset::Lines(l) => Ok(l.into_iter().map(PyLine).collect::<Vec<_>>().into_pyobject(py)?.into_any()),
    }
}

#[pymodule]
mod pycxdist {
    #[pymodule_export]
    use super::{
        check_reductions, delta, distance_statistics, esgk_family, esgk_line, esgk_summary, generate, growth_sets,
        parallel_pair_count, quadruples_bruteforce, rich_points, rich_surfaces, structure_report, verify_points, PyLine,
    };
}
