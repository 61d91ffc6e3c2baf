//! Python bindings. The extension module is importable as `ttp2`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ttp2::cost::{format_decimal, independent_lower_bound, itinerary_cost, CostReport};

fn err(e: ttp2::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Symmetric integer distance matrix with zero diagonal.
#[pyclass(name = "DistanceMatrix", module = "ttp2", frozen)]
pub struct PyDistanceMatrix {
    inner: ttp2::DistanceMatrix,
}

#[pymethods]
impl PyDistanceMatrix {
    #[new]
    fn new(rows: Vec<Vec<i64>>) -> PyResult<Self> {
        ttp2::DistanceMatrix::new(rows).map(|inner| Self { inner }).map_err(err)
    }

    /// Parses a bare matrix or one preceded by its size.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        ttp2::DistanceMatrix::parse(text).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn worst_case(n: usize) -> PyResult<Self> {
        ttp2::DistanceMatrix::worst_case(n).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, seed = 0))]
    fn random_metric(n: usize, seed: u64) -> PyResult<Self> {
        ttp2::DistanceMatrix::random_metric(n, seed).map(|inner| Self { inner }).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn is_metric(&self) -> bool {
        self.inner.is_metric()
    }

    fn rows(&self) -> Vec<Vec<i64>> {
        self.inner.rows()
    }

    fn __getitem__(&self, index: (usize, usize)) -> PyResult<i64> {
        let (i, j) = index;
        if i >= self.inner.n() || j >= self.inner.n() {
            return Err(pyo3::exceptions::PyIndexError::new_err("team index out of range"));
        }
        Ok(self.inner.get(i, j))
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("DistanceMatrix(n={})", self.inner.n())
    }
}

/// Double round-robin timetable. Teams and days are 0-based.
#[pyclass(name = "Schedule", module = "ttp2", frozen)]
pub struct PySchedule {
    inner: ttp2::Schedule,
}

#[pymethods]
impl PySchedule {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        ttp2::Schedule::from_text(text).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        ttp2::Schedule::from_json(text).map(|inner| Self { inner }).map_err(err)
    }

    /// Accepts either encoding.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        ttp2::Schedule::parse_any(text).map(|inner| Self { inner }).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn days(&self) -> usize {
        self.inner.days()
    }

    /// Signed 1-based opponents: `+j` away at team j, `-j` hosting team j,
    /// `None` for an empty cell.
    fn grid(&self) -> Vec<Vec<Option<i64>>> {
        (0..self.inner.n())
            .map(|t| self.inner.row(t).iter().map(|e| e.map(|e| e.signed())).collect())
            .collect()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// Every constraint violation, as readable strings.
    fn violations(&self) -> Vec<String> {
        ttp2::validate_schedule(&self.inner).iter().map(ToString::to_string).collect()
    }

    fn is_feasible(&self) -> bool {
        ttp2::validate_schedule(&self.inner).is_empty()
    }

    fn cost(&self, dm: &PyDistanceMatrix) -> PyResult<i64> {
        if dm.inner.n() != self.inner.n() {
            return Err(PyValueError::new_err("team counts differ"));
        }
        Ok(itinerary_cost(&self.inner, &dm.inner).total)
    }

    fn __repr__(&self) -> String {
        format!("Schedule(n={}, days={})", self.inner.n(), self.inner.days())
    }
}

/// Cost summary of a solved instance.
#[pyclass(name = "Report", module = "ttp2", frozen, get_all)]
pub struct PyReport {
    n: usize,
    lb: i64,
    total: i64,
    before: i64,
    gap_percent: Option<String>,
    within_bound: bool,
    extra_total: i64,
    e1: i64,
    e2: i64,
    per_team_lb: Vec<i64>,
    per_team_total: Vec<i64>,
}

impl PyReport {
    fn new(r: &CostReport, before: i64) -> Self {
        Self {
            n: r.n,
            lb: r.lb,
            total: r.total,
            before,
            gap_percent: r.gap().map(|g| format_decimal(g * 100, 2)),
            within_bound: r.n < 8 || r.within_ratio_bound(),
            extra_total: r.extra_total(),
            e1: r.e1,
            e2: r.e2,
            per_team_lb: r.per_team_lb.clone(),
            per_team_total: r.per_team_total.clone(),
        }
    }
}

#[pymethods]
impl PyReport {
    fn __repr__(&self) -> String {
        format!(
            "Report(n={}, lb={}, total={}, gap={}%)",
            self.n,
            self.lb,
            self.total,
            self.gap_percent.as_deref().unwrap_or("-")
        )
    }
}

/// Builds a schedule and returns it with its cost report.
#[pyfunction]
#[pyo3(signature = (dm, local_search = true))]
fn solve(py: Python<'_>, dm: &PyDistanceMatrix, local_search: bool) -> PyResult<(PySchedule, PyReport)> {
    let outcome = py.detach(|| ttp2::solve(&dm.inner, local_search)).map_err(err)?;
    let report = PyReport::new(&outcome.report, outcome.before);
    Ok((PySchedule { inner: outcome.schedule }, report))
}

/// `(lb, d_g, d_m, per_team)` of the independent lower bound.
#[pyfunction]
fn lower_bound(dm: &PyDistanceMatrix) -> PyResult<(i64, i64, i64, Vec<i64>)> {
    let lb = independent_lower_bound(&dm.inner).map_err(err)?;
    Ok((lb.lb, lb.d_g, lb.d_m(), lb.per_team.clone()))
}

/// Minimum-weight perfect matching as `(pairs, weight)`.
#[pyfunction]
fn min_perfect_matching(dm: &PyDistanceMatrix) -> PyResult<(Vec<(usize, usize)>, i64)> {
    let m = ttp2::min_perfect_matching(&dm.inner).map_err(err)?;
    Ok((m.pairs().to_vec(), m.weight()))
}

#[pyfunction]
fn ratio_bound(n: usize) -> (i64, i64) {
    let b = ttp2::cost::ratio_bound(n);
    (*b.numer(), *b.denom())
}

#[pymodule]
#[pyo3(name = "ttp2")]
fn ttp2_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDistanceMatrix>()?;
    m.add_class::<PySchedule>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(min_perfect_matching, m)?)?;
    m.add_function(wrap_pyfunction!(ratio_bound, m)?)?;
    Ok(())
}
