//! Python bindings: instances, solvers and lattice helpers.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use tarski_core::levelset::{solve_with, NoObserver, SolveOptions};
use tarski_core::{baseline, lattice, oracle, CountedOracle, Error, Point};

create_exception!(tarski, MonotonicityViolation, PyException, "F is not monotone; args are (message, witness).");

type Coords = Vec<i64>;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Violation(report) => {
            let witness = report
                .witness
                .as_ref()
                .map(|w| (w.x.coords().to_vec(), w.y.coords().to_vec(), w.fx.coords().to_vec(), w.fy.coords().to_vec()));
            MonotonicityViolation::new_err((report.to_string(), witness))
        }
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        Error::Internal(msg) => PyRuntimeError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A function on the grid `[n_1] x ... x [n_d]`.
#[pyclass(name = "Instance", frozen, module = "tarski")]
struct PyInstance {
    inner: oracle::Instance,
}

fn wrap(r: tarski_core::Result<oracle::Instance>) -> PyResult<PyInstance> {
    r.map(|inner| PyInstance { inner }).map_err(to_py)
}

#[pymethods]
impl PyInstance {
    /// `F(x) = x + sign(target - x)`; `target` is the only fixed point.
    #[staticmethod]
    fn target(shape: Coords, target: Coords) -> PyResult<Self> {
        wrap(oracle::Instance::target(&shape, Point::new(target)))
    }

    /// Explicit table: `d` values per point, points in lexicographic order.
    #[staticmethod]
    fn table(shape: Coords, values: Coords) -> PyResult<Self> {
        wrap(oracle::Instance::table(&shape, values))
    }

    #[staticmethod]
    fn random_monotone(shape: Coords, seed: u64) -> PyResult<Self> {
        wrap(oracle::gen_random_monotone(&shape, seed))
    }

    /// Uniform random table; usually not monotone.
    #[staticmethod]
    fn random_table(shape: Coords, seed: u64) -> PyResult<Self> {
        wrap(oracle::gen_random_table(&shape, seed))
    }

    #[staticmethod]
    fn affine(shape: Coords, seed: u64) -> PyResult<Self> {
        wrap(oracle::gen_affine(&shape, seed))
    }

    #[staticmethod]
    fn rotation(shape: Coords, seed: u64) -> PyResult<Self> {
        wrap(oracle::gen_rotation(&shape, seed))
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        wrap(oracle::from_text(text))
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        wrap(oracle::load(path))
    }

    fn to_text(&self) -> String {
        oracle::to_text(&self.inner)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        oracle::save(&self.inner, path).map_err(to_py)
    }

    #[getter]
    fn shape(&self) -> Coords {
        self.inner.shape().to_vec()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: Coords) -> PyResult<Coords> {
        self.inner.eval(&Point::new(x)).map(Point::into_coords).map_err(to_py)
    }

    /// `None` if monotone, else a violating `(x, y, F(x), F(y))`.
    fn violation(&self) -> PyResult<Option<(Coords, Coords, Coords, Coords)>> {
        let w = oracle::verify_monotone(&self.inner).map_err(to_py)?;
        Ok(w.map(|w| (w.x.into_coords(), w.y.into_coords(), w.fx.into_coords(), w.fy.into_coords())))
    }

    fn is_monotone(&self) -> PyResult<bool> {
        Ok(self.violation()?.is_none())
    }

    /// Every fixed point, lexicographic.
    fn fixed_points(&self) -> PyResult<Vec<Coords>> {
        let set = oracle::fixed_points_bruteforce(&self.inner).map_err(to_py)?;
        Ok(set.into_iter().map(Point::into_coords).collect())
    }

    fn __repr__(&self) -> String {
        let kind = match self.inner.kind() {
            oracle::InstanceKind::Target(t) => format!("target={t}"),
            oracle::InstanceKind::Table(_) => "table".to_string(),
        };
        format!("Instance(shape={:?}, {kind})", self.inner.shape())
    }
}

#[pyclass(name = "SolveResult", frozen, get_all, module = "tarski")]
struct PySolveResult {
    fixed_point: Coords,
    queries: u64,
    /// Outer-loop levels searched (levelset only).
    levels: usize,
    /// Tab-separated trace lines when requested.
    trace: Option<Vec<String>>,
}

#[pymethods]
impl PySolveResult {
    fn __repr__(&self) -> String {
        format!("SolveResult(fixed_point={:?}, queries={})", self.fixed_point, self.queries)
    }
}

/// Finds a fixed point with `algo` in {"levelset", "dqy", "brute"}.
#[pyfunction]
#[pyo3(signature = (instance, algo = "levelset", verify_certificates = false, trace = false))]
fn solve(
    py: Python<'_>,
    instance: &PyInstance,
    algo: &str,
    verify_certificates: bool,
    trace: bool,
) -> PyResult<PySolveResult> {
    let inst = &instance.inner;
    py.detach(|| {
        let mut o = CountedOracle::new(inst);
        if trace {
            o = o.with_trace();
        }
        let (fixed_point, levels) = match algo {
            "levelset" => {
                let r = solve_with(&mut o, &SolveOptions { verify_certificates }, &mut NoObserver).map_err(to_py)?;
                (r.fixed_point, r.levels.len())
            }
            "dqy" => (baseline::dqy_solve(&mut o, &inst.grid(), verify_certificates).map_err(to_py)?.fixed_point, 0),
            "brute" => (baseline::brute_solve(&mut o, &inst.grid()).map_err(to_py)?, 0),
            other => return Err(PyValueError::new_err(format!("unknown algorithm {other:?}"))),
        };
        Ok(PySolveResult {
            fixed_point: fixed_point.into_coords(),
            queries: o.distinct_queries(),
            levels,
            trace: o.transcript().map(|t| t.iter().map(|r| r.to_line()).collect()),
        })
    })
}

/// Label tags of `x` given `F(x)`, e.g. `["up1", "down3"]`.
#[pyfunction]
fn classify(x: Coords, fx: Coords) -> PyResult<Vec<String>> {
    let (_, labels) = lattice::classify(&Point::new(x), &Point::new(fx)).map_err(to_py)?;
    let tags = labels.tags();
    Ok(if tags == "-" { Vec::new() } else { tags.split(',').map(str::to_string).collect() })
}

#[pyfunction]
fn leq(x: Coords, y: Coords) -> PyResult<bool> {
    lattice::leq(&Point::new(x), &Point::new(y)).map_err(to_py)
}

#[pyfunction]
fn glb(points: Vec<Coords>) -> PyResult<Coords> {
    let pts: Vec<Point> = points.into_iter().map(Point::new).collect();
    lattice::glb(&pts).map(Point::into_coords).map_err(to_py)
}

#[pyfunction]
fn lub(points: Vec<Coords>) -> PyResult<Coords> {
    let pts: Vec<Point> = points.into_iter().map(Point::new).collect();
    lattice::lub(&pts).map(Point::into_coords).map_err(to_py)
}

/// Greedy point with `lower <= x <= upper` and coordinate sum `k`.
#[pyfunction]
fn level_point(lower: Coords, upper: Coords, k: i64) -> PyResult<Coords> {
    lattice::level_point(&Point::new(lower), &Point::new(upper), k).map(Point::into_coords).map_err(to_py)
}

/// The generator behind every seeded instance.
#[pyclass(name = "SplitMix64", module = "tarski")]
struct PySplitMix64 {
    inner: tarski_core::SplitMix64,
}

#[pymethods]
impl PySplitMix64 {
    #[new]
    fn new(seed: u64) -> Self {
        PySplitMix64 { inner: tarski_core::SplitMix64::new(seed) }
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform-ish draw from `1..=n`.
    fn coord(&mut self, n: i64) -> PyResult<i64> {
        if n < 1 {
            return Err(PyValueError::new_err("n must be positive"));
        }
        Ok(self.inner.coord(n))
    }
}

#[pymodule]
fn tarski(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("MonotonicityViolation", m.py().get_type::<MonotonicityViolation>())?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolveResult>()?;
    m.add_class::<PySplitMix64>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(leq, m)?)?;
    m.add_function(wrap_pyfunction!(glb, m)?)?;
    m.add_function(wrap_pyfunction!(lub, m)?)?;
    m.add_function(wrap_pyfunction!(level_point, m)?)?;
    Ok(())
}
