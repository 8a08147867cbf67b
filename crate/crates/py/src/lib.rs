//! Python bindings: games, solvers and the ordered progress measure domain.

use pgsym_core::report::{report_json, run, Algo, RunConfig, RunError};
use pgsym_core::{BackendKind, DomainKind, Opm, ParityGame, Player, RankDomain};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

/// A parity game with vertices `0..n`.
#[pyclass(name = "Game", frozen)]
struct PyGame {
    inner: ParityGame,
}

#[pymethods]
impl PyGame {
    /// Parses PGSolver text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<PyGame> {
        pgsym_core::parse_pgsolver(text.as_bytes())
            .map(|inner| PyGame { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Seeded random game.
    #[staticmethod]
    #[pyo3(signature = (n, d, edge_prob, seed))]
    fn random(n: usize, d: u32, edge_prob: f64, seed: u64) -> PyResult<PyGame> {
        if n == 0 || d == 0 || !(edge_prob > 0.0 && edge_prob <= 1.0) {
            return Err(PyValueError::new_err("need n >= 1, d >= 1 and 0 < edge_prob <= 1"));
        }
        Ok(PyGame { inner: pgsym_core::random_game(n, d, edge_prob, seed) })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn d(&self) -> u32 {
        self.inner.d()
    }

    fn priority(&self, v: usize) -> PyResult<u32> {
        self.check(v)?;
        Ok(self.inner.priority(v))
    }

    /// `"even"` or `"odd"`.
    fn owner(&self, v: usize) -> PyResult<&'static str> {
        self.check(v)?;
        Ok(player_name(self.inner.owner(v)))
    }

    fn successors(&self, v: usize) -> PyResult<Vec<usize>> {
        self.check(v)?;
        Ok(self.inner.successors(v).to_vec())
    }

    /// Canonical PGSolver text.
    fn to_pgsolver(&self) -> String {
        pgsym_core::write_pgsolver(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Game(n={}, m={}, d={})", self.inner.n(), self.inner.m(), self.inner.d())
    }
}

impl PyGame {
    fn check(&self, v: usize) -> PyResult<()> {
        if v < self.inner.n() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!("vertex {v} out of range")))
        }
    }
}

fn player_name(p: Player) -> &'static str {
    match p {
        Player::Even => "even",
        Player::Odd => "odd",
    }
}

/// Winning regions plus counters of one run.
#[pyclass(name = "Solution", frozen, get_all)]
struct PySolution {
    even: Vec<usize>,
    odd: Vec<usize>,
    pre_ops: u64,
    basic_ops: u64,
    live_sets_max: u64,
    report_json: String,
}

#[pymethods]
impl PySolution {
    /// Counters as a dictionary.
    fn counters<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        d.set_item("pre_ops", self.pre_ops)?;
        d.set_item("basic_ops", self.basic_ops)?;
        d.set_item("live_sets_max", self.live_sets_max)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Solution(even={:?}, odd={:?})", self.even, self.odd)
    }
}

/// Solves `game`. `algo` is one of blackbox, compact, zielonka, naive.
#[pyfunction]
#[pyo3(signature = (game, algo = "blackbox", domain = "opm", backend = "bitset", assert_invariants = false))]
fn solve(game: &PyGame, algo: &str, domain: &str, backend: &str, assert_invariants: bool) -> PyResult<PySolution> {
    let bad = |what: &str, v: &str| PyValueError::new_err(format!("unknown {what} `{v}`"));
    let cfg = RunConfig {
        algo: Algo::parse(algo).ok_or_else(|| bad("algorithm", algo))?,
        domain: DomainKind::parse(domain).ok_or_else(|| bad("domain", domain))?,
        backend: BackendKind::parse(backend).ok_or_else(|| bad("backend", backend))?,
        assert_invariants,
    };
    let out = run(&game.inner, "python", &cfg, None).map_err(|e| match e {
        RunError::FlagConflict(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    })?;
    let c = out.report.counters;
    Ok(PySolution {
        even: out.regions.even,
        odd: out.regions.odd,
        pre_ops: c.pre_ops,
        basic_ops: c.basic_ops(),
        live_sets_max: c.live_sets_max,
        report_json: report_json(&out.report),
    })
}

/// Ordered progress measure domain over `d` priorities with tuples of length `k`.
#[pyclass(name = "Opm", frozen)]
struct PyOpm {
    inner: Opm,
}

#[pymethods]
impl PyOpm {
    #[new]
    fn new(d: u32, k: usize) -> PyResult<PyOpm> {
        if d == 0 || k == 0 {
            return Err(PyValueError::new_err("need d >= 1 and k >= 1"));
        }
        Ok(PyOpm { inner: Opm::new(d, k) })
    }

    /// Domain sized for `game`.
    #[staticmethod]
    fn for_game(game: &PyGame) -> PyOpm {
        PyOpm { inner: Opm::for_game(&game.inner) }
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.width()
    }

    fn size(&self) -> u128 {
        self.inner.size_estimate()
    }

    /// `lift(rank, c)` on rendered ranks such as `"__1"` or `"TOP"`.
    fn lift(&self, rank: &str, c: u32) -> PyResult<String> {
        let r = self.parse(rank)?;
        if c >= self.inner.d() {
            return Err(PyValueError::new_err(format!("priority {c} out of range")));
        }
        Ok(self.inner.render(&self.inner.lift(&r, c)))
    }

    /// -1, 0 or 1.
    fn compare(&self, a: &str, b: &str) -> PyResult<i8> {
        Ok(self.inner.compare(&self.parse(a)?, &self.parse(b)?) as i8)
    }

    fn min(&self) -> String {
        self.inner.render(&self.inner.min())
    }
}

impl PyOpm {
    fn parse(&self, text: &str) -> PyResult<pgsym_core::Rank> {
        self.inner.parse_rank(text).ok_or_else(|| PyValueError::new_err(format!("not a rank: `{text}`")))
    }
}

/// Winning regions `(even, odd)` by the recursive attractor algorithm.
#[pyfunction]
fn zielonka(game: &PyGame) -> (Vec<usize>, Vec<usize>) {
    let r = pgsym_core::zielonka(&game.inner);
    (r.even, r.odd)
}

#[pymodule]
fn pgsym(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGame>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyOpm>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(zielonka, m)?)?;
    Ok(())
}
