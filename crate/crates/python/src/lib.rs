//! Python bindings: `import stripmix`.

use num_bigint::{BigInt, BigUint};
use pyo3::create_exception;
use pyo3::exceptions::{PyMemoryError, PyValueError};
use pyo3::prelude::*;

use stripmix::kernel::{self as k, VertexClass};
use stripmix::markov::{self, ChainSpec, MixOptions};
use stripmix::pip::{self as p, ideal_graph};
use stripmix::{growth, transfer, Error};

create_exception!(stripmix, StripmixError, PyValueError);

fn err(e: Error) -> PyErr {
    match e {
        Error::TooLarge { .. } => PyMemoryError::new_err(e.to_string()),
        _ => StripmixError::new_err(e.to_string()),
    }
}

fn json_to_py(py: Python<'_>, value: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn chain_spec(chain: &str, p: &str) -> PyResult<ChainSpec> {
    match chain {
        "sym" => Ok(ChainSpec::Symmetric),
        "lazy" => ChainSpec::lazy(markov::parse_rational(p).map_err(err)?).map_err(err),
        other => Err(PyValueError::new_err(format!(
            "unknown chain {other:?}; use 'sym' or 'lazy'"
        ))),
    }
}

/// `c_m(0), ..., c_m(n_max)`.
#[pyfunction]
fn count_series(m: u32, n_max: usize) -> Vec<BigUint> {
    transfer::count_series(m, n_max)
}

#[pyfunction]
fn count_paths(m: u32, n: usize) -> BigUint {
    transfer::count_paths(m, n)
}

/// Coefficients of `det(A_m - x I)`, constant term first.
#[pyfunction]
fn charpoly(m: u32) -> Vec<BigInt> {
    transfer::charpoly(m).coeffs().to_vec()
}

/// Reduced `(numerator, denominator)` coefficient lists, constant term first.
#[pyfunction]
fn generating_function(m: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let gf = transfer::generating_function(m);
    (
        gf.numerator.coeffs().to_vec(),
        gf.denominator.coeffs().to_vec(),
    )
}

/// Perron root with its certified rational bracket, plus `q` and `C`.
#[pyfunction]
#[pyo3(signature = (m, tol = 1e-12))]
fn growth_constants(py: Python<'_>, m: u32, tol: f64) -> PyResult<Py<PyAny>> {
    let g = if m == 0 {
        growth::perron(m, tol)
    } else {
        growth::growth_constants(m, tol)
    }
    .map_err(err)?;
    json_to_py(py, &g)
}

#[pyfunction]
#[pyo3(signature = (m, tol = 1e-12))]
fn perron(m: u32, tol: f64) -> PyResult<f64> {
    growth::perron(m, tol).map(|g| g.r).map_err(err)
}

/// The graph of monotone paths joined by local moves.
#[pyclass(module = "stripmix", frozen)]
struct KernelGraph {
    inner: k::KernelGraph,
}

#[pymethods]
impl KernelGraph {
    #[new]
    fn new(py: Python<'_>, m: u32, n: usize) -> PyResult<Self> {
        let size = transfer::count_paths(m, n);
        if size > BigUint::from(stripmix::cli::MAX_STATES) {
            return Err(err(Error::TooLarge {
                what: "paths".into(),
                size: usize::try_from(&size).unwrap_or(usize::MAX),
                cap: stripmix::cli::MAX_STATES,
            }));
        }
        Ok(Self {
            inner: py.detach(|| k::build_kernel_graph(m, n)),
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "KernelGraph(m={}, n={}, vertices={}, edges={})",
            self.inner.m,
            self.inner.n,
            self.inner.len(),
            self.inner.edge_count()
        )
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    /// Paths as step words over `E`, `N`, `S`.
    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.inner.vertices.iter().map(|v| v.to_string()).collect()
    }

    #[getter]
    fn classes(&self) -> Vec<String> {
        self.inner.classes.iter().map(|c| c.to_string()).collect()
    }

    /// `(source, target, move)` with `source < target`.
    fn edges(&self) -> Vec<(usize, usize, String)> {
        let mut out = Vec::new();
        for (u, adj) in self.inner.adjacency.iter().enumerate() {
            for &(mv, v) in adj {
                if u < v {
                    out.push((u, v, mv.to_string()));
                }
            }
        }
        out
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        if v >= self.inner.len() {
            return Err(PyValueError::new_err("vertex out of range"));
        }
        Ok(self.inner.degree(v))
    }

    fn index_of(&self, steps: &str) -> PyResult<Option<usize>> {
        let path = k::MonotonePath::parse(self.inner.m, steps).map_err(err)?;
        Ok(self.inner.index_of(&path))
    }

    fn class_sizes(&self) -> (usize, usize, usize) {
        let count = |c| self.inner.class_members(c).len();
        (
            count(VertexClass::Separator),
            count(VertexClass::SideA),
            count(VertexClass::SideB),
        )
    }

    /// Checks that removing the separator leaves exactly the two sides.
    fn verify_bottleneck(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let report = k::verify_bottleneck(&self.inner).map_err(err)?;
        json_to_py(py, &report)
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    /// Mixing analysis; returns the same fields as `stripmix mix`.
    #[pyo3(signature = (chain = "sym", p = "1/2", eps = 0.25, t_max = 100, exact_phi = false))]
    fn mix(
        &self,
        py: Python<'_>,
        chain: &str,
        p: &str,
        eps: f64,
        t_max: usize,
        exact_phi: bool,
    ) -> PyResult<Py<PyAny>> {
        let spec = chain_spec(chain, p)?;
        let opts = MixOptions {
            eps,
            t_max,
            exact_phi,
        };
        let report = py
            .detach(|| markov::analyze(&self.inner, &spec, &opts))
            .map_err(err)?;
        json_to_py(py, &report)
    }

    /// A seeded trajectory of vertex indices, starting at `start`.
    #[pyo3(signature = (start, steps, seed = 0, chain = "sym", p = "1/2"))]
    fn simulate(
        &self,
        start: &str,
        steps: usize,
        seed: u64,
        chain: &str,
        p: &str,
    ) -> PyResult<Vec<usize>> {
        let spec = chain_spec(chain, p)?;
        let path = k::MonotonePath::parse(self.inner.m, start).map_err(err)?;
        let Some(x) = self.inner.index_of(&path) else {
            return Err(StripmixError::new_err(format!(
                "{start} is not a path of length {}",
                self.inner.n
            )));
        };
        markov::simulate(&self.inner, &spec, x, steps, seed).map_err(err)
    }
}

/// The coral PIP `C_{m,n}` of numbered snakes.
#[pyclass(module = "stripmix", frozen)]
struct CoralPip {
    inner: p::CoralPip,
}

#[pymethods]
impl CoralPip {
    #[new]
    fn new(m: u32, n: usize) -> PyResult<Self> {
        p::build_pip(m, n).map(|inner| Self { inner }).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "CoralPip(m={}, n={}, elements={})",
            self.inner.m,
            self.inner.n,
            self.inner.len()
        )
    }

    /// Elements as `snake:label`.
    #[getter]
    fn elements(&self) -> Vec<String> {
        (0..self.inner.len())
            .map(|x| self.inner.element_name(x))
            .collect()
    }

    fn lt(&self, x: usize, y: usize) -> bool {
        self.inner.pip.lt(x, y)
    }

    fn is_inconsistent(&self, x: usize, y: usize) -> bool {
        self.inner.pip.is_inconsistent(x, y)
    }

    fn covers(&self) -> Vec<(usize, usize)> {
        self.inner.pip.covers()
    }

    fn minimal_inconsistent_pairs(&self) -> Vec<(usize, usize)> {
        self.inner.pip.minimal_pairs().to_vec()
    }

    fn low_inconsistent_pair(&self) -> PyResult<(usize, usize)> {
        self.inner.low_inconsistent_pair().map_err(err)
    }

    /// Consistent order ideals, each as a sorted list of element indices.
    fn consistent_ideals(&self, py: Python<'_>) -> Vec<Vec<usize>> {
        py.detach(|| {
            ideal_graph(&self.inner.pip)
                .ideals
                .iter()
                .map(|i| i.ones().collect())
                .collect()
        })
    }

    /// Sizes of `(sep, side_a, side_b)` for the low inconsistent pair.
    fn bottleneck_sizes(&self, py: Python<'_>) -> PyResult<(usize, usize, usize)> {
        let (a, b) = self.inner.low_inconsistent_pair().map_err(err)?;
        let ideals = py.detach(|| ideal_graph(&self.inner.pip));
        let part = p::bottleneck_partition(&ideals.ideals, a, b);
        Ok((part.sep.len(), part.side_a.len(), part.side_b.len()))
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }
}

#[pymodule(name = "stripmix")]
fn stripmix_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("StripmixError", m.py().get_type::<StripmixError>())?;
    m.add_function(wrap_pyfunction!(count_series, m)?)?;
    m.add_function(wrap_pyfunction!(count_paths, m)?)?;
    m.add_function(wrap_pyfunction!(charpoly, m)?)?;
    m.add_function(wrap_pyfunction!(generating_function, m)?)?;
    m.add_function(wrap_pyfunction!(growth_constants, m)?)?;
    m.add_function(wrap_pyfunction!(perron, m)?)?;
    m.add_class::<KernelGraph>()?;
    m.add_class::<CoralPip>()?;
    Ok(())
}
