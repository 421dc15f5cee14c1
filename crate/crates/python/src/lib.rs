//! Python bindings: rules, instances, synthesis, decorations and the exact
//! oracle. Graphs are named by the same specs the CLI accepts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use fraccolor::cli::Instance as InstanceSpec;
use fraccolor::decoration::full_decoration;
use fraccolor::engine::{synthesize as engine_synthesize, verify, EngineOptions, SynthReport};
use fraccolor::group::parse_window_spec;
use fraccolor::heuristics;
use fraccolor::instances::{
    random_regular, schreier_graph, torus_instance, GraphInstance, SchreierInstance,
};
use fraccolor::local_rule::{self, DEFAULT_ENUMERATION_LIMIT};
use fraccolor::lp_oracle::{self, DEFAULT_SIZE_CAP};
use fraccolor::{GroupCtx, Window};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_ctx(ctx: &str) -> PyResult<GroupCtx> {
    ctx.parse().map_err(err)
}

fn parse_instance(spec: &str) -> PyResult<InstanceSpec> {
    InstanceSpec::parse(spec, fraccolor::rng::DEFAULT_SEED).map_err(err)
}

fn graph(spec: &str) -> PyResult<GraphInstance> {
    parse_instance(spec)?.graph().map_err(err)
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// A clopen subset of the shift space: a window and its accepted patterns.
#[pyclass(name = "ClopenSet", module = "fraccolor", from_py_object)]
#[derive(Clone)]
struct PyClopenSet {
    inner: local_rule::ClopenSet,
}

#[pymethods]
impl PyClopenSet {
    #[new]
    fn new(ctx: &str, window: Vec<Vec<i64>>, patterns: Vec<String>) -> PyResult<Self> {
        let w = Window::from_ints(parse_ctx(ctx)?, &window).map_err(err)?;
        Ok(PyClopenSet {
            inner: local_rule::ClopenSet::from_strings(w, &patterns).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (text, ctx = None))]
    fn from_json(text: &str, ctx: Option<&str>) -> PyResult<Self> {
        let ctx = ctx.map(parse_ctx).transpose()?;
        Ok(PyClopenSet {
            inner: local_rule::ClopenSet::from_json(text, ctx).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn ctx(&self) -> String {
        self.inner.ctx().to_string()
    }

    #[getter]
    fn window(&self) -> Vec<Vec<i64>> {
        self.inner.window().to_ints()
    }

    #[getter]
    fn patterns(&self) -> Vec<String> {
        self.inner.pattern_strings()
    }

    /// Exact density as `"p/q"`.
    fn density(&self) -> String {
        self.inner.density().to_string()
    }

    #[pyo3(signature = (f = "std"))]
    fn is_independent(&self, f: &str) -> PyResult<bool> {
        let f = parse_window_spec(self.inner.ctx(), f).map_err(err)?;
        Ok(
            local_rule::is_independent(&self.inner, &f, DEFAULT_ENUMERATION_LIMIT)
                .map_err(err)?
                .independent,
        )
    }

    #[pyo3(signature = (f = "std"))]
    fn prune(&self, f: &str) -> PyResult<Self> {
        let f = parse_window_spec(self.inner.ctx(), f).map_err(err)?;
        Ok(PyClopenSet {
            inner: local_rule::prune(&self.inner, &f, DEFAULT_ENUMERATION_LIMIT).map_err(err)?,
        })
    }

    fn minimize_window(&self) -> Self {
        PyClopenSet {
            inner: local_rule::minimize_window(&self.inner),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "ClopenSet({}, {}, {:?})",
            self.inner.ctx(),
            self.inner.window(),
            self.inner.pattern_strings()
        )
    }
}

/// A finite set with a (partial) action of the generators.
#[pyclass(name = "Instance", module = "fraccolor", from_py_object)]
#[derive(Clone)]
struct PyInstance {
    inner: SchreierInstance,
}

#[pymethods]
impl PyInstance {
    #[staticmethod]
    fn torus(d: u32, m: u32) -> PyResult<Self> {
        Ok(PyInstance {
            inner: torus_instance(d, m).map_err(err)?,
        })
    }

    /// A random `2n`-regular graph, fully decorated.
    #[staticmethod]
    fn random(n_gens: usize, vertices: usize, seed: u64) -> PyResult<Self> {
        let g = random_regular(n_gens, vertices, seed).map_err(err)?;
        Ok(PyInstance {
            inner: full_decoration(&g)
                .and_then(|d| d.to_instance())
                .map_err(err)?,
        })
    }

    /// Any instance spec the CLI accepts; plain graphs get decorated.
    #[staticmethod]
    fn parse(spec: &str) -> PyResult<Self> {
        Ok(PyInstance {
            inner: parse_instance(spec)?.action().map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyInstance {
            inner: SchreierInstance::from_json(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn ctx(&self) -> String {
        self.inner.ctx().to_string()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    /// Edges of the Schreier graph for the given `F`.
    #[pyo3(signature = (f = "std"))]
    fn edges(&self, f: &str) -> PyResult<Vec<(u32, u32)>> {
        let f = parse_window_spec(self.inner.ctx(), f).map_err(err)?;
        Ok(schreier_graph(&self.inner, &f)
            .map_err(err)?
            .edges()
            .to_vec())
    }
}

/// Synthesizes and verifies the k-fold coloring; returns the report dict.
#[pyfunction]
#[pyo3(signature = (instance, rule, f = "std", n_cap = 22, compact_colors = false))]
fn synthesize<'py>(
    py: Python<'py>,
    instance: &PyInstance,
    rule: &PyClopenSet,
    f: &str,
    n_cap: usize,
    compact_colors: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let s = &instance.inner;
    let f = parse_window_spec(s.ctx(), f).map_err(err)?;
    let opts = EngineOptions {
        n_cap,
        compact_colors,
        ..Default::default()
    };
    let syn = engine_synthesize(s, &rule.inner, &f, &opts).map_err(err)?;
    let check = verify(&syn.coloring, &schreier_graph(s, &f).map_err(err)?);
    let report = SynthReport::new(&syn, &rule.inner, &check);
    json_to_py(py, &serde_json::to_string(&report).map_err(err)?)
}

/// `χ*` as `"p/q"`.
#[pyfunction]
fn fractional_chromatic(graph_spec: &str) -> PyResult<String> {
    Ok(
        lp_oracle::fractional_chromatic(&graph(graph_spec)?, DEFAULT_SIZE_CAP)
            .map_err(err)?
            .value
            .to_string(),
    )
}

#[pyfunction]
fn kfold_chromatic(graph_spec: &str, k: usize) -> PyResult<usize> {
    Ok(
        lp_oracle::kfold_chromatic(&graph(graph_spec)?, k, DEFAULT_SIZE_CAP)
            .map_err(err)?
            .ell,
    )
}

#[pyfunction]
fn independence_number(graph_spec: &str) -> PyResult<usize> {
    Ok(
        lp_oracle::independence_number(&graph(graph_spec)?, DEFAULT_SIZE_CAP)
            .map_err(err)?
            .0,
    )
}

/// Certified fraction of a full decoration as `"p/q"`.
#[pyfunction]
fn decorate(graph_spec: &str) -> PyResult<String> {
    Ok(full_decoration(&graph(graph_spec)?)
        .map_err(err)?
        .certified_fraction()
        .to_string())
}

#[pyfunction]
#[pyo3(signature = (ctx, radius, f = "std"))]
fn hashmax_rule(ctx: &str, radius: usize, f: &str) -> PyResult<PyClopenSet> {
    let ctx = parse_ctx(ctx)?;
    let f = parse_window_spec(ctx, f).map_err(err)?;
    Ok(PyClopenSet {
        inner: heuristics::hashmax_rule(ctx, &f, radius, DEFAULT_ENUMERATION_LIMIT).map_err(err)?,
    })
}

/// `(mean, std_error)` of a Monte Carlo density estimate.
#[pyfunction]
fn estimate_density(rule: &PyClopenSet, samples: u64, seed: u64) -> PyResult<(f64, f64)> {
    let est = heuristics::estimate_density(&rule.inner, samples, seed).map_err(err)?;
    Ok((est.mean, est.std_error))
}

#[pyfunction]
fn rv_reference(d: usize) -> f64 {
    heuristics::rv_reference(d)
}

/// Runs the command line with `args` (without the program name).
#[pyfunction]
fn run_cli(args: Vec<String>) -> i32 {
    fraccolor::cli::main_with_args(std::iter::once("fraccolor".to_string()).chain(args))
}

#[pymodule]
#[pyo3(name = "fraccolor")]
fn fraccolor_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyClopenSet>()?;
    m.add_class::<PyInstance>()?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(fractional_chromatic, m)?)?;
    m.add_function(wrap_pyfunction!(kfold_chromatic, m)?)?;
    m.add_function(wrap_pyfunction!(independence_number, m)?)?;
    m.add_function(wrap_pyfunction!(decorate, m)?)?;
    m.add_function(wrap_pyfunction!(hashmax_rule, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_density, m)?)?;
    m.add_function(wrap_pyfunction!(rv_reference, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
