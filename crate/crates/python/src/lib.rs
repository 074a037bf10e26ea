//! Python bindings: parse, check, project, amend and verify choreographic
//! programs from Python.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use choramend::amend::{amend_program, sel_exp_check as sel_exp};
use choramend::cc::{CcSystem, ChorConfig, ChorProgram};
use choramend::ident::{Label, Pid, Var};
use choramend::label::TransitionLabel;
use choramend::lts::{maximal_traces, traces};
use choramend::projection::{epp, project, projection_failures};
use choramend::sp::SpProgram;
use choramend::state::State;
use choramend::syntax::{
    parse_program, render_behaviour, render_network, render_program, render_sp_program,
    show_diagnostics,
};
use choramend::verify::{self, Bounds, FnTable, Verdict};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Builds a state from `{"p.x": 3, ...}`.
fn to_state(state: Option<BTreeMap<String, u64>>) -> PyResult<State> {
    let mut s = State::new();
    for (key, v) in state.unwrap_or_default() {
        let (p, x) = key.split_once('.').ok_or_else(|| {
            value_error(format!(
                "state key `{key}` is not of the form `process.variable`"
            ))
        })?;
        s.set(Pid::new(p), Var::new(x), v);
    }
    Ok(s)
}

fn from_state(s: &State) -> BTreeMap<String, u64> {
    s.entries()
        .map(|(p, x, v)| (format!("{p}.{x}"), v))
        .collect()
}

/// Parses `com(p,1,q)`, `sel(p,q,left)` or `tau(p)`.
fn parse_label(text: &str) -> PyResult<TransitionLabel> {
    let bad = || value_error(format!("cannot read transition label `{text}`"));
    let t = text.trim();
    let (head, rest) = t.split_once('(').ok_or_else(bad)?;
    let args: Vec<&str> = rest
        .strip_suffix(')')
        .ok_or_else(bad)?
        .split(',')
        .map(str::trim)
        .collect();
    match (head.trim(), args.as_slice()) {
        ("com", [p, v, q]) => Ok(TransitionLabel::com(p, v.parse().map_err(|_| bad())?, q)),
        ("sel", [p, q, l]) => Ok(TransitionLabel::sel(p, q, Label::parse(l).ok_or_else(bad)?)),
        ("tau", [p]) => Ok(TransitionLabel::tau(p)),
        _ => Err(bad()),
    }
}

fn labels(xs: &[String]) -> PyResult<Vec<TransitionLabel>> {
    xs.iter().map(|x| parse_label(x)).collect()
}

/// `(labels, choreography, state)` as seen from Python.
type PyTrace = (Vec<String>, String, BTreeMap<String, u64>);

/// A choreographic program.
#[pyclass(name = "Program", module = "choramend_py", frozen)]
struct PyProgram {
    inner: ChorProgram,
}

#[pymethods]
impl PyProgram {
    /// Parses source text; raises ValueError with the diagnostics on failure.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<PyProgram> {
        parse_program(text)
            .map(|inner| PyProgram { inner })
            .map_err(|ds| value_error(show_diagnostics(&ds)))
    }

    fn render(&self) -> String {
        render_program(&self.inner)
    }

    fn processes(&self) -> Vec<String> {
        self.inner
            .processes()
            .iter()
            .map(|p| p.to_string())
            .collect()
    }

    /// Well-formedness errors; empty when the program is well-formed.
    fn check(&self) -> Vec<String> {
        match self.inner.check() {
            Ok(()) => Vec::new(),
            Err(es) => es.iter().map(|e| e.to_string()).collect(),
        }
    }

    fn is_well_formed(&self) -> bool {
        self.inner.is_well_formed()
    }

    fn projection_failures(&self) -> Vec<String> {
        projection_failures(&self.inner)
            .iter()
            .map(|b| b.to_string())
            .collect()
    }

    fn is_projectable(&self) -> bool {
        projection_failures(&self.inner).is_empty()
    }

    fn amend(&self) -> PyResult<PyProgram> {
        self.inner
            .check()
            .map_err(|_| value_error("program is not well-formed"))?;
        Ok(PyProgram {
            inner: amend_program(&self.inner),
        })
    }

    /// The behaviour of `process` in the main choreography.
    fn project(&self, process: &str) -> PyResult<String> {
        project(&self.inner.procedures, &self.inner.main, &Pid::new(process))
            .map(|b| render_behaviour(&b))
            .map_err(value_error)
    }

    fn epp(&self) -> PyResult<PyNetwork> {
        epp(&self.inner)
            .map(|inner| PyNetwork { inner })
            .map_err(value_error)
    }

    /// `(labels, choreography, state)` for every trace of at most `depth` steps.
    #[pyo3(signature = (depth, state=None, maximal=false))]
    fn traces(
        &self,
        depth: usize,
        state: Option<BTreeMap<String, u64>>,
        maximal: bool,
    ) -> PyResult<Vec<PyTrace>> {
        self.inner
            .check()
            .map_err(|_| value_error("program is not well-formed"))?;
        let sys = CcSystem::new(&self.inner.procedures);
        let init = ChorConfig::new(self.inner.main.clone(), to_state(state)?);
        let found = if maximal {
            maximal_traces(&sys, &init, depth)
        } else {
            traces(&sys, &init, depth)
        }
        .map_err(value_error)?;
        Ok(found
            .into_iter()
            .map(|t| {
                (
                    t.labels.iter().map(|l| l.to_string()).collect(),
                    t.config.chor.to_string(),
                    from_state(&t.config.state),
                )
            })
            .collect())
    }

    fn __str__(&self) -> String {
        self.render()
    }

    fn __repr__(&self) -> String {
        format!("Program({:?})", self.inner.main.to_string())
    }

    fn __eq__(&self, other: &PyProgram) -> bool {
        self.inner == other.inner
    }
}

/// A network of processes obtained by projection.
#[pyclass(name = "Network", module = "choramend_py", frozen)]
struct PyNetwork {
    inner: SpProgram,
}

#[pymethods]
impl PyNetwork {
    fn processes(&self) -> Vec<String> {
        self.inner
            .network
            .iter()
            .map(|(p, _)| p.to_string())
            .collect()
    }

    fn behaviour(&self, process: &str) -> String {
        render_behaviour(self.inner.network.get(&Pid::new(process)))
    }

    fn procedures(&self) -> BTreeMap<String, String> {
        self.inner
            .procedures
            .iter()
            .map(|(x, b)| (x.to_string(), render_behaviour(b)))
            .collect()
    }

    fn render(&self) -> String {
        render_sp_program(&self.inner)
    }

    fn __str__(&self) -> String {
        render_network(&self.inner.network)
    }
}

/// Outcome of a bounded check.
#[pyclass(name = "Report", module = "choramend_py", frozen)]
struct PyReport {
    inner: verify::Report,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn verdict(&self) -> String {
        self.inner.verdict.to_string()
    }

    #[getter]
    fn holds(&self) -> bool {
        self.inner.verdict == Verdict::HoldsWithinBound
    }

    #[getter]
    fn trace(&self) -> Option<Vec<String>> {
        self.inner
            .witness
            .as_ref()
            .map(|w| w.trace.iter().map(|l| l.to_string()).collect())
    }

    #[getter]
    fn explored(&self) -> usize {
        self.inner.stats.explored
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(check={:?}, verdict={:?})",
            self.inner.check,
            self.verdict()
        )
    }
}

/// Runs one of `naive`, `amend-complete`, `amend-sound`, `intermediate`, `epp`.
#[pyfunction]
#[pyo3(signature = (program, check, depth=6, bound=6, budget=1_000_000, state=None))]
fn verify_program(
    py: Python<'_>,
    program: &PyProgram,
    check: &str,
    depth: usize,
    bound: usize,
    budget: usize,
    state: Option<BTreeMap<String, u64>>,
) -> PyResult<PyReport> {
    let f = match check {
        "naive" => verify::check_naive_correspondence,
        "amend-complete" => verify::check_amend_complete,
        "amend-sound" => verify::check_amend_sound,
        "intermediate" => verify::check_intermediate_formulation,
        "epp" => verify::check_epp_correspondence,
        other => return Err(value_error(format!("unknown check `{other}`"))),
    };
    let s = to_state(state)?;
    let bounds = Bounds {
        depth,
        search: bound,
        budget,
    };
    let prog = program.inner.clone();
    let report = py
        .detach(move || f(&prog, &s, bounds))
        .map_err(value_error)?;
    Ok(PyReport { inner: report })
}

/// Checks that `program` computes `table` (`{(n1, n2): n or None}`), reading
/// inputs from `x` of each input process and the result from `output.x`.
/// `target` is `original`, `amended` or `network`.
#[pyfunction]
#[pyo3(signature = (program, table, inputs, output, bound=100, target="original"))]
fn implements(
    py: Python<'_>,
    program: &PyProgram,
    table: BTreeMap<Vec<u64>, Option<u64>>,
    inputs: Vec<String>,
    output: &str,
    bound: usize,
    target: &str,
) -> PyResult<PyReport> {
    let mut t = FnTable::new(inputs.len());
    for (args, v) in table {
        t.insert(args, v).map_err(value_error)?;
    }
    let inputs: Vec<Pid> = inputs.iter().map(Pid::new).collect();
    let output = Pid::new(output);
    let prog = program.inner.clone();
    let report = match target {
        "original" => py.detach(|| verify::check_implements(&prog, &t, &inputs, &output, bound)),
        "amended" => py.detach(|| {
            verify::check_implements(&amend_program(&prog), &t, &inputs, &output, bound)
        }),
        "network" => {
            let net = epp(&amend_program(&prog)).map_err(value_error)?;
            py.detach(|| verify::check_sp_implements(&net, &t, &inputs, &output, bound))
        }
        other => return Err(value_error(format!("unknown target `{other}`"))),
    }
    .map_err(value_error)?;
    Ok(PyReport { inner: report })
}

/// True when `expanded` is a permutation of `tl` plus extra selections.
/// Labels are written `com(p,1,q)`, `sel(p,q,left)`, `tau(p)`.
#[pyfunction]
fn sel_exp_check(tl: Vec<String>, expanded: Vec<String>) -> PyResult<bool> {
    Ok(sel_exp(&labels(&tl)?, &labels(&expanded)?))
}

#[pymodule]
fn choramend_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProgram>()?;
    m.add_class::<PyNetwork>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(verify_program, m)?)?;
    m.add_function(wrap_pyfunction!(implements, m)?)?;
    m.add_function(wrap_pyfunction!(sel_exp_check, m)?)?;
    Ok(())
}
