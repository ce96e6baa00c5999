//! Python bindings: machines, variants, conformance mappings and the
//! whole-SPL checks, mirroring the `splv` command line surface.

use std::collections::HashMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use splv::composition;
use splv::containment::{self, ConformanceMapping};
use splv::error::Error;
use splv::fsmv::{Fsm, FsmvMachine};
use splv::generator::{self, GenConfig};
use splv::limits::Limits;
use splv::qbf::{qcir, qdimacs};
use splv::report::Report;
use splv::spl::{self, CheckOptions, SplMode, SplOutcome};
use splv::syntax;
use splv::varlang::Configuration;

fn err_to_py(e: Error) -> PyErr {
    match e {
        Error::Io(path, source) => PyIOError::new_err(format!("{path}: {source}")),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn config_from_map(map: HashMap<String, String>) -> Configuration {
    Configuration::from_pairs(map)
}

fn config_to_dict<'py>(py: Python<'py>, cfg: &Configuration) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    for (k, v) in cfg.iter() {
        dict.set_item(k, v)?;
    }
    Ok(dict)
}

/// A finite state machine with variability.
#[pyclass(name = "Machine", frozen)]
struct PyMachine {
    inner: FsmvMachine,
}

#[pymethods]
impl PyMachine {
    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn states(&self) -> Vec<String> {
        self.inner.states.clone()
    }

    #[getter]
    fn events(&self) -> Vec<String> {
        self.inner.events.clone()
    }

    /// Declared variables as (name, domain) pairs.
    #[getter]
    fn variables(&self) -> Vec<(String, Vec<String>)> {
        self.inner
            .vars
            .decls()
            .iter()
            .map(|d| (d.name.clone(), d.domain.clone()))
            .collect()
    }

    /// All configurations satisfying the global predicate.
    fn valid_configs<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let configs = self.inner.valid_configs(&Limits::default()).map_err(err_to_py)?;
        configs.iter().map(|c| config_to_dict(py, c)).collect()
    }

    /// The variant at a configuration: enabled transitions only, guards
    /// stripped, unreachable states pruned.
    fn project(&self, config: HashMap<String, String>) -> PyResult<PyVariant> {
        let fsm = self.inner.project(&config_from_map(config)).map_err(err_to_py)?;
        Ok(PyVariant { inner: fsm })
    }

    /// Renames every variable to `<prefix>.<name>`.
    fn qualify(&self, prefix: &str) -> PyMachine {
        PyMachine { inner: self.inner.qualify(prefix) }
    }

    /// Canonical model-file rendering.
    fn render(&self) -> String {
        syntax::print_model(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Machine({}, {} states, {} transitions)",
            self.inner.name,
            self.inner.states.len(),
            self.inner.transitions.len()
        )
    }
}

/// An unguarded, prefix-closed finite state machine (a projected variant).
#[pyclass(name = "Variant", frozen)]
struct PyVariant {
    inner: Fsm,
}

#[pymethods]
impl PyVariant {
    #[getter]
    fn states(&self) -> Vec<String> {
        self.inner.states.clone()
    }

    #[getter]
    fn events(&self) -> Vec<String> {
        self.inner.events.clone()
    }

    /// All words of length at most `k`, sorted.
    fn bounded_language(&self, k: usize) -> Vec<Vec<String>> {
        self.inner.bounded_language(k).into_iter().collect()
    }

    fn __repr__(&self) -> String {
        format!("Variant({}, {} states)", self.inner.name, self.inner.states.len())
    }
}

/// A per-feature conformance mapping.
#[pyclass(name = "Mapping", frozen)]
struct PyMapping {
    inner: ConformanceMapping,
}

#[pymethods]
impl PyMapping {
    fn conforms(&self) -> bool {
        self.inner.conforms()
    }

    /// Design configurations with an empty image.
    fn failing<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.inner.failing().iter().map(|c| config_to_dict(py, c)).collect()
    }

    /// All (design configuration, image) entries in enumeration order.
    #[allow(clippy::type_complexity)]
    fn entries<'py>(
        &self,
        py: Python<'py>,
    ) -> PyResult<Vec<(Bound<'py, PyDict>, Vec<Bound<'py, PyDict>>)>> {
        self.inner
            .entries()
            .iter()
            .map(|(k, img)| {
                let key = config_to_dict(py, k)?;
                let image =
                    img.iter().map(|c| config_to_dict(py, c)).collect::<PyResult<Vec<_>>>()?;
                Ok((key, image))
            })
            .collect()
    }

    /// The table rendering written by `splv export mapping`.
    fn table(&self) -> String {
        self.inner.render_table()
    }

    fn __repr__(&self) -> String {
        format!(
            "Mapping({}, {} design variants, conforms={})",
            self.inner.feature,
            self.inner.design_variants(),
            self.inner.conforms()
        )
    }
}

/// Parses every machine block in a model text.
#[pyfunction]
fn parse_models(text: &str) -> PyResult<Vec<PyMachine>> {
    let machines = syntax::parse_models(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    for m in &machines {
        m.validate().map_err(|e| PyValueError::new_err(e.to_string()))?;
    }
    Ok(machines.into_iter().map(|inner| PyMachine { inner }).collect())
}

/// Loads and validates a single-machine model file.
#[pyfunction]
fn load_machine(path: PathBuf) -> PyResult<PyMachine> {
    Ok(PyMachine { inner: spl::load_machine(&path).map_err(err_to_py)? })
}

/// Language containment between two variants; returns (holds, shortest
/// counterexample or None).
#[pyfunction]
fn contains(design: &PyVariant, requirement: &PyVariant) -> (bool, Option<Vec<String>>) {
    let verdict = containment::contains(&design.inner, &requirement.inner);
    (verdict.holds, verdict.counterexample)
}

/// The maximal conformance mapping of one feature.
#[pyfunction]
fn compute_conformance(design: &PyMachine, requirement: &PyMachine) -> PyResult<PyMapping> {
    let mapping = containment::compute_conformance(
        &design.inner,
        &requirement.inner,
        &Limits::default(),
    )
    .map_err(err_to_py)?;
    Ok(PyMapping { inner: mapping })
}

/// Parallel composition with a composition predicate (concrete syntax).
#[pyfunction]
#[pyo3(signature = (a, b, rho = "true"))]
fn compose(a: &PyMachine, b: &PyMachine, rho: &str) -> PyResult<PyMachine> {
    let union = a.inner.vars.union(&b.inner.vars).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let rho12 = syntax::parse_predicate(rho, &union)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let composed = composition::compose(&a.inner, &b.inner, &rho12).map_err(err_to_py)?;
    Ok(PyMachine { inner: composed })
}

/// Promela export of one conformance check.
#[pyfunction]
fn emit_promela(design: &PyMachine, requirement: &PyMachine) -> String {
    splv::promela::emit_promela(&design.inner, &requirement.inner)
}

/// The asynchronous shuffle of words over their alphabets.
#[pyfunction]
fn shuffle_words(words: Vec<Vec<String>>, alphabets: Vec<Vec<String>>) -> PyResult<Vec<Vec<String>>> {
    if words.len() != alphabets.len() {
        return Err(PyValueError::new_err("one alphabet per word required"));
    }
    let sets: Vec<std::collections::BTreeSet<String>> =
        alphabets.into_iter().map(|a| a.into_iter().collect()).collect();
    for (w, sigma) in words.iter().zip(&sets) {
        if !w.iter().all(|e| sigma.contains(e)) {
            return Err(PyValueError::new_err("word uses an event outside its alphabet"));
        }
    }
    Ok(composition::shuffle_words(&words, &sets).into_iter().collect())
}

fn outcome_to_dict<'py>(py: Python<'py>, outcome: &SplOutcome) -> PyResult<Bound<'py, PyDict>> {
    let scope_hint = None::<&splv::varlang::VarScope>;
    let report = Report::from_outcome(outcome, scope_hint);
    let dict = PyDict::new(py);
    dict.set_item("name", &report.name)?;
    dict.set_item("mode", outcome.mode.as_str())?;
    dict.set_item("conforms", outcome.conforms())?;
    dict.set_item("failing_features", outcome.failing_features.clone())?;
    let features = PyDict::new(py);
    for f in &report.features {
        let row = PyDict::new(py);
        row.set_item("design_variants", f.design_variants)?;
        row.set_item("requirement_variants", f.requirement_variants)?;
        row.set_item("mapping_pairs", f.mapping_pairs)?;
        row.set_item("failing", f.failing.clone())?;
        features.set_item(&f.name, row)?;
    }
    dict.set_item("features", features)?;
    if let Some(spl_section) = &report.spl {
        dict.set_item("verdict", &spl_section.verdict)?;
        dict.set_item("witness", spl_section.witness.clone())?;
        dict.set_item("refinements", spl_section.refinements)?;
    }
    Ok(dict)
}

/// Checks one feature pair; returns a result dictionary.
#[pyfunction]
fn check_feature<'py>(
    py: Python<'py>,
    req_path: PathBuf,
    des_path: PathBuf,
) -> PyResult<Bound<'py, PyDict>> {
    let req = spl::load_machine(&req_path).map_err(err_to_py)?;
    let des = spl::load_machine(&des_path).map_err(err_to_py)?;
    let mapping =
        containment::compute_conformance(&des, &req, &Limits::default()).map_err(err_to_py)?;
    let dict = PyDict::new(py);
    dict.set_item("conforms", mapping.conforms())?;
    dict.set_item("design_variants", mapping.design_variants())?;
    dict.set_item("requirement_variants", mapping.requirement_variants)?;
    let failing = mapping
        .failing()
        .iter()
        .map(|c| config_to_dict(py, c))
        .collect::<PyResult<Vec<_>>>()?;
    dict.set_item("failing", failing)?;
    Ok(dict)
}

/// Checks a whole SPL manifest with the given strategy.
#[pyfunction]
#[pyo3(signature = (manifest_path, mode = "qbf", keep_going = false))]
fn check_spl<'py>(
    py: Python<'py>,
    manifest_path: PathBuf,
    mode: &str,
    keep_going: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let manifest = spl::load_manifest(&manifest_path).map_err(err_to_py)?;
    let mode: SplMode = mode.parse().map_err(PyValueError::new_err)?;
    let opts = CheckOptions { limits: Limits::from_env(), keep_going };
    let outcome = spl::check_spl(&manifest, mode, &opts).map_err(err_to_py)?;
    let dict = outcome_to_dict(py, &outcome)?;
    if let Some(level) = &outcome.spl {
        if let Some(w) = &level.verdict.witness {
            let scope = manifest.design_scope().map_err(err_to_py)?;
            dict.set_item("witness", w.render(&scope))?;
        }
    }
    Ok(dict)
}

/// Builds the conformance formula of a manifest and renders it in the
/// requested format (`qdimacs` or `qcir`).
#[pyfunction]
#[pyo3(signature = (manifest_path, format = "qdimacs"))]
fn export_qbf(manifest_path: PathBuf, format: &str) -> PyResult<String> {
    let manifest = spl::load_manifest(&manifest_path).map_err(err_to_py)?;
    let opts = CheckOptions { keep_going: true, ..Default::default() };
    let outcome = spl::check_spl(&manifest, SplMode::Qbf, &opts).map_err(err_to_py)?;
    let psi = spl::build_manifest_psi(&manifest, &outcome.features).map_err(err_to_py)?;
    match format {
        "qdimacs" => Ok(qdimacs::export_qdimacs(&psi)),
        "qcir" => Ok(qcir::export_qcir(&psi)),
        other => Err(PyValueError::new_err(format!("unknown format `{other}`"))),
    }
}

/// Generates a random SPL into a directory; returns the manifest path.
#[pyfunction]
#[pyo3(signature = (out_dir, features, seed = 0, inject_bugs = 0.0))]
fn generate_spl(out_dir: PathBuf, features: usize, seed: u64, inject_bugs: f64) -> PyResult<String> {
    let generated = generator::generate(&GenConfig { features, seed, inject_bugs });
    generator::write_to(&out_dir, &generated).map_err(err_to_py)?;
    Ok(out_dir.join(&generated.manifest_path).display().to_string())
}

#[pymodule]
fn splv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMachine>()?;
    m.add_class::<PyVariant>()?;
    m.add_class::<PyMapping>()?;
    m.add_function(wrap_pyfunction!(parse_models, m)?)?;
    m.add_function(wrap_pyfunction!(load_machine, m)?)?;
    m.add_function(wrap_pyfunction!(contains, m)?)?;
    m.add_function(wrap_pyfunction!(compute_conformance, m)?)?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(emit_promela, m)?)?;
    m.add_function(wrap_pyfunction!(shuffle_words, m)?)?;
    m.add_function(wrap_pyfunction!(check_feature, m)?)?;
    m.add_function(wrap_pyfunction!(check_spl, m)?)?;
    m.add_function(wrap_pyfunction!(export_qbf, m)?)?;
    m.add_function(wrap_pyfunction!(generate_spl, m)?)?;
    Ok(())
}
