//! Python bindings for the lattice laboratory.
//!
//! The surface is string-oriented: spaces as `l1:<dim>` shorthand or
//! SpaceSpec JSON, expressions in the DSL (`sup(abs(gen(1,0)),gen(0,1))`),
//! rationals as `p/q` strings, structured results as JSON strings that
//! mirror the CLI output.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use fbl_core::chain::{classify as core_classify, classify_family, sigma_bcc_verify, witness_triple, SigmaBccDecomposition};
use fbl_core::corpus::corpus_family;
use fbl_core::expr::parse as parse_expr;
use fbl_core::geometry::{BallKind, DualBallSet, SpaceSpec};
use fbl_core::measure::{
    integrate as core_integrate, null_generators as core_null_generators,
    superlevel_bound_check, horn_tarski_classes, FiniteMeasure,
};
use fbl_core::norm::{
    disjoint as core_disjoint, fbl_norm_exact, fbl_norm_sample, sup_norm_on_k, Disjointness,
};
use fbl_core::ramsey::{
    find_monochromatic, lemma22_min_n, lemma22_witness, proof_pipeline_check, Coloring,
    MinNOutcome, SetColoring,
};
use fbl_core::{Error, Rat, DEFAULT_PIECE_CAP};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(format!("json: {e}"))
}

fn space(arg: &str) -> PyResult<SpaceSpec> {
    if let Some((kind, dim)) = arg.split_once(':') {
        let ball = match kind {
            "l1" => Some(BallKind::L1),
            "linf" => Some(BallKind::Linf),
            "l2" => Some(BallKind::L2),
            _ => None,
        };
        if let Some(ball) = ball {
            let dim: usize = dim
                .parse()
                .map_err(|_| PyValueError::new_err(format!("bad dimension in {arg:?}")))?;
            return SpaceSpec::new(dim, ball).map_err(err);
        }
    }
    serde_json::from_str(arg).map_err(json_err)
}

fn dual_ball(arg: &str) -> PyResult<DualBallSet> {
    Ok(DualBallSet::full(space(arg)?))
}

fn to_json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(json_err)
}

/// Exact evaluation of a DSL expression at a functional given as `p/q`
/// coordinate strings.
#[pyfunction]
fn eval_expr(expr: &str, xstar: Vec<String>) -> PyResult<String> {
    let f = parse_expr(expr).map_err(err)?;
    let coords: Result<Vec<Rat>, _> = xstar.iter().map(|s| s.parse()).collect();
    let value = f.eval(&coords.map_err(err)?).map_err(err)?;
    Ok(value.to_string())
}

/// Free-Banach-lattice norm; returns the certificate as JSON.
#[pyfunction]
#[pyo3(signature = (space_arg, expr, method = "exact", budget = 1000, seed = 0))]
fn norm(space_arg: &str, expr: &str, method: &str, budget: u64, seed: u64) -> PyResult<String> {
    let spec = space(space_arg)?;
    let f = parse_expr(expr).map_err(err)?;
    let cert = match method {
        "exact" => fbl_norm_exact(&f, &spec, DEFAULT_PIECE_CAP).map_err(err)?,
        "sample" => fbl_norm_sample(&f, &spec, budget, seed).map_err(err)?,
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    to_json(&cert)
}

/// Uniform norm of an expression over the dual ball.
#[pyfunction]
fn sup_norm(space_arg: &str, expr: &str) -> PyResult<String> {
    let k = dual_ball(space_arg)?;
    let f = parse_expr(expr).map_err(err)?;
    Ok(sup_norm_on_k(&f, &k, DEFAULT_PIECE_CAP).map_err(err)?.to_string())
}

/// Disjointness oracle on the dual ball; JSON with an optional witness.
#[pyfunction]
fn disjoint(space_arg: &str, f: &str, g: &str) -> PyResult<String> {
    let k = dual_ball(space_arg)?;
    let f = parse_expr(f).map_err(err)?;
    let g = parse_expr(g).map_err(err)?;
    match core_disjoint(&f, &g, &k, DEFAULT_PIECE_CAP).map_err(err)? {
        Disjointness::Disjoint => Ok("{\"disjoint\":true}".into()),
        Disjointness::Witness(w) => Ok(format!(
            "{{\"disjoint\":false,\"witness\":{}}}",
            to_json(&w)?
        )),
    }
}

/// Classify one positive expression over the dual ball; JSON record.
#[pyfunction]
fn classify(space_arg: &str, expr: &str) -> PyResult<String> {
    let k = dual_ball(space_arg)?;
    let f = parse_expr(expr).map_err(err)?;
    let c = core_classify(&f, &k, DEFAULT_PIECE_CAP).map_err(err)?;
    to_json(&c)
}

/// Classify a family of DSL expressions under one shared index and run the
/// triple-witness pipeline; JSON record with the checks.
#[pyfunction]
fn witness(space_arg: &str, family: Vec<String>) -> PyResult<String> {
    let k = dual_ball(space_arg)?;
    let exprs: Result<Vec<_>, _> = family.iter().map(|s| parse_expr(s)).collect();
    let classified = classify_family(&exprs.map_err(err)?, &k, DEFAULT_PIECE_CAP).map_err(err)?;
    match witness_triple(&classified, &k).map_err(err)? {
        None => Ok("{\"found\":false}".into()),
        Some(w) => Ok(format!(
            "{{\"found\":true,\"i\":{},\"j\":{},\"k\":{},\"ystar\":{},\"checks\":{}}}",
            w.i,
            w.j,
            w.k,
            to_json(&w.ystar)?,
            to_json(&w.checks)?
        )),
    }
}

/// Verify a decomposition (JSON mapping class index to DSL lists) against
/// the bounded chain condition.
#[pyfunction]
fn sigma_bcc(space_arg: &str, decomposition_json: &str) -> PyResult<String> {
    let k = dual_ball(space_arg)?;
    let raw: std::collections::BTreeMap<String, Vec<String>> =
        serde_json::from_str(decomposition_json).map_err(json_err)?;
    let mut d = SigmaBccDecomposition::default();
    for (class, sources) in raw {
        let n: usize = class
            .parse()
            .map_err(|_| PyValueError::new_err(format!("bad class index {class:?}")))?;
        let exprs: Result<Vec<_>, _> = sources.iter().map(|s| parse_expr(s)).collect();
        d.classes.insert(n, exprs.map_err(err)?);
    }
    to_json(&sigma_bcc_verify(&d, &k, DEFAULT_PIECE_CAP).map_err(err)?)
}

/// Lexicographically first triple witness of a pair coloring (JSON).
#[pyfunction]
fn ramsey_witness(coloring_json: &str) -> PyResult<String> {
    let c: Coloring = serde_json::from_str(coloring_json).map_err(json_err)?;
    match lemma22_witness(&c) {
        None => Ok("{\"found\":false}".into()),
        Some(w) => Ok(format!(
            "{{\"found\":true,\"i\":{},\"j\":{},\"k\":{}}}",
            w.i, w.j, w.k
        )),
    }
}

/// Proof-recipe pipeline on a pair coloring (JSON, as ramsey_witness).
#[pyfunction]
fn ramsey_pipeline(coloring_json: &str) -> PyResult<String> {
    let c: Coloring = serde_json::from_str(coloring_json).map_err(json_err)?;
    match proof_pipeline_check(&c).map_err(err)? {
        None => Ok("{\"found\":false}".into()),
        Some(w) => Ok(format!(
            "{{\"found\":true,\"i\":{},\"j\":{},\"k\":{}}}",
            w.i, w.j, w.k
        )),
    }
}

/// Exhaustive minimal N for the triple-witness property.
#[pyfunction]
#[pyo3(signature = (alphabet, max, node_cap = 20_000_000_000))]
fn ramsey_min_n(alphabet: u64, max: usize, node_cap: u64) -> PyResult<String> {
    match lemma22_min_n(alphabet, max, node_cap).map_err(err)? {
        MinNOutcome::Found {
            min_n,
            counterexample,
        } => Ok(format!(
            "{{\"min_n\":{min_n},\"counterexample\":{}}}",
            to_json(&counterexample)?
        )),
        MinNOutcome::Exhausted { n_max, .. } => {
            Ok(format!("{{\"exhausted\":true,\"n_max\":{n_max}}}"))
        }
        MinNOutcome::CapExceeded { last_complete } => Err(PyValueError::new_err(format!(
            "node cap exhausted; every n <= {last_complete} was decided"
        ))),
    }
}

/// Lexicographically first monochromatic r-subset of a set coloring (JSON).
#[pyfunction]
fn ramsey_mono(setcoloring_json: &str, r: usize) -> PyResult<String> {
    let psi: SetColoring = serde_json::from_str(setcoloring_json).map_err(json_err)?;
    match find_monochromatic(&psi, r).map_err(err)? {
        None => Ok("{\"found\":false}".into()),
        Some(b) => Ok(format!(
            "{{\"found\":true,\"subset\":{}}}",
            serde_json::to_string(&b).map_err(json_err)?
        )),
    }
}

/// Exact integral of a DSL expression against a measure (JSON atoms).
#[pyfunction]
fn integrate(space_arg: &str, expr: &str, measure_json: &str) -> PyResult<String> {
    let k = dual_ball(space_arg)?;
    let mu: FiniteMeasure = serde_json::from_str(measure_json).map_err(json_err)?;
    mu.validate(&k).map_err(err)?;
    let f = parse_expr(expr).map_err(err)?;
    Ok(core_integrate(&f, &mu).map_err(err)?.to_string())
}

/// Superlevel mass report for a positive expression and a measure (JSON).
#[pyfunction]
fn superlevel_bound(space_arg: &str, expr: &str, measure_json: &str) -> PyResult<String> {
    let k = dual_ball(space_arg)?;
    let mu: FiniteMeasure = serde_json::from_str(measure_json).map_err(json_err)?;
    let f = parse_expr(expr).map_err(err)?;
    to_json(&superlevel_bound_check(&f, &mu, &k, DEFAULT_PIECE_CAP).map_err(err)?)
}

/// Measure-driven decomposition of a family into classes (JSON).
#[pyfunction]
fn horn_tarski(space_arg: &str, family: Vec<String>, measure_json: &str) -> PyResult<String> {
    let k = dual_ball(space_arg)?;
    let mu: FiniteMeasure = serde_json::from_str(measure_json).map_err(json_err)?;
    let exprs: Result<Vec<_>, _> = family.iter().map(|s| parse_expr(s)).collect();
    let d = horn_tarski_classes(&exprs.map_err(err)?, &mu, &k, DEFAULT_PIECE_CAP).map_err(err)?;
    let mut out = std::collections::BTreeMap::new();
    for (n, members) in &d.classes {
        out.insert(
            n.to_string(),
            members.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        );
    }
    to_json(&out)
}

/// 1-based coordinate labels on which the measure vanishes.
#[pyfunction]
fn null_generators(gamma_size: usize, measure_json: &str) -> PyResult<Vec<usize>> {
    let mu: FiniteMeasure = serde_json::from_str(measure_json).map_err(json_err)?;
    core_null_generators(gamma_size, &mu).map_err(err)
}

/// Deterministic family of positive DSL expressions.
#[pyfunction]
fn corpus(seed: u64, size: usize, dim: usize) -> PyResult<Vec<String>> {
    corpus_family(seed, size, dim).map_err(err)
}

#[pymodule]
fn fbl_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(eval_expr, m)?)?;
    m.add_function(wrap_pyfunction!(norm, m)?)?;
    m.add_function(wrap_pyfunction!(sup_norm, m)?)?;
    m.add_function(wrap_pyfunction!(disjoint, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_bcc, m)?)?;
    m.add_function(wrap_pyfunction!(ramsey_witness, m)?)?;
    m.add_function(wrap_pyfunction!(ramsey_pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(ramsey_min_n, m)?)?;
    m.add_function(wrap_pyfunction!(ramsey_mono, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(superlevel_bound, m)?)?;
    m.add_function(wrap_pyfunction!(horn_tarski, m)?)?;
    m.add_function(wrap_pyfunction!(null_generators, m)?)?;
    m.add_function(wrap_pyfunction!(corpus, m)?)?;
    Ok(())
}
