//! fbl-lab: exact computations with piecewise-linear lattice functions over
//! finite-dimensional normed spaces.
//!
//! Every command is a pure function of its inputs and the run configuration;
//! outputs are JSON (default) or flat tables, with rationals as `p/q`
//! strings. Exit codes: 0 success, 2 precondition/input errors, 3 resource
//! caps, 64 usage.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use fbl_core::chain::{classify, classify_family, sigma_bcc_verify, witness_triple, SigmaBccDecomposition};
use fbl_core::corpus::corpus_family;
use fbl_core::expr::{parse as parse_expr, LatticeExpr};
use fbl_core::geometry::{BallKind, DualBallSet, SpaceSpec};
use fbl_core::measure::{
    integrate, null_generators, superlevel_bound_check, horn_tarski_classes, FiniteMeasure,
};
use fbl_core::norm::{disjoint, fbl_norm_exact, fbl_norm_sample, Disjointness};
use fbl_core::ramsey::{find_monochromatic, lemma22_min_n, lemma22_witness, Coloring, MinNOutcome, SetColoring};
use fbl_core::Error;

#[derive(Parser)]
#[command(name = "fbl-lab", version, about, disable_help_subcommand = true)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Seed for all pseudo-random operations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Budget for sampling-based operations.
    #[arg(long, global = true, default_value_t = 1000)]
    budget: u64,
    /// Cap on fan pieces.
    #[arg(long, global = true, default_value_t = 100_000)]
    piece_cap: usize,
    /// Cap on search nodes for exhaustive searches.
    #[arg(long, global = true, default_value_t = 20_000_000_000)]
    node_cap: u64,
    /// Output format.
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "table"])]
    output: String,
    /// Worker threads (FBL_LAB_THREADS overrides the default).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Free-Banach-lattice norm of an expression.
    Norm {
        #[arg(long)]
        space: String,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value = "exact", value_parser = ["exact", "sample"])]
        method: String,
    },
    /// Disjointness of two positive expressions on the dual ball.
    Disjoint {
        #[arg(long)]
        space: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Classify a positive expression over the dual ball.
    Classify {
        #[arg(long)]
        space: String,
        #[arg(long)]
        expr: String,
    },
    /// Classify a family (shared index) and search a witness triple.
    Witness {
        #[arg(long)]
        space: String,
        #[arg(long)]
        family: PathBuf,
    },
    /// Verify a decomposition against the bounded chain condition.
    SigmaBcc {
        #[arg(long)]
        space: String,
        #[arg(long)]
        decomposition: PathBuf,
    },
    /// Ramsey-style operations.
    #[command(subcommand)]
    Ramsey(RamseyCmd),
    /// Measure-theoretic operations.
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Emit a deterministic family of positive expressions.
    Corpus {
        #[arg(long)]
        space: String,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RamseyCmd {
    /// Lexicographically first triple witness of a pair coloring.
    Witness {
        #[arg(long)]
        coloring: PathBuf,
    },
    /// Exhaustive minimal N for the triple-witness property.
    MinN {
        #[arg(long)]
        alphabet: u64,
        #[arg(long)]
        max: usize,
    },
    /// Lexicographically first monochromatic r-subset of a set coloring.
    Mono {
        #[arg(long)]
        setcoloring: PathBuf,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Subcommand)]
enum MeasureCmd {
    /// Exact integral of an expression against a finitely supported measure.
    Integrate {
        #[arg(long)]
        space: String,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        measure: PathBuf,
    },
    /// Superlevel mass bound report.
    Bound {
        #[arg(long)]
        space: String,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        measure: PathBuf,
    },
    /// Measure-driven decomposition into classes {f : integral > 1/n}.
    HornTarski {
        #[arg(long)]
        space: String,
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        measure: PathBuf,
    },
    /// Coordinate labels on which a measure over the l1 ball vanishes.
    NullGens {
        #[arg(long)]
        gamma_size: usize,
        #[arg(long)]
        measure: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    if cli.config.piece_cap == 0 || cli.config.node_cap == 0 {
        let value = json!({"error": {
            "kind": "precondition",
            "message": "piece and node caps must be positive",
        }});
        emit(&cli.config, &value);
        return ExitCode::from(2);
    }
    let threads = cli
        .config
        .threads
        .or_else(|| {
            std::env::var("FBL_LAB_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let config = cli.config.clone();
    let outcome = pool.install(|| run(&config, cli.command));
    match outcome {
        Ok(value) => {
            emit(&config, &value);
            ExitCode::SUCCESS
        }
        Err(err) => {
            let (kind, code) = match &err {
                Error::Resource(_) => ("resource", 3u8),
                Error::Internal(_) => ("internal", 1),
                Error::DimensionMismatch { .. } => ("dimension-mismatch", 2),
                Error::UnsupportedKind(_) => ("unsupported-kind", 2),
                Error::Precondition(_) => ("precondition", 2),
                Error::Degenerate(_) => ("degenerate-input", 2),
                Error::Parse(_) => ("parse", 2),
            };
            let value = json!({"error": {"kind": kind, "message": err.to_string()}});
            emit(&config, &value);
            ExitCode::from(code)
        }
    }
}

fn emit(config: &RunConfig, value: &Value) {
    if config.output == "table" {
        let mut lines = Vec::new();
        flatten(value, String::new(), &mut lines);
        for line in lines {
            println!("{line}");
        }
    } else {
        println!("{value}");
    }
}

fn flatten(value: &Value, prefix: String, out: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(v, key, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(v, format!("{prefix}[{i}]"), out);
            }
        }
        other => out.push(format!("{prefix}: {other}")),
    }
}

/// `l1:<dim>`, `linf:<dim>`, `l2:<dim>`, or a path to a SpaceSpec JSON file.
fn parse_space(arg: &str) -> Result<SpaceSpec, Error> {
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
                .map_err(|_| Error::Parse(format!("bad dimension in {arg:?}")))?;
            return SpaceSpec::new(dim, ball);
        }
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| Error::Parse(format!("cannot read space spec {arg:?}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad space spec: {e}")))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf, what: &str) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {what} {path:?}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad {what}: {e}")))
}

fn read_family(path: &PathBuf) -> Result<Vec<LatticeExpr>, Error> {
    let sources: Vec<String> = read_json(path, "family file")?;
    sources.iter().map(|s| parse_expr(s)).collect()
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, Error> {
    serde_json::to_value(v).map_err(|e| Error::Internal(format!("serialization: {e}")))
}

fn run(config: &RunConfig, command: Command) -> Result<Value, Error> {
    match command {
        Command::Norm {
            space,
            expr,
            method,
        } => {
            let spec = parse_space(&space)?;
            let f = parse_expr(&expr)?;
            let cert = match method.as_str() {
                "exact" => fbl_norm_exact(&f, &spec, config.piece_cap)?,
                _ => fbl_norm_sample(&f, &spec, config.budget, config.seed)?,
            };
            to_value(&cert)
        }
        Command::Disjoint { space, f, g } => {
            let spec = parse_space(&space)?;
            let k = DualBallSet::full(spec);
            let f = parse_expr(&f)?;
            let g = parse_expr(&g)?;
            match disjoint(&f, &g, &k, config.piece_cap)? {
                Disjointness::Disjoint => Ok(json!({"disjoint": true})),
                Disjointness::Witness(w) => {
                    Ok(json!({"disjoint": false, "witness": to_value(&w)?}))
                }
            }
        }
        Command::Classify { space, expr } => {
            let spec = parse_space(&space)?;
            let k = DualBallSet::full(spec);
            let f = parse_expr(&expr)?;
            let c = classify(&f, &k, config.piece_cap)?;
            Ok(json!({
                "expr": c.expr.to_string(),
                "x_base": to_value(&c.x_base)?,
                "test_vectors": to_value(&c.test_vectors)?,
                "index": to_value(&c.index)?,
            }))
        }
        Command::Witness { space, family } => {
            let spec = parse_space(&space)?;
            let k = DualBallSet::full(spec);
            let exprs = read_family(&family)?;
            let classified = classify_family(&exprs, &k, config.piece_cap)?;
            let shared = to_value(&classified[0].index)?;
            match witness_triple(&classified, &k)? {
                None => Ok(json!({"found": false, "index": shared})),
                Some(w) => Ok(json!({
                    "found": true,
                    "index": shared,
                    "i": w.i,
                    "j": w.j,
                    "k": w.k,
                    "ystar": to_value(&w.ystar)?,
                    "checks": to_value(&w.checks)?,
                })),
            }
        }
        Command::SigmaBcc {
            space,
            decomposition,
        } => {
            let spec = parse_space(&space)?;
            let k = DualBallSet::full(spec);
            let raw: std::collections::BTreeMap<String, Vec<String>> =
                read_json(&decomposition, "decomposition file")?;
            let mut d = SigmaBccDecomposition::default();
            for (class, sources) in raw {
                let n: usize = class
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad class index {class:?}")))?;
                let exprs: Result<Vec<_>, _> =
                    sources.iter().map(|s| parse_expr(s)).collect();
                d.classes.insert(n, exprs?);
            }
            to_value(&sigma_bcc_verify(&d, &k, config.piece_cap)?)
        }
        Command::Ramsey(cmd) => run_ramsey(config, cmd),
        Command::Measure(cmd) => run_measure(config, cmd),
        Command::Corpus { space, size, out } => {
            let spec = parse_space(&space)?;
            let family = corpus_family(config.seed, size, spec.dim())?;
            let value = to_value(&family)?;
            if let Some(path) = out {
                std::fs::write(&path, format!("{value}\n"))
                    .map_err(|e| Error::Parse(format!("cannot write {path:?}: {e}")))?;
            }
            Ok(value)
        }
    }
}

fn run_ramsey(config: &RunConfig, cmd: RamseyCmd) -> Result<Value, Error> {
    match cmd {
        RamseyCmd::Witness { coloring } => {
            let c: Coloring = read_json(&coloring, "coloring file")?;
            match lemma22_witness(&c) {
                None => Ok(json!({"found": false})),
                Some(w) => Ok(json!({"found": true, "i": w.i, "j": w.j, "k": w.k})),
            }
        }
        RamseyCmd::MinN { alphabet, max } => {
            match lemma22_min_n(alphabet, max, config.node_cap)? {
                MinNOutcome::Found {
                    min_n,
                    counterexample,
                } => Ok(json!({
                    "min_n": min_n,
                    "counterexample": to_value(&counterexample)?,
                })),
                MinNOutcome::Exhausted {
                    n_max,
                    counterexample,
                } => Ok(json!({
                    "exhausted": true,
                    "n_max": n_max,
                    "counterexample": to_value(&counterexample)?,
                })),
                MinNOutcome::CapExceeded { last_complete } => Err(Error::Resource(format!(
                    "search node cap exhausted; every n <= {last_complete} was decided"
                ))),
            }
        }
        RamseyCmd::Mono { setcoloring, r } => {
            let psi: SetColoring = read_json(&setcoloring, "set coloring file")?;
            match find_monochromatic(&psi, r)? {
                None => Ok(json!({"found": false})),
                Some(b) => Ok(json!({"found": true, "subset": b})),
            }
        }
    }
}

fn run_measure(config: &RunConfig, cmd: MeasureCmd) -> Result<Value, Error> {
    match cmd {
        MeasureCmd::Integrate {
            space,
            expr,
            measure,
        } => {
            let spec = parse_space(&space)?;
            let k = DualBallSet::full(spec);
            let mu: FiniteMeasure = read_json(&measure, "measure file")?;
            mu.validate(&k)?;
            let f = parse_expr(&expr)?;
            Ok(json!({"integral": to_value(&integrate(&f, &mu)?)?}))
        }
        MeasureCmd::Bound {
            space,
            expr,
            measure,
        } => {
            let spec = parse_space(&space)?;
            let k = DualBallSet::full(spec);
            let mu: FiniteMeasure = read_json(&measure, "measure file")?;
            let f = parse_expr(&expr)?;
            to_value(&superlevel_bound_check(&f, &mu, &k, config.piece_cap)?)
        }
        MeasureCmd::HornTarski {
            space,
            family,
            measure,
        } => {
            let spec = parse_space(&space)?;
            let k = DualBallSet::full(spec);
            let mu: FiniteMeasure = read_json(&measure, "measure file")?;
            let exprs = read_family(&family)?;
            let d = horn_tarski_classes(&exprs, &mu, &k, config.piece_cap)?;
            let mut classes = serde_json::Map::new();
            for (n, members) in &d.classes {
                classes.insert(
                    n.to_string(),
                    Value::Array(
                        members
                            .iter()
                            .map(|e| Value::String(e.to_string()))
                            .collect(),
                    ),
                );
            }
            Ok(json!({"classes": classes}))
        }
        MeasureCmd::NullGens {
            gamma_size,
            measure,
        } => {
            let mu: FiniteMeasure = read_json(&measure, "measure file")?;
            Ok(json!({"null_generators": null_generators(gamma_size, &mu)?}))
        }
    }
}
