//! Command-line front end: parses arguments, runs one pipeline and writes a
//! JSON report with "p/q" rationals.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::certificates::{certify_k2111, certify_k311, certify_krt, certify_kst, Verdict};
use crate::error::{Error, Result};
use crate::graph::brute::brute_lambda_max;
use crate::graph::count::lambda_graph;
use crate::graph::edit::edit_distance_exact;
use crate::graph::Graph;
use crate::objective::ObjectiveSpec;
use crate::opt::{continuous_opt, finite_opt, OptConfig};
use crate::partite::edit::edit_distance_vectors;
use crate::partite::engine::lambda_of_vector;
use crate::partite::symmetric::lambda_closed_form;
use crate::partite::PartiteVector;
use crate::perturbation::{lagrange_residual, partial_derivative, vertex_gradient_polynomial};
use crate::rational::{fmt_rational, to_f64};
use crate::strictness::{finite_strictness_check, flip_table, strictness_certificate};
use crate::symmetrise::{symmetrise_full, symmetrise_vertex};

/// Version of the report envelope described by `schema/report.schema.json`.
pub const SCHEMA_VERSION: u32 = 1;

/// Largest part count for which `gradients` enumerates every attachment pattern.
pub const GRADIENT_PATTERN_LIMIT: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "symstab", version, about = "Induced-density optimisation over complete partite limits")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOptions,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOptions {
    /// Print only the verdict line.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write the step trace (symmetrise) or candidate list (opt) here.
    #[arg(long, global = true)]
    pub trace_out: Option<PathBuf>,
    /// Worker threads for the library's parallel loops.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// λ of a partite vector or of a finite graph.
    Density {
        #[arg(long)]
        objective: String,
        /// Vector as JSON, a comma-separated part list, or a file holding either.
        #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
        vector: Option<String>,
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Symmetrisation trace of a graph, or of one vertex with --vertex.
    Symmetrise {
        #[arg(long)]
        objective: String,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        vertex: Option<usize>,
    },
    /// Flip gradients, attachment gradients and the Lagrange residual.
    Gradients {
        #[arg(long)]
        objective: String,
        #[arg(long)]
        vector: String,
    },
    /// Strictness certificate for one or more candidate maximisers.
    Strictness {
        #[arg(long)]
        objective: String,
        #[arg(long, required = true)]
        vector: Vec<String>,
        /// Also check the finite-order conditions on the realisation of this order.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Search for maximisers: over complete partite graphs of order --n, or
    /// over partite vectors when --n is absent.
    Opt {
        #[arg(long)]
        objective: String,
        /// Graph order for the exhaustive complete partite search.
        #[arg(long)]
        n: Option<usize>,
        /// Largest number of parts in a continuous candidate.
        #[arg(long, default_value_t = OptConfig::default().max_support)]
        max_support: usize,
        /// Total number of multistart points.
        #[arg(long, default_value_t = OptConfig::default().starts)]
        starts: usize,
        #[arg(long, default_value_t = OptConfig::default().seed)]
        seed: u64,
        /// Random starts are split across this many consecutive seeds from --seed.
        #[arg(long, default_value_t = OptConfig::default().seeds)]
        seeds: usize,
        /// Largest denominator tried when snapping candidates to rationals.
        #[arg(long, default_value_t = OptConfig::default().snap_denominator)]
        snap_denominator: i64,
    },
    /// Exact certificate for a settled target.
    Certify {
        #[command(subcommand)]
        target: CertifyTarget,
    },
    /// Exhaustive cross-checks against brute force.
    Oracle {
        #[arg(long)]
        objective: String,
        /// Graph order for brute force.
        #[arg(long)]
        n: usize,
        /// Also compare enumeration with the closed form at this vector.
        #[arg(long)]
        vector: Option<String>,
    },
    /// Edit distance between two graphs or two partite vectors.
    EditDistance {
        #[arg(long, num_args = 2, conflicts_with = "vector", required_unless_present = "vector")]
        graph: Vec<PathBuf>,
        #[arg(long, num_args = 2)]
        vector: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CertifyTarget {
    /// Complete bipartite K_{s,t} with s <= t.
    Kst { s: usize, t: usize },
    /// Balanced complete r-partite K_r(t).
    Krt { r: usize, t: usize },
    /// K_{2,1,1,1} with maximum 525/1024.
    K2111,
    /// K_{3,1,1} with maximum 216/625.
    K311,
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Usage,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
            Status::Usage => 3,
        }
    }

    fn from_check(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn of_error(e: &Error) -> Self {
        match e {
            Error::Budget(_) | Error::BoundExceeded(_) => Status::Inconclusive,
            Error::NoMonotoneClone { .. } | Error::NoTermination(_) => Status::Fail,
            _ => Status::Usage,
        }
    }
}

/// Result of one command before it is written out.
pub struct Outcome {
    pub status: Status,
    pub verdict_line: String,
    pub summary: Vec<String>,
    pub result: Value,
    pub trace: Option<Value>,
}

/// The JSON document written to --out.
pub fn envelope(command: &str, outcome: &Outcome) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "status": outcome.status,
        "verdict": outcome.verdict_line,
        "result": outcome.result,
    })
}

pub fn parse_objective(text: &str) -> Result<ObjectiveSpec> {
    let path = Path::new(text.trim());
    if path.extension().is_some_and(|e| e == "json") && path.is_file() {
        return ObjectiveSpec::from_table_json(&fs::read_to_string(path)?);
    }
    text.parse()
}

pub fn parse_vector(text: &str) -> Result<PartiteVector> {
    let path = Path::new(text.trim());
    if !text.trim_start().starts_with('{') && path.is_file() {
        return fs::read_to_string(path)?.parse();
    }
    text.parse()
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    Graph::parse(&fs::read_to_string(path)?)
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn density(objective: &str, vector: Option<&str>, graph: Option<&Path>) -> Result<Outcome> {
    let spec = parse_objective(objective)?;
    if let Some(path) = graph {
        let g = read_graph(path)?;
        let lambda = lambda_graph(&spec, &g)?;
        return Ok(Outcome {
            status: Status::Pass,
            verdict_line: fmt_rational(&lambda),
            summary: vec![format!("{} on a graph of order {}", spec.describe(), g.order())],
            result: json!({ "objective": spec.describe(), "graph": g, "lambda": fmt_rational(&lambda) }),
            trace: None,
        });
    }
    let x = parse_vector(vector.unwrap_or_default())?;
    let lambda = lambda_of_vector(&spec, &x)?;
    let closed = lambda_closed_form(&spec, &x)?;
    Ok(Outcome {
        status: Status::from_check(lambda == closed),
        verdict_line: fmt_rational(&lambda),
        summary: vec![format!("{} at {x}", spec.describe()), format!("closed form {}", fmt_rational(&closed))],
        result: json!({
            "objective": spec.describe(),
            "vector": x,
            "lambda": fmt_rational(&lambda),
            "closed_form": fmt_rational(&closed),
        }),
        trace: None,
    })
}

fn symmetrise(objective: &str, graph: &Path, vertex: Option<usize>) -> Result<Outcome> {
    let spec = parse_objective(objective)?;
    let g = read_graph(graph)?;
    let trace = match vertex {
        Some(z) => symmetrise_vertex(&spec, &g, z),
        None => symmetrise_full(&spec, &g),
    };
    let trace = match trace {
        Ok(t) => t,
        Err(e @ (Error::NoMonotoneClone { .. } | Error::NoTermination(_))) => {
            return Ok(Outcome {
                status: Status::Fail,
                verdict_line: format!("fail: {e}"),
                summary: Vec::new(),
                result: json!({ "objective": spec.describe(), "error": e.to_string() }),
                trace: None,
            })
        }
        Err(e) => return Err(e),
    };
    let ends_partite = vertex.is_some() || trace.final_shape.is_some();
    let pass = trace.is_monotone() && ends_partite;
    let line = format!(
        "{}: {} steps, lambda {} -> {}",
        if pass { "pass" } else { "fail" },
        trace.steps.len(),
        fmt_rational(&trace.initial_lambda),
        fmt_rational(&trace.final_lambda)
    );
    Ok(Outcome {
        status: Status::from_check(pass),
        verdict_line: line,
        summary: vec![format!("{} edits in total", trace.total_edits())],
        result: json!({ "objective": spec.describe(), "vertex": vertex, "trace": to_value(&trace)? }),
        trace: Some(to_value(&trace.steps)?),
    })
}

fn gradients(objective: &str, vector: &str) -> Result<Outcome> {
    let spec = parse_objective(objective)?;
    let x = parse_vector(vector)?;
    if x.len() > GRADIENT_PATTERN_LIMIT {
        return Err(Error::BoundExceeded(format!("{} parts exceed the pattern limit {GRADIENT_PATTERN_LIMIT}", x.len())));
    }
    let pairs = flip_table(&spec, &x)?;
    let mut patterns = Vec::new();
    for mask in 0u32..(1 << x.len()) {
        let b: Vec<bool> = (0..x.len()).map(|i| mask >> i & 1 == 1).collect();
        let poly = vertex_gradient_polynomial(&spec, &x, &b)?;
        let coeffs: Vec<String> = poly.coeffs().iter().map(fmt_rational).collect();
        patterns.push(json!({ "b": b, "gradient_in_alpha": coeffs }));
    }
    let partials = x
        .support_star()
        .into_iter()
        .map(|i| Ok(json!({ "index": i, "value": fmt_rational(&partial_derivative(&spec, &x, i)?) })))
        .collect::<Result<Vec<_>>>()?;
    let residual = lagrange_residual(&spec, &x)?;
    let lambda = lambda_of_vector(&spec, &x)?;
    Ok(Outcome {
        status: Status::Pass,
        verdict_line: format!("lagrange residual {}", fmt_rational(&residual)),
        summary: vec![format!("lambda {}", fmt_rational(&lambda)), format!("{} flip pairs", pairs.len())],
        result: json!({
            "objective": spec.describe(),
            "vector": x,
            "lambda": fmt_rational(&lambda),
            "flip_gradients": to_value(&pairs)?,
            "vertex_gradients": patterns,
            "partial_derivatives": partials,
            "lagrange_residual": fmt_rational(&residual),
        }),
        trace: None,
    })
}

fn strictness(objective: &str, vectors: &[String], n: Option<usize>) -> Result<Outcome> {
    let spec = parse_objective(objective)?;
    let xs = vectors.iter().map(|v| parse_vector(v)).collect::<Result<Vec<_>>>()?;
    let report = strictness_certificate(&spec, &xs)?;
    let finite = match n {
        Some(n) => xs.iter().map(|x| finite_strictness_check(&spec, x, n)).collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let pass = report.pass && finite.iter().all(|f| f.pass);
    Ok(Outcome {
        status: Status::from_check(pass),
        verdict_line: format!("{}: c = {}", if pass { "pass" } else { "fail" }, fmt_rational(&report.c)),
        summary: finite.iter().map(|f| format!("order {}: c = {}", f.n, fmt_rational(&f.c))).collect(),
        result: json!({ "certificate": to_value(&report)?, "finite": to_value(&finite)? }),
        trace: None,
    })
}

fn opt(objective: &str, n: Option<usize>, config: OptConfig) -> Result<Outcome> {
    let spec = parse_objective(objective)?;
    if let Some(n) = n {
        let found = finite_opt(&spec, n)?;
        let shapes: Vec<String> = found.shapes.iter().map(|s| format!("{:?}", s.sizes())).collect();
        return Ok(Outcome {
            status: Status::Pass,
            verdict_line: format!("lambda({n}) = {}", fmt_rational(&found.lambda)),
            summary: vec![format!("maximising shapes: {}", shapes.join(" "))],
            result: json!({ "objective": spec.describe(), "finite": to_value(&found)? }),
            trace: None,
        });
    }
    let set = continuous_opt(&spec, &config)?;
    let best = set.best();
    let (status, line) = match best.and_then(|c| c.exact.as_ref().zip(c.exact_lambda.as_ref())) {
        Some((x, lambda)) => (Status::Pass, format!("best {x} with lambda {}", fmt_rational(lambda))),
        None => match best {
            Some(c) => (Status::Inconclusive, format!("best lambda approx {:.12} (not snapped)", c.lambda_approx)),
            None => (Status::Inconclusive, "no candidate".to_string()),
        },
    };
    Ok(Outcome {
        status,
        verdict_line: line,
        summary: vec![format!("{} starts, {} candidates", set.starts_run, set.candidates.len())],
        result: json!({ "objective": spec.describe(), "search": to_value(&set)? }),
        trace: Some(to_value(&set.candidates)?),
    })
}

fn certify(target: &CertifyTarget) -> Result<Outcome> {
    let report = match *target {
        CertifyTarget::Kst { s, t } => certify_kst(s, t)?,
        CertifyTarget::Krt { r, t } => certify_krt(r, t)?,
        CertifyTarget::K2111 => certify_k2111()?,
        CertifyTarget::K311 => certify_k311()?,
    };
    let status = match report.verdict {
        Verdict::Pass => Status::Pass,
        Verdict::Fail => Status::Fail,
        Verdict::Inconclusive => Status::Inconclusive,
    };
    let value = match &report.lambda_max {
        Some(l) => fmt_rational(l),
        None => match &report.lambda_bounds[..] {
            [lo, hi] => format!("{:.12} (irrational, enclosed in the report)", (to_f64(lo) + to_f64(hi)) / 2.0),
            _ => "unknown".to_string(),
        },
    };
    let summary = report
        .checks
        .iter()
        .map(|c| format!("[{}] {}", if c.pass { "ok" } else { "FAIL" }, c.name))
        .chain(report.notes.iter().map(|n| format!("note: {n}")))
        .collect();
    Ok(Outcome {
        status,
        verdict_line: format!("{}: {} lambda_max = {value}", serde_json::to_value(status)?.as_str().unwrap_or(""), report.target),
        summary,
        result: to_value(&report)?,
        trace: None,
    })
}

fn oracle(objective: &str, n: usize, vector: Option<&str>) -> Result<Outcome> {
    let spec = parse_objective(objective)?;
    let brute = brute_lambda_max(&spec, n)?;
    let partite = finite_opt(&spec, n)?;
    let mut pass = brute.value == partite.lambda;
    let mut result = json!({
        "objective": spec.describe(),
        "n": n,
        "brute_force": fmt_rational(&brute.value),
        "complete_partite": fmt_rational(&partite.lambda),
        "brute_force_witnesses": to_value(&brute.witnesses)?,
    });
    if let Some(v) = vector {
        let x = parse_vector(v)?;
        let enumerated = lambda_of_vector(&spec, &x)?;
        let closed = lambda_closed_form(&spec, &x)?;
        pass &= enumerated == closed;
        result["vector"] = to_value(&x)?;
        result["enumerated"] = json!(fmt_rational(&enumerated));
        result["closed_form"] = json!(fmt_rational(&closed));
    }
    Ok(Outcome {
        status: Status::from_check(pass),
        verdict_line: format!(
            "{}: lambda({n}) = {} (brute force {})",
            if pass { "pass" } else { "fail" },
            fmt_rational(&partite.lambda),
            fmt_rational(&brute.value)
        ),
        summary: Vec::new(),
        result,
        trace: None,
    })
}

fn edit_distance(graphs: &[PathBuf], vectors: &[String]) -> Result<Outcome> {
    let (distance, result) = if let [a, b] = graphs {
        let (g, h) = (read_graph(a)?, read_graph(b)?);
        let d = edit_distance_exact(&g, &h)?;
        (d.clone(), json!({ "graphs": [g, h], "distance": fmt_rational(&d) }))
    } else if let [a, b] = vectors {
        let (x, y) = (parse_vector(a)?, parse_vector(b)?);
        let d = edit_distance_vectors(&x, &y)?;
        (d.clone(), json!({ "vectors": [x, y], "distance": fmt_rational(&d) }))
    } else {
        return Err(Error::InvalidVector("edit-distance needs two graphs or two vectors".into()));
    };
    Ok(Outcome { status: Status::Pass, verdict_line: fmt_rational(&distance), summary: Vec::new(), result, trace: None })
}

/// Runs one parsed command.
pub fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Density { objective, vector, graph } => density(objective, vector.as_deref(), graph.as_deref()),
        Command::Symmetrise { objective, graph, vertex } => symmetrise(objective, graph, *vertex),
        Command::Gradients { objective, vector } => gradients(objective, vector),
        Command::Strictness { objective, vector, n } => strictness(objective, vector, *n),
        Command::Opt { objective, n, max_support, starts, seed, seeds, snap_denominator } => opt(
            objective,
            *n,
            OptConfig {
                max_support: *max_support,
                starts: *starts,
                seed: *seed,
                seeds: *seeds,
                snap_denominator: *snap_denominator,
            },
        ),
        Command::Certify { target } => certify(target),
        Command::Oracle { objective, n, vector } => oracle(objective, *n, vector.as_deref()),
        Command::EditDistance { graph, vector } => edit_distance(graph, vector),
    }
}

pub fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Density { .. } => "density",
        Command::Symmetrise { .. } => "symmetrise",
        Command::Gradients { .. } => "gradients",
        Command::Strictness { .. } => "strictness",
        Command::Opt { .. } => "opt",
        Command::Certify { .. } => "certify",
        Command::Oracle { .. } => "oracle",
        Command::EditDistance { .. } => "edit-distance",
    }
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Parses, runs and reports; returns the process exit status.
pub fn run(cli: &Cli) -> Status {
    if let Some(threads) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return Status::Usage;
        }
    }
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::of_error(&e);
        }
    };
    let name = command_name(&cli.command);
    let written = cli
        .global
        .out
        .as_deref()
        .map(|p| write_json(p, &envelope(name, &outcome)))
        .transpose()
        .and_then(|_| match (&cli.global.trace_out, &outcome.trace) {
            (Some(p), Some(t)) => write_json(p, t),
            _ => Ok(()),
        });
    if let Err(e) = written {
        eprintln!("error: {e}");
        return Status::Usage;
    }
    if !cli.global.quiet {
        for line in &outcome.summary {
            println!("{line}");
        }
    }
    println!("{}", outcome.verdict_line);
    outcome.status
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { Status::Usage.code() } else { 0 });
        }
    };
    ExitCode::from(run(&cli).code())
}
