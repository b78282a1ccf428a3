//! The `frontdoor` command line.
//!
//! Exit status: 0 on success, 1 when `find` or `min` finds no set, 2 on
//! input errors, 3 when `--oracle` disagrees with the result.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use frontdoor_core::oracle::{fd_criterion_bruteforce, fd_sets_bruteforce};
use frontdoor_core::{do_oracle, fd_estimate, find_fd, find_minimal_fd, Dag, FdEnumerator, FdQuery, FdResult, NodeSet};
use serde::Deserialize;
use serde_json::json;

use crate::bench::{run_benchmark, write_csv, ExperimentConfig};
use crate::format::parse_graph;
use crate::model::parse_model;

pub const EXIT_NONE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

const ESTIMATE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "frontdoor",
    version,
    about = "Find, verify, minimize and enumerate front-door adjustment sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximal front-door set between the include and restrict bounds.
    Find(QueryArgs),
    /// Inclusion-minimal front-door set between the bounds.
    Min(QueryArgs),
    /// Every front-door set between the bounds, one per line.
    Enumerate {
        #[command(flatten)]
        query: QueryArgs,
        /// Stop after this many sets.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Whether a given set is a front-door set.
    Verify(VerifyArgs),
    /// Causal effect P(y | do(x)) by front-door adjustment on a discrete model.
    Estimate(EstimateArgs),
    /// Random-graph experiments written as CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Graph file in the text format.
    #[arg(short = 'g', long = "graph")]
    pub graph: PathBuf,
    /// Exposure nodes, comma separated.
    #[arg(short = 'x', long = "exposure")]
    pub exposure: String,
    /// Outcome nodes, comma separated.
    #[arg(short = 'y', long = "outcome")]
    pub outcome: String,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// JSON output (default).
    #[arg(long, conflicts_with = "plain")]
    pub json: bool,
    /// Plain-text output.
    #[arg(long)]
    pub plain: bool,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Nodes that must be in the set.
    #[arg(short = 'i', long = "include")]
    pub include: Option<String>,
    /// Nodes allowed in the set; defaults to all observed nodes outside X and Y.
    #[arg(short = 'r', long = "restrict")]
    pub restrict: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Cross-check against brute force (small graphs only).
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Candidate set.
    #[arg(short = 'z', long = "set")]
    pub set: String,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Model JSON document.
    #[arg(long)]
    pub model: PathBuf,
    /// Intervention, e.g. `X=1` or `X1=0,X2=1`.
    #[arg(long = "do")]
    pub intervention: String,
    /// Outcome event, e.g. `Y=1`.
    #[arg(long = "of")]
    pub outcome: String,
    /// Front-door set; empty for none.
    #[arg(long = "via", default_value = "")]
    pub via: String,
    /// JSON output instead of the bare number.
    #[arg(long)]
    pub json: bool,
    /// Compare with the truncated-factorization result.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// A configuration object or an array of them.
    #[arg(long)]
    pub config: PathBuf,
    /// CSV destination; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Mismatch(_) => EXIT_MISMATCH,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Mismatch(m) => m,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Find(q) => cmd_find(&q, false, out),
        Command::Min(q) => cmd_find(&q, true, out),
        Command::Enumerate { query, limit } => cmd_enumerate(&query, limit, out),
        Command::Verify(v) => cmd_verify(&v, out),
        Command::Estimate(e) => cmd_estimate(&e, out),
        Command::Bench(b) => cmd_bench(&b, out),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Dag, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn names(list: &str) -> impl Iterator<Item = &str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn node_set(g: &Dag, list: &str) -> Result<NodeSet, Failure> {
    g.set_by_names(names(list))
        .map_err(|name| Failure::Input(format!("unknown node `{name}`")))
}

fn names_json(g: &Dag, s: &NodeSet) -> serde_json::Value {
    json!(g.names_of(s))
}

fn names_plain(g: &Dag, s: &NodeSet) -> String {
    format!("{{{}}}", g.names_of(s).join(","))
}

fn emit(out: &mut dyn Write, line: &str) -> Result<(), Failure> {
    writeln!(out, "{line}").map_err(input)
}

fn build_query(g: &Dag, q: &QueryArgs) -> Result<FdQuery, Failure> {
    let x = node_set(g, &q.graph.exposure)?;
    let y = node_set(g, &q.graph.outcome)?;
    let i = match &q.include {
        Some(l) => node_set(g, l)?,
        None => g.empty_set(),
    };
    let r = match &q.restrict {
        Some(l) => node_set(g, l)?,
        None => frontdoor_core::default_restrict(g, &x, &y),
    };
    FdQuery::new(g, x, y, i, r).map_err(|e| Failure::Input(describe_query_error(g, &e)))
}

fn describe_query_error(g: &Dag, e: &frontdoor_core::QueryError) -> String {
    use frontdoor_core::QueryError::*;
    match *e {
        Overlap { first, second, node } => format!("{first} and {second} both contain `{}`", g.name(node)),
        IncludeOutsideRestrict { node } => format!("`{}` is in the include set but not allowed", g.name(node)),
        LatentCandidate { node } => format!("`{}` is latent and cannot be adjusted for", g.name(node)),
        _ => e.to_string(),
    }
}

fn oracle_family(g: &Dag, q: &FdQuery) -> Result<Vec<NodeSet>, Failure> {
    fd_sets_bruteforce(g, q.x(), q.y(), q.include(), q.restrict()).map_err(input)
}

fn cmd_find(args: &QueryArgs, minimal: bool, out: &mut dyn Write) -> Outcome {
    let g = load_graph(&args.graph.graph)?;
    let q = build_query(&g, args)?;
    let result = if minimal {
        find_minimal_fd(&g, &q)
    } else {
        find_fd(&g, &q)
    };
    if args.oracle {
        let family = oracle_family(&g, &q)?;
        let ok = match result.set() {
            None => family.is_empty(),
            Some(z) if minimal => family.contains(z) && !family.iter().any(|f| f != z && f.is_subset(z)),
            Some(z) => family.contains(z) && family.iter().all(|f| f.is_subset(z)),
        };
        if !ok {
            return Err(Failure::Mismatch(format!(
                "brute force finds {} front-door sets, result disagrees",
                family.len()
            )));
        }
    }
    let line = match (&result, args.output.plain) {
        (FdResult::Found(z), false) => json!({"exists": true, "set": names_json(&g, z)}).to_string(),
        (FdResult::NoneExists, false) => json!({"exists": false, "set": null}).to_string(),
        (FdResult::Found(z), true) => names_plain(&g, z),
        (FdResult::NoneExists, true) => "none".to_string(),
    };
    emit(out, &line)?;
    Ok(if result.exists() { 0 } else { EXIT_NONE })
}

fn cmd_enumerate(args: &QueryArgs, limit: Option<usize>, out: &mut dyn Write) -> Outcome {
    let g = load_graph(&args.graph.graph)?;
    let q = build_query(&g, args)?;
    let mut e = FdEnumerator::new(&g, &q);
    if let Some(k) = limit {
        e = e.with_limit(k);
    }
    let mut listed = Vec::new();
    for z in e {
        let line = if args.output.plain {
            names_plain(&g, &z)
        } else {
            names_json(&g, &z).to_string()
        };
        emit(out, &line)?;
        listed.push(z);
    }
    if args.oracle {
        let family = oracle_family(&g, &q)?;
        let expected = limit.map_or(family.len(), |k| k.min(family.len()));
        let mut sorted = listed.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != listed.len() || listed.len() != expected || !sorted.iter().all(|z| family.contains(z)) {
            return Err(Failure::Mismatch(format!(
                "enumeration lists {} sets, brute force finds {}",
                listed.len(),
                family.len()
            )));
        }
    }
    let count = listed.len();
    let line = if args.output.plain {
        format!("count {count}")
    } else {
        json!({ "count": count }).to_string()
    };
    emit(out, &line)?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    let g = load_graph(&args.graph.graph)?;
    let x = node_set(&g, &args.graph.exposure)?;
    let y = node_set(&g, &args.graph.outcome)?;
    let z = node_set(&g, &args.set)?;
    if x.is_empty() || y.is_empty() {
        return Err(Failure::Input("exposure and outcome must be non-empty".into()));
    }
    let valid = frontdoor_core::verify_fd(&g, &x, &y, &z).map_err(|e| Failure::Input(describe_query_error(&g, &e)))?;
    if args.oracle {
        let expected = fd_criterion_bruteforce(&g, &x, &y, &z).map_err(input)?;
        if expected != valid {
            return Err(Failure::Mismatch(format!(
                "brute force says {expected}, result is {valid}"
            )));
        }
    }
    let line = if args.output.plain {
        valid.to_string()
    } else {
        json!({ "valid": valid }).to_string()
    };
    emit(out, &line)?;
    Ok(0)
}

fn assignment(g: &Dag, list: &str) -> Result<Vec<(usize, usize)>, Failure> {
    names(list)
        .map(|item| {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Failure::Input(format!("expected NAME=VALUE, got `{item}`")))?;
            let v = g
                .index_of(name.trim())
                .ok_or_else(|| Failure::Input(format!("unknown node `{}`", name.trim())))?;
            let val = value
                .trim()
                .parse::<usize>()
                .map_err(|_| Failure::Input(format!("invalid value in `{item}`")))?;
            Ok((v, val))
        })
        .collect()
}

/// `p` rounded to twelve significant digits.
pub fn format_probability(p: f64) -> String {
    if p == 0.0 || !p.is_finite() {
        return format!("{p}");
    }
    let decimals = (11 - p.abs().log10().floor() as i32).max(0) as usize;
    format!("{p:.decimals$}")
}

fn cmd_estimate(args: &EstimateArgs, out: &mut dyn Write) -> Outcome {
    let model =
        parse_model(&read(&args.model)?).map_err(|e| Failure::Input(format!("{}: {e}", args.model.display())))?;
    let g = model.dag();
    let x = assignment(g, &args.intervention)?;
    let y = assignment(g, &args.outcome)?;
    if x.is_empty() || y.is_empty() {
        return Err(Failure::Input("--do and --of need at least one assignment".into()));
    }
    let z = node_set(g, &args.via)?;
    let p = fd_estimate(&model, &x, &y, &z).map_err(input)?;
    if args.oracle {
        let o = do_oracle(&model, &x, &y).map_err(input)?;
        if (p - o).abs() > ESTIMATE_TOLERANCE {
            return Err(Failure::Mismatch(format!(
                "front-door estimate {p} but truncated factorization gives {o}"
            )));
        }
    }
    let text = format_probability(p);
    let line = if args.json {
        format!("{{\"probability\":{text}}}")
    } else {
        text
    };
    emit(out, &line)?;
    Ok(0)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ConfigFile {
    One(ExperimentConfig),
    Many(Vec<ExperimentConfig>),
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Outcome {
    let text = read(&args.config)?;
    let configs = match serde_json::from_str::<ConfigFile>(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.config.display())))?
    {
        ConfigFile::One(c) => vec![c],
        ConfigFile::Many(v) => v,
    };
    let mut records = Vec::new();
    for c in &configs {
        records.extend(run_benchmark(c).map_err(input)?);
    }
    match &args.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            write_csv(&records, std::io::BufWriter::new(file)).map_err(input)?;
        }
        None => write_csv(&records, out).map_err(input)?,
    }
    Ok(0)
}
