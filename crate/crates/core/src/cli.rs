//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 some solve hit its
//! budget (partial results are still written), 3 an audit failed.

use std::collections::HashSet;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{self, BoundsReport};
use crate::c5_lab::{self, AuditResult};
use crate::config_space::{self, Configuration};
use crate::graph::{self, construct_named, Family, Graph};
use crate::mis_solver::{self, Budget, SolveReport};
use crate::quotient::{self, QuotientGraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_AUDIT: i32 = 3;

/// Largest k accepted by `verify-c5` (the midpoint audit is quadratic in
/// the number of configurations).
pub const VERIFY_C5_MAX_K: u32 = 8;

#[derive(Debug, Parser)]
#[command(
    name = "symcap",
    version,
    about = "Symmetric pebble powers G[k]: exact α, bounds and audits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build G[k] and compute its independence number exactly.
    Alpha(RunConfig),
    /// Tabulate the lower/upper bounds next to the exact α.
    Bounds(RunConfig),
    /// Run every 5-cycle counting audit.
    #[command(name = "verify-c5")]
    VerifyC5(RunConfig),
    /// Local search for large independent sets in G[k].
    Search(RunConfig),
    /// Compare G[k] against the strong-power orbit construction.
    #[command(name = "oracle-check")]
    OracleCheck(RunConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Named graph (c5, k3, p4, e2, petersen, cycle:7, ...) or a path to an
    /// edge-list / DIMACS file.
    #[arg(long)]
    pub graph: Option<String>,
    /// Weight `n` or inclusive range `a..b`.
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long, default_value_t = 100_000_000)]
    pub max_nodes: u64,
    #[arg(long, default_value_t = 600.0)]
    pub max_seconds: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub iterations: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Append JSON lines here; keys already present are skipped.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Flip one adjacency in the midpoint audit (detector self-test).
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

impl RunConfig {
    fn budget(&self) -> Result<Budget, String> {
        if self.max_nodes == 0 || self.max_seconds.is_nan() || self.max_seconds <= 0.0 {
            return Err("budget must be positive".into());
        }
        Ok(Budget {
            max_nodes: self.max_nodes,
            max_time: Duration::from_secs_f64(self.max_seconds),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KRange {
    pub start: u32,
    pub end: u32,
}

impl KRange {
    pub fn iter(self) -> impl Iterator<Item = u32> {
        self.start..=self.end
    }
}

pub fn parse_k_range(s: &str) -> Result<KRange, String> {
    let bad = || format!("invalid k range `{s}` (expected `n` or `a..b`)");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), s.trim()),
    };
    let start: u32 = a.parse().map_err(|_| bad())?;
    let end: u32 = b.parse().map_err(|_| bad())?;
    if start > end {
        return Err(format!("empty k range `{s}`"));
    }
    Ok(KRange { start, end })
}

/// Resolves `--graph`. Returns the graph and a stable name for result keys.
pub fn resolve_graph(name: &str) -> Result<(Graph, String), String> {
    let lower = name.to_ascii_lowercase();
    let named =
        |family: Family, size: usize| construct_named(family, size).map_err(|e| e.to_string());
    if lower == "petersen" {
        return Ok((named(Family::Petersen, 10)?, lower));
    }
    if let Some((fam, size)) = lower.split_once(':') {
        if let (Ok(family), Ok(size)) = (fam.parse::<Family>(), size.parse::<usize>()) {
            return Ok((named(family, size)?, lower));
        }
    }
    let short = [
        ('c', Family::Cycle),
        ('k', Family::Complete),
        ('p', Family::Path),
        ('e', Family::Empty),
    ];
    for (prefix, family) in short {
        if let Some(rest) = lower.strip_prefix(prefix) {
            if let Ok(size) = rest.parse::<usize>() {
                return Ok((named(family, size)?, lower));
            }
        }
    }
    let path = Path::new(name);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| format!("{name}: {e}"))?;
        let g = graph::parse_graph(&text).map_err(|e| format!("{name}: {e}"))?;
        return Ok((g, name.to_string()));
    }
    Err(format!("unknown graph `{name}`"))
}

struct Output<'a> {
    stdout: &'a mut (dyn Write + Send),
    file: Option<fs::File>,
    done: HashSet<(String, u32, String, u64)>,
}

impl<'a> Output<'a> {
    fn open(path: Option<&Path>, stdout: &'a mut (dyn Write + Send)) -> Result<Self, String> {
        let mut done = HashSet::new();
        let file = match path {
            Some(p) => {
                if p.exists() {
                    let f = fs::File::open(p).map_err(|e| format!("{}: {e}", p.display()))?;
                    for line in BufReader::new(f).lines() {
                        let line = line.map_err(|e| e.to_string())?;
                        if let Ok(v) = serde_json::from_str::<Value>(&line) {
                            if let Some(key) = record_key(&v) {
                                done.insert(key);
                            }
                        }
                    }
                }
                Some(
                    OpenOptions::new()
                        .create(true)
                        .append(true)
                        .open(p)
                        .map_err(|e| format!("{}: {e}", p.display()))?,
                )
            }
            None => None,
        };
        Ok(Output { stdout, file, done })
    }

    fn already_done(&self, command: &str, graph: &str, k: u32, seed: u64) -> bool {
        self.done
            .contains(&(graph.to_string(), k, command.to_string(), seed))
    }

    fn line(&mut self, s: &str) -> Result<(), String> {
        let w: &mut (dyn Write + Send) = match self.file.as_mut() {
            Some(f) => f,
            None => self.stdout,
        };
        writeln!(w, "{s}").map_err(|e| e.to_string())
    }

    fn record(&mut self, v: &Value) -> Result<(), String> {
        self.line(&serde_json::to_string(v).expect("json"))
    }
}

fn record_key(v: &Value) -> Option<(String, u32, String, u64)> {
    Some((
        v.get("graph")?.as_str()?.to_string(),
        v.get("k")?.as_u64()? as u32,
        v.get("command")?.as_str()?.to_string(),
        v.get("seed")?.as_u64()?,
    ))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let _ = if code == EXIT_OK {
                write!(stdout, "{}", e.render())
            } else {
                write!(stderr, "{}", e.render())
            };
            return code;
        }
    };
    let (name, cfg) = match &cli.command {
        Command::Alpha(c) => ("alpha", c),
        Command::Bounds(c) => ("bounds", c),
        Command::VerifyC5(c) => ("verify-c5", c),
        Command::Search(c) => ("search", c),
        Command::OracleCheck(c) => ("oracle-check", c),
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.max(1))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let result = pool.install(|| -> Result<i32, String> {
        let mut out = Output::open(cfg.out.as_deref(), stdout)?;
        match name {
            "alpha" => cmd_alpha(cfg, &mut out, stderr),
            "bounds" => cmd_bounds(cfg, &mut out),
            "verify-c5" => cmd_verify_c5(cfg, &mut out),
            "search" => cmd_search(cfg, &mut out, stderr),
            _ => cmd_oracle_check(cfg, &mut out),
        }
    });
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn graph_and_range(
    cfg: &RunConfig,
    default_graph: &str,
) -> Result<(Graph, String, KRange), String> {
    let (g, name) = resolve_graph(cfg.graph.as_deref().unwrap_or(default_graph))?;
    let k = parse_k_range(cfg.k.as_deref().ok_or("--k is required")?)?;
    Ok((g, name, k))
}

fn config_strings(q: &QuotientGraph, ranks: &[usize]) -> Vec<String> {
    ranks
        .iter()
        .map(|&r| q.configuration(r).to_string())
        .collect()
}

#[derive(Serialize)]
struct AlphaRecord<'a> {
    command: &'static str,
    graph: &'a str,
    k: u32,
    seed: u64,
    vertex_count: usize,
    #[serde(flatten)]
    report: &'a SolveReport,
    configurations: Vec<String>,
}

fn cmd_alpha(
    cfg: &RunConfig,
    out: &mut Output<'_>,
    stderr: &mut (dyn Write + Send),
) -> Result<i32, String> {
    let (g, name, range) = graph_and_range(cfg, "c5")?;
    let budget = cfg.budget()?;
    let mut code = EXIT_OK;
    for k in range.iter() {
        if out.already_done("alpha", &name, k, cfg.seed) {
            let _ = writeln!(stderr, "skipping k={k}: already recorded");
            continue;
        }
        let (q, report) = bounds::solve_power(&g, k, &budget).map_err(|e| e.to_string())?;
        if !report.optimal {
            code = EXIT_BUDGET;
        }
        let rec = AlphaRecord {
            command: "alpha",
            graph: &name,
            k,
            seed: cfg.seed,
            vertex_count: q.vertex_count(),
            report: &report,
            configurations: config_strings(&q, &report.certificate.members),
        };
        out.record(&serde_json::to_value(rec).expect("json"))?;
    }
    Ok(code)
}

fn cmd_bounds(cfg: &RunConfig, out: &mut Output<'_>) -> Result<i32, String> {
    let (g, name, range) = graph_and_range(cfg, "c5")?;
    let budget = cfg.budget()?;
    let base = bounds::base_parameters(&g).map_err(|e| e.to_string())?;
    let mut code = EXIT_OK;
    if cfg.format == Format::Csv {
        out.line(BoundsReport::CSV_HEADER)?;
    }
    for k in range.iter() {
        let fits = config_space::configuration_count(g.n(), k)
            .is_some_and(|c| c <= quotient::DEFAULT_VERTEX_CAP as u128);
        let report = bounds::bounds_report(&g, k, base, fits.then_some(&budget))
            .map_err(|e| e.to_string())?;
        if report.alpha_exact.is_some_and(|a| !a.optimal) {
            code = EXIT_BUDGET;
        }
        match cfg.format {
            Format::Csv => out.line(&report.to_csv_row())?,
            Format::Json => {
                let mut v = serde_json::to_value(&report).expect("json");
                v["command"] = json!("bounds");
                v["graph"] = json!(name);
                v["seed"] = json!(cfg.seed);
                v["ratio"] = json!(report.ratio());
                out.record(&v)?;
            }
        }
    }
    Ok(code)
}

fn audit_value(a: &AuditResult) -> Value {
    json!({"command": "verify-c5", "k": a.k, "check": a.check, "ok": a.ok, "counterexamples": a.counterexamples})
}

fn cmd_verify_c5(cfg: &RunConfig, out: &mut Output<'_>) -> Result<i32, String> {
    let range = parse_k_range(cfg.k.as_deref().ok_or("--k is required")?)?;
    if range.end > VERIFY_C5_MAX_K {
        return Err(format!("verify-c5 supports k <= {VERIFY_C5_MAX_K}"));
    }
    let budget = cfg.budget()?;
    let g = c5_lab::c5();
    let mut all_ok = true;
    let mut code = EXIT_OK;
    let err = |e: c5_lab::C5Error| e.to_string();
    for k in range.iter() {
        let mut audits = vec![
            c5_lab::counting_audit(k).map_err(err)?,
            c5_lab::cardinality_audit(k).map_err(err)?,
        ];
        let midpoint = if cfg.inject_fault {
            // flip the relation on the first and last configurations
            let configs =
                config_space::enumerate_configurations(5, k).map_err(|e| e.to_string())?;
            let (a, b) = (&configs[0], &configs[configs.len() - 1]);
            if a == b {
                return Err("--inject-fault needs k >= 1".into());
            }
            c5_lab::midpoint_audit_with(k, |f, t| {
                let flip = (f == a && t == b) || (f == b && t == a);
                config_space::adjacent(&g, f, t).expect("same shape") ^ flip
            })
            .map_err(err)?
        } else {
            c5_lab::midpoint_characterization_audit(k).map_err(err)?
        };
        audits.push(midpoint);

        let (q, report) = bounds::solve_power(&g, k, &budget).map_err(|e| e.to_string())?;
        if !report.optimal {
            code = EXIT_BUDGET;
        }
        let members: Vec<Configuration> = report
            .certificate
            .members
            .iter()
            .map(|&r| q.configuration(r).clone())
            .collect();
        audits.push(c5_lab::disjointness_audit(&members).map_err(err)?);
        let chunks = bounds::chunk_audit(&g, k, &members).map_err(|e| e.to_string())?;
        audits.push(AuditResult {
            k,
            check: "chunks".into(),
            ok: chunks.ok(),
            counterexamples: chunks
                .failing_chunks
                .iter()
                .map(|c| format!("{c:?}"))
                .collect(),
        });
        let prop1 = c5_lab::prop1_audit(k, report.optimal.then_some(report.alpha as u64));
        audits.push(AuditResult {
            k,
            check: "prop1".into(),
            ok: prop1.ok(),
            counterexamples: if prop1.ok() {
                vec![]
            } else {
                vec![format!("{prop1:?}")]
            },
        });
        for a in &audits {
            all_ok &= a.ok;
            let mut v = audit_value(a);
            v["graph"] = json!("c5");
            v["seed"] = json!(cfg.seed);
            if a.check == "prop1" {
                v["bound"] = json!(prop1.bound);
                v["recomputed"] = json!(prop1.recomputed);
                v["alpha_ok"] = json!(prop1.alpha_ok);
            }
            out.record(&v)?;
        }
    }
    Ok(if all_ok { code } else { EXIT_AUDIT })
}

fn cmd_search(
    cfg: &RunConfig,
    out: &mut Output<'_>,
    stderr: &mut (dyn Write + Send),
) -> Result<i32, String> {
    let (g, name, range) = graph_and_range(cfg, "c5")?;
    if cfg.iterations == 0 {
        return Err("--iterations must be at least 1".into());
    }
    let base = mis_solver::solve_exact(&g, &cfg.budget()?).map_err(|e| e.to_string())?;
    if !base.optimal {
        return Err("could not compute α of the base graph".into());
    }
    let support = &base.certificate.members;
    for k in range.iter() {
        if out.already_done("search", &name, k, cfg.seed) {
            let _ = writeln!(stderr, "skipping k={k}: already recorded");
            continue;
        }
        let q = quotient::build_quotient(&g, k).map_err(|e| e.to_string())?;
        // configurations supported on a maximum independent set of the base graph
        let seeded: Vec<usize> = q
            .configurations()
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                c.weights()
                    .iter()
                    .enumerate()
                    .all(|(v, &w)| w == 0 || support.contains(&v))
            })
            .map(|(r, _)| r)
            .collect();
        let cert = mis_solver::heuristic_search_from(q.graph(), cfg.seed, cfg.iterations, &seeded)
            .map_err(|e| e.to_string())?;
        let baseline =
            bounds::lower_bound(base.alpha as u64, k as u64).map_err(|e| e.to_string())?;
        let notable = cert.size() as u128 > baseline;
        if notable {
            let _ = writeln!(
                stderr,
                "NOTABLE: {name} k={k}: independent set of size {} exceeds {baseline}",
                cert.size()
            );
        }
        out.record(&json!({
            "command": "search",
            "graph": name,
            "k": k,
            "seed": cfg.seed,
            "iterations": cfg.iterations,
            "size": cert.size(),
            "baseline": baseline as u64,
            "notable": notable,
            "certificate": config_strings(&q, &cert.members),
        }))?;
    }
    Ok(EXIT_OK)
}

/// Every labeled graph on `n` vertices.
fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            Graph::from_edges(
                n,
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e),
            )
            .expect("valid edges")
        })
        .collect()
}

/// The default oracle suite: every labeled graph with `n <= 4` at
/// `k <= 3`, plus C5 at `k <= 3`.
pub fn oracle_suite() -> Vec<(Graph, u32)> {
    let mut suite = Vec::new();
    for n in 1..=4 {
        for g in all_graphs(n) {
            for k in 0..=3 {
                suite.push((g.clone(), k));
            }
        }
    }
    for k in 0..=3 {
        suite.push((c5_lab::c5(), k));
    }
    suite
}

pub fn oracle_agrees(g: &Graph, k: u32) -> Result<bool, String> {
    let a = quotient::build_quotient(g, k).map_err(|e| e.to_string())?;
    let b = quotient::strong_power_quotient_oracle(g, k).map_err(|e| e.to_string())?;
    Ok(a.adjacency() == b.adjacency())
}

fn cmd_oracle_check(cfg: &RunConfig, out: &mut Output<'_>) -> Result<i32, String> {
    let mut all_ok = true;
    if cfg.graph.is_none() && cfg.k.is_none() {
        let suite = oracle_suite();
        let mut mismatches = Vec::new();
        for (g, k) in &suite {
            if !oracle_agrees(g, *k)? {
                mismatches.push(json!({"edges": g.edges(), "n": g.n(), "k": k}));
            }
        }
        all_ok = mismatches.is_empty();
        out.record(&json!({
            "command": "oracle-check",
            "suite": "default",
            "instances": suite.len(),
            "ok": all_ok,
            "mismatches": mismatches,
        }))?;
    } else {
        let (g, name, range) = graph_and_range(cfg, "c5")?;
        for k in range.iter() {
            let ok = oracle_agrees(&g, k)?;
            all_ok &= ok;
            let count = config_space::configuration_count(g.n(), k).unwrap_or(0);
            out.record(&json!({
                "command": "oracle-check",
                "graph": name,
                "k": k,
                "seed": cfg.seed,
                "vertex_count": count as u64,
                "ok": ok,
            }))?;
        }
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_AUDIT })
}
