//! Driver behind the `lacent` binary: argument handling and the four
//! workflows (compute, sweep, evaluate, simulate).

pub mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Arg, ArgAction, ArgMatches};
use lacent::centrality::{exact_scores, write_scores_csv, write_scores_json};
use lacent::eval::{
    correlation_report, delta_sweep, parse_broadcast_log, simulate_la_cascades, write_broadcast_log,
    write_influence_csv, write_report_csv, write_sweep_csv, ReportConfig, SweepConfig,
};
use lacent::graph::parse_edge_list;
use lacent::push::{approximate, PushParams};
use lacent::{CentralityParams, DirectedGraph, Measure, ScoreVector};
use serde_json::{json, Value};

pub use config::{Command, ConfigErrors, RunConfig, KEYS};
use config::{Format, Kind};

fn flag_name(key: &str) -> String {
    key.replace('_', "-")
}

/// The clap definition. Every config key except `command` is a flag of
/// the same name, with `-` for `_`.
pub fn cli() -> clap::Command {
    let mut args = vec![Arg::new("config")
        .long("config")
        .value_name("FILE")
        .global(true)
        .help("key = value config file; flags override it")];
    for k in KEYS.iter().filter(|k| k.key != "command") {
        let mut a = Arg::new(k.key)
            .long(flag_name(k.key))
            .global(true)
            .action(ArgAction::Set)
            .help(k.help);
        for alias in k.aliases {
            a = a.visible_alias(*alias);
        }
        a = match k.kind {
            Kind::Switch => a
                .num_args(0..=1)
                .require_equals(true)
                .default_missing_value("true")
                .value_name("BOOL"),
            Kind::Value => a.value_name("VALUE").allow_negative_numbers(true),
        };
        args.push(a);
    }
    let sub = |name: &'static str, about: &'static str| clap::Command::new(name).about(about);
    clap::Command::new("lacent")
        .about("Limited-attention PageRank and Alpha-Centrality: exact solvers, push approximations, evaluation")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .args(args)
        .subcommands([
            sub("compute", "score every node for each measure and alpha (and delta with --approx)"),
            sub("sweep", "push counts and rms error over a list of deltas"),
            sub("evaluate", "rank correlation of each measure with influence from a broadcast log"),
            sub("simulate", "generate a broadcast log from a limited-attention epidemic"),
            sub("run", "run the command named in the config file"),
        ])
}

/// Error carrying the pieces of the single-line error report.
#[derive(Debug)]
pub struct Failure {
    pub kind: String,
    pub message: String,
    pub fields: Vec<String>,
    pub exit_code: i32,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            kind: "usage".into(),
            message: message.into(),
            fields: vec![],
            exit_code: 2,
        }
    }

    fn from_config(e: &ConfigErrors) -> Self {
        Failure {
            kind: "config".into(),
            message: e.to_string(),
            fields: e.fields().into_iter().map(String::from).collect(),
            exit_code: 2,
        }
    }

    pub fn from_anyhow(e: &anyhow::Error) -> Self {
        let kind = if let Some(le) = e.downcast_ref::<lacent::Error>() {
            le.kind()
        } else if e.downcast_ref::<std::io::Error>().is_some() {
            "io"
        } else {
            "error"
        };
        Failure {
            kind: kind.into(),
            message: format!("{e:#}"),
            fields: vec![],
            exit_code: 1,
        }
    }

    /// One JSON object on one line.
    pub fn line(&self) -> String {
        json!({"error": self.kind, "message": self.message, "fields": self.fields}).to_string()
    }
}

/// Either a ready config or text clap wants printed (help, version).
pub enum Parsed {
    Run(Box<RunConfig>),
    Print(String),
}

/// Builds the effective config: defaults (threads from the environment),
/// then the config file, then flags. All bad fields are reported together.
pub fn parse_args<I, T>(args: I) -> Result<Parsed, Failure>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = match cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(Parsed::Print(e.render().to_string())),
                _ => {
                    let text = e.render().to_string();
                    let first = text.lines().next().unwrap_or("invalid arguments");
                    Err(Failure::usage(first.trim_start_matches("error: ")))
                }
            };
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let mut cfg = RunConfig::from_env();
    let mut errors = ConfigErrors::default();

    match sub.get_one::<String>("config") {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read config {path}: {e}")))?;
            if let Err(e) = cfg.apply_file(&text) {
                errors.0.extend(e.0);
            }
        }
        None if name == "run" => return Err(Failure::usage("run needs --config")),
        None => {}
    }
    if name != "run" {
        cfg.command = name.parse().expect("subcommands match commands");
    }
    apply_flags(&mut cfg, sub, &mut errors);
    // Fields that failed to parse keep their previous value, so only add
    // range problems for the others.
    if let Err(e) = cfg.validate() {
        let bad: Vec<String> = errors.fields().into_iter().map(String::from).collect();
        errors.0.extend(e.0.into_iter().filter(|f| !bad.contains(&f.field)));
    }
    if !errors.is_empty() {
        return Err(Failure::from_config(&errors));
    }
    Ok(Parsed::Run(Box::new(cfg)))
}

fn apply_flags(cfg: &mut RunConfig, m: &ArgMatches, errors: &mut ConfigErrors) {
    for k in KEYS.iter().filter(|k| k.key != "command") {
        if let Some(v) = m.get_one::<String>(k.key) {
            if let Err(e) = cfg.set(k.key, v) {
                errors.push(k.key, e);
            }
        }
    }
}

/// Parses arguments, runs, prints produced paths to stdout and failures
/// as one JSON line to stderr. Returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match parse_args(args) {
        Ok(Parsed::Run(cfg)) => cfg,
        Ok(Parsed::Print(text)) => {
            print!("{text}");
            return 0;
        }
        Err(f) => {
            eprintln!("{}", f.line());
            return f.exit_code;
        }
    };
    match run(&cfg) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            let f = Failure::from_anyhow(&e);
            eprintln!("{}", f.line());
            f.exit_code
        }
    }
}

/// Runs a validated config on a pool of `cfg.threads` workers and returns
/// the files written.
pub fn run(cfg: &RunConfig) -> anyhow::Result<Vec<PathBuf>> {
    if let Err(e) = cfg.validate() {
        return Err(anyhow!(e));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .context("building worker pool")?;
    pool.install(|| {
        fs::create_dir_all(&cfg.output)
            .with_context(|| format!("creating output directory {}", cfg.output.display()))?;
        match cfg.command {
            Command::Compute => compute(cfg),
            Command::Sweep => sweep(cfg),
            Command::Evaluate => evaluate(cfg),
            Command::Simulate => simulate(cfg),
        }
    })
}

pub fn load_graph(cfg: &RunConfig) -> anyhow::Result<DirectedGraph> {
    let path = cfg.graph.as_ref().context("no graph given")?;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let g = parse_edge_list(&text, &cfg.edge_list_options())
        .with_context(|| format!("parsing {}", path.display()))?;
    log::info!("{}: {} nodes, {} edges", path.display(), g.node_count(), g.edge_count());
    Ok(g)
}

fn check_cap(cfg: &RunConfig, g: &DirectedGraph, what: &str) -> anyhow::Result<()> {
    if g.node_count() > cfg.node_cap && !cfg.force {
        return Err(anyhow!(lacent::Error::TooLarge {
            nodes: g.node_count(),
            limit: cfg.node_cap,
        }))
        .context(format!("{what} refused; raise node_cap or pass --force"));
    }
    Ok(())
}

/// `# key = value` lines put in front of every CSV output.
fn config_header(cfg: &RunConfig) -> String {
    cfg.to_file_string().lines().map(|l| format!("# {l}\n")).collect()
}

fn config_json(cfg: &RunConfig) -> Value {
    Value::Object(
        cfg.entries()
            .into_iter()
            .map(|(k, v)| (k.to_string(), Value::String(v)))
            .collect(),
    )
}

fn write_csv_with_config(
    cfg: &RunConfig,
    path: &Path,
    body: impl FnOnce(&mut Vec<u8>) -> lacent::Result<()>,
) -> anyhow::Result<()> {
    let mut buf = config_header(cfg).into_bytes();
    body(&mut buf)?;
    fs::write(path, buf).with_context(|| format!("writing {}", path.display()))
}

fn write_json(path: &Path, value: &Value) -> anyhow::Result<()> {
    let mut f = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    Ok(())
}

fn stem(measure: Measure, alpha: f64, delta: Option<f64>) -> String {
    match delta {
        Some(d) => format!("{measure}_alpha{alpha}_delta{d}"),
        None => format!("{measure}_alpha{alpha}"),
    }
}

fn write_scores(cfg: &RunConfig, g: &DirectedGraph, sv: &ScoreVector, stem: &str) -> anyhow::Result<PathBuf> {
    match cfg.format {
        Format::Csv => {
            let path = cfg.output.join(format!("{stem}.scores.csv"));
            write_csv_with_config(cfg, &path, |w| write_scores_csv(sv, g, w))?;
            Ok(path)
        }
        Format::Json => {
            let path = cfg.output.join(format!("{stem}.scores.json"));
            let mut buf = Vec::new();
            write_scores_json(sv, g, &mut buf)?;
            let mut v: Value = serde_json::from_slice(&buf)?;
            v["config"] = config_json(cfg);
            write_json(&path, &v)?;
            Ok(path)
        }
    }
}

fn compute(cfg: &RunConfig) -> anyhow::Result<Vec<PathBuf>> {
    let mut g = load_graph(cfg)?;
    if cfg.transpose {
        g = g.transpose();
    }
    if !cfg.approx {
        check_cap(cfg, &g, "exact solve")?;
    }
    let mut written = Vec::new();
    for &m in &cfg.measures {
        for &a in &cfg.alphas {
            if cfg.approx {
                for &d in &cfg.deltas {
                    let p = PushParams::new(a, d)
                        .starting(cfg.start.clone())
                        .conditioning(cfg.conditioning())
                        .order(cfg.pop_order())
                        .checked(cfg.check);
                    let (sv, stats) = approximate(&g, m, &p)
                        .with_context(|| format!("{m} alpha={a} delta={d}"))?;
                    let stem = stem(m, a, Some(d));
                    written.push(write_scores(cfg, &g, &sv, &stem)?);
                    let path = cfg.output.join(format!("{stem}.stats.json"));
                    let mut v = serde_json::to_value(&stats)?;
                    v["config"] = config_json(cfg);
                    write_json(&path, &v)?;
                    written.push(path);
                }
            } else {
                let p = CentralityParams::with_alpha(a)
                    .starting(cfg.start.clone())
                    .conditioning(cfg.conditioning())
                    .tol(cfg.tol)
                    .max_iter(cfg.max_iter);
                let sv = exact_scores(&g, m, &p).with_context(|| format!("{m} alpha={a}"))?;
                let stem = stem(m, a, None);
                written.push(write_scores(cfg, &g, &sv, &stem)?);
                let path = cfg.output.join(format!("{stem}.stats.json"));
                let v = json!({
                    "measure": m,
                    "alpha": a,
                    "iterations": sv.iterations,
                    "converged": sv.converged,
                    "config": config_json(cfg),
                });
                write_json(&path, &v)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

fn sweep(cfg: &RunConfig) -> anyhow::Result<Vec<PathBuf>> {
    let mut g = load_graph(cfg)?;
    if cfg.transpose {
        g = g.transpose();
    }
    if cfg.rms {
        check_cap(cfg, &g, "rms against the exact solution")?;
    }
    let mut written = Vec::new();
    for &m in &cfg.measures {
        for &a in &cfg.alphas {
            let sc = SweepConfig {
                alpha: a,
                starting: cfg.start.clone(),
                conditioning: cfg.conditioning(),
                order: cfg.pop_order(),
                with_rms: cfg.rms,
            };
            let rows = delta_sweep(&g, m, &cfg.deltas, &sc).with_context(|| format!("{m} alpha={a}"))?;
            for r in rows.iter().filter(|r| r.error.is_some()) {
                log::warn!("{m} alpha={a} delta={}: {}", r.delta, r.error.as_deref().unwrap_or(""));
            }
            let path = cfg.output.join(format!("sweep_{m}_alpha{a}.csv"));
            write_csv_with_config(cfg, &path, |w| write_sweep_csv(&rows, w))?;
            written.push(path);
        }
    }
    Ok(written)
}

fn evaluate(cfg: &RunConfig) -> anyhow::Result<Vec<PathBuf>> {
    let g = load_graph(cfg)?;
    if !cfg.approx {
        check_cap(cfg, &g, "exact solve")?;
    }
    let log_path = cfg.log.as_ref().context("no log given")?;
    let text = fs::read_to_string(log_path).with_context(|| format!("reading {}", log_path.display()))?;
    let log = parse_broadcast_log(&text).with_context(|| format!("parsing {}", log_path.display()))?;
    let rc = ReportConfig {
        measures: cfg.measures.clone(),
        alphas: cfg.alphas.clone(),
        deltas: if cfg.approx {
            cfg.deltas.iter().copied().map(Some).collect()
        } else {
            vec![None]
        },
        filter: cfg.filter(),
        conditioning: cfg.conditioning(),
        starting: cfg.start.clone(),
        transpose_walks: cfg.transpose_walks,
    };
    let (influence, rows) = correlation_report(&g, &log, &rc)?;
    let report = cfg.output.join("report.csv");
    write_csv_with_config(cfg, &report, |w| write_report_csv(&rows, w))?;
    let inf_path = cfg.output.join("influence.csv");
    write_csv_with_config(cfg, &inf_path, |w| write_influence_csv(&influence, w))?;
    Ok(vec![report, inf_path])
}

fn simulate(cfg: &RunConfig) -> anyhow::Result<Vec<PathBuf>> {
    let g = load_graph(cfg)?;
    let alpha = cfg.alphas[0];
    let log = simulate_la_cascades(&g, alpha, cfg.items_per_user, cfg.seed, &cfg.conditioning())?;
    let path = cfg.output.join("log.csv");
    write_csv_with_config(cfg, &path, |w| write_broadcast_log(&log, w))?;
    Ok(vec![path])
}
