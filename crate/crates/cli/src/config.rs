//! Run configuration: defaults, a flat `key = value` file form, and
//! command-line flags named after the same keys.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use lacent::graph::{ConditioningMode, DegreeConditioning, EdgeListOptions, NodeIds, Separator};
use lacent::eval::InfluenceFilter;
use lacent::push::PopOrder;
use lacent::{Measure, StartingVector};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "LACENT_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Compute,
    Sweep,
    Evaluate,
    Simulate,
}

impl Command {
    pub const ALL: [Command; 4] = [
        Command::Compute,
        Command::Sweep,
        Command::Evaluate,
        Command::Simulate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Compute => "compute",
            Command::Sweep => "sweep",
            Command::Evaluate => "evaluate",
            Command::Simulate => "simulate",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Fifo,
    Random,
}

/// Every setting of a run. Field names are the config keys.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub graph: Option<PathBuf>,
    pub separator: Separator,
    pub ids: NodeIds,
    pub undirected: bool,
    pub measures: Vec<Measure>,
    pub alphas: Vec<f64>,
    pub deltas: Vec<f64>,
    pub approx: bool,
    pub order: Order,
    pub check: bool,
    pub transpose: bool,
    pub transpose_walks: bool,
    pub epsilon_deg: f64,
    pub conditioning_mode: ConditioningMode,
    pub start: StartingVector,
    pub tol: f64,
    pub max_iter: usize,
    pub min_items: usize,
    pub min_rebroadcasts: usize,
    pub followers_only: bool,
    pub log: Option<PathBuf>,
    pub items_per_user: usize,
    pub seed: u64,
    pub rms: bool,
    pub output: PathBuf,
    pub format: Format,
    pub threads: usize,
    pub node_cap: usize,
    pub force: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let cp = lacent::CentralityParams::default();
        let filter = InfluenceFilter::default();
        let cond = DegreeConditioning::default();
        RunConfig {
            command: Command::Compute,
            graph: None,
            separator: Separator::Tab,
            ids: NodeIds::Labels,
            undirected: false,
            measures: vec![Measure::LaPr],
            alphas: vec![cp.alpha],
            deltas: vec![0.1],
            approx: false,
            order: Order::Fifo,
            check: false,
            transpose: false,
            transpose_walks: true,
            epsilon_deg: cond.epsilon,
            conditioning_mode: cond.mode,
            start: StartingVector::MeasureDefault,
            tol: cp.tol,
            max_iter: cp.max_iter,
            min_items: filter.min_items,
            min_rebroadcasts: filter.min_rebroadcasts,
            followers_only: filter.followers_only,
            log: None,
            items_per_user: 1,
            seed: 0,
            rms: true,
            output: PathBuf::from("lacent-out"),
            format: Format::Csv,
            threads: 1,
            node_cap: 100_000,
            force: false,
        }
    }
}

/// Whether a key is a switch (`--key` alone means true).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Value,
    Switch,
}

pub struct KeySpec {
    pub key: &'static str,
    pub kind: Kind,
    pub help: &'static str,
    /// Extra flag spellings.
    pub aliases: &'static [&'static str],
}

const fn spec(key: &'static str, kind: Kind, help: &'static str) -> KeySpec {
    KeySpec {
        key,
        kind,
        help,
        aliases: &[],
    }
}

/// All config keys, in file order. `command` is set by the subcommand on
/// the command line and has no flag.
pub const KEYS: &[KeySpec] = &[
    spec("command", Kind::Value, "compute | sweep | evaluate | simulate"),
    spec("graph", Kind::Value, "edge list path, one `src<sep>dst` per line"),
    spec("separator", Kind::Value, "edge list separator: tab | whitespace | comma | semicolon | space"),
    spec("ids", Kind::Value, "node fields: labels | zero-based | one-based"),
    spec("undirected", Kind::Switch, "read every edge in both directions"),
    KeySpec {
        key: "measures",
        kind: Kind::Value,
        help: "comma list of pr | lapr | ac | laac",
        aliases: &["measure"],
    },
    KeySpec {
        key: "alphas",
        kind: Kind::Value,
        help: "comma list of damping (pr, lapr) or attenuation (ac, laac) values",
        aliases: &["alpha"],
    },
    KeySpec {
        key: "deltas",
        kind: Kind::Value,
        help: "comma list of push error tolerances in (0, 1]",
        aliases: &["delta"],
    },
    spec("approx", Kind::Switch, "use the push approximation instead of the exact solver"),
    spec("order", Kind::Value, "push queue order: fifo | random (seeded by `seed`)"),
    spec("check", Kind::Switch, "verify residual decrease after every push"),
    spec("transpose", Kind::Switch, "compute/sweep on the reversed graph"),
    spec("transpose_walks", Kind::Switch, "evaluate: run pr/lapr on the reversed graph"),
    spec("epsilon_deg", Kind::Value, "degree conditioning constant"),
    spec("conditioning_mode", Kind::Value, "all-degrees | zero-degrees-only"),
    spec("start", Kind::Value, "starting vector: default | uniform | indegree-inverse | out-degree | la-out-degree"),
    spec("tol", Kind::Value, "exact solver stopping tolerance (max-norm change)"),
    spec("max_iter", Kind::Value, "exact solver iteration cap"),
    spec("min_items", Kind::Value, "influence: qualifying items a user needs"),
    spec("min_rebroadcasts", Kind::Value, "influence: rebroadcasters an item needs to qualify"),
    spec("followers_only", Kind::Switch, "influence: count only rebroadcasts by followers"),
    spec("log", Kind::Value, "broadcast log CSV (item_id,user_id,seq)"),
    spec("items_per_user", Kind::Value, "simulate: items submitted by every node"),
    spec("seed", Kind::Value, "random seed"),
    spec("rms", Kind::Switch, "sweep: compare against the exact solution"),
    spec("output", Kind::Value, "output directory"),
    spec("format", Kind::Value, "score file format: csv | json"),
    spec("threads", Kind::Value, "worker threads (default from LACENT_THREADS, else 1)"),
    spec("node_cap", Kind::Value, "largest graph accepted for exact solves without `force`"),
    spec("force", Kind::Switch, "run exact solves above `node_cap`"),
];

/// One problem with one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

/// All problems found in a configuration.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConfigErrors(pub Vec<FieldError>);

impl ConfigErrors {
    pub fn push(&mut self, field: &str, message: impl Into<String>) {
        self.0.push(FieldError {
            field: field.to_string(),
            message: message.into(),
        });
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn fields(&self) -> Vec<&str> {
        self.0.iter().map(|e| e.field.as_str()).collect()
    }

    fn into_result(self) -> Result<(), ConfigErrors> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(self)
        }
    }
}

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| format!("{}: {}", e.field, e.message)).collect();
        write!(f, "invalid configuration: {}", parts.join("; "))
    }
}

impl std::error::Error for ConfigErrors {}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("expected true or false, got {v:?}")),
    }
}

fn parse_num<T: FromStr>(v: &str) -> Result<T, String> {
    v.parse::<T>().map_err(|_| format!("not a valid number: {v:?}"))
}

fn parse_list<T>(v: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn opt_path(v: &str) -> Option<PathBuf> {
    (!v.is_empty()).then(|| PathBuf::from(v))
}

fn path_str(p: &Option<PathBuf>) -> String {
    p.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
}

impl RunConfig {
    /// Defaults, with `threads` taken from the environment when set.
    pub fn from_env() -> Self {
        let mut c = RunConfig::default();
        if let Some(t) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            c.threads = t;
        }
        c
    }

    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        let v = v.trim();
        match key {
            "command" => self.command = v.parse()?,
            "graph" => self.graph = opt_path(v),
            "separator" => {
                self.separator = match v {
                    "tab" => Separator::Tab,
                    "whitespace" => Separator::Whitespace,
                    "comma" => Separator::Char(','),
                    "semicolon" => Separator::Char(';'),
                    "space" => Separator::Char(' '),
                    _ => return Err(format!("unknown separator {v:?}")),
                }
            }
            "ids" => {
                self.ids = match v {
                    "labels" => NodeIds::Labels,
                    "zero-based" => NodeIds::ZeroBased,
                    "one-based" => NodeIds::OneBased,
                    _ => return Err(format!("unknown id scheme {v:?}")),
                }
            }
            "undirected" => self.undirected = parse_bool(v)?,
            "measures" => self.measures = parse_list(v, |s| s.parse::<Measure>().map_err(|e| e.to_string()))?,
            "alphas" => self.alphas = parse_list(v, parse_num)?,
            "deltas" => self.deltas = parse_list(v, parse_num)?,
            "approx" => self.approx = parse_bool(v)?,
            "order" => {
                self.order = match v {
                    "fifo" => Order::Fifo,
                    "random" => Order::Random,
                    _ => return Err(format!("unknown order {v:?}")),
                }
            }
            "check" => self.check = parse_bool(v)?,
            "transpose" => self.transpose = parse_bool(v)?,
            "transpose_walks" => self.transpose_walks = parse_bool(v)?,
            "epsilon_deg" => self.epsilon_deg = parse_num(v)?,
            "conditioning_mode" => {
                self.conditioning_mode = match v {
                    "all-degrees" => ConditioningMode::AllDegrees,
                    "zero-degrees-only" => ConditioningMode::ZeroDegreesOnly,
                    _ => return Err(format!("unknown conditioning mode {v:?}")),
                }
            }
            "start" => {
                self.start = match v {
                    "default" => StartingVector::MeasureDefault,
                    "uniform" => StartingVector::Uniform,
                    "indegree-inverse" => StartingVector::IndegreeInverse,
                    "out-degree" => StartingVector::OutDegree,
                    "la-out-degree" => StartingVector::LaOutDegree,
                    _ => return Err(format!("unknown starting vector {v:?}")),
                }
            }
            "tol" => self.tol = parse_num(v)?,
            "max_iter" => self.max_iter = parse_num(v)?,
            "min_items" => self.min_items = parse_num(v)?,
            "min_rebroadcasts" => self.min_rebroadcasts = parse_num(v)?,
            "followers_only" => self.followers_only = parse_bool(v)?,
            "log" => self.log = opt_path(v),
            "items_per_user" => self.items_per_user = parse_num(v)?,
            "seed" => self.seed = parse_num(v)?,
            "rms" => self.rms = parse_bool(v)?,
            "output" => self.output = PathBuf::from(v),
            "format" => {
                self.format = match v {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(format!("unknown format {v:?}")),
                }
            }
            "threads" => self.threads = parse_num(v)?,
            "node_cap" => self.node_cap = parse_num(v)?,
            "force" => self.force = parse_bool(v)?,
            _ => return Err("unknown key".to_string()),
        }
        Ok(())
    }

    /// Text form of one key, accepted back by [`RunConfig::set`].
    pub fn get(&self, key: &str) -> Option<String> {
        let s = match key {
            "command" => self.command.name().to_string(),
            "graph" => path_str(&self.graph),
            "separator" => match self.separator {
                Separator::Tab => "tab",
                Separator::Whitespace => "whitespace",
                Separator::Char(',') => "comma",
                Separator::Char(';') => "semicolon",
                Separator::Char(' ') => "space",
                Separator::Char(_) => "tab",
            }
            .to_string(),
            "ids" => match self.ids {
                NodeIds::Labels => "labels",
                NodeIds::ZeroBased => "zero-based",
                NodeIds::OneBased => "one-based",
            }
            .to_string(),
            "undirected" => self.undirected.to_string(),
            "measures" => join(&self.measures),
            "alphas" => join(&self.alphas),
            "deltas" => join(&self.deltas),
            "approx" => self.approx.to_string(),
            "order" => match self.order {
                Order::Fifo => "fifo",
                Order::Random => "random",
            }
            .to_string(),
            "check" => self.check.to_string(),
            "transpose" => self.transpose.to_string(),
            "transpose_walks" => self.transpose_walks.to_string(),
            "epsilon_deg" => self.epsilon_deg.to_string(),
            "conditioning_mode" => match self.conditioning_mode {
                ConditioningMode::AllDegrees => "all-degrees",
                ConditioningMode::ZeroDegreesOnly => "zero-degrees-only",
            }
            .to_string(),
            "start" => self.start.name().to_string(),
            "tol" => self.tol.to_string(),
            "max_iter" => self.max_iter.to_string(),
            "min_items" => self.min_items.to_string(),
            "min_rebroadcasts" => self.min_rebroadcasts.to_string(),
            "followers_only" => self.followers_only.to_string(),
            "log" => path_str(&self.log),
            "items_per_user" => self.items_per_user.to_string(),
            "seed" => self.seed.to_string(),
            "rms" => self.rms.to_string(),
            "output" => self.output.display().to_string(),
            "format" => match self.format {
                Format::Csv => "csv",
                Format::Json => "json",
            }
            .to_string(),
            "threads" => self.threads.to_string(),
            "node_cap" => self.node_cap.to_string(),
            "force" => self.force.to_string(),
            _ => return None,
        };
        Some(s)
    }

    /// `(key, value)` for every key, in file order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        KEYS.iter()
            .map(|k| (k.key, self.get(k.key).expect("every key has a value")))
            .collect()
    }

    /// The file form: one `key = value` line per key.
    pub fn to_file_string(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// Applies a config file on top of `self`. Blank lines and lines
    /// starting with `#` are ignored. Every bad line is reported.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigErrors> {
        let mut errors = ConfigErrors::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                errors.push(&format!("line {}", no + 1), "expected key = value");
                continue;
            };
            let k = k.trim().replace('-', "_");
            let k = k.as_str();
            if let Err(e) = self.set(k, v) {
                errors.push(k, format!("{e} (line {})", no + 1));
            }
        }
        errors.into_result()
    }

    pub fn parse_file(text: &str) -> Result<RunConfig, ConfigErrors> {
        let mut c = RunConfig::default();
        c.apply_file(text)?;
        Ok(c)
    }

    pub fn conditioning(&self) -> DegreeConditioning {
        DegreeConditioning {
            epsilon: self.epsilon_deg,
            mode: self.conditioning_mode,
        }
    }

    pub fn edge_list_options(&self) -> EdgeListOptions {
        EdgeListOptions::default()
            .separator(self.separator)
            .ids(self.ids)
            .undirected(self.undirected)
    }

    pub fn filter(&self) -> InfluenceFilter {
        InfluenceFilter {
            min_items: self.min_items,
            min_rebroadcasts: self.min_rebroadcasts,
            followers_only: self.followers_only,
        }
    }

    pub fn pop_order(&self) -> PopOrder {
        match self.order {
            Order::Fifo => PopOrder::Fifo,
            Order::Random => PopOrder::Random(self.seed),
        }
    }

    /// Checks every field against the ranges of the library types and the
    /// needs of the command, collecting all violations.
    pub fn validate(&self) -> Result<(), ConfigErrors> {
        let mut e = ConfigErrors::default();
        let cmd = self.command;
        if self.graph.is_none() {
            e.push("graph", "required");
        }
        if cmd == Command::Evaluate && self.log.is_none() {
            e.push("log", "required by evaluate");
        }
        if self.measures.is_empty() && cmd != Command::Simulate {
            e.push("measures", "at least one measure is required");
        }
        if self.alphas.is_empty() {
            e.push("alphas", "at least one alpha is required");
        }
        for &a in &self.alphas {
            if !(a.is_finite() && a >= 0.0) {
                e.push("alphas", format!("{a} is not a finite non-negative number"));
            } else if cmd == Command::Simulate {
                if !(a > 0.0 && a <= 1.0) {
                    e.push("alphas", format!("simulate needs alpha in (0, 1], got {a}"));
                }
            } else if a >= 1.0 && self.measures.iter().any(|m| m.is_walk()) {
                e.push("alphas", format!("pr and lapr need alpha < 1, got {a}"));
            }
        }
        if cmd == Command::Simulate && self.alphas.len() > 1 {
            e.push("alphas", "simulate takes a single alpha");
        }
        let needs_deltas = cmd == Command::Sweep || self.approx;
        if needs_deltas && self.deltas.is_empty() {
            e.push("deltas", "at least one delta is required");
        }
        for &d in &self.deltas {
            if !(d > 0.0 && d <= 1.0) {
                e.push("deltas", format!("{d} is outside (0, 1]"));
            }
        }
        if needs_deltas && self.measures.contains(&Measure::Pr) {
            e.push("measures", "pr has no push approximation");
        }
        if !(self.epsilon_deg.is_finite() && self.epsilon_deg >= 0.0) {
            e.push("epsilon_deg", format!("{} is not a finite non-negative number", self.epsilon_deg));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            e.push("tol", format!("{} is not a positive number", self.tol));
        }
        if self.max_iter == 0 {
            e.push("max_iter", "must be positive");
        }
        if self.items_per_user == 0 {
            e.push("items_per_user", "must be positive");
        }
        if self.threads == 0 {
            e.push("threads", "must be positive");
        }
        e.into_result()
    }
}
