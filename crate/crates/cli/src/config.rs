//! Run configuration: defaults, then the key=value file, then flags.

use clap::Parser;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

pub const SUITES: [&str; 8] = [
    "characters",
    "stabilizers",
    "cosets",
    "d1-structure",
    "r-odd-lemma",
    "heisenberg-prop3",
    "lattice",
    "theta-match",
];

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Parser, Debug, Default)]
#[command(
    name = "verify",
    about = "Run exact verification suites and write a JSON report"
)]
pub struct Cli {
    /// Suites to run (empty: nothing).
    pub suites: Vec<String>,
    #[arg(long)]
    pub p: Option<u32>,
    /// Non-residue defining E = F(√z).
    #[arg(long)]
    pub z: Option<i64>,
    /// p-adic working precision.
    #[arg(long)]
    pub precision: Option<u32>,
    /// Comma-separated n values; each suite has its own default.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,
    /// Comma-separated lattice scales k.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<i32>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Maximum enumeration size per check.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Suites run concurrently.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RunConfig {
    pub p: u32,
    pub z: Option<i64>,
    pub precision: u32,
    pub suites: Vec<String>,
    pub n_values: Option<Vec<u32>>,
    pub k_values: Vec<i32>,
    pub trials: usize,
    pub seed: u64,
    pub budget: u64,
    pub jobs: usize,
    #[serde(skip)]
    pub report_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 3,
            z: None,
            precision: 16,
            suites: Vec::new(),
            n_values: None,
            k_values: vec![1, 2],
            trials: 500,
            seed: 0,
            budget: 10_000_000,
            jobs: 1,
            report_path: None,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.trim()
        .parse()
        .map_err(|_| ConfigError(format!("bad value for {key}: {v:?}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>, ConfigError> {
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse(key, s))
        .collect()
}

/// `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("line {}: expected key = value", i + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

impl RunConfig {
    fn apply_file(&mut self, kv: &BTreeMap<String, String>) -> Result<(), ConfigError> {
        for (k, v) in kv {
            match k.as_str() {
                "p" => self.p = parse(k, v)?,
                "z" => self.z = Some(parse(k, v)?),
                "precision" => self.precision = parse(k, v)?,
                "suites" => {
                    self.suites = v
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect()
                }
                "n" => self.n_values = Some(parse_list(k, v)?),
                "k" => self.k_values = parse_list(k, v)?,
                "trials" => self.trials = parse(k, v)?,
                "seed" => self.seed = parse(k, v)?,
                "budget" => self.budget = parse(k, v)?,
                "jobs" => self.jobs = parse(k, v)?,
                "report" => self.report_path = Some(PathBuf::from(v)),
                _ => return Err(ConfigError(format!("unknown key {k:?}"))),
            }
        }
        Ok(())
    }

    fn apply_cli(&mut self, cli: &Cli) {
        if !cli.suites.is_empty() {
            self.suites = cli.suites.clone();
        }
        macro_rules! take {
            ($($f:ident => $t:ident),*) => {$(if let Some(v) = &cli.$f { self.$t = v.clone(); })*};
        }
        take!(p => p, precision => precision, k => k_values, trials => trials, seed => seed, budget => budget, jobs => jobs);
        if cli.z.is_some() {
            self.z = cli.z;
        }
        if cli.n.is_some() {
            self.n_values = cli.n.clone();
        }
        if cli.report.is_some() {
            self.report_path = cli.report.clone();
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.p.is_multiple_of(2) || self.p < 3 {
            return Err(ConfigError(format!(
                "p must be an odd prime, got {}",
                self.p
            )));
        }
        if self.trials == 0 {
            return Err(ConfigError("trials must be at least 1".into()));
        }
        if self.jobs == 0 {
            return Err(ConfigError("jobs must be at least 1".into()));
        }
        if self.k_values.is_empty() || self.k_values.iter().any(|&k| k < 0) {
            return Err(ConfigError(
                "k values must be a nonempty list of nonnegative integers".into(),
            ));
        }
        if let Some(ns) = &self.n_values {
            if ns.is_empty() || ns.contains(&0) {
                return Err(ConfigError(
                    "n values must be a nonempty list of positive integers".into(),
                ));
            }
        }
        for s in &self.suites {
            if !SUITES.contains(&s.as_str()) {
                return Err(ConfigError(format!(
                    "unknown suite {s:?}; known: {}",
                    SUITES.join(", ")
                )));
            }
        }
        self.field().map(|_| ())
    }

    pub fn field(&self) -> Result<theta_core::FieldParams, ConfigError> {
        let r = match self.z {
            Some(z) => theta_core::FieldParams::with_z(self.p, z, self.precision),
            None => theta_core::FieldParams::new(self.p, self.precision),
        };
        r.map_err(|e| ConfigError(e.to_string()))
    }

    pub fn resolve(cli: &Cli) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &cli.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
            cfg.apply_file(&parse_config_text(&text)?)?;
        }
        cfg.apply_cli(cli);
        cfg.validate()?;
        Ok(cfg)
    }
}
