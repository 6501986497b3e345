//! Flat `key = value` run configurations.
//!
//! ```text
//! # comment
//! experiment = singular-limit
//! dims = 3
//! t_min = 0.01
//! t_max = 1000
//! t_count = 61
//! eps_min = 0.001
//! eps_max = 0.1
//! eps_count = 5
//! preset = gaussian
//! tol = 1e-6
//! output = out/sl.csv
//! ```
//!
//! Missing keys take experiment-dependent defaults; [`RunConfig::serialize`]
//! writes every key, so parse → serialize → parse is the identity.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thermoplate::Preset;

use crate::error::CliError;
use crate::format::g15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Rates,
    Table1,
    ProfileError,
    SingularLimit,
}

impl Experiment {
    pub const ALL: [Experiment; 4] =
        [Experiment::Rates, Experiment::Table1, Experiment::ProfileError, Experiment::SingularLimit];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Rates => "rates",
            Experiment::Table1 => "table1",
            Experiment::ProfileError => "profile-error",
            Experiment::SingularLimit => "singular-limit",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown experiment '{s}'")))
    }
}

/// `count` points log-spaced over `[min, max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        thermoplate::singular_limit::log_grid(self.min, self.max, self.count)
    }

    fn validate(&self, what: &str) -> Result<(), CliError> {
        if self.count == 0 {
            return Err(CliError::Usage(format!("{what} grid is empty")));
        }
        if !(self.min > 0.0 && self.max >= self.min && self.max.is_finite()) {
            return Err(CliError::Usage(format!(
                "{what} grid needs 0 < min ≤ max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.count == 1 && self.max != self.min {
            return Err(CliError::Usage(format!("{what} grid with one point needs min = max")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub dims: Vec<u32>,
    pub t_grid: GridSpec,
    pub eps_grid: GridSpec,
    pub preset: Preset,
    pub tol: f64,
    pub output: Option<PathBuf>,
}

const KEYS: [&str; 11] = [
    "experiment", "dims", "t_min", "t_max", "t_count", "eps_min", "eps_max", "eps_count", "preset", "tol", "output",
];

impl RunConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let (dims, t_grid, preset) = match experiment {
            Experiment::Rates | Experiment::Table1 => (
                (1..=6).collect(),
                GridSpec { min: 1024.0, max: 16_777_216.0, count: 15 },
                Preset::ConstantProfile,
            ),
            Experiment::ProfileError => (
                (1..=4).collect(),
                GridSpec { min: 1024.0, max: 16_777_216.0, count: 15 },
                Preset::Gaussian,
            ),
            Experiment::SingularLimit => (vec![3], GridSpec { min: 1e-2, max: 1e3, count: 61 }, Preset::Gaussian),
        };
        RunConfig {
            experiment,
            dims,
            t_grid,
            eps_grid: GridSpec { min: 1e-3, max: 1e-1, count: 5 },
            preset,
            tol: if experiment == Experiment::SingularLimit { 1e-6 } else { 1e-8 },
            output: None,
        }
    }

    /// Parses a configuration and applies `overrides` (`key=value`) on top.
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self, CliError> {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("line {}: expected key = value", lineno + 1)))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("override '{o}' is not key=value")))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        if let Some((k, _)) = pairs.iter().find(|(k, _)| !KEYS.contains(&k.as_str())) {
            return Err(CliError::Usage(format!("unknown key '{k}'")));
        }
        let experiment: Experiment = pairs
            .iter()
            .rev()
            .find(|(k, _)| k == "experiment")
            .ok_or_else(|| CliError::Usage("missing key 'experiment'".into()))?
            .1
            .parse()?;
        let mut cfg = RunConfig::defaults(experiment);
        for (k, v) in &pairs {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), CliError> {
        let num = |v: &str| v.parse::<f64>().map_err(|_| CliError::Usage(format!("{key}: '{v}' is not a number")));
        let count = |v: &str| v.parse::<usize>().map_err(|_| CliError::Usage(format!("{key}: '{v}' is not a count")));
        match key {
            "experiment" => self.experiment = v.parse()?,
            "dims" => self.dims = parse_list(v, key)?,
            "t_min" => self.t_grid.min = num(v)?,
            "t_max" => self.t_grid.max = num(v)?,
            "t_count" => self.t_grid.count = count(v)?,
            "eps_min" => self.eps_grid.min = num(v)?,
            "eps_max" => self.eps_grid.max = num(v)?,
            "eps_count" => self.eps_grid.count = count(v)?,
            "preset" => self.preset = v.parse().map_err(|e: thermoplate::Error| CliError::Usage(e.to_string()))?,
            "tol" => self.tol = num(v)?,
            "output" => self.output = (!v.is_empty()).then(|| PathBuf::from(v)),
            _ => return Err(CliError::Usage(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.dims.is_empty() {
            return Err(CliError::Usage("dimension list is empty".into()));
        }
        if self.dims.contains(&0) {
            return Err(CliError::Usage("dimensions must be ≥ 1".into()));
        }
        self.t_grid.validate("t")?;
        self.eps_grid.validate("ε")?;
        if self.eps_grid.max >= 1.0 {
            return Err(CliError::Usage("ε grid must lie in (0, 1)".into()));
        }
        if !(self.tol > 0.0) {
            return Err(CliError::Usage(format!("tol = {} must be > 0", self.tol)));
        }
        Ok(())
    }

    pub fn serialize(&self) -> String {
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        let out = self.output.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        [
            ("experiment", self.experiment.to_string()),
            ("dims", dims.join(",")),
            ("t_min", g17(self.t_grid.min)),
            ("t_max", g17(self.t_grid.max)),
            ("t_count", self.t_grid.count.to_string()),
            ("eps_min", g17(self.eps_grid.min)),
            ("eps_max", g17(self.eps_grid.max)),
            ("eps_count", self.eps_grid.count.to_string()),
            ("preset", self.preset.to_string()),
            ("tol", g17(self.tol)),
            ("output", out),
        ]
        .iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect()
    }
}

/// Shortest representation that parses back to the same value.
fn g17(x: f64) -> String {
    let short = g15(x);
    if short.parse::<f64>().ok() == Some(x) {
        short
    } else {
        format!("{x:e}")
    }
}

pub fn parse_list<T: FromStr>(v: &str, what: &str) -> Result<Vec<T>, CliError> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| CliError::Usage(format!("{what}: cannot parse '{s}'"))))
        .collect()
}
