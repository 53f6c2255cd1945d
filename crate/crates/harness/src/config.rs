//! Run configuration: presets, a flat `key = value` file format, and
//! validation.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    Run,
    EnergyAudit,
    ConvergeTime,
    ConvergeSpace,
    DivergenceAudit,
    Stability,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::Run,
        Experiment::EnergyAudit,
        Experiment::ConvergeTime,
        Experiment::ConvergeSpace,
        Experiment::DivergenceAudit,
        Experiment::Stability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Run => "run",
            Experiment::EnergyAudit => "energy-audit",
            Experiment::ConvergeTime => "converge-time",
            Experiment::ConvergeSpace => "converge-space",
            Experiment::DivergenceAudit => "divergence-audit",
            Experiment::Stability => "stability",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

/// How the fields are initialised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Init {
    Exact,
    Zero,
}

impl FromStr for Init {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Init::Exact),
            "zero" => Ok(Init::Zero),
            _ => Err(format!("unknown init `{s}` (exact|zero)")),
        }
    }
}

impl fmt::Display for Init {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Init::Exact => "exact",
            Init::Zero => "zero",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotFormat {
    Off,
    Csv,
    Binary,
}

impl FromStr for SnapshotFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "off" | "false" | "no" => Ok(SnapshotFormat::Off),
            "csv" | "true" | "yes" => Ok(SnapshotFormat::Csv),
            "binary" | "bin" => Ok(SnapshotFormat::Binary),
            _ => Err(format!("unknown snapshot format `{s}` (off|csv|binary)")),
        }
    }
}

impl fmt::Display for SnapshotFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SnapshotFormat::Off => "off",
            SnapshotFormat::Csv => "csv",
            SnapshotFormat::Binary => "binary",
        })
    }
}

/// Fully resolved run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub grid: [usize; 3],
    pub dt: f64,
    pub t_final: f64,
    pub eps: f64,
    pub mu: f64,
    /// Report every this many steps.
    pub cadence: usize,
    pub out: PathBuf,
    pub snapshots: SnapshotFormat,
    pub init: Init,
    /// Time steps compared by the temporal convergence study.
    pub dt_list: Vec<f64>,
    /// Cubic grid sizes compared by the spatial convergence study.
    pub grid_list: Vec<usize>,
    /// Explicit report levels; empty means every `cadence` steps.
    pub levels: Vec<usize>,
}

impl RunConfig {
    /// Small defaults that finish in seconds to minutes.
    pub fn desk(experiment: Experiment) -> Self {
        let mut c = Self {
            experiment,
            grid: [20, 20, 20],
            dt: 0.05,
            t_final: 5.0,
            eps: 1.0,
            mu: 1.0,
            cadence: 10,
            out: PathBuf::from("out").join(experiment.name()),
            snapshots: SnapshotFormat::Off,
            init: Init::Exact,
            dt_list: Vec::new(),
            grid_list: Vec::new(),
            levels: Vec::new(),
        };
        match experiment {
            Experiment::Run => {}
            Experiment::EnergyAudit => {
                c.grid = [16, 16, 16];
                c.levels = vec![20, 100];
            }
            Experiment::ConvergeTime => {
                c.grid = [32, 32, 32];
                c.t_final = 1.0;
                c.dt_list = vec![0.05, 0.04, 0.025];
            }
            Experiment::ConvergeSpace => {
                c.dt = 0.0025;
                c.t_final = 1.0;
                c.grid_list = vec![10, 20, 40];
            }
            Experiment::DivergenceAudit => {
                c.t_final = 4.0;
                c.levels = vec![20, 40, 80];
            }
            Experiment::Stability => {
                c.dt = 0.25;
                c.t_final = 100.0;
                c.cadence = 20;
            }
        }
        c
    }

    /// The full-size protocol behind the published tables.
    pub fn full_scale(experiment: Experiment) -> Self {
        let mut c = Self::desk(experiment);
        c.grid = [100, 100, 100];
        c.dt = 0.01;
        c.t_final = 20.0;
        c.cadence = 100;
        c.levels = vec![100, 400, 800, 1600, 2000];
        match experiment {
            Experiment::ConvergeTime => {
                c.t_final = 1.0;
                c.dt_list = vec![0.05, 0.04, 0.025, 0.02];
                c.levels.clear();
            }
            Experiment::ConvergeSpace => {
                c.t_final = 1.0;
                c.dt = 0.001;
                c.grid_list = vec![40, 50, 100];
                c.levels.clear();
            }
            Experiment::DivergenceAudit => {
                // T = 1, 4, 8, 16, 20
            }
            _ => {}
        }
        c
    }

    /// `round(T/dt)` once validated.
    pub fn steps(&self) -> usize {
        steps_for(self.t_final, self.dt)
    }

    /// Levels at which reports are emitted, always including 0 and the
    /// final level.
    pub fn report_levels(&self) -> Vec<usize> {
        let n = self.steps();
        let mut out: Vec<usize> = if self.levels.is_empty() {
            (0..=n).step_by(self.cadence.max(1)).collect()
        } else {
            self.levels.iter().copied().filter(|&l| l <= n).collect()
        };
        out.push(0);
        out.push(n);
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.validate_with(&HashMap::new())
    }

    fn validate_with(&self, lines: &HashMap<&'static str, usize>) -> Result<(), ConfigError> {
        let bad = |key: &'static str, reason: String| ConfigError::Invalid {
            key,
            line: lines.get(key).copied(),
            reason,
        };
        for (key, n) in ["I", "J", "K"].into_iter().zip(self.grid) {
            if n < 3 {
                return Err(bad(key, format!("cell count {n} is below the minimum of 3")));
            }
        }
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.dt) {
            return Err(bad("dt", format!("must be positive and finite, got {}", self.dt)));
        }
        if !positive(self.t_final) {
            return Err(bad("T", format!("must be positive and finite, got {}", self.t_final)));
        }
        if !positive(self.eps) {
            return Err(bad("eps", format!("must be positive, got {}", self.eps)));
        }
        if !positive(self.mu) {
            return Err(bad("mu", format!("must be positive, got {}", self.mu)));
        }
        if self.cadence == 0 {
            return Err(bad("cadence", "must be at least 1".into()));
        }
        let check_div = |key: &'static str, dt: f64| {
            if !positive(dt) {
                return Err(bad(key, format!("time step must be positive, got {dt}")));
            }
            if !divides(self.t_final, dt) {
                return Err(bad(key, format!("dt = {dt} does not divide T = {} within 1e-9", self.t_final)));
            }
            Ok(())
        };
        check_div("dt", self.dt)?;
        for &d in &self.dt_list {
            check_div("dt_list", d)?;
        }
        if let Some(&n) = self.grid_list.iter().find(|&&n| n < 3) {
            return Err(bad("grid_list", format!("cell count {n} is below the minimum of 3")));
        }
        match self.experiment {
            Experiment::ConvergeTime if self.dt_list.is_empty() => {
                return Err(bad("dt_list", "temporal convergence needs at least one time step".into()))
            }
            Experiment::ConvergeSpace if self.grid_list.is_empty() => {
                return Err(bad("grid_list", "spatial convergence needs at least one grid".into()))
            }
            _ => {}
        }
        Ok(())
    }
}

pub fn steps_for(t_final: f64, dt: f64) -> usize {
    (t_final / dt).round() as usize
}

fn divides(t_final: f64, dt: f64) -> bool {
    let n = steps_for(t_final, dt);
    n >= 1 && (n as f64 * dt - t_final).abs() <= 1e-9 * t_final
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },

    #[error("line {line}: key `{key}` given twice")]
    Duplicate { key: String, line: usize },

    #[error("line {line}: `{key}` expects {expected}, found `{value}`")]
    Type {
        key: &'static str,
        line: usize,
        expected: &'static str,
        value: String,
    },

    #[error("{}: {reason}", at(key, *line))]
    Invalid {
        key: &'static str,
        line: Option<usize>,
        reason: String,
    },
}

fn at(key: &str, line: Option<usize>) -> String {
    match line {
        Some(l) => format!("line {l}: `{key}`"),
        None => format!("`{key}`"),
    }
}

/// Values read from a config file, each with its line number.
#[derive(Debug, Clone, Default)]
pub struct PartialConfig {
    pub experiment: Option<Experiment>,
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub k: Option<usize>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub eps: Option<f64>,
    pub mu: Option<f64>,
    pub cadence: Option<usize>,
    pub out: Option<PathBuf>,
    pub snapshots: Option<SnapshotFormat>,
    pub init: Option<Init>,
    pub dt_list: Option<Vec<f64>>,
    pub grid_list: Option<Vec<usize>>,
    pub levels: Option<Vec<usize>>,
    lines: HashMap<&'static str, usize>,
}

const KEYS: [&str; 15] = [
    "experiment",
    "I",
    "J",
    "K",
    "dt",
    "T",
    "eps",
    "mu",
    "cadence",
    "out",
    "snapshots",
    "init",
    "dt_list",
    "grid_list",
    "levels",
];

fn parse_list<V: FromStr>(s: &str) -> Option<Vec<V>> {
    let s = s.trim();
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(|p| p.trim().parse().ok()).collect()
}

/// Parses a flat `key = value` file. `#` starts a comment.
pub fn parse_config(text: &str) -> Result<PartialConfig, ConfigError> {
    let mut p = PartialConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            text: raw.to_string(),
        })?;
        let (k, v) = (k.trim(), v.trim());
        let key = *KEYS.iter().find(|&&n| n == k).ok_or_else(|| ConfigError::UnknownKey {
            key: k.to_string(),
            line,
        })?;
        if p.lines.insert(key, line).is_some() {
            return Err(ConfigError::Duplicate { key: k.to_string(), line });
        }
        let ty = |expected: &'static str| ConfigError::Type {
            key,
            line,
            expected,
            value: v.to_string(),
        };
        let count = || v.parse::<usize>().map_err(|_| ty("a nonnegative integer"));
        let real = || v.parse::<f64>().map_err(|_| ty("a number"));
        match key {
            "experiment" => p.experiment = Some(v.parse().map_err(|_| ty("an experiment name"))?),
            "I" => p.i = Some(count()?),
            "J" => p.j = Some(count()?),
            "K" => p.k = Some(count()?),
            "dt" => p.dt = Some(real()?),
            "T" => p.t_final = Some(real()?),
            "eps" => p.eps = Some(real()?),
            "mu" => p.mu = Some(real()?),
            "cadence" => p.cadence = Some(count()?),
            "out" => p.out = Some(PathBuf::from(v)),
            "snapshots" => p.snapshots = Some(v.parse().map_err(|_| ty("off, csv or binary"))?),
            "init" => p.init = Some(v.parse().map_err(|_| ty("exact or zero"))?),
            "dt_list" => p.dt_list = Some(parse_list(v).ok_or_else(|| ty("a comma-separated list of numbers"))?),
            "grid_list" => p.grid_list = Some(parse_list(v).ok_or_else(|| ty("a comma-separated list of integers"))?),
            "levels" => p.levels = Some(parse_list(v).ok_or_else(|| ty("a comma-separated list of integers"))?),
            _ => unreachable!("key table and match disagree"),
        }
    }
    Ok(p)
}

impl PartialConfig {
    /// Overlays the file values on `base` and validates the result. Errors
    /// point at the offending line when the value came from the file.
    pub fn resolve(&self, base: RunConfig) -> Result<RunConfig, ConfigError> {
        let c = self.overlay(base);
        c.validate_with(&self.lines)?;
        Ok(c)
    }

    /// Overlays without validating, so later overrides can still fix values.
    pub fn overlay(&self, mut c: RunConfig) -> RunConfig {
        if let Some(v) = self.experiment {
            c.experiment = v;
        }
        if let Some(v) = self.i {
            c.grid[0] = v;
        }
        if let Some(v) = self.j {
            c.grid[1] = v;
        }
        if let Some(v) = self.k {
            c.grid[2] = v;
        }
        if let Some(v) = self.dt {
            c.dt = v;
        }
        if let Some(v) = self.t_final {
            c.t_final = v;
        }
        if let Some(v) = self.eps {
            c.eps = v;
        }
        if let Some(v) = self.mu {
            c.mu = v;
        }
        if let Some(v) = self.cadence {
            c.cadence = v;
        }
        if let Some(v) = &self.out {
            c.out = v.clone();
        }
        if let Some(v) = self.snapshots {
            c.snapshots = v;
        }
        if let Some(v) = self.init {
            c.init = v;
        }
        if let Some(v) = &self.dt_list {
            c.dt_list = v.clone();
        }
        if let Some(v) = &self.grid_list {
            c.grid_list = v.clone();
        }
        if let Some(v) = &self.levels {
            c.levels = v.clone();
        }
        c
    }

    pub fn line_of(&self, key: &str) -> Option<usize> {
        self.lines.get(key).copied()
    }

    /// Validates a config built from this file plus later overrides.
    pub fn validate(&self, c: &RunConfig) -> Result<(), ConfigError> {
        c.validate_with(&self.lines)
    }
}

fn join<V: fmt::Display>(v: &[V]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Writes every field, so that parsing the output reproduces `c` exactly.
/// Floats use Rust's shortest round-trip formatting.
pub fn emit(c: &RunConfig) -> String {
    let mut s = String::new();
    let mut put = |k: &str, v: String| {
        s.push_str(k);
        s.push_str(" = ");
        s.push_str(&v);
        s.push('\n');
    };
    put("experiment", c.experiment.to_string());
    put("I", c.grid[0].to_string());
    put("J", c.grid[1].to_string());
    put("K", c.grid[2].to_string());
    put("dt", format!("{:?}", c.dt));
    put("T", format!("{:?}", c.t_final));
    put("eps", format!("{:?}", c.eps));
    put("mu", format!("{:?}", c.mu));
    put("cadence", c.cadence.to_string());
    put("out", c.out.display().to_string());
    put("snapshots", c.snapshots.to_string());
    put("init", c.init.to_string());
    put("dt_list", join(&c.dt_list.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>()));
    put("grid_list", join(&c.grid_list));
    put("levels", join(&c.levels));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_fills_defaults() {
        let p = parse_config("I = 8\nJ = 9\nK = 10\ndt = 0.1\nT = 2\n").unwrap();
        let c = p.resolve(RunConfig::desk(Experiment::Run)).unwrap();
        assert_eq!(c.grid, [8, 9, 10]);
        assert_eq!(c.steps(), 20);
        assert_eq!(c.eps, 1.0);
        assert_eq!(c.init, Init::Exact);
    }

    #[test]
    fn zero_dt_names_key_and_line() {
        let p = parse_config("# comment\nI = 8\ndt = 0\n").unwrap();
        let e = p.resolve(RunConfig::desk(Experiment::Run)).unwrap_err();
        match &e {
            ConfigError::Invalid { key, line, .. } => {
                assert_eq!(*key, "dt");
                assert_eq!(*line, Some(3));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(e.to_string().contains("line 3"));
        assert!(e.to_string().contains("dt"));
    }

    #[test]
    fn unknown_and_malformed() {
        assert_eq!(
            parse_config("I = 4\nfoo = 1\n").unwrap_err(),
            ConfigError::UnknownKey { key: "foo".into(), line: 2 }
        );
        assert!(matches!(
            parse_config("cadence = fast").unwrap_err(),
            ConfigError::Type { key: "cadence", line: 1, .. }
        ));
        assert!(matches!(parse_config("just words").unwrap_err(), ConfigError::Syntax { line: 1, .. }));
        assert!(matches!(parse_config("I = 4\nI = 5").unwrap_err(), ConfigError::Duplicate { line: 2, .. }));
    }

    #[test]
    fn divisibility_enforced() {
        let mut c = RunConfig::desk(Experiment::Run);
        c.dt = 0.3;
        c.t_final = 1.0;
        assert!(c.validate().is_err());
        c.dt = 0.1;
        assert!(c.validate().is_ok());
        assert_eq!(c.steps(), 10);
    }

    #[test]
    fn presets_validate() {
        for e in Experiment::ALL {
            RunConfig::desk(e).validate().unwrap();
            RunConfig::full_scale(e).validate().unwrap();
        }
    }

    #[test]
    fn report_levels_include_ends() {
        let mut c = RunConfig::desk(Experiment::Run);
        c.t_final = 1.0;
        c.dt = 0.1;
        c.cadence = 4;
        assert_eq!(c.report_levels(), vec![0, 4, 8, 10]);
        c.levels = vec![3, 50];
        assert_eq!(c.report_levels(), vec![0, 3, 10]);
    }
}
