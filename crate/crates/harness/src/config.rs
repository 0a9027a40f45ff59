//! The flat `key = value` run configuration.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("invalid value for `{key}`: {msg}")]
    Value { key: String, msg: String },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

/// Every suite the harness knows, in report order.
pub const SUITES: &[&str] = &[
    "coleman",
    "dertheta",
    "formal-groups",
    "gm-closed-forms",
    "iota-star",
    "isomorphism",
    "theta-congruence",
    "trace-stability",
    "weil",
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Config {
    /// Restricts prime-indexed grids to this prime.
    pub prime: Option<u64>,
    pub precision: Option<u32>,
    pub degree_cap: Option<usize>,
    pub seed: u64,
    pub suites: Vec<String>,
    pub trials: Option<usize>,
    pub levels: Option<usize>,
    pub weil_fixture_path: Option<PathBuf>,
    pub workers: Option<usize>,
}

fn value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e: T::Err| ConfigError::Value { key: key.into(), msg: e.to_string() })
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Config::default();
        let mut seen = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            let (k, v) = (k.trim(), v.trim());
            if !seen.insert(k.to_string()) {
                return Err(ConfigError::Syntax { line: i + 1, msg: format!("duplicate key `{k}`") });
            }
            match k {
                "prime" => cfg.prime = Some(value(k, v)?),
                "precision" => cfg.precision = Some(value(k, v)?),
                "degree_cap" => cfg.degree_cap = Some(value(k, v)?),
                "seed" => cfg.seed = value(k, v)?,
                "trials" => cfg.trials = Some(value(k, v)?),
                "levels" => cfg.levels = Some(value(k, v)?),
                "workers" => cfg.workers = Some(value(k, v)?),
                "weil_fixture_path" => cfg.weil_fixture_path = Some(PathBuf::from(v)),
                "suites" => {
                    cfg.suites = v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
                }
                _ => return Err(ConfigError::UnknownKey(k.to_string())),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        let mut cfg = Self::parse(&text)?;
        if let Some(p) = &cfg.weil_fixture_path {
            if p.is_relative() {
                cfg.weil_fixture_path = Some(path.parent().unwrap_or(Path::new(".")).join(p));
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for s in &self.suites {
            if !SUITES.contains(&s.as_str()) {
                return Err(ConfigError::UnknownSuite(s.clone()));
            }
        }
        if let Some(p) = self.prime {
            if p < 3 || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
                return Err(ConfigError::Value { key: "prime".into(), msg: format!("{p} is not an odd prime") });
            }
        }
        let positive = [
            ("precision", self.precision.map(|x| x as usize)),
            ("degree_cap", self.degree_cap),
            ("trials", self.trials),
            ("levels", self.levels),
            ("workers", self.workers),
        ];
        for (k, v) in positive {
            if v == Some(0) {
                return Err(ConfigError::Value { key: k.into(), msg: "must be positive".into() });
            }
        }
        Ok(())
    }

    /// Worker count: `VERIFY_WORKERS`, then the config, then the CPU count.
    pub fn worker_count(&self) -> Result<usize, ConfigError> {
        if let Ok(v) = std::env::var("VERIFY_WORKERS") {
            let n: usize = value("VERIFY_WORKERS", v.trim())?;
            if n == 0 {
                return Err(ConfigError::Value { key: "VERIFY_WORKERS".into(), msg: "must be positive".into() });
            }
            return Ok(n);
        }
        Ok(self.workers.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let cfg = Config::parse(
            "# run\nprime = 5\nprecision=20\n degree_cap = 16\nseed = 42\nsuites = dertheta, weil\ntrials = 200\n\
             levels = 3\nweil_fixture_path = fx.txt\nworkers = 2\n",
        )
        .unwrap();
        assert_eq!(cfg.prime, Some(5));
        assert_eq!(cfg.suites, vec!["dertheta", "weil"]);
        assert_eq!(cfg.weil_fixture_path, Some(PathBuf::from("fx.txt")));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Config::parse("prime 5"), Err(ConfigError::Syntax { .. })));
        assert!(matches!(Config::parse("colour = red"), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(Config::parse("prime = 9"), Err(ConfigError::Value { .. })));
        assert!(matches!(Config::parse("suites = nope"), Err(ConfigError::UnknownSuite(_))));
        assert!(matches!(Config::parse("seed = 1\nseed = 2"), Err(ConfigError::Syntax { .. })));
        assert!(matches!(Config::parse("trials = 0"), Err(ConfigError::Value { .. })));
        assert_eq!(Config::parse("").unwrap(), Config::default());
    }
}
