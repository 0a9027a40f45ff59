//! Configuration, suites and deterministic reports behind the `verify` CLI.

pub mod config;
pub mod oracle;
pub mod report;
pub mod suites;

pub use config::{Config, ConfigError, SUITES};
pub use report::{CaseReport, Report, Status, SuiteReport};

use rayon::prelude::*;
use std::collections::BTreeMap;
use std::time::Instant;

/// Runs the configured suites on a pool of [`Config::worker_count`]
/// threads. Reports come back sorted by suite name, each suite seeded from
/// the run seed and its own name only.
pub fn run(config: &Config) -> Result<Report, ConfigError> {
    config.validate()?;
    let mut names: Vec<&str> = config.suites.iter().map(String::as_str).collect();
    names.sort_unstable();
    names.dedup();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.worker_count()?)
        .build()
        .map_err(|e| ConfigError::Value { key: "workers".into(), msg: e.to_string() })?;
    let results: Vec<(SuiteReport, f64)> = pool.install(|| {
        names
            .par_iter()
            .map(|&name| {
                let run = suites::lookup(name).expect("suite names are validated");
                let seed = suites::suite_seed(config.seed, name);
                let start = Instant::now();
                let (parameters, cases) = run(&suites::Context { config, seed });
                let report = SuiteReport { suite: name.to_string(), parameters, seed, cases };
                (report, start.elapsed().as_secs_f64())
            })
            .collect()
    });
    let mut timing = BTreeMap::new();
    let mut reports = Vec::with_capacity(results.len());
    for (r, t) in results {
        timing.insert(r.suite.clone(), t);
        reports.push(r);
    }
    Ok(Report { suites: reports, timing })
}
