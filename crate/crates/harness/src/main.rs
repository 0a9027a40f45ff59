use clap::Parser;
use recip_harness::{run, Config, Status};
use std::path::PathBuf;
use std::process::ExitCode;

/// Runs verification suites and reports pass/fail per case.
#[derive(Parser)]
#[command(name = "verify", version)]
struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Suite to run; repeatable, replaces the `suites` key.
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Where to write the JSON report.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = match Config::load(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(2);
        }
    };
    if !cli.suites.is_empty() {
        config.suites = cli.suites;
    }
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(2);
        }
    };
    for suite in &report.suites {
        for case in &suite.cases {
            let tag = match case.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::PrecisionLimited => "WARN",
            };
            let digits = case.precision.map(|p| format!(" [{p} digits]")).unwrap_or_default();
            let detail = if case.detail.is_empty() { String::new() } else { format!(": {}", case.detail) };
            println!("{tag} {} / {}{digits}{detail}", suite.suite, case.name);
        }
        let t = report.timing.get(&suite.suite).copied().unwrap_or_default();
        println!(
            "{} {}: {} cases, {} failed, {t:.1}s",
            if suite.passed() { "ok" } else { "FAILED" },
            suite.suite,
            suite.cases.len(),
            suite.failures()
        );
    }
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
            eprintln!("verify: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
