mod config;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{ConfigError, Loaded, Task};
use run::{run_task, Check, RunError};

#[derive(Parser)]
#[command(name = "sgcalc", version, about = "Sweeps, curves and certificates for the semigroup functional calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// `|F(-uA)|` against `max |F|` on the positive axis over a u-grid
    Sweep(Common),
    /// The same sweep for `F F~`, with both evaluation paths compared
    SymmetrizedSweep(Common),
    /// Jordan curve through the ray maximum, exported as vertices
    Curve(Common),
    /// Resolvent bound for the functional calculus on a lambda-grid
    Lemma24(Common),
    /// Resolvent bound for distributions of positive order
    Lemma27(Common),
    /// Resolvent identities on pairs of points
    ResolventCheck(Common),
    /// Idempotent chain, bounded generators and separation certificate
    Idempotents(Common),
    /// Norm against `max |F|` on `C_0[0, 1]`
    Sharpness(Common),
    /// Every shipped check, with one summary
    VerifyAll(Common),
}

#[derive(Args)]
struct Common {
    /// JSON config or the name of a shipped config; defaults to the shipped config for the command
    #[arg(long)]
    config: Option<String>,
    /// Output directory
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed for randomized inputs; overrides the config
    #[arg(long)]
    seed: Option<u64>,
}

impl Command {
    fn split(&self) -> (&'static str, &Common) {
        match self {
            Command::Sweep(c) => ("sweep", c),
            Command::SymmetrizedSweep(c) => ("symmetrized-sweep", c),
            Command::Curve(c) => ("curve", c),
            Command::Lemma24(c) => ("lemma24", c),
            Command::Lemma27(c) => ("lemma27", c),
            Command::ResolventCheck(c) => ("resolvent-check", c),
            Command::Idempotents(c) => ("idempotents", c),
            Command::Sharpness(c) => ("sharpness", c),
            Command::VerifyAll(c) => ("verify-all", c),
        }
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    command: &'a str,
    config: &'a str,
    seed: u64,
    passed: bool,
    checks: &'a [Check],
}

#[derive(Serialize)]
struct VerifySummary<'a> {
    command: &'a str,
    seed: u64,
    passed: bool,
    runs: Vec<Summary<'a>>,
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), RunError> {
    let path = dir.join(name);
    std::fs::write(&path, contents)
        .map_err(|e| RunError::Config(ConfigError::Invalid(format!("cannot write {}: {e}", path.display()))))
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("summaries serialize");
    s.push('\n');
    s
}

fn create_dir(dir: &Path) -> Result<(), RunError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| RunError::Config(ConfigError::Invalid(format!("cannot create {}: {e}", dir.display()))))
}

fn report(checks: &[Check], prefix: &str) {
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        eprintln!("{status} {prefix}{}: {}", c.name, c.detail);
    }
}

/// Runs one config into `dir` and returns its checks.
fn execute(loaded: &Loaded, seed: u64, dir: &Path) -> Result<Vec<Check>, RunError> {
    let outcome = run_task(&loaded.config.task, &loaded.base, seed)?;
    create_dir(dir)?;
    for (name, contents) in &outcome.files {
        write_file(dir, name, contents)?;
    }
    let mut resolved = loaded.config.clone();
    resolved.seed = Some(seed);
    write_file(dir, "config.json", &to_json(&resolved))?;
    let summary = Summary {
        command: loaded.config.task.command(),
        config: &loaded.name,
        seed,
        passed: outcome.passed(),
        checks: &outcome.checks,
    };
    write_file(dir, "summary.json", &to_json(&summary))?;
    Ok(outcome.checks)
}

fn main_inner(cli: Cli) -> Result<bool, RunError> {
    let (command, common) = cli.command.split();
    let loaded = config::load(common.config.as_deref().unwrap_or(command))?;
    let found = loaded.config.task.command();
    if found != command {
        return Err(ConfigError::Invalid(format!("config {} is a {found} config, not {command}", loaded.name)).into());
    }
    let seed = common.seed.or(loaded.config.seed).unwrap_or(0);
    let out = common.output.clone().unwrap_or_else(|| PathBuf::from("sgcalc-out").join(command));

    let Task::VerifyAll(v) = &loaded.config.task else {
        let checks = execute(&loaded, seed, &out)?;
        report(&checks, "");
        return Ok(checks.iter().all(|c| c.passed));
    };

    let names: Vec<String> = if v.configs.is_empty() {
        config::SHIPPED.iter().map(|(n, _)| n.to_string()).filter(|n| n != "verify-all").collect()
    } else {
        v.configs.clone()
    };
    let runs: Vec<Loaded> = names.iter().map(|n| config::load(&resolve(n, &loaded.base))).collect::<Result<_, _>>()?;
    let mut results = Vec::with_capacity(runs.len());
    for r in &runs {
        let run_seed = common.seed.or(r.config.seed).unwrap_or(seed);
        let checks = execute(r, run_seed, &out.join(&r.name))?;
        report(&checks, &format!("{}/", r.name));
        results.push((run_seed, checks));
    }
    let summaries: Vec<Summary> = runs
        .iter()
        .zip(&results)
        .map(|(r, (s, checks))| Summary {
            command: r.config.task.command(),
            config: &r.name,
            seed: *s,
            passed: checks.iter().all(|c| c.passed),
            checks,
        })
        .collect();
    let passed = summaries.iter().all(|s| s.passed);
    create_dir(&out)?;
    write_file(&out, "summary.json", &to_json(&VerifySummary { command, seed, passed, runs: summaries }))?;
    Ok(passed)
}

/// Shipped names stay as they are; other entries are paths relative to the config.
fn resolve(name: &str, base: &Path) -> String {
    if config::shipped(name).is_some() {
        name.to_owned()
    } else {
        base.join(name).to_string_lossy().into_owned()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
