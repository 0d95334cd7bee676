//! `summoner validate|classify|bound|simulate|demo`.
//!
//! Each command returns a [`Report`]; `run` renders it as text or JSON and
//! maps failures to exit codes: 0 success, 1 malformed input, 2 domain error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use summoner::feasibility::{classify, compliance_bounds, ComplianceBounds, Verdict};
use summoner::scenario::{has_errors, make_demo, DemoName, Finding, Scenario};
use summoner::strategies::{builtin, simulate_with, SimOptions, SimReport};

pub const TOOL: &str = "summoner";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_TRIALS: usize = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "summoner",
    version,
    about = "Feasibility analysis and simulation of summoning tasks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a scenario file and list findings.
    Validate(FileArgs),
    /// Decide whether the scenario can be summoned perfectly.
    Classify(FileArgs),
    /// Compliance bounds for a Minkowski-quantum scenario.
    Bound(FileArgs),
    /// Monte Carlo run of one strategy.
    Simulate(SimulateArgs),
    /// Write a built-in demo scenario.
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
pub struct FileArgs {
    pub path: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub path: PathBuf,
    /// route_chain, clone_distribute, measure_broadcast, galilean_route,
    /// classical_broadcast or hold_at:k
    #[arg(long)]
    pub strategy: String,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    /// Master seed; defaults to the scenario's `seed` field (0 in every demo).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub json: bool,
    /// Score trials by sampling Alice's pass/fail test instead of exact fidelity.
    #[arg(long)]
    pub binary_verification: bool,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    pub name: String,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Malformed(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

/// Everything a command produced. Absent sections serialize as `null` so the
/// key set is the same for every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub scenario: Scenario,
    pub findings: Vec<Finding>,
    pub verdict: Option<Verdict>,
    pub bounds: Option<ComplianceBounds>,
    pub simulation: Option<SimReport>,
}

impl Report {
    fn new(scenario: Scenario, findings: Vec<Finding>) -> Self {
        Report {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            seed: scenario.seed,
            scenario,
            findings,
            verdict: None,
            bounds: None,
            simulation: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A command's result: the report (possibly partial) and an error if it failed.
pub struct Outcome {
    pub report: Option<Report>,
    pub error: Option<CliError>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome {
            report: Some(report),
            error: None,
        }
    }

    fn failed(report: Option<Report>, error: CliError) -> Self {
        Outcome {
            report,
            error: Some(error),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(0, CliError::exit_code)
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Malformed(format!("{}: malformed scenario: {e}", path.display())))
}

/// Loads and validates; a scenario with errors yields its findings and exit 2.
fn load_checked(path: &Path) -> Result<Report, Box<Outcome>> {
    let scenario = load_scenario(path).map_err(|e| Box::new(Outcome::failed(None, e)))?;
    let findings = scenario.validate();
    let report = Report::new(scenario, findings);
    if has_errors(&report.findings) {
        let msg = report
            .findings
            .iter()
            .filter(|f| f.severity == summoner::scenario::Severity::Error)
            .map(|f| f.message.clone())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Box::new(Outcome::failed(
            Some(report),
            CliError::Domain(format!("invalid scenario: {msg}")),
        )));
    }
    Ok(report)
}

pub fn cmd_validate(path: &Path) -> Outcome {
    match load_checked(path) {
        Ok(report) => Outcome::ok(report),
        Err(outcome) => *outcome,
    }
}

pub fn cmd_classify(path: &Path) -> Outcome {
    let mut report = match load_checked(path) {
        Ok(r) => r,
        Err(outcome) => return *outcome,
    };
    match classify(&report.scenario) {
        Ok(v) => {
            report.verdict = Some(v);
            Outcome::ok(report)
        }
        Err(e) => Outcome::failed(Some(report), CliError::Domain(e.to_string())),
    }
}

pub fn cmd_bound(path: &Path) -> Outcome {
    let mut report = match load_checked(path) {
        Ok(r) => r,
        Err(outcome) => return *outcome,
    };
    let result = classify(&report.scenario).and_then(|v| {
        report.verdict = Some(v);
        compliance_bounds(&report.scenario)
    });
    match result {
        Ok(b) => {
            report.bounds = Some(b);
            Outcome::ok(report)
        }
        Err(e) => Outcome::failed(Some(report), CliError::Domain(e.to_string())),
    }
}

pub fn cmd_simulate(
    path: &Path,
    strategy: &str,
    trials: usize,
    seed: Option<u64>,
    binary_verification: bool,
) -> Outcome {
    let mut report = match load_checked(path) {
        Ok(r) => r,
        Err(outcome) => return *outcome,
    };
    let strat = match builtin(strategy) {
        Ok(s) => s,
        Err(e) => return Outcome::failed(Some(report), CliError::Malformed(e.to_string())),
    };
    if trials == 0 {
        return Outcome::failed(
            Some(report),
            CliError::Malformed("--trials must be at least 1".into()),
        );
    }
    report.seed = seed.unwrap_or(report.scenario.seed);
    let opts = SimOptions {
        trials,
        seed: report.seed,
        binary_verification,
    };
    match simulate_with(&report.scenario, &strat, opts) {
        Ok(sim) => {
            report.simulation = Some(sim);
            Outcome::ok(report)
        }
        Err(e) => Outcome::failed(Some(report), CliError::Domain(e.to_string())),
    }
}

/// Canonical JSON for a demo.
pub fn cmd_demo(name: &str) -> Result<String, CliError> {
    let demo: DemoName = name
        .parse()
        .map_err(|e: summoner::scenario::ScenarioError| CliError::Malformed(e.to_string()))?;
    Ok(make_demo(demo).to_json_pretty())
}

fn render_findings(out: &mut String, findings: &[Finding]) {
    for f in findings {
        match f.candidate {
            Some(i) => writeln!(out, "{f} (candidate {i})").unwrap(),
            None => writeln!(out, "{f}").unwrap(),
        }
    }
}

/// Human-readable rendering of a report.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let s = &report.scenario;
    writeln!(
        out,
        "scenario: {} d={} n={} candidates={} variant={}",
        s.regime,
        s.d,
        s.n,
        s.candidates.len(),
        serde_json::to_value(s.variant)
            .unwrap()
            .as_str()
            .unwrap_or_default()
    )
    .unwrap();
    render_findings(&mut out, &report.findings);
    if let Some(v) = &report.verdict {
        writeln!(out, "{v}").unwrap();
    }
    if let Some(b) = &report.bounds {
        writeln!(out, "p_lower = {} ({})", b.p_lower, b.lower_bound_strategy).unwrap();
        writeln!(out, "p_upper = {}", b.p_upper).unwrap();
        let members: Vec<String> = b.clique.iter().map(|i| i.to_string()).collect();
        writeln!(
            out,
            "clique size m = {} [{}]",
            b.clique_size,
            members.join(",")
        )
        .unwrap();
    }
    if let Some(sim) = &report.simulation {
        writeln!(
            out,
            "strategy {} trials={} seed={}{}",
            sim.strategy,
            sim.trials,
            sim.seed,
            if sim.binary_verification {
                " (binary verification)"
            } else {
                ""
            }
        )
        .unwrap();
        for (i, (m, se)) in sim
            .per_candidate_mean_fidelity
            .iter()
            .zip(&sim.standard_errors)
            .enumerate()
        {
            match (m, se) {
                (Some(m), Some(se)) => writeln!(
                    out,
                    "  candidate {i}: mean {m} ± {se} over {} trials",
                    sim.per_candidate_trials[i]
                )
                .unwrap(),
                _ => writeln!(out, "  candidate {i}: never summoned").unwrap(),
            }
        }
        writeln!(
            out,
            "worst candidate {}: mean {} ± {}",
            sim.worst_candidate, sim.worst_candidate_mean, sim.worst_candidate_standard_error
        )
        .unwrap();
        writeln!(
            out,
            "overall mean {} ± {}",
            sim.overall_mean, sim.overall_standard_error
        )
        .unwrap();
    }
    out
}

/// Parses `args` (including the program name), runs the command and writes
/// output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };

    let (outcome, json) = match cli.command {
        Command::Demo(args) => {
            return match cmd_demo(&args.name) {
                Ok(text) => match &args.out {
                    Some(path) => match std::fs::write(path, text + "\n") {
                        Ok(()) => 0,
                        Err(e) => {
                            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                            1
                        }
                    },
                    None => {
                        let _ = writeln!(out, "{text}");
                        0
                    }
                },
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    e.exit_code()
                }
            };
        }
        Command::Validate(a) => (cmd_validate(&a.path), a.json),
        Command::Classify(a) => (cmd_classify(&a.path), a.json),
        Command::Bound(a) => (cmd_bound(&a.path), a.json),
        Command::Simulate(a) => (
            cmd_simulate(
                &a.path,
                &a.strategy,
                a.trials,
                a.seed,
                a.binary_verification,
            ),
            a.json,
        ),
    };

    if let Some(report) = &outcome.report {
        let text = if json {
            report.to_json() + "\n"
        } else {
            render_text(report)
        };
        let _ = write!(out, "{text}");
    }
    if let Some(e) = &outcome.error {
        let _ = writeln!(err, "error: {e}");
    }
    outcome.exit_code()
}

/// Sizes the global rayon pool from `SUMMONER_THREADS` (unset or 0 = automatic).
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SUMMONER_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Malformed(format!("SUMMONER_THREADS={raw:?} is not a count")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Malformed(e.to_string()))?;
    }
    Ok(())
}
