use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, to_value, Value};
use sptorus::config::{Artifact, Config};
use sptorus::group::Window;
use sptorus::pipeline::{classify_artifact, parse_window, verify_artifact, Suite, Windows};
use sptorus::Error;

/// Build, verify and classify Lie tori graded by the root system C_r.
///
/// Exit codes: 0 every check passed, 1 a check failed (or was inconclusive
/// without --allow-inconclusive), 2 the input was unusable.
#[derive(Parser)]
#[command(name = "sptorus", version)]
struct Cli {
    /// Worker threads for the sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a coordinate algebra (and its sp2r) from a JSON config.
    Build {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Degree window `R`, `linf:R` or `l1:R`; needed for a free group part.
        #[arg(long, value_parser = window)]
        window: Option<Window>,
    },
    /// Run check suites on a built artifact.
    Verify {
        artifact: PathBuf,
        /// One of axioms, jacobi, identities, lemmas, all.
        #[arg(long, default_value = "all", value_parser = suite)]
        suite: Suite,
        /// Window for rebuilding sp2r over a free group part.
        #[arg(long, value_parser = window)]
        window: Option<Window>,
        /// Window of coordinate degrees to extract (defaults to --window).
        #[arg(long, value_parser = window)]
        extract_window: Option<Window>,
        /// Count inconclusive checks as passing.
        #[arg(long)]
        allow_inconclusive: bool,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify, extract coordinates and report the branch.
    Classify {
        artifact: PathBuf,
        #[arg(long, value_parser = window)]
        window: Option<Window>,
        #[arg(long, value_parser = window)]
        extract_window: Option<Window>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn window(s: &str) -> Result<Window, String> {
    parse_window(s).map_err(|e| e.to_string())
}

fn suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Check,
    Input(Error),
    Refused(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_)
            | Error::WindowRequired
            | Error::InvalidCocycle { .. }
            | Error::InvalidCocycleMatrix(_)
            | Error::SpecMismatch(_)
            | Error::KindMismatch(_)
            | Error::RankTooSmall(_)
            | Error::UnsupportedForInfiniteGroup(_)
            | Error::InvalidRoot(_)
            | Error::SizeMismatch(_) => Failure::Input(e),
            _ => Failure::Refused(e),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(Error::Config(format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write_json(path: &Path, value: Result<Value, serde_json::Error>) -> Result<(), Failure> {
    let bad = |e: serde_json::Error| Failure::Input(Error::Config(e.to_string()));
    let mut text = serde_json::to_string_pretty(&value.map_err(bad)?).map_err(bad)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Build { config, out, window } => {
            let cfg = Config::from_json(&read(&config)?)?;
            // Construction failures of a config are input errors.
            let art = Artifact::build(&cfg, window).map_err(Failure::Input)?;
            write_json(&out, to_value(&art))?;
            let lie = art.lie.as_ref().map(|l| l.basis().len());
            println!(
                "wrote {}: {} coordinate basis vectors{}",
                out.display(),
                art.algebra.basis.len(),
                lie.map(|n| format!(", {n} Lie basis vectors")).unwrap_or_default()
            );
            Ok(())
        }
        Cmd::Verify { artifact, suite, window, extract_window, allow_inconclusive, out } => {
            let art = Artifact::from_json(&read(&artifact)?)?;
            let rep = verify_artifact(&art, suite, Windows { lie: window, extract: extract_window })?;
            print!("{rep}");
            let passed = if allow_inconclusive { !rep.any_fail() } else { rep.all_pass() };
            println!("suite {suite}: {}", if passed { "pass" } else { "FAIL" });
            if let Some(out) = out {
                write_json(&out, Ok(json!({ "suite": suite.to_string(), "passed": passed, "report": rep })))?;
            }
            if passed {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Cmd::Classify { artifact, window, extract_window, out } => {
            let art = Artifact::from_json(&read(&artifact)?)?;
            let outcome = classify_artifact(&art, Windows { lie: window, extract: extract_window })?;
            print!("{outcome}");
            if let Some(out) = out {
                write_json(&out, to_value(&outcome))?;
            }
            if outcome.passed() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{}", json!({ "error": { "code": "invalid-config", "message": e.to_string() } }));
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("{}", json!({ "error": { "code": e.code(), "message": e.to_string() } }));
            ExitCode::from(2)
        }
        Err(Failure::Refused(e)) => {
            eprintln!("{}", json!({ "error": { "code": e.code(), "message": e.to_string() } }));
            ExitCode::from(1)
        }
    }
}
