//! `ifk`: command-line front end over an `ifk-core` bundle.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use ifk_core::bundle::{parse_bundle, self_check, Bundle};
use ifk_core::diagrams::sum_classification;
use ifk_core::integration::{integrate, system_closure, Caps};
use ifk_core::{fca, report, theories, Entailment, Error, Sequent};

/// Rounds of sampled sequents per theory for `--seed` self-checks.
const SELF_CHECK_ROUNDS: usize = 64;

#[derive(Parser)]
#[command(name = "ifk", version, about = "Information flow toolkit")]
struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized self-checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a bundle parses and validates.
    Validate { bundle: PathBuf },
    /// Materialize the closure of a theory.
    Close {
        #[arg(long)]
        theory: String,
        #[arg(long, default_value_t = ifk_core::DEFAULT_CLOSURE_CAP)]
        cap: usize,
        bundle: PathBuf,
    },
    /// Decide whether a theory entails a sequent such as `a, b |- c`.
    Entails {
        #[arg(long)]
        theory: String,
        #[arg(long, allow_hyphen_values = true)]
        sequent: String,
        bundle: PathBuf,
    },
    /// Concept lattice of a classification.
    Lattice {
        #[arg(long)]
        classification: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        bundle: PathBuf,
    },
    /// Sum channel of a populated system.
    Sum {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = ifk_core::DEFAULT_INSTANCE_CAP)]
        instance_cap: usize,
        bundle: PathBuf,
    },
    /// Integrate a system: sum, closure deltas and verdict.
    Integrate {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = ifk_core::DEFAULT_DELTA_BOUND)]
        delta_bound: usize,
        #[arg(long, default_value_t = ifk_core::DEFAULT_CLOSURE_CAP)]
        cap: usize,
        bundle: PathBuf,
    },
    /// Consistency verdict of a system.
    Consistency {
        #[arg(long)]
        system: String,
        bundle: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

/// Failures that map to exit status 2 rather than 1.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

impl Command {
    fn bundle_path(&self) -> &PathBuf {
        match self {
            Command::Validate { bundle }
            | Command::Close { bundle, .. }
            | Command::Entails { bundle, .. }
            | Command::Lattice { bundle, .. }
            | Command::Sum { bundle, .. }
            | Command::Integrate { bundle, .. }
            | Command::Consistency { bundle, .. } => bundle,
        }
    }
}

/// Report text and whether it describes a failure.
struct Outcome {
    text: String,
    failed: bool,
}

impl Outcome {
    fn ok(report: &Value) -> Self {
        Outcome {
            text: report::render(report),
            failed: false,
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let path = cli.command.bundle_path();
    let text = fs::read_to_string(path)
        .map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;

    if let Command::Validate { .. } = cli.command {
        return validate(&text, cli.seed);
    }
    let bundle = parse_bundle(&text).with_context(|| format!("loading {}", path.display()))?;
    let report = match &cli.command {
        Command::Validate { .. } => unreachable!(),
        Command::Close { theory, cap, .. } => {
            let t = bundle.theory(theory)?;
            report::close(theory, &theories::close(t, *cap)?)
        }
        Command::Entails {
            theory, sequent, ..
        } => {
            let t = bundle.theory(theory)?;
            let query = Sequent::parse(sequent).map_err(|e| Usage(e.to_string()))?;
            report::entails(theory, &query, t.entails(&query)?)
        }
        Command::Lattice {
            classification,
            format,
            ..
        } => {
            let c = bundle.classification(classification)?;
            let l = fca::lattice(c)?;
            return Ok(match format {
                Format::Dot => Outcome {
                    text: l.to_dot(),
                    failed: false,
                },
                Format::Json => Outcome::ok(&report::lattice(classification, &l)),
            });
        }
        Command::Sum {
            system,
            instance_cap,
            ..
        } => {
            let d = populated(&bundle, system)?;
            report::sum(system, &sum_classification(&d, *instance_cap)?)
        }
        Command::Integrate {
            system,
            delta_bound,
            cap,
            ..
        } => {
            let s = bundle.system(system)?;
            let caps = Caps {
                sequents: *cap,
                ..Caps::default()
            };
            report::integrate(system, &integrate(s, caps, *delta_bound)?)
        }
        Command::Consistency { system, .. } => {
            let closure = system_closure(bundle.system(system)?)?;
            report::consistency(
                closure.is_pointwise_consistent(),
                closure.is_monocosmic(),
                &closure.verdict().to_string(),
            )
        }
    };
    Ok(Outcome::ok(&report))
}

fn populated(bundle: &Bundle, system: &str) -> anyhow::Result<ifk_core::ClsDiagram> {
    bundle
        .system(system)?
        .classification_diagram()
        .ok_or_else(|| anyhow!("system `{system}` lacks a classification on some node or an instance map on some edge"))
}

fn validate(text: &str, seed: Option<u64>) -> anyhow::Result<Outcome> {
    let bundle = match parse_bundle(text) {
        Ok(bundle) => bundle,
        Err(e) => {
            let defects: Vec<String> = match e {
                Error::Invalid { defects, .. } => defects.iter().map(ToString::to_string).collect(),
                other => vec![other.to_string()],
            };
            return Ok(Outcome {
                text: report::render(&report::validate(&defects, None)),
                failed: true,
            });
        }
    };
    let checks = seed
        .map(|s| self_check(&bundle, s, SELF_CHECK_ROUNDS))
        .transpose()?;
    Ok(Outcome {
        text: report::render(&report::validate(&[], checks.as_ref())),
        failed: checks.is_some_and(|c| !c.failures.is_empty()),
    })
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Usage(format!("cannot write {}: {e}", path.display())).into()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| {
        emit(&cli, &outcome.text)?;
        Ok(outcome.failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
