//! `mdilate`: build and verify m-isometric dilations from operator spec files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::SystemTime;

use clap::{Parser, Subcommand};
use mdilate::report::{classify_spec, demo_spec, parse_spec, run_pipeline, ReportFile, DEMOS};
use mdilate::{Error, ErrorKind};

const EXIT_FAIL: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "mdilate", version, about = "m-isometric dilations of m-concave operators")]
struct Cli {
    /// List the built-in demos and exit.
    #[arg(long)]
    list_demos: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the dilation described by a spec file and verify it.
    Dilate {
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        /// Write the JSON report here instead of standard output.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Seed for the random test vectors (overrides the spec).
        #[arg(long)]
        seed: Option<u64>,
        /// Override a tolerance, e.g. `--tol isometry=1e-9`. Repeatable.
        #[arg(long = "tol", value_name = "NAME=VALUE", value_parser = parse_tol)]
        tol: Vec<(String, f64)>,
    },
    /// Classify the operator in a spec file without building anything.
    Verify {
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
    },
    /// Run one of the built-in demos.
    Demo {
        name: String,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let value: f64 = value.trim().parse().map_err(|e| format!("{value:?}: {e}"))?;
    Ok((name.trim().to_string(), value))
}

/// Writes to standard output, tolerating a closed pipe.
fn stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn exit_for(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Input => EXIT_INPUT,
        ErrorKind::Precondition => EXIT_PRECONDITION,
        ErrorKind::Numerical => EXIT_FAIL,
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_for(e))
}

fn write_output(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            stdout(text);
            Ok(())
        }
    }
}

fn emit_report(mut report: ReportFile, out: Option<&Path>) -> ExitCode {
    report.generator.timestamp = Some(humantime::format_rfc3339_seconds(SystemTime::now()).to_string());
    for c in &report.checks {
        eprintln!(
            "{} {:<36} residual {:.3e}  tolerance {:.1e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.residual,
            c.tolerance
        );
    }
    if let Some(cert) = &report.certificate {
        eprintln!(
            "certificate: gap(e_0) = {:.6e}, max gap = {:.6e}, {}",
            cert.gap_e0,
            cert.gap_max,
            if cert.found { "found" } else { "not found" }
        );
    }
    eprintln!("overall: {}", if report.overall { "PASS" } else { "FAIL" });
    if let Err(msg) = write_output(&report.to_json(), out) {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_FAIL);
    }
    if report.overall {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn read_spec(path: &Path) -> Result<mdilate::report::OperatorSpecFile, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_demos {
        let listing: String = DEMOS.iter().map(|d| format!("{:<20} {}\n", d.name, d.summary)).collect();
        stdout(&listing);
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: no command given; see `mdilate --help`");
        return ExitCode::from(EXIT_INPUT);
    };
    match command {
        Command::Dilate { spec, out, seed, tol } => {
            let mut spec = match read_spec(&spec) {
                Ok(s) => s,
                Err(e) => return fail(&e),
            };
            if seed.is_some() {
                spec.seed = seed;
            }
            for (name, value) in tol {
                spec.tolerances.insert(name, value);
            }
            if let Err(e) = spec.validate() {
                return fail(&e);
            }
            match run_pipeline(&spec) {
                Ok(r) => emit_report(r, out.as_deref()),
                Err(e) => fail(&e),
            }
        }
        Command::Verify { spec } => {
            let spec = match read_spec(&spec) {
                Ok(s) => s,
                Err(e) => return fail(&e),
            };
            match classify_spec(&spec) {
                Ok(c) => {
                    let text = serde_json::to_string_pretty(&c).expect("classification serializes");
                    stdout(&format!("{text}\n"));
                    match (&c.admissible_path, &c.reason) {
                        (Some(p), _) => {
                            eprintln!("admissible path: {}", p.name());
                            ExitCode::SUCCESS
                        }
                        (None, reason) => {
                            eprintln!("error: {}", reason.as_deref().unwrap_or("no construction path applies"));
                            ExitCode::from(EXIT_PRECONDITION)
                        }
                    }
                }
                Err(e) => fail(&e),
            }
        }
        Command::Demo { name, out } => {
            let spec = match demo_spec(&name) {
                Ok(s) => s,
                Err(e) => {
                    let names: Vec<&str> = DEMOS.iter().map(|d| d.name).collect();
                    eprintln!("error: {e}; available: {}", names.join(", "));
                    return ExitCode::from(exit_for(&e));
                }
            };
            match run_pipeline(&spec) {
                Ok(r) => emit_report(r, out.as_deref()),
                Err(e) => fail(&e),
            }
        }
    }
}
