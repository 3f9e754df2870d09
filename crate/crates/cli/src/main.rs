//! Verification CLI for the truncated Swanson-oscillator algebra.
//!
//! Subcommands: `verify` runs the configured identity checks over the z
//! grid, `spectrum` tabulates the lowest levels against the predicted
//! ladder, `sweep` tabulates every derived scalar per grid point.  Exit
//! codes: 0 all pass, 1 any check failed, 2 config error, 3 numerical abort.

mod config;

use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::process::ExitCode;
use swanson_core::report::{self, CheckStatus};
use swanson_core::suites::{self, OutputFormat, RunConfig, SuiteError};

#[derive(Parser)]
#[command(
    name = "swanson",
    version,
    about = "Verification suites for a non-Hermitian oscillator algebra in truncated Fock space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the TOML run configuration
    config: String,
    /// Write the report here instead of the config's output_path (use "-"
    /// for stdout)
    #[arg(long)]
    output: Option<String>,
    /// Report format: json or csv
    #[arg(long)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured verification checks over the z grid
    Verify(CommonArgs),
    /// Tabulate the lowest eigenvalues of h and h_S against the predictions
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of levels per grid point
        #[arg(long)]
        levels: usize,
    },
    /// Tabulate every derived scalar quantity per grid point
    Sweep(CommonArgs),
}

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_CONFIG_ERROR: u8 = 2;
const EXIT_NUMERICAL_ABORT: u8 = 3;

fn load_config(common: &CommonArgs) -> Result<RunConfig, SuiteError> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| SuiteError::Config(format!("cannot read {}: {e}", common.config)))?;
    let mut config = config::parse_config(&text)?;
    if let Some(path) = &common.output {
        config.output_path = if path == "-" {
            None
        } else {
            Some(path.clone())
        };
    }
    if let Some(format) = &common.format {
        config.output_format = OutputFormat::parse(format)?;
    }
    Ok(config)
}

fn emit(config: &RunConfig, body: String) -> Result<(), SuiteError> {
    match &config.output_path {
        None => {
            std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| SuiteError::Config(format!("cannot write to stdout: {e}")))?;
        }
        Some(path) => {
            std::fs::write(path, body)
                .map_err(|e| SuiteError::Config(format!("cannot write {path}: {e}")))?;
        }
    }
    Ok(())
}

fn exit_for_error(e: &SuiteError) -> u8 {
    match e {
        SuiteError::Config(_) => EXIT_CONFIG_ERROR,
        SuiteError::Num(_) | SuiteError::Model(_) => EXIT_NUMERICAL_ABORT,
    }
}

fn run_verify(common: CommonArgs) -> u8 {
    let config = match load_config(&common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG_ERROR;
        }
    };
    let started = std::time::Instant::now();
    let verification = match suites::run_verify(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for_error(&e);
        }
    };
    // per-check console summary; timings stay out of the report body
    for entry in &verification.entries {
        let status = match entry.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::MetricUndefined => "undefined",
        };
        let z = entry
            .z
            .map(|z| format!("z={z:+.3}"))
            .unwrap_or_else(|| "z=  -  ".into());
        let residual = entry
            .residual
            .map(|r| format!("{r:9.3e}"))
            .unwrap_or_else(|| "    -    ".into());
        eprintln!(
            "{status:9} {:<18} {z}  residual {residual}  tol {:7.1e}  [{:.1} ms]",
            entry.check,
            entry.tolerance,
            entry.wall_seconds * 1e3,
        );
    }
    eprintln!(
        "summary: {} passed, {} failed, {} undefined in {:.2} s",
        verification.summary.passed,
        verification.summary.failed,
        verification.summary.metric_undefined,
        started.elapsed().as_secs_f64(),
    );

    let body = match config.output_format {
        OutputFormat::Json => report::to_json(&verification),
        OutputFormat::Csv => report::verify_to_csv(&verification),
    };
    if let Err(e) = emit(&config, body) {
        eprintln!("error: {e}");
        return EXIT_CONFIG_ERROR;
    }
    if verification.summary.incomplete {
        eprintln!(
            "error: run aborted: {}",
            verification
                .summary
                .abort_reason
                .as_deref()
                .unwrap_or("unknown")
        );
        EXIT_NUMERICAL_ABORT
    } else if verification.summary.failed > 0 {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}

fn run_spectrum(common: CommonArgs, levels: usize) -> u8 {
    let config = match load_config(&common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG_ERROR;
        }
    };
    match suites::run_spectrum(&config, levels) {
        Ok(spectrum) => {
            let body = match config.output_format {
                OutputFormat::Json => report::to_json(&spectrum),
                OutputFormat::Csv => report::spectrum_to_csv(&spectrum),
            };
            match emit(&config, body) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_CONFIG_ERROR
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_for_error(&e)
        }
    }
}

fn run_sweep(common: CommonArgs) -> u8 {
    let config = match load_config(&common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG_ERROR;
        }
    };
    match suites::run_sweep(&config) {
        Ok(sweep) => {
            let body = match config.output_format {
                OutputFormat::Json => report::to_json(&sweep),
                OutputFormat::Csv => report::sweep_to_csv(&sweep),
            };
            match emit(&config, body) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_CONFIG_ERROR
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_for_error(&e)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify(common) => run_verify(common),
        Command::Spectrum { common, levels } => run_spectrum(common, levels),
        Command::Sweep(common) => run_sweep(common),
    };
    ExitCode::from(code)
}
