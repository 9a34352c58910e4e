//! Command-line front end for the `seqlab` crate.
//!
//! [`run`] parses arguments, executes one subcommand, writes artifacts and
//! maps failures onto exit codes: 0 success, 1 internal error, 2 failed
//! precondition, 3 `--check` mismatch, 64 usage error.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use clap::Parser;
use seqlab::landau::{check_certificate, DivergenceCertificate};

pub use config::{Command, ExperimentConfig, Method};
pub use error::CliError;

use crate::args::Cli;
use crate::commands::{execute, Report};
use crate::error::EXIT_USAGE;

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let cfg = cli.command.into_config();
    match run_config(&cfg) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("seqlab: {}", e.reason_line());
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn verify_certificate_text(text: &str, path: &Path) -> Result<(), CliError> {
    let reject = |why: String| CliError::Mismatch(format!("{}: {why}", path.display()));
    let cert = DivergenceCertificate::parse(text).map_err(|e| reject(e.to_string()))?;
    check_certificate(&cert).map_err(|e| reject(e.to_string()))?;
    Ok(())
}

fn compare(expected: &str, path: &Path) -> Result<(), CliError> {
    let found = read(path)?;
    if found == expected {
        return Ok(());
    }
    let line = expected.lines().zip(found.lines()).position(|(a, b)| a != b).map_or_else(
        || expected.lines().count().min(found.lines().count()) + 1,
        |i| i + 1,
    );
    Err(CliError::Mismatch(format!("{} differs from the recomputed artifact at line {line}", path.display())))
}

/// Executes a configuration and returns the stdout text.
pub fn run_config(cfg: &ExperimentConfig) -> Result<String, CliError> {
    // a bare `abel-dini --check cert.txt` verifies the certificate on its own
    if cfg.command() == Command::AbelDini && cfg.a.is_none() {
        let path = cfg.check.as_deref().ok_or_else(|| CliError::Usage("abel-dini needs --a or --check".into()))?;
        verify_certificate_text(&read(path)?, path)?;
        return Ok(format!("config: {cfg}\ncheck: ok (certificate verified)\n"));
    }
    let report: Report = execute(cfg)?;
    let mut out = format!("config: {cfg}\n");
    for (k, v) in &report.lines {
        out.push_str(&format!("{k}: {v}\n"));
    }
    if let Some(path) = &cfg.check {
        if report.is_certificate {
            verify_certificate_text(&read(path)?, path)?;
        }
        compare(&report.artifact, path)?;
        out.push_str("check: ok\n");
        return Ok(out);
    }
    if let Some(path) = &cfg.out {
        write(path, &report.artifact)?;
    }
    if let (Some(path), Some(cert)) = (&cfg.cert, &report.certificate) {
        write(path, cert)?;
    }
    Ok(out)
}
