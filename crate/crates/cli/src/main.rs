//! `sbim`: runs a job file (or a sweep) and prints tables and JSON.
//!
//! Exit status: 0 success, 1 verification mismatch, 2 configuration
//! error, 3 failed precondition (e.g. a point outside the Tits cone).
//! `SBIM_THREADS` sets the number of sweep workers.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use sbim_core::job::{self, render_report, render_sweep, to_json, ExitStatus, JobConfig, JobError};

#[derive(Parser, Debug)]
#[command(name = "sbim", version, about = "Decompose specialised Bott-Samelson modules along W-orbits")]
struct Args {
    /// Job file: TOML, or JSON (a bare job or a previous report).
    config: PathBuf,
    /// Check the decomposition against the brute-force module oracle.
    #[arg(long)]
    verify: bool,
    /// Write the JSON report to PATH ("-" for standard output).
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Sweep every wall subset of a dominant point and all short words.
    #[arg(long)]
    sweep: bool,
    /// Word-length bound for sweeps; implies --sweep.
    #[arg(long, value_name = "N")]
    max_word_len: Option<usize>,
    /// Iteration caps, e.g. "orbit=100000,descent=10000".
    #[arg(long, value_name = "SPEC", value_parser = parse_caps)]
    caps: Option<CapsOverride>,
    /// Do not print the tables.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Clone, Debug, Default)]
struct CapsOverride {
    orbit: Option<usize>,
    descent: Option<usize>,
}

fn parse_caps(s: &str) -> Result<CapsOverride, String> {
    let mut caps = CapsOverride::default();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part.split_once('=').ok_or_else(|| format!("expected key=value, got {part:?}"))?;
        let value: usize = value.trim().parse().map_err(|e| format!("{key}: {e}"))?;
        match key.trim() {
            "orbit" => caps.orbit = Some(value),
            "descent" => caps.descent = Some(value),
            other => return Err(format!("unknown cap {other:?} (expected orbit or descent)")),
        }
    }
    Ok(caps)
}

fn threads_from_env() -> Result<Option<usize>, JobError> {
    match std::env::var("SBIM_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| JobError::Invalid(vec![format!("SBIM_THREADS: expected a positive integer, got {v:?}")])),
        Err(_) => Ok(None),
    }
}

fn apply_overrides(mut config: JobConfig, args: &Args) -> JobConfig {
    config.verify |= args.verify;
    if args.sweep || args.max_word_len.is_some() {
        let mut spec = config.sweep.take().unwrap_or_default();
        if let Some(n) = args.max_word_len {
            spec.max_word_len = n;
        }
        config.sweep = Some(spec);
    }
    if let Some(c) = &args.caps {
        config.caps.orbit = c.orbit.unwrap_or(config.caps.orbit);
        config.caps.descent = c.descent.unwrap_or(config.caps.descent);
    }
    config
}

fn write_json(path: &Path, text: &str) -> Result<(), JobError> {
    if path == Path::new("-") {
        print!("{text}");
        return Ok(());
    }
    std::fs::write(path, text).map_err(|e| JobError::Io { path: path.to_path_buf(), message: e.to_string() })
}

fn execute(args: &Args) -> Result<ExitStatus, JobError> {
    let config = apply_overrides(JobConfig::load(&args.config)?, args);
    let json_path = args.json.clone().or_else(|| config.output.json.clone());
    let show = config.output.table && !args.quiet;
    let (table, json, status) = if config.is_sweep() {
        let report = job::sweep(&config, threads_from_env()?)?;
        (render_sweep(&report), to_json(&report), report.status)
    } else {
        let report = job::run(&config)?;
        (render_report(&report), to_json(&report), report.status)
    };
    if show {
        print!("{table}");
    }
    if let Some(path) = json_path {
        write_json(&path, &json)?;
    }
    Ok(status)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let status = execute(&args).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_status()
    });
    ExitCode::from(u8::try_from(status.code()).unwrap_or(1))
}
