//! `nrho-isac`: scenario runner for the cislunar ISAC sensing chain.

mod compare;
mod experiments;
mod manifest;
mod plot;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use nrho_isac::detect::Integration;

use scenario::Scenario;

#[derive(Parser, Debug)]
#[command(name = "nrho-isac", version = manifest::VERSION, about = "Debris sensing around a lunar NRHO")]
struct Cli {
    /// Output directory (overrides `[scenario] out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// RNG seed (overrides `[scenario] seed`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Recompute the separation campaign even when a cached result exists.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Use the exact Swerling-I requirement instead of the K^kappa law.
    #[arg(long, global = true)]
    exact_swerling: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every experiment listed in the scenario.
    Run { file: PathBuf },
    /// Check a scenario without running it.
    Validate { file: PathBuf },
    /// Diff the CSV artifacts of two run directories.
    Compare { a: PathBuf, b: PathBuf },
}

fn load(file: &Path) -> Result<(Scenario, Vec<u8>), Vec<String>> {
    let bytes = std::fs::read(file).map_err(|e| vec![format!("{}: {e}", file.display())])?;
    let text = String::from_utf8_lossy(&bytes);
    let sc = Scenario::parse(&text).map_err(|errs| errs.iter().map(|e| format!("{}: {e}", file.display())).collect::<Vec<_>>())?;
    let v = sc.violations();
    if !v.is_empty() {
        return Err(v.into_iter().map(|m| format!("{}: {m}", file.display())).collect());
    }
    Ok((sc, bytes))
}

fn cache_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os("NRHO_ISAC_CACHE") {
        return Some(PathBuf::from(d));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("nrho-isac"))
}

fn run(cli: &Cli, file: &Path) -> Result<ExitCode> {
    let (mut sc, bytes) = match load(file) {
        Ok(x) => x,
        Err(errs) => {
            errs.iter().for_each(|e| eprintln!("error: {e}"));
            return Ok(ExitCode::from(1));
        }
    };
    let mut flags = Vec::new();
    if let Some(seed) = cli.seed {
        sc.seed = seed;
    }
    if cli.exact_swerling {
        sc.detection.integration = Integration::Exact;
        flags.push("--exact-swerling");
    }
    if cli.no_cache {
        flags.push("--no-cache");
    }
    let out = cli.out.clone().or_else(|| sc.out.clone()).unwrap_or_else(|| PathBuf::from("runs").join(&sc.name));
    std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;

    let mut runner = experiments::Runner::new(&sc, &out, cache_dir(), cli.no_cache);
    for &x in &sc.experiments {
        eprintln!("running {}", x.name());
        runner.run(x)?;
    }
    let artifacts = manifest::hash_artifacts(&out, &runner.artifacts)?;
    let m = manifest::Manifest { scenario_sha256: manifest::sha256_hex(&bytes), flags, scenario: &sc, artifacts };
    m.write(&out)?;
    println!("wrote {} artifacts to {}", runner.artifacts.len(), out.display());
    Ok(ExitCode::SUCCESS)
}

fn validate(file: &Path) -> ExitCode {
    match load(file) {
        Ok((sc, _)) => {
            println!("{}: valid ({} experiments)", file.display(), sc.experiments.len());
            ExitCode::SUCCESS
        }
        Err(errs) => {
            errs.iter().for_each(|e| println!("{e}"));
            println!("{} violation(s)", errs.len());
            ExitCode::from(1)
        }
    }
}

fn compare_dirs(a: &Path, b: &Path) -> Result<ExitCode> {
    let tol = match manifest::lookup(a, "scenario", "tolerance")? {
        Some(v) => nrho_isac::kv::parse_si(&v).map_err(anyhow::Error::msg).context("manifest tolerance")?,
        None => 0.0,
    };
    let rep = compare::compare(a, b)?;
    for s in &rep.structural {
        println!("structural: {s}");
    }
    println!("file,column,max_abs_diff,max_rel_diff,mean_delta");
    for c in &rep.columns {
        println!("{},{},{:.6e},{:.6e},{:.6e}", c.file, c.column, c.max_abs, c.max_rel, c.mean_delta);
    }
    if !rep.structural.is_empty() {
        return Ok(ExitCode::from(2));
    }
    let over = rep.columns.iter().filter(|c| c.max_rel > tol).count();
    println!("max relative difference {:.6e} (tolerance {tol:e}); {over} column(s) over", rep.worst());
    Ok(if over > 0 { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Run { file } => run(&cli, file),
        Command::Validate { file } => Ok(validate(file)),
        Command::Compare { a, b } => compare_dirs(a, b),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
