//! Batch CLI for the drone energy redistribution simulator.

mod manifest;
mod output;

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use aerogrid::model::{validate_state, CaseId, SimulationConfig};
use aerogrid::simulator::{run_case_recorded, MetricsReport};
use aerogrid::traces::{ingest_traces, synth_traces, write_traces_to_path, TraceBundle};

use manifest::{ManifestFile, Overrides, RunManifest, TraceSource};

#[derive(Parser)]
#[command(
    name = "aerogrid",
    version,
    about = "Simulate drone-assisted energy redistribution across solar small cells"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured evaluation cases and write metric artifacts.
    Run(RunArgs),
    /// Generate a synthetic trace file.
    GenTraces(GenTracesArgs),
    /// Check a manifest (and its trace file, if any) without running.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Manifest file; omit to run the built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the manifest seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Case to run (repeatable): baseline, static, optimal.
    #[arg(long = "case")]
    cases: Vec<String>,
    /// Output directory for metric artifacts.
    #[arg(long, env = "AEROGRID_OUT_DIR")]
    out: Option<PathBuf>,
    /// Override the simulated horizon.
    #[arg(long)]
    horizon_hours: Option<usize>,
}

#[derive(Args)]
struct GenTracesArgs {
    /// Manifest supplying the generator profile and station count.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of stations.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    horizon_hours: Option<usize>,
    /// Trace file to write.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    /// Manifest file to lint.
    #[arg(long)]
    config: PathBuf,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => run(args),
        Command::GenTraces(args) => gen_traces(args),
        Command::Validate(args) => validate(args),
    }
}

fn load_manifest(path: &Option<PathBuf>) -> Result<ManifestFile> {
    match path {
        Some(path) => ManifestFile::load(path),
        None => Ok(ManifestFile::default()),
    }
}

fn parse_cases(names: &[String]) -> Result<Option<Vec<CaseId>>> {
    if names.is_empty() {
        return Ok(None);
    }
    let mut cases = Vec::with_capacity(names.len());
    for name in names {
        cases.push(CaseId::from_str(name)?);
    }
    Ok(Some(cases))
}

fn load_bundle(run: &RunManifest) -> Result<TraceBundle> {
    match &run.trace_source {
        TraceSource::File(path) => {
            ingest_traces(path, run.config.n, run.config.horizon_hours)
                .with_context(|| format!("ingesting traces from {}", path.display()))
        }
        TraceSource::Synthetic(profile) => Ok(synth_traces(&run.config, profile)),
    }
}

fn run(args: RunArgs) -> Result<()> {
    let overrides = Overrides {
        seed: args.seed,
        cases: parse_cases(&args.cases)?,
        out_dir: args.out.clone(),
        horizon_hours: args.horizon_hours,
    };
    let run = load_manifest(&args.config)?.resolve(&overrides)?;
    let bundle = load_bundle(&run)?;
    let topo = run.topology();

    let mut reports: Vec<MetricsReport> = Vec::with_capacity(run.cases.len());
    for case in &run.cases {
        let config = run.config.with_case(*case);
        let (report, records) = run_case_recorded(&config, &bundle, &topo)?;
        let moves: Vec<_> = records.iter().flat_map(|r| r.moves.iter().cloned()).collect();
        let metrics_path = output::write_case_files(&run.out_dir, *case, &report, &moves)?;
        println!(
            "{:<8}  outages {:>6}  exchanges {:>5}  energy moved {:>10.1} Wh  grid {:>11.1} Wh  ({} ms) -> {}",
            case.slug(),
            report.total_outages,
            report.total_exchanges,
            report.total_energy_transferred_wh,
            report.total_grid_import_wh,
            report.runtime_ms,
            metrics_path.display()
        );
        reports.push(report);
    }

    let comparison = output::comparison_csv(&reports);
    let comparison_path = run.out_dir.join("comparison.csv");
    output::write_atomic(&comparison_path, comparison.as_bytes())?;
    print!("{comparison}");
    println!("comparison table -> {}", comparison_path.display());
    Ok(())
}

fn gen_traces(args: GenTracesArgs) -> Result<()> {
    let mf = load_manifest(&args.config)?;
    let resolved = mf.resolve(&Overrides {
        seed: args.seed,
        horizon_hours: args.horizon_hours,
        ..Default::default()
    })?;
    let mut config = resolved.config;
    if let Some(n) = args.n {
        config = SimulationConfig { n, ..config };
        config.validate()?;
    }
    let profile = match &resolved.trace_source {
        TraceSource::Synthetic(profile) => profile.clone(),
        TraceSource::File(_) => mf.profile.clone(),
    };
    let bundle = synth_traces(&config, &profile);
    write_traces_to_path(&args.out, &bundle)
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!(
        "wrote {} stations x {} hours (seed {}) -> {}",
        config.n,
        config.horizon_hours,
        config.rng_seed,
        args.out.display()
    );
    Ok(())
}

fn validate(args: ValidateArgs) -> Result<()> {
    let run = ManifestFile::load(&args.config)?.resolve(&Overrides::default())?;
    let mut problems = 0usize;

    let topo = run.topology();
    let state = aerogrid::simulator::initial_state(&run.config);
    for violation in validate_state(&state, &topo, &run.config.drone_spec) {
        println!("invalid: {violation}");
        problems += 1;
    }

    match load_bundle(&run) {
        Ok(bundle) => {
            if let Err(e) = bundle.validate(run.config.n, run.config.horizon_hours) {
                println!("invalid traces: {e}");
                problems += 1;
            }
        }
        Err(e) => {
            println!("invalid traces: {e:#}");
            problems += 1;
        }
    }

    if problems > 0 {
        bail!("{problems} problem(s) found");
    }
    println!(
        "ok: {} stations, {} drones each, {} hours, cases [{}]",
        run.config.n,
        run.config.m,
        run.config.horizon_hours,
        run.cases.iter().map(|c| c.slug()).collect::<Vec<_>>().join(", ")
    );
    Ok(())
}
