use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use apdi_cli::analysis::{analyze_runs, render_report};
use apdi_cli::artifacts::{discover_runs, load_run};
use apdi_cli::config::{Algorithm, Manifest, Pressure, ProblemSpec, RunConfig};
use apdi_cli::runner::{run_series, run_to_dir};
use apdi_vfmso::generate_instance;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "apdi", version, about = "DI-MOEA and AP-DI-MOEA experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an algorithm and write front.tsv, events.json and manifest.toml.
    Run(RunArgs),
    /// Generate a random fleet maintenance instance.
    GenerateInstance(GenerateArgs),
    /// Compare paired DI and AP runs.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Re-run the configuration recorded in an existing manifest.
    #[arg(long, conflicts_with_all = ["algorithm", "problem"])]
    manifest: Option<PathBuf>,
    #[arg(long, value_enum, required_unless_present = "manifest")]
    algorithm: Option<Algorithm>,
    /// zdt1, zdt2, dtlz1, dtlz2 or vfmso:<instance-file>.
    #[arg(long, required_unless_present = "manifest")]
    problem: Option<ProblemSpec>,
    #[arg(long, default_value_t = 100)]
    population_size: usize,
    /// Evaluation budget; defaults to the problem's reference budget.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 0.5)]
    learning_fraction: f64,
    #[arg(long, default_value_t = 12)]
    region_updates: u32,
    #[arg(long, default_value_t = 0.05)]
    epsilon_fraction: f64,
    #[arg(long, value_enum, default_value_t = Pressure::InRegion)]
    region_pressure: Pressure,
    /// Seed of the first run; run i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of runs; more than one writes one `seed-NNNNNN` directory per run.
    #[arg(long, default_value_t = 1)]
    runs: u64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    cars: usize,
    #[arg(long)]
    workshops: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Run directory (or directory of run directories) of the DI algorithm.
    #[arg(long)]
    di: PathBuf,
    /// Run directory (or directory of run directories) of the AP algorithm.
    #[arg(long)]
    ap: PathBuf,
    /// Report file; printed to stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn cmd_run(args: RunArgs) -> Result<()> {
    if let Some(path) = &args.manifest {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let m = Manifest::parse(&text)?;
        run_to_dir(&m.config, m.base_seed, m.run_index, &args.output)?;
        return Ok(());
    }
    let (Some(algorithm), Some(problem)) = (args.algorithm, args.problem) else {
        bail!("--algorithm and --problem are required");
    };
    if args.runs == 0 {
        bail!("--runs must be at least 1");
    }
    let mut config = RunConfig::new(algorithm, problem, args.seed);
    config.population_size = args.population_size;
    if let Some(budget) = args.budget {
        config.budget = budget;
    }
    config.learning_fraction = args.learning_fraction;
    config.region_updates = args.region_updates;
    config.epsilon_fraction = args.epsilon_fraction;
    config.region_pressure = args.region_pressure;
    config.evolution_config()?;
    run_series(&config, args.seed, args.runs, &args.output)?;
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let instance = generate_instance(args.cars, args.workshops, &mut rng)?;
    instance
        .save(&args.output)
        .with_context(|| format!("cannot write {}", args.output.display()))?;
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let load = |dir: &PathBuf| -> Result<Vec<_>> { discover_runs(dir)?.iter().map(|d| load_run(d)).collect() };
    let reports = analyze_runs(&load(&args.di)?, &load(&args.ap)?)?;
    let text = render_report(&reports);
    match args.output {
        Some(path) => fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::GenerateInstance(args) => cmd_generate(args),
        Command::Analyze(args) => cmd_analyze(args),
    }
}
