use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use apdi_core::{run, ContinuousProblem, Event, EvolutionConfig, Problem};
use apdi_vfmso::{VfmsoInstance, VfmsoProblem};

use crate::artifacts::{write_run, FrontRow};
use crate::config::{Manifest, ProblemSpec, RunConfig};

/// Final front and event log of one run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub front: Vec<FrontRow>,
    pub events: Vec<Event>,
    pub evaluations: u64,
}

fn execute<P: Problem<f64>>(problem: &P, config: &EvolutionConfig) -> Result<RunOutput> {
    let result = run::<P, f64, ()>(problem, config, &mut ())?;
    let front = result
        .final_front()
        .into_iter()
        .map(|m| FrontRow { objectives: m.objectives.clone(), genome: problem.describe(&m.genome) })
        .collect();
    Ok(RunOutput { front, events: result.events, evaluations: result.evaluations })
}

/// Runs one configuration in memory.
pub fn run_config(config: &RunConfig) -> Result<RunOutput> {
    let evolution = config.evolution_config()?;
    match &config.problem {
        ProblemSpec::Benchmark(b) => execute(&ContinuousProblem::new(*b), &evolution),
        ProblemSpec::Vfmso(path) => {
            let instance = VfmsoInstance::load(path)
                .with_context(|| format!("cannot load instance {}", path.display()))?;
            execute(&VfmsoProblem::new(instance, config.seed)?, &evolution)
        }
    }
}

/// Runs one configuration and writes its artifacts into `dir`.
pub fn run_to_dir(config: &RunConfig, base_seed: u64, run_index: u64, dir: &Path) -> Result<Manifest> {
    let output = run_config(config)?;
    let manifest = Manifest::new(config.clone(), base_seed, run_index, output.evaluations);
    write_run(dir, &manifest, &output.front, &output.events)?;
    Ok(manifest)
}

/// Directory of run `index` in a multi-run experiment.
pub fn run_dir(output: &Path, seed: u64) -> PathBuf {
    output.join(format!("seed-{seed:06}"))
}

/// `runs` runs with seeds `base_seed + index`; a single run writes straight into `output`.
pub fn run_series(template: &RunConfig, base_seed: u64, runs: u64, output: &Path) -> Result<Vec<Manifest>> {
    (0..runs)
        .map(|index| {
            let mut config = template.clone();
            config.seed = base_seed + index;
            let dir = if runs == 1 { output.to_path_buf() } else { run_dir(output, config.seed) };
            run_to_dir(&config, base_seed, index, &dir).with_context(|| format!("run with seed {}", config.seed))
        })
        .collect()
}
