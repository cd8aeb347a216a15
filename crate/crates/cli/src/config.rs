use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use apdi_core::preference::DEFAULT_EPSILON_FRACTION;
use apdi_core::{Benchmark, EvolutionConfig, RegionPressure, Variant};
use serde::{Deserialize, Serialize};

pub const VFMSO_DEFAULT_BUDGET: u64 = 1_200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum Algorithm {
    #[value(name = "di-1")]
    #[serde(rename = "di-1")]
    Di1,
    #[value(name = "di-2")]
    #[serde(rename = "di-2")]
    Di2,
    #[value(name = "ap-di-1")]
    #[serde(rename = "ap-di-1")]
    ApDi1,
    #[value(name = "ap-di-2")]
    #[serde(rename = "ap-di-2")]
    ApDi2,
}

impl Algorithm {
    pub fn variant(self) -> Variant {
        match self {
            Algorithm::Di1 | Algorithm::ApDi1 => Variant::Di1,
            Algorithm::Di2 | Algorithm::ApDi2 => Variant::Di2,
        }
    }

    pub fn uses_preference(self) -> bool {
        matches!(self, Algorithm::ApDi1 | Algorithm::ApDi2)
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Di1 => "di-1",
            Algorithm::Di2 => "di-2",
            Algorithm::ApDi1 => "ap-di-1",
            Algorithm::ApDi2 => "ap-di-2",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A benchmark name or `vfmso:<instance-file>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ProblemSpec {
    Benchmark(Benchmark),
    Vfmso(PathBuf),
}

impl ProblemSpec {
    pub fn default_budget(&self) -> u64 {
        match self {
            ProblemSpec::Benchmark(b) => b.default_budget(),
            ProblemSpec::Vfmso(_) => VFMSO_DEFAULT_BUDGET,
        }
    }
}

impl FromStr for ProblemSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(path) = s.strip_prefix("vfmso:") {
            if path.is_empty() {
                bail!("`vfmso:` needs an instance file path");
            }
            return Ok(ProblemSpec::Vfmso(PathBuf::from(path)));
        }
        Ok(ProblemSpec::Benchmark(s.parse()?))
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemSpec::Benchmark(b) => f.write_str(b.name()),
            ProblemSpec::Vfmso(p) => write!(f, "vfmso:{}", p.display()),
        }
    }
}

impl TryFrom<String> for ProblemSpec {
    type Error = anyhow::Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ProblemSpec> for String {
    fn from(p: ProblemSpec) -> String {
        p.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Pressure {
    InRegion,
    TieBreak,
}

impl From<Pressure> for RegionPressure {
    fn from(p: Pressure) -> Self {
        match p {
            Pressure::InRegion => RegionPressure::InRegion,
            Pressure::TieBreak => RegionPressure::TieBreak,
        }
    }
}

/// Fully resolved settings of one run; echoed verbatim into the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub problem: ProblemSpec,
    pub population_size: usize,
    pub budget: u64,
    pub learning_fraction: f64,
    pub region_updates: u32,
    pub epsilon_fraction: f64,
    pub region_pressure: Pressure,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, problem: ProblemSpec, seed: u64) -> Self {
        let budget = problem.default_budget();
        RunConfig {
            algorithm,
            problem,
            population_size: 100,
            budget,
            learning_fraction: 0.5,
            region_updates: 12,
            epsilon_fraction: DEFAULT_EPSILON_FRACTION,
            region_pressure: Pressure::InRegion,
            seed,
        }
    }

    pub fn evolution_config(&self) -> Result<EvolutionConfig> {
        let config = EvolutionConfig {
            population_size: self.population_size,
            total_budget: self.budget,
            preference_enabled: self.algorithm.uses_preference(),
            learning_fraction: self.learning_fraction,
            region_updates: self.region_updates,
            variant: self.algorithm.variant(),
            epsilon_fraction: self.epsilon_fraction,
            rng_seed: self.seed,
            region_cadence: None,
            region_pressure: self.region_pressure.into(),
        };
        config.validate().context("invalid run configuration")?;
        Ok(config)
    }
}

pub const MANIFEST_FORMAT: &str = "apdi-run";
pub const MANIFEST_VERSION: u32 = 1;

/// Everything needed to reproduce a run's artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub version: u32,
    pub tool_version: String,
    pub base_seed: u64,
    pub run_index: u64,
    /// Seed of the frozen due-date samples (scheduling problems only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sample_seed: Option<u64>,
    pub evaluations: u64,
    pub config: RunConfig,
}

impl Manifest {
    pub fn new(config: RunConfig, base_seed: u64, run_index: u64, evaluations: u64) -> Self {
        let sample_seed = matches!(config.problem, ProblemSpec::Vfmso(_)).then_some(config.seed);
        Manifest {
            format: MANIFEST_FORMAT.to_string(),
            version: MANIFEST_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            base_seed,
            run_index,
            sample_seed,
            evaluations,
            config,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let m: Manifest = toml::from_str(text).context("malformed manifest")?;
        if m.format != MANIFEST_FORMAT || m.version != MANIFEST_VERSION {
            bail!("unsupported manifest `{}` version {}", m.format, m.version);
        }
        Ok(m)
    }

    pub fn render(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem_specs_parse() {
        assert_eq!("zdt1".parse::<ProblemSpec>().unwrap(), ProblemSpec::Benchmark(Benchmark::Zdt1));
        assert_eq!(
            "vfmso:inst/v1.toml".parse::<ProblemSpec>().unwrap(),
            ProblemSpec::Vfmso(PathBuf::from("inst/v1.toml"))
        );
        assert!("vfmso:".parse::<ProblemSpec>().is_err());
        assert!("zdt9".parse::<ProblemSpec>().is_err());
    }

    #[test]
    fn default_budgets() {
        let b = |s: &str| s.parse::<ProblemSpec>().unwrap().default_budget();
        assert_eq!(b("zdt2"), 22_000);
        assert_eq!(b("dtlz1"), 120_000);
        assert_eq!(b("vfmso:x.toml"), 1_200_000);
    }

    #[test]
    fn manifest_round_trip() {
        let config = RunConfig::new(Algorithm::ApDi2, "vfmso:a.toml".parse().unwrap(), 17);
        let m = Manifest::new(config, 10, 7, 1234);
        let text = m.render().unwrap();
        assert!(text.contains("algorithm = \"ap-di-2\""));
        assert!(text.contains("problem = \"vfmso:a.toml\""));
        assert_eq!(Manifest::parse(&text).unwrap(), m);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut c = RunConfig::new(Algorithm::Di1, "zdt1".parse().unwrap(), 0);
        c.population_size = 1;
        assert!(c.evolution_config().is_err());
        let mut c = RunConfig::new(Algorithm::Di1, "zdt1".parse().unwrap(), 0);
        c.learning_fraction = 1.5;
        assert!(c.evolution_config().is_err());
    }
}
