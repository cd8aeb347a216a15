use apdi_core::{ObjectiveVector, Problem, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chromosome::{crossover, init_chromosome, mutate, Chromosome};
use crate::error::Result;
use crate::evaluation::evaluate;
use crate::instance::VfmsoInstance;
use crate::sampling::{DueDateSamples, DEFAULT_SAMPLE_COUNT};

pub const DEFAULT_CROSSOVER_RATE: f64 = 0.9;

/// Fleet maintenance scheduling as a three-objective minimization problem.
#[derive(Debug, Clone)]
pub struct VfmsoProblem {
    instance: VfmsoInstance,
    samples: DueDateSamples,
    pub crossover_rate: f64,
}

impl VfmsoProblem {
    /// Freezes `DEFAULT_SAMPLE_COUNT` due-date samples per component drawn with `sample_seed`.
    pub fn new(instance: VfmsoInstance, sample_seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
        let samples = DueDateSamples::generate(&instance, DEFAULT_SAMPLE_COUNT, &mut rng)?;
        Ok(VfmsoProblem::with_samples(instance, samples))
    }

    pub fn with_samples(instance: VfmsoInstance, samples: DueDateSamples) -> Self {
        VfmsoProblem { instance, samples, crossover_rate: DEFAULT_CROSSOVER_RATE }
    }

    pub fn instance(&self) -> &VfmsoInstance {
        &self.instance
    }

    pub fn samples(&self) -> &DueDateSamples {
        &self.samples
    }
}

impl<T: Scalar> Problem<T> for VfmsoProblem {
    type Genome = Chromosome;

    fn name(&self) -> &str {
        "vfmso"
    }

    fn num_objectives(&self) -> usize {
        3
    }

    fn random_genome<R: Rng + ?Sized>(&self, rng: &mut R) -> Chromosome {
        init_chromosome(&self.instance, rng)
    }

    fn evaluate(&self, genome: &Chromosome) -> ObjectiveVector<T> {
        let f = evaluate(genome, &self.instance, &self.samples).objectives();
        ObjectiveVector::from_vec_unchecked(f.iter().map(|&v| T::of(v)).collect())
    }

    fn crossover<R: Rng + ?Sized>(&self, a: &Chromosome, b: &Chromosome, rng: &mut R) -> (Chromosome, Chromosome) {
        if rng.random::<f64>() < self.crossover_rate {
            crossover(&self.instance, a, b, rng)
        } else {
            (a.clone(), b.clone())
        }
    }

    fn mutate<R: Rng + ?Sized>(&self, genome: &Chromosome, rng: &mut R) -> Chromosome {
        mutate(&self.instance, genome, rng)
    }

    /// Groups as `car:members@start/team`, separated by `;`.
    fn describe(&self, genome: &Chromosome) -> String {
        genome
            .groups()
            .map(|(i, _, g)| {
                let members: Vec<String> = g.members.iter().map(|j| j.to_string()).collect();
                format!("{i}:{}@{:.3}/{}", members.join("+"), g.start, g.team)
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}
