use rand::Rng;

use crate::objective::ObjectiveVector;
use crate::scalar::Scalar;

/// A minimization problem together with its variation operators.
pub trait Problem<T: Scalar> {
    type Genome: Clone;

    fn name(&self) -> &str;

    fn num_objectives(&self) -> usize;

    fn random_genome<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Genome;

    fn evaluate(&self, genome: &Self::Genome) -> ObjectiveVector<T>;

    fn crossover<R: Rng + ?Sized>(
        &self,
        a: &Self::Genome,
        b: &Self::Genome,
        rng: &mut R,
    ) -> (Self::Genome, Self::Genome);

    fn mutate<R: Rng + ?Sized>(&self, genome: &Self::Genome, rng: &mut R) -> Self::Genome;

    /// Crossover followed by mutation of both children.
    fn vary<R: Rng + ?Sized>(
        &self,
        a: &Self::Genome,
        b: &Self::Genome,
        rng: &mut R,
    ) -> (Self::Genome, Self::Genome) {
        let (c1, c2) = self.crossover(a, b, rng);
        (self.mutate(&c1, rng), self.mutate(&c2, rng))
    }

    /// Short text rendering of a genome for result files.
    fn describe(&self, _genome: &Self::Genome) -> String {
        String::new()
    }
}
