//! DI-MOEA with optional automatic preference (AP-DI-MOEA).
//!
//! Each iteration uses (μ+μ) generational selection while the population
//! still spans several dominance ranks and (μ+1) steady-state selection
//! once it is mutually non-dominated. Survivors are ranked by front, then
//! by a diversity criterion, then (when a preference region exists) by
//! distance to the region's knee.

use std::cmp::Ordering;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::crowding::crowding_distance;
use crate::diversity::diversity_contribution;
use crate::error::{MoeaError, Result};
use crate::objective::{dominates, ObjectiveVector};
use crate::preference::{build_region, FrontShape, PreferenceRegion, RegionSchedule, DEFAULT_EPSILON_FRACTION};
use crate::problem::Problem;
use crate::scalar::Scalar;
use crate::sorting::{fast_nondominated_sort, RankedFronts};

/// Second ranking criterion in generational selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    /// Crowding distance.
    Di1,
    /// Diversity-indicator contribution.
    Di2,
}

/// How the preference region shapes truncation once it exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionPressure {
    /// The diversity criterion is measured among in-region members of the
    /// truncated front; out-of-region members rank below all of them and
    /// are ordered by knee distance.
    InRegion,
    /// Knee distance only breaks exact ties of the diversity criterion.
    TieBreak,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub population_size: usize,
    /// Total number of objective evaluations.
    pub total_budget: u64,
    pub preference_enabled: bool,
    pub learning_fraction: f64,
    pub region_updates: u32,
    pub variant: Variant,
    pub epsilon_fraction: f64,
    pub rng_seed: u64,
    /// Explicit `(first, interval)` region cadence replacing the derived one.
    pub region_cadence: Option<(u64, u64)>,
    pub region_pressure: RegionPressure,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            total_budget: 22_000,
            preference_enabled: false,
            learning_fraction: 0.5,
            region_updates: 12,
            variant: Variant::Di1,
            epsilon_fraction: DEFAULT_EPSILON_FRACTION,
            rng_seed: 0,
            region_cadence: None,
            region_pressure: RegionPressure::InRegion,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(MoeaError::InvalidConfig(msg));
        if self.population_size < 2 {
            return bad(format!("population_size must be at least 2, got {}", self.population_size));
        }
        if self.total_budget < self.population_size as u64 {
            return bad(format!(
                "total_budget {} is smaller than the population {}",
                self.total_budget, self.population_size
            ));
        }
        if !(self.learning_fraction > 0.0 && self.learning_fraction < 1.0) {
            return bad(format!("learning_fraction must lie in (0, 1), got {}", self.learning_fraction));
        }
        if self.learning_fraction * (self.total_budget as f64) < self.population_size as f64 {
            return bad("learning_fraction * total_budget must cover one population".into());
        }
        if self.region_updates < 1 {
            return bad("region_updates must be at least 1".into());
        }
        if !(self.epsilon_fraction >= 0.0 && self.epsilon_fraction.is_finite()) {
            return bad(format!("epsilon_fraction must be >= 0, got {}", self.epsilon_fraction));
        }
        if let Some((_, 0)) = self.region_cadence {
            return bad("region interval must be positive".into());
        }
        Ok(())
    }

    pub fn region_schedule(&self) -> RegionSchedule {
        match self.region_cadence {
            Some((first, step)) => {
                RegionSchedule::with_cadence(self.total_budget, self.population_size, first, step)
            }
            None => RegionSchedule::new(
                self.total_budget,
                self.population_size,
                self.learning_fraction,
                self.region_updates,
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual<G, T> {
    pub genome: G,
    pub objectives: ObjectiveVector<T>,
    /// Front index; 0 means non-dominated within the population.
    pub rank: usize,
    /// Crowding distance or diversity contribution from the last truncation
    /// that scored this member; NaN when it was admitted as part of a whole front.
    pub secondary_score: T,
    /// Distance to the current knee, `+inf` without a region.
    pub knee_distance: T,
}

impl<G, T: Scalar> Individual<G, T> {
    pub fn new(genome: G, objectives: ObjectiveVector<T>) -> Self {
        Self {
            genome,
            objectives,
            rank: 0,
            secondary_score: T::nan(),
            knee_distance: T::infinity(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population<G, T> {
    pub members: Vec<Individual<G, T>>,
    pub capacity: usize,
}

impl<G, T: Scalar> Population<G, T> {
    pub fn objectives(&self) -> Vec<&ObjectiveVector<T>> {
        self.members.iter().map(|m| &m.objectives).collect()
    }

    pub fn is_mutually_nondominated(&self) -> bool {
        self.members.iter().all(|m| m.rank == 0)
    }

    /// Members of rank 0.
    pub fn first_front(&self) -> Vec<&Individual<G, T>> {
        self.members.iter().filter(|m| m.rank == 0).collect()
    }
}

/// A region build as recorded in the run log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionEvent<T> {
    pub evaluations: u64,
    pub knee: ObjectiveVector<T>,
    pub upper_bound: ObjectiveVector<T>,
    pub shape: FrontShape,
    pub num_convex: usize,
    pub num_concave: usize,
}

impl<T: Scalar> RegionEvent<T> {
    pub fn region(&self) -> PreferenceRegion<T> {
        PreferenceRegion {
            knee: self.knee.clone(),
            upper_bound: self.upper_bound.clone(),
            lower_bound: ObjectiveVector::from_vec_unchecked(vec![T::zero(); self.knee.len()]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Generational,
    SteadyState,
}

/// Hooks called by [`run`]. All methods default to no-ops.
pub trait Observer<G, T> {
    fn on_region(&mut self, _event: &RegionEvent<T>) {}
    fn on_step(&mut self, _kind: StepKind, _evaluations: u64, _population: &Population<G, T>) {}
}

impl<G, T> Observer<G, T> for () {}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult<G, T> {
    pub population: Population<G, T>,
    pub events: Vec<RegionEvent<T>>,
    pub evaluations: u64,
    pub region: Option<PreferenceRegion<T>>,
}

impl<G, T: Scalar> RunResult<G, T> {
    /// Rank-0 members of the final population.
    pub fn final_front(&self) -> Vec<&Individual<G, T>> {
        self.population.first_front()
    }

    pub fn final_front_objectives(&self) -> Vec<ObjectiveVector<T>> {
        self.final_front().iter().map(|m| m.objectives.clone()).collect()
    }
}

/// Mutable state of one optimization run.
pub struct Engine<'p, P, T>
where
    T: Scalar,
    P: Problem<T>,
{
    problem: &'p P,
    config: EvolutionConfig,
    rng: ChaCha8Rng,
    evaluations: u64,
    region: Option<PreferenceRegion<T>>,
}

impl<'p, P, T> Engine<'p, P, T>
where
    T: Scalar,
    P: Problem<T>,
{
    pub fn new(problem: &'p P, config: EvolutionConfig) -> Result<Self> {
        config.validate()?;
        let rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
        Ok(Self {
            problem,
            config,
            rng,
            evaluations: 0,
            region: None,
        })
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn region(&self) -> Option<&PreferenceRegion<T>> {
        self.region.as_ref()
    }

    pub fn set_region(&mut self, region: Option<PreferenceRegion<T>>) {
        self.region = region;
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn evaluate(&mut self, genome: P::Genome) -> Individual<P::Genome, T> {
        self.evaluations += 1;
        let objectives = self.problem.evaluate(&genome);
        Individual::new(genome, objectives)
    }

    /// Random initial population, ranked.
    pub fn initial_population(&mut self) -> Population<P::Genome, T> {
        let mu = self.config.population_size;
        let members: Vec<_> = (0..mu)
            .map(|_| {
                let g = self.problem.random_genome(&mut self.rng);
                self.evaluate(g)
            })
            .collect();
        let mut pop = Population { members, capacity: mu };
        let fronts = fast_nondominated_sort(&pop.objectives());
        for (rank, front) in fronts.fronts.iter().enumerate() {
            for &i in front {
                pop.members[i].rank = rank;
            }
        }
        self.refresh_knee_distances(&mut pop);
        pop
    }

    fn refresh_knee_distances(&self, pop: &mut Population<P::Genome, T>) {
        for m in pop.members.iter_mut() {
            m.knee_distance = match &self.region {
                Some(r) => r.knee_distance(&m.objectives),
                None => T::infinity(),
            };
        }
    }

    fn tournament<'a>(&mut self, pop: &'a Population<P::Genome, T>) -> &'a Individual<P::Genome, T> {
        let a = pop.members.choose(&mut self.rng).expect("non-empty population");
        let b = pop.members.choose(&mut self.rng).expect("non-empty population");
        match a.rank.cmp(&b.rank) {
            Ordering::Less => a,
            Ordering::Greater => b,
            Ordering::Equal => {
                if self.rng.random_bool(0.5) {
                    a
                } else {
                    b
                }
            }
        }
    }

    /// (μ+μ) step: up to μ offspring (fewer when the budget runs out), then
    /// truncation of the merged set back to μ.
    pub fn generational_step(&mut self, pop: Population<P::Genome, T>) -> Population<P::Genome, T> {
        let mu = pop.capacity;
        let remaining = self.config.total_budget.saturating_sub(self.evaluations);
        let n_offspring = (mu as u64).min(remaining.max(1)) as usize;

        let mut offspring_genomes = Vec::with_capacity(n_offspring + 1);
        while offspring_genomes.len() < n_offspring {
            let a = self.tournament(&pop).genome.clone();
            let b = self.tournament(&pop).genome.clone();
            let (c1, c2) = self.problem.vary(&a, &b, &mut self.rng);
            offspring_genomes.push(c1);
            offspring_genomes.push(c2);
        }
        offspring_genomes.truncate(n_offspring);

        let mut merged = pop.members;
        for g in offspring_genomes {
            let child = self.evaluate(g);
            merged.push(child);
        }
        let fronts = {
            let objs: Vec<&ObjectiveVector<T>> = merged.iter().map(|m| &m.objectives).collect();
            fast_nondominated_sort(&objs)
        };
        let criterion = match self.config.variant {
            Variant::Di1 => SecondCriterion::Crowding,
            Variant::Di2 => SecondCriterion::Diversity,
        };
        let members = truncate(
            merged,
            &fronts,
            mu,
            criterion,
            self.region.as_ref(),
            self.config.region_pressure,
        );
        Population { members, capacity: mu }
    }

    /// (μ+1) step on a mutually non-dominated population.
    pub fn steady_state_step(&mut self, pop: Population<P::Genome, T>) -> Population<P::Genome, T> {
        let mu = pop.capacity;
        let (a, b) = {
            let n = pop.members.len();
            let i = self.rng.random_range(0..n);
            let mut j = self.rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            (&pop.members[i].genome, &pop.members[j].genome)
        };
        let (child, _) = self.problem.crossover(a, b, &mut self.rng);
        let child = self.problem.mutate(&child, &mut self.rng);
        let child = self.evaluate(child);

        let mut members = pop.members;
        let fronts = steady_state_fronts(&members, &child.objectives);
        members.push(child);
        let members = truncate(
            members,
            &fronts,
            mu,
            SecondCriterion::Diversity,
            self.region.as_ref(),
            self.config.region_pressure,
        );
        Population { members, capacity: mu }
    }

    /// Builds a region from the first front and records it.
    pub fn build_region(&mut self, pop: &mut Population<P::Genome, T>) -> RegionEvent<T> {
        let front: Vec<ObjectiveVector<T>> =
            pop.first_front().iter().map(|m| m.objectives.clone()).collect();
        let built = build_region(&front, self.config.epsilon_fraction);
        let event = RegionEvent {
            evaluations: self.evaluations,
            knee: built.region.knee.clone(),
            upper_bound: built.region.upper_bound.clone(),
            shape: built.analysis.verdict.shape,
            num_convex: built.analysis.verdict.num_convex,
            num_concave: built.analysis.verdict.num_concave,
        };
        self.region = Some(built.region);
        self.refresh_knee_distances(pop);
        event
    }

    /// Runs until the evaluation budget is spent.
    pub fn run<O: Observer<P::Genome, T>>(mut self, observer: &mut O) -> RunResult<P::Genome, T> {
        let mut pop = self.initial_population();
        let schedule = self.config.region_schedule();
        let mut threshold = self.config.preference_enabled.then_some(schedule.first);
        let mut events = Vec::new();

        while self.evaluations < self.config.total_budget {
            if let Some(t) = threshold {
                if self.evaluations >= t {
                    let event = self.build_region(&mut pop);
                    observer.on_region(&event);
                    events.push(event);
                    threshold = schedule.next(t);
                }
            }
            let kind = if pop.is_mutually_nondominated() {
                StepKind::SteadyState
            } else {
                StepKind::Generational
            };
            pop = match kind {
                StepKind::SteadyState => self.steady_state_step(pop),
                StepKind::Generational => self.generational_step(pop),
            };
            observer.on_step(kind, self.evaluations, &pop);
        }

        RunResult {
            population: pop,
            events,
            evaluations: self.evaluations,
            region: self.region,
        }
    }
}

/// Runs one optimization with the given configuration.
pub fn run<P, T, O>(problem: &P, config: &EvolutionConfig, observer: &mut O) -> Result<RunResult<P::Genome, T>>
where
    T: Scalar,
    P: Problem<T>,
    O: Observer<P::Genome, T>,
{
    Ok(Engine::new(problem, config.clone())?.run(observer))
}

/// Fronts of `parents + [offspring]` when the parents are mutually
/// non-dominated; the offspring has index `parents.len()`.
pub fn steady_state_fronts<G, T: Scalar>(
    parents: &[Individual<G, T>],
    offspring: &ObjectiveVector<T>,
) -> RankedFronts {
    let n = parents.len();
    if parents.iter().any(|p| dominates(&p.objectives, offspring)) {
        return RankedFronts {
            fronts: vec![(0..n).collect(), vec![n]],
        };
    }
    let (dominated, mut first): (Vec<usize>, Vec<usize>) =
        (0..n).partition(|&i| dominates(offspring, &parents[i].objectives));
    first.push(n);
    let mut fronts = vec![first];
    if !dominated.is_empty() {
        fronts.push(dominated);
    }
    RankedFronts { fronts }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondCriterion {
    Crowding,
    Diversity,
}

/// Scores a front with the second criterion (higher is better).
pub fn second_criterion_scores<T: Scalar>(points: &[&ObjectiveVector<T>], criterion: SecondCriterion) -> Vec<T> {
    match criterion {
        SecondCriterion::Crowding => crowding_distance(points),
        SecondCriterion::Diversity => diversity_contribution(points),
    }
}

/// Keeps `keep` members: whole fronts first, then the best of the last
/// partially admitted front ordered by second criterion (descending),
/// knee distance (ascending) and input position.
pub fn truncate<G, T: Scalar>(
    members: Vec<Individual<G, T>>,
    fronts: &RankedFronts,
    keep: usize,
    criterion: SecondCriterion,
    region: Option<&PreferenceRegion<T>>,
    pressure: RegionPressure,
) -> Vec<Individual<G, T>> {
    let mut kept_flags = vec![false; members.len()];
    let mut ranks = vec![0usize; members.len()];
    let mut scores = vec![T::nan(); members.len()];
    let mut admitted = 0;

    for (rank, front) in fronts.fronts.iter().enumerate() {
        if admitted >= keep {
            break;
        }
        for &i in front {
            ranks[i] = rank;
        }
        if admitted + front.len() <= keep {
            for &i in front {
                kept_flags[i] = true;
            }
            admitted += front.len();
            continue;
        }
        let slots = keep - admitted;
        for &i in &rank_last_front(&members, front, slots, criterion, region, pressure, &mut scores) {
            kept_flags[i] = true;
        }
        admitted = keep;
    }

    members
        .into_iter()
        .enumerate()
        .filter(|(i, _)| kept_flags[*i])
        .map(|(i, mut m)| {
            m.rank = ranks[i];
            m.secondary_score = scores[i];
            m.knee_distance = match region {
                Some(r) => r.knee_distance(&m.objectives),
                None => T::infinity(),
            };
            m
        })
        .collect()
}

/// The `slots` best members of a front, recording second-criterion scores.
fn rank_last_front<G, T: Scalar>(
    members: &[Individual<G, T>],
    front: &[usize],
    slots: usize,
    criterion: SecondCriterion,
    region: Option<&PreferenceRegion<T>>,
    pressure: RegionPressure,
    scores: &mut [T],
) -> Vec<usize> {
    let restrict = matches!((region, pressure), (Some(_), RegionPressure::InRegion));
    let scored: Vec<usize> = match region {
        Some(r) if restrict => front
            .iter()
            .copied()
            .filter(|&i| r.contains(&members[i].objectives))
            .collect(),
        _ => front.to_vec(),
    };
    let points: Vec<&ObjectiveVector<T>> = scored.iter().map(|&i| &members[i].objectives).collect();
    let values = second_criterion_scores(&points, criterion);
    for &i in front {
        scores[i] = T::neg_infinity();
    }
    for (&i, v) in scored.iter().zip(values) {
        scores[i] = v;
    }
    let knee: Vec<T> = front
        .iter()
        .map(|&i| match region {
            Some(r) => r.knee_distance(&members[i].objectives),
            None => T::infinity(),
        })
        .collect();

    // Best first: higher score, then nearer the knee, then earlier.
    let better_first = |&a: &usize, &b: &usize| {
        let (ia, ib) = (front[a], front[b]);
        scores[ib]
            .partial_cmp(&scores[ia])
            .unwrap_or(Ordering::Equal)
            .then_with(|| knee[a].partial_cmp(&knee[b]).unwrap_or(Ordering::Equal))
            .then(ia.cmp(&ib))
    };
    let mut order: Vec<usize> = (0..front.len()).collect();
    if slots + 1 == front.len() {
        // Single removal: drop the worst without sorting.
        let worst = order.iter().copied().max_by(better_first).expect("non-empty front");
        order.remove(worst);
    } else {
        order.sort_by(better_first);
        order.truncate(slots);
    }
    order.into_iter().map(|k| front[k]).collect()
}
