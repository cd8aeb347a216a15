//! Monte Carlo evaluation of workload, cost and expected failures.

use crate::chromosome::Chromosome;
use crate::error::{Result, VfmsoError};
use crate::instance::VfmsoInstance;
use crate::sampling::DueDateSamples;
use crate::schedule::{decode, Schedule};

/// Penalty for maintaining at `date` a component due at `due`, last repaired at
/// `previous`: the full `cost + setup` when maintained as new, falling linearly
/// to zero at the due date.
pub fn penalty_cost(date: f64, due: f64, cost: f64, setup: f64, previous: f64) -> Result<f64> {
    if due <= previous {
        return Err(VfmsoError::DegenerateLife { due, previous });
    }
    let full = cost + setup;
    Ok(if date <= previous {
        full
    } else if date < due {
        full * (due - date) / (due - previous)
    } else {
        0.0
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationResult {
    /// f1: sum of operation durations and waiting times.
    pub total_workload: f64,
    /// f2: set-up, maintenance and mean penalty costs.
    pub total_cost: f64,
    /// f3: sum over components of the sampled failure probability.
    pub expected_failures: f64,
    pub workload_per_workshop: Vec<f64>,
    pub cost_per_car: Vec<f64>,
}

impl EvaluationResult {
    pub fn objectives(&self) -> [f64; 3] {
        [self.total_workload, self.total_cost, self.expected_failures]
    }
}

pub fn evaluate(chromosome: &Chromosome, instance: &VfmsoInstance, samples: &DueDateSamples) -> EvaluationResult {
    evaluate_schedule(chromosome, &decode(chromosome, instance), instance, samples)
}

pub fn evaluate_schedule(
    chromosome: &Chromosome,
    schedule: &Schedule,
    instance: &VfmsoInstance,
    samples: &DueDateSamples,
) -> EvaluationResult {
    let mut workload = vec![0.0; instance.num_workshops()];
    let mut cost = vec![0.0; instance.num_cars()];
    let mut failures = 0.0;

    for op in &schedule.operations {
        let i = op.car;
        let k = op.workshop;
        workload[k] += op.duration + op.waiting;
        let setup = instance.cars()[i].setup_cost[k];
        cost[i] += setup;
        for &j in &chromosome.cars[i][op.group].members {
            let q = instance.maintenance_cost(i, j, k);
            let e = samples.expectation(instance.component_index(i, j), op.start);
            cost[i] += q + (q + setup) * e.penalty_fraction;
            failures += e.failure_rate;
        }
    }

    EvaluationResult {
        total_workload: workload.iter().sum(),
        total_cost: cost.iter().sum(),
        expected_failures: failures,
        workload_per_workshop: workload,
        cost_per_car: cost,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromosome::{init_chromosome, Group};
    use crate::generator::generate_instance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn penalty_anchors() {
        assert_eq!(penalty_cost(0.0, 100.0, 30.0, 10.0, 0.0).unwrap(), 40.0);
        assert_eq!(penalty_cost(100.0, 100.0, 30.0, 10.0, 0.0).unwrap(), 0.0);
        assert_eq!(penalty_cost(75.0, 100.0, 30.0, 10.0, 0.0).unwrap(), 10.0);
        assert_eq!(penalty_cost(-5.0, 100.0, 30.0, 10.0, 0.0).unwrap(), 40.0);
        assert_eq!(penalty_cost(150.0, 100.0, 30.0, 10.0, 0.0).unwrap(), 0.0);
        assert!(penalty_cost(5.0, 10.0, 1.0, 1.0, 10.0).is_err());
    }

    fn fixed_dates(c: &Chromosome, inst: &VfmsoInstance, at_end: bool) -> Chromosome {
        let mut out = c.clone();
        for (i, groups) in out.cars.iter_mut().enumerate() {
            // singleton groups, each on its own position in time far apart so that
            // nothing waits: use component windows directly
            *groups = (0..inst.cars()[i].components.len())
                .map(|j| {
                    let w = inst.window(i, j);
                    let team = c.cars[i].iter().find(|g| g.members.contains(&j)).unwrap().team;
                    let mask = inst.capable_mask(i, j);
                    let team = if mask & (1 << inst.slot_workshop(team)) != 0 {
                        team
                    } else {
                        inst.nth_slot(mask, 0).unwrap()
                    };
                    Group { members: vec![j], start: if at_end { w.end } else { w.start }, team }
                })
                .collect();
        }
        out
    }

    #[test]
    fn boundary_dates_order_failures_and_penalties() {
        let inst = generate_instance(3, 2, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let samples = DueDateSamples::generate(&inst, 1000, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let base = init_chromosome(&inst, &mut ChaCha8Rng::seed_from_u64(6));
        let early = fixed_dates(&base, &inst, false);
        let late = fixed_dates(&base, &inst, true);
        let e = evaluate(&early, &inst, &samples);
        let l = evaluate(&late, &inst, &samples);
        let n = inst.num_components() as f64;
        // waiting can only delay, so early dates may drift slightly inward
        assert!(e.expected_failures < 0.1 * n, "{}", e.expected_failures);
        assert!(l.expected_failures > 0.9 * n, "{}", l.expected_failures);
        assert!(e.total_cost > l.total_cost);
    }

    #[test]
    fn failures_are_monotone_in_delay() {
        let inst = generate_instance(2, 2, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let samples = DueDateSamples::generate(&inst, 1000, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        let g = inst.component_index(1, 3);
        let w = inst.window(1, 3);
        let mut last_fail = -1.0;
        let mut last_pen = f64::INFINITY;
        for step in 0..=50 {
            let t = w.start + w.width() * step as f64 / 50.0;
            let e = samples.expectation(g, t);
            assert!(e.failure_rate >= last_fail);
            assert!(e.penalty_fraction <= last_pen + 1e-15);
            last_fail = e.failure_rate;
            last_pen = e.penalty_fraction;
        }
    }

    #[test]
    fn evaluation_is_deterministic_and_bounded() {
        let inst = generate_instance(5, 2, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let samples = DueDateSamples::generate(&inst, 1000, &mut ChaCha8Rng::seed_from_u64(10)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let c = init_chromosome(&inst, &mut rng);
            let a = evaluate(&c, &inst, &samples);
            assert_eq!(a, evaluate(&c, &inst, &samples));
            assert!(a.total_workload > 0.0 && a.total_cost > 0.0);
            assert!(a.expected_failures >= 0.0 && a.expected_failures <= inst.num_components() as f64);
            assert!((a.workload_per_workshop.iter().sum::<f64>() - a.total_workload).abs() < 1e-9);
        }
    }
}
