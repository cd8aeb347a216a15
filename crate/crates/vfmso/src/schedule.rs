//! Genotype to phenotype mapping with first-come-first-served conflict delays.

use crate::chromosome::Chromosome;
use crate::instance::VfmsoInstance;

#[derive(Debug, Clone, PartialEq)]
pub struct Operation {
    pub car: usize,
    /// Position of the group within the car.
    pub group: usize,
    pub workshop: usize,
    pub team: usize,
    pub requested_start: f64,
    pub start: f64,
    /// Set-up time plus processing time of every member.
    pub duration: f64,
    pub waiting: f64,
}

impl Operation {
    pub fn end(&self) -> f64 {
        self.start + self.duration
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    /// Operations in dispatch order.
    pub operations: Vec<Operation>,
    /// Effective maintenance date of every component, `[car][component]`.
    pub maintenance_dates: Vec<Vec<f64>>,
}

/// Dispatches group operations in order of requested start (ties by car, then
/// group); each starts once its team and its car are both free.
pub fn decode(chromosome: &Chromosome, instance: &VfmsoInstance) -> Schedule {
    let mut order: Vec<(usize, usize)> = chromosome
        .cars
        .iter()
        .enumerate()
        .flat_map(|(i, gs)| (0..gs.len()).map(move |g| (i, g)))
        .collect();
    order.sort_by(|&(ia, ga), &(ib, gb)| {
        chromosome.cars[ia][ga]
            .start
            .total_cmp(&chromosome.cars[ib][gb].start)
            .then(ia.cmp(&ib))
            .then(ga.cmp(&gb))
    });

    let mut team_free = vec![f64::NEG_INFINITY; instance.num_slots()];
    let mut car_free = vec![f64::NEG_INFINITY; instance.num_cars()];
    let mut dates: Vec<Vec<f64>> = instance.cars().iter().map(|c| vec![f64::NAN; c.components.len()]).collect();
    let mut operations = Vec::with_capacity(order.len());

    for (i, g) in order {
        let grp = &chromosome.cars[i][g];
        let k = instance.slot_workshop(grp.team);
        let duration = instance.cars()[i].setup_time[k]
            + grp.members.iter().map(|&j| instance.processing_time(i, j, k)).sum::<f64>();
        let start = grp.start.max(team_free[grp.team]).max(car_free[i]);
        team_free[grp.team] = start + duration;
        car_free[i] = start + duration;
        for &j in &grp.members {
            dates[i][j] = start;
        }
        operations.push(Operation {
            car: i,
            group: g,
            workshop: k,
            team: grp.team,
            requested_start: grp.start,
            start,
            duration,
            waiting: start - grp.start,
        });
    }

    Schedule { operations, maintenance_dates: dates }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromosome::{init_chromosome, Group};
    use crate::generator::generate_instance;
    use crate::instance::fixtures::single_car;
    use crate::instance::{CarSpec, VfmsoInstance, WorkshopSpec};
    use crate::instance::fixtures::component;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Two cars with one component each, one workshop with one team.
    fn two_cars(p: [f64; 2]) -> VfmsoInstance {
        let workshops = vec![WorkshopSpec { id: 0, teams: 1, capable_kinds: vec![0] }];
        let cars = (0..2)
            .map(|i| CarSpec {
                id: i,
                setup_time: vec![0.0],
                setup_cost: vec![0.0],
                components: vec![component(i, 0, 100.0, 10.0, &[(0, p[i], 1.0)])],
            })
            .collect();
        VfmsoInstance::new(workshops, cars).unwrap()
    }

    fn op(start: f64) -> Vec<Group> {
        vec![Group { members: vec![0], start, team: 0 }]
    }

    #[test]
    fn disjoint_requests_do_not_wait() {
        let inst = two_cars([5.0, 3.0]);
        let s = decode(&Chromosome { cars: vec![op(90.0), op(100.0)] }, &inst);
        assert!(s.operations.iter().all(|o| o.waiting == 0.0));
        assert_eq!(s.maintenance_dates, vec![vec![90.0], vec![100.0]]);
    }

    #[test]
    fn identical_requests_queue_behind_first() {
        let inst = two_cars([5.0, 3.0]);
        let s = decode(&Chromosome { cars: vec![op(100.0), op(100.0)] }, &inst);
        assert_eq!(s.operations[0].car, 0);
        assert_eq!(s.operations[1].start, 105.0);
        assert_eq!(s.operations[1].waiting, 5.0);
        assert_eq!(s.maintenance_dates[1][0], 105.0);
    }

    #[test]
    fn same_car_operations_do_not_overlap_across_workshops() {
        let inst = single_car(&[(100.0, 10.0), (100.0, 10.0)], &[1, 1]);
        let c = Chromosome {
            cars: vec![vec![
                Group { members: vec![0], start: 100.0, team: 0 },
                Group { members: vec![1], start: 101.0, team: 1 },
            ]],
        };
        let s = decode(&c, &inst);
        // duration = set-up 1 + processing 2
        assert_eq!(s.operations[1].start, 103.0);
        assert_eq!(s.operations[1].waiting, 2.0);
    }

    fn overlaps(a: &Operation, b: &Operation) -> bool {
        a.start < b.end() && b.start < a.end()
    }

    #[test]
    fn random_schedules_have_no_overlaps() {
        let inst = generate_instance(20, 3, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let c = init_chromosome(&inst, &mut rng);
            let s = decode(&c, &inst);
            assert_eq!(s.operations.len(), c.num_groups());
            for (x, a) in s.operations.iter().enumerate() {
                assert!(a.start >= a.requested_start);
                for b in &s.operations[x + 1..] {
                    if a.team == b.team || a.car == b.car {
                        assert!(!overlaps(a, b), "{a:?} {b:?}");
                    }
                }
            }
            for (i, groups) in c.cars.iter().enumerate() {
                for grp in groups {
                    for &j in &grp.members {
                        assert!(s.maintenance_dates[i][j] >= grp.start);
                    }
                }
            }
            assert!(s.maintenance_dates.iter().flatten().all(|d| d.is_finite()));
        }
    }
}
