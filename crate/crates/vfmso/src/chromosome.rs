//! Three-vector chromosome: group structure, start times and team assignment.

use rand::seq::index::sample;
use rand::Rng;

use crate::grouping::random_group_structure;
use crate::instance::{ExecutionWindow, VfmsoInstance};

/// One group operation of a car.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    /// Sorted component indices within the car.
    pub members: Vec<usize>,
    /// Requested start time.
    pub start: f64,
    /// Global team slot.
    pub team: usize,
}

/// Per car, the groups ordered by their first member.
#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    pub cars: Vec<Vec<Group>>,
}

impl Chromosome {
    pub fn num_groups(&self) -> usize {
        self.cars.iter().map(Vec::len).sum()
    }

    pub fn groups(&self) -> impl Iterator<Item = (usize, usize, &Group)> {
        self.cars
            .iter()
            .enumerate()
            .flat_map(|(i, gs)| gs.iter().enumerate().map(move |(g, grp)| (i, g, grp)))
    }

    /// First violated invariant, if any.
    pub fn violation(&self, instance: &VfmsoInstance) -> Option<String> {
        if self.cars.len() != instance.num_cars() {
            return Some(format!("{} cars for {} in instance", self.cars.len(), instance.num_cars()));
        }
        for (i, groups) in self.cars.iter().enumerate() {
            let n = instance.cars()[i].components.len();
            let mut seen = vec![false; n];
            for (g, grp) in groups.iter().enumerate() {
                if grp.members.is_empty() {
                    return Some(format!("car {i} group {g} is empty"));
                }
                for &j in &grp.members {
                    if j >= n || seen[j] {
                        return Some(format!("car {i} component {j} is missing or repeated"));
                    }
                    seen[j] = true;
                }
                let Some(window) = instance.group_window(i, &grp.members) else {
                    return Some(format!("car {i} group {g} has no common window"));
                };
                if !window.contains(grp.start) {
                    return Some(format!("car {i} group {g} starts outside its window"));
                }
                if grp.team >= instance.num_slots() {
                    return Some(format!("car {i} group {g} uses unknown team {}", grp.team));
                }
                let k = instance.slot_workshop(grp.team);
                if instance.group_capable(i, &grp.members) & (1 << k) == 0 {
                    return Some(format!("car {i} group {g} sent to incapable workshop {k}"));
                }
            }
            if seen.iter().any(|s| !s) {
                return Some(format!("car {i} has unassigned components"));
            }
        }
        None
    }

    pub fn is_valid(&self, instance: &VfmsoInstance) -> bool {
        self.violation(instance).is_none()
    }
}

/// Uniform draw from a window (its start when the window is a single point).
pub fn random_start<R: Rng + ?Sized>(window: ExecutionWindow, rng: &mut R) -> f64 {
    if window.start < window.end {
        rng.random_range(window.start..=window.end)
    } else {
        window.start
    }
}

/// Uniform team among the slots of workshops able to serve `members`.
pub fn random_team<R: Rng + ?Sized>(instance: &VfmsoInstance, car: usize, members: &[usize], rng: &mut R) -> usize {
    let mask = instance.group_capable(car, members);
    let n = instance.slot_count(mask);
    instance
        .nth_slot(mask, rng.random_range(0..n))
        .expect("groups always have a capable workshop")
}

fn fresh_group<R: Rng + ?Sized>(instance: &VfmsoInstance, car: usize, members: Vec<usize>, rng: &mut R) -> Group {
    let window = instance.group_window(car, &members).expect("feasible group");
    let start = random_start(window, rng);
    let team = random_team(instance, car, &members, rng);
    Group { members, start, team }
}

fn random_car<R: Rng + ?Sized>(instance: &VfmsoInstance, car: usize, rng: &mut R) -> Vec<Group> {
    random_group_structure(instance, car, rng)
        .into_iter()
        .map(|members| fresh_group(instance, car, members, rng))
        .collect()
}

pub fn init_chromosome<R: Rng + ?Sized>(instance: &VfmsoInstance, rng: &mut R) -> Chromosome {
    Chromosome { cars: (0..instance.num_cars()).map(|i| random_car(instance, i, rng)).collect() }
}

/// Redraws any start time or team that violates the invariants of `car`.
fn repair_car<R: Rng + ?Sized>(instance: &VfmsoInstance, car: usize, groups: &mut [Group], rng: &mut R) {
    for grp in groups.iter_mut() {
        let window = instance.group_window(car, &grp.members).expect("feasible group");
        if !window.contains(grp.start) {
            grp.start = random_start(window, rng);
        }
        let mask = instance.group_capable(car, &grp.members);
        if grp.team >= instance.num_slots() || mask & (1 << instance.slot_workshop(grp.team)) == 0 {
            grp.team = random_team(instance, car, &grp.members, rng);
        }
    }
}

/// Team of the group in `groups` that contains component `j`.
fn team_of(groups: &[Group], j: usize) -> usize {
    groups
        .iter()
        .find(|g| g.members.contains(&j))
        .map(|g| g.team)
        .expect("every component belongs to a group")
}

/// Sorted distinct cut positions on car boundaries (values in `1..n_cars`).
fn car_cuts<R: Rng + ?Sized>(n_cars: usize, rng: &mut R) -> Vec<usize> {
    if n_cars < 2 {
        return Vec::new();
    }
    let count = (n_cars / 10).max(1).min(n_cars - 1);
    let mut cuts: Vec<usize> = sample(rng, n_cars - 1, count).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    cuts
}

/// For each car, whether it is taken from the second parent.
fn segment_mask(n_cars: usize, cuts: &[usize]) -> Vec<bool> {
    let mut swap = false;
    let mut next = cuts.iter().peekable();
    (0..n_cars)
        .map(|i| {
            while next.peek().is_some_and(|&&c| c == i) {
                swap = !swap;
                next.next();
            }
            swap
        })
        .collect()
}

/// Multi-point crossover with cuts on car boundaries.
///
/// Group structure and start times travel together; team genes use an
/// independent set of cuts and are matched through each group's first
/// member. A repair pass then redraws anything left invalid.
pub fn crossover<R: Rng + ?Sized>(
    instance: &VfmsoInstance,
    a: &Chromosome,
    b: &Chromosome,
    rng: &mut R,
) -> (Chromosome, Chromosome) {
    let n = instance.num_cars();
    let structure = segment_mask(n, &car_cuts(n, rng));
    let teams = segment_mask(n, &car_cuts(n, rng));

    let mut c1 = Vec::with_capacity(n);
    let mut c2 = Vec::with_capacity(n);
    for i in 0..n {
        let (s1, s2) = if structure[i] { (&b.cars[i], &a.cars[i]) } else { (&a.cars[i], &b.cars[i]) };
        let (t1, t2) = if teams[i] { (&b.cars[i], &a.cars[i]) } else { (&a.cars[i], &b.cars[i]) };
        for (source, team_source, out) in [(s1, t1, &mut c1), (s2, t2, &mut c2)] {
            let mut groups: Vec<Group> = source
                .iter()
                .map(|g| Group {
                    members: g.members.clone(),
                    start: g.start,
                    team: team_of(team_source, g.members[0]),
                })
                .collect();
            repair_car(instance, i, &mut groups, rng);
            out.push(groups);
        }
    }
    (Chromosome { cars: c1 }, Chromosome { cars: c2 })
}

/// Per-gene mutation probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutationRates {
    /// Probability of resampling a car's group structure.
    pub structure: f64,
    /// Probability of redrawing a group's start time.
    pub start: f64,
    /// Probability of redrawing a group's team.
    pub team: f64,
}

impl MutationRates {
    /// `1 / n_cars` for structures, `1 / n_groups` for starts and teams.
    pub fn nominal(c: &Chromosome) -> Self {
        let per_group = 1.0 / c.num_groups() as f64;
        MutationRates { structure: 1.0 / c.cars.len() as f64, start: per_group, team: per_group }
    }
}

/// Mutation at the nominal rates.
pub fn mutate<R: Rng + ?Sized>(instance: &VfmsoInstance, c: &Chromosome, rng: &mut R) -> Chromosome {
    mutate_with(instance, c, MutationRates::nominal(c), rng)
}

/// Group-structure mutation per car first, then start and team mutation per group.
///
/// A resampled car keeps, for each new group, the start and team of the old
/// group holding its first member; invalid values are redrawn.
pub fn mutate_with<R: Rng + ?Sized>(
    instance: &VfmsoInstance,
    c: &Chromosome,
    rates: MutationRates,
    rng: &mut R,
) -> Chromosome {
    let mut out = c.clone();
    for (i, groups) in out.cars.iter_mut().enumerate() {
        if rng.random::<f64>() < rates.structure {
            let old = std::mem::take(groups);
            *groups = random_group_structure(instance, i, rng)
                .into_iter()
                .map(|members| {
                    let source = old.iter().find(|g| g.members.contains(&members[0])).unwrap();
                    Group { start: source.start, team: source.team, members }
                })
                .collect();
            repair_car(instance, i, groups, rng);
        }
    }

    for (i, groups) in out.cars.iter_mut().enumerate() {
        for grp in groups.iter_mut() {
            if rng.random::<f64>() < rates.start {
                let window = instance.group_window(i, &grp.members).expect("feasible group");
                grp.start = random_start(window, rng);
            }
            if rng.random::<f64>() < rates.team {
                grp.team = random_team(instance, i, &grp.members, rng);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::generate_instance;
    use crate::instance::fixtures::single_car;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v1() -> VfmsoInstance {
        generate_instance(20, 3, &mut ChaCha8Rng::seed_from_u64(1)).unwrap()
    }

    #[test]
    fn single_component_gets_one_group_in_window() {
        let inst = single_car(&[(100.0, 10.0)], &[1]);
        let c = init_chromosome(&inst, &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(c.cars[0].len(), 1);
        assert!((80.0..=120.0).contains(&c.cars[0][0].start));
    }

    #[test]
    fn team_ids_cover_all_slots() {
        let inst = single_car(&[(100.0, 10.0)], &[3, 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut seen = [false; 7];
        for _ in 0..500 {
            seen[init_chromosome(&inst, &mut rng).cars[0][0].team] = true;
        }
        assert!(seen.iter().all(|s| *s));
    }

    #[test]
    fn init_is_valid() {
        let inst = v1();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let c = init_chromosome(&inst, &mut rng);
            assert_eq!(c.violation(&inst), None);
        }
    }

    #[test]
    fn cuts_are_on_car_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(car_cuts(1, &mut rng).is_empty());
        assert_eq!(car_cuts(2, &mut rng), vec![1]);
        for _ in 0..100 {
            let cuts = car_cuts(30, &mut rng);
            assert_eq!(cuts.len(), 3);
            assert!(cuts.windows(2).all(|w| w[0] < w[1]));
            assert!(cuts.iter().all(|&c| (1..30).contains(&c)));
        }
        assert_eq!(segment_mask(5, &[2, 4]), vec![false, false, true, true, false]);
    }

    #[test]
    fn self_crossover_is_identity() {
        let inst = v1();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = init_chromosome(&inst, &mut rng);
            let (c1, c2) = crossover(&inst, &a, &a, &mut rng);
            assert_eq!(c1, a);
            assert_eq!(c2, a);
        }
    }

    #[test]
    fn crossover_children_are_valid_and_inherit_genes() {
        let inst = v1();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let a = init_chromosome(&inst, &mut rng);
            let b = init_chromosome(&inst, &mut rng);
            let (c1, c2) = crossover(&inst, &a, &b, &mut rng);
            for child in [&c1, &c2] {
                assert_eq!(child.violation(&inst), None);
                for (i, groups) in child.cars.iter().enumerate() {
                    let members: Vec<&Vec<usize>> = groups.iter().map(|g| &g.members).collect();
                    let from_a = members == a.cars[i].iter().map(|g| &g.members).collect::<Vec<_>>();
                    let from_b = members == b.cars[i].iter().map(|g| &g.members).collect::<Vec<_>>();
                    assert!(from_a || from_b);
                    let parent = if from_a { &a.cars[i] } else { &b.cars[i] };
                    for (g, grp) in groups.iter().enumerate() {
                        assert_eq!(grp.start, parent[g].start);
                        let first = grp.members[0];
                        let inherited = grp.team == team_of(&a.cars[i], first) || grp.team == team_of(&b.cars[i], first);
                        let mask = inst.group_capable(i, &grp.members);
                        // a team not inherited must be a repair redraw, i.e. the
                        // inherited candidate was invalid
                        if !inherited {
                            let cand_a = team_of(&a.cars[i], first);
                            let cand_b = team_of(&b.cars[i], first);
                            let valid = |t: usize| mask & (1 << inst.slot_workshop(t)) != 0;
                            assert!(!valid(cand_a) || !valid(cand_b));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mutation_keeps_validity() {
        let inst = v1();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut c = init_chromosome(&inst, &mut rng);
        for _ in 0..2000 {
            c = mutate(&inst, &c, &mut rng);
            assert_eq!(c.violation(&inst), None);
        }
    }

    #[test]
    fn mutation_rates_match_nominal() {
        // disjoint windows: structure resampling always reproduces singletons,
        // so every observed change comes from a start or team draw
        let windows: Vec<(f64, f64)> = (0..8).map(|j| (100.0 * (j + 1) as f64, 5.0)).collect();
        let inst = single_car(&windows, &[2, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let base = init_chromosome(&inst, &mut rng);
        let trials = 100_000;
        let (mut starts, mut teams) = (0usize, 0usize);
        for _ in 0..trials {
            let m = mutate(&inst, &base, &mut rng);
            for (x, y) in m.cars[0].iter().zip(&base.cars[0]) {
                starts += usize::from(x.start != y.start);
                teams += usize::from(x.team != y.team);
            }
        }
        let genes = (trials * 8) as f64;
        let check = |observed: usize, p: f64| {
            let sd = (genes * p * (1.0 - p)).sqrt();
            assert!((observed as f64 - genes * p).abs() < 3.0 * sd, "{observed} vs {}", genes * p);
        };
        check(starts, 1.0 / 8.0);
        // a redraw lands on the same team one time in four
        check(teams, 1.0 / 8.0 * 0.75);
    }

    #[test]
    fn mutation_with_no_hits_is_identity() {
        let inst = v1();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let base = init_chromosome(&inst, &mut rng);
        let none = MutationRates { structure: 0.0, start: 0.0, team: 0.0 };
        assert_eq!(mutate_with(&inst, &base, none, &mut rng), base);
    }

    #[test]
    fn forced_structure_mutation_keeps_starts_in_windows() {
        let inst = v1();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let forced = MutationRates { structure: 1.0, start: 0.0, team: 0.0 };
        for _ in 0..200 {
            let base = init_chromosome(&inst, &mut rng);
            let m = mutate_with(&inst, &base, forced, &mut rng);
            assert_eq!(m.violation(&inst), None);
        }
    }
}
