//! Which components of one car can be maintained together.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::instance::{ExecutionWindow, VfmsoInstance};

/// Feasibility structure for grouping the components of one car.
#[derive(Debug, Clone)]
pub struct Groupability<'a> {
    instance: &'a VfmsoInstance,
    car: usize,
}

pub fn component_groupability(instance: &VfmsoInstance, car: usize) -> Groupability<'_> {
    Groupability { instance, car }
}

impl Groupability<'_> {
    pub fn num_components(&self) -> usize {
        self.instance.cars()[self.car].components.len()
    }

    /// Common window of a non-empty subset, if its members may form a group.
    pub fn group_window(&self, members: &[usize]) -> Option<ExecutionWindow> {
        if self.instance.group_capable(self.car, members) == 0 {
            return None;
        }
        self.instance.group_window(self.car, members)
    }

    pub fn is_feasible(&self, members: &[usize]) -> bool {
        !members.is_empty() && self.group_window(members).is_some()
    }

    /// All feasible unordered pairs `(a, b)` with `a < b`.
    pub fn feasible_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.num_components();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.is_feasible(&[a, b]) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Greedy random partition of a car's components into feasible groups.
///
/// Components are shuffled; each one joins the currently open group when the
/// joint window stays non-empty and a common capable workshop remains,
/// otherwise it opens a new group. Groups are returned with sorted members,
/// ordered by their first member.
pub fn random_group_structure<R: Rng + ?Sized>(instance: &VfmsoInstance, car: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let n = instance.cars()[car].components.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut window: Option<ExecutionWindow> = None;
    let mut mask = 0u64;
    for j in order {
        let w = instance.window(car, j);
        let m = instance.capable_mask(car, j);
        let joined = match (groups.last_mut(), window) {
            (Some(group), Some(open)) => match open.intersect(&w) {
                Some(common) if mask & m != 0 => {
                    group.push(j);
                    window = Some(common);
                    mask &= m;
                    true
                }
                _ => false,
            },
            _ => false,
        };
        if !joined {
            groups.push(vec![j]);
            window = Some(w);
            mask = m;
        }
    }
    canonicalize(&mut groups);
    groups
}

pub(crate) fn canonicalize(groups: &mut [Vec<usize>]) {
    for g in groups.iter_mut() {
        g.sort_unstable();
    }
    groups.sort_unstable_by_key(|g| g[0]);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::single_car;
    use crate::instance::{CarSpec, WorkshopSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn disjoint_windows_are_not_groupable() {
        let inst = single_car(&[(100.0, 1.0), (200.0, 1.0)], &[1]);
        let g = component_groupability(&inst, 0);
        assert!(!g.is_feasible(&[0, 1]));
        assert!(g.feasible_pairs().is_empty());
        for seed in 0..20 {
            let s = random_group_structure(&inst, 0, &mut ChaCha8Rng::seed_from_u64(seed));
            assert_eq!(s, vec![vec![0], vec![1]]);
        }
    }

    #[test]
    fn nested_windows_intersect_to_inner() {
        let inst = single_car(&[(100.0, 10.0), (100.0, 2.0)], &[1]);
        let g = component_groupability(&inst, 0);
        let w = g.group_window(&[0, 1]).unwrap();
        assert_eq!((w.start, w.end), (96.0, 104.0));
    }

    #[test]
    fn no_common_workshop_blocks_grouping() {
        use crate::instance::fixtures::component;
        let workshops = vec![
            WorkshopSpec { id: 0, teams: 1, capable_kinds: vec![0] },
            WorkshopSpec { id: 1, teams: 1, capable_kinds: vec![0] },
        ];
        let car = CarSpec {
            id: 0,
            setup_time: vec![1.0, 1.0],
            setup_cost: vec![1.0, 1.0],
            components: vec![
                component(0, 0, 100.0, 10.0, &[(0, 1.0, 1.0)]),
                component(0, 1, 100.0, 10.0, &[(1, 1.0, 1.0)]),
            ],
        };
        let inst = VfmsoInstance::new(workshops, vec![car]).unwrap();
        assert!(!component_groupability(&inst, 0).is_feasible(&[0, 1]));
    }

    #[test]
    fn pairs_match_brute_force_overlap() {
        let windows: Vec<(f64, f64)> = vec![
            (100.0, 10.0),
            (130.0, 5.0),
            (90.0, 3.0),
            (200.0, 20.0),
            (160.0, 10.0),
            (115.0, 1.0),
            (240.0, 2.0),
            (100.0, 30.0),
        ];
        let inst = single_car(&windows, &[1]);
        let g = component_groupability(&inst, 0);
        let mut expected = Vec::new();
        for a in 0..8 {
            for b in a + 1..8 {
                let (ma, sa) = windows[a];
                let (mb, sb) = windows[b];
                if (ma - 2.0 * sa).max(mb - 2.0 * sb) <= (ma + 2.0 * sa).min(mb + 2.0 * sb) {
                    expected.push((a, b));
                }
            }
        }
        assert_eq!(g.feasible_pairs(), expected);

        // every subset: feasible iff all pairs overlap (intervals are Helly)
        for subset in 1u32..256 {
            let members: Vec<usize> = (0..8).filter(|j| subset & (1 << j) != 0).collect();
            let pairwise = members
                .iter()
                .all(|&a| members.iter().all(|&b| a >= b || expected.contains(&(b, a)) || expected.contains(&(a, b))));
            assert_eq!(g.is_feasible(&members), pairwise, "{members:?}");
        }
    }

    #[test]
    fn identical_windows_sometimes_form_one_group() {
        let inst = single_car(&[(100.0, 10.0); 4], &[1]);
        let singles = (0..1000)
            .filter(|&seed| random_group_structure(&inst, 0, &mut ChaCha8Rng::seed_from_u64(seed)).len() == 1)
            .count();
        assert!(singles > 0);
    }

    #[test]
    fn random_structures_are_feasible_partitions() {
        let windows: Vec<(f64, f64)> = (0..8).map(|j| (100.0 + 7.0 * j as f64, 4.0 + j as f64)).collect();
        let inst = single_car(&windows, &[1, 2]);
        let g = component_groupability(&inst, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..500 {
            let s = random_group_structure(&inst, 0, &mut rng);
            let mut all: Vec<usize> = s.iter().flatten().copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..8).collect::<Vec<_>>());
            assert!(s.iter().all(|m| g.is_feasible(m)));
        }
    }
}
