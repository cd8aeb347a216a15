//! Fast non-dominated sorting.

use crate::objective::dominates;
use crate::scalar::Scalar;

/// Partition of a population into dominance fronts. Indices refer to the
/// sorted input; each front lists its members in ascending index order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RankedFronts {
    pub fronts: Vec<Vec<usize>>,
}

impl RankedFronts {
    pub fn len(&self) -> usize {
        self.fronts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fronts.is_empty()
    }

    /// Front index of every member.
    pub fn ranks(&self) -> Vec<usize> {
        let n = self.fronts.iter().map(Vec::len).sum();
        let mut ranks = vec![0; n];
        for (rank, front) in self.fronts.iter().enumerate() {
            for &i in front {
                ranks[i] = rank;
            }
        }
        ranks
    }
}

/// Deb's O(n² m) non-dominated sort.
pub fn fast_nondominated_sort<T, V>(points: &[V]) -> RankedFronts
where
    T: Scalar,
    V: AsRef<[T]>,
{
    let n = points.len();
    if n == 0 {
        return RankedFronts::default();
    }
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];

    for i in 0..n {
        let a = points[i].as_ref();
        for j in (i + 1)..n {
            let b = points[j].as_ref();
            if dominates(a, b) {
                dominates_list[i].push(j);
                dominated_by_count[j] += 1;
            } else if dominates(b, a) {
                dominates_list[j].push(i);
                dominated_by_count[i] += 1;
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates_list[i] {
                dominated_by_count[j] -= 1;
                if dominated_by_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    RankedFronts { fronts }
}

/// Indices of the non-dominated members, in input order.
pub fn nondominated_indices<T, V>(points: &[V]) -> Vec<usize>
where
    T: Scalar,
    V: AsRef<[T]>,
{
    (0..points.len())
        .filter(|&i| {
            !points
                .iter()
                .enumerate()
                .any(|(j, q)| j != i && dominates(q.as_ref(), points[i].as_ref()))
        })
        .collect()
}

/// True when no member dominates another.
pub fn is_mutually_nondominated<T, V>(points: &[V]) -> bool
where
    T: Scalar,
    V: AsRef<[T]>,
{
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let (a, b) = (points[i].as_ref(), points[j].as_ref());
            if dominates(a, b) || dominates(b, a) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Strip the non-dominated subset, repeat.
    fn strip_oracle(points: &[Vec<f64>]) -> Vec<Vec<usize>> {
        let mut remaining: Vec<usize> = (0..points.len()).collect();
        let mut fronts = Vec::new();
        while !remaining.is_empty() {
            let front: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| {
                    !remaining.iter().any(|&j| {
                        let (a, b) = (&points[j], &points[i]);
                        a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
                    })
                })
                .collect();
            remaining.retain(|i| !front.contains(i));
            fronts.push(front);
        }
        fronts
    }

    #[test]
    fn singleton() {
        let fronts = fast_nondominated_sort(&[vec![1.0, 1.0]]);
        assert_eq!(fronts.fronts, vec![vec![0]]);
    }

    #[test]
    fn forced_two_fronts() {
        let pts = vec![vec![1.0, 2.0], vec![2.0, 1.0], vec![3.0, 3.0]];
        assert_eq!(fast_nondominated_sort(&pts).fronts, vec![vec![0, 1], vec![2]]);
        assert_eq!(fast_nondominated_sort(&pts).ranks(), vec![0, 0, 1]);
    }

    #[test]
    fn empty_population() {
        let pts: Vec<Vec<f64>> = vec![];
        assert!(fast_nondominated_sort(&pts).is_empty());
    }

    #[test]
    fn duplicates_share_a_front() {
        let pts = vec![vec![1.0, 1.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        assert_eq!(fast_nondominated_sort(&pts).fronts, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn fifty_random_three_objective_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(50);
        let pts: Vec<Vec<f64>> = (0..50)
            .map(|_| (0..3).map(|_| rng.random_range(0..6) as f64).collect())
            .collect();
        assert_eq!(fast_nondominated_sort(&pts).fronts, strip_oracle(&pts));
    }

    proptest! {
        #[test]
        fn agrees_with_strip_oracle(
            pts in (1usize..=4).prop_flat_map(|m| {
                prop::collection::vec(prop::collection::vec(0u8..8, m), 0..=200)
            })
        ) {
            let pts: Vec<Vec<f64>> = pts
                .into_iter()
                .map(|p| p.into_iter().map(f64::from).collect())
                .collect();
            prop_assert_eq!(fast_nondominated_sort(&pts).fronts, strip_oracle(&pts));
        }
    }
}
