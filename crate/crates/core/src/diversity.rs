//! Euclidean-distance geometric-mean gap indicator and leave-one-out
//! contributions.
//!
//! The indicator of a set is the geometric mean, over its members, of the
//! distance from each member to its nearest neighbor. A member's
//! contribution is `I(S) - I(S \ {p})`; the member with the smallest
//! contribution is the one whose removal leaves the most evenly spread set.

use crate::scalar::Scalar;

/// Gaps below this are clamped so duplicates do not produce `ln(0)`.
pub const GAP_FLOOR: f64 = 1e-12;

/// Geometric mean of nearest-neighbor distances. Zero for sets of fewer than two points.
pub fn geometric_mean_gap<T, V>(set: &[V]) -> T
where
    T: Scalar,
    V: AsRef<[T]>,
{
    let n = set.len();
    if n < 2 {
        return T::zero();
    }
    let table = NeighborTable::build(set);
    (table.log_gap.iter().copied().sum::<T>() / T::of(n as f64)).exp()
}

/// Leave-one-out contribution of every member. Sets of two or fewer points
/// return `+inf` for every member.
pub fn diversity_contribution<T, V>(set: &[V]) -> Vec<T>
where
    T: Scalar,
    V: AsRef<[T]>,
{
    let n = set.len();
    if n <= 2 {
        return vec![T::infinity(); n];
    }
    let table = NeighborTable::build(set);
    let total_log: T = table.log_gap.iter().copied().sum();
    let full = (total_log / T::of(n as f64)).exp();

    // Removing p only changes the gaps of members whose nearest neighbor is p.
    let mut log_loss = vec![T::zero(); n];
    for i in 0..n {
        let p = table.nearest[i];
        log_loss[p] += table.log_second[i] - table.log_gap[i];
    }
    let reduced_len = T::of((n - 1) as f64);
    (0..n)
        .map(|p| {
            let reduced_log = total_log - table.log_gap[p] + log_loss[p];
            full - (reduced_log / reduced_len).exp()
        })
        .collect()
}

struct NeighborTable<T> {
    nearest: Vec<usize>,
    log_gap: Vec<T>,
    log_second: Vec<T>,
}

impl<T: Scalar> NeighborTable<T> {
    fn build<V: AsRef<[T]>>(set: &[V]) -> Self {
        let n = set.len();
        let m = set[0].as_ref().len();
        let flat: Vec<T> = set.iter().flat_map(|p| p.as_ref().iter().copied()).collect();
        let mut best = vec![(T::infinity(), usize::MAX); n];
        let mut second = vec![T::infinity(); n];
        for i in 0..n {
            let a = &flat[i * m..(i + 1) * m];
            let (mut bi, mut si) = (best[i], second[i]);
            for j in (i + 1)..n {
                let b = &flat[j * m..(j + 1) * m];
                let mut d = T::zero();
                for k in 0..m {
                    let t = a[k] - b[k];
                    d += t * t;
                }
                if d < bi.0 {
                    si = bi.0;
                    bi = (d, j);
                } else if d < si {
                    si = d;
                }
                let bj = &mut best[j];
                if d < bj.0 {
                    second[j] = bj.0;
                    *bj = (d, i);
                } else if d < second[j] {
                    second[j] = d;
                }
            }
            best[i] = bi;
            second[i] = si;
        }
        let floor_sq = T::of(GAP_FLOOR * GAP_FLOOR);
        let half = T::of(0.5);
        let log_of = |sq: T| half * sq.max(floor_sq).ln();
        Self {
            nearest: best.iter().map(|b| b.1).collect(),
            log_gap: best.iter().map(|b| log_of(b.0)).collect(),
            log_second: second.iter().map(|&s| log_of(s)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Naive indicator straight from the definition.
    fn naive_indicator(set: &[Vec<f64>]) -> f64 {
        let n = set.len();
        let logs: f64 = (0..n)
            .map(|i| {
                let g = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| {
                        set[i]
                            .iter()
                            .zip(&set[j])
                            .map(|(a, b)| (a - b).powi(2))
                            .sum::<f64>()
                            .sqrt()
                    })
                    .fold(f64::INFINITY, f64::min);
                g.max(GAP_FLOOR).ln()
            })
            .sum();
        (logs / n as f64).exp()
    }

    #[test]
    fn collinear_interior_contributions_equal() {
        let set: Vec<Vec<f64>> = (0..4).map(|x| vec![x as f64]).collect();
        let c = diversity_contribution(&set);
        assert!((c[1] - c[2]).abs() < 1e-12);
        assert!((c[0] - c[3]).abs() < 1e-12);
        // Dropping an interior point opens a double gap, so interior points are worth less.
        assert!(c[1] < c[0]);
        assert!((c[1] - (1.0 - 2f64.powf(1.0 / 3.0))).abs() < 1e-12);
    }

    #[test]
    fn duplicate_pair_is_least_diverse() {
        let set = vec![
            vec![0.0, 1.0],
            vec![0.3, 0.6],
            vec![0.5, 0.5],
            vec![0.5, 0.5],
            vec![1.0, 0.0],
        ];
        let c = diversity_contribution(&set);
        let min = c.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(c[2], min);
        assert_eq!(c[3], min);
    }

    #[test]
    fn small_sets_are_infinite() {
        assert_eq!(diversity_contribution::<f64, _>(&[vec![0.0]]), vec![f64::INFINITY]);
        assert_eq!(
            diversity_contribution(&[vec![0.0], vec![1.0]]),
            vec![f64::INFINITY; 2]
        );
    }

    #[test]
    fn indicator_matches_naive_definition() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let set: Vec<Vec<f64>> = (0..12)
                .map(|_| vec![rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()])
                .collect();
            let fast: f64 = geometric_mean_gap(&set);
            assert!((fast - naive_indicator(&set)).abs() < 1e-12);
        }
    }

    #[test]
    fn argmin_contribution_maximizes_remainder() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let set: Vec<Vec<f64>> = (0..10)
                .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
                .collect();
            let c = diversity_contribution(&set);
            let full = naive_indicator(&set);
            for (p, cp) in c.iter().enumerate() {
                let mut rest = set.clone();
                rest.remove(p);
                assert!((cp - (full - naive_indicator(&rest))).abs() < 1e-12);
            }
            let argmin = (0..10).min_by(|&a, &b| c[a].partial_cmp(&c[b]).unwrap()).unwrap();
            let best_removal = (0..10)
                .max_by(|&a, &b| {
                    let mut ra = set.clone();
                    ra.remove(a);
                    let mut rb = set.clone();
                    rb.remove(b);
                    naive_indicator(&ra).partial_cmp(&naive_indicator(&rb)).unwrap()
                })
                .unwrap();
            assert_eq!(argmin, best_removal);
        }
    }
}
