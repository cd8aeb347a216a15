use std::cmp::Ordering;

use crate::scalar::Scalar;

/// NSGA-II crowding distance. Per objective the two boundary members get
/// `+inf`; interior members accumulate the normalized gap between their
/// neighbors. An objective with zero range contributes nothing.
pub fn crowding_distance<T, V>(front: &[V]) -> Vec<T>
where
    T: Scalar,
    V: AsRef<[T]>,
{
    let n = front.len();
    if n <= 2 {
        return vec![T::infinity(); n];
    }
    let m = front[0].as_ref().len();
    let mut distance = vec![T::zero(); n];
    let mut order: Vec<usize> = (0..n).collect();
    for obj in 0..m {
        order.sort_by(|&a, &b| {
            front[a].as_ref()[obj]
                .partial_cmp(&front[b].as_ref()[obj])
                .unwrap_or(Ordering::Equal)
        });
        let lo = front[order[0]].as_ref()[obj];
        let hi = front[order[n - 1]].as_ref()[obj];
        distance[order[0]] = T::infinity();
        distance[order[n - 1]] = T::infinity();
        let range = hi - lo;
        if range <= T::zero() {
            continue;
        }
        for w in order.windows(3) {
            let gap = front[w[2]].as_ref()[obj] - front[w[0]].as_ref()[obj];
            distance[w[1]] += gap / range;
        }
    }
    distance
}
