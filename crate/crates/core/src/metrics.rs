//! Hypervolume, region restriction and knee-relation classification.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{MoeaError, Result};
use crate::objective::dominates;
use crate::preference::PreferenceRegion;
use crate::scalar::Scalar;
use crate::sorting::is_mutually_nondominated;

/// Exact hypervolume dominated by `set` and bounded by `reference`.
///
/// Points that do not strictly dominate the reference on every objective
/// contribute nothing. Two objectives use a sorted sweep; higher
/// dimensions slice on the last objective and recurse.
pub fn hypervolume<T, V>(set: &[V], reference: &[T]) -> T
where
    T: Scalar,
    V: AsRef<[T]>,
{
    let points: Vec<&[T]> = set
        .iter()
        .map(AsRef::as_ref)
        .filter(|p| p.len() == reference.len() && p.iter().zip(reference).all(|(v, r)| v < r))
        .collect();
    if points.is_empty() {
        return T::zero();
    }
    hv_recursive(&points, reference)
}

fn hv_recursive<T: Scalar>(points: &[&[T]], reference: &[T]) -> T {
    let m = reference.len();
    match m {
        0 => T::zero(),
        1 => reference[0] - points.iter().map(|p| p[0]).fold(T::infinity(), T::min),
        2 => hv_2d(points, reference),
        _ => {
            let last = m - 1;
            let mut order: Vec<&[T]> = points.to_vec();
            order.sort_by(|a, b| a[last].partial_cmp(&b[last]).unwrap_or(Ordering::Equal));
            let mut total = T::zero();
            let mut k = 0;
            while k < order.len() {
                let level = order[k][last];
                while k < order.len() && order[k][last] == level {
                    k += 1;
                }
                let top = if k < order.len() { order[k][last] } else { reference[last] };
                let slab: Vec<&[T]> = order[..k].iter().map(|p| &p[..last]).collect();
                total += hv_recursive(&slab, &reference[..last]) * (top - level);
            }
            total
        }
    }
}

fn hv_2d<T: Scalar>(points: &[&[T]], reference: &[T]) -> T {
    let mut order: Vec<&[T]> = points.to_vec();
    order.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .unwrap_or(Ordering::Equal)
            .then(a[1].partial_cmp(&b[1]).unwrap_or(Ordering::Equal))
    });
    let mut area = T::zero();
    let mut ceiling = reference[1];
    for p in order {
        if p[1] < ceiling {
            area += (reference[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    area
}

/// Indices of members inside the region (component-wise `<= upper_bound`).
pub fn restrict_to_region<T, V>(set: &[V], region: &PreferenceRegion<T>) -> Vec<usize>
where
    T: Scalar,
    V: AsRef<[T]>,
{
    (0..set.len())
        .filter(|&i| region.contains(set[i].as_ref()))
        .collect()
}

/// Component-wise maximum over several sets; `None` when all are empty.
pub fn joint_reference_point<T, V>(sets: &[&[V]]) -> Option<Vec<T>>
where
    T: Scalar,
    V: AsRef<[T]>,
{
    let mut it = sets.iter().flat_map(|s| s.iter()).map(AsRef::as_ref);
    let first = it.next()?.to_vec();
    Some(it.fold(first, |mut acc, p| {
        for (a, &v) in acc.iter_mut().zip(p) {
            *a = a.max(v);
        }
        acc
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KneeRelation {
    /// Mutually non-dominated with every comparison member.
    Incomparable,
    /// Dominated by at least one comparison member.
    Dominated,
    /// Dominates at least one comparison member.
    Dominating,
}

impl KneeRelation {
    pub fn as_str(self) -> &'static str {
        match self {
            KneeRelation::Incomparable => "Incomparable",
            KneeRelation::Dominated => "Dominated",
            KneeRelation::Dominating => "Dominating",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionComparison {
    pub knee_in_region: bool,
    pub relation: KneeRelation,
}

/// Where a probe knee sits relative to a region and a non-dominated set.
pub fn classify_knee_relation<T, V>(
    knee: &[T],
    ap_set: &[V],
    region: &PreferenceRegion<T>,
) -> Result<RegionComparison>
where
    T: Scalar,
    V: AsRef<[T]>,
{
    if !is_mutually_nondominated(ap_set) {
        return Err(MoeaError::NotNonDominated);
    }
    let dominated = ap_set.iter().any(|s| dominates(s.as_ref(), knee));
    let dominating = ap_set.iter().any(|s| dominates(knee, s.as_ref()));
    let relation = match (dominated, dominating) {
        (false, false) => KneeRelation::Incomparable,
        (true, false) => KneeRelation::Dominated,
        (false, true) => KneeRelation::Dominating,
        (true, true) => return Err(MoeaError::NotNonDominated),
    };
    Ok(RegionComparison {
        knee_in_region: region.contains(knee),
        relation,
    })
}
