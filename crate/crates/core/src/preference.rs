//! Knee-point detection and the shrinking preference region.
//!
//! Starting from a non-dominated set: drop outliers beyond the upper
//! quartile, fit a hyperplane through the per-objective extreme solutions,
//! decide whether the set bulges toward the ideal point (convex), away from
//! it (concave) or neither (linear), and pick the knee accordingly. The
//! region is the axis-aligned box from the origin up to
//! `knee + (worst - knee) * 0.85`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{MoeaError, Result};
use crate::linalg::hyperplane_normal;
use crate::objective::ObjectiveVector;
use crate::scalar::Scalar;

/// Fraction of the knee-to-worst span kept by every region build.
pub const REGION_SHRINK: f64 = 0.85;

/// Default ε as a fraction of the survivor count.
pub const DEFAULT_EPSILON_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct QuartileBounds<T> {
    /// Upper-quartile value per objective.
    pub upper_quartile: ObjectiveVector<T>,
    /// Worst (largest) value per objective.
    pub worst: ObjectiveVector<T>,
}

/// Removes every point that exceeds the upper quartile on any objective.
///
/// Returns survivor indices in input order. Fronts with fewer than four
/// points are returned unfiltered with both bounds set to the component
/// maxima; if filtering would remove everything, nothing is removed.
pub fn filter_upper_quartile<T: Scalar>(
    front: &[ObjectiveVector<T>],
) -> (Vec<usize>, QuartileBounds<T>) {
    assert!(!front.is_empty(), "quartile filter on an empty front");
    let n = front.len();
    let m = front[0].len();
    let worst = component_max(front);
    if n < 4 {
        return (
            (0..n).collect(),
            QuartileBounds {
                upper_quartile: worst.clone(),
                worst,
            },
        );
    }
    // 1-based index ceil(3n/4) into the ascending sort.
    let q_index = (3 * n).div_ceil(4) - 1;
    let mut column = vec![T::zero(); n];
    let upper_quartile: Vec<T> = (0..m)
        .map(|i| {
            for (slot, p) in column.iter_mut().zip(front) {
                *slot = p[i];
            }
            column.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
            column[q_index]
        })
        .collect();
    let survivors: Vec<usize> = (0..n)
        .filter(|&s| front[s].iter().zip(&upper_quartile).all(|(v, q)| v <= q))
        .collect();
    let survivors = if survivors.is_empty() {
        (0..n).collect()
    } else {
        survivors
    };
    (
        survivors,
        QuartileBounds {
            upper_quartile: ObjectiveVector::from_vec_unchecked(upper_quartile),
            worst,
        },
    )
}

fn component_max<T: Scalar>(front: &[ObjectiveVector<T>]) -> ObjectiveVector<T> {
    let m = front[0].len();
    let v = (0..m)
        .map(|i| front.iter().map(|p| p[i]).fold(T::neg_infinity(), T::max))
        .collect();
    ObjectiveVector::from_vec_unchecked(v)
}

fn component_min<T: Scalar>(front: &[&ObjectiveVector<T>]) -> Vec<T> {
    let m = front[0].len();
    (0..m)
        .map(|i| front.iter().map(|p| p[i]).fold(T::infinity(), T::min))
        .collect()
}

/// Hyperplane through the extreme solutions. The normal is oriented so
/// that the ideal point lies on the negative (convex) side.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane<T> {
    /// Row `j` is the survivor with the largest value on objective `j`.
    pub extreme_points: Vec<ObjectiveVector<T>>,
    /// Unit normal; `None` when the extreme points are affinely dependent.
    pub normal: Option<Vec<T>>,
    pub offset: T,
    /// Points closer than this to the plane count as lying on it.
    pub tolerance: T,
}

impl<T: Scalar> Hyperplane<T> {
    pub fn is_degenerate(&self) -> bool {
        self.normal.is_none()
    }

    /// Signed distance; negative on the convex (ideal-point) side.
    pub fn signed_distance(&self, p: &[T]) -> Option<T> {
        let normal = self.normal.as_ref()?;
        let dot = normal.iter().zip(p).map(|(&a, &b)| a * b).sum::<T>();
        Some(dot - self.offset)
    }
}

/// Picks, for each objective, the point with the maximum value (ties go to
/// the lexicographically smallest vector, then to the earliest) and fits a
/// hyperplane through them.
pub fn extreme_points<T: Scalar>(survivors: &[&ObjectiveVector<T>]) -> Hyperplane<T> {
    assert!(!survivors.is_empty(), "extreme points of an empty set");
    let m = survivors[0].len();
    let extremes: Vec<ObjectiveVector<T>> = (0..m)
        .map(|j| {
            let mut best = survivors[0];
            for &p in &survivors[1..] {
                match p[j].partial_cmp(&best[j]) {
                    Some(Ordering::Greater) => best = p,
                    Some(Ordering::Equal) if lexicographic(p, best) == Ordering::Less => best = p,
                    _ => {}
                }
            }
            best.clone()
        })
        .collect();

    let rows: Vec<&[T]> = extremes.iter().map(|p| p.as_slice()).collect();
    let ideal = component_min(survivors);
    let scale = (0..m)
        .map(|i| {
            let hi = survivors.iter().map(|p| p[i]).fold(T::neg_infinity(), T::max);
            hi - ideal[i]
        })
        .fold(T::zero(), T::max);
    let tolerance = T::epsilon().sqrt() * if scale > T::zero() { scale } else { T::one() };

    let (normal, offset) = match hyperplane_normal(&rows) {
        Some(mut normal) => {
            let dot = |a: &[T], b: &[T]| a.iter().zip(b).map(|(&x, &y)| x * y).sum::<T>();
            let mut offset = dot(&normal, rows[0]);
            let ideal_side = dot(&normal, &ideal) - offset;
            let flip = if ideal_side.abs() > tolerance {
                ideal_side > T::zero()
            } else {
                normal.iter().copied().sum::<T>() < T::zero()
            };
            if flip {
                for v in normal.iter_mut() {
                    *v = -*v;
                }
                offset = -offset;
            }
            (Some(normal), offset)
        }
        None => (None, T::zero()),
    };
    Hyperplane {
        extreme_points: extremes,
        normal,
        offset,
        tolerance,
    }
}

fn lexicographic<T: Scalar>(a: &[T], b: &[T]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.partial_cmp(y).unwrap_or(Ordering::Equal))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrontShape {
    Convex,
    Concave,
    Linear,
}

impl FrontShape {
    pub fn as_str(self) -> &'static str {
        match self {
            FrontShape::Convex => "convex",
            FrontShape::Concave => "concave",
            FrontShape::Linear => "linear",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvexityVerdict {
    pub num_convex: usize,
    pub num_concave: usize,
    pub shape: FrontShape,
}

/// ε for a survivor set: `ceil(fraction * |survivors|)`.
pub fn epsilon_for(survivor_count: usize, fraction: f64) -> usize {
    (fraction * survivor_count as f64).ceil() as usize
}

/// Counts points on each side of the hyperplane. Points within the plane's
/// tolerance count on neither side.
pub fn classify_convexity<T: Scalar>(
    survivors: &[&ObjectiveVector<T>],
    plane: &Hyperplane<T>,
    epsilon: usize,
) -> ConvexityVerdict {
    if plane.is_degenerate() {
        return ConvexityVerdict {
            num_convex: 0,
            num_concave: 0,
            shape: FrontShape::Linear,
        };
    }
    let (mut num_convex, mut num_concave) = (0usize, 0usize);
    for p in survivors {
        let d = plane.signed_distance(p).expect("non-degenerate plane");
        if d < -plane.tolerance {
            num_convex += 1;
        } else if d > plane.tolerance {
            num_concave += 1;
        }
    }
    let shape = if num_convex > num_concave + epsilon {
        FrontShape::Convex
    } else if num_concave > num_convex + epsilon {
        FrontShape::Concave
    } else {
        FrontShape::Linear
    };
    ConvexityVerdict {
        num_convex,
        num_concave,
        shape,
    }
}

/// Everything learned while locating a knee.
#[derive(Debug, Clone, PartialEq)]
pub struct KneeAnalysis<T> {
    /// Index of the knee in the input front.
    pub index: usize,
    pub knee: ObjectiveVector<T>,
    pub bounds: QuartileBounds<T>,
    pub survivors: Vec<usize>,
    pub verdict: ConvexityVerdict,
}

/// Locates the knee of a non-dominated front.
///
/// Linear shapes take the survivor with the largest single-point
/// hypervolume against the worst point; convex (concave) shapes take the
/// convex-side (concave-side) survivor farthest from the extreme-point
/// hyperplane. Ties go to the earliest point.
pub fn find_knee<T: Scalar>(front: &[ObjectiveVector<T>], epsilon_fraction: f64) -> KneeAnalysis<T> {
    assert!(!front.is_empty(), "knee of an empty front");
    let (survivors, bounds) = filter_upper_quartile(front);
    if front.len() == 1 {
        return KneeAnalysis {
            index: 0,
            knee: front[0].clone(),
            bounds,
            survivors,
            verdict: ConvexityVerdict {
                num_convex: 0,
                num_concave: 0,
                shape: FrontShape::Linear,
            },
        };
    }
    let points: Vec<&ObjectiveVector<T>> = survivors.iter().map(|&i| &front[i]).collect();
    let plane = extreme_points(&points);
    let epsilon = epsilon_for(points.len(), epsilon_fraction);
    let verdict = classify_convexity(&points, &plane, epsilon);

    let position = match verdict.shape {
        FrontShape::Linear => argmax_first(points.iter().map(|p| {
            p.iter()
                .zip(bounds.worst.iter())
                .fold(T::one(), |acc, (&f, &l)| acc * (l - f))
        })),
        side => argmax_first(points.iter().map(|p| {
            let d = plane.signed_distance(p).expect("shape implies a plane");
            let on_side = match side {
                FrontShape::Convex => d < -plane.tolerance,
                _ => d > plane.tolerance,
            };
            if on_side {
                d.abs()
            } else {
                T::neg_infinity()
            }
        })),
    };
    let index = survivors[position];
    KneeAnalysis {
        index,
        knee: front[index].clone(),
        bounds,
        survivors,
        verdict,
    }
}

fn argmax_first<T: Scalar>(values: impl Iterator<Item = T>) -> usize {
    let mut best = (0, T::neg_infinity());
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Axis-aligned box `[0, upper_bound]` around a knee.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferenceRegion<T> {
    pub knee: ObjectiveVector<T>,
    pub upper_bound: ObjectiveVector<T>,
    pub lower_bound: ObjectiveVector<T>,
}

impl<T: Scalar> PreferenceRegion<T> {
    /// Membership uses only the upper bound (minimization).
    pub fn contains(&self, x: &[T]) -> bool {
        x.iter().zip(self.upper_bound.iter()).all(|(v, u)| v <= u)
    }

    pub fn knee_distance(&self, x: &[T]) -> T {
        knee_distance(x, self)
    }
}

/// `upper[i] = knee[i] + (worst[i] - knee[i]) * 0.85`, lower bound at the origin.
pub fn compute_preference_region<T: Scalar>(
    knee: &ObjectiveVector<T>,
    worst: &ObjectiveVector<T>,
) -> Result<PreferenceRegion<T>> {
    if knee.len() != worst.len() {
        return Err(MoeaError::LengthMismatch {
            left: knee.len(),
            right: worst.len(),
        });
    }
    if let Some(objective) = (0..knee.len()).find(|&i| knee[i] > worst[i]) {
        return Err(MoeaError::KneeBeyondWorst { objective });
    }
    let shrink = T::of(REGION_SHRINK);
    let upper = knee
        .iter()
        .zip(worst.iter())
        .map(|(&k, &l)| (k + (l - k) * shrink).max(k))
        .collect();
    Ok(PreferenceRegion {
        knee: knee.clone(),
        upper_bound: ObjectiveVector::from_vec_unchecked(upper),
        lower_bound: ObjectiveVector::from_vec_unchecked(vec![T::zero(); knee.len()]),
    })
}

/// Euclidean distance to the region's knee in raw objective space.
pub fn knee_distance<T: Scalar>(x: &[T], region: &PreferenceRegion<T>) -> T {
    crate::objective::squared_distance(x, &region.knee).sqrt()
}

/// A region together with the analysis that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionBuild<T> {
    pub region: PreferenceRegion<T>,
    pub analysis: KneeAnalysis<T>,
}

/// Knee detection followed by region construction.
pub fn build_region<T: Scalar>(
    front: &[ObjectiveVector<T>],
    epsilon_fraction: f64,
) -> RegionBuild<T> {
    let analysis = find_knee(front, epsilon_fraction);
    let region = compute_preference_region(&analysis.knee, &analysis.bounds.worst)
        .expect("the knee never exceeds the worst point of its own front");
    RegionBuild { region, analysis }
}

/// Evaluation counts at which regions are (re)built.
///
/// The first build happens after `learning_fraction * total` evaluations,
/// later ones every `floor(total * (1 - learning_fraction) / updates)`
/// evaluations; the final build is pulled back to `total - population` so
/// some budget remains to exploit it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionSchedule {
    pub first: u64,
    pub step: u64,
    pub last: u64,
}

impl RegionSchedule {
    pub fn new(total: u64, population: usize, learning_fraction: f64, updates: u32) -> Self {
        let first = (total as f64 * learning_fraction).floor() as u64;
        let step = ((total as f64 * (1.0 - learning_fraction)) / f64::from(updates.max(1))).floor() as u64;
        Self::with_cadence(total, population, first, step)
    }

    /// Explicit first threshold and interval.
    pub fn with_cadence(total: u64, population: usize, first: u64, step: u64) -> Self {
        Self {
            first,
            step: step.max(1),
            last: total.saturating_sub(population as u64),
        }
    }

    /// The threshold following `current`, or `None` once the final build is done.
    pub fn next(&self, current: u64) -> Option<u64> {
        update_enum_p(current, self)
    }

    /// Every threshold, in order.
    pub fn thresholds(&self) -> Vec<u64> {
        std::iter::successors(Some(self.first), |&c| self.next(c)).collect()
    }
}

/// Advances the region-build threshold by one interval, clamping the final
/// build to `schedule.last`.
pub fn update_enum_p(current: u64, schedule: &RegionSchedule) -> Option<u64> {
    if current >= schedule.last {
        return None;
    }
    Some((current + schedule.step).min(schedule.last))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ov(v: &[f64]) -> ObjectiveVector<f64> {
        ObjectiveVector::new(v.to_vec()).unwrap()
    }

    fn front(points: &[&[f64]]) -> Vec<ObjectiveVector<f64>> {
        points.iter().map(|p| ov(p)).collect()
    }

    #[test]
    fn quartile_removes_corner_outlier() {
        let f = front(&[&[0.0, 1.0], &[0.3, 0.5], &[0.5, 0.3], &[5.0, 0.0]]);
        let (survivors, bounds) = filter_upper_quartile(&f);
        assert_eq!(bounds.upper_quartile.as_slice(), &[0.5, 0.5]);
        assert_eq!(bounds.worst.as_slice(), &[5.0, 1.0]);
        assert_eq!(survivors, vec![1, 2]);
    }

    #[test]
    fn quartile_identical_points() {
        let f = front(&[&[0.4, 0.4][..]; 6]);
        let (survivors, bounds) = filter_upper_quartile(&f);
        assert_eq!(survivors.len(), 6);
        assert_eq!(bounds.upper_quartile, bounds.worst);
        assert_eq!(bounds.worst.as_slice(), &[0.4, 0.4]);
    }

    #[test]
    fn quartile_small_front_unfiltered() {
        let f = front(&[&[0.0, 1.0], &[1.0, 0.0], &[0.5, 0.5]]);
        let (survivors, bounds) = filter_upper_quartile(&f);
        assert_eq!(survivors, vec![0, 1, 2]);
        assert_eq!(bounds.upper_quartile.as_slice(), &[1.0, 1.0]);
    }

    #[test]
    fn line_through_2d_extremes() {
        let f = front(&[&[0.0, 1.0], &[0.5, 0.5], &[1.0, 0.0]]);
        let refs: Vec<_> = f.iter().collect();
        let plane = extreme_points(&refs);
        assert_eq!(plane.extreme_points[0].as_slice(), &[1.0, 0.0]);
        assert_eq!(plane.extreme_points[1].as_slice(), &[0.0, 1.0]);
        for p in &f {
            assert!(plane.signed_distance(p).unwrap().abs() < 1e-12);
        }
        assert!(plane.signed_distance(&[0.0, 0.0]).unwrap() < 0.0);
    }

    #[test]
    fn simplex_corners_span_sum_plane() {
        let f = front(&[&[2.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 2.0]]);
        let refs: Vec<_> = f.iter().collect();
        let plane = extreme_points(&refs);
        let n = plane.normal.clone().unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!(n.iter().all(|v| (v - s).abs() < 1e-12));
        assert!((plane.offset - 2.0 * s).abs() < 1e-12);
    }

    #[test]
    fn coincident_extremes_are_degenerate_and_linear() {
        let f = front(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let refs: Vec<_> = f.iter().collect();
        let plane = extreme_points(&refs);
        assert!(plane.is_degenerate());
        let v = classify_convexity(&refs, &plane, 0);
        assert_eq!((v.num_convex, v.num_concave, v.shape), (0, 0, FrontShape::Linear));
    }

    #[test]
    fn knee_on_convex_side() {
        let f = front(&[&[0.0, 1.0], &[0.25, 0.25], &[1.0, 0.0]]);
        let k = find_knee(&f, DEFAULT_EPSILON_FRACTION);
        assert_eq!(k.knee.as_slice(), &[0.25, 0.25]);
        // One convex point against ceil(0.05 * 3) = 1 is not a clear margin.
        assert_eq!(k.verdict.shape, FrontShape::Linear);
        let refs: Vec<_> = f.iter().collect();
        let v = classify_convexity(&refs, &extreme_points(&refs), 0);
        assert_eq!((v.num_convex, v.num_concave, v.shape), (1, 0, FrontShape::Convex));
    }

    #[test]
    fn singleton_knee() {
        let f = front(&[&[0.3, 0.7]]);
        assert_eq!(find_knee(&f, 0.05).knee.as_slice(), &[0.3, 0.7]);
    }

    #[test]
    fn region_arithmetic() {
        let r = compute_preference_region(&ov(&[0.0, 0.0]), &ov(&[1.0, 1.0])).unwrap();
        assert_eq!(r.upper_bound.as_slice(), &[0.85, 0.85]);
        assert_eq!(r.lower_bound.as_slice(), &[0.0, 0.0]);

        let r = compute_preference_region(&ov(&[0.25, 0.25]), &ov(&[1.0, 1.0])).unwrap();
        assert!((r.upper_bound[0] - 0.8875).abs() < 1e-12);
        assert!((r.upper_bound[1] - 0.8875).abs() < 1e-12);

        let r = compute_preference_region(&ov(&[0.4, 0.6]), &ov(&[0.4, 0.6])).unwrap();
        assert_eq!(r.upper_bound.as_slice(), &[0.4, 0.6]);
        assert!(r.contains(&[0.4, 0.6]));
    }

    #[test]
    fn knee_beyond_worst_is_rejected() {
        let err = compute_preference_region(&ov(&[2.0, 0.0]), &ov(&[1.0, 1.0])).unwrap_err();
        assert_eq!(err, MoeaError::KneeBeyondWorst { objective: 0 });
    }

    #[test]
    fn knee_distance_examples() {
        let r = compute_preference_region(&ov(&[1.0, 2.0]), &ov(&[5.0, 9.0])).unwrap();
        assert_eq!(knee_distance(&[1.0, 2.0], &r), 0.0);
        assert_eq!(knee_distance(&[4.0, 6.0], &r), 5.0);
    }

    #[test]
    fn schedule_arithmetic() {
        let s = RegionSchedule::new(120_000, 100, 0.5, 12);
        assert_eq!((s.first, s.step), (60_000, 5_000));
        assert_eq!(s.next(60_000), Some(65_000));

        let s = RegionSchedule::new(22_000, 100, 0.5, 12);
        assert_eq!((s.first, s.step), (11_000, 916));
        let t = s.thresholds();
        assert_eq!(t.len(), 13);
        assert_eq!(t[12], 21_900);
        assert_eq!(t[11], 11_000 + 11 * 916);

        let s = RegionSchedule::new(1_200_000, 100, 0.5, 12);
        assert_eq!((s.first, s.step), (600_000, 50_000));
        assert_eq!(s.thresholds().len(), 13);
        assert_eq!(*s.thresholds().last().unwrap(), 1_199_900);
    }

    #[test]
    fn schedule_override_cadence() {
        let s = RegionSchedule::with_cadence(22_000, 100, 10_000, 1_200);
        let t = s.thresholds();
        assert_eq!(&t[..3], &[10_000, 11_200, 12_400]);
        assert_eq!(*t.last().unwrap(), 21_900);
    }
}
