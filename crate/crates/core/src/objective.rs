use std::ops::{Deref, Index};

use serde::{Deserialize, Serialize};

use crate::error::{MoeaError, Result};
use crate::scalar::Scalar;

/// Objective values of one solution. All objectives are minimized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectiveVector<T>(Vec<T>);

impl<T: Scalar> ObjectiveVector<T> {
    /// Builds a vector, rejecting NaN and infinite entries.
    pub fn new(values: Vec<T>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(MoeaError::NonFinite { index });
        }
        Ok(Self(values))
    }

    /// Builds a vector without the finiteness check. Callers guarantee finite input.
    pub fn from_vec_unchecked(values: Vec<T>) -> Self {
        Self(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    /// Pareto dominance for minimization.
    ///
    /// Panics when the lengths differ; see [`ObjectiveVector::try_dominates`].
    pub fn dominates(&self, other: &Self) -> bool {
        dominates(&self.0, &other.0)
    }

    pub fn try_dominates(&self, other: &Self) -> Result<bool> {
        try_dominates(&self.0, &other.0)
    }

    pub fn squared_distance(&self, other: &Self) -> T {
        squared_distance(&self.0, &other.0)
    }

    pub fn distance(&self, other: &Self) -> T {
        self.squared_distance(other).sqrt()
    }
}

impl<T> Deref for ObjectiveVector<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> Index<usize> for ObjectiveVector<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> AsRef<[T]> for ObjectiveVector<T> {
    fn as_ref(&self) -> &[T] {
        &self.0
    }
}

/// `a` dominates `b` iff it is no worse everywhere and strictly better somewhere.
///
/// Panics on a length mismatch.
#[inline]
pub fn dominates<T: Scalar>(a: &[T], b: &[T]) -> bool {
    assert_eq!(a.len(), b.len(), "dominance on vectors of different lengths");
    let mut strictly_better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

pub fn try_dominates<T: Scalar>(a: &[T], b: &[T]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(MoeaError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(dominates(a, b))
}

#[inline]
pub fn squared_distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .fold(T::zero(), |acc, d| acc + d)
}
