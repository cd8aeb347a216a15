//! ZDT1, ZDT2, DTLZ1 and DTLZ2 in their canonical forms.
//!
//! * ZDT: `f1 = x1`, `g = 1 + 9 * sum(x2..xn) / (n - 1)`, `f2 = g * h` with
//!   `h = 1 - sqrt(f1 / g)` (ZDT1) or `h = 1 - (f1 / g)^2` (ZDT2).
//! * DTLZ (three objectives, `k = n - 2` distance variables):
//!   DTLZ1 uses `g = 100 * (k + sum((x - 0.5)^2 - cos(20 pi (x - 0.5))))` and
//!   the simplex `f1 + f2 + f3 = 0.5` as its front; DTLZ2 uses
//!   `g = sum((x - 0.5)^2)` and the unit sphere.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{MoeaError, Result};
use crate::objective::ObjectiveVector;
use crate::problem::Problem;
use crate::scalar::Scalar;
use crate::variation::{polynomial_mutation, sbx_crossover, RealVariation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Benchmark {
    Zdt1,
    Zdt2,
    Dtlz1,
    Dtlz2,
}

impl Benchmark {
    pub const ALL: [Benchmark; 4] = [Benchmark::Zdt1, Benchmark::Zdt2, Benchmark::Dtlz1, Benchmark::Dtlz2];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Zdt1 => "zdt1",
            Benchmark::Zdt2 => "zdt2",
            Benchmark::Dtlz1 => "dtlz1",
            Benchmark::Dtlz2 => "dtlz2",
        }
    }

    pub fn default_variables(self) -> usize {
        match self {
            Benchmark::Zdt1 | Benchmark::Zdt2 => 30,
            Benchmark::Dtlz1 => 7,
            Benchmark::Dtlz2 => 12,
        }
    }

    pub fn num_objectives(self) -> usize {
        match self {
            Benchmark::Zdt1 | Benchmark::Zdt2 => 2,
            Benchmark::Dtlz1 | Benchmark::Dtlz2 => 3,
        }
    }

    /// Evaluation budget used in the reference experiments.
    pub fn default_budget(self) -> u64 {
        match self {
            Benchmark::Zdt1 | Benchmark::Zdt2 => 22_000,
            Benchmark::Dtlz1 | Benchmark::Dtlz2 => 120_000,
        }
    }

    pub fn evaluate<T: Scalar>(self, x: &[T]) -> Result<ObjectiveVector<T>> {
        match self {
            Benchmark::Zdt1 => evaluate_zdt1(x),
            Benchmark::Zdt2 => evaluate_zdt2(x),
            Benchmark::Dtlz1 => evaluate_dtlz1(x),
            Benchmark::Dtlz2 => evaluate_dtlz2(x),
        }
    }
}

impl FromStr for Benchmark {
    type Err = MoeaError;

    fn from_str(s: &str) -> Result<Self> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| MoeaError::UnknownProblem(s.to_string()))
    }
}

fn check_unit_box<T: Scalar>(x: &[T]) -> Result<()> {
    match x.iter().position(|v| !(*v >= T::zero() && *v <= T::one())) {
        Some(index) => Err(MoeaError::OutOfBounds { index }),
        None => Ok(()),
    }
}

fn zdt<T: Scalar>(x: &[T], h: impl Fn(T) -> T) -> Result<ObjectiveVector<T>> {
    check_unit_box(x)?;
    assert!(x.len() >= 2, "ZDT needs at least two variables");
    let f1 = x[0];
    let tail: T = x[1..].iter().copied().sum();
    let g = T::one() + T::of(9.0) * tail / T::of((x.len() - 1) as f64);
    Ok(ObjectiveVector::from_vec_unchecked(vec![f1, g * h(f1 / g)]))
}

pub fn evaluate_zdt1<T: Scalar>(x: &[T]) -> Result<ObjectiveVector<T>> {
    zdt(x, |r| T::one() - r.sqrt())
}

pub fn evaluate_zdt2<T: Scalar>(x: &[T]) -> Result<ObjectiveVector<T>> {
    zdt(x, |r| T::one() - r * r)
}

pub fn evaluate_dtlz1<T: Scalar>(x: &[T]) -> Result<ObjectiveVector<T>> {
    check_unit_box(x)?;
    assert!(x.len() >= 3, "DTLZ needs at least three variables");
    let half = T::of(0.5);
    let k = T::of((x.len() - 2) as f64);
    let twenty_pi = T::of(20.0 * PI);
    let s: T = x[2..]
        .iter()
        .map(|&v| (v - half) * (v - half) - (twenty_pi * (v - half)).cos())
        .sum();
    let g1 = T::one() + T::of(100.0) * (k + s);
    let (x1, x2) = (x[0], x[1]);
    Ok(ObjectiveVector::from_vec_unchecked(vec![
        half * x1 * x2 * g1,
        half * x1 * (T::one() - x2) * g1,
        half * (T::one() - x1) * g1,
    ]))
}

pub fn evaluate_dtlz2<T: Scalar>(x: &[T]) -> Result<ObjectiveVector<T>> {
    check_unit_box(x)?;
    assert!(x.len() >= 3, "DTLZ needs at least three variables");
    let half = T::of(0.5);
    let g: T = x[2..].iter().map(|&v| (v - half) * (v - half)).sum();
    let r = T::one() + g;
    let a = x[0] * T::of(PI / 2.0);
    let b = x[1] * T::of(PI / 2.0);
    Ok(ObjectiveVector::from_vec_unchecked(vec![
        r * a.cos() * b.cos(),
        r * a.cos() * b.sin(),
        r * a.sin(),
    ]))
}

/// Points exactly on the analytic Pareto front. ZDT samples always include
/// both end points; the rest are uniform random.
pub fn sample_true_front<T: Scalar, R: Rng + ?Sized>(
    benchmark: Benchmark,
    count: usize,
    rng: &mut R,
) -> Vec<ObjectiveVector<T>> {
    let zdt_point = |t: f64| -> Vec<f64> {
        match benchmark {
            Benchmark::Zdt1 => vec![t, 1.0 - t.sqrt()],
            _ => vec![t, 1.0 - t * t],
        }
    };
    let points: Vec<Vec<f64>> = match benchmark {
        Benchmark::Zdt1 | Benchmark::Zdt2 => (0..count)
            .map(|i| match i {
                0 => zdt_point(0.0),
                1 => zdt_point(1.0),
                _ => zdt_point(rng.random()),
            })
            .collect(),
        Benchmark::Dtlz1 => (0..count)
            .map(|_| {
                let w: Vec<f64> = (0..3).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
                let total: f64 = w.iter().sum();
                w.iter().map(|v| 0.5 * v / total).collect()
            })
            .collect(),
        Benchmark::Dtlz2 => (0..count)
            .map(|_| loop {
                let v: Vec<f64> = (0..3).map(|_| gaussian(rng).abs()).collect();
                let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                if norm > 1e-9 {
                    break v.iter().map(|a| a / norm).collect();
                }
            })
            .collect(),
    };
    points
        .into_iter()
        .map(|p| ObjectiveVector::from_vec_unchecked(p.into_iter().map(T::of).collect()))
        .collect()
}

/// Evenly spaced ZDT front samples, `t = i / (count - 1)`.
pub fn zdt_front_grid<T: Scalar>(benchmark: Benchmark, count: usize) -> Vec<ObjectiveVector<T>> {
    assert!(matches!(benchmark, Benchmark::Zdt1 | Benchmark::Zdt2));
    (0..count)
        .map(|i| {
            let t = i as f64 / (count.max(2) - 1) as f64;
            let f2 = match benchmark {
                Benchmark::Zdt1 => 1.0 - t.sqrt(),
                _ => 1.0 - t * t,
            };
            ObjectiveVector::from_vec_unchecked(vec![T::of(t), T::of(f2)])
        })
        .collect()
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// A benchmark bound to its variable count and real-coded operators.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousProblem {
    pub benchmark: Benchmark,
    pub n_vars: usize,
    pub variation: RealVariation,
}

impl ContinuousProblem {
    pub fn new(benchmark: Benchmark) -> Self {
        Self {
            benchmark,
            n_vars: benchmark.default_variables(),
            variation: RealVariation::default(),
        }
    }

    pub fn bounds<T: Scalar>(&self) -> Vec<(T, T)> {
        vec![(T::zero(), T::one()); self.n_vars]
    }
}

impl<T: Scalar> Problem<T> for ContinuousProblem {
    type Genome = Vec<T>;

    fn name(&self) -> &str {
        self.benchmark.name()
    }

    fn num_objectives(&self) -> usize {
        self.benchmark.num_objectives()
    }

    fn random_genome<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<T> {
        (0..self.n_vars).map(|_| T::of(rng.random())).collect()
    }

    fn evaluate(&self, genome: &Vec<T>) -> ObjectiveVector<T> {
        self.benchmark
            .evaluate(genome)
            .expect("variation keeps genomes inside the unit box")
    }

    fn crossover<R: Rng + ?Sized>(&self, a: &Vec<T>, b: &Vec<T>, rng: &mut R) -> (Vec<T>, Vec<T>) {
        if rng.random::<f64>() < self.variation.crossover_rate {
            sbx_crossover(a, b, &self.bounds(), self.variation.eta_c, rng)
        } else {
            (a.clone(), b.clone())
        }
    }

    fn mutate<R: Rng + ?Sized>(&self, genome: &Vec<T>, rng: &mut R) -> Vec<T> {
        let pm = self.variation.mutation_rate_for(self.n_vars);
        polynomial_mutation(genome, &self.bounds(), self.variation.eta_m, pm, rng)
    }

    fn describe(&self, genome: &Vec<T>) -> String {
        genome
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}
