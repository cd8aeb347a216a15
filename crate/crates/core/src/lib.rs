//! Multi-objective evolutionary optimization with diversity-indicator
//! selection (DI-MOEA) and automatically detected knee-point preference
//! regions (AP-DI-MOEA).
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the common `f64` instantiation.

pub mod benchmarks;
pub mod crowding;
pub mod diversity;
pub mod engine;
pub mod error;
mod linalg;
pub mod metrics;
pub mod objective;
pub mod preference;
pub mod problem;
pub mod scalar;
pub mod sorting;
pub mod variation;

pub use benchmarks::{Benchmark, ContinuousProblem};
pub use engine::{
    run, Engine, EvolutionConfig, Individual, Observer, Population, RegionEvent, RegionPressure, RunResult,
    StepKind, Variant,
};
pub use error::{MoeaError, Result};
pub use objective::{dominates, ObjectiveVector};
pub use preference::{FrontShape, PreferenceRegion, RegionSchedule};
pub use problem::Problem;
pub use scalar::Scalar;
pub use sorting::{fast_nondominated_sort, RankedFronts};

pub type Objectives = ObjectiveVector<f64>;
pub type Objectives32 = ObjectiveVector<f32>;
pub type Region = PreferenceRegion<f64>;
pub type Region32 = PreferenceRegion<f32>;
pub type Event = RegionEvent<f64>;
pub type RealIndividual = Individual<Vec<f64>, f64>;
pub type RealRunResult = RunResult<Vec<f64>, f64>;
