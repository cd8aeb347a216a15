//! Vehicle fleet maintenance scheduling: instances, grouping, the three-vector
//! chromosome, first-come-first-served decoding and Monte Carlo evaluation of
//! workload, cost and expected failures.

pub mod chromosome;
pub mod error;
pub mod evaluation;
pub mod generator;
pub mod grouping;
pub mod instance;
pub mod problem;
pub mod sampling;
pub mod schedule;

pub use chromosome::{crossover, init_chromosome, mutate, Chromosome, Group};
pub use error::{Result, VfmsoError};
pub use evaluation::{evaluate, penalty_cost, EvaluationResult};
pub use generator::generate_instance;
pub use grouping::{component_groupability, random_group_structure};
pub use instance::{execution_window, CarSpec, ComponentSpec, ExecutionWindow, RepairOption, VfmsoInstance, WorkshopSpec};
pub use problem::VfmsoProblem;
pub use sampling::{sample_due_dates, DueDateSamples};
pub use schedule::{decode, Operation, Schedule};
