//! Random instance generator with fixed parameter ranges.
//!
//! Every car carries one engine, four springs, four brakes and four tires.
//! Ranges (hours or money units):
//!
//! | quantity | range |
//! |---|---|
//! | RUL mean, engine | 6000..8000 |
//! | RUL mean, spring | 4000..6000 |
//! | RUL mean, brake | 2000..4000 |
//! | RUL mean, tire | 3000..5000 |
//! | RUL std | 5%..10% of the mean |
//! | previous repair | 0..50% of the window start |
//! | processing time | 1..8 |
//! | maintenance cost | 50..400 |
//! | set-up time | 0.5..2 |
//! | set-up cost | 20..80 |
//! | teams per workshop | 1..=4 |
//!
//! Each workshop repairs each kind with probability 1/2; capability rows are
//! redrawn until every kind is covered and every workshop repairs something.

use rand::Rng;

use crate::error::{Result, VfmsoError};
use crate::instance::{CarSpec, ComponentSpec, RepairOption, VfmsoInstance, WorkshopSpec, MAX_WORKSHOPS};

pub const KIND_ENGINE: u32 = 0;
pub const KIND_SPRING: u32 = 1;
pub const KIND_BRAKE: u32 = 2;
pub const KIND_TIRE: u32 = 3;

const CAR_LAYOUT: [u32; 13] = [
    KIND_ENGINE,
    KIND_SPRING,
    KIND_SPRING,
    KIND_SPRING,
    KIND_SPRING,
    KIND_BRAKE,
    KIND_BRAKE,
    KIND_BRAKE,
    KIND_BRAKE,
    KIND_TIRE,
    KIND_TIRE,
    KIND_TIRE,
    KIND_TIRE,
];

pub const COMPONENTS_PER_CAR: usize = CAR_LAYOUT.len();

fn mean_band(kind: u32) -> (f64, f64) {
    match kind {
        KIND_ENGINE => (6000.0, 8000.0),
        KIND_SPRING => (4000.0, 6000.0),
        KIND_BRAKE => (2000.0, 4000.0),
        _ => (3000.0, 5000.0),
    }
}

fn capabilities<R: Rng + ?Sized>(n_workshops: usize, rng: &mut R) -> Vec<Vec<u32>> {
    let kinds = [KIND_ENGINE, KIND_SPRING, KIND_BRAKE, KIND_TIRE];
    loop {
        let rows: Vec<Vec<u32>> = (0..n_workshops)
            .map(|_| kinds.iter().copied().filter(|_| rng.random_bool(0.5)).collect())
            .collect();
        let covered = kinds.iter().all(|k| rows.iter().any(|r| r.contains(k)));
        if covered && rows.iter().all(|r| !r.is_empty()) {
            return rows;
        }
    }
}

pub fn generate_instance<R: Rng + ?Sized>(n_cars: usize, n_workshops: usize, rng: &mut R) -> Result<VfmsoInstance> {
    if n_cars == 0 || n_workshops == 0 || n_workshops > MAX_WORKSHOPS {
        return Err(VfmsoError::InvalidInstance(format!(
            "cannot generate {n_cars} cars with {n_workshops} workshops"
        )));
    }
    let workshops: Vec<WorkshopSpec> = capabilities(n_workshops, rng)
        .into_iter()
        .enumerate()
        .map(|(id, capable_kinds)| WorkshopSpec { id, teams: rng.random_range(1..=4), capable_kinds })
        .collect();

    let cars = (0..n_cars)
        .map(|i| {
            let setup_time = (0..n_workshops).map(|_| rng.random_range(0.5..=2.0)).collect();
            let setup_cost = (0..n_workshops).map(|_| rng.random_range(20.0..=80.0)).collect();
            let components = CAR_LAYOUT
                .iter()
                .enumerate()
                .map(|(j, &kind)| {
                    let (lo, hi) = mean_band(kind);
                    let rul_mean = rng.random_range(lo..=hi);
                    let rul_std = rul_mean * rng.random_range(0.05..=0.10);
                    let previous_repair = rng.random_range(0.0..=0.5) * (rul_mean - 2.0 * rul_std);
                    let repairs = workshops
                        .iter()
                        .filter(|w| w.capable_kinds.contains(&kind))
                        .map(|w| RepairOption {
                            workshop: w.id,
                            processing_time: rng.random_range(1.0..=8.0),
                            maintenance_cost: rng.random_range(50.0..=400.0),
                        })
                        .collect();
                    ComponentSpec { car: i, index: j, kind, rul_mean, rul_std, previous_repair, repairs }
                })
                .collect();
            CarSpec { id: i, setup_time, setup_cost, components }
        })
        .collect();

    VfmsoInstance::new(workshops, cars)
}
