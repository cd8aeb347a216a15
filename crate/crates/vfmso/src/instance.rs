//! Fleet, component and workshop data for one scheduling instance.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, VfmsoError};

pub const FORMAT_NAME: &str = "apdi-vfmso-instance";
pub const FORMAT_VERSION: u32 = 1;

/// Upper limit on workshops; capability sets are stored as bit masks.
pub const MAX_WORKSHOPS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkshopSpec {
    pub id: usize,
    /// Number of parallel maintenance teams (z_k).
    pub teams: u32,
    /// Component kinds this workshop can repair.
    pub capable_kinds: Vec<u32>,
}

/// Processing time and maintenance cost of a component in one capable workshop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepairOption {
    pub workshop: usize,
    pub processing_time: f64,
    pub maintenance_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub car: usize,
    pub index: usize,
    pub kind: u32,
    /// Mean of the predicted failure time (absolute hours).
    pub rul_mean: f64,
    pub rul_std: f64,
    /// Absolute time of the previous repair (L_ij).
    pub previous_repair: f64,
    pub repairs: Vec<RepairOption>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarSpec {
    pub id: usize,
    /// Set-up time per workshop (x_ik), indexed by workshop id.
    pub setup_time: Vec<f64>,
    /// Set-up cost per workshop (y_ik), indexed by workshop id.
    pub setup_cost: Vec<f64>,
    pub components: Vec<ComponentSpec>,
}

/// Admissible interval for a maintenance start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExecutionWindow {
    pub start: f64,
    pub end: f64,
}

impl ExecutionWindow {
    pub fn contains(&self, t: f64) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn width(&self) -> f64 {
        self.end - self.start
    }

    /// Common part of two windows, `None` when they do not overlap.
    pub fn intersect(&self, other: &ExecutionWindow) -> Option<ExecutionWindow> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        (start <= end).then_some(ExecutionWindow { start, end })
    }
}

/// `[mu - 2 sigma, mu + 2 sigma]`.
pub fn execution_window(component: &ComponentSpec) -> Result<ExecutionWindow> {
    let sigma = component.rul_std;
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(VfmsoError::NonPositiveSigma(sigma));
    }
    Ok(ExecutionWindow {
        start: component.rul_mean - 2.0 * sigma,
        end: component.rul_mean + 2.0 * sigma,
    })
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    format: String,
    version: u32,
    workshops: Vec<WorkshopSpec>,
    cars: Vec<CarSpec>,
}

/// A validated instance with derived lookup tables.
#[derive(Debug, Clone)]
pub struct VfmsoInstance {
    workshops: Vec<WorkshopSpec>,
    cars: Vec<CarSpec>,
    windows: Vec<Vec<ExecutionWindow>>,
    capable: Vec<Vec<u64>>,
    component_offsets: Vec<usize>,
    processing: Vec<Vec<f64>>,
    maintenance: Vec<Vec<f64>>,
    slot_offsets: Vec<usize>,
    slot_workshop: Vec<usize>,
}

impl PartialEq for VfmsoInstance {
    fn eq(&self, other: &Self) -> bool {
        self.workshops == other.workshops && self.cars == other.cars
    }
}

impl VfmsoInstance {
    pub fn new(workshops: Vec<WorkshopSpec>, cars: Vec<CarSpec>) -> Result<Self> {
        validate(&workshops, &cars)?;
        let n_workshops = workshops.len();

        let mut windows = Vec::with_capacity(cars.len());
        let mut capable = Vec::with_capacity(cars.len());
        let mut component_offsets = Vec::with_capacity(cars.len() + 1);
        let mut processing = Vec::new();
        let mut maintenance = Vec::new();
        component_offsets.push(0);
        for car in &cars {
            let mut car_windows = Vec::with_capacity(car.components.len());
            let mut car_capable = Vec::with_capacity(car.components.len());
            for c in &car.components {
                car_windows.push(execution_window(c)?);
                let mut mask = 0u64;
                let mut p = vec![f64::NAN; n_workshops];
                let mut q = vec![f64::NAN; n_workshops];
                for r in &c.repairs {
                    mask |= 1 << r.workshop;
                    p[r.workshop] = r.processing_time;
                    q[r.workshop] = r.maintenance_cost;
                }
                car_capable.push(mask);
                processing.push(p);
                maintenance.push(q);
            }
            windows.push(car_windows);
            capable.push(car_capable);
            component_offsets.push(component_offsets.last().unwrap() + car.components.len());
        }

        let mut slot_offsets = Vec::with_capacity(n_workshops + 1);
        let mut slot_workshop = Vec::new();
        slot_offsets.push(0);
        for (k, w) in workshops.iter().enumerate() {
            slot_workshop.extend(std::iter::repeat_n(k, w.teams as usize));
            slot_offsets.push(slot_workshop.len());
        }

        Ok(VfmsoInstance {
            workshops,
            cars,
            windows,
            capable,
            component_offsets,
            processing,
            maintenance,
            slot_offsets,
            slot_workshop,
        })
    }

    pub fn workshops(&self) -> &[WorkshopSpec] {
        &self.workshops
    }

    pub fn cars(&self) -> &[CarSpec] {
        &self.cars
    }

    pub fn num_cars(&self) -> usize {
        self.cars.len()
    }

    pub fn num_workshops(&self) -> usize {
        self.workshops.len()
    }

    pub fn num_components(&self) -> usize {
        *self.component_offsets.last().unwrap()
    }

    /// Flat index of component `j` of car `i`.
    pub fn component_index(&self, car: usize, j: usize) -> usize {
        self.component_offsets[car] + j
    }

    pub fn window(&self, car: usize, j: usize) -> ExecutionWindow {
        self.windows[car][j]
    }

    /// Bit mask of workshops able to repair component `j` of car `car`.
    pub fn capable_mask(&self, car: usize, j: usize) -> u64 {
        self.capable[car][j]
    }

    pub fn processing_time(&self, car: usize, j: usize, workshop: usize) -> f64 {
        self.processing[self.component_index(car, j)][workshop]
    }

    pub fn maintenance_cost(&self, car: usize, j: usize, workshop: usize) -> f64 {
        self.maintenance[self.component_index(car, j)][workshop]
    }

    /// Total team count over all workshops; team slots are numbered globally.
    pub fn num_slots(&self) -> usize {
        self.slot_workshop.len()
    }

    pub fn slot_workshop(&self, slot: usize) -> usize {
        self.slot_workshop[slot]
    }

    /// Global slot ids belonging to workshop `k`.
    pub fn slots_of(&self, k: usize) -> std::ops::Range<usize> {
        self.slot_offsets[k]..self.slot_offsets[k + 1]
    }

    /// Number of team slots across the workshops in `mask`.
    pub fn slot_count(&self, mask: u64) -> usize {
        (0..self.num_workshops())
            .filter(|&k| mask & (1 << k) != 0)
            .map(|k| self.slots_of(k).len())
            .sum()
    }

    /// The `n`-th slot among the workshops in `mask`.
    pub fn nth_slot(&self, mask: u64, mut n: usize) -> Option<usize> {
        for k in 0..self.num_workshops() {
            if mask & (1 << k) == 0 {
                continue;
            }
            let range = self.slots_of(k);
            if n < range.len() {
                return Some(range.start + n);
            }
            n -= range.len();
        }
        None
    }

    /// Intersection of the windows of `members` (components of `car`).
    pub fn group_window(&self, car: usize, members: &[usize]) -> Option<ExecutionWindow> {
        let mut iter = members.iter().map(|&j| self.windows[car][j]);
        let first = iter.next()?;
        iter.try_fold(first, |acc, w| acc.intersect(&w))
    }

    /// Workshops capable of repairing every member.
    pub fn group_capable(&self, car: usize, members: &[usize]) -> u64 {
        members.iter().fold(u64::MAX, |m, &j| m & self.capable[car][j])
    }

    pub fn to_toml_string(&self) -> Result<String> {
        let file = InstanceFile {
            format: FORMAT_NAME.to_string(),
            version: FORMAT_VERSION,
            workshops: self.workshops.clone(),
            cars: self.cars.clone(),
        };
        Ok(toml::to_string(&file)?)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: InstanceFile = toml::from_str(text)?;
        if file.format != FORMAT_NAME || file.version != FORMAT_VERSION {
            return Err(VfmsoError::UnsupportedFormat { format: file.format, version: file.version });
        }
        VfmsoInstance::new(file.workshops, file.cars)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_toml_string()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        VfmsoInstance::from_toml_str(&fs::read_to_string(path)?)
    }
}

fn invalid(msg: String) -> VfmsoError {
    VfmsoError::InvalidInstance(msg)
}

fn validate(workshops: &[WorkshopSpec], cars: &[CarSpec]) -> Result<()> {
    if workshops.is_empty() || workshops.len() > MAX_WORKSHOPS {
        return Err(invalid(format!("need 1..={MAX_WORKSHOPS} workshops, got {}", workshops.len())));
    }
    if cars.is_empty() {
        return Err(invalid("instance has no cars".into()));
    }
    for (k, w) in workshops.iter().enumerate() {
        if w.id != k {
            return Err(invalid(format!("workshop at position {k} has id {}", w.id)));
        }
        if w.teams == 0 {
            return Err(invalid(format!("workshop {k} has no teams")));
        }
    }
    let n = workshops.len();
    for (i, car) in cars.iter().enumerate() {
        if car.id != i {
            return Err(invalid(format!("car at position {i} has id {}", car.id)));
        }
        if car.components.is_empty() {
            return Err(invalid(format!("car {i} has no components")));
        }
        if car.setup_time.len() != n || car.setup_cost.len() != n {
            return Err(invalid(format!("car {i} needs set-up time and cost for all {n} workshops")));
        }
        if car.setup_time.iter().chain(&car.setup_cost).any(|v| !v.is_finite() || *v < 0.0) {
            return Err(invalid(format!("car {i} has a negative or non-finite set-up value")));
        }
        for (j, c) in car.components.iter().enumerate() {
            let at = format!("component {j} of car {i}");
            if c.car != i || c.index != j {
                return Err(invalid(format!("{at} is labelled ({}, {})", c.car, c.index)));
            }
            if !c.rul_mean.is_finite() || !c.rul_std.is_finite() || !c.previous_repair.is_finite() {
                return Err(invalid(format!("{at} has non-finite life data")));
            }
            let window = execution_window(c)?;
            if c.previous_repair > window.start {
                return Err(invalid(format!("{at} was repaired after its window opens")));
            }
            if c.repairs.is_empty() {
                return Err(invalid(format!("{at} has no capable workshop")));
            }
            let mut seen = 0u64;
            for r in &c.repairs {
                if r.workshop >= n {
                    return Err(invalid(format!("{at} refers to unknown workshop {}", r.workshop)));
                }
                if seen & (1 << r.workshop) != 0 {
                    return Err(invalid(format!("{at} lists workshop {} twice", r.workshop)));
                }
                seen |= 1 << r.workshop;
                if !workshops[r.workshop].capable_kinds.contains(&c.kind) {
                    return Err(invalid(format!("workshop {} cannot repair kind {} ({at})", r.workshop, c.kind)));
                }
                if !(r.processing_time > 0.0 && r.processing_time.is_finite())
                    || !(r.maintenance_cost > 0.0 && r.maintenance_cost.is_finite())
                {
                    return Err(invalid(format!("{at} has a non-positive time or cost in workshop {}", r.workshop)));
                }
            }
        }
    }
    Ok(())
}
