//! Due-date samples drawn from each component's RUL distribution.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Result, VfmsoError};
use crate::instance::{ComponentSpec, ExecutionWindow, VfmsoInstance};

pub const DEFAULT_SAMPLE_COUNT: usize = 1000;

/// Draws `n` due dates from `Normal(mu, sigma)` truncated to `window` by rejection.
pub fn sample_due_dates<R: Rng + ?Sized>(
    component: &ComponentSpec,
    window: ExecutionWindow,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let normal = Normal::new(component.rul_mean, component.rul_std)
        .map_err(|_| VfmsoError::NonPositiveSigma(component.rul_std))?;
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let d = normal.sample(rng);
        if window.contains(d) {
            out.push(d);
        }
    }
    Ok(out)
}

/// Frozen due-date samples for every component, sorted for fast lookups.
///
/// Alongside each sorted sample list the suffix sums of `1 / (d - L)` are
/// kept, so the mean linear penalty at a maintenance date is a binary search
/// plus a constant amount of arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct DueDateSamples {
    sorted: Vec<Vec<f64>>,
    inverse_life_suffix: Vec<Vec<f64>>,
    previous_repair: Vec<f64>,
}

/// Per-component expectation over the sample set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleExpectation {
    /// Fraction of samples that fail before maintenance.
    pub failure_rate: f64,
    /// Mean of `(d - D) / (d - L)` over samples with `d > D` (zero for the others).
    pub penalty_fraction: f64,
}

impl DueDateSamples {
    pub fn generate<R: Rng + ?Sized>(instance: &VfmsoInstance, n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(VfmsoError::InvalidSamples("sample count must be positive".into()));
        }
        let mut samples = Vec::with_capacity(instance.num_components());
        for (i, car) in instance.cars().iter().enumerate() {
            for (j, c) in car.components.iter().enumerate() {
                samples.push(sample_due_dates(c, instance.window(i, j), n, rng)?);
            }
        }
        DueDateSamples::from_samples(instance, samples)
    }

    /// Uses caller-provided samples, one list per component in flat order.
    pub fn from_samples(instance: &VfmsoInstance, samples: Vec<Vec<f64>>) -> Result<Self> {
        if samples.len() != instance.num_components() {
            return Err(VfmsoError::InvalidSamples(format!(
                "{} sample lists for {} components",
                samples.len(),
                instance.num_components()
            )));
        }
        let mut sorted = Vec::with_capacity(samples.len());
        let mut suffix = Vec::with_capacity(samples.len());
        let mut previous = Vec::with_capacity(samples.len());
        let mut lists = samples.into_iter();
        for (i, car) in instance.cars().iter().enumerate() {
            for (j, c) in car.components.iter().enumerate() {
                let mut list = lists.next().unwrap();
                let window = instance.window(i, j);
                if list.is_empty() {
                    return Err(VfmsoError::InvalidSamples(format!("no samples for component {j} of car {i}")));
                }
                if let Some(&d) = list.iter().find(|d| !window.contains(**d)) {
                    return Err(VfmsoError::InvalidSamples(format!(
                        "sample {d} outside window of component {j} of car {i}"
                    )));
                }
                if let Some(&d) = list.iter().find(|d| **d <= c.previous_repair) {
                    return Err(VfmsoError::DegenerateLife { due: d, previous: c.previous_repair });
                }
                list.sort_by(f64::total_cmp);
                let mut s = vec![0.0; list.len() + 1];
                for v in (0..list.len()).rev() {
                    s[v] = s[v + 1] + 1.0 / (list[v] - c.previous_repair);
                }
                sorted.push(list);
                suffix.push(s);
                previous.push(c.previous_repair);
            }
        }
        Ok(DueDateSamples { sorted, inverse_life_suffix: suffix, previous_repair: previous })
    }

    pub fn num_components(&self) -> usize {
        self.sorted.len()
    }

    /// Sorted samples of the component with flat index `g`.
    pub fn samples(&self, g: usize) -> &[f64] {
        &self.sorted[g]
    }

    /// Failure rate and mean penalty fraction for maintenance at `date`.
    pub fn expectation(&self, g: usize, date: f64) -> SampleExpectation {
        let list = &self.sorted[g];
        let n = list.len() as f64;
        let failed = list.partition_point(|&d| d < date);
        let later = list.partition_point(|&d| d <= date);
        let previous = self.previous_repair[g];
        let used = (date - previous).max(0.0);
        let total = (list.len() - later) as f64 - used * self.inverse_life_suffix[g][later];
        SampleExpectation {
            failure_rate: failed as f64 / n,
            penalty_fraction: (total / n).max(0.0),
        }
    }
}
