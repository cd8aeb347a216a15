//! Real-coded variation: simulated binary crossover and polynomial mutation
//! (bounded forms, as in Deb's reference NSGA-II code).

use rand::Rng;

use crate::scalar::Scalar;

const SAME_VALUE_EPS: f64 = 1e-14;

/// Parameters for the real-coded operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealVariation {
    pub crossover_rate: f64,
    pub eta_c: f64,
    pub eta_m: f64,
    /// Per-gene mutation probability; `None` means `1 / n_vars`.
    pub mutation_rate: Option<f64>,
}

impl Default for RealVariation {
    fn default() -> Self {
        Self {
            crossover_rate: 0.9,
            eta_c: 15.0,
            eta_m: 20.0,
            mutation_rate: None,
        }
    }
}

impl RealVariation {
    pub fn mutation_rate_for(&self, n_vars: usize) -> f64 {
        self.mutation_rate.unwrap_or(1.0 / n_vars.max(1) as f64)
    }

    /// Crossover with probability `crossover_rate`, then mutation of both children.
    pub fn vary<T: Scalar, R: Rng + ?Sized>(
        &self,
        a: &[T],
        b: &[T],
        bounds: &[(T, T)],
        rng: &mut R,
    ) -> (Vec<T>, Vec<T>) {
        let (c1, c2) = if rng.random::<f64>() < self.crossover_rate {
            sbx_crossover(a, b, bounds, self.eta_c, rng)
        } else {
            (a.to_vec(), b.to_vec())
        };
        let pm = self.mutation_rate_for(a.len());
        (
            polynomial_mutation(&c1, bounds, self.eta_m, pm, rng),
            polynomial_mutation(&c2, bounds, self.eta_m, pm, rng),
        )
    }
}

/// Simulated binary crossover with distribution index `eta_c`; each variable
/// is recombined with probability 0.5 and children are clamped to `bounds`.
pub fn sbx_crossover<T: Scalar, R: Rng + ?Sized>(
    a: &[T],
    b: &[T],
    bounds: &[(T, T)],
    eta_c: f64,
    rng: &mut R,
) -> (Vec<T>, Vec<T>) {
    assert_eq!(a.len(), b.len(), "sbx parents differ in length");
    assert_eq!(a.len(), bounds.len(), "sbx bounds differ in length");
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    let exponent = 1.0 / (eta_c + 1.0);
    for i in 0..a.len() {
        if !rng.random_bool(0.5) {
            continue;
        }
        let (x1, x2) = (a[i].to_f64_lossy(), b[i].to_f64_lossy());
        if (x1 - x2).abs() <= SAME_VALUE_EPS {
            continue;
        }
        let (lo, hi) = (bounds[i].0.to_f64_lossy(), bounds[i].1.to_f64_lossy());
        let (y1, y2) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
        let u: f64 = rng.random();

        let spread = |beta: f64| {
            let alpha = 2.0 - beta.powf(-(eta_c + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(exponent)
            } else {
                (1.0 / (2.0 - u * alpha)).powf(exponent)
            }
        };
        let betaq1 = spread(1.0 + 2.0 * (y1 - lo) / (y2 - y1));
        let betaq2 = spread(1.0 + 2.0 * (hi - y2) / (y2 - y1));
        let child_lo = (0.5 * ((y1 + y2) - betaq1 * (y2 - y1))).clamp(lo, hi);
        let child_hi = (0.5 * ((y1 + y2) + betaq2 * (y2 - y1))).clamp(lo, hi);

        if rng.random_bool(0.5) {
            c1[i] = T::of(child_hi);
            c2[i] = T::of(child_lo);
        } else {
            c1[i] = T::of(child_lo);
            c2[i] = T::of(child_hi);
        }
    }
    (c1, c2)
}

/// Bounded polynomial mutation; each gene mutates with probability `p_m`.
pub fn polynomial_mutation<T: Scalar, R: Rng + ?Sized>(
    x: &[T],
    bounds: &[(T, T)],
    eta_m: f64,
    p_m: f64,
    rng: &mut R,
) -> Vec<T> {
    assert_eq!(x.len(), bounds.len(), "mutation bounds differ in length");
    let mut y = x.to_vec();
    let power = 1.0 / (eta_m + 1.0);
    for i in 0..x.len() {
        if p_m <= 0.0 || rng.random::<f64>() >= p_m {
            continue;
        }
        let (lo, hi) = (bounds[i].0.to_f64_lossy(), bounds[i].1.to_f64_lossy());
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        let v = x[i].to_f64_lossy();
        let delta1 = (v - lo) / range;
        let delta2 = (hi - v) / range;
        let r: f64 = rng.random();
        let deltaq = if r < 0.5 {
            let xy = 1.0 - delta1;
            let val = 2.0 * r + (1.0 - 2.0 * r) * xy.powf(eta_m + 1.0);
            val.powf(power) - 1.0
        } else {
            let xy = 1.0 - delta2;
            let val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * xy.powf(eta_m + 1.0);
            1.0 - val.powf(power)
        };
        y[i] = T::of((v + deltaq * range).clamp(lo, hi));
    }
    y
}
