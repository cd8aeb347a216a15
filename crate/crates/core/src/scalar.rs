use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, NumCast};

/// Floating point type the optimizer is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumCast + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for literals and random draws.
    fn of(value: f64) -> Self {
        <Self as NumCast>::from(value).expect("f64 literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
