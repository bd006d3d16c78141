use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, Signed, ToPrimitive};

/// Floating-point element type used by the sparse engine.
///
/// Implemented for `f32` and `f64`. The error model, filtering and the
/// squaring recurrence are written once against this trait.
pub trait Scalar:
    Float + Signed + FromPrimitive + ToPrimitive + Sum + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Unit roundoff `u = eps / 2`.
    fn unit_roundoff() -> Self {
        Self::epsilon() / Self::two()
    }

    /// Smallest accepted error tolerance, `u / 2`. In double precision this
    /// admits `1e-16`.
    fn min_tolerance() -> Self {
        Self::unit_roundoff() / Self::two()
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// Lossy conversion from `f64`; panics only for types that cannot hold finite f64 values.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("scalar conversion from f64")
    }

    /// `2^k` built by exact repeated doubling/halving.
    fn pow2(k: i32) -> Self {
        let mut v = Self::one();
        let step = if k >= 0 { Self::two() } else { Self::one() / Self::two() };
        for _ in 0..k.unsigned_abs() {
            v = v * step;
        }
        v
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
