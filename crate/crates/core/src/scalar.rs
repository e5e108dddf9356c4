//! Scalar abstraction for the math core.
//!
//! Linear algebra, Gaussian state algebra, and the closed-form analysis
//! functions are generic over a real floating scalar. Everything downstream
//! (sampling, certification, CLI) uses the `f64` aliases exported from the
//! crate root; `f32` mainly exists for callers that want cheap bulk
//! evaluation and can live with the reduced accuracy.

use std::fmt::{Debug, Display};
use std::iter::{Product, Sum};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps, ToPrimitive};

/// Real scalar usable by the math core.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + Sum
    + Product
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from f64. Panics only for types that cannot
    /// represent ordinary finite values, which no implementor does.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to any Real")
    }

    /// Conversion to f64 for reporting and IO.
    fn to64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum_of_squares<T: Real>(xs: &[T]) -> T {
        xs.iter().map(|x| *x * *x).sum()
    }

    #[test]
    fn generic_arithmetic_works_for_both_widths() {
        assert_eq!(sum_of_squares(&[1.0f64, 2.0, 3.0]), 14.0);
        assert_eq!(sum_of_squares(&[1.0f32, 2.0, 3.0]), 14.0);
        assert!((f32::of(0.25).to64() - 0.25).abs() < 1e-12);
    }
}
