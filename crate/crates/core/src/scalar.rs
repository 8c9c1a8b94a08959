//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the simulator is generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Default + Debug + Display + Send + Sync + 'static
{
    /// Tolerance used for structural checks (hermiticity, unit norm, unitarity
    /// of catalog elements) at this precision.
    fn structural_tol() -> Self;

    /// Lossless-enough conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }
}

impl Real for f32 {
    fn structural_tol() -> Self {
        1e-5
    }
}

impl Real for f64 {
    fn structural_tol() -> Self {
        1e-12
    }
}
