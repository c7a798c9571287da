//! Scalar abstraction: the numerics are written against [`Real`] so the same
//! kernels run at `f32` or `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Complex number over a [`Real`] scalar.
pub type Cplx<T> = num_complex::Complex<T>;

/// Floating-point scalar usable by every kernel in the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    ///
    /// Panics if the value is not representable, which cannot happen for the
    /// finite constants used in this crate.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable in scalar type")
    }

    /// Lossy view as `f64`, for reporting and serialization.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar not representable as f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number from `f64` parts.
pub fn cplx<T: Real>(re: f64, im: f64) -> Cplx<T> {
    Cplx::new(T::of(re), T::of(im))
}
