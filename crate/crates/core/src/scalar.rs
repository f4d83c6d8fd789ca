//! Scalar abstraction shared by every numerical module.

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar the library is generic over (`f32` or `f64`).
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Cplx<T> = Complex<T>;

pub(crate) fn czero<T: Real>() -> Cplx<T> {
    Complex::new(T::zero(), T::zero())
}

/// `n! / m!` for `m <= n`, as a float.
pub(crate) fn falling<T: Real>(n: usize, m: usize) -> T {
    debug_assert!(m <= n);
    (m + 1..=n).fold(T::one(), |acc, k| acc * T::lit(k as f64))
}

pub(crate) fn factorial<T: Real>(n: usize) -> T {
    falling(n, 0)
}

/// Modulus of a complex number.
pub fn cabs<T: Real>(z: Cplx<T>) -> T {
    z.norm_sqr().sqrt()
}
