//! Real scalar abstraction shared by every numeric routine.
//!
//! All kernels are written against [`Real`] so that the same code runs in
//! `f64` (the reference precision) and `f32`. Tolerances are part of the
//! scalar type: single precision cannot honour the double-precision
//! thresholds, so each implementation carries its own defaults.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Default threshold for unitarity / isometry checks.
    const UNITARY_TOL: f64;
    /// Default threshold for eigen-residuals and unit-eigenvalue detection.
    const EIG_TOL: f64;
    /// Threshold for asserting imaginary parts of physical expectations vanish.
    const IMAG_TOL: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const UNITARY_TOL: f64 = 1e-12;
    const EIG_TOL: f64 = 1e-9;
    const IMAG_TOL: f64 = 1e-10;
}

impl Real for f32 {
    const UNITARY_TOL: f64 = 2e-5;
    const EIG_TOL: f64 = 1e-3;
    const IMAG_TOL: f64 = 1e-4;
}

#[inline]
pub fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub fn cr<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// Threshold bundle passed to routines that make rank or degeneracy decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    pub eig: T,
    pub unitary: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            eig: T::lit(T::EIG_TOL),
            unitary: T::lit(T::UNITARY_TOL),
        }
    }
}
