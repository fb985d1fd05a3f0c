//! Float abstraction binding the kernels to f32/f64.

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

/// Scalar type the transform kernels run on.
///
/// Twiddle factors are always evaluated with f64 sin/cos and rounded into
/// the target type, which bounds the phase error of single-precision runs.
pub trait FftScalar:
    Float + FloatConst + NumAssign + Send + Sync + std::fmt::Debug + std::fmt::Display + 'static
{
    const BYTES: usize;

    /// Per-element factor of the tolerance for imaginary residue discarded
    /// when unpacking a real transform: tolerance = factor * element count.
    const PACKING_TOL_FACTOR: f64;

    fn from_f64(v: f64) -> Self;
    fn as_f64(self) -> f64;
}

impl FftScalar for f32 {
    const BYTES: usize = 4;
    const PACKING_TOL_FACTOR: f64 = 1e-6;

    fn from_f64(v: f64) -> Self {
        v as f32
    }

    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl FftScalar for f64 {
    const BYTES: usize = 8;
    const PACKING_TOL_FACTOR: f64 = 1e-10;

    fn from_f64(v: f64) -> Self {
        v
    }

    fn as_f64(self) -> f64 {
        self
    }
}

/// e^(sign * 2*pi*i * num / den), evaluated in f64 and rounded to T.
pub fn unit_phasor<T: FftScalar>(sign: f64, num: u64, den: u64) -> Complex<T> {
    debug_assert!(den > 0 && num < den);
    let angle = sign * 2.0 * std::f64::consts::PI * (num as f64) / (den as f64);
    let (sin, cos) = angle.sin_cos();
    Complex::new(T::from_f64(cos), T::from_f64(sin))
}
