//! Built-in transform kernels: the naive DFT reference and a fast
//! arbitrary-size FFT family (radix-2 Stockham, mixed radix, Bluestein),
//! composed into N-D and real-input variants.
//!
//! All operations are pure functions of their inputs; inverse transforms
//! are unnormalized and [`normalize`] applies the 1/n factor where callers
//! want identity round trips.

pub mod bluestein;
pub mod dft;
pub mod mixed_radix;
pub mod nd;
pub mod scalar;
pub mod stockham;
pub mod volume;

use num_complex::Complex;
use thiserror::Error;

pub use bluestein::BluesteinPlan;
pub use mixed_radix::MixedRadixPlan;
pub use nd::{kernel_kind_for, Kernel1d, KernelKind, NdPlan};
pub use scalar::FftScalar;
pub use stockham::StockhamPlan;
pub use volume::{ComplexVolume, RealVolume, VolumeError};

use crate::model::{total_elements, Direction, Extents, ModelError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FftError {
    #[error("operation requires a rank-1 volume, got rank {rank}")]
    RankNotOne { rank: usize },
    #[error("length {n} is not a power of two")]
    NonPowerOfTwo { n: u64 },
    #[error("length {n} has a prime factor larger than 7")]
    NotSmooth { n: u64 },
    #[error("transform length {n} must be at least 2")]
    LengthTooSmall { n: u64 },
    #[error("packed extents {got} do not match Hermitian packing of {expected}")]
    PackingMismatch { expected: String, got: String },
    #[error("imaginary residue {max_abs:e} exceeds packing tolerance {tolerance:e}")]
    ImaginaryResidue { max_abs: f64, tolerance: f64 },
    #[error("normalization element count must be nonzero")]
    ZeroCount,
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Ascending prime factors of n; n = 1 yields the empty list.
pub type FactorList = Vec<u64>;

/// Prime factorization by trial division, ascending.
pub fn factorize(n: u64) -> FactorList {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut factors = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        while rest.is_multiple_of(p) {
            factors.push(p);
            rest /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push(rest);
    }
    factors
}

fn require_rank1<T: FftScalar>(input: &ComplexVolume<T>) -> Result<usize, FftError> {
    if input.extents().rank() != 1 {
        return Err(FftError::RankNotOne {
            rank: input.extents().rank(),
        });
    }
    Ok(input.extents().dims()[0] as usize)
}

/// Naive O(n^2) DFT of a rank-1 volume, the oracle the fast kernels are
/// validated against. Inverse is unnormalized.
pub fn dft_naive<T: FftScalar>(
    input: &ComplexVolume<T>,
    direction: Direction,
) -> Result<ComplexVolume<T>, FftError> {
    require_rank1(input)?;
    let out = dft::dft_naive_line(input.data(), direction);
    Ok(ComplexVolume::new(input.extents().clone(), out)?)
}

/// Radix-2 Stockham autosort FFT; length must be a power of two.
pub fn fft_stockham_radix2<T: FftScalar>(
    input: &ComplexVolume<T>,
    direction: Direction,
) -> Result<ComplexVolume<T>, FftError> {
    let n = require_rank1(input)?;
    let plan = StockhamPlan::new(n, direction)?;
    let mut data = input.data().to_vec();
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); plan.scratch_len()];
    plan.execute(&mut data, &mut scratch);
    Ok(ComplexVolume::new(input.extents().clone(), data)?)
}

/// Recursive Cooley-Tukey FFT; length must be {2,3,5,7}-smooth.
pub fn fft_mixed_radix<T: FftScalar>(
    input: &ComplexVolume<T>,
    direction: Direction,
) -> Result<ComplexVolume<T>, FftError> {
    let n = require_rank1(input)?;
    let plan = MixedRadixPlan::new(n, direction)?;
    let mut data = input.data().to_vec();
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); plan.scratch_len()];
    plan.execute(&mut data, &mut scratch);
    Ok(ComplexVolume::new(input.extents().clone(), data)?)
}

/// Bluestein chirp-z FFT; works for any length >= 2.
pub fn fft_bluestein<T: FftScalar>(
    input: &ComplexVolume<T>,
    direction: Direction,
) -> Result<ComplexVolume<T>, FftError> {
    let n = require_rank1(input)?;
    let mut plan = BluesteinPlan::new(n, direction)?;
    let mut data = input.data().to_vec();
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); plan.scratch_len()];
    plan.execute(&mut data, &mut scratch);
    Ok(ComplexVolume::new(input.extents().clone(), data)?)
}

/// Dispatching 1-D FFT: Stockham for powers of two, mixed radix for smooth
/// lengths, Bluestein otherwise.
pub fn fft_any<T: FftScalar>(
    input: &ComplexVolume<T>,
    direction: Direction,
) -> Result<ComplexVolume<T>, FftError> {
    let n = require_rank1(input)?;
    let mut kernel = Kernel1d::for_length(n, direction)?;
    let mut data = input.data().to_vec();
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); kernel.scratch_len()];
    kernel.execute(&mut data, &mut scratch);
    Ok(ComplexVolume::new(input.extents().clone(), data)?)
}

/// N-D FFT by row-column decomposition, fastest axis first.
pub fn fft_nd<T: FftScalar>(
    input: &ComplexVolume<T>,
    direction: Direction,
) -> Result<ComplexVolume<T>, FftError> {
    let mut plan = NdPlan::new(input.extents(), direction)?;
    let mut data = input.data().to_vec();
    plan.execute(&mut data);
    Ok(ComplexVolume::new(input.extents().clone(), data)?)
}

/// Forward real-to-complex transform returning the Hermitian-packed half
/// spectrum: the full complex transform of the real-embedded input with the
/// fastest axis truncated to floor(n/2)+1 bins.
pub fn r2c_forward<T: FftScalar>(input: &RealVolume<T>) -> Result<ComplexVolume<T>, FftError> {
    let extents = input.extents().clone();
    let mut plan = NdPlan::new(&extents, Direction::Forward)?;
    let mut full: Vec<Complex<T>> = input
        .data()
        .iter()
        .map(|&r| Complex::new(r, T::zero()))
        .collect();
    plan.execute(&mut full);
    let packed = nd::pack_half_spectrum(&full, &extents);
    Ok(ComplexVolume::new(nd::packed_extents(&extents)?, packed)?)
}

/// Unnormalized inverse of a Hermitian-packed spectrum back to a real
/// volume. The imaginary residue left after the inverse transform is
/// checked against the packing tolerance and discarded.
pub fn c2r_inverse<T: FftScalar>(
    input: &ComplexVolume<T>,
    original_extents: &Extents,
) -> Result<RealVolume<T>, FftError> {
    let expected = nd::packed_extents(original_extents)?;
    if input.extents() != &expected {
        return Err(FftError::PackingMismatch {
            expected: expected.to_string(),
            got: input.extents().to_string(),
        });
    }
    let mut full = nd::unpack_half_spectrum(input.data(), original_extents);
    let mut plan = NdPlan::new(original_extents, Direction::Inverse)?;
    plan.execute(&mut full);

    let n = total_elements(original_extents);
    let tolerance = T::PACKING_TOL_FACTOR * n as f64;
    let mut max_abs = 0.0f64;
    for v in &full {
        max_abs = max_abs.max(v.im.as_f64().abs());
    }
    if max_abs >= tolerance {
        return Err(FftError::ImaginaryResidue { max_abs, tolerance });
    }
    let reals: Vec<T> = full.into_iter().map(|v| v.re).collect();
    Ok(RealVolume::new(original_extents.clone(), reals)?)
}

/// Divides every element by `element_count`, the total element count of the
/// original time-domain extents. Applying this after an unnormalized
/// round trip restores the input.
pub fn normalize<T: FftScalar>(
    volume: ComplexVolume<T>,
    element_count: u64,
) -> Result<ComplexVolume<T>, FftError> {
    if element_count == 0 {
        return Err(FftError::ZeroCount);
    }
    let inv = T::from_f64(1.0 / element_count as f64);
    let extents = volume.extents().clone();
    let data = volume.into_data().into_iter().map(|v| v * inv).collect();
    Ok(ComplexVolume::new(extents, data)?)
}

/// Real-volume counterpart of [`normalize`].
pub fn normalize_real<T: FftScalar>(
    volume: RealVolume<T>,
    element_count: u64,
) -> Result<RealVolume<T>, FftError> {
    if element_count == 0 {
        return Err(FftError::ZeroCount);
    }
    let inv = T::from_f64(1.0 / element_count as f64);
    let extents = volume.extents().clone();
    let data = volume.into_data().into_iter().map(|v| v * inv).collect();
    Ok(RealVolume::new(extents, data)?)
}
