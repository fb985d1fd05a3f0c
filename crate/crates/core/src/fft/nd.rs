//! Row-column composition of the 1-D kernels plus Hermitian pack/unpack.
//!
//! Transforms run along each axis in turn, last (contiguous) axis first.
//! Strided axes are gathered into a contiguous line, transformed and
//! scattered back.

use num_complex::Complex;

use super::bluestein::BluesteinPlan;
use super::mixed_radix::{MixedRadixPlan, SMOOTH_PRIMES};
use super::scalar::FftScalar;
use super::stockham::StockhamPlan;
use super::FftError;
use crate::model::{Direction, Extents};

/// Which 1-D kernel the dispatcher picks for a given length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Stockham,
    MixedRadix,
    Bluestein,
}

/// Dispatch rule: power of two -> Stockham, {2,3,5,7}-smooth -> mixed
/// radix, anything else -> Bluestein.
pub fn kernel_kind_for(n: u64) -> KernelKind {
    if n.is_power_of_two() {
        return KernelKind::Stockham;
    }
    let mut rest = n;
    for p in SMOOTH_PRIMES {
        while rest.is_multiple_of(p) {
            rest /= p;
        }
    }
    if rest == 1 {
        KernelKind::MixedRadix
    } else {
        KernelKind::Bluestein
    }
}

pub enum Kernel1d<T> {
    Stockham(StockhamPlan<T>),
    MixedRadix(MixedRadixPlan<T>),
    Bluestein(BluesteinPlan<T>),
}

impl<T: FftScalar> Kernel1d<T> {
    pub fn for_length(n: usize, direction: Direction) -> Result<Self, FftError> {
        Ok(match kernel_kind_for(n as u64) {
            KernelKind::Stockham => Kernel1d::Stockham(StockhamPlan::new(n, direction)?),
            KernelKind::MixedRadix => Kernel1d::MixedRadix(MixedRadixPlan::new(n, direction)?),
            KernelKind::Bluestein => Kernel1d::Bluestein(BluesteinPlan::new(n, direction)?),
        })
    }

    pub fn kind(&self) -> KernelKind {
        match self {
            Kernel1d::Stockham(_) => KernelKind::Stockham,
            Kernel1d::MixedRadix(_) => KernelKind::MixedRadix,
            Kernel1d::Bluestein(_) => KernelKind::Bluestein,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Kernel1d::Stockham(p) => p.len(),
            Kernel1d::MixedRadix(p) => p.len(),
            Kernel1d::Bluestein(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn scratch_len(&self) -> usize {
        match self {
            Kernel1d::Stockham(p) => p.scratch_len(),
            Kernel1d::MixedRadix(p) => p.scratch_len(),
            Kernel1d::Bluestein(p) => p.scratch_len(),
        }
    }

    pub fn table_bytes(&self) -> u64 {
        match self {
            Kernel1d::Stockham(p) => p.table_bytes(),
            Kernel1d::MixedRadix(p) => p.table_bytes(),
            Kernel1d::Bluestein(p) => p.table_bytes(),
        }
    }

    pub fn execute(&mut self, line: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        match self {
            Kernel1d::Stockham(p) => p.execute(line, scratch),
            Kernel1d::MixedRadix(p) => p.execute(line, scratch),
            Kernel1d::Bluestein(p) => p.execute(line, scratch),
        }
    }
}

/// Per-direction plan for one shape: a kernel per distinct axis length plus
/// the gather and ping-pong work buffers.
pub struct NdPlan<T> {
    extents: Extents,
    axis_kernel: Vec<usize>,
    kernels: Vec<Kernel1d<T>>,
    line: Vec<Complex<T>>,
    scratch: Vec<Complex<T>>,
}

impl<T: FftScalar> NdPlan<T> {
    pub fn new(extents: &Extents, direction: Direction) -> Result<Self, FftError> {
        let mut kernels: Vec<Kernel1d<T>> = Vec::new();
        let mut axis_kernel = Vec::with_capacity(extents.rank());
        for &len in extents.dims() {
            let n = len as usize;
            let idx = match kernels.iter().position(|k| k.len() == n) {
                Some(i) => i,
                None => {
                    kernels.push(Kernel1d::for_length(n, direction)?);
                    kernels.len() - 1
                }
            };
            axis_kernel.push(idx);
        }
        let zero = Complex::new(T::zero(), T::zero());
        let line_len = extents.dims().iter().map(|&d| d as usize).max().unwrap();
        let scratch_len = kernels.iter().map(Kernel1d::scratch_len).max().unwrap();
        Ok(Self {
            extents: extents.clone(),
            axis_kernel,
            kernels,
            line: vec![zero; line_len],
            scratch: vec![zero; scratch_len],
        })
    }

    pub fn extents(&self) -> &Extents {
        &self.extents
    }

    /// Twiddle tables plus work buffers, for plan-size reporting.
    pub fn plan_bytes(&self) -> u64 {
        let tables: u64 = self.kernels.iter().map(Kernel1d::table_bytes).sum();
        let work = (self.line.len() + self.scratch.len()) * std::mem::size_of::<Complex<T>>();
        tables + work as u64
    }

    pub fn kernel_kind_for_axis(&self, axis: usize) -> KernelKind {
        self.kernels[self.axis_kernel[axis]].kind()
    }

    /// Transforms the row-major volume in place along every axis, fastest
    /// axis first.
    pub fn execute(&mut self, data: &mut [Complex<T>]) {
        let dims: Vec<usize> = self.extents.dims().iter().map(|&d| d as usize).collect();
        let total: usize = dims.iter().product();
        assert_eq!(data.len(), total, "volume length does not match plan");
        let rank = dims.len();

        // contiguous fastest axis
        let last = dims[rank - 1];
        let kernel = &mut self.kernels[self.axis_kernel[rank - 1]];
        for chunk in data.chunks_exact_mut(last) {
            kernel.execute(chunk, &mut self.scratch);
        }

        // strided axes, slowest first among the rest
        for axis in (0..rank - 1).rev() {
            let len = dims[axis];
            let stride: usize = dims[axis + 1..].iter().product();
            let block = len * stride;
            let kernel = &mut self.kernels[self.axis_kernel[axis]];
            let line = &mut self.line[..len];
            for base in (0..total).step_by(block) {
                for off in 0..stride {
                    let start = base + off;
                    for (t, v) in line.iter_mut().enumerate() {
                        *v = data[start + t * stride];
                    }
                    kernel.execute(line, &mut self.scratch);
                    for (t, v) in line.iter().enumerate() {
                        data[start + t * stride] = *v;
                    }
                }
            }
        }
    }
}

/// Extents of the Hermitian-packed half spectrum: fastest axis cut to
/// floor(n/2)+1 bins.
pub fn packed_extents(extents: &Extents) -> Result<Extents, FftError> {
    let mut dims = extents.dims().to_vec();
    let last = dims.last_mut().unwrap();
    *last = *last / 2 + 1;
    Extents::new(&dims).map_err(FftError::from)
}

/// Copies the first floor(n/2)+1 bins of every fastest-axis line.
pub fn pack_half_spectrum<T: FftScalar>(full: &[Complex<T>], extents: &Extents) -> Vec<Complex<T>> {
    let n_last = extents.last() as usize;
    let bins = n_last / 2 + 1;
    let mut packed = Vec::with_capacity(full.len() / n_last * bins);
    for line in full.chunks_exact(n_last) {
        packed.extend_from_slice(&line[..bins]);
    }
    packed
}

/// [`pack_half_spectrum`] into a caller-owned buffer.
pub fn pack_half_spectrum_into<T: FftScalar>(
    full: &[Complex<T>],
    extents: &Extents,
    packed: &mut [Complex<T>],
) {
    let n_last = extents.last() as usize;
    let bins = n_last / 2 + 1;
    debug_assert_eq!(packed.len(), full.len() / n_last * bins);
    for (line, out) in full.chunks_exact(n_last).zip(packed.chunks_exact_mut(bins)) {
        out.copy_from_slice(&line[..bins]);
    }
}

/// Rebuilds the full spectrum from a packed half spectrum using the
/// Hermitian symmetry X[k] = conj(X[N-k mod N]) across all axes.
pub fn unpack_half_spectrum<T: FftScalar>(
    packed: &[Complex<T>],
    original: &Extents,
) -> Vec<Complex<T>> {
    let total: usize = original.dims().iter().map(|&d| d as usize).product();
    let mut full = vec![Complex::new(T::zero(), T::zero()); total];
    unpack_half_spectrum_into(packed, original, &mut full);
    full
}

/// [`unpack_half_spectrum`] into a caller-owned full-size buffer.
pub fn unpack_half_spectrum_into<T: FftScalar>(
    packed: &[Complex<T>],
    original: &Extents,
    full: &mut [Complex<T>],
) {
    let dims: Vec<usize> = original.dims().iter().map(|&d| d as usize).collect();
    let rank = dims.len();
    let n_last = dims[rank - 1];
    let bins = n_last / 2 + 1;
    let row_dims = &dims[..rank - 1];
    let rows: usize = row_dims.iter().product();
    debug_assert_eq!(packed.len(), rows * bins);
    debug_assert_eq!(full.len(), rows * n_last);
    for (row, line) in full.chunks_exact_mut(n_last).enumerate() {
        // mirror row index: each leading axis k -> (n - k) mod n
        let mut rem = row;
        let mut mirror = 0usize;
        let mut stride = 1usize;
        for d in (0..row_dims.len()).rev() {
            let idx = rem % row_dims[d];
            rem /= row_dims[d];
            let m = if idx == 0 { 0 } else { row_dims[d] - idx };
            mirror += m * stride;
            stride *= row_dims[d];
        }
        let own = &packed[row * bins..(row + 1) * bins];
        let mirrored = &packed[mirror * bins..(mirror + 1) * bins];
        line[..bins].copy_from_slice(own);
        for k in bins..n_last {
            line[k] = mirrored[n_last - k].conj();
        }
    }
}
