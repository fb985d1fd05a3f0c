//! Recursive Cooley-Tukey FFT for {2,3,5,7}-smooth lengths.
//!
//! Each level splits n = p*m with p the smallest prime factor: m strided
//! p-point DFTs, a twiddle pass, m-point sub-transforms on the rows and a
//! transposing scatter. Decimation in time with the radix as the leading
//! factor; the inner butterflies never exceed size 7.

use num_complex::Complex;

use super::scalar::{unit_phasor, FftScalar};
use super::FftError;
use crate::model::Direction;

pub const SMOOTH_PRIMES: [u64; 4] = [2, 3, 5, 7];

struct Level<T> {
    radix: usize,
    rows: usize, // len / radix; 1 marks the prime leaf
    // radix-point DFT kernel: w[j] = e^(sign*2*pi*i*j/radix)
    w: Vec<Complex<T>>,
    // inter-level twiddles, [k1*rows + j2] = e^(sign*2*pi*i*(k1*j2 mod len)/len)
    twiddles: Vec<Complex<T>>,
}

pub struct MixedRadixPlan<T> {
    n: usize,
    levels: Vec<Level<T>>,
}

impl<T: FftScalar> MixedRadixPlan<T> {
    pub fn new(n: usize, direction: Direction) -> Result<Self, FftError> {
        if n < 2 {
            return Err(FftError::LengthTooSmall { n: n as u64 });
        }
        let factors = super::factorize(n as u64);
        if factors.iter().any(|f| !SMOOTH_PRIMES.contains(f)) {
            return Err(FftError::NotSmooth { n: n as u64 });
        }
        let sign = direction.sign();
        let mut levels = Vec::with_capacity(factors.len());
        let mut len = n;
        for (i, &factor) in factors.iter().enumerate() {
            let p = factor as usize;
            let w = (0..p)
                .map(|j| unit_phasor(sign, j as u64, p as u64))
                .collect();
            if i == factors.len() - 1 {
                debug_assert_eq!(len, p);
                levels.push(Level {
                    radix: p,
                    rows: 1,
                    w,
                    twiddles: Vec::new(),
                });
            } else {
                let rows = len / p;
                let mut twiddles = Vec::with_capacity(len);
                for k1 in 0..p as u64 {
                    for j2 in 0..rows as u64 {
                        twiddles.push(unit_phasor(sign, (k1 * j2) % len as u64, len as u64));
                    }
                }
                levels.push(Level {
                    radix: p,
                    rows,
                    w,
                    twiddles,
                });
                len = rows;
            }
        }
        Ok(Self { n, levels })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn scratch_len(&self) -> usize {
        self.n
    }

    pub fn table_bytes(&self) -> u64 {
        let entries: usize = self
            .levels
            .iter()
            .map(|lv| lv.w.len() + lv.twiddles.len())
            .sum();
        (entries * std::mem::size_of::<Complex<T>>()) as u64
    }

    /// Transforms `data` in place; `scratch` must be at least as long.
    pub fn execute(&self, data: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        assert_eq!(data.len(), self.n, "buffer length does not match plan");
        assert!(scratch.len() >= self.n, "scratch too small");
        run_level(&self.levels, 0, data, &mut scratch[..self.n]);
    }
}

fn run_level<T: FftScalar>(
    levels: &[Level<T>],
    depth: usize,
    data: &mut [Complex<T>],
    scratch: &mut [Complex<T>],
) {
    let lv = &levels[depth];
    let zero = Complex::new(T::zero(), T::zero());
    if lv.rows == 1 {
        let p = lv.radix;
        let mut buf = [zero; 7];
        buf[..p].copy_from_slice(data);
        dft_small(&buf[..p], data, &lv.w);
        return;
    }
    let p = lv.radix;
    let m = lv.rows;
    let mut col = [zero; 7];
    let mut out = [zero; 7];
    // strided p-point DFTs down the columns, twiddled into scratch rows
    for j2 in 0..m {
        for j1 in 0..p {
            col[j1] = data[j1 * m + j2];
        }
        dft_small(&col[..p], &mut out[..p], &lv.w);
        for k1 in 0..p {
            scratch[k1 * m + j2] = out[k1] * lv.twiddles[k1 * m + j2];
        }
    }
    // sub-transforms along the rows, with the roles of the buffers swapped
    for k1 in 0..p {
        run_level(
            levels,
            depth + 1,
            &mut scratch[k1 * m..(k1 + 1) * m],
            &mut data[k1 * m..(k1 + 1) * m],
        );
    }
    // transposing gather: X[k2*p + k1] = row k1 at position k2
    for k1 in 0..p {
        let row = &scratch[k1 * m..(k1 + 1) * m];
        for (k2, v) in row.iter().enumerate() {
            data[k2 * p + k1] = *v;
        }
    }
}

/// DFT of at most 7 points. Sizes 2 and 3 are unrolled; 5 and 7 run the
/// dense kernel over the precomputed root table.
fn dft_small<T: FftScalar>(src: &[Complex<T>], dst: &mut [Complex<T>], w: &[Complex<T>]) {
    match src.len() {
        2 => {
            dst[0] = src[0] + src[1];
            dst[1] = src[0] - src[1];
        }
        3 => {
            dst[0] = src[0] + src[1] + src[2];
            dst[1] = src[0] + src[1] * w[1] + src[2] * w[2];
            dst[2] = src[0] + src[1] * w[2] + src[2] * w[1];
        }
        p => {
            for (k, out) in dst.iter_mut().enumerate() {
                let mut acc = src[0];
                for (j, v) in src.iter().enumerate().skip(1) {
                    acc += *v * w[(j * k) % p];
                }
                *out = acc;
            }
        }
    }
}
