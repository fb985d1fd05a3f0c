//! Radix-2 Stockham autosort FFT.
//!
//! Out-of-place double-buffer formulation: every stage reads one buffer and
//! writes the other with the reordering folded into the butterfly indexing,
//! so no separate bit-reversal pass is needed. Decimation in time; the
//! combine at level k merges pairs of length n>>(k+1) sub-transforms.

use num_complex::Complex;

use super::scalar::{unit_phasor, FftScalar};
use super::FftError;
use crate::model::Direction;

pub struct StockhamPlan<T> {
    n: usize,
    // stages[k] holds the twiddles of combine level k: n>>(k+1) entries of
    // e^(sign*2*pi*i*p/(n>>k)).
    stages: Vec<Vec<Complex<T>>>,
}

impl<T: FftScalar> StockhamPlan<T> {
    pub fn new(n: usize, direction: Direction) -> Result<Self, FftError> {
        if n < 2 {
            return Err(FftError::LengthTooSmall { n: n as u64 });
        }
        if !n.is_power_of_two() {
            return Err(FftError::NonPowerOfTwo { n: n as u64 });
        }
        let sign = direction.sign();
        let levels = n.trailing_zeros() as usize;
        let stages = (0..levels)
            .map(|k| {
                let span = n >> k;
                (0..span / 2)
                    .map(|p| unit_phasor(sign, p as u64, span as u64))
                    .collect()
            })
            .collect();
        Ok(Self { n, stages })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Required length of the ping-pong partner buffer.
    pub fn scratch_len(&self) -> usize {
        self.n
    }

    pub fn table_bytes(&self) -> u64 {
        let entries: usize = self.stages.iter().map(Vec::len).sum();
        (entries * std::mem::size_of::<Complex<T>>()) as u64
    }

    /// Transforms `data` in place, using `scratch` as the second buffer of
    /// the ping-pong. The result always lands back in `data`.
    pub fn execute(&self, data: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        let n = self.n;
        assert_eq!(data.len(), n, "buffer length does not match plan");
        assert!(scratch.len() >= n, "scratch too small");
        let scratch = &mut scratch[..n];
        let levels = self.stages.len();

        // Sub-transform results of combine level k live in `data` when k is
        // even and in `scratch` when k is odd; the length-1 base level
        // (k = levels) therefore needs a copy when `levels` is odd.
        if levels % 2 == 1 {
            scratch.copy_from_slice(data);
        }
        for k in (0..levels).rev() {
            let half = n >> (k + 1); // butterflies in this combine
            let stride = 1 << k;
            let table = &self.stages[k];
            let (src, dst): (&[Complex<T>], &mut [Complex<T>]) = if k % 2 == 0 {
                (scratch, data)
            } else {
                (data, scratch)
            };
            let (dst_lo, dst_hi) = dst.split_at_mut(half * stride);
            for p in 0..half {
                let w = table[p];
                let src_a = &src[2 * p * stride..(2 * p + 1) * stride];
                let src_b = &src[(2 * p + 1) * stride..(2 * p + 2) * stride];
                let out_a = &mut dst_lo[p * stride..(p + 1) * stride];
                let out_b = &mut dst_hi[p * stride..(p + 1) * stride];
                for (((a, b), oa), ob) in src_a
                    .iter()
                    .zip(src_b.iter())
                    .zip(out_a.iter_mut())
                    .zip(out_b.iter_mut())
                {
                    let tw = *b * w;
                    *oa = *a + tw;
                    *ob = *a - tw;
                }
            }
        }
    }
}
