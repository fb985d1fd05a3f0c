//! Bluestein chirp-z FFT for arbitrary lengths.
//!
//! Rewrites the DFT as a circular convolution via j*k = (j^2 + k^2 -
//! (k-j)^2)/2 and executes the convolution with the radix-2 Stockham kernel
//! at the next power of two >= 2n-1. The chirp filter spectrum is fixed per
//! plan.

use num_complex::Complex;

use super::scalar::FftScalar;
use super::stockham::StockhamPlan;
use super::FftError;
use crate::model::Direction;

pub struct BluesteinPlan<T> {
    n: usize,
    m: usize,
    // chirp[j] = e^(sign*pi*i*j^2/n)
    chirp: Vec<Complex<T>>,
    // forward length-m spectrum of the wrapped conjugate chirp
    filter_spectrum: Vec<Complex<T>>,
    conv_fwd: StockhamPlan<T>,
    conv_inv: StockhamPlan<T>,
    work: Vec<Complex<T>>,
}

fn half_chirp_phasor<T: FftScalar>(sign: f64, j: u64, n: u64) -> Complex<T> {
    // e^(sign*pi*i*j^2/n) with the square reduced mod 2n first
    let sq = ((j as u128 * j as u128) % (2 * n as u128)) as u64;
    let angle = sign * std::f64::consts::PI * (sq as f64) / (n as f64);
    let (sin, cos) = angle.sin_cos();
    Complex::new(T::from_f64(cos), T::from_f64(sin))
}

impl<T: FftScalar> BluesteinPlan<T> {
    pub fn new(n: usize, direction: Direction) -> Result<Self, FftError> {
        if n < 2 {
            return Err(FftError::LengthTooSmall { n: n as u64 });
        }
        let m = (2 * n - 1).next_power_of_two();
        let sign = direction.sign();
        let chirp: Vec<Complex<T>> = (0..n as u64)
            .map(|j| half_chirp_phasor(sign, j, n as u64))
            .collect();

        let conv_fwd = StockhamPlan::new(m, Direction::Forward)?;
        let conv_inv = StockhamPlan::new(m, Direction::Inverse)?;

        let zero = Complex::new(T::zero(), T::zero());
        let mut filter = vec![zero; m];
        for j in 0..n {
            let b = chirp[j].conj();
            filter[j] = b;
            if j > 0 {
                filter[m - j] = b;
            }
        }
        let mut scratch = vec![zero; m];
        conv_fwd.execute(&mut filter, &mut scratch);

        Ok(Self {
            n,
            m,
            chirp,
            filter_spectrum: filter,
            conv_fwd,
            conv_inv,
            work: vec![zero; m],
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn scratch_len(&self) -> usize {
        self.m
    }

    pub fn table_bytes(&self) -> u64 {
        let entries = self.chirp.len() + self.filter_spectrum.len() + self.work.len();
        (entries * std::mem::size_of::<Complex<T>>()) as u64
            + self.conv_fwd.table_bytes()
            + self.conv_inv.table_bytes()
    }

    pub fn execute(&mut self, data: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        assert_eq!(data.len(), self.n, "buffer length does not match plan");
        assert!(scratch.len() >= self.m, "scratch too small");
        let zero = Complex::new(T::zero(), T::zero());
        for (w, (x, c)) in self.work.iter_mut().zip(data.iter().zip(self.chirp.iter())) {
            *w = *x * *c;
        }
        self.work[self.n..].fill(zero);

        self.conv_fwd.execute(&mut self.work, scratch);
        for (w, f) in self.work.iter_mut().zip(self.filter_spectrum.iter()) {
            *w *= *f;
        }
        self.conv_inv.execute(&mut self.work, scratch);

        let inv_m = T::from_f64(1.0 / self.m as f64);
        for (x, (w, c)) in data.iter_mut().zip(self.work.iter().zip(self.chirp.iter())) {
            *x = *w * *c * inv_m;
        }
    }
}
