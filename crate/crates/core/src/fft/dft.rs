//! Naive O(n^2) DFT: X[k] = sum_j x[j] e^(sign*2*pi*i*j*k/n).
//!
//! This is the reference every fast kernel is checked against. Sums are
//! accumulated in f64 regardless of the data precision so the oracle stays
//! trustworthy for single-precision comparisons.

use num_complex::Complex;

use super::scalar::FftScalar;
use crate::model::Direction;

/// Twiddle table w[m] = e^(sign*2*pi*i*m/n) for m in 0..n, in f64.
///
/// The table entries are exact evaluations of the reduced angle; indexing
/// with (j*k) mod n therefore reproduces the per-term exponential without
/// large-angle precision loss.
pub fn naive_twiddle_table(n: usize, direction: Direction) -> Vec<Complex<f64>> {
    let sign = direction.sign();
    (0..n)
        .map(|m| {
            let angle = sign * 2.0 * std::f64::consts::PI * (m as f64) / (n as f64);
            let (sin, cos) = angle.sin_cos();
            Complex::new(cos, sin)
        })
        .collect()
}

/// One naive DFT line using a precomputed table from [`naive_twiddle_table`].
pub fn dft_line_with_table<T: FftScalar>(
    input: &[Complex<T>],
    output: &mut [Complex<T>],
    table: &[Complex<f64>],
) {
    let n = input.len();
    debug_assert_eq!(output.len(), n);
    debug_assert_eq!(table.len(), n);
    for (k, out) in output.iter_mut().enumerate() {
        let mut acc = Complex::new(0.0f64, 0.0);
        // idx tracks (j*k) mod n incrementally; k < n keeps it below 2n
        let mut idx = 0usize;
        for x in input.iter() {
            let w = table[idx];
            acc += Complex::new(x.re.as_f64(), x.im.as_f64()) * w;
            idx += k;
            if idx >= n {
                idx -= n;
            }
        }
        *out = Complex::new(T::from_f64(acc.re), T::from_f64(acc.im));
    }
}

/// Naive DFT of a rank-1 sequence. The inverse direction is unnormalized
/// (no 1/n factor).
pub fn dft_naive_line<T: FftScalar>(input: &[Complex<T>], direction: Direction) -> Vec<Complex<T>> {
    let table = naive_twiddle_table(input.len(), direction);
    let mut out = vec![Complex::new(T::zero(), T::zero()); input.len()];
    dft_line_with_table(input, &mut out, &table);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn close(a: Complex<f64>, b: Complex<f64>, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn delta_transforms_to_constant() {
        let x = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let out = dft_naive_line(&x, Direction::Forward);
        for v in out {
            assert!(close(v, c(1.0, 0.0), 1e-15));
        }
    }

    #[test]
    fn constant_transforms_to_scaled_delta() {
        let x = vec![c(1.0, 0.0); 4];
        let out = dft_naive_line(&x, Direction::Forward);
        assert!(close(out[0], c(4.0, 0.0), 1e-15));
        for v in &out[1..] {
            assert!(close(*v, c(0.0, 0.0), 1e-15));
        }
    }

    #[test]
    fn shifted_delta_produces_phase_ramp() {
        // [0,1,0,0] -> [1, -i, -1, i]
        let x = vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let out = dft_naive_line(&x, Direction::Forward);
        assert!(close(out[0], c(1.0, 0.0), 1e-15));
        assert!(close(out[1], c(0.0, -1.0), 1e-15));
        assert!(close(out[2], c(-1.0, 0.0), 1e-15));
        assert!(close(out[3], c(0.0, 1.0), 1e-15));
    }

    #[test]
    fn inverse_is_unnormalized() {
        let x = vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)];
        let fwd = dft_naive_line(&x, Direction::Forward);
        let back = dft_naive_line(&fwd, Direction::Inverse);
        for (orig, b) in x.iter().zip(&back) {
            assert!(close(*b, orig * 4.0, 1e-12), "{b} vs {orig}");
        }
    }
}
