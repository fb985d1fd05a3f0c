//! Dense row-major volumes the transform operations work on.

use num_complex::Complex;
use thiserror::Error;

use super::scalar::FftScalar;
use crate::model::{total_elements, Extents};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VolumeError {
    #[error("data length {got} does not match extents element count {expected}")]
    LengthMismatch { expected: u64, got: u64 },
    #[error("non-finite scalar at flat index {index}")]
    NonFinite { index: usize },
}

/// Complex volume, row-major with the last extent fastest-varying. Every
/// scalar is checked finite on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVolume<T> {
    extents: Extents,
    data: Vec<Complex<T>>,
}

impl<T: FftScalar> ComplexVolume<T> {
    pub fn new(extents: Extents, data: Vec<Complex<T>>) -> Result<Self, VolumeError> {
        let expected = total_elements(&extents);
        if data.len() as u64 != expected {
            return Err(VolumeError::LengthMismatch {
                expected,
                got: data.len() as u64,
            });
        }
        for (i, v) in data.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(VolumeError::NonFinite { index: i });
            }
        }
        Ok(Self { extents, data })
    }

    pub fn zeroed(extents: Extents) -> Self {
        let len = total_elements(&extents) as usize;
        Self {
            extents,
            data: vec![Complex::new(T::zero(), T::zero()); len],
        }
    }

    pub fn extents(&self) -> &Extents {
        &self.extents
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex<T>> {
        self.data
    }
}

/// Real volume with the same ordering rules.
#[derive(Debug, Clone, PartialEq)]
pub struct RealVolume<T> {
    extents: Extents,
    data: Vec<T>,
}

impl<T: FftScalar> RealVolume<T> {
    pub fn new(extents: Extents, data: Vec<T>) -> Result<Self, VolumeError> {
        let expected = total_elements(&extents);
        if data.len() as u64 != expected {
            return Err(VolumeError::LengthMismatch {
                expected,
                got: data.len() as u64,
            });
        }
        for (i, v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(VolumeError::NonFinite { index: i });
            }
        }
        Ok(Self { extents, data })
    }

    pub fn extents(&self) -> &Extents {
        &self.extents
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_and_finiteness_are_enforced() {
        let e = Extents::new(&[4]).unwrap();
        assert!(matches!(
            ComplexVolume::new(e.clone(), vec![Complex::new(0.0f64, 0.0); 3]),
            Err(VolumeError::LengthMismatch {
                expected: 4,
                got: 3
            })
        ));
        let mut data = vec![Complex::new(0.0f64, 0.0); 4];
        data[2] = Complex::new(f64::NAN, 0.0);
        assert!(matches!(
            ComplexVolume::new(e.clone(), data),
            Err(VolumeError::NonFinite { index: 2 })
        ));
        assert!(RealVolume::new(e, vec![0.0f64, 1.0, 2.0, f64::INFINITY]).is_err());
    }
}
