//! The two built-in clients: "RefFFT" over the fast kernel family and
//! "NaiveDFT" over the O(n^2) reference transform.
//!
//! Both are host-only: upload and download are real copies between the
//! harness-owned buffer and the client-owned signal buffers, so the phase
//! semantics match device-backed adapters. Neither normalizes its inverse
//! and neither needs both plans up front.

use std::marker::PhantomData;

use num_complex::Complex;

use super::{
    ClientCapabilities, ClientError, ClientFactory, FftClient, HostBuffer, Lifecycle, Phase,
};
use crate::fft::dft::{dft_line_with_table, naive_twiddle_table};
use crate::fft::nd::{pack_half_spectrum_into, unpack_half_spectrum_into, NdPlan};
use crate::fft::FftScalar;
use crate::harness::BenchmarkCase;
use crate::model::{
    packed_elements, signal_bytes, total_elements, transfer_bytes, Direction, Extents, MemoryMode,
    Precision, TransformKind,
};

pub const BUILTIN_TITLES: [&str; 2] = ["RefFFT", "NaiveDFT"];

/// NaiveDFT refuses anything bigger than this many elements; the quadratic
/// cost becomes unreasonable beyond it.
pub const NAIVE_MAX_ELEMENTS: u64 = 1 << 16;

/// Builds one of the built-in clients for a case.
pub fn make_builtin_client(
    title: &str,
    case: &BenchmarkCase,
) -> Result<Box<dyn FftClient>, ClientError> {
    match title {
        "RefFFT" => Ok(match case.precision {
            Precision::Single => Box::new(BuiltinClient::<f32, RefEngine<f32>>::new(case)?),
            Precision::Double => Box::new(BuiltinClient::<f64, RefEngine<f64>>::new(case)?),
        }),
        "NaiveDFT" => {
            let n = total_elements(&case.extents);
            if n > NAIVE_MAX_ELEMENTS {
                return Err(ClientError::Unsupported {
                    reason: format!(
                        "NaiveDFT refuses {n} elements (O(n^2) guard at {NAIVE_MAX_ELEMENTS})"
                    ),
                });
            }
            Ok(match case.precision {
                Precision::Single => Box::new(BuiltinClient::<f32, NaiveEngine<f32>>::new(case)?),
                Precision::Double => Box::new(BuiltinClient::<f64, NaiveEngine<f64>>::new(case)?),
            })
        }
        other => Err(ClientError::UnknownClient {
            title: other.to_string(),
        }),
    }
}

/// Factory over the built-in clients, keyed by the case's client title.
#[derive(Debug, Default, Clone, Copy)]
pub struct BuiltinFactory;

impl ClientFactory for BuiltinFactory {
    fn construct(&self, case: &BenchmarkCase) -> Result<Box<dyn FftClient>, ClientError> {
        make_builtin_client(&case.client_title, case)
    }
}

/// Maps the generic scalar onto the matching [`HostBuffer`] layouts.
pub trait HostScalar: FftScalar {
    fn real_slice(buf: &HostBuffer) -> Option<&[Self]>;
    fn real_slice_mut(buf: &mut HostBuffer) -> Option<&mut [Self]>;
    fn complex_slice(buf: &HostBuffer) -> Option<&[Complex<Self>]>;
    fn complex_slice_mut(buf: &mut HostBuffer) -> Option<&mut [Complex<Self>]>;
}

impl HostScalar for f32 {
    fn real_slice(buf: &HostBuffer) -> Option<&[Self]> {
        match buf {
            HostBuffer::RealF32(v) => Some(v),
            _ => None,
        }
    }
    fn real_slice_mut(buf: &mut HostBuffer) -> Option<&mut [Self]> {
        match buf {
            HostBuffer::RealF32(v) => Some(v),
            _ => None,
        }
    }
    fn complex_slice(buf: &HostBuffer) -> Option<&[Complex<Self>]> {
        match buf {
            HostBuffer::ComplexF32(v) => Some(v),
            _ => None,
        }
    }
    fn complex_slice_mut(buf: &mut HostBuffer) -> Option<&mut [Complex<Self>]> {
        match buf {
            HostBuffer::ComplexF32(v) => Some(v),
            _ => None,
        }
    }
}

impl HostScalar for f64 {
    fn real_slice(buf: &HostBuffer) -> Option<&[Self]> {
        match buf {
            HostBuffer::RealF64(v) => Some(v),
            _ => None,
        }
    }
    fn real_slice_mut(buf: &mut HostBuffer) -> Option<&mut [Self]> {
        match buf {
            HostBuffer::RealF64(v) => Some(v),
            _ => None,
        }
    }
    fn complex_slice(buf: &HostBuffer) -> Option<&[Complex<Self>]> {
        match buf {
            HostBuffer::ComplexF64(v) => Some(v),
            _ => None,
        }
    }
    fn complex_slice_mut(buf: &mut HostBuffer) -> Option<&mut [Complex<Self>]> {
        match buf {
            HostBuffer::ComplexF64(v) => Some(v),
            _ => None,
        }
    }
}

/// Transform machinery behind a built-in client: plans per direction in
/// init, runs full complex volumes in place.
pub trait TransformEngine<T: FftScalar>: Default + Send {
    fn plan(&mut self, extents: &Extents, direction: Direction) -> Result<(), ClientError>;
    fn run(&mut self, direction: Direction, data: &mut [Complex<T>]) -> Result<(), ClientError>;
    /// Twiddle tables plus engine-owned work buffers.
    fn plan_bytes(&self) -> u64;
    fn release(&mut self);
}

/// Fast-kernel engine: one N-D plan per direction.
pub struct RefEngine<T> {
    forward: Option<NdPlan<T>>,
    inverse: Option<NdPlan<T>>,
}

impl<T> Default for RefEngine<T> {
    fn default() -> Self {
        Self {
            forward: None,
            inverse: None,
        }
    }
}

impl<T: FftScalar> TransformEngine<T> for RefEngine<T> {
    fn plan(&mut self, extents: &Extents, direction: Direction) -> Result<(), ClientError> {
        let plan = NdPlan::new(extents, direction).map_err(|e| ClientError::Backend {
            message: e.to_string(),
        })?;
        match direction {
            Direction::Forward => self.forward = Some(plan),
            Direction::Inverse => self.inverse = Some(plan),
        }
        Ok(())
    }

    fn run(&mut self, direction: Direction, data: &mut [Complex<T>]) -> Result<(), ClientError> {
        let plan = match direction {
            Direction::Forward => self.forward.as_mut(),
            Direction::Inverse => self.inverse.as_mut(),
        };
        let plan = plan.ok_or_else(|| ClientError::Backend {
            message: "no plan for requested direction".into(),
        })?;
        plan.execute(data);
        Ok(())
    }

    fn plan_bytes(&self) -> u64 {
        self.forward.as_ref().map_or(0, NdPlan::plan_bytes)
            + self.inverse.as_ref().map_or(0, NdPlan::plan_bytes)
    }

    fn release(&mut self) {
        self.forward = None;
        self.inverse = None;
    }
}

/// O(n^2) reference engine wrapping the naive DFT.
///
/// True to its name it keeps no plan state: init only notes the shape
/// (plan size 0), and every execution rebuilds its twiddle table and work
/// buffers from scratch. That gives the naive client the zero-setup cost
/// profile a straightforward implementation has, while the fast client
/// pays planning time up front. Sums are accumulated in f64 even for
/// single-precision signals so the reference stays accurate; the quadratic
/// operation count is unaffected.
pub struct NaiveEngine<T> {
    dims: Vec<usize>,
    planned_forward: bool,
    planned_inverse: bool,
    _precision: PhantomData<T>,
}

impl<T> Default for NaiveEngine<T> {
    fn default() -> Self {
        Self {
            dims: Vec::new(),
            planned_forward: false,
            planned_inverse: false,
            _precision: PhantomData,
        }
    }
}

impl<T: FftScalar> TransformEngine<T> for NaiveEngine<T> {
    fn plan(&mut self, extents: &Extents, direction: Direction) -> Result<(), ClientError> {
        self.dims = extents.dims().iter().map(|&d| d as usize).collect();
        match direction {
            Direction::Forward => self.planned_forward = true,
            Direction::Inverse => self.planned_inverse = true,
        }
        Ok(())
    }

    fn run(&mut self, direction: Direction, data: &mut [Complex<T>]) -> Result<(), ClientError> {
        let planned = match direction {
            Direction::Forward => self.planned_forward,
            Direction::Inverse => self.planned_inverse,
        };
        if !planned {
            return Err(ClientError::Backend {
                message: "no plan for requested direction".into(),
            });
        }
        let total: usize = self.dims.iter().product();
        debug_assert_eq!(data.len(), total);
        let mut work: Vec<Complex<f64>> = data
            .iter()
            .map(|d| Complex::new(d.re.as_f64(), d.im.as_f64()))
            .collect();
        let rank = self.dims.len();
        let max_len = *self.dims.iter().max().unwrap();
        let mut line_in = vec![Complex::new(0.0, 0.0); max_len];
        let mut line_out = vec![Complex::new(0.0, 0.0); max_len];
        for axis in (0..rank).rev() {
            let len = self.dims[axis];
            let stride: usize = self.dims[axis + 1..].iter().product();
            let block = len * stride;
            let table = naive_twiddle_table(len, direction);
            let line_in = &mut line_in[..len];
            let line_out = &mut line_out[..len];
            for base in (0..total).step_by(block) {
                for off in 0..stride {
                    let start = base + off;
                    for (t, v) in line_in.iter_mut().enumerate() {
                        *v = work[start + t * stride];
                    }
                    dft_line_with_table(line_in, line_out, table.as_slice());
                    for (t, v) in line_out.iter().enumerate() {
                        work[start + t * stride] = *v;
                    }
                }
            }
        }
        for (d, w) in data.iter_mut().zip(work.iter()) {
            *d = Complex::new(T::from_f64(w.re), T::from_f64(w.im));
        }
        Ok(())
    }

    fn plan_bytes(&self) -> u64 {
        0
    }

    fn release(&mut self) {
        self.planned_forward = false;
        self.planned_inverse = false;
    }
}

/// Client-owned signal storage. In-place modes hold a single buffer that
/// the transform writes over; the in-place real layout shares one complex
/// allocation between the real signal (two reals per slot) and the packed
/// spectrum.
enum Signal<T> {
    Unallocated,
    C2cOut {
        time: Vec<Complex<T>>,
        freq: Vec<Complex<T>>,
    },
    C2cIn {
        buf: Vec<Complex<T>>,
    },
    R2cOut {
        time: Vec<T>,
        spec: Vec<Complex<T>>,
    },
    R2cIn {
        buf: Vec<Complex<T>>,
    },
}

fn read_slot<T: FftScalar>(slots: &[Complex<T>], i: usize) -> T {
    let c = slots[i / 2];
    if i.is_multiple_of(2) {
        c.re
    } else {
        c.im
    }
}

fn write_slot<T: FftScalar>(slots: &mut [Complex<T>], i: usize, v: T) {
    let c = &mut slots[i / 2];
    if i.is_multiple_of(2) {
        c.re = v;
    } else {
        c.im = v;
    }
}

/// Generic built-in client: lifecycle guard plus signal buffers around a
/// [`TransformEngine`].
pub struct BuiltinClient<T: HostScalar, E: TransformEngine<T>> {
    lifecycle: Lifecycle,
    caps: ClientCapabilities,
    extents: Extents,
    kind: TransformKind,
    mode: MemoryMode,
    n_total: usize,
    packed_total: usize,
    alloc_bytes: u64,
    transfer_size: u64,
    sig: Signal<T>,
    embed: Vec<Complex<T>>,
    engine: E,
}

impl<T: HostScalar, E: TransformEngine<T>> BuiltinClient<T, E> {
    pub fn new(case: &BenchmarkCase) -> Result<Self, ClientError> {
        let backend = |e: crate::model::ModelError| ClientError::Backend {
            message: e.to_string(),
        };
        let (in_bytes, out_bytes) =
            signal_bytes(&case.extents, case.precision, case.kind, case.mode).map_err(backend)?;
        let transfer_size =
            transfer_bytes(&case.extents, case.precision, case.kind).map_err(backend)?;
        let caps = ClientCapabilities::new(false, false);
        Ok(Self {
            lifecycle: Lifecycle::new(caps.plans_upfront),
            caps,
            extents: case.extents.clone(),
            kind: case.kind,
            mode: case.mode,
            n_total: total_elements(&case.extents) as usize,
            packed_total: packed_elements(&case.extents) as usize,
            alloc_bytes: in_bytes + out_bytes,
            transfer_size,
            sig: Signal::Unallocated,
            embed: Vec::new(),
            engine: E::default(),
        })
    }

    fn needs_embed(&self) -> bool {
        self.kind == TransformKind::RealToComplex
    }

    fn check_host_layout(&self, buf: &HostBuffer) -> Result<(), ClientError> {
        let ok = match self.kind {
            TransformKind::RealToComplex => T::real_slice(buf).is_some(),
            TransformKind::ComplexToComplex => T::complex_slice(buf).is_some(),
        };
        if !ok || buf.elements() != self.n_total {
            return Err(ClientError::BufferMismatch {
                expected: format!(
                    "{} x{}",
                    match self.kind {
                        TransformKind::RealToComplex => "real",
                        TransformKind::ComplexToComplex => "complex",
                    },
                    self.n_total
                ),
                got: format!("{} x{}", buf.layout_name(), buf.elements()),
            });
        }
        Ok(())
    }

    fn residue_check(&self) -> Result<(), ClientError> {
        let tolerance = T::PACKING_TOL_FACTOR * self.n_total as f64;
        let mut max_abs = 0.0f64;
        for v in &self.embed {
            max_abs = max_abs.max(v.im.as_f64().abs());
        }
        if max_abs >= tolerance {
            return Err(ClientError::Backend {
                message: format!(
                    "imaginary residue {max_abs:e} exceeds packing tolerance {tolerance:e}"
                ),
            });
        }
        Ok(())
    }
}

impl<T: HostScalar, E: TransformEngine<T>> FftClient for BuiltinClient<T, E> {
    fn capabilities(&self) -> ClientCapabilities {
        self.caps
    }

    fn allocate(&mut self) -> Result<(), ClientError> {
        self.lifecycle.advance(Phase::Allocate)?;
        let zero = Complex::new(T::zero(), T::zero());
        self.sig = match (self.kind, self.mode) {
            (TransformKind::ComplexToComplex, MemoryMode::OutOfPlace) => Signal::C2cOut {
                time: vec![zero; self.n_total],
                freq: vec![zero; self.n_total],
            },
            (TransformKind::ComplexToComplex, MemoryMode::InPlace) => Signal::C2cIn {
                buf: vec![zero; self.n_total],
            },
            (TransformKind::RealToComplex, MemoryMode::OutOfPlace) => Signal::R2cOut {
                time: vec![T::zero(); self.n_total],
                spec: vec![zero; self.packed_total],
            },
            (TransformKind::RealToComplex, MemoryMode::InPlace) => Signal::R2cIn {
                buf: vec![zero; self.packed_total],
            },
        };
        Ok(())
    }

    fn get_alloc_size(&self) -> Result<u64, ClientError> {
        self.lifecycle.allow_size_query()?;
        Ok(self.alloc_bytes)
    }

    fn get_transfer_size(&self) -> Result<u64, ClientError> {
        self.lifecycle.allow_size_query()?;
        Ok(self.transfer_size)
    }

    fn get_plan_size(&self) -> Result<u64, ClientError> {
        self.lifecycle.allow_size_query()?;
        let embed_bytes = (self.embed.len() * std::mem::size_of::<Complex<T>>()) as u64;
        Ok(self.engine.plan_bytes() + embed_bytes)
    }

    fn init_forward(&mut self) -> Result<(), ClientError> {
        self.lifecycle.advance(Phase::InitForward)?;
        if self.needs_embed() && self.embed.len() != self.n_total {
            self.embed = vec![Complex::new(T::zero(), T::zero()); self.n_total];
        }
        self.engine.plan(&self.extents, Direction::Forward)
    }

    fn init_inverse(&mut self) -> Result<(), ClientError> {
        self.lifecycle.advance(Phase::InitInverse)?;
        self.engine.plan(&self.extents, Direction::Inverse)
    }

    fn upload(&mut self, input: &HostBuffer) -> Result<(), ClientError> {
        self.lifecycle.advance(Phase::Upload)?;
        self.check_host_layout(input)?;
        match &mut self.sig {
            Signal::C2cOut { time, .. } => {
                time.copy_from_slice(T::complex_slice(input).unwrap());
            }
            Signal::C2cIn { buf } => {
                buf.copy_from_slice(T::complex_slice(input).unwrap());
            }
            Signal::R2cOut { time, .. } => {
                time.copy_from_slice(T::real_slice(input).unwrap());
            }
            Signal::R2cIn { buf } => {
                for (i, &r) in T::real_slice(input).unwrap().iter().enumerate() {
                    write_slot(buf, i, r);
                }
            }
            Signal::Unallocated => unreachable!("lifecycle guards allocation"),
        }
        Ok(())
    }

    fn execute_forward(&mut self) -> Result<(), ClientError> {
        self.lifecycle.advance(Phase::ExecuteForward)?;
        match &mut self.sig {
            Signal::C2cOut { time, freq } => {
                freq.copy_from_slice(time);
                self.engine.run(Direction::Forward, freq)
            }
            Signal::C2cIn { buf } => self.engine.run(Direction::Forward, buf),
            Signal::R2cOut { time, spec } => {
                for (e, &r) in self.embed.iter_mut().zip(time.iter()) {
                    *e = Complex::new(r, T::zero());
                }
                self.engine.run(Direction::Forward, &mut self.embed)?;
                pack_half_spectrum_into(&self.embed, &self.extents, spec);
                Ok(())
            }
            Signal::R2cIn { buf } => {
                for i in 0..self.n_total {
                    self.embed[i] = Complex::new(read_slot(buf, i), T::zero());
                }
                self.engine.run(Direction::Forward, &mut self.embed)?;
                pack_half_spectrum_into(&self.embed, &self.extents, &mut buf[..]);
                Ok(())
            }
            Signal::Unallocated => unreachable!("lifecycle guards allocation"),
        }
    }

    fn execute_inverse(&mut self) -> Result<(), ClientError> {
        self.lifecycle.advance(Phase::ExecuteInverse)?;
        match &mut self.sig {
            Signal::C2cOut { time, freq } => {
                time.copy_from_slice(freq);
                self.engine.run(Direction::Inverse, time)
            }
            Signal::C2cIn { buf } => self.engine.run(Direction::Inverse, buf),
            Signal::R2cOut { time, spec } => {
                unpack_half_spectrum_into(spec, &self.extents, &mut self.embed);
                self.engine.run(Direction::Inverse, &mut self.embed)?;
                for (r, e) in time.iter_mut().zip(self.embed.iter()) {
                    *r = e.re;
                }
                Ok(())
            }
            Signal::R2cIn { buf } => {
                unpack_half_spectrum_into(buf, &self.extents, &mut self.embed);
                self.engine.run(Direction::Inverse, &mut self.embed)?;
                for i in 0..self.n_total {
                    let re = self.embed[i].re;
                    write_slot(buf, i, re);
                }
                Ok(())
            }
            Signal::Unallocated => unreachable!("lifecycle guards allocation"),
        }?;
        if self.needs_embed() {
            self.residue_check()?;
        }
        Ok(())
    }

    fn download(&mut self, output: &mut HostBuffer) -> Result<(), ClientError> {
        self.lifecycle.advance(Phase::Download)?;
        self.check_host_layout(output)?;
        match &self.sig {
            Signal::C2cOut { time, .. } => {
                T::complex_slice_mut(output).unwrap().copy_from_slice(time);
            }
            Signal::C2cIn { buf } => {
                T::complex_slice_mut(output).unwrap().copy_from_slice(buf);
            }
            Signal::R2cOut { time, .. } => {
                T::real_slice_mut(output).unwrap().copy_from_slice(time);
            }
            Signal::R2cIn { buf } => {
                let out = T::real_slice_mut(output).unwrap();
                for (i, o) in out.iter_mut().enumerate() {
                    *o = read_slot(buf, i);
                }
            }
            Signal::Unallocated => unreachable!("lifecycle guards allocation"),
        }
        Ok(())
    }

    fn destroy(&mut self) -> Result<(), ClientError> {
        self.lifecycle.advance(Phase::Destroy)?;
        self.sig = Signal::Unallocated;
        self.embed = Vec::new();
        self.engine.release();
        Ok(())
    }
}
