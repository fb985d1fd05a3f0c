//! Backend-facing lifecycle contract and the driver that walks it.
//!
//! A client is constructed per benchmark run and driven through
//! construct -> allocate -> init_forward -> [init_inverse when plans are
//! built up front] -> upload -> execute_forward -> [init_inverse otherwise]
//! -> execute_inverse -> download -> destroy -> destruct. Construction is
//! the factory call and destruction is `Drop`; built-in clients keep both
//! trivial and do all buffer work in allocate/destroy. Calls outside the
//! legal order are rejected, never silently reordered.

pub mod builtin;
pub mod mock;

use std::fmt;
use std::time::Instant;

use num_complex::Complex;
use thiserror::Error;

pub use builtin::{make_builtin_client, BuiltinFactory, BUILTIN_TITLES};

use crate::harness::{BenchmarkCase, PhaseTimings};
use crate::model::{MemoryMode, Precision, RadixClass, TransformKind};

/// Lifecycle step names, used for error provenance and record statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Construct,
    Allocate,
    InitForward,
    InitInverse,
    Upload,
    ExecuteForward,
    ExecuteInverse,
    Download,
    Destroy,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Construct => "construct",
            Phase::Allocate => "allocate",
            Phase::InitForward => "init_forward",
            Phase::InitInverse => "init_inverse",
            Phase::Upload => "upload",
            Phase::ExecuteForward => "execute_forward",
            Phase::ExecuteInverse => "execute_inverse",
            Phase::Download => "download",
            Phase::Destroy => "destroy",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "construct" => Phase::Construct,
            "allocate" => Phase::Allocate,
            "init_forward" => Phase::InitForward,
            "init_inverse" => Phase::InitInverse,
            "upload" => Phase::Upload,
            "execute_forward" => Phase::ExecuteForward,
            "execute_inverse" => Phase::ExecuteInverse,
            "download" => Phase::Download,
            "destroy" => Phase::Destroy,
            _ => return None,
        })
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClientError {
    #[error("case not supported: {reason}")]
    Unsupported { reason: String },
    #[error("unknown client title '{title}'")]
    UnknownClient { title: String },
    #[error("{op} called in state {state}")]
    OutOfOrder {
        op: &'static str,
        state: &'static str,
    },
    #[error("host buffer mismatch: expected {expected}, got {got}")]
    BufferMismatch { expected: String, got: String },
    #[error("{message}")]
    Backend { message: String },
}

/// Failure of one lifecycle phase, carrying which phase it happened in.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("phase={phase}: {error}")]
pub struct PhaseFailure {
    pub phase: Phase,
    pub error: ClientError,
}

/// Static capability flags of a client.
///
/// `normalizes_inverse` marks clients whose round-trip output is already
/// scaled by 1/n; the harness normalizes for everyone else. `plans_upfront`
/// marks clients that need both plans before the round trip starts.
#[derive(Clone, Copy)]
pub struct ClientCapabilities {
    pub normalizes_inverse: bool,
    pub plans_upfront: bool,
    supports: fn(TransformKind, MemoryMode, Precision, RadixClass) -> bool,
}

impl ClientCapabilities {
    pub fn new(normalizes_inverse: bool, plans_upfront: bool) -> Self {
        Self {
            normalizes_inverse,
            plans_upfront,
            supports: |_, _, _, _| true,
        }
    }

    pub fn with_supports(
        mut self,
        supports: fn(TransformKind, MemoryMode, Precision, RadixClass) -> bool,
    ) -> Self {
        self.supports = supports;
        self
    }

    /// Whether the client handles this combination of transform axes.
    pub fn supports(
        &self,
        kind: TransformKind,
        mode: MemoryMode,
        precision: Precision,
        radix: RadixClass,
    ) -> bool {
        (self.supports)(kind, mode, precision, radix)
    }
}

impl fmt::Debug for ClientCapabilities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClientCapabilities")
            .field("normalizes_inverse", &self.normalizes_inverse)
            .field("plans_upfront", &self.plans_upfront)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    Constructed,
    Allocated,
    ForwardPlanned,
    BothPlanned,
    Uploaded,
    ForwardDone,
    InversePlanned,
    InverseDone,
    Downloaded,
    Destroyed,
}

impl Stage {
    fn name(self) -> &'static str {
        match self {
            Stage::Constructed => "constructed",
            Stage::Allocated => "allocated",
            Stage::ForwardPlanned => "forward_planned",
            Stage::BothPlanned => "both_planned",
            Stage::Uploaded => "uploaded",
            Stage::ForwardDone => "forward_done",
            Stage::InversePlanned => "inverse_planned",
            Stage::InverseDone => "inverse_done",
            Stage::Downloaded => "downloaded",
            Stage::Destroyed => "destroyed",
        }
    }
}

/// Call-order state machine shared by client implementations.
///
/// `destroy` is legal from any state and idempotent; size queries are legal
/// any time after `allocate`.
#[derive(Debug)]
pub struct Lifecycle {
    stage: Stage,
    plans_upfront: bool,
}

impl Lifecycle {
    pub fn new(plans_upfront: bool) -> Self {
        Self {
            stage: Stage::Constructed,
            plans_upfront,
        }
    }

    fn reject(&self, op: &'static str) -> ClientError {
        ClientError::OutOfOrder {
            op,
            state: self.stage.name(),
        }
    }

    pub fn advance(&mut self, op: Phase) -> Result<(), ClientError> {
        use Stage::*;
        let next = match op {
            Phase::Construct => return Err(self.reject("construct")),
            Phase::Allocate => match self.stage {
                Constructed => Allocated,
                _ => return Err(self.reject("allocate")),
            },
            Phase::InitForward => match self.stage {
                Allocated => ForwardPlanned,
                _ => return Err(self.reject("init_forward")),
            },
            Phase::InitInverse => match (self.plans_upfront, self.stage) {
                (true, ForwardPlanned) => BothPlanned,
                (false, ForwardDone) => InversePlanned,
                _ => return Err(self.reject("init_inverse")),
            },
            Phase::Upload => match (self.plans_upfront, self.stage) {
                (true, BothPlanned) | (false, ForwardPlanned) => Uploaded,
                _ => return Err(self.reject("upload")),
            },
            Phase::ExecuteForward => match self.stage {
                Uploaded => ForwardDone,
                _ => return Err(self.reject("execute_forward")),
            },
            Phase::ExecuteInverse => match (self.plans_upfront, self.stage) {
                (true, ForwardDone) | (false, InversePlanned) => InverseDone,
                _ => return Err(self.reject("execute_inverse")),
            },
            Phase::Download => match self.stage {
                InverseDone => Downloaded,
                _ => return Err(self.reject("download")),
            },
            Phase::Destroy => Destroyed,
        };
        self.stage = next;
        Ok(())
    }

    /// Size queries are legal any time after allocate, including after
    /// destroy (they answer from cached values).
    pub fn allow_size_query(&self) -> Result<(), ClientError> {
        if self.stage == Stage::Constructed {
            return Err(self.reject("size query"));
        }
        Ok(())
    }
}

/// Host-side signal buffer in one of the four element layouts.
#[derive(Debug, Clone, PartialEq)]
pub enum HostBuffer {
    RealF32(Vec<f32>),
    RealF64(Vec<f64>),
    ComplexF32(Vec<Complex<f32>>),
    ComplexF64(Vec<Complex<f64>>),
}

impl HostBuffer {
    /// Zeroed buffer of `elements` time-domain elements for a case's
    /// precision and transform kind.
    pub fn zeroed(precision: Precision, kind: TransformKind, elements: usize) -> Self {
        match (precision, kind) {
            (Precision::Single, TransformKind::RealToComplex) => {
                HostBuffer::RealF32(vec![0.0; elements])
            }
            (Precision::Double, TransformKind::RealToComplex) => {
                HostBuffer::RealF64(vec![0.0; elements])
            }
            (Precision::Single, TransformKind::ComplexToComplex) => {
                HostBuffer::ComplexF32(vec![Complex::new(0.0, 0.0); elements])
            }
            (Precision::Double, TransformKind::ComplexToComplex) => {
                HostBuffer::ComplexF64(vec![Complex::new(0.0, 0.0); elements])
            }
        }
    }

    pub fn elements(&self) -> usize {
        match self {
            HostBuffer::RealF32(v) => v.len(),
            HostBuffer::RealF64(v) => v.len(),
            HostBuffer::ComplexF32(v) => v.len(),
            HostBuffer::ComplexF64(v) => v.len(),
        }
    }

    /// Number of real scalar components (complex elements count twice).
    pub fn scalar_count(&self) -> usize {
        match self {
            HostBuffer::RealF32(_) | HostBuffer::RealF64(_) => self.elements(),
            HostBuffer::ComplexF32(_) | HostBuffer::ComplexF64(_) => self.elements() * 2,
        }
    }

    pub fn byte_len(&self) -> u64 {
        match self {
            HostBuffer::RealF32(v) => (v.len() * 4) as u64,
            HostBuffer::RealF64(v) => (v.len() * 8) as u64,
            HostBuffer::ComplexF32(v) => (v.len() * 8) as u64,
            HostBuffer::ComplexF64(v) => (v.len() * 16) as u64,
        }
    }

    /// Scalar component at flat index, widened to f64. Complex elements
    /// interleave as re, im.
    pub fn scalar(&self, i: usize) -> f64 {
        match self {
            HostBuffer::RealF32(v) => v[i] as f64,
            HostBuffer::RealF64(v) => v[i],
            HostBuffer::ComplexF32(v) => {
                let c = v[i / 2];
                if i.is_multiple_of(2) {
                    c.re as f64
                } else {
                    c.im as f64
                }
            }
            HostBuffer::ComplexF64(v) => {
                let c = v[i / 2];
                if i.is_multiple_of(2) {
                    c.re
                } else {
                    c.im
                }
            }
        }
    }

    /// Divides every scalar component in place (harness-side
    /// normalization of unnormalized round trips).
    pub fn divide_all(&mut self, divisor: f64) {
        match self {
            HostBuffer::RealF32(v) => {
                let d = divisor as f32;
                v.iter_mut().for_each(|x| *x /= d);
            }
            HostBuffer::RealF64(v) => v.iter_mut().for_each(|x| *x /= divisor),
            HostBuffer::ComplexF32(v) => {
                let d = divisor as f32;
                v.iter_mut()
                    .for_each(|x| *x = Complex::new(x.re / d, x.im / d));
            }
            HostBuffer::ComplexF64(v) => {
                v.iter_mut()
                    .for_each(|x| *x = Complex::new(x.re / divisor, x.im / divisor));
            }
        }
    }

    pub fn layout_name(&self) -> &'static str {
        match self {
            HostBuffer::RealF32(_) => "real f32",
            HostBuffer::RealF64(_) => "real f64",
            HostBuffer::ComplexF32(_) => "complex f32",
            HostBuffer::ComplexF64(_) => "complex f64",
        }
    }
}

/// The lifecycle interface an FFT backend implements.
///
/// Construction happens in the factory, destruction in `Drop`; both must
/// stay trivial compared to allocate/destroy so that the timed phases
/// capture the real work. Size queries are side-effect free and legal any
/// time after allocate. `destroy` must be idempotent and dropping after
/// destroy must never fail.
pub trait FftClient {
    fn capabilities(&self) -> ClientCapabilities;

    fn allocate(&mut self) -> Result<(), ClientError>;
    fn get_alloc_size(&self) -> Result<u64, ClientError>;
    fn get_transfer_size(&self) -> Result<u64, ClientError>;
    fn get_plan_size(&self) -> Result<u64, ClientError>;
    fn init_forward(&mut self) -> Result<(), ClientError>;
    fn init_inverse(&mut self) -> Result<(), ClientError>;
    fn upload(&mut self, input: &HostBuffer) -> Result<(), ClientError>;
    fn execute_forward(&mut self) -> Result<(), ClientError>;
    fn execute_inverse(&mut self) -> Result<(), ClientError>;
    fn download(&mut self, output: &mut HostBuffer) -> Result<(), ClientError>;
    fn destroy(&mut self) -> Result<(), ClientError>;

    /// Backend-side measurement of the phase that just completed, in
    /// milliseconds. Adapters with library clocks (device events and the
    /// like) return Some and the driver records that value in place of its
    /// host wall-clock reading. The default keeps the harness clock.
    fn backend_phase_ms(&self, phase: Phase) -> Option<f64> {
        let _ = phase;
        None
    }
}

/// Constructs clients for benchmark cases. `Unsupported` errors mark cases
/// the harness records and skips; other errors are construct failures.
pub trait ClientFactory {
    fn construct(&self, case: &BenchmarkCase) -> Result<Box<dyn FftClient>, ClientError>;
}

/// Routes construction across several factories by client title: each is
/// tried in order and `UnknownClient` moves on to the next.
pub struct CompositeFactory {
    factories: Vec<Box<dyn ClientFactory>>,
}

impl CompositeFactory {
    pub fn new(factories: Vec<Box<dyn ClientFactory>>) -> Self {
        Self { factories }
    }
}

impl ClientFactory for CompositeFactory {
    fn construct(&self, case: &BenchmarkCase) -> Result<Box<dyn FftClient>, ClientError> {
        for factory in &self.factories {
            match factory.construct(case) {
                Err(ClientError::UnknownClient { .. }) => continue,
                other => return other,
            }
        }
        Err(ClientError::UnknownClient {
            title: case.client_title.clone(),
        })
    }
}

/// Per-suite context: created once before the first case, destroyed after
/// the last, timed separately from benchmark runs.
pub trait BenchContext {
    fn create(&mut self) -> Result<(), ClientError>;
    fn destroy(&mut self) -> Result<(), ClientError>;
    fn title(&self) -> String;
    fn device_description(&self) -> String;
}

/// Host-only context for the built-in clients. The device hint is echoed
/// into result metadata, not validated against hardware.
pub struct HostContext {
    device_hint: String,
    created: bool,
}

impl HostContext {
    pub fn new(device_hint: impl Into<String>) -> Self {
        Self {
            device_hint: device_hint.into(),
            created: false,
        }
    }
}

impl BenchContext for HostContext {
    fn create(&mut self) -> Result<(), ClientError> {
        if self.created {
            return Err(ClientError::Backend {
                message: "context already created".into(),
            });
        }
        self.created = true;
        Ok(())
    }

    fn destroy(&mut self) -> Result<(), ClientError> {
        self.created = false;
        Ok(())
    }

    fn title(&self) -> String {
        "builtin-host".into()
    }

    fn device_description(&self) -> String {
        format!("host ({})", self.device_hint)
    }
}

/// Buffer sizes captured from a client during a round trip.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RoundtripSizes {
    pub alloc_bytes: u64,
    pub transfer_bytes: u64,
    pub plan_bytes: u64,
}

fn timed<F>(phase: Phase, slot: &mut f64, mut op: F) -> Result<(), PhaseFailure>
where
    F: FnMut() -> Result<(), ClientError>,
{
    let start = Instant::now();
    let result = op();
    *slot = start.elapsed().as_secs_f64() * 1e3;
    result.map_err(|error| PhaseFailure { phase, error })
}

/// Drives one full round trip over a freshly constructed client, timing
/// every phase. `total_ms` spans allocate through destroy inclusive; the
/// drop at the end (destruct) is untimed. On failure the error names the
/// phase and later lifecycle phases are not invoked.
pub fn execute_roundtrip(
    mut client: Box<dyn FftClient>,
    input: &HostBuffer,
    output: &mut HostBuffer,
) -> Result<(PhaseTimings, RoundtripSizes), PhaseFailure> {
    let caps = client.capabilities();
    let mut t = PhaseTimings::default();
    let backend = |client: &dyn FftClient, phase: Phase, slot: &mut f64| {
        if let Some(ms) = client.backend_phase_ms(phase) {
            *slot = ms;
        }
    };

    let total_start = Instant::now();
    timed(Phase::Allocate, &mut t.allocate_ms, || client.allocate())?;
    backend(&*client, Phase::Allocate, &mut t.allocate_ms);
    timed(Phase::InitForward, &mut t.init_forward_ms, || {
        client.init_forward()
    })?;
    backend(&*client, Phase::InitForward, &mut t.init_forward_ms);
    if caps.plans_upfront {
        timed(Phase::InitInverse, &mut t.init_inverse_ms, || {
            client.init_inverse()
        })?;
        backend(&*client, Phase::InitInverse, &mut t.init_inverse_ms);
    }
    timed(Phase::Upload, &mut t.upload_ms, || client.upload(input))?;
    backend(&*client, Phase::Upload, &mut t.upload_ms);
    timed(Phase::ExecuteForward, &mut t.execute_forward_ms, || {
        client.execute_forward()
    })?;
    backend(&*client, Phase::ExecuteForward, &mut t.execute_forward_ms);
    if !caps.plans_upfront {
        timed(Phase::InitInverse, &mut t.init_inverse_ms, || {
            client.init_inverse()
        })?;
        backend(&*client, Phase::InitInverse, &mut t.init_inverse_ms);
    }
    timed(Phase::ExecuteInverse, &mut t.execute_inverse_ms, || {
        client.execute_inverse()
    })?;
    backend(&*client, Phase::ExecuteInverse, &mut t.execute_inverse_ms);
    timed(Phase::Download, &mut t.download_ms, || {
        client.download(output)
    })?;
    backend(&*client, Phase::Download, &mut t.download_ms);
    let sizes = RoundtripSizes {
        alloc_bytes: client.get_alloc_size().unwrap_or(0),
        transfer_bytes: client.get_transfer_size().unwrap_or(0),
        plan_bytes: client.get_plan_size().unwrap_or(0),
    };
    timed(Phase::Destroy, &mut t.destroy_ms, || client.destroy())?;
    backend(&*client, Phase::Destroy, &mut t.destroy_ms);
    t.total_ms = total_start.elapsed().as_secs_f64() * 1e3;

    drop(client);
    Ok((t, sizes))
}
