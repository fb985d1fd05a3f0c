//! Benchmark orchestration: builds the case tree, fills inputs, runs
//! warmups and repetitions with phase timing, validates round trips and
//! keeps going when individual configurations fail.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use thiserror::Error;

use crate::client::{
    execute_roundtrip, BenchContext, ClientError, ClientFactory, HostBuffer, Phase,
};
use crate::model::{
    classify_radix, total_elements, Extents, MemoryMode, PlanEffort, Precision, RadixClass,
    TransformKind,
};
use crate::results::{ResultSet, SuiteMetadata};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("axis '{axis}' must not be empty")]
    EmptyAxis { axis: &'static str },
    #[error("buffer length mismatch: input {input} vs roundtrip {roundtrip} scalars")]
    BufferLengthMismatch { input: usize, roundtrip: usize },
    #[error("validation needs at least 2 scalars, got {n}")]
    BufferTooShort { n: usize },
    #[error("context creation failed: {0}")]
    ContextCreation(ClientError),
}

/// One point in the benchmark tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BenchmarkCase {
    pub client_title: String,
    pub precision: Precision,
    pub extents: Extents,
    pub kind: TransformKind,
    pub mode: MemoryMode,
    pub plan_effort: PlanEffort,
}

impl BenchmarkCase {
    pub fn new(
        client_title: impl Into<String>,
        precision: Precision,
        extents: Extents,
        kind: TransformKind,
        mode: MemoryMode,
    ) -> Self {
        Self {
            client_title: client_title.into(),
            precision,
            extents,
            kind,
            mode,
            plan_effort: PlanEffort::default(),
        }
    }

    /// Combined transform token, e.g. "Inplace_Real".
    pub fn kind_mode_token(&self) -> String {
        format!("{}_{}", self.mode.token(), self.kind.token())
    }

    /// Case identity: "title/precision/extents/kind_mode". The plan-effort
    /// hint is not part of the identity.
    pub fn case_id(&self) -> String {
        format!(
            "{}/{}/{}/{}",
            self.client_title,
            self.precision.token(),
            self.extents,
            self.kind_mode_token()
        )
    }

    pub fn radix_class(&self) -> RadixClass {
        classify_radix(&self.extents)
    }
}

/// Knobs of one suite execution.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    /// Unrecorded runs before the measured ones.
    pub warmups: u32,
    /// Recorded runs per case; must be >= 1.
    pub repetitions: u32,
    /// Round-trip validation bound on epsilon; must be > 0.
    pub error_bound: f64,
    /// Keep running later repetitions and cases after a failure.
    pub continue_on_error: bool,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            warmups: 1,
            repetitions: 10,
            error_bound: 1e-5,
            continue_on_error: true,
        }
    }
}

impl RunSettings {
    fn assert_valid(&self) {
        assert!(self.repetitions >= 1, "repetitions must be >= 1");
        assert!(
            self.error_bound > 0.0 && self.error_bound.is_finite(),
            "error bound must be positive"
        );
    }
}

/// Wall-clock milliseconds of each lifecycle phase of one run. `total_ms`
/// spans allocate through destroy inclusive and therefore bounds the sum
/// of the eight phases from above.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimings {
    pub allocate_ms: f64,
    pub init_forward_ms: f64,
    pub init_inverse_ms: f64,
    pub upload_ms: f64,
    pub execute_forward_ms: f64,
    pub execute_inverse_ms: f64,
    pub download_ms: f64,
    pub destroy_ms: f64,
    pub total_ms: f64,
}

impl PhaseTimings {
    /// Sum of the eight individually timed phases (excludes total).
    pub fn phase_sum_ms(&self) -> f64 {
        self.allocate_ms
            + self.init_forward_ms
            + self.init_inverse_ms
            + self.upload_ms
            + self.execute_forward_ms
            + self.execute_inverse_ms
            + self.download_ms
            + self.destroy_ms
    }
}

/// Outcome of one recorded run.
#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Ok,
    ValidationFailed,
    Unsupported,
    PhaseError { phase: Phase, message: String },
}

impl RunStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, RunStatus::Ok)
    }
}

/// One repetition's record: phase timings, buffer sizes, validation
/// outcome. Epsilon is present exactly when the round trip completed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub case: BenchmarkCase,
    pub run_index: u32,
    pub timings: PhaseTimings,
    pub alloc_bytes: u64,
    pub transfer_bytes: u64,
    pub plan_bytes: u64,
    pub epsilon: Option<f64>,
    pub status: RunStatus,
}

impl RunRecord {
    pub fn case_id(&self) -> String {
        self.case.case_id()
    }

    fn failed(case: &BenchmarkCase, run_index: u32, status: RunStatus) -> Self {
        Self {
            case: case.clone(),
            run_index,
            timings: PhaseTimings::default(),
            alloc_bytes: 0,
            transfer_bytes: 0,
            plan_bytes: 0,
            epsilon: None,
            status,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationResult {
    pub epsilon: f64,
    pub passed: bool,
}

pub const SEESAW_PERIOD: usize = 32;

/// Fills the buffer with the periodic ramp value(i) = (i mod period) /
/// period, i counting elements. Complex buffers get the ramp in the real
/// part, zero imaginary. All values lie in [0, 1).
pub fn fill_seesaw(buffer: &mut HostBuffer, period: usize) {
    assert!(period >= 2, "see-saw period must be >= 2");
    let ramp = |i: usize| (i % period) as f64 / period as f64;
    match buffer {
        HostBuffer::RealF32(v) => {
            for (i, x) in v.iter_mut().enumerate() {
                *x = ramp(i) as f32;
            }
        }
        HostBuffer::RealF64(v) => {
            for (i, x) in v.iter_mut().enumerate() {
                *x = ramp(i);
            }
        }
        HostBuffer::ComplexF32(v) => {
            for (i, x) in v.iter_mut().enumerate() {
                *x = num_complex::Complex::new(ramp(i) as f32, 0.0);
            }
        }
        HostBuffer::ComplexF64(v) => {
            for (i, x) in v.iter_mut().enumerate() {
                *x = num_complex::Complex::new(ramp(i), 0.0);
            }
        }
    }
}

/// Round-trip error: epsilon = sqrt(sum_i (input_i - roundtrip_i)^2 /
/// (n - 1)) over scalar components, with no mean subtraction, so constant
/// offsets are flagged. Passes when epsilon <= bound.
pub fn validate(
    input: &HostBuffer,
    roundtrip: &HostBuffer,
    bound: f64,
) -> Result<ValidationResult, HarnessError> {
    let n = input.scalar_count();
    if n != roundtrip.scalar_count() {
        return Err(HarnessError::BufferLengthMismatch {
            input: n,
            roundtrip: roundtrip.scalar_count(),
        });
    }
    if n < 2 {
        return Err(HarnessError::BufferTooShort { n });
    }
    let mut sum_sq = 0.0f64;
    for i in 0..n {
        let d = input.scalar(i) - roundtrip.scalar(i);
        sum_sq += d * d;
    }
    let epsilon = (sum_sq / (n - 1) as f64).sqrt();
    Ok(ValidationResult {
        epsilon,
        passed: epsilon <= bound,
    })
}

/// Cartesian product of the axes in deterministic order: client, then
/// precision, then extents (in given order), then kind, then mode. Cases a
/// client cannot run stay in the tree and later record as unsupported.
pub fn build_benchmark_tree(
    clients: &[String],
    extents_list: &[Extents],
    precisions: &[Precision],
    kinds: &[TransformKind],
    modes: &[MemoryMode],
) -> Result<Vec<BenchmarkCase>, HarnessError> {
    if clients.is_empty() {
        return Err(HarnessError::EmptyAxis { axis: "clients" });
    }
    if extents_list.is_empty() {
        return Err(HarnessError::EmptyAxis { axis: "extents" });
    }
    if precisions.is_empty() {
        return Err(HarnessError::EmptyAxis { axis: "precisions" });
    }
    if kinds.is_empty() {
        return Err(HarnessError::EmptyAxis { axis: "kinds" });
    }
    if modes.is_empty() {
        return Err(HarnessError::EmptyAxis { axis: "modes" });
    }
    let mut tree = Vec::new();
    for client in clients {
        for &precision in precisions {
            for extents in extents_list {
                for &kind in kinds {
                    for &mode in modes {
                        tree.push(BenchmarkCase::new(
                            client.clone(),
                            precision,
                            extents.clone(),
                            kind,
                            mode,
                        ));
                    }
                }
            }
        }
    }
    Ok(tree)
}

fn seesaw_input(case: &BenchmarkCase) -> HostBuffer {
    let n = total_elements(&case.extents) as usize;
    let mut buf = HostBuffer::zeroed(case.precision, case.kind, n);
    fill_seesaw(&mut buf, SEESAW_PERIOD);
    buf
}

/// Runs one case: `settings.warmups` unrecorded runs, then
/// `settings.repetitions` recorded ones. Every run constructs a fresh
/// client, uploads a copy of the pristine see-saw input, executes the
/// round trip, normalizes when the client does not, and validates.
///
/// An unsupported case yields a single `Unsupported` record; a construct
/// failure a single `PhaseError` record tagged `construct`. With
/// `continue_on_error` unset the case stops at its first failure.
pub fn run_case(
    case: &BenchmarkCase,
    factory: &dyn ClientFactory,
    settings: &RunSettings,
) -> Vec<RunRecord> {
    settings.assert_valid();
    // probe construction once so unsupported cases record exactly one entry
    let probe = match factory.construct(case) {
        Ok(client) => client,
        Err(ClientError::Unsupported { .. }) => {
            return vec![RunRecord::failed(case, 0, RunStatus::Unsupported)];
        }
        Err(err) => {
            return vec![RunRecord::failed(
                case,
                0,
                RunStatus::PhaseError {
                    phase: Phase::Construct,
                    message: err.to_string(),
                },
            )];
        }
    };

    let pristine = seesaw_input(case);
    let n = total_elements(&case.extents) as usize;
    let mut output = HostBuffer::zeroed(case.precision, case.kind, n);

    let mut warmup_client = Some(probe);
    for _ in 0..settings.warmups {
        let client = match warmup_client.take() {
            Some(c) => c,
            None => match factory.construct(case) {
                Ok(c) => c,
                Err(_) => break,
            },
        };
        let _ = execute_roundtrip(client, &pristine, &mut output);
    }
    drop(warmup_client);

    let mut records = Vec::with_capacity(settings.repetitions as usize);
    for rep in 0..settings.repetitions {
        let client = match factory.construct(case) {
            Ok(c) => c,
            Err(err) => {
                let status = match err {
                    ClientError::Unsupported { .. } => RunStatus::Unsupported,
                    other => RunStatus::PhaseError {
                        phase: Phase::Construct,
                        message: other.to_string(),
                    },
                };
                records.push(RunRecord::failed(case, rep, status));
                if settings.continue_on_error {
                    continue;
                }
                break;
            }
        };
        let normalizes = client.capabilities().normalizes_inverse;
        match execute_roundtrip(client, &pristine, &mut output) {
            Err(failure) => {
                records.push(RunRecord::failed(
                    case,
                    rep,
                    RunStatus::PhaseError {
                        phase: failure.phase,
                        message: failure.error.to_string(),
                    },
                ));
                if !settings.continue_on_error {
                    break;
                }
            }
            Ok((timings, sizes)) => {
                if !normalizes {
                    output.divide_all(n as f64);
                }
                let validation = match validate(&pristine, &output, settings.error_bound) {
                    Ok(v) => v,
                    Err(e) => {
                        records.push(RunRecord::failed(
                            case,
                            rep,
                            RunStatus::PhaseError {
                                phase: Phase::Download,
                                message: e.to_string(),
                            },
                        ));
                        if !settings.continue_on_error {
                            break;
                        }
                        continue;
                    }
                };
                let status = if validation.passed {
                    RunStatus::Ok
                } else {
                    RunStatus::ValidationFailed
                };
                records.push(RunRecord {
                    case: case.clone(),
                    run_index: rep,
                    timings,
                    alloc_bytes: sizes.alloc_bytes,
                    transfer_bytes: sizes.transfer_bytes,
                    plan_bytes: sizes.plan_bytes,
                    epsilon: Some(validation.epsilon),
                    status,
                });
                if !validation.passed && !settings.continue_on_error {
                    break;
                }
            }
        }
    }
    records
}

/// Runs every case of the tree in order on one thread, collecting all
/// records. Case failures never abort the suite while
/// `continue_on_error` is set; only context creation is fatal. Context
/// create/destroy are timed once into the suite metadata.
pub fn run_suite(
    context: &mut dyn BenchContext,
    tree: &[BenchmarkCase],
    factory: &dyn ClientFactory,
    settings: &RunSettings,
) -> Result<ResultSet, HarnessError> {
    run_suite_with_progress(context, tree, factory, settings, |_, _| {})
}

/// [`run_suite`] with a per-case observer, called with each case and its
/// freshly collected records.
pub fn run_suite_with_progress(
    context: &mut dyn BenchContext,
    tree: &[BenchmarkCase],
    factory: &dyn ClientFactory,
    settings: &RunSettings,
    mut progress: impl FnMut(&BenchmarkCase, &[RunRecord]),
) -> Result<ResultSet, HarnessError> {
    settings.assert_valid();
    let timestamp_epoch_s = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);

    let start = Instant::now();
    context.create().map_err(HarnessError::ContextCreation)?;
    let context_create_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut records = Vec::new();
    let mut abort = false;
    for case in tree {
        let case_records = run_case(case, factory, settings);
        progress(case, &case_records);
        if !settings.continue_on_error && case_records.iter().any(|r| !r.status.is_ok()) {
            abort = true;
        }
        records.extend(case_records);
        if abort {
            break;
        }
    }

    let start = Instant::now();
    let _ = context.destroy();
    let context_destroy_ms = start.elapsed().as_secs_f64() * 1e3;

    Ok(ResultSet {
        metadata: SuiteMetadata {
            timestamp_epoch_s,
            context_title: context.title(),
            device: context.device_description(),
            warmups: settings.warmups,
            repetitions: settings.repetitions,
            error_bound: settings.error_bound,
            continue_on_error: settings.continue_on_error,
            context_create_ms,
            context_destroy_ms,
        },
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(dims: &[u64]) -> Extents {
        Extents::new(dims).unwrap()
    }

    #[test]
    fn seesaw_values() {
        let mut buf = HostBuffer::RealF64(vec![0.0; 40]);
        fill_seesaw(&mut buf, 32);
        assert_eq!(buf.scalar(0), 0.0);
        assert_eq!(buf.scalar(1), 0.03125);
        assert_eq!(buf.scalar(33), 0.03125);
        for i in 0..40 {
            let v = buf.scalar(i);
            assert!((0.0..1.0).contains(&v));
        }
    }

    #[test]
    fn seesaw_period_two_alternates() {
        let mut buf = HostBuffer::RealF64(vec![0.0; 6]);
        fill_seesaw(&mut buf, 2);
        assert_eq!(
            (0..6).map(|i| buf.scalar(i)).collect::<Vec<_>>(),
            vec![0.0, 0.5, 0.0, 0.5, 0.0, 0.5]
        );
    }

    #[test]
    fn seesaw_complex_puts_ramp_in_real_part() {
        let mut buf = HostBuffer::ComplexF64(vec![num_complex::Complex::new(9.0, 9.0); 4]);
        fill_seesaw(&mut buf, 4);
        // scalars interleave re, im
        assert_eq!(buf.scalar(0), 0.0);
        assert_eq!(buf.scalar(1), 0.0);
        assert_eq!(buf.scalar(2), 0.25);
        assert_eq!(buf.scalar(3), 0.0);
    }

    #[test]
    fn validate_identical_buffers() {
        let a = HostBuffer::RealF64(vec![1.0, 2.0, 3.0]);
        let v = validate(&a, &a.clone(), 1e-5).unwrap();
        assert_eq!(v.epsilon, 0.0);
        assert!(v.passed);
    }

    #[test]
    fn validate_single_offset_element() {
        let a = HostBuffer::RealF64(vec![0.0; 5]);
        let mut b = vec![0.0; 5];
        b[2] = 1e-3;
        let v = validate(&a, &HostBuffer::RealF64(b), 1e-5).unwrap();
        assert!((v.epsilon - 5e-4).abs() < 1e-12);
        assert!(!v.passed);
    }

    #[test]
    fn validate_uniform_small_offset_passes() {
        let n = 101;
        let a = HostBuffer::RealF64(vec![0.5; n]);
        let b = HostBuffer::RealF64(vec![0.5 + 1e-6; n]);
        let v = validate(&a, &b, 1e-5).unwrap();
        let expected = 1e-6 * (n as f64 / (n - 1) as f64).sqrt();
        assert!((v.epsilon - expected).abs() < 1e-12);
        assert!(v.passed);
    }

    #[test]
    fn validate_rejects_mismatched_or_tiny_buffers() {
        let a = HostBuffer::RealF64(vec![0.0; 4]);
        let b = HostBuffer::RealF64(vec![0.0; 5]);
        assert!(matches!(
            validate(&a, &b, 1e-5),
            Err(HarnessError::BufferLengthMismatch { .. })
        ));
        let tiny = HostBuffer::RealF64(vec![0.0]);
        assert!(matches!(
            validate(&tiny, &tiny.clone(), 1e-5),
            Err(HarnessError::BufferTooShort { n: 1 })
        ));
    }

    #[test]
    fn tree_is_the_ordered_cartesian_product() {
        let clients = vec!["A".to_string()];
        let extents = vec![ext(&[16]), ext(&[32])];
        let precisions = vec![Precision::Single, Precision::Double];
        let kinds = vec![TransformKind::RealToComplex];
        let modes = vec![MemoryMode::InPlace];
        let tree = build_benchmark_tree(&clients, &extents, &precisions, &kinds, &modes).unwrap();
        assert_eq!(tree.len(), 4);
        let ids: Vec<String> = tree.iter().map(BenchmarkCase::case_id).collect();
        assert_eq!(
            ids,
            vec![
                "A/float/16/Inplace_Real",
                "A/float/32/Inplace_Real",
                "A/double/16/Inplace_Real",
                "A/double/32/Inplace_Real",
            ]
        );

        // determinism: same inputs, same order
        let again = build_benchmark_tree(&clients, &extents, &precisions, &kinds, &modes).unwrap();
        assert_eq!(tree, again);
    }

    #[test]
    fn tree_rejects_empty_axes() {
        let clients = vec!["A".to_string()];
        let err = build_benchmark_tree(
            &clients,
            &[],
            &[Precision::Single],
            &[TransformKind::RealToComplex],
            &[MemoryMode::InPlace],
        )
        .unwrap_err();
        assert_eq!(err, HarnessError::EmptyAxis { axis: "extents" });
    }

    #[test]
    fn case_id_renders_all_four_fields() {
        let case = BenchmarkCase::new(
            "RefFFT",
            Precision::Single,
            ext(&[128, 128]),
            TransformKind::RealToComplex,
            MemoryMode::InPlace,
        );
        assert_eq!(case.case_id(), "RefFFT/float/128x128/Inplace_Real");
        assert_eq!(case.radix_class(), RadixClass::PowerOfTwo);
        // the plan-effort hint defaults to estimate and stays out of the id
        assert_eq!(case.plan_effort, PlanEffort::Estimate);
    }
}
