//! Vendor-agnostic FFT benchmark suite.
//!
//! Drives FFT backends through a fixed lifecycle interface, times each
//! phase independently, validates round-trip numerical correctness and
//! collects per-run records for downstream statistical analysis. Two
//! built-in backends (a naive DFT reference and a fast arbitrary-size FFT)
//! make the suite runnable with no external FFT library; adapters for real
//! libraries plug in behind the same client interface.

pub mod client;
pub mod fft;
pub mod harness;
pub mod model;
pub mod results;

pub use client::{
    execute_roundtrip, make_builtin_client, BenchContext, BuiltinFactory, ClientCapabilities,
    ClientError, ClientFactory, CompositeFactory, FftClient, HostBuffer, HostContext, Phase,
    PhaseFailure,
};
pub use harness::{
    build_benchmark_tree, fill_seesaw, run_case, run_suite, run_suite_with_progress, validate,
    BenchmarkCase, PhaseTimings, RunRecord, RunSettings, RunStatus, ValidationResult,
};
pub use model::{
    classify_radix, signal_bytes, total_elements, transfer_bytes, Direction, Extents, MemoryMode,
    ModelError, PlanEffort, Precision, RadixClass, TransformKind,
};
pub use results::{
    aggregate, crossover, fit_scaling, planning_fraction, read_csv, write_csv, CaseStats, CsvError,
    PhaseStats, ResultSet, SizeSeries, Stats, SuiteMetadata,
};
