//! Harness behavior: repetition protocol, failure isolation, suite
//! assembly and input immutability.

use fftbench_core::client::mock::{MockBehavior, MockFactory};
use fftbench_core::client::BUILTIN_TITLES;
use fftbench_core::harness::fill_seesaw;
use fftbench_core::{
    build_benchmark_tree, execute_roundtrip, make_builtin_client, run_case, run_suite,
    BenchmarkCase, BuiltinFactory, CompositeFactory, Extents, HostBuffer, HostContext, MemoryMode,
    Phase, Precision, RunSettings, RunStatus, TransformKind,
};

fn ext(dims: &[u64]) -> Extents {
    Extents::new(dims).unwrap()
}

fn quick_settings(reps: u32) -> RunSettings {
    RunSettings {
        warmups: 0,
        repetitions: reps,
        ..RunSettings::default()
    }
}

#[test]
fn defaults_produce_ten_ok_records_numbered_in_order() {
    let case = BenchmarkCase::new(
        "RefFFT",
        Precision::Single,
        ext(&[32, 32, 32]),
        TransformKind::RealToComplex,
        MemoryMode::OutOfPlace,
    );
    let records = run_case(&case, &BuiltinFactory, &RunSettings::default());
    assert_eq!(records.len(), 10);
    for (i, r) in records.iter().enumerate() {
        assert_eq!(r.run_index, i as u32);
        assert!(r.status.is_ok(), "run {i}: {:?}", r.status);
        let eps = r.epsilon.expect("completed run records epsilon");
        assert!(eps <= 1e-5);
        assert!(r.alloc_bytes > 0 && r.transfer_bytes > 0 && r.plan_bytes > 0);
    }
}

#[test]
fn corrupting_client_fails_validation_but_keeps_running() {
    let factory = MockFactory::new(
        "Corrupt",
        MockBehavior {
            corrupt_roundtrip: true,
            ..MockBehavior::default()
        },
    );
    let case = BenchmarkCase::new(
        "Corrupt",
        Precision::Double,
        ext(&[64]),
        TransformKind::ComplexToComplex,
        MemoryMode::OutOfPlace,
    );
    let records = run_case(&case, &factory, &quick_settings(5));
    assert_eq!(records.len(), 5);
    for r in &records {
        assert_eq!(r.status, RunStatus::ValidationFailed);
        assert!(r.epsilon.unwrap() > 1e-5);
    }
}

#[test]
fn oversized_naive_case_records_one_unsupported_entry() {
    let case = BenchmarkCase::new(
        "NaiveDFT",
        Precision::Double,
        ext(&[1024, 1024]),
        TransformKind::ComplexToComplex,
        MemoryMode::OutOfPlace,
    );
    let records = run_case(&case, &BuiltinFactory, &RunSettings::default());
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].status, RunStatus::Unsupported);
    assert_eq!(records[0].epsilon, None);
}

#[test]
fn phase_error_is_recorded_per_repetition() {
    let factory = MockFactory::new(
        "Flaky",
        MockBehavior {
            fail_in: Some(Phase::ExecuteInverse),
            ..MockBehavior::default()
        },
    );
    let case = BenchmarkCase::new(
        "Flaky",
        Precision::Double,
        ext(&[16]),
        TransformKind::ComplexToComplex,
        MemoryMode::OutOfPlace,
    );
    let records = run_case(&case, &factory, &quick_settings(3));
    assert_eq!(records.len(), 3);
    for r in &records {
        match &r.status {
            RunStatus::PhaseError { phase, .. } => assert_eq!(*phase, Phase::ExecuteInverse),
            other => panic!("expected phase error, got {other:?}"),
        }
        assert_eq!(r.epsilon, None);
    }
}

#[test]
fn suite_runs_the_whole_tree_and_counts_records() {
    let tree = build_benchmark_tree(
        &["RefFFT".to_string()],
        &[ext(&[16]), ext(&[32])],
        &[Precision::Single, Precision::Double],
        &[TransformKind::ComplexToComplex],
        &[MemoryMode::OutOfPlace],
    )
    .unwrap();
    assert_eq!(tree.len(), 4);
    let mut context = HostContext::new("cpu");
    let results = run_suite(
        &mut context,
        &tree,
        &BuiltinFactory,
        &RunSettings::default(),
    )
    .unwrap();
    assert_eq!(results.records.len(), 40);
    assert!(results.records.iter().all(|r| r.status.is_ok()));
    assert_eq!(results.metadata.repetitions, 10);
    assert_eq!(results.metadata.context_title, "builtin-host");
    assert!(results.metadata.device.contains("cpu"));
    assert!(results.metadata.context_create_ms >= 0.0);
}

#[test]
fn one_failing_client_does_not_abort_the_suite() {
    let tree = build_benchmark_tree(
        &["AlwaysFails".to_string(), "RefFFT".to_string()],
        &[ext(&[16]), ext(&[32]), ext(&[64])],
        &[Precision::Double],
        &[TransformKind::ComplexToComplex],
        &[MemoryMode::OutOfPlace],
    )
    .unwrap();
    let factory = CompositeFactory::new(vec![
        Box::new(MockFactory::new(
            "AlwaysFails",
            MockBehavior {
                fail_in: Some(Phase::ExecuteForward),
                ..MockBehavior::default()
            },
        )),
        Box::new(BuiltinFactory),
    ]);
    let mut context = HostContext::new("cpu");
    let results = run_suite(&mut context, &tree, &factory, &quick_settings(2)).unwrap();
    assert_eq!(results.records.len(), 12);
    let failed: Vec<_> = results
        .records
        .iter()
        .filter(|r| !r.status.is_ok())
        .collect();
    assert_eq!(failed.len(), 6);
    assert!(failed.iter().all(|r| r.case.client_title == "AlwaysFails"));
    let ok: Vec<_> = results
        .records
        .iter()
        .filter(|r| r.status.is_ok())
        .collect();
    assert_eq!(ok.len(), 6);
    assert!(ok.iter().all(|r| r.case.client_title == "RefFFT"));
}

#[test]
fn stop_on_error_aborts_after_the_failing_case() {
    let tree = build_benchmark_tree(
        &["AlwaysFails".to_string(), "RefFFT".to_string()],
        &[ext(&[16])],
        &[Precision::Double],
        &[TransformKind::ComplexToComplex],
        &[MemoryMode::OutOfPlace],
    )
    .unwrap();
    let factory = CompositeFactory::new(vec![
        Box::new(MockFactory::new(
            "AlwaysFails",
            MockBehavior {
                fail_in: Some(Phase::Allocate),
                ..MockBehavior::default()
            },
        )),
        Box::new(BuiltinFactory),
    ]);
    let settings = RunSettings {
        warmups: 0,
        repetitions: 3,
        continue_on_error: false,
        ..RunSettings::default()
    };
    let mut context = HostContext::new("cpu");
    let results = run_suite(&mut context, &tree, &factory, &settings).unwrap();
    // the failing case stops after its first repetition and the suite
    // never reaches the healthy client
    assert_eq!(results.records.len(), 1);
    assert!(!results.records[0].status.is_ok());
}

#[test]
fn empty_tree_still_yields_metadata() {
    let mut context = HostContext::new("gpu0");
    let results = run_suite(&mut context, &[], &BuiltinFactory, &RunSettings::default()).unwrap();
    assert!(results.records.is_empty());
    assert!(results.metadata.device.contains("gpu0"));
    assert_eq!(results.metadata.error_bound, 1e-5);
}

#[test]
fn pristine_input_is_bit_identical_after_runs() {
    let case = BenchmarkCase::new(
        "RefFFT",
        Precision::Double,
        ext(&[64]),
        TransformKind::ComplexToComplex,
        MemoryMode::InPlace,
    );
    let n = fftbench_core::total_elements(&case.extents) as usize;
    let mut pristine = HostBuffer::zeroed(case.precision, case.kind, n);
    fill_seesaw(&mut pristine, 32);
    let snapshot: Vec<u64> = (0..pristine.scalar_count())
        .map(|i| pristine.scalar(i).to_bits())
        .collect();

    let mut output = HostBuffer::zeroed(case.precision, case.kind, n);
    for _ in 0..3 {
        let client = make_builtin_client("RefFFT", &case).unwrap();
        execute_roundtrip(client, &pristine, &mut output).unwrap();
    }
    let after: Vec<u64> = (0..pristine.scalar_count())
        .map(|i| pristine.scalar(i).to_bits())
        .collect();
    assert_eq!(snapshot, after);
}

#[test]
fn run_case_is_reproducible_for_epsilons() {
    let case = BenchmarkCase::new(
        "RefFFT",
        Precision::Single,
        ext(&[1050]),
        TransformKind::ComplexToComplex,
        MemoryMode::OutOfPlace,
    );
    let a: Vec<Option<f64>> = run_case(&case, &BuiltinFactory, &quick_settings(3))
        .iter()
        .map(|r| r.epsilon)
        .collect();
    let b: Vec<Option<f64>> = run_case(&case, &BuiltinFactory, &quick_settings(3))
        .iter()
        .map(|r| r.epsilon)
        .collect();
    assert_eq!(a, b);
}

#[test]
fn builtin_titles_cover_both_clients() {
    assert_eq!(BUILTIN_TITLES, ["RefFFT", "NaiveDFT"]);
}
