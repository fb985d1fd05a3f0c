//! Command-line front end: parses flags, builds and filters the benchmark
//! tree with wildcard patterns, runs the suite and writes the result CSV.

use std::path::PathBuf;

use thiserror::Error;

use fftbench_core::client::BUILTIN_TITLES;
use fftbench_core::harness::RunStatus;
use fftbench_core::{
    build_benchmark_tree, run_suite_with_progress, write_csv, BenchmarkCase, BuiltinFactory,
    ClientFactory, Extents, HostContext, MemoryMode, Precision, ResultSet, RunSettings,
    TransformKind,
};

pub const USAGE: &str = "\
fftbench - FFT benchmark suite over the built-in clients

USAGE:
    fftbench [OPTIONS]

OPTIONS:
    -e <extents>...        transform shapes, e.g. 128x128 1024 32x32x32
                           (default: 1D powers of two 32..4096 plus 32x32x32
                           and 128x128x128)
    -r <pattern>...        case filters, four '/'-separated fields
                           title/precision/extents/kind_mode, each a literal
                           or '*', e.g. */float/*/Inplace_Real; several
                           patterns combine as OR
    -d <device>            device hint echoed into result metadata
                           (default: cpu)
    -o <path>              output CSV path (default: result.csv)
    --warmups <n>          unrecorded warmup runs per case (default: 1)
    --repetitions <n>      recorded runs per case, >= 1 (default: 10)
    --error-bound <x>      round-trip validation bound (default: 1e-5)
    -l, --list             list matching case ids without running
    -v, --verbose          per-case progress on stderr
    -h, --help             this text

EXIT STATUS:
    0  every executed case validated (warnings possible)
    1  validation failures, phase errors or I/O trouble
    2  usage errors
";

#[derive(Debug, Error, PartialEq)]
pub enum CliError {
    #[error("unknown flag '{0}'")]
    UnknownFlag(String),
    #[error("unexpected token '{0}'")]
    UnexpectedToken(String),
    #[error("flag '{flag}' needs a value")]
    MissingValue { flag: String },
    #[error("bad extents token '{token}': {reason}")]
    BadExtents { token: String, reason: String },
    #[error("bad filter pattern '{token}': {reason}")]
    BadPattern { token: String, reason: String },
    #[error("flag '{flag}' has unparsable value '{token}'")]
    BadNumber { flag: String, token: String },
    #[error("repetitions must be positive, got {got}")]
    NonPositiveRepetitions { got: i64 },
    #[error("error bound must be positive, got {got}")]
    NonPositiveBound { got: f64 },
    #[error("help requested")]
    HelpRequested,
}

/// One `-r` selector: four '/'-separated fields
/// title/precision/extents/kind_mode, each a literal or the wildcard "*".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterPattern {
    pub title: String,
    pub precision: String,
    pub extents: String,
    pub kind_mode: String,
}

const KIND_MODE_TOKENS: [&str; 4] = [
    "Inplace_Real",
    "Outplace_Real",
    "Inplace_Complex",
    "Outplace_Complex",
];

impl FilterPattern {
    pub fn parse(token: &str) -> Result<Self, CliError> {
        let bad = |reason: &str| CliError::BadPattern {
            token: token.to_string(),
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = token.split('/').collect();
        if fields.len() != 4 {
            return Err(bad(&format!("expected 4 fields, got {}", fields.len())));
        }
        if fields.iter().any(|f| f.is_empty()) {
            return Err(bad("empty field"));
        }
        if fields[1] != "*" && Precision::from_token(fields[1]).is_none() {
            return Err(bad("precision must be 'float', 'double' or '*'"));
        }
        if fields[3] != "*" && !KIND_MODE_TOKENS.contains(&fields[3]) {
            return Err(bad(
                "kind_mode must be one of Inplace_Real, Outplace_Real, \
                 Inplace_Complex, Outplace_Complex or '*'",
            ));
        }
        Ok(Self {
            title: fields[0].to_string(),
            precision: fields[1].to_string(),
            extents: fields[2].to_string(),
            kind_mode: fields[3].to_string(),
        })
    }
}

/// True when every pattern field is "*" or equals the case's rendered
/// field.
pub fn match_filter(pattern: &FilterPattern, case: &BenchmarkCase) -> bool {
    let field = |pat: &str, value: &str| pat == "*" || pat == value;
    field(&pattern.title, &case.client_title)
        && field(&pattern.precision, case.precision.token())
        && field(&pattern.extents, &case.extents.to_string())
        && field(&pattern.kind_mode, &case.kind_mode_token())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliSettings {
    pub extents_list: Vec<Extents>,
    pub run_filters: Vec<FilterPattern>,
    pub device: String,
    pub output_path: PathBuf,
    pub warmups: u32,
    pub repetitions: u32,
    pub error_bound: f64,
    pub list_only: bool,
    pub verbose: bool,
}

impl Default for CliSettings {
    fn default() -> Self {
        let defaults = RunSettings::default();
        Self {
            extents_list: default_extents(),
            run_filters: Vec::new(),
            device: "cpu".into(),
            output_path: PathBuf::from("result.csv"),
            warmups: defaults.warmups,
            repetitions: defaults.repetitions,
            error_bound: defaults.error_bound,
            list_only: false,
            verbose: false,
        }
    }
}

impl CliSettings {
    pub fn run_settings(&self) -> RunSettings {
        RunSettings {
            warmups: self.warmups,
            repetitions: self.repetitions,
            error_bound: self.error_bound,
            continue_on_error: true,
        }
    }
}

/// Shapes benchmarked when no `-e` is given: a 1-D power-of-two sweep plus
/// a small and a large cube.
pub fn default_extents() -> Vec<Extents> {
    let mut list: Vec<Extents> = (5..=12)
        .map(|p| Extents::new(&[1u64 << p]).unwrap())
        .collect();
    list.push(Extents::new(&[32, 32, 32]).unwrap());
    list.push(Extents::new(&[128, 128, 128]).unwrap());
    list
}

/// Parses argv (without the program name). Every input either yields
/// settings or an error naming the offending token.
pub fn parse_args<S: AsRef<str>>(args: &[S]) -> Result<CliSettings, CliError> {
    let mut settings = CliSettings {
        extents_list: Vec::new(),
        ..CliSettings::default()
    };
    let mut i = 0;
    let is_flag =
        |s: &str| s.starts_with('-') && s.len() > 1 && !s.chars().nth(1).unwrap().is_ascii_digit();
    let mut saw_minus_e = false;

    while i < args.len() {
        let arg = args[i].as_ref();
        match arg {
            "-e" => {
                saw_minus_e = true;
                let mut any = false;
                while i + 1 < args.len() && !is_flag(args[i + 1].as_ref()) {
                    i += 1;
                    let token = args[i].as_ref();
                    let extents: Extents = token.parse().map_err(|e| CliError::BadExtents {
                        token: token.to_string(),
                        reason: format!("{e}"),
                    })?;
                    settings.extents_list.push(extents);
                    any = true;
                }
                if !any {
                    return Err(CliError::MissingValue { flag: "-e".into() });
                }
            }
            "-r" => {
                let mut any = false;
                while i + 1 < args.len() && !is_flag(args[i + 1].as_ref()) {
                    i += 1;
                    settings
                        .run_filters
                        .push(FilterPattern::parse(args[i].as_ref())?);
                    any = true;
                }
                if !any {
                    return Err(CliError::MissingValue { flag: "-r".into() });
                }
            }
            "-d" | "-o" | "--warmups" | "--repetitions" | "--error-bound" => {
                if i + 1 >= args.len() {
                    return Err(CliError::MissingValue { flag: arg.into() });
                }
                i += 1;
                let value = args[i].as_ref();
                match arg {
                    "-d" => settings.device = value.to_string(),
                    "-o" => settings.output_path = PathBuf::from(value),
                    "--warmups" => {
                        settings.warmups = value.parse().map_err(|_| CliError::BadNumber {
                            flag: "--warmups".into(),
                            token: value.to_string(),
                        })?;
                    }
                    "--repetitions" => {
                        let reps: i64 = value.parse().map_err(|_| CliError::BadNumber {
                            flag: "--repetitions".into(),
                            token: value.to_string(),
                        })?;
                        if reps <= 0 {
                            return Err(CliError::NonPositiveRepetitions { got: reps });
                        }
                        settings.repetitions = reps as u32;
                    }
                    "--error-bound" => {
                        let bound: f64 = value.parse().map_err(|_| CliError::BadNumber {
                            flag: "--error-bound".into(),
                            token: value.to_string(),
                        })?;
                        if !bound.is_finite() || bound <= 0.0 {
                            return Err(CliError::NonPositiveBound { got: bound });
                        }
                        settings.error_bound = bound;
                    }
                    _ => unreachable!(),
                }
            }
            "-l" | "--list" => settings.list_only = true,
            "-v" | "--verbose" => settings.verbose = true,
            "-h" | "--help" => return Err(CliError::HelpRequested),
            other if is_flag(other) => return Err(CliError::UnknownFlag(other.to_string())),
            other => return Err(CliError::UnexpectedToken(other.to_string())),
        }
        i += 1;
    }
    if !saw_minus_e {
        settings.extents_list = default_extents();
    }
    Ok(settings)
}

/// The full built-in benchmark tree for these settings, filtered by the
/// `-r` patterns (OR across patterns; no patterns keep everything).
pub fn build_filtered_tree(settings: &CliSettings) -> Vec<BenchmarkCase> {
    let clients: Vec<String> = BUILTIN_TITLES.iter().map(|s| s.to_string()).collect();
    let tree = build_benchmark_tree(
        &clients,
        &settings.extents_list,
        &[Precision::Single, Precision::Double],
        &[
            TransformKind::RealToComplex,
            TransformKind::ComplexToComplex,
        ],
        &[MemoryMode::InPlace, MemoryMode::OutOfPlace],
    )
    .expect("axes are never empty here");
    if settings.run_filters.is_empty() {
        return tree;
    }
    tree.into_iter()
        .filter(|case| settings.run_filters.iter().any(|p| match_filter(p, case)))
        .collect()
}

/// Exit status for a finished suite: 1 when any record failed validation
/// or errored in a phase, 0 otherwise (unsupported cases are skips, not
/// failures).
pub fn exit_status_for(results: &ResultSet) -> i32 {
    let failed = results.records.iter().any(|r| {
        matches!(
            r.status,
            RunStatus::ValidationFailed | RunStatus::PhaseError { .. }
        )
    });
    if failed {
        1
    } else {
        0
    }
}

/// Runs the suite for parsed settings over a caller-provided factory.
/// Returns the process exit status.
pub fn run_with_factory(
    settings: &CliSettings,
    factory: &dyn ClientFactory,
    clients: &[String],
) -> i32 {
    let tree = {
        let full = build_benchmark_tree(
            clients,
            &settings.extents_list,
            &[Precision::Single, Precision::Double],
            &[
                TransformKind::RealToComplex,
                TransformKind::ComplexToComplex,
            ],
            &[MemoryMode::InPlace, MemoryMode::OutOfPlace],
        )
        .expect("axes are never empty here");
        if settings.run_filters.is_empty() {
            full
        } else {
            full.into_iter()
                .filter(|case| settings.run_filters.iter().any(|p| match_filter(p, case)))
                .collect()
        }
    };

    if settings.list_only {
        use std::io::Write;
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        for case in &tree {
            // a closed pipe (e.g. piping into head) ends the listing early
            if writeln!(out, "{}", case.case_id()).is_err() {
                break;
            }
        }
        return 0;
    }
    if tree.is_empty() {
        eprintln!("warning: no cases match the given filters; writing empty result set");
    }

    let mut context = HostContext::new(settings.device.clone());
    let run_settings = settings.run_settings();
    let verbose = settings.verbose;
    let results = match run_suite_with_progress(
        &mut context,
        &tree,
        factory,
        &run_settings,
        |case, records| {
            if verbose {
                let ok = records.iter().filter(|r| r.status.is_ok()).count();
                let eps = records
                    .iter()
                    .filter_map(|r| r.epsilon)
                    .fold(0.0f64, f64::max);
                eprintln!(
                    "{}: {ok}/{} ok, max eps {eps:.3e}",
                    case.case_id(),
                    records.len()
                );
            }
        },
    ) {
        Ok(results) => results,
        Err(err) => {
            eprintln!("error: {err}");
            return 1;
        }
    };

    if let Err(err) = write_csv(&results, &settings.output_path) {
        eprintln!(
            "error: cannot write {}: {err}",
            settings.output_path.display()
        );
        return 1;
    }
    eprintln!(
        "wrote {} ({} records)",
        settings.output_path.display(),
        results.records.len()
    );
    exit_status_for(&results)
}

/// Default flow over the built-in clients.
pub fn main_flow(settings: &CliSettings) -> i32 {
    let clients: Vec<String> = BUILTIN_TITLES.iter().map(|s| s.to_string()).collect();
    run_with_factory(settings, &BuiltinFactory, &clients)
}
