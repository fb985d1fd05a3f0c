//! Result persistence and analysis: the versioned CSV format, per-case
//! aggregate statistics, planning fraction, crossover detection and the
//! log-log scaling-exponent fit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::client::Phase;
use crate::harness::{BenchmarkCase, PhaseTimings, RunRecord, RunStatus};
use crate::model::{Extents, MemoryMode, Precision, RadixClass, TransformKind};

pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: &str = "library,case_id,rank,extents,radix_class,precision,kind,mode,\
run_index,status,epsilon,alloc_bytes,transfer_bytes,plan_bytes,allocate_ms,init_forward_ms,\
init_inverse_ms,upload_ms,execute_forward_ms,execute_inverse_ms,download_ms,destroy_ms,total_ms";

const CSV_COLUMNS: usize = 23;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("header mismatch: expected the schema-1 column set, got '{got}'")]
    HeaderMismatch { got: String },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("metadata key '{key}' missing")]
    MissingMetadata { key: &'static str },
    #[error("line {line}: unknown metadata key '{key}'")]
    UnknownMetadata { line: usize, key: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("size series needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("size series bytes must be strictly increasing at point {index}")]
    NotIncreasing { index: usize },
    #[error("metric at point {index} must be positive for the log-log fit")]
    NonPositiveMetric { index: usize },
    #[error("series do not share the same byte grid")]
    MismatchedGrids,
    #[error("case '{case_id}' has no ok records")]
    NoOkRecords { case_id: String },
    #[error("case '{case_id}' has zero mean total time")]
    ZeroTotalTime { case_id: String },
}

/// Suite-level context for a result file; always present, even with no
/// records.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteMetadata {
    pub timestamp_epoch_s: u64,
    pub context_title: String,
    pub device: String,
    pub warmups: u32,
    pub repetitions: u32,
    pub error_bound: f64,
    pub continue_on_error: bool,
    pub context_create_ms: f64,
    pub context_destroy_ms: f64,
}

/// Everything one suite execution produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultSet {
    pub metadata: SuiteMetadata,
    pub records: Vec<RunRecord>,
}

/// Renders a real with 9 significant digits, '.' decimal separator.
pub fn format_real(v: f64) -> String {
    format!("{v:.8e}")
}

fn sanitize(message: &str) -> String {
    message.replace(',', ";").replace(['\n', '\r'], " ")
}

fn status_text(status: &RunStatus) -> String {
    match status {
        RunStatus::Ok => "ok".to_string(),
        RunStatus::ValidationFailed => "validation_failed".to_string(),
        RunStatus::Unsupported => "unsupported".to_string(),
        RunStatus::PhaseError { phase, message } => {
            format!("phase_error({}: {})", phase.name(), sanitize(message))
        }
    }
}

fn parse_status(text: &str) -> Option<RunStatus> {
    match text {
        "ok" => return Some(RunStatus::Ok),
        "validation_failed" => return Some(RunStatus::ValidationFailed),
        "unsupported" => return Some(RunStatus::Unsupported),
        _ => {}
    }
    let inner = text.strip_prefix("phase_error(")?.strip_suffix(')')?;
    let (phase, message) = inner.split_once(": ")?;
    Some(RunStatus::PhaseError {
        phase: Phase::from_name(phase)?,
        message: message.to_string(),
    })
}

/// Serializes a result set in the schema-1 CSV format: "# key=value"
/// metadata comments, one header row, one row per record.
pub fn render_csv(results: &ResultSet) -> String {
    let m = &results.metadata;
    let mut out = String::new();
    let _ = writeln!(out, "# schema={CSV_SCHEMA_VERSION}");
    let _ = writeln!(out, "# timestamp={}", m.timestamp_epoch_s);
    let _ = writeln!(out, "# context={}", sanitize(&m.context_title));
    let _ = writeln!(out, "# device={}", sanitize(&m.device));
    let _ = writeln!(out, "# warmups={}", m.warmups);
    let _ = writeln!(out, "# repetitions={}", m.repetitions);
    let _ = writeln!(out, "# error_bound={}", format_real(m.error_bound));
    let _ = writeln!(out, "# continue_on_error={}", m.continue_on_error);
    let _ = writeln!(
        out,
        "# context_create_ms={}",
        format_real(m.context_create_ms)
    );
    let _ = writeln!(
        out,
        "# context_destroy_ms={}",
        format_real(m.context_destroy_ms)
    );
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &results.records {
        let t = &r.timings;
        let epsilon = r.epsilon.map(format_real).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.case.client_title,
            r.case.case_id(),
            r.case.extents.rank(),
            r.case.extents,
            r.case.radix_class().token(),
            r.case.precision.token(),
            r.case.kind.token(),
            r.case.mode.token(),
            r.run_index,
            status_text(&r.status),
            epsilon,
            r.alloc_bytes,
            r.transfer_bytes,
            r.plan_bytes,
            format_real(t.allocate_ms),
            format_real(t.init_forward_ms),
            format_real(t.init_inverse_ms),
            format_real(t.upload_ms),
            format_real(t.execute_forward_ms),
            format_real(t.execute_inverse_ms),
            format_real(t.download_ms),
            format_real(t.destroy_ms),
            format_real(t.total_ms),
        );
    }
    out
}

/// Writes [`render_csv`] output to a file.
pub fn write_csv(results: &ResultSet, path: &Path) -> Result<(), CsvError> {
    std::fs::write(path, render_csv(results))?;
    Ok(())
}

struct MetadataBuilder {
    map: BTreeMap<String, String>,
}

impl MetadataBuilder {
    fn take(&mut self, key: &'static str) -> Result<String, CsvError> {
        self.map
            .remove(key)
            .ok_or(CsvError::MissingMetadata { key })
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &'static str) -> Result<T, CsvError> {
        let raw = self.take(key)?;
        raw.parse().map_err(|_| CsvError::Malformed {
            line: 0,
            reason: format!("metadata '{key}' has unparsable value '{raw}'"),
        })
    }
}

/// Parses the output of [`render_csv`]. Unknown columns and unknown
/// metadata keys are rejected; malformed rows report their line number.
pub fn parse_csv(text: &str) -> Result<ResultSet, CsvError> {
    let mut meta = BTreeMap::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((lineno, line)) = lines.peek().copied() {
        let Some(comment) = line.strip_prefix('#') else {
            break;
        };
        let comment = comment.trim_start();
        let (key, value) = comment.split_once('=').ok_or(CsvError::Malformed {
            line: lineno + 1,
            reason: "metadata comment is not 'key=value'".into(),
        })?;
        const KNOWN: [&str; 10] = [
            "schema",
            "timestamp",
            "context",
            "device",
            "warmups",
            "repetitions",
            "error_bound",
            "continue_on_error",
            "context_create_ms",
            "context_destroy_ms",
        ];
        if !KNOWN.contains(&key) {
            return Err(CsvError::UnknownMetadata {
                line: lineno + 1,
                key: key.to_string(),
            });
        }
        meta.insert(key.to_string(), value.to_string());
        lines.next();
    }
    let mut meta = MetadataBuilder { map: meta };
    let schema: u32 = meta.parse("schema")?;
    if schema != CSV_SCHEMA_VERSION {
        return Err(CsvError::Malformed {
            line: 1,
            reason: format!("unsupported schema version {schema}"),
        });
    }
    let metadata = SuiteMetadata {
        timestamp_epoch_s: meta.parse("timestamp")?,
        context_title: meta.take("context")?,
        device: meta.take("device")?,
        warmups: meta.parse("warmups")?,
        repetitions: meta.parse("repetitions")?,
        error_bound: meta.parse("error_bound")?,
        continue_on_error: meta.parse("continue_on_error")?,
        context_create_ms: meta.parse("context_create_ms")?,
        context_destroy_ms: meta.parse("context_destroy_ms")?,
    };

    let (header_line, header) = lines.next().ok_or(CsvError::Malformed {
        line: 1,
        reason: "missing header row".into(),
    })?;
    if header != CSV_HEADER {
        let _ = header_line;
        return Err(CsvError::HeaderMismatch {
            got: header.to_string(),
        });
    }

    let mut records = Vec::new();
    for (lineno, line) in lines {
        if line.is_empty() {
            continue;
        }
        let line_no = lineno + 1;
        let malformed = |reason: String| CsvError::Malformed {
            line: line_no,
            reason,
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != CSV_COLUMNS {
            return Err(malformed(format!(
                "expected {CSV_COLUMNS} columns, got {}",
                fields.len()
            )));
        }
        let parse_u64 = |s: &str, what: &str| -> Result<u64, CsvError> {
            s.parse()
                .map_err(|_| malformed(format!("unparsable {what} '{s}'")))
        };
        let parse_f64 = |s: &str, what: &str| -> Result<f64, CsvError> {
            s.parse()
                .map_err(|_| malformed(format!("unparsable {what} '{s}'")))
        };

        let library = fields[0].to_string();
        let case_id = fields[1];
        let rank = parse_u64(fields[2], "rank")?;
        let extents: Extents = fields[3].parse().map_err(|e| malformed(format!("{e}")))?;
        let radix = RadixClass::from_token(fields[4])
            .ok_or_else(|| malformed(format!("unknown radix class '{}'", fields[4])))?;
        let precision = Precision::from_token(fields[5])
            .ok_or_else(|| malformed(format!("unknown precision '{}'", fields[5])))?;
        let kind = TransformKind::from_token(fields[6])
            .ok_or_else(|| malformed(format!("unknown kind '{}'", fields[6])))?;
        let mode = MemoryMode::from_token(fields[7])
            .ok_or_else(|| malformed(format!("unknown mode '{}'", fields[7])))?;
        let run_index = parse_u64(fields[8], "run_index")? as u32;
        let status = parse_status(fields[9])
            .ok_or_else(|| malformed(format!("unknown status '{}'", fields[9])))?;
        let epsilon = if fields[10].is_empty() {
            None
        } else {
            Some(parse_f64(fields[10], "epsilon")?)
        };

        let case = BenchmarkCase::new(library, precision, extents, kind, mode);
        if case.extents.rank() as u64 != rank {
            return Err(malformed(format!(
                "rank {rank} does not match extents {}",
                case.extents
            )));
        }
        if case.radix_class() != radix {
            return Err(malformed(format!(
                "radix class '{}' does not match extents {}",
                fields[4], case.extents
            )));
        }
        if case.case_id() != case_id {
            return Err(malformed(format!(
                "case id '{case_id}' does not match row fields ('{}')",
                case.case_id()
            )));
        }

        let timings = PhaseTimings {
            allocate_ms: parse_f64(fields[14], "allocate_ms")?,
            init_forward_ms: parse_f64(fields[15], "init_forward_ms")?,
            init_inverse_ms: parse_f64(fields[16], "init_inverse_ms")?,
            upload_ms: parse_f64(fields[17], "upload_ms")?,
            execute_forward_ms: parse_f64(fields[18], "execute_forward_ms")?,
            execute_inverse_ms: parse_f64(fields[19], "execute_inverse_ms")?,
            download_ms: parse_f64(fields[20], "download_ms")?,
            destroy_ms: parse_f64(fields[21], "destroy_ms")?,
            total_ms: parse_f64(fields[22], "total_ms")?,
        };
        records.push(RunRecord {
            case,
            run_index,
            timings,
            alloc_bytes: parse_u64(fields[11], "alloc_bytes")?,
            transfer_bytes: parse_u64(fields[12], "transfer_bytes")?,
            plan_bytes: parse_u64(fields[13], "plan_bytes")?,
            epsilon,
            status,
        });
    }
    Ok(ResultSet { metadata, records })
}

/// Reads a file written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<ResultSet, CsvError> {
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text)
}

/// Mean, sample standard deviation (n-1 divisor), min and max of one phase
/// over the ok records of a case. Single-record groups report a stddev of
/// zero and set the flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseStats {
    pub mean_ms: f64,
    pub stddev_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
    pub single_sample: bool,
}

fn phase_stats(values: &[f64]) -> PhaseStats {
    let n = values.len();
    debug_assert!(n > 0);
    let mean = values.iter().sum::<f64>() / n as f64;
    let stddev = if n > 1 {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    PhaseStats {
        mean_ms: mean,
        stddev_ms: stddev,
        min_ms: values.iter().copied().fold(f64::INFINITY, f64::min),
        max_ms: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        single_sample: n == 1,
    }
}

/// Per-phase statistics of one case; present only when the case has ok
/// records.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseStatsSet {
    pub allocate: PhaseStats,
    pub init_forward: PhaseStats,
    pub init_inverse: PhaseStats,
    pub upload: PhaseStats,
    pub execute_forward: PhaseStats,
    pub execute_inverse: PhaseStats,
    pub download: PhaseStats,
    pub destroy: PhaseStats,
    pub total: PhaseStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseStats {
    pub case_id: String,
    pub n_ok: usize,
    pub n_failed: usize,
    pub phases: Option<PhaseStatsSet>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Stats {
    /// One entry per case id, sorted by case id.
    pub cases: Vec<CaseStats>,
}

impl Stats {
    pub fn case(&self, case_id: &str) -> Option<&CaseStats> {
        self.cases.iter().find(|c| c.case_id == case_id)
    }
}

/// Groups records by case id and reduces the ok ones to per-phase mean,
/// sample standard deviation, min and max. Record order does not matter:
/// groups are keyed by id and canonicalized by run index before reduction.
pub fn aggregate(results: &ResultSet) -> Stats {
    let mut groups: BTreeMap<String, Vec<&RunRecord>> = BTreeMap::new();
    for r in &results.records {
        groups.entry(r.case_id()).or_default().push(r);
    }
    let mut cases = Vec::with_capacity(groups.len());
    for (case_id, mut group) in groups {
        group.sort_by_key(|r| r.run_index);
        let ok: Vec<&RunRecord> = group.iter().copied().filter(|r| r.status.is_ok()).collect();
        let n_ok = ok.len();
        let n_failed = group.len() - n_ok;
        let phases = if n_ok > 0 {
            let collect = |f: fn(&PhaseTimings) -> f64| -> Vec<f64> {
                ok.iter().map(|r| f(&r.timings)).collect()
            };
            Some(PhaseStatsSet {
                allocate: phase_stats(&collect(|t| t.allocate_ms)),
                init_forward: phase_stats(&collect(|t| t.init_forward_ms)),
                init_inverse: phase_stats(&collect(|t| t.init_inverse_ms)),
                upload: phase_stats(&collect(|t| t.upload_ms)),
                execute_forward: phase_stats(&collect(|t| t.execute_forward_ms)),
                execute_inverse: phase_stats(&collect(|t| t.execute_inverse_ms)),
                download: phase_stats(&collect(|t| t.download_ms)),
                destroy: phase_stats(&collect(|t| t.destroy_ms)),
                total: phase_stats(&collect(|t| t.total_ms)),
            })
        } else {
            None
        };
        cases.push(CaseStats {
            case_id,
            n_ok,
            n_failed,
            phases,
        });
    }
    Stats { cases }
}

/// Share of the mean total time spent planning: (mean init_forward + mean
/// init_inverse) / mean total.
pub fn planning_fraction(stats: &CaseStats) -> Result<f64, AnalysisError> {
    let phases = stats
        .phases
        .as_ref()
        .ok_or_else(|| AnalysisError::NoOkRecords {
            case_id: stats.case_id.clone(),
        })?;
    if phases.total.mean_ms <= 0.0 {
        return Err(AnalysisError::ZeroTotalTime {
            case_id: stats.case_id.clone(),
        });
    }
    Ok((phases.init_forward.mean_ms + phases.init_inverse.mean_ms) / phases.total.mean_ms)
}

/// Ordered (signal bytes, mean metric ms) pairs, strictly increasing in
/// bytes.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeSeries {
    points: Vec<(u64, f64)>,
}

impl SizeSeries {
    pub fn new(points: Vec<(u64, f64)>) -> Result<Self, AnalysisError> {
        if points.len() < 2 {
            return Err(AnalysisError::TooFewPoints {
                needed: 2,
                got: points.len(),
            });
        }
        for i in 1..points.len() {
            if points[i].0 <= points[i - 1].0 {
                return Err(AnalysisError::NotIncreasing { index: i });
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(u64, f64)] {
        &self.points
    }
}

/// First size at which `a` overtakes `b`: the smallest grid point where
/// a > b strictly after a < b strictly at an earlier point, with ties
/// treated as not-yet-crossed. Returns None when the ordering never flips
/// that way, so at most one of crossover(a,b) and crossover(b,a) is Some
/// for the first flip of a grid.
pub fn crossover(a: &SizeSeries, b: &SizeSeries) -> Result<Option<u64>, AnalysisError> {
    let pa = a.points();
    let pb = b.points();
    if pa.len() != pb.len() || pa.iter().zip(pb).any(|(x, y)| x.0 != y.0) {
        return Err(AnalysisError::MismatchedGrids);
    }
    // sign of (a - b): -1 below, +1 above; ties keep the previous sign
    let mut last_sign = 0i8;
    for ((bytes, va), (_, vb)) in pa.iter().zip(pb) {
        let sign = if va < vb {
            -1i8
        } else if va > vb {
            1i8
        } else {
            0i8
        };
        if sign == 0 {
            continue;
        }
        if last_sign != 0 && sign != last_sign {
            // first strict ordering flip on this grid
            return Ok(if sign == 1 { Some(*bytes) } else { None });
        }
        last_sign = sign;
    }
    Ok(None)
}

/// Ordinary least-squares slope of log(metric) versus log(size). Slopes
/// are identical whether size is counted in bytes or elements, since the
/// per-element byte width is constant within a series.
pub fn fit_scaling(series: &SizeSeries) -> Result<f64, AnalysisError> {
    let points = series.points();
    if points.len() < 4 {
        return Err(AnalysisError::TooFewPoints {
            needed: 4,
            got: points.len(),
        });
    }
    for (i, (_, v)) in points.iter().enumerate() {
        if *v <= 0.0 {
            return Err(AnalysisError::NonPositiveMetric { index: i });
        }
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(b, _)| (*b as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, v)| v.ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mean_x) * (y - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
    }
    Ok(sxy / sxx)
}
