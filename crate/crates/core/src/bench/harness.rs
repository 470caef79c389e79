use std::collections::BTreeMap;
use std::fs::File;
use std::hint::black_box;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{execute, generate, verify, BenchSpec, Verification};
use crate::error::{Error, Result};
use crate::par;

/// Discarded runs before measurement starts.
pub const WARMUPS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarnessConfig {
    pub min_runs: usize,
    pub max_runs: usize,
    /// Measurement stops once the relative standard deviation drops below
    /// this, after at least `min_runs` runs.
    pub target_rel_stddev: f64,
    /// Run the module's verification after timing.
    pub verify: bool,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            min_runs: 10,
            max_runs: 50,
            target_rel_stddev: 0.03,
            verify: false,
        }
    }
}

impl HarnessConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_runs < 10 || self.max_runs < self.min_runs {
            return Err(Error::InvalidSpec(format!(
                "need 10 <= min_runs <= max_runs, got {} and {}",
                self.min_runs, self.max_runs
            )));
        }
        if self.target_rel_stddev.is_nan() || self.target_rel_stddev <= 0.0 {
            return Err(Error::InvalidSpec("stddev target must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub benchmark: String,
    pub params: BTreeMap<String, Value>,
    pub seed: u64,
    /// Worker count the pool actually ran with.
    pub threads: usize,
    pub warmups: usize,
    pub runs: usize,
    /// Wall time of every measured run, in seconds.
    pub times_s: Vec<f64>,
    pub mean_s: f64,
    pub stddev_rel: f64,
    /// False when the run cap was hit before the stddev target.
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flops: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gflops: Option<f64>,
    /// FNV-1a of the final output, hex.
    pub checksum: String,
    /// Seconds since the Unix epoch when measurement finished.
    pub timestamp: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation over the mean.
fn rel_stddev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
    if m > 0.0 {
        var.sqrt() / m
    } else {
        0.0
    }
}

pub fn run_bench(spec: &BenchSpec) -> Result<BenchReport> {
    run_bench_with(spec, &HarnessConfig::default())
}

/// Generates the input, runs [`WARMUPS`] discarded runs, then times runs
/// until the stddev target or the run cap is reached. Generation and
/// verification are outside the timed region.
pub fn run_bench_with(spec: &BenchSpec, cfg: &HarnessConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let input = generate(spec)?;
    let params = spec.params;

    let (times, output, threads) = par::with_threads(spec.threads, || -> Result<_> {
        for _ in 0..WARMUPS {
            black_box(execute(&params, &input)?);
        }
        let mut times = Vec::with_capacity(cfg.min_runs);
        let mut output = None;
        while times.len() < cfg.max_runs {
            let start = Instant::now();
            let out = black_box(execute(&params, &input)?);
            times.push(start.elapsed().as_secs_f64());
            output = Some(out);
            if times.len() >= cfg.min_runs && rel_stddev(&times) < cfg.target_rel_stddev {
                break;
            }
        }
        Ok((times, output.expect("at least one run"), par::current_threads()))
    })?;

    let verification = if cfg.verify {
        Some(par::with_threads(spec.threads, || {
            verify(&params, &input, &output)
        })?)
    } else {
        None
    };
    let mean_s = mean(&times);
    let stddev_rel = rel_stddev(&times);
    let flops = params.flops();
    Ok(BenchReport {
        benchmark: params.benchmark().name().to_string(),
        params: params.to_map(),
        seed: spec.seed,
        threads,
        warmups: WARMUPS,
        runs: times.len(),
        converged: stddev_rel < cfg.target_rel_stddev,
        gflops: flops.map(|f| f as f64 / mean_s / 1e9),
        flops,
        mean_s,
        stddev_rel,
        times_s: times,
        checksum: format!("{:016x}", output.checksum()),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        verification,
    })
}

/// Outcome of [`verify_spec`]: one untimed run plus its verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub benchmark: String,
    pub params: BTreeMap<String, Value>,
    pub seed: u64,
    pub threads: usize,
    pub checksum: String,
    #[serde(flatten)]
    pub verification: Verification,
}

/// Generates the input, runs the kernel once and verifies the output.
pub fn verify_spec(spec: &BenchSpec) -> Result<VerifyReport> {
    let input = generate(spec)?;
    let params = spec.params;
    let (output, verification, threads) = par::with_threads(spec.threads, || -> Result<_> {
        let output = execute(&params, &input)?;
        let v = verify(&params, &input, &output)?;
        Ok((output, v, par::current_threads()))
    })?;
    Ok(VerifyReport {
        benchmark: params.benchmark().name().to_string(),
        params: params.to_map(),
        seed: spec.seed,
        threads,
        checksum: format!("{:016x}", output.checksum()),
        verification,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::InvalidSpec(format!("unknown format `{s}` (json or csv)"))),
        }
    }
}

pub const CSV_HEADER: [&str; 15] = [
    "benchmark",
    "params",
    "seed",
    "threads",
    "warmups",
    "runs",
    "mean_s",
    "stddev_rel",
    "converged",
    "flops",
    "gflops",
    "checksum",
    "timestamp",
    "verified",
    "times_s",
];

fn csv_row(r: &BenchReport) -> Vec<String> {
    let params = params_cell(&r.params);
    let opt = |v: Option<String>| v.unwrap_or_default();
    vec![
        r.benchmark.clone(),
        params,
        r.seed.to_string(),
        r.threads.to_string(),
        r.warmups.to_string(),
        r.runs.to_string(),
        r.mean_s.to_string(),
        r.stddev_rel.to_string(),
        r.converged.to_string(),
        opt(r.flops.map(|f| f.to_string())),
        opt(r.gflops.map(|g| g.to_string())),
        r.checksum.clone(),
        r.timestamp.to_string(),
        opt(r.verification.as_ref().map(|v| v.passed.to_string())),
        r.times_s
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(";"),
    ]
}

fn params_cell(params: &BTreeMap<String, Value>) -> String {
    params
        .iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn csv_table(header: &[&str], row: Vec<String>) -> Result<String> {
    let to_err = |e: String| Error::InvalidSpec(format!("csv encoding: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| to_err(e.to_string()))?;
    w.write_record(row).map_err(|e| to_err(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| to_err(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// The report as a JSON object or as a CSV header plus one row.
pub fn render(report: &BenchReport, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(json_text(report)),
        Format::Csv => csv_table(&CSV_HEADER, csv_row(report)),
    }
}

pub const VERIFY_CSV_HEADER: [&str; 8] = [
    "benchmark",
    "params",
    "seed",
    "threads",
    "checksum",
    "passed",
    "method",
    "detail",
];

pub fn render_verify(report: &VerifyReport, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(json_text(report)),
        Format::Csv => csv_table(
            &VERIFY_CSV_HEADER,
            vec![
                report.benchmark.clone(),
                params_cell(&report.params),
                report.seed.to_string(),
                report.threads.to_string(),
                report.checksum.clone(),
                report.verification.passed.to_string(),
                report.verification.method.clone(),
                report.verification.detail.clone(),
            ],
        ),
    }
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn write_output(text: &str, path: Option<&Path>) -> Result<()> {
    let (result, shown) = match path {
        Some(path) => (
            File::create(path).and_then(|mut f| f.write_all(text.as_bytes())),
            path.to_path_buf(),
        ),
        None => (io::stdout().lock().write_all(text.as_bytes()), "<stdout>".into()),
    };
    result.map_err(|source| Error::Io { path: shown, source })
}

/// Renders the report and writes it to `path` or stdout.
pub fn emit(report: &BenchReport, format: Format, path: Option<&Path>) -> Result<()> {
    write_output(&render(report, format)?, path)
}
