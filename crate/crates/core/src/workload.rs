// SPDX-License-Identifier: Apache-2.0

//! Workload memory statistics and synthetic memory traces.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const FORMAT_TAG: &str = "# nvcache-dse v1";
pub const PROFILE_HEADER: &str =
    "name,phase,batch_size,l2_reads,l2_writes,dram_reads,dram_writes,exec_time_s";

/// Line granularity assumed by the hot-region size check.
pub const TRACE_LINE_BYTES: u64 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Phase {
    Inference,
    Training,
    #[serde(rename = "HPC")]
    Hpc,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Inference => "Inference",
            Phase::Training => "Training",
            Phase::Hpc => "HPC",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Phase {
    type Err = WorkloadError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inference" | "i" => Ok(Phase::Inference),
            "training" | "t" => Ok(Phase::Training),
            "hpc" => Ok(Phase::Hpc),
            _ => Err(WorkloadError::UnknownPhase(s.to_string())),
        }
    }
}

/// L2 and DRAM transaction counts for one workload run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorkloadStats {
    pub name: String,
    pub phase: Phase,
    pub batch_size: u32,
    pub l2_reads: u64,
    pub l2_writes: u64,
    pub dram_reads: u64,
    pub dram_writes: u64,
    pub exec_time_s: Option<f64>,
}

impl WorkloadStats {
    pub fn label(&self) -> String {
        format!("{}-{}", self.name, self.phase)
    }

    pub fn dram_transactions(&self) -> u64 {
        self.dram_reads + self.dram_writes
    }

    pub fn l2_transactions(&self) -> u64 {
        self.l2_reads + self.l2_writes
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WorkloadError {
    #[error("profile csv header mismatch: expected `{expected}`, found `{found}`")]
    SchemaMismatch { expected: &'static str, found: String },
    #[error("unsupported format tag `{0}` (expected `{FORMAT_TAG}`)")]
    UnsupportedVersion(String),
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("line {line}: negative count in column `{column}`")]
    NegativeCount { line: u64, column: &'static str },
    #[error("unknown phase `{0}`")]
    UnknownPhase(String),
    #[error("workload `{0}` has zero L2 writes")]
    ZeroWrites(String),
    #[error("invalid trace spec: {0}")]
    InvalidSpec(&'static str),
    #[error("trace line {line}: {message}")]
    Trace { line: usize, message: String },
}

/// Rejects documents tagged with a different format version.
fn check_tag(text: &str) -> Result<(), WorkloadError> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty());
    if let Some(line) = first {
        if let Some(rest) = line.strip_prefix("# nvcache-dse") {
            if line != FORMAT_TAG && !rest.starts_with(" v1 ") {
                return Err(WorkloadError::UnsupportedVersion(line.to_string()));
            }
        }
    }
    Ok(())
}

fn parse_count(raw: &str, line: u64, column: &'static str) -> Result<u64, WorkloadError> {
    let malformed = || WorkloadError::Malformed {
        line,
        message: format!("`{column}` is not a non-negative integer: `{raw}`"),
    };
    if let Ok(v) = raw.parse::<i64>() {
        return u64::try_from(v).map_err(|_| WorkloadError::NegativeCount { line, column });
    }
    // counts from profilers are often exported in scientific notation
    let v: f64 = raw.parse().map_err(|_| malformed())?;
    if v < 0.0 {
        return Err(WorkloadError::NegativeCount { line, column });
    }
    if !v.is_finite() || v.fract() != 0.0 || v > 9.007_199_254_740_992e15 {
        return Err(malformed());
    }
    Ok(v as u64)
}

/// Parses a profiler export into one validated record per row.
pub fn parse_profile_csv(text: &str) -> Result<Vec<WorkloadStats>, WorkloadError> {
    check_tag(text)?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| WorkloadError::Malformed { line: 1, message: e.to_string() })?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != PROFILE_HEADER {
        return Err(WorkloadError::SchemaMismatch { expected: PROFILE_HEADER, found: header });
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| WorkloadError::Malformed {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| record.get(i).unwrap_or("");
        let name = field(0);
        if name.is_empty() {
            return Err(WorkloadError::Malformed { line, message: "empty name".into() });
        }
        let batch = parse_count(field(2), line, "batch_size")?;
        if batch == 0 || batch > u64::from(u32::MAX) {
            return Err(WorkloadError::Malformed { line, message: "batch_size must be >= 1".into() });
        }
        let exec_time_s = match field(7) {
            "" => None,
            raw => match raw.parse::<f64>() {
                Ok(v) if v > 0.0 && v.is_finite() => Some(v),
                _ => {
                    return Err(WorkloadError::Malformed {
                        line,
                        message: format!("exec_time_s must be empty or > 0: `{raw}`"),
                    })
                }
            },
        };
        out.push(WorkloadStats {
            name: name.to_string(),
            phase: field(1).parse()?,
            batch_size: batch as u32,
            l2_reads: parse_count(field(3), line, "l2_reads")?,
            l2_writes: parse_count(field(4), line, "l2_writes")?,
            dram_reads: parse_count(field(5), line, "dram_reads")?,
            dram_writes: parse_count(field(6), line, "dram_writes")?,
            exec_time_s,
        });
    }
    Ok(out)
}

/// Serializes records in the profile CSV format, tag line included.
pub fn to_profile_csv(stats: &[WorkloadStats]) -> String {
    let mut out = format!("{FORMAT_TAG}\n{PROFILE_HEADER}\n");
    for s in stats {
        let exec = s.exec_time_s.map(|t| t.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            s.name, s.phase, s.batch_size, s.l2_reads, s.l2_writes, s.dram_reads, s.dram_writes, exec
        ));
    }
    out
}

/// L2 read/write transaction ratio.
pub fn rw_ratio(s: &WorkloadStats) -> Result<f64, WorkloadError> {
    if s.l2_writes == 0 {
        return Err(WorkloadError::ZeroWrites(s.name.clone()));
    }
    Ok(s.l2_reads as f64 / s.l2_writes as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Read,
    Write,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TraceEvent {
    pub op: Op,
    pub address: u64,
}

impl TraceEvent {
    pub fn read(address: u64) -> Self {
        TraceEvent { op: Op::Read, address }
    }

    pub fn write(address: u64) -> Self {
        TraceEvent { op: Op::Write, address }
    }
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.op {
            Op::Read => 'R',
            Op::Write => 'W',
        };
        write!(f, "{op} {:#x}", self.address)
    }
}

fn parse_event(line: &str, number: usize) -> Result<Option<TraceEvent>, WorkloadError> {
    let line = line.trim();
    if line.is_empty() || line.starts_with('#') {
        return Ok(None);
    }
    let err = |message: &str| WorkloadError::Trace { line: number, message: message.to_string() };
    let mut parts = line.split_whitespace();
    let op = match parts.next() {
        Some("R") | Some("r") => Op::Read,
        Some("W") | Some("w") => Op::Write,
        _ => return Err(err("expected `R` or `W`")),
    };
    let raw = parts.next().ok_or_else(|| err("missing address"))?;
    if parts.next().is_some() {
        return Err(err("trailing fields"));
    }
    let hex = raw.strip_prefix("0x").or_else(|| raw.strip_prefix("0X")).unwrap_or(raw);
    let address = u64::from_str_radix(hex, 16).map_err(|_| err("address is not hexadecimal"))?;
    Ok(Some(TraceEvent { op, address }))
}

/// Parses a whole trace document.
pub fn parse_trace(text: &str) -> Result<Vec<TraceEvent>, WorkloadError> {
    check_tag(text)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(ev) = parse_event(line, i + 1)? {
            out.push(ev);
        }
    }
    Ok(out)
}

/// Streams events from a buffered reader.
pub fn read_trace<R: BufRead>(reader: R) -> impl Iterator<Item = Result<TraceEvent, WorkloadError>> {
    reader.lines().enumerate().filter_map(|(i, line)| match line {
        Ok(line) => {
            if i == 0 {
                if let Err(e) = check_tag(&line) {
                    return Some(Err(e));
                }
            }
            parse_event(&line, i + 1).transpose()
        }
        Err(e) => Some(Err(WorkloadError::Trace { line: i + 1, message: e.to_string() })),
    })
}

pub fn write_trace<W: Write, I: IntoIterator<Item = TraceEvent>>(
    mut out: W,
    events: I,
) -> io::Result<()> {
    writeln!(out, "{FORMAT_TAG}")?;
    for ev in events {
        writeln!(out, "{ev}")?;
    }
    Ok(())
}

/// Parameters of the hot/cold two-region address model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticTraceSpec {
    pub length: u64,
    pub working_set_bytes: u64,
    pub hot_fraction: f64,
    pub hot_access_probability: f64,
    pub read_probability: f64,
    pub seed: u64,
}

impl SyntheticTraceSpec {
    pub fn validate(&self) -> Result<(), WorkloadError> {
        if self.length == 0 {
            return Err(WorkloadError::InvalidSpec("length must be > 0"));
        }
        if self.working_set_bytes == 0 {
            return Err(WorkloadError::InvalidSpec("working_set_bytes must be > 0"));
        }
        if !(self.hot_fraction > 0.0 && self.hot_fraction <= 1.0) {
            return Err(WorkloadError::InvalidSpec("hot_fraction must be in (0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.hot_access_probability) {
            return Err(WorkloadError::InvalidSpec("hot_access_probability must be in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.read_probability) {
            return Err(WorkloadError::InvalidSpec("read_probability must be in [0, 1]"));
        }
        if self.hot_bytes() < TRACE_LINE_BYTES {
            return Err(WorkloadError::InvalidSpec("hot region smaller than one cache line"));
        }
        Ok(())
    }

    /// Size of the hot region, which starts at address 0.
    pub fn hot_bytes(&self) -> u64 {
        ((self.hot_fraction * self.working_set_bytes as f64).floor() as u64).min(self.working_set_bytes)
    }
}

/// Deterministic event stream for a [`SyntheticTraceSpec`].
pub struct TraceGenerator {
    spec: SyntheticTraceSpec,
    hot_bytes: u64,
    remaining: u64,
    rng: ChaCha8Rng,
}

impl Iterator for TraceGenerator {
    type Item = TraceEvent;

    fn next(&mut self) -> Option<TraceEvent> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let op = if self.rng.random::<f64>() < self.spec.read_probability { Op::Read } else { Op::Write };
        let cold_bytes = self.spec.working_set_bytes - self.hot_bytes;
        let hot = cold_bytes == 0 || self.rng.random::<f64>() < self.spec.hot_access_probability;
        let address = if hot {
            self.rng.random_range(0..self.hot_bytes)
        } else {
            self.hot_bytes + self.rng.random_range(0..cold_bytes)
        };
        Some(TraceEvent { op, address })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

pub fn gen_trace(spec: &SyntheticTraceSpec) -> Result<TraceGenerator, WorkloadError> {
    spec.validate()?;
    Ok(TraceGenerator {
        spec: *spec,
        hot_bytes: spec.hot_bytes(),
        remaining: spec.length,
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
    })
}
