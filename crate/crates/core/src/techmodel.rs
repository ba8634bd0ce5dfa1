// SPDX-License-Identifier: Apache-2.0

//! Device- and technology-level parameters.
//!
//! Bitcell characterizations come from external device simulation and are
//! stored as flat `key = value` text files so they stay hand-editable.
//! Platform and DRAM parameters use the same format with every key optional.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Memory technology of a cache data array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MemoryTech {
    #[serde(rename = "SRAM")]
    Sram,
    #[serde(rename = "STT")]
    SttMram,
    #[serde(rename = "SOT")]
    SotMram,
}

impl MemoryTech {
    pub const ALL: [MemoryTech; 3] = [MemoryTech::Sram, MemoryTech::SttMram, MemoryTech::SotMram];

    pub fn as_str(self) -> &'static str {
        match self {
            MemoryTech::Sram => "SRAM",
            MemoryTech::SttMram => "STT",
            MemoryTech::SotMram => "SOT",
        }
    }

    pub fn is_mram(self) -> bool {
        !matches!(self, MemoryTech::Sram)
    }
}

impl fmt::Display for MemoryTech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown memory technology `{0}`")]
pub struct UnknownTech(pub String);

impl FromStr for MemoryTech {
    type Err = UnknownTech;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "SRAM" => Ok(MemoryTech::Sram),
            "STT" | "STT_MRAM" => Ok(MemoryTech::SttMram),
            "SOT" | "SOT_MRAM" => Ok(MemoryTech::SotMram),
            _ => Err(UnknownTech(s.to_string())),
        }
    }
}

/// One bitcell characterization (per-technology device parameters).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BitcellParams {
    pub tech: MemoryTech,
    pub sense_latency_ps: f64,
    pub sense_energy_pj: f64,
    pub write_latency_set_ps: f64,
    pub write_latency_reset_ps: f64,
    pub write_energy_set_pj: f64,
    pub write_energy_reset_pj: f64,
    pub fin_count_read: u32,
    pub fin_count_write: u32,
    /// Bitcell area relative to the foundry SRAM bitcell.
    pub area_norm: f64,
}

/// A single failed bound check on a bitcell record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub bound: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} must be {}", self.field, self.bound)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParamError {
    #[error("line {line}: expected `key = value`")]
    Malformed { line: usize },
    #[error("missing required key `{0}`")]
    MissingKey(String),
    #[error("duplicate key `{0}`")]
    DuplicateKey(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("value of `{0}` is not numeric")]
    NonNumeric(String),
    #[error("value of `{field}` out of range: {bound}")]
    RangeViolation { field: String, bound: String },
    #[error(transparent)]
    Tech(#[from] UnknownTech),
}

const BITCELL_KEYS: [&str; 10] = [
    "tech",
    "sense_latency_ps",
    "sense_energy_pj",
    "write_latency_set_ps",
    "write_latency_reset_ps",
    "write_energy_set_pj",
    "write_energy_reset_pj",
    "fin_count_read",
    "fin_count_write",
    "area_norm",
];

/// Splits a `key = value` document into a map, rejecting duplicate keys.
fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, ParamError> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ParamError::Malformed { line: idx + 1 })?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(ParamError::Malformed { line: idx + 1 });
        }
        if out.insert(key.to_string(), value.to_string()).is_some() {
            return Err(ParamError::DuplicateKey(key.to_string()));
        }
    }
    Ok(out)
}

fn real(map: &BTreeMap<String, String>, key: &str) -> Result<f64, ParamError> {
    let raw = map.get(key).ok_or_else(|| ParamError::MissingKey(key.to_string()))?;
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ParamError::NonNumeric(key.to_string())),
    }
}

fn count(map: &BTreeMap<String, String>, key: &str) -> Result<u32, ParamError> {
    let raw = map.get(key).ok_or_else(|| ParamError::MissingKey(key.to_string()))?;
    let v: i64 = raw.parse().map_err(|_| ParamError::NonNumeric(key.to_string()))?;
    u32::try_from(v).map_err(|_| ParamError::RangeViolation {
        field: key.to_string(),
        bound: ">= 1".to_string(),
    })
}

/// Parses and validates a bitcell parameter file.
pub fn parse_bitcell_file(text: &str) -> Result<BitcellParams, ParamError> {
    let map = parse_kv(text)?;
    if let Some(unknown) = map.keys().find(|k| !BITCELL_KEYS.contains(&k.as_str())) {
        return Err(ParamError::UnknownKey(unknown.clone()));
    }
    let tech: MemoryTech = map
        .get("tech")
        .ok_or_else(|| ParamError::MissingKey("tech".to_string()))?
        .parse()?;
    let params = BitcellParams {
        tech,
        sense_latency_ps: real(&map, "sense_latency_ps")?,
        sense_energy_pj: real(&map, "sense_energy_pj")?,
        write_latency_set_ps: real(&map, "write_latency_set_ps")?,
        write_latency_reset_ps: real(&map, "write_latency_reset_ps")?,
        write_energy_set_pj: real(&map, "write_energy_set_pj")?,
        write_energy_reset_pj: real(&map, "write_energy_reset_pj")?,
        fin_count_read: count(&map, "fin_count_read")?,
        fin_count_write: count(&map, "fin_count_write")?,
        area_norm: real(&map, "area_norm")?,
    };
    if let Some(v) = validate_bitcell(&params).into_iter().next() {
        return Err(ParamError::RangeViolation {
            field: v.field.to_string(),
            bound: v.bound.to_string(),
        });
    }
    Ok(params)
}

/// Returns every invariant violation of `p`; an empty report means valid.
pub fn validate_bitcell(p: &BitcellParams) -> Vec<Violation> {
    let mut report = Vec::new();
    let mut positive = |field, v: f64| {
        if !(v > 0.0) {
            report.push(Violation { field, bound: "> 0" });
        }
    };
    positive("sense_latency_ps", p.sense_latency_ps);
    positive("sense_energy_pj", p.sense_energy_pj);
    positive("write_latency_set_ps", p.write_latency_set_ps);
    positive("write_latency_reset_ps", p.write_latency_reset_ps);

    for (field, v) in [
        ("write_energy_set_pj", p.write_energy_set_pj),
        ("write_energy_reset_pj", p.write_energy_reset_pj),
    ] {
        if p.tech.is_mram() {
            if !(v > 0.0) {
                report.push(Violation { field, bound: "> 0 for MRAM" });
            }
        } else if !(v >= 0.0) {
            report.push(Violation { field, bound: ">= 0" });
        }
    }
    if p.fin_count_read < 1 {
        report.push(Violation { field: "fin_count_read", bound: ">= 1" });
    }
    if p.fin_count_write < 1 {
        report.push(Violation { field: "fin_count_write", bound: ">= 1" });
    }
    if !(p.area_norm > 0.0 && p.area_norm <= 10.0) {
        report.push(Violation { field: "area_norm", bound: "in (0, 10]" });
    } else if p.tech == MemoryTech::Sram && p.area_norm != 1.0 {
        report.push(Violation { field: "area_norm", bound: "exactly 1.0 for SRAM" });
    }
    report
}

impl BitcellParams {
    /// Serializes back into the `key = value` file format.
    pub fn to_kv_string(&self) -> String {
        format!(
            "tech = {}\nsense_latency_ps = {}\nsense_energy_pj = {}\nwrite_latency_set_ps = {}\n\
             write_latency_reset_ps = {}\nwrite_energy_set_pj = {}\nwrite_energy_reset_pj = {}\n\
             fin_count_read = {}\nfin_count_write = {}\narea_norm = {}\n",
            self.tech,
            self.sense_latency_ps,
            self.sense_energy_pj,
            self.write_latency_set_ps,
            self.write_latency_reset_ps,
            self.write_energy_set_pj,
            self.write_energy_reset_pj,
            self.fin_count_read,
            self.fin_count_write,
            self.area_norm,
        )
    }
}

/// GPU-side parameters used to turn latencies into cycles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlatformParams {
    pub l2_clock_hz: f64,
    pub line_size_bytes: u32,
    pub l2_capacity_baseline_mb: f64,
}

impl Default for PlatformParams {
    fn default() -> Self {
        PlatformParams { l2_clock_hz: 1.481e9, line_size_bytes: 128, l2_capacity_baseline_mb: 3.0 }
    }
}

/// Per-access DRAM cost. Absolute values are configuration, not measurements.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DramParams {
    pub energy_per_access_nj: f64,
    pub latency_per_access_ns: f64,
}

impl Default for DramParams {
    fn default() -> Self {
        DramParams { energy_per_access_nj: 70.0, latency_per_access_ns: 100.0 }
    }
}

impl PlatformParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        if !(self.l2_clock_hz > 0.0 && self.l2_clock_hz.is_finite()) {
            return Err(range("l2_clock_hz", "> 0"));
        }
        if self.line_size_bytes < 32 || !self.line_size_bytes.is_power_of_two() {
            return Err(range("line_size_bytes", "a power of two >= 32"));
        }
        if !(self.l2_capacity_baseline_mb > 0.0) {
            return Err(range("l2_capacity_baseline_mb", "> 0"));
        }
        Ok(())
    }
}

impl DramParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        if !(self.energy_per_access_nj > 0.0 && self.energy_per_access_nj.is_finite()) {
            return Err(range("dram_energy_per_access_nj", "> 0"));
        }
        if !(self.latency_per_access_ns > 0.0 && self.latency_per_access_ns.is_finite()) {
            return Err(range("dram_latency_per_access_ns", "> 0"));
        }
        Ok(())
    }
}

fn range(field: &str, bound: &str) -> ParamError {
    ParamError::RangeViolation { field: field.to_string(), bound: bound.to_string() }
}

const PLATFORM_KEYS: [&str; 5] = [
    "l2_clock_hz",
    "line_size_bytes",
    "l2_capacity_baseline_mb",
    "dram_energy_per_access_nj",
    "dram_latency_per_access_ns",
];

/// Parses a platform/DRAM file. Every key is optional; absent keys keep defaults.
pub fn parse_platform_file(text: &str) -> Result<(PlatformParams, DramParams), ParamError> {
    let map = parse_kv(text)?;
    if let Some(unknown) = map.keys().find(|k| !PLATFORM_KEYS.contains(&k.as_str())) {
        return Err(ParamError::UnknownKey(unknown.clone()));
    }
    let mut plat = PlatformParams::default();
    let mut dram = DramParams::default();
    if map.contains_key("l2_clock_hz") {
        plat.l2_clock_hz = real(&map, "l2_clock_hz")?;
    }
    if map.contains_key("line_size_bytes") {
        plat.line_size_bytes = count(&map, "line_size_bytes")?;
    }
    if map.contains_key("l2_capacity_baseline_mb") {
        plat.l2_capacity_baseline_mb = real(&map, "l2_capacity_baseline_mb")?;
    }
    if map.contains_key("dram_energy_per_access_nj") {
        dram.energy_per_access_nj = real(&map, "dram_energy_per_access_nj")?;
    }
    if map.contains_key("dram_latency_per_access_ns") {
        dram.latency_per_access_ns = real(&map, "dram_latency_per_access_ns")?;
    }
    plat.validate()?;
    dram.validate()?;
    Ok((plat, dram))
}
