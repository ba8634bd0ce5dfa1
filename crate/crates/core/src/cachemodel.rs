// SPDX-License-Identifier: Apache-2.0

//! Cache-level power/performance/area from anchored capacity curves.
//!
//! Each curve is keyed by (technology, tuning target, access type) and holds
//! published or constructed PPA points over capacity. Between anchors every
//! field is interpolated linearly in log-log space; outside the anchor range
//! requests fail rather than extrapolate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::techmodel::{MemoryTech, UnknownTech};

/// Optimization target handed to the cache organization search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OptTarget {
    ReadLatency,
    WriteLatency,
    ReadEnergy,
    WriteEnergy,
    #[serde(rename = "ReadEDP")]
    ReadEdp,
    #[serde(rename = "WriteEDP")]
    WriteEdp,
    Area,
    Leakage,
}

impl OptTarget {
    pub const ALL: [OptTarget; 8] = [
        OptTarget::ReadLatency,
        OptTarget::WriteLatency,
        OptTarget::ReadEnergy,
        OptTarget::WriteEnergy,
        OptTarget::ReadEdp,
        OptTarget::WriteEdp,
        OptTarget::Area,
        OptTarget::Leakage,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OptTarget::ReadLatency => "ReadLatency",
            OptTarget::WriteLatency => "WriteLatency",
            OptTarget::ReadEnergy => "ReadEnergy",
            OptTarget::WriteEnergy => "WriteEnergy",
            OptTarget::ReadEdp => "ReadEDP",
            OptTarget::WriteEdp => "WriteEDP",
            OptTarget::Area => "Area",
            OptTarget::Leakage => "Leakage",
        }
    }
}

impl fmt::Display for OptTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OptTarget {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().replace(['_', '-'], "").to_ascii_lowercase();
        OptTarget::ALL
            .into_iter()
            .find(|o| o.as_str().to_ascii_lowercase() == norm)
            .ok_or_else(|| ModelError::UnknownName { kind: "opt", name: s.to_string() })
    }
}

/// Which curve family a PPA point belongs to: one of the eight organization
/// targets, or the published EDAP-tuned point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tuning {
    #[serde(rename = "EDAP")]
    Edap,
    #[serde(untagged)]
    Target(OptTarget),
}

impl fmt::Display for Tuning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tuning::Edap => f.write_str("EDAP"),
            Tuning::Target(o) => o.fmt(f),
        }
    }
}

impl FromStr for Tuning {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("EDAP") {
            Ok(Tuning::Edap)
        } else {
            s.parse().map(Tuning::Target)
        }
    }
}

impl From<OptTarget> for Tuning {
    fn from(o: OptTarget) -> Self {
        Tuning::Target(o)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AccessType {
    Normal,
    Fast,
    Sequential,
}

impl AccessType {
    pub const ALL: [AccessType; 3] = [AccessType::Normal, AccessType::Fast, AccessType::Sequential];

    pub fn as_str(self) -> &'static str {
        match self {
            AccessType::Normal => "Normal",
            AccessType::Fast => "Fast",
            AccessType::Sequential => "Sequential",
        }
    }
}

impl fmt::Display for AccessType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AccessType {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AccessType::ALL
            .into_iter()
            .find(|a| a.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ModelError::UnknownName { kind: "acc", name: s.to_string() })
    }
}

/// Cache-level PPA at one capacity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CachePPA {
    pub tech: MemoryTech,
    pub capacity_mb: f64,
    pub read_latency_ns: f64,
    pub write_latency_ns: f64,
    pub read_energy_nj: f64,
    pub write_energy_nj: f64,
    /// Total leakage of the whole cache.
    pub leakage_power_mw: f64,
    pub area_mm2: f64,
}

impl CachePPA {
    /// Name of the first field that breaks the positivity invariants.
    pub fn invalid_field(&self) -> Option<&'static str> {
        let strictly = [
            ("capacity_mb", self.capacity_mb),
            ("read_latency_ns", self.read_latency_ns),
            ("write_latency_ns", self.write_latency_ns),
            ("read_energy_nj", self.read_energy_nj),
            ("write_energy_nj", self.write_energy_nj),
            ("area_mm2", self.area_mm2),
        ];
        for (name, v) in strictly {
            if !(v > 0.0 && v.is_finite()) {
                return Some(name);
            }
        }
        if !(self.leakage_power_mw >= 0.0 && self.leakage_power_mw.is_finite()) {
            return Some("leakage_power_mw");
        }
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CurveKey {
    pub tech: MemoryTech,
    pub tuning: Tuning,
    pub acc: AccessType,
}

impl CurveKey {
    pub fn new(tech: MemoryTech, tuning: impl Into<Tuning>, acc: AccessType) -> Self {
        CurveKey { tech, tuning: tuning.into(), acc }
    }

    /// The published EDAP-tuned curve of a technology.
    pub fn published(tech: MemoryTech) -> Self {
        CurveKey { tech, tuning: Tuning::Edap, acc: AccessType::Normal }
    }
}

impl fmt::Display for CurveKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.tech, self.tuning, self.acc)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("anchor csv header mismatch: expected `{expected}`, found `{found}`")]
    SchemaMismatch { expected: &'static str, found: String },
    #[error("anchor csv line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("duplicate capacity {capacity_mb} MB on curve {key}")]
    DuplicateCapacity { key: CurveKey, capacity_mb: f64 },
    #[error("area does not strictly increase with capacity on curve {key}")]
    NonMonotoneArea { key: CurveKey },
    #[error("invalid {field} at {capacity_mb} MB on curve {key}")]
    InvalidPoint { key: CurveKey, capacity_mb: f64, field: &'static str },
    #[error("no anchor curve for {0}")]
    UnknownCurve(CurveKey),
    #[error("capacity {capacity_mb} MB outside anchors [{min_mb}, {max_mb}] of {key}")]
    OutOfRange { key: CurveKey, capacity_mb: f64, min_mb: f64, max_mb: f64 },
}

impl From<UnknownTech> for ModelError {
    fn from(e: UnknownTech) -> Self {
        ModelError::UnknownName { kind: "tech", name: e.0 }
    }
}

pub const ANCHOR_HEADER: &str =
    "tech,opt,acc,capacity_mb,read_lat_ns,write_lat_ns,read_e_nj,write_e_nj,leak_mw,area_mm2";

/// Validated, immutable set of anchor curves.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AnchorCurveSet {
    curves: BTreeMap<CurveKey, Vec<CachePPA>>,
}

impl AnchorCurveSet {
    /// Groups points by curve, sorts them by capacity and checks every invariant.
    pub fn from_points<I>(points: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (CurveKey, CachePPA)>,
    {
        let mut curves: BTreeMap<CurveKey, Vec<CachePPA>> = BTreeMap::new();
        for (key, mut ppa) in points {
            ppa.tech = key.tech;
            if let Some(field) = ppa.invalid_field() {
                return Err(ModelError::InvalidPoint { key, capacity_mb: ppa.capacity_mb, field });
            }
            curves.entry(key).or_default().push(ppa);
        }
        for (key, curve) in curves.iter_mut() {
            curve.sort_by(|a, b| a.capacity_mb.total_cmp(&b.capacity_mb));
            for pair in curve.windows(2) {
                if pair[0].capacity_mb == pair[1].capacity_mb {
                    return Err(ModelError::DuplicateCapacity {
                        key: *key,
                        capacity_mb: pair[0].capacity_mb,
                    });
                }
            }
            if curve.windows(2).any(|p| p[1].area_mm2 <= p[0].area_mm2) {
                return Err(ModelError::NonMonotoneArea { key: *key });
            }
        }
        Ok(AnchorCurveSet { curves })
    }

    pub fn keys(&self) -> impl Iterator<Item = &CurveKey> {
        self.curves.keys()
    }

    pub fn curve(&self, key: &CurveKey) -> Option<&[CachePPA]> {
        self.curves.get(key).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// PPA of the selected curve at `capacity_mb`.
    pub fn estimate_ppa(
        &self,
        tech: MemoryTech,
        capacity_mb: f64,
        tuning: impl Into<Tuning>,
        acc: AccessType,
    ) -> Result<CachePPA, ModelError> {
        self.estimate(&CurveKey::new(tech, tuning, acc), capacity_mb)
    }

    pub fn estimate(&self, key: &CurveKey, capacity_mb: f64) -> Result<CachePPA, ModelError> {
        let curve = self.curves.get(key).ok_or(ModelError::UnknownCurve(*key))?;
        let first = curve[0];
        let last = curve[curve.len() - 1];
        if !(capacity_mb >= first.capacity_mb && capacity_mb <= last.capacity_mb) {
            return Err(ModelError::OutOfRange {
                key: *key,
                capacity_mb,
                min_mb: first.capacity_mb,
                max_mb: last.capacity_mb,
            });
        }
        // First anchor at or above the requested capacity.
        let hi = curve.partition_point(|p| p.capacity_mb < capacity_mb);
        let upper = curve[hi];
        if upper.capacity_mb == capacity_mb {
            return Ok(upper);
        }
        Ok(interpolate(&curve[hi - 1], &upper, capacity_mb))
    }

    /// PPA on the published EDAP-tuned curve.
    pub fn published_ppa(&self, tech: MemoryTech, capacity_mb: f64) -> Result<CachePPA, ModelError> {
        self.estimate(&CurveKey::published(tech), capacity_mb)
    }

    /// Area of the published curve at `capacity_mb`.
    pub fn area_at(&self, tech: MemoryTech, capacity_mb: f64) -> Result<f64, ModelError> {
        self.published_ppa(tech, capacity_mb).map(|p| p.area_mm2)
    }
}

fn interpolate(lo: &CachePPA, hi: &CachePPA, capacity_mb: f64) -> CachePPA {
    let t = (capacity_mb.ln() - lo.capacity_mb.ln()) / (hi.capacity_mb.ln() - lo.capacity_mb.ln());
    let field = |a: f64, b: f64| {
        let v = if a > 0.0 && b > 0.0 {
            (a.ln() + t * (b.ln() - a.ln())).exp()
        } else {
            // log of zero leakage is undefined; fall back to linear in log-capacity
            a + t * (b - a)
        };
        v.clamp(a.min(b), a.max(b))
    };
    CachePPA {
        tech: lo.tech,
        capacity_mb,
        read_latency_ns: field(lo.read_latency_ns, hi.read_latency_ns),
        write_latency_ns: field(lo.write_latency_ns, hi.write_latency_ns),
        read_energy_nj: field(lo.read_energy_nj, hi.read_energy_nj),
        write_energy_nj: field(lo.write_energy_nj, hi.write_energy_nj),
        leakage_power_mw: field(lo.leakage_power_mw, hi.leakage_power_mw),
        area_mm2: field(lo.area_mm2, hi.area_mm2),
    }
}

#[derive(Debug, Deserialize)]
struct AnchorRow {
    tech: String,
    opt: String,
    acc: String,
    capacity_mb: f64,
    read_lat_ns: f64,
    write_lat_ns: f64,
    read_e_nj: f64,
    write_e_nj: f64,
    leak_mw: f64,
    area_mm2: f64,
}

/// Loads an anchor CSV document. Lines starting with `#` are comments.
pub fn load_anchor_curves(text: &str) -> Result<AnchorCurveSet, ModelError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| ModelError::Malformed { line: 1, message: e.to_string() })?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != ANCHOR_HEADER {
        return Err(ModelError::SchemaMismatch { expected: ANCHOR_HEADER, found: header });
    }
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| ModelError::Malformed {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row: AnchorRow = record
            .deserialize(None)
            .map_err(|e| ModelError::Malformed { line, message: e.to_string() })?;
        let tech: MemoryTech = row.tech.parse()?;
        let key = CurveKey { tech, tuning: row.opt.parse()?, acc: row.acc.parse()? };
        points.push((
            key,
            CachePPA {
                tech,
                capacity_mb: row.capacity_mb,
                read_latency_ns: row.read_lat_ns,
                write_latency_ns: row.write_lat_ns,
                read_energy_nj: row.read_e_nj,
                write_energy_nj: row.write_e_nj,
                leakage_power_mw: row.leak_mw,
                area_mm2: row.area_mm2,
            },
        ));
    }
    AnchorCurveSet::from_points(points)
}
