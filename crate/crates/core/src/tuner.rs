// SPDX-License-Identifier: Apache-2.0

//! EDAP-optimal cache configuration search.
//!
//! For each (technology, capacity) pair every (optimization target, access
//! type) organization is scored by energy x delay x area under a reference
//! read/write mix, and the lowest score wins. Ties keep the first candidate
//! in sweep order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cachemodel::{AccessType, AnchorCurveSet, CachePPA, ModelError, OptTarget};
use crate::techmodel::MemoryTech;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpace {
    pub mems: Vec<MemoryTech>,
    pub caps_mb: Vec<f64>,
    pub opts: Vec<OptTarget>,
    pub accs: Vec<AccessType>,
}

impl Default for SweepSpace {
    fn default() -> Self {
        SweepSpace {
            mems: MemoryTech::ALL.to_vec(),
            caps_mb: vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0],
            opts: OptTarget::ALL.to_vec(),
            accs: AccessType::ALL.to_vec(),
        }
    }
}

/// Workload mix that stands behind a single EDAP score.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceMix {
    pub read_fraction: f64,
    pub reference_access_count: u64,
    /// Charge leakage over the reference delay.
    pub include_leakage: bool,
}

impl Default for ReferenceMix {
    fn default() -> Self {
        ReferenceMix { read_fraction: 0.8, reference_access_count: 1_000_000, include_leakage: true }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TuneError {
    #[error("sweep space has an empty {0} set")]
    EmptySet(&'static str),
    #[error("read fraction {0} outside [0, 1]")]
    BadReadFraction(f64),
    #[error("reference access count must be > 0")]
    ZeroAccessCount,
    #[error("no resolvable configuration for {tech} at {capacity_mb} MB")]
    EmptySweep { tech: MemoryTech, capacity_mb: f64 },
}

impl ReferenceMix {
    pub fn validate(&self) -> Result<(), TuneError> {
        if !(0.0..=1.0).contains(&self.read_fraction) {
            return Err(TuneError::BadReadFraction(self.read_fraction));
        }
        if self.reference_access_count == 0 {
            return Err(TuneError::ZeroAccessCount);
        }
        Ok(())
    }
}

/// Energy-delay-area product in J*s*mm2.
pub fn edap(ppa: &CachePPA, mix: &ReferenceMix) -> f64 {
    let n = mix.reference_access_count as f64;
    let rho = mix.read_fraction;
    let delay_s = n * (rho * ppa.read_latency_ns + (1.0 - rho) * ppa.write_latency_ns) * 1e-9;
    let mut energy_j = n * (rho * ppa.read_energy_nj + (1.0 - rho) * ppa.write_energy_nj) * 1e-9;
    if mix.include_leakage {
        energy_j += ppa.leakage_power_mw * 1e-3 * delay_s;
    }
    energy_j * delay_s * ppa.area_mm2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TunedConfig {
    pub tech: MemoryTech,
    pub capacity_mb: f64,
    pub opt: OptTarget,
    pub acc: AccessType,
    pub edap_score: f64,
    pub ppa: CachePPA,
}

/// A sweep point that could not be evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct SkippedPoint {
    pub tech: MemoryTech,
    pub capacity_mb: f64,
    pub opt: OptTarget,
    pub acc: AccessType,
    pub reason: ModelError,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TuneOutcome {
    /// One winner per resolvable (tech, capacity), in sweep order.
    pub configs: Vec<TunedConfig>,
    pub skipped: Vec<SkippedPoint>,
    /// Pairs where no organization resolved; each is an `EmptySweep`.
    pub empty: Vec<TuneError>,
}

impl TuneOutcome {
    pub fn get(&self, tech: MemoryTech, capacity_mb: f64) -> Option<&TunedConfig> {
        self.configs.iter().find(|c| c.tech == tech && c.capacity_mb == capacity_mb)
    }
}

/// Exhaustive EDAP search over `space`.
///
/// Candidates are evaluated in parallel; the reduction per (tech, cap) walks
/// them in sweep order, so the result matches a sequential run.
pub fn tune(space: &SweepSpace, curves: &AnchorCurveSet, mix: &ReferenceMix) -> Result<TuneOutcome, TuneError> {
    if space.mems.is_empty() {
        return Err(TuneError::EmptySet("memory"));
    }
    if space.caps_mb.is_empty() {
        return Err(TuneError::EmptySet("capacity"));
    }
    if space.opts.is_empty() {
        return Err(TuneError::EmptySet("optimization target"));
    }
    if space.accs.is_empty() {
        return Err(TuneError::EmptySet("access type"));
    }
    mix.validate()?;

    let pairs: Vec<(MemoryTech, f64)> = space
        .mems
        .iter()
        .flat_map(|&m| space.caps_mb.iter().map(move |&c| (m, c)))
        .collect();
    let candidates: Vec<(OptTarget, AccessType)> = space
        .opts
        .iter()
        .flat_map(|&o| space.accs.iter().map(move |&a| (o, a)))
        .collect();

    let per_pair: Vec<(Option<TunedConfig>, Vec<SkippedPoint>)> = pairs
        .par_iter()
        .map(|&(tech, capacity_mb)| {
            let scored: Vec<_> = candidates
                .par_iter()
                .map(|&(opt, acc)| {
                    curves
                        .estimate_ppa(tech, capacity_mb, opt, acc)
                        .map(|ppa| (opt, acc, edap(&ppa, mix), ppa))
                        .map_err(|reason| SkippedPoint { tech, capacity_mb, opt, acc, reason })
                })
                .collect();
            let mut best: Option<TunedConfig> = None;
            let mut skipped = Vec::new();
            for item in scored {
                match item {
                    Ok((opt, acc, score, ppa)) => {
                        if best.as_ref().is_none_or(|b| score < b.edap_score) {
                            best = Some(TunedConfig { tech, capacity_mb, opt, acc, edap_score: score, ppa });
                        }
                    }
                    Err(s) => skipped.push(s),
                }
            }
            (best, skipped)
        })
        .collect();

    let mut outcome = TuneOutcome::default();
    for ((tech, capacity_mb), (best, skipped)) in pairs.into_iter().zip(per_pair) {
        outcome.skipped.extend(skipped);
        match best {
            Some(cfg) => outcome.configs.push(cfg),
            None => outcome.empty.push(TuneError::EmptySweep { tech, capacity_mb }),
        }
    }
    Ok(outcome)
}
