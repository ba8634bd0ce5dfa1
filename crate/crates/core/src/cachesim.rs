// SPDX-License-Identifier: Apache-2.0

//! Trace-driven set-associative LRU cache simulator.
//!
//! Write-back, write-allocate. Every miss fetches a line from DRAM and every
//! dirty eviction writes one back, so DRAM traffic is `misses + writebacks`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::workload::{Op, TraceEvent};

pub const MB: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum WritePolicy {
    #[default]
    WriteBackWriteAllocate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheGeometry {
    pub capacity_bytes: u64,
    pub ways: u32,
    pub line_size_bytes: u32,
    pub write_policy: WritePolicy,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid cache geometry: {0}")]
    InvalidGeometry(String),
    #[error("capacity sweep geometries must share line size and set count with strictly growing ways")]
    IncompatibleSweep,
    #[error("baseline has zero DRAM transactions")]
    ZeroBaseline,
}

impl CacheGeometry {
    pub fn new(capacity_bytes: u64, ways: u32, line_size_bytes: u32) -> Result<Self, SimError> {
        let geom = CacheGeometry {
            capacity_bytes,
            ways,
            line_size_bytes,
            write_policy: WritePolicy::WriteBackWriteAllocate,
        };
        geom.validate()?;
        Ok(geom)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::InvalidGeometry(m));
        if self.capacity_bytes == 0 {
            return bad("capacity must be > 0".into());
        }
        if self.ways == 0 {
            return bad("ways must be >= 1".into());
        }
        if !self.line_size_bytes.is_power_of_two() {
            return bad(format!("line size {} is not a power of two", self.line_size_bytes));
        }
        let way_bytes = u64::from(self.ways) * u64::from(self.line_size_bytes);
        if !self.capacity_bytes.is_multiple_of(way_bytes) {
            return bad(format!(
                "capacity {} not divisible by ways x line size ({way_bytes})",
                self.capacity_bytes
            ));
        }
        let sets = self.capacity_bytes / way_bytes;
        if !sets.is_power_of_two() {
            return bad(format!("set count {sets} is not a power of two"));
        }
        Ok(())
    }

    pub fn num_sets(&self) -> u64 {
        self.capacity_bytes / (u64::from(self.ways) * u64::from(self.line_size_bytes))
    }

    pub fn capacity_mb(&self) -> f64 {
        self.capacity_bytes as f64 / MB as f64
    }
}

/// Builds one geometry per capacity at a fixed set count, growing ways.
///
/// The set count comes from the first capacity divided by `base_ways`.
pub fn fixed_set_geometries(
    capacities_mb: &[f64],
    line_size_bytes: u32,
    base_ways: u32,
) -> Result<Vec<CacheGeometry>, SimError> {
    let first = *capacities_mb
        .first()
        .ok_or_else(|| SimError::InvalidGeometry("no capacities given".into()))?;
    let to_bytes = |mb: f64| -> Result<u64, SimError> {
        let bytes = mb * MB as f64;
        if !(bytes >= 1.0) || bytes.fract() != 0.0 {
            return Err(SimError::InvalidGeometry(format!("{mb} MB is not a whole byte count")));
        }
        Ok(bytes as u64)
    };
    let base = CacheGeometry::new(to_bytes(first)?, base_ways, line_size_bytes)?;
    let sets = base.num_sets();
    capacities_mb
        .iter()
        .map(|&mb| {
            let bytes = to_bytes(mb)?;
            let set_bytes = sets * u64::from(line_size_bytes);
            if bytes % set_bytes != 0 {
                return Err(SimError::InvalidGeometry(format!(
                    "{mb} MB is not a whole number of ways at {sets} sets"
                )));
            }
            let ways = u32::try_from(bytes / set_bytes)
                .map_err(|_| SimError::InvalidGeometry(format!("{mb} MB needs too many ways")))?;
            CacheGeometry::new(bytes, ways, line_size_bytes)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimResult {
    pub accesses: u64,
    pub hits: u64,
    pub misses: u64,
    pub writebacks: u64,
    pub dram_transactions: u64,
}

impl SimResult {
    /// Counts one access outcome.
    pub fn record(&mut self, outcome: Outcome) {
        self.accesses += 1;
        match outcome {
            Outcome::Hit => self.hits += 1,
            Outcome::Miss { writeback } => {
                self.misses += 1;
                self.writebacks += u64::from(writeback);
                self.dram_transactions += 1 + u64::from(writeback);
            }
        }
    }

    pub fn miss_rate(&self) -> f64 {
        if self.accesses == 0 {
            0.0
        } else {
            self.misses as f64 / self.accesses as f64
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Hit,
    Miss { writeback: bool },
}

#[derive(Clone, Copy, Default)]
struct Slot {
    tag: u64,
    valid: bool,
    dirty: bool,
    last_used: u64,
}

/// Mutable cache state; one instance replays one trace in order.
pub struct Cache {
    geom: CacheGeometry,
    slots: Vec<Slot>,
    sets: u64,
    ways: usize,
    line_shift: u32,
    clock: u64,
}

impl Cache {
    pub fn new(geom: CacheGeometry) -> Result<Self, SimError> {
        geom.validate()?;
        let sets = geom.num_sets();
        let ways = geom.ways as usize;
        let slots = usize::try_from(sets)
            .ok()
            .and_then(|s| s.checked_mul(ways))
            .ok_or_else(|| SimError::InvalidGeometry("too many lines".into()))?;
        Ok(Cache {
            geom,
            slots: vec![Slot::default(); slots],
            sets,
            ways,
            line_shift: geom.line_size_bytes.trailing_zeros(),
            clock: 0,
        })
    }

    pub fn geometry(&self) -> &CacheGeometry {
        &self.geom
    }

    pub fn access(&mut self, ev: TraceEvent) -> Outcome {
        self.clock += 1;
        let line = ev.address >> self.line_shift;
        let set = (line % self.sets) as usize;
        let tag = line / self.sets;
        let is_write = ev.op == Op::Write;
        let ways = &mut self.slots[set * self.ways..(set + 1) * self.ways];

        if let Some(slot) = ways.iter_mut().find(|s| s.valid && s.tag == tag) {
            slot.last_used = self.clock;
            slot.dirty |= is_write;
            return Outcome::Hit;
        }
        // invalid slots have last_used 0 and win ties by position
        let victim = ways
            .iter_mut()
            .min_by_key(|s| if s.valid { s.last_used } else { 0 })
            .expect("at least one way");
        let writeback = victim.valid && victim.dirty;
        *victim = Slot { tag, valid: true, dirty: is_write, last_used: self.clock };
        Outcome::Miss { writeback }
    }
}

/// Replays `trace` through a fresh cache.
pub fn simulate<I>(trace: I, geom: &CacheGeometry) -> Result<SimResult, SimError>
where
    I: IntoIterator<Item = TraceEvent>,
{
    simulate_with_warmup(trace, geom, 0)
}

/// Like [`simulate`], but the first `warmup` events only warm the cache.
pub fn simulate_with_warmup<I>(trace: I, geom: &CacheGeometry, warmup: u64) -> Result<SimResult, SimError>
where
    I: IntoIterator<Item = TraceEvent>,
{
    let mut cache = Cache::new(*geom)?;
    let mut r = SimResult::default();
    for (i, ev) in trace.into_iter().enumerate() {
        let outcome = cache.access(ev);
        if (i as u64) < warmup {
            continue;
        }
        r.record(outcome);
    }
    Ok(r)
}

/// Replays the same trace through each geometry (fixed sets, growing ways).
pub fn capacity_sweep(trace: &[TraceEvent], geoms: &[CacheGeometry]) -> Result<Vec<SimResult>, SimError> {
    capacity_sweep_with_warmup(trace, geoms, 0)
}

pub fn capacity_sweep_with_warmup(
    trace: &[TraceEvent],
    geoms: &[CacheGeometry],
    warmup: u64,
) -> Result<Vec<SimResult>, SimError> {
    for g in geoms {
        g.validate()?;
    }
    for pair in geoms.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if a.line_size_bytes != b.line_size_bytes || a.num_sets() != b.num_sets() || b.ways <= a.ways {
            return Err(SimError::IncompatibleSweep);
        }
    }
    geoms
        .par_iter()
        .map(|g| simulate_with_warmup(trace.iter().copied(), g, warmup))
        .collect()
}

/// Percent reduction in DRAM transactions from `baseline` to `enlarged`.
pub fn dram_reduction(baseline: &SimResult, enlarged: &SimResult) -> Result<f64, SimError> {
    dram_reduction_counts(baseline.dram_transactions, enlarged.dram_transactions)
}

pub fn dram_reduction_counts(baseline: u64, enlarged: u64) -> Result<f64, SimError> {
    if baseline == 0 {
        return Err(SimError::ZeroBaseline);
    }
    // integer difference first keeps round percentages exact
    let saved = i128::from(baseline) - i128::from(enlarged);
    Ok(100.0 * saved as f64 / baseline as f64)
}
