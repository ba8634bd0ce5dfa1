// SPDX-License-Identifier: Apache-2.0

//! Workload-level energy, delay and EDP models and the comparison studies.
//!
//! Dynamic energy is transactions x per-access energy. Cache delay is the
//! transaction-serialized latency, each latency first rounded up to whole L2
//! clock cycles. Leakage is charged over the measured execution time when a
//! profile carries one, otherwise over the computed delay. DRAM, when enabled,
//! adds a per-access energy and latency. Every study normalizes against SRAM.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cachemodel::{AccessType, AnchorCurveSet, CachePPA, ModelError, OptTarget};
use crate::cachesim::{dram_reduction, SimError, SimResult};
use crate::techmodel::{DramParams, MemoryTech, PlatformParams};
use crate::tuner::{tune, ReferenceMix, SweepSpace, TuneError, TunedConfig};
use crate::workload::WorkloadStats;

pub const BASELINE: MemoryTech = MemoryTech::Sram;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("workload `{0}` has no L2 transactions")]
    EmptyWorkload(String),
    #[error("no SRAM baseline result for `{workload}` in group `{group}`")]
    MissingBaseline { group: String, workload: String },
    #[error("SRAM baseline {metric} is zero for `{workload}`")]
    ZeroBaseline { workload: String, metric: &'static str },
    #[error("iso-area tolerance {0} must be >= 1")]
    BadTolerance(f64),
    #[error("no capacity of {tech} fits {budget_mm2} mm2 (x{tolerance})")]
    NoFeasibleCapacity { tech: MemoryTech, budget_mm2: f64, tolerance: f64 },
    #[error("batch family is empty")]
    EmptyFamily,
    #[error("batch family mixes workloads (`{0}` and `{1}`)")]
    MixedFamily(String, String),
    #[error("missing DRAM reduction for {0}")]
    MissingReduction(MemoryTech),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Tune(#[from] TuneError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub dynamic_j: f64,
    pub leakage_j: f64,
    pub dram_j: f64,
    pub total_j: f64,
}

impl EnergyBreakdown {
    pub fn new(dynamic_j: f64, leakage_j: f64, dram_j: f64) -> Self {
        EnergyBreakdown { dynamic_j, leakage_j, dram_j, total_j: dynamic_j + leakage_j + dram_j }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorkloadTechResult {
    pub workload: String,
    pub tech: MemoryTech,
    pub capacity_mb: f64,
    pub energy: EnergyBreakdown,
    pub delay_s: f64,
    pub edp_js: f64,
    pub dram_included: bool,
    pub dram_transactions: u64,
}

/// `N_r * E_r + N_w * E_w`, in joules.
pub fn dynamic_energy(s: &WorkloadStats, ppa: &CachePPA) -> f64 {
    (s.l2_reads as f64 * ppa.read_energy_nj + s.l2_writes as f64 * ppa.write_energy_nj) * 1e-9
}

/// Latency rounded up to whole clock cycles.
pub fn cycles(latency_ns: f64, clock_hz: f64) -> f64 {
    (latency_ns * clock_hz * 1e-9).ceil()
}

/// Transaction-serialized cache time in seconds.
pub fn cache_delay(s: &WorkloadStats, ppa: &CachePPA, plat: &PlatformParams) -> f64 {
    let f = plat.l2_clock_hz;
    let cyc = s.l2_reads as f64 * cycles(ppa.read_latency_ns, f)
        + s.l2_writes as f64 * cycles(ppa.write_latency_ns, f);
    cyc / f
}

pub fn leakage_energy(ppa: &CachePPA, duration_s: f64) -> f64 {
    ppa.leakage_power_mw * 1e-3 * duration_s
}

/// DRAM energy (J) and time (s) for `transactions` accesses.
pub fn dram_cost(transactions: u64, d: &DramParams) -> (f64, f64) {
    let n = transactions as f64;
    (n * d.energy_per_access_nj * 1e-9, n * d.latency_per_access_ns * 1e-9)
}

/// Full energy/delay evaluation of one workload on one cache.
pub fn evaluate(
    s: &WorkloadStats,
    ppa: &CachePPA,
    plat: &PlatformParams,
    dram: Option<&DramParams>,
    dram_txn_override: Option<u64>,
) -> Result<WorkloadTechResult, AnalysisError> {
    if s.l2_transactions() == 0 {
        return Err(AnalysisError::EmptyWorkload(s.label()));
    }
    let mut delay_s = cache_delay(s, ppa, plat);
    let (mut dram_j, mut dram_transactions) = (0.0, 0);
    if let Some(d) = dram {
        dram_transactions = dram_txn_override.unwrap_or_else(|| s.dram_transactions());
        let (e, t) = dram_cost(dram_transactions, d);
        dram_j = e;
        delay_s += t;
    }
    let leak_for = s.exec_time_s.unwrap_or(delay_s);
    let energy = EnergyBreakdown::new(dynamic_energy(s, ppa), leakage_energy(ppa, leak_for), dram_j);
    Ok(WorkloadTechResult {
        workload: s.label(),
        tech: ppa.tech,
        capacity_mb: ppa.capacity_mb,
        energy,
        delay_s,
        edp_js: energy.total_j * delay_s,
        dram_included: dram.is_some(),
        dram_transactions,
    })
}

/// Per-metric ratios against the SRAM baseline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ratios {
    pub dynamic: f64,
    pub leakage: f64,
    pub total: f64,
    pub delay: f64,
    pub edp: f64,
}

impl Ratios {
    const ONE: Ratios = Ratios { dynamic: 1.0, leakage: 1.0, total: 1.0, delay: 1.0, edp: 1.0 };

    fn to_array(self) -> [f64; 5] {
        [self.dynamic, self.leakage, self.total, self.delay, self.edp]
    }

    fn from_array(a: [f64; 5]) -> Self {
        Ratios { dynamic: a[0], leakage: a[1], total: a[2], delay: a[3], edp: a[4] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    /// Grouping key: capacity, batch size, or `all`.
    pub group: String,
    pub result: WorkloadTechResult,
    pub ratios: Ratios,
}

/// Across-workload statistics for one (group, tech).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub group: String,
    pub tech: MemoryTech,
    pub workloads: usize,
    pub geomean: Ratios,
    pub min: Ratios,
    pub max: Ratios,
    /// Population standard deviation of the log-ratios.
    pub log_std: Ratios,
}

/// Everything a report needs to be reproduced.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub rho: Option<f64>,
    pub dram: Option<DramParams>,
    pub tolerance: Option<f64>,
    pub clock: f64,
    pub line_size_bytes: u32,
    pub leakage_duration: String,
    pub delay_model: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub dram_reduction_pct: BTreeMap<MemoryTech, f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub capacity_mb: BTreeMap<MemoryTech, f64>,
    pub provenance: String,
}

impl Parameters {
    pub fn new(plat: &PlatformParams, dram: Option<&DramParams>) -> Self {
        Parameters {
            rho: None,
            dram: dram.copied(),
            tolerance: None,
            clock: plat.l2_clock_hz,
            line_size_bytes: plat.line_size_bytes,
            leakage_duration: "exec_time_s when profiled, else computed delay".into(),
            delay_model: if dram.is_some() {
                "ceil-cycle serialized L2 transactions + DRAM accesses".into()
            } else {
                "ceil-cycle serialized L2 transactions".into()
            },
            dram_reduction_pct: BTreeMap::new(),
            capacity_mb: BTreeMap::new(),
            provenance: crate::data::PROVENANCE.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedReport {
    pub study: String,
    pub baseline: MemoryTech,
    pub parameters: Parameters,
    pub rows: Vec<ReportRow>,
    pub summary: Vec<SummaryRow>,
}

impl NormalizedReport {
    pub fn summary_for(&self, group: &str, tech: MemoryTech) -> Option<&SummaryRow> {
        self.summary.iter().find(|s| s.group == group && s.tech == tech)
    }

    pub fn rows_for(&self, tech: MemoryTech) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(move |r| r.result.tech == tech)
    }
}

fn ratio(value: f64, base: f64, workload: &str, metric: &'static str) -> Result<f64, AnalysisError> {
    if base == 0.0 {
        if value == 0.0 {
            return Ok(1.0);
        }
        return Err(AnalysisError::ZeroBaseline { workload: workload.to_string(), metric });
    }
    Ok(value / base)
}

fn ratios(r: &WorkloadTechResult, base: &WorkloadTechResult) -> Result<Ratios, AnalysisError> {
    if r.tech == base.tech {
        return Ok(Ratios::ONE);
    }
    let w = &r.workload;
    Ok(Ratios {
        dynamic: ratio(r.energy.dynamic_j, base.energy.dynamic_j, w, "dynamic energy")?,
        leakage: ratio(r.energy.leakage_j, base.energy.leakage_j, w, "leakage energy")?,
        total: ratio(r.energy.total_j, base.energy.total_j, w, "total energy")?,
        delay: ratio(r.delay_s, base.delay_s, w, "delay")?,
        edp: ratio(r.edp_js, base.edp_js, w, "EDP")?,
    })
}

/// One evaluated cell before normalization.
struct Cell {
    group: String,
    result: WorkloadTechResult,
}

fn summarize(rows: &[ReportRow], techs: &[MemoryTech]) -> Vec<SummaryRow> {
    let mut groups: Vec<&str> = Vec::new();
    for r in rows {
        if !groups.contains(&r.group.as_str()) {
            groups.push(&r.group);
        }
    }
    let mut out = Vec::new();
    for group in groups {
        for &tech in techs {
            let logs: Vec<[f64; 5]> = rows
                .iter()
                .filter(|r| r.group == group && r.result.tech == tech)
                .map(|r| r.ratios.to_array().map(f64::ln))
                .collect();
            if logs.is_empty() {
                continue;
            }
            let n = logs.len() as f64;
            let mut mean = [0.0; 5];
            let mut min = [f64::INFINITY; 5];
            let mut max = [f64::NEG_INFINITY; 5];
            for l in &logs {
                for i in 0..5 {
                    mean[i] += l[i] / n;
                    min[i] = min[i].min(l[i]);
                    max[i] = max[i].max(l[i]);
                }
            }
            let mut var = [0.0; 5];
            for l in &logs {
                for i in 0..5 {
                    var[i] += (l[i] - mean[i]).powi(2) / n;
                }
            }
            out.push(SummaryRow {
                group: group.to_string(),
                tech,
                workloads: logs.len(),
                geomean: Ratios::from_array(mean.map(f64::exp)),
                min: Ratios::from_array(min.map(f64::exp)),
                max: Ratios::from_array(max.map(f64::exp)),
                log_std: Ratios::from_array(var.map(f64::sqrt)),
            });
        }
    }
    out
}

fn normalize(
    study: &str,
    parameters: Parameters,
    techs: &[MemoryTech],
    cells: Vec<Cell>,
) -> Result<NormalizedReport, AnalysisError> {
    let mut baselines: BTreeMap<(String, String), WorkloadTechResult> = BTreeMap::new();
    for c in &cells {
        if c.result.tech == BASELINE {
            baselines.insert((c.group.clone(), c.result.workload.clone()), c.result.clone());
        }
    }
    let mut rows = Vec::with_capacity(cells.len());
    for c in cells {
        let base = baselines.get(&(c.group.clone(), c.result.workload.clone())).ok_or_else(|| {
            AnalysisError::MissingBaseline { group: c.group.clone(), workload: c.result.workload.clone() }
        })?;
        let ratios = ratios(&c.result, base)?;
        rows.push(ReportRow { group: c.group, result: c.result, ratios });
    }
    let summary = summarize(&rows, techs);
    Ok(NormalizedReport { study: study.to_string(), baseline: BASELINE, parameters, rows, summary })
}

fn require_baseline(techs: &[MemoryTech]) -> Result<(), AnalysisError> {
    if techs.contains(&BASELINE) {
        Ok(())
    } else {
        Err(AnalysisError::MissingBaseline { group: "all".into(), workload: "*".into() })
    }
}

/// Evaluates every (workload, tech) pair; output keeps workload-major order.
fn evaluate_grid(
    group: &str,
    workloads: &[WorkloadStats],
    ppas: &[CachePPA],
    plat: &PlatformParams,
    dram: Option<&DramParams>,
    dram_txns: impl Fn(&WorkloadStats, MemoryTech) -> Option<u64> + Sync,
) -> Result<Vec<Cell>, AnalysisError> {
    let per_workload: Vec<Result<Vec<Cell>, AnalysisError>> = workloads
        .par_iter()
        .map(|s| {
            ppas.iter()
                .map(|ppa| {
                    let result = evaluate(s, ppa, plat, dram, dram_txns(s, ppa.tech))?;
                    Ok(Cell { group: group.to_string(), result })
                })
                .collect()
        })
        .collect();
    let mut cells = Vec::new();
    for r in per_workload {
        cells.extend(r?);
    }
    Ok(cells)
}

/// Every technology at the same capacity on its published curve.
pub fn iso_capacity_study(
    workloads: &[WorkloadStats],
    curves: &AnchorCurveSet,
    techs: &[MemoryTech],
    capacity_mb: f64,
    plat: &PlatformParams,
    dram: Option<&DramParams>,
) -> Result<NormalizedReport, AnalysisError> {
    require_baseline(techs)?;
    let ppas: Vec<CachePPA> =
        techs.iter().map(|&t| curves.published_ppa(t, capacity_mb)).collect::<Result<_, _>>()?;
    let mut params = Parameters::new(plat, dram);
    params.capacity_mb = techs.iter().map(|&t| (t, capacity_mb)).collect();
    let cells = evaluate_grid("all", workloads, &ppas, plat, dram, |_, _| None)?;
    normalize("iso-capacity", params, techs, cells)
}

/// Largest grid capacity whose published-curve area fits `budget * tolerance`.
pub fn iso_area_capacity(
    curves: &AnchorCurveSet,
    tech: MemoryTech,
    area_budget_mm2: f64,
    capacity_grid: &[f64],
    tolerance: f64,
) -> Result<f64, AnalysisError> {
    if !(tolerance >= 1.0) {
        return Err(AnalysisError::BadTolerance(tolerance));
    }
    let limit = area_budget_mm2 * tolerance;
    let mut best: Option<f64> = None;
    for &c in capacity_grid {
        if curves.area_at(tech, c)? <= limit && best.is_none_or(|b| c > b) {
            best = Some(c);
        }
    }
    best.ok_or(AnalysisError::NoFeasibleCapacity { tech, budget_mm2: area_budget_mm2, tolerance })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsoAreaConfig {
    pub techs: Vec<MemoryTech>,
    pub baseline_capacity_mb: f64,
    pub capacity_grid: Vec<f64>,
    pub tolerance: f64,
}

impl Default for IsoAreaConfig {
    fn default() -> Self {
        IsoAreaConfig {
            techs: MemoryTech::ALL.to_vec(),
            baseline_capacity_mb: 3.0,
            capacity_grid: (1..=32).map(f64::from).collect(),
            tolerance: 1.02,
        }
    }
}

/// Percent DRAM-transaction reduction per technology relative to SRAM.
pub type DramReductions = BTreeMap<MemoryTech, f64>;

/// Reductions of each enlarged cache's DRAM traffic against the SRAM run.
pub fn reductions_from_sim(
    baseline: &SimResult,
    per_tech: &[(MemoryTech, SimResult)],
) -> Result<DramReductions, AnalysisError> {
    let mut out = DramReductions::new();
    out.insert(BASELINE, 0.0);
    for (tech, r) in per_tech {
        if *tech != BASELINE {
            out.insert(*tech, dram_reduction(baseline, r)?);
        }
    }
    Ok(out)
}

/// Published iso-area reductions (STT 7 MB, SOT 10 MB vs SRAM 3 MB).
pub fn published_reductions() -> DramReductions {
    [(MemoryTech::Sram, 0.0), (MemoryTech::SttMram, 14.6), (MemoryTech::SotMram, 19.8)].into()
}

fn scaled_transactions(base: u64, reduction_pct: f64) -> u64 {
    (base as f64 * (1.0 - reduction_pct / 100.0)).round().max(0.0) as u64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsoAreaReport {
    pub budget_mm2: f64,
    pub capacities: BTreeMap<MemoryTech, f64>,
    pub without_dram: NormalizedReport,
    pub with_dram: NormalizedReport,
}

/// SRAM at its baseline capacity against each MRAM at the largest capacity
/// that fits the same area, without and with DRAM traffic.
pub fn iso_area_study(
    workloads: &[WorkloadStats],
    curves: &AnchorCurveSet,
    plat: &PlatformParams,
    dram: &DramParams,
    config: &IsoAreaConfig,
    reductions: &DramReductions,
) -> Result<IsoAreaReport, AnalysisError> {
    require_baseline(&config.techs)?;
    let budget_mm2 = curves.area_at(BASELINE, config.baseline_capacity_mb)?;
    let mut capacities = BTreeMap::new();
    let mut ppas = Vec::new();
    for &tech in &config.techs {
        let cap = if tech == BASELINE {
            config.baseline_capacity_mb
        } else {
            iso_area_capacity(curves, tech, budget_mm2, &config.capacity_grid, config.tolerance)?
        };
        capacities.insert(tech, cap);
        ppas.push(curves.published_ppa(tech, cap)?);
        if !reductions.contains_key(&tech) && tech != BASELINE {
            return Err(AnalysisError::MissingReduction(tech));
        }
    }
    let txns = |s: &WorkloadStats, tech: MemoryTech| {
        let pct = reductions.get(&tech).copied().unwrap_or(0.0);
        Some(scaled_transactions(s.dram_transactions(), pct))
    };

    let mut params = Parameters::new(plat, None);
    params.tolerance = Some(config.tolerance);
    params.capacity_mb = capacities.clone();
    params.dram_reduction_pct =
        config.techs.iter().map(|&t| (t, reductions.get(&t).copied().unwrap_or(0.0))).collect();
    let cells = evaluate_grid("all", workloads, &ppas, plat, None, txns)?;
    let without_dram = normalize("iso-area", params.clone(), &config.techs, cells)?;

    let mut params_dram = Parameters::new(plat, Some(dram));
    params_dram.tolerance = params.tolerance;
    params_dram.capacity_mb = params.capacity_mb;
    params_dram.dram_reduction_pct = params.dram_reduction_pct;
    let cells = evaluate_grid("all", workloads, &ppas, plat, Some(dram), txns)?;
    let with_dram = normalize("iso-area+dram", params_dram, &config.techs, cells)?;

    Ok(IsoAreaReport { budget_mm2, capacities, without_dram, with_dram })
}

/// Normalized ratios for one workload profiled at several batch sizes.
pub fn batch_sweep(
    family: &[WorkloadStats],
    curves: &AnchorCurveSet,
    techs: &[MemoryTech],
    capacity_mb: f64,
    plat: &PlatformParams,
) -> Result<NormalizedReport, AnalysisError> {
    require_baseline(techs)?;
    let first = family.first().ok_or(AnalysisError::EmptyFamily)?;
    if let Some(other) = family.iter().find(|s| s.name != first.name || s.phase != first.phase) {
        return Err(AnalysisError::MixedFamily(first.label(), other.label()));
    }
    let mut ordered: Vec<&WorkloadStats> = family.iter().collect();
    ordered.sort_by_key(|s| s.batch_size);
    let ppas: Vec<CachePPA> =
        techs.iter().map(|&t| curves.published_ppa(t, capacity_mb)).collect::<Result<_, _>>()?;
    let mut cells = Vec::new();
    for s in ordered {
        cells.extend(evaluate_grid(
            &s.batch_size.to_string(),
            std::slice::from_ref(s),
            &ppas,
            plat,
            None,
            |_, _| None,
        )?);
    }
    let mut params = Parameters::new(plat, None);
    params.capacity_mb = techs.iter().map(|&t| (t, capacity_mb)).collect();
    normalize("batch", params, techs, cells)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalabilityReport {
    pub report: NormalizedReport,
    /// EDAP-tuned organization per (tech, capacity).
    pub tuned: Vec<TunedConfig>,
    /// Smallest capacity from which SOT read energy stays at or below SRAM's.
    pub sot_read_energy_break_even_mb: Option<f64>,
}

impl ScalabilityReport {
    pub fn tuned_ppa(&self, tech: MemoryTech, capacity_mb: f64) -> Option<&CachePPA> {
        self.tuned
            .iter()
            .find(|c| c.tech == tech && c.capacity_mb == capacity_mb)
            .map(|c| &c.ppa)
    }
}

fn group_key(capacity_mb: f64) -> String {
    capacity_mb.to_string()
}

/// Tunes every technology independently per capacity, then evaluates all
/// workloads on the tuned caches.
pub fn scalability_study(
    curves: &AnchorCurveSet,
    workloads: &[WorkloadStats],
    caps_mb: &[f64],
    plat: &PlatformParams,
    mix: &ReferenceMix,
) -> Result<ScalabilityReport, AnalysisError> {
    let techs = MemoryTech::ALL.to_vec();
    let space = SweepSpace {
        mems: techs.clone(),
        caps_mb: caps_mb.to_vec(),
        opts: OptTarget::ALL.to_vec(),
        accs: AccessType::ALL.to_vec(),
    };
    let outcome = tune(&space, curves, mix)?;
    if let Some(err) = outcome.empty.into_iter().next() {
        return Err(err.into());
    }
    let tuned = outcome.configs;

    let mut cells = Vec::new();
    for &cap in caps_mb {
        let ppas: Vec<CachePPA> = techs
            .iter()
            .map(|&t| {
                tuned.iter().find(|c| c.tech == t && c.capacity_mb == cap).map(|c| c.ppa).expect("tuned")
            })
            .collect();
        cells.extend(evaluate_grid(&group_key(cap), workloads, &ppas, plat, None, |_, _| None)?);
    }
    let mut params = Parameters::new(plat, None);
    params.rho = Some(mix.read_fraction);
    let report = normalize("scalability", params, &techs, cells)?;

    let find = |t: MemoryTech, c: f64| {
        tuned.iter().find(|x| x.tech == t && x.capacity_mb == c).map(|x| x.ppa.read_energy_nj)
    };
    let mut sorted_caps = caps_mb.to_vec();
    sorted_caps.sort_by(f64::total_cmp);
    let mut break_even = None;
    for &c in sorted_caps.iter().rev() {
        if find(MemoryTech::SotMram, c) <= find(MemoryTech::Sram, c) {
            break_even = Some(c);
        } else {
            break;
        }
    }
    Ok(ScalabilityReport { report, tuned, sot_read_energy_break_even_mb: break_even })
}

/// Default capacity list for the scalability study: the shipped anchor grid.
pub fn default_scalability_caps() -> Vec<f64> {
    vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0, 12.0, 16.0, 24.0, 32.0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::workload::Phase;
    use MemoryTech::*;

    fn stats(reads: u64, writes: u64, exec: Option<f64>) -> WorkloadStats {
        WorkloadStats {
            name: "W".into(),
            phase: Phase::Inference,
            batch_size: 4,
            l2_reads: reads,
            l2_writes: writes,
            dram_reads: 0,
            dram_writes: 0,
            exec_time_s: exec,
        }
    }

    fn table(tech: MemoryTech, cap: f64) -> CachePPA {
        data::shipped_anchors().published_ppa(tech, cap).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1e-300)
    }

    #[test]
    fn dynamic_energy_examples() {
        let sram = table(Sram, 3.0);
        // 1e9 * 0.35 nJ + 1e8 * 0.32 nJ = 0.35 + 0.032 J
        assert!(close(dynamic_energy(&stats(1_000_000_000, 100_000_000, None), &sram), 0.382));
        assert_eq!(dynamic_energy(&stats(0, 0, None), &sram), 0.0);
        let one = dynamic_energy(&stats(12345, 678, None), &sram);
        let two = dynamic_energy(&stats(24690, 1356, None), &sram);
        assert!(close(two, 2.0 * one));
    }

    #[test]
    fn cycle_rounding() {
        let f = PlatformParams::default().l2_clock_hz;
        assert_eq!(cycles(2.91, f), 5.0); // 4.309...
        assert_eq!(cycles(9.31, f), 14.0); // 13.79
        assert_eq!(cycles(1.53, f), 3.0); // 2.27
        let plat = PlatformParams::default();
        assert_eq!(cache_delay(&stats(0, 0, None), &table(Sram, 3.0), &plat), 0.0);
        let d = cache_delay(&stats(10, 2, None), &table(SttMram, 3.0), &plat);
        // STT read 2.98 ns -> 5 cycles, write 9.31 ns -> 14 cycles
        assert!(close(d, (10.0 * 5.0 + 2.0 * 14.0) / 1.481e9));
    }

    #[test]
    fn leakage_and_dram_costs() {
        assert!(close(leakage_energy(&table(Sram, 3.0), 1.0), 6.442));
        assert_eq!(leakage_energy(&table(Sram, 3.0), 0.0), 0.0);
        let r = leakage_energy(&table(Sram, 3.0), 1.0) / leakage_energy(&table(SotMram, 3.0), 1.0);
        assert!((r - 12.2239).abs() < 1e-4);
        assert_eq!(dram_cost(0, &DramParams::default()), (0.0, 0.0));
        let (e, t) = dram_cost(1_000_000, &DramParams::default());
        assert!(close(e, 0.07) && close(t, 0.1));
        let (e2, t2) = dram_cost(3_000_000, &DramParams::default());
        assert!(close(e2, 3.0 * e) && close(t2, 3.0 * t));
    }

    #[test]
    fn evaluate_closed_model_and_exec_time() {
        let plat = PlatformParams::default();
        let s = stats(1000, 100, None);
        let r = evaluate(&s, &table(Sram, 3.0), &plat, None, None).unwrap();
        assert!(close(r.energy.leakage_j, 6.442 * r.delay_s));
        assert!(!r.dram_included);
        assert_eq!(r.energy.total_j, r.energy.dynamic_j + r.energy.leakage_j + r.energy.dram_j);
        assert_eq!(r.edp_js, r.energy.total_j * r.delay_s);

        let timed = stats(1000, 100, Some(1.0));
        let sram = evaluate(&timed, &table(Sram, 3.0), &plat, None, None).unwrap();
        let sot = evaluate(&timed, &table(SotMram, 3.0), &plat, None, None).unwrap();
        assert!(close(sram.energy.leakage_j, 6.442));
        assert!(close(sot.energy.leakage_j, 0.527));
        assert!((sram.energy.leakage_j / sot.energy.leakage_j - 12.22).abs() < 0.01);
    }

    #[test]
    fn dram_strictly_adds() {
        let plat = PlatformParams::default();
        let mut s = stats(1000, 100, None);
        s.dram_reads = 50;
        let off = evaluate(&s, &table(SttMram, 3.0), &plat, None, None).unwrap();
        let on = evaluate(&s, &table(SttMram, 3.0), &plat, Some(&DramParams::default()), None).unwrap();
        assert!(on.energy.total_j > off.energy.total_j && on.delay_s > off.delay_s);
        assert_eq!(on.dram_transactions, 50);
        let over = evaluate(&s, &table(SttMram, 3.0), &plat, Some(&DramParams::default()), Some(7)).unwrap();
        assert_eq!(over.dram_transactions, 7);
    }

    #[test]
    fn empty_workload_rejected() {
        let err = evaluate(&stats(0, 0, None), &table(Sram, 3.0), &PlatformParams::default(), None, None);
        assert!(matches!(err, Err(AnalysisError::EmptyWorkload(_))));
    }

    #[test]
    fn iso_area_capacities() {
        let curves = data::shipped_anchors();
        let grid: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(iso_area_capacity(&curves, SttMram, 5.53, &grid, 1.0).unwrap(), 7.0);
        assert_eq!(iso_area_capacity(&curves, SotMram, 5.53, &grid, 1.02).unwrap(), 10.0);
        assert!(matches!(
            iso_area_capacity(&curves, SotMram, 0.1, &grid, 1.02),
            Err(AnalysisError::NoFeasibleCapacity { .. })
        ));
        assert!(matches!(
            iso_area_capacity(&curves, SotMram, 5.53, &grid, 0.9),
            Err(AnalysisError::BadTolerance(_))
        ));
        assert!(matches!(
            iso_area_capacity(&curves, SotMram, 5.53, &[0.5], 1.0),
            Err(AnalysisError::Model(ModelError::OutOfRange { .. }))
        ));
    }

    #[test]
    fn iso_capacity_self_normalizes() {
        let curves = data::shipped_anchors();
        let plat = PlatformParams::default();
        let rep =
            iso_capacity_study(&data::shipped_profiles(), &curves, &MemoryTech::ALL, 3.0, &plat, None).unwrap();
        assert_eq!(rep.rows.len(), 13 * 3);
        for r in rep.rows_for(Sram) {
            assert_eq!(r.ratios, Ratios::ONE);
        }
        assert_eq!(rep.summary_for("all", Sram).unwrap().geomean, Ratios::ONE);
        assert!(iso_capacity_study(&[], &curves, &[SttMram], 3.0, &plat, None).is_err());
    }

    #[test]
    fn iso_area_with_zero_reduction_is_common_term() {
        let curves = data::shipped_anchors();
        let plat = PlatformParams::default();
        let zero: DramReductions = MemoryTech::ALL.iter().map(|&t| (t, 0.0)).collect();
        let rep = iso_area_study(
            &data::shipped_profiles(),
            &curves,
            &plat,
            &DramParams::default(),
            &IsoAreaConfig::default(),
            &zero,
        )
        .unwrap();
        assert_eq!(rep.capacities[&SttMram], 7.0);
        assert_eq!(rep.capacities[&SotMram], 10.0);
        // same DRAM term for every tech: energy difference is unchanged by DRAM
        for (a, b) in rep.without_dram.rows.iter().zip(&rep.with_dram.rows) {
            let base_a = rep.without_dram.rows.iter().find(|r| r.result.tech == Sram && r.result.workload == a.result.workload).unwrap();
            let base_b = rep.with_dram.rows.iter().find(|r| r.result.tech == Sram && r.result.workload == b.result.workload).unwrap();
            let da = a.result.energy.total_j - base_a.result.energy.total_j;
            let db = b.result.energy.total_j - base_b.result.energy.total_j;
            let dleak = a.result.energy.leakage_j - base_a.result.energy.leakage_j;
            let dleak_b = b.result.energy.leakage_j - base_b.result.energy.leakage_j;
            assert!((da - dleak - (db - dleak_b)).abs() <= 1e-9 * da.abs().max(1e-12));
            assert_eq!(a.result.dram_transactions, 0);
        }
    }

    #[test]
    fn batch_family_validation() {
        let curves = data::shipped_anchors();
        let plat = PlatformParams::default();
        assert_eq!(batch_sweep(&[], &curves, &MemoryTech::ALL, 3.0, &plat), Err(AnalysisError::EmptyFamily));
        let fam = data::shipped_alexnet_batches();
        assert!(matches!(
            batch_sweep(&fam, &curves, &MemoryTech::ALL, 3.0, &plat),
            Err(AnalysisError::MixedFamily(..))
        ));
        let one = vec![fam[0].clone()];
        let rep = batch_sweep(&one, &curves, &MemoryTech::ALL, 3.0, &plat).unwrap();
        assert_eq!(rep.summary.len(), 3);
        let same = vec![fam[0].clone(), WorkloadStats { batch_size: 8, ..fam[0].clone() }];
        let rep = batch_sweep(&same, &curves, &MemoryTech::ALL, 3.0, &plat).unwrap();
        let stt: Vec<_> = rep.rows_for(SttMram).map(|r| r.ratios).collect();
        assert_eq!(stt[0], stt[1]);
    }

    #[test]
    fn reductions_from_simulated_traffic() {
        let base = SimResult { dram_transactions: 1000, ..SimResult::default() };
        let stt = SimResult { dram_transactions: 854, ..SimResult::default() };
        let sot = SimResult { dram_transactions: 802, ..SimResult::default() };
        let red = reductions_from_sim(&base, &[(SttMram, stt), (SotMram, sot)]).unwrap();
        assert_eq!(red, published_reductions());
        assert_eq!(scaled_transactions(1000, 14.6), 854);
    }
}
