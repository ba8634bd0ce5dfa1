// SPDX-License-Identifier: Apache-2.0

//! CSV/JSON serialization of study, tuner and simulator outputs, plus atomic
//! file emission.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::analysis::{IsoAreaReport, NormalizedReport, Ratios, ScalabilityReport};
use crate::cachesim::{CacheGeometry, SimResult};
use crate::techmodel::MemoryTech;
use crate::tuner::{ReferenceMix, TunedConfig};
use crate::workload::FORMAT_TAG;
use crate::Error;

pub const TUNER_HEADER: &str =
    "tech,capacity_mb,opt,acc,edap,read_lat_ns,write_lat_ns,read_e_nj,write_e_nj,leak_mw,area_mm2";
pub const SIM_HEADER: &str = "capacity_mb,ways,accesses,hits,misses,writebacks,dram_transactions";
pub const ROWS_HEADER: &str = "study,group,workload,tech,capacity_mb,dynamic_j,leakage_j,dram_j,total_j,\
delay_s,edp_js,dram_transactions,dynamic_ratio,leakage_ratio,total_ratio,delay_ratio,edp_ratio";
pub const SUMMARY_HEADER: &str = "group,tech,workloads,metric,geomean,min,max,log_std";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Dynamic,
    Leakage,
    Total,
    Delay,
    Edp,
}

impl Metric {
    pub const ALL: [Metric; 5] = [Metric::Dynamic, Metric::Leakage, Metric::Total, Metric::Delay, Metric::Edp];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Dynamic => "dynamic_energy",
            Metric::Leakage => "leakage_energy",
            Metric::Total => "total_energy",
            Metric::Delay => "delay",
            Metric::Edp => "edp",
        }
    }

    pub fn of(self, r: &Ratios) -> f64 {
        match self {
            Metric::Dynamic => r.dynamic,
            Metric::Leakage => r.leakage,
            Metric::Total => r.total,
            Metric::Delay => r.delay,
            Metric::Edp => r.edp,
        }
    }
}

/// Writes `bytes` to a temporary sibling and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let shown = path.display().to_string();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(&shown, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(&shown, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(&shown, e))?;
    tmp.persist(path).map_err(|e| Error::io(&shown, e.error))?;
    Ok(())
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, Error> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn preamble(out: &mut String, report: &NormalizedReport) -> Result<(), Error> {
    writeln!(out, "{FORMAT_TAG}").unwrap();
    writeln!(out, "# study: {}", report.study).unwrap();
    writeln!(out, "# provenance: {}", report.parameters.provenance).unwrap();
    let mut params = report.parameters.clone();
    params.provenance.clear();
    writeln!(out, "# parameters: {}", serde_json::to_string(&params)?).unwrap();
    Ok(())
}

/// One row per (workload, tech, capacity).
pub fn rows_csv(report: &NormalizedReport) -> Result<String, Error> {
    let mut out = String::new();
    preamble(&mut out, report)?;
    writeln!(out, "{ROWS_HEADER}").unwrap();
    for row in &report.rows {
        let r = &row.result;
        let q = &row.ratios;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            report.study,
            row.group,
            r.workload,
            r.tech,
            r.capacity_mb,
            r.energy.dynamic_j,
            r.energy.leakage_j,
            r.energy.dram_j,
            r.energy.total_j,
            r.delay_s,
            r.edp_js,
            r.dram_transactions,
            q.dynamic,
            q.leakage,
            q.total,
            q.delay,
            q.edp
        )
        .unwrap();
    }
    Ok(out)
}

/// Geometric mean and dispersion per (group, tech, metric).
pub fn summary_csv(report: &NormalizedReport) -> Result<String, Error> {
    let mut out = String::new();
    preamble(&mut out, report)?;
    writeln!(out, "{SUMMARY_HEADER}").unwrap();
    for s in &report.summary {
        for m in Metric::ALL {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                s.group,
                s.tech,
                s.workloads,
                m.name(),
                m.of(&s.geomean),
                m.of(&s.min),
                m.of(&s.max),
                m.of(&s.log_std)
            )
            .unwrap();
        }
    }
    Ok(out)
}

fn techs_of(report: &NormalizedReport) -> Vec<MemoryTech> {
    let mut techs: Vec<MemoryTech> = report.rows.iter().map(|r| r.result.tech).collect();
    techs.sort();
    techs.dedup();
    techs
}

/// Per-workload ratio of `metric`: `workload,<tech>...`.
pub fn plot_by_workload(report: &NormalizedReport, group: &str, metric: Metric) -> String {
    let techs = techs_of(report);
    let mut out = String::from("workload");
    for t in &techs {
        write!(out, ",{t}").unwrap();
    }
    out.push('\n');
    let mut workloads: Vec<&str> = Vec::new();
    for r in report.rows.iter().filter(|r| r.group == group) {
        if !workloads.contains(&r.result.workload.as_str()) {
            workloads.push(&r.result.workload);
        }
    }
    for w in workloads {
        out.push_str(w);
        for &t in &techs {
            let v = report
                .rows
                .iter()
                .find(|r| r.group == group && r.result.workload == w && r.result.tech == t)
                .map(|r| metric.of(&r.ratios));
            match v {
                Some(v) => write!(out, ",{v}").unwrap(),
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    if report.summary.iter().any(|s| s.group == group) {
        out.push_str("geomean");
        for &t in &techs {
            match report.summary_for(group, t) {
                Some(s) => write!(out, ",{}", metric.of(&s.geomean)).unwrap(),
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

/// Geometric-mean ratio of `metric` per group: `<x>,<tech>...`, with
/// `<tech>_log_std` dispersion columns.
pub fn plot_by_group(report: &NormalizedReport, x_name: &str, metric: Metric) -> String {
    let techs = techs_of(report);
    let mut out = String::from(x_name);
    for t in &techs {
        write!(out, ",{t}").unwrap();
    }
    for t in &techs {
        write!(out, ",{t}_log_std").unwrap();
    }
    out.push('\n');
    let mut groups: Vec<&str> = Vec::new();
    for s in &report.summary {
        if !groups.contains(&s.group.as_str()) {
            groups.push(&s.group);
        }
    }
    for g in groups {
        out.push_str(g);
        for &t in &techs {
            match report.summary_for(g, t) {
                Some(s) => write!(out, ",{}", metric.of(&s.geomean)).unwrap(),
                None => out.push(','),
            }
        }
        for &t in &techs {
            match report.summary_for(g, t) {
                Some(s) => write!(out, ",{}", metric.of(&s.log_std)).unwrap(),
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

pub fn tuner_csv(configs: &[TunedConfig]) -> String {
    let mut out = format!("{TUNER_HEADER}\n");
    for c in configs {
        let p = &c.ppa;
        writeln!(
            out,
            "{},{},{},{},{:e},{},{},{},{},{},{}",
            c.tech,
            c.capacity_mb,
            c.opt,
            c.acc,
            c.edap_score,
            p.read_latency_ns,
            p.write_latency_ns,
            p.read_energy_nj,
            p.write_energy_nj,
            p.leakage_power_mw,
            p.area_mm2
        )
        .unwrap();
    }
    out
}

#[derive(Serialize)]
struct TunerJson<'a> {
    mix: &'a ReferenceMix,
    provenance: &'a str,
    configs: &'a [TunedConfig],
    skipped: Vec<String>,
}

pub fn tuner_json(configs: &[TunedConfig], mix: &ReferenceMix, skipped: &[String]) -> Result<String, Error> {
    to_json(&TunerJson {
        mix,
        provenance: crate::data::PROVENANCE,
        configs,
        skipped: skipped.to_vec(),
    })
}

pub fn sim_csv(geoms: &[CacheGeometry], results: &[SimResult]) -> String {
    let mut out = format!("{SIM_HEADER}\n");
    for (g, r) in geoms.iter().zip(results) {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            g.capacity_mb(),
            g.ways,
            r.accesses,
            r.hits,
            r.misses,
            r.writebacks,
            r.dram_transactions
        )
        .unwrap();
    }
    out
}

/// Iso-area capacity summary: `tech,capacity_mb,area_mm2,budget_mm2,tolerance,dram_reduction_pct`.
pub fn iso_area_capacities_csv(rep: &IsoAreaReport, areas: &[(MemoryTech, f64)]) -> String {
    let mut out = String::from("tech,capacity_mb,area_mm2,budget_mm2,tolerance,dram_reduction_pct\n");
    let params = &rep.without_dram.parameters;
    for (tech, cap) in &rep.capacities {
        let area = areas.iter().find(|(t, _)| t == tech).map(|(_, a)| *a).unwrap_or(f64::NAN);
        writeln!(
            out,
            "{},{},{},{},{},{}",
            tech,
            cap,
            area,
            rep.budget_mm2,
            params.tolerance.unwrap_or(1.0),
            params.dram_reduction_pct.get(tech).copied().unwrap_or(0.0)
        )
        .unwrap();
    }
    out
}

/// Per-capacity tuned read latency and read energy: the crossover view.
pub fn scalability_ppa_csv(rep: &ScalabilityReport) -> String {
    let mut caps: Vec<f64> = rep.tuned.iter().map(|c| c.capacity_mb).collect();
    caps.sort_by(f64::total_cmp);
    caps.dedup();
    let mut out = String::from("capacity_mb");
    for t in MemoryTech::ALL {
        write!(out, ",{t}_read_lat_ns").unwrap();
    }
    for t in MemoryTech::ALL {
        write!(out, ",{t}_read_e_nj").unwrap();
    }
    out.push('\n');
    for c in caps {
        write!(out, "{c}").unwrap();
        for t in MemoryTech::ALL {
            match rep.tuned_ppa(t, c) {
                Some(p) => write!(out, ",{}", p.read_latency_ns).unwrap(),
                None => out.push(','),
            }
        }
        for t in MemoryTech::ALL {
            match rep.tuned_ppa(t, c) {
                Some(p) => write!(out, ",{}", p.read_energy_nj).unwrap(),
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::iso_capacity_study;
    use crate::data;
    use crate::techmodel::PlatformParams;

    fn report() -> NormalizedReport {
        iso_capacity_study(
            &data::shipped_profiles(),
            &data::shipped_anchors(),
            &MemoryTech::ALL,
            3.0,
            &PlatformParams::default(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn rows_csv_shape() {
        let csv = rows_csv(&report()).unwrap();
        let lines: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(lines[0], ROWS_HEADER);
        assert_eq!(lines.len(), 1 + 13 * 3);
        let cols = ROWS_HEADER.split(',').count();
        assert!(lines.iter().all(|l| l.split(',').count() == cols));
        assert!(csv.starts_with(FORMAT_TAG));
        assert!(csv.contains("# provenance: "));
    }

    #[test]
    fn json_round_trips() {
        let rep = report();
        let s = to_json(&rep).unwrap();
        let back: NormalizedReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, rep);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        for key in ["study", "baseline", "parameters", "rows", "summary"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v["parameters"].get("clock").is_some());
    }

    #[test]
    fn plot_has_geomean_row() {
        let p = plot_by_workload(&report(), "all", Metric::Edp);
        assert!(p.starts_with("workload,SRAM,STT,SOT\n"));
        assert_eq!(p.lines().count(), 1 + 13 + 1);
        assert!(p.lines().last().unwrap().starts_with("geomean,1,"));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
