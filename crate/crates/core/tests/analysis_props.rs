// SPDX-License-Identifier: Apache-2.0

mod common;

use common::close;
use nvcache_dse::analysis::{evaluate, iso_capacity_study, WorkloadTechResult};
use nvcache_dse::cachemodel::{AnchorCurveSet, CachePPA, CurveKey};
use nvcache_dse::techmodel::{DramParams, MemoryTech, PlatformParams};
use nvcache_dse::workload::{Phase, WorkloadStats};
use proptest::prelude::*;

fn ppa_strategy(tech: MemoryTech) -> impl Strategy<Value = CachePPA> {
    (0.5f64..20.0, 0.5f64..20.0, 0.01f64..2.0, 0.01f64..2.0, 1.0f64..80_000.0, 0.1f64..60.0).prop_map(
        move |(tr, tw, er, ew, leak, area)| CachePPA {
            tech,
            capacity_mb: 3.0,
            read_latency_ns: tr,
            write_latency_ns: tw,
            read_energy_nj: er,
            write_energy_nj: ew,
            leakage_power_mw: leak,
            area_mm2: area,
        },
    )
}

fn stats_strategy() -> impl Strategy<Value = WorkloadStats> {
    (1u64..1_000_000_000, 0u64..100_000_000, 0u64..10_000_000, prop::option::of(1e-4f64..10.0)).prop_map(
        |(r, w, d, t)| WorkloadStats {
            name: "W".into(),
            phase: Phase::Training,
            batch_size: 8,
            l2_reads: r,
            l2_writes: w,
            dram_reads: d,
            dram_writes: d / 3,
            exec_time_s: t,
        },
    )
}

/// Straight-line restatement of the workload model.
fn oracle(s: &WorkloadStats, p: &CachePPA, f_hz: f64, dram: Option<&DramParams>) -> (f64, f64) {
    let cyc = |ns: f64| (ns * f_hz / 1e9).ceil();
    let mut delay = (s.l2_reads as f64 * cyc(p.read_latency_ns) + s.l2_writes as f64 * cyc(p.write_latency_ns)) / f_hz;
    let mut energy = (s.l2_reads as f64 * p.read_energy_nj + s.l2_writes as f64 * p.write_energy_nj) / 1e9;
    if let Some(d) = dram {
        let n = (s.dram_reads + s.dram_writes) as f64;
        delay += n * d.latency_per_access_ns / 1e9;
        energy += n * d.energy_per_access_nj / 1e9;
    }
    energy += p.leakage_power_mw / 1e3 * s.exec_time_s.unwrap_or(delay);
    (energy, delay)
}

fn eval(s: &WorkloadStats, p: &CachePPA, dram: Option<&DramParams>) -> WorkloadTechResult {
    evaluate(s, p, &PlatformParams::default(), dram, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(2000) })]

    #[test]
    fn matches_oracle_and_adds_up(s in stats_strategy(), p in ppa_strategy(MemoryTech::SttMram), with_dram in any::<bool>()) {
        let dram = DramParams::default();
        let d = with_dram.then_some(&dram);
        let r = eval(&s, &p, d);
        let (e, t) = oracle(&s, &p, 1.481e9, d);
        prop_assert!(close(r.energy.total_j, e, 1e-12));
        prop_assert!(close(r.delay_s, t, 1e-12));
        prop_assert_eq!(r.energy.total_j, r.energy.dynamic_j + r.energy.leakage_j + r.energy.dram_j);
        prop_assert_eq!(r.edp_js, r.energy.total_j * r.delay_s);
    }

    #[test]
    fn counts_scale_linearly(s in stats_strategy(), p in ppa_strategy(MemoryTech::SotMram), k in 1u64..50) {
        let mut s = s;
        s.exec_time_s = None;
        s.l2_reads %= 10_000_000;
        s.l2_reads += 1;
        let mut big = s.clone();
        big.l2_reads *= k;
        big.l2_writes *= k;
        let (a, b) = (eval(&s, &p, None), eval(&big, &p, None));
        let kf = k as f64;
        prop_assert!(close(b.energy.dynamic_j, kf * a.energy.dynamic_j, 1e-12));
        prop_assert!(close(b.delay_s, kf * a.delay_s, 1e-12));
        prop_assert!(close(b.energy.total_j, kf * a.energy.total_j, 1e-12));
        prop_assert!(close(b.edp_js, kf * kf * a.edp_js, 1e-11));
    }

    #[test]
    fn total_ratio_bracketed(
        s in stats_strategy(),
        base in ppa_strategy(MemoryTech::Sram),
        nvm in ppa_strategy(MemoryTech::SttMram),
        t in 1e-4f64..10.0,
    ) {
        let mut s = s;
        s.exec_time_s = Some(t);
        let (b, n) = (eval(&s, &base, None), eval(&s, &nvm, None));
        let dyn_r = n.energy.dynamic_j / b.energy.dynamic_j;
        let leak_r = n.energy.leakage_j / b.energy.leakage_j;
        let tot_r = n.energy.total_j / b.energy.total_j;
        let (lo, hi) = (dyn_r.min(leak_r), dyn_r.max(leak_r));
        prop_assert!(tot_r >= lo * (1.0 - 1e-12) && tot_r <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn fewer_dram_accesses_gain_with_dram_cost(
        s in stats_strategy(),
        base in ppa_strategy(MemoryTech::Sram),
        n_base in 1_000u64..10_000_000,
        cut in 0.01f64..0.9,
        e1 in 1.0f64..100.0,
        step in 1.0f64..100.0,
    ) {
        let n_nvm = ((n_base as f64) * (1.0 - cut)) as u64;
        prop_assume!(n_nvm < n_base);
        let plat = PlatformParams::default();
        // identical cache terms; only the DRAM traffic differs
        let nvm = CachePPA { tech: MemoryTech::SotMram, ..base };
        let ratio = |e: f64| {
            let d = DramParams { energy_per_access_nj: e, latency_per_access_ns: e };
            let b = evaluate(&s, &base, &plat, Some(&d), Some(n_base)).unwrap();
            let n = evaluate(&s, &nvm, &plat, Some(&d), Some(n_nvm)).unwrap();
            n.edp_js / b.edp_js
        };
        let (r1, r2) = (ratio(e1), ratio(e1 + step));
        prop_assert!(r1 < 1.0);
        prop_assert!(r2 < r1, "{r1} -> {r2}");
    }

    #[test]
    fn baseline_ratios_exactly_one(
        stats in prop::collection::vec(stats_strategy(), 1..6),
        sram in ppa_strategy(MemoryTech::Sram),
        stt in ppa_strategy(MemoryTech::SttMram),
        sot in ppa_strategy(MemoryTech::SotMram),
    ) {
        let points = [sram, stt, sot].into_iter().flat_map(|p| {
            let mut hi = p;
            hi.capacity_mb = 4.0;
            hi.area_mm2 *= 1.5;
            [(CurveKey::published(p.tech), p), (CurveKey::published(p.tech), hi)]
        });
        let curves = AnchorCurveSet::from_points(points).unwrap();
        let rep = iso_capacity_study(&stats, &curves, &MemoryTech::ALL, 3.0, &PlatformParams::default(), None).unwrap();
        for r in rep.rows_for(MemoryTech::Sram) {
            prop_assert_eq!([r.ratios.dynamic, r.ratios.leakage, r.ratios.total, r.ratios.delay, r.ratios.edp], [1.0; 5]);
        }
        let g = rep.summary_for("all", MemoryTech::Sram).unwrap();
        prop_assert_eq!(g.geomean.edp, 1.0);
        prop_assert_eq!(g.log_std.edp, 0.0);
    }
}
