// SPDX-License-Identifier: Apache-2.0

//! Independent reference implementations used as test oracles.

#![allow(dead_code)]

use nvcache_dse::cachemodel::{AccessType, AnchorCurveSet, CachePPA, CurveKey, OptTarget, Tuning};
use nvcache_dse::cachesim::SimResult;
use nvcache_dse::techmodel::MemoryTech;
use nvcache_dse::workload::{Op, TraceEvent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Flat recency-list LRU: each set is a Vec ordered most-recent first.
pub fn reference_sim(trace: &[TraceEvent], capacity_bytes: u64, ways: usize, line: u64) -> SimResult {
    let sets = capacity_bytes / (ways as u64 * line);
    let mut lists: Vec<Vec<(u64, bool)>> = vec![Vec::new(); sets as usize];
    let mut r = SimResult::default();
    for ev in trace {
        let tag = ev.address / line;
        let list = &mut lists[(tag % sets) as usize];
        let write = ev.op == Op::Write;
        r.accesses += 1;
        if let Some(pos) = list.iter().position(|&(t, _)| t == tag) {
            r.hits += 1;
            let (t, dirty) = list.remove(pos);
            list.insert(0, (t, dirty || write));
        } else {
            r.misses += 1;
            if list.len() == ways {
                let (_, dirty) = list.pop().unwrap();
                if dirty {
                    r.writebacks += 1;
                }
            }
            list.insert(0, (tag, write));
        }
    }
    r.dram_transactions = r.misses + r.writebacks;
    r
}

/// Random trace over at most `lines` distinct lines.
pub fn random_trace(rng: &mut ChaCha8Rng, len: usize, lines: u64, line: u64) -> Vec<TraceEvent> {
    (0..len)
        .map(|_| {
            let addr = rng.random_range(0..lines) * line + rng.random_range(0..line);
            if rng.random::<f64>() < 0.7 {
                TraceEvent::read(addr)
            } else {
                TraceEvent::write(addr)
            }
        })
        .collect()
}

/// EDAP written out directly from its definition.
pub fn oracle_edap(p: &CachePPA, rho: f64, n: f64, leak: bool) -> f64 {
    let delay = n * (rho * p.read_latency_ns + (1.0 - rho) * p.write_latency_ns) * 1e-9;
    let mut energy = n * (rho * p.read_energy_nj + (1.0 - rho) * p.write_energy_nj) * 1e-9;
    if leak {
        energy += p.leakage_power_mw * 1e-3 * delay;
    }
    energy * delay * p.area_mm2
}

#[derive(Clone, Debug, PartialEq)]
pub struct BruteChoice {
    pub tech: MemoryTech,
    pub capacity_mb: f64,
    pub opt: OptTarget,
    pub acc: AccessType,
    pub score: f64,
}

/// Quadruple loop; first strict minimum wins.
#[allow(clippy::too_many_arguments)]
pub fn brute_tune(
    curves: &AnchorCurveSet,
    mems: &[MemoryTech],
    caps: &[f64],
    opts: &[OptTarget],
    accs: &[AccessType],
    rho: f64,
    n: f64,
    leak: bool,
) -> Vec<BruteChoice> {
    let mut out = Vec::new();
    for &tech in mems {
        for &cap in caps {
            let mut best: Option<BruteChoice> = None;
            for &opt in opts {
                for &acc in accs {
                    let Ok(p) = curves.estimate_ppa(tech, cap, opt, acc) else { continue };
                    let score = oracle_edap(&p, rho, n, leak);
                    if best.as_ref().is_none_or(|b| score < b.score) {
                        best = Some(BruteChoice { tech, capacity_mb: cap, opt, acc, score });
                    }
                }
            }
            if let Some(b) = best {
                out.push(b);
            }
        }
    }
    out
}

pub const RANDOM_CAPS: [f64; 6] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0];

fn random_curve(rng: &mut ChaCha8Rng, tech: MemoryTech, caps: &[f64]) -> Vec<CachePPA> {
    let mut area = rng.random_range(0.2..2.0);
    caps.iter()
        .map(|&c| {
            area += rng.random_range(0.05..3.0);
            CachePPA {
                tech,
                capacity_mb: c,
                read_latency_ns: rng.random_range(0.5..20.0),
                write_latency_ns: rng.random_range(0.5..20.0),
                read_energy_nj: rng.random_range(0.05..2.0),
                write_energy_nj: rng.random_range(0.05..2.0),
                leakage_power_mw: rng.random_range(10.0..80_000.0),
                area_mm2: area,
            }
        })
        .collect()
}

/// Every (tech, opt, acc) curve over [`RANDOM_CAPS`], occasionally duplicated
/// to force exact ties, occasionally truncated to force skipped points.
pub fn random_anchor_set(seed: u64) -> AnchorCurveSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::new();
    for tech in MemoryTech::ALL {
        let mut previous: Option<Vec<CachePPA>> = None;
        let mut tunings = vec![Tuning::Edap];
        tunings.extend(OptTarget::ALL.iter().map(|&o| Tuning::Target(o)));
        for tuning in tunings {
            for acc in AccessType::ALL {
                let caps: &[f64] = if rng.random::<f64>() < 0.05 { &RANDOM_CAPS[2..] } else { &RANDOM_CAPS };
                let curve = match &previous {
                    Some(p) if p.len() == caps.len() && rng.random::<f64>() < 0.1 => p.clone(),
                    _ => random_curve(&mut rng, tech, caps),
                };
                previous = Some(curve.clone());
                points.extend(curve.into_iter().map(|p| (CurveKey::new(tech, tuning, acc), p)));
            }
        }
    }
    AnchorCurveSet::from_points(points).expect("random anchors are valid")
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}
