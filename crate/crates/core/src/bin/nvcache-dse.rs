// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nvcache_dse::analysis::{
    self, batch_sweep, default_scalability_caps, iso_area_study, iso_capacity_study, published_reductions,
    reductions_from_sim, scalability_study, DramReductions, IsoAreaConfig, NormalizedReport,
};
use nvcache_dse::cachemodel::{load_anchor_curves, AccessType, AnchorCurveSet, Tuning};
use nvcache_dse::cachesim::{capacity_sweep_with_warmup, fixed_set_geometries};
use nvcache_dse::report::{self, Metric};
use nvcache_dse::techmodel::{parse_platform_file, DramParams, MemoryTech, PlatformParams};
use nvcache_dse::tuner::{tune, ReferenceMix, SweepSpace};
use nvcache_dse::workload::{gen_trace, parse_profile_csv, read_trace, write_trace, SyntheticTraceSpec, TraceEvent};
use nvcache_dse::{data, Error, OptTarget, WorkloadStats};

const THREADS_ENV: &str = "NVCACHE_DSE_THREADS";

#[derive(Parser)]
#[command(name = "nvcache-dse", version, about = "SRAM / STT-MRAM / SOT-MRAM last-level cache exploration")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Anchor-curve CSV (default: shipped dataset)
    #[arg(long, global = true)]
    curves: Option<PathBuf>,
    /// Workload profile CSV (default: shipped dataset)
    #[arg(long, global = true)]
    profiles: Option<PathBuf>,
    /// Platform/DRAM key = value file
    #[arg(long, global = true)]
    platform: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[arg(long, global = true)]
    clock_hz: Option<f64>,
    #[arg(long, global = true)]
    dram_energy_nj: Option<f64>,
    #[arg(long, global = true)]
    dram_latency_ns: Option<f64>,
    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Clone)]
struct MixArgs {
    /// Read fraction of the tuner's reference access mix
    #[arg(long, default_value_t = 0.8)]
    rho: f64,
    #[arg(long, default_value_t = 1_000_000)]
    ref_accesses: u64,
    /// Exclude leakage from the tuner objective
    #[arg(long)]
    no_leakage: bool,
}

impl MixArgs {
    fn mix(&self) -> ReferenceMix {
        ReferenceMix {
            read_fraction: self.rho,
            reference_access_count: self.ref_accesses,
            include_leakage: !self.no_leakage,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// EDAP-optimal organization per (tech, capacity)
    Tune {
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0])]
        caps: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = MemoryTech::ALL)]
        techs: Vec<MemoryTech>,
        #[command(flatten)]
        mix: MixArgs,
    },
    /// Interpolated PPA for one (tech, capacity)
    Ppa {
        #[arg(long)]
        tech: MemoryTech,
        #[arg(long)]
        capacity: f64,
        #[arg(long, default_value = "EDAP")]
        opt: String,
        #[arg(long, default_value = "Normal")]
        acc: AccessType,
    },
    /// All technologies at one capacity
    IsoCapacity {
        #[arg(long)]
        capacity: Option<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = MemoryTech::ALL)]
        techs: Vec<MemoryTech>,
        /// Add DRAM energy and latency
        #[arg(long)]
        with_dram: bool,
    },
    /// SRAM baseline against each MRAM at equal area
    IsoArea {
        /// Area budget source, TECH:MB (must be the SRAM baseline)
        #[arg(long)]
        budget_from: Option<String>,
        #[arg(long, default_value_t = 1.02)]
        tolerance: f64,
        /// Candidate capacities in MB
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        /// DRAM reduction per tech, TECH:PCT (default: 14.6 / 19.8 for STT / SOT)
        #[arg(long, value_delimiter = ',')]
        reductions: Option<Vec<String>>,
        /// Derive DRAM reductions by simulating this trace instead
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = 24)]
        base_ways: u32,
        #[arg(long, default_value_t = 0)]
        warmup: u64,
    },
    /// Normalized EDP across batch sizes of each workload family
    Batch {
        #[arg(long)]
        capacity: Option<f64>,
    },
    /// EDAP-tuned comparison across capacities
    Scalability {
        #[arg(long, value_delimiter = ',')]
        caps: Option<Vec<f64>>,
        #[command(flatten)]
        mix: MixArgs,
    },
    /// LRU simulation of a trace across capacities (fixed sets, growing ways)
    Simulate {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [3.0, 6.0, 12.0, 24.0])]
        caps: Vec<f64>,
        #[arg(long)]
        line: Option<u32>,
        #[arg(long, default_value_t = 24)]
        base_ways: u32,
        #[arg(long, default_value_t = 0)]
        warmup: u64,
    },
    /// Synthetic hot/cold trace
    GenTrace {
        #[arg(long, default_value_t = 1_000_000)]
        length: u64,
        #[arg(long, default_value_t = 16 << 20)]
        working_set_bytes: u64,
        #[arg(long, default_value_t = 0.25)]
        hot_fraction: f64,
        #[arg(long, default_value_t = 0.9)]
        hot_access_probability: f64,
        #[arg(long, default_value_t = 0.8)]
        read_probability: f64,
        /// Output file name inside --out
        #[arg(long, default_value = "trace.txt")]
        output: String,
    },
}

struct Ctx {
    out: PathBuf,
    plat: PlatformParams,
    dram: DramParams,
    seed: u64,
    curves_path: Option<PathBuf>,
    profiles_path: Option<PathBuf>,
}

fn read_text(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))
}

impl Ctx {
    fn new(c: &Common) -> Result<Self, Error> {
        let (mut plat, mut dram) = match &c.platform {
            Some(p) => parse_platform_file(&read_text(p)?)?,
            None => parse_platform_file(data::PLATFORM_CONF)?,
        };
        if let Some(v) = c.clock_hz {
            plat.l2_clock_hz = v;
        }
        if let Some(v) = c.dram_energy_nj {
            dram.energy_per_access_nj = v;
        }
        if let Some(v) = c.dram_latency_ns {
            dram.latency_per_access_ns = v;
        }
        plat.validate()?;
        dram.validate()?;
        fs::create_dir_all(&c.out).map_err(|e| Error::io(c.out.display().to_string(), e))?;
        Ok(Ctx {
            out: c.out.clone(),
            plat,
            dram,
            seed: c.seed,
            curves_path: c.curves.clone(),
            profiles_path: c.profiles.clone(),
        })
    }

    fn curves(&self) -> Result<AnchorCurveSet, Error> {
        match &self.curves_path {
            Some(p) => Ok(load_anchor_curves(&read_text(p)?)?),
            None => Ok(data::shipped_anchors()),
        }
    }

    fn profiles(&self, fallback: &str) -> Result<Vec<WorkloadStats>, Error> {
        match &self.profiles_path {
            Some(p) => Ok(parse_profile_csv(&read_text(p)?)?),
            None => Ok(parse_profile_csv(fallback)?),
        }
    }

    fn provenance(&self) -> String {
        let mut parts = Vec::new();
        if let Some(p) = &self.curves_path {
            parts.push(format!("curves={}", p.display()));
        }
        if let Some(p) = &self.profiles_path {
            parts.push(format!("profiles={}", p.display()));
        }
        if parts.len() == 2 {
            parts.join("; ")
        } else {
            parts.push(data::PROVENANCE.to_string());
            parts.join("; ")
        }
    }

    fn write(&self, name: &str, body: &str) -> Result<(), Error> {
        report::write_atomic(&self.out.join(name), body.as_bytes())
    }

    fn emit_report(&self, stem: &str, rep: &mut NormalizedReport, x_name: Option<&str>) -> Result<(), Error> {
        rep.parameters.provenance = self.provenance();
        self.write(&format!("{stem}.json"), &report::to_json(rep)?)?;
        self.write(&format!("{stem}_rows.csv"), &report::rows_csv(rep)?)?;
        self.write(&format!("{stem}_summary.csv"), &report::summary_csv(rep)?)?;
        for m in Metric::ALL {
            let plot = match x_name {
                Some(x) => report::plot_by_group(rep, x, m),
                None => report::plot_by_workload(rep, "all", m),
            };
            self.write(&format!("plot_{stem}_{}.csv", m.name()), &plot)?;
        }
        Ok(())
    }
}

fn parse_tech_value(s: &str) -> Result<(MemoryTech, f64), Error> {
    let bad = || Error::Invalid(format!("expected TECH:VALUE, got `{s}`"));
    let (t, v) = s.split_once(':').ok_or_else(bad)?;
    let tech: MemoryTech = t.trim().parse().map_err(|_| bad())?;
    let v: f64 = v.trim().parse().map_err(|_| bad())?;
    Ok((tech, v))
}

fn read_trace_file(path: &Path) -> Result<Vec<TraceEvent>, Error> {
    let f = fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(read_trace(BufReader::new(f)).collect::<Result<Vec<_>, _>>()?)
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn run(cli: Cli) -> Result<(), Error> {
    let ctx = Ctx::new(&cli.common)?;
    match cli.cmd {
        Cmd::Tune { caps, techs, mix } => {
            let curves = ctx.curves()?;
            let space = SweepSpace {
                mems: techs,
                caps_mb: caps,
                opts: OptTarget::ALL.to_vec(),
                accs: AccessType::ALL.to_vec(),
            };
            let mix = mix.mix();
            let outcome = tune(&space, &curves, &mix)?;
            let skipped: Vec<String> = outcome
                .skipped
                .iter()
                .map(|s| format!("{} {} {} {}: {}", s.tech, s.capacity_mb, s.opt, s.acc, s.reason))
                .collect();
            ctx.write("tuner.csv", &report::tuner_csv(&outcome.configs))?;
            ctx.write("tuner.json", &report::tuner_json(&outcome.configs, &mix, &skipped)?)?;
            if let Some(e) = outcome.empty.into_iter().next() {
                return Err(e.into());
            }
        }
        Cmd::Ppa { tech, capacity, opt, acc } => {
            let curves = ctx.curves()?;
            let tuning: Tuning = if opt.eq_ignore_ascii_case("edap") {
                Tuning::Edap
            } else {
                Tuning::Target(opt.parse().map_err(|_| Error::Invalid(format!("unknown opt target `{opt}`")))?)
            };
            let p = curves.estimate_ppa(tech, capacity, tuning, acc)?;
            println!("tech,capacity_mb,opt,acc,read_lat_ns,write_lat_ns,read_e_nj,write_e_nj,leak_mw,area_mm2");
            println!(
                "{},{},{},{},{},{},{},{},{},{}",
                tech,
                capacity,
                tuning,
                acc,
                p.read_latency_ns,
                p.write_latency_ns,
                p.read_energy_nj,
                p.write_energy_nj,
                p.leakage_power_mw,
                p.area_mm2
            );
        }
        Cmd::IsoCapacity { capacity, techs, with_dram } => {
            let curves = ctx.curves()?;
            let profiles = ctx.profiles(data::PROFILES_CSV)?;
            let cap = capacity.unwrap_or(ctx.plat.l2_capacity_baseline_mb);
            let dram = with_dram.then_some(&ctx.dram);
            let mut rep = iso_capacity_study(&profiles, &curves, &techs, cap, &ctx.plat, dram)?;
            ctx.emit_report("iso_capacity", &mut rep, None)?;
        }
        Cmd::IsoArea { budget_from, tolerance, grid, reductions, trace, base_ways, warmup } => {
            let curves = ctx.curves()?;
            let profiles = ctx.profiles(data::PROFILES_CSV)?;
            let (budget_tech, base_cap) = match budget_from {
                Some(s) => parse_tech_value(&s)?,
                None => (analysis::BASELINE, ctx.plat.l2_capacity_baseline_mb),
            };
            if budget_tech != analysis::BASELINE {
                return Err(Error::Invalid(format!("area budget must come from {}", analysis::BASELINE)));
            }
            let mut config = IsoAreaConfig { baseline_capacity_mb: base_cap, tolerance, ..IsoAreaConfig::default() };
            if let Some(g) = grid {
                config.capacity_grid = g;
            }
            let budget = curves.area_at(analysis::BASELINE, base_cap)?;
            let mut caps = BTreeMap::new();
            for &t in &config.techs {
                let c = if t == analysis::BASELINE {
                    base_cap
                } else {
                    analysis::iso_area_capacity(&curves, t, budget, &config.capacity_grid, tolerance)?
                };
                caps.insert(t, c);
            }
            let reductions: DramReductions = if let Some(path) = trace {
                let events = read_trace_file(&path)?;
                let order = sorted_unique(caps.values().copied().collect());
                let geoms = fixed_set_geometries(&order, ctx.plat.line_size_bytes, base_ways)?;
                let results = capacity_sweep_with_warmup(&events, &geoms, warmup)?;
                let at = |c: f64| results[order.iter().position(|&x| x == c).expect("capacity simulated")];
                let per: Vec<_> = caps.iter().map(|(&t, &c)| (t, at(c))).collect();
                reductions_from_sim(&at(base_cap), &per)?
            } else if let Some(list) = reductions {
                let mut r = DramReductions::new();
                r.insert(analysis::BASELINE, 0.0);
                for s in list {
                    let (t, v) = parse_tech_value(&s)?;
                    r.insert(t, v);
                }
                r
            } else {
                published_reductions()
            };
            let mut rep = iso_area_study(&profiles, &curves, &ctx.plat, &ctx.dram, &config, &reductions)?;
            let areas: Vec<(MemoryTech, f64)> = rep
                .capacities
                .iter()
                .map(|(&t, &c)| curves.area_at(t, c).map(|a| (t, a)))
                .collect::<Result<_, _>>()?;
            ctx.write("iso_area_capacities.csv", &report::iso_area_capacities_csv(&rep, &areas))?;
            ctx.emit_report("iso_area", &mut rep.without_dram, None)?;
            ctx.emit_report("iso_area_dram", &mut rep.with_dram, None)?;
            for (t, c) in &rep.capacities {
                println!("{t}\t{c} MB");
            }
        }
        Cmd::Batch { capacity } => {
            let curves = ctx.curves()?;
            let family = ctx.profiles(data::ALEXNET_BATCH_CSV)?;
            let cap = capacity.unwrap_or(ctx.plat.l2_capacity_baseline_mb);
            let mut groups: Vec<(String, Vec<WorkloadStats>)> = Vec::new();
            for s in family {
                let key = format!("{}_{}", s.name, s.phase).to_lowercase();
                match groups.iter_mut().find(|(k, _)| *k == key) {
                    Some((_, v)) => v.push(s),
                    None => groups.push((key, vec![s])),
                }
            }
            for (key, fam) in groups {
                let mut rep = batch_sweep(&fam, &curves, &MemoryTech::ALL, cap, &ctx.plat)?;
                ctx.emit_report(&format!("batch_{key}"), &mut rep, Some("batch_size"))?;
            }
        }
        Cmd::Scalability { caps, mix } => {
            let curves = ctx.curves()?;
            let profiles = ctx.profiles(data::PROFILES_CSV)?;
            let caps = caps.unwrap_or_else(default_scalability_caps);
            let mix = mix.mix();
            let mut rep = scalability_study(&curves, &profiles, &caps, &ctx.plat, &mix)?;
            ctx.emit_report("scalability", &mut rep.report, Some("capacity_mb"))?;
            ctx.write("scalability_tuned.csv", &report::tuner_csv(&rep.tuned))?;
            ctx.write("scalability_ppa.csv", &report::scalability_ppa_csv(&rep))?;
            match rep.sot_read_energy_break_even_mb {
                Some(c) => println!("SOT read-energy break-even: {c} MB"),
                None => println!("SOT read-energy break-even: none"),
            }
        }
        Cmd::Simulate { trace, caps, line, base_ways, warmup } => {
            let events = read_trace_file(&trace)?;
            let line = line.unwrap_or(ctx.plat.line_size_bytes);
            let geoms = fixed_set_geometries(&caps, line, base_ways)?;
            let results = capacity_sweep_with_warmup(&events, &geoms, warmup)?;
            ctx.write("sim.csv", &report::sim_csv(&geoms, &results))?;
            if let Some(base) = results.first().filter(|r| r.dram_transactions > 0) {
                for (g, r) in geoms.iter().zip(&results).skip(1) {
                    let pct = nvcache_dse::cachesim::dram_reduction(base, r)?;
                    println!("{} MB\tDRAM reduction {pct:.1}%", g.capacity_mb());
                }
            }
        }
        Cmd::GenTrace { length, working_set_bytes, hot_fraction, hot_access_probability, read_probability, output } => {
            let spec = SyntheticTraceSpec {
                length,
                working_set_bytes,
                hot_fraction,
                hot_access_probability,
                read_probability,
                seed: ctx.seed,
            };
            let events = gen_trace(&spec)?;
            let path = ctx.out.join(&output);
            let shown = path.display().to_string();
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(&shown, e))?;
            let mut w = BufWriter::new(tmp);
            write_trace(&mut w, events).map_err(|e| Error::io(&shown, e))?;
            let tmp = w.into_inner().map_err(|e| Error::io(&shown, e.into_error()))?;
            tmp.persist(&path).map_err(|e| Error::io(&shown, e.error))?;
        }
    }
    Ok(())
}

fn one_line(msg: &str) -> String {
    msg.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn fail(kind: &str, code: u8, msg: &str) -> ExitCode {
    eprintln!("error kind={kind} code={code}: {}", one_line(msg));
    ExitCode::from(code)
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("{THREADS_ENV}=`{v}` is not a thread count"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", 2, &e.to_string()),
    };
    if let Err(msg) = init_threads() {
        return fail("usage", 2, &msg);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = e.kind();
            fail(kind.as_str(), kind.exit_code() as u8, &e.to_string())
        }
    }
}
