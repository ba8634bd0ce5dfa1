// SPDX-License-Identifier: Apache-2.0

//! C ABI over the cache models and the LRU simulator.
//!
//! Every function returns an [`NvcStatus`]; on failure the message is
//! available from [`nvc_last_error`] on the same thread. Handles are opaque
//! and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nvcache_dse::cachemodel::{load_anchor_curves, AccessType, AnchorCurveSet, CachePPA, OptTarget, Tuning};
use nvcache_dse::cachesim::{dram_reduction_counts, Cache, CacheGeometry, SimResult};
use nvcache_dse::techmodel::MemoryTech;
use nvcache_dse::tuner::{edap, ReferenceMix};
use nvcache_dse::workload::TraceEvent;
use nvcache_dse::{analysis, data, Error, ErrorKind};

pub const NVC_TECH_SRAM: u32 = 0;
pub const NVC_TECH_STT: u32 = 1;
pub const NVC_TECH_SOT: u32 = 2;

/// EDAP-tuned (published) curve; 1..=8 select a single-metric target.
pub const NVC_OPT_EDAP: u32 = 0;
pub const NVC_OPT_READ_LATENCY: u32 = 1;
pub const NVC_OPT_WRITE_LATENCY: u32 = 2;
pub const NVC_OPT_READ_ENERGY: u32 = 3;
pub const NVC_OPT_WRITE_ENERGY: u32 = 4;
pub const NVC_OPT_READ_EDP: u32 = 5;
pub const NVC_OPT_WRITE_EDP: u32 = 6;
pub const NVC_OPT_AREA: u32 = 7;
pub const NVC_OPT_LEAKAGE: u32 = 8;

pub const NVC_ACC_NORMAL: u32 = 0;
pub const NVC_ACC_FAST: u32 = 1;
pub const NVC_ACC_SEQUENTIAL: u32 = 2;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NvcStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Range = 3,
    Infeasible = 4,
    Io = 5,
    Invalid = 6,
    Panic = 7,
}

/// Cache power, performance and area at one capacity.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NvcPpa {
    pub capacity_mb: f64,
    pub read_latency_ns: f64,
    pub write_latency_ns: f64,
    pub read_energy_nj: f64,
    pub write_energy_nj: f64,
    pub leakage_power_mw: f64,
    pub area_mm2: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NvcSimResult {
    pub accesses: u64,
    pub hits: u64,
    pub misses: u64,
    pub writebacks: u64,
    pub dram_transactions: u64,
}

/// Opaque set of anchor curves.
pub struct NvcCurves(AnchorCurveSet);

/// Opaque LRU cache with running counters.
pub struct NvcCache {
    cache: Cache,
    result: SimResult,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(NvcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.kind() {
            ErrorKind::Parse => NvcStatus::Parse,
            ErrorKind::Range => NvcStatus::Range,
            ErrorKind::Infeasible => NvcStatus::Infeasible,
            ErrorKind::Invalid => NvcStatus::Invalid,
            ErrorKind::Io => NvcStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn fail<E: Into<Error>>(e: E) -> Failure {
    Failure::from(e.into())
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(NvcStatus::Invalid, msg.into())
}

fn null(what: &str) -> Failure {
    Failure(NvcStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NvcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            NvcStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NvcStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{what} is not UTF-8")))
}

fn tech(code: u32) -> Result<MemoryTech, Failure> {
    match code {
        NVC_TECH_SRAM => Ok(MemoryTech::Sram),
        NVC_TECH_STT => Ok(MemoryTech::SttMram),
        NVC_TECH_SOT => Ok(MemoryTech::SotMram),
        _ => Err(invalid(format!("unknown tech code {code}"))),
    }
}

fn tuning(code: u32) -> Result<Tuning, Failure> {
    if code == NVC_OPT_EDAP {
        return Ok(Tuning::Edap);
    }
    OptTarget::ALL
        .get((code as usize).wrapping_sub(1))
        .map(|&o| Tuning::Target(o))
        .ok_or_else(|| invalid(format!("unknown opt code {code}")))
}

fn access(code: u32) -> Result<AccessType, Failure> {
    AccessType::ALL.get(code as usize).copied().ok_or_else(|| invalid(format!("unknown access code {code}")))
}

fn to_c(p: &CachePPA) -> NvcPpa {
    NvcPpa {
        capacity_mb: p.capacity_mb,
        read_latency_ns: p.read_latency_ns,
        write_latency_ns: p.write_latency_ns,
        read_energy_nj: p.read_energy_nj,
        write_energy_nj: p.write_energy_nj,
        leakage_power_mw: p.leakage_power_mw,
        area_mm2: p.area_mm2,
    }
}

fn from_c(p: &NvcPpa) -> CachePPA {
    CachePPA {
        tech: MemoryTech::Sram,
        capacity_mb: p.capacity_mb,
        read_latency_ns: p.read_latency_ns,
        write_latency_ns: p.write_latency_ns,
        read_energy_nj: p.read_energy_nj,
        write_energy_nj: p.write_energy_nj,
        leakage_power_mw: p.leakage_power_mw,
        area_mm2: p.area_mm2,
    }
}

fn sim_to_c(r: &SimResult) -> NvcSimResult {
    NvcSimResult {
        accesses: r.accesses,
        hits: r.hits,
        misses: r.misses,
        writebacks: r.writebacks,
        dram_transactions: r.dram_transactions,
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn nvc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nvc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

fn boxed_curves(out: *mut *mut NvcCurves, load: impl FnOnce() -> Result<AnchorCurveSet, Failure>) -> NvcStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out")? };
        *out = ptr::null_mut();
        *out = Box::into_raw(Box::new(NvcCurves(load()?)));
        Ok(())
    })
}

/// Loads the built-in anchor dataset.
#[no_mangle]
pub extern "C" fn nvc_curves_shipped(out: *mut *mut NvcCurves) -> NvcStatus {
    boxed_curves(out, || Ok(data::shipped_anchors()))
}

/// Parses anchor curves from CSV text.
///
/// # Safety
/// `csv` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nvc_curves_from_csv(csv: *const c_char, out: *mut *mut NvcCurves) -> NvcStatus {
    boxed_curves(out, || {
        let text = unsafe { str_arg(csv, "csv")? };
        load_anchor_curves(text).map_err(fail)
    })
}

/// Reads and parses an anchor CSV file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nvc_curves_from_file(path: *const c_char, out: *mut *mut NvcCurves) -> NvcStatus {
    boxed_curves(out, || {
        let path = unsafe { str_arg(path, "path")? };
        let text = std::fs::read_to_string(path).map_err(|e| Failure::from(Error::io(path, e)))?;
        load_anchor_curves(&text).map_err(fail)
    })
}

/// # Safety
/// `curves` must come from an `nvc_curves_*` constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn nvc_curves_free(curves: *mut NvcCurves) {
    if !curves.is_null() {
        drop(Box::from_raw(curves));
    }
}

/// Interpolated PPA of one curve at `capacity_mb`.
///
/// # Safety
/// `curves` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nvc_estimate_ppa(
    curves: *const NvcCurves,
    tech_code: u32,
    capacity_mb: f64,
    opt_code: u32,
    acc_code: u32,
    out: *mut NvcPpa,
) -> NvcStatus {
    guard(|| {
        let curves = unsafe { curves.as_ref() }.ok_or_else(|| null("curves"))?;
        let out = unsafe { out_ref(out, "out")? };
        let p = curves
            .0
            .estimate_ppa(tech(tech_code)?, capacity_mb, tuning(opt_code)?, access(acc_code)?)
            .map_err(fail)?;
        *out = to_c(&p);
        Ok(())
    })
}

/// Area of the EDAP-tuned curve at `capacity_mb`.
///
/// # Safety
/// `curves` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nvc_area_at(
    curves: *const NvcCurves,
    tech_code: u32,
    capacity_mb: f64,
    out: *mut f64,
) -> NvcStatus {
    guard(|| {
        let curves = unsafe { curves.as_ref() }.ok_or_else(|| null("curves"))?;
        let out = unsafe { out_ref(out, "out")? };
        *out = curves.0.area_at(tech(tech_code)?, capacity_mb).map_err(fail)?;
        Ok(())
    })
}

/// Largest capacity in `grid` whose area fits `budget_mm2 * tolerance`.
///
/// # Safety
/// `grid` must point to `grid_len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nvc_iso_area_capacity(
    curves: *const NvcCurves,
    tech_code: u32,
    budget_mm2: f64,
    grid: *const f64,
    grid_len: usize,
    tolerance: f64,
    out: *mut f64,
) -> NvcStatus {
    guard(|| {
        let curves = unsafe { curves.as_ref() }.ok_or_else(|| null("curves"))?;
        let out = unsafe { out_ref(out, "out")? };
        if grid.is_null() && grid_len > 0 {
            return Err(null("grid"));
        }
        let grid = if grid_len == 0 { &[][..] } else { unsafe { std::slice::from_raw_parts(grid, grid_len) } };
        *out = analysis::iso_area_capacity(&curves.0, tech(tech_code)?, budget_mm2, grid, tolerance)
            .map_err(fail)?;
        Ok(())
    })
}

/// Energy-delay-area product of `ppa` under a reference access mix.
///
/// # Safety
/// `ppa` must be readable; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nvc_edap(
    ppa: *const NvcPpa,
    read_fraction: f64,
    reference_access_count: u64,
    include_leakage: bool,
    out: *mut f64,
) -> NvcStatus {
    guard(|| {
        let ppa = unsafe { ppa.as_ref() }.ok_or_else(|| null("ppa"))?;
        let out = unsafe { out_ref(out, "out")? };
        let mix = ReferenceMix { read_fraction, reference_access_count, include_leakage };
        mix.validate().map_err(fail)?;
        *out = edap(&from_c(ppa), &mix);
        Ok(())
    })
}

/// Creates a write-back, write-allocate LRU cache.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nvc_cache_new(
    capacity_bytes: u64,
    ways: u32,
    line_size_bytes: u32,
    out: *mut *mut NvcCache,
) -> NvcStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out")? };
        *out = ptr::null_mut();
        let geom = CacheGeometry::new(capacity_bytes, ways, line_size_bytes).map_err(fail)?;
        let cache = Cache::new(geom).map_err(fail)?;
        *out = Box::into_raw(Box::new(NvcCache { cache, result: SimResult::default() }));
        Ok(())
    })
}

/// Replays one access. `hit` may be null.
///
/// # Safety
/// `cache` must be a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn nvc_cache_access(
    cache: *mut NvcCache,
    is_write: bool,
    address: u64,
    hit: *mut bool,
) -> NvcStatus {
    guard(|| {
        let c = unsafe { cache.as_mut() }.ok_or_else(|| null("cache"))?;
        let ev = if is_write { TraceEvent::write(address) } else { TraceEvent::read(address) };
        let outcome = c.cache.access(ev);
        c.result.record(outcome);
        if let Some(h) = unsafe { hit.as_mut() } {
            *h = outcome == nvcache_dse::cachesim::Outcome::Hit;
        }
        Ok(())
    })
}

/// Counters accumulated since creation.
///
/// # Safety
/// `cache` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nvc_cache_result(cache: *const NvcCache, out: *mut NvcSimResult) -> NvcStatus {
    guard(|| {
        let c = unsafe { cache.as_ref() }.ok_or_else(|| null("cache"))?;
        let out = unsafe { out_ref(out, "out")? };
        *out = sim_to_c(&c.result);
        Ok(())
    })
}

/// # Safety
/// `cache` must come from `nvc_cache_new`, or be null.
#[no_mangle]
pub unsafe extern "C" fn nvc_cache_free(cache: *mut NvcCache) {
    if !cache.is_null() {
        drop(Box::from_raw(cache));
    }
}

/// Percent reduction from `baseline` to `enlarged` DRAM transactions.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nvc_dram_reduction(baseline: u64, enlarged: u64, out: *mut f64) -> NvcStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out")? };
        *out = dram_reduction_counts(baseline, enlarged).map_err(fail)?;
        Ok(())
    })
}
