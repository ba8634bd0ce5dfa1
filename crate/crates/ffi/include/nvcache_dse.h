/* SPDX-License-Identifier: Apache-2.0 */

#ifndef NVCACHE_DSE_H
#define NVCACHE_DSE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define NVC_TECH_SRAM 0

#define NVC_TECH_STT 1

#define NVC_TECH_SOT 2

// EDAP-tuned (published) curve; 1..=8 select a single-metric target.
#define NVC_OPT_EDAP 0

#define NVC_OPT_READ_LATENCY 1

#define NVC_OPT_WRITE_LATENCY 2

#define NVC_OPT_READ_ENERGY 3

#define NVC_OPT_WRITE_ENERGY 4

#define NVC_OPT_READ_EDP 5

#define NVC_OPT_WRITE_EDP 6

#define NVC_OPT_AREA 7

#define NVC_OPT_LEAKAGE 8

#define NVC_ACC_NORMAL 0

#define NVC_ACC_FAST 1

#define NVC_ACC_SEQUENTIAL 2

typedef enum NvcStatus {
  NVC_STATUS_OK = 0,
  NVC_STATUS_NULL_POINTER = 1,
  NVC_STATUS_PARSE = 2,
  NVC_STATUS_RANGE = 3,
  NVC_STATUS_INFEASIBLE = 4,
  NVC_STATUS_IO = 5,
  NVC_STATUS_INVALID = 6,
  NVC_STATUS_PANIC = 7,
} NvcStatus;

// Opaque LRU cache with running counters.
typedef struct NvcCache NvcCache;

// Opaque set of anchor curves.
typedef struct NvcCurves NvcCurves;

// Cache power, performance and area at one capacity.
typedef struct NvcPpa {
  double capacity_mb;
  double read_latency_ns;
  double write_latency_ns;
  double read_energy_nj;
  double write_energy_nj;
  double leakage_power_mw;
  double area_mm2;
} NvcPpa;

typedef struct NvcSimResult {
  uint64_t accesses;
  uint64_t hits;
  uint64_t misses;
  uint64_t writebacks;
  uint64_t dram_transactions;
} NvcSimResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call into this library on the same thread.
const char *nvc_last_error(void);

// Library version as a static NUL-terminated string.
const char *nvc_version(void);

// Loads the built-in anchor dataset.
enum NvcStatus nvc_curves_shipped(struct NvcCurves **out);

// Parses anchor curves from CSV text.
//
// # Safety
// `csv` must be a NUL-terminated string; `out` must be writable.
enum NvcStatus nvc_curves_from_csv(const char *csv, struct NvcCurves **out);

// Reads and parses an anchor CSV file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum NvcStatus nvc_curves_from_file(const char *path, struct NvcCurves **out);

// # Safety
// `curves` must come from an `nvc_curves_*` constructor, or be null.
void nvc_curves_free(struct NvcCurves *curves);

// Interpolated PPA of one curve at `capacity_mb`.
//
// # Safety
// `curves` must be a live handle; `out` must be writable.
enum NvcStatus nvc_estimate_ppa(const struct NvcCurves *curves,
                                uint32_t tech_code,
                                double capacity_mb,
                                uint32_t opt_code,
                                uint32_t acc_code,
                                struct NvcPpa *out);

// Area of the EDAP-tuned curve at `capacity_mb`.
//
// # Safety
// `curves` must be a live handle; `out` must be writable.
enum NvcStatus nvc_area_at(const struct NvcCurves *curves,
                           uint32_t tech_code,
                           double capacity_mb,
                           double *out);

// Largest capacity in `grid` whose area fits `budget_mm2 * tolerance`.
//
// # Safety
// `grid` must point to `grid_len` doubles; `out` must be writable.
enum NvcStatus nvc_iso_area_capacity(const struct NvcCurves *curves,
                                     uint32_t tech_code,
                                     double budget_mm2,
                                     const double *grid,
                                     size_t grid_len,
                                     double tolerance,
                                     double *out);

// Energy-delay-area product of `ppa` under a reference access mix.
//
// # Safety
// `ppa` must be readable; `out` must be writable.
enum NvcStatus nvc_edap(const struct NvcPpa *ppa,
                        double read_fraction,
                        uint64_t reference_access_count,
                        bool include_leakage,
                        double *out);

// Creates a write-back, write-allocate LRU cache.
//
// # Safety
// `out` must be writable.
enum NvcStatus nvc_cache_new(uint64_t capacity_bytes,
                             uint32_t ways,
                             uint32_t line_size_bytes,
                             struct NvcCache **out);

// Replays one access. `hit` may be null.
//
// # Safety
// `cache` must be a live handle not used concurrently.
enum NvcStatus nvc_cache_access(struct NvcCache *cache, bool is_write, uint64_t address, bool *hit);

// Counters accumulated since creation.
//
// # Safety
// `cache` must be a live handle; `out` must be writable.
enum NvcStatus nvc_cache_result(const struct NvcCache *cache, struct NvcSimResult *out);

// # Safety
// `cache` must come from `nvc_cache_new`, or be null.
void nvc_cache_free(struct NvcCache *cache);

// Percent reduction from `baseline` to `enlarged` DRAM transactions.
//
// # Safety
// `out` must be writable.
enum NvcStatus nvc_dram_reduction(uint64_t baseline, uint64_t enlarged, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NVCACHE_DSE_H */
