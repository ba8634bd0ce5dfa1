// SPDX-License-Identifier: Apache-2.0

//! Datasets shipped with the crate, embedded at compile time.

use crate::cachemodel::{load_anchor_curves, AnchorCurveSet};
use crate::workload::{parse_profile_csv, WorkloadStats};

pub const ANCHORS_CSV: &str = include_str!("../data/anchors.csv");
pub const PROFILES_CSV: &str = include_str!("../data/profiles.csv");
pub const ALEXNET_BATCH_CSV: &str = include_str!("../data/alexnet_batch.csv");
pub const SRAM_BITCELL: &str = include_str!("../data/sram.bitcell");
pub const STT_BITCELL: &str = include_str!("../data/stt.bitcell");
pub const SOT_BITCELL: &str = include_str!("../data/sot.bitcell");
pub const PLATFORM_CONF: &str = include_str!("../data/platform.conf");

/// Provenance line echoed into every report built from shipped data.
pub const PROVENANCE: &str = "nvcache-dse v1 shipped dataset: published 3/7/10 MB points exact; \
     1-32 MB grid and workload counts constructed (shape-faithful, not measured)";

pub fn shipped_anchors() -> AnchorCurveSet {
    load_anchor_curves(ANCHORS_CSV).expect("shipped anchor dataset is valid")
}

pub fn shipped_profiles() -> Vec<WorkloadStats> {
    parse_profile_csv(PROFILES_CSV).expect("shipped profile dataset is valid")
}

pub fn shipped_alexnet_batches() -> Vec<WorkloadStats> {
    parse_profile_csv(ALEXNET_BATCH_CSV).expect("shipped batch dataset is valid")
}
