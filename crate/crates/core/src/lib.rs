// SPDX-License-Identifier: Apache-2.0

//! Design-space exploration for SRAM, STT-MRAM and SOT-MRAM last-level GPU
//! caches: bitcell inputs, interpolated cache PPA, an exhaustive EDAP tuner,
//! workload profiles and traces, an LRU cache simulator, and the energy/delay
//! studies that tie them together.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cachemodel;
pub mod cachesim;
pub mod data;
pub mod report;
pub mod techmodel;
pub mod tuner;
pub mod workload;

pub use analysis::{AnalysisError, NormalizedReport, WorkloadTechResult};
pub use cachemodel::{AccessType, AnchorCurveSet, CachePPA, CurveKey, ModelError, OptTarget, Tuning};
pub use cachesim::{CacheGeometry, SimError, SimResult};
pub use techmodel::{BitcellParams, DramParams, MemoryTech, ParamError, PlatformParams};
pub use tuner::{ReferenceMix, SweepSpace, TuneError, TunedConfig};
pub use workload::{WorkloadError, WorkloadStats};

/// Coarse classification used for process exit codes and FFI status codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Range,
    Infeasible,
    Invalid,
    Io,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Io => 1,
            ErrorKind::Parse | ErrorKind::Invalid => 2,
            ErrorKind::Range => 3,
            ErrorKind::Infeasible => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Parse => "parse",
            ErrorKind::Range => "range",
            ErrorKind::Infeasible => "infeasible",
            ErrorKind::Invalid => "invalid",
            ErrorKind::Io => "io",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Workload(#[from] WorkloadError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Tune(#[from] TuneError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Invalid(String),
}

fn model_kind(e: &ModelError) -> ErrorKind {
    match e {
        ModelError::UnknownCurve(_) | ModelError::OutOfRange { .. } => ErrorKind::Range,
        _ => ErrorKind::Parse,
    }
}

fn tune_kind(e: &TuneError) -> ErrorKind {
    match e {
        TuneError::EmptySweep { .. } => ErrorKind::Infeasible,
        _ => ErrorKind::Invalid,
    }
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Param(_) | Error::Json(_) => ErrorKind::Parse,
            Error::Model(e) => model_kind(e),
            Error::Workload(WorkloadError::ZeroWrites(_) | WorkloadError::InvalidSpec(_)) => ErrorKind::Invalid,
            Error::Workload(_) => ErrorKind::Parse,
            Error::Sim(SimError::ZeroBaseline) => ErrorKind::Infeasible,
            Error::Sim(_) => ErrorKind::Invalid,
            Error::Tune(e) => tune_kind(e),
            Error::Analysis(e) => match e {
                AnalysisError::Model(m) => model_kind(m),
                AnalysisError::Tune(t) => tune_kind(t),
                AnalysisError::NoFeasibleCapacity { .. }
                | AnalysisError::ZeroBaseline { .. }
                | AnalysisError::Sim(SimError::ZeroBaseline) => ErrorKind::Infeasible,
                _ => ErrorKind::Invalid,
            },
            Error::Io { .. } | Error::Csv(_) => ErrorKind::Io,
            Error::Invalid(_) => ErrorKind::Invalid,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
