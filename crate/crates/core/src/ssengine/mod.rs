//! Bookkeeping for bigraded spectral sequences: maps between pages, the
//! squeeze between two sequences, and hypothetical collapse patterns.

mod collapse;
mod morphism;
mod squeeze;

pub use collapse::{enumerate_collapses, Arrow, CollapseConstraints, CollapsePattern};
pub use morphism::{lee_e2_map, ss_morphism_ranks, BigradedMap, PageRanks};
pub use squeeze::{squeeze_check, SqueezeInstance, SqueezeNote, SqueezeOutcome, SqueezeVerdict};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SsError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("map does not commute with the differentials: {0}")]
    NotCommuting(String),
}
