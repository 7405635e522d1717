//! Brute-force oracles for the closed-form solvers: lattice area estimates
//! taken straight from the nearest-site definition, lattice searches for
//! Black's best point, and randomised invariant batteries.

pub mod sampling;
pub mod search;
pub mod suite;

use thiserror::Error;

pub use sampling::{sampled_area, sampled_areas, AreaEstimate, LabeledSite, SampleSpec, TieRule};
pub use search::{grid_search_best, SearchResult, WhiteArrangement};
pub use suite::{verify_suite, verify_suite_with, CheckReport, SuiteKind, SuiteReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("sites coincide at ({x}, {y})")]
    CoincidentSites { x: String, y: String },
    #[error("lattice resolution must be at least 2, got {0}")]
    Resolution(u32),
    #[error("site index {index} out of range for {len} sites")]
    SiteIndex { index: usize, len: usize },
    #[error(transparent)]
    Solver(#[from] stackelberg_core::SolverError),
}
