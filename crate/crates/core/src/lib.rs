//! Black's best single-point response in the one-round Voronoi game under the
//! L1 metric, against White playing a `1 x n` row or an `a x b` grid in a
//! `p x q` rectangle.

pub mod geometry;
pub mod partition;
pub mod quadratic;
pub mod row;
pub mod grid;
pub mod optimum;

pub use geometry::{Arena, GeometryError, OctoPolygon, Point, Region, Scalar, TieBreak};
pub use optimum::{BlackArrangement, OptimumRecord, Ratio, RatioInterval, ScoreReport, SolverError};
pub use quadratic::{AreaQuadratic, Surd};
