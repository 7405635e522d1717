//! Records shared by the row and grid solvers: optima, their validity
//! intervals and exact arrangement scores.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::geometry::{cell_region, Arena, GeometryError, Point, Scalar, TieBreak};
use crate::partition::{PartitionError, SectionLabel};
use crate::quadratic::{AreaQuadratic, Surd};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("section {0} does not occur for this arrangement")]
    SectionNotPresent(String),
    #[error("grid orientation requires p/a >= q/b")]
    OrientationError,
    #[error("pair case does not match the section of the point")]
    InconsistentCase,
    #[error("{what} must be at least {min}")]
    InvalidCount { what: &'static str, min: u32 },
    #[error("sandwich arrangement needs an even number of grid rows")]
    OddBNotSupported { fallback: Box<BlackArrangement> },
}

/// Dimensionless ratio that selects a row of a best-point table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ratio {
    /// `nq/p`: arena height over the spacing of a row.
    RowDepth,
    /// `pb/2aq`: half a grid column's width over the row spacing.
    GridHalfWidth,
}

impl Ratio {
    pub fn symbol(self) -> &'static str {
        match self {
            Ratio::RowDepth => "nq/p",
            Ratio::GridHalfWidth => "pb/2aq",
        }
    }
}

/// Closed interval `lo <= ratio <= hi`; a missing end is unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioInterval {
    pub ratio: Ratio,
    pub lo: Option<Surd>,
    pub hi: Option<Surd>,
}

impl RatioInterval {
    pub fn new(ratio: Ratio, lo: Option<Surd>, hi: Option<Surd>) -> Self {
        RatioInterval { ratio, lo, hi }
    }

    /// The single value `v`.
    pub fn point(ratio: Ratio, v: Scalar) -> Self {
        RatioInterval { ratio, lo: Some(Surd::rational(v.clone())), hi: Some(Surd::rational(v)) }
    }

    pub fn contains(&self, v: &Scalar) -> bool {
        let above = self.lo.as_ref().map_or(true, |lo| lo.cmp_rational(v) != Ordering::Greater);
        let below = self.hi.as_ref().map_or(true, |hi| hi.cmp_rational(v) != Ordering::Less);
        above && below
    }

    pub fn at_upper_end(&self, v: &Scalar) -> bool {
        self.hi.as_ref().map_or(false, |hi| hi.cmp_rational(v) == Ordering::Equal)
    }

    /// A rational strictly inside the interval.
    pub fn interior_sample(&self) -> Scalar {
        let lo = self.lo.as_ref().map(|s| s.to_f64()).unwrap_or(0.0);
        let mid = match self.hi.as_ref() {
            Some(hi) => (lo + hi.to_f64()) / 2.0,
            None => lo + 1.0,
        };
        let guess = Scalar::new(((mid * 1000.0).round() as i64).into(), 1000.into());
        if self.strictly_contains(&guess) {
            guess
        } else {
            Scalar::new(((mid * 1e6).round() as i64).into(), 1_000_000.into())
        }
    }

    pub fn strictly_contains(&self, v: &Scalar) -> bool {
        let above = self.lo.as_ref().map_or(v.is_positive(), |lo| lo.cmp_rational(v) == Ordering::Less);
        let below = self.hi.as_ref().map_or(true, |hi| hi.cmp_rational(v) == Ordering::Greater);
        above && below
    }
}

impl fmt::Display for RatioInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.ratio.symbol();
        match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) if lo == hi => write!(f, "{sym} = {lo}"),
            (Some(lo), Some(hi)) => write!(f, "{lo} <= {sym} <= {hi}"),
            (Some(lo), None) => write!(f, "{sym} >= {lo}"),
            (None, Some(hi)) => write!(f, "0 < {sym} <= {hi}"),
            (None, None) => write!(f, "{sym} > 0"),
        }
    }
}

/// A maximiser of Black's area, local to the anchor and in arena coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimumRecord {
    pub section: SectionLabel,
    pub location_local: Point,
    pub location_absolute: Point,
    pub area: Scalar,
    pub condition: RatioInterval,
    /// The area is a supremum that the recorded point itself does not reach.
    pub approach_limit: bool,
    /// The ratio sits on the boundary between this row and the next one.
    pub tie: bool,
    /// Ends of the segment of equally good points (absolute), when the
    /// maximiser is not unique.
    pub segment: Option<(Point, Point)>,
}

impl OptimumRecord {
    /// L-infinity distance from `pt` to the set of optimal points.
    pub fn distance_to(&self, pt: &Point) -> Scalar {
        let linf = |a: &Point| (&a.x - &pt.x).abs().max((&a.y - &pt.y).abs());
        match &self.segment {
            None => linf(&self.location_absolute),
            Some((s, e)) => {
                // Segments are axis-parallel, so clamp the free coordinate.
                let clamp = |v: &Scalar, a: &Scalar, b: &Scalar| {
                    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                    v.clone().max(lo.clone()).min(hi.clone())
                };
                let near = Point::new(clamp(&pt.x, &s.x, &e.x), clamp(&pt.y, &s.y, &e.y));
                linf(&near)
            }
        }
    }
}

/// Whether Black at `pt` actually captures `area` against `whites`.
pub(crate) fn attains(arena: &Arena, whites: &[Point], pt: &Point, area: &Scalar) -> bool {
    if whites.contains(pt) || !arena.contains(pt) {
        return false;
    }
    let mut all = whites.to_vec();
    all.push(pt.clone());
    cell_region(pt, &all, arena, TieBreak::default()).area() == *area
}

/// Chord of the convex `poly` through `pt` along which `quad` is constant,
/// when `quad` does not depend on one of the coordinates.
pub(crate) fn flat_segment(quad: &AreaQuadratic, poly: &[Point], pt: &Point) -> Option<(Point, Point)> {
    let free_x = quad.xx.is_zero() && quad.xy.is_zero() && quad.x.is_zero();
    let free_y = quad.yy.is_zero() && quad.xy.is_zero() && quad.y.is_zero();
    if free_x == free_y {
        return None;
    }
    // Work with the free coordinate as `x`.
    let swap = |p: &Point| if free_x { p.clone() } else { p.transpose() };
    let level = swap(pt).y;
    let mut span: Option<(Scalar, Scalar)> = None;
    let n = poly.len();
    for k in 0..n {
        let s = swap(&poly[k]);
        let e = swap(&poly[(k + 1) % n]);
        let hits = if s.y == e.y {
            if s.y == level { vec![s.x.clone(), e.x.clone()] } else { vec![] }
        } else {
            let t = (&level - &s.y) / (&e.y - &s.y);
            if t.is_negative() || t > Scalar::one() { vec![] } else { vec![&s.x + t * (&e.x - &s.x)] }
        };
        for h in hits {
            span = Some(match span {
                None => (h.clone(), h),
                Some((lo, hi)) => (lo.min(h.clone()), hi.max(h)),
            });
        }
    }
    let (lo, hi) = span?;
    if lo == hi {
        return None;
    }
    Some((swap(&Point::new(lo, level.clone())), swap(&Point::new(hi, level))))
}

/// Black's points for one of the canonical arrangements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlackArrangement {
    pub points: Vec<Point>,
    /// Indices of points standing in for a limit placement next to a White
    /// site.
    pub approach_points: Vec<usize>,
    /// No optimality is claimed for this arrangement.
    pub heuristic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteScore {
    pub site: Point,
    pub black: bool,
    pub area: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreReport {
    pub white_total: Scalar,
    pub black_total: Scalar,
    pub per_site: Vec<SiteScore>,
    /// Some pair of sites had a two-dimensional tie region, resolved by the
    /// default tie rule.
    pub degenerate_bisector: bool,
}

/// Exact area of every site's cell.
pub fn score_arrangement(arena: &Arena, whites: &[Point], blacks: &[Point]) -> Result<ScoreReport, GeometryError> {
    let all: Vec<Point> = whites.iter().chain(blacks).cloned().collect();
    let mut seen = HashSet::new();
    for s in &all {
        if !seen.insert(s) {
            return Err(GeometryError::CoincidentSites { x: s.x.to_string(), y: s.y.to_string() });
        }
    }
    let degenerate_bisector = all.iter().enumerate().any(|(i, s)| {
        all[i + 1..].iter().any(|t| {
            let dx = (&s.x - &t.x).abs();
            !dx.is_zero() && dx == (&s.y - &t.y).abs()
        })
    });
    let mut white_total = Scalar::zero();
    let mut black_total = Scalar::zero();
    let mut per_site = Vec::with_capacity(all.len());
    for (k, s) in all.iter().enumerate() {
        let area = cell_region(s, &all, arena, TieBreak::default()).area();
        let black = k >= whites.len();
        if black {
            black_total += &area;
        } else {
            white_total += &area;
        }
        per_site.push(SiteScore { site: s.clone(), black, area });
    }
    Ok(ScoreReport { white_total, black_total, per_site, degenerate_bisector })
}
