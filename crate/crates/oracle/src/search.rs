//! Exhaustive lattice search for Black's best single point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use stackelberg_core::geometry::{cell_region, cell_region_with, ScaledFrame};
use stackelberg_core::partition::{grid_site, row_site};
use stackelberg_core::{Arena, Point, Scalar, TieBreak};

use crate::sampling::{SampleSpec, TieRule};
use crate::OracleError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WhiteArrangement {
    Row { n: u32 },
    Grid { a: u32, b: u32 },
}

impl WhiteArrangement {
    pub fn sites(&self, arena: &Arena) -> Vec<Point> {
        match *self {
            WhiteArrangement::Row { n } => (1..=n).map(|j| row_site(arena, n, j)).collect(),
            WhiteArrangement::Grid { a, b } => (1..=a)
                .flat_map(|c| (1..=b).map(move |r| (c, r)))
                .map(|(c, r)| grid_site(arena, a, b, c, r))
                .collect(),
        }
    }

    /// Anchor site used by the best-point tables and the half extents of its
    /// upper right quadrant.
    pub fn canonical_quadrant(&self, arena: &Arena) -> (Point, Scalar, Scalar) {
        let int = |v: u32| Scalar::from_integer(v.into());
        match *self {
            WhiteArrangement::Row { n } => {
                (row_site(arena, n, (n + 1) / 2), arena.p() / int(2 * n), arena.q() / int(2))
            }
            WhiteArrangement::Grid { a, b } => (
                grid_site(arena, a, b, (a + 1) / 2, (b + 1) / 2),
                arena.p() / int(2 * a),
                arena.q() / int(2 * b),
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub point: Point,
    pub area: Scalar,
    pub evaluated: u64,
    /// Lattice points lying on a configuration line of some White site.
    pub skipped: u64,
}

fn on_configuration_line<T>(pt: &Point<T>, whites: &[Point<T>]) -> bool
where
    T: Clone + PartialEq + std::ops::Sub<Output = T> + num::Signed,
{
    whites.iter().any(|w| {
        let dx = pt.x.clone() - w.x.clone();
        let dy = pt.y.clone() - w.y.clone();
        dx.is_zero() || dy.is_zero() || dx.abs() == dy.abs()
    })
}

struct RowBest {
    best: Option<(Scalar, i64)>,
    evaluated: u64,
    skipped: u64,
}

/// Exact cell area of Black at every lattice point of the closed canonical
/// quadrant, with spacing `p / resolution` from the anchor. The anchor's own
/// axes are configuration lines, so they are never evaluated. Returns the first
/// maximiser in row-major order. Under `TieRule::Exclude` points on a
/// configuration line are skipped, since the area is discontinuous there.
pub fn grid_search_best(arena: &Arena, arrangement: WhiteArrangement, spec: &SampleSpec) -> Result<SearchResult, OracleError> {
    spec.check()?;
    let whites = arrangement.sites(arena);
    let (w, hx, hy) = arrangement.canonical_quadrant(arena);
    let h = arena.p() / Scalar::from_integer(spec.resolution.into());
    let nx = count_inside(&hx, &h);
    let ny = count_inside(&hy, &h);
    if nx == 0 || ny == 0 {
        return Err(OracleError::Resolution(spec.resolution));
    }
    let skip_lines = spec.tie_rule == TieRule::Exclude;
    let frame = ScaledFrame::for_values(
        whites.iter().flat_map(|s| [&s.x, &s.y]).chain([&h, &w.x, &w.y, arena.p(), arena.q()]),
    );
    let fast = (|| {
        let pts: Option<Vec<Point<i128>>> = whites.iter().map(|s| frame.point(s)).collect();
        Some((pts?, frame.rect(arena)?, frame.point(&w)?, frame.to_int(&h)?))
    })();
    let at = |i: i64, j: i64| {
        let k = |v: i64| Scalar::from_integer(v.into());
        Point::new(&w.x + &h * k(i), &w.y + &h * k(j))
    };
    let rows: Vec<RowBest> = (1..=ny)
        .into_par_iter()
        .map(|j| {
            let mut row = RowBest { best: None, evaluated: 0, skipped: 0 };
            for i in 1..=nx {
                let area = match &fast {
                    Some((pts, rect, w, h)) => {
                        let b = Point::new(w.x + h * i as i128, w.y + h * j as i128);
                        if skip_lines && on_configuration_line(&b, pts) {
                            row.skipped += 1;
                            continue;
                        }
                        let mut all = pts.clone();
                        all.push(b.clone());
                        let twice = cell_region_with(&b, &all, rect.clone(), TieBreak::default()).twice_area();
                        frame.area_from_twice(twice)
                    }
                    None => {
                        let b = at(i, j);
                        if skip_lines && on_configuration_line(&b, &whites) {
                            row.skipped += 1;
                            continue;
                        }
                        let mut all = whites.clone();
                        all.push(b.clone());
                        cell_region(&b, &all, arena, TieBreak::default()).area()
                    }
                };
                row.evaluated += 1;
                if row.best.as_ref().map_or(true, |(a, _)| area > *a) {
                    row.best = Some((area, i));
                }
            }
            row
        })
        .collect();
    let mut best: Option<(Scalar, i64, i64)> = None;
    for (j, row) in (1..=ny).zip(&rows) {
        if let Some((area, i)) = &row.best {
            if best.as_ref().map_or(true, |(a, _, _)| area > a) {
                best = Some((area.clone(), *i, j));
            }
        }
    }
    let (area, i, j) = best.ok_or(OracleError::Resolution(spec.resolution))?;
    Ok(SearchResult {
        point: at(i, j),
        area,
        evaluated: rows.iter().map(|r| r.evaluated).sum(),
        skipped: rows.iter().map(|r| r.skipped).sum(),
    })
}

// Number of k >= 1 with k h <= half.
fn count_inside(half: &Scalar, h: &Scalar) -> i64 {
    num::ToPrimitive::to_i64(&(half / h).floor().to_integer()).unwrap_or(0).max(0)
}
