//! Black's best response when White plays a `1 x n` row.
//!
//! White's cells are congruent `p/n x q` strips, and the part of a strip that
//! Black takes depends only on Black's offset from that strip's site. The
//! area of Black's cell in a section is therefore a sum of per-strip thefts.
//! All quadratics below are in the anchor's canonical local frame: the anchor
//! sits at the origin and `0 < x < p/2n`, `0 < y < q/2`.

use num::Zero;

use crate::geometry::{twice_signed_area, Arena, Point, Scalar};
use crate::optimum::{attains, flat_segment, BlackArrangement, OptimumRecord, Ratio, RatioInterval, SolverError};
use crate::partition::{
    final_section, reach_of, row_site, section_of_row, section_polygon, Anchor, PartitionError, Reflection,
    SectionKind, SectionLabel, Touching,
};
use crate::quadratic::{int, rat, AreaQuadratic, Surd};

#[derive(Clone, Debug)]
pub(crate) struct RowShape {
    pub p: Scalar,
    pub q: Scalar,
    pub n: u32,
}

impl RowShape {
    pub fn new(arena: &Arena, n: u32) -> Self {
        RowShape { p: arena.p().clone(), q: arena.q().clone(), n }
    }

    /// Site spacing `p/n`.
    pub fn unit(&self) -> Scalar {
        &self.p / int(self.n as i64)
    }

    /// Area `pq/2n` of half a strip.
    fn half_cell(&self) -> Scalar {
        &self.p * &self.q / int(2 * self.n as i64)
    }

    // Section I, strip of the anchor.
    fn own_first(&self) -> AreaQuadratic {
        AreaQuadratic::new(int(0), rat(-1, 2), int(0), -&self.q / int(2), int(0), self.half_cell())
    }

    // Section I, strip to the right of the anchor.
    fn right_first(&self) -> AreaQuadratic {
        AreaQuadratic::new(int(0), rat(-1, 2), int(0), &self.q / int(2), int(0), int(0))
    }

    // Sections II onwards, strip of the anchor.
    fn own(&self) -> AreaQuadratic {
        AreaQuadratic::new(rat(-1, 2), int(0), int(0), int(0), -self.unit() / int(2), self.half_cell())
    }

    /// Strip `m` places left of the anchor, crossed completely.
    fn left_through(&self, m: u32) -> AreaQuadratic {
        let u = self.unit();
        AreaQuadratic::new(
            int(0),
            int(0),
            int(0),
            -&u / int(2),
            -&u / int(2),
            self.half_cell() - int(4 * m as i64 - 1) * &u * &u / int(8),
        )
    }

    /// Strip `m` places left of the anchor, entered only at its corner.
    fn left_end(&self, m: u32) -> AreaQuadratic {
        let u = self.unit();
        let k = int(m as i64 - 1);
        let q4 = &self.q / int(4);
        AreaQuadratic::new(
            rat(1, 8),
            rat(-3, 8),
            rat(1, 4),
            &k * &u / int(4) - &q4,
            &k * &u / int(4) + &q4,
            -&k * &u * &self.q / int(4) + &k * &k * &u * &u / int(8),
        )
    }

    fn right_through(&self, m: u32) -> AreaQuadratic {
        self.left_through(m).mirrored_x()
    }

    fn right_end(&self, m: u32) -> AreaQuadratic {
        self.left_end(m).mirrored_x()
    }

    /// Theft from every strip Black reaches in `kind`, keyed by site index.
    /// Strips beyond the ends of the row are dropped.
    pub fn cell_thefts(&self, i: u32, kind: SectionKind) -> Vec<(u32, AreaQuadratic)> {
        let n = self.n;
        let mut out = Vec::new();
        let (l, right_reach) = match kind {
            SectionKind::SectionI => {
                out.push((i, self.own_first()));
                if i < n {
                    out.push((i + 1, self.right_first()));
                }
                return out;
            }
            SectionKind::Even(l) => (l, l),
            SectionKind::Odd(l) => (l, l + 1),
            SectionKind::Final => (n + 1, n + 1),
        };
        for m in (1..=l).rev() {
            if m >= i {
                continue;
            }
            let q = if m == l { self.left_end(m) } else { self.left_through(m) };
            out.push((i - m, q));
        }
        out.push((i, self.own()));
        for m in 1..=right_reach {
            if i + m > n {
                break;
            }
            let q = if m == right_reach { self.right_end(m) } else { self.right_through(m) };
            out.push((i + m, q));
        }
        out
    }

    pub fn section_quadratic(&self, i: u32, kind: SectionKind) -> AreaQuadratic {
        self.cell_thefts(i, kind).into_iter().map(|(_, q)| q).sum()
    }
}

fn check_row(n: u32, i: u32) -> Result<(), SolverError> {
    if n == 0 {
        return Err(SolverError::InvalidCount { what: "n", min: 1 });
    }
    if i == 0 || i > n {
        return Err(PartitionError::InvalidAnchor { index: i, count: n }.into());
    }
    Ok(())
}

/// Area of Black's cell in section `kind` of anchor `i`, as a quadratic in
/// the anchor's canonical local frame.
pub fn row_section_quadratic(arena: &Arena, n: u32, i: u32, kind: SectionKind) -> Result<AreaQuadratic, SolverError> {
    check_row(n, i)?;
    Ok(RowShape::new(arena, n).section_quadratic(i, kind))
}

/// Exact area of Black's cell at `b1` against a row of `n` White sites,
/// labelled relative to site `i`.
pub fn area_row_closed_form(arena: &Arena, n: u32, i: u32, b1: &Point) -> Result<Scalar, SolverError> {
    check_row(n, i)?;
    let label = section_of_row(arena, n, i, b1)?;
    let Anchor::Row(j) = label.anchor else { unreachable!("row labels carry row anchors") };
    Ok(RowShape::new(arena, n).section_quadratic(j, label.kind).eval_at(&label.local))
}

fn row_whites(arena: &Arena, n: u32) -> Vec<Point> {
    (1..=n).map(|j| row_site(arena, n, j)).collect()
}

fn row_label(n: u32, i: u32, kind: SectionKind, local: &Point) -> SectionLabel {
    SectionLabel {
        kind,
        touching: Touching::Row(reach_of(kind, i, n)),
        anchor: Anchor::Row(i),
        reflection: Reflection::default(),
        local: local.clone(),
    }
}

/// Indices of the White sites whose cells Black's cell overlaps, read off
/// the label alone, in increasing order.
pub fn row_contacts(arena: &Arena, n: u32, label: &SectionLabel) -> Result<Vec<u32>, SolverError> {
    let Anchor::Row(i) = label.anchor else { return Err(SolverError::InconsistentCase) };
    check_row(n, i)?;
    let mut out: Vec<u32> = RowShape::new(arena, n)
        .cell_thefts(i, label.kind)
        .into_iter()
        .map(|(j, _)| if label.reflection.flip_x { n + 1 - j } else { j })
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Polygon of section `kind` in the canonical quadrant of anchor `i`.
pub fn row_section_polygon(arena: &Arena, n: u32, i: u32, kind: SectionKind) -> Result<Vec<Point>, SolverError> {
    check_row(n, i)?;
    let fs = final_section(i, n);
    if kind.number().map_or(false, |s| s > 1 && s >= fs) {
        return Err(SolverError::SectionNotPresent(kind.to_string()));
    }
    let unit = arena.p() / int(n as i64);
    let poly = section_polygon(kind.number(), fs, &(&unit / int(2)), &(arena.q() / int(2)), &unit);
    if twice_signed_area(&poly).is_zero() {
        return Err(SolverError::SectionNotPresent(kind.to_string()));
    }
    Ok(poly)
}

/// Best point of Black within one section of anchor `i`.
pub fn section_optimum_row(arena: &Arena, n: u32, i: u32, kind: SectionKind) -> Result<OptimumRecord, SolverError> {
    let poly = row_section_polygon(arena, n, i, kind)?;
    let quad = RowShape::new(arena, n).section_quadratic(i, kind);
    let (local, area) = quad.maximize_over(&poly).expect("section polygon is non-empty");
    let w = row_site(arena, n, i);
    let shift = |p: &Point| Point::new(&w.x + &p.x, &w.y + &p.y);
    let location_absolute = shift(&local);
    let whites = row_whites(arena, n);
    Ok(OptimumRecord {
        section: row_label(n, i, kind, &local),
        approach_limit: !attains(arena, &whites, &location_absolute, &area),
        segment: flat_segment(&quad, &poly, &local).map(|(s, e)| (shift(&s), shift(&e))),
        location_local: local,
        location_absolute,
        condition: RatioInterval::point(Ratio::RowDepth, arena.q() * int(n as i64) / arena.p()),
        area,
        tie: false,
    })
}

/// Rows of the best-point table for `n` sites, in increasing `nq/p`.
pub fn row_best_point_table(n: u32) -> Vec<(SectionKind, RatioInterval)> {
    let iv = |lo: Option<Surd>, hi: Option<Surd>| RatioInterval::new(Ratio::RowDepth, lo, hi);
    let r = |v: i64, d: i64| Some(Surd::rational(rat(v, d)));
    match n {
        0 => Vec::new(),
        1 => vec![(SectionKind::SectionI, iv(None, None))],
        2 => {
            let t = Some(Surd::new(int(5), int(-2), 3));
            vec![
                (SectionKind::SectionI, iv(None, r(1, 1))),
                (SectionKind::Even(1), iv(r(1, 1), t.clone())),
                (SectionKind::Final, iv(t, None)),
            ]
        }
        _ => {
            let t = Some(Surd::new(int(4), int(-1), 6));
            let mut rows = vec![
                (SectionKind::SectionI, iv(None, r(1, 1))),
                (SectionKind::Even(1), iv(r(1, 1), t.clone())),
            ];
            for s in 3..=n + 1 {
                let lo = if s == 3 { t.clone() } else { r(3 * (s as i64 - 2), 2) };
                if s == n + 1 {
                    rows.push((SectionKind::Final, iv(lo, None)));
                } else {
                    let kind = SectionKind::from_number(s).expect("s >= 3");
                    rows.push((kind, iv(lo, r(3 * (s as i64 - 1), 2))));
                }
            }
            rows
        }
    }
}

/// Black's best single point against a row of `n` White sites, from the
/// decision table. The anchor is site `ceil(n/2)`.
pub fn best_point_row(arena: &Arena, n: u32) -> Result<OptimumRecord, SolverError> {
    check_row(n, 1)?;
    let i = (n + 1) / 2;
    let unit = arena.p() / int(n as i64);
    let r = arena.q() / &unit;
    let rows = row_best_point_table(n);
    let idx = rows.iter().position(|(_, c)| c.contains(&r)).expect("table rows tile nq/p > 0");
    let (kind, condition) = rows[idx].clone();
    let tie = idx + 1 < rows.len() && condition.at_upper_end(&r);
    let s = match kind {
        SectionKind::Final => n + 1,
        k => k.number().expect("table rows are numbered"),
    };
    // Location and area in units of the site spacing.
    let (lx, ly, a) = match s {
        1 => (int(0), int(0), &r / int(2)),
        2 if n == 2 => {
            let d = (&r - int(1)) / int(4);
            (d.clone(), d, &r * &r / int(16) + int(3) * &r / int(8) + rat(1, 16))
        }
        2 => (int(0), (&r - int(1)) / int(3), &r * &r / int(12) + &r / int(3) + rat(1, 12)),
        s => {
            let s = s as i64;
            let lx = if s % 2 == 1 { rat(1, 2) } else { int(0) };
            (lx, rat(s - 2, 2), int(s - 1) * &r / int(2) - rat(3 * (s - 1) * (s - 2), 8))
        }
    };
    let local = Point::new(lx * &unit, ly * &unit);
    let w = row_site(arena, n, i);
    let shift = |p: &Point| Point::new(&w.x + &p.x, &w.y + &p.y);
    let location_absolute = shift(&local);
    let area = a * &unit * &unit;
    let segment = (s == 1 && n > 1).then(|| (w.clone(), shift(&Point::new(&unit / int(2), int(0)))));
    let whites = row_whites(arena, n);
    Ok(OptimumRecord {
        section: row_label(n, i, kind, &local),
        approach_limit: !attains(arena, &whites, &location_absolute, &area),
        location_local: local,
        location_absolute,
        area,
        condition,
        tie,
        segment,
    })
}

/// Best point found by maximising every section of the anchor separately.
/// Independent of the decision table; used to cross-check it.
pub fn best_point_row_enumerated(arena: &Arena, n: u32) -> Result<OptimumRecord, SolverError> {
    check_row(n, 1)?;
    let i = (n + 1) / 2;
    let fs = final_section(i, n);
    let kinds = (1..fs).filter_map(SectionKind::from_number).chain([SectionKind::Final]);
    let mut best: Option<OptimumRecord> = None;
    for kind in kinds {
        let rec = match section_optimum_row(arena, n, i, kind) {
            Ok(r) => r,
            Err(SolverError::SectionNotPresent(_)) => continue,
            Err(e) => return Err(e),
        };
        if best.as_ref().map_or(true, |b| rec.area > b.area) {
            best = Some(rec);
        }
    }
    Ok(best.expect("section I is always present"))
}

/// Black's sandwich arrangement: a pair of points above and below the row
/// at every second boundary between White cells. For odd `n` the last White
/// site is approached from the left at distance `delta` (default `p/10^6`).
pub fn black_row_arrangement(arena: &Arena, n: u32, delta: Option<&Scalar>) -> Result<BlackArrangement, SolverError> {
    if n < 2 {
        return Err(SolverError::InvalidCount { what: "n", min: 2 });
    }
    let unit = arena.p() / int(n as i64);
    let mid = arena.q() / int(2);
    let off = &unit / int(2);
    let mut points = Vec::new();
    for k in 1..=n / 2 {
        let x = int(2 * k as i64 - 1) * &unit;
        points.push(Point::new(x.clone(), &mid + &off));
        points.push(Point::new(x, &mid - &off));
    }
    let mut approach_points = Vec::new();
    if n % 2 == 1 {
        let d = delta.cloned().unwrap_or_else(|| arena.p() / int(1_000_000));
        let w = row_site(arena, n, n);
        approach_points.push(points.len());
        points.push(Point::new(&w.x - d, w.y));
    }
    Ok(BlackArrangement { points, approach_points, heuristic: n % 2 == 1 })
}
