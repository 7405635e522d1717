//! Black's best response when White plays an `a x b` grid.
//!
//! White's cells are congruent `p/a x q/b` rectangles. Quadratics are in the
//! anchor's canonical local frame: the anchor `w_0` sits at the origin,
//! `0 < x < p/2a`, `0 < y < q/2b`, cells of the anchor's column are indexed by
//! their row offset `i`, and the neighbouring columns are "right" (`+p/a`) and
//! "left" (`-p/a`). Section I is the part of the quadrant with `x < y`.

use num::Zero;

use crate::geometry::{twice_signed_area, Arena, Point, Scalar};
use crate::optimum::{attains, flat_segment, BlackArrangement, OptimumRecord, Ratio, RatioInterval, SolverError};
use crate::partition::{
    final_section, grid_local_section, grid_site, reach_of, section_of_grid, section_polygon, Anchor,
    PartitionError, QuadrantClass, Reflection, SectionKind, SectionLabel, Touching,
};
use crate::quadratic::{int, rat, AreaQuadratic, Surd};

/// Column relative to the anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Column {
    Left,
    Same,
    Right,
}

/// Structure of the area taken from the pair of cells at row offset `i` in
/// the anchor's column and the column to its right (Sections II onwards).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairTheftCase {
    /// Row offset 0.
    Zero,
    /// Offset `i != 0` crossed completely by Black's cell.
    Through(i32),
    /// Outermost offset `i != 0`, entered only at a corner.
    Terminal(i32),
}

#[derive(Clone, Debug)]
pub(crate) struct GridShape {
    pub p: Scalar,
    pub q: Scalar,
    pub a: u32,
    pub b: u32,
}

impl GridShape {
    pub fn new(arena: &Arena, a: u32, b: u32) -> Self {
        GridShape { p: arena.p().clone(), q: arena.q().clone(), a, b }
    }

    /// Column pitch `p/a`.
    pub fn width(&self) -> Scalar {
        &self.p / int(self.a as i64)
    }

    /// Row pitch `q/b`.
    pub fn unit(&self) -> Scalar {
        &self.q / int(self.b as i64)
    }

    /// Area `pq/2ab` of half a cell.
    fn half_cell(&self) -> Scalar {
        &self.p * &self.q / int(2 * (self.a * self.b) as i64)
    }

    fn hw(&self) -> Scalar {
        self.width() / int(2)
    }

    // Section I thefts.

    fn own_first(&self) -> AreaQuadratic {
        AreaQuadratic::new(rat(-1, 2), int(0), int(0), int(0), -self.hw(), self.half_cell())
    }

    fn above_first(&self) -> AreaQuadratic {
        AreaQuadratic::new(rat(-1, 2), int(0), int(0), int(0), self.hw(), int(0))
    }

    fn right_first(&self) -> AreaQuadratic {
        let u4 = self.unit() / int(4);
        AreaQuadratic::new(rat(1, 8), rat(-3, 8), rat(-1, 4), u4.clone(), u4, int(0))
    }

    fn above_right_first(&self) -> AreaQuadratic {
        // (x + y)^2 / 8
        AreaQuadratic::new(rat(1, 8), rat(1, 8), rat(1, 4), int(0), int(0), int(0))
    }

    // Column cells from Section II onwards. These are the row thefts with
    // the axes exchanged: spacing q/b along the column, half-width p/2a across.

    fn column_own(&self) -> AreaQuadratic {
        AreaQuadratic::new(int(0), rat(-1, 2), int(0), -self.unit() / int(2), int(0), self.half_cell())
    }

    /// Column cell `m` rows below the anchor, crossed completely.
    fn column_below_through(&self, m: u32) -> AreaQuadratic {
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

    /// Column cell `m` rows below the anchor, entered at its corner.
    fn column_below_end(&self, m: u32) -> AreaQuadratic {
        let u = self.unit();
        let k = int(m as i64 - 1);
        let w4 = self.width() / int(4);
        AreaQuadratic::new(
            rat(-3, 8),
            rat(1, 8),
            rat(1, 4),
            &k * &u / int(4) + &w4,
            &k * &u / int(4) - &w4,
            -&k * &u * self.width() / int(4) + &k * &k * &u * &u / int(8),
        )
    }

    fn column_above_through(&self, m: u32) -> AreaQuadratic {
        self.column_below_through(m).transposed().mirrored_x().transposed()
    }

    fn column_above_end(&self, m: u32) -> AreaQuadratic {
        self.column_below_end(m).transposed().mirrored_x().transposed()
    }

    /// Combined theft from the anchor-column cell and the right-column cell
    /// at one row offset.
    pub fn pair_theft(&self, case: PairTheftCase) -> AreaQuadratic {
        let u = self.unit();
        let hc = self.half_cell();
        let w4 = self.width() / int(4);
        match case {
            PairTheftCase::Zero => AreaQuadratic::new(int(0), int(-1), int(0), int(0), int(0), hc),
            PairTheftCase::Through(i) if i > 0 => AreaQuadratic::new(
                int(0),
                int(0),
                int(0),
                int(0),
                u.clone(),
                hc - int(4 * i as i64 - 1) * &u * &u / int(4),
            ),
            PairTheftCase::Through(i) => AreaQuadratic::new(
                int(0),
                int(0),
                int(0),
                int(0),
                -u.clone(),
                hc + int(4 * i as i64 + 1) * &u * &u / int(4),
            ),
            PairTheftCase::Terminal(i) if i > 0 => {
                let k = int(i as i64 - 1);
                AreaQuadratic::new(
                    rat(-1, 4),
                    rat(1, 4),
                    int(0),
                    w4.clone(),
                    &w4 - &k * &u / int(2),
                    -&k * &self.p * &self.q / int(4 * (self.a * self.b) as i64) + &k * &k * &u * &u / int(4),
                )
            }
            PairTheftCase::Terminal(i) => {
                let k = int(i as i64 + 1);
                AreaQuadratic::new(
                    rat(-1, 4),
                    rat(1, 4),
                    int(0),
                    w4.clone(),
                    -&w4 - &k * &u / int(2),
                    &k * &self.p * &self.q / int(4 * (self.a * self.b) as i64) + &k * &k * &u * &u / int(4),
                )
            }
        }
    }

    fn column_theft(&self, case: PairTheftCase) -> AreaQuadratic {
        match case {
            PairTheftCase::Zero => self.column_own(),
            PairTheftCase::Through(i) if i > 0 => self.column_above_through(i as u32),
            PairTheftCase::Through(i) => self.column_below_through((-i) as u32),
            PairTheftCase::Terminal(i) if i > 0 => self.column_above_end(i as u32),
            PairTheftCase::Terminal(i) => self.column_below_end((-i) as u32),
        }
    }

    /// Row offsets Black's cell reaches in `kind` for an anchor in grid row
    /// `row`, with their case. Offsets outside the grid are dropped.
    pub fn pair_cases(&self, row: u32, kind: SectionKind) -> Vec<(i32, PairTheftCase)> {
        let b = self.b as i32;
        let row = row as i32;
        let (low, high) = match kind {
            SectionKind::SectionI => return Vec::new(),
            SectionKind::Even(l) => (l as i32, l as i32),
            SectionKind::Odd(l) => (l as i32, l as i32 + 1),
            SectionKind::Final => (b + 1, b + 1),
        };
        let mut out = Vec::new();
        for i in -low..=high {
            if row + i < 1 || row + i > b {
                continue;
            }
            let case = if i == 0 {
                PairTheftCase::Zero
            } else if i == -low || i == high {
                PairTheftCase::Terminal(i)
            } else {
                PairTheftCase::Through(i)
            };
            out.push((i, case));
        }
        out
    }

    /// Theft from every cell Black reaches, keyed by (column, row offset).
    pub fn cell_thefts(&self, col: u32, row: u32, kind: SectionKind) -> Vec<((Column, i32), AreaQuadratic)> {
        let has_right = col < self.a;
        let has_left = col > 1;
        let has_above = row < self.b;
        let mut out = Vec::new();
        if kind == SectionKind::SectionI {
            out.push(((Column::Same, 0), self.own_first()));
            if has_above {
                out.push(((Column::Same, 1), self.above_first()));
            }
            if has_right {
                out.push(((Column::Right, 0), self.right_first()));
                if has_above {
                    out.push(((Column::Right, 1), self.above_right_first()));
                }
            }
            if has_left {
                out.push(((Column::Left, 0), self.right_first().mirrored_x()));
                if has_above {
                    out.push(((Column::Left, 1), self.above_right_first().mirrored_x()));
                }
            }
            return out;
        }
        for (i, case) in self.pair_cases(row, kind) {
            let column = self.column_theft(case);
            if has_right {
                out.push(((Column::Right, i), self.pair_theft(case) - column.clone()));
            }
            out.push(((Column::Same, i), column));
        }
        out
    }

    pub fn section_quadratic(&self, col: u32, row: u32, kind: SectionKind) -> AreaQuadratic {
        self.cell_thefts(col, row, kind).into_iter().map(|(_, q)| q).sum()
    }
}

fn check_grid(arena: &Arena, a: u32, b: u32) -> Result<(), SolverError> {
    if a == 0 {
        return Err(SolverError::InvalidCount { what: "a", min: 1 });
    }
    if b == 0 {
        return Err(SolverError::InvalidCount { what: "b", min: 1 });
    }
    // p/a >= q/b
    if arena.p() * int(b as i64) < arena.q() * int(a as i64) {
        return Err(SolverError::OrientationError);
    }
    Ok(())
}

fn check_anchor(a: u32, b: u32, col: u32, row: u32) -> Result<(), SolverError> {
    if col == 0 || col > a {
        return Err(PartitionError::InvalidAnchor { index: col, count: a }.into());
    }
    if row == 0 || row > b {
        return Err(PartitionError::InvalidAnchor { index: row, count: b }.into());
    }
    Ok(())
}

fn grid_whites(arena: &Arena, a: u32, b: u32) -> Vec<Point> {
    (1..=a).flat_map(|c| (1..=b).map(move |r| (c, r))).map(|(c, r)| grid_site(arena, a, b, c, r)).collect()
}

fn grid_label(a: u32, b: u32, col: u32, row: u32, kind: SectionKind, local: &Point) -> SectionLabel {
    let class = match (col == a, row == b) {
        (false, false) => QuadrantClass::Core,
        (true, false) => QuadrantClass::EdgeVertical,
        (false, true) => QuadrantClass::EdgeHorizontal,
        (true, true) => QuadrantClass::Corner,
    };
    SectionLabel {
        kind,
        touching: Touching::Grid { class, reach: reach_of(kind, row, b) },
        anchor: Anchor::Grid { col, row },
        reflection: Reflection::default(),
        local: local.clone(),
    }
}

/// Area Black takes from the cells at row offset `i` of the anchor's column
/// and the column to its right, for `b1` given in the anchor's canonical
/// local frame.
pub fn theft_pair_area(arena: &Arena, a: u32, b: u32, case: PairTheftCase, b1: &Point) -> Result<Scalar, SolverError> {
    check_grid(arena, a, b)?;
    let s = grid_local_section(arena, a, b, b1)?;
    let (low, high) = match SectionKind::from_number(s).expect("sections start at 1") {
        SectionKind::SectionI => return Err(SolverError::InconsistentCase),
        SectionKind::Even(l) => (l as i32, l as i32),
        SectionKind::Odd(l) => (l as i32, l as i32 + 1),
        SectionKind::Final => unreachable!("numbered sections only"),
    };
    let consistent = match case {
        PairTheftCase::Zero => true,
        PairTheftCase::Through(i) => i != 0 && -low < i && i < high,
        PairTheftCase::Terminal(i) => i != 0 && (i == -low || i == high),
    };
    if !consistent {
        return Err(SolverError::InconsistentCase);
    }
    Ok(GridShape::new(arena, a, b).pair_theft(case).eval_at(b1))
}

/// Theft from one pair of cells as a quadratic in the anchor's local frame.
pub fn pair_theft_quadratic(arena: &Arena, a: u32, b: u32, case: PairTheftCase) -> Result<AreaQuadratic, SolverError> {
    check_grid(arena, a, b)?;
    Ok(GridShape::new(arena, a, b).pair_theft(case))
}

/// Area of Black's cell in section `kind` of anchor `(col, row)`, as a
/// quadratic in the anchor's canonical local frame.
pub fn grid_section_quadratic(
    arena: &Arena,
    a: u32,
    b: u32,
    col: u32,
    row: u32,
    kind: SectionKind,
) -> Result<AreaQuadratic, SolverError> {
    check_grid(arena, a, b)?;
    check_anchor(a, b, col, row)?;
    Ok(GridShape::new(arena, a, b).section_quadratic(col, row, kind))
}

/// Exact area of Black's cell at `b1` (absolute) against an `a x b` grid,
/// labelled relative to site `(col, row)`.
pub fn area_grid_closed_form(arena: &Arena, a: u32, b: u32, col: u32, row: u32, b1: &Point) -> Result<Scalar, SolverError> {
    check_grid(arena, a, b)?;
    let label = section_of_grid(arena, a, b, col, row, b1)?;
    let Anchor::Grid { col, row } = label.anchor else { unreachable!("grid labels carry grid anchors") };
    Ok(GridShape::new(arena, a, b).section_quadratic(col, row, label.kind).eval_at(&label.local))
}

/// `(column, row)` of the White sites whose cells Black's cell overlaps,
/// read off the label alone, in increasing order.
pub fn grid_contacts(arena: &Arena, a: u32, b: u32, label: &SectionLabel) -> Result<Vec<(u32, u32)>, SolverError> {
    let Anchor::Grid { col, row } = label.anchor else { return Err(SolverError::InconsistentCase) };
    check_grid(arena, a, b)?;
    check_anchor(a, b, col, row)?;
    let mut out: Vec<(u32, u32)> = GridShape::new(arena, a, b)
        .cell_thefts(col, row, label.kind)
        .into_iter()
        .map(|((column, i), _)| {
            let c = match column {
                Column::Left => col - 1,
                Column::Same => col,
                Column::Right => col + 1,
            };
            let r = (row as i32 + i) as u32;
            let c = if label.reflection.flip_x { a + 1 - c } else { c };
            let r = if label.reflection.flip_y { b + 1 - r } else { r };
            (c, r)
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Polygon of section `kind` in the canonical quadrant of an anchor in grid
/// row `row`, in local `(x, y)`.
pub fn grid_section_polygon(arena: &Arena, a: u32, b: u32, row: u32, kind: SectionKind) -> Result<Vec<Point>, SolverError> {
    check_grid(arena, a, b)?;
    check_anchor(a, b, 1, row)?;
    let fs = final_section(row, b);
    if kind.number().map_or(false, |s| s > 1 && s >= fs) {
        return Err(SolverError::SectionNotPresent(kind.to_string()));
    }
    let unit = arena.q() / int(b as i64);
    let hx = arena.p() / int(2 * a as i64);
    let poly = section_polygon(kind.number(), fs, &(&unit / int(2)), &hx, &unit);
    let mut poly: Vec<Point> = poly.iter().map(Point::transpose).collect();
    poly.reverse();
    if twice_signed_area(&poly).is_zero() {
        return Err(SolverError::SectionNotPresent(kind.to_string()));
    }
    Ok(poly)
}

/// Best point of Black within one section of anchor `(col, row)`.
pub fn section_optimum_grid(
    arena: &Arena,
    a: u32,
    b: u32,
    col: u32,
    row: u32,
    kind: SectionKind,
) -> Result<OptimumRecord, SolverError> {
    check_anchor(a, b, col, row)?;
    let poly = grid_section_polygon(arena, a, b, row, kind)?;
    let quad = GridShape::new(arena, a, b).section_quadratic(col, row, kind);
    let (local, area) = quad.maximize_over(&poly).expect("section polygon is non-empty");
    let w = grid_site(arena, a, b, col, row);
    let shift = |p: &Point| Point::new(&w.x + &p.x, &w.y + &p.y);
    let location_absolute = shift(&local);
    let whites = grid_whites(arena, a, b);
    let tau = arena.p() * int(b as i64) / (arena.q() * int(2 * a as i64));
    Ok(OptimumRecord {
        section: grid_label(a, b, col, row, kind, &local),
        approach_limit: !attains(arena, &whites, &location_absolute, &area),
        segment: flat_segment(&quad, &poly, &local).map(|(s, e)| (shift(&s), shift(&e))),
        location_local: local,
        location_absolute,
        condition: RatioInterval::point(Ratio::GridHalfWidth, tau),
        area,
        tie: false,
    })
}

/// Rows of the best-point table for an `a x b` grid (`a, b >= 2`), in
/// increasing `pb/2aq`. Empty for smaller grids.
pub fn grid_best_point_table(a: u32, b: u32) -> Vec<(SectionKind, RatioInterval)> {
    if a < 2 || b < 2 {
        return Vec::new();
    }
    let iv = |lo: Option<Surd>, hi: Option<Surd>| RatioInterval::new(Ratio::GridHalfWidth, lo, hi);
    let r = |v: i64, d: i64| Some(Surd::rational(rat(v, d)));
    let bi = b as i64;
    // (b + 1 - sqrt(d)) / 2
    let root = |d: u32| Some(Surd::new(rat(bi + 1, 2), rat(-1, 2), d));
    let mut rows = Vec::new();
    if b == 2 {
        if a == 2 {
            rows.push((SectionKind::Even(1), iv(r(1, 2), root(3))));
        } else {
            let t = Some(Surd::new(int(0), rat(1, 4), 6));
            rows.push((SectionKind::SectionI, iv(r(1, 2), t.clone())));
            rows.push((SectionKind::Even(1), iv(t, root(3))));
        }
        rows.push((SectionKind::Final, iv(root(3), None)));
        return rows;
    }
    for s in 2..b {
        let l = (s / 2) as i64;
        let lo = if s % 2 == 0 { if l == 1 { r(1, 2) } else { r(4 * l - 3, 4) } } else { r(4 * l - 1, 4) };
        let hi = if s == b - 1 {
            root(6)
        } else if s % 2 == 0 {
            r(4 * l - 1, 4)
        } else {
            r(4 * l + 1, 4)
        };
        rows.push((SectionKind::from_number(s).expect("s >= 2"), iv(lo, hi)));
    }
    rows.push((SectionKind::from_number(b).expect("b >= 2"), iv(root(6), root(3))));
    rows.push((SectionKind::Final, iv(root(3), None)));
    rows
}

/// Black's best single point against an `a x b` grid (`a, b >= 2`,
/// `p/a >= q/b`), from the decision table. The anchor is site
/// `(ceil(a/2), ceil(b/2))`.
pub fn best_point_grid(arena: &Arena, a: u32, b: u32) -> Result<OptimumRecord, SolverError> {
    check_grid(arena, a, b)?;
    if a < 2 {
        return Err(SolverError::InvalidCount { what: "a", min: 2 });
    }
    if b < 2 {
        return Err(SolverError::InvalidCount { what: "b", min: 2 });
    }
    let (col, row) = ((a + 1) / 2, (b + 1) / 2);
    let u = arena.q() / int(b as i64);
    let tau = arena.p() / (int(2 * a as i64) * &u);
    let rows = grid_best_point_table(a, b);
    let idx = rows.iter().position(|(_, c)| c.contains(&tau)).expect("table rows tile pb/2aq >= 1/2");
    let (kind, condition) = rows[idx].clone();
    let tie = idx + 1 < rows.len() && condition.at_upper_end(&tau);
    let bi = b as i64;
    let t2 = &tau * &tau;
    // Location and area in units of the row pitch.
    let (lx, ly, area) = match kind {
        SectionKind::SectionI => (int(0), rat(1, 2), &tau + rat(1, 8)),
        SectionKind::Final => {
            let ly = if b % 2 == 0 { rat(1, 2) } else { int(0) };
            (tau.clone(), ly, int(bi) * &tau - rat(bi * (bi - 1), 4))
        }
        k if k.number() == Some(b) => {
            let ly = if b % 2 == 0 { (&tau - rat(bi - 2, 2)) / int(3) } else { (rat(bi + 1, 2) - &tau) / int(3) };
            let area = &t2 / int(3) + int(2 * bi - 1) * &tau / int(3) - rat((2 * bi - 1) * (bi - 2), 12);
            (tau.clone(), ly, area)
        }
        SectionKind::Even(l) => {
            let l = l as i64;
            (tau.clone(), int(0), &t2 / int(2) + int(l) * &tau - rat(l * (l - 1), 2))
        }
        SectionKind::Odd(l) => {
            let l = l as i64;
            (tau.clone(), rat(1, 2), &t2 / int(2) + int(2 * l + 1) * &tau / int(2) - rat(4 * l * l - 1, 8))
        }
    };
    let local = Point::new(lx * &u, ly * &u);
    let w = grid_site(arena, a, b, col, row);
    let shift = |p: &Point| Point::new(&w.x + &p.x, &w.y + &p.y);
    let location_absolute = shift(&local);
    let area = area * &u * &u;
    let segment = (kind == SectionKind::Final)
        .then(|| (shift(&Point::new(rat(bi - 1, 2) * &u, local.y.clone())), location_absolute.clone()));
    let whites = grid_whites(arena, a, b);
    Ok(OptimumRecord {
        section: grid_label(a, b, col, row, kind, &local),
        approach_limit: !attains(arena, &whites, &location_absolute, &area),
        location_local: local,
        location_absolute,
        area,
        condition,
        tie,
        segment,
    })
}

/// Best point found by maximising every section of the anchor
/// `(ceil(a/2), ceil(b/2))` separately. Independent of the decision table.
pub fn best_point_grid_enumerated(arena: &Arena, a: u32, b: u32) -> Result<OptimumRecord, SolverError> {
    check_grid(arena, a, b)?;
    let (col, row) = ((a + 1) / 2, (b + 1) / 2);
    let fs = final_section(row, b);
    let kinds = (1..fs).filter_map(SectionKind::from_number).chain([SectionKind::Final]);
    let mut best: Option<OptimumRecord> = None;
    for kind in kinds {
        let rec = match section_optimum_grid(arena, a, b, col, row, kind) {
            Ok(r) => r,
            Err(SolverError::SectionNotPresent(_)) => continue,
            Err(e) => return Err(e),
        };
        if best.as_ref().map_or(true, |r| rec.area > r.area) {
            best = Some(rec);
        }
    }
    Ok(best.expect("some section is present"))
}

/// The row sandwich turned upright in every White column: pairs at
/// `x_j +- q/2b` on every second boundary between the column's cells. For
/// odd `b` the top site of each column is approached from below at
/// distance `delta` (default `q/10^6`) and the arrangement comes back inside
/// `OddBNotSupported`.
pub fn black_grid_arrangement(arena: &Arena, a: u32, b: u32, delta: Option<&Scalar>) -> Result<BlackArrangement, SolverError> {
    if a < 2 {
        return Err(SolverError::InvalidCount { what: "a", min: 2 });
    }
    if b < 2 {
        return Err(SolverError::InvalidCount { what: "b", min: 2 });
    }
    let u = arena.q() / int(b as i64);
    let off = &u / int(2);
    let mut points = Vec::new();
    let mut approach_points = Vec::new();
    for j in 1..=a {
        let x = arena.p() * int(2 * j as i64 - 1) / int(2 * a as i64);
        for i in 1..=b / 2 {
            let y = int(2 * i as i64 - 1) * &u;
            points.push(Point::new(&x - &off, y.clone()));
            points.push(Point::new(&x + &off, y));
        }
        if b % 2 == 1 {
            let d = delta.cloned().unwrap_or_else(|| arena.q() / int(1_000_000));
            let w = grid_site(arena, a, b, j, b);
            approach_points.push(points.len());
            points.push(Point::new(w.x, w.y - d));
        }
    }
    let arrangement = BlackArrangement { points, approach_points, heuristic: true };
    if b % 2 == 1 {
        return Err(SolverError::OddBNotSupported { fallback: Box::new(arrangement) });
    }
    Ok(arrangement)
}
