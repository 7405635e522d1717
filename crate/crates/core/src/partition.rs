//! Labels for the region of the arena that Black's point occupies.
//!
//! A point is first expressed relative to an anchor White site and reflected
//! into the anchor's upper right quadrant. Inside that quadrant the diagonal
//! configuration lines of the other White sites cut out the numbered sections
//! I, II, III, ... whose stolen area is a single quadratic.

use std::fmt;

use num::{Signed, Zero};
use thiserror::Error;

use crate::geometry::{Arena, Point, Scalar};
use crate::quadratic::int;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("anchor index {index} outside 1..={count}")]
    InvalidAnchor { index: u32, count: u32 },
    #[error("point lies outside the anchor's cell")]
    OutOfQuadrant,
    #[error("point lies on a section boundary")]
    OnBoundary,
    #[error("white arrangement needs at least one site per axis")]
    EmptyArrangement,
}

/// Section within the canonical quadrant. `Even(l)` is section `2l`,
/// `Odd(l)` is section `2l + 1`, and `Final` is every section from which
/// Black's cell reaches both ends of the line of White sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SectionKind {
    SectionI,
    Even(u32),
    Odd(u32),
    Final,
}

impl SectionKind {
    /// Section number `s` (1 for Section I). `Final` has no fixed number.
    pub fn number(self) -> Option<u32> {
        match self {
            SectionKind::SectionI => Some(1),
            SectionKind::Even(l) => Some(2 * l),
            SectionKind::Odd(l) => Some(2 * l + 1),
            SectionKind::Final => None,
        }
    }

    pub fn from_number(s: u32) -> Option<Self> {
        match s {
            0 => None,
            1 => Some(SectionKind::SectionI),
            s if s % 2 == 0 => Some(SectionKind::Even(s / 2)),
            s => Some(SectionKind::Odd(s / 2)),
        }
    }
}

fn roman(mut v: u32) -> String {
    const TABLE: [(u32, &str); 13] = [
        (1000, "M"),
        (900, "CM"),
        (500, "D"),
        (400, "CD"),
        (100, "C"),
        (90, "XC"),
        (50, "L"),
        (40, "XL"),
        (10, "X"),
        (9, "IX"),
        (5, "V"),
        (4, "IV"),
        (1, "I"),
    ];
    let mut out = String::new();
    for (n, s) in TABLE {
        while v >= n {
            out.push_str(s);
            v -= n;
        }
    }
    out
}

impl fmt::Display for SectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.number() {
            Some(s) => write!(f, "{}", roman(s)),
            None => write!(f, "Final"),
        }
    }
}

/// Which ends of the line of White sites Black's cell runs off.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reach {
    None,
    Low,
    High,
    Both,
}

impl Reach {
    fn from_flags(low: bool, high: bool) -> Self {
        match (low, high) {
            (false, false) => Reach::None,
            (true, false) => Reach::Low,
            (false, true) => Reach::High,
            (true, true) => Reach::Both,
        }
    }

    pub fn low(self) -> bool {
        matches!(self, Reach::Low | Reach::Both)
    }

    pub fn high(self) -> bool {
        matches!(self, Reach::High | Reach::Both)
    }
}

/// Position of the anchor's canonical quadrant in a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuadrantClass {
    Core,
    /// No column to the right.
    EdgeVertical,
    /// No row above.
    EdgeHorizontal,
    Corner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Touching {
    /// For a row, `Low` is the left end and `High` the right end.
    Row(Reach),
    /// For a grid, `reach` refers to the bottom and top of the anchor's column.
    Grid { class: QuadrantClass, reach: Reach },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Reflection {
    pub flip_x: bool,
    pub flip_y: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Anchor {
    /// 1-based index along the row.
    Row(u32),
    /// 1-based column and row.
    Grid { col: u32, row: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionLabel {
    pub kind: SectionKind,
    pub touching: Touching,
    /// Anchor after reflection into the canonical quadrant.
    pub anchor: Anchor,
    pub reflection: Reflection,
    /// Offset from the canonical anchor, with both coordinates positive.
    pub local: Point,
}

/// Centre of White site `j` in an `n`-site row.
pub fn row_site(arena: &Arena, n: u32, j: u32) -> Point {
    let x = arena.p() * int(2 * j as i64 - 1) / int(2 * n as i64);
    Point::new(x, arena.q() / int(2))
}

/// Centre of White site `(col, row)` in an `a x b` grid.
pub fn grid_site(arena: &Arena, a: u32, b: u32, col: u32, row: u32) -> Point {
    let x = arena.p() * int(2 * col as i64 - 1) / int(2 * a as i64);
    let y = arena.q() * int(2 * row as i64 - 1) / int(2 * b as i64);
    Point::new(x, y)
}

struct Folded {
    x: Scalar,
    y: Scalar,
    reflection: Reflection,
}

// Moves an offset inside the closed box |x| <= hx, |y| <= hy into the open
// upper right quadrant.
fn fold(dx: Scalar, dy: Scalar, hx: &Scalar, hy: &Scalar) -> Result<Folded, PartitionError> {
    if dx.abs() > *hx || dy.abs() > *hy {
        return Err(PartitionError::OutOfQuadrant);
    }
    if dx.is_zero() || dy.is_zero() || dx.abs() == *hx || dy.abs() == *hy {
        return Err(PartitionError::OnBoundary);
    }
    let reflection = Reflection { flip_x: dx.is_negative(), flip_y: dy.is_negative() };
    Ok(Folded { x: dx.abs(), y: dy.abs(), reflection })
}

// Section number from the along-axis coordinate `t` and the across-axis
// coordinate `s` in units of the site spacing.
fn section_number(along: &Scalar, across: &Scalar) -> Result<u32, PartitionError> {
    if across < along {
        return Ok(1);
    }
    if across == along {
        return Err(PartitionError::OnBoundary);
    }
    let u = across - along;
    let v = across + along;
    if u.is_integer() || v.is_integer() {
        return Err(PartitionError::OnBoundary);
    }
    let fu = u.floor().to_integer();
    let fv = v.floor().to_integer();
    let s: num::BigInt = fu + fv + 2;
    u32::try_from(s).map_err(|_| PartitionError::OutOfQuadrant)
}

// Reach of section `s` for anchor `i` among `count` sites on the line.
fn reach(s: u32, i: u32, count: u32) -> Reach {
    match SectionKind::from_number(s) {
        Some(SectionKind::SectionI) => Reach::from_flags(false, i == count),
        Some(SectionKind::Even(l)) => Reach::from_flags(l >= i, i + l > count),
        Some(SectionKind::Odd(l)) => Reach::from_flags(l >= i, i + l + 1 > count),
        _ => Reach::Both,
    }
}

/// Reach of a section given by kind rather than number.
pub(crate) fn reach_of(kind: SectionKind, i: u32, count: u32) -> Reach {
    match kind.number() {
        Some(s) => reach(s, i, count),
        None => Reach::Both,
    }
}

/// First section number from which Black's cell reaches both ends of the
/// line, for anchor `i` among `count` sites.
pub fn final_section(i: u32, count: u32) -> u32 {
    (2..).find(|&s| reach(s, i, count) == Reach::Both).expect("reach grows with s")
}

/// Polygon of section `s` (or of the final region when `s` is `None`)
/// inside the quadrant `[0, half_along] x [0, half_across]`, in
/// (along, across) coordinates, counter-clockwise. Sections are measured in
/// multiples of the site spacing `unit`.
pub fn section_polygon(
    s: Option<u32>,
    final_from: u32,
    half_along: &Scalar,
    half_across: &Scalar,
    unit: &Scalar,
) -> Vec<Point> {
    use crate::geometry::{clip_convex, HalfPlane};
    let z = Scalar::zero;
    let one = || int(1);
    let mut poly = vec![
        Point::new(z(), z()),
        Point::new(half_along.clone(), z()),
        Point::new(half_along.clone(), half_across.clone()),
        Point::new(z(), half_across.clone()),
    ];
    // lower boundary: across >= k unit + sgn along
    let lower = |s: u32| if s % 2 == 0 { (s / 2 - 1, 1) } else { (s / 2, -1) };
    let upper = |s: u32| if s % 2 == 0 { (s / 2, -1) } else { (s / 2, 1) };
    let num = s.unwrap_or(final_from);
    if num == 1 {
        return clip_convex(&poly, &HalfPlane::new(one(), -one(), z()));
    }
    let (k, sg) = lower(num);
    poly = clip_convex(&poly, &HalfPlane::new(int(-sg), one(), -(int(k as i64) * unit)));
    if s.is_some() {
        let (k, sg) = upper(num);
        poly = clip_convex(&poly, &HalfPlane::new(int(sg), -one(), int(k as i64) * unit));
    }
    poly
}

fn kind_for(s: u32, r: Reach) -> SectionKind {
    if r == Reach::Both && s > 1 {
        SectionKind::Final
    } else {
        SectionKind::from_number(s).expect("section numbers start at 1")
    }
}

/// Section of `b1` (absolute coordinates) relative to row site `i` of `n`.
pub fn section_of_row(arena: &Arena, n: u32, i: u32, b1: &Point) -> Result<SectionLabel, PartitionError> {
    if n == 0 {
        return Err(PartitionError::EmptyArrangement);
    }
    if i == 0 || i > n {
        return Err(PartitionError::InvalidAnchor { index: i, count: n });
    }
    let w = row_site(arena, n, i);
    let hx = arena.p() / int(2 * n as i64);
    let hy = arena.q() / int(2);
    let f = fold(&b1.x - &w.x, &b1.y - &w.y, &hx, &hy)?;
    let i = if f.reflection.flip_x { n + 1 - i } else { i };
    let unit = arena.p() / int(n as i64);
    let s = section_number(&(&f.x / &unit), &(&f.y / &unit))?;
    let r = reach(s, i, n);
    Ok(SectionLabel {
        kind: kind_for(s, r),
        touching: Touching::Row(r),
        anchor: Anchor::Row(i),
        reflection: f.reflection,
        local: Point::new(f.x, f.y),
    })
}

/// Section of `b1` (absolute coordinates) relative to grid site `(col, row)`
/// of an `a x b` grid. Sections count outwards from the anchor's column.
pub fn section_of_grid(
    arena: &Arena,
    a: u32,
    b: u32,
    col: u32,
    row: u32,
    b1: &Point,
) -> Result<SectionLabel, PartitionError> {
    if a == 0 || b == 0 {
        return Err(PartitionError::EmptyArrangement);
    }
    if col == 0 || col > a {
        return Err(PartitionError::InvalidAnchor { index: col, count: a });
    }
    if row == 0 || row > b {
        return Err(PartitionError::InvalidAnchor { index: row, count: b });
    }
    let w = grid_site(arena, a, b, col, row);
    let hx = arena.p() / int(2 * a as i64);
    let hy = arena.q() / int(2 * b as i64);
    let f = fold(&b1.x - &w.x, &b1.y - &w.y, &hx, &hy)?;
    let col = if f.reflection.flip_x { a + 1 - col } else { col };
    let row = if f.reflection.flip_y { b + 1 - row } else { row };
    let unit = arena.q() / int(b as i64);
    let s = section_number(&(&f.y / &unit), &(&f.x / &unit))?;
    let class = match (col == a, row == b) {
        (false, false) => QuadrantClass::Core,
        (true, false) => QuadrantClass::EdgeVertical,
        (false, true) => QuadrantClass::EdgeHorizontal,
        (true, true) => QuadrantClass::Corner,
    };
    let r = reach(s, row, b);
    Ok(SectionLabel {
        kind: kind_for(s, r),
        touching: Touching::Grid { class, reach: r },
        anchor: Anchor::Grid { col, row },
        reflection: f.reflection,
        local: Point::new(f.x, f.y),
    })
}

/// Section number of an offset already in the canonical quadrant of a grid
/// site, ignoring which ends of the column exist.
pub(crate) fn grid_local_section(arena: &Arena, a: u32, b: u32, local: &Point) -> Result<u32, PartitionError> {
    let hx = arena.p() / int(2 * a as i64);
    let hy = arena.q() / int(2 * b as i64);
    if local.x.is_negative() || local.y.is_negative() {
        return Err(PartitionError::OutOfQuadrant);
    }
    let f = fold(local.x.clone(), local.y.clone(), &hx, &hy)?;
    let unit = arena.q() / int(b as i64);
    section_number(&(&f.y / &unit), &(&f.x / &unit))
}

/// Whether an `a x b` grid of square cells fits `p x q` exactly with
/// `a b = n`, returning `(a, b)` when it does.
pub fn square_grid_feasible(arena: &Arena, n: u32) -> Option<(u32, u32)> {
    if n == 0 {
        return None;
    }
    (1..=n).filter(|a| n % a == 0).find_map(|a| {
        let b = n / a;
        // cells p/a x q/b are square iff p b = q a
        (arena.p() * int(b as i64) == arena.q() * int(a as i64)).then_some((a, b))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::rat;

    #[test]
    fn numerals() {
        assert_eq!(SectionKind::Odd(1).to_string(), "III");
        assert_eq!(SectionKind::Even(2).to_string(), "IV");
        assert_eq!(SectionKind::Even(7).to_string(), "XIV");
    }

    #[test]
    fn row_sections_near_centre() {
        let arena = Arena::from_ints(8, 10).unwrap();
        // n = 8, unit 1, anchor 4 at x = 3.5
        let at = |x: Scalar, y: Scalar| section_of_row(&arena, 8, 4, &Point::new(x, y)).unwrap();
        let l = at(rat(7, 2) + rat(2, 5), int(5) + rat(1, 5));
        assert_eq!(l.kind, SectionKind::SectionI);
        let l = at(rat(7, 2) + rat(1, 5), int(5) + rat(1, 2));
        assert_eq!(l.kind, SectionKind::Even(1));
        let l = at(rat(7, 2) + rat(2, 5), int(5) + rat(7, 10));
        assert_eq!(l.kind, SectionKind::Odd(1));
        let l = at(rat(7, 2) - rat(2, 5), int(5) - rat(7, 10));
        assert_eq!(l.kind, SectionKind::Odd(1));
        assert_eq!(l.anchor, Anchor::Row(5));
        assert!(l.reflection.flip_x && l.reflection.flip_y);
    }

    #[test]
    fn boundary_and_outside() {
        let arena = Arena::from_ints(8, 10).unwrap();
        let e = section_of_row(&arena, 8, 4, &Point::new(rat(7, 2) + rat(1, 4), int(5) + rat(1, 4)));
        assert_eq!(e, Err(PartitionError::OnBoundary));
        let e = section_of_row(&arena, 8, 4, &Point::new(int(5), int(5) + rat(1, 4)));
        assert_eq!(e, Err(PartitionError::OutOfQuadrant));
    }

    #[test]
    fn square_grid() {
        assert_eq!(square_grid_feasible(&Arena::from_ints(4, 2).unwrap(), 8), Some((4, 2)));
        assert_eq!(square_grid_feasible(&Arena::from_ints(3, 2).unwrap(), 8), None);
    }
}
