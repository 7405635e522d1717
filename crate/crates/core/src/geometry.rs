//! Exact planar geometry under the L1 metric.
//!
//! Every bisector between two sites is made of axis-parallel and 45 degree
//! pieces, so Voronoi cells clipped to a rectangle are octilinear polygons.
//! Cells are computed as unions of interior-disjoint convex pieces and only
//! stitched into a boundary polygon on request.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary precision rational used by every public computation.
pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("arena dimensions must be positive (p = {p}, q = {q})")]
    InvalidArena { p: String, q: String },
    #[error("sites coincide at ({x}, {y})")]
    CoincidentSites { x: String, y: String },
    #[error("polygon boundary is not simple")]
    NonSimplePolygon,
}

/// Field-like coordinate type. `div_exact` is only called where the quotient
/// is known to be representable, which lets scaled integers stand in for
/// rationals on the hot paths.
pub trait Coord:
    Clone
    + Ord
    + fmt::Debug
    + std::hash::Hash
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn div_exact(&self, rhs: &Self) -> Self;

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Coord for BigRational {
    fn div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

impl Coord for i128 {
    fn div_exact(&self, rhs: &Self) -> Self {
        debug_assert!(self % rhs == 0, "inexact division {self} / {rhs}");
        self / rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point<T = Scalar> {
    pub x: T,
    pub y: T,
}

impl<T: Coord> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }

    pub fn l1(&self, other: &Self) -> T {
        (self.x.clone() - other.x.clone()).abs_val() + (self.y.clone() - other.y.clone()).abs_val()
    }

    pub fn transpose(&self) -> Self {
        Point::new(self.y.clone(), self.x.clone())
    }
}

impl Point<Scalar> {
    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Scalar::from_integer(x.into()), Scalar::from_integer(y.into()))
    }
}

impl fmt::Display for Point<Scalar> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Rectangle `[0, p] x [0, q]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    p: Scalar,
    q: Scalar,
}

impl Arena {
    pub fn new(p: Scalar, q: Scalar) -> Result<Self, GeometryError> {
        if !p.is_positive() || !q.is_positive() {
            return Err(GeometryError::InvalidArena { p: p.to_string(), q: q.to_string() });
        }
        Ok(Arena { p, q })
    }

    pub fn from_ints(p: i64, q: i64) -> Result<Self, GeometryError> {
        Arena::new(Scalar::from_integer(p.into()), Scalar::from_integer(q.into()))
    }

    pub fn p(&self) -> &Scalar {
        &self.p
    }

    pub fn q(&self) -> &Scalar {
        &self.q
    }

    pub fn area(&self) -> Scalar {
        &self.p * &self.q
    }

    /// Counter-clockwise corners starting at the origin.
    pub fn corners(&self) -> Vec<Point> {
        let z = Scalar::zero();
        vec![
            Point::new(z.clone(), z.clone()),
            Point::new(self.p.clone(), z.clone()),
            Point::new(self.p.clone(), self.q.clone()),
            Point::new(z, self.q.clone()),
        ]
    }

    pub fn contains(&self, pt: &Point) -> bool {
        !pt.x.is_negative() && !pt.y.is_negative() && pt.x <= self.p && pt.y <= self.q
    }

    /// Mirror image in the vertical centre line.
    pub fn reflect_x(&self, pt: &Point) -> Point {
        Point::new(&self.p - &pt.x, pt.y.clone())
    }

    pub fn reflect_y(&self, pt: &Point) -> Point {
        Point::new(pt.x.clone(), &self.q - &pt.y)
    }
}

/// How a point equidistant from two sites is assigned.
///
/// `SmallerDy` gives the point to the site with the smaller vertical offset,
/// which is the limit of the norm `|dx| + (1 + e)|dy|` as `e` shrinks to zero.
/// `SmallerDx` is the same rule with the axes exchanged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TieBreak {
    #[default]
    SmallerDy,
    SmallerDx,
}

impl TieBreak {
    pub fn transposed(self) -> Self {
        match self {
            TieBreak::SmallerDy => TieBreak::SmallerDx,
            TieBreak::SmallerDx => TieBreak::SmallerDy,
        }
    }
}

/// Closed half-plane `a x + b y + c >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlane<T = Scalar> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Coord> HalfPlane<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        HalfPlane { a, b, c }
    }

    pub fn eval(&self, pt: &Point<T>) -> T {
        self.a.clone() * pt.x.clone() + self.b.clone() * pt.y.clone() + self.c.clone()
    }

    fn transpose(self) -> Self {
        HalfPlane { a: self.b, b: self.a, c: self.c }
    }
}

/// Twice the signed area (positive for counter-clockwise order).
pub fn twice_signed_area<T: Coord>(poly: &[Point<T>]) -> T {
    let n = poly.len();
    let mut acc = T::zero();
    for i in 0..n {
        let p = &poly[i];
        let q = &poly[(i + 1) % n];
        acc = acc + p.x.clone() * q.y.clone() - q.x.clone() * p.y.clone();
    }
    acc
}

fn cross<T: Coord>(o: &Point<T>, a: &Point<T>, b: &Point<T>) -> T {
    (a.x.clone() - o.x.clone()) * (b.y.clone() - o.y.clone())
        - (a.y.clone() - o.y.clone()) * (b.x.clone() - o.x.clone())
}

/// Drops repeated and collinear vertices. Returns an empty list for
/// degenerate input.
fn tidy<T: Coord>(poly: Vec<Point<T>>) -> Vec<Point<T>> {
    let mut pts: Vec<Point<T>> = Vec::with_capacity(poly.len());
    for p in poly {
        if pts.last() != Some(&p) {
            pts.push(p);
        }
    }
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    loop {
        let n = pts.len();
        if n < 3 {
            return Vec::new();
        }
        let mut removed = false;
        for i in 0..n {
            let prev = &pts[(i + n - 1) % n];
            let next = &pts[(i + 1) % n];
            if cross(prev, &pts[i], next).is_zero() {
                pts.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            break;
        }
    }
    if twice_signed_area(&pts).is_zero() {
        return Vec::new();
    }
    pts
}

/// Sutherland-Hodgman step for one half-plane on a convex polygon.
pub fn clip_convex<T: Coord>(poly: &[Point<T>], h: &HalfPlane<T>) -> Vec<Point<T>> {
    let n = poly.len();
    if n == 0 {
        return Vec::new();
    }
    let vals: Vec<T> = poly.iter().map(|p| h.eval(p)).collect();
    let zero = T::zero();
    if vals.iter().all(|v| *v >= zero) {
        return poly.to_vec();
    }
    if vals.iter().all(|v| *v <= zero) {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (p, q) = (&poly[i], &poly[j]);
        let (fp, fq) = (&vals[i], &vals[j]);
        if *fp >= zero {
            out.push(p.clone());
        }
        if (*fp > zero && *fq < zero) || (*fp < zero && *fq > zero) {
            let denom = fp.clone() - fq.clone();
            let x = p.x.clone() + ((q.x.clone() - p.x.clone()) * fp.clone()).div_exact(&denom);
            let y = p.y.clone() + ((q.y.clone() - p.y.clone()) * fp.clone()).div_exact(&denom);
            out.push(Point::new(x, y));
        }
    }
    tidy(out)
}

fn clip_all<T: Coord>(poly: &[Point<T>], planes: &[HalfPlane<T>]) -> Vec<Point<T>> {
    let mut cur = poly.to_vec();
    for h in planes {
        cur = clip_convex(&cur, h);
        if cur.is_empty() {
            break;
        }
    }
    cur
}

fn uses_vertical_form<T: Coord>(a: &Point<T>, b: &Point<T>, tie: TieBreak) -> bool {
    let dx = (a.x.clone() - b.x.clone()).abs_val();
    let dy = (a.y.clone() - b.y.clone()).abs_val();
    match dx.cmp(&dy) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => tie == TieBreak::SmallerDx,
    }
}

// g(y) = |y - ay| - |y - by| restricted to one horizontal strip, as gs*y + gc.
struct Strip<T> {
    bounds: Vec<HalfPlane<T>>,
    gs: T,
    gc: T,
}

fn strips<T: Coord>(a: &Point<T>, b: &Point<T>) -> Vec<Strip<T>> {
    let (lo, hi) = if a.y <= b.y { (a.y.clone(), b.y.clone()) } else { (b.y.clone(), a.y.clone()) };
    let one = T::one;
    let zero = T::zero;
    let below = a.y.clone() - b.y.clone();
    if lo == hi {
        return vec![Strip { bounds: Vec::new(), gs: zero(), gc: zero() }];
    }
    let (ms, mc) = if a.y <= b.y {
        (T::two(), -(a.y.clone() + b.y.clone()))
    } else {
        (-T::two(), a.y.clone() + b.y.clone())
    };
    vec![
        Strip { bounds: vec![HalfPlane::new(zero(), -one(), lo.clone())], gs: zero(), gc: below.clone() },
        Strip {
            bounds: vec![HalfPlane::new(zero(), one(), -lo), HalfPlane::new(zero(), -one(), hi.clone())],
            gs: ms,
            gc: mc,
        },
        Strip { bounds: vec![HalfPlane::new(zero(), one(), -hi)], gs: zero(), gc: -below },
    ]
}

// Pieces of the dominance region when the bisector is a graph over y.
fn vertical_pieces<T: Coord>(a: &Point<T>, b: &Point<T>) -> Vec<Vec<HalfPlane<T>>> {
    let sx = a.x.clone() + b.x.clone();
    strips(a, b)
        .into_iter()
        .map(|s| {
            let main = if a.x < b.x {
                HalfPlane::new(-T::two(), -s.gs, sx.clone() - s.gc)
            } else {
                HalfPlane::new(T::two(), -s.gs, -sx.clone() - s.gc)
            };
            let mut planes = s.bounds;
            planes.push(main);
            planes
        })
        .collect()
}

/// Convex pieces whose union is the set of points assigned to `a` rather
/// than `b`. Each piece is an intersection of half-planes.
pub fn dominance_pieces<T: Coord>(a: &Point<T>, b: &Point<T>, tie: TieBreak) -> Vec<Vec<HalfPlane<T>>> {
    if uses_vertical_form(a, b, tie) {
        vertical_pieces(a, b)
    } else {
        vertical_pieces(&a.transpose(), &b.transpose())
            .into_iter()
            .map(|ps| ps.into_iter().map(HalfPlane::transpose).collect())
            .collect()
    }
}

fn bbox<T: Coord>(poly: &[Point<T>]) -> (T, T, T, T) {
    let mut x0 = poly[0].x.clone();
    let mut x1 = x0.clone();
    let mut y0 = poly[0].y.clone();
    let mut y1 = y0.clone();
    for p in &poly[1..] {
        if p.x < x0 {
            x0 = p.x.clone();
        }
        if p.x > x1 {
            x1 = p.x.clone();
        }
        if p.y < y0 {
            y0 = p.y.clone();
        }
        if p.y > y1 {
            y1 = p.y.clone();
        }
    }
    (x0, x1, y0, y1)
}

#[derive(Debug, PartialEq, Eq)]
enum Verdict {
    Keep,
    Drop,
    Split,
}

// d(z, a) - d(z, b) splits into monotone parts in x and y, so its range over a
// box is read off the corners.
fn classify<T: Coord>(poly: &[Point<T>], a: &Point<T>, b: &Point<T>) -> Verdict {
    let (x0, x1, y0, y1) = bbox(poly);
    let h = |x: &T| (x.clone() - a.x.clone()).abs_val() - (x.clone() - b.x.clone()).abs_val();
    let g = |y: &T| (y.clone() - a.y.clone()).abs_val() - (y.clone() - b.y.clone()).abs_val();
    let (h0, h1, g0, g1) = (h(&x0), h(&x1), g(&y0), g(&y1));
    let fmax = h0.clone().max(h1.clone()) + g0.clone().max(g1.clone());
    if fmax < T::zero() {
        return Verdict::Keep;
    }
    let fmin = h0.min(h1) + g0.min(g1);
    if fmin > T::zero() {
        return Verdict::Drop;
    }
    Verdict::Split
}

/// A union of interior-disjoint convex polygons, each counter-clockwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region<T = Scalar> {
    pub pieces: Vec<Vec<Point<T>>>,
}

impl<T: Coord> Region<T> {
    pub fn empty() -> Self {
        Region { pieces: Vec::new() }
    }

    pub fn from_convex(poly: Vec<Point<T>>) -> Self {
        let poly = tidy(poly);
        if poly.is_empty() {
            Region::empty()
        } else {
            Region { pieces: vec![poly] }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn twice_area(&self) -> T {
        self.pieces.iter().fold(T::zero(), |acc, p| acc + twice_signed_area(p))
    }

    /// Keeps the part of the region that `a` wins against `b`.
    pub fn dominance_clip(&self, a: &Point<T>, b: &Point<T>, tie: TieBreak) -> Self {
        let mut planes: Option<Vec<Vec<HalfPlane<T>>>> = None;
        let mut out = Vec::with_capacity(self.pieces.len());
        for piece in &self.pieces {
            match classify(piece, a, b) {
                Verdict::Keep => out.push(piece.clone()),
                Verdict::Drop => {}
                Verdict::Split => {
                    let planes = planes.get_or_insert_with(|| dominance_pieces(a, b, tie));
                    for set in planes.iter() {
                        let clipped = clip_all(piece, set);
                        if !clipped.is_empty() {
                            out.push(clipped);
                        }
                    }
                }
            }
        }
        Region { pieces: out }
    }

    /// Pairwise intersection of the pieces of two regions.
    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for p in &self.pieces {
            let (px0, px1, py0, py1) = bbox(p);
            for q in &other.pieces {
                let (qx0, qx1, qy0, qy1) = bbox(q);
                if px1 <= qx0 || qx1 <= px0 || py1 <= qy0 || qy1 <= py0 {
                    continue;
                }
                let planes: Vec<HalfPlane<T>> = (0..q.len())
                    .map(|i| {
                        let s = &q[i];
                        let e = &q[(i + 1) % q.len()];
                        let a = s.y.clone() - e.y.clone();
                        let b = e.x.clone() - s.x.clone();
                        let c = -(a.clone() * s.x.clone() + b.clone() * s.y.clone());
                        HalfPlane::new(a, b, c)
                    })
                    .collect();
                let clipped = clip_all(p, &planes);
                if !clipped.is_empty() {
                    out.push(clipped);
                }
            }
        }
        Region { pieces: out }
    }

    /// Stitches the pieces into one counter-clockwise boundary by cancelling
    /// shared edges.
    pub fn boundary(&self) -> Result<Vec<Point<T>>, GeometryError> {
        if self.pieces.is_empty() {
            return Ok(Vec::new());
        }
        let mut verts: Vec<Point<T>> = self.pieces.iter().flatten().cloned().collect();
        verts.sort();
        verts.dedup();
        let mut edges: HashMap<(Point<T>, Point<T>), i32> = HashMap::new();
        for piece in &self.pieces {
            let n = piece.len();
            for i in 0..n {
                let s = &piece[i];
                let e = &piece[(i + 1) % n];
                let d = (e.x.clone() - s.x.clone(), e.y.clone() - s.y.clone());
                let len2 = d.0.clone() * d.0.clone() + d.1.clone() * d.1.clone();
                let mut inner: Vec<(T, &Point<T>)> = verts
                    .iter()
                    .filter_map(|v| {
                        if !cross(s, e, v).is_zero() {
                            return None;
                        }
                        let t = (v.x.clone() - s.x.clone()) * d.0.clone() + (v.y.clone() - s.y.clone()) * d.1.clone();
                        (t > T::zero() && t < len2).then_some((t, v))
                    })
                    .collect();
                inner.sort_by(|l, r| l.0.cmp(&r.0));
                let mut prev = s.clone();
                for (_, v) in inner.into_iter().chain(std::iter::once((T::zero(), e))) {
                    let rev = (v.clone(), prev.clone());
                    match edges.get_mut(&rev) {
                        Some(c) if *c > 0 => *c -= 1,
                        _ => *edges.entry((prev.clone(), v.clone())).or_insert(0) += 1,
                    }
                    prev = v.clone();
                }
            }
        }
        let mut next: HashMap<Point<T>, Point<T>> = HashMap::new();
        for ((s, e), c) in edges {
            for _ in 0..c {
                if next.insert(s.clone(), e.clone()).is_some() {
                    return Err(GeometryError::NonSimplePolygon);
                }
            }
        }
        let start = next.keys().min().cloned().ok_or(GeometryError::NonSimplePolygon)?;
        let mut ring = vec![start.clone()];
        let mut cur = start.clone();
        loop {
            let nx = next.get(&cur).ok_or(GeometryError::NonSimplePolygon)?.clone();
            if nx == start {
                break;
            }
            if ring.len() > next.len() {
                return Err(GeometryError::NonSimplePolygon);
            }
            ring.push(nx.clone());
            cur = nx;
        }
        if ring.len() != next.len() {
            return Err(GeometryError::NonSimplePolygon);
        }
        Ok(canonical_ring(tidy(ring)))
    }
}

impl Region<Scalar> {
    pub fn area(&self) -> Scalar {
        self.twice_area() / Scalar::from_integer(2.into())
    }

    pub fn rectangle(arena: &Arena) -> Self {
        Region::from_convex(arena.corners())
    }

    pub fn to_polygon(&self) -> Result<OctoPolygon, GeometryError> {
        Ok(OctoPolygon { vertices: self.boundary()? })
    }
}

// Rotates a counter-clockwise ring so that its smallest vertex comes first.
fn canonical_ring<T: Coord>(mut ring: Vec<Point<T>>) -> Vec<Point<T>> {
    if let Some(k) = (0..ring.len()).min_by(|&i, &j| ring[i].cmp(&ring[j])) {
        ring.rotate_left(k);
    }
    ring
}

/// Counter-clockwise simple polygon with axis-parallel and diagonal edges.
/// Vertices are stored without repeats or collinear points, starting from the
/// lexicographically smallest one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OctoPolygon {
    vertices: Vec<Point>,
}

impl OctoPolygon {
    /// Normalizes orientation, collinear vertices and starting vertex.
    pub fn new(vertices: Vec<Point>) -> Self {
        let mut v = vertices;
        if twice_signed_area(&v).is_negative() {
            v.reverse();
        }
        OctoPolygon { vertices: canonical_ring(tidy(v)) }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn map(&self, f: impl Fn(&Point) -> Point) -> Self {
        OctoPolygon::new(self.vertices.iter().map(f).collect())
    }
}

fn segments_cross(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = cross(a, b, c).signum();
    let o2 = cross(a, b, d).signum();
    let o3 = cross(c, d, a).signum();
    let o4 = cross(c, d, b).signum();
    if o1 != o2 && o3 != o4 && !(o1.is_zero() && o2.is_zero()) {
        return true;
    }
    let on = |p: &Point, q: &Point, r: &Point| {
        cross(p, q, r).is_zero()
            && r.x >= p.x.clone().min(q.x.clone())
            && r.x <= p.x.clone().max(q.x.clone())
            && r.y >= p.y.clone().min(q.y.clone())
            && r.y <= p.y.clone().max(q.y.clone())
    };
    on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b)
}

/// Area of a simple polygon given in either orientation.
pub fn polygon_area(vertices: &[Point]) -> Result<Scalar, GeometryError> {
    let n = vertices.len();
    if n < 3 {
        return Ok(Scalar::zero());
    }
    for i in 0..n {
        if vertices[i] == vertices[(i + 1) % n] {
            return Err(GeometryError::NonSimplePolygon);
        }
    }
    for i in 0..n {
        let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (c, d) = (&vertices[j], &vertices[(j + 1) % n]);
            if segments_cross(a, b, c, d) {
                return Err(GeometryError::NonSimplePolygon);
            }
        }
    }
    Ok(twice_signed_area(vertices).abs() / Scalar::from_integer(2.into()))
}

/// Cell of `site` among `sites` (entries equal to `site` are skipped) within
/// the arena, as convex pieces.
pub fn cell_region_with<T: Coord>(
    site: &Point<T>,
    sites: &[Point<T>],
    rect: Vec<Point<T>>,
    tie: TieBreak,
) -> Region<T> {
    let mut order: Vec<(T, &Point<T>)> =
        sites.iter().filter(|s| *s != site).map(|s| (site.l1(s), s)).collect();
    order.sort_by(|l, r| l.0.cmp(&r.0));
    let mut region = Region::from_convex(rect);
    for (_, other) in order {
        region = region.dominance_clip(site, other, tie);
        if region.is_empty() {
            break;
        }
    }
    region
}

pub fn cell_region(site: &Point, sites: &[Point], arena: &Arena, tie: TieBreak) -> Region {
    cell_region_with(site, sites, arena.corners(), tie)
}

/// Voronoi cell of `site` with respect to `sites` under the default tie rule.
pub fn cell_of_site(site: &Point, sites: &[Point], arena: &Arena) -> Result<OctoPolygon, GeometryError> {
    cell_region(site, sites, arena, TieBreak::default()).to_polygon()
}

/// Ray or segment direction with components in {-1, 0, 1}.
pub type Direction = (i8, i8);

/// Chain of points joined by segments, with rays leaving the first point
/// along `head` and the last point along `tail`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyline {
    pub points: Vec<Point>,
    pub head: Direction,
    pub tail: Direction,
}

/// Closed quadrant `corner + {(s * dx, t * dy) : s, t >= 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieQuadrant {
    pub corner: Point,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bisector {
    /// Horizontal or vertical rays joined by at most one diagonal segment.
    Generic { polyline: Polyline },
    /// The sites sit on a common diagonal. Two quadrants are equidistant and
    /// `resolved` is the boundary after applying the tie rule.
    Degenerate { tie_regions: Vec<TieQuadrant>, resolved: Polyline },
}

fn vertical_polyline(a: &Point, b: &Point) -> Polyline {
    let two = Scalar::from_integer(2.into());
    let sx = &a.x + &b.x;
    let xat = |g: Scalar| if a.x < b.x { (&sx - g) / &two } else { (&sx + g) / &two };
    let (lo, hi) = if a.y <= b.y { (a.y.clone(), b.y.clone()) } else { (b.y.clone(), a.y.clone()) };
    let below = &a.y - &b.y;
    let mut points = vec![Point::new(xat(below.clone()), lo.clone())];
    if lo != hi {
        points.push(Point::new(xat(-below), hi));
    }
    Polyline { points, head: (0, -1), tail: (0, 1) }
}

fn transpose_polyline(pl: Polyline) -> Polyline {
    let mut points: Vec<Point> = pl.points.iter().map(Point::transpose).collect();
    points.sort();
    Polyline { points, head: (-1, 0), tail: (1, 0) }
}

/// L1 bisector of two distinct sites.
pub fn bisector(a: &Point, b: &Point, tie: TieBreak) -> Result<Bisector, GeometryError> {
    if a == b {
        return Err(GeometryError::CoincidentSites { x: a.x.to_string(), y: a.y.to_string() });
    }
    let resolved = if uses_vertical_form(a, b, tie) {
        vertical_polyline(a, b)
    } else {
        transpose_polyline(vertical_polyline(&a.transpose(), &b.transpose()))
    };
    let dx = &b.x - &a.x;
    let dy = &b.y - &a.y;
    if dx.abs() != dy.abs() {
        return Ok(Bisector::Generic { polyline: resolved });
    }
    let sx = if dx.is_positive() { 1 } else { -1 };
    let sy = if dy.is_positive() { 1 } else { -1 };
    let tie_regions = vec![
        TieQuadrant { corner: Point::new(b.x.clone(), a.y.clone()), direction: (sx, -sy) },
        TieQuadrant { corner: Point::new(a.x.clone(), b.y.clone()), direction: (-sx, sy) },
    ];
    Ok(Bisector::Degenerate { tie_regions, resolved })
}

/// Maps rational coordinates onto an integer lattice fine enough that every
/// vertex produced by L1 clipping stays integral.
#[derive(Clone, Debug)]
pub struct ScaledFrame {
    scale: BigInt,
}

const FRAME_LIMIT: i128 = 1 << 40;

impl ScaledFrame {
    /// Frame for inputs built from `values`. Bisector constants are halves of
    /// coordinate sums and diagonal crossings halve once more, hence the 4.
    pub fn for_values<'a>(values: impl IntoIterator<Item = &'a Scalar>) -> Self {
        let den = values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        ScaledFrame { scale: den * BigInt::from(4) }
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn to_int(&self, v: &Scalar) -> Option<i128> {
        let s = v * Scalar::from_integer(self.scale.clone());
        if !s.is_integer() {
            return None;
        }
        let n = s.to_integer().to_i128()?;
        (n.abs() <= FRAME_LIMIT).then_some(n)
    }

    pub fn point(&self, p: &Point) -> Option<Point<i128>> {
        Some(Point::new(self.to_int(&p.x)?, self.to_int(&p.y)?))
    }

    pub fn rect(&self, arena: &Arena) -> Option<Vec<Point<i128>>> {
        arena.corners().iter().map(|c| self.point(c)).collect()
    }

    pub fn from_int(&self, v: i128) -> Scalar {
        Scalar::new(BigInt::from(v), self.scale.clone())
    }

    pub fn area_from_twice(&self, twice: i128) -> Scalar {
        Scalar::new(BigInt::from(twice), BigInt::from(2) * &self.scale * &self.scale)
    }
}

/// Pieces of the cell on which `b` takes area from `w`, where `whites` is the
/// configuration before `b` arrived.
pub fn stolen_region(b: &Point, w: &Point, whites: &[Point], arena: &Arena, tie: TieBreak) -> Region {
    let mut all = whites.to_vec();
    all.push(b.clone());
    let black = cell_region(b, &all, arena, tie);
    let white = cell_region(w, whites, arena, tie);
    black.intersect(&white)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn r(n: i64, d: i64) -> Scalar {
        Scalar::new(n.into(), d.into())
    }

    #[test]
    fn square_cells_split_evenly() {
        let arena = Arena::from_ints(2, 1).unwrap();
        let sites = vec![Point::new(r(1, 2), r(1, 2)), Point::new(r(3, 2), r(1, 2))];
        let cell = cell_of_site(&sites[0], &sites, &arena).unwrap();
        assert_eq!(cell.vertices(), &[pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]);
    }

    #[test]
    fn tidy_drops_collinear() {
        let v = tidy(vec![pt(0, 0), pt(1, 0), pt(2, 0), pt(2, 2), pt(0, 2)]);
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn frame_round_trip() {
        let vals = [r(1, 3), r(5, 6)];
        let f = ScaledFrame::for_values(vals.iter());
        assert_eq!(f.to_int(&vals[1]), Some(20));
        assert_eq!(f.from_int(20), vals[1]);
    }
}
