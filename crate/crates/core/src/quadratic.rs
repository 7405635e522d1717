//! Exact bivariate quadratics and quadratic surds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use crate::geometry::{Point, Scalar};

pub(crate) fn rat(n: i64, d: i64) -> Scalar {
    Scalar::new(n.into(), d.into())
}

pub(crate) fn int(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

/// `xx x^2 + yy y^2 + xy x y + x x + y y + c`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AreaQuadratic {
    pub xx: Scalar,
    pub yy: Scalar,
    pub xy: Scalar,
    pub x: Scalar,
    pub y: Scalar,
    pub c: Scalar,
}

impl AreaQuadratic {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Scalar) -> Self {
        AreaQuadratic { c, ..Self::default() }
    }

    pub fn new(xx: Scalar, yy: Scalar, xy: Scalar, x: Scalar, y: Scalar, c: Scalar) -> Self {
        AreaQuadratic { xx, yy, xy, x, y, c }
    }

    pub fn eval(&self, px: &Scalar, py: &Scalar) -> Scalar {
        &self.xx * px * px + &self.yy * py * py + &self.xy * px * py + &self.x * px + &self.y * py + &self.c
    }

    pub fn eval_at(&self, p: &Point) -> Scalar {
        self.eval(&p.x, &p.y)
    }

    /// The same function written in swapped coordinates.
    pub fn transposed(&self) -> Self {
        AreaQuadratic {
            xx: self.yy.clone(),
            yy: self.xx.clone(),
            xy: self.xy.clone(),
            x: self.y.clone(),
            y: self.x.clone(),
            c: self.c.clone(),
        }
    }

    /// `f(-x, y)`.
    pub fn mirrored_x(&self) -> Self {
        AreaQuadratic { xy: -self.xy.clone(), x: -self.x.clone(), ..self.clone() }
    }

    /// `f(x + dx, y + dy)`.
    pub fn shifted(&self, dx: &Scalar, dy: &Scalar) -> Self {
        AreaQuadratic {
            xx: self.xx.clone(),
            yy: self.yy.clone(),
            xy: self.xy.clone(),
            x: &self.x + int(2) * &self.xx * dx + &self.xy * dy,
            y: &self.y + int(2) * &self.yy * dy + &self.xy * dx,
            c: self.eval(dx, dy),
        }
    }

    pub fn scaled(&self, k: &Scalar) -> Self {
        AreaQuadratic {
            xx: &self.xx * k,
            yy: &self.yy * k,
            xy: &self.xy * k,
            x: &self.x * k,
            y: &self.y * k,
            c: &self.c * k,
        }
    }

    /// Largest value over a convex polygon together with a point attaining
    /// it. Candidates are the vertices, the critical point of every edge and
    /// the interior stationary point, which covers concave and indefinite
    /// forms alike.
    pub fn maximize_over(&self, poly: &[Point]) -> Option<(Point, Scalar)> {
        let mut best: Option<(Point, Scalar)> = None;
        let mut offer = |p: Point| {
            let v = self.eval_at(&p);
            if best.as_ref().map_or(true, |(_, b)| v > *b) {
                best = Some((p, v));
            }
        };
        let n = poly.len();
        for i in 0..n {
            let s = &poly[i];
            let e = &poly[(i + 1) % n];
            offer(s.clone());
            let dx = &e.x - &s.x;
            let dy = &e.y - &s.y;
            // f(s + t d) = A t^2 + B t + C
            let a = &self.xx * &dx * &dx + &self.yy * &dy * &dy + &self.xy * &dx * &dy;
            let b = int(2) * &self.xx * &s.x * &dx
                + int(2) * &self.yy * &s.y * &dy
                + &self.xy * (&s.x * &dy + &s.y * &dx)
                + &self.x * &dx
                + &self.y * &dy;
            if a.is_negative() {
                let t = -b / (int(2) * a);
                if t.is_positive() && t < Scalar::one() {
                    offer(Point::new(&s.x + &t * &dx, &s.y + &t * &dy));
                }
            }
        }
        let det = int(4) * &self.xx * &self.yy - &self.xy * &self.xy;
        if !det.is_zero() && n >= 3 {
            let px = (&self.xy * &self.y - int(2) * &self.yy * &self.x) / &det;
            let py = (&self.xy * &self.x - int(2) * &self.xx * &self.y) / &det;
            let p = Point::new(px, py);
            if inside_convex(poly, &p) {
                offer(p);
            }
        }
        best
    }
}

fn inside_convex(poly: &[Point], p: &Point) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let s = &poly[i];
        let e = &poly[(i + 1) % n];
        let c = (&e.x - &s.x) * (&p.y - &s.y) - (&e.y - &s.y) * (&p.x - &s.x);
        !c.is_negative()
    })
}

impl Add for AreaQuadratic {
    type Output = AreaQuadratic;
    fn add(self, o: Self) -> Self {
        AreaQuadratic {
            xx: self.xx + o.xx,
            yy: self.yy + o.yy,
            xy: self.xy + o.xy,
            x: self.x + o.x,
            y: self.y + o.y,
            c: self.c + o.c,
        }
    }
}

impl Sub for AreaQuadratic {
    type Output = AreaQuadratic;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for AreaQuadratic {
    type Output = AreaQuadratic;
    fn neg(self) -> Self {
        self.scaled(&-Scalar::one())
    }
}

impl Mul<&Scalar> for AreaQuadratic {
    type Output = AreaQuadratic;
    fn mul(self, k: &Scalar) -> Self {
        self.scaled(k)
    }
}

impl std::iter::Sum for AreaQuadratic {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(AreaQuadratic::zero(), |a, b| a + b)
    }
}

impl fmt::Display for AreaQuadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = [
            (&self.xx, "x^2"),
            (&self.yy, "y^2"),
            (&self.xy, "xy"),
            (&self.x, "x"),
            (&self.y, "y"),
            (&self.c, ""),
        ];
        let mut first = true;
        for (k, name) in terms {
            if k.is_zero() {
                continue;
            }
            let mag = k.abs();
            let sign = if k.is_negative() { "-" } else { "+" };
            if first {
                if k.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if name.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "({mag}){name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `a + b sqrt(d)` with rational `a`, `b` and a positive integer `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub a: Scalar,
    pub b: Scalar,
    pub d: u32,
}

impl Surd {
    pub fn rational(a: Scalar) -> Self {
        Surd { a, b: Scalar::zero(), d: 1 }
    }

    pub fn new(a: Scalar, b: Scalar, d: u32) -> Self {
        Surd { a, b, d }
    }

    pub fn scaled(&self, k: &Scalar) -> Self {
        Surd { a: &self.a * k, b: &self.b * k, d: self.d }
    }

    /// Exact comparison of a rational with this surd.
    pub fn cmp_rational(&self, x: &Scalar) -> Ordering {
        // sign of (a - x) + b sqrt(d)
        let r = &self.a - x;
        let s = &self.b;
        let d = int(self.d as i64);
        match (r.signum(), s.signum()) {
            (rs, ss) if !rs.is_negative() && !ss.is_negative() => {
                if rs.is_zero() && ss.is_zero() {
                    Ordering::Equal
                } else {
                    Ordering::Greater
                }
            }
            (rs, ss) if !rs.is_positive() && !ss.is_positive() => Ordering::Less,
            (rs, _) => {
                // opposite signs: compare r^2 with s^2 d
                let lhs = &r * &r;
                let rhs = s * s * d;
                let mag = lhs.cmp(&rhs);
                if rs.is_positive() {
                    mag
                } else {
                    mag.reverse()
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let mag = self.b.abs();
        let root = if mag.is_one() { format!("sqrt({})", self.d) } else { format!("{mag}*sqrt({})", self.d) };
        let sign = if self.b.is_negative() { "-" } else { "+" };
        if self.a.is_zero() {
            write!(f, "{}{root}", if self.b.is_negative() { "-" } else { "" })
        } else {
            write!(f, "{} {sign} {root}", self.a)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surd_ordering() {
        let s = Surd::new(int(4), int(-1), 3); // 2.2679...
        assert_eq!(s.cmp_rational(&rat(9, 4)), Ordering::Greater);
        assert_eq!(s.cmp_rational(&rat(23, 10)), Ordering::Less);
        assert_eq!(Surd::rational(int(2)).cmp_rational(&int(2)), Ordering::Equal);
        let t = Surd::new(int(-1), int(1), 3);
        assert_eq!(t.cmp_rational(&rat(7, 10)), Ordering::Greater);
        assert_eq!(t.cmp_rational(&rat(3, 4)), Ordering::Less);
    }

    #[test]
    fn surd_display() {
        assert_eq!(Surd::new(int(4), int(-1), 6).to_string(), "4 - sqrt(6)");
        assert_eq!(Surd::new(rat(3, 2), rat(1, 2), 3).to_string(), "3/2 + 1/2*sqrt(3)");
        assert_eq!(Surd::new(int(0), int(-2), 3).to_string(), "-2*sqrt(3)");
        assert_eq!(Surd::rational(rat(7, 4)).to_string(), "7/4");
    }

    #[test]
    fn maximize_concave_interior() {
        // -(x-1)^2 - (y-1)^2 over [0,3]^2
        let q = AreaQuadratic::new(int(-1), int(-1), int(0), int(2), int(2), int(-2));
        let sq = vec![
            Point::from_ints(0, 0),
            Point::from_ints(3, 0),
            Point::from_ints(3, 3),
            Point::from_ints(0, 3),
        ];
        let (p, v) = q.maximize_over(&sq).unwrap();
        assert_eq!(p, Point::from_ints(1, 1));
        assert_eq!(v, int(0));
    }

    #[test]
    fn shifted_matches_eval() {
        let q = AreaQuadratic::new(rat(1, 8), rat(-3, 8), rat(1, 4), int(2), int(-1), int(5));
        let s = q.shifted(&rat(1, 3), &rat(-2, 5));
        assert_eq!(s.eval(&int(1), &int(2)), q.eval(&rat(4, 3), &rat(8, 5)));
    }
}
