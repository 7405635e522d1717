//! Deterministic SVG pictures of cells and arrangements.

use std::fmt::Write;

use num::ToPrimitive;
use stackelberg_core::{Arena, OctoPolygon, Point, Scalar};

fn num(v: &Scalar) -> String {
    let f = v.to_f64().unwrap_or(f64::NAN);
    // at most 9 decimals, trailing zeros dropped
    let s = format!("{f:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

fn points_attr(poly: &[Point]) -> String {
    poly.iter().map(|p| format!("{},{}", num(&p.x), num(&p.y))).collect::<Vec<_>>().join(" ")
}

/// Segments of the axis-parallel and diagonal lines through `site`, clipped
/// to the arena.
pub fn configuration_lines(arena: &Arena, site: &Point) -> Vec<(Point, Point)> {
    let (p, q) = (arena.p(), arena.q());
    let zero = Scalar::from_integer(0.into());
    let mut out = vec![
        (Point::new(zero.clone(), site.y.clone()), Point::new(p.clone(), site.y.clone())),
        (Point::new(site.x.clone(), zero.clone()), Point::new(site.x.clone(), q.clone())),
    ];
    for slope in [1i64, -1] {
        let m = Scalar::from_integer(slope.into());
        // y = site.y + m (x - site.x)
        let y_at = |x: &Scalar| &site.y + &m * (x - &site.x);
        let x_at = |y: &Scalar| &site.x + &m * (y - &site.y);
        let mut ends: Vec<Point> = Vec::new();
        for x in [&zero, p] {
            let y = y_at(x);
            if y >= zero && y <= *q {
                ends.push(Point::new(x.clone(), y));
            }
        }
        for y in [&zero, q] {
            let x = x_at(y);
            if x >= zero && x <= *p {
                ends.push(Point::new(x, y.clone()));
            }
        }
        ends.sort();
        ends.dedup();
        if let (Some(a), Some(b)) = (ends.first(), ends.last()) {
            if a != b {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Configuration lines of every site, each drawn once.
pub fn configuration_lines_of(arena: &Arena, sites: &[Point]) -> Vec<(Point, Point)> {
    let mut lines: Vec<_> = sites.iter().flat_map(|s| configuration_lines(arena, s)).collect();
    lines.sort();
    lines.dedup();
    lines
}

/// SVG document with the arena as view box, drawn with `y` pointing up.
/// `cells` are outlined, `highlight` polygons are filled.
pub fn render_svg(
    arena: &Arena,
    whites: &[Point],
    blacks: &[Point],
    cells: &[OctoPolygon],
    highlight: &[OctoPolygon],
    lines: &[(Point, Point)],
) -> String {
    let (p, q) = (num(arena.p()), num(arena.q()));
    let short = arena.p().clone().min(arena.q().clone()).to_f64().unwrap_or(1.0);
    let stroke = format!("{:.6}", short / 300.0);
    let radius = format!("{:.6}", short / 80.0);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {p} {q}" width="{p}" height="{q}">"#
    );
    let _ = writeln!(s, r#"<g transform="matrix(1 0 0 -1 0 {q})" stroke-width="{stroke}">"#);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{p}" height="{q}" fill="white" stroke="black"/>"#);
    for poly in highlight {
        let _ = writeln!(
            s,
            r##"<polygon class="highlight" points="{}" fill="#9ecae1" stroke="#08519c"/>"##,
            points_attr(poly.vertices())
        );
    }
    for poly in cells {
        let _ = writeln!(s, r#"<polygon class="cell" points="{}" fill="none" stroke="gray"/>"#, points_attr(poly.vertices()));
    }
    for (a, b) in lines {
        let _ = writeln!(
            s,
            r#"<line class="configuration" x1="{}" y1="{}" x2="{}" y2="{}" stroke="orange" stroke-dasharray="{stroke} {stroke}"/>"#,
            num(&a.x),
            num(&a.y),
            num(&b.x),
            num(&b.y)
        );
    }
    for w in whites {
        let _ = writeln!(
            s,
            r#"<circle class="white" cx="{}" cy="{}" r="{radius}" fill="white" stroke="black"/>"#,
            num(&w.x),
            num(&w.y)
        );
    }
    for b in blacks {
        let _ = writeln!(s, r#"<circle class="black" cx="{}" cy="{}" r="{radius}" fill="black"/>"#, num(&b.x), num(&b.y));
    }
    s.push_str("</g>\n</svg>\n");
    s
}
