use num::{BigInt, BigRational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stackelberg_core::geometry::{cell_of_site, cell_region, polygon_area};
use stackelberg_core::optimum::score_arrangement;
use stackelberg_core::partition::{final_section, row_site, section_of_row, SectionKind};
use stackelberg_core::row::*;
use stackelberg_core::{Arena, Point, Scalar, SolverError, TieBreak};

fn rat(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> Scalar {
    rat(n, 1)
}

fn whites(arena: &Arena, n: u32) -> Vec<Point> {
    (1..=n).map(|j| row_site(arena, n, j)).collect()
}

fn geometric_area(arena: &Arena, n: u32, b1: &Point) -> Scalar {
    let mut all = whites(arena, n);
    all.push(b1.clone());
    cell_region(b1, &all, arena, TieBreak::default()).area()
}

#[test]
fn golden_best_points() {
    let r = best_point_row(&Arena::from_ints(2, 2).unwrap(), 2).unwrap();
    assert_eq!(r.area, rat(5, 4));
    assert_eq!(r.location_absolute, Point::new(int(1), rat(3, 2)));
    assert!(!r.approach_limit);

    let r = best_point_row(&Arena::from_ints(3, 3).unwrap(), 3).unwrap();
    assert_eq!(r.area, rat(9, 4));
    assert_eq!(r.section.kind, SectionKind::Odd(1));
    assert!(r.tie);
    assert_eq!(r.location_local, Point::new(rat(1, 2), rat(1, 2)));

    let r = best_point_row(&Arena::from_ints(4, 8).unwrap(), 4).unwrap();
    assert_eq!(r.area, rat(23, 2));
    assert_eq!(r.section.kind, SectionKind::Final);
}

#[test]
fn single_site_is_an_approach_limit() {
    let arena = Arena::from_ints(3, 5).unwrap();
    let r = best_point_row(&arena, 1).unwrap();
    assert_eq!(r.area, rat(15, 2));
    assert!(r.approach_limit);
}

#[test]
fn table_matches_section_enumeration() {
    // nq/p = k/16 over a range that crosses every table row for n <= 7
    for n in 1..=7u32 {
        for k in 1..=200i64 {
            let arena = Arena::new(int(n as i64) * int(16), int(k)).unwrap();
            let table = best_point_row(&arena, n).unwrap();
            let enumerated = best_point_row_enumerated(&arena, n).unwrap();
            assert_eq!(table.area, enumerated.area, "n={n} nq/p={k}/16");
            if !table.approach_limit {
                assert_eq!(geometric_area(&arena, n, &table.location_absolute), table.area, "n={n} k={k}");
            }
        }
    }
}

#[test]
fn table_rows_tile_the_ratio() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=9u32);
        let r = rat(rng.gen_range(1..=4000), rng.gen_range(1..=200));
        let rows = row_best_point_table(n);
        let hits = rows.iter().filter(|(_, c)| c.strictly_contains(&r)).count();
        let closed = rows.iter().filter(|(_, c)| c.contains(&r)).count();
        assert!(closed == 1 || (hits == 0 && closed == 2), "n={n} r={r}");
    }
}

#[test]
fn spec_section_examples() {
    let arena = Arena::from_ints(6, 2).unwrap();
    let w = row_site(&arena, 3, 2);
    let at = |x: Scalar, y: Scalar| Point::new(&w.x + x, &w.y + y);
    assert_eq!(area_row_closed_form(&arena, 3, 2, &at(rat(1, 5), rat(1, 10))).unwrap(), rat(199, 100));
    let b1 = at(rat(1, 5), rat(1, 2));
    assert_eq!(area_row_closed_form(&arena, 3, 2, &b1).unwrap(), rat(721, 400));
    assert_eq!(geometric_area(&arena, 3, &b1), rat(721, 400));
}

#[test]
fn section_one_optimum_is_a_supremum() {
    let arena = Arena::from_ints(6, 2).unwrap();
    let r = section_optimum_row(&arena, 3, 2, SectionKind::SectionI).unwrap();
    assert_eq!(r.area, int(2));
    assert!(r.approach_limit);
    assert!(r.segment.is_some());
}

#[test]
fn missing_sections_are_reported() {
    let arena = Arena::from_ints(4, 8).unwrap();
    let fs = final_section(2, 4);
    let kind = SectionKind::from_number(fs).unwrap();
    assert!(matches!(section_optimum_row(&arena, 4, 2, kind), Err(SolverError::SectionNotPresent(_))));
}

#[test]
fn sandwich_points_and_score() {
    let arena = Arena::from_ints(2, 3).unwrap();
    let arr = black_row_arrangement(&arena, 2, None).unwrap();
    assert_eq!(arr.points, vec![Point::new(int(1), int(2)), Point::new(int(1), int(1))]);
    let report = score_arrangement(&arena, &whites(&arena, 2), &arr.points).unwrap();
    assert_eq!(report.black_total, rat(9, 2));
    assert_eq!(&report.black_total + &report.white_total, int(6));
}

#[test]
fn sandwich_score_for_even_rows() {
    for n in [2u32, 4, 6] {
        for q in [4i64, 5, 9] {
            let p = int(n as i64);
            let arena = Arena::new(p.clone(), int(q)).unwrap();
            let arr = black_row_arrangement(&arena, n, None).unwrap();
            let report = score_arrangement(&arena, &whites(&arena, n), &arr.points).unwrap();
            let want = &p * int(q) - int(3) * &p * &p / int(4 * n as i64);
            assert_eq!(report.black_total, want, "n={n} q={q}");
        }
    }
}

#[test]
fn odd_rows_add_an_approach_point() {
    let arena = Arena::from_ints(6, 4).unwrap();
    let arr = black_row_arrangement(&arena, 3, Some(&rat(1, 100))).unwrap();
    assert_eq!(arr.points.len(), 3);
    assert_eq!(arr.approach_points, vec![2]);
    assert_eq!(arr.points[2], Point::new(int(5) - rat(1, 100), int(2)));
    assert!(arr.heuristic);
}

fn interior_point(arena: &Arena, n: u32, i: u32, fx: i64, fy: i64) -> Point {
    let w = row_site(arena, n, i);
    let hx = arena.p() / int(2 * n as i64);
    let hy = arena.q() / int(2);
    Point::new(&w.x + hx * rat(fx, 1009), &w.y + hy * rat(fy, 1009))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn closed_form_equals_geometry(
        n in 1u32..=6,
        p in 1i64..=12,
        q in 1i64..=30,
        i_seed in 0u32..100,
        fx in -1008i64..=1008,
        fy in -1008i64..=1008,
    ) {
        let arena = Arena::from_ints(p, q).unwrap();
        let i = 1 + i_seed % n;
        let b1 = interior_point(&arena, n, i, fx, fy);
        if let Ok(area) = area_row_closed_form(&arena, n, i, &b1) {
            let mut all = whites(&arena, n);
            all.push(b1.clone());
            let poly = cell_of_site(&b1, &all, &arena).unwrap();
            prop_assert_eq!(area, polygon_area(poly.vertices()).unwrap());
        }
    }

    #[test]
    fn labels_use_the_reflected_anchor(n in 2u32..=6, fx in 1i64..=1008, fy in 1i64..=1008) {
        let arena = Arena::from_ints(6, 7).unwrap();
        let b1 = interior_point(&arena, n, 1, -fx, -fy);
        if let Ok(l) = section_of_row(&arena, n, 1, &b1) {
            prop_assert!(l.reflection.flip_x && l.reflection.flip_y);
            prop_assert!(l.local.x.clone() > int(0) && l.local.y.clone() > int(0));
        }
    }

    #[test]
    fn section_optima_dominate_their_section(n in 2u32..=5, q in 1i64..=24, sx in 1i64..20, sy in 1i64..20) {
        let arena = Arena::new(int(n as i64) * int(4), int(q)).unwrap();
        let i = (n + 1) / 2;
        let w = row_site(&arena, n, i);
        let pt = Point::new(&w.x + arena.p() / int(2 * n as i64) * rat(sx, 20), &w.y + arena.q() / int(2) * rat(sy, 20));
        if let Ok(label) = section_of_row(&arena, n, i, &pt) {
            if label.anchor == stackelberg_core::partition::Anchor::Row(i) {
                let rec = section_optimum_row(&arena, n, i, label.kind).unwrap();
                prop_assert!(geometric_area(&arena, n, &pt) <= rec.area);
            }
        }
    }
}
