use num::{BigInt, BigRational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stackelberg_core::geometry::{cell_region, stolen_region};
use stackelberg_core::grid::*;
use stackelberg_core::optimum::score_arrangement;
use stackelberg_core::partition::{grid_site, row_site, section_of_grid, section_of_row, QuadrantClass, SectionKind, Touching};
use stackelberg_core::row::area_row_closed_form;
use stackelberg_core::{Arena, Point, Scalar, SolverError, TieBreak};

fn rat(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> Scalar {
    rat(n, 1)
}

fn whites(arena: &Arena, a: u32, b: u32) -> Vec<Point> {
    (1..=a).flat_map(|c| (1..=b).map(move |r| (c, r))).map(|(c, r)| grid_site(arena, a, b, c, r)).collect()
}

fn geometric_area(arena: &Arena, a: u32, b: u32, b1: &Point) -> Scalar {
    let mut all = whites(arena, a, b);
    all.push(b1.clone());
    cell_region(b1, &all, arena, TieBreak::default()).area()
}

#[test]
fn golden_thirteen_halves() {
    let arena = Arena::from_ints(8, 8).unwrap();
    let r = best_point_grid(&arena, 2, 4).unwrap();
    assert_eq!(r.area, rat(13, 2));
    assert_eq!(r.section.kind, SectionKind::Odd(1));
    assert_eq!(r.location_absolute, Point::from_ints(4, 4));
    assert_eq!(geometric_area(&arena, 2, 4, &r.location_absolute), rat(13, 2));
}

#[test]
fn two_by_two_optimum_is_three_halves() {
    let arena = Arena::from_ints(4, 2).unwrap();
    let r = best_point_grid(&arena, 2, 2).unwrap();
    assert_eq!(r.section.kind, SectionKind::Final);
    assert_eq!(r.area, rat(3, 2));
    let w = grid_site(&arena, 2, 2, 1, 1);
    let near = Point::new(&w.x + rat(999, 1000), &w.y + rat(499, 1000));
    assert_eq!(geometric_area(&arena, 2, 2, &near), rat(1499999, 1000000));
    // 4/3 is the Section II quadratic at (p/2a, p/6a)
    let quad = grid_section_quadratic(&arena, 2, 2, 1, 1, SectionKind::Even(1)).unwrap();
    assert_eq!(quad.eval(&int(1), &rat(1, 3)), rat(4, 3));
}

#[test]
fn pair_theft_examples() {
    let arena = Arena::from_ints(4, 2).unwrap();
    assert_eq!(theft_pair_area(&arena, 2, 2, PairTheftCase::Zero, &Point::new(rat(1, 2), rat(1, 1000))).unwrap(), int(1) - rat(1, 1_000_000));
    let arena = Arena::from_ints(8, 8).unwrap();
    let b1 = Point::new(rat(19, 10), int(1) - rat(1, 100));
    let got = theft_pair_area(&arena, 2, 4, PairTheftCase::Through(1), &Point::new(rat(19, 10), int(1) - rat(1, 100)));
    // Section III reaches offsets -1..=2, so offset 1 is crossed completely
    assert_eq!(got.unwrap(), int(2) * &b1.y + int(4) - int(3));
    let quad = pair_theft_quadratic(&arena, 2, 4, PairTheftCase::Through(1)).unwrap();
    assert_eq!(quad.eval(&b1.x, &int(1)), int(3));
    assert_eq!(
        theft_pair_area(&arena, 2, 4, PairTheftCase::Through(2), &b1),
        Err(SolverError::InconsistentCase)
    );
}

#[test]
fn pair_theft_matches_geometry() {
    let arena = Arena::from_ints(8, 8).unwrap();
    let (a, b) = (2, 4);
    let ws = whites(&arena, a, b);
    let w = grid_site(&arena, a, b, 1, 2);
    let local = Point::new(rat(19, 10), rat(99, 100));
    let b1 = Point::new(&w.x + &local.x, &w.y + &local.y);
    for i in -1..=2i32 {
        let row = (2 + i) as u32;
        let stolen = |c: u32| stolen_region(&b1, &grid_site(&arena, a, b, c, row), &ws, &arena, TieBreak::default()).area();
        let case = match i {
            0 => PairTheftCase::Zero,
            -1 | 2 => PairTheftCase::Terminal(i),
            _ => PairTheftCase::Through(i),
        };
        assert_eq!(theft_pair_area(&arena, a, b, case, &local).unwrap(), stolen(1) + stolen(2), "offset {i}");
    }
}

#[test]
fn section_one_example() {
    let arena = Arena::from_ints(6, 4).unwrap();
    let quad = grid_section_quadratic(&arena, 3, 2, 2, 1, SectionKind::SectionI).unwrap();
    assert_eq!(quad.eval(&int(0), &int(1)), rat(5, 2));
}

#[test]
fn orientation_is_enforced() {
    let arena = Arena::from_ints(2, 8).unwrap();
    assert_eq!(best_point_grid(&arena, 2, 2).unwrap_err(), SolverError::OrientationError);
}

#[test]
fn table_matches_section_enumeration() {
    // pb/2aq = k/40
    for a in 2..=5u32 {
        for b in 2..=6u32 {
            for k in (20..=40 * (b as i64 + 2)).step_by(3) {
                let q = int(b as i64);
                let p = int(2 * a as i64) * rat(k, 40);
                let arena = Arena::new(p, q).unwrap();
                let table = best_point_grid(&arena, a, b).unwrap();
                let enumerated = best_point_grid_enumerated(&arena, a, b).unwrap();
                assert_eq!(table.area, enumerated.area, "a={a} b={b} tau={k}/40");
                if k % 7 == 0 && !table.approach_limit {
                    assert_eq!(geometric_area(&arena, a, b, &table.location_absolute), table.area);
                }
            }
        }
    }
}

#[test]
fn table_rows_tile_the_ratio() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let a = rng.gen_range(2..=6u32);
        let b = rng.gen_range(2..=8u32);
        let tau = rat(rng.gen_range(100..=3000), 200);
        let rows = grid_best_point_table(a, b);
        let hits = rows.iter().filter(|(_, c)| c.strictly_contains(&tau)).count();
        let closed = rows.iter().filter(|(_, c)| c.contains(&tau)).count();
        assert!(closed == 1 || (hits == 0 && closed == 2), "a={a} b={b} tau={tau}");
    }
}

#[test]
fn sandwich_layout() {
    let arena = Arena::from_ints(4, 2).unwrap();
    let arr = black_grid_arrangement(&arena, 2, 2, None).unwrap();
    let want = [(rat(1, 2), int(1)), (rat(3, 2), int(1)), (rat(5, 2), int(1)), (rat(7, 2), int(1))];
    assert_eq!(arr.points, want.iter().map(|(x, y)| Point::new(x.clone(), y.clone())).collect::<Vec<_>>());
    let report = score_arrangement(&arena, &whites(&arena, 2, 2), &arr.points).unwrap();
    // pixel-count oracle at 4000 x 2000 gives 3.0
    assert_eq!(report.black_total, int(3));
    assert!(arr.heuristic);
}

#[test]
fn odd_b_returns_a_fallback() {
    let arena = Arena::from_ints(6, 3).unwrap();
    match black_grid_arrangement(&arena, 2, 3, None) {
        Err(SolverError::OddBNotSupported { fallback }) => {
            assert_eq!(fallback.points.len(), 6);
            assert_eq!(fallback.approach_points, vec![2, 5]);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(black_grid_arrangement(&arena, 1, 2, None), Err(SolverError::InvalidCount { .. })));
}

fn grid_case() -> impl Strategy<Value = (u32, u32, i64, i64, u32, u32, i64, i64)> {
    (2u32..=5, 2u32..=5).prop_flat_map(|(a, b)| {
        (Just(a), Just(b), 1i64..=4, 10i64..=40, 1..=a, 1..=b, -1008i64..=1008, -1008i64..=1008)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn closed_form_equals_geometry((a, b, u, stretch, col, row, fx, fy) in grid_case()) {
        let q = int(u * b as i64);
        let p = int(u * a as i64) * rat(stretch, 10);
        let arena = Arena::new(p, q).unwrap();
        let w = grid_site(&arena, a, b, col, row);
        let b1 = Point::new(
            &w.x + arena.p() / int(2 * a as i64) * rat(fx, 1009),
            &w.y + arena.q() / int(2 * b as i64) * rat(fy, 1009),
        );
        if let Ok(area) = area_grid_closed_form(&arena, a, b, col, row, &b1) {
            prop_assert_eq!(area, geometric_area(&arena, a, b, &b1));
        }
    }

    // Corner quadrants away from Section I behave like the row problem in a
    // q x p/a strip with b sites, transposed.
    #[test]
    fn corner_quadrants_delegate_to_rows(
        a in 2u32..=5,
        b in 2u32..=5,
        stretch in 10i64..=40,
        fx in 1i64..=1008,
        fy in 1i64..=1008,
    ) {
        let q = int(b as i64);
        let p = int(a as i64) * rat(stretch, 10);
        let arena = Arena::new(p.clone(), q.clone()).unwrap();
        let w = grid_site(&arena, a, b, a, b);
        let local = Point::new(&p / int(2 * a as i64) * rat(fx, 1009), &q / int(2 * b as i64) * rat(fy, 1009));
        let b1 = Point::new(&w.x + &local.x, &w.y + &local.y);
        let Ok(label) = section_of_grid(&arena, a, b, a, b, &b1) else { return Ok(()) };
        let corner = matches!(label.touching, Touching::Grid { class: QuadrantClass::Corner, .. });
        prop_assert!(corner);
        if label.kind == SectionKind::SectionI {
            return Ok(());
        }
        let strip = Arena::new(q.clone(), &p / int(a as i64)).unwrap();
        let ws = row_site(&strip, b, b);
        let rb1 = Point::new(&ws.x + &local.y, &ws.y + &local.x);
        if section_of_row(&strip, b, b, &rb1).is_err() {
            return Ok(());
        }
        let grid = area_grid_closed_form(&arena, a, b, a, b, &b1).unwrap();
        prop_assert_eq!(grid, area_row_closed_form(&strip, b, b, &rb1).unwrap());
    }
}
