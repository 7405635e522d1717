//! Randomised invariant batteries for the row and grid solvers.

use num::{BigInt, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use stackelberg_core::geometry::{cell_of_site, polygon_area};
use stackelberg_core::grid::{area_grid_closed_form, best_point_grid, best_point_grid_enumerated, grid_best_point_table};
use stackelberg_core::partition::{grid_site, row_site};
use stackelberg_core::row::{area_row_closed_form, best_point_row, best_point_row_enumerated, row_best_point_table};
use stackelberg_core::{Arena, OptimumRecord, Point, RatioInterval, Scalar, SolverError};

use crate::sampling::{sampled_area, LabeledSite, SampleSpec};
use crate::search::WhiteArrangement;

pub const DEFAULT_RESOLUTION: u32 = 200;
const MAX_COUNTEREXAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteKind {
    Row,
    Grid,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub counterexamples: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub kind: SuiteKind,
    pub trials: u32,
    pub seed: u64,
    pub resolution: u32,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

const CHECKS: [&str; 5] = [
    "closed_form_equals_polygon",
    "table_tiling",
    "table_matches_sections",
    "table_dominates_random_points",
    "sampled_area_agrees",
];

enum Outcome {
    Pass,
    Fail(String),
    /// The random draw landed on a boundary; nothing was checked.
    Skip,
}

fn rat(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

fn fraction(rng: &mut ChaCha8Rng) -> Scalar {
    rat(rng.gen_range(1..1009), 1009)
}

fn exact_area(arena: &Arena, whites: &[Point], b1: &Point) -> Result<Scalar, String> {
    let mut all = whites.to_vec();
    all.push(b1.clone());
    let cell = cell_of_site(b1, &all, arena).map_err(|e| e.to_string())?;
    polygon_area(cell.vertices()).map_err(|e| e.to_string())
}

fn check_equal(what: &str, got: Result<Scalar, SolverError>, want: Result<Scalar, String>) -> Outcome {
    match (got, want) {
        (Err(SolverError::Partition(_)), _) => Outcome::Skip,
        (Ok(g), Ok(w)) if g == w => Outcome::Pass,
        (g, w) => Outcome::Fail(format!("{what}: closed form {g:?}, polygon {w:?}")),
    }
}

fn check_tiling(what: &str, rows: &[(stackelberg_core::partition::SectionKind, RatioInterval)], v: &Scalar) -> Outcome {
    let strict = rows.iter().filter(|(_, c)| c.strictly_contains(v)).count();
    let closed = rows.iter().filter(|(_, c)| c.contains(v)).count();
    // A ratio on a shared boundary lies in two rows; the first table row
    // is closed at its lower end.
    if closed == 1 || (closed == 2 && strict == 0) {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("{what}: {strict} rows contain the ratio {v} strictly, {closed} weakly"))
    }
}

fn check_sections(what: &str, table: &Result<OptimumRecord, SolverError>, sections: Result<OptimumRecord, SolverError>) -> Outcome {
    match (table, sections) {
        (Ok(t), Ok(s)) if t.area == s.area => Outcome::Pass,
        (t, s) => Outcome::Fail(format!(
            "{what}: table {:?}, sections {:?}",
            t.as_ref().map(|r| r.area.to_string()),
            s.map(|r| r.area.to_string())
        )),
    }
}

fn check_dominance(what: &str, table: &Result<OptimumRecord, SolverError>, arena: &Arena, whites: &[Point], b1: &Point) -> Outcome {
    if whites.contains(b1) {
        return Outcome::Skip;
    }
    match (table, exact_area(arena, whites, b1)) {
        (Ok(t), Ok(a)) if a <= t.area => Outcome::Pass,
        (t, a) => Outcome::Fail(format!(
            "{what}: b1 = {b1} takes {a:?} against best {:?}",
            t.as_ref().map(|r| r.area.to_string())
        )),
    }
}

fn check_sampled(what: &str, arena: &Arena, whites: &[Point], b1: &Point, resolution: u32) -> Outcome {
    if whites.contains(b1) {
        return Outcome::Skip;
    }
    let Ok(exact) = exact_area(arena, whites, b1) else { return Outcome::Skip };
    let mut sites: Vec<LabeledSite> = whites.iter().cloned().map(LabeledSite::white).collect();
    sites.push(LabeledSite::black(b1.clone()));
    match sampled_area(arena, &sites, whites.len(), &SampleSpec::new(resolution)) {
        Ok(est) if est.contains(exact.to_f64().unwrap_or(f64::NAN)) => Outcome::Pass,
        est => Outcome::Fail(format!("{what}: b1 = {b1}, exact {exact}, sampled {est:?}")),
    }
}

fn random_point(rng: &mut ChaCha8Rng, arena: &Arena) -> Point {
    Point::new(arena.p() * fraction(rng), arena.q() * fraction(rng))
}

fn row_trial(rng: &mut ChaCha8Rng, resolution: u32) -> Vec<Outcome> {
    let n = rng.gen_range(2..=6u32);
    let p = rat(rng.gen_range(1..=12), 1);
    let q = rat(rng.gen_range(1..=160), 4);
    let arena = Arena::new(p, q).expect("positive sides");
    let what = format!("p={} q={} n={n}", arena.p(), arena.q());
    let whites = WhiteArrangement::Row { n }.sites(&arena);
    let i = rng.gen_range(1..=n);
    let w = row_site(&arena, n, i);
    let sx = if rng.gen() { 1 } else { -1 };
    let sy = if rng.gen() { 1 } else { -1 };
    let b1 = Point::new(
        &w.x + arena.p() / rat(2 * n as i64, sx) * fraction(rng),
        &w.y + arena.q() / rat(2, sy) * fraction(rng),
    );
    let table = best_point_row(&arena, n);
    let r = arena.q() * rat(n as i64, 1) / arena.p();
    let probe = random_point(rng, &arena);
    vec![
        check_equal(&format!("{what} i={i} b1={b1}"), area_row_closed_form(&arena, n, i, &b1), exact_area(&arena, &whites, &b1)),
        check_tiling(&what, &row_best_point_table(n), &r),
        check_sections(&what, &table, best_point_row_enumerated(&arena, n)),
        check_dominance(&what, &table, &arena, &whites, &probe),
        check_sampled(&what, &arena, &whites, &b1, resolution),
    ]
}

fn grid_trial(rng: &mut ChaCha8Rng, resolution: u32) -> Vec<Outcome> {
    let a = rng.gen_range(2..=5u32);
    let b = rng.gen_range(2..=5u32);
    let unit = rat(rng.gen_range(1..=4), 1);
    let q = &unit * rat(b as i64, 1);
    // p/a >= q/b
    let p = &unit * rat(a as i64, 1) * rat(rng.gen_range(10..=60), 10);
    let arena = Arena::new(p, q).expect("positive sides");
    let what = format!("p={} q={} a={a} b={b}", arena.p(), arena.q());
    let whites = WhiteArrangement::Grid { a, b }.sites(&arena);
    let (col, row) = (rng.gen_range(1..=a), rng.gen_range(1..=b));
    let w = grid_site(&arena, a, b, col, row);
    let sx = if rng.gen() { 1 } else { -1 };
    let sy = if rng.gen() { 1 } else { -1 };
    let b1 = Point::new(
        &w.x + arena.p() / rat(2 * a as i64, sx) * fraction(rng),
        &w.y + arena.q() / rat(2 * b as i64, sy) * fraction(rng),
    );
    let table = best_point_grid(&arena, a, b);
    let tau = arena.p() * rat(b as i64, 1) / (arena.q() * rat(2 * a as i64, 1));
    let probe = random_point(rng, &arena);
    vec![
        check_equal(
            &format!("{what} anchor=({col},{row}) b1={b1}"),
            area_grid_closed_form(&arena, a, b, col, row, &b1),
            exact_area(&arena, &whites, &b1),
        ),
        check_tiling(&what, &grid_best_point_table(a, b), &tau),
        check_sections(&what, &table, best_point_grid_enumerated(&arena, a, b)),
        check_dominance(&what, &table, &arena, &whites, &probe),
        check_sampled(&what, &arena, &whites, &b1, resolution),
    ]
}

/// Runs `trials` random instances of every invariant for `kind` with the
/// default sampling resolution.
pub fn verify_suite(kind: SuiteKind, trials: u32, seed: u64) -> SuiteReport {
    verify_suite_with(kind, trials, seed, DEFAULT_RESOLUTION)
}

/// As [`verify_suite`] with an explicit lattice resolution for the sampled
/// area check. The report depends only on the arguments.
pub fn verify_suite_with(kind: SuiteKind, trials: u32, seed: u64, resolution: u32) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..trials).map(|_| rng.gen()).collect();
    let resolution = resolution.max(2);
    let outcomes: Vec<Vec<Outcome>> = seeds
        .par_iter()
        .map(|&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            match kind {
                SuiteKind::Row => row_trial(&mut rng, resolution),
                SuiteKind::Grid => grid_trial(&mut rng, resolution),
            }
        })
        .collect();
    let mut checks: Vec<CheckReport> = CHECKS
        .iter()
        .map(|name| CheckReport { name: name.to_string(), cases: 0, failures: 0, counterexamples: Vec::new() })
        .collect();
    for trial in outcomes {
        for (check, outcome) in checks.iter_mut().zip(trial) {
            match outcome {
                Outcome::Pass => check.cases += 1,
                Outcome::Fail(msg) => {
                    check.cases += 1;
                    check.failures += 1;
                    if check.counterexamples.len() < MAX_COUNTEREXAMPLES {
                        check.counterexamples.push(msg);
                    }
                }
                Outcome::Skip => {}
            }
        }
    }
    let passed = checks.iter().all(|c| c.failures == 0);
    SuiteReport { kind, trials, seed, resolution, passed, checks }
}
