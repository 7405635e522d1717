//! Command line front end for the Stackelberg Voronoi solvers.

pub mod rational;
pub mod record;
pub mod svg;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::{Signed, Zero};
use serde_json::{json, Value};
use stackelberg_core::geometry::{cell_of_site, polygon_area, GeometryError};
use stackelberg_core::grid::{area_grid_closed_form, best_point_grid, black_grid_arrangement};
use stackelberg_core::optimum::score_arrangement;
use stackelberg_core::partition::{grid_site, row_site, section_of_grid, section_of_row, PartitionError, SectionLabel};
use stackelberg_core::row::{area_row_closed_form, best_point_row, black_row_arrangement};
use stackelberg_core::{Arena, BlackArrangement, OctoPolygon, OptimumRecord, Point, Scalar, SolverError};
use stackelberg_oracle::{sampled_area, verify_suite_with, LabeledSite, OracleError, SampleSpec, SuiteKind, WhiteArrangement};
use thiserror::Error;

use crate::rational::parse_rational;
use crate::record::{point, scalar, ResultRecord};

pub const SEED_ENV: &str = "STACKELBERG_SEED";
const DEFAULT_SEED: u64 = 7;

#[derive(Parser, Debug)]
#[command(name = "stackelberg", version, about = "Black's best responses to White's row and grid placements under the L1 metric")]
pub struct Cli {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Layout {
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    pub p: Scalar,
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    pub q: Scalar,
    /// Number of White sites in a row.
    #[arg(long, conflicts_with_all = ["a", "b"])]
    pub n: Option<u32>,
    /// Grid columns.
    #[arg(long, requires = "b")]
    pub a: Option<u32>,
    /// Grid rows.
    #[arg(long, requires = "a")]
    pub b: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// Anchor site of a row (1-based).
    #[arg(long, conflicts_with_all = ["anchor_col", "anchor_row"])]
    pub i: Option<u32>,
    #[arg(long, requires = "anchor_row")]
    pub anchor_col: Option<u32>,
    #[arg(long, requires = "anchor_col")]
    pub anchor_row: Option<u32>,
    /// Black's offset from the anchor site.
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    pub bx: Scalar,
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    pub by: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Row,
    Grid,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Black's best single point.
    BestPoint {
        #[command(flatten)]
        layout: Layout,
    },
    /// Black's cell and its area at a point.
    Cell {
        #[command(flatten)]
        layout: Layout,
        #[command(flatten)]
        target: Target,
        /// Exact area from the cell polygon (default).
        #[arg(long, conflicts_with = "sample")]
        exact: bool,
        /// Lattice estimate with this many cells per axis.
        #[arg(long)]
        sample: Option<u32>,
        #[arg(long)]
        svg: Option<std::path::PathBuf>,
    },
    /// Black's sandwich arrangement and its exact score.
    Arrangement {
        #[command(flatten)]
        layout: Layout,
        /// Offset of the point placed next to an unpaired White site.
        #[arg(long, value_parser = parse_rational)]
        delta: Option<Scalar>,
        #[arg(long)]
        svg: Option<std::path::PathBuf>,
    },
    /// Randomised invariant checks against the brute-force oracle.
    Verify {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        /// Defaults to $STACKELBERG_SEED, then 7.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = stackelberg_oracle::suite::DEFAULT_RESOLUTION)]
        resolution: u32,
    },
    /// Section label of a point.
    Section {
        #[command(flatten)]
        layout: Layout,
        #[command(flatten)]
        target: Target,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("verification failed")]
    VerificationFailed(Box<ResultRecord>),
}

impl CliError {
    /// Name of the innermost error case, shown before the message.
    pub fn case(&self) -> &'static str {
        fn partition(e: &PartitionError) -> &'static str {
            match e {
                PartitionError::InvalidAnchor { .. } => "InvalidAnchor",
                PartitionError::OutOfQuadrant => "OutOfQuadrant",
                PartitionError::OnBoundary => "OnBoundary",
                PartitionError::EmptyArrangement => "EmptyArrangement",
            }
        }
        fn geometry(e: &GeometryError) -> &'static str {
            match e {
                GeometryError::InvalidArena { .. } => "InvalidArena",
                GeometryError::CoincidentSites { .. } => "CoincidentSites",
                GeometryError::NonSimplePolygon => "NonSimplePolygon",
            }
        }
        fn solver(e: &SolverError) -> &'static str {
            match e {
                SolverError::Partition(e) => partition(e),
                SolverError::Geometry(e) => geometry(e),
                SolverError::SectionNotPresent(_) => "SectionNotPresent",
                SolverError::OrientationError => "OrientationError",
                SolverError::InconsistentCase => "InconsistentCase",
                SolverError::InvalidCount { .. } => "InvalidCount",
                SolverError::OddBNotSupported { .. } => "OddBNotSupported",
            }
        }
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Solver(e) => solver(e),
            CliError::Partition(e) => partition(e),
            CliError::Geometry(e) => geometry(e),
            CliError::Oracle(OracleError::Solver(e)) => solver(e),
            CliError::Oracle(OracleError::CoincidentSites { .. }) => "CoincidentSites",
            CliError::Oracle(OracleError::Resolution(_)) => "Resolution",
            CliError::Oracle(OracleError::SiteIndex { .. }) => "SiteIndex",
            CliError::Io { .. } => "Io",
            CliError::VerificationFailed(_) => "VerificationFailed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Result of one invocation: exit status and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.exit_code() {
                0 => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let json = cli.json;
    let render = |r: &ResultRecord| if json { r.to_json() + "\n" } else { r.to_text() };
    match execute(cli.command) {
        Ok(record) => Outcome { code: 0, stdout: render(&record), stderr: String::new() },
        Err(CliError::VerificationFailed(record)) => {
            Outcome { code: 1, stdout: render(&record), stderr: "error: VerificationFailed: some checks failed\n".into() }
        }
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {}: {e}\n", e.case()) },
    }
}

enum Shape {
    Row { n: u32 },
    Grid { a: u32, b: u32 },
}

struct Setup {
    arena: Arena,
    shape: Shape,
    rotated: bool,
}

impl Setup {
    fn new(layout: &Layout, record: &mut ResultRecord) -> Result<Self, CliError> {
        record.input("p", &layout.p);
        record.input("q", &layout.q);
        let shape = match (layout.n, layout.a, layout.b) {
            (Some(n), None, None) => {
                record.input("n", n);
                Shape::Row { n }
            }
            (None, Some(a), Some(b)) => {
                record.input("a", a);
                record.input("b", b);
                Shape::Grid { a, b }
            }
            _ => return Err(CliError::Usage("give either --n or both --a and --b".into())),
        };
        let (mut p, mut q) = (layout.p.clone(), layout.q.clone());
        let mut rotated = false;
        let shape = match shape {
            // p/a < q/b: reflect in y = x
            Shape::Grid { a, b } if &p * Scalar::from_integer(b.into()) < &q * Scalar::from_integer(a.into()) => {
                rotated = true;
                std::mem::swap(&mut p, &mut q);
                Shape::Grid { a: b, b: a }
            }
            s => s,
        };
        record.rotated = rotated;
        Ok(Setup { arena: Arena::new(p, q)?, shape, rotated })
    }

    fn whites(&self) -> Vec<Point> {
        match self.shape {
            Shape::Row { n } => WhiteArrangement::Row { n }.sites(&self.arena),
            Shape::Grid { a, b } => WhiteArrangement::Grid { a, b }.sites(&self.arena),
        }
    }

    /// Anchor site and Black's absolute position for a `Target`.
    fn locate(&self, target: &Target, record: &mut ResultRecord) -> Result<(Point, Point, Anchor), CliError> {
        record.input("bx", &target.bx);
        record.input("by", &target.by);
        let (mut bx, mut by) = (target.bx.clone(), target.by.clone());
        let anchor = match (&self.shape, target.i, target.anchor_col, target.anchor_row) {
            (Shape::Row { n }, Some(i), None, None) => {
                record.input("i", i);
                check_index(i, *n)?;
                Anchor::Row(i)
            }
            (Shape::Grid { a, b }, None, Some(c), Some(r)) => {
                record.input("anchor_col", c);
                record.input("anchor_row", r);
                let (c, r) = if self.rotated { (r, c) } else { (c, r) };
                if self.rotated {
                    std::mem::swap(&mut bx, &mut by);
                }
                check_index(c, *a)?;
                check_index(r, *b)?;
                Anchor::Grid(c, r)
            }
            (Shape::Row { .. }, ..) => return Err(CliError::Usage("a row target needs --i".into())),
            (Shape::Grid { .. }, ..) => {
                return Err(CliError::Usage("a grid target needs --anchor-col and --anchor-row".into()))
            }
        };
        let w = match (&self.shape, anchor) {
            (Shape::Row { n }, Anchor::Row(i)) => row_site(&self.arena, *n, i),
            (Shape::Grid { a, b }, Anchor::Grid(c, r)) => grid_site(&self.arena, *a, *b, c, r),
            _ => unreachable!("anchor matches shape"),
        };
        let b1 = Point::new(&w.x + bx, &w.y + by);
        Ok((w, b1, anchor))
    }
}

#[derive(Clone, Copy)]
enum Anchor {
    Row(u32),
    Grid(u32, u32),
}

fn check_index(i: u32, count: u32) -> Result<(), CliError> {
    if i == 0 || i > count {
        return Err(PartitionError::InvalidAnchor { index: i, count }.into());
    }
    Ok(())
}

fn write_svg(path: &std::path::Path, text: &str, record: &mut ResultRecord) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    record.output("svg", json!(path.display().to_string()));
    Ok(())
}

fn label_value(label: &SectionLabel) -> Value {
    json!({
        "kind": label.kind.to_string(),
        "touching": format!("{:?}", label.touching),
        "anchor": format!("{:?}", label.anchor),
        "flip_x": label.reflection.flip_x,
        "flip_y": label.reflection.flip_y,
        "local": point(&label.local),
    })
}

fn optimum_outputs(rec: &OptimumRecord, rotated: bool, record: &mut ResultRecord) {
    record.output("section", label_value(&rec.section));
    record.output("location_local", point(&rec.location_local));
    record.output("location_absolute", point(&rec.location_absolute));
    if rotated {
        record.output("location_original", point(&rec.location_absolute.transpose()));
    }
    record.output("area", scalar(&rec.area));
    record.output("condition", json!(rec.condition.to_string()));
    if let Some((s, e)) = &rec.segment {
        record.output("segment", json!([point(s), point(e)]));
    }
    record.flags.approach_limit = rec.approach_limit;
    record.flags.tie = rec.tie;
}

fn has_degenerate_pair(b1: &Point, whites: &[Point]) -> bool {
    whites.iter().any(|w| {
        let dx = (&b1.x - &w.x).abs();
        !dx.is_zero() && dx == (&b1.y - &w.y).abs()
    })
}


fn execute(command: Command) -> Result<ResultRecord, CliError> {
    match command {
        Command::BestPoint { layout } => {
            let mut record = ResultRecord::new("best-point");
            let setup = Setup::new(&layout, &mut record)?;
            let rec = match setup.shape {
                Shape::Row { n } => best_point_row(&setup.arena, n)?,
                Shape::Grid { a, b } => best_point_grid(&setup.arena, a, b)?,
            };
            record.flags.degenerate_bisector_used = has_degenerate_pair(&rec.location_absolute, &setup.whites());
            optimum_outputs(&rec, setup.rotated, &mut record);
            Ok(record)
        }
        Command::Cell { layout, target, exact: _, sample, svg } => {
            let mut record = ResultRecord::new("cell");
            let setup = Setup::new(&layout, &mut record)?;
            let (_, b1, anchor) = setup.locate(&target, &mut record)?;
            let whites = setup.whites();
            if whites.contains(&b1) {
                let e = GeometryError::CoincidentSites { x: b1.x.to_string(), y: b1.y.to_string() };
                return Err(e.into());
            }
            let mut all = whites.clone();
            all.push(b1.clone());
            let cell = cell_of_site(&b1, &all, &setup.arena)?;
            record.output("b1", point(&b1));
            record.output("vertices", Value::Array(cell.vertices().iter().map(point).collect()));
            let label = match (&setup.shape, anchor) {
                (Shape::Row { n }, Anchor::Row(i)) => section_of_row(&setup.arena, *n, i, &b1),
                (Shape::Grid { a, b }, Anchor::Grid(c, r)) => section_of_grid(&setup.arena, *a, *b, c, r, &b1),
                _ => unreachable!("anchor matches shape"),
            };
            match label {
                Ok(label) => {
                    record.output("section", label_value(&label));
                    let closed = match (&setup.shape, anchor) {
                        (Shape::Row { n }, Anchor::Row(i)) => area_row_closed_form(&setup.arena, *n, i, &b1),
                        (Shape::Grid { a, b }, Anchor::Grid(c, r)) => area_grid_closed_form(&setup.arena, *a, *b, c, r, &b1),
                        _ => unreachable!("anchor matches shape"),
                    };
                    match closed {
                        Ok(v) => record.output("closed_form_area", scalar(&v)),
                        Err(e) => record.output("closed_form_area", json!(e.to_string())),
                    }
                }
                Err(e) => record.output("section", json!(e.to_string())),
            }
            match sample {
                Some(resolution) => {
                    record.input("sample", resolution);
                    let mut sites: Vec<LabeledSite> = whites.iter().cloned().map(LabeledSite::white).collect();
                    sites.push(LabeledSite::black(b1.clone()));
                    let est = sampled_area(&setup.arena, &sites, whites.len(), &SampleSpec::new(resolution))?;
                    record.output(
                        "sampled_area",
                        json!({ "value": est.value, "error_bound": est.error_bound, "excluded": est.excluded }),
                    );
                }
                None => record.output("area", scalar(&polygon_area(cell.vertices())?)),
            }
            record.flags.degenerate_bisector_used = has_degenerate_pair(&b1, &whites);
            if let Some(path) = svg {
                let cells: Vec<OctoPolygon> =
                    whites.iter().filter_map(|w| cell_of_site(w, &all, &setup.arena).ok()).collect();
                let lines = svg::configuration_lines_of(&setup.arena, &whites);
                let text = svg::render_svg(&setup.arena, &whites, &[b1], &cells, &[cell], &lines);
                write_svg(&path, &text, &mut record)?;
            }
            Ok(record)
        }
        Command::Arrangement { layout, delta, svg } => {
            let mut record = ResultRecord::new("arrangement");
            let setup = Setup::new(&layout, &mut record)?;
            if let Some(d) = &delta {
                record.input("delta", d);
            }
            let whites = setup.whites();
            let build = |delta: Option<&Scalar>| -> Result<(BlackArrangement, bool), CliError> {
                match setup.shape {
                    Shape::Row { n } => Ok((black_row_arrangement(&setup.arena, n, delta)?, false)),
                    Shape::Grid { a, b } => match black_grid_arrangement(&setup.arena, a, b, delta) {
                        Ok(arr) => Ok((arr, false)),
                        Err(SolverError::OddBNotSupported { fallback }) => Ok((*fallback, true)),
                        Err(e) => Err(e.into()),
                    },
                }
            };
            let (arr, odd_fallback) = build(delta.as_ref())?;
            let report = score_arrangement(&setup.arena, &whites, &arr.points)?;
            record.output("black_points", Value::Array(arr.points.iter().map(point).collect()));
            record.output("black_total", scalar(&report.black_total));
            record.output("white_total", scalar(&report.white_total));
            record.output(
                "per_site",
                Value::Array(
                    report
                        .per_site
                        .iter()
                        .map(|s| json!({ "site": point(&s.site), "black": s.black, "area": scalar(&s.area) }))
                        .collect(),
                ),
            );
            record.output("heuristic", json!(arr.heuristic));
            if odd_fallback {
                record.output("odd_b_fallback", json!(true));
            }
            if !arr.approach_points.is_empty() {
                record.output("approach_points", json!(arr.approach_points));
                if let Some(limit) = limit_score(&setup, &whites, &build)? {
                    record.output("black_total_limit", scalar(&limit));
                }
                record.flags.approach_limit = true;
            }
            record.flags.degenerate_bisector_used = report.degenerate_bisector;
            if let Some(path) = svg {
                let mut all = whites.clone();
                all.extend(arr.points.iter().cloned());
                let cells: Vec<OctoPolygon> =
                    all.iter().filter_map(|s| cell_of_site(s, &all, &setup.arena).ok()).collect();
                let black_cells: Vec<OctoPolygon> =
                    arr.points.iter().filter_map(|s| cell_of_site(s, &all, &setup.arena).ok()).collect();
                let text = svg::render_svg(&setup.arena, &whites, &arr.points, &cells, &black_cells, &[]);
                write_svg(&path, &text, &mut record)?;
            }
            Ok(record)
        }
        Command::Verify { kind, trials, seed, resolution } => {
            let mut record = ResultRecord::new("verify");
            let seed = match seed {
                Some(s) => s,
                None => match std::env::var(SEED_ENV) {
                    Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an integer")))?,
                    Err(_) => DEFAULT_SEED,
                },
            };
            let kind = match kind {
                KindArg::Row => SuiteKind::Row,
                KindArg::Grid => SuiteKind::Grid,
            };
            record.input("kind", format!("{kind:?}").to_lowercase());
            record.input("trials", trials);
            record.input("seed", seed);
            record.input("resolution", resolution);
            let report = verify_suite_with(kind, trials, seed, resolution);
            let passed = report.passed;
            record.output("report", serde_json::to_value(&report).expect("reports serialize"));
            if passed {
                Ok(record)
            } else {
                Err(CliError::VerificationFailed(Box::new(record)))
            }
        }
        Command::Section { layout, target } => {
            let mut record = ResultRecord::new("section");
            let setup = Setup::new(&layout, &mut record)?;
            let (_, b1, anchor) = setup.locate(&target, &mut record)?;
            let label = match (&setup.shape, anchor) {
                (Shape::Row { n }, Anchor::Row(i)) => section_of_row(&setup.arena, *n, i, &b1)?,
                (Shape::Grid { a, b }, Anchor::Grid(c, r)) => section_of_grid(&setup.arena, *a, *b, c, r, &b1)?,
                _ => unreachable!("anchor matches shape"),
            };
            record.output("b1", point(&b1));
            record.output("section", label_value(&label));
            record.flags.degenerate_bisector_used = has_degenerate_pair(&b1, &setup.whites());
            Ok(record)
        }
    }
}

/// Black's total as the approach offset shrinks to zero. For small offsets
/// the total is a quadratic in the offset. It is extrapolated from the offsets
/// d, d/2, d/4 and confirmed from d/2, d/4, d/8. `None` when the two
/// extrapolations disagree.
fn limit_score(
    setup: &Setup,
    whites: &[Point],
    build: &dyn Fn(Option<&Scalar>) -> Result<(BlackArrangement, bool), CliError>,
) -> Result<Option<Scalar>, CliError> {
    let pitch = match setup.shape {
        Shape::Row { n } => setup.arena.p() / Scalar::from_integer(n.into()),
        Shape::Grid { b, .. } => setup.arena.q() / Scalar::from_integer(b.into()),
    };
    let d = pitch / Scalar::from_integer(10_000.into());
    let mut totals = Vec::with_capacity(4);
    for k in 0..4u32 {
        let dk = &d / Scalar::from_integer((1i64 << k).into());
        let (arr, _) = build(Some(&dk))?;
        totals.push(score_arrangement(&setup.arena, whites, &arr.points)?.black_total);
    }
    let extrapolate = |f1: &Scalar, f2: &Scalar, f4: &Scalar| {
        (f1 - f2 * Scalar::from_integer(6.into()) + f4 * Scalar::from_integer(8.into())) / Scalar::from_integer(3.into())
    };
    let limit = extrapolate(&totals[0], &totals[1], &totals[2]);
    let check = extrapolate(&totals[1], &totals[2], &totals[3]);
    Ok((limit == check).then_some(limit))
}
