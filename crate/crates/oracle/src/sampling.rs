//! Area estimates from a uniform lattice of sample points.

use std::collections::HashSet;

use num::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use stackelberg_core::geometry::ScaledFrame;
use stackelberg_core::{Arena, Point, Scalar};

use crate::OracleError;

/// Owner of a sample point equidistant from several nearest sites.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum TieRule {
    /// Shared among the tied White sites, or the tied Black ones if no White
    /// site is among them.
    ToWhite,
    ToBlack,
    /// Counted for nobody.
    #[default]
    Exclude,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    /// Lattice cells per axis.
    pub resolution: u32,
    pub rng_seed: u64,
    pub tie_rule: TieRule,
    /// Sample at a seeded random point of every lattice cell instead of its
    /// centre.
    pub jitter: bool,
}

impl SampleSpec {
    pub fn new(resolution: u32) -> Self {
        SampleSpec { resolution, rng_seed: 0, tie_rule: TieRule::default(), jitter: false }
    }

    pub fn with_tie_rule(mut self, tie_rule: TieRule) -> Self {
        self.tie_rule = tie_rule;
        self
    }

    pub fn jittered(mut self, rng_seed: u64) -> Self {
        self.jitter = true;
        self.rng_seed = rng_seed;
        self
    }

    pub(crate) fn check(&self) -> Result<(), OracleError> {
        if self.resolution < 2 {
            return Err(OracleError::Resolution(self.resolution));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSite {
    pub point: Point,
    pub black: bool,
}

impl LabeledSite {
    pub fn white(point: Point) -> Self {
        LabeledSite { point, black: false }
    }

    pub fn black(point: Point) -> Self {
        LabeledSite { point, black: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AreaEstimate {
    pub value: f64,
    pub error_bound: f64,
    /// Sample points left unassigned under `TieRule::Exclude`.
    pub excluded: u64,
}

impl AreaEstimate {
    pub fn contains(&self, exact: f64) -> bool {
        (self.value - exact).abs() <= self.error_bound
    }
}

pub(crate) fn check_distinct(points: &[&Point]) -> Result<(), OracleError> {
    let mut seen = HashSet::new();
    for p in points {
        if !seen.insert(*p) {
            return Err(OracleError::CoincidentSites { x: p.x.to_string(), y: p.y.to_string() });
        }
    }
    Ok(())
}

fn f64_of(v: &Scalar) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

// Per-row result: weight collected by every site, and which cells the
// target owns (for the perimeter estimate).
struct RowTally {
    weights: Vec<f64>,
    owned: Vec<bool>,
    excluded: u64,
}

fn resolve(nearest: &[usize], sites: &[LabeledSite], rule: TieRule, weights: &mut [f64]) -> bool {
    if let [only] = nearest {
        weights[*only] += 1.0;
        return true;
    }
    let pick: Vec<usize> = match rule {
        TieRule::Exclude => return false,
        TieRule::ToWhite | TieRule::ToBlack => {
            let want_black = rule == TieRule::ToBlack;
            let preferred: Vec<usize> = nearest.iter().copied().filter(|&k| sites[k].black == want_black).collect();
            if preferred.is_empty() {
                nearest.to_vec()
            } else {
                preferred
            }
        }
    };
    let share = 1.0 / pick.len() as f64;
    for k in pick {
        weights[k] += share;
    }
    true
}

fn tally(arena: &Arena, sites: &[LabeledSite], target: Option<usize>, spec: &SampleSpec) -> Vec<RowTally> {
    let res = spec.resolution as i64;
    let half_x = arena.p() / Scalar::from_integer((2 * res).into());
    let half_y = arena.q() / Scalar::from_integer((2 * res).into());
    let frame = ScaledFrame::for_values(
        sites.iter().flat_map(|s| [&s.point.x, &s.point.y]).chain([&half_x, &half_y, arena.p(), arena.q()]),
    );
    let exact = (!spec.jitter)
        .then(|| {
            let pts: Option<Vec<Point<i128>>> = sites.iter().map(|s| frame.point(&s.point)).collect();
            Some((pts?, frame.to_int(&half_x)?, frame.to_int(&half_y)?))
        })
        .flatten();
    let fsites: Vec<(f64, f64)> = sites.iter().map(|s| (f64_of(&s.point.x), f64_of(&s.point.y))).collect();
    let (p, q) = (f64_of(arena.p()), f64_of(arena.q()));
    (0..res)
        .into_par_iter()
        .map(|j| {
            let mut row = RowTally { weights: vec![0.0; sites.len()], owned: Vec::new(), excluded: 0 };
            let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
            rng.set_stream(j as u64);
            let mut nearest = Vec::with_capacity(4);
            for i in 0..res {
                nearest.clear();
                match &exact {
                    Some((pts, hx, hy)) => {
                        let cx = (2 * i as i128 + 1) * hx;
                        let cy = (2 * j as i128 + 1) * hy;
                        let mut best = i128::MAX;
                        for (k, s) in pts.iter().enumerate() {
                            let d = (s.x - cx).abs() + (s.y - cy).abs();
                            if d < best {
                                best = d;
                                nearest.clear();
                            }
                            if d == best {
                                nearest.push(k);
                            }
                        }
                    }
                    None => {
                        let (ox, oy) = if spec.jitter { (rng.gen::<f64>(), rng.gen::<f64>()) } else { (0.5, 0.5) };
                        let cx = (i as f64 + ox) * p / res as f64;
                        let cy = (j as f64 + oy) * q / res as f64;
                        let mut best = f64::INFINITY;
                        for (k, (sx, sy)) in fsites.iter().enumerate() {
                            let d = (sx - cx).abs() + (sy - cy).abs();
                            if d < best - 1e-12 * (p + q) {
                                best = d;
                                nearest.clear();
                                nearest.push(k);
                            } else if (d - best).abs() <= 1e-12 * (p + q) {
                                nearest.push(k);
                            }
                        }
                    }
                }
                let before = target.map(|t| row.weights[t]);
                if !resolve(&nearest, sites, spec.tie_rule, &mut row.weights) {
                    row.excluded += 1;
                }
                if let Some(t) = target {
                    row.owned.push(row.weights[t] > before.unwrap_or(0.0));
                }
            }
            row
        })
        .collect()
}

/// Estimated area of the cell of `sites[index]`, from the nearest site of
/// every lattice cell's centre. The error bound is four times the perimeter
/// estimate times the larger lattice spacing.
pub fn sampled_area(arena: &Arena, sites: &[LabeledSite], index: usize, spec: &SampleSpec) -> Result<AreaEstimate, OracleError> {
    spec.check()?;
    if index >= sites.len() {
        return Err(OracleError::SiteIndex { index, len: sites.len() });
    }
    check_distinct(&sites.iter().map(|s| &s.point).collect::<Vec<_>>())?;
    let rows = tally(arena, sites, Some(index), spec);
    let res = spec.resolution as f64;
    let (p, q) = (f64_of(arena.p()), f64_of(arena.q()));
    let (hx, hy) = (p / res, q / res);
    let count: f64 = rows.iter().map(|r| r.weights[index]).sum();
    let mut perimeter = 0.0;
    for (j, row) in rows.iter().enumerate() {
        perimeter += row.owned.windows(2).filter(|w| w[0] != w[1]).count() as f64 * hy;
        if let Some(next) = rows.get(j + 1) {
            perimeter += row.owned.iter().zip(&next.owned).filter(|(a, b)| a != b).count() as f64 * hx;
        }
    }
    Ok(AreaEstimate {
        value: count * hx * hy,
        error_bound: 4.0 * perimeter.max(hx.max(hy)) * hx.max(hy),
        excluded: rows.iter().map(|r| r.excluded).sum(),
    })
}

/// Estimated area of every site's cell.
pub fn sampled_areas(arena: &Arena, sites: &[LabeledSite], spec: &SampleSpec) -> Result<Vec<f64>, OracleError> {
    spec.check()?;
    check_distinct(&sites.iter().map(|s| &s.point).collect::<Vec<_>>())?;
    let rows = tally(arena, sites, None, spec);
    let res = spec.resolution as f64;
    let cell = f64_of(arena.p()) * f64_of(arena.q()) / (res * res);
    Ok((0..sites.len()).map(|k| rows.iter().map(|r| r.weights[k]).sum::<f64>() * cell).collect())
}
