//! Nested maximin search over box-constrained scalars.
//!
//! The rate expressions in [`crate::gaussian`] are maxima (or max-min
//! nestings) of smooth terms over one to three bounded parameters. Gradient
//! methods handle the `min{}` kinks poorly; at these dimensions an exhaustive
//! coarse grid followed by local window refinement gives certifiable coverage
//! and is fast enough to sweep hundreds of channel configurations.
//!
//! Grid points that fail the feasibility predicate are skipped, never
//! projected. Ties between equal-valued maximizers are broken toward the
//! lexicographically smallest parameter vector, so results are reproducible
//! and independent of evaluation order.

use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

/// Resolution and refinement policy for the grid search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    /// Grid points per axis in every scan round.
    pub coarse_points: usize,
    /// Number of local refinement rounds after the coarse scan.
    pub refine_rounds: usize,
    /// Window shrink factor applied per refinement round.
    pub refine_shrink: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            coarse_points: 101,
            refine_rounds: 3,
            refine_shrink: 0.1,
        }
    }
}

impl GridSpec {
    pub fn new(coarse_points: usize, refine_rounds: usize, refine_shrink: f64) -> Result<Self> {
        let spec = Self {
            coarse_points,
            refine_rounds,
            refine_shrink,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.coarse_points < 3 {
            return Err(Error::invalid("coarse_points", "must be at least 3"));
        }
        if !(self.refine_shrink > 0.0 && self.refine_shrink < 1.0) {
            return Err(Error::invalid("refine_shrink", "must lie in (0, 1)"));
        }
        Ok(())
    }

    /// Grid pitch on `[lo, hi]` after all refinement rounds.
    pub fn final_pitch(&self, lo: f64, hi: f64) -> f64 {
        (hi - lo) * self.refine_shrink.powi(self.refine_rounds as i32)
            / (self.coarse_points - 1) as f64
    }
}

/// Best feasible point found by a grid search, with diagnostics.
#[derive(Debug, Clone)]
pub struct Optimum {
    /// Objective value at `point`; re-evaluating the objective there
    /// reproduces this value bit-exactly.
    pub value: f64,
    /// Maximizing parameter vector (outer axes first for [`maximin`]).
    pub point: Vec<f64>,
    /// Number of objective calls, including tolerance probes.
    pub evaluations: u64,
    /// Uncertainty of `value`, estimated from the local slope at the final
    /// grid pitch. Zero for objectives flat around the maximizer.
    pub tolerance: f64,
    /// Final grid pitch per axis.
    pub final_pitch: Vec<f64>,
}

fn validate_boxes(boxes: &[(f64, f64)]) -> Result<()> {
    if boxes.is_empty() {
        return Err(Error::invalid("boxes", "must not be empty"));
    }
    for &(lo, hi) in boxes {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::invalid(
                "boxes",
                format!("bad interval [{lo}, {hi}]"),
            ));
        }
    }
    Ok(())
}

fn axis_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn decode(mut flat: usize, grids: &[Vec<f64>], point: &mut [f64]) {
    for axis in (0..grids.len()).rev() {
        let n = grids[axis].len();
        point[axis] = grids[axis][flat % n];
        flat /= n;
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// Shrink each search window around `center`, clipped to the original box.
fn refine_boxes(
    windows: &[(f64, f64)],
    boxes: &[(f64, f64)],
    center: &[f64],
    shrink: f64,
) -> Vec<(f64, f64)> {
    windows
        .iter()
        .zip(boxes)
        .zip(center)
        .map(|((&(wlo, whi), &(blo, bhi)), &c)| {
            let half = (whi - wlo) * shrink / 2.0;
            ((c - half).max(blo), (c + half).min(bhi))
        })
        .collect()
}

struct Best {
    value: f64,
    point: Vec<f64>,
}

impl Best {
    fn offer(&mut self, value: f64, point: &[f64]) {
        if value > self.value || (value == self.value && lex_less(point, &self.point)) {
            self.value = value;
            self.point = point.to_vec();
        }
    }
}

/// Maximize `objective` over the Cartesian product of `boxes`, skipping
/// points where `feasible` is false.
///
/// Runs one coarse scan plus `grid.refine_rounds` window refinements around
/// the incumbent. The incumbent is carried across rounds, so the returned
/// value never decreases as the search narrows. Errors if no grid point is
/// feasible, or if the objective is non-finite at a feasible point.
pub fn maximize<F, G>(
    objective: F,
    boxes: &[(f64, f64)],
    feasible: G,
    grid: &GridSpec,
) -> Result<Optimum>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> bool,
{
    grid.validate()?;
    validate_boxes(boxes)?;

    let dim = boxes.len();
    let mut windows = boxes.to_vec();
    let mut best: Option<Best> = None;
    let mut evaluations: u64 = 0;
    let mut point = vec![0.0; dim];

    for round in 0..=grid.refine_rounds {
        let grids: Vec<Vec<f64>> = windows
            .iter()
            .map(|&(lo, hi)| axis_points(lo, hi, grid.coarse_points))
            .collect();
        let total: usize = grids.iter().map(Vec::len).product();

        for flat in 0..total {
            decode(flat, &grids, &mut point);
            if !feasible(&point) {
                continue;
            }
            let value = objective(&point);
            evaluations += 1;
            if !value.is_finite() {
                return Err(Error::NonFiniteObjective {
                    point: point.clone(),
                });
            }
            match &mut best {
                Some(b) => b.offer(value, &point),
                None => {
                    best = Some(Best {
                        value,
                        point: point.clone(),
                    })
                }
            }
        }

        let Some(b) = &best else {
            return Err(Error::EmptyFeasibleSet);
        };
        if round < grid.refine_rounds {
            windows = refine_boxes(&windows, boxes, &b.point, grid.refine_shrink);
        }
    }

    let best = best.expect("incumbent exists after a successful scan");
    let final_pitch: Vec<f64> = windows
        .iter()
        .map(|&(lo, hi)| (hi - lo) / (grid.coarse_points - 1) as f64)
        .collect();

    // Local slope at the final pitch bounds how far the true maximum can sit
    // above the grid value.
    let mut tolerance = 0.0;
    for axis in 0..dim {
        let pitch = final_pitch[axis];
        if pitch <= 0.0 {
            continue;
        }
        let mut delta: f64 = 0.0;
        for sign in [-1.0, 1.0] {
            let mut probe = best.point.clone();
            probe[axis] = (probe[axis] + sign * pitch).clamp(boxes[axis].0, boxes[axis].1);
            if probe[axis] == best.point[axis] || !feasible(&probe) {
                continue;
            }
            let value = objective(&probe);
            evaluations += 1;
            if value.is_finite() {
                delta = delta.max((best.value - value).abs());
            }
        }
        tolerance += delta;
    }

    Ok(Optimum {
        value: best.value,
        point: best.point,
        evaluations,
        tolerance,
        final_pitch,
    })
}

struct MaximinCandidate {
    value: f64,
    outer: Vec<f64>,
    inner: Optimum,
    term1_calls: u64,
}

/// Resolve `max_outer min{ term1(outer), max_inner term2(outer, inner) }`.
///
/// The inner maximization is re-solved from scratch for every outer grid
/// point, so the quantifier nesting is respected exactly. Refinement applies
/// to the outer axes. Outer points whose inner feasible set is empty score
/// negative infinity and are never selected; the returned point concatenates
/// the outer argmax with the inner argmax found there.
pub fn maximin<F1, F2, G>(
    term1: F1,
    term2: F2,
    outer_boxes: &[(f64, f64)],
    inner_boxes: &[(f64, f64)],
    feasible: G,
    grid: &GridSpec,
) -> Result<Optimum>
where
    F1: Fn(&[f64]) -> f64 + Sync,
    F2: Fn(&[f64], &[f64]) -> f64 + Sync,
    G: Fn(&[f64], &[f64]) -> bool + Sync,
{
    grid.validate()?;
    validate_boxes(outer_boxes)?;
    validate_boxes(inner_boxes)?;

    let evaluate = |outer: &[f64]| -> Result<Option<MaximinCandidate>> {
        let t1 = term1(outer);
        if !t1.is_finite() {
            return Err(Error::NonFiniteObjective {
                point: outer.to_vec(),
            });
        }
        match maximize(
            |inner| term2(outer, inner),
            inner_boxes,
            |inner| feasible(outer, inner),
            grid,
        ) {
            Ok(inner) => Ok(Some(MaximinCandidate {
                value: t1.min(inner.value),
                outer: outer.to_vec(),
                inner,
                term1_calls: 1,
            })),
            Err(Error::EmptyFeasibleSet) => Ok(None),
            Err(e) => Err(e),
        }
    };

    let dim = outer_boxes.len();
    let mut windows = outer_boxes.to_vec();
    let mut best: Option<MaximinCandidate> = None;
    let mut evaluations: u64 = 0;

    for round in 0..=grid.refine_rounds {
        let grids: Vec<Vec<f64>> = windows
            .iter()
            .map(|&(lo, hi)| axis_points(lo, hi, grid.coarse_points))
            .collect();
        let total: usize = grids.iter().map(Vec::len).product();

        // Outer points are independent; results are merged in index order so
        // the outcome does not depend on scheduling.
        let candidates: Vec<Result<Option<MaximinCandidate>>> = (0..total)
            .into_par_iter()
            .map_init(
                || vec![0.0; dim],
                |outer, flat| {
                    decode(flat, &grids, outer);
                    evaluate(outer)
                },
            )
            .collect();

        for candidate in candidates {
            let Some(cand) = candidate? else { continue };
            evaluations += cand.term1_calls + cand.inner.evaluations;
            match &mut best {
                Some(b)
                    if cand.value > b.value
                        || (cand.value == b.value && lex_less(&cand.outer, &b.outer)) =>
                {
                    *b = cand;
                }
                Some(_) => {}
                None => best = Some(cand),
            }
        }

        let Some(b) = &best else {
            return Err(Error::EmptyFeasibleSet);
        };
        if round < grid.refine_rounds {
            windows = refine_boxes(&windows, outer_boxes, &b.outer, grid.refine_shrink);
        }
    }

    let best = best.expect("incumbent exists after a successful scan");
    let outer_pitch: Vec<f64> = windows
        .iter()
        .map(|&(lo, hi)| (hi - lo) / (grid.coarse_points - 1) as f64)
        .collect();

    let mut tolerance = best.inner.tolerance;
    for axis in 0..dim {
        let pitch = outer_pitch[axis];
        if pitch <= 0.0 {
            continue;
        }
        let mut delta: f64 = 0.0;
        for sign in [-1.0, 1.0] {
            let mut probe = best.outer.clone();
            probe[axis] =
                (probe[axis] + sign * pitch).clamp(outer_boxes[axis].0, outer_boxes[axis].1);
            if probe[axis] == best.outer[axis] {
                continue;
            }
            if let Some(cand) = evaluate(&probe)? {
                evaluations += cand.term1_calls + cand.inner.evaluations;
                delta = delta.max((best.value - cand.value).abs());
            }
        }
        tolerance += delta;
    }

    let mut point = best.outer;
    point.extend_from_slice(&best.inner.point);
    let mut final_pitch = outer_pitch;
    final_pitch.extend_from_slice(&best.inner.final_pitch);

    Ok(Optimum {
        value: best.value,
        point,
        evaluations,
        tolerance,
        final_pitch,
    })
}
