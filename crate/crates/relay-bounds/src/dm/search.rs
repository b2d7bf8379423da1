//! Bound evaluation on factorized distributions and randomized search.

use super::joint::{
    build_joint_lower, build_joint_upper, lower_axis as la, upper_axis as ua, LowerFactorization,
    SourceDist, UpperFactorization,
};
use super::{is_degraded, DiscreteChannelSpec};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Coordinate-ascent step schedule on the factor simplices.
const STEP_SCHEDULE: [f64; 4] = [0.5, 0.25, 0.1, 0.05];
const IMPROVE_EPS: f64 = 1e-12;
const MAX_SWEEPS_PER_STEP: usize = 200;

/// Achievable-rate value of a factorization:
/// `min{ I(X1;Y2|S,U1), I(X1,U1,U2;Y3) - I(U2;S|U1) }`.
///
/// The second term can be negative for poor factorizations; the raw value is
/// returned, clamping happens only in [`dm_search`] results.
pub fn dm_lower_eval(spec: &DiscreteChannelSpec, f: &LowerFactorization) -> Result<f64> {
    let j = build_joint_lower(spec, f)?;
    let relay = j.mutual_information(&[la::X1], &[la::Y2], &[la::S, la::U1])?;
    let dest = j.mutual_information(&[la::X1, la::U1, la::U2], &[la::Y3], &[])?
        - j.mutual_information(&[la::U2], &[la::S], &[la::U1])?;
    Ok(relay.min(dest))
}

/// Converse value of a factorization:
/// `min{ I(X1;Y2,Y3|S,X2), I(X1,X2;Y3|S) - I(X1;S|Y3) }`;
/// with `degraded` the first term becomes `I(X1;Y2|S,X2)`.
pub fn dm_upper_eval(
    spec: &DiscreteChannelSpec,
    f: &UpperFactorization,
    degraded: bool,
) -> Result<f64> {
    let j = build_joint_upper(spec, f)?;
    let relay = if degraded {
        j.mutual_information(&[ua::X1], &[ua::Y2], &[ua::S, ua::X2])?
    } else {
        j.mutual_information(&[ua::X1], &[ua::Y2, ua::Y3], &[ua::S, ua::X2])?
    };
    let dest = j.mutual_information(&[ua::X1, ua::X2], &[ua::Y3], &[ua::S])?
        - j.mutual_information(&[ua::X1], &[ua::S], &[ua::Y3])?;
    Ok(relay.min(dest))
}

/// All-informed baseline: `min{ I(X1;Y2,Y3|S,X2), I(X1,X2;Y3|S) }` under the
/// measure that may condition the source input on the state.
pub fn dm_trivial_upper_eval(spec: &DiscreteChannelSpec, f: &UpperFactorization) -> Result<f64> {
    let j = build_joint_upper(spec, f)?;
    let relay = j.mutual_information(&[ua::X1], &[ua::Y2, ua::Y3], &[ua::S, ua::X2])?;
    let dest = j.mutual_information(&[ua::X1, ua::X2], &[ua::Y3], &[ua::S])?;
    Ok(relay.min(dest))
}

/// Which bound the search maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Lower,
    Upper,
    TrivialUpper,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub mode: SearchMode,
    /// Number of random restarts; each hill-climbs to a local maximum.
    pub restarts: u32,
    /// Auxiliary alphabet sizes (lower mode only). The sufficient sizes from
    /// [`LowerFactorization::max_aux_sizes`] make exhaustive search
    /// infeasible; small sizes keep the search tractable at the cost of
    /// possibly undershooting the true maximum.
    pub aux_u1: usize,
    pub aux_u2: usize,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(mode: SearchMode) -> Self {
        Self {
            mode,
            restarts: 20,
            aux_u1: 2,
            aux_u2: 2,
            seed: 1,
        }
    }
}

/// Best factorization found by [`dm_search`].
#[derive(Debug, Clone)]
pub enum BestFactorization {
    Lower(LowerFactorization),
    Upper(UpperFactorization),
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Best bound value, clamped at 0 (rate 0 is always achievable).
    pub rate: f64,
    /// Unclamped best objective value.
    pub raw_rate: f64,
    pub factorization: BestFactorization,
    pub evaluations: u64,
    pub restarts: u32,
}

/// Maximize the selected bound by coordinate-wise hill climbing over the
/// factor simplices, restarted from `restarts` random draws.
///
/// Each candidate move adds a step to one coordinate of one kernel slice and
/// re-normalizes that slice. Deterministic given the seed: restart r uses its
/// own generator derived from `(seed, r)`, so results do not depend on
/// scheduling. The result is a certified lower estimate of the true maximum
/// (the search is heuristic).
pub fn dm_search(spec: &DiscreteChannelSpec, config: &SearchConfig) -> Result<SearchOutcome> {
    spec.validate()?;
    if config.restarts == 0 {
        return Err(Error::ZeroBudget);
    }
    let degraded = is_degraded(spec);
    if config.mode == SearchMode::Lower {
        let (max_u1, max_u2) = LowerFactorization::max_aux_sizes(spec);
        if config.aux_u1 == 0 || config.aux_u1 > max_u1 {
            return Err(Error::invalid("aux_u1", format!("must be in 1..={max_u1}")));
        }
        if config.aux_u2 == 0 || config.aux_u2 > max_u2 {
            return Err(Error::invalid("aux_u2", format!("must be in 1..={max_u2}")));
        }
    }

    type RestartRun = (f64, Vec<Vec<f64>>, u64);
    let runs: Vec<Result<RestartRun>> = (0..config.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = restart_rng(config.seed, restart);
            let mut slices = random_slices(spec, config, &mut rng);
            let mut evaluations = 0u64;
            let value = hill_climb(spec, config, degraded, &mut slices, &mut evaluations)?;
            Ok((value, slices, evaluations))
        })
        .collect();

    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    let mut evaluations = 0u64;
    for run in runs {
        let (value, slices, evals) = run?;
        evaluations += evals;
        match &best {
            Some((v, _)) if value <= *v => {}
            _ => best = Some((value, slices)),
        }
    }
    let (raw_rate, slices) = best.expect("at least one restart ran");

    let factorization = match config.mode {
        SearchMode::Lower => BestFactorization::Lower(assemble_lower(spec, config, &slices)),
        SearchMode::Upper | SearchMode::TrivialUpper => {
            BestFactorization::Upper(assemble_upper(spec, config.mode, &slices))
        }
    };
    Ok(SearchOutcome {
        rate: raw_rate.max(0.0),
        raw_rate,
        factorization,
        evaluations,
        restarts: config.restarts,
    })
}

fn restart_rng(seed: u64, restart: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (restart as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    // Exponential weights normalized: uniform on the simplex.
    let mut v: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let sum: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= sum);
    v
}

/// Slice layout per mode; the hill climber treats the factorization as a
/// flat list of simplex slices.
fn random_slices(
    spec: &DiscreteChannelSpec,
    config: &SearchConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<f64>> {
    let n = &spec.sizes;
    let mut slices = Vec::new();
    match config.mode {
        SearchMode::Lower => {
            slices.push(random_simplex(rng, config.aux_u1));
            for _ in 0..config.aux_u1 {
                slices.push(random_simplex(rng, n.x1));
            }
            for _ in 0..config.aux_u1 * n.s {
                slices.push(random_simplex(rng, config.aux_u2));
            }
            for _ in 0..config.aux_u1 * config.aux_u2 * n.s {
                slices.push(random_simplex(rng, n.x2));
            }
        }
        SearchMode::Upper => {
            slices.push(random_simplex(rng, n.x1));
            for _ in 0..n.x1 * n.s {
                slices.push(random_simplex(rng, n.x2));
            }
        }
        SearchMode::TrivialUpper => {
            for _ in 0..n.s {
                slices.push(random_simplex(rng, n.x1));
            }
            for _ in 0..n.x1 * n.s {
                slices.push(random_simplex(rng, n.x2));
            }
        }
    }
    slices
}

fn assemble_lower(
    spec: &DiscreteChannelSpec,
    config: &SearchConfig,
    slices: &[Vec<f64>],
) -> LowerFactorization {
    let n = &spec.sizes;
    let mut it = slices.iter();
    let p_u1 = it.next().unwrap().clone();
    let mut p_x1_given_u1 = Vec::with_capacity(config.aux_u1 * n.x1);
    for _ in 0..config.aux_u1 {
        p_x1_given_u1.extend_from_slice(it.next().unwrap());
    }
    let mut p_u2_given_u1_s = Vec::with_capacity(config.aux_u1 * n.s * config.aux_u2);
    for _ in 0..config.aux_u1 * n.s {
        p_u2_given_u1_s.extend_from_slice(it.next().unwrap());
    }
    let mut p_x2_given_u1_u2_s = Vec::with_capacity(config.aux_u1 * config.aux_u2 * n.s * n.x2);
    for _ in 0..config.aux_u1 * config.aux_u2 * n.s {
        p_x2_given_u1_u2_s.extend_from_slice(it.next().unwrap());
    }
    LowerFactorization {
        u1: config.aux_u1,
        u2: config.aux_u2,
        p_u1,
        p_x1_given_u1,
        p_u2_given_u1_s,
        p_x2_given_u1_u2_s,
    }
}

fn assemble_upper(
    spec: &DiscreteChannelSpec,
    mode: SearchMode,
    slices: &[Vec<f64>],
) -> UpperFactorization {
    let n = &spec.sizes;
    let mut it = slices.iter();
    let x1 = match mode {
        SearchMode::Upper => SourceDist::Unconditional(it.next().unwrap().clone()),
        SearchMode::TrivialUpper => {
            let mut v = Vec::with_capacity(n.s * n.x1);
            for _ in 0..n.s {
                v.extend_from_slice(it.next().unwrap());
            }
            SourceDist::PerState(v)
        }
        SearchMode::Lower => unreachable!("lower mode uses assemble_lower"),
    };
    let mut p_x2_given_x1_s = Vec::with_capacity(n.x1 * n.s * n.x2);
    for _ in 0..n.x1 * n.s {
        p_x2_given_x1_s.extend_from_slice(it.next().unwrap());
    }
    UpperFactorization {
        x1,
        p_x2_given_x1_s,
    }
}

fn evaluate(
    spec: &DiscreteChannelSpec,
    config: &SearchConfig,
    degraded: bool,
    slices: &[Vec<f64>],
) -> Result<f64> {
    match config.mode {
        SearchMode::Lower => dm_lower_eval(spec, &assemble_lower(spec, config, slices)),
        SearchMode::Upper => dm_upper_eval(
            spec,
            &assemble_upper(spec, SearchMode::Upper, slices),
            degraded,
        ),
        SearchMode::TrivialUpper => dm_trivial_upper_eval(
            spec,
            &assemble_upper(spec, SearchMode::TrivialUpper, slices),
        ),
    }
}

fn hill_climb(
    spec: &DiscreteChannelSpec,
    config: &SearchConfig,
    degraded: bool,
    slices: &mut [Vec<f64>],
    evaluations: &mut u64,
) -> Result<f64> {
    let mut value = evaluate(spec, config, degraded, slices)?;
    *evaluations += 1;
    for &step in &STEP_SCHEDULE {
        for _sweep in 0..MAX_SWEEPS_PER_STEP {
            let mut improved = false;
            for si in 0..slices.len() {
                for ci in 0..slices[si].len() {
                    let saved = slices[si].clone();
                    slices[si][ci] += step;
                    let sum: f64 = slices[si].iter().sum();
                    slices[si].iter_mut().for_each(|v| *v /= sum);
                    let candidate = evaluate(spec, config, degraded, slices)?;
                    *evaluations += 1;
                    if candidate > value + IMPROVE_EPS {
                        value = candidate;
                        improved = true;
                    } else {
                        slices[si] = saved;
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }
    Ok(value)
}
