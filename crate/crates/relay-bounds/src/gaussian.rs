//! Capacity bounds for the additive Gaussian relay channel whose interference
//! (state) sequence is known non-causally at the relay only.
//!
//! Channel model, per symbol: the relay observes `Y2 = X1 + S + Z2` and the
//! destination observes `Y3 = X1 + X2 + S + Z3`, where `X1` is the source
//! input with power `P1`, `X2` the relay input with power `P2`, `S` the
//! interference with variance `Q`, and `Z2`, `Z3` noises with variances `N2`,
//! `N3`. In the physically degraded variant `Y3 = X2 + Y2 + Z'3` with
//! `N'3 = N3 - N2`.
//!
//! The achievable (lower-bound) rate combines decode-and-forward relaying
//! with relay codeword splitting: a fraction `1-θ` of the relay power is
//! spent coherently with the source, the remaining `θ` on a precoding part
//! correlated with the interference (correlation `ρ'2s ≤ 0`). The upper
//! bound constrains jointly Gaussian inputs through the covariance
//! feasibility `ρ12² + ρ2s² ≤ 1`. All rates are in bits per channel use
//! (base-2 logarithms), powers and variances are linear.

use crate::error::{Error, Result};
use crate::optim::{maximin, maximize, GridSpec, Optimum};
use serde::{Deserialize, Serialize};

/// Tolerance admitted on the covariance feasibility boundary, so that grid
/// points and user inputs sitting on `ρ12² + ρ2s² = 1` up to rounding are
/// accepted.
const FEASIBILITY_TOL: f64 = 1e-9;

/// Default ratio defining "effectively infinite" interference variance for
/// [`extreme_cases`]: `Q >= ratio * max(P1, P2, N2, N3)`.
pub const STRONG_STATE_RATIO: f64 = 1e6;

/// `½·log₂(1 + snr)`, the Gaussian point-to-point rate.
#[inline]
pub fn capacity_awgn(snr: f64) -> f64 {
    0.5 * snr.ln_1p() / std::f64::consts::LN_2
}

/// The five channel constants plus the degraded/general model switch.
///
/// The degraded model presumes `N3 >= N2`; this is not enforced because the
/// rate expressions stay well defined (and are routinely evaluated) outside
/// that regime, e.g. at the low-SNR end of a sweep in which `N2` varies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Source power `P1 >= 0`.
    pub p1: f64,
    /// Relay power `P2 >= 0`.
    pub p2: f64,
    /// Interference variance `Q >= 0`.
    pub q: f64,
    /// Relay noise variance `N2 > 0`.
    pub n2: f64,
    /// Destination noise variance `N3 > 0`.
    pub n3: f64,
    /// Select the physically degraded variant.
    pub degraded: bool,
}

impl ChannelParams {
    pub fn new(p1: f64, p2: f64, q: f64, n2: f64, n3: f64, degraded: bool) -> Result<Self> {
        let ch = Self {
            p1,
            p2,
            q,
            n2,
            n3,
            degraded,
        };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("p1", self.p1),
            ("p2", self.p2),
            ("q", self.q),
            ("n2", self.n2),
            ("n3", self.n3),
        ] {
            if !value.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        if self.p1 < 0.0 {
            return Err(Error::invalid("p1", "power must be non-negative"));
        }
        if self.p2 < 0.0 {
            return Err(Error::invalid("p2", "power must be non-negative"));
        }
        if self.q < 0.0 {
            return Err(Error::invalid("q", "variance must be non-negative"));
        }
        if self.n2 <= 0.0 {
            return Err(Error::invalid("n2", "noise variance must be positive"));
        }
        if self.n3 <= 0.0 {
            return Err(Error::invalid("n3", "noise variance must be positive"));
        }
        Ok(())
    }
}

/// Parameters of the achievable-rate maximization: source/relay coherence
/// `ρ'12 ∈ [0,1]`, relay power split `θ ∈ [0,1]`, and precoding correlation
/// `ρ'2s ∈ [-1,0]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerParams {
    pub rho12: f64,
    pub theta: f64,
    pub rho2s: f64,
}

impl LowerParams {
    pub fn new(rho12: f64, theta: f64, rho2s: f64) -> Result<Self> {
        check_box("rho12", rho12, 0.0, 1.0)?;
        check_box("theta", theta, 0.0, 1.0)?;
        check_box("rho2s", rho2s, -1.0, 0.0)?;
        Ok(Self {
            rho12,
            theta,
            rho2s,
        })
    }

    /// Covariance between the source input and the coherent relay part,
    /// `σ12 = ρ'12·√((1-θ)·P1·P2)`.
    pub fn sigma12(&self, ch: &ChannelParams) -> f64 {
        self.rho12 * ((1.0 - self.theta) * ch.p1 * ch.p2).sqrt()
    }

    /// Covariance between the precoding relay part and the interference,
    /// `σ2s = ρ'2s·√(θ·P2·Q)`.
    pub fn sigma2s(&self, ch: &ChannelParams) -> f64 {
        self.rho2s * (self.theta * ch.p2 * ch.q).sqrt()
    }
}

/// Parameters of the upper-bound maximization: `ρ12 ∈ [0,1]`, `ρ2s ∈ [-1,0]`
/// with the covariance feasibility `ρ12² + ρ2s² <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperParams {
    pub rho12: f64,
    pub rho2s: f64,
}

impl UpperParams {
    pub fn new(rho12: f64, rho2s: f64) -> Result<Self> {
        check_box("rho12", rho12, 0.0, 1.0)?;
        check_box("rho2s", rho2s, -1.0, 0.0)?;
        if !upper_feasible(rho12, rho2s) {
            return Err(Error::invalid(
                "rho12/rho2s",
                format!("correlation pair ({rho12}, {rho2s}) violates rho12^2 + rho2s^2 <= 1"),
            ));
        }
        Ok(Self { rho12, rho2s })
    }
}

fn check_box(name: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !value.is_finite() || value < lo || value > hi {
        return Err(Error::invalid(
            name,
            format!("{value} outside [{lo}, {hi}]"),
        ));
    }
    Ok(())
}

fn upper_feasible(rho12: f64, rho2s: f64) -> bool {
    let sum = rho12 * rho12 + rho2s * rho2s;
    if sum > 1.0 + FEASIBILITY_TOL {
        return false;
    }
    // The corner rho2s^2 = 1 admits only rho12 = 0.
    rho2s > -1.0 || rho12 == 0.0
}

/// A maximized bound value with its maximizer and search diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct BoundResult {
    /// Bound value in bits per channel use.
    pub rate: f64,
    /// Maximizing parameter vector; the ordering is documented per operation.
    pub argmax: Vec<f64>,
    /// Objective evaluations spent by the search.
    pub evaluations: u64,
    /// Value uncertainty reported by the grid search.
    pub grid_tolerance: f64,
}

impl From<Optimum> for BoundResult {
    fn from(opt: Optimum) -> Self {
        Self {
            rate: opt.value,
            argmax: opt.point,
            evaluations: opt.evaluations,
            grid_tolerance: opt.tolerance,
        }
    }
}

// ---------------------------------------------------------------------------
// Achievable rate (decode-and-forward with relay precoding)
// ---------------------------------------------------------------------------

fn lower_term1_raw(ch: &ChannelParams, rho12: f64) -> f64 {
    capacity_awgn(ch.p1 * (1.0 - rho12 * rho12) / ch.n2)
}

fn lower_term2_raw(ch: &ChannelParams, rho12: f64, theta: f64, rho2s: f64) -> f64 {
    let theta_bar = 1.0 - theta;
    let coherent = ch.p1 + theta_bar * ch.p2 + 2.0 * rho12 * (theta_bar * ch.p1 * ch.p2).sqrt();
    let residual = theta * ch.p2 + ch.q + ch.n3 + 2.0 * rho2s * (theta * ch.p2 * ch.q).sqrt();
    let precoded = theta * ch.p2 * (1.0 - rho2s * rho2s) / ch.n3;
    capacity_awgn(coherent / residual) + capacity_awgn(precoded)
}

/// Relay-decoding term of the achievable rate,
/// `½·log₂(1 + P1(1-ρ'12²)/N2)`.
pub fn lower_term1(ch: &ChannelParams, rho12: f64) -> Result<f64> {
    ch.validate()?;
    check_box("rho12", rho12, 0.0, 1.0)?;
    Ok(lower_term1_raw(ch, rho12))
}

/// Destination term of the achievable rate,
/// `½·log₂(1 + (P1 + (1-θ)P2 + 2ρ'12·√((1-θ)P1P2)) / (θP2 + Q + N3 + 2ρ'2s·√(θP2Q)))
///  + ½·log₂(1 + θP2(1-ρ'2s²)/N3)`.
pub fn lower_term2(ch: &ChannelParams, p: &LowerParams) -> Result<f64> {
    ch.validate()?;
    let residual = p.theta * ch.p2 + ch.q + ch.n3 + 2.0 * p.rho2s * (p.theta * ch.p2 * ch.q).sqrt();
    if residual <= 0.0 {
        // (√(θP2)+ρ'2s√Q)² + (1-ρ'2s²)Q + N3 >= N3 > 0, so this cannot happen.
        return Err(Error::Internal(format!(
            "non-positive interference-plus-noise power {residual}"
        )));
    }
    Ok(lower_term2_raw(ch, p.rho12, p.theta, p.rho2s))
}

/// Precoding coefficient used by the relay against the known interference:
///
/// `α = [θP2(1-ρ'2s²) / (θP2(1-ρ'2s²)+N3)] · (1 + ρ'2s·√(θP2/Q)) - ρ'2s·√(θP2/Q)`.
///
/// With `ρ'2s = 0` and `θ = 1` this reduces to the classic coefficient
/// `P2/(P2+N3)`. Exposed for diagnostics; the rate expressions already
/// incorporate it. Errors if `Q = 0`, where precoding against the
/// interference is undefined.
pub fn alpha_opt(ch: &ChannelParams, theta: f64, rho2s: f64) -> Result<f64> {
    ch.validate()?;
    check_box("theta", theta, 0.0, 1.0)?;
    check_box("rho2s", rho2s, -1.0, 0.0)?;
    if ch.q == 0.0 {
        return Err(Error::invalid(
            "q",
            "precoding coefficient is undefined without interference (q = 0)",
        ));
    }
    let signal = theta * ch.p2 * (1.0 - rho2s * rho2s);
    let scaled = rho2s * (theta * ch.p2 / ch.q).sqrt();
    Ok(signal / (signal + ch.n3) * (1.0 + scaled) - scaled)
}

/// Achievable rate: `max over ρ'12 of min{ lower_term1, max over (θ, ρ'2s)
/// of lower_term2 }`, resolving the inner maximization before the min.
///
/// `argmax` is `[ρ'12, θ, ρ'2s]`.
pub fn lower_bound(ch: &ChannelParams, grid: &GridSpec) -> Result<BoundResult> {
    ch.validate()?;
    let opt = maximin(
        |outer| lower_term1_raw(ch, outer[0]),
        |outer, inner| lower_term2_raw(ch, outer[0], inner[0], inner[1]),
        &[(0.0, 1.0)],
        &[(0.0, 1.0), (-1.0, 0.0)],
        |_, _| true,
        grid,
    )?;
    Ok(opt.into())
}

// ---------------------------------------------------------------------------
// Upper bound (jointly Gaussian converse evaluation)
// ---------------------------------------------------------------------------

fn upper_term1_general_raw(ch: &ChannelParams, rho12: f64, rho2s: f64) -> f64 {
    let r12sq = rho12 * rho12;
    let den = 1.0 - rho2s * rho2s;
    // ρ12²/(1-ρ2s²) extends continuously to 0 along the feasible set when
    // ρ12 = 0; tiny negative factors from boundary rounding clamp to 0.
    let ratio = if r12sq == 0.0 { 0.0 } else { r12sq / den };
    let factor = (1.0 - ratio).max(0.0);
    capacity_awgn(ch.p1 * factor * (1.0 / ch.n2 + 1.0 / ch.n3))
}

fn upper_term1_degraded_raw(ch: &ChannelParams, rho12: f64, rho2s: f64) -> f64 {
    let den = 1.0 - rho2s * rho2s;
    if den == 0.0 {
        // Feasibility forces rho12 = 0 here; the continuous extension is P1/N2.
        return capacity_awgn(ch.p1 / ch.n2);
    }
    let slack = (1.0 - rho12 * rho12 - rho2s * rho2s).max(0.0);
    capacity_awgn(ch.p1 * (slack / den) / ch.n2)
}

fn upper_term2_raw(ch: &ChannelParams, rho12: f64, rho2s: f64) -> f64 {
    let slack = (1.0 - rho12 * rho12 - rho2s * rho2s).max(0.0);
    let coherent = (ch.p1.sqrt() + rho12 * ch.p2.sqrt()).powi(2);
    let residual = ch.p2 * slack + (ch.q.sqrt() + rho2s * ch.p2.sqrt()).powi(2) + ch.n3;
    capacity_awgn(coherent / residual) + capacity_awgn(ch.p2 * slack / ch.n3)
}

/// First upper-bound term for the general model,
/// `½·log₂(1 + P1(1 - ρ12²/(1-ρ2s²))(1/N2 + 1/N3))`.
pub fn upper_term1_general(ch: &ChannelParams, up: &UpperParams) -> f64 {
    upper_term1_general_raw(ch, up.rho12, up.rho2s)
}

/// First upper-bound term for the degraded model,
/// `½·log₂(1 + P1(1 - ρ12² - ρ2s²) / (N2(1-ρ2s²)))`.
pub fn upper_term1_degraded(ch: &ChannelParams, up: &UpperParams) -> f64 {
    upper_term1_degraded_raw(ch, up.rho12, up.rho2s)
}

/// Second upper-bound term,
/// `½·log₂(1 + (√P1 + ρ12√P2)² / (P2(1-ρ12²-ρ2s²) + (√Q + ρ2s√P2)² + N3))
///  + ½·log₂(1 + P2(1-ρ12²-ρ2s²)/N3)`.
pub fn upper_term2(ch: &ChannelParams, up: &UpperParams) -> f64 {
    upper_term2_raw(ch, up.rho12, up.rho2s)
}

/// Upper bound: `max over feasible (ρ12, ρ2s) of min{term1, term2}`, where
/// term1 is the general or degraded variant per `ch.degraded` and
/// feasibility is `ρ12² + ρ2s² <= 1`.
///
/// `argmax` is `[ρ12, ρ2s]`.
pub fn upper_bound(ch: &ChannelParams, grid: &GridSpec) -> Result<BoundResult> {
    ch.validate()?;
    let degraded = ch.degraded;
    let opt = maximize(
        |x| {
            let t1 = if degraded {
                upper_term1_degraded_raw(ch, x[0], x[1])
            } else {
                upper_term1_general_raw(ch, x[0], x[1])
            };
            t1.min(upper_term2_raw(ch, x[0], x[1]))
        },
        &[(0.0, 1.0), (-1.0, 0.0)],
        |x| upper_feasible(x[0], x[1]),
        grid,
    )?;
    Ok(opt.into())
}

/// Upper bound for the degraded model in the substituted parameterization
/// `κ = ρ12/√(1-ρ2s²)`, `ρ = ρ2s`, which turns the constrained joint search
/// into an unconstrained max-min nesting:
///
/// `max over κ of min{ ½·log₂(1 + P1(1-κ²)/N2), max over ρ of
/// ½·log₂(1 + P2(1-κ²(1-ρ²)-ρ²)/N3) + ½·log₂(1 + num/den) }` with
/// `num = P1 + κ²(1-ρ²)P2 + 2κ√(1-ρ²)·√(P1P2)` and
/// `den = P2(1-κ²(1-ρ²)) + Q + 2ρ√(P2Q) + N3`.
///
/// Agrees with [`upper_bound`] on degraded channels up to grid resolution.
/// `argmax` is `[κ, ρ]`.
pub fn upper_bound_degraded_equiv(ch: &ChannelParams, grid: &GridSpec) -> Result<BoundResult> {
    ch.validate()?;
    if !ch.degraded {
        return Err(Error::invalid(
            "degraded",
            "the substituted form applies to the degraded model only",
        ));
    }
    let opt = maximin(
        |outer| capacity_awgn(ch.p1 * (1.0 - outer[0] * outer[0]) / ch.n2),
        |outer, inner| {
            let kappa = outer[0];
            let rho = inner[0];
            let coh_frac = kappa * kappa * (1.0 - rho * rho);
            let private = (ch.p2 * (1.0 - coh_frac - rho * rho)).max(0.0);
            let coherent = ch.p1
                + coh_frac * ch.p2
                + 2.0 * kappa * (1.0 - rho * rho).sqrt() * (ch.p1 * ch.p2).sqrt();
            let residual =
                ch.p2 * (1.0 - coh_frac) + ch.q + 2.0 * rho * (ch.p2 * ch.q).sqrt() + ch.n3;
            capacity_awgn(private / ch.n3) + capacity_awgn(coherent / residual)
        },
        &[(0.0, 1.0)],
        &[(-1.0, 0.0)],
        |_, _| true,
        grid,
    )?;
    Ok(opt.into())
}

// ---------------------------------------------------------------------------
// Reference curves
// ---------------------------------------------------------------------------

fn df_bound(
    p1: f64,
    p2: f64,
    n2_eff: f64,
    n3_eff: f64,
    combine: bool,
    grid: &GridSpec,
) -> Result<Optimum> {
    maximize(
        |x| {
            let beta = x[0];
            let relay_snr = if combine {
                p1 * (1.0 - beta * beta) * (1.0 / n2_eff + 1.0 / n3_eff)
            } else {
                p1 * (1.0 - beta * beta) / n2_eff
            };
            let dest_snr = (p1 + p2 + 2.0 * beta * (p1 * p2).sqrt()) / n3_eff;
            capacity_awgn(relay_snr).min(capacity_awgn(dest_snr))
        },
        &[(0.0, 1.0)],
        |_| true,
        grid,
    )
}

/// Loose upper bound obtained by granting the interference to every node,
/// which makes it fully removable: the interference-free cut-set
/// decode-and-forward expression `max over β of min{...}`. The first term
/// carries the `(1/N2 + 1/N3)` combining for the general model and plain
/// `1/N2` for the degraded one.
///
/// `argmax` is `[β]`.
pub fn trivial_upper_bound(ch: &ChannelParams, grid: &GridSpec) -> Result<BoundResult> {
    ch.validate()?;
    Ok(df_bound(ch.p1, ch.p2, ch.n2, ch.n3, !ch.degraded, grid)?.into())
}

/// Baseline rate obtained by treating the interference as extra noise:
/// decode-and-forward on the interference-free channel with noise variances
/// inflated to `N2 + Q` and `N3 + Q`.
///
/// `argmax` is `[β]`.
pub fn trivial_lower_bound(ch: &ChannelParams, grid: &GridSpec) -> Result<BoundResult> {
    ch.validate()?;
    Ok(df_bound(ch.p1, ch.p2, ch.n2 + ch.q, ch.n3 + ch.q, false, grid)?.into())
}

// ---------------------------------------------------------------------------
// Capacity-known regimes (degraded model)
// ---------------------------------------------------------------------------

/// Relay-noise threshold above which the degraded channel's capacity is known
/// to equal the interference-free rate `½·log₂(1 + P1/N2)`:
///
/// `max over ζ ∈ [-1,0] of P1·N3·(P2+Q+N3+2ζ√(P2Q))
///   / (P1·N3 + P2(1-ζ²)(P1+P2+Q+N3+2ζ√(P2Q)))`.
pub fn capacity_condition_threshold(ch: &ChannelParams) -> f64 {
    if ch.p1 == 0.0 {
        return 0.0;
    }
    let opt = maximize(
        |x| {
            let zeta = x[0];
            let cross = 2.0 * zeta * (ch.p2 * ch.q).sqrt();
            let load = ch.p2 + ch.q + ch.n3 + cross;
            ch.p1 * ch.n3 * load / (ch.p1 * ch.n3 + ch.p2 * (1.0 - zeta * zeta) * (ch.p1 + load))
        },
        &[(-1.0, 0.0)],
        |_| true,
        &GridSpec::default(),
    )
    .expect("1-D threshold search over a fixed box cannot fail");
    opt.value
}

/// Regimes of the degraded model in which both bounds meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremeCase {
    /// `Q = 0`: no interference; capacity is the classic decode-and-forward
    /// rate `max over β of min{½·log₂(1+P1(1-β²)/N2),
    /// ½·log₂(1+(P1+P2+2β√(P1P2))/N3)}`.
    NoState,
    /// `Q` effectively infinite: capacity is
    /// `min{½·log₂(1+P1/N2), ½·log₂(1+P2/N3)}` (multi-hop is optimal).
    StrongState,
    /// `P2 = 0`: the relay cannot help and the interference acts as noise;
    /// capacity is `½·log₂(1+P1/(Q+N3))`.
    SilentRelay,
}

/// A capacity value known exactly for the degraded model.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExtremeCapacity {
    pub case: ExtremeCase,
    pub rate: f64,
}

/// Detect the extreme regimes of the degraded model and return the exact
/// capacity there; `None` for general-model inputs or ordinary parameters.
/// "Effectively infinite" interference means `Q >= ratio·max(P1,P2,N2,N3)`
/// with the default [`STRONG_STATE_RATIO`]; use [`extreme_cases_with`] to
/// change it.
pub fn extreme_cases(ch: &ChannelParams) -> Result<Option<ExtremeCapacity>> {
    extreme_cases_with(ch, STRONG_STATE_RATIO, &GridSpec::default())
}

pub fn extreme_cases_with(
    ch: &ChannelParams,
    strong_state_ratio: f64,
    grid: &GridSpec,
) -> Result<Option<ExtremeCapacity>> {
    ch.validate()?;
    if !ch.degraded {
        return Ok(None);
    }
    if ch.q == 0.0 {
        let rate = df_bound(ch.p1, ch.p2, ch.n2, ch.n3, false, grid)?.value;
        return Ok(Some(ExtremeCapacity {
            case: ExtremeCase::NoState,
            rate,
        }));
    }
    if ch.p2 == 0.0 {
        return Ok(Some(ExtremeCapacity {
            case: ExtremeCase::SilentRelay,
            rate: capacity_awgn(ch.p1 / (ch.q + ch.n3)),
        }));
    }
    let scale = ch.p1.max(ch.p2).max(ch.n2).max(ch.n3);
    if ch.q >= strong_state_ratio * scale {
        let rate = capacity_awgn(ch.p1 / ch.n2).min(capacity_awgn(ch.p2 / ch.n3));
        return Ok(Some(ExtremeCapacity {
            case: ExtremeCase::StrongState,
            rate,
        }));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(p1: f64, p2: f64, q: f64, n2: f64, n3: f64, degraded: bool) -> ChannelParams {
        ChannelParams::new(p1, p2, q, n2, n3, degraded).unwrap()
    }

    /// Independent fine scan of the interference-free decode-and-forward
    /// expression, used as the oracle for grid-search results.
    fn df_oracle(p1: f64, p2: f64, n2: f64, n3: f64) -> f64 {
        let steps = 200_000;
        let mut best = f64::NEG_INFINITY;
        for i in 0..=steps {
            let beta = i as f64 / steps as f64;
            let t1 = 0.5 * (1.0 + p1 * (1.0 - beta * beta) / n2).log2();
            let t2 = 0.5 * (1.0 + (p1 + p2 + 2.0 * beta * (p1 * p2).sqrt()) / n3).log2();
            best = best.max(t1.min(t2));
        }
        best
    }

    #[test]
    fn channel_params_validation() {
        assert!(ChannelParams::new(10.0, 10.0, 10.0, 1.0, 10.0, true).is_ok());
        assert!(ChannelParams::new(0.0, 0.0, 0.0, 1.0, 1.0, false).is_ok());
        assert!(ChannelParams::new(-1.0, 10.0, 10.0, 1.0, 10.0, true).is_err());
        assert!(ChannelParams::new(10.0, 10.0, -0.1, 1.0, 10.0, true).is_err());
        assert!(ChannelParams::new(10.0, 10.0, 10.0, 0.0, 10.0, true).is_err());
        assert!(ChannelParams::new(10.0, 10.0, 10.0, 1.0, f64::NAN, true).is_err());
    }

    #[test]
    fn lower_term1_examples() {
        let c = ch(10.0, 10.0, 10.0, 1.0, 10.0, false);
        assert_eq!(lower_term1(&c, 1.0).unwrap(), 0.0);
        let v = lower_term1(&c, 0.0).unwrap();
        assert!((v - 0.5 * 11.0_f64.log2()).abs() < 1e-12);
        let zero_power = ch(0.0, 10.0, 10.0, 5.0, 10.0, false);
        assert_eq!(lower_term1(&zero_power, 0.3).unwrap(), 0.0);
        assert!(lower_term1(&c, 1.2).is_err());
        assert!(lower_term1(&c, -0.1).is_err());
    }

    #[test]
    fn lower_term2_collapses_at_theta_zero() {
        let c = ch(7.0, 3.0, 2.0, 1.0, 5.0, false);
        let p = LowerParams::new(0.4, 0.0, -0.6).unwrap();
        let expected = 0.5 * (1.0 + (7.0 + 3.0 + 2.0 * 0.4 * 21.0_f64.sqrt()) / (2.0 + 5.0)).log2();
        assert!((lower_term2(&c, &p).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn lower_term2_hand_value() {
        let c = ch(10.0, 10.0, 10.0, 1.0, 10.0, false);
        let p = LowerParams::new(0.0, 1.0, 0.0).unwrap();
        let expected = 0.5 * (4.0_f64 / 3.0).log2() + 0.5;
        assert!((lower_term2(&c, &p).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn lower_term2_silent_relay() {
        let c = ch(10.0, 0.0, 10.0, 1.0, 10.0, false);
        let p = LowerParams::new(0.7, 0.3, -0.2).unwrap();
        let expected = 0.5 * (1.0_f64 + 10.0 / 20.0).log2();
        assert!((lower_term2(&c, &p).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn lower_params_covariances() {
        let c = ch(10.0, 10.0, 10.0, 1.0, 10.0, false);
        let p = LowerParams::new(0.5, 0.36, -0.25).unwrap();
        assert!((p.sigma12(&c) - 0.5 * (0.64 * 100.0_f64).sqrt()).abs() < 1e-12);
        assert!((p.sigma2s(&c) + 0.25 * (36.0_f64).sqrt()).abs() < 1e-12);
        assert!(LowerParams::new(0.5, 0.5, 0.5).is_err());
        assert!(LowerParams::new(1.5, 0.5, -0.5).is_err());
    }

    #[test]
    fn alpha_opt_examples() {
        let c = ch(10.0, 10.0, 5.0, 1.0, 10.0, false);
        assert!((alpha_opt(&c, 1.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(alpha_opt(&c, 0.0, -0.7).unwrap(), 0.0);

        // Exact rationals: 7.5/17.5 * 1/2 + 1/2 = 5/7.
        let c = ch(10.0, 10.0, 10.0, 1.0, 10.0, false);
        assert!((alpha_opt(&c, 1.0, -0.5).unwrap() - 5.0 / 7.0).abs() < 1e-15);

        let no_state = ch(10.0, 10.0, 0.0, 1.0, 10.0, false);
        assert!(alpha_opt(&no_state, 0.5, -0.5).is_err());
    }

    #[test]
    fn lower_bound_no_state_matches_df() {
        let c = ch(10.0, 10.0, 0.0, 1.0, 10.0, true);
        let grid = GridSpec::default();
        let lb = lower_bound(&c, &grid).unwrap();
        assert!((lb.rate - df_oracle(10.0, 10.0, 1.0, 10.0)).abs() < 1e-4);
        // The reported maximizer has theta = 0 (no power on precoding).
        assert!(lb.argmax[1].abs() < 1e-2);
    }

    #[test]
    fn lower_bound_silent_relay_is_exact() {
        let c = ch(10.0, 0.0, 10.0, 1.0, 10.0, true);
        let lb = lower_bound(&c, &GridSpec::default()).unwrap();
        assert!((lb.rate - 0.5 * 1.5_f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn lower_bound_strong_state_limit() {
        let c = ch(10.0, 10.0, 1e6, 1.0, 10.0, true);
        let lb = lower_bound(&c, &GridSpec::default()).unwrap();
        assert!((lb.rate - 0.5).abs() < 1e-3);
    }

    #[test]
    fn upper_params_feasibility() {
        assert!(UpperParams::new(0.6, -0.8).is_ok());
        assert!(UpperParams::new(1.0, 0.0).is_ok());
        assert!(UpperParams::new(0.0, -1.0).is_ok());
        assert!(UpperParams::new(0.8, -0.8).is_err());
        assert!(UpperParams::new(1e-3, -1.0).is_err());
        assert!(UpperParams::new(-0.1, 0.0).is_err());
    }

    #[test]
    fn upper_term1_general_examples() {
        let c = ch(10.0, 10.0, 10.0, 1.0, 10.0, false);
        let v = upper_term1_general(&c, &UpperParams::new(0.0, 0.0).unwrap());
        assert!((v - 0.5 * 12.0_f64.log2()).abs() < 1e-12);
        assert_eq!(
            upper_term1_general(&c, &UpperParams::new(1.0, 0.0).unwrap()),
            0.0
        );
        let at_corner = upper_term1_general(&c, &UpperParams::new(0.0, -1.0).unwrap());
        assert!((at_corner - 0.5 * 12.0_f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn upper_term1_degraded_examples() {
        let c = ch(10.0, 10.0, 10.0, 1.0, 10.0, true);
        let free = 0.5 * 11.0_f64.log2();
        let v = upper_term1_degraded(&c, &UpperParams::new(0.0, 0.0).unwrap());
        assert!((v - free).abs() < 1e-12);
        // Zero numerator anywhere on the boundary away from rho2s = -1.
        let v = upper_term1_degraded(&c, &UpperParams::new(0.6, -0.8).unwrap());
        assert!(v.abs() < 1e-12);
        assert_eq!(
            upper_term1_degraded(&c, &UpperParams::new(1.0, 0.0).unwrap()),
            0.0
        );
        // Limit convention at the corner.
        let v = upper_term1_degraded(&c, &UpperParams::new(0.0, -1.0).unwrap());
        assert!((v - free).abs() < 1e-12);
    }

    #[test]
    fn upper_term2_examples() {
        let c = ch(10.0, 10.0, 10.0, 1.0, 10.0, false);
        let v = upper_term2(&c, &UpperParams::new(0.0, 0.0).unwrap());
        assert!((v - (0.5 * (4.0_f64 / 3.0).log2() + 0.5)).abs() < 1e-12);

        let silent = ch(10.0, 0.0, 10.0, 1.0, 10.0, false);
        let v = upper_term2(&silent, &UpperParams::new(0.3, -0.4).unwrap());
        assert!((v - 0.5 * 1.5_f64.log2()).abs() < 1e-12);

        // On the feasibility boundary the second log vanishes.
        let up = UpperParams::new(0.6, -0.8).unwrap();
        let v = upper_term2(&c, &up);
        let num = (10.0_f64.sqrt() + 0.6 * 10.0_f64.sqrt()).powi(2);
        let den = (10.0_f64.sqrt() - 0.8 * 10.0_f64.sqrt()).powi(2) + 10.0;
        assert!((v - 0.5 * (1.0 + num / den).log2()).abs() < 1e-12);
    }

    #[test]
    fn upper_bound_no_state_matches_df() {
        let c = ch(10.0, 10.0, 0.0, 1.0, 10.0, true);
        let ub = upper_bound(&c, &GridSpec::default()).unwrap();
        assert!((ub.rate - df_oracle(10.0, 10.0, 1.0, 10.0)).abs() < 1e-3);
    }

    #[test]
    fn upper_bound_silent_relay() {
        for degraded in [false, true] {
            let c = ch(10.0, 0.0, 10.0, 1.0, 10.0, degraded);
            let ub = upper_bound(&c, &GridSpec::default()).unwrap();
            assert!((ub.rate - 0.5 * 1.5_f64.log2()).abs() < 1e-9);
        }
    }

    #[test]
    fn upper_bound_strong_state_limit() {
        let c = ch(10.0, 10.0, 1e6, 1.0, 10.0, true);
        let ub = upper_bound(&c, &GridSpec::default()).unwrap();
        assert!((ub.rate - 0.5).abs() < 1e-3);
    }

    #[test]
    fn degraded_equiv_matches_joint_search() {
        let grid = GridSpec::default();
        let c = ch(10.0, 10.0, 10.0, 2.0, 10.0, true);
        let a = upper_bound(&c, &grid).unwrap();
        let b = upper_bound_degraded_equiv(&c, &grid).unwrap();
        let slack = 2.0 * a.grid_tolerance.max(b.grid_tolerance) + 1e-9;
        assert!(
            (a.rate - b.rate).abs() <= slack,
            "joint {} vs substituted {} (slack {})",
            a.rate,
            b.rate,
            slack
        );
    }

    #[test]
    fn degraded_equiv_no_state() {
        let c = ch(10.0, 10.0, 0.0, 1.0, 10.0, true);
        let ub = upper_bound_degraded_equiv(&c, &GridSpec::default()).unwrap();
        assert!((ub.rate - df_oracle(10.0, 10.0, 1.0, 10.0)).abs() < 1e-3);
        // rho = 0 maximizes the inner term when there is no interference.
        assert!(ub.argmax[1].abs() < 1e-2);
    }

    #[test]
    fn degraded_equiv_rejects_general_model() {
        let c = ch(10.0, 10.0, 10.0, 1.0, 10.0, false);
        assert!(upper_bound_degraded_equiv(&c, &GridSpec::default()).is_err());
    }

    #[test]
    fn trivial_upper_silent_relay() {
        let c = ch(10.0, 0.0, 10.0, 1.0, 10.0, false);
        let t = trivial_upper_bound(&c, &GridSpec::default()).unwrap();
        assert!((t.rate - 0.5 * 2.0_f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn trivial_upper_no_state_equals_upper_bound() {
        // With no interference there is nothing extra to know.
        let grid = GridSpec::default();
        let c = ch(10.0, 10.0, 0.0, 1.0, 10.0, true);
        let tu = trivial_upper_bound(&c, &grid).unwrap();
        let ub = upper_bound(&c, &grid).unwrap();
        assert!((tu.rate - ub.rate).abs() < 1e-3);
    }

    #[test]
    fn trivial_upper_dominates_upper() {
        let grid = GridSpec::default();
        for degraded in [false, true] {
            let c = ch(12.0, 6.0, 4.0, 0.8, 9.0, degraded);
            let ub = upper_bound(&c, &grid).unwrap();
            let tu = trivial_upper_bound(&c, &grid).unwrap();
            assert!(
                tu.rate >= ub.rate - 2.0 * tu.grid_tolerance.max(ub.grid_tolerance) - 1e-9,
                "trivial {} vs upper {} (degraded={degraded})",
                tu.rate,
                ub.rate
            );
        }
    }

    #[test]
    fn trivial_lower_no_state_equals_df() {
        let grid = GridSpec::default();
        let c = ch(10.0, 10.0, 0.0, 1.0, 10.0, true);
        let tl = trivial_lower_bound(&c, &grid).unwrap();
        let df = df_bound(10.0, 10.0, 1.0, 10.0, false, &grid).unwrap();
        assert!((tl.rate - df.value).abs() < 1e-15);
    }

    #[test]
    fn trivial_lower_oracle_value() {
        let c = ch(10.0, 10.0, 10.0, 1.0, 10.0, true);
        let tl = trivial_lower_bound(&c, &GridSpec::default()).unwrap();
        assert!((tl.rate - df_oracle(10.0, 10.0, 11.0, 20.0)).abs() < 1e-6);
    }

    #[test]
    fn trivial_lower_below_lower_bound() {
        let grid = GridSpec::default();
        let c = ch(10.0, 10.0, 10.0, 1.0, 10.0, true);
        let tl = trivial_lower_bound(&c, &grid).unwrap();
        let lb = lower_bound(&c, &grid).unwrap();
        assert!(tl.rate <= lb.rate + lb.grid_tolerance + 1e-9);
    }

    #[test]
    fn threshold_hand_values() {
        let c = ch(10.0, 10.0, 10.0, 1.0, 10.0, true);
        assert!((capacity_condition_threshold(&c) - 10.0).abs() < 1e-6);

        // P2 = 0 makes the expression zeta-free: Q + N3.
        let c = ch(3.0, 0.0, 7.0, 1.0, 11.0, true);
        assert!((capacity_condition_threshold(&c) - 18.0).abs() < 1e-9);

        // Q = 0: denominator is minimized at |zeta| = 1, giving P2 + N3.
        let c = ch(5.0, 4.0, 0.0, 1.0, 3.0, true);
        assert!((capacity_condition_threshold(&c) - 7.0).abs() < 1e-6);

        let c = ch(0.0, 4.0, 2.0, 1.0, 3.0, true);
        assert_eq!(capacity_condition_threshold(&c), 0.0);
    }

    #[test]
    fn extreme_case_detection() {
        let silent = ch(10.0, 0.0, 10.0, 1.0, 10.0, true);
        let e = extreme_cases(&silent).unwrap().unwrap();
        assert_eq!(e.case, ExtremeCase::SilentRelay);
        assert!((e.rate - 0.5 * 1.5_f64.log2()).abs() < 1e-12);

        let no_state = ch(10.0, 10.0, 0.0, 1.0, 10.0, true);
        let e = extreme_cases(&no_state).unwrap().unwrap();
        assert_eq!(e.case, ExtremeCase::NoState);
        assert!((e.rate - df_oracle(10.0, 10.0, 1.0, 10.0)).abs() < 1e-6);

        let strong = ch(10.0, 10.0, 1e9, 1.0, 10.0, true);
        let e = extreme_cases(&strong).unwrap().unwrap();
        assert_eq!(e.case, ExtremeCase::StrongState);
        assert!((e.rate - 0.5).abs() < 1e-12);

        let ordinary = ch(10.0, 10.0, 10.0, 1.0, 10.0, true);
        assert!(extreme_cases(&ordinary).unwrap().is_none());

        let general = ch(10.0, 0.0, 10.0, 1.0, 10.0, false);
        assert!(extreme_cases(&general).unwrap().is_none());
    }

    #[test]
    fn zero_source_power_gives_zero_rate() {
        let grid = GridSpec::default();
        let c = ch(0.0, 10.0, 10.0, 1.0, 10.0, true);
        assert_eq!(lower_bound(&c, &grid).unwrap().rate, 0.0);
        assert_eq!(upper_bound(&c, &grid).unwrap().rate, 0.0);
    }
}
