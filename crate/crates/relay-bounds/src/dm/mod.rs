//! Discrete-memoryless engine: exact information bounds on finite alphabets.
//!
//! A channel is a stochastic tensor `W(y2, y3 | x1, x2, s)` together with a
//! state distribution `Q_S`. Bounds are evaluated exactly on factorized joint
//! distributions ([`build_joint_lower`], [`build_joint_upper`]) and searched
//! by randomized coordinate ascent over the factor simplices ([`dm_search`]).

mod joint;
mod search;

pub use joint::{
    build_joint_lower, build_joint_upper, lower_axis, upper_axis, JointPmf, LowerFactorization,
    SourceDist, UpperFactorization,
};
pub use search::{
    dm_lower_eval, dm_search, dm_trivial_upper_eval, dm_upper_eval, BestFactorization,
    SearchConfig, SearchMode, SearchOutcome,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerance on probability normalization checks.
pub const PMF_TOL: f64 = 1e-12;

/// Tolerance for the degradedness factorization check.
const DEGRADED_TOL: f64 = 1e-9;

/// Alphabet sizes of a discrete channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphabetSizes {
    pub s: usize,
    pub x1: usize,
    pub x2: usize,
    pub y2: usize,
    pub y3: usize,
}

impl AlphabetSizes {
    fn validate(&self) -> Result<()> {
        for (name, n) in [
            ("s", self.s),
            ("x1", self.x1),
            ("x2", self.x2),
            ("y2", self.y2),
            ("y3", self.y3),
        ] {
            if n == 0 {
                return Err(Error::invalid(name, "alphabet must not be empty"));
            }
        }
        Ok(())
    }
}

/// A finite state-dependent channel: state pmf `Q_S` and transition kernel
/// `W(y2, y3 | x1, x2, s)` stored row-major over `[x1][x2][s][y2][y3]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteChannelSpec {
    pub sizes: AlphabetSizes,
    pub state_pmf: Vec<f64>,
    pub kernel: Vec<f64>,
}

impl DiscreteChannelSpec {
    pub fn new(sizes: AlphabetSizes, state_pmf: Vec<f64>, kernel: Vec<f64>) -> Result<Self> {
        let spec = Self {
            sizes,
            state_pmf,
            kernel,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Build a channel from a transition probability function.
    pub fn from_kernel_fn(
        sizes: AlphabetSizes,
        state_pmf: Vec<f64>,
        mut w: impl FnMut(usize, usize, usize, usize, usize) -> f64,
    ) -> Result<Self> {
        sizes.validate()?;
        let mut kernel = Vec::with_capacity(sizes.x1 * sizes.x2 * sizes.s * sizes.y2 * sizes.y3);
        for x1 in 0..sizes.x1 {
            for x2 in 0..sizes.x2 {
                for s in 0..sizes.s {
                    for y2 in 0..sizes.y2 {
                        for y3 in 0..sizes.y3 {
                            kernel.push(w(x1, x2, s, y2, y3));
                        }
                    }
                }
            }
        }
        Self::new(sizes, state_pmf, kernel)
    }

    /// Build a physically degraded channel by composing a relay stage
    /// `w2(y2 | x1, x2, s)` with a destination stage `w3(y3 | y2, x2, s)`.
    pub fn from_stages(
        sizes: AlphabetSizes,
        state_pmf: Vec<f64>,
        mut w2: impl FnMut(usize, usize, usize, usize) -> f64,
        mut w3: impl FnMut(usize, usize, usize, usize) -> f64,
    ) -> Result<Self> {
        Self::from_kernel_fn(sizes, state_pmf, |x1, x2, s, y2, y3| {
            w2(y2, x1, x2, s) * w3(y3, y2, x2, s)
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.sizes.validate()?;
        let n = &self.sizes;
        if self.state_pmf.len() != n.s {
            return Err(Error::DimensionMismatch {
                what: "state_pmf".into(),
                expected: n.s,
                got: self.state_pmf.len(),
            });
        }
        let kernel_len = n.x1 * n.x2 * n.s * n.y2 * n.y3;
        if self.kernel.len() != kernel_len {
            return Err(Error::DimensionMismatch {
                what: "kernel".into(),
                expected: kernel_len,
                got: self.kernel.len(),
            });
        }
        check_pmf("state_pmf", &self.state_pmf)?;
        for x1 in 0..n.x1 {
            for x2 in 0..n.x2 {
                for s in 0..n.s {
                    let slice = self.kernel_slice(x1, x2, s);
                    let mut sum = 0.0;
                    for (i, &p) in slice.iter().enumerate() {
                        if p.is_nan() || p < 0.0 {
                            let (y2, y3) = (i / n.y3, i % n.y3);
                            return Err(Error::NotStochastic(format!(
                                "kernel[(x1={x1}, x2={x2}, s={s}, y2={y2}, y3={y3})] = {p} is negative or NaN"
                            )));
                        }
                        sum += p;
                    }
                    if (sum - 1.0).abs() > PMF_TOL {
                        return Err(Error::NotStochastic(format!(
                            "kernel slice (x1={x1}, x2={x2}, s={s}) sums to {sum}, expected 1 within {PMF_TOL:e}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `W(·,· | x1, x2, s)` as a flat `[y2][y3]` slice.
    pub fn kernel_slice(&self, x1: usize, x2: usize, s: usize) -> &[f64] {
        let n = &self.sizes;
        let pmf_len = n.y2 * n.y3;
        let start = ((x1 * n.x2 + x2) * n.s + s) * pmf_len;
        &self.kernel[start..start + pmf_len]
    }

    pub fn kernel_at(&self, x1: usize, x2: usize, s: usize, y2: usize, y3: usize) -> f64 {
        self.kernel_slice(x1, x2, s)[y2 * self.sizes.y3 + y3]
    }

    /// Parse the JSON document format; rejects non-stochastic input with a
    /// cell-indexed message.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: DiscreteChannelSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("channel spec serializes")
    }
}

pub(crate) fn check_pmf(what: &str, pmf: &[f64]) -> Result<()> {
    let mut sum = 0.0;
    for (i, &p) in pmf.iter().enumerate() {
        if p.is_nan() || p < 0.0 {
            return Err(Error::NotStochastic(format!(
                "{what}[{i}] = {p} is negative or NaN"
            )));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > PMF_TOL {
        return Err(Error::NotStochastic(format!(
            "{what} sums to {sum}, expected 1 within {PMF_TOL:e}"
        )));
    }
    Ok(())
}

/// Check whether the kernel factors as
/// `W(y2, y3 | x1, x2, s) = W(y2 | x1, x2, s) · W'(y3 | y2, x2, s)`,
/// i.e. the destination output depends on the source input only through the
/// relay output. The candidate `W'` must be `x1`-independent wherever the
/// conditioning event has positive probability; zero-probability cells are
/// unconstrained.
pub fn is_degraded(spec: &DiscreteChannelSpec) -> bool {
    let n = &spec.sizes;
    for x2 in 0..n.x2 {
        for s in 0..n.s {
            for y2 in 0..n.y2 {
                let mut reference: Option<Vec<f64>> = None;
                for x1 in 0..n.x1 {
                    let w2: f64 = (0..n.y3).map(|y3| spec.kernel_at(x1, x2, s, y2, y3)).sum();
                    if w2 <= 0.0 {
                        continue;
                    }
                    let cond: Vec<f64> = (0..n.y3)
                        .map(|y3| spec.kernel_at(x1, x2, s, y2, y3) / w2)
                        .collect();
                    match &reference {
                        None => reference = Some(cond),
                        Some(r) => {
                            if r.iter()
                                .zip(&cond)
                                .any(|(a, b)| (a - b).abs() > DEGRADED_TOL)
                            {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn binary_sizes() -> AlphabetSizes {
        AlphabetSizes {
            s: 2,
            x1: 2,
            x2: 2,
            y2: 2,
            y3: 2,
        }
    }

    /// Y2 = X1 xor S flipped w.p. `eps2`, then Y3 = Y2 xor X2 flipped w.p. `eps3`.
    pub(crate) fn degraded_binary(eps2: f64, eps3: f64) -> DiscreteChannelSpec {
        DiscreteChannelSpec::from_stages(
            binary_sizes(),
            vec![0.5, 0.5],
            |y2, x1, _x2, s| {
                let clean = x1 ^ s;
                if y2 == clean {
                    1.0 - eps2
                } else {
                    eps2
                }
            },
            |y3, y2, x2, _s| {
                let clean = y2 ^ x2;
                if y3 == clean {
                    1.0 - eps3
                } else {
                    eps3
                }
            },
        )
        .unwrap()
    }

    #[test]
    fn composed_stages_are_degraded() {
        assert!(is_degraded(&degraded_binary(0.1, 0.2)));
    }

    #[test]
    fn direct_dependence_is_not_degraded() {
        // Y3 copies X1 while Y2 is pure noise, so Y3 depends on X1 given Y2.
        let spec = DiscreteChannelSpec::from_kernel_fn(
            binary_sizes(),
            vec![0.5, 0.5],
            |x1, _x2, _s, _y2, y3| {
                let py2 = 0.5;
                let py3 = if y3 == x1 { 0.9 } else { 0.1 };
                py2 * py3
            },
        )
        .unwrap();
        assert!(!is_degraded(&spec));
    }

    #[test]
    fn zero_probability_cells_are_unconstrained() {
        // Y2 is a deterministic copy of X1; the conditional on (y2 != x1) has
        // zero probability and its y3 rows may differ arbitrarily.
        let spec = DiscreteChannelSpec::from_kernel_fn(
            binary_sizes(),
            vec![0.5, 0.5],
            |x1, _x2, _s, y2, y3| {
                if y2 != x1 {
                    return 0.0;
                }
                // Here y3 mirrors y2 through a clean pipe.
                if y3 == y2 {
                    1.0
                } else {
                    0.0
                }
            },
        )
        .unwrap();
        assert!(is_degraded(&spec));
    }

    #[test]
    fn json_round_trip() {
        let spec = degraded_binary(0.05, 0.1);
        let text = spec.to_json();
        let back = DiscreteChannelSpec::from_json(&text).unwrap();
        assert_eq!(spec, back);
        assert!(text.contains("\"state_pmf\""));
        assert!(text.contains("\"kernel\""));
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(matches!(
            DiscreteChannelSpec::from_json("{not json"),
            Err(Error::Json(_))
        ));

        let mut spec = degraded_binary(0.05, 0.1);
        spec.kernel[3] += 0.5;
        let err = DiscreteChannelSpec::from_json(&spec.to_json()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("x1=0"), "message should index the cell: {msg}");

        let mut spec = degraded_binary(0.05, 0.1);
        spec.state_pmf = vec![0.7, 0.2];
        assert!(matches!(
            DiscreteChannelSpec::from_json(&spec.to_json()),
            Err(Error::NotStochastic(_))
        ));

        let mut spec = degraded_binary(0.05, 0.1);
        spec.kernel.pop();
        assert!(matches!(
            spec.validate(),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
