//! Dense joint distributions and exact mutual information.

use super::{check_pmf, DiscreteChannelSpec};
use crate::error::{Error, Result};

/// Axis indices of the seven-variable joint built by [`build_joint_lower`].
pub mod lower_axis {
    pub const S: usize = 0;
    pub const U1: usize = 1;
    pub const U2: usize = 2;
    pub const X1: usize = 3;
    pub const X2: usize = 4;
    pub const Y2: usize = 5;
    pub const Y3: usize = 6;
}

/// Axis indices of the five-variable joint built by [`build_joint_upper`].
pub mod upper_axis {
    pub const S: usize = 0;
    pub const X1: usize = 1;
    pub const X2: usize = 2;
    pub const Y2: usize = 3;
    pub const Y3: usize = 4;
}

/// A dense probability tensor with named-by-position axes.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl JointPmf {
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let expected: usize = dims.iter().product();
        if data.len() != expected {
            return Err(Error::DimensionMismatch {
                what: "joint pmf".into(),
                expected,
                got: data.len(),
            });
        }
        Ok(Self { dims, data })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn total_mass(&self) -> f64 {
        self.data.iter().sum()
    }

    fn decode(&self, mut flat: usize, idx: &mut [usize]) {
        for axis in (0..self.dims.len()).rev() {
            idx[axis] = flat % self.dims[axis];
            flat /= self.dims[axis];
        }
    }

    /// Marginalize onto `axes` (kept in the given order).
    pub fn marginal(&self, axes: &[usize]) -> JointPmf {
        let dims: Vec<usize> = axes.iter().map(|&a| self.dims[a]).collect();
        let mut data = vec![0.0; dims.iter().product::<usize>().max(1)];
        let mut idx = vec![0usize; self.dims.len()];
        for (flat, &p) in self.data.iter().enumerate() {
            self.decode(flat, &mut idx);
            let mut packed = 0usize;
            for (k, &a) in axes.iter().enumerate() {
                packed = packed * dims[k] + idx[a];
            }
            data[packed] += p;
        }
        JointPmf { dims, data }
    }

    /// Conditional mutual information `I(A; B | C)` in bits:
    /// `Σ p(a,b,c)·log₂[ p(a,b,c)·p(c) / (p(a,c)·p(b,c)) ]`
    /// with `0·log 0 := 0`; cells with `p(c) = 0` contribute nothing.
    /// `group_c` may be empty for unconditional mutual information.
    pub fn mutual_information(
        &self,
        group_a: &[usize],
        group_b: &[usize],
        group_c: &[usize],
    ) -> Result<f64> {
        let mut seen = vec![false; self.dims.len()];
        for &a in group_a.iter().chain(group_b).chain(group_c) {
            if a >= self.dims.len() {
                return Err(Error::invalid("axis", format!("{a} out of range")));
            }
            if seen[a] {
                return Err(Error::invalid("axis", format!("{a} used in two groups")));
            }
            seen[a] = true;
        }
        if group_a.is_empty() || group_b.is_empty() {
            return Err(Error::invalid("groups", "A and B must be non-empty"));
        }

        let abc: Vec<usize> = group_a
            .iter()
            .chain(group_b)
            .chain(group_c)
            .copied()
            .collect();
        let p_abc = self.marginal(&abc);
        let ac: Vec<usize> = group_a.iter().chain(group_c).copied().collect();
        let p_ac = self.marginal(&ac);
        let bc: Vec<usize> = group_b.iter().chain(group_c).copied().collect();
        let p_bc = self.marginal(&bc);
        let p_c = self.marginal(group_c);

        let (na, nb, nc) = (group_a.len(), group_b.len(), group_c.len());
        let mut idx = vec![0usize; na + nb + nc];
        let mut sum = 0.0;
        for (flat, &p) in p_abc.data.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            p_abc.decode(flat, &mut idx);
            let mut f_ac = 0usize;
            for (&d, &i) in p_abc.dims[..na].iter().zip(&idx[..na]) {
                f_ac = f_ac * d + i;
            }
            let mut f_bc = 0usize;
            for (&d, &i) in p_abc.dims[na..na + nb].iter().zip(&idx[na..na + nb]) {
                f_bc = f_bc * d + i;
            }
            let mut f_c = 0usize;
            for (&d, &i) in p_abc.dims[na + nb..].iter().zip(&idx[na + nb..]) {
                f_ac = f_ac * d + i;
                f_bc = f_bc * d + i;
                f_c = f_c * d + i;
            }
            sum += p * (p * p_c.data[f_c] / (p_ac.data[f_ac] * p_bc.data[f_bc])).log2();
        }
        Ok(sum)
    }
}

/// Factorized input distribution behind the achievable rate:
/// `P(u1)·P(x1|u1)·P(u2|u1,s)·P(x2|u1,u2,s)` with auxiliary alphabets
/// `U1`, `U2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerFactorization {
    pub u1: usize,
    pub u2: usize,
    /// `[u1]`
    pub p_u1: Vec<f64>,
    /// `[u1][x1]`
    pub p_x1_given_u1: Vec<f64>,
    /// `[u1][s][u2]`
    pub p_u2_given_u1_s: Vec<f64>,
    /// `[u1][u2][s][x2]`
    pub p_x2_given_u1_u2_s: Vec<f64>,
}

impl LowerFactorization {
    /// Sufficient auxiliary-alphabet sizes: `|U1| <= |S||X1||X2| + 1` and
    /// `|U2| <= (|S||X1||X2| + 1)·|S||X1||X2|`.
    pub fn max_aux_sizes(spec: &DiscreteChannelSpec) -> (usize, usize) {
        let base = spec.sizes.s * spec.sizes.x1 * spec.sizes.x2;
        (base + 1, (base + 1) * base)
    }

    pub fn validate(&self, spec: &DiscreteChannelSpec) -> Result<()> {
        let n = &spec.sizes;
        if self.u1 == 0 || self.u2 == 0 {
            return Err(Error::invalid(
                "u1/u2",
                "auxiliary alphabets must not be empty",
            ));
        }
        let (max_u1, max_u2) = Self::max_aux_sizes(spec);
        if self.u1 > max_u1 {
            return Err(Error::invalid(
                "u1",
                format!("{} exceeds the sufficient size {max_u1}", self.u1),
            ));
        }
        if self.u2 > max_u2 {
            return Err(Error::invalid(
                "u2",
                format!("{} exceeds the sufficient size {max_u2}", self.u2),
            ));
        }
        check_len("p_u1", self.p_u1.len(), self.u1)?;
        check_len("p_x1_given_u1", self.p_x1_given_u1.len(), self.u1 * n.x1)?;
        check_len(
            "p_u2_given_u1_s",
            self.p_u2_given_u1_s.len(),
            self.u1 * n.s * self.u2,
        )?;
        check_len(
            "p_x2_given_u1_u2_s",
            self.p_x2_given_u1_u2_s.len(),
            self.u1 * self.u2 * n.s * n.x2,
        )?;
        check_pmf("p_u1", &self.p_u1)?;
        check_slices("p_x1_given_u1", &self.p_x1_given_u1, n.x1)?;
        check_slices("p_u2_given_u1_s", &self.p_u2_given_u1_s, self.u2)?;
        check_slices("p_x2_given_u1_u2_s", &self.p_x2_given_u1_u2_s, n.x2)?;
        Ok(())
    }

    pub fn x1_given_u1(&self, u1: usize, x1: usize, n_x1: usize) -> f64 {
        self.p_x1_given_u1[u1 * n_x1 + x1]
    }

    pub fn u2_given_u1_s(&self, u1: usize, s: usize, u2: usize, n_s: usize) -> f64 {
        self.p_u2_given_u1_s[(u1 * n_s + s) * self.u2 + u2]
    }

    pub fn x2_given_u1_u2_s(
        &self,
        u1: usize,
        u2: usize,
        s: usize,
        x2: usize,
        n: (usize, usize),
    ) -> f64 {
        let (n_s, n_x2) = n;
        self.p_x2_given_u1_u2_s[((u1 * self.u2 + u2) * n_s + s) * n_x2 + x2]
    }
}

/// Source input distribution for the converse measures: `P(x1)` for the
/// informed-relay bound, `P(x1|s)` for the all-informed baseline.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceDist {
    /// `[x1]`
    Unconditional(Vec<f64>),
    /// `[s][x1]`
    PerState(Vec<f64>),
}

/// Factorized distribution behind the upper bounds:
/// `P(x1)·P(x2|x1,s)` (or `P(x1|s)·P(x2|x1,s)`).
#[derive(Debug, Clone, PartialEq)]
pub struct UpperFactorization {
    pub x1: SourceDist,
    /// `[x1][s][x2]`
    pub p_x2_given_x1_s: Vec<f64>,
}

impl UpperFactorization {
    pub fn validate(&self, spec: &DiscreteChannelSpec) -> Result<()> {
        let n = &spec.sizes;
        match &self.x1 {
            SourceDist::Unconditional(p) => {
                check_len("p_x1", p.len(), n.x1)?;
                check_pmf("p_x1", p)?;
            }
            SourceDist::PerState(p) => {
                check_len("p_x1_given_s", p.len(), n.s * n.x1)?;
                check_slices("p_x1_given_s", p, n.x1)?;
            }
        }
        check_len(
            "p_x2_given_x1_s",
            self.p_x2_given_x1_s.len(),
            n.x1 * n.s * n.x2,
        )?;
        check_slices("p_x2_given_x1_s", &self.p_x2_given_x1_s, n.x2)?;
        Ok(())
    }

    fn x1_prob(&self, s: usize, x1: usize, n_x1: usize) -> f64 {
        match &self.x1 {
            SourceDist::Unconditional(p) => p[x1],
            SourceDist::PerState(p) => p[s * n_x1 + x1],
        }
    }

    fn x2_prob(&self, x1: usize, s: usize, x2: usize, n: (usize, usize)) -> f64 {
        let (n_s, n_x2) = n;
        self.p_x2_given_x1_s[(x1 * n_s + s) * n_x2 + x2]
    }
}

fn check_len(what: &str, got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::DimensionMismatch {
            what: what.into(),
            expected,
            got,
        });
    }
    Ok(())
}

fn check_slices(what: &str, data: &[f64], width: usize) -> Result<()> {
    for (i, slice) in data.chunks(width).enumerate() {
        check_pmf(&format!("{what}[slice {i}]"), slice)?;
    }
    Ok(())
}

/// Joint distribution over `(S, U1, U2, X1, X2, Y2, Y3)`:
/// `Q(s)·P(u1)·P(x1|u1)·P(u2|u1,s)·P(x2|u1,u2,s)·W(y2,y3|x1,x2,s)`.
pub fn build_joint_lower(spec: &DiscreteChannelSpec, f: &LowerFactorization) -> Result<JointPmf> {
    f.validate(spec)?;
    let n = &spec.sizes;
    let dims = vec![n.s, f.u1, f.u2, n.x1, n.x2, n.y2, n.y3];
    let mut data = Vec::with_capacity(dims.iter().product());
    for s in 0..n.s {
        for u1 in 0..f.u1 {
            for u2 in 0..f.u2 {
                for x1 in 0..n.x1 {
                    for x2 in 0..n.x2 {
                        let base = spec.state_pmf[s]
                            * f.p_u1[u1]
                            * f.x1_given_u1(u1, x1, n.x1)
                            * f.u2_given_u1_s(u1, s, u2, n.s)
                            * f.x2_given_u1_u2_s(u1, u2, s, x2, (n.s, n.x2));
                        let w = spec.kernel_slice(x1, x2, s);
                        for &wp in w {
                            data.push(base * wp);
                        }
                    }
                }
            }
        }
    }
    JointPmf::new(dims, data)
}

/// Joint distribution over `(S, X1, X2, Y2, Y3)`:
/// `Q(s)·P(x1[|s])·P(x2|x1,s)·W(y2,y3|x1,x2,s)`.
pub fn build_joint_upper(spec: &DiscreteChannelSpec, f: &UpperFactorization) -> Result<JointPmf> {
    f.validate(spec)?;
    let n = &spec.sizes;
    let dims = vec![n.s, n.x1, n.x2, n.y2, n.y3];
    let mut data = Vec::with_capacity(dims.iter().product());
    for s in 0..n.s {
        for x1 in 0..n.x1 {
            for x2 in 0..n.x2 {
                let base =
                    spec.state_pmf[s] * f.x1_prob(s, x1, n.x1) * f.x2_prob(x1, s, x2, (n.s, n.x2));
                let w = spec.kernel_slice(x1, x2, s);
                for &wp in w {
                    data.push(base * wp);
                }
            }
        }
    }
    JointPmf::new(dims, data)
}
