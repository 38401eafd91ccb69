//! Norms of 1-symmetric sequence spaces.
//!
//! Two families are supported: `ℓ_p` for `1 < p < ∞`, and the Lorentz sequence
//! spaces `d(w, p)` whose norm is `(Σ w_n (v*_n)^p)^{1/p}` with `v*` the
//! decreasing rearrangement of `|v|`. Dual norms and norming functionals exist
//! only for `ℓ_p`; asking for them on a Lorentz space is an error.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Coefficients `a_n` against the unit vector basis. Finite, possibly empty.
pub type CoeffVector = Vec<f64>;

#[derive(Debug, Clone, PartialEq)]
pub enum WeightRule {
    /// `w_n = 1/n`.
    Harmonic,
    /// Explicit finite list, `w_1 = 1 ≥ w_2 ≥ … > 0`.
    Explicit(Vec<f64>),
}

impl WeightRule {
    fn weight(&self, i: usize) -> Option<f64> {
        match self {
            WeightRule::Harmonic => Some(1.0 / (i + 1) as f64),
            WeightRule::Explicit(w) => w.get(i).copied(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceKind {
    Lp { p: f64 },
    Lorentz { p: f64, weights: WeightRule },
}

/// A validated 1-symmetric sequence space.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSpace {
    kind: SpaceKind,
}

impl SymmetricSpace {
    pub fn lp(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::input(format!("lp exponent must satisfy 1 < p < inf, got {p}")));
        }
        Ok(Self {
            kind: SpaceKind::Lp { p },
        })
    }

    pub fn lorentz(p: f64, weights: WeightRule) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::input(format!("lorentz exponent must satisfy p >= 1, got {p}")));
        }
        if let WeightRule::Explicit(w) = &weights {
            validate_weights(w)?;
        }
        Ok(Self {
            kind: SpaceKind::Lorentz { p, weights },
        })
    }

    pub fn harmonic_lorentz(p: f64) -> Result<Self> {
        Self::lorentz(p, WeightRule::Harmonic)
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn exponent(&self) -> f64 {
        match self.kind {
            SpaceKind::Lp { p } | SpaceKind::Lorentz { p, .. } => p,
        }
    }

    /// `Some(p)` when the norm is `ℓ_p`, i.e. a separable sum of `|v_i|^p`.
    pub fn lp_exponent(&self) -> Option<f64> {
        match self.kind {
            SpaceKind::Lp { p } => Some(p),
            SpaceKind::Lorentz { .. } => None,
        }
    }

    pub fn norm(&self, v: &[f64]) -> Result<f64> {
        if let Some(x) = v.iter().find(|x| !x.is_finite()) {
            return Err(Error::input(format!("non-finite coefficient {x}")));
        }
        self.norm_finite(v)
    }

    /// Norm of a vector already known to be finite.
    pub(crate) fn norm_finite(&self, v: &[f64]) -> Result<f64> {
        match &self.kind {
            SpaceKind::Lp { p } => Ok(lp_norm(v, *p)),
            SpaceKind::Lorentz { p, weights } => lorentz_norm(v, *p, weights),
        }
    }

    /// Lorentz weights `w_1, …, w_n`; `None` for `ℓ_p` or a too-short list.
    pub(crate) fn lorentz_weights(&self, n: usize) -> Option<Vec<f64>> {
        match &self.kind {
            SpaceKind::Lp { .. } => None,
            SpaceKind::Lorentz { weights, .. } => (0..n).map(|i| weights.weight(i)).collect(),
        }
    }

    /// `‖e_1 + … + e_n‖_X`, the fundamental function (`λ_n⁻¹`). Zero for `n = 0`.
    pub fn fundamental(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Ok(0.0);
        }
        match &self.kind {
            SpaceKind::Lp { p } => Ok((n as f64).powf(1.0 / p)),
            SpaceKind::Lorentz { p, weights } => {
                let mut s = 0.0;
                for i in 0..n {
                    s += weights.weight(i).ok_or_else(|| short_weights(n))?;
                }
                Ok(s.powf(1.0 / p))
            }
        }
    }

    /// Conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn dual_exponent(&self) -> Result<f64> {
        match self.kind {
            SpaceKind::Lp { p } => Ok(p / (p - 1.0)),
            SpaceKind::Lorentz { .. } => Err(lorentz_dual()),
        }
    }

    pub fn dual_norm(&self, v: &[f64]) -> Result<f64> {
        let q = self.dual_exponent()?;
        if let Some(x) = v.iter().find(|x| !x.is_finite()) {
            return Err(Error::input(format!("non-finite coefficient {x}")));
        }
        Ok(lp_norm(v, q))
    }

    /// Hölder-extremal vector `β` with `‖β‖_q = 1` and `Σ β_i v_i = ‖v‖_p`.
    pub fn norming_coefficients(&self, v: &[f64]) -> Result<CoeffVector> {
        let p = match self.kind {
            SpaceKind::Lp { p } => p,
            SpaceKind::Lorentz { .. } => return Err(lorentz_dual()),
        };
        let nv = self.norm(v)?;
        if nv == 0.0 {
            return Err(Error::input("norming coefficients of the zero vector are not defined"));
        }
        Ok(v.iter().map(|&x| x.signum() * (x.abs() / nv).powf(p - 1.0)).collect())
    }
}

fn lp_norm(v: &[f64], p: f64) -> f64 {
    let m = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if m == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        let s: f64 = v.iter().map(|x| (x / m) * (x / m)).sum();
        return m * s.sqrt();
    }
    let s: f64 = v.iter().map(|x| (x.abs() / m).powf(p)).sum();
    m * s.powf(1.0 / p)
}

fn lorentz_norm(v: &[f64], p: f64, weights: &WeightRule) -> Result<f64> {
    let mut a: Vec<f64> = v.iter().map(|x| x.abs()).filter(|&x| x > 0.0).collect();
    if a.is_empty() {
        return Ok(0.0);
    }
    a.sort_by(|x, y| y.total_cmp(x));
    let m = a[0];
    let mut s = 0.0;
    for (i, x) in a.iter().enumerate() {
        let w = weights.weight(i).ok_or_else(|| short_weights(a.len()))?;
        s += w * (x / m).powf(p);
    }
    Ok(m * s.powf(1.0 / p))
}

fn validate_weights(w: &[f64]) -> Result<()> {
    if w.is_empty() {
        return Err(Error::input("explicit weight list is empty"));
    }
    if w[0] != 1.0 {
        return Err(Error::input(format!("first weight must be 1, got {}", w[0])));
    }
    for (i, pair) in w.windows(2).enumerate() {
        if !(pair[1] > 0.0 && pair[1] <= pair[0]) {
            return Err(Error::input(format!(
                "weights must be positive and nonincreasing; w[{}] = {} after {}",
                i + 1,
                pair[1],
                pair[0]
            )));
        }
    }
    Ok(())
}

fn short_weights(n: usize) -> Error {
    Error::input(format!("explicit weight list too short for {n} nonzero coefficients"))
}

fn lorentz_dual() -> Error {
    Error::Unsupported("dual norms and norming functionals are only available for lp spaces, not Lorentz spaces".into())
}

/// Block sums `(Σ_{n∈σ_j} v_n)_j` for a partition `{σ_j}` of `0..v.len()`.
pub fn aggregate(v: &[f64], blocks: &[Vec<usize>]) -> Result<CoeffVector> {
    let mut seen = vec![false; v.len()];
    for b in blocks {
        if b.is_empty() {
            return Err(Error::input("empty block in partition"));
        }
        for &i in b {
            if i >= v.len() {
                return Err(Error::input(format!("index {i} out of range for length {}", v.len())));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::input(format!("index {i} appears in more than one block")));
            }
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::input(format!("index {i} is not covered by any block")));
    }
    Ok(blocks.iter().map(|b| b.iter().map(|&i| v[i]).sum()).collect())
}

impl fmt::Display for SymmetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SpaceKind::Lp { p } => write!(f, "lp:{p}"),
            SpaceKind::Lorentz {
                p,
                weights: WeightRule::Harmonic,
            } => write!(f, "lorentz:p={p},w=harmonic"),
            SpaceKind::Lorentz {
                p,
                weights: WeightRule::Explicit(w),
            } => {
                let w: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                write!(f, "lorentz:p={p},w={}", w.join(","))
            }
        }
    }
}

/// Parses `lp:<p>`, `lorentz:p=<p>,w=harmonic` or `lorentz:p=<p>,w=<w1>,<w2>,…`.
impl FromStr for SymmetricSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::parse("space", format!("{msg} in descriptor {s:?}"));
        let (family, rest) = s.trim().split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let num = |t: &str| -> Result<f64> { t.trim().parse::<f64>().map_err(|_| bad(&format!("bad number {t:?}"))) };
        match family {
            "lp" => Self::lp(num(rest)?),
            "lorentz" => {
                let rest = rest.trim();
                let after_p = rest.strip_prefix("p=").ok_or_else(|| bad("expected p=<p>"))?;
                let (p, w) = after_p.split_once(",w=").ok_or_else(|| bad("expected ,w=<rule>"))?;
                let p = num(p)?;
                let rule = if w.trim() == "harmonic" {
                    WeightRule::Harmonic
                } else {
                    WeightRule::Explicit(w.split(',').map(num).collect::<Result<_>>()?)
                };
                Self::lorentz(p, rule)
            }
            other => Err(bad(&format!("unknown space family {other:?}"))),
        }
    }
}
