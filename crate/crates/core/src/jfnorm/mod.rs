//! The James function space norm
//! `‖f‖_{JF_X} = sup { ‖Σ_j (∫_{T_j} f) e_j‖_X : {T_j} pairwise disjoint boxes }`.
//!
//! In one dimension the supremum over arbitrary disjoint intervals is
//! attained on a partition whose points are breakpoints of `f`, so the search
//! is finite and the result exact. For `d ≥ 2` the search runs over
//! grid-aligned boxes only and `Mode::Exact` means exact relative to that
//! family.

mod grid;
pub(crate) mod search;

use std::time::Instant;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspace::{Cuboid, GridFunction, Integrable, PairSystem, Partition1D, StepFunction1D};
use crate::rational::{to_f64, Rational};
use crate::symnorm::{CoeffVector, SymmetricSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// The search space was provably exhausted.
    Exact,
    /// Best value found before the search budget ran out.
    LowerBound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Largest piece count handled by exhaustive enumeration for non-`ℓ_p` norms.
    pub exhaustive_limit: usize,
    /// Largest grid cell count searched without a node budget.
    pub cell_limit: usize,
    /// Allow budgeted branch and bound beyond `exhaustive_limit`.
    pub bounded: bool,
    pub node_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            exhaustive_limit: 22,
            cell_limit: 9,
            bounded: false,
            node_budget: 20_000_000,
        }
    }
}

impl SearchConfig {
    pub fn bounded() -> Self {
        Self {
            bounded: true,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Partition(Partition1D),
    Boxes(Vec<Cuboid>),
}

impl Family {
    pub fn boxes(&self) -> Vec<Cuboid> {
        match self {
            Family::Partition(p) => p.intervals(),
            Family::Boxes(b) => b.clone(),
        }
    }
}

/// A functional `Σ a_n T_n*` with disjoint boxes `T_n` and `‖(a_n)‖_{X*} ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualFunctional {
    boxes: Vec<Cuboid>,
    coefficients: CoeffVector,
}

impl DualFunctional {
    pub fn new(space: &SymmetricSpace, boxes: Vec<Cuboid>, coefficients: CoeffVector) -> Result<Self> {
        if boxes.len() != coefficients.len() {
            return Err(Error::input(format!(
                "{} boxes but {} coefficients",
                boxes.len(),
                coefficients.len()
            )));
        }
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                if !boxes[i].is_disjoint(&boxes[j]) {
                    return Err(Error::input(format!("boxes {i} and {j} overlap")));
                }
            }
        }
        let dn = space.dual_norm(&coefficients)?;
        if dn > 1.0 + 1e-12 {
            return Err(Error::input(format!("coefficient dual norm {dn} exceeds 1")));
        }
        Ok(Self { boxes, coefficients })
    }

    pub fn boxes(&self) -> &[Cuboid] {
        &self.boxes
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }
}

/// `⟨φ, f⟩ = Σ a_n ∫_{T_n} f`.
pub fn eval_dual<F: Integrable + ?Sized>(phi: &DualFunctional, f: &F) -> Result<f64> {
    let mut total = 0.0;
    for (b, a) in phi.boxes.iter().zip(&phi.coefficients) {
        total += a * to_f64(&f.integrate(b)?);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormCertificate {
    pub value: f64,
    pub mode: Mode,
    pub family: Family,
    pub dual: Option<DualFunctional>,
    pub stats: SearchStats,
}

impl NormCertificate {
    /// Recomputes `‖(∫_{T_j} f)_j‖_X` over the certificate family.
    pub fn reevaluate<F: Integrable + ?Sized>(&self, space: &SymmetricSpace, f: &F) -> Result<f64> {
        family_value(space, f, &self.family.boxes())
    }
}

fn family_value<F: Integrable + ?Sized>(space: &SymmetricSpace, f: &F, boxes: &[Cuboid]) -> Result<f64> {
    let v = boxes
        .iter()
        .map(|b| f.integrate(b).map(|r| to_f64(&r)))
        .collect::<Result<Vec<_>>>()?;
    space.norm(&v)
}

/// `τ(Q, f) = ‖Σ_j (∫_{I_j} f) e_j‖_X`.
pub fn tau(space: &SymmetricSpace, f: &StepFunction1D, q: &Partition1D) -> Result<f64> {
    let v: Vec<f64> = q.cells().map(|(a, b)| to_f64(&f.integrate_interval(a, b))).collect();
    space.norm(&v)
}

/// Norm of an arbitrary family of pairwise disjoint boxes (not checked).
pub fn family_norm<F: Integrable + ?Sized>(space: &SymmetricSpace, f: &F, boxes: &[Cuboid]) -> Result<f64> {
    family_value(space, f, boxes)
}

pub(crate) fn dual_for(space: &SymmetricSpace, boxes: &[Cuboid], v: &[f64]) -> Result<Option<DualFunctional>> {
    if space.lp_exponent().is_none() {
        return Ok(None);
    }
    let coeffs = if v.iter().all(|x| *x == 0.0) {
        vec![0.0; v.len()]
    } else {
        space.norming_coefficients(v)?
    };
    DualFunctional::new(space, boxes.to_vec(), coeffs).map(Some)
}

/// Exact JF norm of a step function on `(0,1)`, with an achieving partition
/// and, for `ℓ_p`, a norming functional that attains it.
pub fn norm1d(space: &SymmetricSpace, f: &StepFunction1D, cfg: &SearchConfig) -> Result<NormCertificate> {
    let start = Instant::now();
    let g = f.merged();
    let mut sums = vec![Rational::zero()];
    for m in g.piece_masses() {
        let next = sums.last().unwrap() + m;
        sums.push(next);
    }
    let prefix: Vec<f64> = sums.iter().map(to_f64).collect();
    let out = search::search_segments(space, &prefix, None, cfg)?;
    let points: Vec<Rational> = out.cuts.iter().map(|&c| g.breakpoints()[c].clone()).collect();
    let partition = Partition1D::new(points)?;
    let boxes = partition.intervals();
    let v: Vec<f64> = out
        .cuts
        .windows(2)
        .map(|w| to_f64(&(&sums[w[1]] - &sums[w[0]])))
        .collect();
    let value = space.norm(&v)?;
    debug_assert!((value - out.value).abs() <= 1e-9 * value.max(1.0));
    Ok(NormCertificate {
        value,
        mode: if out.exhaustive { Mode::Exact } else { Mode::LowerBound },
        dual: dual_for(space, &boxes, &v)?,
        family: Family::Partition(partition),
        stats: SearchStats {
            nodes: out.nodes,
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
    })
}

/// JF norm over disjoint grid-aligned boxes for `d ≥ 2`; 1-D grids are
/// handed to [`norm1d`].
pub fn norm_grid(space: &SymmetricSpace, f: &GridFunction, cfg: &SearchConfig) -> Result<NormCertificate> {
    if f.dim() == 1 {
        return norm1d(space, &f.to_step()?, cfg);
    }
    let start = Instant::now();
    if space.lp_exponent().is_none() {
        space.norm(&vec![1.0; f.cell_count()])?;
    }
    let budget = if f.cell_count() <= cfg.cell_limit {
        u64::MAX
    } else {
        cfg.node_budget
    };
    let out = grid::search_tilings(space, f, budget);
    let boxes: Vec<Cuboid> = out.boxes.iter().map(|b| b.to_cuboid(f)).collect();
    let v = boxes
        .iter()
        .map(|b| f.integrate(b).map(|r| to_f64(&r)))
        .collect::<Result<Vec<_>>>()?;
    let value = space.norm(&v)?;
    debug_assert!((value - out.value).abs() <= 1e-9 * value.max(1.0));
    Ok(NormCertificate {
        value,
        mode: if out.exhaustive { Mode::Exact } else { Mode::LowerBound },
        dual: dual_for(space, &boxes, &v)?,
        family: Family::Boxes(boxes),
        stats: SearchStats {
            nodes: out.nodes,
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
    })
}

/// Cylinder extension of `f` to dimension `target_dim`.
pub fn lift(f: &GridFunction, target_dim: usize) -> Result<GridFunction> {
    f.lift(target_dim)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// `∫_{A_{2n−1}} f` for each pair.
    pub coefficients: Vec<Rational>,
    /// `Σ_n (∫_{A_{2n−1}} f) y_n / μ(A_{2n−1})`.
    pub projected: StepFunction1D,
}

impl Projection {
    pub fn coefficients_f64(&self) -> CoeffVector {
        self.coefficients.iter().map(to_f64).collect()
    }
}

/// The projection onto the span of the normalized pair generators.
pub fn project_blockwise(f: &StepFunction1D, pairs: &PairSystem) -> Result<Projection> {
    let coefficients: Vec<Rational> = (0..pairs.pair_count())
        .map(|n| {
            let (a, b) = pairs.odd_interval(n);
            f.integrate_interval(a, b)
        })
        .collect();
    let projected = pairs.combination(&coefficients)?;
    Ok(Projection {
        coefficients,
        projected,
    })
}
