//! Convex-combination experiments on successive blocks of the basis.
//!
//! Blocks `σ_k` have `2^{n_k}` elements and normalizing constants
//! `λ_k = ‖Σ_{n∈σ_k} e_n‖_X⁻¹`. A selection `I_k ⊂ σ_k` (or fractional weights
//! `α_n ∈ [0,1]`) is admissible when `Σ_k #I_k / 2^{n_k} ≤ 1`; the quantity of
//! interest is `‖Σ_k λ_k Σ_{n∈I_k} e_n‖_X`, which stays bounded for `ℓ_p` and
//! grows along suitable schedules in the harmonic Lorentz spaces.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::funcspace::{Partition1D, MAX_RADEMACHER};
use crate::jfnorm::search::{search_segments, segment_vector};
use crate::jfnorm::{dual_for, Family, Mode, NormCertificate, SearchConfig, SearchStats};
use crate::rational::{dyadic, Rational};
use crate::symnorm::SymmetricSpace;

/// Largest materialized dimension `Σ 2^{n_k}`.
pub const MAX_DIMENSION: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub enum Selection {
    /// `#I_k` per block; which positions are selected is irrelevant by symmetry.
    Sizes(Vec<u64>),
    /// Explicit positions `I_k ⊂ {0, …, 2^{n_k} − 1}` per block.
    Positions(Vec<Vec<usize>>),
    /// Weights `α_n ∈ [0,1]` for every position of every block.
    Weights(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CcpInstance {
    nk: Vec<u32>,
    selection: Selection,
}

fn block_len(n: u32) -> Result<usize> {
    if n > 30 {
        return Err(Error::input(format!("block exponent {n} exceeds 30")));
    }
    Ok(1usize << n)
}

impl CcpInstance {
    pub fn new(nk: Vec<u32>, selection: Selection) -> Result<Self> {
        if nk.contains(&0) || nk.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::input(format!(
                "block exponents must be positive and strictly increasing: {nk:?}"
            )));
        }
        Self::new_unordered(nk, selection)
    }

    /// Like [`CcpInstance::new`] but only requires positive exponents.
    fn new_unordered(nk: Vec<u32>, selection: Selection) -> Result<Self> {
        let lens = nk.iter().map(|&n| block_len(n)).collect::<Result<Vec<_>>>()?;
        let dim: usize = lens.iter().sum();
        if dim > MAX_DIMENSION {
            return Err(Error::input(format!("total dimension {dim} exceeds {MAX_DIMENSION}")));
        }
        let blocks = match &selection {
            Selection::Sizes(s) => s.len(),
            Selection::Positions(p) => p.len(),
            Selection::Weights(w) => w.len(),
        };
        if blocks != nk.len() {
            return Err(Error::input(format!("{} blocks but {blocks} selections", nk.len())));
        }
        match &selection {
            Selection::Sizes(s) => {
                for (k, (&sz, &len)) in s.iter().zip(&lens).enumerate() {
                    if sz as usize > len {
                        return Err(Error::input(format!("block {k}: #I_k = {sz} exceeds 2^n_k = {len}")));
                    }
                }
                let sum: Rational = s.iter().zip(&nk).map(|(&sz, &n)| dyadic(sz as i64, n)).sum();
                check_density(&sum)?;
            }
            Selection::Positions(p) => {
                for (k, (pos, &len)) in p.iter().zip(&lens).enumerate() {
                    let mut seen = vec![false; len];
                    for &i in pos {
                        if i >= len || std::mem::replace(&mut seen[i], true) {
                            return Err(Error::input(format!("block {k}: position {i} invalid or repeated")));
                        }
                    }
                }
                let sum: Rational = p.iter().zip(&nk).map(|(pos, &n)| dyadic(pos.len() as i64, n)).sum();
                check_density(&sum)?;
            }
            Selection::Weights(w) => {
                let mut sum = 0.0;
                for (k, (ws, (&len, &n))) in w.iter().zip(lens.iter().zip(&nk)).enumerate() {
                    if ws.len() != len {
                        return Err(Error::input(format!(
                            "block {k}: {} weights for {len} positions",
                            ws.len()
                        )));
                    }
                    if let Some(a) = ws.iter().find(|a| !(0.0..=1.0).contains(*a)) {
                        return Err(Error::input(format!("block {k}: weight {a} outside [0,1]")));
                    }
                    sum += ws.iter().sum::<f64>() / 2f64.powi(n as i32);
                }
                if sum > 1.0 + 1e-12 {
                    return Err(Error::input(format!("density sum Σ_k Σ α_n / 2^n_k = {sum} exceeds 1")));
                }
            }
        }
        Ok(Self { nk, selection })
    }

    pub fn nk(&self) -> &[u32] {
        &self.nk
    }

    pub fn selection(&self) -> &Selection {
        &self.selection
    }

    pub fn dimension(&self) -> usize {
        self.nk.iter().map(|&n| 1usize << n).sum()
    }

    /// The coefficient vector at positions `0..dimension()`, blocks in order.
    pub fn materialize(&self, space: &SymmetricSpace) -> Result<Vec<f64>> {
        let mut v = vec![0.0; self.dimension()];
        let mut offset = 0;
        for (k, &n) in self.nk.iter().enumerate() {
            let len = 1usize << n;
            let lambda = 1.0 / space.fundamental(len)?;
            match &self.selection {
                Selection::Sizes(s) => v[offset..offset + s[k] as usize].fill(lambda),
                Selection::Positions(p) => p[k].iter().for_each(|&i| v[offset + i] = lambda),
                Selection::Weights(w) => {
                    for (i, a) in w[k].iter().enumerate() {
                        v[offset + i] = lambda * a;
                    }
                }
            }
            offset += len;
        }
        Ok(v)
    }
}

fn check_density(sum: &Rational) -> Result<()> {
    if *sum > Rational::one() {
        return Err(Error::input(format!("density sum Σ_k #I_k / 2^n_k = {sum} exceeds 1")));
    }
    Ok(())
}

/// `‖Σ_k λ_k Σ_{n∈I_k} α_n e_n‖_X`.
pub fn value(space: &SymmetricSpace, inst: &CcpInstance) -> Result<f64> {
    space.norm(&inst.materialize(space)?)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shrink {
    /// `#I_k = 2^{n_k} / 2^k`.
    Halving,
    /// `#I_k = 2^{n_k} · r_k`.
    Ratios(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub blocks: usize,
    pub value: f64,
    /// Same instance evaluated in `ℓ_p`.
    pub control: f64,
    /// Logarithmic lower estimate `(Σ_k max(0, n_k − n_{k−1} − 2)/n_k)^{1/p}`,
    /// `n_0 = 0`. Reported alongside, never used as the value.
    pub asymptotic: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    /// Set when later prefixes were skipped for exceeding [`MAX_DIMENSION`].
    pub truncated: bool,
}

fn selection_sizes(schedule: &[u32], shrink: &Shrink) -> Result<Vec<u64>> {
    let ratios: Vec<Rational> = match shrink {
        Shrink::Halving => (1..=schedule.len()).map(|k| dyadic(1, k as u32)).collect(),
        Shrink::Ratios(r) => {
            if r.len() != schedule.len() {
                return Err(Error::input(format!(
                    "{} ratios for {} blocks",
                    r.len(),
                    schedule.len()
                )));
            }
            r.clone()
        }
    };
    let total: Rational = ratios.iter().sum();
    if total > Rational::one() || ratios.iter().any(|r| r.is_negative()) {
        return Err(Error::input(format!(
            "block ratios must be nonnegative with sum <= 1, got sum {total}"
        )));
    }
    schedule
        .iter()
        .zip(&ratios)
        .enumerate()
        .map(|(k, (&n, r))| {
            let size = r * Rational::from_integer(BigInt::one() << n);
            if !size.is_integer() {
                return Err(Error::input(format!("block {}: 2^{n} * {r} is not an integer", k + 1)));
            }
            size.to_integer()
                .to_u64()
                .ok_or_else(|| Error::input(format!("block {}: selection size overflows", k + 1)))
        })
        .collect()
}

/// Prefix values `K = 1, …, len(schedule)` of the block instance in `space`,
/// with the `ℓ_p` control at the same exponent.
pub fn growth(space: &SymmetricSpace, schedule: &[u32], shrink: &Shrink) -> Result<GrowthReport> {
    if schedule.contains(&0) || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input(format!(
            "schedule must be positive and strictly increasing: {schedule:?}"
        )));
    }
    let control_space = SymmetricSpace::lp(space.exponent())?;
    let p = space.exponent();
    let sizes = selection_sizes(schedule, shrink)?;
    let mut rows = vec![];
    let mut asym = 0.0;
    let mut prev = 0u32;
    for k in 1..=schedule.len() {
        let nk = schedule[k - 1];
        asym += (nk as f64 - prev as f64 - 2.0).max(0.0) / nk as f64;
        prev = nk;
        let dim: usize = schedule[..k].iter().map(|&n| 1usize << n.min(40)).sum();
        if schedule[k - 1] > 30 || dim > MAX_DIMENSION {
            return Ok(GrowthReport { rows, truncated: true });
        }
        let inst = CcpInstance::new(schedule[..k].to_vec(), Selection::Sizes(sizes[..k].to_vec()))?;
        rows.push(GrowthRow {
            blocks: k,
            value: value(space, &inst)?,
            control: value(&control_space, &inst)?,
            asymptotic: asym.powf(1.0 / p),
        });
    }
    Ok(GrowthReport { rows, truncated: false })
}

/// [`growth`] in the harmonic Lorentz space `d(1/n, p)`.
pub fn lorentz_growth(p: f64, schedule: &[u32], shrink: &Shrink) -> Result<GrowthReport> {
    growth(&SymmetricSpace::harmonic_lorentz(p)?, schedule, shrink)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremeReport {
    pub dimension: usize,
    pub candidates: usize,
    pub candidate_max: f64,
    /// Weights of a maximizing candidate, blocks concatenated.
    pub argmax: Vec<f64>,
    pub samples: usize,
    pub sample_max: f64,
    /// `C + 1`.
    pub bound: f64,
}

impl ExtremeReport {
    pub fn samples_dominated(&self) -> bool {
        self.sample_max <= self.candidate_max + 1e-9
    }

    pub fn within_bound(&self) -> bool {
        self.candidate_max <= self.bound + 1e-12
    }
}

/// Brute-force check that the maximum of the weighted block norm over the
/// admissible weight polytope sits at a vertex (all weights in `{0,1}` except
/// at most one), and that it is at most `C + 1`.
pub fn extreme_bound_check(
    space: &SymmetricSpace,
    nk: &[u32],
    c: f64,
    samples: usize,
    seed: u64,
) -> Result<ExtremeReport> {
    if nk.is_empty() || nk.contains(&0) {
        return Err(Error::input("block exponents must be positive"));
    }
    let lens = nk.iter().map(|&n| block_len(n)).collect::<Result<Vec<_>>>()?;
    let dim: usize = lens.iter().sum();
    if dim > 16 {
        return Err(Error::input(format!("brute-force dimension {dim} exceeds 16")));
    }
    let mut lambda = vec![];
    let mut cost = vec![];
    for (&n, &len) in nk.iter().zip(&lens) {
        let l = 1.0 / space.fundamental(len)?;
        for _ in 0..len {
            lambda.push(l);
            cost.push(dyadic(1, n));
        }
    }
    let eval = |alpha: &[f64]| -> Result<f64> {
        let v: Vec<f64> = alpha.iter().zip(&lambda).map(|(a, l)| a * l).collect();
        space.norm(&v)
    };

    let mut candidates = 0;
    let mut best = (f64::NEG_INFINITY, vec![]);
    for mask in 0u32..1 << dim {
        let used: Rational = (0..dim).filter(|i| mask >> i & 1 == 1).map(|i| cost[i].clone()).sum();
        if used > Rational::one() {
            continue;
        }
        let base: Vec<f64> = (0..dim).map(|i| (mask >> i & 1) as f64).collect();
        let mut consider = |alpha: Vec<f64>| -> Result<()> {
            candidates += 1;
            let v = eval(&alpha)?;
            if v > best.0 {
                best = (v, alpha);
            }
            Ok(())
        };
        consider(base.clone())?;
        let slack = Rational::one() - &used;
        for j in (0..dim).filter(|j| mask >> j & 1 == 0) {
            let frac = &slack / &cost[j];
            if frac.is_positive() && frac < Rational::one() {
                let mut alpha = base.clone();
                alpha[j] = crate::rational::to_f64(&frac);
                consider(alpha)?;
            }
        }
    }

    let costs: Vec<f64> = cost.iter().map(crate::rational::to_f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample_max: f64 = 0.0;
    for _ in 0..samples {
        let mut alpha: Vec<f64> = (0..dim)
            .map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen::<f64>() })
            .collect();
        let s: f64 = alpha.iter().zip(&costs).map(|(a, c)| a * c).sum();
        if s > 1.0 {
            alpha.iter_mut().for_each(|a| *a /= s);
        }
        sample_max = sample_max.max(eval(&alpha)?);
    }
    Ok(ExtremeReport {
        dimension: dim,
        candidates,
        candidate_max: best.0,
        argmax: best.1,
        samples,
        sample_max,
        bound: c + 1.0,
    })
}

/// JF norm of `Σ_{n∈indices} r_n / ‖r_n‖_{JF_X}` using `‖r_n‖ = λ_n⁻¹ 2⁻ⁿ`
/// with `λ_n⁻¹ = ‖e_1 + … + e_{2^n}‖_X`.
pub fn rademacher_sum_norm(space: &SymmetricSpace, indices: &[u32], cfg: &SearchConfig) -> Result<NormCertificate> {
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input(format!(
            "indices must be strictly increasing: {indices:?}"
        )));
    }
    let Some(&top) = indices.last() else {
        return Ok(NormCertificate {
            value: 0.0,
            mode: Mode::Exact,
            family: Family::Partition(Partition1D::trivial()),
            dual: dual_for(space, &Partition1D::trivial().intervals(), &[0.0])?,
            stats: SearchStats::default(),
        });
    };
    if top > MAX_RADEMACHER {
        return Err(Error::input(format!("rademacher index {top} exceeds {MAX_RADEMACHER}")));
    }
    let start = std::time::Instant::now();
    let coeffs: Vec<f64> = indices
        .iter()
        .map(|&n| Ok(2f64.powi(n as i32) / space.fundamental(1usize << n)?))
        .collect::<Result<_>>()?;
    let pieces = 1usize << top;
    let width = 2f64.powi(-(top as i32));
    let mut prefix = Vec::with_capacity(pieces + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for i in 0..pieces {
        let height: f64 = indices
            .iter()
            .zip(&coeffs)
            .map(|(&n, c)| if (i >> (top - n)) % 2 == 0 { *c } else { -*c })
            .sum();
        acc += height * width;
        prefix.push(acc);
    }
    let out = search_segments(space, &prefix, None, cfg)?;
    let partition = Partition1D::new(out.cuts.iter().map(|&c| dyadic(c as i64, top)).collect())?;
    let v = segment_vector(&prefix, &out.cuts);
    Ok(NormCertificate {
        value: space.norm(&v)?,
        mode: if out.exhaustive { Mode::Exact } else { Mode::LowerBound },
        dual: dual_for(space, &partition.intervals(), &v)?,
        family: Family::Partition(partition),
        stats: SearchStats {
            nodes: out.nodes,
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
    })
}

/// Zero weights as a weighted instance, used by reports and tests.
pub fn zero_weights(nk: &[u32]) -> Result<CcpInstance> {
    let w = nk
        .iter()
        .map(|&n| block_len(n).map(|l| vec![0.0; l]))
        .collect::<Result<_>>()?;
    CcpInstance::new_unordered(nk.to_vec(), Selection::Weights(w))
}
