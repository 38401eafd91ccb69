//! Maximization of `‖(S_{j_1} − S_{j_0}, S_{j_2} − S_{j_1}, …)‖_X` over cut
//! sequences `0 = j_0 < j_1 < … < j_m = n` of a prefix-sum array.
//!
//! This is the combinatorial core shared by the 1-D JF norm (prefix sums of
//! piece integrals) and the X-variation norm (path values at nodes).
//!
//! For `ℓ_p` the objective is `Σ |ΔS|^p`, which is separable over segments, so
//! an `O(n²)` dynamic program is exact at any size. Other symmetric norms go
//! through bitmask enumeration (small `n`) or depth-first branch and bound.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::symnorm::SymmetricSpace;

use super::SearchConfig;

#[derive(Debug, Clone)]
pub(crate) struct SegmentOutcome {
    /// Search-internal objective value of the winner (not re-evaluated).
    pub value: f64,
    /// Cut indices, always starting with `0` and ending with `n`.
    pub cuts: Vec<usize>,
    pub exhaustive: bool,
    pub nodes: u64,
}

/// Admissibility of a segment `(i, j)`; `None` allows every segment. The
/// predicate must be monotone: if `(i, j)` is rejected then so is every
/// `(i', j')` with `i' ≤ i < j ≤ j'`.
pub(crate) type Allowed<'a> = Option<&'a (dyn Fn(usize, usize) -> bool + Sync)>;

pub(crate) fn search_segments(
    space: &SymmetricSpace,
    prefix: &[f64],
    allowed: Allowed<'_>,
    cfg: &SearchConfig,
) -> Result<SegmentOutcome> {
    let n = prefix.len() - 1;
    if n == 0 {
        return Err(Error::input("segment search needs at least one piece"));
    }
    if let Some(p) = space.lp_exponent() {
        return lp_dynamic_program(p, prefix, allowed);
    }
    // Lorentz-type norms need one weight per possible segment.
    space.norm(&vec![1.0; n])?;
    if n > cfg.exhaustive_limit && !cfg.bounded {
        return Err(Error::LimitExceeded {
            what: "pieces",
            actual: n,
            limit: cfg.exhaustive_limit,
        });
    }
    if allowed.is_none() && n <= cfg.exhaustive_limit {
        return Ok(enumerate_masks(space, prefix));
    }
    let budget = if n <= cfg.exhaustive_limit {
        u64::MAX
    } else {
        cfg.node_budget
    };
    branch_and_bound(space, prefix, allowed, budget)
}

fn lp_dynamic_program(p: f64, prefix: &[f64], allowed: Allowed<'_>) -> Result<SegmentOutcome> {
    let n = prefix.len() - 1;
    // Powers are taken on a scaled copy so that tiny or huge masses neither
    // underflow nor overflow.
    let scale = prefix
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    let mut best = vec![f64::NEG_INFINITY; n + 1];
    let mut from = vec![usize::MAX; n + 1];
    best[0] = 0.0;
    let mut nodes = 0u64;
    for j in 1..=n {
        for i in (0..j).rev() {
            if !allowed.is_none_or(|a| a(i, j)) {
                break;
            }
            if best[i] == f64::NEG_INFINITY {
                continue;
            }
            nodes += 1;
            let d = ((prefix[j] - prefix[i]) / scale).abs();
            let cand = best[i] + if p == 2.0 { d * d } else { d.powf(p) };
            if cand > best[j] {
                best[j] = cand;
                from[j] = i;
            }
        }
    }
    if best[n] == f64::NEG_INFINITY {
        return Err(Error::input("no admissible partition satisfies the width constraint"));
    }
    let mut cuts = vec![n];
    let mut j = n;
    while j > 0 {
        j = from[j];
        cuts.push(j);
    }
    cuts.reverse();
    Ok(SegmentOutcome {
        value: scale * best[n].powf(1.0 / p),
        cuts,
        exhaustive: true,
        nodes,
    })
}

/// Interior cut set encoded by `mask`: bit `b` set means a cut after piece `b`.
pub(crate) fn mask_cuts(mask: u64, n: usize) -> Vec<usize> {
    let mut cuts = vec![0];
    cuts.extend((0..n - 1).filter(|b| mask >> b & 1 == 1).map(|b| b + 1));
    cuts.push(n);
    cuts
}

pub(crate) fn segment_vector(prefix: &[f64], cuts: &[usize]) -> Vec<f64> {
    cuts.windows(2).map(|w| prefix[w[1]] - prefix[w[0]]).collect()
}

/// All `2^{n−1}` partitions; ties go to the smallest mask.
fn enumerate_masks(space: &SymmetricSpace, prefix: &[f64]) -> SegmentOutcome {
    let n = prefix.len() - 1;
    let total = 1u64 << (n - 1);
    let eval = |mask: u64| -> (f64, u64) {
        let v = segment_vector(prefix, &mask_cuts(mask, n));
        (space.norm_finite(&v).unwrap_or(f64::NEG_INFINITY), mask)
    };
    let pick = |a: (f64, u64), b: (f64, u64)| {
        if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
            b
        } else {
            a
        }
    };
    let (value, mask) = (0..total)
        .into_par_iter()
        .map(eval)
        .reduce(|| (f64::NEG_INFINITY, u64::MAX), pick);
    SegmentOutcome {
        value,
        cuts: mask_cuts(mask, n),
        exhaustive: true,
        nodes: total,
    }
}

struct Dfs<'a> {
    space: &'a SymmetricSpace,
    prefix: &'a [f64],
    allowed: Allowed<'a>,
    suffix_abs: Vec<f64>,
    /// Bound on the p-th power contributed by any continuation from `i`.
    suffix_pow: Option<Vec<f64>>,
    budget: u64,
    nodes: u64,
    aborted: bool,
    best: f64,
    best_cuts: Vec<usize>,
    stack: Vec<usize>,
    coords: Vec<f64>,
}

impl Dfs<'_> {
    fn visit(&mut self, i: usize) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        let n = self.prefix.len() - 1;
        let current = self.space.norm_finite(&self.coords).unwrap_or(f64::NEG_INFINITY);
        if i == n {
            if current > self.best {
                self.best = current;
                self.best_cuts = self.stack.clone();
            }
            return;
        }
        let mut bound = current + self.suffix_abs[i];
        if let Some(h) = &self.suffix_pow {
            let p = self.space.exponent();
            bound = bound.min((current.powf(p) + h[i]).powf(1.0 / p));
        }
        if bound + 1e-12 * bound.max(1.0) <= self.best {
            return;
        }
        for j in i + 1..=n {
            if !self.allowed.is_none_or(|a| a(i, j)) {
                break;
            }
            self.coords.push(self.prefix[j] - self.prefix[i]);
            self.stack.push(j);
            self.visit(j);
            self.stack.pop();
            self.coords.pop();
            if self.aborted {
                return;
            }
        }
    }
}

/// `H[i]` with `‖c ∪ y‖^p ≤ ‖c‖^p + H[i]` for every continuation `y` from cut `i`.
///
/// With `T_r` the sum of the `r` largest `p`-th powers,
/// `‖z‖^p = Σ_{r<n} (w_r − w_{r+1}) T_r(z) + w_n T_n(z)` for decreasing weights,
/// and `T_r(c ∪ y) ≤ T_r(c) + T_r(y)`. `T_r(y)` is at most `G[r][i]`, the best
/// sum of `|ΔS|^p` over `r` disjoint admissible segments after `i`; ranks
/// beyond the table size fall back to the unrestricted maximum.
#[allow(clippy::needless_range_loop)]
fn lorentz_suffix_bound(w: &[f64], p: f64, prefix: &[f64], allowed: Allowed<'_>) -> Vec<f64> {
    let n = prefix.len() - 1;
    let rank_cap = (50_000_000 / (n * n)).max(8).min(n);
    let pow = |i: usize, j: usize| (prefix[j] - prefix[i]).abs().powf(p);
    let sweep = |prev: &[f64]| -> Vec<f64> {
        let mut g = vec![0.0f64; n + 1];
        for i in (0..n).rev() {
            let mut best = g[i + 1];
            for j in i + 1..=n {
                if !allowed.is_none_or(|a| a(i, j)) {
                    break;
                }
                best = best.max(pow(i, j) + prev[j]);
            }
            g[i] = best;
        }
        g
    };
    let mut unlimited = vec![0.0f64; n + 1];
    for i in (0..n).rev() {
        let mut best = unlimited[i + 1];
        for j in i + 1..=n {
            if !allowed.is_none_or(|a| a(i, j)) {
                break;
            }
            best = best.max(pow(i, j) + unlimited[j]);
        }
        unlimited[i] = best;
    }
    let weight = |r: usize| if r <= n { w[r - 1] } else { 0.0 };
    let mut h = vec![0.0; n + 1];
    let mut g = vec![0.0; n + 1];
    for r in 1..=rank_cap {
        g = sweep(&g);
        let coef = if r < n { weight(r) - weight(r + 1) } else { weight(n) };
        h.iter_mut().zip(&g).for_each(|(h, g)| *h += coef * g);
    }
    if rank_cap < n {
        h.iter_mut()
            .zip(&unlimited)
            .for_each(|(h, u)| *h += weight(rank_cap + 1) * u);
    }
    h
}

fn branch_and_bound(
    space: &SymmetricSpace,
    prefix: &[f64],
    allowed: Allowed<'_>,
    budget: u64,
) -> Result<SegmentOutcome> {
    let n = prefix.len() - 1;
    let mut suffix_abs = vec![0.0; n + 1];
    for k in (0..n).rev() {
        suffix_abs[k] = suffix_abs[k + 1] + (prefix[k + 1] - prefix[k]).abs();
    }
    // Incumbent from the ℓ_p relaxation with the same exponent.
    let mut best = f64::NEG_INFINITY;
    let mut best_cuts = vec![];
    if let Ok(seed) = lp_dynamic_program(space.exponent().max(1.0 + 1e-9), prefix, allowed) {
        best = space.norm_finite(&segment_vector(prefix, &seed.cuts))?;
        best_cuts = seed.cuts;
    }
    let mut dfs = Dfs {
        space,
        prefix,
        allowed,
        suffix_abs,
        suffix_pow: space
            .lorentz_weights(n)
            .map(|w| lorentz_suffix_bound(&w, space.exponent(), prefix, allowed)),
        budget,
        nodes: 0,
        aborted: false,
        best,
        best_cuts,
        stack: vec![0],
        coords: vec![],
    };
    dfs.visit(0);
    if dfs.best_cuts.is_empty() {
        return Err(Error::input("no admissible partition satisfies the width constraint"));
    }
    Ok(SegmentOutcome {
        value: dfs.best,
        cuts: dfs.best_cuts,
        exhaustive: !dfs.aborted,
        nodes: dfs.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prefix_of(masses: &[f64]) -> Vec<f64> {
        let mut p = vec![0.0];
        for m in masses {
            p.push(p.last().unwrap() + m);
        }
        p
    }

    fn brute(space: &SymmetricSpace, prefix: &[f64], allowed: Allowed<'_>) -> f64 {
        let n = prefix.len() - 1;
        (0..1u64 << (n - 1))
            .map(|m| mask_cuts(m, n))
            .filter(|c| c.windows(2).all(|w| allowed.is_none_or(|a| a(w[0], w[1]))))
            .map(|c| space.norm(&segment_vector(prefix, &c)).unwrap())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn dp_matches_brute_force() {
        let cfg = SearchConfig::default();
        let masses = [0.3, -0.7, 0.2, 0.25, -0.1, 0.6, -0.9, 0.05];
        let prefix = prefix_of(&masses);
        for p in [1.2, 2.0, 3.0, 5.5] {
            let sp = SymmetricSpace::lp(p).unwrap();
            let out = search_segments(&sp, &prefix, None, &cfg).unwrap();
            let reeval = sp.norm(&segment_vector(&prefix, &out.cuts)).unwrap();
            let b = brute(&sp, &prefix, None);
            assert!((reeval - b).abs() < 1e-12, "p={p}: {reeval} vs {b}");
            assert!((out.value - b).abs() < 1e-12);
        }
    }

    #[test]
    fn lorentz_paths_match_brute_force() {
        let masses = [0.3, -0.7, 0.2, 0.25, -0.1, 0.6, -0.9];
        let prefix = prefix_of(&masses);
        let sp = SymmetricSpace::harmonic_lorentz(1.5).unwrap();
        let b = brute(&sp, &prefix, None);
        let exh = search_segments(&sp, &prefix, None, &SearchConfig::default()).unwrap();
        assert!((exh.value - b).abs() < 1e-12);
        let bb = branch_and_bound(&sp, &prefix, None, u64::MAX).unwrap();
        assert!(bb.exhaustive);
        assert!((bb.value - b).abs() < 1e-12);
    }

    #[test]
    fn constrained_search_matches_brute_force() {
        let masses = [0.3, -0.7, 0.2, 0.25, -0.1, 0.6, -0.9, 0.4];
        let prefix = prefix_of(&masses);
        let width = |i: usize, j: usize| j - i <= 3;
        for sp in [
            SymmetricSpace::lp(2.0).unwrap(),
            SymmetricSpace::harmonic_lorentz(2.0).unwrap(),
        ] {
            let out = search_segments(&sp, &prefix, Some(&width), &SearchConfig::default()).unwrap();
            assert!(out.cuts.windows(2).all(|w| w[1] - w[0] <= 3));
            let reeval = sp.norm(&segment_vector(&prefix, &out.cuts)).unwrap();
            assert!((reeval - brute(&sp, &prefix, Some(&width))).abs() < 1e-12, "{sp}");
        }
    }

    #[test]
    fn limit_and_budget() {
        let sp = SymmetricSpace::harmonic_lorentz(2.0).unwrap();
        let masses: Vec<f64> = (0..30).map(|i: i64| ((i * 7919) % 19 - 9) as f64).collect();
        let prefix = prefix_of(&masses);
        let cfg = SearchConfig::default();
        assert!(matches!(
            search_segments(&sp, &prefix, None, &cfg),
            Err(Error::LimitExceeded { actual: 30, .. })
        ));
        let bounded = SearchConfig {
            bounded: true,
            node_budget: 1000,
            ..cfg
        };
        let out = search_segments(&sp, &prefix, None, &bounded).unwrap();
        assert!(!out.exhaustive);
        assert!(out.nodes <= 1001);
        assert!(out.value > 0.0);
    }

    #[test]
    fn tie_break_prefers_smallest_mask() {
        // All-zero masses: every partition ties at 0; mask 0 is the trivial partition.
        let sp = SymmetricSpace::harmonic_lorentz(2.0).unwrap();
        let out = search_segments(&sp, &[0.0; 5], None, &SearchConfig::default()).unwrap();
        assert_eq!(out.cuts, vec![0, 4]);
    }
}
