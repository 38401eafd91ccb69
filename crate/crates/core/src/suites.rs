//! Seeded invariant suites. Each check reports the worst slack
//! `bound + tolerance − measured` over its cases; a check passes when that
//! slack is nonnegative.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ccp::{self, CcpInstance, Selection, Shrink};
use crate::error::{Error, Result};
use crate::funcspace::{haar, Cuboid, GridFunction, PairSystem, Partition1D, StepFunction1D};
use crate::jfnorm::{self, eval_dual, family_norm, DualFunctional, Mode, SearchConfig};
use crate::rational::{int, rat, to_f64, Rational};
use crate::symnorm::{aggregate, SymmetricSpace};
use crate::variation::{self, SampledPath};

pub const SUITES: [&str; 5] = ["symnorm", "jfnorm", "variation", "ccp", "all"];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub property: &'static str,
    pub cases: usize,
    pub slack: f64,
}

impl Check {
    pub fn pass(&self) -> bool {
        self.cases > 0 && self.slack >= 0.0
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<9} {:<26} slack={:<12.3e} cases={:<7} {}",
            if self.pass() { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.slack,
            self.cases,
            self.property
        )
    }
}

/// Running minimum of `rhs + tol − lhs` for claims `lhs ≤ rhs`.
#[derive(Debug)]
struct Slack {
    min: f64,
    cases: usize,
}

impl Slack {
    fn new() -> Self {
        Self {
            min: f64::INFINITY,
            cases: 0,
        }
    }

    fn le(&mut self, lhs: f64, rhs: f64, tol: f64) {
        let s = rhs + tol - lhs;
        self.min = self.min.min(if s.is_nan() { f64::NEG_INFINITY } else { s });
        self.cases += 1;
    }

    fn eq(&mut self, a: f64, b: f64, tol: f64) {
        self.le((a - b).abs(), 0.0, tol);
    }

    fn holds(&mut self, ok: bool) {
        self.le(if ok { 0.0 } else { 1.0 }, 0.0, 0.0);
    }

    fn check(self, suite: &'static str, name: &'static str, property: &'static str) -> Check {
        Check {
            suite,
            name,
            property,
            cases: self.cases,
            slack: if self.cases == 0 { f64::NEG_INFINITY } else { self.min },
        }
    }
}

/// Random inputs shared by the suites and the test targets.
pub mod sample {
    use super::*;

    pub fn rational_in_unit(rng: &mut impl Rng) -> Rational {
        let d: i64 = rng.gen_range(2..=24);
        rat(rng.gen_range(1..d), d)
    }

    /// Distinct sorted interior points, at most `max` of them.
    pub fn interior_points(rng: &mut impl Rng, max: usize) -> Vec<Rational> {
        let k = rng.gen_range(0..=max);
        let mut pts: Vec<Rational> = (0..k).map(|_| rational_in_unit(rng)).collect();
        pts.sort();
        pts.dedup();
        pts
    }

    fn value(rng: &mut impl Rng, nonneg: bool) -> Rational {
        let d: i64 = rng.gen_range(1..=4);
        let n: i64 = if nonneg {
            rng.gen_range(0..=8)
        } else {
            rng.gen_range(-8..=8)
        };
        rat(n, d)
    }

    /// Step function with at most `max_pieces` pieces.
    pub fn step(rng: &mut impl Rng, max_pieces: usize, nonneg: bool) -> StepFunction1D {
        let mut bps = vec![Rational::zero()];
        bps.extend(interior_points(rng, max_pieces.saturating_sub(1)));
        bps.push(Rational::one());
        let values = (1..bps.len()).map(|_| value(rng, nonneg)).collect();
        StepFunction1D::new(bps, values).expect("sorted distinct breakpoints")
    }

    /// Partition of `[0,1]` with at most `max_points` points (endpoints included).
    pub fn partition(rng: &mut impl Rng, max_points: usize) -> Partition1D {
        let mut pts = vec![Rational::zero()];
        pts.extend(interior_points(rng, max_points.saturating_sub(2)));
        pts.push(Rational::one());
        Partition1D::new(pts).expect("sorted distinct points")
    }

    pub fn vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect()
    }

    /// Successive intervals with equal measure inside each pair, random gaps.
    pub fn pair_system(rng: &mut impl Rng, pairs: usize) -> PairSystem {
        let widths: Vec<i64> = (0..pairs).map(|_| rng.gen_range(1..=4)).collect();
        let gaps: Vec<i64> = (0..=2 * pairs).map(|_| rng.gen_range(0..=2)).collect();
        let total: i64 = 2 * widths.iter().sum::<i64>() + gaps.iter().sum::<i64>();
        let mut at = 0;
        let mut intervals = vec![];
        for (n, w) in widths.iter().enumerate() {
            for j in 0..2 {
                at += gaps[2 * n + j];
                intervals.push((rat(at, total), rat(at + w, total)));
                at += w;
            }
        }
        PairSystem::new(intervals).expect("valid by construction")
    }
}

fn spaces() -> Vec<SymmetricSpace> {
    let mut v: Vec<SymmetricSpace> = [1.5, 2.0, 3.0]
        .iter()
        .map(|&p| SymmetricSpace::lp(p).unwrap())
        .collect();
    v.push(SymmetricSpace::harmonic_lorentz(1.0).unwrap());
    v.push(SymmetricSpace::harmonic_lorentz(2.0).unwrap());
    v
}

fn lp_spaces() -> Vec<SymmetricSpace> {
    [1.5, 2.0, 3.0]
        .iter()
        .map(|&p| SymmetricSpace::lp(p).unwrap())
        .collect()
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            go(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = vec![];
    go(0, n, &mut vec![], &mut out);
    out
}

pub fn symnorm_suite(seed: u64) -> Result<Vec<Check>> {
    const S: &str = "symnorm";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm = Slack::new();
    let mut uncond = Slack::new();
    let mut tri = Slack::new();
    for sp in spaces() {
        for _ in 0..100 {
            let n = rng.gen_range(1..=12);
            let v = sample::vector(&mut rng, n);
            let w = sample::vector(&mut rng, n);
            let nv = sp.norm(&v)?;
            let mut pv = v.clone();
            pv.shuffle(&mut rng);
            perm.eq(sp.norm(&pv)?, nv, 1e-12 * nv.max(1.0));
            let signed: Vec<f64> = v.iter().map(|x| if rng.gen_bool(0.5) { -x } else { *x }).collect();
            uncond.eq(sp.norm(&signed)?, nv, 1e-12 * nv.max(1.0));
            let mut zeroed = v.clone();
            zeroed[rng.gen_range(0..n)] = 0.0;
            uncond.le(sp.norm(&zeroed)?, nv, 1e-12 * nv.max(1.0));
            let sum: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
            let nw = sp.norm(&w)?;
            tri.le(sp.norm(&sum)?, nv + nw, 1e-12 * (nv + nw).max(1.0));
            let c: f64 = rng.gen_range(-4.0..4.0);
            let scaled: Vec<f64> = v.iter().map(|x| c * x).collect();
            tri.eq(sp.norm(&scaled)?, c.abs() * nv, 1e-12 * (c.abs() * nv).max(1.0));
        }
    }

    let mut agg = Slack::new();
    for sp in spaces() {
        for n in 1..=6 {
            let parts = set_partitions(n);
            for _ in 0..4 {
                let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
                let nv = sp.norm(&v)?;
                for blocks in &parts {
                    agg.le(nv, sp.norm(&aggregate(&v, blocks)?)?, 1e-12 * nv.max(1.0));
                }
            }
        }
    }

    let mut dom = Slack::new();
    let mut gap = Slack::new();
    for sp in lp_spaces() {
        for _ in 0..100 {
            let m = rng.gen_range(1..=6);
            let dim = rng.gen_range(m..=32);
            let mut order: Vec<usize> = (0..dim).collect();
            order.shuffle(&mut rng);
            let a = sample::vector(&mut rng, m);
            let mut total = vec![0.0; dim];
            // Disjoint supports: consecutive chunks of a random ordering.
            let cuts: Vec<usize> = {
                let mut c: Vec<usize> = (1..dim).collect();
                c.shuffle(&mut rng);
                let mut c: Vec<usize> = c.into_iter().take(m - 1).collect();
                c.sort();
                c
            };
            let bounds: Vec<usize> = std::iter::once(0).chain(cuts).chain(std::iter::once(dim)).collect();
            for (i, w) in bounds.windows(2).enumerate() {
                let u: Vec<f64> = (w[0]..w[1]).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let nu = sp.norm(&u)?;
                if nu == 0.0 {
                    continue;
                }
                for (k, x) in (w[0]..w[1]).zip(&u) {
                    total[order[k]] += a[i] * x / nu;
                }
            }
            let na = sp.norm(&a)?;
            dom.le(sp.norm(&total)?, na, 1e-12 * na.max(1.0));

            let len = rng.gen_range(1..=16);
            let v = sample::vector(&mut rng, len);
            let nv = sp.norm(&v)?;
            if nv > 0.0 {
                let beta = sp.norming_coefficients(&v)?;
                let pairing: f64 = beta.iter().zip(&v).map(|(b, x)| b * x).sum();
                gap.eq(pairing, nv, 1e-12 * nv);
                gap.eq(sp.dual_norm(&beta)?, 1.0, 1e-12);
            }
        }
    }

    Ok(vec![
        perm.check(S, "permutation_invariance", "norm(πv) = norm(v)"),
        uncond.check(S, "unconditionality", "sign changes preserve, zeroing never increases"),
        tri.check(S, "triangle_homogeneity", "subadditive and absolutely homogeneous"),
        agg.check(
            S,
            "block_aggregation",
            "nonneg v: norm of block sums >= norm(v), all partitions n<=6",
        ),
        dom.check(
            S,
            "block_domination",
            "ℓ_p: normalized disjoint blocks dominated by the basis, C=1",
        ),
        gap.check(S, "norming_gap", "ℓ_p: <β,v> = norm(v) and dual norm of β is 1"),
    ])
}

/// Random non-grid-aligned disjoint boxes in the unit square: a random
/// guillotine split into at most `max_boxes` boxes, each shrunk by a
/// random amount, some dropped.
fn random_box_family(rng: &mut impl Rng, max_boxes: usize) -> Vec<Cuboid> {
    let mut boxes = vec![Cuboid::unit(2)];
    while boxes.len() < max_boxes && rng.gen_bool(0.8) {
        let i = rng.gen_range(0..boxes.len());
        let b = boxes.swap_remove(i);
        let axis = rng.gen_range(0..2);
        let t = rat(rng.gen_range(1..64), 64);
        let cut = &b.lo()[axis] + t * b.side(axis);
        let mut hi = b.hi().to_vec();
        hi[axis] = cut.clone();
        let mut lo = b.lo().to_vec();
        lo[axis] = cut;
        boxes.push(Cuboid::new(b.lo().to_vec(), hi).expect("nonempty"));
        boxes.push(Cuboid::new(lo, b.hi().to_vec()).expect("nonempty"));
    }
    let mut out = vec![];
    for b in boxes {
        if !rng.gen_bool(0.85) {
            continue;
        }
        let mut lo = vec![];
        let mut hi = vec![];
        for a in 0..2 {
            lo.push(&b.lo()[a] + b.side(a) * rat(rng.gen_range(0..8), 64));
            hi.push(&b.hi()[a] - b.side(a) * rat(rng.gen_range(0..8), 64));
        }
        out.push(Cuboid::new(lo, hi).expect("shrunk box stays nonempty"));
    }
    out
}

fn grid(rows: &[Rational], cols: &[Rational], cells: Vec<Rational>) -> GridFunction {
    GridFunction::new(vec![rows.to_vec(), cols.to_vec()], cells).expect("valid grid")
}

pub fn jfnorm_suite(seed: u64) -> Result<Vec<Check>> {
    const S: &str = "jfnorm";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = SearchConfig::default();
    let l2 = SymmetricSpace::lp(2.0)?;

    let mut l1 = Slack::new();
    let mut dominance = Slack::new();
    let mut cone = Slack::new();
    let mut duality = Slack::new();
    let mut closure = Slack::new();
    let mut exact = Slack::new();
    for sp in spaces() {
        for _ in 0..200 {
            let f = sample::step(&mut rng, 6, false);
            let cert = jfnorm::norm1d(&sp, &f, &cfg)?;
            exact.holds(cert.mode == Mode::Exact);
            l1.le(cert.value, to_f64(&f.l1_norm()), 1e-12);
            for _ in 0..50 {
                let q = sample::partition(&mut rng, 8);
                dominance.le(jfnorm::tau(&sp, &f, &q)?, cert.value, 1e-9);
            }
            let g = sample::step(&mut rng, 6, true);
            cone.eq(jfnorm::norm1d(&sp, &g, &cfg)?.value, to_f64(&g.total_integral()), 1e-12);
            if sp.lp_exponent().is_some() {
                let dual = cert
                    .dual
                    .as_ref()
                    .ok_or_else(|| Error::input("ℓ_p certificate without dual"))?;
                closure.eq(eval_dual(dual, &f)?, cert.value, 1e-9);
                let boxes = sample::partition(&mut rng, 6).intervals();
                let raw = sample::vector(&mut rng, boxes.len());
                let dn = sp.dual_norm(&raw)?;
                let coeffs: Vec<f64> = raw.iter().map(|c| if dn > 0.0 { c / dn } else { 0.0 }).collect();
                let phi = DualFunctional::new(&sp, boxes, coeffs)?;
                duality.le(eval_dual(&phi, &f)?, cert.value, 1e-9);
            }
        }
    }

    let mut haar_mono = Slack::new();
    let hs: Vec<StepFunction1D> = (1..=33).map(haar).collect::<Result<_>>()?;
    for sp in [SymmetricSpace::lp(2.0)?, SymmetricSpace::lp(3.0)?] {
        for _ in 0..3 {
            let a: Vec<Rational> = (0..33).map(|_| rat(rng.gen_range(-8..=8), 4)).collect();
            let mut prev = 0.0;
            for n in 1..=33 {
                let terms: Vec<(Rational, &StepFunction1D)> = a[..n].iter().cloned().zip(&hs[..n]).collect();
                let v = jfnorm::norm1d(&sp, &StepFunction1D::linear_combination(&terms), &cfg)?.value;
                if n > 1 {
                    haar_mono.le(prev, v, 1e-9);
                }
                prev = v;
            }
        }
    }

    let mut equiv = Slack::new();
    let mut proj = Slack::new();
    let wide = SearchConfig::bounded();
    for sp in spaces() {
        for t in 0..40 {
            let pairs = match t % 4 {
                0 => PairSystem::dyadic(2, rng.gen_range(1..=2))?,
                1 => PairSystem::dyadic(3, rng.gen_range(1..=4))?,
                _ => {
                    let count = rng.gen_range(1..=6);
                    sample::pair_system(&mut rng, count)
                }
            };
            let a: Vec<Rational> = (0..pairs.pair_count()).map(|_| rat(rng.gen_range(-8..=8), 3)).collect();
            let af: Vec<f64> = a.iter().map(to_f64).collect();
            let na = sp.norm(&af)?;
            let c = jfnorm::norm1d(&sp, &pairs.combination(&a)?, &wide)?;
            equiv.holds(c.mode == Mode::Exact);
            let v = c.value;
            equiv.le(na, v, 1e-9);
            equiv.le(v, 2.0 * na, 1e-9);

            let f = sample::step(&mut rng, 8, false);
            let nf = jfnorm::norm1d(&sp, &f, &cfg)?.value;
            let p = jfnorm::project_blockwise(&f, &pairs)?;
            let c = jfnorm::norm1d(&sp, &p.projected, &wide)?;
            proj.holds(c.mode == Mode::Exact);
            proj.le(c.value, 2.0 * nf, 1e-9);
        }
    }

    let half = [int(0), rat(1, 2), int(1)];
    let thirds = [int(0), rat(1, 3), rat(2, 3), int(1)];
    let mut stress = Slack::new();
    let mut instances = vec![grid(&half, &half, vec![int(1), int(-1), int(-1), int(1)])];
    for _ in 0..3 {
        let cells = (0..6).map(|_| int(rng.gen_range(-3..=3))).collect();
        instances.push(grid(&half, &thirds, cells));
    }
    for sp in [l2.clone(), SymmetricSpace::harmonic_lorentz(2.0)?] {
        for f in &instances {
            let best = jfnorm::norm_grid(&sp, f, &cfg)?;
            stress.holds(best.mode == Mode::Exact);
            for _ in 0..10_000 / instances.len() / 2 + 1 {
                let fam = random_box_family(&mut rng, 8);
                stress.le(family_norm(&sp, f, &fam)?, best.value, 1e-9);
            }
        }
    }

    let mut lifted = Slack::new();
    for _ in 0..25 {
        let f = sample::step(&mut rng, 3, false);
        let g = GridFunction::from_step(&f);
        let sp = &spaces()[rng.gen_range(0..5)];
        let a = jfnorm::norm1d(sp, &f, &cfg)?;
        let b = jfnorm::norm_grid(sp, &jfnorm::lift(&g, 2)?, &cfg)?;
        lifted.holds(a.mode == Mode::Exact && b.mode == Mode::Exact);
        lifted.eq(a.value, b.value, 1e-9);
    }

    Ok(vec![
        exact.check(S, "exact_mode", "1-D searches within limits report mode=exact"),
        l1.check(S, "l1_domination", "JF norm <= ‖f‖₁"),
        dominance.check(
            S,
            "dominance",
            "tau(Q,f) <= norm1d(f) for arbitrary-endpoint partitions Q",
        ),
        cone.check(S, "positive_cone", "nonneg f: JF norm = ∫f"),
        duality.check(S, "weak_duality", "<φ,f> <= JF norm for φ in the dual ball"),
        closure.check(S, "duality_closure", "ℓ_p certificate functional attains the norm"),
        haar_mono.check(S, "haar_monotone", "Haar partial sums nondecreasing in norm up to n=32"),
        equiv.check(S, "pair_equivalence", "‖a‖ <= ‖Σ a_n y_n/μ(A_2n-1)‖ <= 2‖a‖"),
        proj.check(S, "projection_bound", "‖Pf‖ <= 2‖f‖ for the pair projection"),
        stress.check(
            S,
            "grid_stress",
            "non-aligned box families never beat the grid-exact value",
        ),
        lifted.check(S, "lift_isometry", "norm unchanged by cylinder lift to d=2"),
    ])
}

fn lipschitz(path: &SampledPath) -> f64 {
    path.nodes()
        .windows(2)
        .zip(path.values().windows(2))
        .map(|(t, f)| to_f64(&((&f[1] - &f[0]) / (&t[1] - &t[0])).abs()))
        .fold(0.0, f64::max)
}

pub fn variation_suite(seed: u64) -> Result<Vec<Check>> {
    const S: &str = "variation";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = SearchConfig::default();

    let mut iso = Slack::new();
    let mut alpha_dom = Slack::new();
    for sp in spaces() {
        for _ in 0..200 {
            let f = sample::step(&mut rng, 8, false);
            let path = variation::volterra(&f);
            let vx = variation::vx_norm(&sp, &path, &cfg)?.value;
            iso.eq(vx, jfnorm::norm1d(&sp, &f, &cfg)?.value, 1e-12);
            for _ in 0..10 {
                let p = sample::partition(&mut rng, 8);
                alpha_dom.le(variation::alpha(&sp, &path, &p)?, vx, 1e-9);
            }
        }
    }

    let deltas: Vec<Rational> = (0..=6).map(|k| rat(1, 1 << k)).collect();
    let mut mono = Slack::new();
    let mut full = Slack::new();
    let mut decay = Slack::new();
    for sp in spaces() {
        for _ in 0..8 {
            let f = sample::step(&mut rng, 5, false);
            let path = variation::volterra(&f);
            let lip = lipschitz(&path);
            // Branch and bound over fine grids is budget-bound for Lorentz norms.
            let deltas = if sp.lp_exponent().is_some() {
                &deltas[..]
            } else {
                &deltas[..4]
            };
            let vals = deltas
                .iter()
                .map(|d| variation::modulus(&sp, &path, d, &cfg))
                .collect::<Result<Vec<_>>>()?;
            let vx = variation::vx_norm(&sp, &path, &cfg)?.value;
            if vals[0].mode == Mode::Exact {
                full.eq(vals[0].value, vx, 1e-12);
            }
            for w in vals.windows(2) {
                mono.le(w[1].value, w[0].value, 1e-12);
            }
            if let Some(p) = sp.lp_exponent() {
                // Width-δ increments of an L-Lipschitz path: α <= L δ^{1−1/p}.
                for (d, m) in deltas.iter().zip(&vals) {
                    decay.le(m.value, lip * to_f64(d).powf(1.0 - 1.0 / p), 1e-12);
                }
            }
        }
    }

    let mut split = Slack::new();
    for _ in 0..100 {
        let f = sample::step(&mut rng, 6, false);
        let path = variation::volterra(&f);
        let eps = rat(rng.gen_range(1..=8), 8);
        let s = variation::split(&path, &eps)?;
        let e = to_f64(&eps);
        for (i, t) in path.nodes().iter().enumerate() {
            let g = s.small.value_at(t)?;
            let h = s.spike.value_at(t)?;
            split.holds(&g + &h == path.values()[i]);
        }
        for (t, g) in s.small.nodes().iter().zip(s.small.values()) {
            let boundary_ok = path.value_at(&int(1))?.abs() <= eps;
            if boundary_ok {
                split.le(to_f64(&g.abs()), e, 1e-12);
            }
            let inside = s.regions.iter().any(|(a, b)| a < t && t < b);
            if !inside {
                split.holds(s.spike.value_at(t)?.is_zero());
            }
        }
        let measure: Rational = s.regions.iter().map(|(a, b)| b - a).sum();
        split.holds(measure == s.support_measure);
    }

    Ok(vec![
        iso.check(S, "volterra_isometry", "vx_norm(V f) = norm1d(f)"),
        alpha_dom.check(S, "alpha_dominance", "alpha(path, P) <= vx_norm(path)"),
        mono.check(S, "modulus_monotone", "modulus nondecreasing in delta"),
        full.check(S, "modulus_full_width", "modulus(path, 1) = vx_norm(path)"),
        decay.check(S, "modulus_decay", "ℓ_p: modulus(δ) <= Lip·δ^(1−1/p), so it tends to 0"),
        split.check(
            S,
            "split_soundness",
            "f = g + h at nodes, |g| <= eps, h supported in exceed regions",
        ),
    ])
}

pub fn ccp_suite(seed: u64) -> Result<Vec<Check>> {
    const S: &str = "ccp";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let random_nk = |rng: &mut ChaCha8Rng| -> Vec<u32> {
        let mut nk: Vec<u32> = (1..=8).filter(|_| rng.gen_bool(0.4)).collect();
        if nk.is_empty() {
            nk.push(rng.gen_range(1..=8));
        }
        nk
    };

    let mut subset = Slack::new();
    let mut weighted = Slack::new();
    let mut symmetry = Slack::new();
    for sp in lp_spaces() {
        for _ in 0..100 {
            let nk = random_nk(&mut rng);
            let mut budget = Rational::one();
            let mut sizes = vec![];
            for &n in &nk {
                let cap = (&budget * Rational::from_integer((1u64 << n).into()))
                    .floor()
                    .to_integer();
                let cap: u64 = cap.try_into().unwrap_or(0).min(1 << n);
                let s = rng.gen_range(0..=cap);
                budget -= rat(s as i64, 1 << n);
                sizes.push(s);
            }
            let inst = CcpInstance::new(nk.clone(), Selection::Sizes(sizes.clone()))?;
            let v = ccp::value(&sp, &inst)?;
            subset.le(v, 1.0, 1e-12);

            let positions: Vec<Vec<usize>> = nk
                .iter()
                .zip(&sizes)
                .map(|(&n, &s)| {
                    let mut all: Vec<usize> = (0..1 << n).collect();
                    all.shuffle(&mut rng);
                    all.truncate(s as usize);
                    all
                })
                .collect();
            let moved = CcpInstance::new(nk.clone(), Selection::Positions(positions))?;
            symmetry.holds(ccp::value(&sp, &moved)? == v);

            let mut w: Vec<Vec<f64>> = nk
                .iter()
                .map(|&n| (0..1 << n).map(|_| rng.gen::<f64>()).collect())
                .collect();
            let density: f64 = w
                .iter()
                .zip(&nk)
                .map(|(ws, &n)| ws.iter().sum::<f64>() / (1u64 << n) as f64)
                .sum();
            if density > 1.0 {
                w.iter_mut().flatten().for_each(|a| *a /= density * (1.0 + 1e-15));
            }
            let inst = CcpInstance::new(nk, Selection::Weights(w))?;
            weighted.le(ccp::value(&sp, &inst)?, 2.0, 1e-12);
        }
    }

    let sched: Vec<u32> = (1..=6).map(|k| k + 3).collect();
    let mut growth = Slack::new();
    for p in [1.5, 2.0] {
        let lor = ccp::lorentz_growth(p, &sched, &Shrink::Halving)?;
        let ctl = ccp::growth(&SymmetricSpace::lp(2.0)?, &sched, &Shrink::Halving)?;
        growth.holds(!lor.truncated && lor.rows.len() == sched.len());
        for w in lor.rows.windows(2) {
            growth.le(w[0].value, w[1].value, -f64::EPSILON * w[1].value);
        }
        for (r, c) in lor.rows.iter().zip(&ctl.rows).skip(1) {
            growth.le(c.value, r.value, -f64::EPSILON * r.value);
        }
    }

    let mut extreme = Slack::new();
    for (sp, nk) in [
        (SymmetricSpace::lp(2.0)?, vec![1, 1]),
        (SymmetricSpace::lp(2.0)?, vec![1, 2]),
        (SymmetricSpace::lp(3.0)?, vec![1, 1, 2]),
        (SymmetricSpace::lp(1.5)?, vec![2, 3]),
    ] {
        let r = ccp::extreme_bound_check(&sp, &nk, 1.0, 2000, rng.gen())?;
        extreme.le(r.sample_max, r.candidate_max, 1e-9);
        extreme.le(r.candidate_max, r.bound, 1e-12);
    }

    let mut rad = Slack::new();
    let l2 = SymmetricSpace::lp(2.0)?;
    let idx = [1, 3, 5, 7];
    let mut prev = 0.0;
    for k in 1..=idx.len() {
        let v = ccp::rademacher_sum_norm(&l2, &idx[..k], &SearchConfig::default())?.value;
        rad.le(prev, v, 1e-12);
        rad.le(v, 7.0, 0.0);
        prev = v;
    }

    Ok(vec![
        subset.check(S, "lp_subset_bound", "ℓ_p subset instances <= 1 (C = 1)"),
        weighted.check(S, "lp_weighted_bound", "ℓ_p weighted instances <= C + 1 = 2"),
        symmetry.check(S, "subset_symmetry", "value depends only on selection sizes"),
        growth.check(
            S,
            "lorentz_growth",
            "n_k = k+3: strictly increasing, above the ℓ₂ control for K >= 2",
        ),
        extreme.check(
            S,
            "extreme_points",
            "polytope maximum at 0/1-plus-one-fraction vertices, <= C + 1",
        ),
        rad.check(
            S,
            "rademacher_prefix",
            "ℓ₂, indices 1,3,5,7: prefix norms nondecreasing and <= 7",
        ),
    ])
}

/// Runs a named suite (see [`SUITES`]).
pub fn run(name: &str, seed: u64) -> Result<Vec<Check>> {
    match name {
        "symnorm" => symnorm_suite(seed),
        "jfnorm" => jfnorm_suite(seed),
        "variation" => variation_suite(seed),
        "ccp" => ccp_suite(seed),
        "all" => {
            let mut out = symnorm_suite(seed)?;
            out.extend(jfnorm_suite(seed)?);
            out.extend(variation_suite(seed)?);
            out.extend(ccp_suite(seed)?);
            Ok(out)
        }
        other => Err(Error::input(format!(
            "unknown suite {other:?}; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}
