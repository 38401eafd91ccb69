//! Finitely described functions on `(0,1)^d`.
//!
//! Every breakpoint, cut and value is an exact rational, so integrals over
//! boxes are exact. Pieces are treated as open intervals or boxes: boundaries
//! carry no mass.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{dyadic, int, Rational};

/// An axis-parallel open box `Π (lo_d, hi_d)` inside the unit cube.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cuboid {
    lo: Vec<Rational>,
    hi: Vec<Rational>,
}

impl Cuboid {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::input(format!(
                "box corners must have equal positive dimension, got {} and {}",
                lo.len(),
                hi.len()
            )));
        }
        for (axis, (a, b)) in lo.iter().zip(&hi).enumerate() {
            if a.is_negative() || *b > Rational::one() {
                return Err(Error::input(format!("box axis {axis} leaves [0,1]: ({a}, {b})")));
            }
            if a >= b {
                return Err(Error::input(format!("box axis {axis} is empty: ({a}, {b})")));
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn interval(a: Rational, b: Rational) -> Result<Self> {
        Self::new(vec![a], vec![b])
    }

    pub fn unit(dim: usize) -> Self {
        Self {
            lo: vec![Rational::zero(); dim],
            hi: vec![Rational::one(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Rational] {
        &self.lo
    }

    pub fn hi(&self) -> &[Rational] {
        &self.hi
    }

    /// Side length `m_d(T)` along `axis`.
    pub fn side(&self, axis: usize) -> Rational {
        &self.hi[axis] - &self.lo[axis]
    }

    pub fn volume(&self) -> Rational {
        (0..self.dim()).map(|a| self.side(a)).product()
    }

    /// Open boxes are disjoint iff they are separated along some axis.
    pub fn is_disjoint(&self, other: &Cuboid) -> bool {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(other.lo.iter().zip(&other.hi))
            .any(|((a0, b0), (a1, b1))| b0 <= a1 || b1 <= a0)
    }
}

/// Length of `(a,b) ∩ (c,d)`.
fn overlap(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Rational {
    let lo = if a > c { a } else { c };
    let hi = if b < d { b } else { d };
    if hi > lo {
        hi - lo
    } else {
        Rational::zero()
    }
}

fn validate_cuts(points: &[Rational], what: &str) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::input(format!("{what} needs at least two points")));
    }
    if !points[0].is_zero() || !points[points.len() - 1].is_one() {
        return Err(Error::input(format!("{what} must start at 0 and end at 1")));
    }
    if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::input(format!(
            "{what} must be strictly increasing, found {} then {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Functions that can be integrated exactly over boxes.
pub trait Integrable {
    fn dim(&self) -> usize;

    /// `∫_T f dμ` for a box `T` of matching dimension.
    fn integrate(&self, region: &Cuboid) -> Result<Rational>;
}

/// A step function on `(0,1)`: value `values[i]` on `(breakpoints[i], breakpoints[i+1])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction1D {
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
}

impl StepFunction1D {
    pub fn new(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        validate_cuts(&breakpoints, "breakpoints")?;
        if values.len() + 1 != breakpoints.len() {
            return Err(Error::input(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                values.len()
            )));
        }
        Ok(Self { breakpoints, values })
    }

    pub fn constant(c: Rational) -> Self {
        Self {
            breakpoints: vec![Rational::zero(), Rational::one()],
            values: vec![c],
        }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    /// Indicator-style function from disjoint intervals `(a, b, value)`; zero elsewhere.
    pub fn from_pieces(pieces: &[(Rational, Rational, Rational)]) -> Result<Self> {
        let mut sorted: Vec<_> = pieces.to_vec();
        sorted.sort_by(|x, y| x.0.cmp(&y.0));
        let mut bps = vec![Rational::zero()];
        let mut vals = vec![];
        for (a, b, v) in sorted {
            let last = bps.last().unwrap().clone();
            if a < last || a >= b || b > Rational::one() {
                return Err(Error::input(format!("piece ({a}, {b}) overlaps or leaves [0,1]")));
            }
            if a > last {
                vals.push(Rational::zero());
                bps.push(a);
            }
            vals.push(v);
            bps.push(b);
        }
        if !bps.last().unwrap().is_one() {
            vals.push(Rational::zero());
            bps.push(Rational::one());
        }
        Self::new(bps, vals)
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn pieces(&self) -> usize {
        self.values.len()
    }

    /// `α_i (t_i − t_{i−1})` for each piece.
    pub fn piece_masses(&self) -> Vec<Rational> {
        self.values
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(v, w)| v * (&w[1] - &w[0]))
            .collect()
    }

    pub fn total_integral(&self) -> Rational {
        self.piece_masses().into_iter().sum()
    }

    pub fn l1_norm(&self) -> Rational {
        self.piece_masses().iter().map(|m| m.abs()).sum()
    }

    pub fn integrate_interval(&self, a: &Rational, b: &Rational) -> Rational {
        self.values
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(v, w)| v * overlap(a, b, &w[0], &w[1]))
            .sum()
    }

    /// Same function with adjacent equal-valued pieces merged.
    pub fn merged(&self) -> Self {
        let mut bps = vec![self.breakpoints[0].clone()];
        let mut vals: Vec<Rational> = vec![];
        for (i, v) in self.values.iter().enumerate() {
            if vals.last() == Some(v) {
                *bps.last_mut().unwrap() = self.breakpoints[i + 1].clone();
            } else {
                vals.push(v.clone());
                bps.push(self.breakpoints[i + 1].clone());
            }
        }
        Self {
            breakpoints: bps,
            values: vals,
        }
    }

    pub fn value_at_piece(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    /// `Σ c_i f_i` on the common refinement of the breakpoint sets.
    pub fn linear_combination(terms: &[(Rational, &StepFunction1D)]) -> Self {
        let mut bps: Vec<Rational> = terms.iter().flat_map(|(_, f)| f.breakpoints.iter().cloned()).collect();
        bps.push(Rational::zero());
        bps.push(Rational::one());
        bps.sort();
        bps.dedup();
        let values = bps
            .windows(2)
            .map(|w| terms.iter().map(|(c, f)| c * f.value_on(&w[0], &w[1])).sum())
            .collect();
        Self {
            breakpoints: bps,
            values,
        }
    }

    /// Value on an open interval lying inside a single piece.
    fn value_on(&self, a: &Rational, b: &Rational) -> Rational {
        let mid = (a + b) / int(2);
        let i = self.breakpoints.partition_point(|t| t <= &mid);
        self.values[i.saturating_sub(1).min(self.values.len() - 1)].clone()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }
}

impl Integrable for StepFunction1D {
    fn dim(&self) -> usize {
        1
    }

    fn integrate(&self, region: &Cuboid) -> Result<Rational> {
        if region.dim() != 1 {
            return Err(Error::input(format!(
                "cannot integrate a 1-D step function over a {}-D box",
                region.dim()
            )));
        }
        Ok(self.integrate_interval(&region.lo[0], &region.hi[0]))
    }
}

/// Step function on a rectangular grid of `(0,1)^d`. Cells are stored in
/// row-major order with axis 0 varying slowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridFunction {
    cuts: Vec<Vec<Rational>>,
    cells: Vec<Rational>,
}

impl GridFunction {
    pub fn new(cuts: Vec<Vec<Rational>>, cells: Vec<Rational>) -> Result<Self> {
        if cuts.is_empty() {
            return Err(Error::input("grid function needs at least one axis"));
        }
        for (axis, c) in cuts.iter().enumerate() {
            validate_cuts(c, &format!("cuts on axis {axis}"))?;
        }
        let count: usize = cuts.iter().map(|c| c.len() - 1).product();
        if cells.len() != count {
            return Err(Error::input(format!(
                "grid shape needs {count} cell values, got {}",
                cells.len()
            )));
        }
        Ok(Self { cuts, cells })
    }

    pub fn from_step(f: &StepFunction1D) -> Self {
        Self {
            cuts: vec![f.breakpoints.clone()],
            cells: f.values.clone(),
        }
    }

    /// Inverse of [`GridFunction::from_step`] for 1-D grids.
    pub fn to_step(&self) -> Result<StepFunction1D> {
        if self.dim() != 1 {
            return Err(Error::input(format!(
                "expected a 1-D grid, got dimension {}",
                self.dim()
            )));
        }
        StepFunction1D::new(self.cuts[0].clone(), self.cells.clone())
    }

    pub fn dim(&self) -> usize {
        self.cuts.len()
    }

    pub fn cuts(&self) -> &[Vec<Rational>] {
        &self.cuts
    }

    pub fn cells(&self) -> &[Rational] {
        &self.cells
    }

    /// Cells per axis.
    pub fn shape(&self) -> Vec<usize> {
        self.cuts.iter().map(|c| c.len() - 1).collect()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_index(&self, idx: &[usize]) -> usize {
        let shape = self.shape();
        idx.iter().zip(&shape).fold(0, |acc, (i, n)| acc * n + i)
    }

    pub fn cell_at(&self, idx: &[usize]) -> &Rational {
        &self.cells[self.cell_index(idx)]
    }

    /// Box spanned by cell index ranges `[start, end)` on each axis.
    pub fn aligned_box(&self, start: &[usize], end: &[usize]) -> Cuboid {
        Cuboid {
            lo: start.iter().zip(&self.cuts).map(|(&s, c)| c[s].clone()).collect(),
            hi: end.iter().zip(&self.cuts).map(|(&e, c)| c[e].clone()).collect(),
        }
    }

    pub fn cell_volume(&self, idx: &[usize]) -> Rational {
        idx.iter().zip(&self.cuts).map(|(&i, c)| &c[i + 1] - &c[i]).product()
    }

    /// `value × volume` per cell, in storage order.
    pub fn cell_masses(&self) -> Vec<Rational> {
        let shape = self.shape();
        let mut out = Vec::with_capacity(self.cells.len());
        for_each_index(&shape, |idx| {
            out.push(self.cell_at(idx) * self.cell_volume(idx));
        });
        out
    }

    pub fn total_integral(&self) -> Rational {
        self.cell_masses().into_iter().sum()
    }

    pub fn l1_norm(&self) -> Rational {
        self.cell_masses().iter().map(|m| m.abs()).sum()
    }

    /// Cylinder extension `f(x) χ_{(0,1)^{d₁−d₀}}` into dimension `target_dim`.
    pub fn lift(&self, target_dim: usize) -> Result<Self> {
        if target_dim <= self.dim() {
            return Err(Error::input(format!(
                "lift target dimension {target_dim} must exceed current dimension {}",
                self.dim()
            )));
        }
        let mut cuts = self.cuts.clone();
        cuts.resize(target_dim, vec![Rational::zero(), Rational::one()]);
        Ok(Self {
            cuts,
            cells: self.cells.clone(),
        })
    }
}

impl Integrable for GridFunction {
    fn dim(&self) -> usize {
        self.cuts.len()
    }

    fn integrate(&self, region: &Cuboid) -> Result<Rational> {
        if region.dim() != self.dim() {
            return Err(Error::input(format!(
                "box dimension {} does not match grid dimension {}",
                region.dim(),
                self.dim()
            )));
        }
        let per_axis: Vec<Vec<Rational>> = self
            .cuts
            .iter()
            .enumerate()
            .map(|(a, c)| {
                c.windows(2)
                    .map(|w| overlap(&region.lo[a], &region.hi[a], &w[0], &w[1]))
                    .collect()
            })
            .collect();
        let mut total = Rational::zero();
        for_each_index(&self.shape(), |idx| {
            let mut vol = Rational::one();
            for (a, &i) in idx.iter().enumerate() {
                if per_axis[a][i].is_zero() {
                    return;
                }
                vol *= &per_axis[a][i];
            }
            total += self.cell_at(idx) * vol;
        });
        Ok(total)
    }
}

/// Calls `f` on every multi-index below `shape`, row-major.
pub(crate) fn for_each_index(shape: &[usize], mut f: impl FnMut(&[usize])) {
    if shape.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; shape.len()];
    loop {
        f(&idx);
        let mut axis = shape.len();
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < shape[axis] {
                break;
            }
            idx[axis] = 0;
        }
    }
}

/// A partition `0 = t_0 < … < t_m = 1` of `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition1D {
    points: Vec<Rational>,
}

impl Partition1D {
    pub fn new(points: Vec<Rational>) -> Result<Self> {
        validate_cuts(&points, "partition points")?;
        Ok(Self { points })
    }

    pub fn trivial() -> Self {
        Self {
            points: vec![Rational::zero(), Rational::one()],
        }
    }

    /// Uniform partition with `n` cells.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("uniform partition needs at least one cell"));
        }
        Ok(Self {
            points: (0..=n)
                .map(|i| Rational::new((i as i64).into(), (n as i64).into()))
                .collect(),
        })
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.points.windows(2).map(|w| (&w[0], &w[1]))
    }

    pub fn cell_count(&self) -> usize {
        self.points.len() - 1
    }

    /// Width `δ(P)`: the longest cell.
    pub fn width(&self) -> Rational {
        self.cells().map(|(a, b)| b - a).max().unwrap()
    }

    pub fn intervals(&self) -> Vec<Cuboid> {
        self.cells()
            .map(|(a, b)| Cuboid::interval(a.clone(), b.clone()).expect("valid partition cell"))
            .collect()
    }
}

/// Largest Rademacher index accepted by [`rademacher`].
pub const MAX_RADEMACHER: u32 = 24;

/// `r_n`: `±1` on the `2^n` dyadic pieces, `+1` on the first.
pub fn rademacher(n: u32) -> Result<StepFunction1D> {
    if n > MAX_RADEMACHER {
        return Err(Error::input(format!("rademacher index {n} exceeds {MAX_RADEMACHER}")));
    }
    let pieces = 1usize << n;
    let breakpoints = (0..=pieces).map(|i| dyadic(i as i64, n)).collect();
    let values = (0..pieces).map(|i| if i % 2 == 0 { int(1) } else { int(-1) }).collect();
    StepFunction1D::new(breakpoints, values)
}

/// Haar function `h_k`, `k ≥ 1`: `h_1 = χ_{(0,1)}` and for `k = 2^m + i`,
/// `1 ≤ i ≤ 2^m`, `+1` on `((2i−2)/2^{m+1}, (2i−1)/2^{m+1})` and `−1` on
/// `((2i−1)/2^{m+1}, 2i/2^{m+1})`.
pub fn haar(k: u64) -> Result<StepFunction1D> {
    if k == 0 {
        return Err(Error::input("haar functions are indexed from 1"));
    }
    if k == 1 {
        return Ok(StepFunction1D::constant(int(1)));
    }
    let m = 63 - (k - 1).leading_zeros();
    if m > 40 {
        return Err(Error::input(format!("haar index {k} too large")));
    }
    let i = (k - (1u64 << m)) as i64;
    let a = dyadic(2 * i - 2, m + 1);
    let mid = dyadic(2 * i - 1, m + 1);
    let b = dyadic(2 * i, m + 1);
    StepFunction1D::from_pieces(&[(a, mid.clone(), int(1)), (mid, b, int(-1))])
}

/// `(m, i)` with `k = 2^m + i`, `1 ≤ i ≤ 2^m`, for `k ≥ 2`.
pub fn haar_level(k: u64) -> Option<(u32, u64)> {
    if k < 2 {
        return None;
    }
    let m = 63 - (k - 1).leading_zeros();
    Some((m, k - (1u64 << m)))
}

/// One term `x_n` of the non-weakly-null Haar subsequence together with its
/// first (positive) piece.
#[derive(Debug, Clone)]
pub struct ConcentratingTerm {
    pub function: StepFunction1D,
    pub start: Rational,
    pub mid: Rational,
    pub end: Rational,
}

/// `x_n = χ_{[β_n/D_n, (β_n+1)/D_n]} − χ_{((β_n+1)/D_n, (β_n+2)/D_n]}` with
/// `D_n = 2^{k₁} 8^{n−1}` and `β_n = 8 β_{n−1} + 2`.
pub fn haar_concentrating(beta1: u64, k1: u32, count: usize) -> Result<Vec<ConcentratingTerm>> {
    if beta1 == 0 || k1 == 0 {
        return Err(Error::input("beta1 and k1 must be positive"));
    }
    if k1 > 60 {
        return Err(Error::input(format!("k1 = {k1} too large")));
    }
    let mut out = Vec::with_capacity(count);
    let mut beta = num_bigint::BigInt::from(beta1);
    let mut denom = num_bigint::BigInt::one() << k1;
    for n in 1..=count {
        if n > 1 {
            beta = beta * 8 + 2;
            denom *= 8;
        }
        let start = Rational::new(beta.clone(), denom.clone());
        let mid = Rational::new(&beta + 1, denom.clone());
        let end = Rational::new(&beta + 2, denom.clone());
        if end > Rational::one() {
            return Err(Error::input(format!(
                "term {n} ends at {end}, outside (0,1); choose beta1 + 2 <= 2^k1"
            )));
        }
        let function = StepFunction1D::from_pieces(&[
            (start.clone(), mid.clone(), int(1)),
            (mid.clone(), end.clone(), int(-1)),
        ])?;
        out.push(ConcentratingTerm {
            function,
            start,
            mid,
            end,
        });
    }
    Ok(out)
}

/// Limit `β₀ = β₁/2^{k₁} + 2/(7·2^{k₁})` of the left endpoints.
pub fn concentration_limit(beta1: u64, k1: u32) -> Rational {
    let d = num_bigint::BigInt::one() << k1;
    Rational::new(num_bigint::BigInt::from(beta1), d.clone()) + Rational::new(2.into(), d * 7)
}

/// Successive intervals `A_1 < A_2 < …` with `μ(A_{2n−1}) = μ(A_{2n})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSystem {
    intervals: Vec<(Rational, Rational)>,
}

impl PairSystem {
    pub fn new(intervals: Vec<(Rational, Rational)>) -> Result<Self> {
        if intervals.is_empty() || !intervals.len().is_multiple_of(2) {
            return Err(Error::input(format!(
                "pair system needs a positive even number of intervals, got {}",
                intervals.len()
            )));
        }
        let mut prev_end = Rational::zero();
        for (j, (a, b)) in intervals.iter().enumerate() {
            if a < &prev_end || a >= b || b > &Rational::one() {
                return Err(Error::input(format!(
                    "interval {j} = ({a}, {b}) is empty, outside [0,1] or not after its predecessor"
                )));
            }
            prev_end = b.clone();
        }
        for (n, pair) in intervals.chunks(2).enumerate() {
            let m0 = &pair[0].1 - &pair[0].0;
            let m1 = &pair[1].1 - &pair[1].0;
            if m0 != m1 {
                return Err(Error::input(format!(
                    "pair {} has unequal measures {m0} and {m1}",
                    n + 1
                )));
            }
        }
        Ok(Self { intervals })
    }

    /// Pairs `(k/2^m, (k+1)/2^m)` for consecutive `k`, taking `count` pairs.
    pub fn dyadic(level: u32, count: usize) -> Result<Self> {
        if 2 * count > (1usize << level) {
            return Err(Error::input(format!(
                "{count} pairs do not fit at dyadic level {level}"
            )));
        }
        Self::new(
            (0..2 * count)
                .map(|k| (dyadic(k as i64, level), dyadic(k as i64 + 1, level)))
                .collect(),
        )
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn pair_count(&self) -> usize {
        self.intervals.len() / 2
    }

    /// `A_{2n−1}` (zero-based `n`).
    pub fn odd_interval(&self, n: usize) -> &(Rational, Rational) {
        &self.intervals[2 * n]
    }

    pub fn pair_measure(&self, n: usize) -> Rational {
        let (a, b) = self.odd_interval(n);
        b - a
    }

    /// Normalized generators `y_n / μ(A_{2n−1})`.
    pub fn generators(&self) -> Vec<StepFunction1D> {
        self.intervals
            .chunks(2)
            .map(|pair| {
                let h = (&pair[0].1 - &pair[0].0).recip();
                StepFunction1D::from_pieces(&[
                    (pair[0].0.clone(), pair[0].1.clone(), h.clone()),
                    (pair[1].0.clone(), pair[1].1.clone(), -h),
                ])
                .expect("validated pair system")
            })
            .collect()
    }

    /// `Σ a_n y_n / μ(A_{2n−1})` for exact coefficients.
    pub fn combination(&self, coeffs: &[Rational]) -> Result<StepFunction1D> {
        if coeffs.len() != self.pair_count() {
            return Err(Error::input(format!(
                "expected {} coefficients, got {}",
                self.pair_count(),
                coeffs.len()
            )));
        }
        let mut pieces = vec![];
        for (pair, c) in self.intervals.chunks(2).zip(coeffs) {
            let h = c / (&pair[0].1 - &pair[0].0);
            pieces.push((pair[0].0.clone(), pair[0].1.clone(), h.clone()));
            pieces.push((pair[1].0.clone(), pair[1].1.clone(), -h));
        }
        StepFunction1D::from_pieces(&pieces)
    }
}

/// Normalized generators for successive equal-measure pairs.
pub fn block_pair_sequence(intervals: Vec<(Rational, Rational)>) -> Result<Vec<StepFunction1D>> {
    Ok(PairSystem::new(intervals)?.generators())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn step(bps: &[(i64, i64)], vals: &[i64]) -> StepFunction1D {
        StepFunction1D::new(
            bps.iter().map(|&(n, d)| rat(n, d)).collect(),
            vals.iter().map(|&v| int(v)).collect(),
        )
        .unwrap()
    }

    fn checkerboard() -> GridFunction {
        let c = vec![int(0), rat(1, 2), int(1)];
        GridFunction::new(vec![c.clone(), c], vec![int(1), int(-1), int(-1), int(1)]).unwrap()
    }

    #[test]
    fn integrate_examples() {
        let one = StepFunction1D::constant(int(1));
        assert_eq!(
            one.integrate(&Cuboid::interval(int(0), rat(1, 2)).unwrap()).unwrap(),
            rat(1, 2)
        );
        let r1 = rademacher(1).unwrap();
        assert_eq!(r1.integrate(&Cuboid::unit(1)).unwrap(), int(0));
        let b = Cuboid::new(vec![rat(1, 4), int(0)], vec![rat(3, 4), rat(1, 2)]).unwrap();
        assert_eq!(checkerboard().integrate(&b).unwrap(), int(0));
        let q = Cuboid::new(vec![int(0), int(0)], vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(checkerboard().integrate(&q).unwrap(), rat(1, 4));
    }

    #[test]
    fn integrate_dimension_mismatch() {
        assert!(checkerboard().integrate(&Cuboid::unit(1)).is_err());
        assert!(rademacher(2).unwrap().integrate(&Cuboid::unit(2)).is_err());
    }

    #[test]
    fn box_validation() {
        assert!(Cuboid::interval(rat(1, 2), rat(1, 2)).is_err());
        assert!(Cuboid::interval(rat(-1, 2), rat(1, 2)).is_err());
        assert!(Cuboid::interval(int(0), rat(3, 2)).is_err());
        assert!(Cuboid::new(vec![int(0)], vec![]).is_err());
        let a = Cuboid::interval(int(0), rat(1, 2)).unwrap();
        let b = Cuboid::interval(rat(1, 2), int(1)).unwrap();
        assert!(a.is_disjoint(&b));
        assert!(!a.is_disjoint(&Cuboid::unit(1)));
    }

    #[test]
    fn step_validation() {
        assert!(StepFunction1D::new(vec![int(0), int(1)], vec![]).is_err());
        assert!(StepFunction1D::new(vec![int(0), rat(1, 2)], vec![int(1)]).is_err());
        assert!(StepFunction1D::new(vec![int(0), rat(1, 2), rat(1, 2), int(1)], vec![int(1); 3]).is_err());
        assert!(GridFunction::new(vec![vec![int(0), int(1)]], vec![int(1), int(2)]).is_err());
    }

    #[test]
    fn rademacher_examples() {
        assert_eq!(rademacher(0).unwrap(), StepFunction1D::constant(int(1)));
        assert_eq!(rademacher(1).unwrap(), step(&[(0, 1), (1, 2), (1, 1)], &[1, -1]));
        assert_eq!(rademacher(2).unwrap().values(), &[int(1), int(-1), int(1), int(-1)]);
        assert!(rademacher(MAX_RADEMACHER + 1).is_err());
    }

    #[test]
    fn haar_examples() {
        assert_eq!(haar(1).unwrap(), StepFunction1D::constant(int(1)));
        assert_eq!(haar(2).unwrap(), step(&[(0, 1), (1, 2), (1, 1)], &[1, -1]));
        // k = 5 = 2^2 + 1: first dyadic pair at level 3.
        let h5 = haar(5).unwrap();
        assert_eq!(h5, step(&[(0, 1), (1, 8), (1, 4), (1, 1)], &[1, -1, 0]));
        let h6 = haar(6).unwrap();
        assert_eq!(h6, step(&[(0, 1), (1, 4), (3, 8), (1, 2), (1, 1)], &[0, 1, -1, 0]));
        let support: Rational = h6
            .values()
            .iter()
            .zip(h6.breakpoints().windows(2))
            .filter(|(v, _)| !v.is_zero())
            .map(|(_, w)| &w[1] - &w[0])
            .sum();
        assert_eq!(support, rat(1, 4));
        assert!(haar(0).is_err());
    }

    #[test]
    fn haar_integrals_vanish() {
        for k in 2..=64 {
            assert!(haar(k).unwrap().total_integral().is_zero(), "h_{k}");
        }
    }

    #[test]
    fn haar_supports_nest_dyadically() {
        // The support of h_{k+1} lies inside one constancy piece of Σ_{i≤k} h_i.
        for k in 1..40u64 {
            let terms: Vec<_> = (1..=k).map(|i| haar(i).unwrap()).collect();
            let refs: Vec<_> = terms.iter().map(|h| (int(1), h)).collect();
            let sum = StepFunction1D::linear_combination(&refs);
            let next = haar(k + 1).unwrap();
            let nz: Vec<_> = next
                .values()
                .iter()
                .zip(next.breakpoints().windows(2))
                .filter(|(v, _)| !v.is_zero())
                .map(|(_, w)| (w[0].clone(), w[1].clone()))
                .collect();
            let (lo, hi) = (&nz[0].0, &nz[nz.len() - 1].1);
            let inside = sum.breakpoints().iter().all(|t| !(t > lo && t < hi));
            assert!(inside, "support of h_{} crosses a breakpoint", k + 1);
        }
    }

    #[test]
    fn haar_concentrating_examples() {
        let xs = haar_concentrating(1, 2, 1).unwrap();
        let x1 = &xs[0];
        assert_eq!(
            (x1.start.clone(), x1.mid.clone(), x1.end.clone()),
            (rat(1, 4), rat(1, 2), rat(3, 4))
        );
        let xs = haar_concentrating(1, 2, 2).unwrap();
        assert_eq!(xs[1].start, rat(10, 32));
        assert_eq!(concentration_limit(1, 2), rat(9, 28));
        assert!(haar_concentrating(3, 2, 1).is_err());
    }

    #[test]
    fn haar_concentrating_mass_bound() {
        for (beta1, k1) in [(1u64, 2u32), (1, 3), (2, 3), (5, 4), (3, 5)] {
            let beta0 = concentration_limit(beta1, k1);
            let left = Rational::new(beta1.into(), (num_bigint::BigInt::one()) << k1);
            for (n, x) in haar_concentrating(beta1, k1, 12).unwrap().iter().enumerate() {
                let ratio = x.function.integrate_interval(&left, &beta0) / (&x.mid - &x.start);
                assert!(ratio >= rat(1, 4), "beta1={beta1} k1={k1} n={}: {ratio}", n + 1);
            }
        }
    }

    #[test]
    fn pair_sequence_examples() {
        let ys = block_pair_sequence(vec![(int(0), rat(1, 4)), (rat(1, 4), rat(1, 2))]).unwrap();
        assert_eq!(ys[0], step(&[(0, 1), (1, 4), (1, 2), (1, 1)], &[4, -4, 0]));
        let two = PairSystem::dyadic(2, 2).unwrap().generators();
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].integrate_interval(&rat(1, 2), &int(1)), int(0));
        assert_eq!(two[1].integrate_interval(&int(0), &rat(1, 2)), int(0));
        assert!(block_pair_sequence(vec![(int(0), rat(1, 4)), (rat(1, 4), int(1))]).is_err());
        assert!(block_pair_sequence(vec![(int(0), rat(1, 4))]).is_err());
        assert!(block_pair_sequence(vec![(rat(1, 4), rat(1, 2)), (int(0), rat(1, 4))]).is_err());
    }

    #[test]
    fn merged_and_linear_combination() {
        let f = step(&[(0, 1), (1, 4), (1, 2), (1, 1)], &[2, 2, -1]);
        assert_eq!(f.merged(), step(&[(0, 1), (1, 2), (1, 1)], &[2, -1]));
        let g = StepFunction1D::linear_combination(&[(int(1), &haar(1).unwrap()), (int(1), &haar(2).unwrap())]);
        assert_eq!(g.merged(), step(&[(0, 1), (1, 2), (1, 1)], &[2, 0]));
    }

    #[test]
    fn grid_lift_and_step_round_trip() {
        let f = step(&[(0, 1), (1, 3), (1, 1)], &[2, -1]);
        let g = GridFunction::from_step(&f);
        assert_eq!(g.to_step().unwrap(), f);
        let lifted = g.lift(2).unwrap();
        assert_eq!(lifted.shape(), vec![2, 1]);
        assert_eq!(lifted.total_integral(), f.total_integral());
        assert!(g.lift(1).is_err());
        assert!(lifted.to_step().is_err());
    }

    #[test]
    fn partition_width() {
        let p = Partition1D::new(vec![int(0), rat(1, 3), rat(1, 2), int(1)]).unwrap();
        assert_eq!(p.width(), rat(1, 2));
        assert_eq!(Partition1D::uniform(4).unwrap().width(), rat(1, 4));
        assert!(Partition1D::new(vec![int(0)]).is_err());
        assert!(Partition1D::new(vec![rat(1, 4), int(1)]).is_err());
    }
}
