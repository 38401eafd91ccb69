//! Bounded X-variation of piecewise-linear paths.
//!
//! `α_X(f, P) = ‖Σ_i (f(t_{i+1}) − f(t_i)) e_i‖_X` and
//! `‖f‖_{V_X} = sup_P α_X(f, P)`. For a piecewise-linear path the derivative
//! is a step function and the Volterra map `V(g)(t) = ∫_0^t g` carries the
//! JF norm of the derivative onto the V_X norm of the path, so the same
//! breakpoint-subset search applies with node values in place of integrals.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::funcspace::{Partition1D, StepFunction1D};
use crate::jfnorm::search::{search_segments, segment_vector};
use crate::jfnorm::{Family, Mode, NormCertificate, SearchConfig, SearchStats};
use crate::rational::{to_f64, Rational};
use crate::symnorm::SymmetricSpace;

/// Piecewise-linear path through `(t_i, f(t_i))` with `t_0 = 0`, `t_n = 1`
/// and `f(0) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledPath {
    nodes: Vec<Rational>,
    values: Vec<Rational>,
}

impl SampledPath {
    pub fn new(nodes: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        Partition1D::new(nodes.clone())?;
        if values.len() != nodes.len() {
            return Err(Error::input(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        if !values[0].is_zero() {
            return Err(Error::input(format!(
                "path must satisfy f(0)=0, got f(0) = {}",
                values[0]
            )));
        }
        Ok(Self { nodes, values })
    }

    pub fn zero() -> Self {
        Self {
            nodes: vec![Rational::zero(), Rational::one()],
            values: vec![Rational::zero(), Rational::zero()],
        }
    }

    pub fn nodes(&self) -> &[Rational] {
        &self.nodes
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Linear interpolation at `t ∈ [0,1]`.
    pub fn value_at(&self, t: &Rational) -> Result<Rational> {
        if t.is_negative() || *t > Rational::one() {
            return Err(Error::input(format!("evaluation point {t} outside [0,1]")));
        }
        let k = self.nodes.partition_point(|s| s < t);
        if self.nodes.get(k) == Some(t) {
            return Ok(self.values[k].clone());
        }
        let (t0, t1) = (&self.nodes[k - 1], &self.nodes[k]);
        let (f0, f1) = (&self.values[k - 1], &self.values[k]);
        Ok(f0 + (f1 - f0) * (t - t0) / (t1 - t0))
    }

    pub fn sup_norm(&self) -> Rational {
        self.values.iter().map(|v| v.abs()).max().unwrap()
    }

    /// Slopes of the linear pieces as a step function.
    pub fn derivative(&self) -> StepFunction1D {
        let slopes = self
            .nodes
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, f)| (&f[1] - &f[0]) / (&t[1] - &t[0]))
            .collect();
        StepFunction1D::new(self.nodes.clone(), slopes).expect("valid nodes")
    }

    /// Drops interior nodes where the path does not bend.
    pub fn simplified(&self) -> Self {
        let d = self.derivative().merged();
        let values = d
            .breakpoints()
            .iter()
            .map(|t| self.value_at(t).expect("node inside [0,1]"))
            .collect();
        Self {
            nodes: d.breakpoints().to_vec(),
            values,
        }
    }
}

/// `α_X(f, P)` with path values at `P`'s points by interpolation.
pub fn alpha(space: &SymmetricSpace, path: &SampledPath, p: &Partition1D) -> Result<f64> {
    let vals = p
        .points()
        .iter()
        .map(|t| path.value_at(t))
        .collect::<Result<Vec<_>>>()?;
    let incr: Vec<f64> = vals.windows(2).map(|w| to_f64(&(&w[1] - &w[0]))).collect();
    space.norm(&incr)
}

/// `V(f)(t) = ∫_0^t f`, exact, with nodes at `f`'s breakpoints.
pub fn volterra(f: &StepFunction1D) -> SampledPath {
    let mut acc = Rational::zero();
    let mut values = vec![acc.clone()];
    for m in f.piece_masses() {
        acc += m;
        values.push(acc.clone());
    }
    SampledPath {
        nodes: f.breakpoints().to_vec(),
        values,
    }
}

/// Exact V_X norm over partitions drawn from the path's bend points.
pub fn vx_norm(space: &SymmetricSpace, path: &SampledPath, cfg: &SearchConfig) -> Result<NormCertificate> {
    let start = std::time::Instant::now();
    let s = path.simplified();
    let prefix: Vec<f64> = s.values.iter().map(to_f64).collect();
    let out = search_segments(space, &prefix, None, cfg)?;
    let partition = Partition1D::new(out.cuts.iter().map(|&c| s.nodes[c].clone()).collect())?;
    let value = alpha(space, path, &partition)?;
    Ok(NormCertificate {
        value,
        mode: if out.exhaustive { Mode::Exact } else { Mode::LowerBound },
        family: Family::Partition(partition),
        dual: None,
        stats: SearchStats {
            nodes: out.nodes,
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulusEstimate {
    pub value: f64,
    pub mode: Mode,
    pub partition: Partition1D,
}

/// Lower estimate of `sup { α_X(f, P) : δ(P) ≤ delta }`.
///
/// Candidate points are the path nodes together with the uniform grid of
/// mesh `delta/2`; the reported value is the best width-constrained partition
/// on those points, so it never exceeds the true supremum.
pub fn modulus(
    space: &SymmetricSpace,
    path: &SampledPath,
    delta: &Rational,
    cfg: &SearchConfig,
) -> Result<ModulusEstimate> {
    modulus_with_mesh(space, path, delta, &(delta / Rational::from_integer(2.into())), cfg)
}

pub fn modulus_with_mesh(
    space: &SymmetricSpace,
    path: &SampledPath,
    delta: &Rational,
    mesh: &Rational,
    cfg: &SearchConfig,
) -> Result<ModulusEstimate> {
    if !delta.is_positive() || *delta > Rational::one() {
        return Err(Error::input(format!("delta must lie in (0,1], got {delta}")));
    }
    if !mesh.is_positive() {
        return Err(Error::input(format!("mesh must be positive, got {mesh}")));
    }
    let mut points: Vec<Rational> = path.nodes.clone();
    let mut k = Rational::zero();
    while k < Rational::one() {
        points.push(k.clone());
        k += mesh;
    }
    points.sort();
    points.dedup();
    let values = points
        .iter()
        .map(|t| path.value_at(t).map(|v| to_f64(&v)))
        .collect::<Result<Vec<_>>>()?;
    // reach[i]: last index j with t_j − t_i ≤ delta.
    let mut reach = vec![0usize; points.len()];
    let mut j = 0;
    for i in 0..points.len() {
        while j + 1 < points.len() && &points[j + 1] - &points[i] <= *delta {
            j += 1;
        }
        reach[i] = j;
    }
    let allowed = |i: usize, j: usize| j <= reach[i];
    let cfg = SearchConfig {
        bounded: true,
        ..cfg.clone()
    };
    let out = search_segments(space, &values, Some(&allowed), &cfg)?;
    let partition = Partition1D::new(out.cuts.iter().map(|&c| points[c].clone()).collect())?;
    let value = space.norm(&segment_vector(&values, &out.cuts))?;
    Ok(ModulusEstimate {
        value,
        mode: if out.exhaustive { Mode::Exact } else { Mode::LowerBound },
        partition,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    /// Uniformly small part: equals the path outside the exceed regions.
    pub small: SampledPath,
    /// Remainder, supported in the exceed regions.
    pub spike: SampledPath,
    /// Maximal open intervals where `|f| > eps`.
    pub regions: Vec<(Rational, Rational)>,
    pub support_measure: Rational,
}

/// Splits `f = g + h` with `g` the linear interpolation of `f` across each
/// maximal region where `|f| > eps` (endpoints at the level crossings) and
/// `h = f − g` supported in those regions.
pub fn split(path: &SampledPath, eps: &Rational) -> Result<Split> {
    if !eps.is_positive() {
        return Err(Error::input(format!("eps must be positive, got {eps}")));
    }
    // Refine by the crossings of ±eps inside each linear piece.
    let mut pts: Vec<Rational> = path.nodes.clone();
    for (t, f) in path.nodes.windows(2).zip(path.values.windows(2)) {
        if f[0] == f[1] {
            continue;
        }
        for level in [eps.clone(), -eps.clone()] {
            let s = (&level - &f[0]) / (&f[1] - &f[0]);
            if s.is_positive() && s < Rational::one() {
                pts.push(&t[0] + s * (&t[1] - &t[0]));
            }
        }
    }
    pts.sort();
    pts.dedup();
    let vals = pts.iter().map(|t| path.value_at(t)).collect::<Result<Vec<_>>>()?;

    // Each refined piece lies entirely on one side of the level set.
    let two = Rational::from_integer(2.into());
    let exceeds: Vec<bool> = vals.windows(2).map(|w| ((&w[0] + &w[1]) / &two).abs() > *eps).collect();
    let mut regions: Vec<(usize, usize)> = vec![];
    for (k, &e) in exceeds.iter().enumerate() {
        if !e {
            continue;
        }
        match regions.last_mut() {
            Some(r) if r.1 == k => r.1 = k + 1,
            _ => regions.push((k, k + 1)),
        }
    }

    let mut small = vals.clone();
    for &(a, b) in &regions {
        let (ta, tb) = (&pts[a], &pts[b]);
        for k in a + 1..b {
            small[k] = &vals[a] + (&vals[b] - &vals[a]) * (&pts[k] - ta) / (tb - ta);
        }
    }
    let spike: Vec<Rational> = vals.iter().zip(&small).map(|(f, g)| f - g).collect();
    let regions: Vec<(Rational, Rational)> = regions.iter().map(|&(a, b)| (pts[a].clone(), pts[b].clone())).collect();
    let support_measure = regions.iter().map(|(a, b)| b - a).sum();
    Ok(Split {
        small: SampledPath::new(pts.clone(), small)?,
        spike: SampledPath::new(pts, spike)?,
        regions,
        support_measure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::haar;
    use crate::jfnorm::norm1d;
    use crate::rational::{int, rat};

    fn l2() -> SymmetricSpace {
        SymmetricSpace::lp(2.0).unwrap()
    }

    fn path(pts: &[(Rational, Rational)]) -> SampledPath {
        SampledPath::new(
            pts.iter().map(|p| p.0.clone()).collect(),
            pts.iter().map(|p| p.1.clone()).collect(),
        )
        .unwrap()
    }

    fn identity() -> SampledPath {
        path(&[(int(0), int(0)), (int(1), int(1))])
    }

    fn tent(peak: Rational) -> SampledPath {
        path(&[(int(0), int(0)), (rat(1, 2), peak), (int(1), int(0))])
    }

    #[test]
    fn path_validation() {
        assert!(SampledPath::new(vec![int(0), int(1)], vec![int(1), int(0)]).is_err());
        assert!(SampledPath::new(vec![int(0), int(1)], vec![int(0)]).is_err());
        assert!(SampledPath::new(vec![int(0), rat(1, 2)], vec![int(0), int(0)]).is_err());
    }

    #[test]
    fn interpolation() {
        let t = tent(int(1));
        assert_eq!(t.value_at(&rat(1, 4)).unwrap(), rat(1, 2));
        assert_eq!(t.value_at(&rat(1, 2)).unwrap(), int(1));
        assert_eq!(t.value_at(&int(1)).unwrap(), int(0));
        assert!(t.value_at(&rat(3, 2)).is_err());
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(&l2(), &identity(), &Partition1D::trivial()).unwrap(), 1.0);
        let p = Partition1D::new(vec![int(0), rat(1, 2), int(1)]).unwrap();
        assert!((alpha(&l2(), &tent(rat(1, 2)), &p).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(alpha(&l2(), &tent(int(5)), &Partition1D::trivial()).unwrap(), 0.0);
    }

    #[test]
    fn vx_norm_examples() {
        let cfg = SearchConfig::default();
        assert_eq!(vx_norm(&l2(), &identity(), &cfg).unwrap().value, 1.0);
        let c = vx_norm(&l2(), &tent(rat(1, 2)), &cfg).unwrap();
        assert!((c.value - 0.5f64.sqrt()).abs() < 1e-15);
        let h = norm1d(&l2(), &haar(2).unwrap(), &cfg).unwrap();
        assert!((c.value - h.value).abs() < 1e-15);
    }

    #[test]
    fn volterra_examples() {
        assert_eq!(volterra(&StepFunction1D::constant(int(1))), identity());
        assert_eq!(volterra(&haar(2).unwrap()), tent(rat(1, 2)));
        let z = volterra(&StepFunction1D::zero());
        assert!(z.values().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn derivative_inverts_volterra() {
        let f = StepFunction1D::new(
            vec![int(0), rat(1, 3), rat(3, 4), int(1)],
            vec![int(2), rat(-1, 2), int(7)],
        )
        .unwrap();
        assert_eq!(volterra(&f).derivative(), f);
    }

    #[test]
    fn modulus_examples() {
        let cfg = SearchConfig::default();
        let m = modulus(&l2(), &identity(), &rat(1, 4), &cfg).unwrap();
        assert!((m.value - 0.5).abs() < 1e-15);
        assert_eq!(m.partition, Partition1D::uniform(4).unwrap());
        assert_eq!(
            modulus(&l2(), &SampledPath::zero(), &rat(1, 8), &cfg).unwrap().value,
            0.0
        );
        assert_eq!(modulus(&l2(), &identity(), &int(1), &cfg).unwrap().value, 1.0);
        assert!(modulus(&l2(), &identity(), &int(0), &cfg).is_err());
        assert!(modulus(&l2(), &identity(), &int(2), &cfg).is_err());
    }

    #[test]
    fn split_examples() {
        let s = split(&tent(rat(1, 4)), &rat(1, 2)).unwrap();
        assert!(s.spike.values().iter().all(|v| v.is_zero()));
        assert_eq!(s.small, tent(rat(1, 4)));
        assert!(s.regions.is_empty());

        let s = split(&tent(int(1)), &rat(1, 2)).unwrap();
        assert_eq!(s.regions, vec![(rat(1, 4), rat(3, 4))]);
        assert_eq!(s.support_measure, rat(1, 2));
        assert_eq!(s.small.nodes(), &[int(0), rat(1, 4), rat(1, 2), rat(3, 4), int(1)]);
        assert_eq!(s.small.values(), &[int(0), rat(1, 2), rat(1, 2), rat(1, 2), int(0)]);
        assert_eq!(s.spike.values(), &[int(0), int(0), rat(1, 2), int(0), int(0)]);

        let z = split(&SampledPath::zero(), &rat(1, 3)).unwrap();
        assert!(z.regions.is_empty() && z.support_measure.is_zero());
        assert!(split(&tent(int(1)), &int(0)).is_err());
    }

    #[test]
    fn split_excludes_touching_points() {
        let s = split(&tent(rat(1, 2)), &rat(1, 2)).unwrap();
        assert!(s.regions.is_empty());
    }

    #[test]
    fn split_handles_sign_changes_and_endpoint_excess() {
        let p = path(&[
            (int(0), int(0)),
            (rat(1, 4), int(2)),
            (rat(1, 2), int(-2)),
            (int(1), int(3)),
        ]);
        let s = split(&p, &int(1)).unwrap();
        assert_eq!(s.regions.len(), 3);
        assert_eq!(s.regions[2].1, int(1));
        // g keeps the endpoint value when the excess reaches t = 1.
        assert_eq!(s.small.values().last().unwrap(), &int(3));
        for (t, (g, h)) in s
            .small
            .nodes()
            .iter()
            .zip(s.small.values().iter().zip(s.spike.values()))
        {
            assert_eq!(g + h, p.value_at(t).unwrap());
        }
    }
}
