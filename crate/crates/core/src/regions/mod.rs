//! Rate-region boundary tracing.
//!
//! Each region is convex (time sharing), so its lower boundary is traced by
//! minimizing `R2 + μ R1` over a grid of weights `μ`. For every `μ` a number
//! of independently seeded local searches run over an unconstrained
//! parameterization of the witness (test channel, POVM or isometry), and the
//! best candidate, together with a few fixed anchor witnesses, is kept.
//! Curves produced this way are inner bounds: every point is achievable by
//! its witness, but nothing certifies that the boundary was reached.

mod chelper;
mod fq;
mod qhelper;
mod sweep;

pub use chelper::{rate_point_chelper, trace_boundary_chelper, ChelperProblem};
pub use fq::{default_dc_list, rate_point_fq, trace_boundary_fq, FqProblem};
pub use qhelper::{
    accessible_information, accessible_information_with, merge_redundant_outcomes, separation_gap, trace_boundary_qhelper,
    QhelperSearch, SeparationGap,
};
pub use sweep::{default_mu_grid, SweepConfig, MU_INFINITY};

use crate::error::{Error, Result};
use crate::linalg::{psd_inv_sqrt, ComplexMatrix, Povm};

/// Tolerance used by [`membership`].
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Conditional distribution `p(u|y)`, stored row-major as `[u][y]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestChannel {
    nu: usize,
    ny: usize,
    probs: Vec<f64>,
}

impl TestChannel {
    pub fn new(nu: usize, ny: usize, probs: Vec<f64>) -> Result<Self> {
        if nu == 0 || ny == 0 || probs.len() != nu * ny {
            return Err(Error::InvalidChannel(format!(
                "{} entries for a {nu}x{ny} channel",
                probs.len()
            )));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidChannel("negative or non-finite entry".into()));
        }
        for y in 0..ny {
            let s: f64 = (0..nu).map(|u| probs[u * ny + y]).sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidChannel(format!("column {y} sums to {s}")));
            }
        }
        Ok(TestChannel { nu, ny, probs })
    }

    /// `U = Y`, optionally embedded into a larger output alphabet.
    pub fn identity(ny: usize, nu: usize) -> Self {
        assert!(nu >= ny);
        let mut probs = vec![0.0; nu * ny];
        for y in 0..ny {
            probs[y * ny + y] = 1.0;
        }
        TestChannel { nu, ny, probs }
    }

    /// Every `y` maps to `u = 0`.
    pub fn constant(ny: usize, nu: usize) -> Self {
        let mut probs = vec![0.0; nu * ny];
        for y in 0..ny {
            probs[y] = 1.0;
        }
        TestChannel { nu, ny, probs }
    }

    /// Binary symmetric channel with crossover `eps`.
    pub fn bsc(eps: f64) -> Self {
        TestChannel {
            nu: 2,
            ny: 2,
            probs: vec![1.0 - eps, eps, eps, 1.0 - eps],
        }
    }

    /// Column-wise softmax of `[u][y]` logits.
    pub fn from_logits(nu: usize, ny: usize, logits: &[f64]) -> Self {
        let mut probs = vec![0.0; nu * ny];
        for y in 0..ny {
            let m = (0..nu).map(|u| logits[u * ny + y]).fold(f64::NEG_INFINITY, f64::max);
            let mut s = 0.0;
            for u in 0..nu {
                let e = (logits[u * ny + y] - m).exp();
                probs[u * ny + y] = e;
                s += e;
            }
            for u in 0..nu {
                probs[u * ny + y] /= s;
            }
        }
        TestChannel { nu, ny, probs }
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, u: usize, y: usize) -> f64 {
        self.probs[u * self.ny + y]
    }
}

/// Isometry `V: B -> C ⊗ E` with `V† V = I`, a Stinespring dilation of the
/// helper's channel `B -> C`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelIsometry {
    v: ComplexMatrix,
    d_b: usize,
    d_c: usize,
    d_e: usize,
}

impl ChannelIsometry {
    pub fn new(v: ComplexMatrix, d_b: usize, d_c: usize, d_e: usize) -> Result<Self> {
        if v.cols() != d_b || v.rows() != d_c * d_e || d_b == 0 || d_c == 0 || d_e == 0 {
            return Err(Error::DimMismatch(format!(
                "isometry of shape {}x{} for d_B={d_b}, d_C={d_c}, d_E={d_e}",
                v.rows(),
                v.cols()
            )));
        }
        let res = (&v.adjoint() * &v).max_abs_diff(&ComplexMatrix::identity(d_b));
        if res > 1e-9 {
            return Err(Error::InvalidChannel(format!("isometry residual {res:.3e}")));
        }
        Ok(ChannelIsometry { v, d_b, d_c, d_e })
    }

    /// Polar part `G (G† G)^{-1/2}` of an arbitrary `d_C d_E x d_B` matrix.
    pub fn from_generator(g: &ComplexMatrix, d_b: usize, d_c: usize, d_e: usize) -> Result<Self> {
        let gram = (&g.adjoint() * g).hermitian_part();
        let scale = gram.trace().re / d_b.max(1) as f64;
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidChannel("zero generator".into()));
        }
        let w = psd_inv_sqrt(&gram.scale(1.0 / scale), 1e-14)?;
        Self::new(&g.scale(1.0 / scale.sqrt()) * &w, d_b, d_c, d_e)
    }

    /// `|b> -> |b>_C |0>_E`, requires `d_C >= d_B`.
    pub fn embed_identity(d_b: usize, d_c: usize, d_e: usize) -> Self {
        assert!(d_c >= d_b);
        let mut v = ComplexMatrix::zeros(d_c * d_e, d_b);
        for b in 0..d_b {
            v[(b * d_e, b)] = crate::linalg::c(1.0, 0.0);
        }
        ChannelIsometry { v, d_b, d_c, d_e }
    }

    /// `|b> -> |0>_C |b>_E`, requires `d_E >= d_B`.
    pub fn discard(d_b: usize, d_c: usize, d_e: usize) -> Self {
        assert!(d_e >= d_b);
        let mut v = ComplexMatrix::zeros(d_c * d_e, d_b);
        for b in 0..d_b {
            v[(b, b)] = crate::linalg::c(1.0, 0.0);
        }
        ChannelIsometry { v, d_b, d_c, d_e }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.d_b, self.d_c, self.d_e)
    }

    pub fn residual(&self) -> f64 {
        (&self.v.adjoint() * &self.v).max_abs_diff(&ComplexMatrix::identity(self.d_b))
    }
}

/// What produced a rate point.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    TestChannel(TestChannel),
    Povm(Povm),
    Isometry(ChannelIsometry),
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::TestChannel(_) => "test_channel",
            Witness::Povm(_) => "povm",
            Witness::Isometry(_) => "isometry",
        }
    }
}

/// An achievable rate pair with its witness.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
    pub witness: Witness,
    /// Scalarization weight that selected the point, if any.
    pub mu: Option<f64>,
    pub seed: u64,
    /// Restart index that found it; `None` for anchor witnesses.
    pub restart: Option<usize>,
}

impl RatePoint {
    pub fn new(r1: f64, r2: f64, witness: Witness) -> Self {
        RatePoint {
            r1,
            r2,
            witness,
            mu: None,
            seed: 0,
            restart: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveMeta {
    pub label: String,
    pub restarts: usize,
    pub evaluations_per_start: usize,
    pub seed: u64,
    pub mu_grid: Vec<f64>,
}

/// Pareto-filtered boundary samples plus the raw per-weight sweep.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    /// Lower-left staircase: `r1` ascending, `r2` strictly descending.
    pub points: Vec<RatePoint>,
    /// One point per sweep weight, in sweep order (unfiltered).
    pub samples: Vec<RatePoint>,
    pub meta: CurveMeta,
}

/// Removes dominated points; returns them sorted by `r1`. Coordinates
/// within [`MEMBERSHIP_TOL`] count as equal.
pub fn pareto_filter(mut pts: Vec<RatePoint>) -> Vec<RatePoint> {
    let tol = MEMBERSHIP_TOL;
    pts.sort_by(|a, b| a.r1.total_cmp(&b.r1).then(a.r2.total_cmp(&b.r2)));
    let mut out: Vec<RatePoint> = Vec::new();
    for p in pts {
        if out.last().is_some_and(|last| p.r2 >= last.r2 - tol) {
            continue;
        }
        while out.last().is_some_and(|last| last.r1 >= p.r1 - tol) {
            out.pop();
        }
        out.push(p);
    }
    out
}

impl BoundaryCurve {
    pub fn from_points(samples: Vec<RatePoint>, meta: CurveMeta) -> Self {
        BoundaryCurve {
            points: pareto_filter(samples.clone()),
            samples,
            meta,
        }
    }

    /// Staircase over `samples` and an additional pool of achievable points.
    pub fn from_pool(samples: Vec<RatePoint>, pool: Vec<RatePoint>, meta: CurveMeta) -> Self {
        let mut all = pool;
        all.extend(samples.iter().cloned());
        BoundaryCurve {
            points: pareto_filter(all),
            samples,
            meta,
        }
    }

    /// Lower convex hull of the staircase.
    pub fn hull(&self) -> Vec<(f64, f64)> {
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for p in &self.points {
            let q = (p.r1, p.r2);
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                let cross = (b.0 - a.0) * (q.1 - a.1) - (b.1 - a.1) * (q.0 - a.0);
                if cross <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(q);
        }
        hull
    }

    /// Smallest `R2` achievable at `R1 = r1` by time sharing between curve
    /// points; `None` more than [`MEMBERSHIP_TOL`] left of the curve.
    pub fn achievable_r2(&self, r1: f64) -> Option<f64> {
        let hull = self.hull();
        let first = *hull.first()?;
        if r1 < first.0 - MEMBERSHIP_TOL {
            return None;
        }
        let r1 = r1.max(first.0);
        for w in hull.windows(2) {
            let (a, b) = (w[0], w[1]);
            if r1 <= b.0 {
                let t = if b.0 > a.0 { (r1 - a.0) / (b.0 - a.0) } else { 1.0 };
                return Some(a.1 + t * (b.1 - a.1));
            }
        }
        Some(hull.last()?.1)
    }

    pub fn min_r1(&self) -> Option<f64> {
        self.points.first().map(|p| p.r1)
    }
}

/// Membership verdict for a rate pair against an inner-bound curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Achievable,
    NotDominated,
    Unknown,
}

pub fn membership(curve: &BoundaryCurve, point: (f64, f64)) -> Membership {
    let (r1, r2) = point;
    let tol = MEMBERSHIP_TOL;
    let pts = if curve.points.is_empty() {
        &curve.samples
    } else {
        &curve.points
    };
    if pts.iter().any(|p| p.r1 <= r1 + tol && p.r2 <= r2 + tol) {
        return Membership::Achievable;
    }
    if !pts.is_empty() && pts.iter().all(|p| r1 < p.r1 - tol && r2 < p.r2 - tol) {
        return Membership::NotDominated;
    }
    Membership::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(r1: f64, r2: f64) -> RatePoint {
        RatePoint::new(r1, r2, Witness::TestChannel(TestChannel::identity(2, 2)))
    }

    fn meta() -> CurveMeta {
        CurveMeta {
            label: "test".into(),
            restarts: 0,
            evaluations_per_start: 0,
            seed: 0,
            mu_grid: vec![],
        }
    }

    #[test]
    fn pareto_staircase() {
        let c = BoundaryCurve::from_points(
            vec![pt(1.0, 0.0), pt(0.5, 0.5), pt(0.6, 0.6), pt(0.0, 1.0), pt(0.5, 0.5)],
            meta(),
        );
        let coords: Vec<(f64, f64)> = c.points.iter().map(|p| (p.r1, p.r2)).collect();
        assert_eq!(coords, vec![(0.0, 1.0), (0.5, 0.5), (1.0, 0.0)]);
        assert_eq!(c.samples.len(), 5);
    }

    #[test]
    fn time_sharing_envelope() {
        let c = BoundaryCurve::from_points(vec![pt(0.0, 1.0), pt(0.5, 0.45), pt(1.0, 0.0)], meta());
        assert!((c.achievable_r2(0.25).unwrap() - 0.725).abs() < 1e-12);
        assert_eq!(c.achievable_r2(2.0), Some(0.0));
        assert_eq!(c.achievable_r2(-0.1), None);
        // a non-convex middle point is bypassed by the hull
        let c = BoundaryCurve::from_points(vec![pt(0.0, 1.0), pt(0.5, 0.6), pt(1.0, 0.0)], meta());
        assert!((c.achievable_r2(0.5).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn membership_examples() {
        let c = BoundaryCurve::from_points(vec![pt(0.0, 1.0), pt(0.5, 0.3), pt(1.0, 0.0)], meta());
        assert_eq!(membership(&c, (1.0, 1.0)), Membership::Achievable);
        assert_eq!(membership(&c, (-1.0, -1.0)), Membership::NotDominated);
        assert_eq!(membership(&c, (0.5, 0.3 - 1e-4)), Membership::Unknown);
    }

    #[test]
    fn test_channel_validation() {
        assert!(TestChannel::new(2, 2, vec![0.5, 0.5, 0.4, 0.5]).is_err());
        assert!(TestChannel::new(2, 1, vec![0.3, 0.7]).is_ok());
        let w = TestChannel::from_logits(3, 2, &[0.0, 1.0, 2.0, -1.0, 0.5, 0.5]);
        for y in 0..2 {
            let s: f64 = (0..3).map(|u| w.get(u, y)).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn isometry_constructors() {
        assert!(ChannelIsometry::embed_identity(2, 2, 1).residual() < 1e-15);
        assert!(ChannelIsometry::discard(2, 1, 2).residual() < 1e-15);
        let g = crate::linalg::random::ginibre(6, 2, &mut crate::linalg::random::seeded_rng(1, 0));
        let v = ChannelIsometry::from_generator(&g, 2, 2, 3).unwrap();
        assert!(v.residual() < 1e-9);
        assert!(ChannelIsometry::new(g, 2, 2, 3).is_err());
    }
}
