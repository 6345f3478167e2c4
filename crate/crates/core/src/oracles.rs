//! Exhaustive reference computations for qubit helpers and small classical
//! alphabets. Slow, but every point is an exact evaluation of an explicit
//! witness, so they serve as ground truth for the optimizer's curves.
//!
//! The qubit sweep only visits measurements in the real X-Z plane, which is
//! exhaustive for real-amplitude ensembles and nothing more.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{pauli, ComplexMatrix, Povm};
use crate::measurement::QHelperProblem;
use crate::regions::{
    pareto_filter, rate_point_chelper, BoundaryCurve, CurveMeta, RatePoint, TestChannel, Witness,
};
use crate::sources::{CQSource, ClassicalJoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Projective sweep pitch in radians (measurement angle, not Bloch angle).
    pub angle_step: f64,
    /// Pitch of the conditional-probability simplex.
    pub prob_step: f64,
    /// Bloch-angle pitch for the three-outcome scan.
    pub trine_angle_step: f64,
    /// Number of sharpness levels `t ∈ (0, 1]` in the three-outcome scan.
    pub trine_levels: usize,
    /// Largest allowed enumeration count.
    pub cap: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            angle_step: 1e-3,
            prob_step: 0.05,
            trine_angle_step: std::f64::consts::PI / 18.0,
            trine_levels: 5,
            cap: 1e8,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("angle_step", self.angle_step),
            ("prob_step", self.prob_step),
            ("trine_angle_step", self.trine_angle_step),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::input(field, format!("must be positive, got {v}")));
            }
        }
        if self.trine_levels == 0 {
            return Err(Error::input("trine_levels", "must be at least 1"));
        }
        Ok(())
    }

    fn simplex_pitch(&self) -> Result<usize> {
        let n = (1.0 / self.prob_step).round();
        if (n * self.prob_step - 1.0).abs() > 1e-9 {
            return Err(Error::input(
                "prob_step",
                format!("{} does not divide 1", self.prob_step),
            ));
        }
        Ok(n as usize)
    }
}

fn check_cap(count: f64, cap: f64) -> Result<()> {
    if count > cap {
        return Err(Error::CapExceeded(count, cap));
    }
    Ok(())
}

fn oracle_curve(points: Vec<RatePoint>, label: &str) -> BoundaryCurve {
    let points = pareto_filter(points);
    BoundaryCurve {
        samples: points.clone(),
        points,
        meta: CurveMeta {
            label: label.into(),
            restarts: 0,
            evaluations_per_start: 0,
            seed: 0,
            mu_grid: vec![],
        },
    }
}

/// Qubit observable with Bloch vector at angle `phi` in the X-Z plane.
fn bloch(phi: f64) -> ComplexMatrix {
    let mut m = pauli::z().scale(phi.cos());
    m.add_scaled(&pauli::x(), phi.sin());
    m
}

/// Weights `α ≥ 0` with `Σ α_k = 1` and `Σ α_k n_k = 0` for three unit
/// vectors in the plane, if the origin lies inside their triangle.
fn balancing_weights(phis: [f64; 3]) -> Option<[f64; 3]> {
    let n: Vec<(f64, f64)> = phis.iter().map(|p| (p.sin(), p.cos())).collect();
    // α_k ∝ signed area of the triangle formed by the origin and the other two
    let cross = |a: (f64, f64), b: (f64, f64)| a.0 * b.1 - a.1 * b.0;
    let w = [cross(n[1], n[2]), cross(n[2], n[0]), cross(n[0], n[1])];
    let s: f64 = w.iter().sum();
    if s.abs() < 1e-12 {
        return None;
    }
    let a = [w[0] / s, w[1] / s, w[2] / s];
    if a.iter().any(|v| *v < 0.0) {
        return None;
    }
    Some(a)
}

fn trine_povm(phis: [f64; 3], alpha: [f64; 3], t: f64) -> Povm {
    let id = ComplexMatrix::identity(2);
    let els = (0..3)
        .map(|k| {
            let mut e = id.clone();
            e.add_scaled(&bloch(phis[k]), t);
            e.scale(alpha[k])
        })
        .collect();
    Povm::new_unchecked(els)
}

fn qubit_candidates(grid: &GridSpec) -> Vec<Povm> {
    let mut out = vec![Povm::uninformative(2, 1)];
    let n_proj = (std::f64::consts::PI / grid.angle_step).ceil() as usize;
    for k in 0..n_proj {
        let theta = k as f64 * grid.angle_step;
        let (c, s) = (theta.cos(), theta.sin());
        let basis = ComplexMatrix::from_real_rows(&[&[c, -s], &[s, c]]).expect("finite");
        out.push(Povm::new_unchecked(
            (0..2).map(|j| ComplexMatrix::outer(&basis.column(j))).collect(),
        ));
    }
    let n_ang = (2.0 * std::f64::consts::PI / grid.trine_angle_step).ceil() as usize;
    let angles: Vec<f64> = (0..n_ang).map(|k| k as f64 * grid.trine_angle_step).collect();
    for i in 0..n_ang {
        for j in i + 1..n_ang {
            for k in j + 1..n_ang {
                let phis = [angles[i], angles[j], angles[k]];
                if let Some(alpha) = balancing_weights(phis) {
                    for l in 1..=grid.trine_levels {
                        let t = l as f64 / grid.trine_levels as f64;
                        out.push(trine_povm(phis, alpha, t));
                    }
                }
            }
        }
    }
    out
}

/// Estimated number of qubit measurements visited by [`grid_search_qubit_povm`].
pub fn qubit_grid_size(grid: &GridSpec) -> f64 {
    let n_proj = (std::f64::consts::PI / grid.angle_step).ceil();
    let n_ang = (2.0 * std::f64::consts::PI / grid.trine_angle_step).ceil();
    1.0 + n_proj + n_ang * (n_ang - 1.0) * (n_ang - 2.0) / 6.0 * grid.trine_levels as f64
}

/// Pareto staircase of every grid measurement on a qubit helper.
pub fn grid_search_qubit_povm(src: &CQSource, grid: &GridSpec) -> Result<BoundaryCurve> {
    grid.validate()?;
    if src.dim() != 2 {
        return Err(Error::DimMismatch(format!(
            "qubit oracle needs a 2-dimensional helper, got {}",
            src.dim()
        )));
    }
    check_cap(qubit_grid_size(grid), grid.cap)?;
    let problem = QHelperProblem::new(src)?;
    let points: Vec<RatePoint> = qubit_candidates(grid)
        .into_par_iter()
        .map(|p| {
            let (r1, r2) = problem.rates(&p)?;
            Ok(RatePoint::new(r1, r2, Witness::Povm(p)))
        })
        .collect::<Result<_>>()?;
    Ok(oracle_curve(points, "qubit grid oracle"))
}

/// Best `I(X;U)` over the projective part of the qubit grid, with its angle.
pub fn grid_accessible_information(src: &CQSource, grid: &GridSpec) -> Result<(f64, f64)> {
    grid.validate()?;
    if src.dim() != 2 {
        return Err(Error::DimMismatch("qubit oracle needs a qubit helper".into()));
    }
    let problem = QHelperProblem::new(src)?;
    let n_proj = (std::f64::consts::PI / grid.angle_step).ceil() as usize;
    check_cap(n_proj as f64, grid.cap)?;
    let vals: Vec<(f64, f64)> = (0..n_proj)
        .into_par_iter()
        .map(|k| {
            let theta = k as f64 * grid.angle_step;
            let (c, s) = (theta.cos(), theta.sin());
            let basis = ComplexMatrix::from_real_rows(&[&[c, -s], &[s, c]]).expect("finite");
            let p = Povm::new_unchecked(
                (0..2).map(|j| ComplexMatrix::outer(&basis.column(j))).collect(),
            );
            Ok((problem.classical_information(&p)?, theta))
        })
        .collect::<Result<_>>()?;
    Ok(vals
        .into_iter()
        .fold((f64::NEG_INFINITY, 0.0), |b, v| if v.0 > b.0 { v } else { b }))
}

/// All compositions of `total` into `parts` nonnegative integers, in
/// lexicographic order.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Pareto staircase over every test channel on the simplex grid, with
/// `|U| = |Y| + 1`.
pub fn grid_search_chelper(joint: &ClassicalJoint, grid: &GridSpec) -> Result<BoundaryCurve> {
    grid.validate()?;
    let ny = joint.ny();
    let nu = ny + 1;
    if ny > 3 {
        return Err(Error::DimMismatch(format!(
            "classical oracle supports |Y| <= 3, got {ny}"
        )));
    }
    let n = grid.simplex_pitch()?;
    let per_column = binomial(n + nu - 1, nu - 1);
    check_cap(per_column.powi(ny as i32), grid.cap)?;
    let columns = compositions(n, nu);
    let total = columns.len().pow(ny as u32);
    let points: Vec<RatePoint> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut probs = vec![0.0; nu * ny];
            for y in 0..ny {
                let col = &columns[idx % columns.len()];
                idx /= columns.len();
                for u in 0..nu {
                    probs[u * ny + y] = col[u] as f64 / n as f64;
                }
            }
            rate_point_chelper(joint, &TestChannel::new(nu, ny, probs)?)
        })
        .collect::<Result<_>>()?;
    Ok(oracle_curve(points, "classical grid oracle"))
}

/// `½ Σ |p - q|` over a common enumerated space.
pub fn exact_tv(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimMismatch(format!(
            "distributions over {} and {} outcomes",
            p.len(),
            q.len()
        )));
    }
    check_cap(p.len() as f64, 1e8)?;
    let tv = 0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>();
    Ok(tv.clamp(0.0, 1.0))
}
