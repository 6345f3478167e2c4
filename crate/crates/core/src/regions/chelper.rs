//! Classical helper: rate pairs `(H(X|U), I(U;Y))` over test channels.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::sweep::{sweep, Parameterized, SweepConfig};
use super::{BoundaryCurve, CurveMeta, RatePoint, TestChannel, Witness};
use crate::entropy::{classical_conditional, classical_mutual};
use crate::error::{Error, Result};
use crate::sources::ClassicalJoint;

fn chelper_rates(joint: &ClassicalJoint, w: &TestChannel) -> Result<(f64, f64)> {
    if w.ny() != joint.ny() {
        return Err(Error::DimMismatch(format!(
            "test channel reads {} helper letters, source has {}",
            w.ny(),
            joint.ny()
        )));
    }
    let (nx, ny, nu) = (joint.nx(), joint.ny(), w.nu());
    let mut pxu = vec![0.0; nx * nu];
    for x in 0..nx {
        for y in 0..ny {
            let pxy = joint.get(x, y);
            if pxy == 0.0 {
                continue;
            }
            for u in 0..nu {
                pxu[x * nu + u] += pxy * w.get(u, y);
            }
        }
    }
    let py = joint.y_marginal();
    let mut puy = vec![0.0; nu * ny];
    for u in 0..nu {
        for y in 0..ny {
            puy[u * ny + y] = py[y] * w.get(u, y);
        }
    }
    let r1 = classical_conditional(&pxu, nx, nu);
    let r2 = classical_mutual(&puy, nu, ny);
    Ok((r1, r2))
}

/// `(H(X|U), I(U;Y))` for `U` produced from `Y` by `w`.
pub fn rate_point_chelper(joint: &ClassicalJoint, w: &TestChannel) -> Result<RatePoint> {
    let (r1, r2) = chelper_rates(joint, w)?;
    Ok(RatePoint::new(r1, r2, Witness::TestChannel(w.clone())))
}

/// Softmax-parameterized test channels with `|U| = |Y| + 1`.
#[derive(Debug, Clone)]
pub struct ChelperProblem {
    joint: ClassicalJoint,
    nu: usize,
}

impl ChelperProblem {
    pub fn new(joint: &ClassicalJoint) -> Self {
        ChelperProblem {
            joint: joint.clone(),
            nu: joint.ny() + 1,
        }
    }

    pub fn output_size(&self) -> usize {
        self.nu
    }
}

impl Parameterized for ChelperProblem {
    fn n_params(&self) -> usize {
        self.nu * self.joint.ny()
    }

    fn initial(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..self.n_params())
            .map(|_| 2.0 * rng.sample::<f64, _>(StandardNormal))
            .collect()
    }

    fn witness(&self, x: &[f64]) -> Option<Witness> {
        Some(Witness::TestChannel(TestChannel::from_logits(
            self.nu,
            self.joint.ny(),
            x,
        )))
    }

    fn rates(&self, w: &Witness) -> Result<(f64, f64)> {
        match w {
            Witness::TestChannel(t) => chelper_rates(&self.joint, t),
            other => Err(Error::InvalidChannel(format!(
                "expected a test channel, got a {}",
                other.kind()
            ))),
        }
    }

    fn anchors(&self) -> Vec<Witness> {
        let ny = self.joint.ny();
        vec![
            Witness::TestChannel(TestChannel::identity(ny, self.nu)),
            Witness::TestChannel(TestChannel::constant(ny, self.nu)),
        ]
    }
}

pub fn trace_boundary_chelper(joint: &ClassicalJoint, cfg: &SweepConfig) -> Result<BoundaryCurve> {
    let problem = ChelperProblem::new(joint);
    let out = sweep(&problem, cfg)?;
    Ok(BoundaryCurve::from_pool(
        out.samples,
        out.pool,
        CurveMeta {
            label: format!("classical helper, |U| = {}", problem.nu),
            restarts: cfg.restarts,
            evaluations_per_start: cfg.search.evaluations,
            seed: cfg.seed,
            mu_grid: cfg.mu_grid.clone(),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::binary_entropy;
    use crate::sources::catalog::{copy_binary, independent_binary};

    fn quick(restarts: usize) -> SweepConfig {
        SweepConfig {
            restarts,
            mu_grid: vec![0.0, 0.3, 1.0, 3.0, 1e6],
            ..SweepConfig::with_seed(7)
        }
    }

    #[test]
    fn closed_form_points() {
        let j = copy_binary();
        let p = rate_point_chelper(&j, &TestChannel::identity(2, 2)).unwrap();
        assert!(p.r1.abs() < 1e-12 && (p.r2 - 1.0).abs() < 1e-12);
        let p = rate_point_chelper(&j, &TestChannel::constant(2, 3)).unwrap();
        assert!((p.r1 - 1.0).abs() < 1e-12 && p.r2.abs() < 1e-12);

        let p = rate_point_chelper(&ClassicalJoint::dsbs(0.1), &TestChannel::bsc(0.25)).unwrap();
        assert!((p.r1 - binary_entropy(0.3)).abs() < 1e-12);
        assert!((p.r1 - 0.881291).abs() < 1e-6);
        assert!((p.r2 - 0.188722).abs() < 1e-6);
    }

    #[test]
    fn dim_mismatch() {
        let r = rate_point_chelper(&copy_binary(), &TestChannel::identity(3, 3));
        assert!(matches!(r, Err(Error::DimMismatch(_))));
    }

    #[test]
    fn independent_collapses() {
        let c = trace_boundary_chelper(&independent_binary(), &quick(4)).unwrap();
        assert_eq!(c.points.len(), 1);
        assert!((c.points[0].r1 - 1.0).abs() < 1e-9);
        assert!(c.points[0].r2.abs() < 1e-9);
    }

    #[test]
    fn copy_endpoints() {
        let c = trace_boundary_chelper(&copy_binary(), &quick(4)).unwrap();
        let has = |a: f64, b: f64| {
            c.points
                .iter()
                .any(|p| (p.r1 - a).abs() < 5e-3 && (p.r2 - b).abs() < 5e-3)
        };
        assert!(has(0.0, 1.0) && has(1.0, 0.0));
        for p in &c.samples {
            let q = rate_point_chelper(&copy_binary(), match &p.witness {
                Witness::TestChannel(t) => t,
                _ => unreachable!(),
            })
            .unwrap();
            assert!((q.r1 - p.r1).abs() < 1e-9 && (q.r2 - p.r2).abs() < 1e-9);
        }
    }
}
