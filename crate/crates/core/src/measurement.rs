//! What a helper POVM induces on a classical-quantum source: the classical
//! joint `P_XU`, the post-measurement state `σ_UB`, and the rate pair
//! `(H(X|U), I(U;B)_σ)`.
//!
//! `σ_UB` is kept structurally as `(p_U, {ρ_u})` and `I(U;B)_σ` is
//! evaluated through the cq identity `H(Σ p_u ρ_u) - Σ p_u H(ρ_u)`.
//!
//! The rate `I(U;B)_σ` is the measurement-compression rate of the POVM on
//! `ρ_B`; by construction of `σ_UB` it coincides with the mutual information
//! between the outcome and a purifying reference of `ρ_B`. That identity is
//! checked numerically in the tests but is not used by the computation.

use crate::entropy::{classical_conditional, spectral_entropy};
use crate::error::{Error, Result};
use crate::linalg::{psd_sqrt, ComplexMatrix, DensityMatrix, Povm};
use crate::regions::{RatePoint, Witness};
use crate::sources::{CQSource, ClassicalJoint};

/// Outcomes with `p_U(u)` at or below this are dropped from `σ_UB`.
pub const ZERO_OUTCOME: f64 = 1e-12;

/// `P(x,u) = p(x) Tr[Λ_u ρ_x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedJoint {
    pub joint: ClassicalJoint,
}

/// `σ_UB` as the list of outcome probabilities and conjugated residual states.
#[derive(Debug, Clone)]
pub struct PostMeasurementState {
    /// Surviving outcome indices into the POVM.
    pub outcomes: Vec<usize>,
    pub p_u: Vec<f64>,
    pub rho_u: Vec<DensityMatrix>,
}

impl PostMeasurementState {
    /// `Tr_U σ_UB = Σ_u p_u ρ_u`.
    pub fn b_marginal(&self) -> ComplexMatrix {
        let d = self.rho_u[0].dim();
        let mut m = ComplexMatrix::square_zeros(d);
        for (p, r) in self.p_u.iter().zip(&self.rho_u) {
            m.add_scaled(r.matrix(), *p);
        }
        m
    }

    /// `I(U;B)_σ`.
    pub fn mutual_information(&self) -> Result<f64> {
        let outer = spectral_entropy(&self.b_marginal().hermitian_part())?;
        let mut inner = 0.0;
        for (p, r) in self.p_u.iter().zip(&self.rho_u) {
            inner += p * spectral_entropy(r.matrix())?;
        }
        Ok((outer - inner).max(0.0))
    }
}

fn check_dims(src: &CQSource, povm: &Povm) -> Result<()> {
    if povm.dim() != src.dim() {
        return Err(Error::DimMismatch(format!(
            "POVM acts on dimension {} but the helper has dimension {}",
            povm.dim(),
            src.dim()
        )));
    }
    Ok(())
}

fn joint_table(src: &CQSource, povm: &Povm) -> Vec<f64> {
    let nu = povm.len();
    let mut probs = vec![0.0; src.len() * nu];
    for (x, (px, rho)) in src.p().iter().zip(src.states()).enumerate() {
        for (u, e) in povm.elements().iter().enumerate() {
            probs[x * nu + u] = (px * rho.matrix().trace_product_re(e)).max(0.0);
        }
    }
    probs
}

pub fn induced_joint(src: &CQSource, povm: &Povm) -> Result<InducedJoint> {
    check_dims(src, povm)?;
    let probs = joint_table(src, povm);
    Ok(InducedJoint {
        joint: ClassicalJoint::new_unchecked(src.len(), povm.len(), probs),
    })
}

/// Measurement evaluator for a fixed source: caches `√ρ_B`.
#[derive(Debug, Clone)]
pub struct QHelperProblem {
    src: CQSource,
    sqrt_rho_b: ComplexMatrix,
}

impl QHelperProblem {
    pub fn new(src: &CQSource) -> Result<Self> {
        let sqrt_rho_b = psd_sqrt(src.helper_marginal().matrix())?;
        Ok(QHelperProblem {
            src: src.clone(),
            sqrt_rho_b,
        })
    }

    pub fn source(&self) -> &CQSource {
        &self.src
    }

    pub fn post_measurement(&self, povm: &Povm) -> Result<PostMeasurementState> {
        check_dims(&self.src, povm)?;
        let s = &self.sqrt_rho_b;
        let mut outcomes = Vec::new();
        let mut p_u = Vec::new();
        let mut rho_u = Vec::new();
        for (u, e) in povm.elements().iter().enumerate() {
            let m = &(s * e) * s;
            let p = m.trace().re;
            if p <= ZERO_OUTCOME {
                continue;
            }
            outcomes.push(u);
            p_u.push(p);
            rho_u.push(DensityMatrix::new_unchecked(m.conj().scale(1.0 / p).hermitian_part()));
        }
        if p_u.is_empty() {
            return Err(Error::InvalidPovm("every outcome has zero probability".into()));
        }
        Ok(PostMeasurementState {
            outcomes,
            p_u,
            rho_u,
        })
    }

    /// `(H(X|U), I(U;B)_σ)`.
    pub fn rates(&self, povm: &Povm) -> Result<(f64, f64)> {
        check_dims(&self.src, povm)?;
        let r1 = classical_conditional(&joint_table(&self.src, povm), self.src.len(), povm.len());
        let r2 = self.post_measurement(povm)?.mutual_information()?;
        Ok((r1, r2))
    }

    /// `I(X;U)` of the induced joint.
    pub fn classical_information(&self, povm: &Povm) -> Result<f64> {
        check_dims(&self.src, povm)?;
        Ok(crate::entropy::classical_mutual(
            &joint_table(&self.src, povm),
            self.src.len(),
            povm.len(),
        ))
    }
}

pub fn post_measurement_cq(src: &CQSource, povm: &Povm) -> Result<PostMeasurementState> {
    QHelperProblem::new(src)?.post_measurement(povm)
}

/// Rate pair `(H(X|U), I(U;B)_σ)` of a POVM, with the POVM as witness.
pub fn rate_point_qhelper(src: &CQSource, povm: &Povm) -> Result<RatePoint> {
    let (r1, r2) = QHelperProblem::new(src)?.rates(povm)?;
    Ok(RatePoint::new(r1, r2, Witness::Povm(povm.clone())))
}
