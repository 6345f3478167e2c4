//! Numerical tolerances shared by every module.
//!
//! The defaults are process-wide and may be replaced with [`set_tolerances`]
//! (the CLI does this for `--tol-*` overrides). Reads are cheap copies.

use std::sync::RwLock;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max-norm asymmetry accepted for a Hermitian operator.
    pub hermitian: f64,
    /// Eigenvalues in `[-psd, 0)` are treated as round-off and clipped.
    pub psd: f64,
    /// Trace-one tolerance for density matrices.
    pub trace: f64,
    /// POVM completeness residual.
    pub completeness: f64,
    /// Probability-sum tolerance for distributions and joints.
    pub probability: f64,
    /// Max-norm of pairwise commutators below which an ensemble commutes.
    pub commutator: f64,
    /// Eigenvalues below this contribute nothing to entropy sums.
    pub entropy_cutoff: f64,
    /// Rank cutoff for purifications.
    pub rank_cutoff: f64,
    /// Negative eigenvalue accepted by `psd_sqrt` before failing.
    pub sqrt_psd: f64,
    /// Symmetry precondition for the eigensolver.
    pub eig_hermitian: f64,
    /// Off-diagonal Frobenius target for the Jacobi sweeps.
    pub jacobi_target: f64,
    /// Sweep cap for the Jacobi iteration.
    pub jacobi_max_sweeps: usize,
    /// Largest matrix dimension produced by tensor products.
    pub max_dim: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian: 1e-10,
            psd: 1e-10,
            trace: 1e-10,
            completeness: 1e-9,
            probability: 1e-9,
            commutator: 1e-9,
            entropy_cutoff: 1e-12,
            rank_cutoff: 1e-12,
            sqrt_psd: 1e-6,
            eig_hermitian: 1e-8,
            jacobi_target: 1e-12,
            jacobi_max_sweeps: 100,
            max_dim: 4096,
        }
    }
}

static CURRENT: RwLock<Option<Tolerances>> = RwLock::new(None);

/// The tolerances currently in effect.
pub fn tolerances() -> Tolerances {
    CURRENT
        .read()
        .map(|g| g.unwrap_or_default())
        .unwrap_or_default()
}

/// Replace the process-wide tolerances.
pub fn set_tolerances(tol: Tolerances) {
    if let Ok(mut g) = CURRENT.write() {
        *g = Some(tol);
    }
}
