//! Source models: classical joints, classical-quantum ensembles and purified
//! bipartite quantum sources.

use rand::Rng;

use crate::entropy::Distribution;
use crate::error::{Error, Result};
use crate::linalg::random::seeded_rng;
use crate::linalg::{c, eig_hermitian, purify, ComplexMatrix, DensityMatrix, PureStateVector};
use crate::tolerance::tolerances;

/// Joint distribution `P[x][y]` over a finite product alphabet, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalJoint {
    nx: usize,
    ny: usize,
    probs: Vec<f64>,
}

impl ClassicalJoint {
    pub fn new(nx: usize, ny: usize, probs: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 || probs.len() != nx * ny {
            return Err(Error::InvalidDistribution(format!(
                "{} entries for a {nx}x{ny} joint",
                probs.len()
            )));
        }
        let d = Distribution::new(probs)?;
        Ok(ClassicalJoint {
            nx,
            ny,
            probs: d.probs().to_vec(),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nx = rows.len();
        let ny = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ny) {
            return Err(Error::InvalidDistribution("ragged rows".into()));
        }
        Self::new(nx, ny, rows.concat())
    }

    /// Built from parts that are a distribution by construction.
    pub(crate) fn new_unchecked(nx: usize, ny: usize, probs: Vec<f64>) -> Self {
        ClassicalJoint { nx, ny, probs }
    }

    /// Doubly symmetric binary source: uniform `Y`, `X = Y xor Bern(q)`.
    pub fn dsbs(q: f64) -> Self {
        ClassicalJoint {
            nx: 2,
            ny: 2,
            probs: vec![0.5 * (1.0 - q), 0.5 * q, 0.5 * q, 0.5 * (1.0 - q)],
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.probs[x * self.ny + y]
    }

    pub fn x_marginal(&self) -> Vec<f64> {
        (0..self.nx)
            .map(|x| (0..self.ny).map(|y| self.get(x, y)).sum())
            .collect()
    }

    pub fn y_marginal(&self) -> Vec<f64> {
        (0..self.ny)
            .map(|y| (0..self.nx).map(|x| self.get(x, y)).sum())
            .collect()
    }

    /// `P(x|y)` as a row-major `[x][y]` table; columns with `P(y) = 0` are
    /// uniform.
    pub fn x_given_y(&self) -> Vec<f64> {
        let py = self.y_marginal();
        let mut out = vec![0.0; self.nx * self.ny];
        for y in 0..self.ny {
            for x in 0..self.nx {
                out[x * self.ny + y] = if py[y] > 0.0 {
                    self.get(x, y) / py[y]
                } else {
                    1.0 / self.nx as f64
                };
            }
        }
        out
    }
}

/// Classical-quantum ensemble `ρ_XB = Σ_x p(x) |x><x| ⊗ ρ_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct CQSource {
    p: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl CQSource {
    /// Entries with `p(x) = 0` are dropped together with their states.
    pub fn new(p: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if p.len() != states.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} probabilities for {} states",
                p.len(),
                states.len()
            )));
        }
        let p = Distribution::new(p).map_err(|e| Error::InvalidEnsemble(e.to_string()))?;
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) {
            return Err(Error::InvalidEnsemble("states differ in dimension".into()));
        }
        let (p, states): (Vec<f64>, Vec<DensityMatrix>) = p
            .probs()
            .iter()
            .copied()
            .zip(states)
            .filter(|(px, _)| *px > 0.0)
            .unzip();
        Ok(CQSource { p, states })
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Helper dimension `d_B`.
    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn ensemble(&self) -> Vec<(f64, DensityMatrix)> {
        self.p.iter().copied().zip(self.states.iter().cloned()).collect()
    }

    /// `ρ_B = Σ_x p(x) ρ_x`.
    pub fn helper_marginal(&self) -> DensityMatrix {
        let mut m = ComplexMatrix::square_zeros(self.dim());
        for (px, rho) in self.p.iter().zip(&self.states) {
            m.add_scaled(rho.matrix(), *px);
        }
        DensityMatrix::new_unchecked(m.hermitian_part())
    }

    /// The classical joint `P(x,y) = p(x) <y|ρ_x|y>` in a shared eigenbasis,
    /// when every pair of states commutes; `None` otherwise.
    pub fn commuting_reduction(&self) -> Option<ClassicalJoint> {
        let tol = tolerances();
        for i in 0..self.states.len() {
            for j in i + 1..self.states.len() {
                let comm = self.states[i].matrix().commutator(self.states[j].matrix());
                if comm.max_abs() > tol.commutator {
                    return None;
                }
            }
        }
        let basis = self.joint_eigenbasis()?;
        let d = self.dim();
        let nx = self.len();
        let mut probs = vec![0.0; nx * d];
        for (x, rho) in self.states.iter().enumerate() {
            let rotated = &(&basis.adjoint() * rho.matrix()) * &basis;
            for i in 0..d {
                for j in 0..d {
                    if i != j && rotated[(i, j)].norm() > 10.0 * tol.commutator {
                        return None;
                    }
                }
            }
            for y in 0..d {
                probs[x * d + y] = self.p[x] * rotated[(y, y)].re.max(0.0);
            }
        }
        let s: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|q| *q /= s);
        Some(ClassicalJoint::new_unchecked(nx, d, probs))
    }

    /// Eigenbasis of `ρ_B + Σ c_x ρ_x` for fixed generic coefficients,
    /// columns ordered by their dominant computational-basis index.
    fn joint_eigenbasis(&self) -> Option<ComplexMatrix> {
        let mut rng = seeded_rng(0x5eed_c0de, 0);
        let mut w = self.helper_marginal().into_matrix();
        for rho in &self.states {
            let coef: f64 = 0.5 + rng.random::<f64>();
            w.add_scaled(rho.matrix(), coef);
        }
        let e = eig_hermitian(&w.hermitian_part()).ok()?;
        let d = self.dim();
        let dominant = |k: usize| {
            (0..d)
                .max_by(|&a, &b| {
                    e.vectors[(a, k)]
                        .norm()
                        .total_cmp(&e.vectors[(b, k)].norm())
                        .then(b.cmp(&a))
                })
                .unwrap_or(0)
        };
        let mut cols: Vec<(usize, usize)> = (0..d).map(|k| (dominant(k), k)).collect();
        cols.sort();
        let mut basis = ComplexMatrix::square_zeros(d);
        for (new, &(_, old)) in cols.iter().enumerate() {
            for r in 0..d {
                basis[(r, new)] = e.vectors[(r, old)];
            }
        }
        Some(basis)
    }
}

/// Bipartite source `ρ_AB` with its spectral purification `ψ_ABR`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteSource {
    rho: DensityMatrix,
    dims: (usize, usize),
    psi: PureStateVector,
}

impl BipartiteSource {
    pub fn new(rho: DensityMatrix, dims: (usize, usize)) -> Result<Self> {
        purified_bipartite(rho, dims)
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    /// Purification on `A ⊗ B ⊗ R`.
    pub fn psi(&self) -> &PureStateVector {
        &self.psi
    }

    pub fn reference_dim(&self) -> usize {
        self.psi.dims()[2]
    }
}

/// Purifies `ρ_AB` onto `A ⊗ B ⊗ R`.
pub fn purified_bipartite(rho: DensityMatrix, dims: (usize, usize)) -> Result<BipartiteSource> {
    if dims.0 * dims.1 != rho.dim() {
        return Err(Error::DimMismatch(format!(
            "dims {dims:?} do not match dimension {}",
            rho.dim()
        )));
    }
    let p = purify(rho.matrix())?;
    let r = p.dims()[1];
    let psi = PureStateVector::new_unchecked(vec![dims.0, dims.1, r], p.amplitudes().to_vec());
    Ok(BipartiteSource { rho, dims, psi })
}

/// Small named sources used by tests, examples and the acceptance suite.
/// All qubit ensembles here have real amplitudes.
pub mod catalog {
    use super::*;

    fn ket0() -> DensityMatrix {
        DensityMatrix::from_diag(&[1.0, 0.0]).unwrap()
    }

    fn ket1() -> DensityMatrix {
        DensityMatrix::from_diag(&[0.0, 1.0]).unwrap()
    }

    fn ket_plus() -> DensityMatrix {
        DensityMatrix::pure(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap()
    }

    /// `{½|0><0|, ½|1><1|}`.
    pub fn orthogonal() -> CQSource {
        CQSource::new(vec![0.5, 0.5], vec![ket0(), ket1()]).unwrap()
    }

    /// `{½|0><0|, ½|+><+|}`.
    pub fn zero_plus() -> CQSource {
        CQSource::new(vec![0.5, 0.5], vec![ket0(), ket_plus()]).unwrap()
    }

    /// `{½ diag(0.9, 0.1), ½ diag(0.2, 0.8)}`.
    pub fn diagonal_pair() -> CQSource {
        CQSource::new(
            vec![0.5, 0.5],
            vec![
                DensityMatrix::from_diag(&[0.9, 0.1]).unwrap(),
                DensityMatrix::from_diag(&[0.2, 0.8]).unwrap(),
            ],
        )
        .unwrap()
    }

    /// Both letters send the same state, so `B` carries no information.
    pub fn identical() -> CQSource {
        CQSource::new(vec![0.5, 0.5], vec![ket_plus(), ket_plus()]).unwrap()
    }

    /// Two non-orthogonal mixed states with unequal priors.
    pub fn tilted_mixed() -> CQSource {
        let a = ComplexMatrix::from_real_rows(&[&[0.8, 0.25], &[0.25, 0.2]]).unwrap();
        let b = ComplexMatrix::from_real_rows(&[&[0.3, -0.2], &[-0.2, 0.7]]).unwrap();
        CQSource::new(
            vec![0.6, 0.4],
            vec![DensityMatrix::new(a).unwrap(), DensityMatrix::new(b).unwrap()],
        )
        .unwrap()
    }

    /// Binary uniform `X = Y`.
    pub fn copy_binary() -> ClassicalJoint {
        ClassicalJoint::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap()
    }

    /// Independent uniform bits.
    pub fn independent_binary() -> ClassicalJoint {
        ClassicalJoint::new(2, 2, vec![0.25; 4]).unwrap()
    }

    pub fn bell() -> BipartiteSource {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rho =
            DensityMatrix::pure(&[c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]).unwrap();
        purified_bipartite(rho, (2, 2)).unwrap()
    }

    /// `½|00><00| + ½|11><11|`.
    pub fn classically_correlated() -> BipartiteSource {
        purified_bipartite(DensityMatrix::from_diag(&[0.5, 0.0, 0.0, 0.5]).unwrap(), (2, 2))
            .unwrap()
    }

    /// `diag(0.3, 0.7) ⊗ diag(0.6, 0.4)`.
    pub fn product() -> BipartiteSource {
        let m = crate::linalg::kron(
            &ComplexMatrix::from_diag(&[0.3, 0.7]),
            &ComplexMatrix::from_diag(&[0.6, 0.4]),
        )
        .unwrap();
        purified_bipartite(DensityMatrix::new(m).unwrap(), (2, 2)).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;
    use crate::entropy::{entropy_bits, von_neumann};
    use crate::linalg::partial_trace;

    #[test]
    fn helper_marginal_examples() {
        let m = orthogonal().helper_marginal();
        assert!(m.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
        let m = zero_plus().helper_marginal();
        let expect = ComplexMatrix::from_real_rows(&[&[0.75, 0.25], &[0.25, 0.25]]).unwrap();
        assert!(m.matrix().max_abs_diff(&expect) < 1e-15);
        let rho = DensityMatrix::from_diag(&[0.3, 0.7]).unwrap();
        let single = CQSource::new(vec![1.0], vec![rho.clone()]).unwrap();
        assert_eq!(single.helper_marginal(), rho);
    }

    #[test]
    fn zero_probability_letters_are_dropped() {
        let s = CQSource::new(
            vec![0.0, 1.0],
            vec![DensityMatrix::maximally_mixed(2), DensityMatrix::from_diag(&[1.0, 0.0]).unwrap()],
        )
        .unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.p(), &[1.0]);
    }

    #[test]
    fn ensemble_validation() {
        assert!(CQSource::new(vec![0.5], vec![]).is_err());
        assert!(CQSource::new(vec![0.5, 0.6], vec![orthogonal().states()[0].clone(); 2]).is_err());
    }

    #[test]
    fn commuting_reduction_examples() {
        let j = diagonal_pair().commuting_reduction().unwrap();
        let expect = [0.45, 0.05, 0.10, 0.40];
        for (a, b) in j.probs().iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(zero_plus().commuting_reduction().is_none());
        let rho = DensityMatrix::new(
            ComplexMatrix::from_real_rows(&[&[0.6, 0.2], &[0.2, 0.4]]).unwrap(),
        )
        .unwrap();
        let single = CQSource::new(vec![1.0], vec![rho.clone()]).unwrap();
        let j = single.commuting_reduction().unwrap();
        assert!((entropy_bits(&j.y_marginal()) - von_neumann(&rho).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn commuting_reduction_rotated_basis() {
        // states diagonal in the |+>,|-> basis
        let u = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]])
            .unwrap()
            .scale(std::f64::consts::FRAC_1_SQRT_2);
        let rot = |d: &[f64]| {
            DensityMatrix::new(&(&u * &ComplexMatrix::from_diag(d)) * &u.adjoint()).unwrap()
        };
        let s = CQSource::new(vec![0.3, 0.7], vec![rot(&[0.9, 0.1]), rot(&[0.25, 0.75])]).unwrap();
        let j = s.commuting_reduction().unwrap();
        let px = j.x_marginal();
        assert!((px[0] - 0.3).abs() < 1e-10 && (px[1] - 0.7).abs() < 1e-10);
        let h_b = von_neumann(&s.helper_marginal()).unwrap();
        assert!((entropy_bits(&j.y_marginal()) - h_b).abs() < 1e-9);
    }

    #[test]
    fn purified_bipartite_reference_dims() {
        assert_eq!(bell().reference_dim(), 1);
        let mixed = purified_bipartite(DensityMatrix::maximally_mixed(4), (2, 2)).unwrap();
        assert_eq!(mixed.reference_dim(), 4);
        assert_eq!(classically_correlated().reference_dim(), 2);
        for src in [bell(), mixed, classically_correlated(), product()] {
            let back = partial_trace(&src.psi().density(), src.psi().dims(), &[0, 1]).unwrap();
            assert!(back.max_abs_diff(src.rho().matrix()) < 1e-9);
        }
    }

    #[test]
    fn purified_bipartite_dim_mismatch() {
        let r = purified_bipartite(DensityMatrix::maximally_mixed(4), (2, 3));
        assert!(matches!(r, Err(Error::DimMismatch(_))));
    }

    #[test]
    fn classical_joint_validation() {
        assert!(ClassicalJoint::new(2, 2, vec![0.5, 0.5, 0.5, 0.0]).is_err());
        assert!(ClassicalJoint::from_rows(&[vec![0.5], vec![0.25, 0.25]]).is_err());
        let j = ClassicalJoint::dsbs(0.1);
        assert_eq!(j.x_marginal(), vec![0.5, 0.5]);
    }
}
