//! Entropic functionals, in bits.

use crate::error::{Error, Result};
use crate::linalg::{clipped_spectrum, partial_trace, ComplexMatrix, DensityMatrix};
use crate::tolerance::tolerances;

/// Validated probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Accepts sums within the probability tolerance of one; entries down to
    /// `-1e-12` are clipped to zero.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let tol = tolerances();
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < -1e-12) {
            return Err(Error::InvalidDistribution(format!("entry {p}")));
        }
        let probs: Vec<f64> = probs.into_iter().map(|p| p.max(0.0)).collect();
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > tol.probability {
            return Err(Error::InvalidDistribution(format!("sums to {s}")));
        }
        Ok(Distribution { probs })
    }

    pub fn uniform(n: usize) -> Self {
        Distribution {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// `-Σ p log2 p`, dropping entries at or below the entropy cutoff.
pub fn entropy_bits(p: &[f64]) -> f64 {
    let cutoff = tolerances().entropy_cutoff;
    entropy_bits_with(p, cutoff)
}

#[inline]
pub(crate) fn entropy_bits_with(p: &[f64], cutoff: f64) -> f64 {
    p.iter()
        .filter(|&&x| x > cutoff)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Binary entropy `h(p)`.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_bits(&[p, 1.0 - p])
}

pub fn shannon(p: &Distribution) -> f64 {
    entropy_bits(&p.probs)
}

/// Entropy of the spectrum of a PSD operator (not necessarily unit trace).
pub fn spectral_entropy(m: &ComplexMatrix) -> Result<f64> {
    let tol = tolerances();
    let eigs = clipped_spectrum(m, tol.psd)?;
    Ok(entropy_bits_with(&eigs, tol.entropy_cutoff))
}

pub fn von_neumann(rho: &DensityMatrix) -> Result<f64> {
    spectral_entropy(rho.matrix())
}

fn complement(n: usize, part: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !part.contains(i)).collect()
}

fn check_dims(rho: &DensityMatrix, dims: &[usize], part_a: &[usize]) -> Result<Vec<usize>> {
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::DimMismatch(format!(
            "dims {dims:?} do not match dimension {}",
            rho.dim()
        )));
    }
    let rest = complement(dims.len(), part_a);
    if part_a.is_empty() || rest.is_empty() || part_a.iter().any(|&i| i >= dims.len()) {
        return Err(Error::DimMismatch(format!(
            "partition {part_a:?} invalid for {} subsystems",
            dims.len()
        )));
    }
    Ok(rest)
}

/// `H(A|B) = H(AB) - H(B)`, where `A` is `part_a` and `B` the rest.
pub fn cond_vn(rho: &DensityMatrix, dims: &[usize], part_a: &[usize]) -> Result<f64> {
    let rest = check_dims(rho, dims, part_a)?;
    let h_ab = spectral_entropy(rho.matrix())?;
    let h_b = spectral_entropy(&partial_trace(rho.matrix(), dims, &rest)?)?;
    Ok(h_ab - h_b)
}

/// `I(A;B) = H(A) + H(B) - H(AB)`, clipped at zero.
pub fn mutual_info(rho: &DensityMatrix, dims: &[usize], part_a: &[usize]) -> Result<f64> {
    let rest = check_dims(rho, dims, part_a)?;
    let mut a = part_a.to_vec();
    a.sort_unstable();
    let h_a = spectral_entropy(&partial_trace(rho.matrix(), dims, &a)?)?;
    let h_b = spectral_entropy(&partial_trace(rho.matrix(), dims, &rest)?)?;
    let h_ab = spectral_entropy(rho.matrix())?;
    Ok((h_a + h_b - h_ab).max(0.0))
}

/// Holevo quantity `χ = H(Σ p ρ) - Σ p H(ρ)`.
pub fn holevo(ensemble: &[(f64, DensityMatrix)]) -> Result<f64> {
    let probs: Vec<f64> = ensemble.iter().map(|(p, _)| *p).collect();
    Distribution::new(probs).map_err(|e| Error::InvalidEnsemble(e.to_string()))?;
    let d = ensemble[0].1.dim();
    if ensemble.iter().any(|(_, r)| r.dim() != d) {
        return Err(Error::InvalidEnsemble("states differ in dimension".into()));
    }
    let mut avg = ComplexMatrix::square_zeros(d);
    let mut inner = 0.0;
    for (p, rho) in ensemble {
        avg.add_scaled(rho.matrix(), *p);
        if *p > 0.0 {
            inner += p * von_neumann(rho)?;
        }
    }
    Ok((spectral_entropy(&avg)? - inner).max(0.0))
}

/// Marginals of the joint, all three normalized to unit mass.
fn marginals(joint: &[f64], nx: usize, nu: usize) -> (Vec<f64>, Vec<f64>, f64) {
    let mut px = vec![0.0; nx];
    let mut pu = vec![0.0; nu];
    for x in 0..nx {
        for u in 0..nu {
            px[x] += joint[x * nu + u];
            pu[u] += joint[x * nu + u];
        }
    }
    let total: f64 = px.iter().sum();
    let inv = if total > 0.0 { 1.0 / total } else { 0.0 };
    px.iter_mut().for_each(|p| *p *= inv);
    pu.iter_mut().for_each(|p| *p *= inv);
    (px, pu, inv)
}

// Both classical functionals are summed termwise over the joint so that
// product joints give exactly zero information, whatever the cutoff.

/// Conditional Shannon entropy `H(X|U)` of a row-major joint `P[x][u]`.
pub fn classical_conditional(joint: &[f64], nx: usize, nu: usize) -> f64 {
    let cutoff = tolerances().entropy_cutoff;
    let (_, pu, inv) = marginals(joint, nx, nu);
    let mut h = 0.0;
    for x in 0..nx {
        for u in 0..nu {
            let p = joint[x * nu + u] * inv;
            if p > cutoff {
                h -= p * (p / pu[u]).log2();
            }
        }
    }
    h.max(0.0)
}

/// Mutual information `I(X;U)` of a row-major joint `P[x][u]`.
pub fn classical_mutual(joint: &[f64], nx: usize, nu: usize) -> f64 {
    let cutoff = tolerances().entropy_cutoff;
    let (px, pu, inv) = marginals(joint, nx, nu);
    let mut i = 0.0;
    for x in 0..nx {
        for u in 0..nu {
            let p = joint[x * nu + u] * inv;
            if p > cutoff {
                i += p * (p / (px[x] * pu[u])).log2();
            }
        }
    }
    i.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, kron};

    fn bell() -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]).unwrap()
    }

    // independent reference: direct sum with natural logs
    fn h_ref(p: &[f64]) -> f64 {
        -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>() / 2f64.ln()
    }

    #[test]
    fn shannon_examples() {
        let d = |v: Vec<f64>| Distribution::new(v).unwrap();
        assert_eq!(shannon(&d(vec![0.5, 0.5])), 1.0);
        assert_eq!(shannon(&d(vec![1.0, 0.0])), 0.0);
        assert!((shannon(&d(vec![0.25, 0.75])) - 0.811278).abs() < 1e-6);
        assert!((shannon(&d(vec![0.25, 0.75])) - h_ref(&[0.25, 0.75])).abs() < 1e-14);
    }

    #[test]
    fn distribution_validation() {
        assert!(Distribution::new(vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(vec![1.0 + 1e-13, -1e-13]).is_ok());
        assert!(Distribution::new(vec![1.1, -0.1]).is_err());
        assert!(Distribution::new(vec![]).is_err());
    }

    #[test]
    fn von_neumann_examples() {
        assert!((von_neumann(&DensityMatrix::maximally_mixed(2)).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(von_neumann(&DensityMatrix::from_diag(&[1.0, 0.0]).unwrap()).unwrap(), 0.0);
        let rho = DensityMatrix::from_diag(&[0.1464466, 0.8535534]).unwrap();
        assert!((von_neumann(&rho).unwrap() - 0.600876).abs() < 1e-6);
    }

    #[test]
    fn conditional_examples() {
        assert!((cond_vn(&bell(), &[2, 2], &[0]).unwrap() + 1.0).abs() < 1e-12);

        let ra = DensityMatrix::from_diag(&[0.3, 0.7]).unwrap();
        let rb = DensityMatrix::from_diag(&[0.6, 0.4]).unwrap();
        let prod = DensityMatrix::new(kron(ra.matrix(), rb.matrix()).unwrap()).unwrap();
        let h = von_neumann(&ra).unwrap();
        assert!((cond_vn(&prod, &[2, 2], &[0]).unwrap() - h).abs() < 1e-12);

        let corr = DensityMatrix::from_diag(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(cond_vn(&corr, &[2, 2], &[0]).unwrap().abs() < 1e-12);
        assert!(matches!(cond_vn(&corr, &[2, 3], &[0]), Err(Error::DimMismatch(_))));
    }

    #[test]
    fn mutual_info_examples() {
        let ra = DensityMatrix::from_diag(&[0.3, 0.7]).unwrap();
        let prod = DensityMatrix::new(kron(ra.matrix(), ra.matrix()).unwrap()).unwrap();
        assert!(mutual_info(&prod, &[2, 2], &[0]).unwrap().abs() < 1e-12);
        assert!((mutual_info(&bell(), &[2, 2], &[0]).unwrap() - 2.0).abs() < 1e-12);
        let corr = DensityMatrix::from_diag(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((mutual_info(&corr, &[2, 2], &[1]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn holevo_examples() {
        let zero = DensityMatrix::from_diag(&[1.0, 0.0]).unwrap();
        let one = DensityMatrix::from_diag(&[0.0, 1.0]).unwrap();
        let plus = DensityMatrix::pure(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((holevo(&[(0.5, zero.clone()), (0.5, one)]).unwrap() - 1.0).abs() < 1e-12);
        assert!(holevo(&[(0.5, plus.clone()), (0.5, plus.clone())]).unwrap().abs() < 1e-12);
        // rho_B eigenvalues (1 ± 1/sqrt2)/2
        let l = (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0;
        let expect = h_ref(&[l, 1.0 - l]);
        let chi = holevo(&[(0.5, zero), (0.5, plus)]).unwrap();
        assert!((chi - expect).abs() < 1e-12);
        assert!((chi - 0.600876).abs() < 1e-6);
    }

    #[test]
    fn holevo_rejects_bad_ensembles() {
        let zero = DensityMatrix::from_diag(&[1.0, 0.0]).unwrap();
        let three = DensityMatrix::maximally_mixed(3);
        assert!(matches!(
            holevo(&[(0.5, zero.clone()), (0.4, zero.clone())]),
            Err(Error::InvalidEnsemble(_))
        ));
        assert!(matches!(
            holevo(&[(0.5, zero), (0.5, three)]),
            Err(Error::InvalidEnsemble(_))
        ));
    }

    #[test]
    fn classical_helpers() {
        let joint = [0.45, 0.05, 0.10, 0.40];
        let hxu = classical_conditional(&joint, 2, 2);
        let ixu = classical_mutual(&joint, 2, 2);
        let hx = h_ref(&[0.5, 0.5]);
        assert!((hxu + ixu - hx).abs() < 1e-12);
    }
}
