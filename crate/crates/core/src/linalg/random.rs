//! Seeded random states, POVMs and isometries.
//!
//! Every generator takes an explicit seed; the same seed always reproduces
//! bit-identical output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{c, ComplexMatrix, C64};
use super::states::{DensityMatrix, Povm};
use crate::error::{Error, Result};

/// Deterministic generator for `(seed, stream)`. Distinct streams are
/// independent, which lets parallel work units derive their own randomness.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) fn gaussian_c(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

/// `rows x cols` matrix of standard complex Gaussian entries.
pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| gaussian_c(rng)).collect();
    ComplexMatrix::from_vec(rows, cols, data).expect("finite gaussian entries")
}

/// Wishart-normalized random state `G G† / Tr(G G†)`.
pub fn random_density(dim: usize, seed: u64) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::BadDims("dimension must be positive".into()));
    }
    let mut rng = seeded_rng(seed, 0);
    let g = ginibre(dim, dim, &mut rng);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    Ok(DensityMatrix::new_unchecked(w.scale(1.0 / tr).hermitian_part()))
}

/// Random POVM with `n_outcomes` full-rank elements.
pub fn random_povm(dim: usize, n_outcomes: usize, seed: u64) -> Result<Povm> {
    if dim == 0 || n_outcomes == 0 {
        return Err(Error::BadDims(format!(
            "random_povm(dim={dim}, n_outcomes={n_outcomes})"
        )));
    }
    let mut rng = seeded_rng(seed, 1);
    let gens: Vec<ComplexMatrix> = (0..n_outcomes).map(|_| ginibre(dim, dim, &mut rng)).collect();
    Povm::from_generators(&gens, 1e-12)
}

/// Orthonormalizes the columns of `m` (modified Gram-Schmidt, two passes).
pub fn orthonormal_columns(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (rows, cols) = (m.rows(), m.cols());
    if cols > rows {
        return Err(Error::BadDims(format!("{cols} columns cannot be orthonormal in C^{rows}")));
    }
    let mut q: Vec<Vec<C64>> = (0..cols).map(|j| m.column(j)).collect();
    for j in 0..cols {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: C64 = (0..rows).map(|i| q[k][i].conj() * q[j][i]).sum();
                for i in 0..rows {
                    let qk = q[k][i];
                    q[j][i] -= proj * qk;
                }
            }
        }
        let n = q[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-12 {
            return Err(Error::BadDims("columns are linearly dependent".into()));
        }
        for z in &mut q[j] {
            *z /= n;
        }
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for (j, col) in q.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            out[(i, j)] = *z;
        }
    }
    Ok(out)
}

/// Random isometry `V` of shape `d_out x d_in` with `V† V = I`.
pub fn random_isometry(d_in: usize, d_out: usize, seed: u64) -> Result<ComplexMatrix> {
    if d_in == 0 || d_out < d_in {
        return Err(Error::BadDims(format!(
            "isometry needs 1 <= d_in <= d_out, got d_in={d_in}, d_out={d_out}"
        )));
    }
    let mut rng = seeded_rng(seed, 2);
    orthonormal_columns(&ginibre(d_out, d_in, &mut rng))
}

pub fn random_unitary(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    random_isometry(dim, dim, seed)
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = seeded_rng(seed, 3);
    ginibre(dim, dim, &mut rng).hermitian_part()
}

/// Random probability vector (normalized exponentials).
pub fn random_distribution(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = seeded_rng(seed, 4);
    let w: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Random real-amplitude pure qubit state `cos t|0> + sin t|1>`.
pub fn random_real_qubit(rng: &mut impl Rng) -> DensityMatrix {
    let t: f64 = rng.random::<f64>() * std::f64::consts::PI;
    DensityMatrix::pure(&[c(t.cos(), 0.0), c(t.sin(), 0.0)]).expect("unit vector")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_is_deterministic() {
        let a = random_density(2, 7).unwrap();
        let b = random_density(2, 7).unwrap();
        assert_eq!(a, b);
        assert!(DensityMatrix::new(a.into_matrix()).is_ok());
    }

    #[test]
    fn povm_is_complete() {
        let p = random_povm(2, 4, 1).unwrap();
        assert!(p.completeness_residual() <= 1e-9);
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn isometry_residual() {
        let v = random_isometry(2, 6, 3).unwrap();
        let g = &v.adjoint() * &v;
        assert!(g.max_abs_diff(&ComplexMatrix::identity(2)) <= 1e-9);
        assert_eq!((v.rows(), v.cols()), (6, 2));
    }

    #[test]
    fn bad_dims() {
        assert!(matches!(random_isometry(3, 2, 0), Err(Error::BadDims(_))));
        assert!(matches!(random_povm(2, 0, 0), Err(Error::BadDims(_))));
    }
}
