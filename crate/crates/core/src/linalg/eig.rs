//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! operator functions built on it.

use super::matrix::{c, ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tolerance::tolerances;

/// Spectral decomposition `M = U diag(values) U†`.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Unitary whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

impl Eigen {
    /// `U f(diag) U†`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let u = &self.vectors;
        let mut out = ComplexMatrix::square_zeros(n);
        for k in 0..n {
            if fv[k] == 0.0 {
                continue;
            }
            for i in 0..n {
                let a = u[(i, k)] * fv[k];
                for j in 0..n {
                    out[(i, j)] += a * u[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Eigen> {
    let tol = tolerances();
    if !m.is_square() {
        return Err(Error::BadDims(format!(
            "eigendecomposition of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let res = m.hermitian_residual();
    if res > tol.eig_hermitian {
        return Err(Error::NotHermitian(res));
    }
    jacobi(&m.hermitian_part(), tol.jacobi_target, tol.jacobi_max_sweeps)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(m: &ComplexMatrix, target: f64, max_sweeps: usize) -> Result<Eigen> {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius().max(1.0);
    let goal = target * scale;

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off > goal {
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag = a.diag_re();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::square_zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, new)] = v[(r, old)];
        }
    }
    Ok(Eigen { values, vectors })
}

/// Zeroes `a[p][q]` with the unitary `J = D R`, where `D` strips the phase
/// of `a[p][q]` and `R` is the real symmetric Jacobi rotation.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let n = a.dim();
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;
    let e_minus = phase.conj();

    // columns: A <- A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * cs - e_minus * akq * sn;
        a[(k, q)] = akp * sn + e_minus * akq * cs;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * cs - e_minus * vkq * sn;
        v[(k, q)] = vkp * sn + e_minus * vkq * cs;
    }
    // rows: A <- J† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * cs - phase * aqk * sn;
        a[(q, k)] = apk * sn + phase * aqk * cs;
    }
    a[(p, q)] = c(0.0, 0.0);
    a[(q, p)] = c(0.0, 0.0);
    let dp = a[(p, p)].re;
    let dq = a[(q, q)].re;
    a[(p, p)] = c(dp, 0.0);
    a[(q, q)] = c(dq, 0.0);
}

/// Eigenvalues of a PSD operator with round-off negatives clipped to zero.
///
/// Fails with `NotPsd` below `-threshold`.
pub fn clipped_spectrum(m: &ComplexMatrix, threshold: f64) -> Result<Vec<f64>> {
    let e = eig_hermitian(m)?;
    clip(e.values, threshold)
}

pub(crate) fn clip(mut values: Vec<f64>, threshold: f64) -> Result<Vec<f64>> {
    if let Some(&min) = values.last() {
        if min < -threshold {
            return Err(Error::NotPsd(min));
        }
    }
    for v in &mut values {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(values)
}

/// Principal square root of a PSD matrix.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let tol = tolerances();
    let e = eig_hermitian(m)?;
    if let Some(&min) = e.values.last() {
        if min < -tol.sqrt_psd {
            return Err(Error::NotPsd(min));
        }
    }
    Ok(e.apply(|x| x.max(0.0).sqrt()))
}

/// `(M + reg I)^{-1/2}` for PSD `M`.
pub fn psd_inv_sqrt(m: &ComplexMatrix, reg: f64) -> Result<ComplexMatrix> {
    let tol = tolerances();
    let e = eig_hermitian(m)?;
    if let Some(&min) = e.values.last() {
        if min < -tol.sqrt_psd {
            return Err(Error::NotPsd(min));
        }
    }
    Ok(e.apply(|x| 1.0 / (x.max(0.0) + reg).sqrt()))
}

/// Unit vector helper used by purification and tests.
pub(crate) fn normalize(v: &mut [C64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for z in v {
            *z /= n;
        }
    }
}
