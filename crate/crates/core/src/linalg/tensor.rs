//! Tensor products, partial traces and purifications.

use super::eig::eig_hermitian;
use super::matrix::{c, ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tolerance::tolerances;

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let cap = tolerances().max_dim;
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    if rows.max(cols) > cap {
        return Err(Error::DimensionOverflow(rows.max(cols), cap));
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a[(i, j)];
            if x.re == 0.0 && x.im == 0.0 {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out[(i * b.rows() + k, j * b.cols() + l)] = x * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of column vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Index bookkeeping for splitting a composite register into kept and traced
/// factors. `full[k * traced + t]` is the composite index of kept multi-index
/// `k` paired with traced multi-index `t`.
pub(crate) struct Split {
    pub kept: usize,
    pub traced: usize,
    pub full: Vec<usize>,
}

pub(crate) fn split(dims: &[usize], keep: &[usize]) -> Result<Split> {
    if dims.is_empty() || dims.iter().any(|&d| d == 0) {
        return Err(Error::DimMismatch(format!("invalid subsystem dims {dims:?}")));
    }
    if keep.is_empty() {
        return Err(Error::DimMismatch("keep set is empty".into()));
    }
    let mut mask = vec![false; dims.len()];
    for &k in keep {
        if k >= dims.len() || mask[k] {
            return Err(Error::DimMismatch(format!(
                "keep set {keep:?} invalid for {} subsystems",
                dims.len()
            )));
        }
        mask[k] = true;
    }
    let kept_dims: Vec<usize> = (0..dims.len()).filter(|&i| mask[i]).map(|i| dims[i]).collect();
    let traced_dims: Vec<usize> = (0..dims.len()).filter(|&i| !mask[i]).map(|i| dims[i]).collect();
    let kept: usize = kept_dims.iter().product();
    let traced: usize = traced_dims.iter().product();

    // strides of each subsystem in the composite index
    let mut stride = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * dims[i + 1];
    }
    let kept_idx: Vec<usize> = (0..dims.len()).filter(|&i| mask[i]).collect();
    let traced_idx: Vec<usize> = (0..dims.len()).filter(|&i| !mask[i]).collect();
    let offsets = |which: &[usize], count: usize| -> Vec<usize> {
        (0..count)
            .map(|mut m| {
                let mut off = 0;
                for &s in which.iter().rev() {
                    off += (m % dims[s]) * stride[s];
                    m /= dims[s];
                }
                off
            })
            .collect()
    };
    let ko = offsets(&kept_idx, kept);
    let to = offsets(&traced_idx, traced);
    let mut full = Vec::with_capacity(kept * traced);
    for k in &ko {
        for t in &to {
            full.push(k + t);
        }
    }
    Ok(Split { kept, traced, full })
}

/// Partial trace keeping the subsystems listed in `keep`, in their original
/// order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() || total != m.rows() {
        return Err(Error::DimMismatch(format!(
            "dims {dims:?} do not match a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let s = split(dims, keep)?;
    let mut out = ComplexMatrix::square_zeros(s.kept);
    for i in 0..s.kept {
        for j in 0..s.kept {
            let mut acc = c(0.0, 0.0);
            for t in 0..s.traced {
                acc += m[(s.full[i * s.traced + t], s.full[j * s.traced + t])];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Pure state on a composite register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    dims: Vec<usize>,
    amplitudes: Vec<C64>,
}

impl PureStateVector {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || total != amplitudes.len() {
            return Err(Error::DimMismatch(format!(
                "dims {dims:?} need {total} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("vector norm {norm}")));
        }
        Ok(PureStateVector { dims, amplitudes })
    }

    pub(crate) fn new_unchecked(dims: Vec<usize>, amplitudes: Vec<C64>) -> Self {
        PureStateVector { dims, amplitudes }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|ψ><ψ|`.
    pub fn density(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }

    /// Reduced operator on `keep`, computed as `Ψ Ψ†` with `Ψ` the
    /// kept-by-traced reshaping of the amplitudes.
    pub fn reduced(&self, keep: &[usize]) -> Result<ComplexMatrix> {
        let s = split(&self.dims, keep)?;
        let mut out = ComplexMatrix::square_zeros(s.kept);
        for i in 0..s.kept {
            for j in i..s.kept {
                let mut acc = c(0.0, 0.0);
                for t in 0..s.traced {
                    acc += self.amplitudes[s.full[i * s.traced + t]]
                        * self.amplitudes[s.full[j * s.traced + t]].conj();
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        Ok(out)
    }

    /// Applies `op` (an `out x in` matrix) to subsystem `which`, replacing
    /// its dimension by `op.rows()`.
    pub fn apply_local(&self, which: usize, op: &ComplexMatrix) -> Result<PureStateVector> {
        if which >= self.dims.len() || op.cols() != self.dims[which] {
            return Err(Error::DimMismatch(format!(
                "operator with {} columns on subsystem {which} of {:?}",
                op.cols(),
                self.dims
            )));
        }
        let before: usize = self.dims[..which].iter().product();
        let after: usize = self.dims[which + 1..].iter().product();
        let din = self.dims[which];
        let dout = op.rows();
        let mut amps = vec![c(0.0, 0.0); before * dout * after];
        for b in 0..before {
            for o in 0..dout {
                for i in 0..din {
                    let w = op[(o, i)];
                    if w.re == 0.0 && w.im == 0.0 {
                        continue;
                    }
                    let src = (b * din + i) * after;
                    let dst = (b * dout + o) * after;
                    for a in 0..after {
                        amps[dst + a] += w * self.amplitudes[src + a];
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims[which] = dout;
        Ok(PureStateVector {
            dims,
            amplitudes: amps,
        })
    }
}

/// Spectral purification `Σ √λ_i |v_i⟩|i⟩` on system ⊗ reference, with the
/// reference dimension equal to the numerical rank.
pub fn purify(rho: &ComplexMatrix) -> Result<PureStateVector> {
    let cutoff = tolerances().rank_cutoff;
    let e = eig_hermitian(rho)?;
    let d = rho.dim();
    let kept: Vec<usize> = (0..d).filter(|&i| e.values[i] > cutoff).collect();
    let r = kept.len().max(1);
    let mut amps = vec![c(0.0, 0.0); d * r];
    for (slot, &k) in kept.iter().enumerate() {
        let w = e.values[k].sqrt();
        for s in 0..d {
            amps[s * r + slot] = e.vectors[(s, k)] * w;
        }
    }
    super::eig::normalize(&mut amps);
    Ok(PureStateVector::new_unchecked(vec![d, r], amps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::pauli;

    fn bell() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::outer(&[c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)])
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
        let a = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let b = ComplexMatrix::from_diag(&[0.0, 1.0]);
        assert_eq!(kron(&a, &b).unwrap(), ComplexMatrix::from_diag(&[0.0, 1.0, 0.0, 0.0]));
        assert_eq!(
            kron(&pauli::z(), &pauli::z()).unwrap(),
            ComplexMatrix::from_diag(&[1.0, -1.0, -1.0, 1.0])
        );
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let r = partial_trace(&bell(), &[2, 2], &[0]).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product() {
        let rho = ComplexMatrix::from_real_rows(&[&[0.7, 0.2], &[0.2, 0.3]]).unwrap();
        let sigma = ComplexMatrix::from_diag(&[0.1, 0.5, 0.4]);
        let prod = kron(&rho, &sigma).unwrap();
        assert!(partial_trace(&prod, &[2, 3], &[0]).unwrap().max_abs_diff(&rho) < 1e-15);
        assert!(partial_trace(&prod, &[2, 3], &[1]).unwrap().max_abs_diff(&sigma) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        assert!(partial_trace(&bell(), &[2, 3], &[0]).is_err());
        assert!(partial_trace(&bell(), &[2, 2], &[]).is_err());
        assert!(partial_trace(&bell(), &[2, 2], &[2]).is_err());
        assert!(partial_trace(&bell(), &[2, 2], &[0, 0]).is_err());
    }

    #[test]
    fn kron_cap() {
        let big = ComplexMatrix::identity(100);
        assert!(matches!(kron(&big, &big), Err(Error::DimensionOverflow(10000, 4096))));
    }

    #[test]
    fn purify_examples() {
        let p = purify(&ComplexMatrix::from_diag(&[0.25, 0.75])).unwrap();
        assert_eq!(p.dims(), &[2, 2]);
        let back = partial_trace(&p.density(), p.dims(), &[0]).unwrap();
        assert!(back.max_abs_diff(&ComplexMatrix::from_diag(&[0.25, 0.75])) < 1e-12);

        let pure = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let p = purify(&pure).unwrap();
        assert_eq!(p.dims(), &[2, 1]);
        assert!(p.reduced(&[0]).unwrap().max_abs_diff(&pure) < 1e-12);
    }

    #[test]
    fn reduced_matches_partial_trace() {
        let h = 0.5;
        let v = vec![c(h, 0.0), c(0.0, h), c(-h, 0.0), c(0.0, -h)];
        let psi = PureStateVector::new(vec![2, 2], v).unwrap();
        let a = psi.reduced(&[1]).unwrap();
        let b = partial_trace(&psi.density(), &[2, 2], &[1]).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn apply_local_identity_is_noop() {
        let p = purify(&ComplexMatrix::from_diag(&[0.25, 0.75])).unwrap();
        let q = p.apply_local(0, &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(p, q);
    }
}
