use super::eig::{eig_hermitian, psd_inv_sqrt};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerance::tolerances;

/// Validated density operator: Hermitian, PSD, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let tol = tolerances();
        if !mat.is_square() {
            return Err(Error::InvalidState(format!(
                "{}x{} matrix is not square",
                mat.rows(),
                mat.cols()
            )));
        }
        if !mat.is_finite() {
            return Err(Error::NonFinite);
        }
        let res = mat.hermitian_residual();
        if res > tol.hermitian {
            return Err(Error::NotHermitian(res));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let e = eig_hermitian(&mat)?;
        let min = e.values.last().copied().unwrap_or(0.0);
        if min < -tol.psd {
            return Err(Error::NotPsd(min));
        }
        Ok(DensityMatrix {
            mat: mat.hermitian_part(),
        })
    }

    /// Wraps an operator known to be a state by construction (partial traces,
    /// conjugations of valid states).
    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        DensityMatrix { mat }
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            mat: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// `|ψ><ψ|` of a (not necessarily normalized) vector.
    pub fn pure(v: &[super::C64]) -> Result<Self> {
        let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if n2 <= 0.0 || !n2.is_finite() {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Ok(DensityMatrix {
            mat: ComplexMatrix::outer(v).scale(1.0 / n2),
        })
    }

    pub fn from_diag(p: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diag(p))
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.mat
    }
}

/// POVM: PSD elements summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let tol = tolerances();
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidPovm("no outcomes".into()))?;
        if !first.is_square() {
            return Err(Error::InvalidPovm("elements must be square".into()));
        }
        let d = first.dim();
        let mut sum = ComplexMatrix::square_zeros(d);
        for (u, e) in elements.iter().enumerate() {
            if !e.is_square() || e.dim() != d {
                return Err(Error::InvalidPovm(format!("element {u} has the wrong shape")));
            }
            let res = e.hermitian_residual();
            if res > tol.hermitian {
                return Err(Error::InvalidPovm(format!(
                    "element {u} is not Hermitian (residual {res:.3e})"
                )));
            }
            let min = eig_hermitian(e)?.values.last().copied().unwrap_or(0.0);
            if min < -tol.psd {
                return Err(Error::InvalidPovm(format!(
                    "element {u} has eigenvalue {min:.3e}"
                )));
            }
            sum.add_scaled(e, 1.0);
        }
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if residual > tol.completeness {
            return Err(Error::InvalidPovm(format!(
                "completeness residual {residual:.3e}"
            )));
        }
        Ok(Povm {
            elements: elements.into_iter().map(|e| e.hermitian_part()).collect(),
        })
    }

    pub(crate) fn new_unchecked(elements: Vec<ComplexMatrix>) -> Self {
        Povm { elements }
    }

    /// `Λ_u = M^{-1/2} A_u† A_u M^{-1/2}` with `M = Σ A_u† A_u + reg I`,
    /// after rescaling so that `Tr M = d`.
    ///
    /// Maps any non-empty list of `d x d` matrices onto a full-support POVM;
    /// completeness degrades when `M` is close to singular.
    pub fn from_generators(gens: &[ComplexMatrix], reg: f64) -> Result<Self> {
        let first = gens
            .first()
            .ok_or_else(|| Error::InvalidPovm("no generators".into()))?;
        let d = first.cols();
        let grams: Vec<ComplexMatrix> = gens.iter().map(|a| &a.adjoint() * a).collect();
        let mut m = ComplexMatrix::square_zeros(d);
        for g in &grams {
            if g.dim() != d {
                return Err(Error::InvalidPovm("generators differ in width".into()));
            }
            m.add_scaled(g, 1.0);
        }
        // the map is scale invariant; normalizing keeps `reg` relative
        let scale = m.trace().re / d as f64;
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidPovm("generators are all zero".into()));
        }
        let w = psd_inv_sqrt(&m.scale(1.0 / scale).hermitian_part(), reg)?;
        let first_pass: Vec<ComplexMatrix> = grams
            .iter()
            .map(|g| (&(&w * g) * &w).scale(1.0 / scale).hermitian_part())
            .collect();
        // one more pass removes the regularizer's completeness defect
        let mut sum = ComplexMatrix::square_zeros(d);
        for e in &first_pass {
            sum.add_scaled(e, 1.0);
        }
        let w = psd_inv_sqrt(&sum.hermitian_part(), 0.0)?;
        let elements = first_pass
            .iter()
            .map(|e| (&(&w * e) * &w).hermitian_part())
            .collect();
        Ok(Povm { elements })
    }

    /// Projective measurement onto the columns of a unitary.
    pub fn projective(basis: &ComplexMatrix) -> Result<Self> {
        let d = basis.rows();
        let elements = (0..basis.cols())
            .map(|k| ComplexMatrix::outer(&basis.column(k)))
            .collect::<Vec<_>>();
        if elements.len() != d {
            return Err(Error::InvalidPovm("basis must be square".into()));
        }
        Self::new(elements)
    }

    pub fn computational(dim: usize) -> Self {
        Povm {
            elements: (0..dim)
                .map(|k| {
                    let mut diag = vec![0.0; dim];
                    diag[k] = 1.0;
                    ComplexMatrix::from_diag(&diag)
                })
                .collect(),
        }
    }

    /// `n` outcomes, each `I/n`.
    pub fn uninformative(dim: usize, n: usize) -> Self {
        let e = ComplexMatrix::identity(dim).scale(1.0 / n as f64);
        Povm {
            elements: vec![e; n],
        }
    }

    /// Appends zero elements up to `n` outcomes.
    pub fn padded(mut self, n: usize) -> Self {
        let d = self.dim();
        while self.elements.len() < n {
            self.elements.push(ComplexMatrix::square_zeros(d));
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn completeness_residual(&self) -> f64 {
        let d = self.dim();
        let mut sum = ComplexMatrix::square_zeros(d);
        for e in &self.elements {
            sum.add_scaled(e, 1.0);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(d))
    }

    /// True when every element has rank at most one (numerically).
    pub fn is_rank_one(&self) -> bool {
        self.elements.iter().all(|e| {
            eig_hermitian(e)
                .map(|s| s.values.iter().skip(1).all(|v| v.abs() < 1e-9))
                .unwrap_or(false)
        })
    }
}
