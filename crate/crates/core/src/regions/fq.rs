//! Fully quantum helper: rate pairs `(H(A|C)_φ, ½ I(RA;C)_φ)` where
//! `φ_ACER` results from a helper isometry `V: B -> C ⊗ E` applied to the
//! purified source `ψ_ABR`.

use rand_chacha::ChaCha8Rng;

use super::sweep::{sweep, Parameterized, SweepConfig};
use super::{BoundaryCurve, ChannelIsometry, CurveMeta, RatePoint, Witness};
use crate::entropy::spectral_entropy;
use crate::error::{Error, Result};
use crate::linalg::random::ginibre;
use crate::linalg::{c, ComplexMatrix, PureStateVector};
use crate::sources::BipartiteSource;

// register order of φ is A, C, E, R
const A: usize = 0;
const C: usize = 1;
const R: usize = 3;

/// Entropy of the marginal on `keep`, evaluated on the smaller side of
/// the pure-state cut.
fn marginal_entropy(phi: &PureStateVector, keep: &[usize]) -> Result<f64> {
    let dims = phi.dims();
    let kept: usize = keep.iter().map(|&k| dims[k]).product();
    let total: usize = dims.iter().product();
    if kept * kept > total {
        let rest: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
        if rest.is_empty() {
            return Ok(0.0);
        }
        spectral_entropy(&phi.reduced(&rest)?)
    } else {
        spectral_entropy(&phi.reduced(keep)?)
    }
}

fn fq_rates(src: &BipartiteSource, v: &ChannelIsometry) -> Result<(f64, f64)> {
    let (d_b, d_c, d_e) = v.dims();
    let (d_a, src_b) = src.dims();
    if d_b != src_b {
        return Err(Error::DimMismatch(format!(
            "isometry input dimension {d_b}, helper dimension {src_b}"
        )));
    }
    let out = src.psi().apply_local(1, v.matrix())?;
    let phi = PureStateVector::new_unchecked(
        vec![d_a, d_c, d_e, src.reference_dim()],
        out.amplitudes().to_vec(),
    );
    let h_c = marginal_entropy(&phi, &[C])?;
    let h_ac = marginal_entropy(&phi, &[A, C])?;
    let h_ra = marginal_entropy(&phi, &[A, R])?;
    let h_rac = marginal_entropy(&phi, &[A, C, R])?;
    let r1 = h_ac - h_c;
    let r2 = (0.5 * (h_ra + h_c - h_rac)).max(0.0);
    Ok((r1, r2))
}

pub fn rate_point_fq(src: &BipartiteSource, v: &ChannelIsometry) -> Result<RatePoint> {
    let (r1, r2) = fq_rates(src, v)?;
    Ok(RatePoint::new(r1, r2, Witness::Isometry(v.clone())))
}

/// Isometries `B -> C ⊗ E` for one output dimension `d_C`, `d_E = d_B d_C`,
/// parameterized by the polar part of a free complex matrix.
#[derive(Debug, Clone)]
pub struct FqProblem {
    src: BipartiteSource,
    d_b: usize,
    d_c: usize,
    d_e: usize,
}

impl FqProblem {
    pub fn new(src: &BipartiteSource, d_c: usize) -> Result<Self> {
        if d_c == 0 {
            return Err(Error::input("d_c", "must be at least 1"));
        }
        let d_b = src.dims().1;
        Ok(FqProblem {
            src: src.clone(),
            d_b,
            d_c,
            d_e: d_b * d_c,
        })
    }

    fn generator(&self, x: &[f64]) -> Option<ComplexMatrix> {
        let data = x.chunks(2).map(|p| c(p[0], p[1])).collect();
        ComplexMatrix::from_vec(self.d_c * self.d_e, self.d_b, data).ok()
    }
}

impl Parameterized for FqProblem {
    fn n_params(&self) -> usize {
        2 * self.d_c * self.d_e * self.d_b
    }

    fn initial(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let g = ginibre(self.d_c * self.d_e, self.d_b, rng);
        g.data().iter().flat_map(|z| [z.re, z.im]).collect()
    }

    fn witness(&self, x: &[f64]) -> Option<Witness> {
        let g = self.generator(x)?;
        ChannelIsometry::from_generator(&g, self.d_b, self.d_c, self.d_e)
            .ok()
            .map(Witness::Isometry)
    }

    fn rates(&self, w: &Witness) -> Result<(f64, f64)> {
        match w {
            Witness::Isometry(v) => fq_rates(&self.src, v),
            other => Err(Error::InvalidChannel(format!(
                "expected an isometry, got a {}",
                other.kind()
            ))),
        }
    }

    fn anchors(&self) -> Vec<Witness> {
        let mut a = vec![Witness::Isometry(ChannelIsometry::discard(
            self.d_b, self.d_c, self.d_e,
        ))];
        if self.d_c >= self.d_b {
            a.push(Witness::Isometry(ChannelIsometry::embed_identity(
                self.d_b, self.d_c, self.d_e,
            )));
        }
        a
    }
}

/// Union over `d_C ∈ d_c_list` of the per-dimension sweeps. `samples`
/// holds the per-weight points of each dimension in list order.
pub fn trace_boundary_fq(
    src: &BipartiteSource,
    d_c_list: &[usize],
    cfg: &SweepConfig,
) -> Result<BoundaryCurve> {
    if d_c_list.is_empty() {
        return Err(Error::input("d_c", "list must not be empty"));
    }
    let mut samples = Vec::new();
    let mut pool = Vec::new();
    for &d_c in d_c_list {
        let out = sweep(&FqProblem::new(src, d_c)?, cfg)?;
        samples.extend(out.samples);
        pool.extend(out.pool);
    }
    let max = d_c_list.iter().max().copied().unwrap_or(1);
    Ok(BoundaryCurve::from_pool(
        samples,
        pool,
        CurveMeta {
            label: format!("inner bound, d_C <= {max}"),
            restarts: cfg.restarts,
            evaluations_per_start: cfg.search.evaluations,
            seed: cfg.seed,
            mu_grid: cfg.mu_grid.clone(),
        },
    ))
}

/// `1..=d_B²`.
pub fn default_dc_list(d_b: usize) -> Vec<usize> {
    (1..=d_b * d_b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::von_neumann;
    use crate::linalg::{partial_trace, random::random_isometry, DensityMatrix};
    use crate::sources::catalog::{bell, classically_correlated, product};

    #[test]
    fn bell_endpoints() {
        let src = bell();
        let p = rate_point_fq(&src, &ChannelIsometry::embed_identity(2, 2, 1)).unwrap();
        assert!((p.r1 + 1.0).abs() < 1e-9 && (p.r2 - 1.0).abs() < 1e-9, "{p:?}");
        let p = rate_point_fq(&src, &ChannelIsometry::discard(2, 1, 2)).unwrap();
        assert!((p.r1 - 1.0).abs() < 1e-9 && p.r2.abs() < 1e-9);
    }

    #[test]
    fn discard_gives_h_a() {
        for src in [classically_correlated(), product(), bell()] {
            let rho_a = partial_trace(src.rho().matrix(), &[2, 2], &[0]).unwrap();
            let h_a = von_neumann(&DensityMatrix::new(rho_a).unwrap()).unwrap();
            for d_c in [1, 2, 3] {
                let v = ChannelIsometry::discard(2, d_c, 2 * d_c);
                let p = rate_point_fq(&src, &v).unwrap();
                assert!((p.r1 - h_a).abs() < 1e-9 && p.r2.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn product_source_r1_is_h_a() {
        let src = product();
        let rho_a = partial_trace(src.rho().matrix(), &[2, 2], &[0]).unwrap();
        let h_a = von_neumann(&DensityMatrix::new(rho_a).unwrap()).unwrap();
        for seed in 0..5 {
            let m = random_isometry(2, 8, seed).unwrap();
            let v = ChannelIsometry::new(m, 2, 2, 4).unwrap();
            let p = rate_point_fq(&src, &v).unwrap();
            assert!((p.r1 - h_a).abs() < 1e-9);
            assert!(p.r2 >= 0.0);
        }
    }

    #[test]
    fn dim_mismatch() {
        let r = rate_point_fq(&bell(), &ChannelIsometry::discard(3, 1, 3));
        assert!(matches!(r, Err(Error::DimMismatch(_))));
    }
}
