//! Quantum helper: rate pairs `(H(X|U), I(U;B)_σ)` over helper POVMs, the
//! accessible information, and the measure-then-compress gap.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::sweep::{sweep, Parameterized, SweepConfig};
use super::{BoundaryCurve, CurveMeta, Witness};
use crate::entropy::entropy_bits;
use crate::error::{Error, Result};
use crate::linalg::random::{ginibre, seeded_rng};
use crate::linalg::{eig_hermitian, ComplexMatrix, Povm};
use crate::measurement::{QHelperProblem, ZERO_OUTCOME};
use crate::optimize::{local_search, SearchConfig};
use crate::sources::CQSource;
use crate::tolerance::tolerances;

/// Stream offset for accessible-information restarts.
const ACCINFO_STREAM: u64 = 2 << 40;

/// Merging two outcomes is accepted when `I(X;U)` drops by at most this.
const MERGE_LOSS: f64 = 1e-5;

/// POVMs with `d_B²` outcomes from unconstrained `d_B x d_B` generators.
#[derive(Debug, Clone)]
pub struct QhelperSearch {
    problem: QHelperProblem,
    d: usize,
    outcomes: usize,
}

impl QhelperSearch {
    pub fn new(src: &CQSource) -> Result<Self> {
        let d = src.dim();
        Ok(QhelperSearch {
            problem: QHelperProblem::new(src)?,
            d,
            outcomes: d * d,
        })
    }

    pub fn problem(&self) -> &QHelperProblem {
        &self.problem
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    fn povm(&self, x: &[f64]) -> Option<Povm> {
        let block = 2 * self.d * self.d;
        let gens: Vec<ComplexMatrix> = x
            .chunks(block)
            .map(|ch| {
                let data = ch
                    .chunks(2)
                    .map(|p| crate::linalg::c(p[0], p[1]))
                    .collect();
                ComplexMatrix::from_vec(self.d, self.d, data)
            })
            .collect::<Result<_>>()
            .ok()?;
        let p = Povm::from_generators(&gens, 1e-12).ok()?;
        (p.completeness_residual() <= tolerances().completeness).then_some(p)
    }

    fn initial_params(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.n_params());
        for _ in 0..self.outcomes {
            let g = ginibre(self.d, self.d, rng);
            for z in g.data() {
                x.push(z.re);
                x.push(z.im);
            }
        }
        x
    }

    /// Projective anchors: the computational basis, the eigenbasis of
    /// `ρ_B`, and the eigenbases of every pairwise weighted difference
    /// `p_x ρ_x - p_x' ρ_x'`.
    fn projective_anchors(&self) -> Vec<Povm> {
        let src = self.problem.source();
        let mut out = vec![Povm::computational(self.d)];
        let mut bases = vec![src.helper_marginal().matrix().clone()];
        for i in 0..src.len() {
            for j in i + 1..src.len() {
                let mut m = src.states()[i].matrix().scale(src.p()[i]);
                m.add_scaled(src.states()[j].matrix(), -src.p()[j]);
                bases.push(m);
            }
        }
        for m in bases {
            if let Ok(e) = eig_hermitian(&m) {
                if let Ok(p) = Povm::projective(&e.vectors) {
                    out.push(p);
                }
            }
        }
        out.into_iter().map(|p| p.padded(self.outcomes)).collect()
    }
}

impl Parameterized for QhelperSearch {
    fn n_params(&self) -> usize {
        2 * self.outcomes * self.d * self.d
    }

    fn initial(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        self.initial_params(rng)
    }

    fn witness(&self, x: &[f64]) -> Option<Witness> {
        self.povm(x).map(Witness::Povm)
    }

    fn rates(&self, w: &Witness) -> Result<(f64, f64)> {
        match w {
            Witness::Povm(p) => self.problem.rates(p),
            other => Err(Error::InvalidPovm(format!("expected a POVM, got a {}", other.kind()))),
        }
    }

    fn anchors(&self) -> Vec<Witness> {
        let mut a = vec![Witness::Povm(Povm::uninformative(self.d, self.outcomes))];
        a.extend(self.projective_anchors().into_iter().map(Witness::Povm));
        a
    }
}

pub fn trace_boundary_qhelper(src: &CQSource, cfg: &SweepConfig) -> Result<BoundaryCurve> {
    let search = QhelperSearch::new(src)?;
    let out = sweep(&search, cfg)?;
    Ok(BoundaryCurve::from_pool(
        out.samples,
        out.pool,
        CurveMeta {
            label: format!("quantum helper, |U| = {}", search.outcomes),
            restarts: cfg.restarts,
            evaluations_per_start: cfg.search.evaluations,
            seed: cfg.seed,
            mu_grid: cfg.mu_grid.clone(),
        },
    ))
}

fn merged(povm: &Povm, a: usize, b: usize) -> Povm {
    let mut els: Vec<ComplexMatrix> = Vec::with_capacity(povm.len() - 1);
    for (u, e) in povm.elements().iter().enumerate() {
        if u == b {
            continue;
        }
        if u == a {
            els.push(e + &povm.elements()[b]);
        } else {
            els.push(e.clone());
        }
    }
    Povm::new_unchecked(els)
}

/// Drops outcomes that never fire and merges outcomes whose union costs at
/// most `MERGE_LOSS` bits of `I(X;U)`, cheapest pair first.
pub fn merge_redundant_outcomes(problem: &QHelperProblem, povm: &Povm) -> Result<Povm> {
    let rho_b = problem.source().helper_marginal();
    let mut cur = povm.clone();
    // fold dead outcomes into the most likely one
    loop {
        let probs: Vec<f64> = cur
            .elements()
            .iter()
            .map(|e| rho_b.matrix().trace_product_re(e))
            .collect();
        let dead = probs.iter().position(|p| *p <= ZERO_OUTCOME);
        match dead {
            Some(z) if cur.len() > 1 => {
                let keep = (0..cur.len())
                    .filter(|&u| u != z)
                    .max_by(|&i, &j| probs[i].total_cmp(&probs[j]))
                    .expect("at least one other outcome");
                cur = merged(&cur, keep.min(z), keep.max(z));
            }
            _ => break,
        }
    }
    let mut info = problem.classical_information(&cur)?;
    while cur.len() > 1 {
        let mut best: Option<(f64, Povm)> = None;
        for a in 0..cur.len() {
            for b in a + 1..cur.len() {
                let cand = merged(&cur, a, b);
                let i = problem.classical_information(&cand)?;
                if best.as_ref().is_none_or(|(bi, _)| i > *bi) {
                    best = Some((i, cand));
                }
            }
        }
        match best {
            Some((i, cand)) if info - i <= MERGE_LOSS => {
                info = i;
                cur = cand;
            }
            _ => break,
        }
    }
    Ok(cur)
}

/// `max I(X;U)` over POVMs with `d_B²` outcomes, and a maximizer with
/// redundant outcomes merged.
pub fn accessible_information(src: &CQSource, restarts: usize, seed: u64) -> Result<(f64, Povm)> {
    accessible_information_with(src, restarts, seed, &SearchConfig::default())
}

pub fn accessible_information_with(
    src: &CQSource,
    restarts: usize,
    seed: u64,
    cfg: &SearchConfig,
) -> Result<(f64, Povm)> {
    let search = QhelperSearch::new(src)?;
    let problem = search.problem();
    let info = |p: &Povm| problem.classical_information(p);

    let anchors: Vec<(f64, Povm)> = search
        .projective_anchors()
        .into_iter()
        .filter_map(|p| Some((info(&p).ok()?, p)))
        .collect();
    let found: Vec<Option<(f64, Povm)>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeded_rng(seed, ACCINFO_STREAM | r as u64);
            let x0 = search.initial_params(&mut rng);
            let f = |x: &[f64]| match search.povm(x).map(|p| info(&p)) {
                Some(Ok(i)) => -i,
                _ => f64::INFINITY,
            };
            let res = local_search(f, x0, cfg, &mut rng);
            let p = search.povm(&res.x)?;
            Some((info(&p).ok()?, p))
        })
        .collect();

    let mut best: Option<&(f64, Povm)> = None;
    for cand in anchors.iter().chain(found.iter().flatten()) {
        if best.is_none_or(|b| cand.0 > b.0 + 1e-12) {
            best = Some(cand);
        }
    }
    let (_, povm) = best.ok_or_else(|| Error::InvalidState("no measurement evaluated".into()))?;
    let canon = merge_redundant_outcomes(problem, povm)?;
    let canon_info = info(&canon)?;
    // never report less than the best fixed basis
    let floor = anchors
        .iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .filter(|a| a.0 > canon_info);
    match floor {
        Some((i, p)) => Ok((*i, merge_redundant_outcomes(problem, p)?)),
        None => Ok((canon_info, canon)),
    }
}

/// Rates of the measure-then-compress scheme built on the maximizer `U*`.
#[derive(Debug, Clone)]
pub struct SeparationGap {
    /// `H(U*)`, the cost of sending the outcome losslessly.
    pub h_ustar: f64,
    /// `I(U*;B)_σ`, the measurement-compression cost of the same POVM.
    pub i_ub_star: f64,
    pub gap: f64,
    pub i_acc: f64,
    pub povm: Povm,
}

pub fn separation_gap(src: &CQSource, restarts: usize, seed: u64) -> Result<SeparationGap> {
    let (i_acc, povm) = accessible_information(src, restarts, seed)?;
    let problem = QHelperProblem::new(src)?;
    let post = problem.post_measurement(&povm)?;
    let h_ustar = entropy_bits(&post.p_u);
    let i_ub_star = post.mutual_information()?;
    Ok(SeparationGap {
        h_ustar,
        i_ub_star,
        gap: h_ustar - i_ub_star,
        i_acc,
        povm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::holevo;
    use crate::sources::catalog::*;

    #[test]
    fn accinfo_closed_forms() {
        let (i, _) = accessible_information(&orthogonal(), 4, 1).unwrap();
        assert!((i - 1.0).abs() < 1e-9);
        let (i, _) = accessible_information(&identical(), 4, 1).unwrap();
        assert!(i.abs() < 1e-9, "{i}");
    }

    #[test]
    fn accinfo_zero_plus_near_helstrom() {
        let src = zero_plus();
        let (i, p) = accessible_information(&src, 8, 3).unwrap();
        assert!((i - 0.399124).abs() < 3e-3, "I_acc = {i}");
        assert!(i <= holevo(&src.ensemble()).unwrap() + 1e-9);
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn separation_gap_orthogonal() {
        let g = separation_gap(&orthogonal(), 4, 1).unwrap();
        assert!((g.h_ustar - 1.0).abs() < 1e-9);
        assert!(g.gap.abs() < 1e-9);
    }

    #[test]
    fn merge_keeps_information() {
        let src = zero_plus();
        let problem = QHelperProblem::new(&src).unwrap();
        // computational basis split into four proportional pieces
        let els: Vec<ComplexMatrix> = Povm::computational(2)
            .elements()
            .iter()
            .flat_map(|e| [e.scale(0.3), e.scale(0.7)])
            .collect();
        let split = Povm::new(els).unwrap();
        let m = merge_redundant_outcomes(&problem, &split).unwrap();
        assert_eq!(m.len(), 2);
        let a = problem.classical_information(&split).unwrap();
        let b = problem.classical_information(&m).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn single_state_collapses() {
        let cfg = SweepConfig {
            restarts: 2,
            mu_grid: vec![0.0, 1.0, 1e6],
            ..SweepConfig::with_seed(2)
        };
        let c = trace_boundary_qhelper(&identical(), &cfg).unwrap();
        assert_eq!(c.points.len(), 1, "{:?}", c.points.iter().map(|p| (p.r1, p.r2)).collect::<Vec<_>>());
        assert!((c.points[0].r1 - 1.0).abs() < 1e-9 && c.points[0].r2.abs() < 1e-9);
    }
}
