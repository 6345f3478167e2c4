//! Scalarized multi-start sweep shared by the three region tracers.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{RatePoint, Witness};
use crate::error::{Error, Result};
use crate::linalg::random::seeded_rng;
use crate::optimize::{local_search, SearchConfig};

/// Stand-in for `μ = ∞` (pure `R1` minimization).
pub const MU_INFINITY: f64 = 1e6;

/// Streams at or above this are reserved for sweep work units.
const SWEEP_STREAM: u64 = 1 << 40;

/// `0`, 33 log-spaced weights in `[1e-3, 1e3]`, then [`MU_INFINITY`].
pub fn default_mu_grid() -> Vec<f64> {
    let mut grid = vec![0.0];
    grid.extend((0..33).map(|k| 10f64.powf(-3.0 + 6.0 * k as f64 / 32.0)));
    grid.push(MU_INFINITY);
    grid
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mu_grid: Vec<f64>,
    pub restarts: usize,
    pub seed: u64,
    pub search: SearchConfig,
    /// Rounds of extra weights placed at the slopes of the current hull
    /// edges, after the grid.
    pub refine_rounds: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            mu_grid: default_mu_grid(),
            restarts: 32,
            seed: 0,
            search: SearchConfig::default(),
            refine_rounds: 2,
        }
    }
}

impl SweepConfig {
    pub fn with_seed(seed: u64) -> Self {
        SweepConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu_grid.is_empty() {
            return Err(Error::input("mu_grid", "must not be empty"));
        }
        if let Some(m) = self.mu_grid.iter().find(|m| !m.is_finite() || **m < 0.0) {
            return Err(Error::input("mu_grid", format!("entry {m} is not a finite weight >= 0")));
        }
        if self.search.evaluations == 0 {
            return Err(Error::input("evaluations", "must be positive"));
        }
        Ok(())
    }
}

/// A witness family with an unconstrained real parameterization.
pub(crate) trait Parameterized: Sync {
    fn n_params(&self) -> usize;
    fn initial(&self, rng: &mut ChaCha8Rng) -> Vec<f64>;
    fn witness(&self, x: &[f64]) -> Option<Witness>;
    fn rates(&self, w: &Witness) -> Result<(f64, f64)>;
    /// Fixed witnesses that are always candidates.
    fn anchors(&self) -> Vec<Witness>;
}

struct Candidate {
    r1: f64,
    r2: f64,
    witness: Witness,
    restart: Option<usize>,
}

impl Candidate {
    fn to_point(&self, mu: f64, seed: u64) -> RatePoint {
        RatePoint {
            r1: self.r1,
            r2: self.r2,
            witness: self.witness.clone(),
            mu: Some(mu),
            seed,
            restart: self.restart,
        }
    }
}

fn ties(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Best candidate for weight `mu`; candidates are in tie-break order.
fn select(cands: &[&Candidate], mu: f64) -> usize {
    let obj = |c: &Candidate| c.r2 + mu * c.r1;
    let mut best = 0;
    for (i, c) in cands.iter().enumerate().skip(1) {
        let (fb, fc) = (obj(cands[best]), obj(c));
        let better = if ties(fb, fc) {
            (c.r1, c.r2) < (cands[best].r1, cands[best].r2)
        } else {
            fc < fb
        };
        if better {
            best = i;
        }
    }
    best
}

/// Output of a sweep: the chosen point per weight, and every evaluated
/// candidate (all achievable) for the staircase. Pool points carry the
/// weight they were searched at.
pub(crate) struct SweepOutput {
    pub samples: Vec<RatePoint>,
    pub pool: Vec<RatePoint>,
}

/// Runs every restart for each weight; the weight index keys the random
/// streams so that results do not depend on scheduling.
fn run_weights<P: Parameterized>(
    problem: &P,
    cfg: &SweepConfig,
    weights: &[(usize, f64)],
) -> Vec<Vec<Candidate>> {
    let units: Vec<(usize, usize)> = (0..weights.len())
        .flat_map(|w| (0..cfg.restarts).map(move |r| (w, r)))
        .collect();
    let found: Vec<Option<Candidate>> = units
        .par_iter()
        .map(|&(w, r)| {
            let (key, mu) = weights[w];
            let stream = SWEEP_STREAM | ((key as u64) << 20) | r as u64;
            let mut rng = seeded_rng(cfg.seed, stream);
            let x0 = problem.initial(&mut rng);
            let f = |x: &[f64]| match problem.witness(x).map(|w| problem.rates(&w)) {
                Some(Ok((r1, r2))) => r2 + mu * r1,
                _ => f64::INFINITY,
            };
            let res = local_search(f, x0, &cfg.search, &mut rng);
            let witness = problem.witness(&res.x)?;
            let (r1, r2) = problem.rates(&witness).ok()?;
            Some(Candidate {
                r1,
                r2,
                witness,
                restart: Some(r),
            })
        })
        .collect();
    let mut out: Vec<Vec<Candidate>> = (0..weights.len()).map(|_| Vec::new()).collect();
    for ((w, _), c) in units.into_iter().zip(found) {
        if let Some(c) = c {
            out[w].push(c);
        }
    }
    out
}

/// Weights of the lower-hull edges of `pool` wide enough to refine.
fn chord_weights(pool: &[RatePoint]) -> Vec<f64> {
    let staircase = super::pareto_filter(pool.to_vec());
    let curve = super::BoundaryCurve {
        points: staircase,
        samples: Vec::new(),
        meta: super::CurveMeta {
            label: String::new(),
            restarts: 0,
            evaluations_per_start: 0,
            seed: 0,
            mu_grid: Vec::new(),
        },
    };
    curve
        .hull()
        .windows(2)
        .filter(|e| e[1].0 - e[0].0 > CHORD_MIN_WIDTH)
        .map(|e| (e[0].1 - e[1].1) / (e[1].0 - e[0].0))
        .filter(|mu| mu.is_finite() && *mu > 0.0)
        .collect()
}

/// Hull edges narrower than this in `R1` are not refined.
const CHORD_MIN_WIDTH: f64 = 1e-3;

/// One rate point per weight in `cfg.mu_grid` (then per refinement weight),
/// each the best pool member for that weight, plus the full candidate pool.
pub(crate) fn sweep<P: Parameterized>(problem: &P, cfg: &SweepConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let anchors: Vec<Candidate> = problem
        .anchors()
        .into_iter()
        .filter_map(|w| {
            let (r1, r2) = problem.rates(&w).ok()?;
            Some(Candidate {
                r1,
                r2,
                witness: w,
                restart: None,
            })
        })
        .collect();

    // every evaluated candidate, tagged with the weight it was searched at;
    // anchors come first, so equal rate pairs resolve to the anchor
    let mut found: Vec<(Candidate, f64)> = anchors.into_iter().map(|a| (a, 0.0)).collect();
    let mut rows: Vec<f64> = Vec::new();
    let mut next_key = 0usize;
    let mut weights: Vec<(usize, f64)> = cfg
        .mu_grid
        .iter()
        .map(|&mu| {
            next_key += 1;
            (next_key - 1, mu)
        })
        .collect();
    let mut seen: Vec<f64> = cfg.mu_grid.clone();

    for round in 0..=cfg.refine_rounds {
        if weights.is_empty() {
            break;
        }
        let batch = run_weights(problem, cfg, &weights);
        for ((_, mu), cands) in weights.iter().zip(batch) {
            rows.push(*mu);
            found.extend(cands.into_iter().map(|c| (c, *mu)));
        }
        if round == cfg.refine_rounds {
            break;
        }
        let pool: Vec<RatePoint> = found.iter().map(|(c, mu)| c.to_point(*mu, cfg.seed)).collect();
        weights.clear();
        for mu in chord_weights(&pool) {
            if weights.len() == CHORDS_PER_ROUND {
                break;
            }
            if seen.iter().any(|s| (s - mu).abs() <= 1e-6 * mu.max(1.0)) {
                continue;
            }
            seen.push(mu);
            weights.push((next_key, mu));
            next_key += 1;
        }
    }
    if found.is_empty() {
        return Err(Error::InvalidState("sweep produced no points".into()));
    }
    // each row reports the best candidate for its weight over the whole pool
    let all: Vec<&Candidate> = found.iter().map(|(c, _)| c).collect();
    let samples = rows
        .iter()
        .map(|&mu| all[select(&all, mu)].to_point(mu, cfg.seed))
        .collect();
    let pool = found.iter().map(|(c, mu)| c.to_point(*mu, cfg.seed)).collect();
    Ok(SweepOutput { samples, pool })
}

/// Most refinement weights added per round.
const CHORDS_PER_ROUND: usize = 16;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = default_mu_grid();
        assert_eq!(g.len(), 35);
        assert_eq!(g[0], 0.0);
        assert!((g[1] - 1e-3).abs() < 1e-15);
        assert!((g[33] - 1e3).abs() < 1e-9);
        assert_eq!(g[34], MU_INFINITY);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_grids() {
        let mut cfg = SweepConfig::default();
        cfg.mu_grid = vec![];
        assert!(cfg.validate().is_err());
        cfg.mu_grid = vec![1.0, -0.5];
        assert!(cfg.validate().is_err());
    }
}
