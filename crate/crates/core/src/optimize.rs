//! Derivative-free local search used to trace region boundaries.
//!
//! A (1+1) evolution strategy with one adaptive step per coordinate:
//! moves alternate between a single coordinate and the whole vector, a
//! success widens the steps involved and a failure shrinks them.

use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Objective evaluations per start, including the initial point.
    pub evaluations: usize,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            evaluations: 2000,
            initial_step: 0.5,
            min_step: 1e-9,
            max_step: 10.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

const GROW: f64 = 1.6;
const SHRINK: f64 = 0.85;

fn eval<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64]) -> f64 {
    let v = f(x);
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Minimizes `f` from `x0` within the evaluation budget.
pub fn local_search<F, R>(f: F, x0: Vec<f64>, cfg: &SearchConfig, rng: &mut R) -> SearchResult
where
    F: Fn(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    let n = x0.len();
    let mut x = x0;
    let mut fx = eval(&f, &x);
    let mut used = 1;
    if n == 0 {
        return SearchResult {
            x,
            value: fx,
            evaluations: used,
        };
    }
    let mut step = vec![cfg.initial_step; n];
    let mut trial = x.clone();
    let mut coord = 0usize;
    let mut iter = 0usize;

    while used < cfg.evaluations {
        iter += 1;
        trial.copy_from_slice(&x);
        let full = iter % 3 == 0;
        if full {
            let scale = 1.0 / (n as f64).sqrt();
            for i in 0..n {
                let z: f64 = rng.sample(StandardNormal);
                trial[i] += step[i] * scale * z;
            }
        } else {
            let z: f64 = rng.sample(StandardNormal);
            trial[coord] += step[coord] * z;
        }
        let ft = eval(&f, &trial);
        used += 1;
        let accepted = ft < fx;
        if accepted {
            std::mem::swap(&mut x, &mut trial);
            fx = ft;
        }
        let factor = if accepted { GROW } else { SHRINK };
        if full {
            for s in step.iter_mut() {
                *s = (*s * factor.sqrt()).clamp(cfg.min_step, cfg.max_step);
            }
        } else {
            step[coord] = (step[coord] * factor).clamp(cfg.min_step, cfg.max_step);
            coord = (coord + 1) % n;
        }
    }
    SearchResult {
        x,
        value: fx,
        evaluations: used,
    }
}
