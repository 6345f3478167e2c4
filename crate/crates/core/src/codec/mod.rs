//! Finite-blocklength simulations of the direct coding steps for the
//! classical helper: the helper's channel synthesis with a random
//! codebook, and Slepian-Wolf decoding of random bins with side
//! information.
//!
//! Block sequences over an alphabet of size `k` are indexed
//! lexicographically, most significant symbol first. Randomness is derived
//! from `(seed, stream)` pairs: fixed streams for codebooks and bins, and one
//! stream per trial, so results are independent of thread scheduling.
//!
//! The synthesis stage uses a likelihood encoder over a fixed codebook and
//! no common randomness beyond it.

mod binning;
mod pipeline;
mod synthesis;

pub use binning::{sw_random_binning, BinningCode};
pub use pipeline::helper_pipeline;
pub use synthesis::{synthesize_channel, Mode, SynthesisCodebook, MIN_MC_TRIALS};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::Rng;

use crate::error::{Error, Result};

/// Largest enumerable space.
pub const ENUMERATION_CAP: f64 = 1e7;
/// Largest codebook or bin-count exponent.
pub const MAX_EXPONENT: usize = 30;

pub(crate) const CODEBOOK_STREAM: u64 = 10;
pub(crate) const BIN_STREAM: u64 = 11;
pub(crate) const SYNTH_TRIAL_STREAM: u64 = 1 << 32;
pub(crate) const SW_TRIAL_STREAM: u64 = 2 << 32;
pub(crate) const PIPELINE_TRIAL_STREAM: u64 = 3 << 32;

/// `⌈n · rate⌉`, robust to rounding in `n · rate`.
pub(crate) fn block_exponent(n: usize, rate: f64, field: &str) -> Result<usize> {
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(Error::input(field, format!("rate must be >= 0, got {rate}")));
    }
    let e = (n as f64 * rate - 1e-9).ceil().max(0.0);
    Ok(e as usize)
}

pub(crate) fn check_blocklength(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::input("n", "blocklength must be positive"));
    }
    Ok(())
}

/// `k^n` as a float, for cap checks.
pub(crate) fn space_size(k: usize, n: usize) -> f64 {
    (k as f64).powi(n as i32)
}

pub(crate) fn sampler(probs: &[f64]) -> Result<WeightedIndex<f64>> {
    WeightedIndex::new(probs.iter().map(|p| p.max(0.0)))
        .map_err(|e| Error::InvalidDistribution(e.to_string()))
}

pub(crate) fn sample_seq(w: &WeightedIndex<f64>, n: usize, rng: &mut impl Rng) -> Vec<usize> {
    (0..n).map(|_| w.sample(rng)).collect()
}

pub(crate) fn seq_index(seq: &[usize], k: usize) -> usize {
    seq.iter().fold(0, |acc, &s| acc * k + s)
}

pub(crate) fn index_seq(mut idx: usize, k: usize, n: usize, out: &mut [usize]) {
    for t in (0..n).rev() {
        out[t] = idx % k;
        idx /= k;
    }
}

/// Natural log with `ln 0 = -∞`.
pub(crate) fn ln0(p: f64) -> f64 {
    if p > 0.0 {
        p.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Normalized weights from log-weights; uniform if every weight is zero.
pub(crate) fn normalize_log_weights(logw: &mut [f64]) {
    let m = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        let u = 1.0 / logw.len() as f64;
        logw.iter_mut().for_each(|w| *w = u);
        return;
    }
    let mut s = 0.0;
    for w in logw.iter_mut() {
        *w = (*w - m).exp();
        s += *w;
    }
    logw.iter_mut().for_each(|w| *w /= s);
}

/// Index drawn from normalized weights.
pub(crate) fn draw(weights: &[f64], rng: &mut impl Rng) -> usize {
    let r: f64 = rng.random();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if r < acc {
            return i;
        }
    }
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}
