use rayon::prelude::*;
use std::collections::BTreeMap;

use super::*;
use crate::entropy::Distribution;
use crate::linalg::random::seeded_rng;
use crate::regions::TestChannel;

pub const MIN_MC_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Enumerate every `(y^n, u^n)`.
    Exact,
    /// Empirical law over independent trials.
    MonteCarlo,
}

/// `2^⌈n·rate⌉` codewords drawn i.i.d. from the test channel's output law.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisCodebook {
    pub n: usize,
    pub rate: f64,
    pub seed: u64,
    nu: usize,
    /// Codeword `m` occupies `symbols[m*n..(m+1)*n]`.
    symbols: Vec<usize>,
}

impl SynthesisCodebook {
    pub fn generate(p_u: &[f64], n: usize, rate: f64, seed: u64) -> Result<Self> {
        check_blocklength(n)?;
        let e = block_exponent(n, rate, "rate")?;
        if e > MAX_EXPONENT || (1usize << e) as f64 * n as f64 > ENUMERATION_CAP * 10.0 {
            return Err(Error::CapExceeded(2f64.powi(e as i32), 2f64.powi(MAX_EXPONENT as i32)));
        }
        let w = sampler(p_u)?;
        let mut rng = seeded_rng(seed, CODEBOOK_STREAM);
        let size = 1usize << e;
        let symbols = (0..size).flat_map(|_| sample_seq(&w, n, &mut rng)).collect();
        Ok(SynthesisCodebook {
            n,
            rate,
            seed,
            nu: p_u.len(),
            symbols,
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn codeword(&self, m: usize) -> &[usize] {
        &self.symbols[m * self.n..(m + 1) * self.n]
    }

    pub fn codeword_index(&self, m: usize) -> usize {
        seq_index(self.codeword(m), self.nu)
    }

    /// Likelihood-encoder weights `P(m | y^n) ∝ Π_t P(y_t | u_t(m))`, given
    /// the table `ln P(y|u)` stored as `[u][y]`.
    pub(crate) fn encoder_weights(&self, y: &[usize], ln_y_given_u: &[f64], ny: usize) -> Vec<f64> {
        let mut w: Vec<f64> = (0..self.len())
            .map(|m| {
                self.codeword(m)
                    .iter()
                    .zip(y)
                    .map(|(&u, &yt)| ln_y_given_u[u * ny + yt])
                    .sum()
            })
            .collect();
        normalize_log_weights(&mut w);
        w
    }
}

/// Marginal `P_U` and `ln P(y|u)` (as `[u][y]`) for `P_Y` through `w`.
pub(crate) fn channel_tables(p_y: &[f64], w: &TestChannel) -> (Vec<f64>, Vec<f64>) {
    let (nu, ny) = (w.nu(), w.ny());
    let p_u: Vec<f64> = (0..nu)
        .map(|u| (0..ny).map(|y| p_y[y] * w.get(u, y)).sum())
        .collect();
    let mut ln = vec![f64::NEG_INFINITY; nu * ny];
    for u in 0..nu {
        if p_u[u] <= 0.0 {
            continue;
        }
        for y in 0..ny {
            ln[u * ny + y] = ln0(p_y[y] * w.get(u, y) / p_u[u]);
        }
    }
    (p_u, ln)
}

fn target_prob(p_y: &[f64], w: &TestChannel, y: &[usize], u: &[usize]) -> f64 {
    y.iter().zip(u).map(|(&yt, &ut)| p_y[yt] * w.get(ut, yt)).product()
}

/// Total variation between the codebook-simulated law of `(Y^n, U^n)` and
/// the i.i.d. target `(P_Y · W)^n`.
pub fn synthesize_channel(
    p_y: &Distribution,
    w: &TestChannel,
    n: usize,
    rate: f64,
    seed: u64,
    mode: Mode,
    trials: usize,
) -> Result<f64> {
    check_blocklength(n)?;
    let (ny, nu) = (w.ny(), w.nu());
    if p_y.len() != ny {
        return Err(Error::DimMismatch(format!(
            "P_Y has {} letters, channel reads {ny}",
            p_y.len()
        )));
    }
    let py = p_y.probs();
    let (p_u, ln_yu) = channel_tables(py, w);
    let book = SynthesisCodebook::generate(&p_u, n, rate, seed)?;
    match mode {
        Mode::Exact => {
            let space = space_size(ny, n) * space_size(nu, n);
            if space > ENUMERATION_CAP {
                return Err(Error::CapExceeded(space, ENUMERATION_CAP));
            }
            let ys = space_size(ny, n) as usize;
            let parts: Vec<(f64, f64)> = (0..ys)
                .into_par_iter()
                .map(|yi| {
                    let mut y = vec![0; n];
                    index_seq(yi, ny, n, &mut y);
                    let p_yn: f64 = y.iter().map(|&t| py[t]).product();
                    if p_yn == 0.0 {
                        return (0.0, 0.0);
                    }
                    let weights = book.encoder_weights(&y, &ln_yu, ny);
                    let mut sim: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
                    for (m, wm) in weights.iter().enumerate() {
                        if *wm > 0.0 {
                            sim.entry(book.codeword_index(m)).or_insert((0.0, m)).0 += wm * p_yn;
                        }
                    }
                    let mut abs = 0.0;
                    let mut covered = 0.0;
                    for (mass, m) in sim.values() {
                        let t = target_prob(py, w, &y, book.codeword(*m));
                        abs += (mass - t).abs();
                        covered += t;
                    }
                    (abs, covered)
                })
                .collect();
            let abs: f64 = parts.iter().map(|p| p.0).sum();
            let covered: f64 = parts.iter().map(|p| p.1).sum();
            Ok((0.5 * (abs + (1.0 - covered).max(0.0))).clamp(0.0, 1.0))
        }
        Mode::MonteCarlo => {
            if trials < MIN_MC_TRIALS {
                return Err(Error::InsufficientTrials {
                    got: trials,
                    min: MIN_MC_TRIALS,
                });
            }
            let space = space_size(ny * nu, n);
            if space > 2f64.powi(62) {
                return Err(Error::CapExceeded(space, 2f64.powi(62)));
            }
            let ysampler = sampler(py)?;
            let un = space_size(nu, n) as usize;
            let draws: Vec<(usize, usize)> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = seeded_rng(seed, SYNTH_TRIAL_STREAM | t as u64);
                    let y = sample_seq(&ysampler, n, &mut rng);
                    let weights = book.encoder_weights(&y, &ln_yu, ny);
                    let m = draw(&weights, &mut rng);
                    (seq_index(&y, ny), m)
                })
                .collect();
            let mut counts: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
            for (yi, m) in draws {
                counts.entry(yi * un + book.codeword_index(m)).or_insert((0, m)).0 += 1;
            }
            let mut abs = 0.0;
            let mut covered = 0.0;
            let mut y = vec![0; n];
            for (key, (cnt, m)) in counts {
                index_seq(key / un, ny, n, &mut y);
                let t = target_prob(py, w, &y, book.codeword(m));
                abs += (cnt as f64 / trials as f64 - t).abs();
                covered += t;
            }
            Ok((0.5 * (abs + (1.0 - covered).max(0.0))).clamp(0.0, 1.0))
        }
    }
}
