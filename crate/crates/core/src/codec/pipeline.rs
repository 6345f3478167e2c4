use rayon::prelude::*;

use super::binning::ln_x_given_u;
use super::synthesis::channel_tables;
use super::*;
use crate::linalg::random::seeded_rng;
use crate::regions::TestChannel;
use crate::sources::ClassicalJoint;

/// End-to-end block error of the two-stage classical helper scheme.
///
/// The helper likelihood-encodes `y^n` into a codebook of rate `r2` and
/// sends the index; the decoder recovers `x^n` from its bin (rate `r1`) by
/// MAP decoding against the announced codeword, using `P(x|u)` of the joint
/// induced by `w`.
pub fn helper_pipeline(
    joint: &ClassicalJoint,
    w: &TestChannel,
    n: usize,
    r1: f64,
    r2: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    check_blocklength(n)?;
    if trials == 0 {
        return Err(Error::input("trials", "must be at least 1"));
    }
    let (nx, ny, nu) = (joint.nx(), joint.ny(), w.nu());
    if w.ny() != ny {
        return Err(Error::DimMismatch(format!(
            "test channel reads {} letters, helper has {ny}",
            w.ny()
        )));
    }
    let p_y = joint.y_marginal();
    let (p_u, ln_yu) = channel_tables(&p_y, w);
    let book = SynthesisCodebook::generate(&p_u, n, r2, seed)?;
    let code = BinningCode::generate(nx, n, r1, seed)?;

    let mut pxu = vec![0.0; nx * nu];
    for x in 0..nx {
        for y in 0..ny {
            for u in 0..nu {
                pxu[x * nu + u] += joint.get(x, y) * w.get(u, y);
            }
        }
    }
    let ln_xu = ln_x_given_u(&ClassicalJoint::new_unchecked(nx, nu, pxu));
    let cells = sampler(joint.probs())?;

    let errors: usize = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = seeded_rng(seed, PIPELINE_TRIAL_STREAM | t as u64);
            let pairs = sample_seq(&cells, n, &mut rng);
            let x: Vec<usize> = pairs.iter().map(|c| c / ny).collect();
            let y: Vec<usize> = pairs.iter().map(|c| c % ny).collect();
            let weights = book.encoder_weights(&y, &ln_yu, ny);
            let m = draw(&weights, &mut rng);
            let xi = seq_index(&x, nx);
            let guess = code.decode(code.bin_of(xi), book.codeword(m), &ln_xu);
            usize::from(guess != xi)
        })
        .sum();
    Ok(errors as f64 / trials as f64)
}
