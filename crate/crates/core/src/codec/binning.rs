use rand::Rng;
use rayon::prelude::*;

use super::*;
use crate::linalg::random::seeded_rng;
use crate::sources::ClassicalJoint;

/// Uniformly random assignment of `𝒳ⁿ` to `2^⌈n·R1⌉` bins, with the member
/// lists stored explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct BinningCode {
    pub n: usize,
    pub rate: f64,
    pub seed: u64,
    nx: usize,
    /// Bin of each source sequence.
    bins: Vec<u32>,
    /// Members of bin `b` are `members[offsets[b]..offsets[b+1]]`, ascending.
    offsets: Vec<usize>,
    members: Vec<u32>,
    injective: bool,
}

impl BinningCode {
    pub fn generate(nx: usize, n: usize, rate: f64, seed: u64) -> Result<Self> {
        check_blocklength(n)?;
        let space = space_size(nx, n);
        if space > ENUMERATION_CAP {
            return Err(Error::CapExceeded(space, ENUMERATION_CAP));
        }
        let size = space as usize;
        let e = block_exponent(n, rate, "r1")?;
        let injective = e as f64 >= space.log2() - 1e-12;
        let bins: Vec<u32> = if injective {
            (0..size as u32).collect()
        } else {
            let count = 1u64 << e;
            let mut rng = seeded_rng(seed, BIN_STREAM);
            (0..size).map(|_| rng.random_range(0..count) as u32).collect()
        };
        let n_bins = if injective { size } else { 1usize << e };
        let mut offsets = vec![0usize; n_bins + 1];
        for &b in &bins {
            offsets[b as usize + 1] += 1;
        }
        for b in 0..n_bins {
            offsets[b + 1] += offsets[b];
        }
        let mut fill = offsets.clone();
        let mut members = vec![0u32; size];
        for (x, &b) in bins.iter().enumerate() {
            members[fill[b as usize]] = x as u32;
            fill[b as usize] += 1;
        }
        Ok(BinningCode {
            n,
            rate,
            seed,
            nx,
            bins,
            offsets,
            members,
            injective,
        })
    }

    pub fn bin_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn bin_of(&self, x_index: usize) -> usize {
        self.bins[x_index] as usize
    }

    pub fn members(&self, bin: usize) -> &[u32] {
        &self.members[self.offsets[bin]..self.offsets[bin + 1]]
    }

    /// True when every bin holds at most one sequence by construction.
    pub fn is_injective(&self) -> bool {
        self.injective
    }

    /// Member of `bin` maximizing `Σ_t ln P(x_t|u_t)`; ties go to the
    /// smallest index. `ln_x_given_u` is stored as `[u][x]`.
    pub fn decode(&self, bin: usize, u: &[usize], ln_x_given_u: &[f64]) -> usize {
        let nx = self.nx;
        let n = self.n;
        // split the score into high and low halves of the sequence
        let lo_len = n / 2;
        let hi_len = n - lo_len;
        let table = |positions: std::ops::Range<usize>, len: usize| -> Vec<f64> {
            let size = space_size(nx, len) as usize;
            let mut out = vec![0.0; size];
            let mut seq = vec![0; len];
            for (idx, slot) in out.iter_mut().enumerate() {
                index_seq(idx, nx, len, &mut seq);
                *slot = positions
                    .clone()
                    .zip(&seq)
                    .map(|(t, &x)| ln_x_given_u[u[t] * nx + x])
                    .sum();
            }
            out
        };
        let members = self.members(bin);
        if members.is_empty() {
            return 0;
        }
        let base = space_size(nx, lo_len) as usize;
        let score: Box<dyn Fn(usize) -> f64> = if members.len() > 4 * base {
            let hi = table(0..hi_len, hi_len);
            let lo = table(hi_len..n, lo_len);
            Box::new(move |x| hi[x / base] + lo[x % base])
        } else {
            Box::new(move |x| {
                let mut s = 0.0;
                let mut rest = x;
                for t in (0..n).rev() {
                    s += ln_x_given_u[u[t] * nx + rest % nx];
                    rest /= nx;
                }
                s
            })
        };
        let mut best = members[0] as usize;
        let mut best_score = score(best);
        for &m in &members[1..] {
            let s = score(m as usize);
            if s > best_score + 1e-12 {
                best = m as usize;
                best_score = s;
            }
        }
        best
    }
}

/// `ln P(x|u)` as `[u][x]`.
pub(crate) fn ln_x_given_u(pxu: &ClassicalJoint) -> Vec<f64> {
    let (nx, nu) = (pxu.nx(), pxu.ny());
    let pu = pxu.y_marginal();
    let mut out = vec![f64::NEG_INFINITY; nu * nx];
    for u in 0..nu {
        if pu[u] <= 0.0 {
            continue;
        }
        for x in 0..nx {
            out[u * nx + x] = ln0(pxu.get(x, u) / pu[u]);
        }
    }
    out
}

/// Block error rate of MAP-in-bin decoding of `X^n` from its bin index and
/// side information `U^n`, for `(X, U) ~ P_XU` i.i.d.
pub fn sw_random_binning(
    pxu: &ClassicalJoint,
    n: usize,
    r1: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::input("trials", "must be at least 1"));
    }
    let (nx, nu) = (pxu.nx(), pxu.ny());
    let code = BinningCode::generate(nx, n, r1, seed)?;
    let ln = ln_x_given_u(pxu);
    let cells = sampler(pxu.probs())?;
    let errors: usize = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = seeded_rng(seed, SW_TRIAL_STREAM | t as u64);
            let pairs = sample_seq(&cells, n, &mut rng);
            let x: Vec<usize> = pairs.iter().map(|c| c / nu).collect();
            let u: Vec<usize> = pairs.iter().map(|c| c % nu).collect();
            let xi = seq_index(&x, nx);
            let guess = code.decode(code.bin_of(xi), &u, &ln);
            usize::from(guess != xi)
        })
        .sum();
    Ok(errors as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bins_partition_the_space() {
        let code = BinningCode::generate(2, 10, 0.5, 4).unwrap();
        assert_eq!(code.bin_count(), 32);
        let total: usize = (0..32).map(|b| code.members(b).len()).sum();
        assert_eq!(total, 1024);
        for b in 0..32 {
            for &m in code.members(b) {
                assert_eq!(code.bin_of(m as usize), b);
            }
            assert!(code.members(b).windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(code, BinningCode::generate(2, 10, 0.5, 4).unwrap());
        assert!(!code.is_injective());
        assert!(BinningCode::generate(2, 10, 1.0, 4).unwrap().is_injective());
    }

    #[test]
    fn both_score_paths_agree() {
        let pxu = ClassicalJoint::dsbs(0.2);
        let ln = ln_x_given_u(&pxu);
        let code = BinningCode::generate(2, 8, 0.25, 9).unwrap();
        let u = [0, 1, 1, 0, 1, 0, 0, 1];
        for b in 0..code.bin_count() {
            let fast = code.decode(b, &u, &ln);
            // brute force over the bin
            let mut best = code.members(b)[0] as usize;
            let score = |x: usize| {
                let mut s = vec![0; 8];
                index_seq(x, 2, 8, &mut s);
                s.iter().zip(&u).map(|(&xt, &ut)| ln[ut * 2 + xt]).sum::<f64>()
            };
            for &m in code.members(b) {
                if score(m as usize) > score(best) + 1e-12 {
                    best = m as usize;
                }
            }
            assert_eq!(fast, best);
        }
    }

    #[test]
    fn full_rate_is_error_free() {
        let p = ClassicalJoint::dsbs(0.1);
        assert_eq!(sw_random_binning(&p, 8, 1.0, 500, 1).unwrap(), 0.0);
    }

    #[test]
    fn perfect_side_information() {
        let p = ClassicalJoint::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(sw_random_binning(&p, 12, 0.1, 500, 3).unwrap(), 0.0);
    }

    #[test]
    fn error_falls_with_rate() {
        let p = ClassicalJoint::dsbs(0.1);
        let e: Vec<f64> = [0.3, 0.6, 0.9]
            .iter()
            .map(|&r| sw_random_binning(&p, 20, r, 2000, 11).unwrap())
            .collect();
        assert!(e[2] < e[1] && e[1] < e[0], "{e:?}");
    }

    #[test]
    fn cap() {
        let p = ClassicalJoint::dsbs(0.1);
        assert!(matches!(
            sw_random_binning(&p, 24, 0.5, 10, 1),
            Err(Error::CapExceeded(..))
        ));
    }
}
