//! The state a POVM leaves behind: `σ_UB` built from `√ρ_B Λ_u √ρ_B`.
//! Its `B` marginal is the entrywise conjugate of `ρ_B`, and its rate pair
//! is `(H(X|U), I(U;B)_σ)`.

use helperrate::linalg::{conjugate_std, random::random_povm};
use helperrate::measurement::{induced_joint, post_measurement_cq, rate_point_qhelper};
use helperrate::sources::catalog::tilted_mixed;
use helperrate::Povm;

fn main() -> helperrate::Result<()> {
    let src = tilted_mixed();
    let rho_b = src.helper_marginal();

    for (name, povm) in [
        ("computational", Povm::computational(2)),
        ("random, 4 outcomes", random_povm(2, 4, 3)?),
    ] {
        let sigma = post_measurement_cq(&src, &povm)?;
        let drift = sigma.b_marginal().max_abs_diff(&conjugate_std(rho_b.matrix()));
        let p = rate_point_qhelper(&src, &povm)?;
        let ij = induced_joint(&src, &povm)?;
        println!("{name}");
        println!("  p_U = {:?}", sigma.p_u.iter().map(|p| format!("{p:.4}")).collect::<Vec<_>>());
        println!("  |Tr_U sigma - conj(rho_B)|_max = {drift:.1e}");
        println!("  P_XU is {}x{}", ij.joint.nx(), ij.joint.ny());
        println!("  (H(X|U), I(U;B)) = ({:.6}, {:.6})", p.r1, p.r2);
    }
    Ok(())
}
