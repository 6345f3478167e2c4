//! Both stages together: the helper synthesizes `U^n` from `Y^n` at rate
//! `R2`, the decoder recovers `X^n` from a rate-`R1` bin and `U^n`.

use helperrate::codec::helper_pipeline;
use helperrate::regions::rate_point_chelper;
use helperrate::{ClassicalJoint, TestChannel};

fn main() -> helperrate::Result<()> {
    let joint = ClassicalJoint::dsbs(0.1);
    let w = TestChannel::bsc(0.25);
    let p = rate_point_chelper(&joint, &w)?;
    println!("boundary point of BSC(0.25): (H(X|U), I(U;Y)) = ({:.4}, {:.4})", p.r1, p.r2);
    for (r1, r2) in [(1.0, 0.4), (0.95, 0.3), (0.6, 0.25)] {
        let e = helper_pipeline(&joint, &w, 16, r1, r2, 2000, 6)?;
        println!("  (R1, R2) = ({r1}, {r2}): block error {e:.4}");
    }
    Ok(())
}
