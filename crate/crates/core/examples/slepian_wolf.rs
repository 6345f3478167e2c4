//! Random binning with side information: block error of MAP-in-bin
//! decoding for a doubly symmetric binary source.

use helperrate::codec::sw_random_binning;
use helperrate::entropy::binary_entropy;
use helperrate::ClassicalJoint;

fn main() -> helperrate::Result<()> {
    let joint = ClassicalJoint::dsbs(0.1);
    println!("H(X|U) = {:.4}", binary_entropy(0.1));
    for n in [10, 20] {
        for r1 in [0.3, 0.6, 0.9] {
            let mean: f64 = (0..10)
                .map(|seed| sw_random_binning(&joint, n, r1, 500, seed))
                .sum::<helperrate::Result<f64>>()?
                / 10.0;
            println!("  n = {n:2}, R1 = {r1}: mean error {mean:.4}");
        }
    }
    Ok(())
}
