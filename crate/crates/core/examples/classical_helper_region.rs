//! Lower boundary of `{(H(X|U), I(U;Y))}` for a doubly symmetric binary
//! source, compared with an exhaustive test-channel grid.

use helperrate::oracles::{grid_search_chelper, GridSpec};
use helperrate::regions::{membership, trace_boundary_chelper, SweepConfig};
use helperrate::ClassicalJoint;

fn main() -> helperrate::Result<()> {
    let joint = ClassicalJoint::dsbs(0.1);
    let cfg = SweepConfig {
        restarts: 8,
        ..SweepConfig::with_seed(3)
    };
    let curve = trace_boundary_chelper(&joint, &cfg)?;
    println!("{}: {} weights, {} staircase points", curve.meta.label, curve.samples.len(), curve.points.len());
    for p in curve.points.iter().step_by((curve.points.len() / 8).max(1)) {
        println!("  R1 = {:.4}  R2 = {:.4}", p.r1, p.r2);
    }

    let oracle = grid_search_chelper(&joint, &GridSpec::default())?;
    let worst = oracle
        .points
        .iter()
        .filter_map(|q| curve.achievable_r2(q.r1).map(|r2| r2 - q.r2))
        .fold(f64::NEG_INFINITY, f64::max);
    println!("largest excess over the grid staircase: {worst:.2e}");

    for pair in [(0.9, 0.3), (0.5, 0.1)] {
        println!("{pair:?}: {:?}", membership(&curve, pair));
    }
    Ok(())
}
