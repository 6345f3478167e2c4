//! Fully quantum inner bound `(H(A|C), ½ I(RA;C))` over helper isometries
//! `B -> C ⊗ E`. For a Bell pair, forwarding `B` gains one ebit and
//! discarding it costs one qubit.

use helperrate::regions::{rate_point_fq, trace_boundary_fq, SweepConfig};
use helperrate::sources::catalog::{bell, classically_correlated};
use helperrate::ChannelIsometry;

fn main() -> helperrate::Result<()> {
    let src = bell();
    let keep = rate_point_fq(&src, &ChannelIsometry::embed_identity(2, 2, 1))?;
    let drop = rate_point_fq(&src, &ChannelIsometry::discard(2, 1, 2))?;
    println!("forward B: ({:.6}, {:.6})", keep.r1, keep.r2);
    println!("discard B: ({:.6}, {:.6})", drop.r1, drop.r2);

    let cfg = SweepConfig {
        restarts: 2,
        mu_grid: vec![0.0, 0.25, 1.0, 4.0, 1e6],
        refine_rounds: 0,
        ..SweepConfig::with_seed(5)
    };
    let curve = trace_boundary_fq(&classically_correlated(), &[1, 2], &cfg)?;
    println!("{} for 1/2|00><00| + 1/2|11><11|:", curve.meta.label);
    for p in &curve.points {
        println!("  ({:.4}, {:.4})", p.r1, p.r2);
    }
    Ok(())
}
