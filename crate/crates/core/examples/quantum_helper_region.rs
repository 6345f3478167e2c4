//! Quantum helper boundary `{(H(X|U), I(U;B)_σ)}` over POVMs. On a
//! commuting ensemble it coincides with the classical helper boundary of
//! the reduced joint.

use helperrate::regions::{trace_boundary_chelper, trace_boundary_qhelper, SweepConfig};
use helperrate::sources::catalog::{diagonal_pair, zero_plus};

fn main() -> helperrate::Result<()> {
    let cfg = SweepConfig {
        restarts: 8,
        mu_grid: vec![0.1, 0.3, 0.5, 0.8, 1.0, 1.5, 2.5, 5.0, 10.0],
        refine_rounds: 0,
        ..SweepConfig::with_seed(1)
    };
    let src = diagonal_pair();
    let q = trace_boundary_qhelper(&src, &cfg)?;
    let c = trace_boundary_chelper(&src.commuting_reduction().expect("commuting"), &cfg)?;
    println!("   mu   quantum (R1, R2)    classical (R1, R2)");
    for (a, b) in q.samples.iter().zip(&c.samples) {
        println!(
            "{:5.2}   ({:.4}, {:.4})    ({:.4}, {:.4})",
            a.mu.unwrap_or(0.0),
            a.r1,
            a.r2,
            b.r1,
            b.r2
        );
    }

    let zp = trace_boundary_qhelper(
        &zero_plus(),
        &SweepConfig {
            restarts: 8,
            ..SweepConfig::with_seed(1)
        },
    )?;
    println!("{{|0>, |+>}}: leftmost R1 = {:.6}", zp.min_r1().unwrap_or(f64::NAN));
    Ok(())
}
