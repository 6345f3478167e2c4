//! Accessible information of `{½|0><0|, ½|+><+|}`, checked against the
//! projective grid, and the cost of measure-then-compress with the
//! maximizing POVM.

use helperrate::entropy::holevo;
use helperrate::oracles::{grid_accessible_information, GridSpec};
use helperrate::regions::{accessible_information, separation_gap};
use helperrate::sources::catalog::zero_plus;

fn main() -> helperrate::Result<()> {
    let src = zero_plus();
    let (i_acc, povm) = accessible_information(&src, 32, 0)?;
    let (i_grid, theta) = grid_accessible_information(&src, &GridSpec::default())?;
    println!("I_acc (search) = {i_acc:.6} with {} outcomes", povm.len());
    println!("I_acc (grid)   = {i_grid:.6} at theta = {theta:.4} rad");
    println!("Holevo bound   = {:.6}", holevo(&src.ensemble())?);
    println!("min R1 = H(X) - I_acc = {:.6}", 1.0 - i_acc);

    let g = separation_gap(&src, 32, 0)?;
    println!("H(U*) = {:.6}, I(U*;B) = {:.6}, gap = {:.6}", g.h_ustar, g.i_ub_star, g.gap);
    Ok(())
}
