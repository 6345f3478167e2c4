//! Partial traces and entropies of a two-qubit state.
//!
//! ```text
//! cargo run --example density_matrices
//! ```

use helperrate::entropy::{cond_vn, mutual_info, von_neumann};
use helperrate::linalg::{kron, partial_trace, purify};
use helperrate::{ComplexMatrix, DensityMatrix, C64};

fn main() -> helperrate::Result<()> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    let bell = DensityMatrix::pure(&[C64::new(h, 0.0), z, z, C64::new(h, 0.0)])?;

    let rho_a = DensityMatrix::new(partial_trace(bell.matrix(), &[2, 2], &[0])?)?;
    println!("Bell pair");
    println!("  H(AB)  = {:.6}", von_neumann(&bell)?);
    println!("  H(A)   = {:.6}", von_neumann(&rho_a)?);
    println!("  H(A|B) = {:.6}", cond_vn(&bell, &[2, 2], &[0])?);
    println!("  I(A;B) = {:.6}", mutual_info(&bell, &[2, 2], &[0])?);

    let product = DensityMatrix::new(kron(
        &ComplexMatrix::from_diag(&[0.3, 0.7]),
        &ComplexMatrix::from_diag(&[0.6, 0.4]),
    )?)?;
    println!("diag(0.3, 0.7) x diag(0.6, 0.4)");
    println!("  I(A;B) = {:.2e}", mutual_info(&product, &[2, 2], &[0])?);

    let psi = purify(product.matrix())?;
    println!("  purification dims {:?}, norm {:.12}", psi.dims(), psi.norm());
    Ok(())
}
