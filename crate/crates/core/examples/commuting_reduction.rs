//! A commuting ensemble is a classical helper in disguise: its shared
//! eigenbasis turns `{p(x), ρ_x}` into a joint `P(x, y)`.

use helperrate::entropy::{entropy_bits, holevo, von_neumann};
use helperrate::sources::catalog::{diagonal_pair, zero_plus};

fn main() -> helperrate::Result<()> {
    let src = diagonal_pair();
    let joint = src.commuting_reduction().expect("diagonal states commute");
    for x in 0..joint.nx() {
        let row: Vec<String> = (0..joint.ny()).map(|y| format!("{:.3}", joint.get(x, y))).collect();
        println!("P({x}, .) = [{}]", row.join(", "));
    }
    println!(
        "H(Y) = {:.6}, H(rho_B) = {:.6}",
        entropy_bits(&joint.y_marginal()),
        von_neumann(&src.helper_marginal())?
    );
    println!("Holevo chi = {:.6}", holevo(&src.ensemble())?);

    let q = zero_plus();
    println!(
        "{{|0>, |+>}} commutes: {}",
        q.commuting_reduction().is_some()
    );
    Ok(())
}
