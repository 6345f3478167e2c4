//! Every computed rate pair carries a witness. Witness files embed their
//! source, so a rate pair can be rechecked from the file alone.

use helperrate::io::{parse_witness, recompute, witness_to_value, SourceSpec};
use helperrate::measurement::rate_point_qhelper;
use helperrate::sources::catalog::zero_plus;
use helperrate::Povm;

fn main() -> helperrate::Result<()> {
    let src = SourceSpec::Cq(zero_plus());
    let point = rate_point_qhelper(src.cq()?, &Povm::computational(2))?;
    let text = serde_json::to_string(&witness_to_value(&point, &src)).expect("serializable");
    println!("{text}");

    let back = parse_witness(&text)?;
    let (r1, r2) = recompute(back.source.as_ref().expect("embedded"), &back.witness)?;
    println!("recomputed ({r1:.9}, {r2:.9})");
    Ok(())
}
