//! Soft covering at finite blocklength: total variation between the
//! likelihood-encoder output and the i.i.d. target falls as the codebook
//! rate grows.

use helperrate::codec::{synthesize_channel, Mode};
use helperrate::entropy::Distribution;
use helperrate::TestChannel;

fn main() -> helperrate::Result<()> {
    let p_y = Distribution::new(vec![0.5, 0.5])?;
    let w = TestChannel::bsc(0.25);
    println!("BSC(0.25) test channel, n = 6");
    for rate in [0.25, 0.5, 1.0, 1.5] {
        let exact = synthesize_channel(&p_y, &w, 6, rate, 11, Mode::Exact, 0)?;
        let mc = synthesize_channel(&p_y, &w, 6, rate, 11, Mode::MonteCarlo, 20_000)?;
        println!("  rate {rate:4.2}: tv exact {exact:.4}, monte carlo {mc:.4}");
    }
    Ok(())
}
