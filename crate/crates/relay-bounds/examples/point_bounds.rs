//! Compute every bound at a single channel configuration and print the
//! report, plus the spread between the achievable rate and the converse.
//!
//! Run with: `cargo run --example point_bounds`

use relay_bounds::gaussian::ChannelParams;
use relay_bounds::optim::GridSpec;
use relay_bounds::sweep::{compute_report, report_text};

fn main() -> relay_bounds::Result<()> {
    // The reference configuration: everything at 10 dB, relay noise at 0 dB.
    let ch = ChannelParams::new(10.0, 10.0, 10.0, 1.0, 10.0, true)?;
    let grid = GridSpec::default();

    let report = compute_report(&ch, &grid)?;
    print!("{}", report_text(&report));

    let rate = |name: &str| {
        report
            .bounds
            .iter()
            .find(|b| b.name == name)
            .map(|b| b.rate)
            .unwrap()
    };
    println!(
        "\ngap upper - lower: {:.6} bits/use",
        rate("upper") - rate("lower")
    );
    println!(
        "precoding gain over noise treatment: {:.6} bits/use",
        rate("lower") - rate("trivial_lower")
    );
    Ok(())
}
