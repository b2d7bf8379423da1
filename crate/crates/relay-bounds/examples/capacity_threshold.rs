//! The known-capacity regime of the degraded model: once the relay noise N2
//! reaches a threshold, both bounds pin the capacity at the interference-free
//! rate. Scan N2 across the threshold and watch the gap close.
//!
//! Run with: `cargo run --example capacity_threshold`

use relay_bounds::gaussian::{
    capacity_awgn, capacity_condition_threshold, lower_bound, upper_bound, ChannelParams,
};
use relay_bounds::optim::GridSpec;

fn main() -> relay_bounds::Result<()> {
    let base = ChannelParams::new(10.0, 10.0, 10.0, 10.0, 10.0, true)?;
    let threshold = capacity_condition_threshold(&base);
    println!("threshold on N2: {threshold:.6}\n");
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>12}",
        "N2", "lower", "upper", "gap", "free rate"
    );

    let grid = GridSpec::default();
    for n2 in [2.0, 5.0, 8.0, 10.0, 12.0, 15.0, 20.0] {
        let ch = ChannelParams { n2, ..base };
        let lo = lower_bound(&ch, &grid)?;
        let up = upper_bound(&ch, &grid)?;
        let mark = if n2 >= threshold { " <- capacity" } else { "" };
        println!(
            "{n2:>8.1} {:>10.5} {:>10.5} {:>10.2e} {:>12.5}{mark}",
            lo.rate,
            up.rate,
            up.rate - lo.rate,
            capacity_awgn(ch.p1 / ch.n2)
        );
    }
    Ok(())
}
