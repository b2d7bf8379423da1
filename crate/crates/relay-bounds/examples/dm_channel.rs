//! Search the discrete-channel bounds on a small binary model built in code:
//! the relay sees the source bit corrupted by the state, the destination sees
//! the relay-corrected bit through a further flip.
//!
//! Run with: `cargo run --example dm_channel`

use relay_bounds::dm::{
    dm_search, is_degraded, AlphabetSizes, DiscreteChannelSpec, SearchConfig, SearchMode,
};

fn main() -> relay_bounds::Result<()> {
    let sizes = AlphabetSizes {
        s: 2,
        x1: 2,
        x2: 2,
        y2: 2,
        y3: 2,
    };
    // Stage 1: Y2 = X1 xor S with flip probability 0.05.
    // Stage 2: Y3 = Y2 xor X2 with flip probability 0.1.
    let spec = DiscreteChannelSpec::from_stages(
        sizes,
        vec![0.5, 0.5],
        |y2, x1, _x2, s| {
            if y2 == x1 ^ s {
                0.95
            } else {
                0.05
            }
        },
        |y3, y2, x2, _s| {
            if y3 == y2 ^ x2 {
                0.9
            } else {
                0.1
            }
        },
    )?;

    println!("physically degraded: {}", is_degraded(&spec));

    for (label, mode) in [
        ("lower", SearchMode::Lower),
        ("upper", SearchMode::Upper),
        ("trivial upper", SearchMode::TrivialUpper),
    ] {
        let mut config = SearchConfig::new(mode);
        config.restarts = 12;
        config.seed = 42;
        let out = dm_search(&spec, &config)?;
        println!(
            "{label:<13}: {:.5} bits/use ({} restarts, {} evaluations)",
            out.rate, out.restarts, out.evaluations
        );
    }
    Ok(())
}
