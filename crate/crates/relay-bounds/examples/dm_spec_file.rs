//! The JSON document format for discrete channels: write one, read it back,
//! and show the parse diagnostics for a broken file.
//!
//! Run with: `cargo run --example dm_spec_file`

use relay_bounds::dm::{is_degraded, AlphabetSizes, DiscreteChannelSpec};

fn main() -> relay_bounds::Result<()> {
    let spec = DiscreteChannelSpec::from_kernel_fn(
        AlphabetSizes {
            s: 2,
            x1: 2,
            x2: 1,
            y2: 2,
            y3: 2,
        },
        vec![0.3, 0.7],
        // Y2 and Y3 both observe X1 xor S through independent flips.
        |x1, _x2, s, y2, y3| {
            let clean = x1 ^ s;
            let p2 = if y2 == clean { 0.9 } else { 0.1 };
            let p3 = if y3 == clean { 0.8 } else { 0.2 };
            p2 * p3
        },
    )?;

    let text = spec.to_json();
    std::fs::write("channel.json", &text)?;
    println!("wrote channel.json ({} bytes)", text.len());

    let back = DiscreteChannelSpec::from_json(&text)?;
    println!(
        "parsed back: |S|={} |X1|={} |X2|={} |Y2|={} |Y3|={}, degraded: {}",
        back.sizes.s,
        back.sizes.x1,
        back.sizes.x2,
        back.sizes.y2,
        back.sizes.y3,
        is_degraded(&back)
    );

    // Parse errors carry the offending cell.
    let mut broken = spec.clone();
    broken.kernel[5] += 0.25;
    match DiscreteChannelSpec::from_json(&broken.to_json()) {
        Err(e) => println!("broken file rejected: {e}"),
        Ok(_) => unreachable!("validation must fail"),
    }
    Ok(())
}
