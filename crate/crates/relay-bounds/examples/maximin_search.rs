//! The grid optimizer on its own: a constrained plane and a max-min nesting.
//!
//! Run with: `cargo run --example maximin_search`

use relay_bounds::optim::{maximin, maximize, GridSpec};

fn main() -> relay_bounds::Result<()> {
    let grid = GridSpec::default();

    // max x + y subject to x^2 + y^2 <= 1: the optimum sits on the arc at
    // (1/sqrt(2), 1/sqrt(2)) with value sqrt(2).
    let opt = maximize(
        |p| p[0] + p[1],
        &[(0.0, 1.0), (0.0, 1.0)],
        |p| p[0] * p[0] + p[1] * p[1] <= 1.0,
        &grid,
    )?;
    println!(
        "max x+y on the quarter disc: {:.6} at ({:.4}, {:.4}), {} evaluations, tolerance {:.1e}",
        opt.value, opt.point[0], opt.point[1], opt.evaluations, opt.tolerance
    );

    // max_x min{ 1 - x, max_y x*y }: the inner max is x, so the crossing
    // point x = 1/2 wins.
    let opt = maximin(
        |outer| 1.0 - outer[0],
        |outer, inner| outer[0] * inner[0],
        &[(0.0, 1.0)],
        &[(0.0, 1.0)],
        |_, _| true,
        &grid,
    )?;
    println!(
        "max-min crossing: {:.6} at x = {:.4}, y = {:.4}",
        opt.value, opt.point[0], opt.point[1]
    );
    Ok(())
}
