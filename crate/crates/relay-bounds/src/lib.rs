//! Capacity bounds for relay channels whose additive interference (the
//! channel state) is known non-causally at the relay, and nowhere else.
//!
//! Two engines share one workspace:
//!
//! - [`gaussian`] evaluates the closed-form rate expressions of the additive
//!   Gaussian model (`Y2 = X1 + S + Z2`, `Y3 = X1 + X2 + S + Z3`) and
//!   maximizes them with the nested grid search in [`optim`]: an achievable
//!   decode-and-forward rate with relay-side precoding, a jointly Gaussian
//!   converse in two equivalent parameterizations, the loose all-informed
//!   bound, the treat-interference-as-noise baseline, and the regimes where
//!   the bounds meet and give capacity.
//! - [`dm`] evaluates the same bounds exactly on finite alphabets from a
//!   stochastic kernel `W(y2, y3 | x1, x2, s)`, and searches the factorized
//!   input distributions by seeded coordinate ascent.
//!
//! [`sweep`] produces rate-versus-SNR tables with CSV and SVG emission, also
//! exposed through the `relay-bounds` binary (`bounds`, `sweep`, `dm`
//! subcommands).
//!
//! All rates are bits per channel use; powers and variances are linear
//! unless a `dB` suffix says otherwise (`value_dB = 10·log10(value)`).
//!
//! ## Examples directory
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! examples/
//! ├── point_bounds.rs        # every bound at one channel configuration
//! ├── snr_sweep.rs           # reference rate curves, CSV + SVG output
//! ├── capacity_threshold.rs  # the known-capacity regime of the degraded model
//! ├── maximin_search.rs      # the grid optimizer on its own
//! ├── dm_channel.rs          # finite-alphabet bounds on a binary model
//! └── dm_spec_file.rs        # the JSON channel document format
//! ```
//!
//! Run one with `cargo run --example point_bounds`.

pub mod dm;
pub mod error;
pub mod gaussian;
pub mod optim;
pub mod sweep;

pub use error::{Error, Result};
