//! Property tests for the optimizer, the information kernels, and the
//! formula evaluators.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relay_bounds::dm::JointPmf;
use relay_bounds::gaussian::{lower_bound, upper_bound, ChannelParams};
use relay_bounds::optim::{maximize, GridSpec};
use relay_bounds::sweep::fmt_sig;

proptest! {
    #[test]
    fn fmt_sig_is_a_parse_format_fixpoint(x in -1e18f64..1e18) {
        let once = fmt_sig(x, 12);
        let back: f64 = once.parse().unwrap();
        prop_assert_eq!(fmt_sig(back, 12), once);
    }

    #[test]
    fn maximize_finds_quadratic_peak(peak in 0.0f64..1.0, scale in 0.1f64..5.0) {
        let grid = GridSpec::new(51, 2, 0.1).unwrap();
        let objective = move |x: &[f64]| -scale * (x[0] - peak) * (x[0] - peak);
        let opt = maximize(objective, &[(0.0, 1.0)], |_| true, &grid).unwrap();
        let pitch = grid.final_pitch(0.0, 1.0);
        prop_assert!((opt.point[0] - peak).abs() <= pitch + 1e-12);
        // The returned value re-evaluates bit-exactly at the argmax.
        prop_assert_eq!(opt.value.to_bits(), objective(&opt.point).to_bits());
    }

    #[test]
    fn refining_more_never_loses_value(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = rng.gen_range(0.5..3.0);
        let b = rng.gen_range(0.0..2.0);
        let objective = move |x: &[f64]| (a * x[0]).sin() + (b * x[1]).cos();
        let boxes = [(0.0, 2.0), (0.0, 2.0)];
        let coarse = maximize(objective, &boxes, |_| true, &GridSpec::new(31, 1, 0.1).unwrap()).unwrap();
        let fine = maximize(objective, &boxes, |_| true, &GridSpec::new(62, 3, 0.1).unwrap()).unwrap();
        prop_assert!(fine.value >= coarse.value - coarse.tolerance - 1e-12);
    }
}

fn random_joint(rng: &mut ChaCha8Rng, dims: &[usize]) -> JointPmf {
    let total: usize = dims.iter().product();
    let mut data: Vec<f64> = (0..total).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let sum: f64 = data.iter().sum();
    data.iter_mut().for_each(|p| *p /= sum);
    JointPmf::new(dims.to_vec(), data).unwrap()
}

proptest! {
    #[test]
    fn mutual_information_is_nonnegative_and_symmetric(seed in 0u64..2000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = random_joint(&mut rng, &[2, 3, 2]);
        let ab = j.mutual_information(&[0], &[1], &[2]).unwrap();
        let ba = j.mutual_information(&[1], &[0], &[2]).unwrap();
        prop_assert!(ab >= -1e-12);
        prop_assert!((ab - ba).abs() <= 1e-12);
    }

    #[test]
    fn product_distributions_have_zero_mi(seed in 0u64..2000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_joint(&mut rng, &[3]);
        let b = random_joint(&mut rng, &[4]);
        let mut data = Vec::with_capacity(12);
        for &pa in a.data() {
            for &pb in b.data() {
                data.push(pa * pb);
            }
        }
        let j = JointPmf::new(vec![3, 4], data).unwrap();
        let mi = j.mutual_information(&[0], &[1], &[]).unwrap();
        prop_assert!(mi.abs() <= 1e-12);
    }
}

/// Same inputs give bit-identical outputs, including through the parallel
/// search paths.
#[test]
fn bound_searches_are_deterministic() {
    let grid = GridSpec::default();
    let ch = ChannelParams::new(7.5, 12.0, 4.0, 0.8, 9.0, true).unwrap();
    let a = lower_bound(&ch, &grid).unwrap();
    let b = lower_bound(&ch, &grid).unwrap();
    assert_eq!(a.rate.to_bits(), b.rate.to_bits());
    assert_eq!(a.argmax, b.argmax);
    assert_eq!(a.evaluations, b.evaluations);
}

/// Whenever the converse search reports a maximizer on the covariance
/// boundary `rho12^2 + rho2s^2 = 1`, the bounds must meet there: that regime
/// is a capacity case.
#[test]
fn boundary_argmax_implies_meeting_bounds() {
    let grid = GridSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut boundary_hits = 0;
    for _ in 0..60 {
        let ch = ChannelParams::new(
            10f64.powf(rng.gen_range(-1.0..2.5)),
            10f64.powf(rng.gen_range(-1.0..2.5)),
            10f64.powf(rng.gen_range(-1.0..2.5)),
            10f64.powf(rng.gen_range(-2.0..1.5)),
            10f64.powf(rng.gen_range(-1.0..2.0)),
            true,
        )
        .unwrap();
        let up = upper_bound(&ch, &grid).unwrap();
        let norm = up.argmax[0] * up.argmax[0] + up.argmax[1] * up.argmax[1];
        if norm < 1.0 - 1e-6 {
            continue;
        }
        boundary_hits += 1;
        let lo = lower_bound(&ch, &grid).unwrap();
        let slack = 2.0 * up.grid_tolerance.max(lo.grid_tolerance) + 1e-12;
        assert!(
            (up.rate - lo.rate).abs() <= slack,
            "boundary maximizer but gap {} at {ch:?}",
            up.rate - lo.rate
        );
    }
    assert!(
        boundary_hits >= 3,
        "draw exercised only {boundary_hits} boundary cases"
    );
}

/// The achievable rate grows with either power and shrinks with any noise or
/// interference growth, up to grid noise.
#[test]
fn lower_bound_is_monotone_in_the_channel_constants() {
    let grid = GridSpec::new(41, 2, 0.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..8 {
        let ch = ChannelParams::new(
            rng.gen_range(0.5..15.0),
            rng.gen_range(0.5..15.0),
            rng.gen_range(0.0..15.0),
            rng.gen_range(0.5..15.0),
            rng.gen_range(0.5..15.0),
            true,
        )
        .unwrap();
        let base = lower_bound(&ch, &grid).unwrap();
        let factor = 1.0 + rng.gen_range(0.1..1.0);
        let cases = [
            (
                ChannelParams {
                    p1: ch.p1 * factor,
                    ..ch
                },
                true,
                "p1 up",
            ),
            (
                ChannelParams {
                    p2: ch.p2 * factor,
                    ..ch
                },
                true,
                "p2 up",
            ),
            (
                ChannelParams {
                    n2: ch.n2 * factor,
                    ..ch
                },
                false,
                "n2 up",
            ),
            (
                ChannelParams {
                    n3: ch.n3 * factor,
                    ..ch
                },
                false,
                "n3 up",
            ),
            (
                ChannelParams {
                    q: ch.q * factor + 0.1,
                    ..ch
                },
                false,
                "q up",
            ),
        ];
        for (changed, expect_growth, label) in cases {
            let moved = lower_bound(&changed, &grid).unwrap();
            let tolerance = base.grid_tolerance + moved.grid_tolerance + 1e-9;
            if expect_growth {
                assert!(
                    moved.rate >= base.rate - tolerance,
                    "{label}: {} -> {} at {ch:?}",
                    base.rate,
                    moved.rate
                );
            } else {
                assert!(
                    moved.rate <= base.rate + tolerance,
                    "{label}: {} -> {} at {ch:?}",
                    base.rate,
                    moved.rate
                );
            }
        }
    }
}
