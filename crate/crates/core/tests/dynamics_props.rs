mod common;

use proptest::prelude::*;
use tugwar::dynamics::{basin_sample, integrate, IntegrateOptions};

#[test]
fn fourth_order() {
    let p = common::rk4_order();
    assert!((3.5..=4.5).contains(&p), "order {p}");
}

#[test]
fn basins_are_reproducible() {
    let cfg = common::symmetric(30.0);
    let opts = IntegrateOptions::default();
    let a = basin_sample(&cfg, 30, 5, &opts).unwrap();
    assert_eq!(a, basin_sample(&cfg, 30, 5, &opts).unwrap());
    assert_eq!(a.counts.iter().sum::<usize>(), 30);
}

#[test]
fn time_stamps_follow_stride() {
    let opts = IntegrateOptions {
        t_end: 2.0,
        dt: 0.01,
        stride: 10,
        stop_on_convergence: false,
    };
    let traj = integrate(0.5, 0.2, &common::symmetric(10.0), &opts).unwrap();
    assert_eq!(traj.times.len(), 21);
    for (i, t) in traj.times.iter().enumerate() {
        assert!((t - 0.1 * i as f64).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn unit_square_is_forward_invariant(
        y0 in 1e-3..1.0f64,
        z0 in 1e-3..1.0f64,
        idx in 0usize..6,
    ) {
        let (_, cfg) = common::fig1_configs().swap_remove(idx);
        let opts = IntegrateOptions {
            t_end: 20.0,
            dt: 1e-3,
            stride: 10,
            stop_on_convergence: false,
        };
        let traj = integrate(y0, z0, &cfg, &opts).unwrap();
        for p in &traj.states {
            prop_assert!(p.y > 0.0 && p.y <= 1.0 && p.z > 0.0 && p.z <= 1.0, "{p:?}");
        }
    }
}
