mod common;

use tugwar::reduction::{w_prime_eval, Compactification};
use tugwar::steady::{analyze, classify_all, jacobian_at, RootOptions, Stability, StationaryState};

#[test]
fn roots_agree_with_dense_scan() {
    for cfg in common::random_configs(100, 21) {
        let lib = classify_all(&cfg).unwrap();
        let oracle = common::dense_roots(&cfg, 100_000);
        assert_eq!(lib.len(), oracle.len(), "{cfg:?}");
        for (s, o) in lib.iter().zip(&oracle) {
            assert!((s.theta - o.theta).abs() <= 1e-8 * o.theta.max(1.0));
            let expect = if o.rising {
                Stability::Stable
            } else {
                Stability::Unstable
            };
            assert_eq!(s.stability, expect);
        }
    }
}

#[test]
fn states_are_fixed_points() {
    for cfg in common::random_configs(30, 22) {
        for s in classify_all(&cfg).unwrap() {
            let (f, g) = cfg.flow(s.y, s.z).unwrap();
            assert!(f.abs() + g.abs() <= 1e-10, "{s:?}: {f} {g}");
            assert!((s.y / s.z - s.theta).abs() <= 1e-12 * s.theta.max(1.0));
            assert_eq!(s.velocity, tugwar::steady::steady_velocity(s.theta, &cfg));
            assert!((s.velocity - cfg.cargo_velocity(s.y, s.z).unwrap()).abs() <= 1e-9);
        }
    }
}

#[test]
fn jacobian_matches_finite_differences() {
    for cfg in common::random_configs(20, 23) {
        for s in classify_all(&cfg).unwrap() {
            // stay clear of the switching line where the flow has a kink
            let tc = cfg.theta_threshold();
            if (s.theta - tc).abs() < 1e-3 * tc {
                continue;
            }
            let e = 1e-6 * s.y.min(s.z);
            let dy = |y: f64, z: f64| cfg.flow(y, z).unwrap();
            let (fyp, gyp) = dy(s.y + e, s.z);
            let (fym, gym) = dy(s.y - e, s.z);
            let (fzp, gzp) = dy(s.y, s.z + e);
            let (fzm, gzm) = dy(s.y, s.z - e);
            let j = [
                [(fyp - fym) / (2.0 * e), (fzp - fzm) / (2.0 * e)],
                [(gyp - gym) / (2.0 * e), (gzp - gzm) / (2.0 * e)],
            ];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            let tr = j[0][0] + j[1][1];
            let lib = jacobian_at(s.y, s.z, &cfg).unwrap();
            let scale = j.iter().flatten().map(|v| v.abs()).fold(1.0, f64::max);
            assert!(
                (lib.trace - tr).abs() <= 1e-5 * scale,
                "{} vs {tr}",
                lib.trace
            );
            assert!((lib.determinant - det).abs() <= 1e-5 * scale * scale);
            assert_eq!(lib.stable, det > 0.0 && tr < 0.0);
        }
    }
}

#[test]
fn derivative_identity_and_labels() {
    for cfg in common::random_configs(30, 24) {
        let a = analyze(&cfg, &RootOptions::default()).unwrap();
        for (s, j) in a.states.iter().zip(&a.jacobians) {
            let gap = (s.h_prime - j.determinant * s.z).abs();
            assert!(
                gap <= 1e-8 * s.h_prime.abs().max(1.0),
                "{s:?} det={}",
                j.determinant
            );
            if s.h_prime.abs() > 1e-9 {
                assert_eq!(s.stability == Stability::Stable, j.stable);
                let v = Compactification::w().to_vartheta(s.theta);
                let wp = w_prime_eval(v, &cfg).unwrap().effective();
                assert_eq!(wp > 0.0, s.h_prime > 0.0);
            }
        }
    }
}

#[test]
fn states_serialize_losslessly() {
    let states = classify_all(&common::symmetric(50.0)).unwrap();
    let text = serde_json::to_string(&states).unwrap();
    let back: Vec<StationaryState> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, states);
}

#[test]
fn far_tail_root_found() {
    use tugwar::model::{MotorParams, TugOfWarConfig};
    // small V_B⁻ makes the minus off-rate saturate near e^35, pushing the
    // largest root far beyond the compactified grid
    let p = MotorParams::new(1.0, 1.0, 1.0, 1.0, 60.0, 10.0);
    let m = MotorParams::new(1.0, 1.0, 0.6, 1.6, 10.0, 5.0);
    let cfg = TugOfWarConfig::new(p, m, 1, 1).unwrap();
    let lib = classify_all(&cfg).unwrap();
    let oracle = common::dense_roots(&cfg, 100_000);
    assert_eq!(lib.len(), oracle.len());
    let (a, b) = (lib.last().unwrap(), oracle.last().unwrap());
    assert!(a.theta > 1e6, "{}", a.theta);
    assert!((a.theta - b.theta).abs() <= 1e-8 * b.theta);
    assert_eq!(a.stability, Stability::Stable);
    let (f, g) = cfg.flow(a.y, a.z).unwrap();
    assert!(f.abs() + g.abs() <= 1e-10);
}
