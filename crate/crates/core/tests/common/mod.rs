//! Shared pieces of the integration tests. The reference implementations
//! (`h`, `dense_roots`, `single_motor_stationary`, ...) are written from the
//! model definition and do not call into the solvers they check; the
//! measurement helpers at the end do.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use tugwar::dynamics::{integrate, IntegrateOptions};
use tugwar::model::{MotorParams, Regime, TugOfWarConfig};
use tugwar::stochastic::{gillespie_run, MotorState, SimOptions};

pub const E: f64 = std::f64::consts::E;

pub fn symmetric(vf: f64) -> TugOfWarConfig {
    let m = MotorParams::new(1.0, 1.0, 1.0, 1.0, vf, 10.0);
    TugOfWarConfig::new(m, m, 100, 100).unwrap()
}

pub fn asymmetric(vf: f64) -> TugOfWarConfig {
    let p = MotorParams::new(1.0, 1.0, 1.2, 1.2, vf, 10.0);
    let m = MotorParams::new(1.0, 1.0, 1.0, 1.0, vf, 10.0);
    TugOfWarConfig::new(p, m, 100, 100).unwrap()
}

pub fn fig1_configs() -> Vec<(String, TugOfWarConfig)> {
    let mut out = Vec::new();
    for vf in [10.0, 30.0, 50.0] {
        out.push((format!("symmetric V_F={vf}"), symmetric(vf)));
    }
    for vf in [20.0, 30.0, 40.0] {
        out.push((format!("asymmetric V_F={vf}"), asymmetric(vf)));
    }
    out
}

fn random_motor(rng: &mut impl Rng) -> MotorParams {
    MotorParams::new(
        rng.gen_range(0.5..2.0),
        rng.gen_range(0.5..2.0),
        rng.gen_range(0.6..1.6),
        rng.gen_range(0.6..1.6),
        rng.gen_range(5.0..60.0),
        rng.gen_range(5.0..20.0),
    )
}

/// Positive parameter sets from a fixed seed.
pub fn random_configs(n: usize, seed: u64) -> Vec<TugOfWarConfig> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let plus = random_motor(&mut rng);
            let minus = random_motor(&mut rng);
            let nu = rng.gen_range(0.5..2.0);
            TugOfWarConfig::new(plus, minus, 100, 100)
                .unwrap()
                .with_nu(nu)
                .unwrap()
        })
        .collect()
}

/// Symmetric parameter sets (both species identical, ν = 1).
pub fn random_symmetric(n: usize, seed: u64) -> Vec<TugOfWarConfig> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let m = random_motor(&mut rng);
            TugOfWarConfig::new(m, m, 100, 100).unwrap()
        })
        .collect()
}

/// Cargo force for real-valued bound motor numbers, from the stall balance
/// of the two teams with piecewise-linear force-velocity curves.
pub fn stall_balance_force(cfg: &TugOfWarConfig, n_plus: f64, n_minus: f64) -> f64 {
    let (p, m) = (&cfg.plus, &cfg.minus);
    if n_plus * p.stall_force >= n_minus * m.stall_force {
        (p.forward_speed + m.backward_speed)
            / (p.forward_speed / (n_plus * p.stall_force)
                + m.backward_speed / (n_minus * m.stall_force))
    } else {
        (p.backward_speed + m.forward_speed)
            / (p.backward_speed / (n_plus * p.stall_force)
                + m.forward_speed / (n_minus * m.stall_force))
    }
}

/// Per-motor off-rates at ratio `theta = y/z`, from the load each bound
/// motor carries when `νθ` plus motors face one minus motor.
pub fn off_rates(cfg: &TugOfWarConfig, theta: f64) -> (f64, f64) {
    let (p, m) = (&cfg.plus, &cfg.minus);
    if theta == 0.0 {
        // limit n₊ → 0: minus team wins, total force vanishes, but the load
        // per plus motor stays finite
        let plus_load = p.stall_force * (p.backward_speed + m.forward_speed) / p.backward_speed;
        return (p.k_off0 * (plus_load / p.detach_force).exp(), m.k_off0);
    }
    let np = cfg.nu * theta;
    let force = stall_balance_force(cfg, np, 1.0);
    (
        p.k_off0 * (force / np / p.detach_force).exp(),
        m.k_off0 * (force / m.detach_force).exp(),
    )
}

/// Reduced equation: stationary `y`, `z` with `y/z = θ` exist iff this
/// vanishes.
pub fn h(cfg: &TugOfWarConfig, theta: f64) -> f64 {
    let (kp, km) = (cfg.plus.k_on, cfg.minus.k_on);
    let (kp_off, km_off) = off_rates(cfg, theta);
    theta * km * (kp + kp_off) - kp * (km + km_off)
}

fn to_theta(v: f64) -> f64 {
    if v <= 1.0 {
        v
    } else {
        1.0 / (2.0 - v)
    }
}

/// A root of `h` and whether `h` increases through it.
#[derive(Debug, Clone, Copy)]
pub struct OracleRoot {
    pub theta: f64,
    pub rising: bool,
}

/// Brute-force roots: sign changes of `h` on `n` points of `ϑ ∈ [0, 2)`
/// (θ = ϑ below 1, θ = 1/(2 − ϑ) above), each refined by bisection in θ.
pub fn dense_roots(cfg: &TugOfWarConfig, n: usize) -> Vec<OracleRoot> {
    let top = 2.0 - 1e-9;
    let mut roots = Vec::new();
    let mut prev_t = 0.0;
    let mut prev_h = h(cfg, 0.0);
    for i in 1..n {
        let t = to_theta(top * i as f64 / (n - 1) as f64);
        let ht = h(cfg, t);
        if ht == 0.0 {
            roots.push(OracleRoot {
                theta: t,
                rising: prev_h < 0.0,
            });
        } else if prev_h != 0.0 && (prev_h < 0.0) != (ht < 0.0) {
            let (mut lo, mut hi) = (prev_t, t);
            let lo_neg = prev_h < 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if (h(cfg, mid) < 0.0) == lo_neg {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(OracleRoot {
                theta: 0.5 * (lo + hi),
                rising: lo_neg,
            });
        }
        prev_t = t;
        prev_h = ht;
    }
    // h(θ)/θ tends to a positive limit, so a negative tail hides one more
    // root further out
    if prev_h < 0.0 {
        let mut lo = prev_t;
        let mut hi = 10.0 * lo;
        while h(cfg, hi) < 0.0 {
            lo = hi;
            hi *= 10.0;
        }
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if h(cfg, mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(OracleRoot {
            theta: 0.5 * (lo + hi),
            rising: true,
        });
    }
    roots
}

/// Stationary distribution of the chain with one motor per team, states
/// ordered (0,0), (1,0), (0,1), (1,1) as (n₊, n₋).
pub fn single_motor_stationary(cfg: &TugOfWarConfig) -> [f64; 4] {
    let (p, m) = (&cfg.plus, &cfg.minus);
    // with one motor per side the stall balance gives the full force
    let f = stall_balance_force(cfg, 1.0, 1.0);
    let mut q = [[0.0f64; 4]; 4];
    q[0][1] = p.k_on;
    q[0][2] = m.k_on;
    q[1][0] = p.k_off0;
    q[1][3] = m.k_on;
    q[2][0] = m.k_off0;
    q[2][3] = p.k_on;
    q[3][2] = p.k_off0 * (f / p.detach_force).exp();
    q[3][1] = m.k_off0 * (f / m.detach_force).exp();
    for i in 0..4 {
        q[i][i] = -q[i].iter().sum::<f64>();
    }
    // solve πQ = 0 with Σπ = 1: transpose, replace last equation
    let mut a = [[0.0f64; 5]; 4];
    for i in 0..4 {
        for j in 0..4 {
            a[i][j] = q[j][i];
        }
    }
    a[3] = [1.0, 1.0, 1.0, 1.0, 1.0];
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, piv);
        for row in 0..4 {
            if row != col {
                let factor = a[row][col] / a[col][col];
                for k in col..5 {
                    a[row][k] -= factor * a[col][k];
                }
            }
        }
    }
    [
        a[0][4] / a[0][0],
        a[1][4] / a[1][1],
        a[2][4] / a[2][2],
        a[3][4] / a[3][3],
    ]
}

fn endpoint(dt: f64) -> (f64, f64) {
    let cfg = symmetric(10.0);
    let opts = IntegrateOptions {
        t_end: 1.0,
        dt,
        stride: 1,
        stop_on_convergence: false,
    };
    let traj = integrate(0.8, 0.1, &cfg, &opts).unwrap();
    // the path stays in one regime, so the flow is smooth along it
    for p in &traj.states {
        assert_eq!(cfg.regime_of(p.y, p.z).unwrap(), Regime::PlusWinning);
    }
    (traj.terminal.y, traj.terminal.z)
}

/// Observed convergence order from step halving.
pub fn rk4_order() -> f64 {
    let reference = endpoint(1e-4);
    let err = |dt: f64| {
        let (y, z) = endpoint(dt);
        (y - reference.0).hypot(z - reference.1)
    };
    (err(0.1) / err(0.05)).log2()
}

pub fn single_motor_config() -> TugOfWarConfig {
    let p = MotorParams::new(1.0, 0.8, 1.3, 1.1, 20.0, 8.0);
    let m = MotorParams::new(1.5, 1.2, 0.9, 1.0, 15.0, 12.0);
    TugOfWarConfig::new(p, m, 1, 1).unwrap()
}

/// Total-variation distance between the simulated occupancy of the four
/// states and the exact stationary distribution.
pub fn four_state_tv(t_end: f64, seed: u64) -> f64 {
    let cfg = single_motor_config();
    let exact = single_motor_stationary(&cfg);
    let rec = gillespie_run(
        &cfg,
        &SimOptions {
            t_end,
            seed,
            initial: MotorState::new(0, 0),
            record_events: false,
        },
    )
    .unwrap();
    let states = [(0, 0), (1, 0), (0, 1), (1, 1)];
    0.5 * states
        .iter()
        .zip(exact)
        .map(|(&(a, b), p)| (rec.occupancy_time(MotorState::new(a, b)) / t_end - p).abs())
        .sum::<f64>()
}
