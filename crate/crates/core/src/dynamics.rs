//! Forward integration of the mean-field flow and basin sampling.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{MotorFractions, TugOfWarConfig};
use crate::steady::{classify_all, Stability, StationaryState};

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_T_END: f64 = 200.0;
/// Trajectories count as converged once `|f| + |g|` drops below this (1/s).
pub const CONVERGENCE_TOL: f64 = 1e-10;
/// A converged endpoint is attributed to a stationary state within this
/// Euclidean distance.
pub const MATCH_DISTANCE: f64 = 1e-6;
/// Distance within which an endpoint counts as sitting on an unstable state.
pub const UNSTABLE_DISTANCE: f64 = 1e-3;

const BOX_LO: f64 = -0.1;
const BOX_HI: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    pub t_end: f64,
    pub dt: f64,
    /// Record every `stride`-th step (the first and last states are always
    /// recorded).
    pub stride: usize,
    /// End the run as soon as the convergence criterion is met.
    pub stop_on_convergence: bool,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            t_end: DEFAULT_T_END,
            dt: DEFAULT_DT,
            stride: 100,
            stop_on_convergence: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<MotorFractions>,
    pub terminal: MotorFractions,
    /// Whether `|f| + |g| < CONVERGENCE_TOL` was reached.
    pub converged: bool,
    /// Index into the stationary-state list, once attributed.
    pub converged_to: Option<usize>,
}

impl Trajectory {
    /// Index of the state nearest to the terminal point if the run converged
    /// and that state lies within `tol`.
    pub fn match_state(&self, states: &[StationaryState], tol: f64) -> Option<usize> {
        if !self.converged {
            return None;
        }
        nearest(self.terminal, states)
            .filter(|&(_, d)| d <= tol)
            .map(|(i, _)| i)
    }
}

fn nearest(p: MotorFractions, states: &[StationaryState]) -> Option<(usize, f64)> {
    states
        .iter()
        .enumerate()
        .map(|(i, s)| (i, (p.y - s.y).hypot(p.z - s.z)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

fn stage(cfg: &TugOfWarConfig, y: f64, z: f64, t: f64, dt: f64) -> Result<(f64, f64)> {
    let inside = |v: f64| (BOX_LO..=BOX_HI).contains(&v);
    if !(inside(y) && inside(z)) {
        return Err(Error::StepRejected { t, dt });
    }
    cfg.flow(y, z).map_err(|_| Error::StepRejected { t, dt })
}

/// Classical fixed-step RK4 on the flow `(f, g)`. The regime is re-evaluated
/// at every stage.
pub fn integrate(
    y0: f64,
    z0: f64,
    cfg: &TugOfWarConfig,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    let start = MotorFractions::new(y0, z0)?;
    if !(opts.dt > 0.0) || !(opts.t_end >= opts.dt) {
        return Err(Error::Domain(format!(
            "need dt > 0 and t_end >= dt (dt = {}, t_end = {})",
            opts.dt, opts.t_end
        )));
    }
    let stride = opts.stride.max(1);
    let steps = (opts.t_end / opts.dt).round() as usize;
    let dt = opts.dt;

    let (mut y, mut z) = (start.y, start.z);
    let mut times = vec![0.0];
    let mut states = vec![start];

    for k in 0..steps {
        let t = k as f64 * dt;
        let k1 = stage(cfg, y, z, t, dt)?;
        if opts.stop_on_convergence && k1.0.abs() + k1.1.abs() < CONVERGENCE_TOL {
            if *times.last().unwrap() != t {
                times.push(t);
                states.push(MotorFractions { y, z });
            }
            return Ok(Trajectory {
                times,
                terminal: MotorFractions { y, z },
                states,
                converged: true,
                converged_to: None,
            });
        }
        let k2 = stage(cfg, y + 0.5 * dt * k1.0, z + 0.5 * dt * k1.1, t, dt)?;
        let k3 = stage(cfg, y + 0.5 * dt * k2.0, z + 0.5 * dt * k2.1, t, dt)?;
        let k4 = stage(cfg, y + dt * k3.0, z + dt * k3.1, t, dt)?;
        y += dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        z += dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);

        if (k + 1) % stride == 0 || k + 1 == steps {
            times.push((k + 1) as f64 * dt);
            states.push(MotorFractions { y, z });
        }
    }
    let (f, g) = stage(cfg, y, z, steps as f64 * dt, dt)?;
    let converged = f.abs() + g.abs() < CONVERGENCE_TOL;
    Ok(Trajectory {
        times,
        terminal: MotorFractions { y, z },
        states,
        converged,
        converged_to: None,
    })
}

/// Starts in `(0, 1)²` from the additive R2 sequence, shifted by a
/// seed-dependent random offset (Cranley-Patterson rotation).
pub fn quasi_random_starts(n: usize, seed: u64) -> Vec<(f64, f64)> {
    // 1/g and 1/g² with g the plastic number
    const ALPHA: (f64, f64) = (0.754_877_666_246_692_7, 0.569_840_290_998_053_3);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let shift: (f64, f64) = (rng.gen(), rng.gen());
    (1..=n)
        .map(|i| {
            let i = i as f64;
            let u = (shift.0 + i * ALPHA.0).fract();
            let v = (shift.1 + i * ALPHA.1).fract();
            (u.clamp(1e-9, 1.0 - 1e-9), v.clamp(1e-9, 1.0 - 1e-9))
        })
        .collect()
}

pub const START_SEQUENCE: &str =
    "R2 additive recurrence, Cranley-Patterson shift from xoshiro256++";

/// Where the trajectories from many starting points ended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinHistogram {
    pub seed: u64,
    pub sequence: String,
    pub n_starts: usize,
    pub states: Vec<StationaryState>,
    /// Runs attributed to each entry of `states`.
    pub counts: Vec<usize>,
    /// Runs that did not meet the convergence criterion by `t_end`.
    pub non_converged: usize,
    /// Converged runs not within `MATCH_DISTANCE` of any listed state.
    pub unmatched: usize,
    /// Runs ending within `UNSTABLE_DISTANCE` of an unstable state.
    pub near_unstable: usize,
    /// Runs aborted by a rejected step.
    pub failed: usize,
}

impl BasinHistogram {
    pub fn stable_total(&self) -> usize {
        self.states
            .iter()
            .zip(&self.counts)
            .filter(|(s, _)| s.stability == Stability::Stable)
            .map(|(_, c)| c)
            .sum()
    }
}

/// Integrates from `n_starts` quasi-random starts and tallies the end states.
/// Runs are independent and executed in parallel; the result is
/// deterministic for a fixed seed.
pub fn basin_sample(
    cfg: &TugOfWarConfig,
    n_starts: usize,
    seed: u64,
    opts: &IntegrateOptions,
) -> Result<BasinHistogram> {
    if n_starts == 0 {
        return Err(Error::Domain("n_starts must be at least 1".into()));
    }
    let states = classify_all(cfg)?;
    let starts = quasi_random_starts(n_starts, seed);
    let outcomes: Vec<Result<Trajectory>> = starts
        .par_iter()
        .map(|&(y, z)| {
            integrate(
                y,
                z,
                cfg,
                &IntegrateOptions {
                    stride: usize::MAX,
                    ..*opts
                },
            )
        })
        .collect();

    let mut hist = BasinHistogram {
        seed,
        sequence: START_SEQUENCE.into(),
        n_starts,
        counts: vec![0; states.len()],
        states,
        non_converged: 0,
        unmatched: 0,
        near_unstable: 0,
        failed: 0,
    };
    for outcome in outcomes {
        let traj = match outcome {
            Ok(t) => t,
            Err(_) => {
                hist.failed += 1;
                continue;
            }
        };
        if !traj.converged {
            hist.non_converged += 1;
        }
        if let Some((i, d)) = nearest(traj.terminal, &hist.states) {
            if hist.states[i].stability != Stability::Stable && d <= UNSTABLE_DISTANCE {
                hist.near_unstable += 1;
            }
        }
        match traj.match_state(&hist.states, MATCH_DISTANCE) {
            Some(i) => hist.counts[i] += 1,
            None if traj.converged => hist.unmatched += 1,
            None => {}
        }
    }
    Ok(hist)
}
