//! Exact stochastic simulation of the finite-N attachment/detachment chain.
//!
//! The state is the pair `(n₊, n₋)` of bound motors. Bound motors of a team
//! detach at `k₀ᵒᶠᶠ·exp(F_C / (n·F_d))` each, where `F_C` is the discrete
//! cargo force; unbound motors attach at `kᵒⁿ` each.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::TugOfWarConfig;

pub const GENERATOR: &str = "xoshiro256++ (seed_from_u64)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct MotorState {
    pub n_plus: u32,
    pub n_minus: u32,
}

impl MotorState {
    pub fn new(n_plus: u32, n_minus: u32) -> Self {
        Self { n_plus, n_minus }
    }
}

/// The four event rates out of a state (1/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionRates {
    pub detach_plus: f64,
    pub detach_minus: f64,
    pub attach_plus: f64,
    pub attach_minus: f64,
}

impl TransitionRates {
    pub fn total(&self) -> f64 {
        self.detach_plus + self.detach_minus + self.attach_plus + self.attach_minus
    }
}

pub fn transition_rates(state: MotorState, cfg: &TugOfWarConfig) -> Result<TransitionRates> {
    let (np, nm) = (state.n_plus, state.n_minus);
    if np > cfg.n_plus_total || nm > cfg.n_minus_total {
        return Err(Error::Domain(format!(
            "state ({np}, {nm}) exceeds totals ({}, {})",
            cfg.n_plus_total, cfg.n_minus_total
        )));
    }
    let force = if np == 0 && nm == 0 {
        0.0
    } else {
        cfg.cargo_force_discrete(np, nm)?
    };
    let detach = |n: u32, k0: f64, fd: f64| {
        if n == 0 {
            0.0
        } else {
            k0 * n as f64 * (force / (n as f64 * fd)).exp()
        }
    };
    Ok(TransitionRates {
        detach_plus: detach(np, cfg.plus.k_off0, cfg.plus.detach_force),
        detach_minus: detach(nm, cfg.minus.k_off0, cfg.minus.detach_force),
        attach_plus: cfg.plus.k_on * (cfg.n_plus_total - np) as f64,
        attach_minus: cfg.minus.k_on * (cfg.n_minus_total - nm) as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimOptions {
    pub t_end: f64,
    pub seed: u64,
    pub initial: MotorState,
    /// Keep every event (can be large).
    pub record_events: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub n_plus: u32,
    pub n_minus: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Occupancy {
    pub n_plus: u32,
    pub n_minus: u32,
    /// Total time spent in the state (s).
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRecord {
    pub seed: u64,
    pub generator: String,
    pub t_end: f64,
    pub n_plus_total: u32,
    pub n_minus_total: u32,
    pub initial: MotorState,
    pub n_events: u64,
    /// Time-weighted `⟨n₊⟩/N₊`.
    pub mean_fraction_plus: f64,
    /// Time-weighted `⟨n₋⟩/N₋`.
    pub mean_fraction_minus: f64,
    /// Visited states with their residence times, sorted by state.
    pub occupancy: Vec<Occupancy>,
    /// Event log (present when requested); the initial state is entry 0.
    #[serde(skip)]
    pub events: Option<Vec<Event>>,
}

impl SimRecord {
    pub fn occupancy_time(&self, state: MotorState) -> f64 {
        self.occupancy
            .binary_search_by_key(&(state.n_plus, state.n_minus), |o| (o.n_plus, o.n_minus))
            .map(|i| self.occupancy[i].time)
            .unwrap_or(0.0)
    }
}

/// Direct-method Gillespie simulation up to `t_end`. Averages are weighted by
/// residence time; the final sojourn is truncated at `t_end`.
pub fn gillespie_run(cfg: &TugOfWarConfig, opts: &SimOptions) -> Result<SimRecord> {
    if !(opts.t_end > 0.0 && opts.t_end.is_finite()) {
        return Err(Error::Domain(format!(
            "t_end = {} must be positive",
            opts.t_end
        )));
    }
    let mut state = opts.initial;
    // validates the initial state
    transition_rates(state, cfg)?;

    let mut rng = Xoshiro256PlusPlus::seed_from_u64(opts.seed);
    let mut occupancy: HashMap<MotorState, f64> = HashMap::new();
    let mut events = opts.record_events.then(|| {
        vec![Event {
            t: 0.0,
            n_plus: state.n_plus,
            n_minus: state.n_minus,
        }]
    });
    let (mut sum_plus, mut sum_minus) = (0.0, 0.0);
    let mut t = 0.0;
    let mut n_events = 0u64;

    loop {
        let rates = transition_rates(state, cfg)?;
        let total = rates.total();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::RateUnderflow {
                t,
                n_plus: state.n_plus,
                n_minus: state.n_minus,
            });
        }
        let u: f64 = rng.gen();
        let wait = -(1.0 - u).ln() / total;
        let stay = wait.min(opts.t_end - t);
        *occupancy.entry(state).or_insert(0.0) += stay;
        sum_plus += state.n_plus as f64 * stay;
        sum_minus += state.n_minus as f64 * stay;
        if t + wait >= opts.t_end {
            break;
        }
        t += wait;

        let pick = rng.gen::<f64>() * total;
        if pick < rates.detach_plus {
            state.n_plus -= 1;
        } else if pick < rates.detach_plus + rates.detach_minus {
            state.n_minus -= 1;
        } else if pick < rates.detach_plus + rates.detach_minus + rates.attach_plus {
            state.n_plus += 1;
        } else {
            state.n_minus += 1;
        }
        n_events += 1;
        if let Some(log) = events.as_mut() {
            log.push(Event {
                t,
                n_plus: state.n_plus,
                n_minus: state.n_minus,
            });
        }
    }

    let mut occupancy: Vec<Occupancy> = occupancy
        .into_iter()
        .map(|(s, time)| Occupancy {
            n_plus: s.n_plus,
            n_minus: s.n_minus,
            time,
        })
        .collect();
    occupancy.sort_by_key(|o| (o.n_plus, o.n_minus));

    Ok(SimRecord {
        seed: opts.seed,
        generator: GENERATOR.into(),
        t_end: opts.t_end,
        n_plus_total: cfg.n_plus_total,
        n_minus_total: cfg.n_minus_total,
        initial: opts.initial,
        n_events,
        mean_fraction_plus: sum_plus / (opts.t_end * cfg.n_plus_total as f64),
        mean_fraction_minus: sum_minus / (opts.t_end * cfg.n_minus_total as f64),
        occupancy,
        events,
    })
}

/// Seed of run `index` in an ensemble: SplitMix64 applied to
/// `master + (index + 1)·0x9E3779B97F4A7C15`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add((index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunAverage {
    pub seed: u64,
    pub mean_fraction_plus: f64,
    pub mean_fraction_minus: f64,
}

/// Mean, sample variance and standard error over runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pooled {
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

impl Pooled {
    fn of(xs: impl Iterator<Item = f64> + Clone) -> Self {
        let n = xs.clone().count() as f64;
        let mean = xs.clone().sum::<f64>() / n;
        let variance = if n > 1.0 {
            xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Pooled {
            mean,
            variance,
            std_error: (variance / n).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub master_seed: u64,
    pub generator: String,
    pub t_end: f64,
    pub runs: Vec<RunAverage>,
    pub plus: Pooled,
    pub minus: Pooled,
}

/// Independent runs with seeds from [`derive_seed`], executed in parallel.
pub fn ensemble_stats(
    cfg: &TugOfWarConfig,
    t_end: f64,
    n_runs: usize,
    seed: u64,
    initial: MotorState,
) -> Result<EnsembleStats> {
    if n_runs == 0 {
        return Err(Error::Domain("n_runs must be at least 1".into()));
    }
    let runs = (0..n_runs as u64)
        .into_par_iter()
        .map(|i| {
            let run_seed = derive_seed(seed, i);
            let rec = gillespie_run(
                cfg,
                &SimOptions {
                    t_end,
                    seed: run_seed,
                    initial,
                    record_events: false,
                },
            )?;
            Ok(RunAverage {
                seed: run_seed,
                mean_fraction_plus: rec.mean_fraction_plus,
                mean_fraction_minus: rec.mean_fraction_minus,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnsembleStats {
        master_seed: seed,
        generator: GENERATOR.into(),
        t_end,
        plus: Pooled::of(runs.iter().map(|r| r.mean_fraction_plus)),
        minus: Pooled::of(runs.iter().map(|r| r.mean_fraction_minus)),
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MotorParams;

    fn sym(n: u32) -> TugOfWarConfig {
        let m = MotorParams::new(1.0, 1.0, 1.0, 1.0, 10.0, 10.0);
        TugOfWarConfig::new(m, m, n, n).unwrap()
    }

    #[test]
    fn rate_examples() {
        let cfg = sym(4);
        let r = transition_rates(MotorState::new(2, 1), &cfg).unwrap();
        assert!((r.detach_plus - 2.0 * (2.0f64 / 3.0).exp()).abs() < 1e-14);
        assert!((r.detach_minus - (4.0f64 / 3.0).exp()).abs() < 1e-14);
        assert_eq!(r.attach_plus, 2.0);
        assert_eq!(r.attach_minus, 3.0);

        let r = transition_rates(MotorState::new(0, 3), &cfg).unwrap();
        assert_eq!(r.detach_plus, 0.0);
        assert_eq!(r.attach_plus, 4.0);
        // unopposed team detaches at the zero-load rate
        assert_eq!(r.detach_minus, 3.0);

        let r = transition_rates(MotorState::new(4, 4), &cfg).unwrap();
        assert_eq!((r.attach_plus, r.attach_minus), (0.0, 0.0));

        let r = transition_rates(MotorState::new(0, 0), &cfg).unwrap();
        assert_eq!((r.detach_plus, r.detach_minus), (0.0, 0.0));
        assert_eq!(r.total(), 8.0);

        assert!(transition_rates(MotorState::new(5, 0), &cfg).is_err());
    }

    #[test]
    fn same_seed_same_events() {
        let cfg = sym(5);
        let opts = SimOptions {
            t_end: 50.0,
            seed: 99,
            initial: MotorState::default(),
            record_events: true,
        };
        let a = gillespie_run(&cfg, &opts).unwrap();
        let b = gillespie_run(&cfg, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.events, b.events);
        let c = gillespie_run(&cfg, &SimOptions { seed: 100, ..opts }).unwrap();
        assert_ne!(a.events, c.events);
    }

    #[test]
    fn occupancy_covers_run_time() {
        let cfg = sym(3);
        let opts = SimOptions {
            t_end: 200.0,
            seed: 5,
            initial: MotorState::new(3, 0),
            record_events: true,
        };
        let rec = gillespie_run(&cfg, &opts).unwrap();
        let total: f64 = rec.occupancy.iter().map(|o| o.time).sum();
        assert!((total - 200.0).abs() < 1e-9);
        let log = rec.events.as_ref().unwrap();
        assert_eq!(log.len() as u64, rec.n_events + 1);
        assert!(log.windows(2).all(|w| w[0].t <= w[1].t));
        assert!(log.iter().all(|e| e.n_plus <= 3 && e.n_minus <= 3));
        assert!(rec.occupancy_time(MotorState::new(3, 0)) > 0.0);
    }

    #[test]
    fn bad_options() {
        let cfg = sym(2);
        let opts = SimOptions {
            t_end: 0.0,
            seed: 1,
            initial: MotorState::default(),
            record_events: false,
        };
        assert!(gillespie_run(&cfg, &opts).is_err());
        let opts = SimOptions {
            t_end: 1.0,
            initial: MotorState::new(3, 0),
            ..opts
        };
        assert!(gillespie_run(&cfg, &opts).is_err());
        assert!(ensemble_stats(&cfg, 1.0, 0, 1, MotorState::default()).is_err());
    }

    #[test]
    fn single_run_ensemble() {
        let cfg = sym(10);
        let ens = ensemble_stats(&cfg, 20.0, 1, 3, MotorState::default()).unwrap();
        assert_eq!(ens.plus.mean, ens.runs[0].mean_fraction_plus);
        assert_eq!(ens.plus.variance, 0.0);
        let rec = gillespie_run(
            &cfg,
            &SimOptions {
                t_end: 20.0,
                seed: derive_seed(3, 0),
                initial: MotorState::default(),
                record_events: false,
            },
        )
        .unwrap();
        assert_eq!(rec.mean_fraction_plus, ens.plus.mean);
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: Vec<u64> = (0..100).map(|i| derive_seed(1, i)).collect();
        let mut sorted = seeds.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 100);
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }
}
