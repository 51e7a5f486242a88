//! Finite-N stochastic simulation against the mean-field states.
//!
//! First a long run with 1000 motors per team, whose time-averaged bound
//! fractions should sit on the single mean-field state. Then short runs of
//! a multistable set started at each stable state. Over 20 s the run
//! averages cluster around the stable states. With much smaller teams the
//! runs hop between states and the clusters wash out.
//!
//! ```sh
//! cargo run --release --example gillespie_ensemble
//! ```

use std::path::PathBuf;

use tugwar::config::load_config;
use tugwar::model::TugOfWarConfig;
use tugwar::steady::{classify_all, Stability};
use tugwar::stochastic::{ensemble_stats, gillespie_run, MotorState, SimOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let configs = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/fig1");

    let base = load_config(&configs.join("symmetric_vf10.json"))?;
    let cfg = TugOfWarConfig::new(base.plus, base.minus, 1000, 1000)?;
    let s = classify_all(&cfg)?[0];
    let rec = gillespie_run(
        &cfg,
        &SimOptions {
            t_end: 1e4,
            seed: 1,
            initial: MotorState::new(269, 269),
            record_events: false,
        },
    )?;
    println!(
        "N = 1000: {} events, mean fractions ({:.5}, {:.5}), mean field ({:.5}, {:.5})",
        rec.n_events, rec.mean_fraction_plus, rec.mean_fraction_minus, s.y, s.z
    );

    let base = load_config(&configs.join("symmetric_vf50.json"))?;
    let cfg = TugOfWarConfig::new(base.plus, base.minus, 1000, 1000)?;
    let n = cfg.n_plus_total as f64;
    let stable: Vec<_> = classify_all(&cfg)?
        .into_iter()
        .filter(|s| s.stability == Stability::Stable)
        .collect();
    // Pool run averages from every start, then group each run with the
    // nearest stable state.
    let mut runs = Vec::new();
    for st in &stable {
        let start = MotorState::new((st.y * n).round() as u32, (st.z * n).round() as u32);
        runs.extend(ensemble_stats(&cfg, 20.0, 30, 7, start)?.runs);
    }
    for (i, st) in stable.iter().enumerate() {
        let members: Vec<_> = runs
            .iter()
            .filter(|r| {
                let d = |s: &tugwar::steady::StationaryState| {
                    (s.y - r.mean_fraction_plus).hypot(s.z - r.mean_fraction_minus)
                };
                (0..stable.len()).min_by(|&a, &b| d(&stable[a]).total_cmp(&d(&stable[b])))
                    == Some(i)
            })
            .collect();
        let k = members.len().max(1) as f64;
        let cy = members.iter().map(|r| r.mean_fraction_plus).sum::<f64>() / k;
        let cz = members.iter().map(|r| r.mean_fraction_minus).sum::<f64>() / k;
        println!(
            "state ({:.4}, {:.4}): {:>3} runs, cluster centre ({cy:.4}, {cz:.4})",
            st.y,
            st.z,
            members.len()
        );
    }
    Ok(())
}
