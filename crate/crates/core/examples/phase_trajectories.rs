//! Mean-field trajectories and basins of attraction.
//!
//! Prints a few trajectories for the bistable symmetric set and then tallies
//! where 100 quasi-random starts end for each Figure 1 configuration.
//!
//! ```sh
//! cargo run --release --example phase_trajectories
//! ```

use std::path::PathBuf;

use tugwar::config::load_config;
use tugwar::dynamics::{basin_sample, integrate, IntegrateOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let configs = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/fig1");
    let opts = IntegrateOptions::default();

    let cfg = load_config(&configs.join("symmetric_vf30.json"))?;
    for (y0, z0) in [(0.9, 0.1), (0.1, 0.9), (0.5, 0.5), (0.3, 0.05)] {
        let traj = integrate(y0, z0, &cfg, &opts)?;
        let end = traj.terminal;
        println!(
            "({y0:.2}, {z0:.2}) -> ({:.6}, {:.6}) after t = {:.1} s{}",
            end.y,
            end.z,
            traj.times.last().copied().unwrap_or(0.0),
            if traj.converged {
                ""
            } else {
                " (not converged)"
            }
        );
    }

    println!();
    for name in [
        "symmetric_vf10",
        "symmetric_vf30",
        "symmetric_vf50",
        "asymmetric_vf20",
        "asymmetric_vf30",
        "asymmetric_vf40",
    ] {
        let cfg = load_config(&configs.join(format!("{name}.json")))?;
        let hist = basin_sample(&cfg, 100, 42, &opts)?;
        let cells: Vec<String> = hist
            .states
            .iter()
            .zip(&hist.counts)
            .map(|(s, c)| format!("theta={:.4} {} x{}", s.theta, s.stability, c))
            .collect();
        println!("{name:>16}: {}", cells.join(" | "));
        if hist.non_converged + hist.unmatched + hist.failed > 0 {
            println!(
                "{:>16}  {} not converged, {} unmatched, {} failed",
                "", hist.non_converged, hist.unmatched, hist.failed
            );
        }
    }
    Ok(())
}
