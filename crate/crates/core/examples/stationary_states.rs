//! Stationary states of one configuration, with the Jacobian at each state
//! and the check that the slope of h and the Jacobian determinant agree.
//!
//! ```sh
//! cargo run --release --example stationary_states -- configs/fig1/symmetric_vf50.json
//! ```

use std::path::PathBuf;

use tugwar::config::load_config;
use tugwar::reduction::Curve;
use tugwar::steady::{analyze, RootOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/fig1/symmetric_vf30.json")
        });
    let cfg = load_config(&path)?;
    println!("{}", path.display());
    println!(
        "nu = {}, switching threshold theta_c = {:.6}",
        cfg.nu,
        cfg.theta_threshold()
    );

    let analysis = analyze(&cfg, &RootOptions::default())?;
    println!(
        "{:>14} {:>10} {:>10} {:>11} {:>11} {:>12} {:>12}  stability",
        "theta", "y", "z", "v (nm/s)", "F (pN)", "h'", "z*det(J)"
    );
    for (s, j) in analysis.states.iter().zip(&analysis.jacobians) {
        println!(
            "{:>14.8} {:>10.6} {:>10.6} {:>11.4} {:>11.4} {:>12.5e} {:>12.5e}  {}",
            s.theta,
            s.y,
            s.z,
            s.velocity,
            s.force,
            s.h_prime,
            s.z * j.determinant,
            s.stability
        );
    }
    println!(
        "{} stable of {}",
        analysis.stable_count(),
        analysis.states.len()
    );

    // The same roots come out of the plain compactification.
    let plain = tugwar::steady::find_roots(
        &cfg,
        &RootOptions {
            curve: Curve::W,
            ..RootOptions::default()
        },
    )?;
    let worst = plain
        .roots
        .iter()
        .zip(&analysis.roots.roots)
        .map(|(a, b)| (a - b).abs() / b.max(1.0))
        .fold(0.0, f64::max);
    println!("w and w-hat root sets differ by at most {worst:.1e} (relative)");
    for w in &analysis.roots.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
