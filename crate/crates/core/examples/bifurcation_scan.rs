//! Parameter sweeps that locate changes in the number of stable states.
//!
//! ```sh
//! cargo run --release --example bifurcation_scan
//! ```

use std::path::PathBuf;

use tugwar::config::load_config;
use tugwar::steady::{scan_parameter, RootOptions, ScanParameter, ScanResult};

fn grid(from: f64, to: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| from + (to - from) * i as f64 / (n - 1) as f64)
        .collect()
}

fn report(scan: &ScanResult) {
    let counts: Vec<usize> = scan.points.iter().map(|p| p.stable_count).collect();
    println!(
        "{}: stable counts along the grid {:?}",
        scan.parameter, counts
    );
    for b in &scan.bifurcations {
        println!(
            "  {} -> {} stable at {} = {:.9} (theta = {:.6}, h' = {:.2e})",
            b.stable_below, b.stable_above, scan.parameter, b.refined_value, b.theta, b.h_prime
        );
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let configs = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/fig1");
    let opts = RootOptions::default();

    // Forward speed of both species, symmetric motors.
    let sym = load_config(&configs.join("symmetric_vf10.json"))?;
    let vf: ScanParameter = "V_F".parse()?;
    report(&scan_parameter(&sym, vf, &grid(10.0, 50.0, 41), &opts)?);

    // Team-size ratio with stronger plus motors.
    let asym = load_config(&configs.join("asymmetric_vf40.json"))?;
    report(&scan_parameter(
        &asym,
        ScanParameter::Nu,
        &grid(0.5, 2.0, 61),
        &opts,
    )?);
    Ok(())
}
