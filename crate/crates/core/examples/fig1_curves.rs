//! Samples w(ϑ) for the six Figure 1 parameter sets and writes one CSV per
//! set, ready for plotting.
//!
//! ```sh
//! cargo run --release --example fig1_curves -- [out_dir]
//! ```

use std::fmt::Write as _;
use std::path::PathBuf;

use tugwar::cli::fmt_f64;
use tugwar::config::load_config;
use tugwar::reduction::{w_eval, Compactification};
use tugwar::steady::classify_all;

const SETS: [&str; 6] = [
    "symmetric_vf10",
    "symmetric_vf30",
    "symmetric_vf50",
    "asymmetric_vf20",
    "asymmetric_vf30",
    "asymmetric_vf40",
];
const GRID: usize = 2000;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("fig1_curves"));
    std::fs::create_dir_all(&out_dir)?;
    let configs = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/fig1");

    for name in SETS {
        let cfg = load_config(&configs.join(format!("{name}.json")))?;
        let mut csv = String::from("vartheta,w\n");
        for i in 0..GRID {
            let v = (2.0 - 1e-9) * i as f64 / (GRID - 1) as f64;
            writeln!(csv, "{},{}", fmt_f64(v), fmt_f64(w_eval(v, &cfg)?))?;
        }
        let path = out_dir.join(format!("{name}_w.csv"));
        std::fs::write(&path, csv)?;

        let map = Compactification::w();
        let roots: Vec<String> = classify_all(&cfg)?
            .iter()
            .map(|s| format!("{:.4} ({})", map.to_vartheta(s.theta), s.stability))
            .collect();
        println!("{name:>16}: roots at vartheta = {}", roots.join(", "));
        println!("{:>16}  -> {}", "", path.display());
    }
    Ok(())
}
