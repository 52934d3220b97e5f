//! The whole pipeline on one domain — geometry, bound sweeps with fits,
//! high-energy masses and the randomized identity checks — written as
//! CSV/JSON/SVG into `riesz-lab-out/report` (or the directory given).
//!
//!     cargo run --release --example full_report [out-dir]

use riesz_lab::lab::{run_report, ConfigLayer, ExperimentConfig, ShapeSpec};
use std::path::PathBuf;

fn main() -> riesz_lab::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| "riesz-lab-out/report".into());
    let flags = ConfigLayer {
        shape: Some(ShapeSpec { name: Some("disk".into()), r: Some(0.5), ..Default::default() }),
        h: Some(1.0 / 32.0),
        gamma: Some(vec![1.0, 2.0]),
        lambda: Some("20..cap:8".into()),
        trials: Some(100),
        out: Some(out.clone()),
        ..Default::default()
    };
    let cfg = ExperimentConfig::resolve(None, &flags)?;
    let summary = run_report(&cfg)?;
    println!("{}", serde_json::to_string_pretty(&summary).unwrap_or_default());
    println!("artifacts in {}", out.display());
    Ok(())
}
