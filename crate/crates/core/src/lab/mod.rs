//! Experiment runner: configuration, shared pipelines, per-subcommand runs
//! writing CSV/JSON/SVG artifacts.

mod config;
mod pipeline;
mod plot;
mod runs;

pub use config::{parse_lambda_grid, ConfigLayer, ExperimentConfig, ShapeSpec};
pub use pipeline::{
    bound_series, build_operator, domain_center, first_violation, landau_params, uncertainty_rows, BoundSeries,
};
pub use plot::{log_scatter_svg, Series};
pub use runs::{run_bounds, run_geometry, run_landau, run_report, run_spectrum, run_uncertainty, run_verify_lemma};

/// Caps the global thread pool at `RIESZ_LAB_THREADS` when set.
pub fn init_threads() -> crate::Result<()> {
    if let Ok(v) = std::env::var("RIESZ_LAB_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| crate::LabError::Config(format!("RIESZ_LAB_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| crate::LabError::Config(e.to_string()))?;
    }
    Ok(())
}
