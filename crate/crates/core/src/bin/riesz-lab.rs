use clap::{Args, Parser, Subcommand};
use riesz_lab::lab::{self, ConfigLayer, ExperimentConfig, ShapeSpec};
use riesz_lab::operators::{BoundaryCondition, Dispersion};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "riesz-lab", version, about = "Semiclassical eigenvalue-bound experiments on rasterized domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure, inradius, width, regularized inradius, thickness certificate.
    Geometry(Flags),
    /// Eigenvalues per boundary condition.
    Spectrum(Flags),
    /// Riesz-mean / main-term ratio sweeps with fitted improvement constants.
    Bounds(Flags),
    /// Peierls spectra, magnetic bound sweeps and magnetic high-energy masses.
    Landau(Flags),
    /// High-energy masses of eigenfunctions and remainder terms.
    Uncertainty(Flags),
    /// Randomized verification of the exact trace identities.
    VerifyLemma(Flags),
    /// Full pipeline with summary.
    Report(Flags),
}

#[derive(Args)]
struct Flags {
    /// key = value (TOML) configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// square | rectangle | interval | disk | annulus | l-shape | two-disks | perforated
    #[arg(long)]
    shape: Option<String>,
    #[arg(long = "R")]
    r: Option<f64>,
    #[arg(long)]
    inner: Option<f64>,
    #[arg(long)]
    side: Option<f64>,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    height: Option<f64>,
    /// Mask file (overrides the shape).
    #[arg(long)]
    mask: Option<PathBuf>,
    #[arg(long)]
    h: Option<f64>,
    /// Comma-separated: dirichlet, dirichlet-compressed, neumann.
    #[arg(long, value_delimiter = ',')]
    bc: Option<Vec<BoundaryCondition>>,
    #[arg(long = "B")]
    b: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<f64>>,
    /// a..b, a..b:n, a..cap or a,b,c
    #[arg(long = "Lambda", allow_hyphen_values = false)]
    lambda: Option<String>,
    #[arg(long)]
    pad: Option<usize>,
    #[arg(long)]
    dispersion: Option<Dispersion>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Number of lowest eigenvalues (spectrum, landau).
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    allow_beyond_cap: bool,
}

impl Flags {
    fn layer(&self) -> ConfigLayer {
        let shape = ShapeSpec {
            name: self.shape.clone(),
            r: self.r,
            inner: self.inner,
            side: self.side,
            width: self.width,
            height: self.height,
        };
        ConfigLayer {
            shape: (shape != ShapeSpec::default()).then_some(shape),
            mask: self.mask.clone(),
            h: self.h,
            bc: self.bc.clone(),
            b: self.b,
            theta: self.theta,
            tol: self.tol,
            gamma: self.gamma.clone(),
            lambda: self.lambda.clone(),
            pad: self.pad,
            dispersion: self.dispersion,
            out: self.out.clone(),
            seed: self.seed,
            trials: self.trials,
            count: self.count,
            allow_beyond_cap: self.allow_beyond_cap.then_some(true),
        }
    }

    fn resolve(&self) -> riesz_lab::Result<ExperimentConfig> {
        let file = self.config.as_deref().map(ConfigLayer::from_file).transpose()?;
        ExperimentConfig::resolve(file.as_ref(), &self.layer())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    let (flags, run): (&Flags, fn(&ExperimentConfig) -> riesz_lab::Result<serde_json::Value>) = match &cli.command {
        Command::Geometry(f) => (f, lab::run_geometry),
        Command::Spectrum(f) => (f, lab::run_spectrum),
        Command::Bounds(f) => (f, lab::run_bounds),
        Command::Landau(f) => (f, lab::run_landau),
        Command::Uncertainty(f) => (f, lab::run_uncertainty),
        Command::VerifyLemma(f) => (f, lab::run_verify_lemma),
        Command::Report(f) => (f, lab::run_report),
    };
    let result = lab::init_threads().and_then(|_| flags.resolve()).and_then(|cfg| run(&cfg));
    match result {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).unwrap_or_default());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
