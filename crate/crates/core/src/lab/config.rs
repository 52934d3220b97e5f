use crate::error::{LabError, Result};
use crate::geometry::{make_shape, Circle, GridDomain, Shape};
use crate::operators::{validity_cap, BoundaryCondition, Dispersion};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Named shape plus its size parameters, as given on the command line.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShapeSpec {
    pub name: Option<String>,
    /// Radius (disk, annulus outer, union disks).
    pub r: Option<f64>,
    pub inner: Option<f64>,
    pub side: Option<f64>,
    pub width: Option<f64>,
    pub height: Option<f64>,
}

impl ShapeSpec {
    pub fn named(name: &str) -> Self {
        Self { name: Some(name.to_string()), ..Self::default() }
    }

    fn overlay(&mut self, other: &ShapeSpec) {
        if other.name.is_some() {
            self.name = other.name.clone();
        }
        self.r = other.r.or(self.r);
        self.inner = other.inner.or(self.inner);
        self.side = other.side.or(self.side);
        self.width = other.width.or(self.width);
        self.height = other.height.or(self.height);
    }

    /// `square`, `rectangle`, `interval`, `disk`, `annulus`, `l-shape`,
    /// `two-disks` (radius `r` at `(±0.75 r, 0)`) or `perforated`.
    pub fn to_shape(&self) -> Result<Shape> {
        let name = self.name.as_deref().unwrap_or("square");
        let side = self.side.unwrap_or(1.0);
        let r = self.r.unwrap_or(if name == "two-disks" { 0.35 } else { 1.0 });
        let shape = match name {
            "square" => Shape::Rectangle { width: side, height: side },
            "rectangle" => Shape::Rectangle { width: self.width.unwrap_or(side), height: self.height.unwrap_or(side) },
            "interval" => Shape::Interval { length: side },
            "disk" => Shape::Disk { radius: r },
            "annulus" => Shape::Annulus { inner: self.inner.unwrap_or(0.5 * r), outer: r },
            "l-shape" => Shape::LShape { side },
            "two-disks" => Shape::DiskUnion {
                disks: vec![Circle { x: -0.75 * r, y: 0.0, r }, Circle { x: 0.75 * r, y: 0.0, r }],
            },
            "perforated" => Shape::PerforatedSquare { side, holes: 3, hole_radius: self.r.unwrap_or(side / 12.0) },
            other => return Err(LabError::Config(format!("unknown shape {other:?}"))),
        };
        Ok(shape)
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| "square".into())
    }
}

/// Cutoff grid: `a..b` (10 points), `a..b:n`, `a..cap[:n]` or `a,b,c`.
pub fn parse_lambda_grid(spec: &str, h: f64) -> Result<Vec<f64>> {
    let bad = || LabError::Config(format!("malformed Lambda grid {spec:?}"));
    let num = |s: &str| -> Result<f64> {
        let s = s.trim();
        if s == "cap" {
            Ok(validity_cap(h))
        } else {
            s.parse::<f64>().map_err(|_| bad())
        }
    };
    let out = if let Some((lo, rest)) = spec.split_once("..") {
        let (hi, n) = match rest.split_once(':') {
            Some((hi, n)) => (hi, n.trim().parse::<usize>().map_err(|_| bad())?),
            None => (rest, 10),
        };
        let (a, b) = (num(lo)?, num(hi)?);
        if n < 1 || b < a {
            return Err(bad());
        }
        if n == 1 {
            vec![a]
        } else {
            (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
        }
    } else {
        spec.split(',').map(num).collect::<Result<Vec<_>>>()?
    };
    if out.iter().any(|&x| !(x >= 0.0)) {
        return Err(bad());
    }
    Ok(out)
}

/// `30..cap`, starting lower on grids too coarse to reach 30.
fn default_lambda_grid(h: f64) -> String {
    let cap = validity_cap(h);
    if cap > 60.0 {
        "30..cap".into()
    } else {
        format!("{}..cap", cap / 2.0)
    }
}

/// Every field optional: one layer of configuration (file or flags).
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigLayer {
    pub shape: Option<ShapeSpec>,
    pub mask: Option<PathBuf>,
    pub h: Option<f64>,
    pub bc: Option<Vec<BoundaryCondition>>,
    pub b: Option<f64>,
    pub theta: Option<f64>,
    pub tol: Option<f64>,
    pub gamma: Option<Vec<f64>>,
    pub lambda: Option<String>,
    pub pad: Option<usize>,
    pub dispersion: Option<Dispersion>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub count: Option<usize>,
    pub allow_beyond_cap: Option<bool>,
}

impl ConfigLayer {
    /// Reads a `key = value` (TOML) file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved experiment settings.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub shape: ShapeSpec,
    pub mask: Option<PathBuf>,
    pub h: f64,
    pub bcs: Vec<BoundaryCondition>,
    pub b: f64,
    pub theta: f64,
    pub tol: f64,
    pub gammas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub pad: usize,
    pub dispersion: Dispersion,
    pub out: PathBuf,
    pub seed: u64,
    pub trials: usize,
    pub count: Option<usize>,
    pub allow_beyond_cap: bool,
}

impl ExperimentConfig {
    /// Resolves `flags > file > defaults`.
    pub fn resolve(file: Option<&ConfigLayer>, flags: &ConfigLayer) -> Result<Self> {
        let empty = ConfigLayer::default();
        let file = file.unwrap_or(&empty);
        macro_rules! pick {
            ($f:ident, $d:expr) => {
                flags.$f.clone().or_else(|| file.$f.clone()).unwrap_or_else(|| $d)
            };
        }
        let mut shape = file.shape.clone().unwrap_or_default();
        if let Some(s) = &flags.shape {
            shape.overlay(s);
        }
        let h: f64 = pick!(h, 1.0 / 64.0);
        let cfg = Self {
            shape,
            mask: flags.mask.clone().or_else(|| file.mask.clone()),
            h,
            bcs: pick!(bc, vec![BoundaryCondition::Dirichlet, BoundaryCondition::Neumann]),
            b: pick!(b, 0.0),
            theta: pick!(theta, 0.25),
            tol: pick!(tol, h),
            gammas: pick!(gamma, vec![1.0]),
            lambdas: parse_lambda_grid(&pick!(lambda, default_lambda_grid(h)), h)?,
            pad: pick!(pad, 4),
            dispersion: pick!(dispersion, Dispersion::Continuum),
            out: pick!(out, PathBuf::from("riesz-lab-out")),
            seed: pick!(seed, 7),
            trials: pick!(trials, 500),
            count: flags.count.or(file.count),
            allow_beyond_cap: pick!(allow_beyond_cap, false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0) {
            return Err(LabError::Config(format!("h = {} must be positive", self.h)));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(LabError::Config(format!("theta = {} must lie in (0, 1)", self.theta)));
        }
        if self.b < 0.0 {
            return Err(LabError::Config(format!("B = {} must be nonnegative", self.b)));
        }
        if self.gammas.iter().any(|&g| !(g >= 0.0)) {
            return Err(LabError::Config("gamma values must be nonnegative".into()));
        }
        if self.pad < 2 {
            return Err(LabError::Config("pad must be at least 2".into()));
        }
        let cap = validity_cap(self.h);
        if !self.allow_beyond_cap {
            if let Some(&l) = self.lambdas.iter().find(|&&l| l > cap * (1.0 + 1e-12)) {
                return Err(LabError::BeyondCap { lambda: l, cap });
            }
        }
        Ok(())
    }

    /// The raster domain: the mask file if given, else the named shape.
    pub fn domain(&self) -> Result<(String, GridDomain)> {
        match &self.mask {
            Some(p) => {
                let d = GridDomain::read_mask(p)?;
                let label = p.file_stem().map_or("mask".into(), |s| s.to_string_lossy().into_owned());
                Ok((label, d))
            }
            None => Ok((self.shape.label(), make_shape(&self.shape.to_shape()?, self.h)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_fits_coarse_spacings() {
        for h in [1.0 / 64.0, 1.0 / 16.0, 0.1] {
            let g = parse_lambda_grid(&default_lambda_grid(h), h).unwrap();
            assert_eq!(g.len(), 10);
            assert!((g[9] - validity_cap(h)).abs() < 1e-9 && g[0] <= 30.0);
        }
    }

    #[test]
    fn grids() {
        assert_eq!(parse_lambda_grid("30..80", 0.01).unwrap().len(), 10);
        assert_eq!(parse_lambda_grid("1,2.5", 0.01).unwrap(), vec![1.0, 2.5]);
        let g = parse_lambda_grid("30..cap:3", 1.0 / 64.0).unwrap();
        assert_eq!(g, vec![30.0, 117.4, 204.8]);
        assert!(parse_lambda_grid("8..3", 0.1).is_err());
    }

    #[test]
    fn precedence() {
        let file: ConfigLayer = toml::from_str("h = 0.03125\ntheta = 0.3\nlambda = \"10..20\"\n[shape]\nname = \"disk\"\nr = 0.5\n").unwrap();
        let flags = ConfigLayer { theta: Some(0.2), ..Default::default() };
        let c = ExperimentConfig::resolve(Some(&file), &flags).unwrap();
        assert_eq!((c.h, c.theta, c.pad), (0.03125, 0.2, 4));
        assert_eq!(c.shape.to_shape().unwrap(), Shape::Disk { radius: 0.5 });
        let beyond = ConfigLayer { lambda: Some("10..500".into()), ..Default::default() };
        assert!(matches!(ExperimentConfig::resolve(Some(&file), &beyond), Err(LabError::BeyondCap { .. })));
    }
}
