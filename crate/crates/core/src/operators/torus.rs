use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// How a torus mode's frequency turns into an eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dispersion {
    /// Eigenvalues of the periodic 5-point Laplacian, `(4/h^2) sum sin^2(pi k_j / N_j)`.
    Discrete,
    /// `|xi|^2` with `xi` the DFT frequency folded into `[-pi/h, pi/h)`.
    Continuum,
}

impl std::str::FromStr for Dispersion {
    type Err = crate::LabError;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "discrete" => Ok(Self::Discrete),
            "continuum" => Ok(Self::Continuum),
            _ => Err(crate::LabError::Config(format!("unknown dispersion {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusMode {
    pub index: [usize; 2],
    pub xi: [f64; 2],
    pub eigenvalue: f64,
}

/// Folded DFT frequency `2 pi k' / (N h)` with `k'` in `[-N/2, N/2)`.
pub fn frequency(k: usize, n: usize, h: f64) -> f64 {
    let kk = if 2 * k < n { k as f64 } else { k as f64 - n as f64 };
    2.0 * PI * kk / (n as f64 * h)
}

pub fn mode_eigenvalue(k: [usize; 2], dims: [usize; 2], h: f64, dispersion: Dispersion) -> f64 {
    let mut total = 0.0;
    for j in 0..2 {
        if dims[j] <= 1 {
            continue;
        }
        total += match dispersion {
            Dispersion::Discrete => 4.0 / (h * h) * (PI * k[j] as f64 / dims[j] as f64).sin().powi(2),
            Dispersion::Continuum => frequency(k[j], dims[j], h).powi(2),
        };
    }
    total
}

/// All modes of an `N_x x N_y` torus (`N_y = 1` in one dimension), in the
/// row-major order of the DFT buffer.
pub fn torus_modes(dims: [usize; 2], h: f64, dispersion: Dispersion) -> Vec<TorusMode> {
    let mut out = Vec::with_capacity(dims[0] * dims[1]);
    for ky in 0..dims[1] {
        for kx in 0..dims[0] {
            let xi = [
                frequency(kx, dims[0], h),
                if dims[1] > 1 { frequency(ky, dims[1], h) } else { 0.0 },
            ];
            out.push(TorusMode { index: [kx, ky], xi, eigenvalue: mode_eigenvalue([kx, ky], dims, h, dispersion) });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_values() {
        let m = torus_modes([2, 1], 1.0, Dispersion::Discrete);
        assert_eq!(m[0].eigenvalue, 0.0);
        assert!((m[1].eigenvalue - 4.0).abs() < 1e-15);
        let c = torus_modes([8, 8], 0.5, Dispersion::Continuum);
        assert_eq!(c[0].eigenvalue, 0.0);
        // k = N/2 folds to -pi/h
        assert!((c[4].xi[0] + PI / 0.5).abs() < 1e-12);
    }
}
