//! Ball-intersection counts, the regularized inradius and thickness.
//!
//! Intersections `|S ∩ B_rho(x)|` are lattice counts of cells whose centers
//! lie in the open ball, for `x` on the cell-center lattice; all counts for
//! one radius come from a single FFT convolution. Ball volumes are analytic.

use super::{inradius, measure, GridDomain};
use crate::error::{LabError, Result};
use crate::fourier::{smooth_size, Fft2};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Volume of the `d`-ball of radius `rho`.
pub fn ball_volume(dim: usize, rho: f64) -> f64 {
    if dim == 1 {
        2.0 * rho
    } else {
        PI * rho * rho
    }
}

/// Lattice counts of `mask ∩ B_rho(c)` for every center `c` of an enlarged
/// raster; the mask transform is computed once and reused across radii.
struct BallCounter {
    dim: usize,
    h: f64,
    nx: usize,
    ny: usize,
    sx: usize,
    sy: usize,
    fft: Fft2,
    mask_hat: Vec<Complex64>,
}

impl BallCounter {
    /// Supports radii up to `max_rho`.
    fn new(domain: &GridDomain, max_rho: f64) -> Self {
        let h = domain.spacing();
        let r = (max_rho / h).floor() as usize + 1;
        let dim = domain.dim();
        let (nx, ny) = (domain.nx(), domain.ny());
        let sx = smooth_size(nx + 2 * r + 1);
        let sy = if dim == 2 { smooth_size(ny + 2 * r + 1) } else { 1 };
        let fft = Fft2::new(sx, sy);
        let mut mask_hat = vec![Complex64::new(0.0, 0.0); sx * sy];
        for iy in 0..ny {
            for ix in 0..nx {
                if domain.mask()[iy * nx + ix] {
                    mask_hat[iy * sx + ix] = Complex64::new(1.0, 0.0);
                }
            }
        }
        fft.forward(&mut mask_hat);
        Self { dim, h, nx, ny, sx, sy, fft, mask_hat }
    }

    fn radius_cells(&self, rho: f64) -> usize {
        (rho / self.h).floor() as usize + 1
    }

    /// Counts indexed by center `(cx, cy)` with `cx in -r..nx+r` stored at
    /// `cx mod sx` (likewise for y).
    fn counts(&self, rho: f64) -> Vec<f64> {
        let r = self.radius_cells(rho) as isize;
        assert!(self.nx + 2 * (r as usize) < self.sx, "radius beyond counter capacity");
        let mut ker = vec![Complex64::new(0.0, 0.0); self.sx * self.sy];
        let r2 = (rho / self.h).powi(2);
        let ry = if self.dim == 2 { r } else { 0 };
        for j in -ry..=ry {
            for i in -r..=r {
                if ((i * i + j * j) as f64) < r2 {
                    let ix = i.rem_euclid(self.sx as isize) as usize;
                    let iy = j.rem_euclid(self.sy as isize) as usize;
                    ker[iy * self.sx + ix] = Complex64::new(1.0, 0.0);
                }
            }
        }
        self.fft.forward(&mut ker);
        for (k, m) in ker.iter_mut().zip(&self.mask_hat) {
            *k *= m;
        }
        self.fft.inverse(&mut ker);
        let norm = (self.sx * self.sy) as f64;
        ker.iter().map(|v| (v.re / norm).round()).collect()
    }

    fn count_at(&self, counts: &[f64], cx: isize, cy: isize) -> f64 {
        let ix = cx.rem_euclid(self.sx as isize) as usize;
        let iy = cy.rem_euclid(self.sy as isize) as usize;
        counts[iy * self.sx + ix]
    }

    /// Largest ratio over all lattice centers within `rho` of the raster.
    fn sup_ratio(&self, rho: f64) -> (f64, (isize, isize)) {
        let counts = self.counts(rho);
        let r = self.radius_cells(rho) as isize;
        let ry = if self.dim == 2 { r } else { 0 };
        let vol = ball_volume(self.dim, rho) / self.h.powi(self.dim as i32);
        let mut best = (f64::NEG_INFINITY, (0, 0));
        for cy in -ry..self.ny as isize + ry {
            for cx in -r..self.nx as isize + r {
                let q = self.count_at(&counts, cx, cy) / vol;
                if q > best.0 {
                    best = (q, (cx, cy));
                }
            }
        }
        best
    }
}

/// Outcome of the regularized-inradius scan.
#[derive(Clone, Debug, Serialize)]
pub struct RegularizedInradius {
    pub rho: f64,
    pub theta: f64,
    /// Sup-ratio at the returned radius.
    pub sup_ratio: f64,
    /// Number of radii whose sup-ratio was evaluated.
    pub evaluations: usize,
}

/// `rho_theta` to within `tol` plus grid effects; see [`regularized_inradius_scan`].
pub fn regularized_inradius(domain: &GridDomain, theta: f64, tol: f64) -> Result<f64> {
    Ok(regularized_inradius_scan(domain, theta, tol)?.rho)
}

/// Scans `rho = rho_in + k tol` upward and returns the first radius whose
/// sup-ratio is `<= theta` at it and at the next two grid radii.
///
/// The sup-ratio is not assumed monotone. Grid radii are skipped only when a
/// counting bound proves they fail: intersection counts grow with `rho`, so a
/// ratio `q` at `rho` forces a ratio `>= q (rho/rho')^d > theta` at every
/// `rho' < rho (q/theta)^(1/d)`.
pub fn regularized_inradius_scan(domain: &GridDomain, theta: f64, tol: f64) -> Result<RegularizedInradius> {
    let h = domain.spacing();
    if !(theta > 0.0 && theta < 1.0) {
        return Err(LabError::InvalidInput(format!("theta = {theta} not in (0, 1)")));
    }
    if tol < h * (1.0 - 1e-12) {
        return Err(LabError::ToleranceBelowResolution { tol, h });
    }
    if domain.is_empty() {
        return Err(LabError::DegenerateDomain("regularized inradius of an empty domain".into()));
    }
    let d = domain.dim() as f64;
    let rho0 = inradius(domain)?;
    let upper = (measure(domain) / (theta * ball_volume(domain.dim(), 1.0))).powf(1.0 / d);
    let counter = BallCounter::new(domain, upper.max(rho0) + 4.0 * tol + h);
    let rho_at = |k: usize| rho0 + k as f64 * tol;
    let mut cache: std::collections::HashMap<usize, f64> = Default::default();
    let mut evaluations = 0;
    let mut sup = |k: usize, evaluations: &mut usize| -> f64 {
        *cache.entry(k).or_insert_with(|| {
            *evaluations += 1;
            counter.sup_ratio(rho_at(k)).0
        })
    };
    let mut k = 0usize;
    loop {
        let rho = rho_at(k);
        let q = sup(k, &mut evaluations);
        if q <= theta {
            let q1 = sup(k + 1, &mut evaluations);
            let q2 = sup(k + 2, &mut evaluations);
            if q1 <= theta && q2 <= theta {
                return Ok(RegularizedInradius { rho, theta, sup_ratio: q, evaluations });
            }
            k += 1;
            continue;
        }
        let forced = rho * (q / theta).powf(1.0 / d) * (1.0 - 1e-12);
        let jump = ((forced - rho0) / tol).ceil().max(0.0) as usize;
        k = jump.max(k + 1);
        if rho_at(k) > upper + 3.0 * tol + 2.0 * h {
            // unreachable for a correct counter: every rho >= upper passes
            return Err(LabError::Linalg(format!("regularized inradius scan passed the bound {upper}")));
        }
    }
}

/// Result of a finite-box thickness check.
#[derive(Clone, Debug, Serialize)]
pub struct ThicknessCertificate {
    pub rho: f64,
    pub kappa: f64,
    pub satisfied: bool,
    pub worst_center: [f64; 2],
    pub worst_ratio: f64,
    pub centers_checked: usize,
    /// Which centers stand in for "all x in R^d".
    pub convention: String,
}

/// Checks `|S ∩ B_rho(x)| >= kappa |B_rho|` for every lattice center `x` of
/// the raster box whose ball lies inside the box.
pub fn thickness_check(set: &GridDomain, rho: f64, kappa: f64) -> Result<ThicknessCertificate> {
    if !(rho > 0.0) || !(kappa > 0.0 && kappa < 1.0) {
        return Err(LabError::InvalidInput(format!("need rho > 0 and kappa in (0,1), got {rho}, {kappa}")));
    }
    let h = set.spacing();
    let counter = BallCounter::new(set, rho);
    let counts = counter.counts(rho);
    let vol = ball_volume(set.dim(), rho) / set.cell_volume();
    let inside = |i: usize, n: usize| (i as f64 + 0.5) * h >= rho && (n as f64 - i as f64 - 0.5) * h >= rho;
    let mut worst = (f64::INFINITY, [0.0, 0.0]);
    let mut checked = 0;
    for iy in 0..set.ny() {
        if set.dim() == 2 && !inside(iy, set.ny()) {
            continue;
        }
        for ix in 0..set.nx() {
            if !inside(ix, set.nx()) {
                continue;
            }
            checked += 1;
            let q = counter.count_at(&counts, ix as isize, iy as isize) / vol;
            if q < worst.0 {
                worst = (q, set.cell_center(ix, iy));
            }
        }
    }
    if checked == 0 {
        return Err(LabError::InvalidInput(format!("box too small for balls of radius {rho}")));
    }
    Ok(ThicknessCertificate {
        rho,
        kappa,
        satisfied: worst.0 >= kappa,
        worst_center: worst.1,
        worst_ratio: worst.0,
        centers_checked: checked,
        convention: "centers on the cell lattice of the stated box whose ball lies inside the box".into(),
    })
}

/// Thickness of the complement of `domain` inside its raster box enlarged so
/// that every ball of radius `rho` meeting the domain is checked.
pub fn complement_thickness(domain: &GridDomain, rho: f64, kappa: f64) -> Result<ThicknessCertificate> {
    let margin = (2.0 * rho / domain.spacing()).ceil() as usize + 1;
    thickness_check(&domain.complement_in_box(margin), rho, kappa)
}

/// Half-width `t` of the slab `{|y_d| < t}` holding a `theta` fraction of the unit ball.
pub fn slab_half_width(theta: f64, dim: usize) -> f64 {
    if dim == 1 {
        return theta;
    }
    let frac = |t: f64| 2.0 * (t * (1.0 - t * t).sqrt() + t.asin()) / PI;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if frac(mid) < theta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Constant `C` with `rho_theta <= C * width`, from the slab bound.
pub fn width_constant(theta: f64, dim: usize) -> f64 {
    1.0 / (2.0 * slab_half_width(theta, dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_shape, Shape};

    fn brute_count(d: &GridDomain, rho: f64, cx: isize, cy: isize) -> f64 {
        let h = d.spacing();
        let mut n = 0;
        for iy in 0..d.ny() as isize {
            for ix in 0..d.nx() as isize {
                let r2 = (((ix - cx).pow(2) + (iy - cy).pow(2)) as f64) * h * h;
                if d.contains(ix, iy) && r2 < rho * rho {
                    n += 1;
                }
            }
        }
        n as f64
    }

    #[test]
    fn fft_counts_match_brute_force() {
        let d = make_shape(&Shape::LShape { side: 1.0 }, 1.0 / 16.0).unwrap();
        let rho = 0.3;
        let c = BallCounter::new(&d, 0.5);
        let counts = c.counts(rho);
        for (cx, cy) in [(0, 0), (-3, 2), (8, 8), (17, -2), (5, 12)] {
            assert_eq!(c.count_at(&counts, cx, cy), brute_count(&d, rho, cx, cy), "center ({cx},{cy})");
        }
    }

    #[test]
    fn slab_fraction_endpoints() {
        assert!((slab_half_width(1.0 - 1e-15, 2) - 1.0).abs() < 1e-6);
        let t = slab_half_width(0.5, 2);
        let f = 2.0 * (t * (1.0 - t * t).sqrt() + t.asin()) / PI;
        assert!((f - 0.5).abs() < 1e-12);
        assert_eq!(width_constant(0.5, 1), 1.0);
    }

    #[test]
    fn tolerance_below_resolution() {
        let d = make_shape(&Shape::Disk { radius: 1.0 }, 1.0 / 16.0).unwrap();
        assert!(matches!(
            regularized_inradius(&d, 0.5, 0.01),
            Err(LabError::ToleranceBelowResolution { .. })
        ));
    }

    #[test]
    fn skipping_agrees_with_plain_scan() {
        let h = 1.0 / 16.0;
        let d = make_shape(&Shape::Annulus { inner: 0.3, outer: 1.0 }, h).unwrap();
        let theta = 0.4;
        let fast = regularized_inradius(&d, theta, h).unwrap();
        let rho0 = inradius(&d).unwrap();
        let c = BallCounter::new(&d, 4.0);
        let mut k = 0;
        let plain = loop {
            let r = rho0 + k as f64 * h;
            if (0..3).all(|j| c.sup_ratio(r + j as f64 * h).0 <= theta) {
                break r;
            }
            k += 1;
        };
        assert!((fast - plain).abs() < 1e-12, "{fast} vs {plain}");
    }
}
