use super::GridDomain;
use crate::error::{LabError, Result};
use std::f64::consts::PI;

/// `h^d` times the number of inside cells.
pub fn measure(domain: &GridDomain) -> f64 {
    domain.active_count() as f64 * domain.cell_volume()
}

/// Minimal directional extent over `n_directions` equally spaced directions
/// in a half circle, plus one cell diameter `h sqrt(d)`.
pub fn width(domain: &GridDomain, n_directions: usize) -> Result<f64> {
    if domain.is_empty() {
        return Err(LabError::DegenerateDomain("width of an empty domain".into()));
    }
    let h = domain.spacing();
    let cells = domain.active_cells();
    if domain.dim() == 1 {
        let (lo, hi) = cells.iter().fold((usize::MAX, 0), |(lo, hi), &(ix, _)| (lo.min(ix), hi.max(ix)));
        return Ok((hi - lo) as f64 * h + h);
    }
    if n_directions < 4 {
        return Err(LabError::InvalidInput(format!("need at least 4 directions, got {n_directions}")));
    }
    let mut best = f64::INFINITY;
    for k in 0..n_directions {
        let phi = PI * k as f64 / n_directions as f64;
        let (c, s) = (phi.cos(), phi.sin());
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(ix, iy) in &cells {
            let t = ix as f64 * c + iy as f64 * s;
            lo = lo.min(t);
            hi = hi.max(t);
        }
        best = best.min((hi - lo) * h);
    }
    Ok(best + h * 2f64.sqrt())
}

/// Largest distance from an inside cell center to the nearest outside cell
/// center (exact Euclidean distance transform; cells beyond the raster count
/// as outside).
pub fn inradius(domain: &GridDomain) -> Result<f64> {
    if domain.is_empty() {
        return Err(LabError::DegenerateDomain("inradius of an empty domain".into()));
    }
    let dist2 = squared_distance_to_outside(domain);
    let max = dist2
        .iter()
        .zip(domain.mask())
        .filter(|(_, &m)| m)
        .map(|(&d, _)| d)
        .fold(0.0, f64::max);
    Ok(max.sqrt() * domain.spacing())
}

/// Squared distance (in cell units) of every cell to the nearest outside cell.
pub fn squared_distance_to_outside(domain: &GridDomain) -> Vec<f64> {
    const FAR: f64 = 1e30;
    let (nx, ny) = (domain.nx(), domain.ny());
    let two_d = domain.dim() == 2;
    let (px, py) = (nx + 2, if two_d { ny + 2 } else { 1 });
    let off = if two_d { 1 } else { 0 };
    let mut grid = vec![0.0; px * py];
    for iy in 0..ny {
        for ix in 0..nx {
            if domain.mask()[iy * nx + ix] {
                grid[(iy + off) * px + ix + 1] = FAR;
            }
        }
    }
    let mut line = vec![0.0; px.max(py)];
    let mut out = vec![0.0; px.max(py)];
    for iy in 0..py {
        line[..px].copy_from_slice(&grid[iy * px..(iy + 1) * px]);
        edt_1d(&line[..px], &mut out[..px]);
        grid[iy * px..(iy + 1) * px].copy_from_slice(&out[..px]);
    }
    if two_d {
        for ix in 0..px {
            for iy in 0..py {
                line[iy] = grid[iy * px + ix];
            }
            edt_1d(&line[..py], &mut out[..py]);
            for iy in 0..py {
                grid[iy * px + ix] = out[iy];
            }
        }
    }
    let mut result = vec![0.0; nx * ny];
    for iy in 0..ny {
        for ix in 0..nx {
            result[iy * nx + ix] = grid[(iy + off) * px + ix + 1];
        }
    }
    result
}

/// Lower envelope of parabolas: `out[p] = min_q (p - q)^2 + f[q]`, where
/// entries `>= 1e29` are treated as absent sites.
fn edt_1d(f: &[f64], out: &mut [f64]) {
    let sites: Vec<usize> = (0..f.len()).filter(|&q| f[q] < 1e29).collect();
    if sites.is_empty() {
        out.fill(1e30);
        return;
    }
    let mut v: Vec<usize> = Vec::with_capacity(sites.len());
    let mut z: Vec<f64> = Vec::with_capacity(sites.len() + 1);
    let meet = |p: usize, q: usize| {
        ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64))
    };
    for &q in &sites {
        let mut s = f64::NEG_INFINITY;
        while let Some(&p) = v.last() {
            s = meet(p, q);
            if s <= *z.last().unwrap() {
                v.pop();
                z.pop();
                s = f64::NEG_INFINITY;
            } else {
                break;
            }
        }
        v.push(q);
        z.push(s);
    }
    let mut k = 0;
    for (p, o) in out.iter_mut().enumerate() {
        while k + 1 < v.len() && z[k + 1] < p as f64 {
            k += 1;
        }
        let d = p as f64 - v[k] as f64;
        *o = d * d + f[v[k]];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_shape, Shape};

    #[test]
    fn edt_matches_brute_force() {
        let mask: Vec<bool> = (0..15 * 11).map(|i| (i * 7919 % 13) != 0).collect();
        let d = GridDomain::new(2, 1.0, [0.0, 0.0], 15, 11, mask).unwrap();
        let fast = squared_distance_to_outside(&d);
        for iy in 0..11isize {
            for ix in 0..15isize {
                let mut best = f64::INFINITY;
                for jy in -1..12isize {
                    for jx in -1..16isize {
                        if !d.contains(jx, jy) {
                            best = best.min(((ix - jx).pow(2) + (iy - jy).pow(2)) as f64);
                        }
                    }
                }
                assert_eq!(fast[iy as usize * 15 + ix as usize], best, "cell ({ix},{iy})");
            }
        }
    }

    #[test]
    fn thin_rectangle_width_and_inradius() {
        let h = 1.0 / 64.0;
        let d = make_shape(&Shape::Rectangle { width: 1.0, height: 0.25 }, h).unwrap();
        assert!((width(&d, 64).unwrap() - 0.25).abs() <= h * 2f64.sqrt());
        assert!((inradius(&d).unwrap() - 0.125).abs() <= 2.0 * h);
    }

    #[test]
    fn interval_quantities() {
        let h = 1.0 / 100.0;
        let d = make_shape(&Shape::Interval { length: 1.0 }, h).unwrap();
        assert!((measure(&d) - 1.0).abs() < 1e-12);
        assert!((width(&d, 4).unwrap() - 1.0).abs() < 1e-12);
        assert!((inradius(&d).unwrap() - 0.5).abs() <= 2.0 * h);
    }
}
