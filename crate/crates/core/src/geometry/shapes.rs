//! Test-domain factory: a cell is inside iff its center lies in the ideal shape.

use super::GridDomain;
use crate::error::{LabError, Result};
use serde::{Deserialize, Serialize};

/// A disk of radius `r` centered at `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

/// Ideal shapes. Rectangles and squares sit in the positive quadrant with a
/// corner at the origin; disks and annuli are centered at the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Shape {
    Interval { length: f64 },
    Rectangle { width: f64, height: f64 },
    Disk { radius: f64 },
    Annulus { inner: f64, outer: f64 },
    /// Square of side `side` with its upper-right quarter removed.
    LShape { side: f64 },
    DiskUnion { disks: Vec<Circle> },
    /// Square with a `holes x holes` array of circular holes of radius `hole_radius`.
    PerforatedSquare { side: f64, holes: usize, hole_radius: f64 },
}

impl Shape {
    pub fn dim(&self) -> usize {
        match self {
            Shape::Interval { .. } => 1,
            _ => 2,
        }
    }

    /// Exact measure of the ideal shape (overlaps in unions are not removed).
    pub fn ideal_measure(&self) -> f64 {
        use std::f64::consts::PI;
        match self {
            Shape::Interval { length } => *length,
            Shape::Rectangle { width, height } => width * height,
            Shape::Disk { radius } => PI * radius * radius,
            Shape::Annulus { inner, outer } => PI * (outer * outer - inner * inner),
            Shape::LShape { side } => 0.75 * side * side,
            Shape::DiskUnion { disks } => disks.iter().map(|c| PI * c.r * c.r).sum(),
            Shape::PerforatedSquare { side, holes, hole_radius } => {
                side * side - (holes * holes) as f64 * PI * hole_radius * hole_radius
            }
        }
    }

    fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        match self {
            Shape::Interval { length } => ([0.0, 0.0], [*length, 0.0]),
            Shape::Rectangle { width, height } => ([0.0, 0.0], [*width, *height]),
            Shape::Disk { radius } => ([-radius, -radius], [*radius, *radius]),
            Shape::Annulus { outer, .. } => ([-outer, -outer], [*outer, *outer]),
            Shape::LShape { side } | Shape::PerforatedSquare { side, .. } => ([0.0, 0.0], [*side, *side]),
            Shape::DiskUnion { disks } => {
                let mut lo = [f64::INFINITY; 2];
                let mut hi = [f64::NEG_INFINITY; 2];
                for c in disks {
                    lo = [lo[0].min(c.x - c.r), lo[1].min(c.y - c.r)];
                    hi = [hi[0].max(c.x + c.r), hi[1].max(c.y + c.r)];
                }
                (lo, hi)
            }
        }
    }

    fn contains(&self, p: [f64; 2]) -> bool {
        let [x, y] = p;
        match self {
            Shape::Interval { length } => x > 0.0 && x < *length,
            Shape::Rectangle { width, height } => x > 0.0 && x < *width && y > 0.0 && y < *height,
            Shape::Disk { radius } => x * x + y * y < radius * radius,
            Shape::Annulus { inner, outer } => {
                let r2 = x * x + y * y;
                r2 > inner * inner && r2 < outer * outer
            }
            Shape::LShape { side } => {
                let s = *side;
                x > 0.0 && x < s && y > 0.0 && y < s && !(x >= s / 2.0 && y >= s / 2.0)
            }
            Shape::DiskUnion { disks } => disks
                .iter()
                .any(|c| (x - c.x).powi(2) + (y - c.y).powi(2) < c.r * c.r),
            Shape::PerforatedSquare { side, holes, hole_radius } => {
                let s = *side;
                if !(x > 0.0 && x < s && y > 0.0 && y < s) {
                    return false;
                }
                let pitch = s / *holes as f64;
                let cx = ((x / pitch).floor() + 0.5) * pitch;
                let cy = ((y / pitch).floor() + 0.5) * pitch;
                (x - cx).powi(2) + (y - cy).powi(2) >= hole_radius * hole_radius
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            Shape::Interval { length } => *length > 0.0,
            Shape::Rectangle { width, height } => *width > 0.0 && *height > 0.0,
            Shape::Disk { radius } => *radius > 0.0,
            Shape::Annulus { inner, outer } => *inner >= 0.0 && outer > inner,
            Shape::LShape { side } => *side > 0.0,
            Shape::DiskUnion { disks } => !disks.is_empty() && disks.iter().all(|c| c.r > 0.0),
            Shape::PerforatedSquare { side, holes, hole_radius } => {
                *side > 0.0 && *holes > 0 && *hole_radius >= 0.0 && 2.0 * hole_radius < side / *holes as f64
            }
        };
        if ok {
            Ok(())
        } else {
            Err(LabError::InvalidInput(format!("nonpositive or inconsistent dimensions in {self:?}")))
        }
    }
}

/// Rasterizes `shape` at spacing `h`.
pub fn make_shape(shape: &Shape, h: f64) -> Result<GridDomain> {
    shape.validate()?;
    if !(h > 0.0) {
        return Err(LabError::InvalidInput(format!("spacing {h} must be positive")));
    }
    let (lo, hi) = shape.bounding_box();
    let cells = |a: f64, b: f64| (((b - a) / h) - 1e-9).ceil().max(1.0) as usize;
    let dim = shape.dim();
    let nx = cells(lo[0], hi[0]);
    let ny = if dim == 2 { cells(lo[1], hi[1]) } else { 1 };
    let origin = [lo[0] + 0.5 * h, if dim == 2 { lo[1] + 0.5 * h } else { 0.0 }];
    let mut mask = vec![false; nx * ny];
    for iy in 0..ny {
        for ix in 0..nx {
            let p = [origin[0] + ix as f64 * h, origin[1] + iy as f64 * h];
            mask[iy * nx + ix] = shape.contains(p);
        }
    }
    let domain = GridDomain::new(dim, h, origin, nx, ny, mask)?;
    if domain.is_empty() {
        return Err(LabError::DegenerateDomain(format!("no cell center of {shape:?} at h = {h}")));
    }
    Ok(domain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_counts() {
        let d = make_shape(&Shape::Rectangle { width: 1.0, height: 1.0 }, 1.0 / 64.0).unwrap();
        assert_eq!(d.active_count(), 4096);
    }

    #[test]
    fn lshape_removes_a_quarter() {
        let d = make_shape(&Shape::LShape { side: 1.0 }, 1.0 / 32.0).unwrap();
        assert_eq!(d.active_count(), 3 * 256);
    }

    #[test]
    fn tiny_shape_is_degenerate() {
        let e = make_shape(&Shape::Disk { radius: 0.01 }, 0.5).unwrap_err();
        assert!(matches!(e, LabError::DegenerateDomain(_)));
    }

    #[test]
    fn perforated_square_has_holes() {
        let s = Shape::PerforatedSquare { side: 1.0, holes: 2, hole_radius: 0.1 };
        let d = make_shape(&s, 1.0 / 128.0).unwrap();
        let area = d.active_count() as f64 * d.cell_volume();
        assert!((area - s.ideal_measure()).abs() < 8.0 / 128.0);
        assert!(area < 1.0 - 0.1);
    }
}
