use crate::error::{LabError, Result};
use sha2::{Digest, Sha256};
use std::path::Path;

/// Rasterized indicator of an open set in one or two dimensions.
///
/// Cell `(ix, iy)` has its center at `origin + h * (ix, iy)`; the mask is
/// stored row-major with `iy` the slow index. One-dimensional domains have
/// `ny == 1` and ignore the second coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct GridDomain {
    dim: usize,
    h: f64,
    origin: [f64; 2],
    nx: usize,
    ny: usize,
    mask: Vec<bool>,
}

impl GridDomain {
    pub fn new(dim: usize, h: f64, origin: [f64; 2], nx: usize, ny: usize, mask: Vec<bool>) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(LabError::InvalidInput(format!("dimension {dim} not in {{1, 2}}")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(LabError::InvalidInput(format!("spacing {h} must be positive")));
        }
        if dim == 1 && ny != 1 {
            return Err(LabError::InvalidInput("one-dimensional domains have ny = 1".into()));
        }
        if nx == 0 || ny == 0 || mask.len() != nx * ny {
            return Err(LabError::InvalidInput(format!(
                "mask length {} does not match {nx} x {ny}",
                mask.len()
            )));
        }
        Ok(Self { dim, h, origin, nx, ny, mask })
    }

    /// Box of `nx x ny` cells, all inside.
    pub fn full_box(dim: usize, h: f64, origin: [f64; 2], nx: usize, ny: usize) -> Result<Self> {
        Self::new(dim, h, origin, nx, ny, vec![true; nx * ny])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn spacing(&self) -> f64 {
        self.h
    }
    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Physical extents of the raster box.
    pub fn extents(&self) -> [f64; 2] {
        [self.nx as f64 * self.h, if self.dim == 2 { self.ny as f64 * self.h } else { 0.0 }]
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    /// Membership, with anything outside the raster counted as outside.
    pub fn contains(&self, ix: isize, iy: isize) -> bool {
        ix >= 0
            && iy >= 0
            && (ix as usize) < self.nx
            && (iy as usize) < self.ny
            && self.mask[iy as usize * self.nx + ix as usize]
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> [f64; 2] {
        let y = if self.dim == 2 { self.origin[1] + iy as f64 * self.h } else { 0.0 };
        [self.origin[0] + ix as f64 * self.h, y]
    }

    /// Grid coordinates of every inside cell, in row-major order.
    pub fn active_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.active_count());
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                if self.mask[iy * self.nx + ix] {
                    out.push((ix, iy));
                }
            }
        }
        out
    }

    pub fn active_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.active_count() == 0
    }

    /// Volume of one cell, `h^d`.
    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    pub fn translated(&self, shift: [f64; 2]) -> Self {
        let mut out = self.clone();
        out.origin[0] += shift[0];
        if self.dim == 2 {
            out.origin[1] += shift[1];
        }
        out
    }

    /// Same mask with spacing `s * h` (origin scaled about zero).
    pub fn rescaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.h *= s;
        out.origin = [self.origin[0] * s, self.origin[1] * s];
        out
    }

    /// Integer refinement of the mask at fixed `h`: every cell becomes
    /// `s^d` cells, so the represented set is dilated by `s` about the
    /// lower-left corner of the box.
    pub fn upscaled(&self, s: usize) -> Self {
        assert!(s >= 1);
        let sy = if self.dim == 2 { s } else { 1 };
        let (nx, ny) = (self.nx * s, self.ny * sy);
        let mut mask = vec![false; nx * ny];
        for iy in 0..ny {
            for ix in 0..nx {
                mask[iy * nx + ix] = self.mask[(iy / sy) * self.nx + ix / s];
            }
        }
        Self { dim: self.dim, h: self.h, origin: self.origin, nx, ny, mask }
    }

    /// The same set on a raster enlarged by `margin` empty cells on every side.
    pub fn embedded(&self, margin: usize) -> Self {
        let my = if self.dim == 2 { margin } else { 0 };
        let (nx, ny) = (self.nx + 2 * margin, self.ny + 2 * my);
        let mut mask = vec![false; nx * ny];
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                mask[(iy + my) * nx + ix + margin] = self.mask[iy * self.nx + ix];
            }
        }
        let origin = [
            self.origin[0] - margin as f64 * self.h,
            self.origin[1] - my as f64 * self.h,
        ];
        Self { dim: self.dim, h: self.h, origin, nx, ny, mask }
    }

    /// Complement of the set inside its raster box enlarged by `margin` cells.
    pub fn complement_in_box(&self, margin: usize) -> Self {
        let mut out = self.embedded(margin);
        for b in &mut out.mask {
            *b = !*b;
        }
        out
    }

    /// Connected-component label for every cell (nearest-neighbour
    /// adjacency); `None` outside. Labels are `0..count`.
    pub fn components(&self) -> (Vec<Option<usize>>, usize) {
        let mut label = vec![None; self.mask.len()];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.mask.len() {
            if !self.mask[start] || label[start].is_some() {
                continue;
            }
            label[start] = Some(count);
            stack.push(start);
            while let Some(c) = stack.pop() {
                let (ix, iy) = ((c % self.nx) as isize, (c / self.nx) as isize);
                for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    let (jx, jy) = (ix + dx, iy + dy);
                    if self.contains(jx, jy) {
                        let j = jy as usize * self.nx + jx as usize;
                        if label[j].is_none() {
                            label[j] = Some(count);
                            stack.push(j);
                        }
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Plain-text mask: header `d h nx [ny]`, then rows of `0`/`1` with
    /// the top row holding the largest y.
    pub fn to_mask_string(&self) -> String {
        let mut s = if self.dim == 1 {
            format!("1 {} {}\n", self.h, self.nx)
        } else {
            format!("2 {} {} {}\n", self.h, self.nx, self.ny)
        };
        for iy in (0..self.ny).rev() {
            for ix in 0..self.nx {
                s.push(if self.mask[iy * self.nx + ix] { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    /// Parses the mask format; cell `(0, 0)` gets its center at `(h/2, h/2)`.
    pub fn from_mask_str(text: &str) -> Result<Self> {
        let bad = |m: String| LabError::MaskFormat(m);
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty mask file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let dim: usize = fields
            .first()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| bad(format!("bad header {header:?}")))?;
        let want = if dim == 1 { 3 } else { 4 };
        if fields.len() != want || (dim != 1 && dim != 2) {
            return Err(bad(format!("bad header {header:?}")));
        }
        let h: f64 = fields[1].parse().map_err(|_| bad(format!("bad spacing {:?}", fields[1])))?;
        let nx: usize = fields[2].parse().map_err(|_| bad(format!("bad nx {:?}", fields[2])))?;
        let ny: usize = if dim == 2 {
            fields[3].parse().map_err(|_| bad(format!("bad ny {:?}", fields[3])))?
        } else {
            1
        };
        let rows: Vec<&str> = lines.collect();
        if rows.len() != ny {
            return Err(bad(format!("expected {ny} rows, found {}", rows.len())));
        }
        let mut mask = vec![false; nx * ny];
        for (r, row) in rows.iter().enumerate() {
            let iy = ny - 1 - r;
            if row.len() != nx {
                return Err(bad(format!("row {r} has {} characters, expected {nx}", row.len())));
            }
            for (ix, c) in row.bytes().enumerate() {
                mask[iy * nx + ix] = match c {
                    b'1' => true,
                    b'0' => false,
                    _ => return Err(bad(format!("unexpected character {:?} in row {r}", c as char))),
                };
            }
        }
        let origin = [h / 2.0, if dim == 2 { h / 2.0 } else { 0.0 }];
        Self::new(dim, h, origin, nx, ny, mask)
    }

    pub fn write_mask(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_mask_string())?;
        Ok(())
    }

    pub fn read_mask(path: &Path) -> Result<Self> {
        Self::from_mask_str(&std::fs::read_to_string(path)?)
    }

    /// SHA-256 of the mask text, hex encoded; identifies a domain in outputs.
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.to_mask_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GridDomain {
        let mask = vec![true, false, true, true, true, false];
        GridDomain::new(2, 0.25, [0.125, 0.125], 3, 2, mask).unwrap()
    }

    #[test]
    fn mask_text_roundtrip() {
        let d = sample();
        let text = d.to_mask_string();
        assert_eq!(text, "2 0.25 3 2\n110\n101\n");
        let back = GridDomain::from_mask_str(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_mask_string(), text);
    }

    #[test]
    fn rejects_malformed_masks() {
        assert!(GridDomain::from_mask_str("2 0.5 2 2\n11\n").is_err());
        assert!(GridDomain::from_mask_str("2 0.5 2 1\n1x\n").is_err());
        assert!(GridDomain::from_mask_str("3 0.5 1 1 1\n1\n").is_err());
        assert!(GridDomain::from_mask_str("1 0.5 3\n101\n").is_ok());
    }

    #[test]
    fn components_and_complement() {
        let d = sample();
        let (_, n) = d.components();
        assert_eq!(n, 2);
        let c = d.complement_in_box(1);
        assert_eq!(c.active_count(), 5 * 4 - 4);
        let split = GridDomain::new(1, 1.0, [0.0, 0.0], 5, 1, vec![true, true, false, true, false]).unwrap();
        assert_eq!(split.components().1, 2);
    }

    #[test]
    fn upscale_multiplies_counts() {
        let d = sample();
        assert_eq!(d.upscaled(3).active_count(), 9 * d.active_count());
    }
}
