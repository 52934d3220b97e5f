use super::sparse::SparseHermitian;
use crate::error::{LabError, Result};
use crate::geometry::GridDomain;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Boundary condition of a discrete realization.
///
/// * `Dirichlet` — ghost value `-u` across each missing face, so the
///   boundary sits on the cell faces of the counted domain; diagonal
///   `(2d + #missing neighbours)/h^2`. Second-order accurate.
/// * `DirichletCompressed` — missing neighbours are plain zeros; diagonal
///   `2d/h^2` everywhere. This is exactly `J* L_torus J` for the zero
///   extension `J`, which makes finite trace identities exact.
/// * `Neumann` — graph Laplacian, diagonal `#neighbours/h^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryCondition {
    Dirichlet,
    DirichletCompressed,
    Neumann,
}

impl BoundaryCondition {
    pub fn is_dirichlet(self) -> bool {
        !matches!(self, BoundaryCondition::Neumann)
    }

    fn diagonal(self, dim: usize, neighbours: usize) -> f64 {
        let full = 2 * dim;
        match self {
            BoundaryCondition::Dirichlet => (2 * full - neighbours) as f64,
            BoundaryCondition::DirichletCompressed => full as f64,
            BoundaryCondition::Neumann => neighbours as f64,
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::DirichletCompressed => "dirichlet-compressed",
            BoundaryCondition::Neumann => "neumann",
        })
    }
}

impl std::str::FromStr for BoundaryCondition {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" | "D" => Ok(Self::Dirichlet),
            "dirichlet-compressed" => Ok(Self::DirichletCompressed),
            "neumann" | "N" => Ok(Self::Neumann),
            _ => Err(LabError::Config(format!("unknown boundary condition {s:?}"))),
        }
    }
}

/// Constant field `B` in the symmetric gauge `A(x) = (B/2)(x2 - a2, -(x1 - a1))`
/// about the gauge origin `a` (the origin by default).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandauParams {
    pub b: f64,
    #[serde(default)]
    pub gauge_origin: [f64; 2],
}

impl LandauParams {
    pub fn new(b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(LabError::InvalidInput(format!("field strength B = {b} must be positive")));
        }
        Ok(Self { b, gauge_origin: [0.0, 0.0] })
    }

    pub fn with_gauge_origin(mut self, a: [f64; 2]) -> Self {
        self.gauge_origin = a;
        self
    }

    pub fn vector_potential(&self, x: [f64; 2]) -> [f64; 2] {
        let [a1, a2] = self.gauge_origin;
        [0.5 * self.b * (x[1] - a2), -0.5 * self.b * (x[0] - a1)]
    }

    /// `∫_x^y A·dl` along the straight segment (exact: `A` is affine).
    pub fn line_integral(&self, x: [f64; 2], y: [f64; 2]) -> f64 {
        let mid = [0.5 * (x[0] + y[0]), 0.5 * (x[1] + y[1])];
        let a = self.vector_potential(mid);
        a[0] * (y[0] - x[0]) + a[1] * (y[1] - x[1])
    }

    /// Landau levels `B(2k-1) < cutoff`, see [`landau_levels`].
    pub fn levels_below(&self, cutoff: f64) -> Vec<(usize, f64)> {
        landau_levels(self.b, cutoff)
    }
}

/// All pairs `(k, B(2k-1))` with `B(2k-1) < cutoff`, `k = 1, 2, ...`.
pub fn landau_levels(b: f64, cutoff: f64) -> Vec<(usize, f64)> {
    assert!(b > 0.0, "field strength must be positive");
    (1..).map(|k| (k, b * (2 * k - 1) as f64)).take_while(|&(_, e)| e < cutoff).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum OperatorKind {
    Laplacian,
    Landau(LandauParams),
    /// Periodic Laplacian on a full box.
    Torus,
}

/// Hermitian grid operator on the inside cells of a domain.
#[derive(Clone, Debug)]
pub struct DiscreteOperator {
    matrix: SparseHermitian,
    cells: Vec<(usize, usize)>,
    index: Vec<Option<usize>>,
    bc: BoundaryCondition,
    kind: OperatorKind,
    domain: GridDomain,
}

impl DiscreteOperator {
    pub fn n(&self) -> usize {
        self.cells.len()
    }
    pub fn matrix(&self) -> &SparseHermitian {
        &self.matrix
    }
    pub fn boundary_condition(&self) -> BoundaryCondition {
        self.bc
    }
    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }
    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }
    pub fn spacing(&self) -> f64 {
        self.domain.spacing()
    }
    pub fn dim(&self) -> usize {
        self.domain.dim()
    }
    /// Grid coordinates of unknown `i`.
    pub fn cell(&self, i: usize) -> (usize, usize) {
        self.cells[i]
    }
    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }
    /// Unknown attached to grid cell `(ix, iy)`, if inside.
    pub fn index_of(&self, ix: usize, iy: usize) -> Option<usize> {
        self.index[self.domain.index(ix, iy)]
    }
    pub fn field(&self) -> f64 {
        match self.kind {
            OperatorKind::Landau(p) => p.b,
            _ => 0.0,
        }
    }
    pub fn is_real(&self) -> bool {
        self.matrix.is_real()
    }

    /// Scatters an unknown-indexed vector onto the raster (zero outside).
    pub fn to_raster(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); self.domain.nx() * self.domain.ny()];
        for (i, &(ix, iy)) in self.cells.iter().enumerate() {
            out[self.domain.index(ix, iy)] = v[i];
        }
        out
    }
}

/// Numbering of the inside cells that keeps the matrix bandwidth at about
/// the shorter raster side.
fn number_cells(domain: &GridDomain) -> (Vec<(usize, usize)>, Vec<Option<usize>>) {
    let (nx, ny) = (domain.nx(), domain.ny());
    let mut cells = Vec::with_capacity(domain.active_count());
    let mut index = vec![None; nx * ny];
    let mut visit = |ix: usize, iy: usize| {
        if domain.mask()[iy * nx + ix] {
            index[iy * nx + ix] = Some(cells.len());
            cells.push((ix, iy));
        }
    };
    if nx <= ny {
        for iy in 0..ny {
            for ix in 0..nx {
                visit(ix, iy);
            }
        }
    } else {
        for ix in 0..nx {
            for iy in 0..ny {
                visit(ix, iy);
            }
        }
    }
    (cells, index)
}

fn neighbour_offsets(dim: usize) -> &'static [(isize, isize)] {
    if dim == 1 {
        &[(1, 0), (-1, 0)]
    } else {
        &[(1, 0), (-1, 0), (0, 1), (0, -1)]
    }
}

fn assemble(
    domain: &GridDomain,
    bc: BoundaryCondition,
    kind: OperatorKind,
    hop: impl Fn([f64; 2], [f64; 2]) -> Complex64,
) -> Result<DiscreteOperator> {
    if domain.is_empty() {
        return Err(LabError::DegenerateDomain("operator on an empty domain".into()));
    }
    let (cells, index) = number_cells(domain);
    let h2 = domain.spacing().powi(2);
    let dim = domain.dim();
    let mut trip = Vec::with_capacity(cells.len() * (2 * dim + 1));
    for (i, &(ix, iy)) in cells.iter().enumerate() {
        let x = domain.cell_center(ix, iy);
        let mut neighbours = 0;
        for &(dx, dy) in neighbour_offsets(dim) {
            let (jx, jy) = (ix as isize + dx, iy as isize + dy);
            if domain.contains(jx, jy) {
                neighbours += 1;
                let j = index[domain.index(jx as usize, jy as usize)].unwrap();
                let y = domain.cell_center(jx as usize, jy as usize);
                // row = target y, column = source x
                trip.push((j, i, -hop(x, y) / h2));
            }
        }
        trip.push((i, i, Complex64::new(bc.diagonal(dim, neighbours) / h2, 0.0)));
    }
    let matrix = SparseHermitian::from_triplets(cells.len(), trip);
    Ok(DiscreteOperator { matrix, cells, index, bc, kind, domain: domain.clone() })
}

/// Finite-difference Laplacian (3-point in 1-D, 5-point in 2-D).
pub fn laplacian(domain: &GridDomain, bc: BoundaryCondition) -> Result<DiscreteOperator> {
    assemble(domain, bc, OperatorKind::Laplacian, |_, _| Complex64::new(1.0, 0.0))
}

/// Peierls-substituted Laplacian for the constant field of `params`:
/// hopping `x -> y` carries `exp(-i ∫_x^y A·dl)`.
pub fn landau_hamiltonian(
    domain: &GridDomain,
    params: LandauParams,
    bc: BoundaryCondition,
) -> Result<DiscreteOperator> {
    if domain.dim() != 2 {
        return Err(LabError::InvalidInput("the Landau Hamiltonian needs a two-dimensional domain".into()));
    }
    let flux = params.b * domain.spacing().powi(2);
    if flux >= 1.0 {
        log::warn!("flux per plaquette B h^2 = {flux} is not small; Peierls phases alias");
    }
    assemble(domain, bc, OperatorKind::Landau(params), |x, y| {
        Complex64::from_polar(1.0, -params.line_integral(x, y))
    })
}

/// Periodic Laplacian on an `nx x ny` box (`ny = 1` in 1-D).
pub fn torus_laplacian(dim: usize, nx: usize, ny: usize, h: f64) -> Result<DiscreteOperator> {
    let domain = GridDomain::full_box(dim, h, [0.0, 0.0], nx, ny)?;
    let (cells, index) = number_cells(&domain);
    let h2 = h * h;
    let mut trip = Vec::new();
    for (i, &(ix, iy)) in cells.iter().enumerate() {
        for &(dx, dy) in neighbour_offsets(dim) {
            let jx = (ix as isize + dx).rem_euclid(nx as isize) as usize;
            let jy = (iy as isize + dy).rem_euclid(ny as isize) as usize;
            let j = index[domain.index(jx, jy)].unwrap();
            trip.push((j, i, Complex64::new(-1.0 / h2, 0.0)));
        }
        trip.push((i, i, Complex64::new(2.0 * dim as f64 / h2, 0.0)));
    }
    let matrix = SparseHermitian::from_triplets(cells.len(), trip);
    Ok(DiscreteOperator {
        matrix,
        cells,
        index,
        bc: BoundaryCondition::DirichletCompressed,
        kind: OperatorKind::Torus,
        domain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_shape, Shape};

    #[test]
    fn levels_are_strictly_below() {
        assert_eq!(landau_levels(1.0, 4.0), vec![(1, 1.0), (2, 3.0)]);
        assert!(landau_levels(2.0, 2.0).is_empty());
        let l: Vec<f64> = landau_levels(1.0, 10.0).into_iter().map(|x| x.1).collect();
        assert_eq!(l, vec![1.0, 3.0, 5.0, 7.0, 9.0]);
    }

    #[test]
    fn stencils() {
        let d = make_shape(&Shape::Interval { length: 3.0 }, 1.0).unwrap();
        let face = laplacian(&d, BoundaryCondition::Dirichlet).unwrap();
        assert_eq!(face.matrix().diagonal(), vec![3.0, 2.0, 3.0]);
        let comp = laplacian(&d, BoundaryCondition::DirichletCompressed).unwrap();
        assert_eq!(comp.matrix().diagonal(), vec![2.0, 2.0, 2.0]);
        let neu = laplacian(&d, BoundaryCondition::Neumann).unwrap();
        assert_eq!(neu.matrix().diagonal(), vec![1.0, 2.0, 1.0]);
        assert_eq!(neu.matrix().get(0, 1).re, -1.0);
    }

    #[test]
    fn landau_is_hermitian_with_unit_phases() {
        let d = make_shape(&Shape::Disk { radius: 0.5 }, 1.0 / 16.0).unwrap();
        let op = landau_hamiltonian(&d, LandauParams::new(3.0).unwrap(), BoundaryCondition::Neumann).unwrap();
        assert!(op.matrix().hermitian_defect() < 1e-14);
        assert!(!op.is_real());
        let h2 = d.spacing().powi(2);
        for i in 0..op.n() {
            for (j, v) in op.matrix().row(i) {
                if i != j {
                    assert!((v.norm() * h2 - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bandwidth_tracks_short_side() {
        let d = make_shape(&Shape::Rectangle { width: 2.0, height: 0.25 }, 1.0 / 32.0).unwrap();
        let op = laplacian(&d, BoundaryCondition::Dirichlet).unwrap();
        assert_eq!(op.matrix().bandwidth(), 8);
    }

    #[test]
    fn landau_rejects_one_dimension() {
        let d = make_shape(&Shape::Interval { length: 1.0 }, 0.1).unwrap();
        assert!(landau_hamiltonian(&d, LandauParams::new(1.0).unwrap(), BoundaryCondition::Dirichlet).is_err());
    }
}
