use riesz_lab::geometry::{make_shape, Shape};
use riesz_lab::operators::{
    count_below, eigensolve, landau_hamiltonian, laplacian, torus_laplacian, torus_modes, worst_residual,
    BoundaryCondition, Completeness, Dispersion, EigenOptions, EigenRequest, LandauParams, Spectrum,
};
use riesz_lab::LabError;
use std::f64::consts::PI;

fn sin2(x: f64) -> f64 {
    x.sin().powi(2)
}

/// Tensor-product eigenvalues `(4/h^2)(s(m) + s(k))`.
fn tensor(h: f64, modes: impl Iterator<Item = usize> + Clone, s: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut v = Vec::new();
    for m in modes.clone() {
        for k in modes.clone() {
            v.push(4.0 / (h * h) * (s(m) + s(k)));
        }
    }
    v.sort_by(f64::total_cmp);
    v
}

fn assert_close(a: &[f64], b: &[f64], rel: f64) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert!((x - y).abs() <= rel * y.abs().max(1.0), "{x} vs {y}");
    }
}

#[test]
fn square_spectra_in_closed_form() {
    let n = 12;
    let h = 1.0 / n as f64;
    let d = make_shape(&Shape::Rectangle { width: 1.0, height: 1.0 }, h).unwrap();
    let all = |bc| eigensolve(&laplacian(&d, bc).unwrap(), EigenRequest::All, &EigenOptions::values_only()).unwrap();
    let nf = n as f64;
    // face Dirichlet: antisymmetric ghosts across the boundary faces
    let dir = tensor(h, 1..=n, |m| sin2(PI * m as f64 / (2.0 * nf)));
    assert_close(&all(BoundaryCondition::Dirichlet).eigenvalues, &dir, 1e-10);
    // compressed torus operator: a vertex-type grid of n interior nodes
    let cmp = tensor(h, 1..=n, |m| sin2(PI * m as f64 / (2.0 * (nf + 1.0))));
    assert_close(&all(BoundaryCondition::DirichletCompressed).eigenvalues, &cmp, 1e-10);
    let neu = tensor(h, 0..n, |m| sin2(PI * m as f64 / (2.0 * nf)));
    assert_close(&all(BoundaryCondition::Neumann).eigenvalues, &neu, 1e-10);
}

#[test]
fn bracketing_on_a_disk() {
    let h = 1.0 / 24.0;
    let d = make_shape(&Shape::Disk { radius: 0.5 }, h).unwrap();
    let opts = EigenOptions::values_only();
    let dir = eigensolve(&laplacian(&d, BoundaryCondition::Dirichlet).unwrap(), EigenRequest::Lowest(20), &opts).unwrap();
    let neu = eigensolve(&laplacian(&d, BoundaryCondition::Neumann).unwrap(), EigenRequest::Lowest(20), &opts).unwrap();
    assert!(neu.eigenvalues[0].abs() < 1e-10);
    for (n, dd) in neu.eigenvalues.iter().zip(&dir.eigenvalues) {
        assert!(n <= dd);
    }
    // j_{0,1}^2 / R^2 for the continuum disk
    let first = 2.404825557695773f64.powi(2) / 0.25;
    assert!((dir.eigenvalues[0] - first).abs() / first < 0.05, "{}", dir.eigenvalues[0]);
}

#[test]
fn iterative_agrees_with_dense() {
    let h = 1.0 / 48.0;
    let d = make_shape(&Shape::LShape { side: 1.0 }, h).unwrap();
    let op = laplacian(&d, BoundaryCondition::Dirichlet).unwrap();
    assert!(op.n() > 1024);
    let cutoff = 250.0;
    let lanczos = eigensolve(&op, EigenRequest::Below(cutoff), &EigenOptions::default()).unwrap();
    let dense = eigensolve(&op, EigenRequest::All, &EigenOptions::values_only()).unwrap();
    let reference: Vec<f64> = dense.eigenvalues.iter().copied().filter(|&l| l < cutoff).collect();
    assert_close(&lanczos.eigenvalues, &reference, 1e-8);
    assert_eq!(count_below(op.matrix(), cutoff).unwrap(), reference.len());
    let vecs = lanczos.vectors().unwrap();
    assert!(worst_residual(op.matrix(), &lanczos.eigenvalues, vecs) < 1e-7);
    assert!(lanczos.gram_defect().unwrap() < 1e-8);
    assert_eq!(lanczos.completeness, Completeness::Below(cutoff));
}

#[test]
fn torus_matches_its_modes() {
    let (n, h) = (8, 0.125);
    let op = torus_laplacian(2, n, n, h).unwrap();
    let s = eigensolve(&op, EigenRequest::All, &EigenOptions::values_only()).unwrap();
    let mut modes: Vec<f64> = torus_modes([n, n], h, Dispersion::Discrete).iter().map(|m| m.eigenvalue).collect();
    modes.sort_by(f64::total_cmp);
    assert_close(&s.eigenvalues, &modes, 1e-10);
}

#[test]
fn magnetic_spectrum_is_gauge_invariant() {
    let h = 1.0 / 16.0;
    let d = make_shape(&Shape::Disk { radius: 0.5 }, h).unwrap();
    let opts = EigenOptions::values_only();
    let spec = |a: [f64; 2], bc| {
        let p = LandauParams::new(7.0).unwrap().with_gauge_origin(a);
        let op = landau_hamiltonian(&d, p, bc).unwrap();
        assert!(op.matrix().hermitian_defect() < 1e-12);
        eigensolve(&op, EigenRequest::All, &opts).unwrap().eigenvalues
    };
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        let a = spec([0.0, 0.0], bc);
        let b = spec([0.3, -1.2], bc);
        assert_close(&a, &b, 1e-9);
    }
    // diamagnetic inequality: the field raises the ground state
    let free = eigensolve(&laplacian(&d, BoundaryCondition::Neumann).unwrap(), EigenRequest::Lowest(1), &opts).unwrap();
    assert!(spec([0.0, 0.0], BoundaryCondition::Neumann)[0] > free.eigenvalues[0] + 1e-6);
}

#[test]
fn peierls_phase_is_the_line_integral() {
    let p = LandauParams::new(3.0).unwrap().with_gauge_origin([0.5, -0.25]);
    let (x, y) = ([0.1, 0.4], [0.35, 0.4]);
    let mid = [0.5 * (x[0] + y[0]), 0.5 * (x[1] + y[1])];
    // A is linear, so the midpoint rule is exact
    let a = p.vector_potential(mid);
    let expect = a[0] * (y[0] - x[0]) + a[1] * (y[1] - x[1]);
    assert!((p.line_integral(x, y) - expect).abs() < 1e-14);
}

#[test]
fn partial_spectra_refuse_larger_cutoffs() {
    let s = Spectrum::from_values(vec![3.0, 1.0, 2.0], Completeness::Below(2.5));
    assert_eq!(s.eigenvalues, vec![1.0, 2.0, 3.0]);
    assert!(matches!(s.require_complete_below(3.0), Err(LabError::IncompleteSpectrum { .. })));
    assert!(s.require_complete_below(2.5).is_ok());
    assert!(matches!(s.vectors(), Err(LabError::MissingEigenvectors)));
}
