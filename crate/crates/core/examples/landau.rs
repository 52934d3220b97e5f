//! Constant magnetic field: Peierls spectra approach the Landau levels
//! B(2k-1) on a large square, the level kernels reproduce B/2π on the
//! diagonal, and magnetic Riesz means sit on either side of |Ω| G^B.
//!
//!     cargo run --release --example landau

use riesz_lab::geometry::{make_shape, Shape};
use riesz_lab::lab::bound_series;
use riesz_lab::operators::{
    eigensolve, landau_hamiltonian, landau_levels, BoundaryCondition, EigenOptions, EigenRequest, LandauParams,
};
use riesz_lab::semiclassics::DomainGeometry;
use riesz_lab::uncertainty::LandauKernel;
use std::f64::consts::PI;

fn main() -> riesz_lab::Result<()> {
    let (b, h) = (4.0, 1.0 / 16.0);
    let big = make_shape(&Shape::Rectangle { width: 4.0, height: 4.0 }, h)?;
    let p = LandauParams::new(b)?.with_gauge_origin([2.0, 2.0]);
    let op = landau_hamiltonian(&big, p, BoundaryCondition::Dirichlet)?;
    let s = eigensolve(&op, EigenRequest::Lowest(12), &EigenOptions::values_only())?;
    println!("levels below 16: {:?}", landau_levels(b, 16.0));
    println!("Dirichlet eigenvalues on [0,4]^2, B = {b}:");
    for l in &s.eigenvalues {
        print!(" {l:.3}");
    }
    println!();

    for k in 1..=3 {
        let kernel = LandauKernel::new(&p, k)?;
        let x = [1.0, 1.5];
        let diag = kernel.eval(x, x);
        let off = kernel.eval(x, [1.4, 1.2]);
        println!(
            "k = {k}: K(x,x) = {:.5} (B/2π = {:.5}), |K(x,y)| = {:.5}, truncation radius {:.3}",
            diag.re,
            b / (2.0 * PI),
            off.norm(),
            kernel.truncation_radius()
        );
    }

    let hm = 1.0 / 32.0;
    let sq = make_shape(&Shape::Rectangle { width: 1.0, height: 1.0 }, hm)?;
    let geom = DomainGeometry::compute("square", &sq, 0.25, hm)?;
    let lambdas = [20.0, 35.0, 50.0];
    println!("\nunit square, h = 1/32: Riesz mean / |Ω| G^B (gamma = 1)");
    for field in [2.0, 10.0] {
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
            let s = bound_series(&geom, &sq, bc, field, &[1.0], &lambdas, false, false)?;
            let ratios: Vec<String> = s.reports.iter().map(|r| format!("{:.4}", r.ratio)).collect();
            println!("  B = {field:4} {bc:<10} {}", ratios.join("  "));
        }
    }
    Ok(())
}
