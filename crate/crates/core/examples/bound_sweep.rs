//! Riesz means against the semiclassical main term on an L-shaped domain:
//! Dirichlet ratios stay below one, Neumann ratios above, and the gaps are
//! fitted to `c exp(-c' rho_theta sqrt(Lambda))`.
//!
//!     cargo run --release --example bound_sweep

use riesz_lab::geometry::{make_shape, Shape};
use riesz_lab::lab::bound_series;
use riesz_lab::operators::{validity_cap, BoundaryCondition};
use riesz_lab::semiclassics::{fit_improvement_constants, DomainGeometry};

fn main() -> riesz_lab::Result<()> {
    let h = 1.0 / 64.0;
    let d = make_shape(&Shape::LShape { side: 1.0 }, h)?;
    let geom = DomainGeometry::compute("l-shape", &d, 0.25, h)?;
    println!("|Ω| = {:.4}, rho_theta = {:.4}", geom.measure, geom.rho_theta);
    let cap = validity_cap(h);
    let lambdas: Vec<f64> = (0..8).map(|i| 30.0 + (cap - 30.0) * i as f64 / 7.0).collect();
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        let s = bound_series(&geom, &d, bc, 0.0, &[1.0, 2.0], &lambdas, false, false)?;
        println!("\n{bc}: {} eigenvalues below {}", s.spectrum.len(), lambdas[lambdas.len() - 1]);
        println!("{:>6} {:>8} {:>12} {:>12} {:>8} {:>8}", "gamma", "Lambda", "riesz", "main", "ratio", "E");
        for r in &s.reports {
            println!("{:>6} {:>8.1} {:>12.3} {:>12.3} {:>8.4} {:>8.3}", r.gamma, r.lambda, r.riesz, r.main, r.ratio, r.e_arg);
        }
        for g in [1.0, 2.0] {
            let rows: Vec<_> = s.reports.iter().filter(|r| r.gamma == g).cloned().collect();
            let fit = fit_improvement_constants(&rows)?;
            println!("gamma = {g}: gap ≈ {:.3} exp(-{:.3} E), max log-residual {:.3}", fit.c, fit.cprime, fit.residual);
        }
    }
    Ok(())
}
