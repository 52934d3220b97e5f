//! Dirichlet and Neumann spectra of the disk against the continuum values
//! `j^2 / R^2`, and Weyl's law on a finer grid via inertia counts.
//!
//!     cargo run --release --example spectra

use riesz_lab::geometry::{make_shape, Shape};
use riesz_lab::operators::{count_below, eigensolve, laplacian, BoundaryCondition, EigenOptions, EigenRequest};
use std::f64::consts::PI;

// first zeros of J_0, J_1, J_1, J_2, J_2 and of J_1', J_1', J_2', J_2'
const DIRICHLET: [f64; 5] = [2.404826, 3.831706, 3.831706, 5.135622, 5.135622];
const NEUMANN: [f64; 5] = [0.0, 1.841184, 1.841184, 3.054237, 3.054237];

fn main() -> riesz_lab::Result<()> {
    let r = 0.5;
    for h in [1.0 / 32.0, 1.0 / 64.0] {
        let d = make_shape(&Shape::Disk { radius: r }, h)?;
        println!("h = 1/{}  ({} cells)", (1.0 / h) as usize, d.active_count());
        for (bc, zeros) in [(BoundaryCondition::Dirichlet, DIRICHLET), (BoundaryCondition::Neumann, NEUMANN)] {
            let op = laplacian(&d, bc)?;
            let s = eigensolve(&op, EigenRequest::Lowest(5), &EigenOptions::values_only())?;
            let row: Vec<String> = s
                .eigenvalues
                .iter()
                .zip(zeros)
                .map(|(l, j)| format!("{l:8.3} ({:7.3})", (j / r).powi(2)))
                .collect();
            println!("  {bc:<10} {}", row.join(" "));
        }
    }

    let h = 1.0 / 128.0;
    let sq = make_shape(&Shape::Rectangle { width: 1.0, height: 1.0 }, h)?;
    let op = laplacian(&sq, BoundaryCondition::Dirichlet)?;
    println!("\nWeyl on the unit square, h = 1/128: N(Λ) vs |Ω|Λ/4π and with the boundary term -|∂Ω|√Λ/4π");
    for cutoff in [100.0, 400.0, 800.0] {
        let n = count_below(op.matrix(), cutoff)?;
        let one = cutoff / (4.0 * PI);
        let two = one - 4.0 * cutoff.sqrt() / (4.0 * PI);
        println!("  Λ = {cutoff:5}: N = {n:4}, one-term {one:7.2} (ratio {:.3}), two-term {two:7.2}", n as f64 / one);
    }
    Ok(())
}
