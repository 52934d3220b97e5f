//! Measure, inradius, width and the regularized inradius of a few shapes,
//! plus the complement-thickness certificate at `rho_theta`.
//!
//!     cargo run --example regularized_inradius

use riesz_lab::geometry::{
    complement_thickness, inradius, make_shape, measure, regularized_inradius_scan, width, Circle, Shape,
};

fn main() -> riesz_lab::Result<()> {
    let h = 1.0 / 64.0;
    let shapes = [
        ("square", Shape::Rectangle { width: 1.0, height: 1.0 }),
        ("strip 4 x 1/8", Shape::Rectangle { width: 4.0, height: 0.125 }),
        ("disk", Shape::Disk { radius: 0.5 }),
        ("annulus", Shape::Annulus { inner: 0.3, outer: 0.6 }),
        ("l-shape", Shape::LShape { side: 1.0 }),
        (
            "two disks",
            Shape::DiskUnion { disks: vec![Circle { x: -0.26, y: 0.0, r: 0.35 }, Circle { x: 0.26, y: 0.0, r: 0.35 }] },
        ),
        ("perforated", Shape::PerforatedSquare { side: 1.0, holes: 3, hole_radius: 0.08 }),
    ];
    println!("{:<14} {:>8} {:>8} {:>8} {:>10} {:>10} {:>8}", "shape", "|Ω|", "r_in", "width", "ρ(0.5)", "ρ(0.25)", "compl.");
    for (name, shape) in shapes {
        let d = make_shape(&shape, h)?;
        let half = regularized_inradius_scan(&d, 0.5, h)?;
        let quarter = regularized_inradius_scan(&d, 0.25, h)?;
        let cert = complement_thickness(&d, quarter.rho + 2.0 * h, 0.7)?;
        println!(
            "{name:<14} {:>8.4} {:>8.4} {:>8.4} {:>10.4} {:>10.4} {:>8.3}",
            measure(&d),
            inradius(&d)?,
            width(&d, 64)?,
            half.rho,
            quarter.rho,
            cert.worst_ratio
        );
    }
    // a long thin strip has a small regularized inradius although its area is not small
    Ok(())
}
