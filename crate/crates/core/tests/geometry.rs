use proptest::prelude::*;
use riesz_lab::geometry::{
    inradius, make_shape, measure, regularized_inradius, regularized_inradius_scan, width, GridDomain, Shape,
};
use riesz_lab::LabError;
use std::f64::consts::PI;

const THETA: f64 = 0.25;

/// When the ball realising the sup already swallows the whole domain,
/// `rho_theta = sqrt(|Omega| / (theta pi))`.
fn swallowing_radius(area: f64, theta: f64) -> f64 {
    (area / (theta * PI)).sqrt()
}

#[test]
fn disk_radius_doubles_at_quarter_density() {
    for (r, h) in [(1.0, 1.0 / 32.0), (0.5, 1.0 / 64.0)] {
        let d = make_shape(&Shape::Disk { radius: r }, h).unwrap();
        let rho = regularized_inradius(&d, THETA, h).unwrap();
        assert!((rho - 2.0 * r).abs() <= 3.0 * h, "R={r}: {rho}");
    }
}

#[test]
fn compact_shapes_match_the_swallowing_radius() {
    let h = 1.0 / 64.0;
    for shape in [
        Shape::Rectangle { width: 1.0, height: 1.0 },
        Shape::LShape { side: 1.0 },
        Shape::Annulus { inner: 0.3, outer: 0.6 },
    ] {
        let d = make_shape(&shape, h).unwrap();
        let rho = regularized_inradius(&d, THETA, h).unwrap();
        let expect = swallowing_radius(measure(&d), THETA);
        assert!((rho - expect).abs() <= 3.0 * h, "{shape:?}: {rho} vs {expect}");
    }
}

#[test]
fn long_strip_matches_the_slab_radius() {
    // strip of width w: the best ball sits on the midline, where
    // |strip ∩ B_rho| = ∫_{-w/2}^{w/2} 2 sqrt(rho^2 - y^2) dy
    let h = 1.0 / 128.0;
    let w = 12.0 * h;
    let d = make_shape(&Shape::Rectangle { width: 3.0, height: w }, h).unwrap();
    let area = |rho: f64| {
        let a = w / 2.0;
        2.0 * (a * (rho * rho - a * a).sqrt() + rho * rho * (a / rho).asin())
    };
    let (mut lo, mut hi) = (w, 2.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if area(mid) / (PI * mid * mid) > THETA {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = regularized_inradius(&d, THETA, h).unwrap();
    assert!((rho - lo).abs() <= 3.0 * h, "{rho} vs {lo}");
    assert!(rho < 0.5 * swallowing_radius(measure(&d), THETA));
}

#[test]
fn interval_is_one_dimensional() {
    let h = 1.0 / 256.0;
    let d = make_shape(&Shape::Interval { length: 0.5 }, h).unwrap();
    assert_eq!(d.dim(), 1);
    assert!((measure(&d) - 0.5).abs() < 1e-12);
    let rho = regularized_inradius(&d, THETA, h).unwrap();
    // the "ball" is an interval of length 2 rho
    assert!((rho - 0.5 / (2.0 * THETA)).abs() <= 3.0 * h, "{rho}");
}

#[test]
fn rigid_motions_and_scaling() {
    let h = 1.0 / 32.0;
    let d = make_shape(&Shape::LShape { side: 1.0 }, h).unwrap();
    let rho = regularized_inradius(&d, THETA, h).unwrap();
    let moved = d.translated([3.25, -1.5]);
    assert_eq!(regularized_inradius(&moved, THETA, h).unwrap(), rho);
    let big = d.rescaled(2.0);
    let rho2 = regularized_inradius(&big, THETA, 2.0 * h).unwrap();
    assert!((rho2 - 2.0 * rho).abs() < 1e-9, "{rho2} vs {}", 2.0 * rho);
}

#[test]
fn smaller_density_means_larger_radius() {
    let h = 1.0 / 32.0;
    let d = make_shape(&Shape::Disk { radius: 0.5 }, h).unwrap();
    let mut last = 0.0;
    for theta in [0.9, 0.6, 0.3, 0.1] {
        let rho = regularized_inradius(&d, theta, h).unwrap();
        assert!(rho >= last - 1e-12, "theta {theta}: {rho} < {last}");
        last = rho;
    }
}

#[test]
fn tolerance_below_resolution_is_rejected() {
    let h = 1.0 / 16.0;
    let d = make_shape(&Shape::Disk { radius: 0.5 }, h).unwrap();
    assert!(matches!(regularized_inradius(&d, THETA, h / 2.0), Err(LabError::ToleranceBelowResolution { .. })));
    assert!(regularized_inradius(&d, 1.0, h).is_err());
}

#[test]
fn measure_inradius_width() {
    let h = 1.0 / 64.0;
    let sq = make_shape(&Shape::Rectangle { width: 1.0, height: 0.5 }, h).unwrap();
    assert!((measure(&sq) - 0.5).abs() < 1e-12);
    assert!((inradius(&sq).unwrap() - 0.25).abs() <= h);
    assert!((width(&sq, 64).unwrap() - 0.5).abs() <= 2.0 * h);
    let disk = make_shape(&Shape::Disk { radius: 1.0 }, h).unwrap();
    assert!((measure(&disk) - PI).abs() < 4.0 * h);
    assert!((inradius(&disk).unwrap() - 1.0).abs() <= 2.0 * h);
}

#[test]
fn mask_round_trip_keeps_the_hash() {
    let d = make_shape(&Shape::PerforatedSquare { side: 1.0, holes: 3, hole_radius: 0.08 }, 1.0 / 32.0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("perforated.mask");
    d.write_mask(&path).unwrap();
    let back = GridDomain::read_mask(&path).unwrap();
    assert_eq!(back.mask(), d.mask());
    assert_eq!(back.content_hash(), d.content_hash());
    assert!(GridDomain::from_mask_str("h 0.1\n#x\n").is_err());
}

#[test]
fn disconnected_union_has_two_components() {
    let h = 1.0 / 32.0;
    let d = make_shape(
        &Shape::DiskUnion {
            disks: vec![
                riesz_lab::geometry::Circle { x: -0.5, y: 0.0, r: 0.3 },
                riesz_lab::geometry::Circle { x: 0.5, y: 0.0, r: 0.3 },
            ],
        },
        h,
    )
    .unwrap();
    assert_eq!(d.components().1, 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rectangles_sit_in_the_sandwich(wc in 4usize..40, hc in 4usize..40, theta in 0.05f64..0.9) {
        let h = 1.0 / 32.0;
        let d = make_shape(&Shape::Rectangle { width: wc as f64 * h, height: hc as f64 * h }, h).unwrap();
        let scan = regularized_inradius_scan(&d, theta, h).unwrap();
        prop_assert!(scan.sup_ratio <= theta);
        prop_assert!(scan.rho >= inradius(&d).unwrap() - 2.0 * h);
        prop_assert!(scan.rho <= swallowing_radius(measure(&d), theta) + 3.0 * h);
    }
}
