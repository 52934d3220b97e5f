use proptest::prelude::*;
use riesz_lab::geometry::{make_shape, Shape};
use riesz_lab::operators::{BoundaryCondition, Completeness, Spectrum};
use riesz_lab::semiclassics::{
    aizenman_lieb_lift, bound_report, fit_exponential, g_function, main_term, riesz_mean, semiclassical_constant,
    BoundFlag, Direction, DomainGeometry, RieszQuery,
};
use std::f64::consts::PI;

/// Lanczos approximation of Gamma (g = 7), independent of the library's ln_gamma.
fn gamma_fn(x: f64) -> f64 {
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_fn(1.0 - x));
    }
    let x = x - 1.0;
    let t = x + 7.5;
    let s: f64 = C[0] + (1..9).map(|i| C[i] / (x + i as f64)).sum::<f64>();
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * s
}

#[test]
fn constants_against_gamma_and_closed_forms() {
    assert!((semiclassical_constant(0.0, 2) - 1.0 / (4.0 * PI)).abs() < 1e-15);
    assert!((semiclassical_constant(1.0, 2) - 1.0 / (8.0 * PI)).abs() < 1e-15);
    assert!((semiclassical_constant(2.0, 2) - 1.0 / (12.0 * PI)).abs() < 1e-15);
    assert!((semiclassical_constant(1.0, 1) - 2.0 / (3.0 * PI)).abs() < 1e-15);
    for d in [1usize, 2, 3] {
        for g in [0.0, 0.5, 1.0, 1.5, 2.0, 3.7] {
            let df = d as f64;
            let oracle = gamma_fn(1.0 + g) / ((4.0 * PI).powf(df / 2.0) * gamma_fn(1.0 + g + df / 2.0));
            let got = semiclassical_constant(g, d);
            assert!((got - oracle).abs() < 1e-12 * oracle, "d={d} g={g}: {got} vs {oracle}");
        }
    }
}

#[test]
fn riesz_mean_is_strict_at_the_cutoff() {
    let s = Spectrum::from_values(vec![1.0, 2.0, 2.0, 5.0], Completeness::Full);
    let q = |l, g| riesz_mean(&s, RieszQuery::new(l, g).unwrap()).unwrap();
    assert_eq!(q(2.0, 0.0), 1.0);
    assert_eq!(q(2.0, 1.0), 1.0);
    assert_eq!(q(3.0, 1.0), 2.0 + 1.0 + 1.0);
    assert_eq!(q(6.0, 2.0), 25.0 + 16.0 + 16.0 + 1.0);
    assert_eq!(q(0.5, 1.0), 0.0);
    assert!(RieszQuery::new(-1.0, 1.0).is_err());
}

#[test]
fn landau_sum_tends_to_the_free_term() {
    // (B/2pi) sum_k (Lambda - B(2k-1))_+^gamma is a midpoint rule for L Lambda^{gamma+1}
    for gamma in [1.0, 2.0] {
        let free = g_function(0.0, gamma, 40.0, 2).unwrap();
        let fine = g_function(1e-3, gamma, 40.0, 2).unwrap();
        assert!((fine - free).abs() / free < 1e-5, "gamma {gamma}: {fine} vs {free}");
    }
    // one level below the cutoff
    assert!((g_function(2.0, 1.0, 5.0, 2).unwrap() - (2.0 / (2.0 * PI)) * (3.0)).abs() < 1e-14);
    assert_eq!(g_function(2.0, 1.0, 2.0, 2).unwrap(), 0.0);
    assert!(g_function(1.0, 1.0, 5.0, 1).is_err());
}

#[test]
fn interval_berezin_and_kroger() {
    // exact interval spectra: (pi k / L)^2, k >= 1 (Dirichlet), k >= 0 (Neumann)
    let len = 1.0;
    for gamma in [1.0, 1.5, 2.0] {
        for lambda in [10.0, 57.0, 400.0, 2500.0] {
            let q = RieszQuery::new(lambda, gamma).unwrap();
            let ev = |k0: usize| {
                Spectrum::from_values((k0..200).map(|k| (PI * k as f64 / len).powi(2)).collect(), Completeness::Below(1e5))
            };
            let main = main_term(len, q, 0.0, 1).unwrap();
            let dir = riesz_mean(&ev(1), q).unwrap();
            let neu = riesz_mean(&ev(0), q).unwrap();
            assert!(dir < main && main < neu, "gamma {gamma} Lambda {lambda}: {dir} {main} {neu}");
        }
    }
}

#[test]
fn reports_orient_by_boundary_condition() {
    let h = 1.0 / 16.0;
    let d = make_shape(&Shape::Rectangle { width: 1.0, height: 1.0 }, h).unwrap();
    let geom = DomainGeometry::compute("square", &d, 0.25, h).unwrap();
    let s = Spectrum::from_values(vec![20.0, 50.0], Completeness::Below(100.0));
    let q = RieszQuery::new(60.0, 1.0).unwrap();
    let dir = bound_report(&geom, &s, q, 0.0, BoundaryCondition::Dirichlet, true).unwrap();
    assert_eq!(dir.direction, Direction::Upper);
    assert!((dir.main - 3600.0 / (8.0 * PI)).abs() < 1e-9);
    assert!((dir.riesz - 50.0).abs() < 1e-12);
    assert_eq!(dir.flag, BoundFlag::Ok);
    assert!((dir.gap - (1.0 - dir.ratio)).abs() < 1e-15);
    let neu = bound_report(&geom, &s, q, 0.0, BoundaryCondition::Neumann, true).unwrap();
    assert_eq!(neu.flag, BoundFlag::Violation);
    // the grid at h = 1/16 is trusted only up to 0.05 / h^2 = 12.8
    let beyond = bound_report(&geom, &s, q, 0.0, BoundaryCondition::Dirichlet, false);
    assert!(matches!(beyond, Err(riesz_lab::LabError::BeyondCap { .. })));
    assert!(bound_report(&geom, &s, RieszQuery::new(400.0, 1.0).unwrap(), 0.0, BoundaryCondition::Dirichlet, true).is_err());
}

#[test]
fn exponential_fit_recovers_constants() {
    let pts: Vec<(f64, f64)> = (0..8).map(|i| {
        let e = 1.0 + i as f64;
        (e, 0.3 * (-0.7 * e).exp())
    }).collect();
    let f = fit_exponential(&pts).unwrap();
    assert!((f.c - 0.3).abs() < 1e-12 && (f.cprime - 0.7).abs() < 1e-12, "{f:?}");
    assert!(f.residual < 1e-12);
    assert!(fit_exponential(&[(1.0, 0.5), (2.0, 0.0)]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lift_reproduces_direct_sums(
        values in prop::collection::vec(0.0f64..100.0, 1..60),
        lambda in 0.5f64..120.0,
        gamma in 1.01f64..4.0,
    ) {
        let s = Spectrum::from_values(values, Completeness::Full);
        let lift = aizenman_lieb_lift(&s, lambda, gamma).unwrap();
        let direct = riesz_mean(&s, RieszQuery::new(lambda, gamma).unwrap()).unwrap();
        prop_assert!((lift - direct).abs() <= 1e-9 * direct.max(1e-300));
    }
}
