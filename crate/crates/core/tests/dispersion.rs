mod common;

use common::HermiteGalerkin;
use engel_core::dispersion::*;
use engel_core::spectral::{SolverConfig, SpectralGrid};
use proptest::prelude::*;

// Brute-force Hermite–Galerkin values (160 functions, golden-section plus bisection, Richardson curvature).
const NU_C: f64 = -0.3467584038;
const MU_AT_C: f64 = 0.5698203174;
const CURVATURE_AT_C: f64 = 1.576126873;

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

#[test]
fn first_branch_has_one_minimum() {
    let scan = critical_points(&cfg(), &CriticalSearch::new(1)).unwrap();
    assert_eq!(scan.reports.len(), 1);
    assert_eq!(scan.sign_changes, 1);
    let r = &scan.reports[0];
    assert_eq!(r.certificate, 1);
    assert_eq!(r.kind, CriticalKind::Minimum);
    assert!(r.curvature > 0.0);
    assert!(r.dmu_at_c.abs() <= 1e-6);
    assert!((r.nu_c - NU_C).abs() < 1e-5, "{}", r.nu_c);
    assert!((r.mu_at_c - MU_AT_C).abs() < 1e-5, "{}", r.mu_at_c);
    assert!((r.curvature - CURVATURE_AT_C).abs() < 1e-5, "{}", r.curvature);
    assert!(r.bracket[0] <= r.nu_c && r.nu_c <= r.bracket[1]);
}

#[test]
fn frozen_values_reproduce_the_oracle() {
    let oracle = HermiteGalerkin::new(160, 1.0);
    let nu = oracle.critical_point(1, -1.0, 0.5);
    assert!((nu - NU_C).abs() < 1e-8);
    assert!((oracle.minimize(1, -1.0, 0.5) - NU_C).abs() < 1e-4);
    assert!((oracle.level(nu, 1) - MU_AT_C).abs() < 1e-8);
    assert!((oracle.curvature(1, nu) - CURVATURE_AT_C).abs() < 1e-5);
}

#[test]
fn higher_modes_agree_with_the_oracle() {
    let oracle = HermiteGalerkin::new(160, 1.0);
    for n in 2..=4 {
        let scan = critical_points(&cfg(), &CriticalSearch::new(n)).unwrap();
        assert!(!scan.reports.is_empty(), "mode {n}");
        for r in &scan.reports {
            assert!(r.dmu_at_c.abs() <= 1e-6);
            let o = oracle.critical_point(n, r.bracket[0], r.bracket[1]);
            assert!((r.nu_c - o).abs() < 1e-5, "mode {n}: {} vs {o}", r.nu_c);
            assert!((r.mu_at_c - oracle.level(o, n)).abs() < 1e-5);
        }
    }
}

#[test]
fn location_is_stable_under_refinement() {
    let base = critical_points(&cfg(), &CriticalSearch::new(1)).unwrap();
    let fine_grid = SpectralGrid::new(base.grid.half_width, 2 * base.grid.nodes).unwrap();
    let fine = critical_points_on(&cfg().with_nodes(2 * base.grid.nodes), &CriticalSearch::new(1), fine_grid).unwrap();
    assert_eq!(fine.reports.len(), 1);
    assert!((fine.reports[0].nu_c - base.reports[0].nu_c).abs() <= 1e-4);
}

#[test]
fn scan_without_root_is_empty() {
    let search = CriticalSearch {
        scan: [0.5, 4.0],
        ..CriticalSearch::new(1)
    };
    let scan = critical_points(&cfg(), &search).unwrap();
    assert!(scan.reports.is_empty());
    assert!(scan.advisory.is_some());
    let bad = CriticalSearch {
        scan: [1.0, -1.0],
        ..CriticalSearch::new(1)
    };
    assert!(critical_points(&cfg(), &bad).is_err());
}

#[test]
fn curvature_is_constant_along_the_cone() {
    let r = critical_points(&cfg(), &CriticalSearch::new(1)).unwrap().reports[0].clone();
    let c = curvature_consistency(&cfg(), 1, r.nu_c, r.curvature, &[1.0], false).unwrap();
    assert!(c.max_deviation < 1e-6);
    let c = curvature_consistency(&cfg(), 1, r.nu_c, r.curvature, &[0.5, 2.0, 8.0], true).unwrap();
    assert!(c.max_deviation <= 1e-3, "{c:?}");
    assert!(c.max_abs_dmu <= 1e-5);
    for row in &c.rows {
        assert!((row.curvature_sum.unwrap() - r.curvature).abs() <= 1e-3);
    }
    assert!(curvature_consistency(&cfg(), 1, r.nu_c, r.curvature, &[], false).is_err());
}

#[test]
fn strichartz_examples() {
    use StrichartzClass::*;
    assert_eq!(strichartz_admissible(f64::INFINITY, 2.0).unwrap(), Allowed);
    assert_eq!(strichartz_admissible(2.0, 14.0 / 5.0).unwrap(), Allowed);
    assert_eq!(strichartz_admissible(4.0, 7.0 / 3.0).unwrap(), AdmissibleButObstructed);
    assert_eq!(strichartz_admissible(2.0, 2.0).unwrap(), NotAdmissible);
    assert!(strichartz_admissible(1.0, 2.0).is_err());
    assert!(strichartz_admissible(f64::NAN, 2.0).is_err());
}

#[test]
fn report_validation() {
    let r = critical_points(&cfg(), &CriticalSearch::new(1)).unwrap().reports[0].clone();
    let json = serde_json::to_string(&r).unwrap();
    assert_eq!(DispersionReport::from_json(&json).unwrap(), r);
    assert!(DispersionReport::from_json("{").is_err());
    assert!(DispersionReport::from_json(r#"{"n":0,"nu_c":0,"mu_at_c":1,"curvature":1,"bracket":[0,1],"certificate":1}"#).is_err());
}

proptest! {
    #[test]
    fn cone_dilation_invariance(nu0 in -2.0f64..2.0, delta in prop_oneof![0.01f64..50.0, -50.0f64..-0.01], r in 0.1f64..10.0) {
        let cone = ConeSection { nu0, delta_range: [0.1, 10.0] };
        let b = cone.beta(delta);
        prop_assert!(cone.contains(delta, b, 1e-12));
        prop_assert!((cone.beta(r.powi(3) * delta) - r * b).abs() <= 1e-12 * (1.0 + (r * b).abs()));
    }

    #[test]
    fn strichartz_line(q in 2.0f64..1e6) {
        // p is fixed by the line; only two points are allowed
        let p = 7.0 / (3.5 - 2.0 / q);
        let class = strichartz_admissible(q, p).unwrap();
        if (q - 2.0).abs() < 1e-12 {
            prop_assert_eq!(class, StrichartzClass::Allowed);
        } else {
            prop_assert_eq!(class, StrichartzClass::AdmissibleButObstructed);
        }
        prop_assert_eq!(strichartz_admissible(q, p + 0.01).unwrap(), StrichartzClass::NotAdmissible);
    }
}
