mod common;

use common::HermiteGalerkin;
use engel_core::dual::RepParam;
use engel_core::fourier::rep::{central_difference, inner};
use engel_core::spectral::*;
use engel_core::Complex;
use proptest::prelude::*;

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn real_to_complex(v: &[f64]) -> Vec<Complex> {
    v.iter().map(|&x| Complex::new(x, 0.0)).collect()
}

#[test]
fn harmonic_levels() {
    let c = cfg().with_half_width(Some(10.0));
    let vals = c.eigenvalues(&Symbol::Rep(RepParam::Schrodinger { lambda: 1.0 }), 4).unwrap();
    for (k, v) in vals.iter().enumerate() {
        assert!((v - (2 * k + 1) as f64).abs() < 1e-5, "level {k}: {v}");
    }
}

#[test]
fn generic_unit_delta_is_montgomery() {
    let g = cfg().eigenvalues(&Symbol::generic(1.0, 0.0), 1).unwrap()[0];
    let m = cfg().eigenvalues(&Symbol::montgomery(0.0), 1).unwrap()[0];
    assert!((g - m).abs() < 1e-6);
    assert!((m - 0.667986259153).abs() < 1e-8, "{m}");
}

#[test]
fn montgomery_levels_match_hermite_oracle() {
    let oracle = HermiteGalerkin::new(160, 1.0);
    for nu in [-1.5, -0.35, 0.0, 0.8] {
        let ours = cfg().eigenvalues(&Symbol::montgomery(nu), 4).unwrap();
        for n in 1..=4 {
            let o = oracle.level(nu, n);
            assert!((ours[n - 1] - o).abs() < 1e-6 * o.abs().max(1.0), "ν {nu}, n {n}: {} vs {o}", ours[n - 1]);
        }
    }
}

#[test]
fn feynman_hellmann_matches_central_difference() {
    for (delta, beta, n) in [(1.0, 0.5, 1), (2.0, -1.0, 2), (-0.5, 0.3, 3)] {
        let sym = Symbol::generic(delta, beta);
        let grid = cfg().grid_for(&sym, n + 2).unwrap();
        let p = cfg().branch_point_on(&sym, n, false, grid).unwrap();
        let mu = |b: f64| cfg().eigenvalues_on(&Symbol::generic(delta, b), grid, n).unwrap()[n - 1];
        let h = 1e-4;
        let fd = (mu(beta + h) - mu(beta - h)) / (2.0 * h);
        assert!((p.dmu - fd).abs() < 1e-6, "({delta},{beta},{n}): {} vs {fd}", p.dmu);
    }
}

#[test]
fn second_derivative_sum_matches_second_difference() {
    for (delta, beta, n) in [(1.0, 0.5, 1), (1.0, -0.35, 1), (2.0, -1.0, 2)] {
        let sym = Symbol::generic(delta, beta);
        let p = cfg().branch_point(&sym, n, true).unwrap();
        let grid = p.grid;
        let mu = |b: f64| cfg().eigenvalues_on(&Symbol::generic(delta, b), grid, n).unwrap()[n - 1];
        let h = 1e-2;
        let fd = (mu(beta + h) - 2.0 * mu(beta) + mu(beta - h)) / (h * h);
        assert!((p.d2mu.unwrap() - fd).abs() < 1e-4, "({delta},{beta},{n}): {:?} vs {fd}", p.d2mu);
    }
}

#[test]
fn diagonal_part_identities() {
    for (delta, beta, n) in [(1.0, 0.5, 1), (2.0, -0.7, 2), (0.5, 1.2, 1)] {
        let sym = Symbol::generic(delta, beta);
        let grid = cfg().grid_for(&sym, n + 4).unwrap();
        let pair = ProjectorPair::new(&sym, n, &grid, n + 2).unwrap().with_resolvent_derivative().unwrap();
        let phi = real_to_complex(&pair.phi);
        let dphi = real_to_complex(&pair.derivative_apply(&phi).iter().map(|z| z.re).collect::<Vec<_>>());
        let ii = Complex::new(0.0, 1.0);
        let pts = grid.points();
        let x2: Vec<Complex> = pts.iter().zip(&dphi).map(|(&xi, v)| ii * (beta + 0.5 * delta * xi * xi) * v).collect();
        let lhs2 = inner(&grid, &x2, &phi);
        let rhs2 = 0.5 * ii * (0.5 * pair.d2mu - 1.0);
        assert!((lhs2 - rhs2).norm() < 1e-4, "X₂ identity: {lhs2} vs {rhs2}");
        let lhs1 = inner(&grid, &central_difference(&grid, &dphi), &phi);
        let x3: Vec<Complex> = pts.iter().zip(&phi).map(|(&xi, v)| ii * delta * xi * v).collect();
        let rhs1 = pair.dmu / (2.0 * ii * delta) * inner(&grid, &x3, &phi);
        assert!((lhs1 - rhs1).norm() < 1e-4, "X₁ identity: {lhs1} vs {rhs1}");
    }
}

#[test]
fn projector_derivative_properties() {
    let sym = Symbol::generic(1.0, 0.5);
    let grid = cfg().grid_for(&sym, 70).unwrap();
    let pair = ProjectorPair::new(&sym, 1, &grid, 64).unwrap();
    assert!(pair.idempotent_defect() < 1e-10);
    // Π ∂Π Π = 0 for a projector family
    assert!(pair.restricted_derivative_norm() < 1e-10);
    assert!(pair.fh1_residual().unwrap() < 1e-6, "{}", pair.fh1_residual().unwrap());
    let exact = pair.clone().with_resolvent_derivative().unwrap();
    let diff: Vec<f64> = pair.dphi.iter().zip(&exact.dphi).map(|(a, b)| a - b).collect();
    assert!(grid.norm(&diff) < 1e-8);
    assert!((pair.d2mu - exact.d2mu).abs() < 1e-8);
}

#[test]
fn reduced_resolvent_on_eigenvectors() {
    let sym = Symbol::generic(1.0, -0.2);
    let grid = cfg().grid_for(&sym, 8).unwrap();
    let op = build_hamiltonian(&sym, &grid).unwrap();
    let pairs = eigen_lowest(&op, 6).unwrap();
    let n = 2;
    let (mu, phi, gap) = (pairs.values[n - 1], &pairs.vectors[n - 1], pairs.gap(n - 1));
    for m in [0, 2, 4] {
        let u = reduced_resolvent_solve(&op, mu, phi, gap, &pairs.vectors[m]).unwrap();
        let scale = 1.0 / (mu - pairs.values[m]);
        let err: Vec<f64> = u.iter().zip(&pairs.vectors[m]).map(|(a, b)| a - scale * b).collect();
        assert!(grid.norm(&err) < 1e-8 * scale.abs(), "m = {m}");
    }
    // the resolved direction is dropped
    let u = reduced_resolvent_solve(&op, mu, phi, gap, phi).unwrap();
    assert!(grid.norm(&u) < 1e-10);
    // residual of (μ − H)u = Π^⊥ b
    let b: Vec<f64> = grid.points().iter().map(|&x| (-(x - 0.4) * (x - 0.4)).exp() * (1.0 + x)).collect();
    let u = reduced_resolvent_solve(&op, mu, phi, gap, &b).unwrap();
    let hu = op.apply(&u);
    let c = grid.dot(&b, phi);
    let r: Vec<f64> = (0..b.len()).map(|k| mu * u[k] - hu[k] - (b[k] - c * phi[k])).collect();
    assert!(grid.norm(&r) < 1e-8, "{}", grid.norm(&r));
    assert!(grid.dot(&u, phi).abs() < 1e-12);
}

#[test]
fn grid_refinement_is_stable() {
    let sym = Symbol::generic(2.0, -0.4);
    let coarse = cfg().with_nodes(2048);
    let fine = cfg().with_nodes(4096);
    let grid = coarse.grid_for(&sym, 3).unwrap();
    let fgrid = SpectralGrid::new(grid.half_width, 4096).unwrap();
    let a = coarse.branch_point_on(&sym, 3, false, grid).unwrap();
    let b = fine.branch_point_on(&sym, 3, false, fgrid).unwrap();
    assert!((a.mu - b.mu).abs() < 1e-6 && (a.dmu - b.dmu).abs() < 1e-6, "{a:?} vs {b:?}");
}

#[test]
fn invalid_symbols_are_rejected() {
    assert!(matches!(
        cfg().eigenvalues(&Symbol::generic(0.0, 1.0), 1),
        Err(SpectralError::DegenerateGeneric)
    ));
    assert!(cfg().eigenvalues(&Symbol::Rep(RepParam::Character { alpha1: 1.0, alpha2: 0.0 }), 1).is_err());
    assert!(matches!(cfg().branch_point(&Symbol::montgomery(0.0), 0, false), Err(SpectralError::ModeIndex)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rescaling_law(delta in prop_oneof![0.3f64..9.0, -9.0f64..-0.3], beta in -2.0f64..2.0, n in 1usize..=4) {
        let direct = cfg().eigenvalues(&Symbol::generic(delta, beta), n).unwrap()[n - 1];
        let (scale, nu) = rescaled_parameter(delta, beta);
        let reduced = cfg().eigenvalues(&Symbol::montgomery(nu), n).unwrap()[n - 1];
        prop_assert!((direct - scale * reduced).abs() <= 1e-6 * direct.abs(), "{direct} vs {}", scale * reduced);
    }

    #[test]
    fn eigenvectors_orthonormal(delta in 0.5f64..4.0, beta in -2.0f64..2.0) {
        let sym = Symbol::generic(delta, beta);
        let grid = cfg().grid_for(&sym, 5).unwrap();
        let pairs = eigen_lowest(&build_hamiltonian(&sym, &grid).unwrap(), 5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let d = grid.dot(&pairs.vectors[i], &pairs.vectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((d - target).abs() < 1e-9);
            }
        }
        prop_assert!(pairs.values.windows(2).all(|w| w[0] < w[1]));
    }
}
