//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use engel_core::algebra::*;
use engel_core::dispersion::*;
use engel_core::dual::RepParam;
use engel_core::fourier::rep::{central_difference, inner};
use engel_core::fourier::*;
use engel_core::spectral::*;
use engel_core::wavepacket::*;
use engel_core::Complex;
use std::time::Instant;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn exact_algebra() -> Outcome {
    let mut state = 0x2545_f491_4f6c_dd1d_u64;
    let mut next = move |lo: i64, span: i64| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        lo + (state % span as u64) as i64
    };
    let mut element = || ExactElement::from_coords([0; 4].map(|_| rat(next(-30, 61), next(1, 8))));
    let mut samples = Vec::new();
    for _ in 0..60 {
        samples.push(element());
    }
    let e = ExactElement::identity();
    for w in samples.windows(3) {
        let (a, b, c) = (&w[0], &w[1], &w[2]);
        if a.multiply(b).multiply(c) != a.multiply(&b.multiply(c)) {
            return Err("associativity".into());
        }
        if a.multiply(&a.inverse()) != e || a.inverse().multiply(a) != e {
            return Err("inversion".into());
        }
        let (u, v, s) = (semidirect_to_exp(a), semidirect_to_exp(b), semidirect_to_exp(c));
        if exp_to_semidirect(&u) != *a || semidirect_to_exp(&exp_to_semidirect(&u)) != u {
            return Err("exponential round trip".into());
        }
        if exp_to_semidirect(&bch(&u, &v)) != a.multiply(b) {
            return Err("BCH".into());
        }
        let jacobi = u.bracket(&v.bracket(&s)).add(&v.bracket(&s.bracket(&u))).add(&s.bracket(&u.bracket(&v)));
        if !jacobi.is_zero() {
            return Err("Jacobi".into());
        }
    }
    let mut words = 0;
    for len in 0..=6u32 {
        for code in 0..4u32.pow(len) {
            let letters: Vec<u8> = (0..len).map(|k| (code / 4u32.pow(k) % 4) as u8 + 1).collect();
            let w = Word::new(rat(3, 2), letters);
            let a = normal_form(&w, RewriteOrder::Leftmost);
            if normal_form(&w, RewriteOrder::Rightmost) != a || normal_form(&w, RewriteOrder::Random(code as u64)) != a {
                return Err(format!("PBW confluence at {w:?}"));
            }
            words += 1;
        }
    }
    let p = |s: &str| s.parse::<PbwPolynomial>().unwrap();
    let sub = p("-X1^2 - X2^2");
    let first = PbwPolynomial::word(&[2, 3]).sub(&p("-1/2 X1").commutator(&sub));
    let second = p("X3^2").commutator(&sub).sub(&p("4 X1 X3 X4 - 2 X4^2"));
    check(
        first.is_zero() && second.is_zero(),
        format!("{} triples, {words} words, enveloping identities exact", samples.len() - 2),
    )
}

fn harmonic() -> Outcome {
    let c = cfg().with_nodes(4096).with_half_width(Some(10.0));
    let vals = c
        .eigenvalues(&Symbol::Rep(RepParam::Schrodinger { lambda: 1.0 }), 4)
        .map_err(|e| e.to_string())?;
    let worst = vals.iter().enumerate().map(|(k, v)| (v - (2 * k + 1) as f64).abs()).fold(0.0, f64::max);
    check(worst <= 1e-5, format!("max error {worst:.3e}"))
}

fn rescaling() -> Outcome {
    let mut worst = 0.0f64;
    for delta in [0.5, 1.0, 2.0, 8.0] {
        for k in 0..11 {
            let beta = -2.0 + 0.4 * k as f64;
            let direct = cfg().eigenvalues(&Symbol::generic(delta, beta), 4).map_err(|e| e.to_string())?;
            let (scale, nu) = rescaled_parameter(delta, beta);
            let reduced = cfg().eigenvalues(&Symbol::montgomery(nu), 4).map_err(|e| e.to_string())?;
            for (d, r) in direct.iter().zip(&reduced) {
                worst = worst.max((d - scale * r).abs() / d.abs());
            }
        }
    }
    check(worst <= 1e-6, format!("max relative deviation {worst:.3e}"))
}

fn feynman_hellmann() -> Outcome {
    let ii = Complex::new(0.0, 1.0);
    let (mut fh, mut lemma2, mut lemma1) = (0.0f64, 0.0f64, 0.0f64);
    for (delta, beta, n) in [(1.0, 0.5, 1), (2.0, -0.7, 2), (0.5, 1.2, 1), (-1.0, 0.3, 3)] {
        let sym = Symbol::generic(delta, beta);
        let grid = cfg().grid_for(&sym, n + 4).map_err(|e| e.to_string())?;
        let p = cfg().branch_point_on(&sym, n, false, grid).map_err(|e| e.to_string())?;
        let mu = |b: f64| cfg().eigenvalues_on(&Symbol::generic(delta, b), grid, n).unwrap()[n - 1];
        let h = 1e-4;
        fh = fh.max((p.dmu - (mu(beta + h) - mu(beta - h)) / (2.0 * h)).abs());

        let pair = ProjectorPair::new(&sym, n, &grid, n + 2)
            .and_then(|q| q.with_resolvent_derivative())
            .map_err(|e| e.to_string())?;
        let phi: Vec<Complex> = pair.phi.iter().map(|&x| Complex::new(x, 0.0)).collect();
        let dphi: Vec<Complex> = pair.derivative_apply(&phi).iter().map(|z| Complex::new(z.re, 0.0)).collect();
        let pts = grid.points();
        let x2: Vec<Complex> = pts.iter().zip(&dphi).map(|(&xi, v)| ii * (beta + 0.5 * delta * xi * xi) * v).collect();
        lemma2 = lemma2.max((inner(&grid, &x2, &phi) - 0.5 * ii * (0.5 * pair.d2mu - 1.0)).norm());
        let x3: Vec<Complex> = pts.iter().zip(&phi).map(|(&xi, v)| ii * delta * xi * v).collect();
        let rhs = pair.dmu / (2.0 * ii * delta) * inner(&grid, &x3, &phi);
        lemma1 = lemma1.max((inner(&grid, &central_difference(&grid, &dphi), &phi) - rhs).norm());
    }
    check(
        fh <= 1e-6 && lemma2 <= 1e-4 && lemma1 <= 1e-4,
        format!("FH {fh:.3e}, X2 identity {lemma2:.3e}, X1 identity {lemma1:.3e}"),
    )
}

// Hermite–Galerkin oracle values, frozen.
const NU_C: f64 = -0.3467584038;
const MU_AT_C: f64 = 0.5698203174;
const CURVATURE_AT_C: f64 = 1.576126873;

fn first_critical() -> Result<DispersionReport, String> {
    let scan = critical_points(&cfg(), &CriticalSearch::new(1)).map_err(|e| e.to_string())?;
    match scan.reports.as_slice() {
        [r] => Ok(r.clone()),
        other => Err(format!("{} critical points", other.len())),
    }
}

fn critical_point() -> Outcome {
    let base = critical_points(&cfg(), &CriticalSearch::new(1)).map_err(|e| e.to_string())?;
    if base.reports.len() != 1 {
        return Err(format!("{} critical points", base.reports.len()));
    }
    let r = &base.reports[0];
    let fine_grid = SpectralGrid::new(base.grid.half_width, 2 * base.grid.nodes).map_err(|e| e.to_string())?;
    let fine = critical_points_on(&cfg().with_nodes(2 * base.grid.nodes), &CriticalSearch::new(1), fine_grid).map_err(|e| e.to_string())?;
    let shift = fine.reports.first().map_or(f64::INFINITY, |f| (f.nu_c - r.nu_c).abs());
    let frozen = [(r.nu_c, NU_C), (r.mu_at_c, MU_AT_C), (r.curvature, CURVATURE_AT_C)]
        .iter()
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    check(
        r.curvature > 0.0 && fine.reports.len() == 1 && shift <= 1e-4 && frozen <= 1e-5,
        format!(
            "nu_c {:.10}, mu {:.10}, curvature {:.9}, refinement shift {shift:.2e}, frozen deviation {frozen:.2e}",
            r.nu_c, r.mu_at_c, r.curvature
        ),
    )
}

fn cone_curvature() -> Outcome {
    let r = first_critical()?;
    let c = curvature_consistency(&cfg(), 1, r.nu_c, r.curvature, &[0.5, 1.0, 2.0, 8.0], false).map_err(|e| e.to_string())?;
    check(
        c.max_deviation <= 1e-3 && c.max_abs_dmu <= 1e-5,
        format!("curvature deviation {:.3e}, |dmu| {:.3e}", c.max_deviation, c.max_abs_dmu),
    )
}

fn residual_scaling() -> Outcome {
    let spec = WavePacketSpec::new(1.0, 0.5, 1, 0.05);
    let reports = residual_scaling_experiment(&spec, &[0.1, 0.05, 0.025, 0.0125], 0.25, 10_000, 7, FdSteps::default()).map_err(|e| e.to_string())?;
    let slope = |o: AnsatzOrder| reports.iter().find(|r| r.order == o).map(|r| r.slope).unwrap_or(f64::NAN);
    let (lead, full) = (slope(AnsatzOrder::Leading), slope(AnsatzOrder::WithSigma1And2));
    check(
        (1.35..=1.65).contains(&full) && (0.85..=1.15).contains(&lead),
        format!("full slope {full:.3} (window [1.35, 1.65]), leading slope {lead:.3} (window [0.85, 1.15])"),
    )
}

fn transport() -> Outcome {
    let generic = transport_demo(
        &WavePacketSpec::new(1.0, 0.5, 1, 0.05),
        &[0.5],
        &[0.0125],
        AnsatzOrder::WithSigma1And2,
        10_000,
        3,
    )
    .map_err(|e| e.to_string())?;
    let drift = generic.rows[0].relative_drift_error.unwrap_or(f64::INFINITY);
    let r = first_critical()?;
    let critical = transport_demo(
        &WavePacketSpec::new(1.0, r.nu_c, 1, 0.05),
        &[0.5],
        &[0.0125],
        AnsatzOrder::WithSigma1And2,
        10_000,
        3,
    )
    .map_err(|e| e.to_string())?;
    let still = critical.rows[0].width_fraction;
    check(
        drift <= 0.03 && still <= 0.02,
        format!("generic drift error {drift:.3e}, critical offset {still:.3e} widths"),
    )
}

fn plancherel() -> Outcome {
    let q = PlancherelQuadrature::default();
    let r = plancherel_calibrate(&default_kernels(), &q).map_err(|e| e.to_string())?;
    let d = plancherel_calibrate(&default_kernels(), &q.doubled()).map_err(|e| e.to_string())?;
    let change = (d.mean - r.mean).abs() / r.mean;
    check(
        r.kernels.len() >= 3 && r.relative_spread <= 1e-2 && change <= 2e-3,
        format!(
            "c = {:.6e} over {} kernels, spread {:.3e}, doubling {change:.3e}",
            r.mean,
            r.kernels.len(),
            r.relative_spread
        ),
    )
}

fn difference_operators() -> Outcome {
    let grid = SpectralGrid::new(10.0, 241).map_err(|e| e.to_string())?;
    let kernel = [GaussianKernelSpec::new(1.0, [0.0; 4], [0.8, 1.0, 1.2, 1.0])];
    let (mut d1, mut d2) = (0.0f64, 0.0f64);
    for p in [RepParam::generic(1.0, 0.3), RepParam::generic(-2.0, -0.8)] {
        d1 = d1.max(difference_op_check(&kernel, 1, &p, &grid).map_err(|e| e.to_string())?);
        d2 = d2.max(difference_op_check(&kernel, 2, &p, &grid).map_err(|e| e.to_string())?);
    }
    check(d1 <= 1e-5 && d2 <= 1e-4, format!("index 1 {d1:.3e}, index 2 {d2:.3e}"))
}

fn strichartz() -> Outcome {
    use StrichartzClass::*;
    let mut allowed = Vec::new();
    let qs = [2.0, 2.5, 3.0, 4.0, 8.0, 100.0, f64::INFINITY];
    for &q in &qs {
        let on_line = 7.0 / (3.5 - 2.0 / q);
        for p in [on_line, on_line + 0.05, 2.0, 3.0] {
            let class = strichartz_admissible(q, p).map_err(|e| e.to_string())?;
            let expected_line = ((2.0 / q + 7.0 / p) - 3.5).abs() < 1e-12;
            if (class != NotAdmissible) != expected_line {
                return Err(format!("({q}, {p}) classified {class:?}"));
            }
            if class == Allowed {
                allowed.push((q, p));
            }
        }
    }
    allowed.sort_by(|a, b| a.partial_cmp(b).unwrap());
    allowed.dedup();
    let want = vec![(2.0, 14.0 / 5.0), (f64::INFINITY, 2.0)];
    check(allowed == want, format!("allowed pairs {allowed:?}"))
}

fn second_microlocal() -> Outcome {
    let r = first_critical()?;
    let state = ProfileState::sample(60.0, 2048, |y| gaussian_evolved(1.0, 0.0, 0.0, y)).map_err(|e| e.to_string())?;
    let rep = second_microlocal_profile_demo(&cfg(), 1, r.nu_c, &state, 3.0, Some(1.0)).map_err(|e| e.to_string())?;
    let mass = (rep.mass_final - rep.mass_initial).abs() / rep.mass_initial;
    let analytic = rep.analytic_deviation.unwrap_or(f64::INFINITY);
    check(
        mass <= 1e-10 && analytic <= 1e-6 && rep.max_coefficient_deviation <= 1e-3,
        format!(
            "mass drift {mass:.2e}, analytic {analytic:.2e}, cone coefficient deviation {:.2e}",
            rep.max_coefficient_deviation
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("exact algebra", exact_algebra),
        ("harmonic levels", harmonic),
        ("rescaling law", rescaling),
        ("Feynman-Hellmann and diagonal identities", feynman_hellmann),
        ("first critical point", critical_point),
        ("cone curvature", cone_curvature),
        ("residual scaling", residual_scaling),
        ("transport", transport),
        ("Plancherel constant", plancherel),
        ("difference operators", difference_operators),
        ("Strichartz exponents", strichartz),
        ("second-microlocal profile", second_microlocal),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", k + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
