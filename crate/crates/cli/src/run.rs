use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::str::FromStr;
use std::time::Instant;

use engel_core::algebra::*;
use engel_core::dispersion::*;
use engel_core::fourier::{default_kernels, plancherel_calibrate, PlancherelQuadrature};
use engel_core::spectral::{rescaled_parameter, EigenBranch, SolverConfig, Symbol};
use engel_core::wavepacket::*;

use crate::output::{fmt_float, CsvTable};
use crate::{CliError, RunConfig, RunReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Identities,
    Dispersion,
    CriticalPoints,
    Plancherel,
    ResidualScaling,
    Transport,
    SmicroProfile,
    Strichartz,
    Sweep,
}

impl Subcommand {
    pub const ALL: [Subcommand; 9] = [
        Subcommand::Identities,
        Subcommand::Dispersion,
        Subcommand::CriticalPoints,
        Subcommand::Plancherel,
        Subcommand::ResidualScaling,
        Subcommand::Transport,
        Subcommand::SmicroProfile,
        Subcommand::Strichartz,
        Subcommand::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Identities => "identities",
            Subcommand::Dispersion => "dispersion",
            Subcommand::CriticalPoints => "critical-points",
            Subcommand::Plancherel => "plancherel",
            Subcommand::ResidualScaling => "residual-scaling",
            Subcommand::Transport => "transport",
            Subcommand::SmicroProfile => "smicro-profile",
            Subcommand::Strichartz => "strichartz",
            Subcommand::Sweep => "sweep",
        }
    }
}

impl FromStr for Subcommand {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::UnknownSubcommand(s.to_owned()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DataFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub report: RunReport,
    pub files: Vec<DataFile>,
}

impl RunOutput {
    fn csv(&mut self, name: &str, table: &CsvTable) -> Result<(), CliError> {
        self.files.push(DataFile {
            name: name.to_owned(),
            bytes: table.to_bytes()?,
        });
        Ok(())
    }

    fn json<T: serde::Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.files.push(DataFile { name: name.to_owned(), bytes });
        Ok(())
    }
}

fn solver(config: &RunConfig) -> SolverConfig {
    let p = &config.params;
    let base = SolverConfig::default();
    let nodes = p.grid_n.unwrap_or(base.nodes);
    base.with_nodes(nodes).with_half_width(p.grid_l)
}

fn packet_spec(config: &RunConfig, beta: f64, hbar: f64) -> WavePacketSpec {
    let p = &config.params;
    let mut spec = WavePacketSpec::new(p.delta, beta, p.n, hbar);
    if let Some(n) = p.grid_n {
        spec.nodes = n;
    }
    spec.half_width = p.grid_l;
    spec
}

/// Execute one subcommand. The report's checks decide the exit status.
pub fn run(command: Subcommand, config: &RunConfig) -> Result<RunOutput, CliError> {
    config.validate()?;
    let start = Instant::now();
    let mut out = RunOutput {
        report: RunReport::new(command.name(), config),
        files: Vec::new(),
    };
    out.report.config.experiment = Some(command.name().to_owned());
    match command {
        Subcommand::Identities => identities(config, &mut out)?,
        Subcommand::Dispersion => dispersion(config, &mut out)?,
        Subcommand::CriticalPoints => critical(config, &mut out)?,
        Subcommand::Plancherel => plancherel(&mut out)?,
        Subcommand::ResidualScaling => residual_scaling(config, &mut out)?,
        Subcommand::Transport => transport(config, &mut out)?,
        Subcommand::SmicroProfile => smicro(config, &mut out)?,
        Subcommand::Strichartz => strichartz(config, &mut out)?,
        Subcommand::Sweep => {
            let table = sweep(config)?;
            let failed = table.rows.iter().filter(|r| r.last().is_some_and(|s| s != "ok")).count();
            out.report.metric("rows", table.rows.len() as f64);
            out.report.at_most("failed_rows", failed as f64, 0.0);
            out.csv("sweep.csv", &table)?;
        }
    }
    out.report.wall_time = start.elapsed();
    Ok(out)
}

fn identities(config: &RunConfig, out: &mut RunOutput) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let element = |rng: &mut ChaCha8Rng| ExactElement::from_coords([0; 4].map(|_| rat(rng.gen_range(-30..=30), rng.gen_range(1..=8))));
    let samples: Vec<ExactElement> = (0..40).map(|_| element(&mut rng)).collect();
    let e = ExactElement::identity();
    let (mut assoc, mut inv, mut round, mut bch_ok, mut jacobi) = (true, true, true, true, true);
    for w in samples.windows(3) {
        let (a, b, c) = (&w[0], &w[1], &w[2]);
        assoc &= a.multiply(b).multiply(c) == a.multiply(&b.multiply(c));
        inv &= a.multiply(&a.inverse()) == e && a.inverse().multiply(a) == e;
        let (u, v, s) = (semidirect_to_exp(a), semidirect_to_exp(b), semidirect_to_exp(c));
        round &= exp_to_semidirect(&u) == *a;
        bch_ok &= exp_to_semidirect(&bch(&u, &v)) == a.multiply(b);
        jacobi &= u
            .bracket(&v.bracket(&s))
            .add(&v.bracket(&s.bracket(&u)))
            .add(&s.bracket(&u.bracket(&v)))
            .is_zero();
    }
    let mut confluent = true;
    for _ in 0..200 {
        let len = rng.gen_range(0..=8);
        let letters: Vec<u8> = (0..len).map(|_| rng.gen_range(1..=4)).collect();
        let w = Word::new(rat(rng.gen_range(-9..=9), rng.gen_range(1..=5)), letters);
        let a = normal_form(&w, RewriteOrder::Leftmost);
        confluent &= normal_form(&w, RewriteOrder::Rightmost) == a && normal_form(&w, RewriteOrder::Random(rng.gen())) == a;
    }
    let poly = |s: &str| s.parse::<PbwPolynomial>().expect("literal parses");
    let sub = poly("-X1^2 - X2^2");
    let first = PbwPolynomial::word(&[2, 3]).sub(&poly("-1/2 X1").commutator(&sub));
    let second = poly("X3^2").commutator(&sub);
    let r = &mut out.report;
    r.holds("associativity", assoc);
    r.holds("inversion", inv);
    r.holds("exponential_round_trip", round);
    r.holds("bch_group_law", bch_ok);
    r.holds("jacobi", jacobi);
    r.holds("pbw_confluence", confluent);
    r.holds("x2x3_identity", first.is_zero());
    r.holds("x3_squared_identity", second == poly("4 X1 X3 X4 - 2 X4^2"));
    r.label("x3_squared_commutator", second.to_string());
    r.label("x3_commutator", poly("X3").commutator(&poly("X1^2 + X2^2")).to_string());
    Ok(())
}

fn dispersion(config: &RunConfig, out: &mut RunOutput) -> Result<(), CliError> {
    let cfg = solver(config);
    let n = config.params.n;
    let symbols: Vec<Symbol> = config.nu_grid().into_iter().map(Symbol::montgomery).collect();
    let branch = EigenBranch::sample(&cfg, n, &symbols, true)?;
    let mut table = CsvTable::new(&EigenBranch::CSV_HEADER);
    for s in &branch.samples {
        let (delta, nu) = s.coordinates();
        table.push(vec![
            s.n.to_string(),
            fmt_float(delta),
            fmt_float(nu),
            fmt_float(s.mu),
            fmt_float(s.dmu),
            fmt_float(s.d2mu.unwrap_or(f64::NAN)),
            fmt_float(s.grid.half_width),
            s.grid.nodes.to_string(),
        ]);
    }
    out.csv("dispersion.csv", &table)?;
    let betas: Vec<f64> = (0..11).map(|k| -2.0 + 0.4 * k as f64).collect();
    let pairs: Vec<(f64, f64)> = config.params.deltas.iter().flat_map(|&d| betas.iter().map(move |&b| (d, b))).collect();
    let worst = pairs
        .par_iter()
        .map(|&(d, b)| -> Result<f64, CliError> {
            let direct = cfg.eigenvalues(&Symbol::generic(d, b), n)?[n - 1];
            let (scale, nu) = rescaled_parameter(d, b);
            let reduced = cfg.eigenvalues(&Symbol::montgomery(nu), n)?[n - 1];
            Ok((direct - scale * reduced).abs() / direct.abs())
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.report.metric("samples", branch.samples.len() as f64);
    out.report.at_most("rescaling_max_relative_deviation", worst, 1e-6);
    Ok(())
}

fn critical(config: &RunConfig, out: &mut RunOutput) -> Result<(), CliError> {
    let cfg = solver(config);
    let p = &config.params;
    let search = CriticalSearch {
        n: p.n,
        scan: p.nu_range,
        samples: config.nu_grid().len().max(3),
        tol: p.tol,
    };
    let scan = critical_points(&cfg, &search)?;
    out.json("critical_points.json", &scan.reports)?;
    let r = &mut out.report;
    r.metric("critical_points", scan.reports.len() as f64);
    if let Some(a) = &scan.advisory {
        r.label("advisory", a.clone());
    }
    r.holds("critical_point_found", !scan.reports.is_empty());
    if p.n == 1 {
        r.holds("unique_minimum", scan.reports.len() == 1 && scan.reports[0].kind == CriticalKind::Minimum);
    }
    let worst_dmu = scan.reports.iter().map(|c| c.dmu_at_c.abs()).fold(0.0, f64::max);
    r.at_most("max_abs_dmu_at_critical", worst_dmu, 1e-6);
    r.holds("nondegenerate", scan.reports.iter().all(|c| c.curvature != 0.0));
    let mut table = CsvTable::new(&["nu_c", "delta", "beta", "curvature", "curvature_sum", "dmu"]);
    let mut worst = (0.0f64, 0.0f64);
    for c in &scan.reports {
        let cone = curvature_consistency(&cfg, p.n, c.nu_c, c.curvature, &p.deltas, false)?;
        worst = (worst.0.max(cone.max_deviation), worst.1.max(cone.max_abs_dmu));
        for row in &cone.rows {
            table.push(vec![
                fmt_float(c.nu_c),
                fmt_float(row.delta),
                fmt_float(row.beta),
                fmt_float(row.curvature),
                fmt_float(row.curvature_sum.unwrap_or(f64::NAN)),
                fmt_float(row.dmu),
            ]);
        }
    }
    if let Some(first) = scan.reports.first() {
        out.report.metric("nu_c", first.nu_c);
        out.report.metric("mu_at_c", first.mu_at_c);
        out.report.metric("curvature", first.curvature);
    }
    out.report.at_most("cone_curvature_deviation", worst.0, 1e-3);
    out.report.at_most("cone_max_abs_dmu", worst.1, 1e-5);
    out.csv("cone.csv", &table)
}

fn plancherel(out: &mut RunOutput) -> Result<(), CliError> {
    let q = PlancherelQuadrature::default();
    let kernels = default_kernels();
    let base = plancherel_calibrate(&kernels, &q)?;
    let doubled = plancherel_calibrate(&kernels, &q.doubled())?;
    let change = (doubled.mean - base.mean).abs() / base.mean;
    out.json("plancherel.json", &base)?;
    let r = &mut out.report;
    r.metric("c_mean", base.mean);
    r.metric("kernels", base.kernels.len() as f64);
    r.at_most("relative_spread", base.relative_spread, 1e-2);
    r.at_most("doubling_change", change, 2e-3);
    Ok(())
}

fn residual_scaling(config: &RunConfig, out: &mut RunOutput) -> Result<(), CliError> {
    let p = &config.params;
    let spec = packet_spec(config, p.beta, p.hbar_ladder.first().copied().unwrap_or(0.05));
    let reports = residual_scaling_experiment(&spec, &p.hbar_ladder, p.residual_t, p.samples, config.seed, FdSteps::default())?;
    let mut table = CsvTable::new(&["order", "hbar", "residual", "sampling_error"]);
    for rep in &reports {
        let order = serde_json::to_value(rep.order)?.as_str().unwrap_or_default().to_owned();
        for row in &rep.rows {
            table.push(vec![order.clone(), fmt_float(row.hbar), fmt_float(row.residual), fmt_float(row.sampling_error)]);
        }
        out.report.metric(&format!("slope_{order}"), rep.slope);
    }
    out.csv("residual_scaling.csv", &table)?;
    let slope = |o: AnsatzOrder| reports.iter().find(|r| r.order == o).map_or(f64::NAN, |r| r.slope);
    out.report.within("full_order_slope", slope(AnsatzOrder::WithSigma1And2), p.full_slope_window);
    out.report.within("leading_order_slope", slope(AnsatzOrder::Leading), p.leading_slope_window);
    Ok(())
}

fn transport(config: &RunConfig, out: &mut RunOutput) -> Result<(), CliError> {
    let p = &config.params;
    let cfg = solver(config);
    let scan = critical_points(
        &cfg,
        &CriticalSearch {
            n: p.n,
            ..CriticalSearch::new(p.n)
        },
    )?;
    let order = AnsatzOrder::WithSigma1And2;
    let generic = transport_demo(
        &packet_spec(config, p.beta, p.transport_hbar),
        &p.transport_times,
        &[p.transport_hbar],
        order,
        p.samples,
        config.seed,
    )?;
    let mut table = CsvTable::new(&["case", "t", "centroid_x2", "predicted_x2"]);
    let mut push = |case: &str, rep: &TransportReport| {
        for row in &rep.rows {
            table.push(vec![case.to_owned(), fmt_float(row.t), fmt_float(row.centroid_x2), fmt_float(row.predicted_x2)]);
        }
    };
    push("generic", &generic);
    let drift = generic.rows.iter().filter_map(|r| r.relative_drift_error).fold(0.0, f64::max);
    out.report.metric("speed", generic.speed);
    out.report.at_most("generic_relative_drift_error", drift, 0.03);
    match scan.reports.first() {
        Some(c) => {
            // a critical point of μ̃_n sits on the cone β = ν_c δ^{1/3}
            let beta = c.nu_c * p.delta.cbrt();
            let critical = transport_demo(
                &packet_spec(config, beta, p.transport_hbar),
                &p.transport_times,
                &[p.transport_hbar],
                order,
                p.samples,
                config.seed,
            )?;
            push("critical", &critical);
            let offset = critical.rows.iter().map(|r| r.width_fraction).fold(0.0, f64::max);
            out.report.at_most("critical_offset_in_widths", offset, 0.02);
        }
        None => out.report.holds("critical_point_found", false),
    }
    out.csv("transport.csv", &table)
}

fn smicro(config: &RunConfig, out: &mut RunOutput) -> Result<(), CliError> {
    let p = &config.params;
    let cfg = solver(config);
    let scan = critical_points(&cfg, &CriticalSearch::new(p.n))?;
    let Some(c) = scan.reports.first() else {
        out.report.holds("critical_point_found", false);
        return Ok(());
    };
    let w = p.profile_width;
    let state = ProfileState::sample(p.profile_half_width, p.profile_nodes, |y| gaussian_evolved(w, 0.0, 0.0, y))?;
    let rep = second_microlocal_profile_demo(&cfg, p.n, c.nu_c, &state, p.profile_t, Some(w))?;
    let mut table = CsvTable::new(&["x2", "density_t"]);
    for (x, d) in rep.x2.iter().zip(&rep.density_t) {
        table.push(vec![fmt_float(*x), fmt_float(*d)]);
    }
    out.csv("smicro_profile.csv", &table)?;
    let r = &mut out.report;
    r.metric("coefficient", rep.coefficient);
    r.metric("curvature", rep.curvature);
    r.at_most("relative_mass_drift", (rep.mass_final - rep.mass_initial).abs() / rep.mass_initial, 1e-10);
    r.at_most("analytic_deviation", rep.analytic_deviation.unwrap_or(f64::INFINITY), 1e-6);
    r.at_most("cone_coefficient_deviation", rep.max_coefficient_deviation, 1e-3);
    Ok(())
}

fn strichartz(config: &RunConfig, out: &mut RunOutput) -> Result<(), CliError> {
    let (Some(q), Some(p)) = (config.params.q, config.params.p) else {
        return Err(CliError::Config("strichartz needs both q and p".into()));
    };
    let class = strichartz_admissible(q, p)?;
    let name = serde_json::to_value(class)?.as_str().unwrap_or_default().to_owned();
    let r = &mut out.report;
    r.metric("line_defect", 2.0 / q + 7.0 / p - 3.5);
    r.label("classification", name);
    r.holds("classified", true);
    Ok(())
}

/// Dispersion sweep over `modes × ν`, rows ordered by `(n, ν)` whatever the scheduling.
pub fn sweep(config: &RunConfig) -> Result<CsvTable, CliError> {
    config.validate()?;
    let cfg = solver(config);
    let nus = config.nu_grid();
    let mut modes = config.params.modes.clone();
    modes.sort_unstable();
    modes.dedup();
    if modes.is_empty() || nus.is_empty() {
        return Err(CliError::Config("sweep grid is empty".into()));
    }
    let cells: Vec<(usize, f64)> = modes.iter().flat_map(|&n| nus.iter().map(move |&nu| (n, nu))).collect();
    let rows: Vec<Vec<String>> = cells
        .par_iter()
        .map(|&(n, nu)| match cfg.branch_point(&Symbol::montgomery(nu), n, true) {
            Ok(b) => vec![
                n.to_string(),
                fmt_float(nu),
                fmt_float(b.mu),
                fmt_float(b.dmu),
                fmt_float(b.d2mu.unwrap_or(f64::NAN)),
                fmt_float(b.grid.half_width),
                b.grid.nodes.to_string(),
                "ok".to_owned(),
            ],
            Err(e) => {
                let mut row = vec![n.to_string(), fmt_float(nu)];
                row.extend(std::iter::repeat_n(fmt_float(f64::NAN), 4));
                row.push(String::new());
                row.push(format!("error: {e}"));
                row
            }
        })
        .collect();
    let mut table = CsvTable::new(&["n", "nu", "mu", "dmu_dnu", "d2mu_dnu2", "grid_L", "grid_N", "status"]);
    for r in rows {
        table.push(r);
    }
    Ok(table)
}
