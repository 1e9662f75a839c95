use engel_cli::*;
use std::path::Path;
use std::process::Command;

fn engel() -> Command {
    Command::new(env!("CARGO_BIN_EXE_engel"))
}

fn small_sweep() -> RunConfig {
    let mut c = RunConfig::default();
    c.params.grid_n = Some(512);
    c
}

#[test]
fn identities_pass() {
    let out = run(Subcommand::Identities, &RunConfig::default()).unwrap();
    assert!(out.report.passed(), "{:?}", out.report.checks);
    assert_eq!(out.report.labels["x3_commutator"], "-2 * X1^1 X2^0 X3^0 X4^1");
    let again = run(Subcommand::Identities, &RunConfig::default()).unwrap();
    assert_eq!(out.report.to_json(), again.report.to_json());
}

#[test]
fn subcommand_names_round_trip() {
    for c in Subcommand::ALL {
        assert_eq!(c.name().parse::<Subcommand>().unwrap(), c);
    }
    assert!(matches!("fly".parse::<Subcommand>(), Err(CliError::UnknownSubcommand(_))));
}

#[test]
fn strichartz_classification_from_the_binary() {
    let out = engel().args(["strichartz", "--q", "2", "--p", "2.8"]).output().unwrap();
    assert!(out.status.success());
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.labels["classification"], "allowed");
    let out = engel().args(["strichartz", "--q", "4", "--p", "2"]).output().unwrap();
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.labels["classification"], "not-admissible");
    let out = engel().args(["strichartz", "--q", "1", "--p", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn critical_points_writes_one_minimum() {
    let dir = tempfile::tempdir().unwrap();
    let status = engel().args(["critical-points", "--n", "1", "--out"]).arg(dir.path()).status().unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(dir.path().join("critical_points.json")).unwrap();
    let reports: Vec<engel_core::dispersion::DispersionReport> = serde_json::from_str(&text).unwrap();
    assert_eq!(reports.len(), 1);
    assert!(reports[0].curvature > 0.0);
    assert!(dir.path().join("cone.csv").exists());
    assert!(dir.path().join("critical-points.report.json").exists());
}

#[test]
fn sweep_has_one_row_per_cell_in_order() {
    let table = sweep(&small_sweep()).unwrap();
    assert_eq!(table.rows.len(), 4 * 161);
    assert!(table.rows.iter().all(|r| r[7] == "ok"));
    let keys: Vec<(usize, f64)> = table.rows.iter().map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap())).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(keys[0], (1, -4.0));
    assert_eq!(keys.last().copied(), Some((4, 4.0)));
}

#[test]
fn empty_sweep_is_an_error() {
    let mut c = small_sweep();
    c.params.modes.clear();
    assert!(sweep(&c).is_err());
}

#[test]
fn sweep_bytes_do_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(&config, r#"{"params":{"modes":[1,3],"nu_step":0.25,"grid_n":512}}"#).unwrap();
    let mut outputs = Vec::new();
    for workers in ["1", "4", "4"] {
        let out = dir.path().join(format!("run{}", outputs.len()));
        let status = engel()
            .env("ENGEL_NUM_WORKERS", workers)
            .arg("sweep")
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(out.join("sweep.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 33);
    // seventeen significant digits
    let mu = text.lines().nth(1).unwrap().split(',').nth(2).unwrap();
    assert_eq!(mu.split('e').next().unwrap().replace(['-', '.'], "").len(), 17);
}

#[test]
fn malformed_input_exits_with_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"params":{"n":0}}"#).unwrap();
    let out = engel().arg("identities").arg("--config").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&bad, "{").unwrap();
    assert_eq!(engel().arg("identities").arg("--config").arg(&bad).status().unwrap().code(), Some(2));
    assert!(!engel().arg("fly").status().unwrap().success());
    let out = engel().env("ENGEL_NUM_WORKERS", "zero").arg("identities").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_check_gives_nonzero_exit() {
    // an impossible slope window must fail the run, not the parse
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    std::fs::write(&config, r#"{"params":{"samples":200,"full_slope_window":[10,11]}}"#).unwrap();
    let out = engel().arg("residual-scaling").arg("--config").arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!report.checks.iter().find(|c| c.name == "full_order_slope").unwrap().passed);
    assert_eq!(report.metrics.keys().filter(|k| k.starts_with("slope_")).count(), 3);
}

#[test]
fn config_round_trips_and_overrides() {
    let mut c = RunConfig::default();
    c.seed = 11;
    c.params.hbar_ladder = vec![0.2, 0.1, 0.05, 0.025];
    let back = RunConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
    assert_eq!(back, c);
    assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
    assert!(RunConfig::from_json(r#"{"params":{"nu_range":[1,-1]}}"#).is_err());
    assert_eq!(RunConfig::default().nu_grid().len(), 161);
}

#[test]
fn fuzz_seeds_replay() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let targets: [(&str, fn(&[u8])); 3] = [
        ("pbw_text", fuzzing::pbw_text),
        ("run_config", fuzzing::run_config_json),
        ("dispersion_report", fuzzing::dispersion_report_json),
    ];
    for (dir, entry) in targets {
        let mut seen = 0;
        for f in std::fs::read_dir(root.join(dir)).unwrap() {
            entry(&std::fs::read(f.unwrap().path()).unwrap());
            seen += 1;
        }
        assert!(seen >= 3, "{dir}: {seen} seeds");
    }
}

#[test]
fn float_format_round_trips() {
    for x in [0.1, -1.0 / 3.0, 1e-300, 6.02e23, 0.0] {
        assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
    }
    assert_eq!(fmt_float(f64::NAN), "NaN");
}
