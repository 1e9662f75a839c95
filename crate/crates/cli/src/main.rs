use clap::{Args, Parser};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use engel_cli::{run, CliError, RunConfig, Subcommand};

#[derive(Parser)]
#[command(name = "engel", version, about = "Reproducible experiments on the Engel group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for the report and data files; the report goes to stdout otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Mode index.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Comma-separated ℏ values.
    #[arg(long, global = true, value_delimiter = ',')]
    hbar_ladder: Option<Vec<f64>>,
    #[arg(long, global = true)]
    grid_n: Option<usize>,
    #[arg(long, global = true)]
    grid_l: Option<f64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(clap::Subcommand)]
enum Command {
    /// Exact group and enveloping-algebra identities.
    Identities,
    /// Montgomery branch with derivatives over the ν range.
    Dispersion,
    /// Critical points of one branch and the cone curvature check.
    CriticalPoints,
    /// Plancherel constant from several Gaussian kernels.
    Plancherel,
    /// Residual of the wave-packet ansatz across the ℏ ladder.
    ResidualScaling,
    /// Centroid drift of generic and critical packets.
    Transport,
    /// One-dimensional effective-mass evolution at the critical point.
    SmicroProfile,
    /// Classify a Strichartz exponent pair.
    Strichartz {
        /// Time exponent; `inf` is accepted.
        #[arg(long)]
        q: f64,
        #[arg(long)]
        p: f64,
    },
    /// Deterministic dispersion sweep over modes and ν.
    Sweep,
}

fn configure(cli: &Cli) -> Result<(Subcommand, RunConfig), CliError> {
    let mut config = match &cli.common.config {
        Some(path) => RunConfig::from_json(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    let c = &cli.common;
    let p = &mut config.params;
    if let Some(n) = c.n {
        p.n = n;
    }
    if let Some(l) = &c.hbar_ladder {
        p.hbar_ladder = l.clone();
    }
    if c.grid_n.is_some() {
        p.grid_n = c.grid_n;
    }
    if c.grid_l.is_some() {
        p.grid_l = c.grid_l;
    }
    if let Some(t) = c.tol {
        p.tol = t;
    }
    if let Some(s) = c.seed {
        config.seed = s;
    }
    if c.out.is_some() {
        config.out = c.out.clone();
    }
    let command = match cli.command {
        Command::Identities => Subcommand::Identities,
        Command::Dispersion => Subcommand::Dispersion,
        Command::CriticalPoints => Subcommand::CriticalPoints,
        Command::Plancherel => Subcommand::Plancherel,
        Command::ResidualScaling => Subcommand::ResidualScaling,
        Command::Transport => Subcommand::Transport,
        Command::SmicroProfile => Subcommand::SmicroProfile,
        Command::Strichartz { q, p: pp } => {
            config.params.q = Some(q);
            config.params.p = Some(pp);
            Subcommand::Strichartz
        }
        Command::Sweep => Subcommand::Sweep,
    };
    config.experiment = Some(command.name().to_owned());
    config.validate()?;
    Ok((command, config))
}

fn write_outputs(dir: &Path, out: &engel_cli::RunOutput) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    for f in &out.files {
        std::fs::write(dir.join(&f.name), &f.bytes)?;
    }
    std::fs::write(dir.join(format!("{}.report.json", out.report.experiment)), out.report.to_json())?;
    Ok(())
}

fn workers() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("ENGEL_NUM_WORKERS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("ENGEL_NUM_WORKERS={raw} is not a count")))?;
    if n == 0 {
        return Err(CliError::Config("ENGEL_NUM_WORKERS must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = workers().and_then(|()| configure(&cli)).and_then(|(command, config)| {
        let out = run(command, &config)?;
        match &config.out {
            Some(dir) => write_outputs(dir, &out)?,
            None => print!("{}", out.report.to_json()),
        }
        Ok(out.report)
    });
    match result {
        Ok(report) => {
            eprintln!("{}: {:.3}s", report.experiment, report.wall_time.as_secs_f64());
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("check failed: {} = {} (want {})", c.name, c.value, c.condition);
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
