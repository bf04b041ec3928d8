use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pauc_cli::config::{self, SimulateConfig, TestConfig};
use pauc_cli::dataset;
use pauc_cli::error::CliError;
use pauc_cli::presets;
use pauc_cli::report::{self, OutFormat};
use pauc_cli::roc;
use pauc_core::inference::{holm_adjust, run_mct, RngStream};
use pauc_core::simulation::{calibrate_effect, run_power_experiment, run_type1_experiment};

#[derive(Parser)]
#[command(
    name = "pauc",
    version,
    about = "Compare diagnostic markers on trimmed ROC curve areas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for simulation and bootstrap loops (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    out: OutFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Run the multiple contrast test on a trial dataset.
    Test {
        /// CSV file: id column, status column (0/1), marker columns.
        #[arg(long)]
        data: PathBuf,
        /// TOML run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config bootstrap replication count.
        #[arg(long)]
        bootstrap_reps: Option<usize>,
        /// Window grid `p,q;p,q;...`, overriding trim/grid from the config.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Estimate size or power of the test by Monte Carlo simulation.
    Simulate {
        /// TOML scenario configuration (alternative to --preset).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Built-in design: table1, table2, or table3.
        #[arg(long)]
        preset: Option<String>,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the per-group sample size.
        #[arg(long)]
        n: Option<usize>,
        /// Override the number of simulation runs.
        #[arg(long)]
        runs: Option<usize>,
        /// Override the bootstrap replication count per run.
        #[arg(long)]
        bootstrap_reps: Option<usize>,
        /// Override the effect size; needs an effect section in the config.
        #[arg(long)]
        lambda: Option<f64>,
        /// Run a single window `p,q` instead of the configured list.
        #[arg(long)]
        trim: Option<String>,
    },
    /// Emit empirical ROC step curves as plot-ready point lists.
    Roc {
        #[arg(long)]
        data: PathBuf,
        /// Window `p,q`; adds the realized cut points per marker.
        #[arg(long)]
        trim: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    if let Some(workers) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global() {
            eprintln!("error: worker pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command, cli.out) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command, out: OutFormat) -> Result<String, CliError> {
    match command {
        Command::Test { data, config, seed, bootstrap_reps, grid } => {
            cmd_test(&data, &config, seed, bootstrap_reps, grid.as_deref(), out)
        }
        Command::Simulate { config, preset, seed, n, runs, bootstrap_reps, lambda, trim } => {
            let mut cfg = match (&config, &preset) {
                (Some(path), None) => SimulateConfig::from_path(path)?,
                (None, Some(name)) => presets::load(name)?,
                (Some(_), Some(_)) => {
                    return Err(CliError::Usage("pass either --config or --preset, not both".into()))
                }
                (None, None) => {
                    return Err(CliError::Usage("simulate needs --config or --preset".into()))
                }
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(n) = n {
                cfg.group_size = n;
            }
            if let Some(r) = runs {
                cfg.sim_runs = r;
            }
            if let Some(b) = bootstrap_reps {
                cfg.bootstrap_reps = b;
            }
            if let Some(l) = lambda {
                match cfg.effect.as_mut() {
                    Some(e) => e.lambda = l,
                    None => {
                        return Err(CliError::Usage(
                            "--lambda needs an effect section naming the tunable marker".into(),
                        ))
                    }
                }
            }
            if let Some(t) = &trim {
                cfg.trims = vec![config::parse_trim_flag(t)?];
            }
            cmd_simulate(cfg, preset, out)
        }
        Command::Roc { data, trim } => {
            let trim = trim.as_deref().map(config::parse_trim_flag).transpose()?;
            let dataset = dataset::read_csv(&data)?;
            let curves = roc::roc_curves(&dataset.sample, &dataset.marker_names, trim)?;
            let rep = report::RocReport { command: "roc", markers: curves };
            Ok(match out {
                OutFormat::Json => report::to_json(&rep),
                OutFormat::Table => report::roc_table(&rep),
            })
        }
    }
}

fn cmd_test(
    data: &PathBuf,
    config: &PathBuf,
    seed: Option<u64>,
    bootstrap_reps: Option<usize>,
    grid_flag: Option<&str>,
    out: OutFormat,
) -> Result<String, CliError> {
    let dataset = dataset::read_csv(data)?;
    let cfg = TestConfig::from_path(config)?;
    let contrast = cfg.contrast.build(dataset.sample.markers())?;
    let (trims, grid_mode) = match grid_flag {
        Some(text) => (config::parse_grid_flag(text)?, true),
        None => cfg.trims()?,
    };
    let seed = seed.unwrap_or(cfg.seed);
    let reps = bootstrap_reps.unwrap_or(cfg.bootstrap_reps);
    let root = RngStream::new(seed);

    let mut results = Vec::with_capacity(trims.len());
    for (i, &trim) in trims.iter().enumerate() {
        let mct = run_mct(&dataset.sample, &contrast, trim, cfg.delta, reps, root.child(i as u64))?;
        results.push(report::TrimTestResult { p: trim.p(), q: trim.q(), mct });
    }
    let grid = if grid_mode {
        let raw: Vec<f64> = results.iter().map(|r| r.mct.global_p).collect();
        let holm = holm_adjust(&raw)?;
        Some(report::GridSummary { raw_global_p: raw, holm_adjusted_p: holm })
    } else {
        None
    };
    let rep = report::TestReport {
        command: "test",
        markers: dataset.marker_names,
        delta: cfg.delta,
        bootstrap_reps: reps,
        seed,
        results,
        grid,
    };
    Ok(match out {
        OutFormat::Json => report::to_json(&rep),
        OutFormat::Table => report::test_table(&rep),
    })
}

fn cmd_simulate(
    cfg: SimulateConfig,
    preset: Option<String>,
    out: OutFormat,
) -> Result<String, CliError> {
    if cfg.trims.is_empty() {
        return Err(CliError::Usage("trims must not be empty".into()));
    }
    // Every window sees the same stream, so power comparisons across windows
    // ride on shared random numbers.
    let stream = RngStream::new(cfg.seed);
    let mut rows = Vec::with_capacity(cfg.trims.len());
    let mut labels = Vec::new();
    for &trim in &cfg.trims {
        let spec = cfg.scenario(trim)?;
        labels = spec.contrast().labels().to_vec();
        let (effect, spec) = match &cfg.effect {
            Some(e) => {
                if !(1..=spec.markers()).contains(&e.tunable_marker) {
                    return Err(CliError::Usage(format!(
                        "tunable_marker {} out of range 1..={}",
                        e.tunable_marker,
                        spec.markers()
                    )));
                }
                let eff = calibrate_effect(
                    &spec,
                    e.lambda,
                    e.tunable_marker - 1,
                    e.direction.as_deref(),
                )?;
                let spec = spec.with_diseased_mu(e.tunable_marker - 1, eff.mu)?;
                (Some(eff), spec)
            }
            None => (None, spec),
        };
        let report = if effect.is_some() {
            run_power_experiment(&spec, stream)?
        } else {
            run_type1_experiment(&spec, stream)?
        };
        rows.push(report::SimulateRow { p: trim.p(), q: trim.q(), effect, report });
    }
    let rep = report::SimulateReport {
        command: "simulate",
        preset,
        seed: cfg.seed,
        group_size: cfg.group_size,
        delta: cfg.delta,
        bootstrap_reps: cfg.bootstrap_reps,
        sim_runs: cfg.sim_runs,
        labels,
        rows,
    };
    Ok(match out {
        OutFormat::Json => report::to_json(&rep),
        OutFormat::Table => report::simulate_table(&rep),
    })
}
