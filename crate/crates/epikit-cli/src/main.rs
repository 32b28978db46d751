use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use epikit_cli::config::{OutputFormat, ScenarioConfig};
use epikit_cli::{registry, resolve, run_scenario, write_output};

#[derive(Parser)]
#[command(
    name = "epikit",
    about = "Scenario sweeps for epigraphical stability analysis",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a registered scenario and write its result rows.
    Run {
        /// Scenario id (see `list`).
        #[arg(long)]
        scenario: Option<String>,
        /// JSON config file; fields override the scenario defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Approximation indices, comma separated.
        #[arg(long, value_delimiter = ',')]
        nu: Option<Vec<u32>>,
        /// Truncation radius.
        #[arg(long)]
        rho: Option<f64>,
        /// Base grid step for function tables.
        #[arg(long = "grid-step")]
        grid_step: Option<f64>,
        /// Output format.
        #[arg(long, value_parser = parse_format)]
        format: Option<OutputFormat>,
        /// Output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// List registered scenarios.
    List,
    /// Validate a config file without running it.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(format!("unknown format '{other}' (expected csv or json)")),
    }
}

/// Cap the worker pool when EPIKIT_THREADS is set.
fn init_threads() {
    if let Ok(value) = std::env::var("EPIKIT_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for def in registry() {
                println!("{:<22} {}", def.id, def.description);
            }
            ExitCode::SUCCESS
        }
        Command::Check { config } => match load_config(Some(&config), None) {
            Ok(cfg) => match resolve(&cfg) {
                Ok(resolved) => {
                    println!(
                        "ok: scenario '{}', nu {:?}, rho {}, grid step {}, checks {:?}",
                        resolved.id,
                        resolved.nu_list,
                        resolved.rho,
                        resolved.grid_step,
                        resolved.checks
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("config error: {e}");
                    ExitCode::from(EXIT_CONFIG)
                }
            },
            Err(e) => {
                eprintln!("config error: {e}");
                ExitCode::from(EXIT_CONFIG)
            }
        },
        Command::Run {
            scenario,
            config,
            nu,
            rho,
            grid_step,
            format,
            out,
        } => {
            let mut cfg = match load_config(config.as_deref(), scenario.as_deref()) {
                Ok(cfg) => cfg,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            if let Some(nu) = nu {
                cfg.nu_list = Some(nu);
            }
            if let Some(rho) = rho {
                cfg.rho = Some(rho);
            }
            if let Some(h) = grid_step {
                cfg.grid_step = Some(h);
            }
            if let Some(fmt) = format {
                cfg.format = Some(fmt);
            }
            let fmt = cfg.format.unwrap_or(OutputFormat::Csv);
            let result = match run_scenario(&cfg) {
                Ok(result) => result,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            if let Err(e) = write_output(&result, fmt, &out) {
                eprintln!("write error: {e}");
                return ExitCode::from(EXIT_CONFIG);
            }
            let code = result.exit_code();
            if code != 0 {
                eprintln!(
                    "scenario '{}' finished with {} rows, exit {code}",
                    result.scenario,
                    result.rows.len()
                );
            }
            ExitCode::from(code as u8)
        }
    }
}

fn load_config(
    path: Option<&std::path::Path>,
    scenario: Option<&str>,
) -> anyhow::Result<ScenarioConfig> {
    match (path, scenario) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)?;
            let mut cfg = ScenarioConfig::from_json(&text)?;
            // An explicit --scenario must agree with the config id.
            if let Some(id) = scenario {
                if cfg.id.is_empty() {
                    cfg.id = id.to_string();
                } else if cfg.id != id {
                    anyhow::bail!("--scenario '{id}' conflicts with config id '{}'", cfg.id);
                }
            }
            Ok(cfg)
        }
        (None, Some(id)) => Ok(ScenarioConfig::bare(id)),
        (None, None) => anyhow::bail!("either --scenario or --config is required"),
    }
}
