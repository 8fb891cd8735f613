use clap::{Args, Parser, Subcommand, ValueEnum};
use hetnet_cli::config::{parse_modes, Command, Scenario};
use hetnet_cli::output::{write_report, Format};
use hetnet_cli::pipeline::{run, Overrides};
use hetnet_cli::{presets, CliError, EXIT_VALIDATION_FAILED};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

/// Analytics for cache-enabled three-tier networks with clustered small cells.
#[derive(Parser)]
#[command(name = "hetnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Scenario file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo realizations for `validate`.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// clustered, baseline or both.
    #[arg(long, global = true)]
    mode: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Association and case probabilities.
    Assoc,
    /// Ergodic rates per case and tier.
    Rates,
    /// State, arrival, service-rate and load matrices.
    Traffic,
    /// Queue metrics under DPS and EPS.
    Qos,
    /// Analytic results against simulation.
    Validate,
    /// Run a built-in figure scenario (fig3 to fig7).
    Figure { id: String },
}

fn load_scenario(g: &Global, preset: Option<&str>) -> Result<Scenario, CliError> {
    let text = match (&g.config, preset) {
        (Some(path), _) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?,
        (None, Some(id)) => presets::preset(id)
            .ok_or_else(|| CliError::Usage(format!("unknown figure {id:?}; known: {}", presets::names().join(", "))))?
            .to_string(),
        (None, None) => return Err(CliError::Usage("--config is required".into())),
    };
    Ok(Scenario::parse(&text)?)
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let g = &cli.global;
    let (scenario, command) = match &cli.command {
        Cmd::Figure { id } => {
            let s = load_scenario(g, Some(id))?;
            let c = s.command.ok_or_else(|| CliError::Usage(format!("figure {id} names no command")))?;
            (s, c)
        }
        other => {
            let c = match other {
                Cmd::Assoc => Command::Assoc,
                Cmd::Rates => Command::Rates,
                Cmd::Traffic => Command::Traffic,
                Cmd::Qos => Command::Qos,
                _ => Command::Validate,
            };
            (load_scenario(g, None)?, c)
        }
    };
    let modes = match &g.mode {
        None => None,
        Some(m) => Some(parse_modes(m).ok_or_else(|| CliError::Usage(format!("unknown mode {m:?}")))?),
    };
    let ov = Overrides { modes, seed: g.seed, samples: g.samples };
    let (report, failed) = run(command, &scenario, &ov)?;
    let format = match g.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    match &g.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_report(&mut w, &report, format)?;
            w.flush()?;
        }
        None => {
            let mut w = io::stdout().lock();
            write_report(&mut w, &report, format)?;
            w.flush()?;
        }
    }
    Ok(failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("hetnet: validation checks failed");
            ExitCode::from(EXIT_VALIDATION_FAILED as u8)
        }
        Err(e) => {
            eprintln!("hetnet: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
