use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sta_transport::commands;
use sta_transport::config::{ProtocolChoice, RunConfig, SweepTarget};
use sta_transport::trap::{Inversion, TrapKind};
use sta_transport::{Error, Result};

/// Shortcut-to-adiabaticity transport in anharmonic traps.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve protocol coefficients and write the designed trajectory.
    Design(Flags),
    /// Classical transport and residual energy.
    Classical(Flags),
    /// Wave-packet transport and fidelity.
    Quantum(Flags),
    /// Figure sweeps over xi/d.
    Sweep(Flags),
}

#[derive(Args)]
struct Flags {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    protocol: Option<String>,
    #[arg(long)]
    trap: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    u: Option<f64>,
    #[arg(long = "xi-over-d", allow_negative_numbers = true)]
    xi_over_d: Option<f64>,
    /// perturbative | exact
    #[arg(long)]
    inversion: Option<String>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// fig2 | fig3 | fig4
    #[arg(long = "sweep-target")]
    sweep_target: Option<String>,
    #[arg(long = "grid-points")]
    grid_points: Option<usize>,
    #[arg(long = "ode-steps")]
    ode_steps: Option<usize>,
    #[arg(long = "time-steps")]
    time_steps: Option<usize>,
}

impl Flags {
    fn resolve(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(p) = &self.protocol {
            config.protocol = p.parse::<ProtocolChoice>()?;
        }
        if let Some(t) = &self.trap {
            config.trap = t.parse::<TrapKind>()?;
        }
        if let Some(i) = &self.inversion {
            config.inversion = i.parse::<Inversion>()?;
        }
        if let Some(t) = &self.sweep_target {
            config.sweep_target = Some(t.parse::<SweepTarget>()?);
        }
        config.u = self.u.unwrap_or(config.u);
        config.xi_over_d = self.xi_over_d.unwrap_or(config.xi_over_d);
        config.grid_points = self.grid_points.unwrap_or(config.grid_points);
        config.ode_steps = self.ode_steps.unwrap_or(config.ode_steps);
        config.time_steps = self.time_steps.unwrap_or(config.time_steps);
        if self.output.is_some() {
            config.output = self.output.clone();
        }
        config.validate()?;
        Ok(config)
    }
}

fn run(command: Command) -> Result<Vec<String>> {
    let flags = match &command {
        Command::Design(f) | Command::Classical(f) | Command::Quantum(f) | Command::Sweep(f) => f,
    };
    let config = flags.resolve()?;
    let mut csv: Box<dyn Write> = match &config.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let (summary, warnings) = match command {
        Command::Design(_) => {
            let r = commands::design(&config, &mut csv)?;
            (r.to_string(), r.warnings())
        }
        Command::Classical(_) => {
            let r = commands::classical(&config, &mut csv)?;
            (r.to_string(), Vec::new())
        }
        Command::Quantum(_) => {
            let r = commands::quantum(&config, &mut csv)?;
            (r.to_string(), r.warning.into_iter().collect())
        }
        Command::Sweep(_) => {
            let target = config
                .sweep_target
                .ok_or_else(|| Error::Config("sweep needs --sweep-target or sweep_target".into()))?;
            let r = commands::sweep(&config, target, &mut csv)?;
            (r.to_string(), r.warnings())
        }
    };
    csv.flush()?;
    // keep standard output clean for CSV when no file was given
    if config.output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(warnings)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(warnings) => {
            for w in warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::NoSolution { scanned, .. } = &e {
                eprintln!("objective trace (a1, value):");
                for (a1, g) in scanned {
                    eprintln!("  {a1:+.6} {g:+.6e}");
                }
            }
            ExitCode::from(if e.is_configuration() { 1 } else { 2 })
        }
    }
}
