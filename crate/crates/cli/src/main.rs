use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use leafgauge_cli::commands::{self, parse_grid, BuildOptions};
use leafgauge_cli::fixture::ConfigOverrides;
use leafgauge_cli::run::Overrides;
use leafgauge_cli::{CliError, EXIT_INPUT};

/// Leaf-constant homogeneous gauge functions for Levi-flat polynomials on C^2.
#[derive(Parser)]
#[command(name = "leafgauge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Default)]
struct Settings {
    /// Base point as Re z,Im z,Re w,Im w
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    point: Option<[f64; 4]>,
    /// Homogeneity degree of the gauge
    #[arg(long)]
    degree: Option<u32>,
    /// Sampling seed for verification
    #[arg(long)]
    seed: Option<u64>,
    /// Verification samples per check
    #[arg(long)]
    samples: Option<usize>,
    /// Absolute and relative ODE tolerance
    #[arg(long)]
    tol_ode: Option<f64>,
    /// Residual tolerance for T
    #[arg(long)]
    tol_root: Option<f64>,
    /// Chart radius relative to |x|, in (0, 1)
    #[arg(long)]
    chart_radius: Option<f64>,
}

impl Settings {
    fn overrides(&self) -> Overrides {
        Overrides {
            point: self.point,
            degree: self.degree,
            config: ConfigOverrides {
                seed: self.seed,
                samples: self.samples,
                tol_ode: self.tol_ode,
                tol_root: self.tol_root,
                chart_radius: self.chart_radius,
                ..ConfigOverrides::default()
            },
        }
    }
}

#[derive(clap::Args)]
struct Output {
    /// Write the run record (fixture, gauge parameters, report) as JSON
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print JSON instead of a table
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the hypotheses on a fixture polynomial
    CheckPoly {
        fixture: PathBuf,
        #[command(flatten)]
        settings: Settings,
    },
    /// Print the two candidate leaf fields of a fixture polynomial
    DeriveField {
        fixture: PathBuf,
        #[command(flatten)]
        settings: Settings,
    },
    /// Construct the gauge at the base point and verify it
    BuildGauge {
        fixture: PathBuf,
        #[command(flatten)]
        settings: Settings,
        #[command(flatten)]
        output: Output,
        /// Dump T and g on a grid in the transversal plane as CSV
        #[arg(long)]
        grid_csv: Option<PathBuf>,
        #[arg(long, default_value_t = 11)]
        grid_size: usize,
        /// Grid half-width relative to |x|
        #[arg(long, default_value_t = 0.2)]
        grid_span: f64,
    },
    /// Re-run verification from a fixture or a saved run record
    Verify {
        file: PathBuf,
        #[command(flatten)]
        settings: Settings,
        #[command(flatten)]
        output: Output,
    },
    /// Dump points of the leaf through the base point as CSV
    TraceLeaf {
        fixture: PathBuf,
        #[command(flatten)]
        settings: Settings,
        /// Grid of flow times, KxK
        #[arg(long, default_value = "5x5", value_parser = parse_grid)]
        grid: usize,
        /// Flow-time half-width relative to |x| / |V(x)|
        #[arg(long, default_value_t = 0.1)]
        span: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_point(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    <[f64; 4]>::try_from(parts)
        .map_err(|v| format!("expected 4 comma-separated reals, got {}", v.len()))
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::CheckPoly { fixture, settings } => {
            commands::check_poly(&fixture, &settings.overrides(), out)
        }
        Command::DeriveField { fixture, settings } => {
            commands::derive_field(&fixture, &settings.overrides(), out)
        }
        Command::BuildGauge {
            fixture,
            settings,
            output,
            grid_csv,
            grid_size,
            grid_span,
        } => {
            let opts = BuildOptions {
                out: output.out,
                json: output.json,
                grid_csv,
                grid_size,
                grid_span,
            };
            commands::build_gauge(&fixture, &settings.overrides(), &opts, out)
        }
        Command::Verify {
            file,
            settings,
            output,
        } => {
            let opts = BuildOptions {
                out: output.out,
                json: output.json,
                ..BuildOptions::default()
            };
            commands::verify(&file, &settings.overrides(), &opts, out)
        }
        Command::TraceLeaf {
            fixture,
            settings,
            grid,
            span,
            out: path,
        } => commands::trace(
            &fixture,
            &settings.overrides(),
            grid,
            span,
            path.as_deref(),
            out,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = dispatch(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("leafgauge: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
