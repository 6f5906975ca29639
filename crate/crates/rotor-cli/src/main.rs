//! Command-line entry point.
//!
//! Exit codes: 0 on success, 1 on usage or spec errors, 2 when an
//! invariant monitor trips during a run.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rotor_cli::spec::SeedRange;
use rotor_cli::{fit_exponent, run_experiment, ExperimentSpec, Overrides};

#[derive(Parser)]
#[command(name = "rotor", version, about = "Rotor walk experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment spec (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Seed range `a..b` (end exclusive), overriding the spec.
    #[arg(long, value_parser = SeedRange::parse_cli)]
    seeds: Option<SeedRange>,
    /// Step budget override.
    #[arg(long)]
    budget: Option<u64>,
    /// Coordinate bound override for lattice walks.
    #[arg(long)]
    world_limit: Option<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment spec and write its reports.
    Run(RunArgs),
    /// Fit a growth exponent to two CSV columns.
    Fit {
        /// CSV file with a header row.
        #[arg(long)]
        csv: PathBuf,
        /// Column holding t.
        #[arg(long, default_value = "t")]
        x_col: String,
        /// Column holding the value.
        #[arg(long, default_value = "range_size")]
        y_col: String,
    },
    /// Render the raster output of a render spec.
    Render(RunArgs),
    /// Validate a spec file (or a graph file) without running it.
    Validate {
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Finite graph in the text format `n m` + edge lines.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Let clap print help/version normally; usage errors exit 1.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run(args) | Command::Render(args) => {
            let spec = ExperimentSpec::load(&args.spec)?;
            let overrides = Overrides {
                seeds: args.seeds,
                budget: args.budget,
                world_limit: args.world_limit,
            };
            let outcome = run_experiment(&spec, &args.out, overrides)?;
            for file in &outcome.files {
                println!("wrote {}", file.display());
            }
            if !outcome.violations.is_empty() {
                for v in &outcome.violations {
                    eprintln!("invariant violation: {v}");
                }
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fit { csv, x_col, y_col } => {
            let text = std::fs::read_to_string(&csv)?;
            let mut lines = text.lines();
            let header: Vec<&str> = lines
                .next()
                .ok_or_else(|| anyhow::anyhow!("empty CSV"))?
                .split(',')
                .collect();
            let xi = header
                .iter()
                .position(|&c| c == x_col)
                .ok_or_else(|| anyhow::anyhow!("no column `{x_col}` in {header:?}"))?;
            let yi = header
                .iter()
                .position(|&c| c == y_col)
                .ok_or_else(|| anyhow::anyhow!("no column `{y_col}` in {header:?}"))?;
            let mut series = Vec::new();
            for line in lines {
                let cells: Vec<&str> = line.split(',').collect();
                series.push((cells[xi].parse::<f64>()?, cells[yi].parse::<f64>()?));
            }
            let fit = fit_exponent(&series)?;
            println!(
                "slope {:.6} intercept {:.6} r2 {:.6} points {}",
                fit.slope,
                fit.intercept,
                fit.r_squared,
                series.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { spec, graph } => {
            let mut checked = false;
            if let Some(path) = spec {
                let s = ExperimentSpec::load(&path)?;
                println!("spec `{}` is valid", s.name);
                checked = true;
            }
            if let Some(path) = graph {
                let text = std::fs::read_to_string(&path)?;
                let g = rotor::FiniteGraph::parse(&text)?;
                let report = rotor::validate_eulerian(&g);
                println!(
                    "graph: {} vertices, {} directed edges: {report}",
                    g.vertex_count(),
                    g.edge_count()
                );
                if !report.ok() {
                    return Ok(ExitCode::from(2));
                }
                checked = true;
            }
            if !checked {
                anyhow::bail!("validate needs --spec or --graph");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
