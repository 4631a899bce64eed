use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use arl_core::experiments::{
    figure_preset, run_point, run_sweep, validate, write_csv, Grid, Outputs, ScenarioParams, SweepRow,
    SweepSpec, SweepVar,
};
use arl_core::geometry::GeometrySpec;
use arl_core::smith_solver::SolverConfig;
use arl_core::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;

#[derive(Parser)]
#[command(name = "arl", version, about = "Angular resolution limit of two closely spaced sources")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single scenario.
    Point {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        outputs: OutputArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Sweep one scenario parameter over a grid.
    Sweep {
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        outputs: OutputArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Compare closed form and numeric solver over a sweep or a figure preset.
    Validate {
        /// Use a figure preset (1..5) instead of --var/--grid.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        preset: Option<u8>,
        #[command(flatten)]
        sweep: OptSweepArgs,
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Maximum allowed relative gap.
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Regenerate the data behind one of the figures.
    Fig {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
        figure: u8,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    /// ula:M=<int>,d=<real> or pattern:<marks>,d=<real> (λ = 1 units).
    #[arg(long, default_value = "ula:M=6,d=0.5")]
    geometry: GeometrySpec,
    #[arg(long, default_value_t = 100)]
    snapshots: usize,
    #[arg(long, default_value_t = 1.0)]
    eps1: f64,
    #[arg(long, default_value_t = 1.0)]
    eps2: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    rho_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    rho_im: f64,
}

impl ScenarioArgs {
    fn params(&self) -> ScenarioParams {
        ScenarioParams {
            geometry: self.geometry.clone(),
            snapshots: self.snapshots,
            eps1: self.eps1,
            eps2: self.eps2,
            sigma2: self.sigma2,
            rho_re: self.rho_re,
            rho_im: self.rho_im,
        }
    }
}

#[derive(Args, Clone)]
#[group(multiple = false)]
struct OutputArgs {
    /// Numeric solver only.
    #[arg(long)]
    numeric: bool,
    /// Closed form only.
    #[arg(long)]
    closed: bool,
    /// Both (default).
    #[arg(long)]
    both: bool,
}

impl OutputArgs {
    fn outputs(&self) -> Outputs {
        match (self.numeric, self.closed) {
            (true, _) => Outputs::Numeric,
            (_, true) => Outputs::Closed,
            _ => Outputs::Both,
        }
    }
}

#[derive(Args, Clone)]
struct SweepArgs {
    /// sigma2, rho-re, rho-im, eps1 or eps2.
    #[arg(long)]
    var: SweepVar,
    /// start:stop:count[:lin|log] or a comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    grid: Grid,
}

#[derive(Args, Clone)]
struct OptSweepArgs {
    #[arg(long)]
    var: Option<SweepVar>,
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<Grid>,
}

#[derive(Args, Clone)]
struct IoArgs {
    /// Output path, or - for stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
    /// Absolute tolerance of the numeric solver on δ.
    #[arg(long, default_value_t = 1e-12)]
    solver_tol: f64,
}

impl IoArgs {
    fn solver(&self) -> SolverConfig {
        SolverConfig { abs_tol: self.solver_tol, ..Default::default() }
    }

    fn emit(&self, rows: &[SweepRow]) -> Result<(), Error> {
        if self.out.as_os_str() == "-" {
            let stdout = io::stdout();
            write_csv(rows, stdout.lock())
        } else {
            let file = File::create(&self.out)
                .map_err(|e| Error::Parse(format!("cannot create {}: {e}", self.out.display())))?;
            write_csv(rows, BufWriter::new(file))
        }
    }
}

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Point { scenario, outputs, io } => {
            let record = run_point(&scenario.params(), outputs.outputs(), &io.solver())?;
            let row = SweepRow { swept_var: "point".into(), value: 0.0, record };
            io.emit(&[row])?;
        }
        Command::Sweep { sweep, scenario, outputs, io } => {
            let spec = SweepSpec::new(sweep.var, sweep.grid, scenario.params(), outputs.outputs());
            let out = run_sweep(&[spec], &io.solver())?;
            warn_all(&out.warnings);
            io.emit(&out.rows)?;
        }
        Command::Validate { preset, sweep, scenario, tol, io } => {
            let specs = match (preset, sweep.var, sweep.grid) {
                (Some(fig), None, None) => figure_preset(fig)?,
                (None, Some(var), Some(grid)) => {
                    vec![SweepSpec::new(var, grid, scenario.params(), Outputs::Both)]
                }
                _ => {
                    return Err(Error::Parse(
                        "validate needs either --preset or both --var and --grid".into(),
                    ))
                }
            };
            let report = validate(&specs, tol, &io.solver())?;
            warn_all(&report.output.warnings);
            for e in &report.excluded {
                eprintln!("warning: excluded from gap statistic: {e}");
            }
            io.emit(&report.output.rows)?;
            let verdict = if report.passed() { "PASS" } else { "FAIL" };
            eprintln!(
                "{verdict}: max relative gap {:e} over {} point(s), threshold {:e}",
                report.max_gap,
                report.points.len(),
                report.threshold
            );
            if !report.passed() {
                return Ok(ExitCode::from(EXIT_VALIDATION));
            }
        }
        Command::Fig { figure, io } => {
            let out = run_sweep(&figure_preset(figure)?, &io.solver())?;
            warn_all(&out.warnings);
            io.emit(&out.rows)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => {
            let _ = io::stdout().flush();
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
