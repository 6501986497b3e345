use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use thermoplate::kernels::EvalMode;
use thermoplate::presets::DataTriple;
use thermoplate::reduction::Thermo1dParams;
use thermoplate::singular_limit::{default_t_grid, epsilon_grid, Order};
use thermoplate::Preset;
use thermoplate_cli::commands;
use thermoplate_cli::config::{parse_list, RunConfig};
use thermoplate_cli::format::Table;
use thermoplate_cli::CliError;

#[derive(Parser)]
#[command(name = "thermoplate", version, about = "Spectral experiments for the thermoelastic plate equations")]
struct Cli {
    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file; defaults to `$THERMOPLATE_OUT/<table>.csv`, else stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataArgs {
    /// Profile used for every data slot not set explicitly.
    #[arg(long, default_value = "gaussian")]
    preset: String,
    #[arg(long)]
    u0: Option<String>,
    #[arg(long)]
    u1: Option<String>,
    #[arg(long)]
    theta0: Option<String>,
    /// Multiplies θ₀ after the slot is chosen.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    theta0_scale: f64,
}

impl DataArgs {
    fn triple(&self) -> Result<DataTriple, CliError> {
        let preset = |name: &str| -> Result<Preset, CliError> {
            name.parse().map_err(|e: thermoplate::Error| CliError::Usage(e.to_string()))
        };
        let base = preset(&self.preset)?;
        let slot = |o: &Option<String>| -> Result<Preset, CliError> { o.as_deref().map_or(Ok(base), preset) };
        Ok(DataTriple::new(
            slot(&self.u0)?.radial(),
            slot(&self.u1)?.radial(),
            slot(&self.theta0)?.radial().scaled(self.theta0_scale),
        ))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Stabilized,
    Lagrange,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    First,
    Second,
}

#[derive(Subcommand)]
enum Command {
    /// Roots of the characteristic cubic and derived constants.
    Roots,
    /// Kernel values on a (t, r) grid.
    Kernels {
        #[arg(long, required = true)]
        t: String,
        #[arg(long, required = true)]
        r: String,
        #[arg(long, value_enum, default_value = "stabilized")]
        mode: Mode,
    },
    /// Profile multipliers J0..J3 on a (t, r) grid.
    Profiles {
        #[arg(long, required = true)]
        t: String,
        #[arg(long, required = true)]
        r: String,
    },
    /// Large-time exponents of the displacement norm.
    Rates {
        #[arg(long, default_value = "1,2,3,4,5,6")]
        n: String,
        #[arg(long, default_value = "constant-profile")]
        preset: String,
    },
    /// Growth / bounded / decay classification for n = 1..6.
    Table1 {
        #[arg(long, default_value = "1,2,3,4,5,6")]
        n: String,
    },
    /// Exponents of the profile error against the solution exponents.
    ProfileError {
        #[arg(long, default_value = "1,2,3,4")]
        n: String,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Sup-in-time singular-limit errors over an ε grid.
    SingularLimit {
        #[arg(long, default_value_t = 3)]
        n: u32,
        /// Comma-separated ε values (default 10^-1 … 10^-3, five points).
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, value_enum, default_value = "first")]
        order: OrderArg,
        /// Also report the displacement L² error.
        #[arg(long)]
        l2: bool,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Closed-form solution against the RK4 oracle.
    OracleCompare {
        #[arg(long, required = true)]
        t: String,
        #[arg(long, required = true)]
        r: String,
        #[arg(long, default_value = "gaussian")]
        preset: String,
    },
    /// Reduction of 1D thermoelasticity to a third-order equation.
    Thermo1d {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        g1: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        g2: f64,
        #[arg(long, required = true)]
        r: String,
        #[arg(long, required = true)]
        t: String,
        #[arg(long, default_value = "gaussian")]
        preset: String,
    },
    /// Runs the experiment described by a key = value file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// `key=value` overrides applied after the file.
        #[arg(long = "set")]
        overrides: Vec<String>,
        /// Print the effective configuration instead of running it.
        #[arg(long)]
        print_config: bool,
    },
}

fn floats(v: &str, what: &str) -> Result<Vec<f64>, CliError> {
    parse_list(v, what)
}

fn dims(v: &str) -> Result<Vec<u32>, CliError> {
    parse_list(v, "n")
}

fn preset_triple(name: &str) -> Result<DataTriple, CliError> {
    let p: Preset = name.parse().map_err(|e: thermoplate::Error| CliError::Usage(e.to_string()))?;
    Ok(thermoplate::preset_data(p))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    if let Some(t) = cli.tol {
        if t.is_nan() || t <= 0.0 {
            return Err(CliError::Usage(format!("--tol {t} must be > 0")));
        }
    }
    let tol = |default: f64| cli.tol.unwrap_or(default);
    let rate_grid = thermoplate::rates::dyadic_grid();
    let mut out = cli.out.clone();
    let table: Table = match &cli.command {
        Command::Roots => commands::roots()?,
        Command::Kernels { t, r, mode } => {
            let mode = match mode {
                Mode::Stabilized => EvalMode::Stabilized,
                Mode::Lagrange => EvalMode::LagrangeSum,
            };
            commands::kernels(&floats(t, "t")?, &floats(r, "r")?, mode)?
        }
        Command::Profiles { t, r } => commands::profiles(&floats(t, "t")?, &floats(r, "r")?)?,
        Command::Rates { n, preset } => commands::rates(&dims(n)?, &preset_triple(preset)?, &rate_grid, tol(1e-8))?,
        Command::Table1 { n } => commands::table1(&dims(n)?, &rate_grid, tol(1e-8))?,
        Command::ProfileError { n, data } => commands::profile_error(&dims(n)?, &data.triple()?, &rate_grid, tol(1e-8))?,
        Command::SingularLimit { n, eps, order, l2, data } => {
            let eps = match eps {
                Some(e) => floats(e, "eps")?,
                None => epsilon_grid(),
            };
            let order = match order {
                OrderArg::First => Order::First,
                OrderArg::Second => Order::Second,
            };
            let run = commands::singular_limit(*n, &data.triple()?, order, *l2, &eps, &default_t_grid(), tol(1e-6))?;
            if let Some(s) = run.energy_slope {
                eprintln!("energy slope vs ε: {s:.4}");
            }
            if let Some(s) = run.l2_slope {
                eprintln!("L² slope vs ε: {s:.4}");
            }
            run.table
        }
        Command::OracleCompare { t, r, preset } => {
            commands::oracle_compare(&floats(t, "t")?, &floats(r, "r")?, &preset_triple(preset)?)?
        }
        Command::Thermo1d { alpha, kappa, g1, g2, r, t, preset } => {
            let p = Thermo1dParams::new(*alpha, *kappa, *g1, *g2).map_err(|e| CliError::Usage(e.to_string()))?;
            commands::thermo1d(&p, &floats(r, "r")?, &floats(t, "t")?, &preset_triple(preset)?)?
        }
        Command::Run { config, overrides, print_config } => {
            let text = std::fs::read_to_string(config)?;
            let mut overrides = overrides.clone();
            if let Some(t) = cli.tol {
                overrides.push(format!("tol={t:e}"));
            }
            let cfg = RunConfig::parse(&text, &overrides)?;
            if *print_config {
                print!("{}", cfg.serialize());
                return Ok(());
            }
            if out.is_none() {
                out = cfg.output.clone();
            }
            commands::run(&cfg)?
        }
    };
    if let Some(path) = table.emit(out.as_deref())? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("thermoplate: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
