//! `specprice` command-line interface.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 model error
//! (degenerate demand or cost, no break-even in range).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spectrum_price_core::carrier::{
    capacity_check, cost_breakdown, coverage_plan, floor_price, network_plan,
};
use spectrum_price_core::mno::{
    break_even_demand, ceiling_price, profitability_report, DEFAULT_DEMAND_SCALE_RANGE,
};
use spectrum_price_core::sensitivity::{compare_scenarios, sweep, SweepOutput, SweepSpec};
use spectrum_price_core::ModelError;

use crate::report::{emit_csv, CapacityTable, NamedBreakdown};
use crate::scenario_file::{load_mno, load_scenario, parse_grid, LoadError, ScenarioBundle};

#[derive(Debug, Parser)]
#[command(
    name = "specprice",
    version,
    about = "Price bounds for secondary spectrum markets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// MNO parameters overriding the scenario's `mno` block: a JSON file or inline JSON.
    #[arg(long)]
    mno: Option<String>,
    /// Output file, `-` for standard output (the default).
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Carrier cost floor in USD per Mbyte.
    Floor(Common),
    /// MNO willingness-to-pay ceiling in USD per Mbyte.
    Ceiling(Common),
    /// Break-even demand and profitability at projected demand.
    Breakeven {
        #[command(flatten)]
        common: Common,
        /// Data-demand multiplier bracket `lo:hi`.
        #[arg(long)]
        range: Option<String>,
    },
    /// NPV of infrastructure, operating and license costs with shares.
    Breakdown(Common),
    /// One-parameter sweep.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Dotted parameter path, e.g. `unit_costs.opex_per_subscriber_per_year`.
        #[arg(long)]
        param: String,
        /// `min:max:step` or `a,b,c`; defaults to the scenario's sweep_defaults.
        #[arg(long)]
        grid: Option<String>,
        /// Comma-separated subset of floor,ceiling,break_even,breakdown.
        #[arg(long, default_value = "floor,ceiling")]
        outputs: String,
    },
    /// Floor-price gap between two scenarios over a demand-multiplier grid.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Alternative scenario JSON file.
        #[arg(long)]
        alt: PathBuf,
        /// Demand multipliers; defaults to the scenario's demand.data_multiplier grid.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Yearly capacity of the coverage buildout against demand.
    Capacity(Common),
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_model_error() => 2,
            _ => 1,
        }
    }
}

fn load(common: &Common) -> Result<ScenarioBundle, CliError> {
    let mut bundle = load_scenario(&common.scenario)?;
    if let Some(spec) = &common.mno {
        bundle.mno = load_mno(spec)?;
    }
    Ok(bundle)
}

fn parse_range(text: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("--range `{text}` must be lo:hi"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

fn grid_for(
    bundle: &ScenarioBundle,
    given: Option<&str>,
    path: &str,
) -> Result<spectrum_price_core::Grid, CliError> {
    let text = given.or_else(|| bundle.default_grid(path)).ok_or_else(|| {
        CliError::Usage(format!(
            "--grid is required: scenario has no default grid for `{path}`"
        ))
    })?;
    parse_grid(text).map_err(CliError::Usage)
}

fn execute(command: &Command) -> Result<(String, &Common), CliError> {
    Ok(match command {
        Command::Floor(common) => {
            let b = load(common)?;
            (emit_csv(&[floor_price(&b.scenario)?][..]), common)
        }
        Command::Ceiling(common) => {
            let b = load(common)?;
            (emit_csv(&[ceiling_price(&b.scenario, &b.mno)?][..]), common)
        }
        Command::Breakeven { common, range } => {
            let b = load(common)?;
            let range = range
                .as_deref()
                .map(parse_range)
                .transpose()?
                .unwrap_or(DEFAULT_DEMAND_SCALE_RANGE);
            // surface a missing crossing as a model error
            break_even_demand(&b.scenario, &b.mno, range)?;
            (
                emit_csv(&profitability_report(&b.scenario, &b.mno, range)?),
                common,
            )
        }
        Command::Breakdown(common) => {
            let b = load(common)?;
            let breakdown = cost_breakdown(&b.scenario)?;
            let table = NamedBreakdown {
                scenario_name: &b.scenario.name,
                breakdown: &breakdown,
            };
            (emit_csv(&table), common)
        }
        Command::Sweep {
            common,
            param,
            grid,
            outputs,
        } => {
            let b = load(common)?;
            let outputs = outputs
                .split(',')
                .map(|o| {
                    SweepOutput::parse(o.trim())
                        .ok_or_else(|| CliError::Usage(format!("unknown sweep output `{o}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let spec = SweepSpec {
                parameter_path: param.clone(),
                grid: grid_for(&b, grid.as_deref(), param)?,
                outputs,
            };
            let result = sweep(&b.scenario, &b.mno, &spec).map_err(|e| match e {
                ModelError::InvalidSpec(msg) => CliError::Usage(msg),
                other => other.into(),
            })?;
            (emit_csv(&result), common)
        }
        Command::Compare { common, alt, grid } => {
            let base = load(common)?;
            let alt = load_scenario(alt)?;
            let values = grid_for(&base, grid.as_deref(), "demand.data_multiplier")?
                .values()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            (
                emit_csv(&compare_scenarios(&base.scenario, &alt.scenario, &values)?),
                common,
            )
        }
        Command::Capacity(common) => {
            let b = load(common)?;
            let coverage = capacity_check(&b.scenario, &coverage_plan(&b.scenario)?);
            let network = network_plan(&b.scenario)?;
            let table = CapacityTable {
                coverage: &coverage,
                network_cells: &network.cumulative_cells,
            };
            (emit_csv(&table), common)
        }
    })
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code. Results go to `stdout` unless `--out` names a file.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };

    let result = execute(&cli.command).and_then(|(text, common)| match common.out.as_deref() {
        None | Some("-") => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Output {
                path: "-".into(),
                source,
            }),
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Output {
            path: path.into(),
            source,
        }),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
