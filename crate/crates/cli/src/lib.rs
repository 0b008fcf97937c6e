//! Scenario files, CSV reports and the `specprice` command-line interface
//! for the spectrum price model in `spectrum-price-core`.

pub mod cli;
pub mod report;
pub mod scenario_file;

pub use cli::run;
pub use report::{emit_csv, fmt_num, CsvTable};
pub use scenario_file::{
    load_mno, load_scenario, parse_grid, parse_scenario, LoadError, ScenarioBundle,
};
