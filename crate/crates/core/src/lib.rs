//! Techno-economic price bounds for secondary spectrum markets.
//!
//! The carrier model computes a cost floor: the constant wholesale price per
//! Mbyte at which a carrier recovers the NPV of its infrastructure, operating
//! and licensing costs over the modeling horizon. The MNO model computes a
//! ceiling: the largest wholesale price at which a retail operator still
//! covers its own costs from subscriber revenue. Where the two curves cross
//! as data demand grows is the break-even demand level.
//!
//! Units are fixed throughout: money in millions of USD, traffic in millions
//! of Mbytes, prices in USD per Mbyte.
//!
//! The crate is `no_std` and only needs `alloc`. Scenario file parsing, CSV
//! output and the command-line interface live in the `spectrum-price` crate.

#![no_std]

extern crate alloc;

pub mod buildout;
pub mod carrier;
pub mod error;
pub mod finance;
pub mod mno;
pub mod scenario;
pub mod sensitivity;

pub use buildout::{BuildoutPlan, CoverageObligation};
pub use carrier::{BoundKind, CapacityReport, CapacityYear, CostBreakdown, PriceBound};
pub use error::{ModelError, Result};
pub use finance::{CashflowSeries, FinanceParams};
pub use mno::{BreakEven, MnoParams, ProfitabilityReport};
pub use scenario::{CapacityParams, DemandSeries, Scenario, ScenarioKind, UnitCosts};
pub use sensitivity::{Comparison, Grid, SweepOutput, SweepResult, SweepRow, SweepSpec};
