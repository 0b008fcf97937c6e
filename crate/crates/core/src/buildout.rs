//! Coverage obligations to per-year cell-site schedules.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageObligation {
    /// Fraction of the population the license requires to be covered.
    pub required_population_coverage: f64,
    /// Year count by which the requirement must be met (1 = end of first year).
    pub deadline_year: u32,
    pub population: f64,
    pub urban_fraction: f64,
    pub persons_per_cell_urban: f64,
    pub persons_per_cell_rural: f64,
}

impl CoverageObligation {
    pub fn validate(&self, horizon_years: u32) -> Result<()> {
        let c = self.required_population_coverage;
        if !(c > 0.0 && c <= 1.0) {
            return Err(ModelError::invalid(
                "obligation.required_population_coverage",
                alloc::format!("{c} outside (0, 1]"),
            ));
        }
        if self.deadline_year < 1 || self.deadline_year > horizon_years {
            return Err(ModelError::invalid(
                "obligation.deadline_year",
                alloc::format!("{} outside [1, {horizon_years}]", self.deadline_year),
            ));
        }
        if !(self.population.is_finite() && self.population >= 0.0) {
            return Err(ModelError::invalid("obligation.population", "must be >= 0"));
        }
        if !(0.0..=1.0).contains(&self.urban_fraction) {
            return Err(ModelError::invalid(
                "obligation.urban_fraction",
                alloc::format!("{} outside [0, 1]", self.urban_fraction),
            ));
        }
        for (name, v) in [
            (
                "obligation.persons_per_cell_urban",
                self.persons_per_cell_urban,
            ),
            (
                "obligation.persons_per_cell_rural",
                self.persons_per_cell_rural,
            ),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ModelError::invalid(name, alloc::format!("{v} must be > 0")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildoutPlan {
    pub cumulative_cells: Vec<u64>,
    pub new_cells: Vec<u64>,
    pub shared: bool,
    /// Divisor applied to the capital cost of each cell.
    pub sharing_carrier_count: u32,
}

impl BuildoutPlan {
    /// Builds a plan from cumulative counts, which must be non-decreasing.
    pub fn from_cumulative(cumulative_cells: Vec<u64>) -> Self {
        let mut prev = 0;
        let new_cells = cumulative_cells
            .iter()
            .map(|&c| {
                debug_assert!(c >= prev, "cumulative cells must be non-decreasing");
                let n = c - prev;
                prev = c;
                n
            })
            .collect();
        BuildoutPlan {
            cumulative_cells,
            new_cells,
            shared: false,
            sharing_carrier_count: 1,
        }
    }

    pub fn horizon(&self) -> usize {
        self.cumulative_cells.len()
    }

    /// Raises the schedule so year `t` has at least `required[t]` cells,
    /// keeping it non-decreasing. Sharing settings are kept.
    pub fn raised_to(&self, required: &[u64]) -> Self {
        let mut running = 0;
        let cumulative = self
            .cumulative_cells
            .iter()
            .zip(required)
            .map(|(&c, &r)| {
                running = running.max(c).max(r);
                running
            })
            .collect();
        BuildoutPlan {
            shared: self.shared,
            sharing_carrier_count: self.sharing_carrier_count,
            ..BuildoutPlan::from_cumulative(cumulative)
        }
    }
}

/// Float noise allowance when turning a real-valued cell count into an
/// integer, so that e.g. 500.0000000001 cells is 500 and not 501.
const CEIL_SLACK: f64 = 1e-9;

pub(crate) fn ceil_count(x: f64) -> u64 {
    if x <= 0.0 {
        return 0;
    }
    libm::ceil(x - CEIL_SLACK * x.max(1.0)) as u64
}

/// Minimum number of cells covering `coverage_target` of the population when
/// urban areas are covered first at urban density and the remainder at rural
/// density.
pub fn cells_required(obligation: &CoverageObligation, coverage_target: f64) -> Result<u64> {
    if !(0.0..=1.0).contains(&coverage_target) {
        return Err(ModelError::invalid(
            "coverage_target",
            alloc::format!("{coverage_target} outside [0, 1]"),
        ));
    }
    let persons = coverage_target * obligation.population;
    let urban = obligation.urban_fraction * obligation.population;
    if persons <= urban {
        return Ok(ceil_count(persons / obligation.persons_per_cell_urban));
    }
    Ok(ceil_count(urban / obligation.persons_per_cell_urban)
        + ceil_count((persons - urban) / obligation.persons_per_cell_rural))
}

/// Linear construction of `total_cells`: equal yearly additions reaching the
/// total at the end of year `deadline_year`, flat afterwards. Each year's
/// cumulative count is the floor of the ideal line, so the deadline year
/// absorbs the rounding remainder.
pub fn linear_schedule_of(
    total_cells: u64,
    deadline_year: u32,
    horizon: usize,
) -> Result<BuildoutPlan> {
    if deadline_year < 1 || deadline_year as usize > horizon {
        return Err(ModelError::invalid(
            "obligation.deadline_year",
            alloc::format!("{deadline_year} outside [1, {horizon}]"),
        ));
    }
    let deadline = u128::from(deadline_year);
    let cumulative = (0..horizon)
        .map(|t| {
            let year = (t as u128 + 1).min(deadline);
            (u128::from(total_cells) * year / deadline) as u64
        })
        .collect();
    Ok(BuildoutPlan::from_cumulative(cumulative))
}

/// Linear schedule for the obligation's own required coverage.
pub fn linear_schedule(obligation: &CoverageObligation, horizon: usize) -> Result<BuildoutPlan> {
    let cells = cells_required(obligation, obligation.required_population_coverage)?;
    linear_schedule_of(cells, obligation.deadline_year, horizon)
}

/// Marks the plan as shared between `carrier_count` carriers. Cell counts are
/// unchanged; the cost model divides each cell's capital cost by the count.
pub fn apply_sharing(plan: &BuildoutPlan, carrier_count: u32) -> Result<BuildoutPlan> {
    if carrier_count < 1 {
        return Err(ModelError::invalid("carrier_count", "must be at least 1"));
    }
    if carrier_count == 1 {
        return Ok(plan.clone());
    }
    Ok(BuildoutPlan {
        shared: true,
        sharing_carrier_count: carrier_count,
        ..plan.clone()
    })
}
