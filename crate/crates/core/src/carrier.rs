//! Carrier cost model: the minimum wholesale price per Mbyte.
//!
//! A carrier sells capacity as its only revenue, so
//!
//! ```text
//! P = (1 + margin) * [NPV(infrastructure) + NPV(opex) + license] / Q
//! ```
//!
//! where `Q` is discounted traffic. The network is the linear coverage
//! schedule raised, year by year, to the number of cells needed to carry
//! that year's traffic.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::buildout::{
    apply_sharing, ceil_count, cells_required, linear_schedule_of, BuildoutPlan,
};
use crate::error::{ModelError, Result};
use crate::finance::{amortize, npv, weighted_traffic, CashflowSeries};
use crate::scenario::{Scenario, ScenarioKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Floor,
    Ceiling,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Floor => "floor",
            BoundKind::Ceiling => "ceiling",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceBound {
    pub kind: BoundKind,
    pub usd_per_mbyte: f64,
    /// Discounted traffic the price was computed over, millions of Mbytes.
    pub q_weighted: f64,
    pub scenario_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub infrastructure_npv: f64,
    pub operating_npv: f64,
    pub license_npv: f64,
    /// Infrastructure, operating, license; sums to 1.
    pub shares: [f64; 3],
}

impl CostBreakdown {
    pub fn total(&self) -> f64 {
        self.infrastructure_npv + self.operating_npv + self.license_npv
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityYear {
    pub year: usize,
    pub cells: u64,
    pub sellable_mil_mbytes: f64,
    pub demand_mil_mbytes: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub years: Vec<CapacityYear>,
}

impl CapacityReport {
    pub fn all_feasible(&self) -> bool {
        self.years.iter().all(|y| y.feasible)
    }
}

/// Population share the carrier covers: the regulatory requirement, or in
/// the most-likely case at least every urban area.
pub fn coverage_target(scenario: &Scenario) -> f64 {
    let required = scenario.obligation.required_population_coverage;
    match scenario.kind {
        ScenarioKind::Base => required,
        ScenarioKind::MostLikely => required.max(scenario.obligation.urban_fraction),
    }
}

/// Linear buildout meeting the coverage target by the deadline, before any
/// capacity-driven additions.
pub fn coverage_plan(scenario: &Scenario) -> Result<BuildoutPlan> {
    let cells = cells_required(&scenario.obligation, coverage_target(scenario))?;
    let plan = linear_schedule_of(cells, scenario.obligation.deadline_year, scenario.horizon())?;
    apply_sharing(&plan, scenario.capacity.sharing_carrier_count)
}

/// Cells needed each year to carry that year's total traffic.
pub fn capacity_cells(scenario: &Scenario) -> Vec<u64> {
    let per_cell = scenario.capacity.cell_capacity_mil_mbytes();
    scenario
        .demand
        .total_traffic()
        .iter()
        .map(|q| ceil_count(q / per_cell))
        .collect()
}

/// The plan the cost model prices: coverage schedule raised to capacity.
pub fn network_plan(scenario: &Scenario) -> Result<BuildoutPlan> {
    scenario.demand.check_horizon(scenario.horizon())?;
    Ok(coverage_plan(scenario)?.raised_to(&capacity_cells(scenario)))
}

fn check_plan(scenario: &Scenario, plan: &BuildoutPlan) -> Result<()> {
    if plan.horizon() != scenario.horizon() || plan.new_cells.len() != scenario.horizon() {
        return Err(ModelError::invalid(
            "plan",
            alloc::format!(
                "plan covers {} years, scenario horizon is {}",
                plan.horizon(),
                scenario.horizon()
            ),
        ));
    }
    scenario.demand.check_horizon(scenario.horizon())
}

/// Yearly amortized capital payments. Purchases in year `t` are priced at
/// `(1 - decline)^t` of the year-0 unit cost and paid off in level payments
/// over `min(equipment life, horizon - t)` years starting in year `t`. Cell
/// capex is split across sharing carriers; core network capex (per new
/// subscriber) is not.
pub fn infrastructure_cost(scenario: &Scenario, plan: &BuildoutPlan) -> Result<CashflowSeries> {
    check_plan(scenario, plan)?;
    let horizon = scenario.horizon();
    let rate = scenario.finance.discount_rate;
    let costs = &scenario.costs;
    let divisor = if plan.shared {
        f64::from(plan.sharing_carrier_count.max(1))
    } else {
        1.0
    };
    let subscribers = &scenario.demand.subscribers;

    let mut payments = alloc::vec![0.0; horizon];
    let mut prev_subs = 0.0;
    for t in 0..horizon {
        let new_subs = (subscribers[t] - prev_subs).max(0.0);
        prev_subs = prev_subs.max(subscribers[t]);
        let price_index = libm::pow(1.0 - scenario.finance.cost_decline_rate, t as f64);
        let purchase = price_index
            * (plan.new_cells[t] as f64 * costs.cell_site_capex / divisor
                + new_subs * costs.core_network_capex_per_subscriber);
        if purchase == 0.0 {
            continue;
        }
        let life = costs.equipment_life_years.min((horizon - t) as u32);
        let payment = amortize(purchase, rate, life)?;
        for p in &mut payments[t..t + life as usize] {
            *p += payment;
        }
    }
    Ok(CashflowSeries::new(payments))
}

/// Cell maintenance per cumulative cell plus general opex per subscriber.
pub fn operating_expense(scenario: &Scenario, plan: &BuildoutPlan) -> Result<CashflowSeries> {
    check_plan(scenario, plan)?;
    let costs = &scenario.costs;
    Ok(plan
        .cumulative_cells
        .iter()
        .zip(&scenario.demand.subscribers)
        .map(|(&cells, &subs)| {
            cells as f64 * costs.cell_opex_per_year + subs * costs.opex_per_subscriber_per_year
        })
        .collect::<Vec<_>>()
        .into())
}

/// NPVs of infrastructure, operating and license costs, in that order.
pub fn cost_components(scenario: &Scenario) -> Result<[f64; 3]> {
    let plan = network_plan(scenario)?;
    let rate = scenario.finance.discount_rate;
    Ok([
        npv(&infrastructure_cost(scenario, &plan)?, rate)?,
        npv(&operating_expense(scenario, &plan)?, rate)?,
        scenario.license_fee_musd,
    ])
}

pub fn floor_price(scenario: &Scenario) -> Result<PriceBound> {
    let q = weighted_traffic(
        &scenario.demand,
        scenario.horizon(),
        scenario.finance.discount_rate,
    )?;
    if q <= 0.0 {
        return Err(ModelError::DegenerateDemand);
    }
    let total: f64 = cost_components(scenario)?.iter().sum();
    Ok(PriceBound {
        kind: BoundKind::Floor,
        usd_per_mbyte: (1.0 + scenario.finance.gross_margin) * total / q,
        q_weighted: q,
        scenario_name: scenario.name.clone(),
    })
}

pub fn cost_breakdown(scenario: &Scenario) -> Result<CostBreakdown> {
    let [infrastructure_npv, operating_npv, license_npv] = cost_components(scenario)?;
    let total = infrastructure_npv + operating_npv + license_npv;
    if total <= 0.0 {
        return Err(ModelError::DegenerateScenario);
    }
    let infra_share = infrastructure_npv / total;
    let license_share = license_npv / total;
    Ok(CostBreakdown {
        infrastructure_npv,
        operating_npv,
        license_npv,
        // remainder keeps the three shares summing to one
        shares: [
            infra_share,
            1.0 - infra_share - license_share,
            license_share,
        ],
    })
}

/// Per-year sellable traffic of `plan` against demand.
pub fn capacity_check(scenario: &Scenario, plan: &BuildoutPlan) -> CapacityReport {
    let per_cell = scenario.capacity.cell_capacity_mil_mbytes();
    let demand = scenario.demand.total_traffic();
    CapacityReport {
        years: plan
            .cumulative_cells
            .iter()
            .zip(demand)
            .enumerate()
            .map(|(year, (&cells, demand_mil_mbytes))| {
                let sellable_mil_mbytes = cells as f64 * per_cell;
                CapacityYear {
                    year,
                    cells,
                    sellable_mil_mbytes,
                    demand_mil_mbytes,
                    feasible: demand_mil_mbytes <= sellable_mil_mbytes,
                }
            })
            .collect(),
    }
}
