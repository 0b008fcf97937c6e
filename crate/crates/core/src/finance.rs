//! Discounting and amortization kernels.
//!
//! Discount convention: the flow at year index 0 is undiscounted, the flow at
//! year `t` is multiplied by `(1 + rate)^-t`. With this convention a level
//! payment stream at years `1..=n` discounts back exactly to its principal.

use alloc::vec::Vec;
use core::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::scenario::DemandSeries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinanceParams {
    /// Fraction per year, used both for amortization and for discounting.
    pub discount_rate: f64,
    pub horizon_years: u32,
    /// Markup on total cost in the floor price.
    pub gross_margin: f64,
    /// Yearly decline of equipment unit costs.
    pub cost_decline_rate: f64,
}

impl FinanceParams {
    pub fn validate(&self) -> Result<()> {
        in_range("finance.discount_rate", self.discount_rate, 0.0, 1.0)?;
        in_range("finance.gross_margin", self.gross_margin, 0.0, 10.0)?;
        in_range(
            "finance.cost_decline_rate",
            self.cost_decline_rate,
            0.0,
            1.0,
        )?;
        if self.horizon_years < 1 {
            return Err(ModelError::invalid(
                "finance.horizon_years",
                "must be at least 1",
            ));
        }
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        self.horizon_years as usize
    }
}

/// Checks `lo <= value < hi`.
pub(crate) fn in_range(field: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !value.is_finite() || value < lo || value >= hi {
        return Err(ModelError::invalid(
            field,
            alloc::format!("{value} outside [{lo}, {hi})"),
        ));
    }
    Ok(())
}

/// Yearly amounts in millions of USD, index 0 is the first modeled year.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CashflowSeries(Vec<f64>);

impl CashflowSeries {
    pub fn new(amounts: Vec<f64>) -> Self {
        CashflowSeries(amounts)
    }

    pub fn zeros(len: usize) -> Self {
        CashflowSeries(alloc::vec![0.0; len])
    }

    pub fn amounts(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

impl Deref for CashflowSeries {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for CashflowSeries {
    fn from(amounts: Vec<f64>) -> Self {
        CashflowSeries(amounts)
    }
}

/// `(1 + rate)^-year`.
pub fn discount_factor(rate: f64, year: usize) -> f64 {
    libm::pow(1.0 + rate, -(year as f64))
}

fn check_rate(rate: f64) -> Result<()> {
    if !rate.is_finite() || rate < 0.0 {
        return Err(ModelError::invalid(
            "rate",
            alloc::format!("{rate} must be finite and >= 0"),
        ));
    }
    Ok(())
}

/// Net present value of `flows` at `rate`, year 0 undiscounted.
pub fn npv(flows: &[f64], rate: f64) -> Result<f64> {
    check_rate(rate)?;
    let mut sum = 0.0;
    for (t, &amount) in flows.iter().enumerate() {
        if !amount.is_finite() {
            return Err(ModelError::invalid(
                "flows",
                alloc::format!("non-finite amount {amount} at year {t}"),
            ));
        }
        sum += amount * discount_factor(rate, t);
    }
    Ok(sum)
}

/// Level yearly payment that repays `capex` over `life_years` at `rate`.
pub fn amortize(capex: f64, rate: f64, life_years: u32) -> Result<f64> {
    check_rate(rate)?;
    if !capex.is_finite() || capex < 0.0 {
        return Err(ModelError::invalid(
            "capex",
            alloc::format!("{capex} must be finite and >= 0"),
        ));
    }
    if life_years < 1 {
        return Err(ModelError::invalid("life_years", "must be at least 1"));
    }
    if rate == 0.0 {
        return Ok(capex / f64::from(life_years));
    }
    Ok(capex * rate / (1.0 - discount_factor(rate, life_years as usize)))
}

/// Discounted sum of total yearly traffic (voice + data), same convention as
/// [`npv`], so the denominator of a price is on the same footing as the
/// discounted costs in its numerator.
pub fn weighted_traffic(demand: &DemandSeries, horizon: usize, rate: f64) -> Result<f64> {
    demand.check_horizon(horizon)?;
    npv(&demand.total_traffic(), rate)
}
