//! Scenario inputs for the carrier and MNO models.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::buildout::CoverageObligation;
use crate::error::{ModelError, Result};
use crate::finance::{in_range, FinanceParams};

/// Base: carriers cover only what the regulator requires and build their own
/// sites. Most likely: carriers cover at least every urban area and may share
/// sites, at a lower interference-limited capacity constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Base,
    MostLikely,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Base => "base",
            ScenarioKind::MostLikely => "most_likely",
        }
    }
}

/// Per-year subscribers and traffic. Traffic is in millions of Mbytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemandSeries {
    pub subscribers: Vec<f64>,
    pub voice_mbytes: Vec<f64>,
    pub data_mbytes: Vec<f64>,
}

impl DemandSeries {
    pub fn zeros(horizon: usize) -> Self {
        DemandSeries {
            subscribers: alloc::vec![0.0; horizon],
            voice_mbytes: alloc::vec![0.0; horizon],
            data_mbytes: alloc::vec![0.0; horizon],
        }
    }

    pub fn total_traffic(&self) -> Vec<f64> {
        self.voice_mbytes
            .iter()
            .zip(&self.data_mbytes)
            .map(|(v, d)| v + d)
            .collect()
    }

    /// Undiscounted traffic over the whole horizon.
    pub fn total_traffic_sum(&self) -> f64 {
        self.voice_mbytes.iter().sum::<f64>() + self.data_mbytes.iter().sum::<f64>()
    }

    /// Same demand with data traffic multiplied by `factor`; voice and
    /// subscribers unchanged.
    pub fn with_data_scaled(&self, factor: f64) -> Self {
        DemandSeries {
            data_mbytes: self.data_mbytes.iter().map(|d| d * factor).collect(),
            ..self.clone()
        }
    }

    pub fn check_horizon(&self, horizon: usize) -> Result<()> {
        for (name, series) in [
            ("demand.subscribers", &self.subscribers),
            ("demand.voice_mbytes", &self.voice_mbytes),
            ("demand.data_mbytes", &self.data_mbytes),
        ] {
            if series.len() != horizon {
                return Err(ModelError::invalid(
                    name,
                    alloc::format!("length {} does not match horizon {horizon}", series.len()),
                ));
            }
        }
        Ok(())
    }

    pub fn validate(&self, horizon: usize) -> Result<()> {
        self.check_horizon(horizon)?;
        for (name, series) in [
            ("demand.subscribers", &self.subscribers),
            ("demand.voice_mbytes", &self.voice_mbytes),
            ("demand.data_mbytes", &self.data_mbytes),
        ] {
            if let Some((t, v)) = series
                .iter()
                .enumerate()
                .find(|(_, v)| !v.is_finite() || **v < 0.0)
            {
                return Err(ModelError::invalid(
                    name,
                    alloc::format!("entry {t} is {v}, must be finite and >= 0"),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityParams {
    /// Spectrum held per carrier, MHz.
    pub spectrum_mhz: f64,
    /// System capacity in Mbps per MHz per cell.
    pub capacity_constant: f64,
    /// Fraction of the theoretical capacity that is sellable over a year.
    pub utilization: f64,
    /// Number of carriers splitting the capital cost of each cell site.
    pub sharing_carrier_count: u32,
}

pub const SECONDS_PER_YEAR: f64 = 365.0 * 86_400.0;

impl CapacityParams {
    /// Sellable traffic of one cell over one year, millions of Mbytes.
    pub fn cell_capacity_mil_mbytes(&self) -> f64 {
        // Mbps -> Mbytes/s, times seconds per year, in millions
        self.spectrum_mhz * self.capacity_constant * self.utilization / 8.0 * SECONDS_PER_YEAR / 1e6
    }

    pub fn validate(&self) -> Result<()> {
        positive("capacity.spectrum_mhz", self.spectrum_mhz)?;
        positive("capacity.capacity_constant", self.capacity_constant)?;
        if !(self.utilization > 0.0 && self.utilization <= 1.0) {
            return Err(ModelError::invalid(
                "capacity.utilization",
                alloc::format!("{} outside (0, 1]", self.utilization),
            ));
        }
        if self.sharing_carrier_count < 1 {
            return Err(ModelError::invalid(
                "capacity.sharing_carrier_count",
                "must be at least 1",
            ));
        }
        Ok(())
    }
}

/// Unit costs at year 0, millions of USD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitCosts {
    pub cell_site_capex: f64,
    pub core_network_capex_per_subscriber: f64,
    pub cell_opex_per_year: f64,
    pub opex_per_subscriber_per_year: f64,
    pub equipment_life_years: u32,
}

impl UnitCosts {
    pub fn validate(&self) -> Result<()> {
        non_negative("unit_costs.cell_site_capex", self.cell_site_capex)?;
        non_negative(
            "unit_costs.core_network_capex_per_subscriber",
            self.core_network_capex_per_subscriber,
        )?;
        non_negative("unit_costs.cell_opex_per_year", self.cell_opex_per_year)?;
        non_negative(
            "unit_costs.opex_per_subscriber_per_year",
            self.opex_per_subscriber_per_year,
        )?;
        if self.equipment_life_years < 1 {
            return Err(ModelError::invalid(
                "unit_costs.equipment_life_years",
                "must be at least 1",
            ));
        }
        Ok(())
    }

    /// Every money amount multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        UnitCosts {
            cell_site_capex: self.cell_site_capex * k,
            core_network_capex_per_subscriber: self.core_network_capex_per_subscriber * k,
            cell_opex_per_year: self.cell_opex_per_year * k,
            opex_per_subscriber_per_year: self.opex_per_subscriber_per_year * k,
            equipment_life_years: self.equipment_life_years,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub kind: ScenarioKind,
    pub finance: FinanceParams,
    pub obligation: CoverageObligation,
    pub demand: DemandSeries,
    pub capacity: CapacityParams,
    pub costs: UnitCosts,
    /// Year-0 license payment, millions of USD.
    pub license_fee_musd: f64,
}

impl Scenario {
    pub fn horizon(&self) -> usize {
        self.finance.horizon()
    }

    pub fn validate(&self) -> Result<()> {
        self.finance.validate()?;
        self.obligation.validate(self.finance.horizon_years)?;
        self.demand.validate(self.horizon())?;
        self.capacity.validate()?;
        self.costs.validate()?;
        non_negative("license_fee_musd", self.license_fee_musd)?;
        Ok(())
    }

    /// Copy with data traffic multiplied by `factor`.
    pub fn with_data_scaled(&self, factor: f64) -> Self {
        Scenario {
            demand: self.demand.with_data_scaled(factor),
            ..self.clone()
        }
    }
}

fn non_negative(field: &str, v: f64) -> Result<()> {
    in_range(field, v, 0.0, f64::INFINITY)
}

fn positive(field: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(ModelError::invalid(
            field,
            alloc::format!("{v} must be > 0"),
        ));
    }
    Ok(())
}
