//! One-at-a-time parameter sweeps and scenario comparisons.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::carrier::{cost_breakdown, floor_price};
use crate::error::{ModelError, Result};
use crate::mno::{break_even_demand, ceiling_price, MnoParams, DEFAULT_DEMAND_SCALE_RANGE};
use crate::scenario::Scenario;

/// Parameter paths accepted by [`sweep`]. `demand.data_multiplier` scales
/// projected data traffic; every other path names a field of the scenario
/// file.
pub const PARAMETER_PATHS: &[&str] = &[
    "finance.discount_rate",
    "finance.gross_margin",
    "finance.cost_decline_rate",
    "obligation.required_population_coverage",
    "obligation.deadline_year",
    "obligation.population",
    "obligation.urban_fraction",
    "obligation.persons_per_cell_urban",
    "obligation.persons_per_cell_rural",
    "demand.data_multiplier",
    "capacity.spectrum_mhz",
    "capacity.capacity_constant",
    "capacity.utilization",
    "capacity.sharing_carrier_count",
    "unit_costs.cell_site_capex",
    "unit_costs.core_network_capex_per_subscriber",
    "unit_costs.cell_opex_per_year",
    "unit_costs.opex_per_subscriber_per_year",
    "unit_costs.equipment_life_years",
    "license_fee_musd",
    "mno.retail_price_voice_per_mbyte",
    "mno.retail_price_data_per_mbyte",
    "mno.cost_per_subscriber_per_year",
    "mno.gross_margin",
];

enum Slot<'a> {
    Real(&'a mut f64),
    Count(&'a mut u32),
    DataMultiplier,
}

fn slot<'a>(scenario: &'a mut Scenario, mno: &'a mut MnoParams, path: &str) -> Result<Slot<'a>> {
    use Slot::*;
    let s = scenario;
    Ok(match path {
        "finance.discount_rate" => Real(&mut s.finance.discount_rate),
        "finance.gross_margin" => Real(&mut s.finance.gross_margin),
        "finance.cost_decline_rate" => Real(&mut s.finance.cost_decline_rate),
        "obligation.required_population_coverage" => {
            Real(&mut s.obligation.required_population_coverage)
        }
        "obligation.deadline_year" => Count(&mut s.obligation.deadline_year),
        "obligation.population" => Real(&mut s.obligation.population),
        "obligation.urban_fraction" => Real(&mut s.obligation.urban_fraction),
        "obligation.persons_per_cell_urban" => Real(&mut s.obligation.persons_per_cell_urban),
        "obligation.persons_per_cell_rural" => Real(&mut s.obligation.persons_per_cell_rural),
        "demand.data_multiplier" => DataMultiplier,
        "capacity.spectrum_mhz" => Real(&mut s.capacity.spectrum_mhz),
        "capacity.capacity_constant" => Real(&mut s.capacity.capacity_constant),
        "capacity.utilization" => Real(&mut s.capacity.utilization),
        "capacity.sharing_carrier_count" => Count(&mut s.capacity.sharing_carrier_count),
        "unit_costs.cell_site_capex" => Real(&mut s.costs.cell_site_capex),
        "unit_costs.core_network_capex_per_subscriber" => {
            Real(&mut s.costs.core_network_capex_per_subscriber)
        }
        "unit_costs.cell_opex_per_year" => Real(&mut s.costs.cell_opex_per_year),
        "unit_costs.opex_per_subscriber_per_year" => {
            Real(&mut s.costs.opex_per_subscriber_per_year)
        }
        "unit_costs.equipment_life_years" => Count(&mut s.costs.equipment_life_years),
        "license_fee_musd" => Real(&mut s.license_fee_musd),
        "mno.retail_price_voice_per_mbyte" => Real(&mut mno.retail_price_voice_per_mbyte),
        "mno.retail_price_data_per_mbyte" => Real(&mut mno.retail_price_data_per_mbyte),
        "mno.cost_per_subscriber_per_year" => Real(&mut mno.cost_per_subscriber_per_year),
        "mno.gross_margin" => Real(&mut mno.gross_margin),
        _ => {
            return Err(ModelError::InvalidSpec(alloc::format!(
                "unknown parameter path `{path}`"
            )))
        }
    })
}

/// Current value of a parameter. The data multiplier is always 1.
pub fn get_parameter(scenario: &Scenario, mno: &MnoParams, path: &str) -> Result<f64> {
    let (mut s, mut m) = (scenario.clone(), mno.clone());
    Ok(match slot(&mut s, &mut m, path)? {
        Slot::Real(v) => *v,
        Slot::Count(v) => f64::from(*v),
        Slot::DataMultiplier => 1.0,
    })
}

/// Sets one parameter and revalidates the scenario and MNO parameters.
pub fn set_parameter(
    scenario: &mut Scenario,
    mno: &mut MnoParams,
    path: &str,
    value: f64,
) -> Result<()> {
    match slot(scenario, mno, path)? {
        Slot::Real(v) => *v = value,
        Slot::Count(v) => {
            if !(value >= 0.0 && value <= f64::from(u32::MAX) && libm::trunc(value) == value) {
                return Err(ModelError::InvalidSpec(alloc::format!(
                    "`{path}` takes whole numbers, got {value}"
                )));
            }
            *v = value as u32;
        }
        Slot::DataMultiplier => {
            if !(value.is_finite() && value >= 0.0) {
                return Err(ModelError::InvalidSpec(alloc::format!(
                    "data multiplier must be >= 0, got {value}"
                )));
            }
            *scenario = scenario.with_data_scaled(value);
        }
    }
    scenario.validate()?;
    mno.validate()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Grid {
    Explicit(Vec<f64>),
    /// `min, min + step, ...` up to `max` inclusive.
    Stepped {
        min: f64,
        max: f64,
        step: f64,
    },
}

impl Grid {
    pub fn values(&self) -> Result<Vec<f64>> {
        let values = match *self {
            Grid::Explicit(ref v) => v.clone(),
            Grid::Stepped { min, max, step } => {
                if !(min.is_finite()
                    && max.is_finite()
                    && step.is_finite()
                    && step > 0.0
                    && min <= max)
                {
                    return Err(ModelError::InvalidSpec(alloc::format!(
                        "bad stepped grid {min}:{max}:{step}"
                    )));
                }
                let n = libm::floor((max - min) / step + 1e-9) as usize;
                (0..=n).map(|i| min + step * i as f64).collect()
            }
        };
        if values.is_empty() {
            return Err(ModelError::InvalidSpec("grid is empty".to_string()));
        }
        if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ModelError::InvalidSpec(
                "grid values must be finite and strictly increasing".to_string(),
            ));
        }
        Ok(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepOutput {
    Floor,
    Ceiling,
    BreakEven,
    Breakdown,
}

impl SweepOutput {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "floor" => SweepOutput::Floor,
            "ceiling" => SweepOutput::Ceiling,
            "break_even" | "breakeven" => SweepOutput::BreakEven,
            "breakdown" => SweepOutput::Breakdown,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter_path: String,
    pub grid: Grid,
    pub outputs: Vec<SweepOutput>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub floor: Option<f64>,
    pub ceiling: Option<f64>,
    /// Break-even total traffic, `None` when requested but not bracketed.
    pub break_even_mil_mbytes: Option<f64>,
    /// Infrastructure, operating, license shares.
    pub shares: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub scenario_name: String,
    pub parameter_path: String,
    /// Sorted, without duplicates.
    pub outputs: Vec<SweepOutput>,
    pub rows: Vec<SweepRow>,
}

fn evaluate(
    scenario: &Scenario,
    mno: &MnoParams,
    value: f64,
    outputs: &[SweepOutput],
) -> Result<SweepRow> {
    let mut row = SweepRow {
        value,
        floor: None,
        ceiling: None,
        break_even_mil_mbytes: None,
        shares: None,
    };
    for output in outputs {
        match output {
            SweepOutput::Floor => row.floor = Some(floor_price(scenario)?.usd_per_mbyte),
            SweepOutput::Ceiling => row.ceiling = Some(ceiling_price(scenario, mno)?.usd_per_mbyte),
            SweepOutput::BreakEven => {
                row.break_even_mil_mbytes =
                    match break_even_demand(scenario, mno, DEFAULT_DEMAND_SCALE_RANGE) {
                        Ok(b) => Some(b.q_star_mil_mbytes),
                        Err(ModelError::NoBreakEven { .. }) => None,
                        Err(e) => return Err(e),
                    }
            }
            SweepOutput::Breakdown => row.shares = Some(cost_breakdown(scenario)?.shares),
        }
    }
    Ok(row)
}

/// Evaluates the requested outputs at each grid value, each on its own copy
/// of the inputs. Rows come back in grid order.
pub fn sweep(scenario: &Scenario, mno: &MnoParams, spec: &SweepSpec) -> Result<SweepResult> {
    get_parameter(scenario, mno, &spec.parameter_path)?;
    let values = spec.grid.values()?;
    let mut outputs = spec.outputs.clone();
    outputs.sort();
    outputs.dedup();
    if outputs.is_empty() {
        return Err(ModelError::InvalidSpec("no outputs requested".to_string()));
    }
    let rows = values
        .into_iter()
        .map(|value| {
            let (mut s, mut m) = (scenario.clone(), mno.clone());
            set_parameter(&mut s, &mut m, &spec.parameter_path, value)?;
            evaluate(&s, &m, value, &outputs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        scenario_name: scenario.name.clone(),
        parameter_path: spec.parameter_path.clone(),
        outputs,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub multiplier: f64,
    /// Undiscounted total traffic of the base scenario at this multiplier.
    pub total_traffic_mil_mbytes: f64,
    pub base_floor: f64,
    pub alt_floor: f64,
    pub abs_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub base_name: String,
    pub alt_name: String,
    pub rows: Vec<ComparisonRow>,
    pub mean_abs_gap: f64,
}

/// Floor prices of two scenarios over a grid of data-demand multipliers and
/// the mean absolute difference between the two curves.
pub fn compare_scenarios(
    base: &Scenario,
    alt: &Scenario,
    demand_grid: &[f64],
) -> Result<Comparison> {
    if demand_grid.is_empty() {
        return Err(ModelError::invalid("demand_grid", "grid is empty"));
    }
    if base.finance.horizon_years != alt.finance.horizon_years {
        return Err(ModelError::invalid(
            "finance.horizon_years",
            alloc::format!(
                "scenarios differ in horizon ({} vs {})",
                base.finance.horizon_years,
                alt.finance.horizon_years
            ),
        ));
    }
    let rows = demand_grid
        .iter()
        .map(|&k| {
            let b = base.with_data_scaled(k);
            let base_floor = floor_price(&b)?.usd_per_mbyte;
            let alt_floor = floor_price(&alt.with_data_scaled(k))?.usd_per_mbyte;
            Ok(ComparisonRow {
                multiplier: k,
                total_traffic_mil_mbytes: b.demand.total_traffic_sum(),
                base_floor,
                alt_floor,
                abs_gap: (base_floor - alt_floor).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mean_abs_gap = rows.iter().map(|r| r.abs_gap).sum::<f64>() / rows.len() as f64;
    Ok(Comparison {
        base_name: base.name.clone(),
        alt_name: alt.name.clone(),
        rows,
        mean_abs_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::tests::toy;
    use alloc::vec;

    fn market() -> (Scenario, MnoParams) {
        let mut s = toy();
        s.license_fee_musd = 500.0;
        s.demand.subscribers = vec![1e6; 10];
        s.costs.opex_per_subscriber_per_year = 1e-5;
        s.costs.cell_site_capex = 0.1;
        s.costs.cell_opex_per_year = 0.01;
        s.obligation.population = 10e6;
        let m = MnoParams {
            retail_price_voice_per_mbyte: 1.0,
            retail_price_data_per_mbyte: 1.0,
            cost_per_subscriber_per_year: 1e-4,
            gross_margin: 0.0,
        };
        (s, m)
    }

    fn spec(path: &str, grid: Grid, outputs: &[SweepOutput]) -> SweepSpec {
        SweepSpec {
            parameter_path: path.into(),
            grid,
            outputs: outputs.to_vec(),
        }
    }

    #[test]
    fn every_listed_path_resolves() {
        let (s, m) = market();
        for path in PARAMETER_PATHS {
            assert!(get_parameter(&s, &m, path).is_ok(), "{path}");
        }
        assert!(matches!(
            get_parameter(&s, &m, "finance.nope"),
            Err(ModelError::InvalidSpec(_))
        ));
    }

    #[test]
    fn single_point_at_current_value_matches_direct_evaluation() {
        let (s, m) = market();
        let current = get_parameter(&s, &m, "unit_costs.opex_per_subscriber_per_year").unwrap();
        let r = sweep(
            &s,
            &m,
            &spec(
                "unit_costs.opex_per_subscriber_per_year",
                Grid::Explicit(vec![current]),
                &[
                    SweepOutput::Breakdown,
                    SweepOutput::Floor,
                    SweepOutput::Ceiling,
                ],
            ),
        )
        .unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(
            r.outputs,
            vec![
                SweepOutput::Floor,
                SweepOutput::Ceiling,
                SweepOutput::Breakdown
            ]
        );
        assert_eq!(
            r.rows[0].floor,
            Some(floor_price(&s).unwrap().usd_per_mbyte)
        );
        assert_eq!(
            r.rows[0].ceiling,
            Some(ceiling_price(&s, &m).unwrap().usd_per_mbyte)
        );
        assert_eq!(r.rows[0].shares, Some(cost_breakdown(&s).unwrap().shares));
    }

    #[test]
    fn opex_sweep_raises_floor() {
        let (s, m) = market();
        // $10..$40 per subscriber per year, in millions of USD
        let grid = vec![1e-5, 2e-5, 3e-5, 4e-5];
        let r = sweep(
            &s,
            &m,
            &spec(
                "unit_costs.opex_per_subscriber_per_year",
                Grid::Explicit(grid.clone()),
                &[SweepOutput::Floor],
            ),
        )
        .unwrap();
        for (row, &v) in r.rows.iter().zip(&grid) {
            let mut direct = s.clone();
            direct.costs.opex_per_subscriber_per_year = v;
            assert_eq!(row.floor, Some(floor_price(&direct).unwrap().usd_per_mbyte));
        }
        assert!(r.rows.windows(2).all(|w| w[1].floor > w[0].floor));
    }

    #[test]
    fn sharing_sweep_lowers_floor() {
        let (s, m) = market();
        let r = sweep(
            &s,
            &m,
            &spec(
                "capacity.sharing_carrier_count",
                Grid::Explicit(vec![1.0, 2.0]),
                &[SweepOutput::Floor],
            ),
        )
        .unwrap();
        assert!(r.rows[1].floor.unwrap() <= r.rows[0].floor.unwrap());
        assert!(sweep(
            &s,
            &m,
            &spec(
                "capacity.sharing_carrier_count",
                Grid::Explicit(vec![1.5]),
                &[SweepOutput::Floor]
            )
        )
        .is_err());
    }

    #[test]
    fn sweep_leaves_inputs_untouched() {
        let (s, m) = market();
        let (s0, m0) = (s.clone(), m.clone());
        sweep(
            &s,
            &m,
            &spec(
                "demand.data_multiplier",
                Grid::Stepped {
                    min: 0.2,
                    max: 2.0,
                    step: 0.1,
                },
                &[SweepOutput::Floor, SweepOutput::BreakEven],
            ),
        )
        .unwrap();
        assert_eq!(s, s0);
        assert_eq!(m, m0);
    }

    #[test]
    fn irrelevant_parameter_gives_constant_rows() {
        let (s, m) = market();
        let r = sweep(
            &s,
            &m,
            &spec(
                "mno.gross_margin",
                Grid::Explicit(vec![0.0, 0.5, 1.0]),
                &[SweepOutput::Floor],
            ),
        )
        .unwrap();
        assert!(r.rows.iter().all(|row| row.floor == r.rows[0].floor));
    }

    #[test]
    fn grid_validation() {
        assert_eq!(
            Grid::Stepped {
                min: 0.2,
                max: 2.0,
                step: 0.1
            }
            .values()
            .unwrap()
            .len(),
            19
        );
        assert_eq!(
            Grid::Stepped {
                min: 10.0,
                max: 60.0,
                step: 5.0
            }
            .values()
            .unwrap()
            .len(),
            11
        );
        assert!(Grid::Explicit(vec![]).values().is_err());
        assert!(Grid::Explicit(vec![1.0, 1.0]).values().is_err());
        assert!(Grid::Stepped {
            min: 1.0,
            max: 0.0,
            step: 0.1
        }
        .values()
        .is_err());
        let (s, m) = market();
        assert!(sweep(
            &s,
            &m,
            &spec("license_fee_musd", Grid::Explicit(vec![1.0]), &[])
        )
        .is_err());
    }

    #[test]
    fn compare_examples() {
        let (s, _) = market();
        let c = compare_scenarios(&s, &s, &[0.5, 1.0, 2.0]).unwrap();
        assert_eq!(c.mean_abs_gap, 0.0);

        let mut alt = s.clone();
        alt.license_fee_musd = 800.0;
        let c = compare_scenarios(&s, &alt, &[1.5]).unwrap();
        let gap = (floor_price(&s.with_data_scaled(1.5)).unwrap().usd_per_mbyte
            - floor_price(&alt.with_data_scaled(1.5))
                .unwrap()
                .usd_per_mbyte)
            .abs();
        assert_eq!(c.mean_abs_gap, gap);

        let grid = [0.3, 0.9, 1.7];
        let ab = compare_scenarios(&s, &alt, &grid).unwrap().mean_abs_gap;
        let ba = compare_scenarios(&alt, &s, &grid).unwrap().mean_abs_gap;
        assert_eq!(ab, ba);

        assert!(compare_scenarios(&s, &alt, &[]).is_err());
    }
}
