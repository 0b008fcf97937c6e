//! Mobile network operator ceiling and the break-even demand level.
//!
//! An MNO buys capacity wholesale and resells it. The most it can pay per
//! Mbyte is what is left of its discounted retail revenue after its own
//! margin-adjusted costs (branding, billing, customer care), spread over the
//! same discounted traffic the carrier floor uses:
//!
//! ```text
//! ceiling = max(0, [NPV(revenue) - (1 + margin) * NPV(own costs)] / Q)
//! ```

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::carrier::{floor_price, BoundKind, PriceBound};
use crate::error::{ModelError, Result};
use crate::finance::{npv, weighted_traffic};
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MnoParams {
    /// Retail USD per Mbyte of voice.
    pub retail_price_voice_per_mbyte: f64,
    /// Retail USD per Mbyte of data.
    pub retail_price_data_per_mbyte: f64,
    /// Millions of USD per subscriber per year.
    pub cost_per_subscriber_per_year: f64,
    pub gross_margin: f64,
}

impl MnoParams {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            (
                "mno.retail_price_voice_per_mbyte",
                self.retail_price_voice_per_mbyte,
            ),
            (
                "mno.retail_price_data_per_mbyte",
                self.retail_price_data_per_mbyte,
            ),
            (
                "mno.cost_per_subscriber_per_year",
                self.cost_per_subscriber_per_year,
            ),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ModelError::invalid(
                    field,
                    alloc::format!("{v} must be >= 0"),
                ));
            }
        }
        crate::finance::in_range("mno.gross_margin", self.gross_margin, 0.0, 10.0)
    }
}

pub fn ceiling_price(scenario: &Scenario, mno: &MnoParams) -> Result<PriceBound> {
    let horizon = scenario.horizon();
    let rate = scenario.finance.discount_rate;
    let demand = &scenario.demand;
    let q = weighted_traffic(demand, horizon, rate)?;
    if q <= 0.0 {
        return Err(ModelError::DegenerateDemand);
    }
    let revenue: Vec<f64> = demand
        .voice_mbytes
        .iter()
        .zip(&demand.data_mbytes)
        .map(|(v, d)| v * mno.retail_price_voice_per_mbyte + d * mno.retail_price_data_per_mbyte)
        .collect();
    let own_costs: Vec<f64> = demand
        .subscribers
        .iter()
        .map(|s| s * mno.cost_per_subscriber_per_year)
        .collect();
    let margin_left = npv(&revenue, rate)? - (1.0 + mno.gross_margin) * npv(&own_costs, rate)?;
    Ok(PriceBound {
        kind: BoundKind::Ceiling,
        usd_per_mbyte: (margin_left / q).max(0.0),
        q_weighted: q,
        scenario_name: scenario.name.clone(),
    })
}

/// Default bracket for the data-demand multiplier searched for break-even.
pub const DEFAULT_DEMAND_SCALE_RANGE: (f64, f64) = (0.01, 10.0);
/// Break-even is accepted once |floor - ceiling| is below this, USD/Mbyte.
pub const BREAK_EVEN_TOLERANCE: f64 = 1e-4;
pub const BREAK_EVEN_MAX_ITERATIONS: u32 = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakEven {
    /// Multiplier on projected data traffic at the crossing.
    pub data_multiplier: f64,
    /// Undiscounted total traffic over the horizon at the crossing, millions of Mbytes.
    pub q_star_mil_mbytes: f64,
    pub floor: f64,
    pub ceiling: f64,
    pub iterations: u32,
}

impl BreakEven {
    pub fn residual(&self) -> f64 {
        (self.floor - self.ceiling).abs()
    }
}

/// Floor and ceiling with data traffic scaled by `multiplier`.
pub fn bounds_at(scenario: &Scenario, mno: &MnoParams, multiplier: f64) -> Result<(f64, f64)> {
    let scaled = scenario.with_data_scaled(multiplier);
    Ok((
        floor_price(&scaled)?.usd_per_mbyte,
        ceiling_price(&scaled, mno)?.usd_per_mbyte,
    ))
}

/// Bisects on a multiplier applied to data traffic (voice fixed) until floor
/// and ceiling agree within [`BREAK_EVEN_TOLERANCE`]. The floor must be above
/// the ceiling at the low end of `range` and below it at the high end; if
/// they already agree at the low end, that end is returned.
pub fn break_even_demand(
    scenario: &Scenario,
    mno: &MnoParams,
    range: (f64, f64),
) -> Result<BreakEven> {
    let (mut lo, mut hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi) {
        return Err(ModelError::invalid(
            "demand_scale_range",
            alloc::format!("[{lo}, {hi}] is not a valid interval"),
        ));
    }
    let gap = |k: f64| -> Result<(f64, f64, f64)> {
        let (f, c) = bounds_at(scenario, mno, k)?;
        Ok((f - c, f, c))
    };
    let result = |k: f64, f: f64, c: f64, iterations: u32| BreakEven {
        data_multiplier: k,
        q_star_mil_mbytes: scenario.with_data_scaled(k).demand.total_traffic_sum(),
        floor: f,
        ceiling: c,
        iterations,
    };

    let (g_lo, f_lo, c_lo) = gap(lo)?;
    if g_lo.abs() < BREAK_EVEN_TOLERANCE {
        return Ok(result(lo, f_lo, c_lo, 0));
    }
    let (g_hi, f_hi, c_hi) = gap(hi)?;
    if g_hi.abs() < BREAK_EVEN_TOLERANCE && g_lo > 0.0 {
        return Ok(result(hi, f_hi, c_hi, 0));
    }
    if !(g_lo > 0.0 && g_hi < 0.0) {
        return Err(ModelError::NoBreakEven {
            lo,
            hi,
            gap_lo: g_lo,
            gap_hi: g_hi,
        });
    }

    let mut best = (hi, f_hi, c_hi);
    for iteration in 1..=BREAK_EVEN_MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let (g, f, c) = gap(mid)?;
        best = (mid, f, c);
        if g.abs() < BREAK_EVEN_TOLERANCE || mid <= lo || mid >= hi {
            return Ok(result(mid, f, c, iteration));
        }
        if g > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(result(best.0, best.1, best.2, BREAK_EVEN_MAX_ITERATIONS))
}

/// Number of sign changes of floor - ceiling over `points` evenly spaced
/// multipliers spanning `range`.
pub fn crossing_count(
    scenario: &Scenario,
    mno: &MnoParams,
    range: (f64, f64),
    points: usize,
) -> Result<usize> {
    let (lo, hi) = range;
    let mut changes = 0;
    let mut prev: Option<bool> = None;
    for i in 0..points.max(2) {
        let k = lo + (hi - lo) * i as f64 / (points.max(2) - 1) as f64;
        let (f, c) = bounds_at(scenario, mno, k)?;
        let above = f > c;
        if prev.is_some_and(|p| p != above) {
            changes += 1;
        }
        prev = Some(above);
    }
    Ok(changes)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfitabilityReport {
    pub scenario_name: String,
    pub floor: f64,
    pub ceiling: f64,
    /// Ceiling minus floor; positive when the market clears profitably.
    pub spread: f64,
    pub break_even: Option<BreakEven>,
    pub profitable: bool,
}

/// Bounds at projected demand plus the break-even level, if one exists in
/// `range`.
pub fn profitability_report(
    scenario: &Scenario,
    mno: &MnoParams,
    range: (f64, f64),
) -> Result<ProfitabilityReport> {
    let floor = floor_price(scenario)?.usd_per_mbyte;
    let ceiling = ceiling_price(scenario, mno)?.usd_per_mbyte;
    let break_even = match break_even_demand(scenario, mno, range) {
        Ok(b) => Some(b),
        Err(ModelError::NoBreakEven { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(ProfitabilityReport {
        scenario_name: scenario.name.clone(),
        floor,
        ceiling,
        spread: ceiling - floor,
        break_even,
        profitable: ceiling > floor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::tests::toy;
    use crate::finance::npv;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn mno(price: f64, cost: f64) -> MnoParams {
        MnoParams {
            retail_price_voice_per_mbyte: price,
            retail_price_data_per_mbyte: price,
            cost_per_subscriber_per_year: cost,
            gross_margin: 0.0,
        }
    }

    /// Toy market with a fixed license and a per-subscriber MNO cost, so the
    /// floor falls and the ceiling rises with data demand.
    fn market() -> (Scenario, MnoParams) {
        let mut s = toy();
        s.license_fee_musd = 500.0;
        s.demand.voice_mbytes = alloc::vec![10.0; 10];
        s.demand.subscribers = alloc::vec![1e6; 10];
        (s, mno(1.0, 2e-5))
    }

    #[test]
    fn ceiling_examples() {
        let s = toy();
        assert_eq!(
            ceiling_price(&s, &mno(0.0, 0.0)).unwrap().usd_per_mbyte,
            0.0
        );
        let c = ceiling_price(&s, &mno(2.0, 0.0)).unwrap();
        assert_eq!(c.kind, BoundKind::Ceiling);
        assert_relative_eq!(c.usd_per_mbyte, 2.0, max_relative = 1e-12);

        // costs exceed revenue: clamped
        let mut s = toy();
        s.demand.subscribers = alloc::vec![1e6; 10];
        assert_eq!(
            ceiling_price(&s, &mno(0.1, 1.0)).unwrap().usd_per_mbyte,
            0.0
        );
    }

    #[test]
    fn ceiling_by_hand() {
        let (s, m) = market();
        let q = npv(&[110.0; 10], 0.06).unwrap();
        let expected = (q * 1.0 - npv(&[20.0; 10], 0.06).unwrap()) / q;
        assert_relative_eq!(
            ceiling_price(&s, &m).unwrap().usd_per_mbyte,
            expected,
            max_relative = 1e-12
        );
    }

    #[test]
    fn ceiling_rejects_zero_demand() {
        let mut s = toy();
        s.demand.data_mbytes = alloc::vec![0.0; 10];
        assert_eq!(
            ceiling_price(&s, &mno(1.0, 0.0)),
            Err(ModelError::DegenerateDemand)
        );
    }

    #[test]
    fn break_even_by_hand() {
        // floor = 500 / Q, ceiling = 1 - NPV(20)/Q with Q = NPV(10 + 100 k)
        // so floor = ceiling when Q = 500 + NPV(20)
        let (s, m) = market();
        let b = break_even_demand(&s, &m, (0.01, 10.0)).unwrap();
        assert!(b.residual() < BREAK_EVEN_TOLERANCE);
        let annuity = npv(&[1.0; 10], 0.06).unwrap();
        let q_star = 500.0 + 20.0 * annuity;
        let k = (q_star / annuity - 10.0) / 100.0;
        assert!((b.data_multiplier - k).abs() < 1e-3 * k);
        assert_relative_eq!(
            b.q_star_mil_mbytes,
            100.0 + 1000.0 * b.data_multiplier,
            max_relative = 1e-12
        );
        assert_eq!(crossing_count(&s, &m, (0.01, 10.0), 100).unwrap(), 1);
    }

    #[test]
    fn break_even_degenerate_equal_models_returns_range_minimum() {
        // No costs, no revenue: floor = ceiling = 0 everywhere.
        let s = toy();
        let b = break_even_demand(&s, &mno(0.0, 0.0), (0.5, 2.0)).unwrap();
        assert_eq!(b.data_multiplier, 0.5);
        assert_eq!(b.iterations, 0);
    }

    #[test]
    fn break_even_without_sign_change() {
        let (s, _) = market();
        // retail price too low to ever cover the license
        let err = break_even_demand(&s, &mno(0.001, 2e-5), (0.01, 10.0)).unwrap_err();
        assert!(matches!(err, ModelError::NoBreakEven { .. }));
        assert!(err.is_model_error());
        assert!(break_even_demand(&s, &mno(1.0, 0.0), (2.0, 1.0)).is_err());
    }

    #[test]
    fn voice_only_market_is_unprofitable() {
        let (mut s, m) = market();
        s.demand.data_mbytes = alloc::vec![0.0; 10];
        let r = profitability_report(&s, &m, DEFAULT_DEMAND_SCALE_RANGE).unwrap();
        assert!(!r.profitable);
        assert!(r.break_even.is_none());
        assert!(r.floor > r.ceiling);
    }

    #[test]
    fn report_around_break_even() {
        let (s, m) = market();
        let r = profitability_report(&s, &m, DEFAULT_DEMAND_SCALE_RANGE).unwrap();
        assert!(r.profitable);
        assert_relative_eq!(r.spread, r.ceiling - r.floor);
        let b = r.break_even.clone().unwrap();

        let at = profitability_report(
            &s.with_data_scaled(b.data_multiplier),
            &m,
            DEFAULT_DEMAND_SCALE_RANGE,
        )
        .unwrap();
        assert!(at.spread.abs() < BREAK_EVEN_TOLERANCE);

        let below = s.with_data_scaled(b.data_multiplier * 0.9);
        let direct_floor = floor_price(&below).unwrap().usd_per_mbyte;
        let direct_ceiling = ceiling_price(&below, &m).unwrap().usd_per_mbyte;
        assert!(direct_floor > direct_ceiling);
        assert!(
            !profitability_report(&below, &m, DEFAULT_DEMAND_SCALE_RANGE)
                .unwrap()
                .profitable
        );
    }

    proptest! {
        #[test]
        fn ceiling_monotone_in_price_and_cost(
            p1 in 0.0f64..2.0, dp in 0.0f64..1.0,
            c1 in 0.0f64..1e-3, dc in 0.0f64..1e-3,
        ) {
            let (s, _) = market();
            let base = ceiling_price(&s, &mno(p1, c1)).unwrap().usd_per_mbyte;
            prop_assert!(base >= 0.0);
            prop_assert!(ceiling_price(&s, &mno(p1 + dp, c1)).unwrap().usd_per_mbyte >= base);
            prop_assert!(ceiling_price(&s, &mno(p1, c1 + dc)).unwrap().usd_per_mbyte <= base);
        }

        #[test]
        fn above_break_even_floor_is_below_ceiling(extra in 1.001f64..5.0) {
            let (s, m) = market();
            let b = break_even_demand(&s, &m, DEFAULT_DEMAND_SCALE_RANGE).unwrap();
            let (f, c) = bounds_at(&s, &m, b.data_multiplier * extra).unwrap();
            prop_assert!(f < c);
        }
    }
}
