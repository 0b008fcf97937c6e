//! CSV rendering of model results.
//!
//! Output is byte-deterministic: fixed column order, a header row, numbers
//! with 6 significant digits in `%g` style, `\n` line endings.

use spectrum_price_core::carrier::CapacityReport;
use spectrum_price_core::sensitivity::{Comparison, SweepOutput, SweepResult};
use spectrum_price_core::{CostBreakdown, PriceBound, ProfitabilityReport};

/// Formats `x` like C's `%.6g`.
pub fn fmt_num(x: f64) -> String {
    const SIG: i32 = 6;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // exponent after rounding to SIG digits
    let sci = format!("{:.*e}", (SIG - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..SIG).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A result that renders as a CSV table.
pub trait CsvTable {
    fn header(&self) -> Vec<String>;
    fn records(&self) -> Vec<Vec<String>>;
}

pub fn emit_csv<T: CsvTable + ?Sized>(table: &T) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer
        .write_record(table.header())
        .expect("in-memory write");
    for record in table.records() {
        writer.write_record(record).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

impl CsvTable for [PriceBound] {
    fn header(&self) -> Vec<String> {
        strings(&["scenario", "kind", "usd_per_mbyte", "q_weighted"])
    }

    fn records(&self) -> Vec<Vec<String>> {
        self.iter()
            .map(|b| {
                vec![
                    b.scenario_name.clone(),
                    b.kind.as_str().to_string(),
                    fmt_num(b.usd_per_mbyte),
                    fmt_num(b.q_weighted),
                ]
            })
            .collect()
    }
}

pub struct NamedBreakdown<'a> {
    pub scenario_name: &'a str,
    pub breakdown: &'a CostBreakdown,
}

impl CsvTable for NamedBreakdown<'_> {
    fn header(&self) -> Vec<String> {
        strings(&["scenario", "component", "npv_musd", "share"])
    }

    fn records(&self) -> Vec<Vec<String>> {
        let b = self.breakdown;
        [
            ("infrastructure", b.infrastructure_npv, b.shares[0]),
            ("operating", b.operating_npv, b.shares[1]),
            ("license", b.license_npv, b.shares[2]),
            ("total", b.total(), 1.0),
        ]
        .into_iter()
        .map(|(component, npv, share)| {
            vec![
                self.scenario_name.to_string(),
                component.to_string(),
                fmt_num(npv),
                fmt_num(share),
            ]
        })
        .collect()
    }
}

impl CsvTable for ProfitabilityReport {
    fn header(&self) -> Vec<String> {
        strings(&[
            "scenario",
            "floor_usd_per_mbyte",
            "ceiling_usd_per_mbyte",
            "spread_usd_per_mbyte",
            "q_star_mil_mbytes",
            "data_multiplier",
            "profitable",
        ])
    }

    fn records(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.scenario_name.clone(),
            fmt_num(self.floor),
            fmt_num(self.ceiling),
            fmt_num(self.spread),
            opt(self.break_even.as_ref().map(|b| b.q_star_mil_mbytes)),
            opt(self.break_even.as_ref().map(|b| b.data_multiplier)),
            self.profitable.to_string(),
        ]]
    }
}

impl CsvTable for SweepResult {
    fn header(&self) -> Vec<String> {
        let mut h = strings(&["scenario", "parameter", "value"]);
        for output in &self.outputs {
            match output {
                SweepOutput::Floor => h.push("floor_usd_per_mbyte".into()),
                SweepOutput::Ceiling => h.push("ceiling_usd_per_mbyte".into()),
                SweepOutput::BreakEven => h.push("break_even_mil_mbytes".into()),
                SweepOutput::Breakdown => h.extend(strings(&[
                    "infrastructure_share",
                    "operating_share",
                    "license_share",
                ])),
            }
        }
        h
    }

    fn records(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|row| {
                let mut r = vec![
                    self.scenario_name.clone(),
                    self.parameter_path.clone(),
                    fmt_num(row.value),
                ];
                for output in &self.outputs {
                    match output {
                        SweepOutput::Floor => r.push(opt(row.floor)),
                        SweepOutput::Ceiling => r.push(opt(row.ceiling)),
                        SweepOutput::BreakEven => r.push(opt(row.break_even_mil_mbytes)),
                        SweepOutput::Breakdown => {
                            let shares = row.shares.map(|s| s.map(Some)).unwrap_or([None; 3]);
                            r.extend(shares.into_iter().map(opt));
                        }
                    }
                }
                r
            })
            .collect()
    }
}

impl CsvTable for Comparison {
    fn header(&self) -> Vec<String> {
        strings(&[
            "multiplier",
            "total_traffic_mil_mbytes",
            "base_floor_usd_per_mbyte",
            "alt_floor_usd_per_mbyte",
            "abs_gap_usd_per_mbyte",
        ])
    }

    /// One row per multiplier, then a `mean` summary row.
    fn records(&self) -> Vec<Vec<String>> {
        let mut rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    fmt_num(r.multiplier),
                    fmt_num(r.total_traffic_mil_mbytes),
                    fmt_num(r.base_floor),
                    fmt_num(r.alt_floor),
                    fmt_num(r.abs_gap),
                ]
            })
            .collect();
        rows.push(vec![
            "mean".into(),
            String::new(),
            String::new(),
            String::new(),
            fmt_num(self.mean_abs_gap),
        ]);
        rows
    }
}

/// Capacity of the coverage-only buildout against demand, alongside the
/// cell count the priced network ends up with.
pub struct CapacityTable<'a> {
    pub coverage: &'a CapacityReport,
    pub network_cells: &'a [u64],
}

impl CsvTable for CapacityTable<'_> {
    fn header(&self) -> Vec<String> {
        strings(&[
            "year",
            "coverage_cells",
            "sellable_mil_mbytes",
            "demand_mil_mbytes",
            "feasible",
            "network_cells",
        ])
    }

    fn records(&self) -> Vec<Vec<String>> {
        self.coverage
            .years
            .iter()
            .zip(self.network_cells)
            .map(|(y, network)| {
                vec![
                    y.year.to_string(),
                    y.cells.to_string(),
                    fmt_num(y.sellable_mil_mbytes),
                    fmt_num(y.demand_mil_mbytes),
                    y.feasible.to_string(),
                    network.to_string(),
                ]
            })
            .collect()
    }
}
