//! JSON scenario files.
//!
//! A scenario file is a single JSON object. Unknown keys are rejected. Any
//! key may be accompanied by a sibling `<key>_provenance` string tagged
//! `PAPER`, `DERIVED` or `TRIVIAL` recording where the number came from;
//! provenance is checked and then dropped before deserialization.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use spectrum_price_core::sensitivity::{get_parameter, Grid};
use spectrum_price_core::{
    CapacityParams, CoverageObligation, DemandSeries, FinanceParams, MnoParams, ModelError,
    Scenario, ScenarioKind, UnitCosts,
};

pub const PROVENANCE_SUFFIX: &str = "_provenance";
pub const PROVENANCE_TAGS: [&str; 3] = ["PAPER", "DERIVED", "TRIVIAL"];

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{}: cannot read file: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{origin}: not valid JSON: {message}")]
    Parse { origin: String, message: String },
    #[error("{origin}: schema violation at `{key}`: {message}")]
    Schema {
        origin: String,
        key: String,
        message: String,
    },
    #[error("{origin}: invariant violated at `{key}`: {message}")]
    Invariant {
        origin: String,
        key: String,
        message: String,
    },
}

impl LoadError {
    /// Stable machine-readable error class.
    pub fn code(&self) -> &'static str {
        match self {
            LoadError::Io { .. } => "io",
            LoadError::Parse { .. } => "parse",
            LoadError::Schema { .. } => "schema",
            LoadError::Invariant { .. } => "invariant",
        }
    }

    /// The offending key for schema and invariant errors.
    pub fn key(&self) -> Option<&str> {
        match self {
            LoadError::Schema { key, .. } | LoadError::Invariant { key, .. } => Some(key),
            _ => None,
        }
    }
}

/// On-disk layout of a scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub scenario_kind: ScenarioKind,
    pub finance: FinanceParams,
    pub obligation: CoverageObligation,
    pub demand: DemandSeries,
    pub capacity: CapacityParams,
    pub unit_costs: UnitCosts,
    pub license_fee_musd: f64,
    pub mno: MnoParams,
    /// Default sweep grids keyed by parameter path, in `--grid` syntax.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sweep_defaults: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

/// A validated scenario with its MNO parameters and default grids.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioBundle {
    pub scenario: Scenario,
    pub mno: MnoParams,
    pub sweep_defaults: BTreeMap<String, String>,
    pub notes: Option<String>,
}

impl ScenarioBundle {
    pub fn default_grid(&self, path: &str) -> Option<&str> {
        self.sweep_defaults.get(path).map(String::as_str)
    }

    pub fn to_file(&self) -> ScenarioFile {
        let s = &self.scenario;
        ScenarioFile {
            name: s.name.clone(),
            scenario_kind: s.kind,
            finance: s.finance.clone(),
            obligation: s.obligation.clone(),
            demand: s.demand.clone(),
            capacity: s.capacity.clone(),
            unit_costs: s.costs.clone(),
            license_fee_musd: s.license_fee_musd,
            mno: self.mno.clone(),
            sweep_defaults: self.sweep_defaults.clone(),
            notes: self.notes.clone(),
        }
    }

    /// Pretty JSON without provenance annotations.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_file()).expect("scenario serializes");
        text.push('\n');
        text
    }
}

/// Parses `--grid` syntax: `min:max:step` or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Grid, String> {
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{}` is not a number in grid `{text}`", s.trim()))
    };
    let grid = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [min, max, step] = parts[..] else {
            return Err(format!("stepped grid `{text}` must be min:max:step"));
        };
        Grid::Stepped {
            min: number(min)?,
            max: number(max)?,
            step: number(step)?,
        }
    } else {
        Grid::Explicit(text.split(',').map(number).collect::<Result<_, _>>()?)
    };
    grid.values().map_err(|e| e.to_string())?;
    Ok(grid)
}

fn strip_provenance(value: &mut Value, path: &str, origin: &str) -> Result<(), LoadError> {
    match value {
        Value::Object(map) => {
            let tagged: Vec<String> = map
                .keys()
                .filter(|k| k.ends_with(PROVENANCE_SUFFIX))
                .cloned()
                .collect();
            for key in tagged {
                let full = join(path, &key);
                let schema = |message: String| LoadError::Schema {
                    origin: origin.to_string(),
                    key: full.clone(),
                    message,
                };
                let target = &key[..key.len() - PROVENANCE_SUFFIX.len()];
                if !map.contains_key(target) {
                    return Err(schema(format!("annotates missing key `{target}`")));
                }
                match map.remove(&key) {
                    Some(Value::String(s)) if PROVENANCE_TAGS.iter().any(|t| s.starts_with(t)) => {}
                    _ => {
                        return Err(schema(format!(
                            "provenance must be a string starting with one of {PROVENANCE_TAGS:?}"
                        )))
                    }
                }
            }
            for (k, v) in map.iter_mut() {
                strip_provenance(v, &join(path, k), origin)?;
            }
        }
        Value::Array(items) => {
            for v in items {
                strip_provenance(v, path, origin)?;
            }
        }
        _ => {}
    }
    Ok(())
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

/// Keys holding numbers (or arrays of numbers) without a `_provenance`
/// sibling. Bundled datasets must return an empty list.
pub fn missing_provenance(value: &Value) -> Vec<String> {
    fn walk(map: &Map<String, Value>, path: &str, out: &mut Vec<String>) {
        for (k, v) in map {
            if k.ends_with(PROVENANCE_SUFFIX) {
                continue;
            }
            let numeric = match v {
                Value::Number(_) => true,
                Value::Array(items) => items.iter().any(Value::is_number),
                _ => false,
            };
            if numeric && !map.contains_key(&format!("{k}{PROVENANCE_SUFFIX}")) {
                out.push(join(path, k));
            }
            if let Value::Object(inner) = v {
                walk(inner, &join(path, k), out);
            }
        }
    }
    let mut out = Vec::new();
    if let Value::Object(map) = value {
        walk(map, "", &mut out);
    }
    out
}

fn deserialize<T: for<'de> Deserialize<'de>>(value: Value, origin: &str) -> Result<T, LoadError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let message = e.inner().to_string();
        let mut key = e.path().to_string();
        if key == "." {
            key.clear();
        }
        // serde reports a missing field against its parent object
        if let Some(field) = message
            .strip_prefix("missing field `")
            .and_then(|rest| rest.split('`').next())
        {
            key = join(&key, field);
        }
        LoadError::Schema {
            origin: origin.to_string(),
            key,
            message,
        }
    })
}

fn invariant(origin: &str, err: ModelError) -> LoadError {
    let (key, message) = match err {
        ModelError::InvalidInput { field, reason } => (field, reason),
        other => (String::new(), other.to_string()),
    };
    LoadError::Invariant {
        origin: origin.to_string(),
        key,
        message,
    }
}

fn parse_value(text: &str, origin: &str) -> Result<Value, LoadError> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| LoadError::Parse {
        origin: origin.to_string(),
        message: e.to_string(),
    })?;
    strip_provenance(&mut value, "", origin)?;
    Ok(value)
}

/// Parses and validates scenario text. `origin` names the source in errors.
pub fn parse_scenario(text: &str, origin: &str) -> Result<ScenarioBundle, LoadError> {
    let file: ScenarioFile = deserialize(parse_value(text, origin)?, origin)?;
    let scenario = Scenario {
        name: file.name,
        kind: file.scenario_kind,
        finance: file.finance,
        obligation: file.obligation,
        demand: file.demand,
        capacity: file.capacity,
        costs: file.unit_costs,
        license_fee_musd: file.license_fee_musd,
    };
    scenario.validate().map_err(|e| invariant(origin, e))?;
    file.mno.validate().map_err(|e| invariant(origin, e))?;
    for (path, grid) in &file.sweep_defaults {
        let schema = |message: String| LoadError::Schema {
            origin: origin.to_string(),
            key: format!("sweep_defaults.{path}"),
            message,
        };
        get_parameter(&scenario, &file.mno, path).map_err(|e| schema(e.to_string()))?;
        parse_grid(grid).map_err(schema)?;
    }
    Ok(ScenarioBundle {
        scenario,
        mno: file.mno,
        sweep_defaults: file.sweep_defaults,
        notes: file.notes,
    })
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioBundle, LoadError> {
    let path = path.as_ref();
    parse_scenario(&read(path)?, &path.display().to_string())
}

/// MNO parameters from a JSON file, or from inline JSON when `spec` starts
/// with `{`.
pub fn load_mno(spec: &str) -> Result<MnoParams, LoadError> {
    let (text, origin) = if spec.trim_start().starts_with('{') {
        (spec.to_string(), "--mno".to_string())
    } else {
        (read(Path::new(spec))?, spec.to_string())
    };
    let mno: MnoParams = deserialize(parse_value(&text, &origin)?, &origin)?;
    mno.validate().map_err(|e| invariant(&origin, e))?;
    Ok(mno)
}
