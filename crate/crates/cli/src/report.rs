use std::path::{Path, PathBuf};

use covasym::estimate::{ScalingFit, SummaryRow};
use covasym::expansion::{AsymptoticClass, ExpansionTerm, VarianceBound};
use covasym::numerics::round_significant;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Significant digits of every number the CLI writes.
pub const OUTPUT_DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleCheck {
    #[serde(rename = "L")]
    pub scale: f64,
    /// covariance from the spectral formula
    pub exact: f64,
    /// `L^{exponent} · constant`
    pub leading: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub kernel: String,
    pub function: String,
    pub partner: String,
    pub dimension: usize,
    pub exponent: i32,
    pub constant: f64,
    pub class: AsymptoticClass,
    pub terms: Vec<ExpansionTerm>,
    pub bound: Option<VarianceBound>,
    pub checks: Vec<ScaleCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeRow {
    #[serde(rename = "L")]
    pub scale: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub process: String,
    pub function: String,
    pub replicates: usize,
    pub seed: u64,
    pub summary: Vec<SummaryRow>,
    /// `None` with fewer than three distinct scales
    pub fit: Option<ScalingFit>,
    pub shape: Vec<ShapeRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    pub defect: f64,
    pub tolerance: f64,
    /// the check is meant to exhibit a failure; it passes when the failure is observed
    pub expected_failure: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndicatorRegime {
    Surface,
    Volume,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicatorRow {
    #[serde(rename = "L")]
    pub scale: f64,
    pub covariance: f64,
    /// `covariance / L^{exponent}`, to compare with `limit`
    pub normalized: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicatorReport {
    pub kernel: String,
    pub domain_a: String,
    pub domain_b: String,
    pub regime: IndicatorRegime,
    pub exponent: i32,
    pub limit: f64,
    pub message: String,
    pub monte_carlo: Vec<IndicatorRow>,
    pub fit: Option<ScalingFit>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub gamma: Vec<u32>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialRow {
    pub p: u32,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentsReport {
    pub kernel: String,
    pub dimension: usize,
    pub intensity: f64,
    pub diagonal_intensity: f64,
    pub defect: f64,
    pub moments: Vec<MomentRow>,
    pub radial_moments: Vec<RadialRow>,
}

fn round_floats(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let rounded = round_significant(n.as_f64().unwrap_or(0.0), OUTPUT_DIGITS);
            if let Some(number) = serde_json::Number::from_f64(rounded) {
                *n = number;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to [`OUTPUT_DIGITS`] significant digits.
pub fn to_json<T: Serialize>(report: &T) -> CliResult<String> {
    let mut value = serde_json::to_value(report)?;
    round_floats(&mut value);
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> CliResult<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, report: &T) -> CliResult<PathBuf> {
    write_text(dir, name, &to_json(report)?)
}
