use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::statistic::linear_statistic;
use crate::error::{invalid, Error, Result};
use crate::expansion::TestFunction;
use crate::numerics::{replicate_seed, round_significant};
use crate::simulate::{csv_error, ProcessSpec};

/// Two-sided normal quantile used for the jackknife intervals.
const Z_95: f64 = 1.959_963_984_540_054;
/// Significant digits written to CSV.
pub const CSV_DIGITS: usize = 12;

/// Replicate values of `X_L(f)` at one scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub scale: f64,
    pub values: Vec<f64>,
}

/// Replicates of a linear statistic over a list of scales; replicate `r` of every scale comes
/// from the same sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatisticSeries {
    pub process: String,
    pub function: String,
    pub entries: Vec<SeriesEntry>,
    pub seeds: Vec<u64>,
}

/// One line of the summary table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    #[serde(rename = "L")]
    pub scale: f64,
    pub variance: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub n: usize,
}

#[derive(Serialize, Deserialize)]
struct SeriesRecord {
    #[serde(rename = "L")]
    scale: f64,
    replicate: usize,
    value: f64,
}

impl StatisticSeries {
    pub fn new(
        process: String,
        function: String,
        entries: Vec<SeriesEntry>,
        seeds: Vec<u64>,
    ) -> Result<Self> {
        let n = entries.first().map_or(0, |e| e.values.len());
        if entries.iter().any(|e| e.values.len() != n) {
            return Err(invalid("every scale needs the same number of replicates"));
        }
        if entries
            .iter()
            .any(|e| e.values.iter().any(|v| !v.is_finite()))
        {
            return Err(invalid("series values must be finite"));
        }
        Ok(StatisticSeries {
            process,
            function,
            entries,
            seeds,
        })
    }

    pub fn replicates(&self) -> usize {
        self.entries.first().map_or(0, |e| e.values.len())
    }

    /// `L,replicate,value` rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for entry in &self.entries {
            for (replicate, value) in entry.values.iter().enumerate() {
                writer
                    .serialize(SeriesRecord {
                        scale: entry.scale,
                        replicate,
                        value: round_significant(*value, CSV_DIGITS),
                    })
                    .map_err(csv_error)?;
            }
        }
        finish(writer)
    }

    /// Rebuilds the entries from [`Self::to_csv`] output.
    pub fn from_csv(
        text: &str,
        process: String,
        function: String,
        seeds: Vec<u64>,
    ) -> Result<Self> {
        let mut entries: Vec<SeriesEntry> = Vec::new();
        for record in csv::Reader::from_reader(text.as_bytes()).deserialize() {
            let record: SeriesRecord = record.map_err(csv_error)?;
            let entry = match entries.iter_mut().find(|e| e.scale == record.scale) {
                Some(e) => e,
                None => {
                    entries.push(SeriesEntry {
                        scale: record.scale,
                        values: Vec::new(),
                    });
                    entries.last_mut().expect("just pushed")
                }
            };
            if record.replicate != entry.values.len() {
                return Err(Error::Parse(format!(
                    "replicate {} of L = {} out of order",
                    record.replicate, record.scale
                )));
            }
            entry.values.push(record.value);
        }
        StatisticSeries::new(process, function, entries, seeds)
    }
}

fn finish<W: std::io::Write>(writer: csv::Writer<W>) -> Result<String>
where
    W: Into<Vec<u8>>,
{
    let bytes: Vec<u8> = writer
        .into_inner()
        .map_err(|e| Error::Parse(e.to_string()))?
        .into();
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// Sample variance with a 95% jackknife interval.
pub fn jackknife_variance(values: &[f64]) -> Result<SummaryRow> {
    let n = values.len();
    if n < 3 {
        return Err(invalid("a jackknife variance needs at least three values"));
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let deviations: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let ss: f64 = deviations.iter().map(|d| d * d).sum();
    let variance = ss / (nf - 1.0);
    // leave-one-out: SS_(i) = SS − n d_i² / (n − 1)
    let leave_out: Vec<f64> = deviations
        .iter()
        .map(|d| (ss - nf * d * d / (nf - 1.0)) / (nf - 2.0))
        .collect();
    let centre = leave_out.iter().sum::<f64>() / nf;
    let spread = leave_out.iter().map(|v| (v - centre).powi(2)).sum::<f64>();
    let half = Z_95 * ((nf - 1.0) / nf * spread).sqrt();
    Ok(SummaryRow {
        scale: f64::NAN,
        variance,
        ci_lo: variance - half,
        ci_hi: variance + half,
        n,
    })
}

/// Per-scale variance and jackknife interval.
pub fn summarize(series: &StatisticSeries) -> Result<Vec<SummaryRow>> {
    series
        .entries
        .iter()
        .map(|e| {
            let mut row = jackknife_variance(&e.values)?;
            row.scale = e.scale;
            Ok(row)
        })
        .collect()
}

pub fn summary_to_csv(rows: &[SummaryRow]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        let r = |v: f64| round_significant(v, CSV_DIGITS);
        writer
            .serialize(SummaryRow {
                scale: row.scale,
                variance: r(row.variance),
                ci_lo: r(row.ci_lo),
                ci_hi: r(row.ci_hi),
                n: row.n,
            })
            .map_err(csv_error)?;
    }
    finish(writer)
}

pub fn summary_from_csv(text: &str) -> Result<Vec<SummaryRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(csv_error))
        .collect()
}

/// Replicates `X_L(f)` for every `L` in `scales`; replicate `r` uses seed `seed_base + r` and
/// one sample serves all scales.
pub fn variance_curve(
    process: &ProcessSpec,
    f: &TestFunction,
    scales: &[f64],
    replicates: usize,
    seed_base: u64,
) -> Result<StatisticSeries> {
    if scales.is_empty() || replicates == 0 {
        return Err(invalid(
            "a variance curve needs at least one scale and one replicate",
        ));
    }
    let max_scale = scales.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let seeds: Vec<u64> = (0..replicates)
        .map(|r| replicate_seed(seed_base, r))
        .collect();
    let rows: Vec<Vec<f64>> = seeds
        .par_iter()
        .map(|&seed| {
            let sample = process.sample(f, max_scale, seed)?;
            scales
                .iter()
                .map(|&l| linear_statistic(&sample, f, l))
                .collect()
        })
        .collect::<Result<_>>()?;
    let entries = scales
        .iter()
        .enumerate()
        .map(|(i, &scale)| SeriesEntry {
            scale,
            values: rows.iter().map(|r| r[i]).collect(),
        })
        .collect();
    StatisticSeries::new(process.to_string(), f.label.clone(), entries, seeds)
}
