use rand::Rng;
use serde::{Deserialize, Serialize};

use super::series::StatisticSeries;
use crate::error::{invalid, Result};
use crate::numerics::seeded_rng;

/// Bootstrap resamples behind [`ScalingFit::ci_half_width`].
pub const BOOTSTRAP_RESAMPLES: usize = 200;

/// Least-squares fit of `log Var = log c + a log L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub log_constant: f64,
    pub residual_rms: f64,
    /// 95% bootstrap half-width on the exponent; zero for fits without replicates
    pub ci_half_width: f64,
    pub points_used: usize,
}

/// Fits `(L, variance)` pairs, dropping nonpositive variances with a warning.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<ScalingFit> {
    let kept: Vec<(f64, f64)> = points
        .iter()
        .filter(|(l, v)| {
            let ok = *v > 0.0 && v.is_finite() && *l > 0.0;
            if !ok {
                log::warn!("excluding L = {l} with variance {v} from the scaling fit");
            }
            ok
        })
        .map(|(l, v)| (l.ln(), v.ln()))
        .collect();
    let mut distinct: Vec<f64> = kept.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(invalid(format!(
            "a scaling fit needs at least three distinct L with positive variance, got {}",
            distinct.len()
        )));
    }
    let n = kept.len() as f64;
    let mx = kept.iter().map(|p| p.0).sum::<f64>() / n;
    let my = kept.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = kept.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = kept.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    let log_constant = my - exponent * mx;
    let residual_rms = (kept
        .iter()
        .map(|p| (p.1 - log_constant - exponent * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(ScalingFit {
        exponent,
        log_constant,
        residual_rms,
        ci_half_width: 0.0,
        points_used: kept.len(),
    })
}

fn variance(values: &[f64], picks: &[usize]) -> f64 {
    let n = picks.len() as f64;
    let mean = picks.iter().map(|&i| values[i]).sum::<f64>() / n;
    picks
        .iter()
        .map(|&i| (values[i] - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0)
}

/// Fits the per-scale sample variances; the interval comes from resampling replicates
/// (jointly across scales) [`BOOTSTRAP_RESAMPLES`] times.
pub fn fit_scaling(series: &StatisticSeries) -> Result<ScalingFit> {
    let n = series.replicates();
    if n < 2 {
        return Err(invalid("a scaling fit needs at least two replicates"));
    }
    let all: Vec<usize> = (0..n).collect();
    let points: Vec<(f64, f64)> = series
        .entries
        .iter()
        .map(|e| (e.scale, variance(&e.values, &all)))
        .collect();
    let mut fit = fit_power_law(&points)?;
    let mut rng = seeded_rng(series.seeds.first().copied().unwrap_or(0) ^ 0x5ca1_ab1e);
    let mut exponents = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    let mut picks = vec![0usize; n];
    for _ in 0..BOOTSTRAP_RESAMPLES {
        for p in &mut picks {
            *p = rng.random_range(0..n);
        }
        let resampled: Vec<(f64, f64)> = series
            .entries
            .iter()
            .map(|e| (e.scale, variance(&e.values, &picks)))
            .collect();
        if let Ok(f) = fit_power_law(&resampled) {
            exponents.push(f.exponent);
        }
    }
    if exponents.len() > 1 {
        let m = exponents.iter().sum::<f64>() / exponents.len() as f64;
        let sd = (exponents.iter().map(|e| (e - m).powi(2)).sum::<f64>()
            / (exponents.len() - 1) as f64)
            .sqrt();
        fit.ci_half_width = 1.959_963_984_540_054 * sd;
    }
    Ok(fit)
}
