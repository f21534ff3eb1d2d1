use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::simulate::PointSample;

/// Binned estimate of the truncated pair density `κ(r) = ρ_2(r) − λ²` at one radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCorrelationBin {
    pub radius: f64,
    pub half_width: f64,
    pub kappa: f64,
    /// standard error across samples
    pub std_error: f64,
}

/// For each radius `r`, counts neighbours at distance in `[r − δ, r + δ]` around every point
/// within `bulk_radius − r − δ` of the origin, divides by the annulus area and converts the
/// neighbour density `ρ_2/λ` into `κ̂ = λ · density − λ²` using the known intensity.
pub fn pair_correlation_binned(
    samples: &[PointSample],
    radii: &[f64],
    half_width: f64,
    bulk_radius: f64,
    intensity: f64,
) -> Result<Vec<PairCorrelationBin>> {
    if samples.len() < 2 {
        return Err(invalid("the pair estimator needs at least two samples"));
    }
    if samples.iter().any(|s| s.dim != 2) {
        return Err(invalid("the pair estimator works on planar samples"));
    }
    if !(half_width > 0.0) {
        return Err(invalid("bin half-width must be positive"));
    }
    radii
        .iter()
        .map(|&r| {
            let (inner, outer) = ((r - half_width).max(0.0), r + half_width);
            let reach = bulk_radius - outer;
            if reach <= 0.0 {
                return Err(invalid(format!(
                    "radius {r} does not fit inside the bulk radius {bulk_radius}"
                )));
            }
            let area = std::f64::consts::PI * (outer * outer - inner * inner);
            let estimates: Vec<f64> = samples
                .iter()
                .map(|s| {
                    let pts: Vec<&[f64]> = s.points().collect();
                    let mut centres = 0usize;
                    let mut pairs = 0usize;
                    for p in &pts {
                        if p[0] * p[0] + p[1] * p[1] > reach * reach {
                            continue;
                        }
                        centres += 1;
                        for q in &pts {
                            let d2 = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
                            if d2 > 0.0 && d2 >= inner * inner && d2 < outer * outer {
                                pairs += 1;
                            }
                        }
                    }
                    let density = if centres == 0 {
                        0.0
                    } else {
                        pairs as f64 / (centres as f64 * area)
                    };
                    intensity * density - intensity * intensity
                })
                .collect();
            let n = estimates.len() as f64;
            let mean = estimates.iter().sum::<f64>() / n;
            let sd = (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            Ok(PairCorrelationBin {
                radius: r,
                half_width,
                kappa: mean,
                std_error: sd / n.sqrt(),
            })
        })
        .collect()
}
