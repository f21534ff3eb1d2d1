use serde::{Deserialize, Serialize};

use super::bound::MOMENT_NULL_THRESHOLD;
use super::terms::{moments_for, q_term_spatial_with, ExpansionTerm};
use super::test_function::TestFunction;
use crate::error::Result;
use crate::kernels::TruncatedCorrelationKernel;
use crate::numerics::multi_indices_of_order;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AsymptoticClass {
    VolumeOrder,
    /// leading order `L^{d−2k}` with `k ≥ 1`
    SuppressedOrder(u32),
    BeyondComputedRange,
}

/// Leading behaviour `Cov(X_L(f), X_L(g)) ~ L^{exponent} · constant`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub exponent: i32,
    pub constant: f64,
    pub class: AsymptoticClass,
    /// terms `Q_0, Q_2, …` up to the leading one
    pub terms: Vec<ExpansionTerm>,
}

/// Finds the first non-vanishing order: the defect for `k = 0`, some `I(γ)` with `|γ| = 2k` for `k ≥ 1`.
pub fn predict_asymptotics(
    kernel: &TruncatedCorrelationKernel,
    f: &TestFunction,
    g: &TestFunction,
    max_k: u32,
) -> Result<AsymptoticPrediction> {
    let report = moments_for(kernel, 2 * max_k)?;
    let d = kernel.dim as i32;
    let mut terms = Vec::new();
    for k in 0..=max_k {
        let leading = if k == 0 {
            report.defect.abs() > MOMENT_NULL_THRESHOLD
        } else {
            multi_indices_of_order(kernel.dim, 2 * k)?
                .iter()
                .any(|gamma| report.moment(gamma).unwrap_or(0.0).abs() > MOMENT_NULL_THRESHOLD)
        };
        if leading {
            let term = q_term_spatial_with(kernel, &report, f, g, 2 * k)?;
            let constant = term.value;
            terms.push(term);
            return Ok(AsymptoticPrediction {
                exponent: d - 2 * k as i32,
                constant,
                class: if k == 0 {
                    AsymptoticClass::VolumeOrder
                } else {
                    AsymptoticClass::SuppressedOrder(k)
                },
                terms,
            });
        }
        terms.push(q_term_spatial_with(kernel, &report, f, g, 2 * k)?);
    }
    Ok(AsymptoticPrediction {
        exponent: d - 2 * (max_k as i32 + 1),
        constant: 0.0,
        class: AsymptoticClass::BeyondComputedRange,
        terms,
    })
}
