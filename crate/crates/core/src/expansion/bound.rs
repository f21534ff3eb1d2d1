use serde::{Deserialize, Serialize};

use super::inner::{norm_squared, sobolev_seminorm_squared};
use super::test_function::TestFunction;
use crate::error::{invalid, Error, Result};
use crate::kernels::{kernel_moments, Profile, TruncatedCorrelationKernel};
use crate::numerics::{
    dft_forward, factorial, multi_indices_of_order, GridField, GridGeometry, MultiIndex,
};

/// Moments below this absolute size count as vanishing.
pub const MOMENT_NULL_THRESHOLD: f64 = 1e-9;

/// The bound together with its ingredients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceBound {
    pub order: u32,
    pub value: f64,
    /// `sup|K̂|` (k = 0) or `max_{|γ|=2k} sup|∂^γ K̂|` (k ≥ 1), estimated on a frequency grid;
    /// the grid maximum may underestimate the true supremum.
    pub kernel_sup: f64,
    /// `‖f‖²` (k = 0) or `|f|²_{H^k}`
    pub function_norm: f64,
}

fn frequency_samples(dim: usize) -> usize {
    match dim {
        1 => 4096,
        2 => 128,
        _ => 32,
    }
}

/// Grid maximum of `|∫ z^γ κ(z) e^{i<z,t>} dz|` from a DFT over `[-2R, 2R]^d`.
pub fn derivative_sup(kernel: &TruncatedCorrelationKernel, gamma: &MultiIndex) -> Result<f64> {
    if matches!(kernel.profile(), Profile::Zero) {
        return Ok(0.0);
    }
    let half = 2.0 * kernel.truncation_radius;
    let geometry = GridGeometry::centered_cube(kernel.dim, half, frequency_samples(kernel.dim))?;
    let field = GridField::from_fn(geometry, |z| gamma.monomial(z) * kernel.density(z));
    let spectrum = dft_forward(&field)?;
    Ok(spectrum.values.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// `(λ_D + ‖K̂‖_∞)‖f‖²` for `k = 0`; `d^k/(2k−1)! ‖D^{2k}K̂‖_∞ |f|²_{H^k}` for `k ≥ 1`,
/// which needs the defect and all `I(γ)`, `|γ| < 2k`, to vanish.
pub fn variance_upper_bound(
    kernel: &TruncatedCorrelationKernel,
    f: &TestFunction,
    k: u32,
) -> Result<VarianceBound> {
    if f.dim != kernel.dim {
        return Err(invalid("kernel and test function dimensions differ"));
    }
    if k == 0 {
        let kernel_sup = if matches!(kernel.profile(), Profile::Zero) {
            0.0
        } else {
            derivative_sup(kernel, &MultiIndex::zero(kernel.dim))?
        };
        let norm = norm_squared(f)?;
        return Ok(VarianceBound {
            order: 0,
            value: (kernel.diagonal_intensity + kernel_sup) * norm,
            kernel_sup,
            function_norm: norm,
        });
    }
    if f.sobolev_order() < k {
        return Err(Error::HypothesisViolated(format!(
            "{} is not in H^{k}",
            f.label
        )));
    }
    let report = kernel_moments(kernel, 2 * k)?;
    if report.defect.abs() > MOMENT_NULL_THRESHOLD {
        return Err(Error::HypothesisViolated(format!(
            "lambda_D + I(0) = {:e} is nonzero",
            report.defect
        )));
    }
    for order in 1..2 * k {
        for gamma in multi_indices_of_order(kernel.dim, order)?.into_iter().rev() {
            let value = report.moment(&gamma).unwrap_or(0.0);
            if value.abs() > MOMENT_NULL_THRESHOLD {
                return Err(Error::HypothesisViolated(format!(
                    "I({gamma}) = {value:e} is nonzero"
                )));
            }
        }
    }
    let mut kernel_sup: f64 = 0.0;
    for gamma in multi_indices_of_order(kernel.dim, 2 * k)? {
        kernel_sup = kernel_sup.max(derivative_sup(kernel, &gamma)?);
    }
    let norm = sobolev_seminorm_squared(f, k)?;
    let d = kernel.dim as f64;
    let value = d.powi(k as i32) / factorial(2 * k - 1) as f64 * kernel_sup * norm;
    Ok(VarianceBound {
        order: k,
        value,
        kernel_sup,
        function_norm: norm,
    })
}
