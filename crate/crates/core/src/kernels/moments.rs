use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Profile, TruncatedCorrelationKernel};
use crate::error::{invalid, Result};
use crate::numerics::{
    dirichlet_even_moment, integrate_tensor, multi_indices_up_to, sphere_area, MultiIndex,
    QuadratureSpec,
};

/// Largest moment order accepted by [`kernel_moments`].
pub const MAX_MOMENT_ORDER: u32 = 8;

/// Moments `I(γ)`, radial moments `J(p)` and the defect `λ_D + I(0)` of a kernel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelMomentReport {
    pub moments: BTreeMap<MultiIndex, f64>,
    pub radial_moments: BTreeMap<u32, f64>,
    pub defect: f64,
}

impl KernelMomentReport {
    pub fn moment(&self, gamma: &MultiIndex) -> Option<f64> {
        self.moments.get(gamma).copied()
    }
}

/// Fills `I(γ)` for all `|γ| ≤ max_order`. Odd orders, and for flip-invariant kernels any
/// index with an odd entry, are recorded as exact zeros without quadrature.
pub fn kernel_moments(
    kernel: &TruncatedCorrelationKernel,
    max_order: u32,
) -> Result<KernelMomentReport> {
    if max_order > MAX_MOMENT_ORDER {
        return Err(invalid(format!(
            "moment order {max_order} exceeds the supported maximum {MAX_MOMENT_ORDER}"
        )));
    }
    let d = kernel.dim;
    let spec = kernel.moment_spec();
    let mut radial_moments = BTreeMap::new();
    if kernel.isotropic && !matches!(kernel.profile, Profile::Separable(_)) {
        for p in 0..=(d as u32 - 1 + max_order) {
            radial_moments.insert(p, kernel.radial_moment(p, &spec)?);
        }
    }
    let mut moments = BTreeMap::new();
    for gamma in multi_indices_up_to(d, max_order)? {
        let value = if gamma.order() % 2 == 1 || (kernel.flip_invariant && !gamma.is_even()) {
            0.0
        } else {
            match &kernel.profile {
                Profile::Zero => 0.0,
                Profile::Separable(axis) => {
                    gamma.entries().iter().map(|&g| axis.moment(g)).product()
                }
                _ => {
                    let half = gamma.halved().expect("even index");
                    let j = radial_moments[&(d as u32 - 1 + gamma.order())];
                    sphere_area(d) * j * dirichlet_even_moment(&half)
                }
            }
        };
        moments.insert(gamma, value);
    }
    let i0 = moments[&MultiIndex::zero(d)];
    Ok(KernelMomentReport {
        moments,
        radial_moments,
        defect: kernel.diagonal_intensity + i0,
    })
}

/// `I(γ)` by tensor quadrature over `[-R, R]^d`; used to cross-check the radial route.
pub fn kernel_moment_tensor(
    kernel: &TruncatedCorrelationKernel,
    gamma: &MultiIndex,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if gamma.dim() != kernel.dim {
        return Err(invalid(
            "multi-index dimension differs from the kernel dimension",
        ));
    }
    integrate_tensor(
        |z| gamma.monomial(z),
        |z| kernel.density(z),
        kernel.dim,
        spec,
    )
}
