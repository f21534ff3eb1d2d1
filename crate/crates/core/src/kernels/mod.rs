//! Truncated pair-correlation kernels `(λ, λ_D, K)` and their moments.

mod convolution;
mod gef;
mod moments;
mod table;

use std::f64::consts::PI;

pub use convolution::{wavelet_power, AxisKernel, BaseCovariance};
pub use moments::{kernel_moment_tensor, kernel_moments, KernelMomentReport, MAX_MOMENT_ORDER};
pub use table::{bessel_j0, parse_radial_table, RadialTable, TableHeader};

use crate::error::{invalid, Error, Result};
use crate::numerics::{integrate_radial, sphere_area, QuadratureSpec};

/// Default number of explicit GEF series terms.
pub const GEF_DEFAULT_TERMS: usize = 64;
/// Largest wavelet power accepted by [`kernel_convolution_measure`].
pub const MAX_CONVOLUTION_POWER: usize = 4;
/// Grid step of the convolution-measure kernel.
pub const CONVOLUTION_KERNEL_STEP: f64 = 1.0 / 64.0;

/// Threshold defining the default truncation radius: `|κ| < 1e-12 sup|κ|` beyond it.
const TRUNCATION_LEVEL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Profile {
    Zero,
    Ginibre,
    GefZeros {
        series_terms: usize,
    },
    Radial(RadialTable),
    /// `κ(z) = ∏_i κ_1(z_i)`
    Separable(AxisKernel),
}

/// A stationary second-order structure: intensity `λ`, diagonal intensity `λ_D` and
/// the density `κ` of the truncated pair-correlation measure.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedCorrelationKernel {
    pub label: String,
    pub dim: usize,
    pub intensity: f64,
    pub diagonal_intensity: f64,
    pub isotropic: bool,
    pub flip_invariant: bool,
    pub truncation_radius: f64,
    /// Upper bound on `∫|κ|`.
    pub total_variation: f64,
    profile: Profile,
}

impl TruncatedCorrelationKernel {
    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// `κ(z)`.
    pub fn density(&self, z: &[f64]) -> f64 {
        match &self.profile {
            Profile::Separable(axis) => z.iter().map(|&x| axis.eval(x)).product(),
            _ => self.radial(z.iter().map(|x| x * x).sum::<f64>().sqrt()),
        }
    }

    /// `κ` as a function of `|z|`; only meaningful for isotropic kernels.
    pub fn radial(&self, r: f64) -> f64 {
        match &self.profile {
            Profile::Zero => 0.0,
            Profile::Ginibre => -(-r * r).exp() / (PI * PI),
            Profile::GefZeros { series_terms } => gef::scaled_density(r, *series_terms) / (PI * PI),
            Profile::Radial(table) => table.eval(r),
            Profile::Separable(axis) => axis.eval(r) * axis.eval(0.0).powi(self.dim as i32 - 1),
        }
    }

    /// `K̂(t) = ∫ e^{i<z,t>} κ(z) dz` (real by symmetry).
    pub fn fourier(&self, t: &[f64]) -> f64 {
        let norm = t.iter().map(|x| x * x).sum::<f64>().sqrt();
        match &self.profile {
            Profile::Zero => 0.0,
            Profile::Ginibre => -(-norm * norm / 4.0).exp() / PI,
            Profile::GefZeros { .. } => gef::structure_factor(norm) - self.diagonal_intensity,
            Profile::Radial(table) => table.fourier(self.dim, norm),
            Profile::Separable(axis) => t.iter().map(|&x| axis.fourier(x)).product(),
        }
    }

    /// `λ_D + K̂(t)`, evaluated without cancellation where a closed form allows it.
    pub fn structure_factor(&self, t: &[f64]) -> f64 {
        let norm = t.iter().map(|x| x * x).sum::<f64>().sqrt();
        match &self.profile {
            Profile::Ginibre => -(-norm * norm / 4.0).exp_m1() / PI,
            Profile::GefZeros { .. } => gef::structure_factor(norm),
            _ => self.diagonal_intensity + self.fourier(t),
        }
    }

    /// Bound on the GEF series remainder after the explicit terms; zero for other kernels.
    pub fn tail_bound(&self, r: f64) -> f64 {
        match &self.profile {
            Profile::GefZeros { series_terms } => gef::tail_bound(r, *series_terms),
            _ => 0.0,
        }
    }

    pub fn quadrature_spec(&self) -> QuadratureSpec {
        QuadratureSpec::new(self.truncation_radius.max(1e-3), 1e-12, 50)
            .expect("kernel truncation radius is positive")
    }

    /// Radial moments weight the tail by `r^p`, so they integrate past the truncation radius.
    pub fn moment_spec(&self) -> QuadratureSpec {
        let spec = self.quadrature_spec();
        spec.with_radius(1.5 * spec.truncation_radius)
    }

    /// `J(p) = ∫_0^∞ r^p κ(r) dr` for isotropic kernels.
    pub fn radial_moment(&self, p: u32, spec: &QuadratureSpec) -> Result<f64> {
        if !self.isotropic {
            return Err(invalid(format!("kernel `{}` is not isotropic", self.label)));
        }
        if matches!(self.profile, Profile::Zero) {
            return Ok(0.0);
        }
        integrate_radial(|r| r.powi(p as i32), |r| self.radial(r), spec)
    }

    /// `λ_D + I(0)`.
    pub fn defect(&self) -> Result<f64> {
        let i0 = match &self.profile {
            Profile::Zero => 0.0,
            Profile::Separable(axis) => axis.moment(0).powi(self.dim as i32),
            _ => {
                sphere_area(self.dim)
                    * self.radial_moment(self.dim as u32 - 1, &self.moment_spec())?
            }
        };
        Ok(self.diagonal_intensity + i0)
    }
}

fn truncation_radius_of(profile: impl Fn(f64) -> f64) -> f64 {
    let step = 1e-3;
    let sup = (0..=20_000)
        .map(|i| profile(i as f64 * step).abs())
        .fold(0.0, f64::max);
    if sup == 0.0 {
        return 1.0;
    }
    let last = (0..=20_000)
        .rev()
        .find(|&i| profile(i as f64 * step).abs() >= TRUNCATION_LEVEL * sup)
        .unwrap_or(0);
    (last + 1) as f64 * step
}

/// Poisson process of intensity `λ` in `R^d`.
pub fn kernel_poisson(dim: usize, intensity: f64) -> Result<TruncatedCorrelationKernel> {
    if dim == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    if !(intensity > 0.0 && intensity.is_finite()) {
        return Err(invalid(format!(
            "Poisson intensity must be positive, got {intensity}"
        )));
    }
    Ok(TruncatedCorrelationKernel {
        label: "poisson".into(),
        dim,
        intensity,
        diagonal_intensity: intensity,
        isotropic: true,
        flip_invariant: true,
        truncation_radius: 1.0,
        total_variation: 0.0,
        profile: Profile::Zero,
    })
}

/// Infinite Ginibre ensemble: `κ(z) = −π^{-2} e^{-|z|²}`.
pub fn kernel_ginibre() -> TruncatedCorrelationKernel {
    TruncatedCorrelationKernel {
        label: "ginibre".into(),
        dim: 2,
        intensity: 1.0 / PI,
        diagonal_intensity: 1.0 / PI,
        isotropic: true,
        flip_invariant: true,
        truncation_radius: (1.0 / TRUNCATION_LEVEL).ln().sqrt(),
        total_variation: 1.0 / PI,
        profile: Profile::Ginibre,
    }
}

/// Zero set of the planar Gaussian entire function.
pub fn kernel_gef_zeros(series_terms: usize) -> Result<TruncatedCorrelationKernel> {
    if series_terms == 0 {
        return Err(invalid("the GEF series needs at least one explicit term"));
    }
    let radial = |r: f64| gef::scaled_density(r, series_terms) / (PI * PI);
    let truncation_radius = truncation_radius_of(radial);
    let spec = QuadratureSpec::new(truncation_radius, 1e-12, 50)?;
    let total_variation = integrate_radial(|r| 2.0 * PI * r, |r| radial(r).abs(), &spec)?;
    Ok(TruncatedCorrelationKernel {
        label: "gef".into(),
        dim: 2,
        intensity: 1.0 / PI,
        diagonal_intensity: 1.0 / PI,
        isotropic: true,
        flip_invariant: true,
        truncation_radius,
        total_variation,
        profile: Profile::GefZeros { series_terms },
    })
}

/// Kernel `σ_Y * φ * φ(−·)` of the measure `1 + (Y * φ)(x) dx`, with `φ` the `p`-fold
/// self-convolution of the Haar-type wavelet taken in each coordinate.
pub fn kernel_convolution_measure(
    p: usize,
    base: BaseCovariance,
    dim: usize,
) -> Result<TruncatedCorrelationKernel> {
    if p == 0 {
        return Err(invalid("wavelet power must be at least 1"));
    }
    if p > MAX_CONVOLUTION_POWER {
        return Err(Error::CostGuard {
            what: "wavelet power",
            limit: MAX_CONVOLUTION_POWER,
            requested: p,
        });
    }
    if !(1..=3).contains(&dim) {
        return Err(invalid(
            "convolution-measure kernels are built for d in 1..=3",
        ));
    }
    let axis = AxisKernel::build(p, base, CONVOLUTION_KERNEL_STEP);
    let axis_tv: f64 = axis.values.iter().map(|v| v.abs()).sum::<f64>() * 2.0 * axis.spacing;
    Ok(TruncatedCorrelationKernel {
        label: format!("convolution-p{p}"),
        dim,
        intensity: 1.0,
        diagonal_intensity: 0.0,
        isotropic: dim == 1,
        flip_invariant: true,
        truncation_radius: axis.support().max(axis.spacing) * (dim as f64).sqrt(),
        total_variation: axis_tv.powi(dim as i32),
        profile: Profile::Separable(axis),
    })
}

/// Isotropic kernel from a tabulated radial profile (`d ≤ 3`).
pub fn kernel_from_table(
    header: TableHeader,
    table: RadialTable,
) -> Result<TruncatedCorrelationKernel> {
    if !(1..=3).contains(&header.dim) {
        return Err(invalid("tabulated kernels are supported for d in 1..=3"));
    }
    if header.intensity < 0.0 || header.diagonal_intensity < 0.0 {
        return Err(invalid("intensities must be nonnegative"));
    }
    let radius = table.max_radius();
    let spec = QuadratureSpec::new(radius.max(1e-3), 1e-10, 40)?;
    let shell = sphere_area(header.dim);
    let d = header.dim as i32;
    let total_variation =
        integrate_radial(|r| shell * r.powi(d - 1), |r| table.eval(r).abs(), &spec)?;
    Ok(TruncatedCorrelationKernel {
        label: "tabulated".into(),
        dim: header.dim,
        intensity: header.intensity,
        diagonal_intensity: header.diagonal_intensity,
        isotropic: true,
        flip_invariant: true,
        truncation_radius: radius,
        total_variation,
        profile: Profile::Radial(table),
    })
}

pub fn load_radial_kernel(text: &str) -> Result<TruncatedCorrelationKernel> {
    let (header, table) = parse_radial_table(text)?;
    kernel_from_table(header, table)
}
