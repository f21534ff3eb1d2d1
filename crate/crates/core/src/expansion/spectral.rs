//! Frequency-lattice evaluation of `f̂` and the exact Fourier covariance.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::inner::derivative_inner_product;
use super::test_function::{Shape, TestFunction};
use crate::error::{invalid, Result};
use crate::kernels::{Profile, TruncatedCorrelationKernel};
use crate::numerics::{dft_forward, GridGeometry, MultiIndex};

/// `|f̂ ĝ|` at the lattice edge must stay below this fraction of its peak.
const SPECTRAL_TAIL_LEVEL: f64 = 1e-9;

/// Grid used for the Fourier paths: `samples` points per axis on a cube of side `extent`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierGrid {
    pub extent: f64,
    pub samples: usize,
}

/// Frequency lattice together with `f̂` and `ĝ` sampled on it.
pub(crate) struct SpectralPair {
    pub geometry: GridGeometry,
    pub f_hat: Vec<Complex64>,
    pub g_hat: Vec<Complex64>,
}

fn default_samples(dim: usize) -> usize {
    match dim {
        1 => 4096,
        2 => 512,
        _ => 64,
    }
}

/// Frequency reach beyond which a Gaussian transform is negligible.
fn gaussian_reach(width: f64) -> f64 {
    9.0 / width
}

/// Smallest cube side avoiding wrap-around for `f`, `g` and a kernel of range `kernel_reach`.
pub fn required_extent(f: &TestFunction, g: &TestFunction, kernel_reach: f64) -> f64 {
    2.0 * (f.support_radius() + g.support_radius()) + 2.0 * kernel_reach
}

/// Picks a grid: closed-form Gaussians only need enough samples to reach their spectral decay.
pub fn auto_grid(f: &TestFunction, g: &TestFunction, kernel_reach: f64) -> FourierGrid {
    let extent = required_extent(f, g, kernel_reach);
    let samples = match (&f.shape, &g.shape) {
        (Shape::Gaussian { width: a }, Shape::Gaussian { width: b }) => {
            let reach = gaussian_reach(a.max(*b));
            ((reach * extent / PI).ceil() as usize)
                .next_power_of_two()
                .max(64)
        }
        (Shape::Zero, _) | (_, Shape::Zero) => 64,
        _ => default_samples(f.dim),
    };
    FourierGrid { extent, samples }
}

fn spectrum_on(f: &TestFunction, geometry: &GridGeometry) -> Result<Vec<Complex64>> {
    if f.has_closed_fourier() {
        let mut t = vec![0.0; geometry.dim()];
        Ok((0..geometry.len())
            .map(|k| {
                geometry.frequency_point_into(k, &mut t);
                f.fourier(&t).expect("closed form exists")
            })
            .collect())
    } else {
        Ok(dft_forward(&f.to_grid(geometry.clone()))?.values)
    }
}

pub(crate) fn spectral_pair(
    f: &TestFunction,
    g: &TestFunction,
    grid: FourierGrid,
    kernel_reach: f64,
) -> Result<SpectralPair> {
    if f.dim != g.dim {
        return Err(invalid("test functions have different dimensions"));
    }
    let needed = required_extent(f, g, kernel_reach);
    if grid.extent < needed * (1.0 - 1e-12) {
        return Err(invalid(format!(
            "grid extent {} wraps around; at least {needed} is needed",
            grid.extent
        )));
    }
    let geometry = GridGeometry::centered_cube(f.dim, grid.extent / 2.0, grid.samples)?;
    let f_hat = spectrum_on(f, &geometry)?;
    let g_hat = spectrum_on(g, &geometry)?;
    if !f.is_indicator() && !g.is_indicator() {
        check_spectral_tail(&geometry, &f_hat, &g_hat)?;
    }
    Ok(SpectralPair {
        geometry,
        f_hat,
        g_hat,
    })
}

fn check_spectral_tail(
    geometry: &GridGeometry,
    f_hat: &[Complex64],
    g_hat: &[Complex64],
) -> Result<()> {
    let n = geometry.samples[0];
    let mut peak: f64 = 0.0;
    let mut edge: f64 = 0.0;
    for (k, (a, b)) in f_hat.iter().zip(g_hat).enumerate() {
        let v = (a * b.conj()).norm();
        peak = peak.max(v);
        if geometry.unravel(k).iter().any(|&i| i == n / 2) {
            edge = edge.max(v);
        }
    }
    if peak > 0.0 && edge > SPECTRAL_TAIL_LEVEL * peak {
        return Err(invalid(format!(
            "grid too coarse: spectrum at the Nyquist edge is {:.2e} of its peak",
            edge / peak
        )));
    }
    Ok(())
}

/// `Cov(X_L(f), X_L(g)) = (2π)^{-d} L^d ∫ f̂(u) conj(ĝ(u)) (λ_D + K̂(u/L)) du`.
///
/// With `K ≡ 0` this is `λ_D L^d ⟨f, g⟩`, taken in space: a frequency lattice would drop the
/// slowly decaying tails of indicator transforms.
pub fn covariance_exact_fourier(
    kernel: &TruncatedCorrelationKernel,
    f: &TestFunction,
    g: &TestFunction,
    scale: f64,
) -> Result<f64> {
    if matches!(kernel.profile(), Profile::Zero) {
        if !(scale >= 1.0 && scale.is_finite()) {
            return Err(invalid(format!("scale L must be at least 1, got {scale}")));
        }
        if f.dim != kernel.dim {
            return Err(invalid("kernel and test function dimensions differ"));
        }
        let zero = MultiIndex::zero(f.dim);
        let inner = derivative_inner_product(f, &zero, g, &zero)?;
        return Ok(kernel.diagonal_intensity * inner * scale.powi(f.dim as i32));
    }
    let reach = kernel.truncation_radius / scale.max(1.0);
    covariance_exact_fourier_on(kernel, f, g, scale, auto_grid(f, g, reach))
}

pub fn covariance_exact_fourier_on(
    kernel: &TruncatedCorrelationKernel,
    f: &TestFunction,
    g: &TestFunction,
    scale: f64,
    grid: FourierGrid,
) -> Result<f64> {
    if !(scale >= 1.0 && scale.is_finite()) {
        return Err(invalid(format!("scale L must be at least 1, got {scale}")));
    }
    if f.dim != kernel.dim {
        return Err(invalid("kernel and test function dimensions differ"));
    }
    let pair = spectral_pair(f, g, grid, kernel.truncation_radius / scale)?;
    let geometry = &pair.geometry;
    let d = geometry.dim();
    let mut u = vec![0.0; d];
    let mut v = vec![0.0; d];
    let mut total = 0.0;
    for k in 0..geometry.len() {
        let product = pair.f_hat[k] * pair.g_hat[k].conj();
        if product.re == 0.0 {
            continue;
        }
        geometry.frequency_point_into(k, &mut u);
        for (vi, ui) in v.iter_mut().zip(&u) {
            *vi = ui / scale;
        }
        total += product.re * kernel.structure_factor(&v);
    }
    Ok(total * geometry.frequency_cell_volume() * scale.powi(d as i32) / (2.0 * PI).powi(d as i32))
}
