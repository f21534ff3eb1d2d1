use faer::{c64, Mat};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::sample::{PointSample, Window};
use crate::error::{invalid, Error, Result};
use crate::numerics::seeded_rng;

pub const MAX_GEF_RADIUS: f64 = 12.0;

/// Degree `⌈R² + 12R⌉` of the Taylor truncation used for a window of radius `R`.
pub fn gef_truncation_degree(radius: f64) -> usize {
    (radius * radius + 12.0 * radius).ceil() as usize
}

/// Zeros of `Σ_{k ≤ n} a_k z^k / √(k!)` in the disc of radius `R`, with `a_k` i.i.d.
/// standard complex Gaussians and `n` from [`gef_truncation_degree`].
pub fn sample_gef_zeros(radius: f64, seed: u64) -> Result<PointSample> {
    sample_gef_zeros_with_constant(radius, seed, None)
}

/// As [`sample_gef_zeros`], optionally replacing `a_0`.
pub fn sample_gef_zeros_with_constant(
    radius: f64,
    seed: u64,
    constant: Option<Complex64>,
) -> Result<PointSample> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(invalid("GEF window radius must be positive"));
    }
    if radius > MAX_GEF_RADIUS {
        return Err(Error::CostGuard {
            what: "GEF window radius",
            limit: MAX_GEF_RADIUS as usize,
            requested: radius.ceil() as usize,
        });
    }
    let n = gef_truncation_degree(radius);
    let mut rng = seeded_rng(seed);
    let mut a: Vec<Complex64> = (0..=n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect();
    if let Some(c) = constant {
        a[0] = c;
    }
    // coefficients of the polynomial in w = z / R, scaled by their largest modulus
    let mut log_fact = 0.0;
    let logs: Vec<f64> = (0..=n)
        .map(|k| {
            if k > 0 {
                log_fact += (k as f64).ln();
            }
            k as f64 * radius.ln() - 0.5 * log_fact
        })
        .collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let b: Vec<Complex64> = a
        .iter()
        .zip(&logs)
        .map(|(ak, l)| ak * (l - top).exp())
        .collect();
    let lead = b[n];
    let companion = Mat::<c64>::from_fn(n, n, |i, j| {
        if j == n - 1 {
            let v = -b[i] / lead;
            c64::new(v.re, v.im)
        } else if i == j + 1 {
            c64::new(1.0, 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    let roots = companion
        .eigenvalues()
        .map_err(|e| Error::LinearAlgebra(format!("companion eigenvalues: {e:?}")))?;
    let coords = roots
        .iter()
        .map(|w| (w.re * radius, w.im * radius))
        .filter(|(x, y)| x * x + y * y <= radius * radius)
        .flat_map(|(x, y)| [x, y])
        .collect();
    let window = Window::ball(2, radius)?;
    Ok(PointSample {
        dim: 2,
        window: window.clone(),
        usable: window,
        coords,
        seed,
        truncation_degree: Some(n),
    })
}
