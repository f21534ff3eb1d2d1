use std::f64::consts::FRAC_1_SQRT_2;

use faer::{c64, Mat};
use rand::Rng;
use rand_distr::StandardNormal;

use super::sample::{PointSample, Window};
use crate::error::{Error, Result};
use crate::numerics::seeded_rng;

pub const MIN_GINIBRE_SIZE: usize = 16;
pub const MAX_GINIBRE_SIZE: usize = 1024;
/// Width of the edge zone excluded from the usable window.
pub const GINIBRE_EDGE_MARGIN: f64 = 3.0;

/// Eigenvalues of an `N×N` matrix of independent standard complex Gaussians (`E|a|² = 1`).
/// In the bulk this is the infinite Ginibre process with intensity `1/π`; the usable window
/// is the disc of radius `√N − 3`.
pub fn sample_ginibre(n: usize, seed: u64) -> Result<PointSample> {
    if !(MIN_GINIBRE_SIZE..=MAX_GINIBRE_SIZE).contains(&n) {
        return Err(Error::CostGuard {
            what: "Ginibre matrix size",
            limit: MAX_GINIBRE_SIZE,
            requested: n,
        });
    }
    let mut rng = seeded_rng(seed);
    let entries: Vec<c64> = (0..n * n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            c64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
        })
        .collect();
    let matrix = Mat::<c64>::from_fn(n, n, |i, j| entries[i * n + j]);
    let eigenvalues = matrix
        .eigenvalues()
        .map_err(|e| Error::LinearAlgebra(format!("Ginibre eigenvalues: {e:?}")))?;
    let coords = eigenvalues.iter().flat_map(|z| [z.re, z.im]).collect();
    Ok(PointSample {
        dim: 2,
        window: Window::Whole { dim: 2 },
        usable: Window::ball(2, ((n as f64).sqrt() - GINIBRE_EDGE_MARGIN).max(0.0))?,
        coords,
        seed,
        truncation_degree: None,
    })
}
