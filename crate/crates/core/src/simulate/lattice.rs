use rand::Rng;
use rand_distr::StandardNormal;

use super::sample::{PointSample, Window};
use crate::error::{invalid, Result};
use crate::numerics::seeded_rng;

/// `{z + ξ_z (+ U) : z ∈ Z^d} ∩ window` with `ξ_z ~ N(0, σ² I)` i.i.d. and, when
/// `stationarize`, one uniform shift `U ∈ [0, 1)^d` for the whole lattice.
pub fn sample_perturbed_lattice(
    noise_std: f64,
    stationarize: bool,
    window: &Window,
    seed: u64,
) -> Result<PointSample> {
    if !(noise_std >= 0.0 && noise_std.is_finite()) {
        return Err(invalid(
            "noise standard deviation must be finite and nonnegative",
        ));
    }
    let dim = window.dim();
    let (lower, upper) = match window {
        Window::Box { lower, upper } => (lower.clone(), upper.clone()),
        Window::Ball { radius, .. } => (vec![-radius; dim], vec![*radius; dim]),
        Window::Whole { .. } => return Err(invalid("a lattice sample needs a bounded window")),
    };
    let mut rng = seeded_rng(seed);
    let shift: Vec<f64> = (0..dim)
        .map(|_| {
            if stationarize {
                rng.random::<f64>()
            } else {
                0.0
            }
        })
        .collect();
    let margin = 6.0 * noise_std;
    let first: Vec<i64> = lower
        .iter()
        .zip(&shift)
        .map(|(a, u)| (a - margin - u).floor() as i64)
        .collect();
    let last: Vec<i64> = upper
        .iter()
        .zip(&shift)
        .map(|(b, u)| (b + margin - u).ceil() as i64)
        .collect();
    let mut site = first.clone();
    let mut coords = Vec::new();
    let mut point = vec![0.0; dim];
    'sites: loop {
        for a in 0..dim {
            let noise: f64 = if noise_std > 0.0 {
                rng.sample(StandardNormal)
            } else {
                0.0
            };
            point[a] = site[a] as f64 + shift[a] + noise_std * noise;
        }
        if window.contains(&point) {
            coords.extend_from_slice(&point);
        }
        for a in (0..dim).rev() {
            site[a] += 1;
            if site[a] <= last[a] {
                continue 'sites;
            }
            site[a] = first[a];
        }
        break;
    }
    Ok(PointSample {
        dim,
        window: window.clone(),
        usable: window.clone(),
        coords,
        seed,
        truncation_degree: None,
    })
}
