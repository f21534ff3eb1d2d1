use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use super::sample::{PointSample, Window};
use crate::error::{invalid, Result};
use crate::numerics::seeded_rng;

/// Stationary Poisson process of intensity `λ` restricted to a bounded window.
pub fn sample_poisson(intensity: f64, window: &Window, seed: u64) -> Result<PointSample> {
    if !(intensity > 0.0 && intensity.is_finite()) {
        return Err(invalid("Poisson intensity must be positive"));
    }
    if matches!(window, Window::Whole { .. }) {
        return Err(invalid("a Poisson sample needs a bounded window"));
    }
    let dim = window.dim();
    let mut rng = seeded_rng(seed);
    let mean = intensity * window.volume();
    let count = if mean > 0.0 {
        Poisson::new(mean)
            .map_err(|e| invalid(e.to_string()))?
            .sample(&mut rng) as usize
    } else {
        0
    };
    let mut coords = Vec::with_capacity(count * dim);
    for _ in 0..count {
        match window {
            Window::Box { lower, upper } => {
                for (a, b) in lower.iter().zip(upper) {
                    coords.push(a + (b - a) * rng.random::<f64>());
                }
            }
            Window::Ball { radius, .. } => {
                // uniform direction times radius U^{1/d}
                let direction: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                let norm = direction.iter().map(|v: &f64| v * v).sum::<f64>().sqrt();
                let r = radius * rng.random::<f64>().powf(1.0 / dim as f64);
                coords.extend(direction.iter().map(|v| r * v / norm));
            }
            Window::Whole { .. } => unreachable!("rejected above"),
        }
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
