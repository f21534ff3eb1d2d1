use std::f64::consts::PI;

use num_complex::Complex64;

use super::dpp::for_each_cycle;
use super::partitions::TruncationMap;
use crate::error::{invalid, Error, Result};
use crate::numerics::{integrate_tensor, MultiIndex, QuadratureSpec};

/// Largest `m` accepted by [`i_m_moment`]; `κ_{m−1}` lives on `R^{2(m−1)}`.
pub const MAX_IM_ORDER: usize = 3;

/// Infinite Ginibre correlation kernel `π^{-1} exp(z w̄ − |z|²/2 − |w|²/2)`.
pub fn ginibre_kernel(z: Complex64, w: Complex64) -> Complex64 {
    (z * w.conj() - 0.5 * (z.norm_sqr() + w.norm_sqr())).exp() / PI
}

/// `ρ_k^T(z_1, …, z_k)` of the infinite Ginibre ensemble by the cyclic formula.
pub fn ginibre_truncated_correlation(points: &[Complex64]) -> f64 {
    let k = points.len();
    let mut total = Complex64::new(0.0, 0.0);
    for_each_cycle(k, |succ| {
        let mut prod = Complex64::new(1.0, 0.0);
        for (i, &j) in succ.iter().enumerate() {
            prod *= ginibre_kernel(points[i], points[j]);
        }
        total += prod;
    });
    if k % 2 == 1 {
        total.re
    } else {
        -total.re
    }
}

/// Higher truncated density `κ_{m−1}(z_1, …, z_{m−1}) = ρ_m^T(0, z_1, …, z_{m−1})` of a
/// translation-invariant planar process, on `R^{2(m−1)}` as real coordinates.
#[derive(Clone, Copy, Debug)]
pub struct HigherDensity {
    pub label: &'static str,
    /// invariant under `x ↦ −x` and `y ↦ −y` applied to every variable at once
    pub flip_invariant: bool,
    pub truncation_radius: f64,
    eval: fn(&[f64]) -> f64,
}

impl HigherDensity {
    pub fn eval(&self, coords: &[f64]) -> f64 {
        (self.eval)(coords)
    }
}

fn ginibre_reduced(coords: &[f64]) -> f64 {
    match coords.len() {
        2 => -(-(coords[0] * coords[0] + coords[1] * coords[1])).exp() / (PI * PI),
        // 2 Re K(0, a) K(a, b) K(b, 0)
        4 => {
            let (a, b) = (
                Complex64::new(coords[0], coords[1]),
                Complex64::new(coords[2], coords[3]),
            );
            let ab = a * b.conj();
            2.0 / (PI * PI * PI) * (ab.re - a.norm_sqr() - b.norm_sqr()).exp() * ab.im.cos()
        }
        _ => {
            let mut points = Vec::with_capacity(coords.len() / 2 + 1);
            points.push(Complex64::new(0.0, 0.0));
            points.extend(coords.chunks(2).map(|c| Complex64::new(c[0], c[1])));
            ginibre_truncated_correlation(&points)
        }
    }
}

/// The Ginibre `κ_{m−1}`. Its decay is at least `exp(−|z|²/2)` along every direction.
pub fn ginibre_higher_density() -> HigherDensity {
    HigherDensity {
        label: "ginibre",
        flip_invariant: true,
        truncation_radius: 6.0,
        eval: ginibre_reduced,
    }
}

/// `I_m(τ; α^{(1)}, …, α^{(m)}) = (1/∏ α^{(i)}!) ∫ κ_{m−1}(z) ∏_i z_{τ(i)}^{α^{(i)}} dz` over
/// `(R²)^{m−1}`, with `τ: [m] → [m−1]`.
pub fn i_m_moment(
    density: &HigherDensity,
    tau: &TruncationMap,
    alpha: &[MultiIndex],
    spec: Option<QuadratureSpec>,
) -> Result<f64> {
    let m = tau.domain();
    if m > MAX_IM_ORDER {
        return Err(Error::CostGuard {
            what: "I_m order",
            limit: MAX_IM_ORDER,
            requested: m,
        });
    }
    if m < 2 || tau.codomain != m - 1 {
        return Err(invalid(format!(
            "τ must map [{m}] to [{}] with m ≥ 2",
            m.saturating_sub(1)
        )));
    }
    if alpha.len() != m || alpha.iter().any(|a| a.dim() != 2) {
        return Err(invalid("need one planar multi-index per coordinate of τ"));
    }
    let total = alpha.iter().fold(MultiIndex::zero(2), |acc, a| acc.add(a));
    if density.flip_invariant && !total.is_even() {
        return Ok(0.0);
    }
    let norm: f64 = alpha
        .iter()
        .map(|a| a.factorial().map(|f| f as f64))
        .product::<Result<f64>>()?;
    let spec = match spec {
        Some(s) => s,
        // each 4-D refinement costs about four times the last one
        None => QuadratureSpec::new(
            density.truncation_radius,
            if m == 2 { 1e-10 } else { 1e-7 },
            12,
        )?,
    };
    let monomial = |x: &[f64]| -> f64 {
        alpha
            .iter()
            .zip(&tau.values)
            .map(|(a, &t)| a.monomial(&x[2 * t..2 * t + 2]))
            .product()
    };
    Ok(integrate_tensor(monomial, |x| density.eval(x), 2 * (m - 1), &spec)? / norm)
}
