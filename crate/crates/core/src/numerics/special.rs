use std::f64::consts::PI;

use super::MultiIndex;

/// Apéry's constant `ζ(3)`.
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

pub fn factorial(n: u32) -> u64 {
    (1..=n as u64).product()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `Γ(n/2)` for a positive integer `n`.
pub fn gamma_half(n: u32) -> f64 {
    assert!(n > 0, "gamma_half needs a positive argument");
    let mut value = if n % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut x = if n % 2 == 0 { 1.0 } else { 0.5 };
    let target = n as f64 / 2.0;
    while x < target - 0.25 {
        value *= x;
        x += 1.0;
    }
    value
}

/// Surface area `σ_d` of the unit sphere in `R^d`.
pub fn sphere_area(d: usize) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / gamma_half(d as u32)
}

/// `∫_{S^{d-1}} |w_1| dσ(w)`.
pub fn sphere_abs_first_moment(d: usize) -> f64 {
    2.0 * PI.powf((d as f64 - 1.0) / 2.0) / gamma_half(d as u32 + 1)
}

/// `c_d = σ_d Γ(d/2) / (2√π Γ((d+1)/2))`; equals half of [`sphere_abs_first_moment`].
pub fn surface_constant(d: usize) -> f64 {
    sphere_area(d) * gamma_half(d as u32) / (2.0 * PI.sqrt() * gamma_half(d as u32 + 1))
}

/// Average of `w^{2β}` over the uniform measure on `S^{d-1}`.
///
/// `(w_1², …, w_d²)` is Dirichlet(½, …, ½), which gives
/// `Γ(d/2) ∏ Γ(½ + β_i) / (Γ(½)^d Γ(d/2 + |β|))`.
pub fn dirichlet_even_moment(half_index: &MultiIndex) -> f64 {
    let d = half_index.dim() as u32;
    let order = half_index.order();
    let numerator: f64 = half_index
        .entries()
        .iter()
        .map(|&b| gamma_half(2 * b + 1))
        .product();
    gamma_half(d) * numerator / (PI.sqrt().powi(d as i32) * gamma_half(d + 2 * order))
}
