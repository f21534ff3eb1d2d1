use std::f64::consts::{FRAC_PI_2, TAU};

use super::classify::{classify_shared_boundary, intersection_area, DEFAULT_MATCH_TOLERANCE};
use super::domain::SmoothDomain;
use crate::error::{invalid, Error, Result};
use crate::expansion::MOMENT_NULL_THRESHOLD;
use crate::kernels::{AxisKernel, Profile, TruncatedCorrelationKernel};
use crate::numerics::{integrate_piecewise, sphere_abs_first_moment};

const RAY_TOL: f64 = 1e-12;
const ANGLE_TOL: f64 = 1e-9;
const ARC_TOL: f64 = 1e-9;
const DEPTH: u32 = 40;

/// `λ_D + I(0)`, with values under the nullity threshold snapped to zero.
fn snapped_defect(kernel: &TruncatedCorrelationKernel) -> Result<f64> {
    let defect = kernel.defect()?;
    Ok(if defect.abs() <= MOMENT_NULL_THRESHOLD {
        0.0
    } else {
        defect
    })
}

/// `∫ |z·e₁| K(dz)` for an isotropic kernel, from the radial moment `J(d)`.
pub fn isotropic_surface_moment(kernel: &TruncatedCorrelationKernel) -> Result<f64> {
    if !kernel.isotropic {
        return Err(invalid(format!(
            "kernel `{}` is not isotropic",
            kernel.label
        )));
    }
    let j = kernel.radial_moment(kernel.dim as u32, &kernel.moment_spec())?;
    Ok(j * sphere_abs_first_moment(kernel.dim))
}

// 3-point Gauss-Legendre, exact for the quartic pieces below
const GL3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

fn gl3_between<F: Fn(f64) -> f64>(f: F, breaks: &[f64]) -> f64 {
    let mut knots: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|b| (-1.0..=1.0).contains(b))
        .collect();
    knots.extend([-1.0, 1.0]);
    knots.sort_by(f64::total_cmp);
    knots
        .windows(2)
        .map(|w| {
            let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            half * GL3
                .iter()
                .map(|(x, wt)| wt * f(mid + half * x))
                .sum::<f64>()
        })
        .sum()
}

fn triangular(u: f64) -> f64 {
    1.0 - u.abs()
}

/// `E|b + sV|` with `V` triangular on `[−1, 1]` and `s ≥ 0`.
fn abs_mean_one(b: f64, s: f64) -> f64 {
    if b.abs() >= s {
        return b.abs();
    }
    gl3_between(|v| (b + s * v).abs() * triangular(v), &[0.0, -b / s])
}

/// `E|c + s₁U + s₂V|` with `U, V` independent triangular on `[−1, 1]`.
fn abs_mean_two(c: f64, s1: f64, s2: f64) -> f64 {
    if c.abs() >= s1 + s2 {
        return c.abs();
    }
    if s1 == 0.0 {
        return abs_mean_one(c, s2);
    }
    // the inner mean is piecewise cubic in b with breaks at b = −s₂, 0, s₂
    gl3_between(
        |u| abs_mean_one(c + s1 * u, s2) * triangular(u),
        &[0.0, (-s2 - c) / s1, -c / s1, (s2 - c) / s1],
    )
}

/// Exact `∫|z·n| a(z₁) a(z₂) dz` for a product of piecewise linear axis kernels: each tensor
/// hat at node `(ih, jh)` contributes `h³ E|n₁(i+U) + n₂(j+V)|`.
fn separable_normal_moment(axis: &AxisKernel, normal: [f64; 2]) -> f64 {
    let h = axis.spacing;
    let last = axis.values.len() as i64 - 1;
    let (s1, s2) = (normal[0].abs(), normal[1].abs());
    let mut total = 0.0;
    for i in -last..=last {
        let ai = axis.values[i.unsigned_abs() as usize];
        if ai == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for j in -last..=last {
            let aj = axis.values[j.unsigned_abs() as usize];
            row += aj * abs_mean_two(s1 * i as f64 + s2 * j as f64, s1, s2);
        }
        total += ai * row;
    }
    total * h * h * h
}

/// `∫ |z·n| K(dz)` for a planar kernel and unit vector `n`. Exact for separable kernels,
/// polar quadrature otherwise.
pub fn normal_moment(kernel: &TruncatedCorrelationKernel, normal: [f64; 2]) -> Result<f64> {
    if kernel.dim != 2 {
        return Err(invalid("normal moments are implemented for planar kernels"));
    }
    let length = normal[0].hypot(normal[1]);
    if !(length > 0.0 && length.is_finite()) {
        return Err(invalid("normal must be a nonzero vector"));
    }
    let normal = [normal[0] / length, normal[1] / length];
    if let Profile::Separable(axis) = kernel.profile() {
        return Ok(separable_normal_moment(axis, normal));
    }
    let reach = kernel.moment_spec().truncation_radius;
    let radial_knots: Vec<f64> = (0..=16).map(|i| reach * i as f64 / 16.0).collect();
    let ray = |phi: f64| -> Result<f64> {
        let (s, c) = phi.sin_cos();
        integrate_piecewise(
            |r| r * r * kernel.density(&[r * c, r * s]),
            &radial_knots,
            RAY_TOL,
            DEPTH,
        )
    };
    let psi = normal[1].atan2(normal[0]);
    let mut knots: Vec<f64> = (0..=16).map(|i| TAU * i as f64 / 16.0).collect();
    for kink in [psi - FRAC_PI_2, psi + FRAC_PI_2] {
        knots.push(kink.rem_euclid(TAU));
    }
    knots.sort_by(f64::total_cmp);
    let failure = std::cell::Cell::new(None);
    let value = integrate_piecewise(
        |phi| match ray(phi) {
            Ok(g) => (phi - psi).cos().abs() * g,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        },
        &knots,
        ANGLE_TOL,
        DEPTH,
    )?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// Surface-order limit of `L^{1−d} Cov(X_L(1_A), X_L(1_B))` for a hyperuniform kernel:
/// `−½ ∫_{∂A∩∂B} ε(x) ∫|z·N_A(x)| K(dz) σ_A(dx)`.
pub fn surface_covariance_limit(
    kernel: &TruncatedCorrelationKernel,
    a: &SmoothDomain,
    b: &SmoothDomain,
) -> Result<f64> {
    if kernel.dim != a.dim() {
        return Err(invalid(format!(
            "kernel dimension {} differs from the domain dimension {}",
            kernel.dim,
            a.dim()
        )));
    }
    let defect = snapped_defect(kernel)?;
    if defect != 0.0 {
        return Err(Error::VolumeOrderRegime { defect });
    }
    let shared = classify_shared_boundary(a, b, DEFAULT_MATCH_TOLERANCE)?;
    if shared.arcs.is_empty() {
        return Ok(0.0);
    }
    if kernel.isotropic {
        return Ok(-0.5 * isotropic_surface_moment(kernel)? * shared.signed_length);
    }
    let mut total = 0.0;
    for arc in &shared.arcs {
        let curve = &a.components()[arc.component];
        let failure = std::cell::Cell::new(None);
        let value = integrate_piecewise(
            |t| match normal_moment(kernel, curve.outward_normal(t)) {
                Ok(m) => m * curve.speed(t),
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            },
            &[arc.start, arc.end],
            ARC_TOL,
            DEPTH,
        )?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        total += arc.epsilon as f64 * value;
    }
    Ok(-0.5 * total)
}

/// Volume-order limit `(λ_D + ∫K) |A ∩ B|` of `L^{−d} Cov(X_L(1_A), X_L(1_B))`.
pub fn volume_covariance_limit(
    kernel: &TruncatedCorrelationKernel,
    a: &SmoothDomain,
    b: &SmoothDomain,
) -> Result<f64> {
    if kernel.dim != a.dim() {
        return Err(invalid("kernel and domains have different dimensions"));
    }
    let defect = snapped_defect(kernel)?;
    if defect == 0.0 {
        return Ok(0.0);
    }
    Ok(defect * intersection_area(a, b)?)
}

/// `c λ_D min{|W| L^d, |W|^{(d−1)/d} L^{d−1}}`; the constant `c` is supplied by the caller.
pub fn variance_floor(
    diagonal_intensity: f64,
    volume: f64,
    scale: f64,
    c: f64,
    dim: usize,
) -> Result<f64> {
    if dim == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    for (name, v) in [
        ("λ_D", diagonal_intensity),
        ("|W|", volume),
        ("L", scale),
        ("c", c),
    ] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(invalid(format!(
                "{name} must be nonnegative and finite, got {v}"
            )));
        }
    }
    let d = dim as f64;
    let volume_order = volume * scale.powf(d);
    let surface_order = volume.powf((d - 1.0) / d) * scale.powf(d - 1.0);
    Ok(c * diagonal_intensity * volume_order.min(surface_order))
}
