//! `⟨∂^α f, ∂^β g⟩` for pairs of test functions.

use std::f64::consts::PI;

use super::test_function::{
    differentiate, gauss_derivative_1d, multiply, AxisFactor, Polynomial, Shape, TestFunction,
};
use crate::error::{invalid, Error, Result};
use crate::numerics::{
    dirichlet_even_moment, integrate_piecewise, integrate_tensor, sphere_area, MultiIndex,
    QuadratureSpec,
};

const INNER_TOL: f64 = 1e-13;

/// `⟨∂^α f, ∂^β g⟩ = ∫ ∂^α f ∂^β g`.
pub fn derivative_inner_product(
    f: &TestFunction,
    alpha: &MultiIndex,
    g: &TestFunction,
    beta: &MultiIndex,
) -> Result<f64> {
    if f.dim != g.dim || alpha.dim() != f.dim || beta.dim() != f.dim {
        return Err(invalid(
            "dimensions of functions and multi-indices must agree",
        ));
    }
    for (h, idx) in [(f, alpha), (g, beta)] {
        if idx.order() > h.sobolev_order() {
            return Err(Error::HypothesisViolated(format!(
                "{} has no L² derivative of order {}",
                h.label,
                idx.order()
            )));
        }
    }
    if matches!(f.shape, Shape::Zero) || matches!(g.shape, Shape::Zero) {
        return Ok(0.0);
    }
    if let (Some(ff), Some(gf)) = (f.separable_factors(), g.separable_factors()) {
        let mut product = 1.0;
        for i in 0..f.dim {
            product *= axis_inner(ff[i], alpha.entries()[i], gf[i], beta.entries()[i])?;
            if product == 0.0 {
                break;
            }
        }
        return Ok(product);
    }
    if let (Shape::PolyBump { radius: rf, .. }, Shape::PolyBump { radius: rg, .. }) =
        (&f.shape, &g.shape)
    {
        let integrand = multiply(
            &differentiate(f.polynomial(), alpha),
            &differentiate(g.polynomial(), beta),
        );
        return Ok(ball_integral(&integrand, f.dim, rf.min(*rg)));
    }
    if let (
        Shape::DiscIndicator {
            center: ca,
            radius: ra,
        },
        Shape::DiscIndicator {
            center: cb,
            radius: rb,
        },
    ) = (&f.shape, &g.shape)
    {
        if f.dim == 2 {
            return Ok(lens_area(ca, *ra, cb, *rb));
        }
    }
    let rho = f.support_radius().min(g.support_radius());
    let spec = QuadratureSpec::new(rho, 1e-10, 40)?;
    integrate_tensor(
        |x| g.derivative(beta, x).unwrap_or(f64::NAN),
        |x| f.derivative(alpha, x).unwrap_or(f64::NAN),
        f.dim,
        &spec,
    )
}

/// `‖f‖²`.
pub fn norm_squared(f: &TestFunction) -> Result<f64> {
    let zero = MultiIndex::zero(f.dim);
    derivative_inner_product(f, &zero, f, &zero)
}

/// `|f|²_{H^k} = Σ_{|β|=k} k!/β! ‖∂^β f‖²`.
pub fn sobolev_seminorm_squared(f: &TestFunction, k: u32) -> Result<f64> {
    let kf = crate::numerics::factorial(k) as f64;
    let mut total = 0.0;
    for beta in crate::numerics::multi_indices_of_order(f.dim, k)? {
        let w = kf / beta.factorial()? as f64;
        total += w * derivative_inner_product(f, &beta, f, &beta)?;
    }
    Ok(total)
}

fn axis_inner(f: AxisFactor, a: u32, g: AxisFactor, b: u32) -> Result<f64> {
    use AxisFactor::*;
    match (f, g) {
        (
            Interval {
                lower: a0,
                upper: a1,
            },
            Interval {
                lower: b0,
                upper: b1,
            },
        ) => Ok((a1.min(b1) - a0.max(b0)).max(0.0)),
        (Interval { lower, upper }, Gauss { width }) => interval_gauss(lower, upper, width, b),
        (Gauss { width }, Interval { lower, upper }) => interval_gauss(lower, upper, width, a),
        (Gauss { width: w1 }, Gauss { width: w2 }) => {
            let reach = w1.min(w2) * 12.0;
            let knots: Vec<f64> = (0..=24).map(|i| -reach + i as f64 * reach / 12.0).collect();
            integrate_piecewise(
                |x| gauss_derivative_1d(a, w1, x) * gauss_derivative_1d(b, w2, x),
                &knots,
                INNER_TOL,
                40,
            )
        }
    }
}

fn interval_gauss(lower: f64, upper: f64, width: f64, order: u32) -> Result<f64> {
    if order >= 1 {
        return Ok(gauss_derivative_1d(order - 1, width, upper)
            - gauss_derivative_1d(order - 1, width, lower));
    }
    let reach = 9.0 * width;
    let (a, b) = (lower.max(-reach), upper.min(reach));
    if a >= b {
        return Ok(0.0);
    }
    integrate_piecewise(
        |x| gauss_derivative_1d(0, width, x),
        &[a, (a + b) / 2.0, b],
        INNER_TOL,
        40,
    )
}

/// `∫_{|x|<ρ} p(x) dx` for a polynomial `p`.
pub(crate) fn ball_integral(poly: &Polynomial, dim: usize, rho: f64) -> f64 {
    let shell = sphere_area(dim);
    poly.iter()
        .map(|(mono, c)| match mono.halved() {
            Some(half) => {
                let n = mono.order() as i32 + dim as i32;
                c * shell * dirichlet_even_moment(&half) * rho.powi(n) / n as f64
            }
            None => 0.0,
        })
        .sum()
}

/// Area of the intersection of two discs.
pub fn lens_area(ca: &[f64], ra: f64, cb: &[f64], rb: f64) -> f64 {
    let dist = ((ca[0] - cb[0]).powi(2) + (ca[1] - cb[1]).powi(2)).sqrt();
    if dist >= ra + rb {
        return 0.0;
    }
    if dist <= (ra - rb).abs() {
        return PI * ra.min(rb).powi(2);
    }
    let part = |r: f64, other: f64| {
        let cos = ((dist * dist + r * r - other * other) / (2.0 * dist * r)).clamp(-1.0, 1.0);
        r * r * cos.acos()
    };
    let kite = 0.5
        * ((-dist + ra + rb) * (dist + ra - rb) * (dist - ra + rb) * (dist + ra + rb))
            .max(0.0)
            .sqrt();
    part(ra, rb) + part(rb, ra) - kite
}
