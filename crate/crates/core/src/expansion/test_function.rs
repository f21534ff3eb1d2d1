use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::{binomial, factorial, GridField, GridGeometry, MultiIndex, MAX_ORDER};

/// `|f| < SUPPORT_LEVEL · sup|f|` outside the reported support radius.
const SUPPORT_LEVEL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    /// `exp(−|x|² / (2 w²))`
    Gaussian { width: f64 },
    /// `(1 − |x|²/R²)_+^power`
    PolyBump { radius: f64, power: u32 },
    /// indicator of `∏ [lower_i, upper_i]`
    BoxIndicator { lower: Vec<f64>, upper: Vec<f64> },
    /// indicator of the open ball `|x − center| < radius`
    DiscIndicator { center: Vec<f64>, radius: f64 },
    /// `f ≡ 0`
    Zero,
}

/// A test function `f` on `R^d` with exact partial derivatives up to its Sobolev order.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    pub label: String,
    pub dim: usize,
    pub shape: Shape,
    /// monomial expansion of a polynomial bump inside its ball
    polynomial: Option<Polynomial>,
}

/// One coordinate factor of a separable test function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AxisFactor {
    Gauss { width: f64 },
    Interval { lower: f64, upper: f64 },
}

pub type Polynomial = BTreeMap<MultiIndex, f64>;

impl TestFunction {
    pub fn gaussian(dim: usize, width: f64) -> Result<Self> {
        check_dim(dim)?;
        if !(width > 0.0 && width.is_finite()) {
            return Err(invalid("Gaussian width must be positive"));
        }
        Ok(TestFunction {
            label: format!("gaussian-bump(w={width})"),
            dim,
            shape: Shape::Gaussian { width },
            polynomial: None,
        })
    }

    pub fn poly_bump(dim: usize, radius: f64, power: u32) -> Result<Self> {
        check_dim(dim)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(invalid("bump radius must be positive"));
        }
        if power == 0 || power > MAX_ORDER {
            return Err(invalid(format!("bump power must lie in 1..={MAX_ORDER}")));
        }
        Ok(TestFunction {
            label: format!("poly-bump(R={radius},n={power})"),
            dim,
            shape: Shape::PolyBump { radius, power },
            polynomial: Some(bump_polynomial(dim, radius, power)),
        })
    }

    pub fn box_indicator(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim(lower.len())?;
        if lower.len() != upper.len() || lower.iter().zip(&upper).any(|(a, b)| !(a < b)) {
            return Err(invalid(
                "box corners must satisfy lower < upper in every coordinate",
            ));
        }
        Ok(TestFunction {
            label: "box-indicator".into(),
            dim: lower.len(),
            shape: Shape::BoxIndicator { lower, upper },
            polynomial: None,
        })
    }

    /// Indicator of `[0, 1]^d`.
    pub fn unit_cube(dim: usize) -> Result<Self> {
        Self::box_indicator(vec![0.0; dim], vec![1.0; dim])
    }

    pub fn disc_indicator(center: Vec<f64>, radius: f64) -> Result<Self> {
        check_dim(center.len())?;
        if !(radius > 0.0) {
            return Err(invalid("disc radius must be positive"));
        }
        Ok(TestFunction {
            label: "disc-indicator".into(),
            dim: center.len(),
            shape: Shape::DiscIndicator { center, radius },
            polynomial: None,
        })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(TestFunction {
            label: "zero".into(),
            dim,
            shape: Shape::Zero,
            polynomial: None,
        })
    }

    /// Largest `k` with `∂^α f ∈ L²` for all `|α| ≤ k`.
    pub fn sobolev_order(&self) -> u32 {
        match self.shape {
            Shape::Gaussian { .. } | Shape::Zero => MAX_ORDER,
            Shape::PolyBump { power, .. } => power,
            _ => 0,
        }
    }

    /// Radius of a centered ball outside which `|f| < 1e-12 sup|f|`.
    pub fn support_radius(&self) -> f64 {
        match &self.shape {
            Shape::Gaussian { width } => width * (2.0 * (1.0 / SUPPORT_LEVEL).ln()).sqrt(),
            Shape::PolyBump { radius, .. } => *radius,
            Shape::BoxIndicator { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(a, b)| a.abs().max(b.abs()).powi(2))
                .sum::<f64>()
                .sqrt(),
            Shape::DiscIndicator { center, radius } => {
                center.iter().map(|c| c * c).sum::<f64>().sqrt() + radius
            }
            Shape::Zero => 1.0,
        }
    }

    /// Axis-aligned box containing the support, at the same level as [`Self::support_radius`].
    pub fn support_box(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.shape {
            Shape::BoxIndicator { lower, upper } => (lower.clone(), upper.clone()),
            Shape::DiscIndicator { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            _ => {
                let r = self.support_radius();
                (vec![-r; self.dim], vec![r; self.dim])
            }
        }
    }

    pub fn is_indicator(&self) -> bool {
        matches!(
            self.shape,
            Shape::BoxIndicator { .. } | Shape::DiscIndicator { .. }
        )
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match &self.shape {
            Shape::Gaussian { width } => {
                (-x.iter().map(|v| v * v).sum::<f64>() / (2.0 * width * width)).exp()
            }
            Shape::PolyBump { radius, power } => {
                let u = 1.0 - x.iter().map(|v| v * v).sum::<f64>() / (radius * radius);
                if u > 0.0 {
                    u.powi(*power as i32)
                } else {
                    0.0
                }
            }
            Shape::BoxIndicator { lower, upper } => {
                let inside = x
                    .iter()
                    .zip(lower.iter().zip(upper))
                    .all(|(v, (a, b))| a <= v && v <= b);
                f64::from(u8::from(inside))
            }
            Shape::DiscIndicator { center, radius } => {
                let r2: f64 = x.iter().zip(center).map(|(v, c)| (v - c) * (v - c)).sum();
                f64::from(u8::from(r2 < radius * radius))
            }
            Shape::Zero => 0.0,
        }
    }

    /// `∂^α f(x)`.
    pub fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Result<f64> {
        if alpha.dim() != self.dim {
            return Err(invalid(
                "multi-index dimension differs from the function dimension",
            ));
        }
        if alpha.order() > self.sobolev_order() {
            return Err(Error::HypothesisViolated(format!(
                "{} has no L² derivative of order {}",
                self.label,
                alpha.order()
            )));
        }
        if alpha.order() == 0 {
            return Ok(self.eval(x));
        }
        Ok(match &self.shape {
            Shape::Gaussian { width } => alpha
                .entries()
                .iter()
                .zip(x)
                .map(|(&a, &v)| gauss_derivative_1d(a, *width, v))
                .product(),
            Shape::PolyBump { radius, .. } => {
                if x.iter().map(|v| v * v).sum::<f64>() >= radius * radius {
                    0.0
                } else {
                    eval_polynomial(&differentiate(self.polynomial(), alpha), x)
                }
            }
            Shape::Zero => 0.0,
            _ => unreachable!("indicators have Sobolev order 0"),
        })
    }

    pub(crate) fn polynomial(&self) -> &Polynomial {
        self.polynomial
            .as_ref()
            .expect("polynomial bumps carry their expansion")
    }

    /// Coordinate factors when `f(x) = ∏ f_i(x_i)`.
    pub fn separable_factors(&self) -> Option<Vec<AxisFactor>> {
        match &self.shape {
            Shape::Gaussian { width } => Some(vec![AxisFactor::Gauss { width: *width }; self.dim]),
            Shape::BoxIndicator { lower, upper } => Some(
                lower
                    .iter()
                    .zip(upper)
                    .map(|(&lower, &upper)| AxisFactor::Interval { lower, upper })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Closed-form `f̂(t) = ∫ f(x) e^{i<x,t>} dx` where available.
    pub fn fourier(&self, t: &[f64]) -> Option<Complex64> {
        match &self.shape {
            Shape::Gaussian { width } => {
                let t2: f64 = t.iter().map(|v| v * v).sum();
                let scale = (2.0 * PI).sqrt() * width;
                Some(Complex64::new(
                    scale.powi(self.dim as i32) * (-width * width * t2 / 2.0).exp(),
                    0.0,
                ))
            }
            Shape::BoxIndicator { lower, upper } => Some(
                t.iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(&s, (&a, &b))| {
                        if s.abs() < 1e-12 {
                            Complex64::new(b - a, 0.0)
                        } else {
                            let i = Complex64::i();
                            ((i * s * b).exp() - (i * s * a).exp()) / (i * s)
                        }
                    })
                    .product(),
            ),
            Shape::Zero => Some(Complex64::new(0.0, 0.0)),
            _ => None,
        }
    }

    pub fn has_closed_fourier(&self) -> bool {
        self.separable_factors().is_some() || matches!(self.shape, Shape::Zero)
    }

    pub fn to_grid(&self, geometry: GridGeometry) -> GridField {
        GridField::from_fn(geometry, |x| self.eval(x))
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        Err(invalid(format!(
            "test functions are supported for d in 1..=3, got {dim}"
        )))
    }
}

/// `d^a/dx^a exp(−x²/(2w²)) = (−1/w)^a He_a(x/w) exp(−x²/(2w²))`.
pub fn gauss_derivative_1d(a: u32, width: f64, x: f64) -> f64 {
    let u = x / width;
    let (mut prev, mut cur) = (1.0, u);
    let he = match a {
        0 => 1.0,
        _ => {
            for n in 1..a {
                let next = u * cur - n as f64 * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    };
    (-1.0 / width).powi(a as i32) * he * (-u * u / 2.0).exp()
}

fn bump_polynomial(dim: usize, radius: f64, power: u32) -> Polynomial {
    // (1 − |x|²/R²)^n = Σ_j C(n,j) (−1/R²)^j Σ_{|β|=j} j!/β! x^{2β}
    let mut poly = Polynomial::new();
    for j in 0..=power {
        let outer =
            binomial(power as u64, j as u64) as f64 * (-1.0 / (radius * radius)).powi(j as i32);
        for beta in crate::numerics::multi_indices_of_order(dim, j).expect("dim ≥ 1") {
            let multinomial = factorial(j) as f64
                / beta
                    .entries()
                    .iter()
                    .map(|&b| factorial(b) as f64)
                    .product::<f64>();
            *poly.entry(beta.doubled()).or_insert(0.0) += outer * multinomial;
        }
    }
    poly
}

pub(crate) fn differentiate(poly: &Polynomial, alpha: &MultiIndex) -> Polynomial {
    let mut out = Polynomial::new();
    for (mono, coef) in poly {
        if let Some(rest) = mono.checked_sub(alpha) {
            let falling: f64 = mono
                .entries()
                .iter()
                .zip(alpha.entries())
                .map(|(&m, &a)| ((m - a + 1)..=m).map(f64::from).product::<f64>())
                .product();
            *out.entry(rest).or_insert(0.0) += coef * falling;
        }
    }
    out
}

pub(crate) fn eval_polynomial(poly: &Polynomial, x: &[f64]) -> f64 {
    poly.iter().map(|(mono, c)| c * mono.monomial(x)).sum()
}

pub(crate) fn multiply(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut out = Polynomial::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            *out.entry(ma.add(mb)).or_insert(0.0) += ca * cb;
        }
    }
    out
}
