use std::f64::consts::{PI, TAU};
use std::fmt;

use super::expr::AngleExpr;
use crate::error::{invalid, Error, Result};
use crate::numerics::integrate_piecewise;

const CURVE_TOL: f64 = 1e-13;
const CURVE_DEPTH: u32 = 40;
// samples used to validate star radii and to seed curve quadrature
const STAR_CHECK_SAMPLES: usize = 2048;

/// One closed C¹ boundary component, parametrized by `θ ∈ [0, 2π)` and oriented so that
/// `(y', −x')` is the outward normal of the domain it bounds.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryCurve {
    /// Counterclockwise circle, or clockwise when it bounds a hole.
    Circle {
        center: [f64; 2],
        radius: f64,
        hole: bool,
    },
    Ellipse {
        center: [f64; 2],
        semi_axes: [f64; 2],
    },
    Star {
        center: [f64; 2],
        radius: AngleExpr,
    },
}

fn wrap(theta: f64) -> f64 {
    theta.rem_euclid(TAU)
}

impl BoundaryCurve {
    pub fn point(&self, theta: f64) -> [f64; 2] {
        match self {
            BoundaryCurve::Circle {
                center,
                radius,
                hole,
            } => {
                let s = if *hole { -theta.sin() } else { theta.sin() };
                [center[0] + radius * theta.cos(), center[1] + radius * s]
            }
            BoundaryCurve::Ellipse { center, semi_axes } => [
                center[0] + semi_axes[0] * theta.cos(),
                center[1] + semi_axes[1] * theta.sin(),
            ],
            BoundaryCurve::Star { center, radius } => {
                let r = radius.eval(wrap(theta));
                [center[0] + r * theta.cos(), center[1] + r * theta.sin()]
            }
        }
    }

    /// `dx/dθ`.
    pub fn velocity(&self, theta: f64) -> [f64; 2] {
        let (s, c) = theta.sin_cos();
        match self {
            BoundaryCurve::Circle { radius, hole, .. } => {
                if *hole {
                    [-radius * s, -radius * c]
                } else {
                    [-radius * s, radius * c]
                }
            }
            BoundaryCurve::Ellipse { semi_axes, .. } => [-semi_axes[0] * s, semi_axes[1] * c],
            BoundaryCurve::Star { radius, .. } => {
                let (r, dr) = radius.eval_with_derivative(wrap(theta));
                [dr * c - r * s, dr * s + r * c]
            }
        }
    }

    pub fn speed(&self, theta: f64) -> f64 {
        let v = self.velocity(theta);
        v[0].hypot(v[1])
    }

    pub fn outward_normal(&self, theta: f64) -> [f64; 2] {
        let v = self.velocity(theta);
        let n = v[0].hypot(v[1]);
        [v[1] / n, -v[0] / n]
    }

    /// Level function `F` (negative on the domain side near the curve) and its gradient.
    pub fn level(&self, x: &[f64; 2]) -> (f64, [f64; 2]) {
        match self {
            BoundaryCurve::Circle {
                center,
                radius,
                hole,
            } => {
                let d = [x[0] - center[0], x[1] - center[1]];
                let rho = d[0].hypot(d[1]);
                let radial = if rho > 0.0 {
                    [d[0] / rho, d[1] / rho]
                } else {
                    [1.0, 0.0]
                };
                if *hole {
                    (radius - rho, [-radial[0], -radial[1]])
                } else {
                    (rho - radius, radial)
                }
            }
            BoundaryCurve::Ellipse { center, semi_axes } => {
                let (a, b) = (semi_axes[0], semi_axes[1]);
                let d = [x[0] - center[0], x[1] - center[1]];
                let f = (d[0] / a).powi(2) + (d[1] / b).powi(2) - 1.0;
                (f, [2.0 * d[0] / (a * a), 2.0 * d[1] / (b * b)])
            }
            BoundaryCurve::Star { center, radius } => {
                let d = [x[0] - center[0], x[1] - center[1]];
                let rho = d[0].hypot(d[1]);
                if rho == 0.0 {
                    return (-radius.eval(0.0), [1.0, 0.0]);
                }
                let phi = wrap(d[1].atan2(d[0]));
                let (r, dr) = radius.eval_with_derivative(phi);
                let e_rho = [d[0] / rho, d[1] / rho];
                let e_phi = [-e_rho[1], e_rho[0]];
                let k = dr / rho;
                (rho - r, [e_rho[0] - k * e_phi[0], e_rho[1] - k * e_phi[1]])
            }
        }
    }

    /// Distance estimate `|F|/|∇F|` and the unit outward normal of the bounded domain.
    pub fn distance_and_normal(&self, x: &[f64; 2]) -> (f64, [f64; 2]) {
        let (f, g) = self.level(x);
        let n = g[0].hypot(g[1]);
        (f.abs() / n, [g[0] / n, g[1] / n])
    }

    /// Oriented length of `[a, b]` in parameter.
    pub fn arc_length(&self, a: f64, b: f64) -> Result<f64> {
        integrate_piecewise(|t| self.speed(t), &self.knots(a, b), CURVE_TOL, CURVE_DEPTH)
    }

    /// `½ ∫ (x y' − y x') dθ` over `[a, b]`.
    pub fn green_area(&self, a: f64, b: f64) -> Result<f64> {
        integrate_piecewise(
            |t| {
                let p = self.point(t);
                let v = self.velocity(t);
                0.5 * (p[0] * v[1] - p[1] * v[0])
            },
            &self.knots(a, b),
            CURVE_TOL,
            CURVE_DEPTH,
        )
    }

    fn knots(&self, a: f64, b: f64) -> Vec<f64> {
        let pieces = match self {
            BoundaryCurve::Star { .. } => 64,
            _ => 8,
        };
        (0..=pieces)
            .map(|i| a + (b - a) * i as f64 / pieces as f64)
            .collect()
    }
}

/// Supported shape families.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainShape {
    Disc {
        center: [f64; 2],
        radius: f64,
    },
    Annulus {
        center: [f64; 2],
        inner: f64,
        outer: f64,
    },
    Ellipse {
        center: [f64; 2],
        semi_axes: [f64; 2],
    },
    Star {
        center: [f64; 2],
        radius: AngleExpr,
    },
}

/// A bounded open planar set with C¹ boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothDomain {
    shape: DomainShape,
    components: Vec<BoundaryCurve>,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl SmoothDomain {
    pub fn disc(center: [f64; 2], radius: f64) -> Result<Self> {
        positive("disc radius", radius)?;
        Ok(SmoothDomain {
            shape: DomainShape::Disc { center, radius },
            components: vec![BoundaryCurve::Circle {
                center,
                radius,
                hole: false,
            }],
        })
    }

    pub fn annulus(center: [f64; 2], inner: f64, outer: f64) -> Result<Self> {
        positive("inner radius", inner)?;
        positive("outer radius", outer)?;
        if inner >= outer {
            return Err(invalid(format!(
                "annulus needs inner < outer, got {inner} and {outer}"
            )));
        }
        Ok(SmoothDomain {
            shape: DomainShape::Annulus {
                center,
                inner,
                outer,
            },
            components: vec![
                BoundaryCurve::Circle {
                    center,
                    radius: outer,
                    hole: false,
                },
                BoundaryCurve::Circle {
                    center,
                    radius: inner,
                    hole: true,
                },
            ],
        })
    }

    pub fn ellipse(center: [f64; 2], a: f64, b: f64) -> Result<Self> {
        positive("semi-axis", a)?;
        positive("semi-axis", b)?;
        Ok(SmoothDomain {
            shape: DomainShape::Ellipse {
                center,
                semi_axes: [a, b],
            },
            components: vec![BoundaryCurve::Ellipse {
                center,
                semi_axes: [a, b],
            }],
        })
    }

    /// Star-shaped domain `{c + ρω(θ) : ρ < r(θ)}`; `r` must be positive and 2π-periodic with
    /// a matching derivative.
    pub fn star(center: [f64; 2], radius: AngleExpr) -> Result<Self> {
        for i in 0..STAR_CHECK_SAMPLES {
            let t = TAU * i as f64 / STAR_CHECK_SAMPLES as f64;
            let (r, dr) = radius.eval_with_derivative(t);
            if !(r > 0.0 && r.is_finite() && dr.is_finite()) {
                return Err(invalid(format!(
                    "r(θ) = {} must be positive and finite; r({t:.4}) = {r}",
                    radius.source()
                )));
            }
        }
        let (r0, d0) = radius.eval_with_derivative(0.0);
        let (r1, d1) = radius.eval_with_derivative(TAU);
        if (r0 - r1).abs() > 1e-9 * r0 || (d0 - d1).abs() > 1e-9 * r0.max(d0.abs()) {
            return Err(invalid(format!(
                "r(θ) = {} is not C¹ across θ = 0",
                radius.source()
            )));
        }
        Ok(SmoothDomain {
            shape: DomainShape::Star {
                center,
                radius: radius.clone(),
            },
            components: vec![BoundaryCurve::Star { center, radius }],
        })
    }

    /// Parses `disc cx cy r`, `annulus cx cy r1 r2`, `ellipse cx cy a b` or
    /// `star cx cy "r(θ)"`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (kind, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let number = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{s}` in `{text}`")))
        };
        if kind == "star" {
            let mut parts = rest.trim().splitn(3, char::is_whitespace);
            let cx = number(parts.next().unwrap_or(""))?;
            let cy = number(parts.next().unwrap_or(""))?;
            let expr = parts.next().unwrap_or("").trim();
            let expr = expr.trim_matches(|c| c == '"' || c == '\'');
            if expr.is_empty() {
                return Err(Error::Parse(format!(
                    "star domain needs an r(θ) expression: `{text}`"
                )));
            }
            return SmoothDomain::star([cx, cy], AngleExpr::parse(expr)?);
        }
        let values = rest
            .split_whitespace()
            .map(number)
            .collect::<Result<Vec<f64>>>()?;
        let expect = |n: usize| -> Result<()> {
            if values.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "`{kind}` takes {n} numbers, got {}: `{text}`",
                    values.len()
                )))
            }
        };
        match kind {
            "disc" => {
                expect(3)?;
                SmoothDomain::disc([values[0], values[1]], values[2])
            }
            "annulus" => {
                expect(4)?;
                SmoothDomain::annulus([values[0], values[1]], values[2], values[3])
            }
            "ellipse" => {
                expect(4)?;
                SmoothDomain::ellipse([values[0], values[1]], values[2], values[3])
            }
            other => Err(Error::Parse(format!("unknown domain kind `{other}`"))),
        }
    }

    pub fn dim(&self) -> usize {
        2
    }

    pub fn shape(&self) -> &DomainShape {
        &self.shape
    }

    pub fn components(&self) -> &[BoundaryCurve] {
        &self.components
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match &self.shape {
            DomainShape::Disc { center, radius } => dist(x, center) < *radius,
            DomainShape::Annulus {
                center,
                inner,
                outer,
            } => {
                let r = dist(x, center);
                *inner < r && r < *outer
            }
            DomainShape::Ellipse { center, semi_axes } => {
                ((x[0] - center[0]) / semi_axes[0]).powi(2)
                    + ((x[1] - center[1]) / semi_axes[1]).powi(2)
                    < 1.0
            }
            DomainShape::Star { center, radius } => {
                let d = [x[0] - center[0], x[1] - center[1]];
                d[0].hypot(d[1]) < radius.eval(wrap(d[1].atan2(d[0])))
            }
        }
    }

    /// Area; closed form except for star domains.
    pub fn area(&self) -> Result<f64> {
        match &self.shape {
            DomainShape::Disc { radius, .. } => Ok(PI * radius * radius),
            DomainShape::Annulus { inner, outer, .. } => Ok(PI * (outer * outer - inner * inner)),
            DomainShape::Ellipse { semi_axes, .. } => Ok(PI * semi_axes[0] * semi_axes[1]),
            DomainShape::Star { .. } => self.green_area(),
        }
    }

    /// Perimeter; closed form for circles, quadrature otherwise.
    pub fn perimeter(&self) -> Result<f64> {
        match &self.shape {
            DomainShape::Disc { radius, .. } => Ok(TAU * radius),
            DomainShape::Annulus { inner, outer, .. } => Ok(TAU * (inner + outer)),
            _ => self.components.iter().map(|c| c.arc_length(0.0, TAU)).sum(),
        }
    }

    /// Area from the boundary parametrization alone.
    pub fn green_area(&self) -> Result<f64> {
        self.components.iter().map(|c| c.green_area(0.0, TAU)).sum()
    }

    /// Radius of a centred ball containing the closure.
    pub fn bounding_radius(&self) -> f64 {
        let (center, r) = match &self.shape {
            DomainShape::Disc { center, radius } => (center, *radius),
            DomainShape::Annulus { center, outer, .. } => (center, *outer),
            DomainShape::Ellipse { center, semi_axes } => (center, semi_axes[0].max(semi_axes[1])),
            DomainShape::Star { center, radius } => (
                center,
                (0..STAR_CHECK_SAMPLES)
                    .map(|i| radius.eval(TAU * i as f64 / STAR_CHECK_SAMPLES as f64))
                    .fold(0.0, f64::max)
                    * 1.01,
            ),
        };
        center[0].hypot(center[1]) + r
    }
}

fn dist(x: &[f64], c: &[f64; 2]) -> f64 {
    (x[0] - c[0]).hypot(x[1] - c[1])
}

impl fmt::Display for SmoothDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            DomainShape::Disc { center, radius } => {
                write!(f, "disc {} {} {}", center[0], center[1], radius)
            }
            DomainShape::Annulus {
                center,
                inner,
                outer,
            } => {
                write!(f, "annulus {} {} {} {}", center[0], center[1], inner, outer)
            }
            DomainShape::Ellipse { center, semi_axes } => {
                write!(
                    f,
                    "ellipse {} {} {} {}",
                    center[0], center[1], semi_axes[0], semi_axes[1]
                )
            }
            DomainShape::Star { center, radius } => {
                write!(
                    f,
                    "star {} {} \"{}\"",
                    center[0],
                    center[1],
                    radius.source()
                )
            }
        }
    }
}
