use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest total dimension accepted by [`integrate_tensor`].
pub const MAX_TENSOR_DIM: usize = 6;

/// Truncation radius, relative tolerance and refinement depth of a quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub truncation_radius: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl QuadratureSpec {
    pub fn new(truncation_radius: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        if !(truncation_radius > 0.0 && truncation_radius.is_finite()) {
            return Err(invalid("truncation radius must be positive and finite"));
        }
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(invalid("relative tolerance must lie in (0, 1)"));
        }
        if max_depth < 1 {
            return Err(invalid("refinement depth must be at least 1"));
        }
        Ok(QuadratureSpec {
            truncation_radius,
            rel_tol,
            max_depth,
        })
    }

    pub fn with_tolerance(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_radius(mut self, truncation_radius: f64) -> Self {
        self.truncation_radius = truncation_radius;
        self
    }
}

// Gauss-Kronrod 7/15 nodes on [-1, 1] (positive half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    result: f64,
    error: f64,
    resabs: f64,
    depth: u32,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, depth: u32) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut resabs = fc.abs() * WGK[7];
    let mut fv = [(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = (f1, f2);
        res_k += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j].0 - mean).abs() + (fv[j].1 - mean).abs());
    }
    let scale = half.abs();
    let result = res_k * half;
    let resabs = resabs * scale;
    let resasc = resasc * scale;
    let mut error = ((res_k - res_g) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Panel {
        a,
        b,
        result,
        error,
        resabs,
        depth,
    }
}

const MAX_PANELS: usize = 1 << 16;

/// Globally adaptive Gauss-Kronrod quadrature over the intervals between consecutive `knots`.
///
/// The panel with the largest error estimate is bisected until the summed estimate drops
/// below `rel_tol · ∫|f|`. A panel reaching `max_depth` bisections before that point
/// aborts with the last two global estimates.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: F,
    knots: &[f64],
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if knots.len() < 2 {
        return Err(invalid("piecewise quadrature needs at least two knots"));
    }
    let tol = rel_tol.max(100.0 * f64::EPSILON);
    let mut panels: Vec<Panel> = knots
        .windows(2)
        .filter(|w| w[1] != w[0])
        .map(|w| kronrod(&f, w[0], w[1], 0))
        .collect();
    if panels.is_empty() {
        return Ok(0.0);
    }
    let mut previous = f64::NAN;
    loop {
        let total: f64 = panels.iter().map(|p| p.result).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let resabs: f64 = panels.iter().map(|p| p.resabs).sum();
        if !total.is_finite() {
            return Err(Error::NotConverged {
                coarse: previous,
                fine: total,
            });
        }
        if resabs == 0.0 || error <= tol * resabs {
            return Ok(total);
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let p = panels[worst];
        if p.depth >= max_depth || panels.len() >= MAX_PANELS {
            return Err(Error::NotConverged {
                coarse: previous,
                fine: total,
            });
        }
        let mid = 0.5 * (p.a + p.b);
        panels[worst] = kronrod(&f, p.a, mid, p.depth + 1);
        panels.push(kronrod(&f, mid, p.b, p.depth + 1));
        previous = total;
    }
}

/// Adaptive quadrature of `f` over `[a, b]`.
pub fn integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    integrate_piecewise(f, &[a, b], rel_tol, max_depth)
}

/// `∫_0^{R_cut} g(r) κ_r(r) dr`.
pub fn integrate_radial<G, W>(g: G, weight: W, spec: &QuadratureSpec) -> Result<f64>
where
    G: Fn(f64) -> f64,
    W: Fn(f64) -> f64,
{
    integrate_interval(
        |r| {
            let w = weight(r);
            if w == 0.0 {
                0.0
            } else {
                g(r) * w
            }
        },
        0.0,
        spec.truncation_radius,
        spec.rel_tol,
        spec.max_depth,
    )
}

// 8-point Gauss-Legendre rule on [-1, 1] (positive half).
const GL8_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_W: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Upper limit on the number of integrand evaluations of one tensor rule.
const TENSOR_EVAL_BUDGET: usize = 1 << 27;

fn composite_gauss_legendre(r: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let width = 2.0 * r / panels as f64;
    let mut nodes = Vec::with_capacity(8 * panels);
    let mut weights = Vec::with_capacity(8 * panels);
    for p in 0..panels {
        let mid = -r + (p as f64 + 0.5) * width;
        for (x, w) in GL8_X.iter().zip(&GL8_W) {
            for sign in [-1.0, 1.0] {
                nodes.push(mid + sign * x * width / 2.0);
                weights.push(w * width / 2.0);
            }
        }
    }
    (nodes, weights)
}

fn product_rule(
    f: &dyn Fn(&[f64]) -> f64,
    dim: usize,
    nodes: &[f64],
    weights: &[f64],
) -> (f64, f64) {
    let n = nodes.len();
    let mut idx = [0usize; MAX_TENSOR_DIM];
    let mut point = [0.0; MAX_TENSOR_DIM];
    let (mut total, mut total_abs) = (0.0, 0.0);
    loop {
        let mut w = 1.0;
        for a in 0..dim {
            point[a] = nodes[idx[a]];
            w *= weights[idx[a]];
        }
        let v = f(&point[..dim]);
        total += w * v;
        total_abs += w * v.abs();
        let mut a = dim;
        loop {
            if a == 0 {
                return (total, total_abs);
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < n {
                break;
            }
            idx[a] = 0;
        }
    }
}

/// `∫ g(x) w(x) dx` over the box `[-R_cut, R_cut]^dim`.
///
/// Composite 8-point Gauss-Legendre product rule; the panel count per axis grows until two
/// successive estimates agree to `rel_tol` relative to `∫|g w|`. Meant for smooth integrands.
pub fn integrate_tensor<G, W>(g: G, weight: W, dim: usize, spec: &QuadratureSpec) -> Result<f64>
where
    G: Fn(&[f64]) -> f64,
    W: Fn(&[f64]) -> f64,
{
    if dim == 0 {
        return Err(invalid("tensor quadrature needs dimension at least 1"));
    }
    if dim > MAX_TENSOR_DIM {
        return Err(Error::CostGuard {
            what: "tensor quadrature dimension",
            limit: MAX_TENSOR_DIM,
            requested: dim,
        });
    }
    let integrand = |x: &[f64]| {
        let w = weight(x);
        if w == 0.0 {
            0.0
        } else {
            g(x) * w
        }
    };
    let r = spec.truncation_radius;
    // panel counts grow by about √2 per level
    let panel_count = |level: u32| (2.0 * 2f64.sqrt().powi(level as i32)).round() as usize;
    let (nodes, weights) = composite_gauss_legendre(r, panel_count(0));
    let (mut latest, _) = product_rule(&integrand, dim, &nodes, &weights);
    let mut previous = f64::NAN;
    for level in 1..=spec.max_depth {
        let panels = panel_count(level);
        let points = (8 * panels).checked_pow(dim as u32).unwrap_or(usize::MAX);
        if points > TENSOR_EVAL_BUDGET {
            break;
        }
        let (nodes, weights) = composite_gauss_legendre(r, panels);
        let (value, scale) = product_rule(&integrand, dim, &nodes, &weights);
        if scale == 0.0 || (value - latest).abs() <= spec.rel_tol.max(100.0 * f64::EPSILON) * scale
        {
            return Ok(value);
        }
        previous = latest;
        latest = value;
    }
    Err(Error::NotConverged {
        coarse: previous,
        fine: latest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec(r: f64, tol: f64) -> QuadratureSpec {
        QuadratureSpec::new(r, tol, 40).unwrap()
    }

    #[test]
    fn ginibre_radial_moment() {
        let j3 = integrate_radial(
            |r| r.powi(3),
            |r| -(-r * r).exp() / (PI * PI),
            &spec(6.0, 1e-8),
        )
        .unwrap();
        assert!((j3 + 1.0 / (2.0 * PI * PI)).abs() < 1e-10);
    }

    #[test]
    fn zero_weight() {
        let v = integrate_radial(|_| 1.0, |_| 0.0, &spec(1.0, 1e-8)).unwrap();
        assert_eq!(v, 0.0);
        let t = integrate_tensor(|_| 1.0, |_| 0.0, 3, &spec(1.0, 1e-8)).unwrap();
        assert_eq!(t, 0.0);
    }

    #[test]
    fn separable_tensor_product() {
        let k = |z: &[f64]| -(-(z[0] * z[0] + z[1] * z[1])).exp() / (PI * PI);
        let w = |x: &[f64]| k(&x[0..2]) * k(&x[2..4]);
        let v = integrate_tensor(|_| 1.0, w, 4, &spec(5.5, 1e-9)).unwrap();
        assert!((v - 1.0 / (PI * PI)).abs() < 1e-8, "{v}");
    }

    #[test]
    fn parity_vanishes() {
        let w = |x: &[f64]| (-(x.iter().map(|v| v * v).sum::<f64>())).exp();
        let v = integrate_tensor(|x| x[0] * x[1], w, 2, &spec(6.0, 1e-10)).unwrap();
        assert!(v.abs() < 1e-10);
    }

    #[test]
    fn dimension_guard() {
        let err = integrate_tensor(|_| 1.0, |_| 1.0, 7, &spec(1.0, 1e-6)).unwrap_err();
        assert!(matches!(err, Error::CostGuard { .. }));
    }

    #[test]
    fn non_convergence_reports_estimates() {
        let err = integrate_interval(|x| 1.0 / x.abs().sqrt().max(1e-300), -1.0, 1.0, 1e-12, 3)
            .unwrap_err();
        match err {
            Error::NotConverged { coarse, fine } => assert!(coarse.is_finite() && fine.is_finite()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn halving_tolerance_never_hurts() {
        let suite: Vec<(Box<dyn Fn(f64) -> f64>, f64, f64, f64)> = vec![
            (
                Box::new(|x: f64| (-x * x).exp()),
                -5.0,
                5.0,
                PI.sqrt() * 0.999_999_999_998_462_5,
            ),
            (
                Box::new(|x: f64| (3.0 * x).cos()),
                0.0,
                2.0,
                (6.0f64).sin() / 3.0,
            ),
            (
                Box::new(|x: f64| 1.0 / (1.0 + x * x)),
                0.0,
                4.0,
                4.0f64.atan(),
            ),
            (
                Box::new(|x: f64| (x * 7.0).sin().powi(2) * x.exp()),
                0.0,
                1.0,
                {
                    // ∫ e^x sin²(7x) = (e - 1)/2 - Re ∫ e^{(1+14i)x}/2
                    let re =
                        (1.0f64.exp() * ((14.0f64).cos() + 14.0 * (14.0f64).sin()) - 1.0) / 197.0;
                    (1.0f64.exp() - 1.0) / 2.0 - re / 2.0
                },
            ),
        ];
        for (f, a, b, exact) in &suite {
            let mut tol = 1e-3;
            let mut last = f64::INFINITY;
            while tol > 1e-12 {
                let v = integrate_interval(f, *a, *b, tol, 50).unwrap();
                let err = (v - exact).abs();
                assert!(
                    err <= last + 1e-14 * exact.abs(),
                    "tol {tol}: {err} > {last}"
                );
                last = err;
                tol /= 2.0;
            }
            assert!(last < 1e-11 * exact.abs().max(1.0));
        }
    }
}
