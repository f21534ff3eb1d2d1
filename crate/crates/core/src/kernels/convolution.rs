//! One-dimensional factor of the convolution-measure kernel `σ_Y * φ * φ(−·)`.

use serde::{Deserialize, Serialize};

/// Covariance of the base field `Y` along one axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum BaseCovariance {
    /// `variance · (1 − |s|/range)_+`.
    Triangular { variance: f64, range: f64 },
    /// `Y ≡ 0`.
    Zero,
}

impl BaseCovariance {
    /// Covariance of the range-2 moving average of ±1 cell variables under a uniform shift.
    pub fn moving_average() -> Self {
        BaseCovariance::Triangular {
            variance: 0.5,
            range: 2.0,
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            BaseCovariance::Triangular { variance, range } => {
                variance * (1.0 - s.abs() / range).max(0.0)
            }
            BaseCovariance::Zero => 0.0,
        }
    }

    pub fn range(&self) -> f64 {
        match *self {
            BaseCovariance::Triangular { range, .. } => range,
            BaseCovariance::Zero => 0.0,
        }
    }
}

/// Samples of the one-dimensional kernel at nodes `j h`, `j = -half_len..=half_len`,
/// linearly interpolated in between.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisKernel {
    pub spacing: f64,
    /// values at `j = 0, 1, …` (the kernel is even)
    pub values: Vec<f64>,
}

/// `φ = ψ^{*p}` sampled on the midpoint lattice of spacing `h`, `ψ = 1_{[0,½]} − 1_{[½,1]}`.
/// Node `k` sits at `(k + p/2) h`.
pub fn wavelet_power(p: usize, h: f64) -> Vec<f64> {
    let cells = (1.0 / h).round() as usize;
    let psi: Vec<f64> = (0..cells)
        .map(|k| if 2 * k < cells { 1.0 } else { -1.0 })
        .collect();
    let mut phi = psi.clone();
    for _ in 1..p {
        phi = discrete_convolution(&phi, &psi)
            .into_iter()
            .map(|v| v * h)
            .collect();
    }
    phi
}

pub(crate) fn discrete_convolution(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0.0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl AxisKernel {
    pub fn build(p: usize, base: BaseCovariance, h: f64) -> Self {
        let phi = wavelet_power(p, h);
        let n = phi.len();
        // A_m = h Σ_a φ_a φ_{a+m}, m ≥ 0
        let autocorr: Vec<f64> = (0..n)
            .map(|m| {
                h * phi[..n - m]
                    .iter()
                    .zip(&phi[m..])
                    .map(|(x, y)| x * y)
                    .sum::<f64>()
            })
            .collect();
        let sigma_reach = (base.range() / h).ceil() as isize;
        let reach = sigma_reach + n as isize;
        let values = (0..=reach)
            .map(|j| {
                let mut acc = 0.0;
                for m in -(n as isize - 1)..=(n as isize - 1) {
                    let s = base.eval((j - m) as f64 * h);
                    if s != 0.0 {
                        acc += s * autocorr[m.unsigned_abs()];
                    }
                }
                h * acc
            })
            .collect();
        AxisKernel { spacing: h, values }
    }

    pub fn support(&self) -> f64 {
        self.spacing * (self.values.len() - 1) as f64
    }

    pub fn eval(&self, x: f64) -> f64 {
        let u = x.abs() / self.spacing;
        let j = u.floor() as usize;
        if j + 1 >= self.values.len() {
            return 0.0;
        }
        let w = u - j as f64;
        self.values[j] * (1.0 - w) + self.values[j + 1] * w
    }

    fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = self.spacing;
        self.values.iter().enumerate().flat_map(move |(j, &v)| {
            let z = j as f64 * h;
            let mirrored = if j == 0 { None } else { Some((-z, v)) };
            std::iter::once((z, v)).chain(mirrored)
        })
    }

    /// `∫ x^k κ(x) dx` of the interpolant, in closed form per hat function.
    pub fn moment(&self, k: u32) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        let h = self.spacing;
        // ∫ x^k hat((x − z)/h) dx = Σ_i C(k,i) z^{k−i} h^{i+1} ∫_{-1}^{1} u^i (1 − |u|) du
        let hat_moments: Vec<f64> = (0..=k)
            .map(|i| {
                if i % 2 == 1 {
                    0.0
                } else {
                    let binom = crate::numerics::binomial(k as u64, i as u64) as f64;
                    binom * h.powi(i as i32 + 1) * 2.0 / ((i as f64 + 1.0) * (i as f64 + 2.0))
                }
            })
            .collect();
        self.nodes()
            .map(|(z, v)| {
                v * hat_moments
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c * z.powi((k - i as u32) as i32))
                    .sum::<f64>()
            })
            .sum()
    }

    /// Fourier transform of the interpolant: `h sinc²(th/2) Σ_j κ_j cos(t z_j)`.
    pub fn fourier(&self, t: f64) -> f64 {
        let h = self.spacing;
        let half = t * h / 2.0;
        let sinc = if half.abs() < 1e-8 {
            1.0
        } else {
            half.sin() / half
        };
        let sum: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let w = if j == 0 { 1.0 } else { 2.0 };
                w * v * (t * j as f64 * h).cos()
            })
            .sum();
        h * sinc * sinc * sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavelet_has_zero_mass_and_expected_length() {
        let h = 1.0 / 64.0;
        for p in 1..=3 {
            let phi = wavelet_power(p, h);
            assert_eq!(phi.len(), 64 * p - (p - 1));
            assert!(phi.iter().sum::<f64>().abs() < 1e-12);
        }
    }

    #[test]
    fn fourier_at_zero_is_integral() {
        let k = AxisKernel::build(1, BaseCovariance::moving_average(), 1.0 / 64.0);
        assert!((k.fourier(0.0) - k.moment(0)).abs() < 1e-15);
    }

    #[test]
    fn continuum_transform_near_origin() {
        // σ̂_Y(t)|ψ̂(t)|² with σ̂_Y = (sin t/t)² and |ψ̂|² = 16 sin⁴(t/4)/t²
        let k = AxisKernel::build(1, BaseCovariance::moving_average(), 1.0 / 64.0);
        for t in [0.5f64, 1.0, 2.0] {
            let exact = (t.sin() / t).powi(2) * 16.0 * (t / 4.0).sin().powi(4) / (t * t);
            assert!(
                (k.fourier(t) - exact).abs() < 1e-3 * exact.abs().max(1e-3),
                "t={t}"
            );
        }
    }

    #[test]
    fn zero_base_gives_zero_kernel() {
        let k = AxisKernel::build(2, BaseCovariance::Zero, 1.0 / 64.0);
        assert!(k.values.iter().all(|v| *v == 0.0));
    }
}
