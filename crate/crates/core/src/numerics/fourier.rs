use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A regular grid: `samples[a]` points along axis `a`, spacing `extent[a] / samples[a]`,
/// first point at `origin`. Axis 0 varies slowest in flat indexing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridGeometry {
    pub extent: Vec<f64>,
    pub samples: Vec<usize>,
    pub origin: Vec<f64>,
}

impl GridGeometry {
    pub fn new(extent: Vec<f64>, samples: Vec<usize>, origin: Vec<f64>) -> Result<Self> {
        let d = extent.len();
        if d == 0 || samples.len() != d || origin.len() != d {
            return Err(invalid(
                "grid extent, samples and origin must share a positive dimension",
            ));
        }
        if extent.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(invalid("grid extents must be positive"));
        }
        if samples.iter().any(|&n| n == 0) {
            return Err(invalid("grid sample counts must be positive"));
        }
        Ok(GridGeometry {
            extent,
            samples,
            origin,
        })
    }

    /// Cube `[-half_width, half_width)^d` with `n` samples per axis.
    pub fn centered_cube(dim: usize, half_width: f64, n: usize) -> Result<Self> {
        Self::new(
            vec![2.0 * half_width; dim],
            vec![n; dim],
            vec![-half_width; dim],
        )
    }

    pub fn dim(&self) -> usize {
        self.extent.len()
    }

    pub fn len(&self) -> usize {
        self.samples.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.extent[axis] / self.samples[axis] as f64
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }

    pub fn is_power_of_two(&self) -> bool {
        self.samples.iter().all(|n| n.is_power_of_two())
    }

    /// Per-axis indices of a flat index.
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            idx[a] = flat % self.samples[a];
            flat /= self.samples[a];
        }
        idx
    }

    /// Coordinates of the grid point with flat index `flat`, written into `out`.
    pub fn point_into(&self, mut flat: usize, out: &mut [f64]) {
        for a in (0..self.dim()).rev() {
            let i = flat % self.samples[a];
            flat /= self.samples[a];
            out[a] = self.origin[a] + i as f64 * self.spacing(a);
        }
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut p = vec![0.0; self.dim()];
        self.point_into(flat, &mut p);
        p
    }

    /// Lattice frequency `2π k / extent` for FFT-ordered index `k` along `axis`.
    pub fn frequency(&self, axis: usize, k: usize) -> f64 {
        let n = self.samples[axis];
        let signed = if k < n.div_ceil(2) {
            k as f64
        } else {
            k as f64 - n as f64
        };
        2.0 * PI * signed / self.extent[axis]
    }

    pub fn frequency_point_into(&self, mut flat: usize, out: &mut [f64]) {
        for a in (0..self.dim()).rev() {
            let k = flat % self.samples[a];
            flat /= self.samples[a];
            out[a] = self.frequency(a, k);
        }
    }

    /// Volume element of the frequency lattice.
    pub fn frequency_cell_volume(&self) -> f64 {
        self.extent.iter().map(|e| 2.0 * PI / e).product()
    }
}

/// Real samples on a [`GridGeometry`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    pub geometry: GridGeometry,
    pub values: Vec<f64>,
}

impl GridField {
    pub fn new(geometry: GridGeometry, values: Vec<f64>) -> Result<Self> {
        if values.len() != geometry.len() {
            return Err(invalid(format!(
                "grid holds {} points but {} values were given",
                geometry.len(),
                values.len()
            )));
        }
        Ok(GridField { geometry, values })
    }

    pub fn from_fn<F: Fn(&[f64]) -> f64>(geometry: GridGeometry, f: F) -> Self {
        let mut p = vec![0.0; geometry.dim()];
        let values = (0..geometry.len())
            .map(|i| {
                geometry.point_into(i, &mut p);
                f(&p)
            })
            .collect();
        GridField { geometry, values }
    }

    pub fn zeros(geometry: GridGeometry) -> Self {
        let n = geometry.len();
        GridField {
            geometry,
            values: vec![0.0; n],
        }
    }

    /// Riemann sum `h^d Σ values`.
    pub fn integral(&self) -> f64 {
        self.geometry.cell_volume() * self.values.iter().sum::<f64>()
    }

    /// Text form: three header lines (`dims`, `extents`, `origin`) then one value per line.
    pub fn to_text(&self) -> String {
        let g = &self.geometry;
        let mut s = String::new();
        let join = |v: Vec<String>| v.join(" ");
        writeln!(
            s,
            "dims {}",
            join(g.samples.iter().map(|n| n.to_string()).collect())
        )
        .unwrap();
        writeln!(
            s,
            "extents {}",
            join(g.extent.iter().map(|e| format!("{e:e}")).collect())
        )
        .unwrap();
        writeln!(
            s,
            "origin {}",
            join(g.origin.iter().map(|o| format!("{o:e}")).collect())
        )
        .unwrap();
        for v in &self.values {
            writeln!(s, "{v:e}").unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let mut header = |key: &str| -> Result<Vec<String>> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing `{key}` header line")))?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(key) {
                return Err(Error::Parse(format!(
                    "expected `{key}` header, found `{line}`"
                )));
            }
            Ok(parts.map(str::to_string).collect())
        };
        let parse_f = |s: &String| {
            s.parse::<f64>()
                .map_err(|e| Error::Parse(format!("{s}: {e}")))
        };
        let samples = header("dims")?
            .iter()
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("{s}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let extent = header("extents")?
            .iter()
            .map(parse_f)
            .collect::<Result<Vec<_>>>()?;
        let origin = header("origin")?
            .iter()
            .map(parse_f)
            .collect::<Result<Vec<_>>>()?;
        let values = lines
            .map(|l| {
                l.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("{l}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        GridField::new(GridGeometry::new(extent, samples, origin)?, values)
    }
}

/// Samples of `f̂` at the lattice frequencies of a grid, in FFT order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub geometry: GridGeometry,
    pub values: Vec<Complex64>,
}

fn fft_axes(values: &mut [Complex64], samples: &[usize], direction: FftDirection) {
    let mut planner = FftPlanner::new();
    let d = samples.len();
    for axis in 0..d {
        let n = samples[axis];
        if n == 1 {
            continue;
        }
        let fft = planner.plan_fft(n, direction);
        let stride: usize = samples[axis + 1..].iter().product();
        let outer: usize = samples[..axis].iter().product();
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for o in 0..outer {
            for s in 0..stride {
                let base = o * n * stride + s;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = values[base + k * stride];
                }
                fft.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    values[base + k * stride] = *v;
                }
            }
        }
    }
}

fn require_power_of_two(geometry: &GridGeometry) -> Result<()> {
    if geometry.is_power_of_two() {
        Ok(())
    } else {
        Err(invalid(format!(
            "DFT needs power-of-two sample counts, got {:?}",
            geometry.samples
        )))
    }
}

/// `f̂(t) ≈ h^d Σ_j f(x_j) e^{i<x_j,t>}` at the lattice frequencies `t_k = 2πk/extent`.
pub fn dft_forward(field: &GridField) -> Result<Spectrum> {
    let g = &field.geometry;
    require_power_of_two(g)?;
    let mut values: Vec<Complex64> = field
        .values
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    fft_axes(&mut values, &g.samples, FftDirection::Inverse);
    let h = g.cell_volume();
    let mut t = vec![0.0; g.dim()];
    for (k, v) in values.iter_mut().enumerate() {
        g.frequency_point_into(k, &mut t);
        let phase: f64 = t.iter().zip(&g.origin).map(|(a, b)| a * b).sum();
        *v *= Complex64::from_polar(h, phase);
    }
    Ok(Spectrum {
        geometry: g.clone(),
        values,
    })
}

/// Inverse of [`dft_forward`]; returns the real part.
pub fn dft_inverse(spectrum: &Spectrum) -> Result<GridField> {
    let g = &spectrum.geometry;
    require_power_of_two(g)?;
    let mut values = spectrum.values.clone();
    let volume: f64 = g.extent.iter().product();
    let mut t = vec![0.0; g.dim()];
    for (k, v) in values.iter_mut().enumerate() {
        g.frequency_point_into(k, &mut t);
        let phase: f64 = t.iter().zip(&g.origin).map(|(a, b)| a * b).sum();
        *v *= Complex64::from_polar(1.0 / volume, -phase);
    }
    fft_axes(&mut values, &g.samples, FftDirection::Forward);
    Ok(GridField {
        geometry: g.clone(),
        values: values.iter().map(|c| c.re).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn gaussian_transform_at_zero() {
        let g = GridGeometry::centered_cube(2, 10.0, 256).unwrap();
        let field = GridField::from_fn(g, |x| (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp());
        let spec = dft_forward(&field).unwrap();
        assert!((spec.values[0].re - 2.0 * PI).abs() < 1e-6);
        // a nonzero lattice frequency
        let t = spec.geometry.frequency(1, 3);
        let expected = 2.0 * PI * (-t * t / 2.0).exp();
        assert!((spec.values[3] - Complex64::new(expected, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn zero_and_impulse() {
        let g = GridGeometry::centered_cube(1, 4.0, 64).unwrap();
        let zero = dft_forward(&GridField::zeros(g.clone())).unwrap();
        assert!(zero.values.iter().all(|v| v.norm() == 0.0));
        let mut impulse = GridField::zeros(g);
        impulse.values[17] = 1.0;
        let spec = dft_forward(&impulse).unwrap();
        let m0 = spec.values[0].norm();
        assert!(spec.values.iter().all(|v| (v.norm() - m0).abs() < 1e-14));
    }

    #[test]
    fn round_trip() {
        let mut rng = crate::numerics::seeded_rng(7);
        let g = GridGeometry::new(vec![3.0, 5.0], vec![16, 32], vec![-1.0, 0.5]).unwrap();
        let values: Vec<f64> = (0..g.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let field = GridField::new(g, values).unwrap();
        let back = dft_inverse(&dft_forward(&field).unwrap()).unwrap();
        let max = field.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in field.values.iter().zip(&back.values) {
            assert!((a - b).abs() <= 1e-10 * max);
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        let g = GridGeometry::new(vec![1.0], vec![12], vec![0.0]).unwrap();
        assert!(dft_forward(&GridField::zeros(g)).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = GridGeometry::new(vec![2.0, 1.0], vec![2, 4], vec![0.0, -0.5]).unwrap();
        let field = GridField::from_fn(g, |x| x[0] + 0.1 * x[1]);
        let back = GridField::from_text(&field.to_text()).unwrap();
        assert_eq!(field, back);
    }
}
