use rand::Rng;
use serde::{Deserialize, Serialize};

use super::sample::{MeasureSample, Window};
use crate::error::{invalid, Error, Result};
use crate::kernels::BaseCovariance;
use crate::numerics::{seeded_rng, GridField, GridGeometry};

/// Finest grid accepted by [`sample_convolution_measure`].
pub const MAX_CELLS_PER_UNIT: usize = 64;
/// Largest extended grid (points) a single sample may allocate.
pub const MAX_CONVOLUTION_GRID_POINTS: usize = 1 << 24;

/// Law of the base field `Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseField {
    /// average of i.i.d. ±1 variables over the `2^d` unit cells at offsets `{0, 1}^d`,
    /// constant on cells of a uniformly shifted unit lattice
    MovingAverage,
    /// `Y ≡ 0`
    Zero,
}

impl BaseField {
    pub fn covariance(self) -> BaseCovariance {
        match self {
            BaseField::MovingAverage => BaseCovariance::moving_average(),
            BaseField::Zero => BaseCovariance::Zero,
        }
    }
}

/// Grid `origin + k/m` for `k = 0..length·m` in every coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionGrid {
    pub origin: Vec<f64>,
    /// number of unit cells per axis
    pub length: usize,
    /// grid points per unit length `m` (even)
    pub cells_per_unit: usize,
}

impl ConvolutionGrid {
    pub fn geometry(&self) -> Result<GridGeometry> {
        let d = self.origin.len();
        GridGeometry::new(
            vec![self.length as f64; d],
            vec![self.length * self.cells_per_unit; d],
            self.origin.clone(),
        )
    }
}

/// Discrete `h^p (ψ_h * … * ψ_h)` with `ψ_h = (+1)^{m/2}(−1)^{m/2}`, so the weights have `p`
/// vanishing discrete moments just like the continuous wavelet power.
fn axis_weights(p: usize, m: usize) -> Vec<f64> {
    let psi: Vec<f64> = (0..m).map(|j| if j < m / 2 { 1.0 } else { -1.0 }).collect();
    let mut phi = vec![1.0];
    for _ in 0..p {
        let mut next = vec![0.0; phi.len() + m - 1];
        for (i, a) in phi.iter().enumerate() {
            for (j, b) in psi.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        phi = next;
    }
    let h = 1.0 / m as f64;
    phi.iter().map(|v| v * h.powi(p as i32)).collect()
}

/// `out[…, k, …] = Σ_j w[j] in[…, k + e − j, …]` along `axis`, shrinking it by `e = len(w) − 1`.
fn convolve_axis(data: &[f64], shape: &mut [usize], axis: usize, weights: &[f64]) -> Vec<f64> {
    let e = weights.len() - 1;
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    let (len_in, len_out) = (shape[axis], shape[axis] - e);
    let mut out = vec![0.0; outer * len_out * inner];
    for o in 0..outer {
        for k in 0..len_out {
            let dst = (o * len_out + k) * inner;
            for (j, w) in weights.iter().enumerate() {
                let src = (o * len_in + k + e - j) * inner;
                for i in 0..inner {
                    out[dst + i] += w * data[src + i];
                }
            }
        }
    }
    shape[axis] = len_out;
    out
}

/// Density `1 + (Y * φ)(x)` of the convolution random measure on a grid, with `φ` the
/// `p`-fold self-convolution of `∏ (1_{[0,½]} − 1_{[½,1]})(x_i)` discretized at spacing `1/m`.
pub fn sample_convolution_measure(
    p: usize,
    base: BaseField,
    grid: &ConvolutionGrid,
    seed: u64,
) -> Result<MeasureSample> {
    if !(1..=3).contains(&p) {
        return Err(invalid(format!("wavelet power must lie in 1..=3, got {p}")));
    }
    let m = grid.cells_per_unit;
    if m > MAX_CELLS_PER_UNIT {
        return Err(Error::CostGuard {
            what: "grid points per unit",
            limit: MAX_CELLS_PER_UNIT,
            requested: m,
        });
    }
    if m < 2 || m % 2 == 1 {
        return Err(invalid("grid points per unit must be even and at least 2"));
    }
    let d = grid.origin.len();
    if !(1..=3).contains(&d) || grid.length == 0 {
        return Err(invalid(
            "convolution grids need dimension 1..=3 and a positive length",
        ));
    }
    let geometry = grid.geometry()?;
    let n = grid.length * m;
    let weights = axis_weights(p, m);
    let e = weights.len() - 1;
    let total = (n + e).checked_pow(d as u32).unwrap_or(usize::MAX);
    if total > MAX_CONVOLUTION_GRID_POINTS {
        return Err(Error::CostGuard {
            what: "convolution grid points",
            limit: MAX_CONVOLUTION_GRID_POINTS,
            requested: total,
        });
    }
    let h = 1.0 / m as f64;
    let mut rng = seeded_rng(seed);
    let shift: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();

    let usable = Window::cuboid(
        grid.origin.clone(),
        grid.origin.iter().map(|o| o + grid.length as f64).collect(),
    )?;
    if base == BaseField::Zero {
        return Ok(MeasureSample {
            field: GridField::new(geometry.clone(), vec![1.0; geometry.len()])?,
            usable,
            seed,
        });
    }

    // unit cell holding each extended grid coordinate, per axis
    let cells: Vec<Vec<i64>> = (0..d)
        .map(|a| {
            (0..n + e)
                .map(|k| (grid.origin[a] + (k as f64 - e as f64) * h - shift[a]).floor() as i64)
                .collect()
        })
        .collect();
    let first: Vec<i64> = cells.iter().map(|c| c[0] - 1).collect();
    let span: Vec<usize> = cells
        .iter()
        .zip(&first)
        .map(|(c, f)| (c[c.len() - 1] - f + 1) as usize)
        .collect();
    let cell_count: usize = span.iter().product();
    let signs: Vec<f64> = (0..cell_count)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect();
    let strides: Vec<usize> = (0..d).map(|a| span[a + 1..].iter().product()).collect();
    // Y on cells c with every c_a > first_a: mean of the signs at c − s, s ∈ {0, 1}^d
    let corners = 1usize << d;
    let cell_value = |cell: &[usize]| -> f64 {
        let mut acc = 0.0;
        for s in 0..corners {
            let idx: usize = (0..d)
                .map(|a| (cell[a] - ((s >> a) & 1)) * strides[a])
                .sum();
            acc += signs[idx];
        }
        acc / corners as f64
    };
    let mut shape = vec![n + e; d];
    let mut values = Vec::with_capacity(total);
    let mut index = vec![0usize; d];
    let mut cell = vec![0usize; d];
    for _ in 0..total {
        for a in 0..d {
            cell[a] = (cells[a][index[a]] - first[a]) as usize;
        }
        values.push(cell_value(&cell));
        for a in (0..d).rev() {
            index[a] += 1;
            if index[a] < n + e {
                break;
            }
            index[a] = 0;
        }
    }
    for a in 0..d {
        values = convolve_axis(&values, &mut shape, a, &weights);
    }
    for v in &mut values {
        *v += 1.0;
    }
    Ok(MeasureSample {
        field: GridField::new(geometry, values)?,
        usable,
        seed,
    })
}
