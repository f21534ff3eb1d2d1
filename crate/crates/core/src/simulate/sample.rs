use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::expansion::TestFunction;
use crate::numerics::{sphere_area, GridField};

/// Region of `R^d` covered by a sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Window {
    /// ball of the given radius about the origin
    Ball {
        dim: usize,
        radius: f64,
    },
    Box {
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    /// all of `R^d`
    Whole {
        dim: usize,
    },
}

impl Window {
    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        check_dim(dim)?;
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(invalid("window radius must be finite and nonnegative"));
        }
        Ok(Window::Ball { dim, radius })
    }

    /// `∏ [lower_i, upper_i]`; degenerate (empty) boxes are allowed.
    pub fn cuboid(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim(lower.len())?;
        if lower.len() != upper.len()
            || lower
                .iter()
                .zip(&upper)
                .any(|(a, b)| !(a <= b && a.is_finite() && b.is_finite()))
        {
            return Err(invalid("window corners must be finite with lower ≤ upper"));
        }
        Ok(Window::Box { lower, upper })
    }

    pub fn dim(&self) -> usize {
        match self {
            Window::Ball { dim, .. } | Window::Whole { dim } => *dim,
            Window::Box { lower, .. } => lower.len(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Window::Ball { radius, .. } => x.iter().map(|v| v * v).sum::<f64>() <= radius * radius,
            Window::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (a, b))| a <= v && v <= b),
            Window::Whole { .. } => true,
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            Window::Ball { dim, radius } => {
                sphere_area(*dim) / *dim as f64 * radius.powi(*dim as i32)
            }
            Window::Box { lower, upper } => lower.iter().zip(upper).map(|(a, b)| b - a).product(),
            Window::Whole { .. } => f64::INFINITY,
        }
    }

    /// Largest `L` with the support of `f(·/L)` inside the window (for box windows, assuming
    /// the window and the support both reach the origin side they extend to).
    pub fn max_scale(&self, f: &TestFunction) -> f64 {
        match self {
            Window::Ball { radius, .. } => radius / f.support_radius(),
            Window::Box { lower, upper } => {
                let (a, b) = f.support_box();
                let mut scale = f64::INFINITY;
                for i in 0..lower.len() {
                    if b[i] > 0.0 {
                        scale = scale.min(upper[i] / b[i]);
                    }
                    if a[i] < 0.0 {
                        scale = scale.min(lower[i] / a[i]);
                    }
                }
                scale.max(0.0)
            }
            Window::Whole { .. } => f64::INFINITY,
        }
    }

    /// Rejects `L` when `f(·/L)` reaches outside the window.
    pub fn check_support(&self, f: &TestFunction, scale: f64) -> Result<()> {
        let slack = 1e-12 * (1.0 + scale);
        let inside = match self {
            Window::Ball { radius, .. } => scale * f.support_radius() <= radius + slack,
            Window::Box { lower, upper } => {
                let (a, b) = f.support_box();
                (0..lower.len())
                    .all(|i| scale * a[i] >= lower[i] - slack && scale * b[i] <= upper[i] + slack)
            }
            Window::Whole { .. } => true,
        };
        if !inside {
            let r = f.support_radius();
            return Err(Error::SupportViolation {
                required: scale * r,
                available: self.max_scale(f) * r,
            });
        }
        Ok(())
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if !(1..=3).contains(&dim) {
        return Err(invalid(format!(
            "samples live in dimension 1..=3, got {dim}"
        )));
    }
    Ok(())
}

/// One realization of a point process.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSample {
    pub dim: usize,
    /// region containing every point
    pub window: Window,
    /// region where the sample is a faithful realization of the stationary process
    pub usable: Window,
    /// coordinates, `dim` per point
    pub coords: Vec<f64>,
    pub seed: u64,
    /// polynomial degree used by the entire-function sampler
    pub truncation_degree: Option<usize>,
}

impl PointSample {
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks(self.dim)
    }

    /// Points inside `region`.
    pub fn count_in(&self, region: &Window) -> usize {
        self.points().filter(|p| region.contains(p)).count()
    }

    /// CSV with one point per row; the header names the coordinates `x,y,z`.
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(&["x", "y", "z"][..self.dim])
            .map_err(csv_error)?;
        for p in self.points() {
            writer
                .write_record(p.iter().map(|v| v.to_string()))
                .map_err(csv_error)?;
        }
        String::from_utf8(
            writer
                .into_inner()
                .map_err(|e| Error::Parse(e.to_string()))?,
        )
        .map_err(|e| Error::Parse(e.to_string()))
    }

    /// Reads the coordinates written by [`Self::to_csv`].
    pub fn coords_from_csv(text: &str) -> Result<(usize, Vec<f64>)> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let dim = reader.headers().map_err(csv_error)?.len();
        let mut coords = Vec::new();
        for record in reader.records() {
            let record = record.map_err(csv_error)?;
            for field in &record {
                coords.push(
                    field
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("{field}: {e}")))?,
                );
            }
        }
        Ok((dim, coords))
    }
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// One realization of an absolutely continuous random measure, as its density on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSample {
    pub field: GridField,
    pub usable: Window,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Sample {
    Points(PointSample),
    Measure(MeasureSample),
}

impl Sample {
    pub fn usable(&self) -> &Window {
        match self {
            Sample::Points(s) => &s.usable,
            Sample::Measure(s) => &s.usable,
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Sample::Points(s) => s.seed,
            Sample::Measure(s) => s.seed,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Sample::Points(s) => s.dim,
            Sample::Measure(s) => s.field.geometry.dim(),
        }
    }
}
