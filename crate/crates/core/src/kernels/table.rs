//! Tabulated radial kernels and their radial Fourier transforms.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::integrate_piecewise;

/// Radial profile given by samples `(r_i, κ_i)`, linear in between, zero beyond the last radius.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialTable {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl RadialTable {
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() < 2 || radii.len() != values.len() {
            return Err(Error::Parse(
                "a radial table needs at least two (radius, value) rows".into(),
            ));
        }
        if radii[0] < 0.0 || radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Parse(
                "table radii must be nonnegative and strictly increasing".into(),
            ));
        }
        if values.iter().chain(&radii).any(|v| !v.is_finite()) {
            return Err(Error::Parse("table entries must be finite".into()));
        }
        Ok(RadialTable { radii, values })
    }

    pub fn eval(&self, r: f64) -> f64 {
        let last = self.radii.len() - 1;
        if r > self.radii[last] {
            return 0.0;
        }
        if r <= self.radii[0] {
            return self.values[0];
        }
        let i = self.radii.partition_point(|&x| x <= r).min(last) - 1;
        let w = (r - self.radii[i]) / (self.radii[i + 1] - self.radii[i]);
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }

    pub fn max_radius(&self) -> f64 {
        *self.radii.last().expect("table is nonempty")
    }

    /// Radial Fourier transform in dimension `dim ≤ 3`.
    pub fn fourier(&self, dim: usize, t: f64) -> f64 {
        let kernel = |r: f64| -> f64 {
            match dim {
                1 => 2.0 * (t * r).cos(),
                2 => 2.0 * PI * r * bessel_j0(t * r),
                _ => {
                    let x = t * r;
                    let sinc = if x.abs() < 1e-8 { 1.0 } else { x.sin() / x };
                    4.0 * PI * r * r * sinc
                }
            }
        };
        let mut knots = self.radii.clone();
        if knots[0] > 0.0 {
            knots.insert(0, 0.0);
        }
        match integrate_piecewise(|r| kernel(r) * self.eval(r), &knots, 1e-10, 40) {
            Ok(v) => v,
            Err(Error::NotConverged { fine, .. }) => fine,
            Err(_) => f64::NAN,
        }
    }
}

/// `J_0(x) = (1/π) ∫_0^π cos(x sin θ) dθ`, by the trapezoid rule (spectrally accurate for this periodic integrand).
pub fn bessel_j0(x: f64) -> f64 {
    let n = 32 + (1.5 * x.abs()).ceil() as usize;
    let step = PI / n as f64;
    let interior: f64 = (1..n).map(|k| (x * (k as f64 * step).sin()).cos()).sum();
    (interior + 1.0) / n as f64
}

/// Header fields of a tabulated kernel file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableHeader {
    pub dim: usize,
    pub intensity: f64,
    pub diagonal_intensity: f64,
}

/// Parses `# radial-kernel d=<d> lambda=<λ> lambdaD=<λ_D>` followed by `radius value` rows.
pub fn parse_radial_table(text: &str) -> Result<(TableHeader, RadialTable)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty kernel file".into()))?;
    let mut fields = header.trim_start_matches('#').split_whitespace();
    if fields.next() != Some("radial-kernel") {
        return Err(Error::Parse(format!(
            "expected `# radial-kernel` header, found `{header}`"
        )));
    }
    let (mut dim, mut intensity, mut diagonal) = (None, None, None);
    for field in fields {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("malformed header field `{field}`")))?;
        let bad = |e: &dyn std::fmt::Display| Error::Parse(format!("{key}: {e}"));
        match key {
            "d" => dim = Some(value.parse::<usize>().map_err(|e| bad(&e))?),
            "lambda" => intensity = Some(value.parse::<f64>().map_err(|e| bad(&e))?),
            "lambdaD" => diagonal = Some(value.parse::<f64>().map_err(|e| bad(&e))?),
            _ => return Err(Error::Parse(format!("unknown header field `{key}`"))),
        }
    }
    let missing = |k: &str| Error::Parse(format!("header lacks `{k}`"));
    let header = TableHeader {
        dim: dim.ok_or_else(|| missing("d"))?,
        intensity: intensity.ok_or_else(|| missing("lambda"))?,
        diagonal_intensity: diagonal.ok_or_else(|| missing("lambdaD"))?,
    };
    let mut radii = Vec::new();
    let mut values = Vec::new();
    for line in lines.filter(|l| !l.starts_with('#')) {
        let mut cols = line.split_whitespace().map(|c| c.parse::<f64>());
        match (cols.next(), cols.next(), cols.next()) {
            (Some(Ok(r)), Some(Ok(v)), None) => {
                radii.push(r);
                values.push(v);
            }
            _ => return Err(Error::Parse(format!("bad table row `{line}`"))),
        }
    }
    Ok((header, RadialTable::new(radii, values)?))
}
