use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::convolution::{sample_convolution_measure, BaseField, ConvolutionGrid};
use super::gef::sample_gef_zeros;
use super::ginibre::sample_ginibre;
use super::lattice::sample_perturbed_lattice;
use super::poisson::sample_poisson;
use super::sample::{Sample, Window};
use crate::error::{invalid, Error, Result};
use crate::expansion::TestFunction;

/// Grid points per unit used when a convolution spec does not name one.
pub const DEFAULT_CELLS_PER_UNIT: usize = 16;

/// A process from the sampler zoo, with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ProcessSpec {
    Poisson {
        dim: usize,
        intensity: f64,
    },
    Ginibre {
        size: usize,
    },
    PerturbedLattice {
        dim: usize,
        noise_std: f64,
        stationarize: bool,
    },
    Convolution {
        dim: usize,
        power: usize,
        cells_per_unit: usize,
        base: BaseField,
    },
    GefZeros,
}

pub const PROCESS_NAMES: &str =
    "poisson[:d=,lambda=], ginibre[:n=], lattice[:d=,sigma=,stationary=], \
                                 convolution[:p=,d=,m=,base=moving-average|zero], gef";

impl ProcessSpec {
    /// Parses `name` or `name:key=value,key=value`.
    pub fn parse(text: &str) -> Result<Self> {
        let (name, rest) = text.trim().split_once(':').unwrap_or((text.trim(), ""));
        let mut params: BTreeMap<&str, &str> = BTreeMap::new();
        for pair in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = pair.split_once('=').ok_or_else(|| {
                Error::Parse(format!("expected key=value in process spec, got `{pair}`"))
            })?;
            params.insert(k.trim(), v.trim());
        }
        let mut take = |key: &str| params.remove(key);
        let number = |v: Option<&str>, default: f64| -> Result<f64> {
            v.map_or(Ok(default), |s| {
                s.parse()
                    .map_err(|_| Error::Parse(format!("bad number `{s}`")))
            })
        };
        let count = |v: Option<&str>, default: usize| -> Result<usize> {
            v.map_or(Ok(default), |s| {
                s.parse()
                    .map_err(|_| Error::Parse(format!("bad integer `{s}`")))
            })
        };
        let spec = match name {
            "poisson" => ProcessSpec::Poisson {
                dim: count(take("d"), 2)?,
                intensity: number(take("lambda"), 1.0)?,
            },
            "ginibre" => ProcessSpec::Ginibre {
                size: count(take("n"), 256)?,
            },
            "lattice" => ProcessSpec::PerturbedLattice {
                dim: count(take("d"), 2)?,
                noise_std: number(take("sigma"), 0.3)?,
                stationarize: match take("stationary") {
                    None | Some("true") => true,
                    Some("false") => false,
                    Some(other) => return Err(Error::Parse(format!("bad flag `{other}`"))),
                },
            },
            "convolution" => ProcessSpec::Convolution {
                dim: count(take("d"), 1)?,
                power: count(take("p"), 1)?,
                cells_per_unit: count(take("m"), DEFAULT_CELLS_PER_UNIT)?,
                base: match take("base") {
                    None | Some("moving-average") => BaseField::MovingAverage,
                    Some("zero") => BaseField::Zero,
                    Some(other) => {
                        return Err(Error::Parse(format!("unknown base field `{other}`")))
                    }
                },
            },
            "gef" => ProcessSpec::GefZeros,
            other => {
                return Err(Error::Parse(format!(
                    "unknown process `{other}`; available: {PROCESS_NAMES}"
                )));
            }
        };
        if let Some(key) = params.keys().next() {
            return Err(Error::Parse(format!(
                "unknown parameter `{key}` for process `{name}`"
            )));
        }
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        match self {
            ProcessSpec::Poisson { dim, .. }
            | ProcessSpec::PerturbedLattice { dim, .. }
            | ProcessSpec::Convolution { dim, .. } => *dim,
            ProcessSpec::Ginibre { .. } | ProcessSpec::GefZeros => 2,
        }
    }

    pub fn intensity(&self) -> f64 {
        match self {
            ProcessSpec::Poisson { intensity, .. } => *intensity,
            ProcessSpec::PerturbedLattice { .. } | ProcessSpec::Convolution { .. } => 1.0,
            ProcessSpec::Ginibre { .. } | ProcessSpec::GefZeros => 1.0 / PI,
        }
    }

    /// A sample whose usable window fits `f(·/L)` for every `L ≤ max_scale`, when the process
    /// allows it (Ginibre windows are fixed by the matrix size).
    pub fn sample(&self, f: &TestFunction, max_scale: f64, seed: u64) -> Result<Sample> {
        if f.dim != self.dim() {
            return Err(invalid(format!(
                "test function dimension {} differs from the process dimension {}",
                f.dim,
                self.dim()
            )));
        }
        let (lo, hi) = f.support_box();
        let region = || {
            Window::cuboid(
                lo.iter().map(|a| a * max_scale).collect(),
                hi.iter().map(|b| b * max_scale).collect(),
            )
        };
        Ok(match self {
            ProcessSpec::Poisson { intensity, .. } => {
                Sample::Points(sample_poisson(*intensity, &region()?, seed)?)
            }
            ProcessSpec::Ginibre { size } => Sample::Points(sample_ginibre(*size, seed)?),
            ProcessSpec::PerturbedLattice {
                noise_std,
                stationarize,
                ..
            } => Sample::Points(sample_perturbed_lattice(
                *noise_std,
                *stationarize,
                &region()?,
                seed,
            )?),
            ProcessSpec::Convolution {
                power,
                cells_per_unit,
                base,
                ..
            } => {
                let origin: Vec<f64> = lo.iter().map(|a| (a * max_scale).floor()).collect();
                let length = hi
                    .iter()
                    .zip(&origin)
                    .map(|(b, o)| (b * max_scale - o).ceil().max(1.0) as usize)
                    .max()
                    .unwrap_or(1);
                let grid = ConvolutionGrid {
                    origin,
                    length,
                    cells_per_unit: *cells_per_unit,
                };
                Sample::Measure(sample_convolution_measure(*power, *base, &grid, seed)?)
            }
            ProcessSpec::GefZeros => {
                Sample::Points(sample_gef_zeros(max_scale * f.support_radius(), seed)?)
            }
        })
    }
}

impl fmt::Display for ProcessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProcessSpec::Poisson { dim, intensity } => {
                write!(f, "poisson:d={dim},lambda={intensity}")
            }
            ProcessSpec::Ginibre { size } => write!(f, "ginibre:n={size}"),
            ProcessSpec::PerturbedLattice {
                dim,
                noise_std,
                stationarize,
            } => write!(
                f,
                "lattice:d={dim},sigma={noise_std},stationary={stationarize}"
            ),
            ProcessSpec::Convolution {
                dim,
                power,
                cells_per_unit,
                base,
            } => {
                let base = match base {
                    BaseField::MovingAverage => "moving-average",
                    BaseField::Zero => "zero",
                };
                write!(
                    f,
                    "convolution:p={power},d={dim},m={cells_per_unit},base={base}"
                )
            }
            ProcessSpec::GefZeros => write!(f, "gef"),
        }
    }
}
