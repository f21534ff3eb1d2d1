use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use covasym::expansion::TestFunction;
use covasym::kernels::{
    kernel_convolution_measure, kernel_gef_zeros, kernel_ginibre, kernel_poisson,
    load_radial_kernel, TruncatedCorrelationKernel, GEF_DEFAULT_TERMS,
};
use covasym::simulate::BaseField;

use crate::error::{CliError, CliResult};

pub const KERNEL_NAMES: &str =
    "poisson[:d=,lambda=], ginibre, gef[:terms=], convolution[:p=,d=,base=moving-average|zero], table:file=<path>";

pub const FUNCTION_NAMES: &str = "gaussian-bump[:d=,w=], poly-bump[:d=,r=,k=], unit-cube[:d=], \
                                  cube[:d=,a=,b=], disc[:r=,cx=,cy=], zero[:d=]";

/// `name:key=value,...` split into the name and its parameters.
struct Parts<'a> {
    name: &'a str,
    params: BTreeMap<&'a str, &'a str>,
}

impl<'a> Parts<'a> {
    fn split(text: &'a str, what: &str) -> CliResult<Self> {
        let (name, rest) = text.trim().split_once(':').unwrap_or((text.trim(), ""));
        let mut params = BTreeMap::new();
        for pair in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = pair.split_once('=').ok_or_else(|| {
                CliError::Config(format!("expected key=value in {what} spec, got `{pair}`"))
            })?;
            params.insert(k.trim(), v.trim());
        }
        Ok(Parts { name, params })
    }

    fn number(&mut self, key: &str, default: f64) -> CliResult<f64> {
        match self.params.remove(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| CliError::Config(format!("`{key}` must be a number, got `{s}`"))),
        }
    }

    fn count(&mut self, key: &str, default: usize) -> CliResult<usize> {
        match self.params.remove(key) {
            None => Ok(default),
            Some(s) => s.parse().map_err(|_| {
                CliError::Config(format!("`{key}` must be a nonnegative integer, got `{s}`"))
            }),
        }
    }

    fn finish(self) -> CliResult<()> {
        match self.params.keys().next() {
            Some(key) => Err(CliError::Config(format!(
                "unknown parameter `{key}` for `{}`",
                self.name
            ))),
            None => Ok(()),
        }
    }
}

/// Which truncated correlation kernel a command works with.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelSpec {
    Poisson {
        dim: usize,
        intensity: f64,
    },
    Ginibre,
    Gef {
        terms: usize,
    },
    Convolution {
        power: usize,
        dim: usize,
        base: BaseField,
    },
    Table {
        file: PathBuf,
    },
}

impl KernelSpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut parts = Parts::split(text, "kernel")?;
        let spec = match parts.name {
            "poisson" => KernelSpec::Poisson {
                dim: parts.count("d", 2)?,
                intensity: parts.number("lambda", 1.0)?,
            },
            "ginibre" => KernelSpec::Ginibre,
            "gef" => KernelSpec::Gef {
                terms: parts.count("terms", GEF_DEFAULT_TERMS)?,
            },
            "convolution" => KernelSpec::Convolution {
                power: parts.count("p", 1)?,
                dim: parts.count("d", 1)?,
                base: parse_base(parts.params.remove("base"))?,
            },
            "table" => KernelSpec::Table {
                file: parts
                    .params
                    .remove("file")
                    .map(PathBuf::from)
                    .ok_or_else(|| CliError::Config("table kernels need `file=<path>`".into()))?,
            },
            other => {
                return Err(CliError::Config(format!(
                    "unknown kernel `{other}`; available: {KERNEL_NAMES}"
                )));
            }
        };
        parts.finish()?;
        Ok(spec)
    }

    pub fn build(&self) -> CliResult<TruncatedCorrelationKernel> {
        Ok(match self {
            KernelSpec::Poisson { dim, intensity } => kernel_poisson(*dim, *intensity)?,
            KernelSpec::Ginibre => kernel_ginibre(),
            KernelSpec::Gef { terms } => kernel_gef_zeros(*terms)?,
            KernelSpec::Convolution { power, dim, base } => {
                kernel_convolution_measure(*power, base.covariance(), *dim)?
            }
            KernelSpec::Table { file } => {
                let text = std::fs::read_to_string(file).map_err(|e| CliError::io(file, e))?;
                load_radial_kernel(&text)?
            }
        })
    }
}

fn parse_base(value: Option<&str>) -> CliResult<BaseField> {
    match value {
        None | Some("moving-average") => Ok(BaseField::MovingAverage),
        Some("zero") => Ok(BaseField::Zero),
        Some(other) => Err(CliError::Config(format!(
            "unknown base field `{other}`; available: moving-average, zero"
        ))),
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Poisson { dim, intensity } => {
                write!(f, "poisson:d={dim},lambda={intensity}")
            }
            KernelSpec::Ginibre => write!(f, "ginibre"),
            KernelSpec::Gef { terms } => write!(f, "gef:terms={terms}"),
            KernelSpec::Convolution { power, dim, base } => {
                let base = match base {
                    BaseField::MovingAverage => "moving-average",
                    BaseField::Zero => "zero",
                };
                write!(f, "convolution:p={power},d={dim},base={base}")
            }
            KernelSpec::Table { file } => write!(f, "table:file={}", file.display()),
        }
    }
}

/// Test function `f` of a linear statistic.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionSpec {
    GaussianBump { dim: usize, width: f64 },
    PolyBump { dim: usize, radius: f64, power: u32 },
    UnitCube { dim: usize },
    Cube { dim: usize, lower: f64, upper: f64 },
    Disc { radius: f64, center: [f64; 2] },
    Zero { dim: usize },
}

impl FunctionSpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut parts = Parts::split(text, "function")?;
        let spec = match parts.name {
            "gaussian-bump" => FunctionSpec::GaussianBump {
                dim: parts.count("d", 2)?,
                width: parts.number("w", 1.0)?,
            },
            "poly-bump" => FunctionSpec::PolyBump {
                dim: parts.count("d", 2)?,
                radius: parts.number("r", 1.0)?,
                power: parts.count("k", 4)? as u32,
            },
            "unit-cube" => FunctionSpec::UnitCube {
                dim: parts.count("d", 2)?,
            },
            "cube" => FunctionSpec::Cube {
                dim: parts.count("d", 2)?,
                lower: parts.number("a", 0.0)?,
                upper: parts.number("b", 1.0)?,
            },
            "disc" => FunctionSpec::Disc {
                radius: parts.number("r", 1.0)?,
                center: [parts.number("cx", 0.0)?, parts.number("cy", 0.0)?],
            },
            "zero" => FunctionSpec::Zero {
                dim: parts.count("d", 2)?,
            },
            other => {
                return Err(CliError::Config(format!(
                    "unknown function `{other}`; available: {FUNCTION_NAMES}"
                )));
            }
        };
        parts.finish()?;
        Ok(spec)
    }

    pub fn build(&self) -> CliResult<TestFunction> {
        Ok(match *self {
            FunctionSpec::GaussianBump { dim, width } => TestFunction::gaussian(dim, width)?,
            FunctionSpec::PolyBump { dim, radius, power } => {
                TestFunction::poly_bump(dim, radius, power)?
            }
            FunctionSpec::UnitCube { dim } => TestFunction::unit_cube(dim)?,
            FunctionSpec::Cube { dim, lower, upper } => {
                TestFunction::box_indicator(vec![lower; dim], vec![upper; dim])?
            }
            FunctionSpec::Disc { radius, center } => {
                TestFunction::disc_indicator(center.to_vec(), radius)?
            }
            FunctionSpec::Zero { dim } => TestFunction::zero(dim)?,
        })
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::GaussianBump { dim, width } => {
                write!(f, "gaussian-bump:d={dim},w={width}")
            }
            FunctionSpec::PolyBump { dim, radius, power } => {
                write!(f, "poly-bump:d={dim},r={radius},k={power}")
            }
            FunctionSpec::UnitCube { dim } => write!(f, "unit-cube:d={dim}"),
            FunctionSpec::Cube { dim, lower, upper } => {
                write!(f, "cube:d={dim},a={lower},b={upper}")
            }
            FunctionSpec::Disc { radius, center } => {
                write!(f, "disc:r={radius},cx={},cy={}", center[0], center[1])
            }
            FunctionSpec::Zero { dim } => write!(f, "zero:d={dim}"),
        }
    }
}
