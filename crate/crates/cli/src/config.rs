use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use covasym::indicator::SmoothDomain;
use covasym::simulate::ProcessSpec;

use crate::error::{CliError, CliResult};
use crate::specs::{FunctionSpec, KernelSpec};

pub const DEFAULT_REPLICATES: usize = 200;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_MAX_K: u32 = 3;
pub const DEFAULT_ORDER: u32 = 4;

const KEYS: [&str; 14] = [
    "kernel", "process", "function", "domain-a", "domain-b", "L", "reps", "seed", "out", "tol",
    "suite", "order", "max-k", "g",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Predict,
    Simulate,
    Verify,
    Indicator,
    Moments,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Predict => "predict",
            Command::Simulate => "simulate",
            Command::Verify => "verify",
            Command::Indicator => "indicator",
            Command::Moments => "moments",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    QmReduction,
    DiscreteCumulants,
    IntegralIdentityDiscrete,
    IntegralIdentityNonprojection,
    Dpp,
    All,
}

pub const SUITE_NAMES: &str = "qm-reduction, discrete-cumulants, integral-identity-discrete, \
                               integral-identity-nonprojection, dpp, all";

impl Suite {
    pub fn parse(text: &str) -> CliResult<Self> {
        Ok(match text.trim() {
            "qm-reduction" => Suite::QmReduction,
            "discrete-cumulants" => Suite::DiscreteCumulants,
            "integral-identity-discrete" => Suite::IntegralIdentityDiscrete,
            "integral-identity-nonprojection" => Suite::IntegralIdentityNonprojection,
            "dpp" => Suite::Dpp,
            "all" => Suite::All,
            other => {
                return Err(CliError::Config(format!(
                    "unknown suite `{other}`; available: {SUITE_NAMES}"
                )))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::QmReduction => "qm-reduction",
            Suite::DiscreteCumulants => "discrete-cumulants",
            Suite::IntegralIdentityDiscrete => "integral-identity-discrete",
            Suite::IntegralIdentityNonprojection => "integral-identity-nonprojection",
            Suite::Dpp => "dpp",
            Suite::All => "all",
        })
    }
}

/// A parsed domain together with the text it came from.
#[derive(Clone, Debug)]
pub struct DomainArg {
    pub text: String,
    pub domain: SmoothDomain,
}

/// Everything one invocation needs, validated up front.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub command: Command,
    pub kernel: Option<KernelSpec>,
    pub process: Option<ProcessSpec>,
    pub function: Option<FunctionSpec>,
    /// second test function of a covariance; defaults to `function`
    pub partner: Option<FunctionSpec>,
    pub domain_a: Option<DomainArg>,
    pub domain_b: Option<DomainArg>,
    pub scales: Vec<f64>,
    pub replicates: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub tol: Option<f64>,
    pub suite: Option<Suite>,
    pub order: u32,
    pub max_k: u32,
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut pairs = BTreeMap::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "line {}: expected key = value, got `{line}`",
                number + 1
            ))
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(CliError::Config(format!(
                "line {}: unknown key `{key}`; known keys: {}",
                number + 1,
                KEYS.join(", ")
            )));
        }
        pairs.insert(key.to_string(), value.trim().to_string());
    }
    Ok(pairs)
}

fn parse_scales(text: &str) -> CliResult<Vec<f64>> {
    let scales = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|v| *v > 0.0 && v.is_finite())
                .ok_or_else(|| {
                    CliError::Config(format!("L values must be positive numbers, got `{s}`"))
                })
        })
        .collect::<CliResult<Vec<f64>>>()?;
    if scales.is_empty() {
        return Err(CliError::Config("the L list is empty".into()));
    }
    Ok(scales)
}

fn parse_number<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("`{key}` has an invalid value `{value}`")))
}

fn parse_domain(text: &str) -> CliResult<DomainArg> {
    Ok(DomainArg {
        text: text.trim().to_string(),
        domain: SmoothDomain::parse(text)
            .map_err(|e| CliError::Config(format!("domain `{text}`: {e}")))?,
    })
}

impl ExperimentConfig {
    /// Builds and validates a config from flat pairs (file values already overridden by flags).
    pub fn from_pairs(command: Command, pairs: &BTreeMap<String, String>) -> CliResult<Self> {
        if let Some(key) = pairs.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(CliError::Config(format!("unknown key `{key}`")));
        }
        let get = |key: &str| pairs.get(key).map(String::as_str);
        let config = ExperimentConfig {
            command,
            kernel: get("kernel").map(KernelSpec::parse).transpose()?,
            process: get("process")
                .map(|t| ProcessSpec::parse(t).map_err(|e| CliError::Config(e.to_string())))
                .transpose()?,
            function: get("function").map(FunctionSpec::parse).transpose()?,
            partner: get("g").map(FunctionSpec::parse).transpose()?,
            domain_a: get("domain-a").map(parse_domain).transpose()?,
            domain_b: get("domain-b").map(parse_domain).transpose()?,
            scales: get("L").map(parse_scales).transpose()?.unwrap_or_default(),
            replicates: get("reps")
                .map(|v| parse_number("reps", v))
                .transpose()?
                .unwrap_or(DEFAULT_REPLICATES),
            seed: get("seed")
                .map(|v| parse_number("seed", v))
                .transpose()?
                .unwrap_or(DEFAULT_SEED),
            out: PathBuf::from(get("out").unwrap_or(".")),
            tol: get("tol")
                .map(|v| parse_number::<f64>("tol", v))
                .transpose()?,
            suite: get("suite").map(Suite::parse).transpose()?,
            order: get("order")
                .map(|v| parse_number("order", v))
                .transpose()?
                .unwrap_or(DEFAULT_ORDER),
            max_k: get("max-k")
                .map(|v| parse_number("max-k", v))
                .transpose()?
                .unwrap_or(DEFAULT_MAX_K),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> CliResult<()> {
        let need = |present: bool, key: &str| {
            if present {
                Ok(())
            } else {
                Err(CliError::Config(format!(
                    "`{}` needs `--{key}`",
                    self.command.name()
                )))
            }
        };
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(CliError::Config(format!(
                    "tolerance must be positive, got {tol}"
                )));
            }
        }
        match self.command {
            Command::Predict => {
                need(self.kernel.is_some(), "kernel")?;
                need(self.function.is_some(), "function")?;
            }
            Command::Simulate => {
                need(self.process.is_some(), "process")?;
                need(self.function.is_some(), "function")?;
                need(!self.scales.is_empty(), "L")?;
                if self.replicates < 3 {
                    return Err(CliError::Config(
                        "a variance estimate needs at least 3 replicates".into(),
                    ));
                }
            }
            Command::Verify => need(self.suite.is_some(), "suite")?,
            Command::Indicator => {
                need(self.kernel.is_some(), "kernel")?;
                need(self.domain_a.is_some(), "domain-a")?;
                if self.process.is_some() {
                    need(!self.scales.is_empty(), "L")?;
                    if self.replicates < 3 {
                        return Err(CliError::Config(
                            "a variance estimate needs at least 3 replicates".into(),
                        ));
                    }
                }
            }
            Command::Moments => need(self.kernel.is_some(), "kernel")?,
        }
        Ok(())
    }

    pub fn domain_b(&self) -> Option<&DomainArg> {
        self.domain_b.as_ref().or(self.domain_a.as_ref())
    }
}
