use std::path::PathBuf;

use covasym::estimate::{
    fit_scaling, standardized_cumulants, summarize, summary_to_csv, variance_curve, StatisticSeries,
};
use covasym::expansion::{
    covariance_exact_fourier, predict_asymptotics, variance_upper_bound, AsymptoticClass,
    TestFunction,
};
use covasym::indicator::{surface_covariance_limit, volume_covariance_limit, DomainShape};
use covasym::kernels::kernel_moments;
use covasym::simulate::{ProcessSpec, MAX_GEF_RADIUS};
use covasym::Error;

use crate::config::{Command, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::report::{
    write_json, write_text, FitReport, IndicatorRegime, IndicatorReport, IndicatorRow, MomentRow,
    MomentsReport, PredictionReport, RadialRow, ScaleCheck, ShapeRow,
};
use crate::verify::run_suite;

/// What a successful command produced.
#[derive(Debug)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
}

pub fn execute(config: &ExperimentConfig) -> CliResult<Outcome> {
    match config.command {
        Command::Predict => predict(config),
        Command::Simulate => simulate(config),
        Command::Verify => verify(config),
        Command::Indicator => indicator(config),
        Command::Moments => moments(config),
    }
}

fn same_dimension(what: &str, expected: usize, found: usize) -> CliResult<()> {
    if expected == found {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "{what} has dimension {found}, expected {expected}"
        )))
    }
}

fn predict(config: &ExperimentConfig) -> CliResult<Outcome> {
    let kernel_spec = config.kernel.as_ref().expect("validated");
    let f_spec = config.function.as_ref().expect("validated");
    let g_spec = config.partner.as_ref().unwrap_or(f_spec);
    let kernel = kernel_spec.build()?;
    let f = f_spec.build()?;
    let g = g_spec.build()?;
    same_dimension("function", kernel.dim, f.dim)?;
    same_dimension("partner function", kernel.dim, g.dim)?;

    let prediction = predict_asymptotics(&kernel, &f, &g, config.max_k)?;
    let order = match prediction.class {
        AsymptoticClass::VolumeOrder => Some(0),
        AsymptoticClass::SuppressedOrder(k) => Some(k),
        AsymptoticClass::BeyondComputedRange => None,
    };
    let bound = match order {
        Some(k) if f_spec == g_spec => match variance_upper_bound(&kernel, &f, k) {
            Ok(bound) => Some(bound),
            Err(Error::HypothesisViolated(reason)) => {
                log::warn!("no variance bound: {reason}");
                None
            }
            Err(e) => return Err(e.into()),
        },
        _ => None,
    };
    let checks = config
        .scales
        .iter()
        .map(|&scale| {
            Ok(ScaleCheck {
                scale,
                exact: covariance_exact_fourier(&kernel, &f, &g, scale)?,
                leading: scale.powi(prediction.exponent) * prediction.constant,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let report = PredictionReport {
        kernel: kernel_spec.to_string(),
        function: f_spec.to_string(),
        partner: g_spec.to_string(),
        dimension: kernel.dim,
        exponent: prediction.exponent,
        constant: prediction.constant,
        class: prediction.class,
        terms: prediction.terms,
        bound,
        checks,
    };
    let path = write_json(&config.out, "prediction.json", &report)?;
    Ok(Outcome {
        files: vec![path],
        lines: vec![format!(
            "Cov ~ L^{} * {:.12} ({:?})",
            report.exponent, report.constant, report.class
        )],
    })
}

/// Largest scale the process can serve for `f`, probed on one sample.
fn admissible_scale(
    process: &ProcessSpec,
    f: &TestFunction,
    scale: f64,
    seed: u64,
) -> CliResult<f64> {
    match process.sample(f, scale, seed) {
        Ok(sample) => Ok(sample.usable().max_scale(f)),
        Err(Error::CostGuard { .. }) if matches!(process, ProcessSpec::GefZeros) => {
            Ok(MAX_GEF_RADIUS / f.support_radius())
        }
        Err(e) => Err(e.into()),
    }
}

fn run_curve(
    config: &ExperimentConfig,
    process: &ProcessSpec,
    f: &TestFunction,
) -> CliResult<StatisticSeries> {
    same_dimension("function", process.dim(), f.dim)?;
    let largest = config
        .scales
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let admissible = admissible_scale(process, f, largest, config.seed)?;
    if largest > admissible * (1.0 + 1e-12) {
        return Err(CliError::ScaleTooLarge {
            requested: largest,
            admissible,
        });
    }
    Ok(variance_curve(
        process,
        f,
        &config.scales,
        config.replicates,
        config.seed,
    )?)
}

fn distinct_scales(series: &StatisticSeries) -> usize {
    let mut scales: Vec<f64> = series.entries.iter().map(|e| e.scale).collect();
    scales.sort_by(f64::total_cmp);
    scales.dedup();
    scales.len()
}

fn simulate(config: &ExperimentConfig) -> CliResult<Outcome> {
    let process = config.process.as_ref().expect("validated");
    let f_spec = config.function.as_ref().expect("validated");
    let f = f_spec.build()?;
    let series = run_curve(config, process, &f)?;
    let summary = summarize(&series)?;
    let fit = if distinct_scales(&series) >= 3 {
        Some(fit_scaling(&series)?)
    } else {
        None
    };
    let shape = series
        .entries
        .iter()
        .filter_map(|e| {
            standardized_cumulants(&e.values)
                .ok()
                .map(|(skewness, excess_kurtosis)| ShapeRow {
                    scale: e.scale,
                    skewness,
                    excess_kurtosis,
                })
        })
        .collect();
    let report = FitReport {
        process: process.to_string(),
        function: f_spec.to_string(),
        replicates: config.replicates,
        seed: config.seed,
        summary: summary.clone(),
        fit,
        shape,
    };
    let files = vec![
        write_text(&config.out, "series.csv", &series.to_csv()?)?,
        write_text(&config.out, "summary.csv", &summary_to_csv(&summary)?)?,
        write_json(&config.out, "fit.json", &report)?,
    ];
    let mut lines: Vec<String> = summary
        .iter()
        .map(|r| {
            format!(
                "L = {}: Var = {:.6} [{:.6}, {:.6}]",
                r.scale, r.variance, r.ci_lo, r.ci_hi
            )
        })
        .collect();
    if let Some(fit) = &report.fit {
        lines.push(format!(
            "exponent {:.4} +/- {:.4}",
            fit.exponent, fit.ci_half_width
        ));
    }
    Ok(Outcome { files, lines })
}

fn verify(config: &ExperimentConfig) -> CliResult<Outcome> {
    let suite = config.suite.expect("validated");
    let report = run_suite(suite, config.seed, config.tol)?;
    let path = write_json(&config.out, "verify.json", &report)?;
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| {
            format!(
                "{}: {} (defect {:e}, tolerance {:e})",
                c.suite, c.name, c.defect, c.tolerance
            )
        })
        .collect();
    if !failed.is_empty() {
        return Err(CliError::Verification(failed.join("; ")));
    }
    Ok(Outcome {
        files: vec![path],
        lines: report
            .checks
            .iter()
            .map(|c| {
                let marker = if c.expected_failure {
                    " (expected failure observed)"
                } else {
                    ""
                };
                format!("PASS {}: {}{marker}", c.suite, c.name)
            })
            .collect(),
    })
}

fn indicator(config: &ExperimentConfig) -> CliResult<Outcome> {
    let kernel_spec = config.kernel.as_ref().expect("validated");
    let kernel = kernel_spec.build()?;
    let a = config.domain_a.as_ref().expect("validated");
    let b = config.domain_b().expect("validated");
    same_dimension("domain", kernel.dim, a.domain.dim())?;
    let d = kernel.dim as i32;
    let (regime, exponent, limit, message) =
        match surface_covariance_limit(&kernel, &a.domain, &b.domain) {
            Ok(limit) => (
                IndicatorRegime::Surface,
                d - 1,
                limit,
                format!("surface order: Cov ~ L^{} * {limit:.12}", d - 1),
            ),
            Err(Error::VolumeOrderRegime { defect }) => {
                let limit = volume_covariance_limit(&kernel, &a.domain, &b.domain)?;
                (
                    IndicatorRegime::Volume,
                    d,
                    limit,
                    format!(
                        "volume order (lambda_D + I(0) = {defect:.12}): Cov ~ L^{d} * {limit:.12}"
                    ),
                )
            }
            Err(e) => return Err(e.into()),
        };

    let mut monte_carlo = Vec::new();
    let mut fit = None;
    if let Some(process) = &config.process {
        let (center, radius) = match a.domain.shape() {
            DomainShape::Disc { center, radius } if a.domain == b.domain => (*center, *radius),
            _ => {
                return Err(CliError::Config(
                    "the Monte Carlo comparison needs domain-a = domain-b = a disc".into(),
                ))
            }
        };
        let f = TestFunction::disc_indicator(center.to_vec(), radius)?;
        let series = run_curve(config, process, &f)?;
        for row in summarize(&series)? {
            let norm = row.scale.powi(exponent);
            monte_carlo.push(IndicatorRow {
                scale: row.scale,
                covariance: row.variance,
                normalized: row.variance / norm,
                ci_lo: row.ci_lo / norm,
                ci_hi: row.ci_hi / norm,
            });
        }
        if distinct_scales(&series) >= 3 {
            fit = Some(fit_scaling(&series)?);
        }
    }
    let report = IndicatorReport {
        kernel: kernel_spec.to_string(),
        domain_a: a.text.clone(),
        domain_b: b.text.clone(),
        regime,
        exponent,
        limit,
        message,
        monte_carlo,
        fit,
    };
    let path = write_json(&config.out, "indicator.json", &report)?;
    let mut lines = vec![report.message.clone()];
    lines.extend(report.monte_carlo.iter().map(|r| {
        format!(
            "L = {}: Cov / L^{exponent} = {:.6} [{:.6}, {:.6}]",
            r.scale, r.normalized, r.ci_lo, r.ci_hi
        )
    }));
    Ok(Outcome {
        files: vec![path],
        lines,
    })
}

fn moments(config: &ExperimentConfig) -> CliResult<Outcome> {
    let kernel_spec = config.kernel.as_ref().expect("validated");
    let kernel = kernel_spec.build()?;
    let report = kernel_moments(&kernel, config.order)?;
    let report = MomentsReport {
        kernel: kernel_spec.to_string(),
        dimension: kernel.dim,
        intensity: kernel.intensity,
        diagonal_intensity: kernel.diagonal_intensity,
        defect: report.defect,
        moments: report
            .moments
            .iter()
            .map(|(gamma, &value)| MomentRow {
                gamma: gamma.entries().to_vec(),
                value,
            })
            .collect(),
        radial_moments: report
            .radial_moments
            .iter()
            .map(|(&p, &value)| RadialRow { p, value })
            .collect(),
    };
    let path = write_json(&config.out, "moments.json", &report)?;
    Ok(Outcome {
        files: vec![path],
        lines: vec![format!("defect lambda_D + I(0) = {:e}", report.defect)],
    })
}
