use std::f64::consts::PI;

use covasym::estimate::{
    fit_power_law, fit_scaling, jackknife_variance, k_statistics, linear_statistic,
    standardized_cumulants, summarize, summary_from_csv, summary_to_csv, variance_curve,
    StatisticSeries,
};
use covasym::expansion::TestFunction;
use covasym::numerics::seeded_rng;
use covasym::simulate::{sample_ginibre, sample_poisson, PointSample, ProcessSpec, Sample, Window};
use covasym::Error;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};

fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[test]
fn point_statistic_counts_points() {
    let window = Window::cuboid(vec![0.0, 0.0], vec![6.0, 6.0]).unwrap();
    let sample = sample_poisson(1.0, &window, 3).unwrap();
    let direct = sample
        .points()
        .filter(|p| p.iter().all(|&v| v <= 5.0))
        .count() as f64;
    let f = TestFunction::unit_cube(2).unwrap();
    let value = linear_statistic(&Sample::Points(sample), &f, 5.0).unwrap();
    assert_eq!(value, direct);

    let empty = Window::cuboid(vec![0.0, 0.0], vec![6.0, 0.0]).unwrap();
    let none = sample_poisson(1.0, &empty, 3).unwrap();
    let usable = PointSample {
        usable: window,
        ..none
    };
    assert_eq!(
        linear_statistic(&Sample::Points(usable), &f, 5.0).unwrap(),
        0.0
    );
}

#[test]
fn ginibre_statistic_mean_and_support_guard() {
    // E X_L(f) = λ L² ∫f with λ = 1/π and ∫f = 2πw² for the Gaussian bump
    let w = 0.25;
    let f = TestFunction::gaussian(2, w).unwrap();
    let samples: Vec<Sample> = (0..500)
        .map(|seed| Sample::Points(sample_ginibre(256, seed).unwrap()))
        .collect();
    let values: Vec<f64> = samples
        .iter()
        .map(|s| linear_statistic(s, &f, 6.0).unwrap())
        .collect();
    let (mean, sd) = mean_and_sd(&values);
    let target = 36.0 * 2.0 * w * w;
    assert!(
        (mean - target).abs() <= 3.0 * sd / (values.len() as f64).sqrt(),
        "{mean} vs {target}"
    );

    let wide = TestFunction::gaussian(2, 1.0).unwrap();
    match linear_statistic(&samples[0], &wide, 6.0) {
        Err(Error::SupportViolation {
            required,
            available,
        }) => {
            assert!((required - 6.0 * wide.support_radius()).abs() < 1e-9);
            assert!(available < required);
            assert!((available - 13.0).abs() < 1e-9);
        }
        other => panic!("expected a support violation, got {other:?}"),
    }
    assert!(linear_statistic(&samples[0], &f, 0.0).is_err());
    assert!(linear_statistic(&samples[0], &TestFunction::unit_cube(1).unwrap(), 1.0).is_err());
}

#[test]
fn measure_statistic_mean() {
    // E X_L(f) = L ∫f for the unit-intensity convolution measure
    let spec = ProcessSpec::parse("convolution:p=1,d=1,m=16").unwrap();
    let f = TestFunction::gaussian(1, 1.0).unwrap();
    let values: Vec<f64> = (0..200)
        .map(|seed| {
            let s = spec.sample(&f, 4.0, seed).unwrap();
            linear_statistic(&s, &f, 4.0).unwrap()
        })
        .collect();
    let (mean, sd) = mean_and_sd(&values);
    let target = 4.0 * (2.0 * PI).sqrt();
    assert!(
        (mean - target).abs() <= 3.0 * sd / 200f64.sqrt() + 1e-6,
        "{mean} vs {target}"
    );
}

#[test]
fn k_statistics_of_constant_data_are_zero() {
    let k = k_statistics(&[2.5; 40], 4).unwrap();
    assert_eq!(k[0], 2.5);
    assert_eq!(&k[1..], &[0.0, 0.0, 0.0]);
    assert!(k_statistics(&[1.0, 2.0, 3.0], 4).is_err());
    assert!(k_statistics(&[1.0, 2.0, 3.0, 4.0, 5.0], 5).is_err());
}

#[test]
fn k_statistics_of_normal_data() {
    let n = 100_000;
    let mut rng = seeded_rng(17);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let values: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
    let k = k_statistics(&values, 4).unwrap();
    let nf = n as f64;
    // sampling sd of k3 and k4 under normality: √(6/n) and √(24/n)
    assert!(k[2].abs() <= 4.0 * (6.0 / nf).sqrt(), "k3 = {}", k[2]);
    assert!(k[3].abs() <= 4.0 * (24.0 / nf).sqrt(), "k4 = {}", k[3]);
    let (skew, kurt) = standardized_cumulants(&values).unwrap();
    assert!((skew - k[2] / k[1].powf(1.5)).abs() < 1e-15);
    assert!((kurt - k[3] / (k[1] * k[1])).abs() < 1e-15);
}

#[test]
fn k_statistics_of_poisson_counts() {
    let n = 100_000;
    let lambda = 5.0;
    let mut rng = seeded_rng(23);
    let law = Poisson::new(lambda).unwrap();
    let values: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
    let k = k_statistics(&values, 3).unwrap();
    // central moments of Poisson(λ): μ2 = μ3 = λ, μ4 = λ + 3λ², μ6 = λ + 25λ² + 15λ³
    let (m2, m3, m4, m6) = (
        lambda,
        lambda,
        lambda + 3.0 * lambda * lambda,
        lambda + 25.0 * lambda * lambda + 15.0 * lambda.powi(3),
    );
    let nf = n as f64;
    let sd2 = ((m4 - m2 * m2) / nf).sqrt();
    let sd3 = ((m6 - m3 * m3 - 6.0 * m4 * m2 + 9.0 * m2.powi(3)) / nf).sqrt();
    assert!((k[1] - lambda).abs() <= 3.0 * sd2, "k2 = {}", k[1]);
    assert!((k[2] - lambda).abs() <= 3.0 * sd3, "k3 = {}", k[2]);
}

#[test]
fn poisson_variance_curve() {
    let spec = ProcessSpec::parse("poisson:d=2,lambda=1").unwrap();
    let f = TestFunction::unit_cube(2).unwrap();
    let series = variance_curve(&spec, &f, &[4.0, 8.0], 10_000, 1).unwrap();
    assert_eq!(series.replicates(), 10_000);
    for row in summarize(&series).unwrap() {
        let target = row.scale * row.scale;
        let half = (row.ci_hi - row.ci_lo) / 2.0;
        assert!(row.ci_lo < row.variance && row.variance < row.ci_hi);
        assert!(
            (row.variance - target).abs() <= half * 3.0 / 1.96,
            "L = {}: {}",
            row.scale,
            row.variance
        );
    }
    let again = variance_curve(&spec, &f, &[4.0, 8.0], 50, 1).unwrap();
    assert_eq!(again.entries[0].values[..], series.entries[0].values[..50]);
}

#[test]
fn zero_function_has_zero_variance() {
    let spec = ProcessSpec::parse("poisson:d=2,lambda=1").unwrap();
    let f = TestFunction::zero(2).unwrap();
    let series = variance_curve(&spec, &f, &[2.0, 4.0], 20, 5).unwrap();
    for row in summarize(&series).unwrap() {
        assert_eq!((row.variance, row.ci_lo, row.ci_hi), (0.0, 0.0, 0.0));
    }
}

#[test]
fn jackknife_interval_width() {
    let mut rng = seeded_rng(5);
    let normal = Normal::new(0.0, 2.0).unwrap();
    let values: Vec<f64> = (0..10_000).map(|_| normal.sample(&mut rng)).collect();
    let row = jackknife_variance(&values).unwrap();
    // Var(s²) = 2σ⁴/(n−1) for normal data
    let se = (row.ci_hi - row.ci_lo) / (2.0 * 1.96);
    let oracle = (2.0 * 16.0 / 9_999.0f64).sqrt();
    assert!((se / oracle - 1.0).abs() < 0.1, "{se} vs {oracle}");
    assert!(jackknife_variance(&[1.0, 2.0]).is_err());
}

#[test]
fn interval_shrinks_with_replicates() {
    let spec = ProcessSpec::parse("poisson:d=2,lambda=1").unwrap();
    let f = TestFunction::unit_cube(2).unwrap();
    let width = |reps| {
        let row = &summarize(&variance_curve(&spec, &f, &[4.0], reps, 900).unwrap()).unwrap()[0];
        row.ci_hi - row.ci_lo
    };
    let ratio = width(4000) / width(2000);
    assert!(
        (ratio - 0.5f64.sqrt()).abs() < 0.2 * 0.5f64.sqrt(),
        "ratio {ratio}"
    );
}

#[test]
fn power_law_fit_is_exact_on_power_laws() {
    let fit = fit_power_law(&[(2.0, 6.0), (4.0, 12.0), (8.0, 24.0), (16.0, 48.0)]).unwrap();
    assert!((fit.exponent - 1.0).abs() < 1e-10);
    assert!((fit.log_constant - 3f64.ln()).abs() < 1e-10);
    assert!(fit.residual_rms < 1e-10);
    assert_eq!(fit.points_used, 4);

    let with_zero = fit_power_law(&[(1.0, 0.0), (2.0, 4.0), (4.0, 16.0), (8.0, 64.0)]).unwrap();
    assert_eq!(with_zero.points_used, 3);
    assert!((with_zero.exponent - 2.0).abs() < 1e-10);
    assert!(fit_power_law(&[(2.0, 1.0), (2.0, 1.0), (4.0, 2.0)]).is_err());
}

#[test]
fn poisson_indicator_exponent() {
    let spec = ProcessSpec::parse("poisson:d=2,lambda=1").unwrap();
    let f = TestFunction::unit_cube(2).unwrap();
    let series = variance_curve(&spec, &f, &[2.0, 4.0, 8.0], 2000, 77).unwrap();
    let fit = fit_scaling(&series).unwrap();
    assert!((fit.exponent - 2.0).abs() < 0.1, "{fit:?}");
    assert!(fit.ci_half_width > 0.0 && fit.ci_half_width < 0.2);
    assert_eq!(fit, fit_scaling(&series).unwrap());
}

#[test]
fn csv_round_trips() {
    let spec = ProcessSpec::parse("poisson:d=2,lambda=1").unwrap();
    let f = TestFunction::gaussian(2, 0.3).unwrap();
    let series = variance_curve(&spec, &f, &[1.5, 3.0], 25, 2).unwrap();
    let text = series.to_csv().unwrap();
    assert!(text.starts_with("L,replicate,value\n"));
    let back = StatisticSeries::from_csv(
        &text,
        series.process.clone(),
        series.function.clone(),
        series.seeds.clone(),
    )
    .unwrap();
    assert_eq!(back.to_csv().unwrap(), text);
    for (a, b) in back.entries.iter().zip(&series.entries) {
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() <= 1e-11 * y.abs().max(1e-300));
        }
    }

    let rows = summarize(&series).unwrap();
    let summary = summary_to_csv(&rows).unwrap();
    assert!(summary.starts_with("L,variance,ci_lo,ci_hi,n\n"));
    assert_eq!(
        summary_to_csv(&summary_from_csv(&summary).unwrap()).unwrap(),
        summary
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_law_recovery(exponent in -3.0f64..3.0, constant in 0.1f64..10.0) {
        let points: Vec<(f64, f64)> = [1.0, 2.0, 5.0, 11.0].iter().map(|&l: &f64| (l, constant * l.powf(exponent))).collect();
        let fit = fit_power_law(&points).unwrap();
        prop_assert!((fit.exponent - exponent).abs() < 1e-10);
        prop_assert!((fit.log_constant - constant.ln()).abs() < 1e-10);
    }

    #[test]
    fn k_statistics_shift_and_scale(seed in any::<u64>(), shift in -50.0f64..50.0, c in 0.2f64..5.0) {
        let mut rng = seeded_rng(seed);
        let values: Vec<f64> = (0..200).map(|_| rng.random::<f64>().powi(2)).collect();
        let moved: Vec<f64> = values.iter().map(|v| c * v + shift).collect();
        let k = k_statistics(&values, 4).unwrap();
        let km = k_statistics(&moved, 4).unwrap();
        prop_assert!((km[0] - (c * k[0] + shift)).abs() < 1e-9 * (1.0 + shift.abs()));
        for r in 1..4 {
            let expected = c.powi(r as i32 + 1) * k[r];
            prop_assert!((km[r] - expected).abs() < 1e-7 * c.powi(r as i32 + 1) * (1.0 + shift.abs()).powi(r as i32 + 1));
        }
    }
}
