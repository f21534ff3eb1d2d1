use std::f64::consts::PI;

use covasym::kernels::{
    kernel_convolution_measure, kernel_gef_zeros, kernel_ginibre, kernel_moment_tensor,
    kernel_moments, kernel_poisson, load_radial_kernel, BaseCovariance, Profile,
    TruncatedCorrelationKernel, GEF_DEFAULT_TERMS,
};
use covasym::numerics::{
    integrate_piecewise, multi_indices_of_order, seeded_rng, MultiIndex, QuadratureSpec, ZETA3,
};
use rand::Rng;

fn builtins() -> Vec<TruncatedCorrelationKernel> {
    vec![
        kernel_poisson(2, 1.0).unwrap(),
        kernel_ginibre(),
        kernel_gef_zeros(GEF_DEFAULT_TERMS).unwrap(),
        kernel_convolution_measure(1, BaseCovariance::moving_average(), 1).unwrap(),
        kernel_convolution_measure(2, BaseCovariance::moving_average(), 1).unwrap(),
        kernel_convolution_measure(1, BaseCovariance::moving_average(), 2).unwrap(),
    ]
}

#[test]
fn poisson_moments() {
    let k = kernel_poisson(2, 1.0).unwrap();
    let report = kernel_moments(&k, 4).unwrap();
    assert_eq!(report.defect, 1.0);
    assert!(report.moments.values().all(|v| *v == 0.0));
    let k1 = kernel_poisson(1, 2.0).unwrap();
    let report = kernel_moments(&k1, 4).unwrap();
    assert!(report.radial_moments.values().all(|v| *v == 0.0));
    assert!(kernel_poisson(3, 0.0).is_err());
}

#[test]
fn ginibre_moments() {
    let k = kernel_ginibre();
    let report = kernel_moments(&k, 2).unwrap();
    let i0 = report.moment(&MultiIndex::zero(2)).unwrap();
    assert!((i0 + 1.0 / PI).abs() < 1e-12);
    assert!(report.defect.abs() < 1e-12);
    assert!((report.radial_moments[&3] + 1.0 / (2.0 * PI * PI)).abs() < 1e-10);
    let i20 = report.moment(&MultiIndex::new(vec![2, 0])).unwrap();
    // ∫ z₁² (−π⁻² e^{−|z|²}) dz = −π⁻² · (√π/2) · √π
    assert!((i20 + 1.0 / (2.0 * PI)).abs() < 1e-12);
    assert_eq!(report.moment(&MultiIndex::new(vec![1, 1])), Some(0.0));
}

#[test]
fn gef_moments() {
    let k = kernel_gef_zeros(GEF_DEFAULT_TERMS).unwrap();
    let report = kernel_moments(&k, 4).unwrap();
    assert!(report.defect.abs() < 1e-8, "defect {}", report.defect);
    let integral = 2.0 * PI * report.radial_moments[&1];
    assert!((integral + 1.0 / PI).abs() < 1e-8);
    assert!(report.radial_moments[&3].abs() < 1e-8);
    assert!((report.radial_moments[&5] - 2.0 * ZETA3 / (PI * PI)).abs() < 1e-8);
    for gamma in multi_indices_of_order(2, 2).unwrap() {
        assert!(report.moment(&gamma).unwrap().abs() < 1e-8);
    }
}

#[test]
fn gef_series_split_is_stable() {
    let a = kernel_moments(&kernel_gef_zeros(64).unwrap(), 4).unwrap();
    let b = kernel_moments(&kernel_gef_zeros(128).unwrap(), 4).unwrap();
    for p in [1u32, 3, 5] {
        assert!((a.radial_moments[&p] - b.radial_moments[&p]).abs() < 1e-8);
    }
}

#[test]
fn convolution_vanishing_moments() {
    let base = BaseCovariance::moving_average();
    let k1 = kernel_convolution_measure(1, base, 1).unwrap();
    let r1 = kernel_moments(&k1, 2).unwrap();
    assert!(r1.defect.abs() < 1e-8);
    assert!(r1.moment(&MultiIndex::new(vec![2])).unwrap().abs() > 1e-3);
    let k2 = kernel_convolution_measure(2, base, 1).unwrap();
    let r2 = kernel_moments(&k2, 4).unwrap();
    for m in 0..=3 {
        assert!(r2.moment(&MultiIndex::new(vec![m])).unwrap().abs() < 1e-8);
    }
    assert!(r2.moment(&MultiIndex::new(vec![4])).unwrap().abs() > 1e-6);
    let zero = kernel_convolution_measure(1, BaseCovariance::Zero, 2).unwrap();
    assert_eq!(zero.density(&[0.1, 0.2]), 0.0);
}

#[test]
fn convolution_transform_is_constant_free() {
    // κ̂(t) = σ̂_Y(t)|φ̂(t)|² ~ t²/16 near 0 for p = 1; no constant term
    let k = kernel_convolution_measure(1, BaseCovariance::moving_average(), 1).unwrap();
    assert!(k.fourier(&[0.0]).abs() < 1e-12);
    let t = 1e-2;
    assert!((k.fourier(&[t]) / (t * t) - 1.0 / 16.0).abs() < 1e-3);
}

#[test]
fn fourier_values() {
    let g = kernel_ginibre();
    assert!((g.fourier(&[0.0, 0.0]) + 1.0 / PI).abs() < 1e-15);
    assert!((g.fourier(&[2.0, 0.0]) + (-1.0f64).exp() / PI).abs() < 1e-15);
    let p = kernel_poisson(2, 1.0).unwrap();
    assert_eq!(p.fourier(&[3.0, -1.0]), 0.0);
    let gef = kernel_gef_zeros(GEF_DEFAULT_TERMS).unwrap();
    assert!((gef.fourier(&[0.0, 0.0]) + 1.0 / PI).abs() < 1e-12);
}

#[test]
fn kernels_are_even() {
    let mut rng = seeded_rng(11);
    for k in builtins() {
        for _ in 0..1000 {
            let z: Vec<f64> = (0..k.dim).map(|_| rng.random_range(-4.0..4.0)).collect();
            let minus: Vec<f64> = z.iter().map(|v| -v).collect();
            assert_eq!(k.density(&z), k.density(&minus), "{}", k.label);
        }
    }
}

#[test]
fn isotropic_kernels_are_rotation_invariant() {
    let mut rng = seeded_rng(12);
    for k in [kernel_ginibre(), kernel_gef_zeros(64).unwrap()] {
        for _ in 0..200 {
            let z = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            let a: f64 = rng.random_range(0.0..2.0 * PI);
            let rotated = [
                a.cos() * z[0] - a.sin() * z[1],
                a.sin() * z[0] + a.cos() * z[1],
            ];
            assert!((k.density(&z) - k.density(&rotated)).abs() < 1e-14);
        }
    }
}

#[test]
fn total_variation_bounds_integral_of_abs() {
    for k in builtins() {
        let tv = match k.profile() {
            Profile::Separable(axis) => {
                let r = axis.support();
                let knots: Vec<f64> = (0..=2 * axis.values.len())
                    .map(|j| -r + j as f64 * axis.spacing)
                    .filter(|x| *x <= r)
                    .collect();
                let one = integrate_piecewise(|x| axis.eval(x).abs(), &knots, 1e-10, 30).unwrap();
                one.powi(k.dim as i32)
            }
            _ => {
                let knots: Vec<f64> = (0..=200)
                    .map(|i| i as f64 * k.truncation_radius / 200.0)
                    .collect();
                let shell = 2.0 * PI;
                integrate_piecewise(|r| shell * r * k.radial(r).abs(), &knots, 1e-10, 30).unwrap()
            }
        };
        assert!(
            tv <= k.total_variation * (1.0 + 1e-6) + 1e-12,
            "{}: {tv} > {}",
            k.label,
            k.total_variation
        );
    }
}

#[test]
fn structure_factor_is_nonnegative() {
    for k in builtins() {
        let n = 64usize;
        let points = n.pow(k.dim as u32);
        let step = 12.0 / n as f64;
        for flat in 0..points {
            let mut rest = flat;
            let t: Vec<f64> = (0..k.dim)
                .map(|_| {
                    let i = rest % n;
                    rest /= n;
                    (i as f64 - n as f64 / 2.0) * step
                })
                .collect();
            let s = k.diagonal_intensity + k.fourier(&t);
            assert!(s >= -1e-8, "{} at {t:?}: {s}", k.label);
        }
    }
}

#[test]
fn tensor_and_radial_moments_agree() {
    for k in [kernel_ginibre(), kernel_gef_zeros(64).unwrap()] {
        let report = kernel_moments(&k, 4).unwrap();
        let spec = QuadratureSpec::new(k.truncation_radius, 1e-10, 40).unwrap();
        for order in [0u32, 2, 4] {
            for gamma in multi_indices_of_order(2, order).unwrap() {
                if !gamma.is_even() {
                    continue;
                }
                let radial = report.moment(&gamma).unwrap();
                let tensor = kernel_moment_tensor(&k, &gamma, &spec).unwrap();
                let scale = radial.abs().max(1e-3);
                assert!(
                    (radial - tensor).abs() <= 1e-6 * scale,
                    "{} {gamma}: {radial} vs {tensor}",
                    k.label
                );
            }
        }
    }
}

#[test]
fn moment_order_guard() {
    assert!(kernel_moments(&kernel_ginibre(), 9).is_err());
}

#[test]
fn tabulated_kernel_round_trip() {
    let mut text =
        String::from("# radial-kernel d=2 lambda=0.3183098861837907 lambdaD=0.3183098861837907\n");
    for i in 0..=800 {
        let r = i as f64 * 0.0075;
        text.push_str(&format!("{r} {}\n", -(-r * r).exp() / (PI * PI)));
    }
    let k = load_radial_kernel(&text).unwrap();
    let report = kernel_moments(&k, 2).unwrap();
    assert!(report.defect.abs() < 1e-4);
    assert!((k.fourier(&[1.0, 0.0]) + (-0.25f64).exp() / PI).abs() < 1e-4);
}
