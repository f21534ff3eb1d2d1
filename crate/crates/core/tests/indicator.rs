use std::f64::consts::{PI, TAU};

use covasym::indicator::{
    classify_shared_boundary, intersection_area, isotropic_surface_moment, normal_moment,
    surface_covariance_limit, variance_floor, volume_covariance_limit, SmoothDomain,
    DEFAULT_MATCH_TOLERANCE,
};
use covasym::kernels::{
    kernel_convolution_measure, kernel_gef_zeros, kernel_ginibre, kernel_poisson, BaseCovariance,
};
use covasym::numerics::seeded_rng;
use covasym::Error;
use proptest::prelude::*;
use rand::Rng;

fn disc(cx: f64, cy: f64, r: f64) -> SmoothDomain {
    SmoothDomain::disc([cx, cy], r).unwrap()
}

fn unit_disc() -> SmoothDomain {
    disc(0.0, 0.0, 1.0)
}

fn annulus_around_unit_disc() -> SmoothDomain {
    SmoothDomain::annulus([0.0, 0.0], 1.0, 2.0).unwrap()
}

/// Area of the intersection of two discs.
fn lens(d: f64, r1: f64, r2: f64) -> f64 {
    if d >= r1 + r2 {
        return 0.0;
    }
    if d <= (r1 - r2).abs() {
        return PI * r1.min(r2).powi(2);
    }
    let a1 = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).acos();
    let a2 = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).acos();
    r1 * r1 * (a1 - a1.sin() * a1.cos()) + r2 * r2 * (a2 - a2.sin() * a2.cos())
}

#[test]
fn classifier_examples() {
    let s = classify_shared_boundary(&unit_disc(), &unit_disc(), DEFAULT_MATCH_TOLERANCE).unwrap();
    assert_eq!(s.arcs.len(), 1);
    assert_eq!(s.arcs[0].epsilon, 1);
    assert!((s.signed_length - TAU).abs() < 1e-12);

    let s = classify_shared_boundary(
        &unit_disc(),
        &annulus_around_unit_disc(),
        DEFAULT_MATCH_TOLERANCE,
    )
    .unwrap();
    assert_eq!(s.arcs.len(), 1);
    assert_eq!(s.arcs[0].epsilon, -1);
    assert!((s.signed_length + TAU).abs() < 1e-12);
    assert!((s.unsigned_length - TAU).abs() < 1e-12);

    let s = classify_shared_boundary(&unit_disc(), &disc(0.0, 0.0, 0.5), DEFAULT_MATCH_TOLERANCE)
        .unwrap();
    assert!(s.arcs.is_empty());
    assert!(classify_shared_boundary(&unit_disc(), &unit_disc(), 0.0).is_err());
}

#[test]
fn tangent_discs_share_nothing() {
    // internally and externally tangent circles touch at one point only
    for b in [disc(0.5, 0.0, 0.5), disc(2.0, 0.0, 1.0)] {
        let s = classify_shared_boundary(&unit_disc(), &b, DEFAULT_MATCH_TOLERANCE).unwrap();
        assert!(s.unsigned_length < 1e-3, "{:?}", s);
    }
}

#[test]
fn ellipse_with_equal_axes_matches_disc() {
    let e = SmoothDomain::ellipse([0.0, 0.0], 1.0, 1.0).unwrap();
    let s = classify_shared_boundary(&e, &unit_disc(), DEFAULT_MATCH_TOLERANCE).unwrap();
    assert!((s.signed_length - TAU).abs() < 1e-10);
}

#[test]
fn ginibre_surface_limits() {
    let k = kernel_ginibre();
    let m1 = isotropic_surface_moment(&k).unwrap();
    assert!((m1 + PI.powf(-1.5)).abs() < 1e-12, "{m1}");
    let target = 1.0 / PI.sqrt();
    let same = surface_covariance_limit(&k, &unit_disc(), &unit_disc()).unwrap();
    assert!((same - target).abs() < 1e-8, "{same}");
    let opposite = surface_covariance_limit(&k, &unit_disc(), &annulus_around_unit_disc()).unwrap();
    assert!((opposite + target).abs() < 1e-8, "{opposite}");
    let far = surface_covariance_limit(&k, &unit_disc(), &disc(5.0, 0.0, 1.0)).unwrap();
    assert_eq!(far, 0.0);
}

#[test]
fn annulus_with_itself_counts_both_circles() {
    let k = kernel_ginibre();
    let a = annulus_around_unit_disc();
    let v = surface_covariance_limit(&k, &a, &a).unwrap();
    assert!((v - 3.0 / PI.sqrt()).abs() < 1e-8, "{v}");
}

#[test]
fn gef_surface_limit_uses_j2() {
    let k = kernel_gef_zeros(64).unwrap();
    let j2 = k.radial_moment(2, &k.moment_spec()).unwrap();
    let v = surface_covariance_limit(&k, &unit_disc(), &unit_disc()).unwrap();
    assert!((v - (-0.5 * 4.0 * j2 * TAU)).abs() < 1e-10);
    assert!(v > 0.0);
}

#[test]
fn volume_regime_is_rejected() {
    let k = kernel_poisson(2, 1.0).unwrap();
    match surface_covariance_limit(&k, &unit_disc(), &unit_disc()) {
        Err(Error::VolumeOrderRegime { defect }) => assert!((defect - 1.0).abs() < 1e-14),
        other => panic!("expected volume-order error, got {other:?}"),
    }
}

#[test]
fn volume_limits() {
    let poisson = kernel_poisson(2, 1.0).unwrap();
    let v = volume_covariance_limit(&poisson, &unit_disc(), &unit_disc()).unwrap();
    assert!((v - PI).abs() < 1e-12);
    assert_eq!(
        volume_covariance_limit(&kernel_ginibre(), &unit_disc(), &disc(0.3, 0.0, 1.0)).unwrap(),
        0.0
    );
    assert_eq!(
        volume_covariance_limit(&poisson, &unit_disc(), &disc(3.0, 0.0, 1.0)).unwrap(),
        0.0
    );
    let v = volume_covariance_limit(&poisson, &unit_disc(), &annulus_around_unit_disc()).unwrap();
    assert!(v.abs() < 1e-12);
}

#[test]
fn intersection_areas_match_lens_formula() {
    let mut rng = seeded_rng(11);
    for _ in 0..40 {
        let r1 = rng.random_range(0.3..2.0);
        let r2 = rng.random_range(0.3..2.0);
        let d = rng.random_range(0.0..4.5);
        let a = disc(0.0, 0.0, r1);
        let b = disc(d, 0.0, r2);
        let area = intersection_area(&a, &b).unwrap();
        assert!(
            (area - lens(d, r1, r2)).abs() < 1e-9,
            "d={d} r1={r1} r2={r2}: {area}"
        );
    }
    // disc inside an annulus hole, disc covering the annulus partly
    let ring = annulus_around_unit_disc();
    assert!(
        intersection_area(&disc(0.0, 0.0, 0.5), &ring)
            .unwrap()
            .abs()
            < 1e-12
    );
    let v = intersection_area(&disc(0.0, 0.0, 1.5), &ring).unwrap();
    assert!((v - PI * (1.5f64.powi(2) - 1.0)).abs() < 1e-10);
}

#[test]
fn variance_floor_examples() {
    assert!((variance_floor(1.0, 1.0, 10.0, 1.0, 2).unwrap() - 10.0).abs() < 1e-12);
    assert_eq!(variance_floor(0.0, 1.0, 10.0, 1.0, 2).unwrap(), 0.0);
    assert!((variance_floor(1.0, 4.0, 2.0, 0.5, 2).unwrap() - 2.0).abs() < 1e-12);
    assert!(variance_floor(-1.0, 1.0, 1.0, 1.0, 2).is_err());
}

#[test]
fn isotropic_normal_moment_is_constant() {
    let mut rng = seeded_rng(5);
    for k in [kernel_ginibre(), kernel_gef_zeros(64).unwrap()] {
        let m1 = isotropic_surface_moment(&k).unwrap();
        for _ in 0..8 {
            let a: f64 = rng.random_range(0.0..TAU);
            let v = normal_moment(&k, [a.cos(), a.sin()]).unwrap();
            assert!((v - m1).abs() < 1e-8, "{}: {v} vs {m1}", k.label);
        }
    }
}

#[test]
fn anisotropic_normal_moment_against_lattice_sum() {
    let k = kernel_convolution_measure(1, BaseCovariance::moving_average(), 2).unwrap();
    let reach = k.truncation_radius;
    let h = 1.0 / 256.0;
    let n = (reach / h).ceil() as i64;
    for a in [0.0f64, 0.4, PI / 4.0] {
        let normal = [a.cos(), a.sin()];
        let mut sum = 0.0;
        for i in -n..=n {
            for j in -n..=n {
                let z = [i as f64 * h, j as f64 * h];
                sum += (z[0] * normal[0] + z[1] * normal[1]).abs() * k.density(&z);
            }
        }
        sum *= h * h;
        let v = normal_moment(&k, normal).unwrap();
        assert!(
            (v - sum).abs() < 1e-4 * sum.abs().max(1e-3),
            "angle {a}: {v} vs {sum}"
        );
    }
}

#[test]
fn anisotropic_surface_limit_is_symmetric_and_signed() {
    let k = kernel_convolution_measure(1, BaseCovariance::moving_average(), 2).unwrap();
    let same = surface_covariance_limit(&k, &unit_disc(), &unit_disc()).unwrap();
    assert!(same > 0.0);
    let ab = surface_covariance_limit(&k, &unit_disc(), &annulus_around_unit_disc()).unwrap();
    let ba = surface_covariance_limit(&k, &annulus_around_unit_disc(), &unit_disc()).unwrap();
    assert!((ab + same).abs() < 1e-8 * same);
    assert!((ab - ba).abs() < 1e-8 * same);
}

#[test]
fn domain_invariants() {
    let domains = [
        unit_disc(),
        annulus_around_unit_disc(),
        SmoothDomain::ellipse([0.3, -0.2], 2.0, 0.7).unwrap(),
        SmoothDomain::parse("star 0.5 0 \"1 + 0.25*cos(3*t) + 0.1*sin(2*t)\"").unwrap(),
    ];
    let mut rng = seeded_rng(9);
    for d in &domains {
        let area = d.area().unwrap();
        assert!((area - d.green_area().unwrap()).abs() < 1e-8, "{d}");
        let perimeter = d.perimeter().unwrap();
        let quad: f64 = d
            .components()
            .iter()
            .map(|c| c.arc_length(0.0, TAU).unwrap())
            .sum();
        assert!((perimeter - quad).abs() < 1e-8, "{d}");
        for curve in d.components() {
            for _ in 0..200 {
                let t = rng.random_range(0.0..TAU);
                let n = curve.outward_normal(t);
                assert!((n[0].hypot(n[1]) - 1.0).abs() < 1e-14);
                let n2 = curve.outward_normal(t + 1e-7);
                assert!((n[0] - n2[0]).abs() + (n[1] - n2[1]).abs() < 1e-4);
                let p = curve.point(t);
                let eps = 1e-6;
                assert!(
                    !d.contains(&[p[0] + eps * n[0], p[1] + eps * n[1]]),
                    "{d} at {t}"
                );
                assert!(
                    d.contains(&[p[0] - eps * n[0], p[1] - eps * n[1]]),
                    "{d} at {t}"
                );
            }
        }
    }
    // star area oracle: ½∫r² by the periodic trapezoid rule
    let star = &domains[3];
    let r = |t: f64| 1.0 + 0.25 * (3.0 * t).cos() + 0.1 * (2.0 * t).sin();
    let m = 4096;
    let oracle: f64 = (0..m)
        .map(|i| 0.5 * r(TAU * i as f64 / m as f64).powi(2))
        .sum::<f64>()
        * TAU
        / m as f64;
    assert!((star.area().unwrap() - oracle).abs() < 1e-10);
}

fn paired_domains() -> impl Strategy<Value = (SmoothDomain, SmoothDomain)> {
    (0usize..5, 0.3f64..1.5, 0.2f64..1.0, -1.0f64..1.0).prop_map(|(kind, r, extra, shift)| {
        match kind {
            0 => (disc(0.0, 0.0, r), disc(0.0, 0.0, r)),
            1 => (
                disc(0.0, 0.0, r),
                SmoothDomain::annulus([0.0, 0.0], r, r + extra).unwrap(),
            ),
            2 => (
                SmoothDomain::annulus([0.0, 0.0], r, r + extra).unwrap(),
                SmoothDomain::annulus([0.0, 0.0], r + extra, r + 2.0 * extra).unwrap(),
            ),
            3 => (
                SmoothDomain::ellipse([shift, 0.0], r, r + extra).unwrap(),
                SmoothDomain::ellipse([shift, 0.0], r, r + extra).unwrap(),
            ),
            _ => (
                disc(0.0, 0.0, r),
                disc(2.0 * r + extra + shift.abs(), 0.0, r),
            ),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn surface_limit_role_symmetry((a, b) in paired_domains()) {
        let k = kernel_ginibre();
        let ab = surface_covariance_limit(&k, &a, &b).unwrap();
        let ba = surface_covariance_limit(&k, &b, &a).unwrap();
        prop_assert!((ab - ba).abs() < 1e-10, "{} {}: {} vs {}", a, b, ab, ba);
    }

    #[test]
    fn sign_structure((a, b) in paired_domains()) {
        for k in [kernel_ginibre(), kernel_gef_zeros(64).unwrap()] {
            let own = surface_covariance_limit(&k, &a, &a).unwrap();
            prop_assert!(own > 0.0);
            let cross = surface_covariance_limit(&k, &a, &b).unwrap();
            let overlap = intersection_area(&a, &b).unwrap();
            if overlap < 1e-12 {
                prop_assert!(cross <= 0.0, "{} {}: {}", a, b, cross);
            }
        }
    }

    #[test]
    fn floor_orders(volume in 0.1f64..10.0, scale in 1.0f64..50.0, c in 0.1f64..2.0) {
        let f = variance_floor(1.0, volume, scale, c, 2).unwrap();
        let g = variance_floor(1.0, volume, 2.0 * scale, c, 2).unwrap();
        // the floor grows at least linearly and at most quadratically in L
        prop_assert!(g >= 2.0 * f * (1.0 - 1e-12));
        prop_assert!(g <= 4.0 * f * (1.0 + 1e-12));
    }
}
