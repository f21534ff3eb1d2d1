use std::f64::consts::PI;

use covasym::cumulants::{
    all_maps, cumulant_linear_statistic_discrete, dpp_truncated_correlation, dpp_truncated_table,
    ginibre_higher_density, i_m_moment, indicator_cumulant, integral_identity_defect_dpp,
    moebius_expand, multilinear_cumulant, q_m_raw, q_m_reduced, random_projection_kernel, ratio,
    set_partitions, truncate_correlations, verify_integral_identity_discrete,
    verify_integral_identity_projection, CorrelationTable, DiscreteProcess, KernelMatrix,
    TruncationMap,
};
use covasym::kernels::{kernel_ginibre, kernel_moments};
use covasym::numerics::{seeded_rng, MultiIndex};
use covasym::Error;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

fn q(p: i64, d: i64) -> BigRational {
    ratio(p, d)
}

fn random_matrix(rng: &mut impl Rng, m: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|_| (0..m).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect()
}

fn indicator(n: usize, point: usize) -> Vec<BigRational> {
    (0..n)
        .map(|p| {
            if p == point {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect()
}

fn mixed_count_process() -> DiscreteProcess {
    // N = 1 or 2 with probability ½ each, uniform positions
    let one = DiscreteProcess::uniform_subsets(4, 1).unwrap();
    let two = DiscreteProcess::uniform_subsets(4, 2).unwrap();
    DiscreteProcess::mixture(&[(q(1, 2), one), (q(1, 2), two)]).unwrap()
}

#[test]
fn bell_numbers() {
    let bell = [1usize, 1, 2, 5, 15, 52, 203, 877, 4140];
    for (m, &b) in bell.iter().enumerate() {
        assert_eq!(set_partitions(m).unwrap().len(), b, "m = {m}");
    }
    assert!(matches!(set_partitions(11), Err(Error::CostGuard { .. })));
}

#[test]
fn map_enumeration_counts() {
    assert_eq!(all_maps(3, 2).unwrap().len(), 8);
    assert_eq!(all_maps(4, 3).unwrap().len(), 81);
    assert!(all_maps(8, 7).is_err());
}

#[test]
fn cumulants_of_bernoulli_variables() {
    // Y ~ Bernoulli(p): E Y^k = p for k ≥ 1
    let p = q(1, 3);
    let moment = |mask: u32| {
        if mask == 0 {
            BigRational::one()
        } else {
            p.clone()
        }
    };
    assert_eq!(multilinear_cumulant(moment, 1).unwrap(), p);
    assert_eq!(
        multilinear_cumulant(moment, 2).unwrap(),
        &p * (BigRational::one() - &p)
    );
    let third = &p * (BigRational::one() - &p) * (BigRational::one() - q(2, 1) * &p);
    assert_eq!(multilinear_cumulant(moment, 3).unwrap(), third);
    let fair = |mask: u32| if mask == 0 { 1.0 } else { 0.5 };
    assert!((multilinear_cumulant(fair, 2).unwrap() - 0.25).abs() < 1e-15);
    assert!(multilinear_cumulant(fair, 3).unwrap().abs() < 1e-15);
    assert!(multilinear_cumulant(fair, 9).is_err());
}

#[test]
fn truncation_examples() {
    // ρ_1 ≡ a, ρ_2 ≡ b: ρ_2^T = b − a²
    let table =
        CorrelationTable::from_fn(
            3,
            2,
            false,
            |t| if t.len() == 1 { q(2, 1) } else { q(3, 1) },
        )
        .unwrap();
    let truncated = truncate_correlations(&table, 2).unwrap();
    assert_eq!(*truncated.get(&[0, 2]), q(-1, 1));
    assert_eq!(*truncated.get(&[1]), q(2, 1));
    assert!(truncate_correlations(&table, 3).is_err());
}

#[test]
fn reduction_small_cases() {
    let zeta = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    assert!((q_m_reduced(&zeta).unwrap() - 0.5).abs() < 1e-15);
    assert!((q_m_raw(&zeta).unwrap() - 0.5).abs() < 1e-15);
    let exact = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]];
    assert_eq!(q_m_reduced(&exact).unwrap(), q(1, 2));
    for m in 2..=5 {
        let constant_rows: Vec<Vec<f64>> = (0..m).map(|i| vec![i as f64 + 0.5; m]).collect();
        assert!(q_m_reduced(&constant_rows).unwrap().abs() < 1e-14);
    }
    assert!(q_m_reduced(&[vec![1.0]]).is_err());
    assert!(q_m_reduced(&vec![vec![0.0; 8]; 8]).is_err());
    assert!(q_m_raw(&[vec![1.0, 2.0]]).is_err());
}

#[test]
fn raw_equals_reduced_on_random_matrices() {
    let mut rng = seeded_rng(11);
    for m in 2..=6 {
        for _ in 0..100 {
            let zeta = random_matrix(&mut rng, m);
            let raw = q_m_raw(&zeta).unwrap();
            let reduced = q_m_reduced(&zeta).unwrap();
            assert!((raw - reduced).abs() < 1e-12, "m = {m}: {raw} vs {reduced}");
        }
    }
}

#[test]
fn raw_equals_reduced_exactly() {
    let mut rng = seeded_rng(12);
    for m in 2..=5 {
        let zeta: Vec<Vec<BigRational>> = (0..m)
            .map(|_| {
                (0..m)
                    .map(|_| q(rng.random_range(-9..10), rng.random_range(1..6)))
                    .collect()
            })
            .collect();
        assert_eq!(
            q_m_raw(&zeta).unwrap(),
            q_m_reduced(&zeta).unwrap(),
            "m = {m}"
        );
    }
}

#[test]
fn hypergeometric_variance() {
    let process = DiscreteProcess::uniform_subsets(4, 2).unwrap();
    let h = indicator(4, 0);
    let report = cumulant_linear_statistic_discrete(&process, &[h.clone(), h]).unwrap();
    // n K/N (N−K)/N (N−n)/(N−1) with N = 4, K = 1, n = 2
    let oracle = q(2, 1) * q(1, 4) * q(3, 4) * q(2, 3);
    assert_eq!(report.direct, oracle);
    assert_eq!(report.partition, oracle);
    assert_eq!(report.reduced, Some(oracle));
}

#[test]
fn mean_and_deterministic_coordinate() {
    let process = DiscreteProcess::uniform_subsets(5, 3).unwrap();
    let h: Vec<BigRational> = (0..5).map(|i| q(i as i64 + 1, 2)).collect();
    let mean = cumulant_linear_statistic_discrete(&process, &[h.clone()]).unwrap();
    let campbell: BigRational = h.iter().map(|v| v * process.correlation(&[0])).sum();
    assert_eq!(mean.direct, campbell);
    assert_eq!(mean.reduced, None);

    let constant = vec![q(1, 1); 5];
    let report = cumulant_linear_statistic_discrete(&process, &[constant, h.clone(), h]).unwrap();
    assert!(report.direct.is_zero());
    assert_eq!(report.reduced, Some(BigRational::zero()));
}

#[test]
fn variable_count_skips_reduced_form() {
    let process = mixed_count_process();
    let h = indicator(4, 1);
    let report = cumulant_linear_statistic_discrete(&process, &[h.clone(), h]).unwrap();
    assert_eq!(report.reduced, None);
    assert_eq!(report.direct, report.partition);
}

#[test]
fn indicator_cumulants_match_truncated_correlations() {
    let process = DiscreteProcess::uniform_subsets(5, 2).unwrap();
    let truncated = truncate_correlations(&process.correlation_table(3).unwrap(), 3).unwrap();
    assert_eq!(
        indicator_cumulant(&process, &[0, 1]).unwrap(),
        *truncated.get(&[0, 1])
    );
    assert_eq!(
        indicator_cumulant(&process, &[0, 1, 3]).unwrap(),
        *truncated.get(&[0, 1, 3])
    );
}

#[test]
fn integral_identity_on_constant_counts() {
    let pairs = DiscreteProcess::uniform_subsets(5, 2).unwrap();
    let report = verify_integral_identity_discrete(&pairs, 2).unwrap();
    assert!(report.holds && report.iterated_holds);
    assert_eq!(report.max_defect, 0.0);
    assert_eq!(report.constant_count, Some(2));

    let triples = DiscreteProcess::uniform_subsets(6, 3).unwrap();
    for k in 2..=4 {
        let report = verify_integral_identity_discrete(&triples, k).unwrap();
        assert!(report.holds && report.iterated_holds, "k = {k}: {report:?}");
    }
}

#[test]
fn integral_identity_fails_for_random_count() {
    let process = mixed_count_process();
    let report = verify_integral_identity_discrete(&process, 2).unwrap();
    assert!(!report.holds);
    assert!(report.max_defect > 0.0);
    assert!((report.lhs - report.rhs).abs() == report.max_defect);
    assert_eq!(report.constant_count, None);
    assert!(verify_integral_identity_discrete(&process, 1).is_err());
    assert!(verify_integral_identity_discrete(&process, 6).is_err());
}

#[test]
fn discrete_process_validation_and_text() {
    let text = "n 3\n1/2 0 1\n1/4 2\n1/4\n";
    let process = DiscreteProcess::parse(text).unwrap();
    assert_eq!(process.ground(), 3);
    assert_eq!(process.correlation(&[0, 1]), q(1, 2));
    assert_eq!(process.correlation(&[1, 1]), BigRational::zero());
    assert_eq!(DiscreteProcess::parse(&process.to_text()).unwrap(), process);
    assert!(DiscreteProcess::parse("n 3\n1/2 0 1\n").is_err());
    assert!(DiscreteProcess::parse("n 3\n1 0 4\n").is_err());
    assert!(DiscreteProcess::new(9, vec![(0, q(1, 1))]).is_err());
    assert!(DiscreteProcess::new(2, vec![(1, q(3, 2)), (2, q(-1, 2))]).is_err());
}

#[test]
fn dpp_small_tuples() {
    let mut rng = seeded_rng(21);
    let k = random_projection_kernel(6, 3, &mut rng).unwrap();
    let single = dpp_truncated_correlation(&k, &[2]).unwrap();
    assert!((single - k.get(2, 2).re).abs() < 1e-15);
    let pair = dpp_truncated_correlation(&k, &[1, 4]).unwrap();
    assert!((pair + (k.get(1, 4) * k.get(4, 1)).re).abs() < 1e-15);
    assert!(dpp_truncated_correlation(&k, &[0; 9]).is_err());
    assert!(dpp_truncated_correlation(&k, &[7]).is_err());
}

#[test]
fn dpp_cyclic_equals_partition_definition() {
    let mut rng = seeded_rng(22);
    for (n, rank) in [(6, 3), (5, 2), (4, 4)] {
        let kernel = random_projection_kernel(n, rank, &mut rng).unwrap();
        let table = dpp_truncated_table(&kernel, 4).unwrap();
        let mut worst = 0.0f64;
        for k in 1..=4usize {
            for code in 0..n.pow(k as u32) {
                let tuple: Vec<usize> = (0..k).map(|i| code / n.pow(i as u32) % n).collect();
                let cyclic = dpp_truncated_correlation(&kernel, &tuple).unwrap();
                worst = worst.max((cyclic - table.get(&tuple)).abs());
            }
        }
        assert!(worst < 1e-10, "n = {n}: {worst:e}");
    }
}

#[test]
fn projection_identity_holds() {
    let mut rng = seeded_rng(23);
    let kernel = random_projection_kernel(5, 2, &mut rng).unwrap();
    for k in 2..=4 {
        let report = verify_integral_identity_projection(&kernel, k).unwrap();
        assert!(report.max_defect < 1e-9, "k = {k}: {report:?}");
        assert!(report.tuples_checked > 0);
    }
}

#[test]
fn non_projection_defect() {
    let mut rng = seeded_rng(24);
    let projection = random_projection_kernel(5, 2, &mut rng).unwrap();
    let entries: Vec<Complex64> = (0..25)
        .map(|i| projection.get(i / 5, i % 5) * 0.5)
        .collect();
    let half = KernelMatrix::new(5, entries).unwrap();
    assert!(matches!(
        verify_integral_identity_projection(&half, 2),
        Err(Error::InvalidInput(_))
    ));
    let report = integral_identity_defect_dpp(&half, 2).unwrap();
    // Σ_u ρ_2^T(x, u) + ρ_1(x) = K(x, x) − K²(x, x) = ¼ P(x, x)
    let oracle = (0..5)
        .map(|x| 0.25 * projection.get(x, x).re)
        .fold(0.0, f64::max);
    assert!((report.max_defect - oracle).abs() < 1e-12);
    assert!(report.max_defect > 1e-3);

    let skew = KernelMatrix::from_real(2, &[1.0, 0.0, 1.0, 0.0]).unwrap();
    assert!(verify_integral_identity_projection(&skew, 2).is_err());
}

#[test]
fn kernel_matrix_text() {
    let k = KernelMatrix::parse("2\n0.5 0.25-0.5i\n0.25+0.5i 0.5\n").unwrap();
    assert_eq!(k.get(0, 1), Complex64::new(0.25, -0.5));
    assert!(k.hermitian_error() < 1e-15);
    assert_eq!(KernelMatrix::parse(&k.to_text()).unwrap(), k);
    assert!(KernelMatrix::parse("2\n1 2 3\n").is_err());
}

#[test]
fn im_pair_moment_matches_kernel_moments() {
    let density = ginibre_higher_density();
    let tau = TruncationMap::new(vec![0, 0], 1).unwrap();
    let alpha = [MultiIndex::new(vec![1, 0]), MultiIndex::new(vec![1, 0])];
    let value = i_m_moment(&density, &tau, &alpha, None).unwrap();
    assert!((value + 1.0 / (2.0 * PI)).abs() < 1e-9, "{value}");
    let report = kernel_moments(&kernel_ginibre(), 2).unwrap();
    let i20 = report.moment(&MultiIndex::new(vec![2, 0])).unwrap();
    assert!((value - i20).abs() < 1e-8);
}

#[test]
fn im_three_point_moments() {
    let density = ginibre_higher_density();
    let tau = TruncationMap::new(vec![0, 0, 0], 2).unwrap();
    // integrating out the second point gives 2π^{-2} e^{−|a|²}, so this is (1/2)·2π^{-2}·3π/4
    let alpha = [
        MultiIndex::new(vec![1, 0]),
        MultiIndex::new(vec![1, 0]),
        MultiIndex::new(vec![2, 0]),
    ];
    let value = i_m_moment(&density, &tau, &alpha, None).unwrap();
    assert!((value - 3.0 / (4.0 * PI)).abs() < 1e-6, "{value}");

    // a zero index leaves |α| = 2 but the moment is 2 ∫ a_x² π^{-2} e^{−|a|²} = 1/π
    let tau = TruncationMap::new(vec![0, 0, 1], 2).unwrap();
    let alpha = [
        MultiIndex::new(vec![1, 0]),
        MultiIndex::new(vec![1, 0]),
        MultiIndex::zero(2),
    ];
    let value = i_m_moment(&density, &tau, &alpha, None).unwrap();
    assert!((value - 1.0 / PI).abs() < 1e-6, "{value}");
}

#[test]
fn im_parity_and_guards() {
    let density = ginibre_higher_density();
    let e1 = MultiIndex::new(vec![1, 0]);
    let e2 = MultiIndex::new(vec![0, 1]);
    for values in [vec![0, 0, 1], vec![0, 1, 1], vec![1, 0, 1]] {
        let tau = TruncationMap::new(values, 2).unwrap();
        for alpha in [
            [e1.clone(), e1.clone(), e1.clone()],
            [e1.clone(), e2.clone(), e2.clone()],
        ] {
            assert_eq!(i_m_moment(&density, &tau, &alpha, None).unwrap(), 0.0);
        }
    }
    let tau4 = TruncationMap::new(vec![0, 1, 2, 0], 3).unwrap();
    assert!(matches!(
        i_m_moment(
            &density,
            &tau4,
            &[e1.clone(), e1.clone(), e1.clone(), e1.clone()],
            None
        ),
        Err(Error::CostGuard { .. })
    ));
    let wrong = TruncationMap::new(vec![0, 0], 2).unwrap();
    assert!(i_m_moment(&density, &wrong, &[e1.clone(), e1], None).is_err());
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-6i64..7, 1i64..5).prop_map(|(p, d)| ratio(p, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn moebius_round_trip(values in prop::collection::vec(small_rational(), 3 + 9 + 27 + 81 + 243)) {
        let mut it = values.into_iter();
        let table = CorrelationTable::from_fn(3, 5, false, |_| it.next().unwrap()).unwrap();
        let back = moebius_expand(&truncate_correlations(&table, 5).unwrap(), 5).unwrap();
        prop_assert_eq!(back, table);
    }

    #[test]
    fn row_shift_invariance(seed in any::<u64>(), shifts in prop::collection::vec(-5.0f64..5.0, 4)) {
        let mut rng = seeded_rng(seed);
        let zeta = random_matrix(&mut rng, 4);
        let shifted: Vec<Vec<f64>> =
            zeta.iter().zip(&shifts).map(|(row, t)| row.iter().map(|v| v + t).collect()).collect();
        let a = q_m_reduced(&zeta).unwrap();
        let b = q_m_reduced(&shifted).unwrap();
        prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn three_way_agreement(m in 2usize..=4, values in prop::collection::vec(-3i64..4, 24)) {
        let process = DiscreteProcess::uniform_subsets(6, 3).unwrap();
        let h: Vec<Vec<BigRational>> = values.chunks(6).take(m).map(|c| c.iter().map(|&v| q(v, 1)).collect()).collect();
        let report = cumulant_linear_statistic_discrete(&process, &h).unwrap();
        prop_assert_eq!(&report.direct, &report.partition);
        prop_assert_eq!(report.reduced.as_ref(), Some(&report.partition));
    }
}
