use covasym::cumulants::{
    cumulant_linear_statistic_discrete, dpp_truncated_correlation, dpp_truncated_table,
    integral_identity_defect_dpp, q_m_raw, q_m_reduced, random_projection_kernel, ratio,
    verify_integral_identity_discrete, verify_integral_identity_projection, DiscreteProcess,
    KernelMatrix,
};
use covasym::numerics::{seeded_rng, SimRng};
use covasym::Error;
use num_rational::BigRational;
use rand::Rng;

use crate::config::Suite;
use crate::error::CliResult;
use crate::report::{CheckRecord, VerifyReport};

pub const REDUCTION_TOLERANCE: f64 = 1e-12;
pub const CYCLIC_TOLERANCE: f64 = 1e-10;
pub const PROJECTION_IDENTITY_TOLERANCE: f64 = 1e-9;
/// smallest defect that counts as an observed failure of the projection identity
pub const NONPROJECTION_THRESHOLD: f64 = 1e-3;

const RANDOM_MATRICES: usize = 100;

struct Checks {
    suite: Suite,
    records: Vec<CheckRecord>,
}

impl Checks {
    fn push(&mut self, name: impl Into<String>, defect: f64, tolerance: f64) {
        self.records.push(CheckRecord {
            suite: self.suite.to_string(),
            name: name.into(),
            defect,
            tolerance,
            expected_failure: false,
            passed: defect <= tolerance,
        });
    }

    fn push_expected_failure(&mut self, name: impl Into<String>, defect: f64, threshold: f64) {
        self.records.push(CheckRecord {
            suite: self.suite.to_string(),
            name: name.into(),
            defect,
            tolerance: threshold,
            expected_failure: true,
            passed: defect > threshold,
        });
    }
}

fn random_matrix(rng: &mut SimRng, m: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|_| (0..m).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect()
}

fn qm_reduction(checks: &mut Checks, rng: &mut SimRng, tol: Option<f64>) -> CliResult<()> {
    let tol = tol.unwrap_or(REDUCTION_TOLERANCE);
    for m in 2..=6 {
        let (mut raw_defect, mut shift_defect) = (0.0f64, 0.0f64);
        for _ in 0..RANDOM_MATRICES {
            let zeta = random_matrix(rng, m);
            let reduced = q_m_reduced(&zeta)?;
            raw_defect = raw_defect.max((q_m_raw(&zeta)? - reduced).abs());
            let shifted: Vec<Vec<f64>> = zeta
                .iter()
                .map(|row| {
                    let t = rng.random_range(-5.0..5.0);
                    row.iter().map(|v| v + t).collect()
                })
                .collect();
            shift_defect = shift_defect.max((q_m_reduced(&shifted)? - reduced).abs());
        }
        checks.push(format!("raw = reduced, m = {m}"), raw_defect, tol);
        checks.push(format!("row-shift invariance, m = {m}"), shift_defect, tol);
    }
    for m in 2..=5 {
        let zeta: Vec<Vec<BigRational>> = (0..m)
            .map(|_| {
                (0..m)
                    .map(|_| ratio(rng.random_range(-9..10), rng.random_range(1..6)))
                    .collect()
            })
            .collect();
        let equal = q_m_raw(&zeta)? == q_m_reduced(&zeta)?;
        checks.push(
            format!("raw = reduced in rationals, m = {m}"),
            if equal { 0.0 } else { 1.0 },
            0.0,
        );
    }
    Ok(())
}

fn discrete_cumulants(checks: &mut Checks, rng: &mut SimRng) -> CliResult<()> {
    let process = DiscreteProcess::uniform_subsets(6, 3)?;
    for m in 1..=4 {
        let mut disagreements = 0usize;
        for _ in 0..20 {
            let h: Vec<Vec<BigRational>> = (0..m)
                .map(|_| (0..6).map(|_| ratio(rng.random_range(-3..4), 1)).collect())
                .collect();
            match cumulant_linear_statistic_discrete(&process, &h) {
                Ok(report) => {
                    let reduced_ok = m == 1 || report.reduced.as_ref() == Some(&report.partition);
                    if report.direct != report.partition || !reduced_ok {
                        disagreements += 1;
                    }
                }
                Err(Error::IdentityMismatch { .. }) => disagreements += 1,
                Err(e) => return Err(e.into()),
            }
        }
        checks.push(
            format!("direct = partition = reduced on 3-of-6 subsets, m = {m}"),
            disagreements as f64,
            0.0,
        );
    }
    Ok(())
}

fn integral_identity_discrete(checks: &mut Checks) -> CliResult<()> {
    let cases = [(5, 2, 2), (6, 3, 2), (6, 3, 3), (6, 3, 4)];
    for (n, size, k) in cases {
        let process = DiscreteProcess::uniform_subsets(n, size)?;
        let report = verify_integral_identity_discrete(&process, k)?;
        let defect = if report.holds && report.iterated_holds {
            0.0
        } else {
            report.max_defect.max(f64::MIN_POSITIVE)
        };
        checks.push(format!("{size}-of-{n} subsets, k = {k}"), defect, 0.0);
    }
    let one = DiscreteProcess::uniform_subsets(4, 1)?;
    let two = DiscreteProcess::uniform_subsets(4, 2)?;
    let mixed = DiscreteProcess::mixture(&[(ratio(1, 2), one), (ratio(1, 2), two)])?;
    let report = verify_integral_identity_discrete(&mixed, 2)?;
    let defect = if report.holds { 0.0 } else { report.max_defect };
    checks.push_expected_failure("variable count N in {1, 2}, k = 2", defect, 0.0);
    Ok(())
}

fn nonprojection(checks: &mut Checks, rng: &mut SimRng) -> CliResult<()> {
    let projection = random_projection_kernel(5, 2, rng)?;
    let entries = (0..25)
        .map(|i| projection.get(i / 5, i % 5) * 0.5)
        .collect();
    let half = KernelMatrix::new(5, entries)?;
    let report = integral_identity_defect_dpp(&half, 2)?;
    checks.push_expected_failure("K = P/2, k = 2", report.max_defect, NONPROJECTION_THRESHOLD);
    let rejected = matches!(
        verify_integral_identity_projection(&half, 2),
        Err(Error::InvalidInput(_))
    );
    checks.push(
        "projection check rejects K = P/2",
        if rejected { 0.0 } else { 1.0 },
        0.0,
    );
    Ok(())
}

fn dpp(checks: &mut Checks, rng: &mut SimRng, tol: Option<f64>) -> CliResult<()> {
    for (n, rank) in [(6, 3), (5, 2), (4, 4)] {
        let kernel = random_projection_kernel(n, rank, rng)?;
        let table = dpp_truncated_table(&kernel, 4)?;
        let mut worst = 0.0f64;
        for k in 1..=4u32 {
            for code in 0..n.pow(k) {
                let tuple: Vec<usize> = (0..k).map(|i| code / n.pow(i) % n).collect();
                let cyclic = dpp_truncated_correlation(&kernel, &tuple)?;
                worst = worst.max((cyclic - table.get(&tuple)).abs());
            }
        }
        checks.push(
            format!("cyclic = partition form, n = {n}, rank = {rank}, k <= 4"),
            worst,
            tol.unwrap_or(CYCLIC_TOLERANCE),
        );
    }
    let kernel = random_projection_kernel(5, 2, rng)?;
    for k in 2..=4 {
        let report = verify_integral_identity_projection(&kernel, k)?;
        checks.push(
            format!("projection integral identity, n = 5, rank = 2, k = {k}"),
            report.max_defect,
            tol.unwrap_or(PROJECTION_IDENTITY_TOLERANCE),
        );
    }
    Ok(())
}

/// Runs a suite; `tol` overrides the numeric tolerances of the floating-point checks.
pub fn run_suite(suite: Suite, seed: u64, tol: Option<f64>) -> CliResult<VerifyReport> {
    let members = match suite {
        Suite::All => vec![
            Suite::QmReduction,
            Suite::DiscreteCumulants,
            Suite::IntegralIdentityDiscrete,
            Suite::IntegralIdentityNonprojection,
            Suite::Dpp,
        ],
        single => vec![single],
    };
    let mut rng = seeded_rng(seed);
    let mut records = Vec::new();
    for member in members {
        let mut checks = Checks {
            suite: member,
            records: Vec::new(),
        };
        match member {
            Suite::QmReduction => qm_reduction(&mut checks, &mut rng, tol)?,
            Suite::DiscreteCumulants => discrete_cumulants(&mut checks, &mut rng)?,
            Suite::IntegralIdentityDiscrete => integral_identity_discrete(&mut checks)?,
            Suite::IntegralIdentityNonprojection => nonprojection(&mut checks, &mut rng)?,
            Suite::Dpp => dpp(&mut checks, &mut rng, tol)?,
            Suite::All => unreachable!("expanded above"),
        }
        records.extend(checks.records);
    }
    Ok(VerifyReport {
        suite: suite.to_string(),
        passed: records.iter().all(|c| c.passed),
        checks: records,
    })
}
