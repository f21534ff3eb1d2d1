use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::correlations::{decode, multilinear_cumulant, truncate_correlations, CorrelationTable};
use super::partitions::set_partitions;
use super::reduction::q_m_reduced;
use super::scalar::{ratio, Scalar};
use crate::error::{invalid, Error, Result};

/// Largest ground set of a [`DiscreteProcess`].
pub const MAX_GROUND_SIZE: usize = 8;
/// Largest cumulant order and identity order for the exhaustive checks.
pub const MAX_DISCRETE_ORDER: usize = 5;

/// A simple point process on `{0, …, n−1}` given by its configurations (bit masks) and
/// rational probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteProcess {
    ground: usize,
    configurations: Vec<(u32, BigRational)>,
}

impl DiscreteProcess {
    pub fn new(ground: usize, configurations: Vec<(u32, BigRational)>) -> Result<Self> {
        if ground == 0 || ground > MAX_GROUND_SIZE {
            return Err(Error::CostGuard {
                what: "discrete ground set size",
                limit: MAX_GROUND_SIZE,
                requested: ground,
            });
        }
        let mut merged: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (mask, w) in configurations {
            if mask >> ground != 0 {
                return Err(invalid(format!(
                    "configuration {mask:#b} uses points outside 0..{ground}"
                )));
            }
            if w.is_negative() {
                return Err(invalid(format!("negative probability {w}")));
            }
            *merged.entry(mask).or_insert_with(BigRational::zero) += w;
        }
        let total: BigRational = merged.values().cloned().sum();
        if !total.is_one() {
            return Err(invalid(format!("probabilities sum to {total}, not 1")));
        }
        Ok(DiscreteProcess {
            ground,
            configurations: merged.into_iter().filter(|(_, w)| !w.is_zero()).collect(),
        })
    }

    /// Uniformly random `size`-subset of the ground set.
    pub fn uniform_subsets(ground: usize, size: usize) -> Result<Self> {
        if size > ground {
            return Err(invalid(format!("cannot choose {size} of {ground} points")));
        }
        let masks: Vec<u32> = (0u32..(1u32 << ground))
            .filter(|m| m.count_ones() as usize == size)
            .collect();
        let w = ratio(1, masks.len() as i64);
        DiscreteProcess::new(ground, masks.into_iter().map(|m| (m, w.clone())).collect())
    }

    /// Mixture `Σ p_i X_i` of processes on the same ground set.
    pub fn mixture(parts: &[(BigRational, DiscreteProcess)]) -> Result<Self> {
        let ground = parts
            .first()
            .map(|p| p.1.ground)
            .ok_or_else(|| invalid("empty mixture"))?;
        if parts.iter().any(|p| p.1.ground != ground) {
            return Err(invalid("mixture components live on different ground sets"));
        }
        let configurations = parts
            .iter()
            .flat_map(|(p, x)| x.configurations.iter().map(move |(m, w)| (*m, p * w)))
            .collect();
        DiscreteProcess::new(ground, configurations)
    }

    /// Parses `n <size>` followed by lines `<weight> <point> <point> …`; weights may be
    /// fractions such as `1/6`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty process description".into()))?;
        let size_token = header.strip_prefix('n').map(str::trim).unwrap_or(header);
        let ground: usize = size_token
            .parse()
            .map_err(|_| Error::Parse(format!("bad ground-set line `{header}`")))?;
        let mut configurations = Vec::new();
        for line in lines {
            let mut tokens = line.split_whitespace();
            let weight = parse_rational(tokens.next().unwrap_or(""))?;
            let mut mask = 0u32;
            for t in tokens {
                let p: usize = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad point `{t}` in `{line}`")))?;
                if p >= ground || p >= 32 {
                    return Err(Error::Parse(format!(
                        "point {p} outside the ground set in `{line}`"
                    )));
                }
                mask |= 1 << p;
            }
            configurations.push((mask, weight));
        }
        DiscreteProcess::new(ground, configurations)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.ground);
        for (mask, w) in &self.configurations {
            let _ = write!(out, "{w}");
            for p in 0..self.ground {
                if mask & (1 << p) != 0 {
                    let _ = write!(out, " {p}");
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn configurations(&self) -> &[(u32, BigRational)] {
        &self.configurations
    }

    /// The point count when it is almost surely constant.
    pub fn constant_count(&self) -> Option<usize> {
        let first = self.configurations.first()?.0.count_ones();
        self.configurations
            .iter()
            .all(|(m, _)| m.count_ones() == first)
            .then_some(first as usize)
    }

    /// `ρ_k(x_1, …, x_k)`: the probability that all points are present, zero on diagonals.
    pub fn correlation(&self, tuple: &[usize]) -> BigRational {
        let mut mask = 0u32;
        for &x in tuple {
            if mask & (1 << x) != 0 {
                return BigRational::zero();
            }
            mask |= 1 << x;
        }
        self.configurations
            .iter()
            .filter(|(m, _)| m & mask == mask)
            .map(|(_, w)| w.clone())
            .sum()
    }

    pub fn correlation_table(&self, max_order: usize) -> Result<CorrelationTable<BigRational>> {
        CorrelationTable::from_fn(self.ground, max_order, true, |t| self.correlation(t))
    }

    fn statistic(&self, h: &[BigRational], mask: u32) -> BigRational {
        (0..self.ground)
            .filter(|p| mask & (1 << p) != 0)
            .map(|p| h[p].clone())
            .sum()
    }
}

fn parse_rational(token: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad weight `{token}`"));
    match token.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.parse().map_err(|_| bad())?;
            let q: i64 = q.parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(ratio(p, q))
        }
        None => {
            if let Ok(p) = token.parse::<i64>() {
                return Ok(ratio(p, 1));
            }
            let v: f64 = token.parse().map_err(|_| bad())?;
            super::scalar::rational_from_f64(v).ok_or_else(bad)
        }
    }
}

/// The three evaluations of `κ_m[X(h_1), …, X(h_m)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteCumulantReport {
    pub order: usize,
    /// cumulant of the enumerated joint law
    pub direct: BigRational,
    /// `Σ_π ⟨⊗_q ∏_{i∈π_q} h_i, ρ^T_{ℓ(π)}⟩`
    pub partition: BigRational,
    /// `⟨Q_m[(h_i(x_j))], ρ_m^T⟩`, evaluated when the point count is constant and `m ≥ 2`
    pub reduced: Option<BigRational>,
}

/// Joint cumulant of linear statistics of a discrete process, computed three ways.
///
/// Fails with [`Error::IdentityMismatch`] when the direct and partition forms differ, or
/// when the reduced form differs for a constant-count process.
pub fn cumulant_linear_statistic_discrete(
    process: &DiscreteProcess,
    h: &[Vec<BigRational>],
) -> Result<DiscreteCumulantReport> {
    let m = h.len();
    if m == 0 || m > MAX_DISCRETE_ORDER {
        return Err(Error::CostGuard {
            what: "discrete cumulant order",
            limit: MAX_DISCRETE_ORDER,
            requested: m,
        });
    }
    if h.iter().any(|hi| hi.len() != process.ground) {
        return Err(invalid("each h_i needs one value per ground point"));
    }
    let n = process.ground;

    let direct = multilinear_cumulant(
        |mask| {
            process
                .configurations
                .iter()
                .map(|(config, w)| {
                    let mut prod = w.clone();
                    for (i, hi) in h.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            prod *= process.statistic(hi, *config);
                        }
                    }
                    prod
                })
                .sum()
        },
        m,
    )?;

    let truncated = truncate_correlations(&process.correlation_table(m)?, m)?;
    let partitions = set_partitions(m)?;
    let mut partition = BigRational::zero();
    let mut tuple = Vec::new();
    for pi in &partitions {
        let l = pi.block_count();
        for code in 0..n.pow(l as u32) {
            decode(code, n, l, &mut tuple);
            let rho = truncated.get(&tuple);
            if rho.is_zero() {
                continue;
            }
            let mut term = rho.clone();
            for (q, block) in pi.blocks.iter().enumerate() {
                for &i in block {
                    term *= &h[i][tuple[q]];
                }
            }
            partition += term;
        }
    }
    if direct != partition {
        return Err(Error::IdentityMismatch {
            order: m,
            detail: format!("direct cumulant {direct} differs from the partition form {partition}"),
        });
    }

    let reduced = if m >= 2 && process.constant_count().is_some() {
        let mut total = BigRational::zero();
        for code in 0..n.pow(m as u32) {
            decode(code, n, m, &mut tuple);
            let rho = truncated.get(&tuple);
            if rho.is_zero() {
                continue;
            }
            let zeta: Vec<Vec<BigRational>> = (0..m)
                .map(|i| tuple.iter().map(|&x| h[i][x].clone()).collect())
                .collect();
            total += q_m_reduced(&zeta)? * rho;
        }
        if total != partition {
            return Err(Error::IdentityMismatch {
                order: m,
                detail: format!("reduced form {total} differs from the partition form {partition}"),
            });
        }
        Some(total)
    } else {
        None
    };
    Ok(DiscreteCumulantReport {
        order: m,
        direct,
        partition,
        reduced,
    })
}

/// Outcome of the exact integral-identity check on a discrete process.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralIdentityReport {
    pub order: usize,
    pub constant_count: Option<usize>,
    /// `Σ_u ρ_k^T(x, u) = −(k−1) ρ_{k−1}^T(x)` at every distinct tuple
    pub holds: bool,
    /// the iterated form for every `r < k`
    pub iterated_holds: bool,
    pub max_defect: f64,
    /// tuple with the largest defect in the one-step identity
    pub worst_tuple: Vec<usize>,
    /// `Σ_u ρ_k^T(x, u)` at the worst tuple
    pub lhs: f64,
    /// `−(k−1) ρ_{k−1}^T(x)` at the worst tuple
    pub rhs: f64,
}

fn distinct(t: &[usize]) -> bool {
    let mut mask = 0u64;
    t.iter().all(|&x| {
        let fresh = mask & (1 << x) == 0;
        mask |= 1 << x;
        fresh
    })
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Exact check of `Σ_u ρ_k^T(x_1, …, x_{k−1}, u) = −(k−1) ρ_{k−1}^T(x_1, …, x_{k−1})` and of
/// its iterated form `(−1)^{k−r}(k−1)!/(r−1)! ρ_r^T` over all distinct tuples.
pub fn verify_integral_identity_discrete(
    process: &DiscreteProcess,
    k: usize,
) -> Result<IntegralIdentityReport> {
    if !(2..=MAX_DISCRETE_ORDER).contains(&k) {
        return Err(invalid(format!(
            "identity order must lie in 2..={MAX_DISCRETE_ORDER}, got {k}"
        )));
    }
    let n = process.ground;
    let truncated = truncate_correlations(&process.correlation_table(k)?, k)?;
    let mut holds = true;
    let mut max_defect = BigRational::zero();
    let mut worst = (Vec::new(), BigRational::zero(), BigRational::zero());
    let mut prefix = Vec::new();
    let mut full = Vec::new();
    for code in 0..n.pow(k as u32 - 1) {
        decode(code, n, k - 1, &mut prefix);
        if !distinct(&prefix) {
            continue;
        }
        let mut lhs = BigRational::zero();
        for u in 0..n {
            full.clone_from(&prefix);
            full.push(u);
            lhs += truncated.get(&full);
        }
        let rhs = -BigRational::from_int(k as i64 - 1) * truncated.get(&prefix);
        let defect = (&lhs - &rhs).abs();
        if !defect.is_zero() {
            holds = false;
        }
        if defect > max_defect || worst.0.is_empty() {
            if defect > max_defect {
                max_defect = defect;
            }
            worst = (prefix.clone(), lhs, rhs);
        }
    }
    let mut iterated_holds = true;
    let mut tail = Vec::new();
    for r in 1..k {
        let sign = if (k - r) % 2 == 0 { 1 } else { -1 };
        let coefficient = BigRational::from_int(sign * factorial(k - 1) / factorial(r - 1));
        for code in 0..n.pow(r as u32) {
            decode(code, n, r, &mut prefix);
            if !distinct(&prefix) {
                continue;
            }
            let mut lhs = BigRational::zero();
            for rest in 0..n.pow((k - r) as u32) {
                decode(rest, n, k - r, &mut tail);
                full.clone_from(&prefix);
                full.extend_from_slice(&tail);
                lhs += truncated.get(&full);
            }
            if lhs != &coefficient * truncated.get(&prefix) {
                iterated_holds = false;
            }
        }
    }
    Ok(IntegralIdentityReport {
        order: k,
        constant_count: process.constant_count(),
        holds,
        iterated_holds,
        max_defect: max_defect.to_f64(),
        worst_tuple: worst.0,
        lhs: worst.1.to_f64(),
        rhs: worst.2.to_f64(),
    })
}

/// Multilinear cumulant of the point-count indicators `V_{x_1}, …, V_{x_k}`.
pub fn indicator_cumulant(process: &DiscreteProcess, points: &[usize]) -> Result<BigRational> {
    multilinear_cumulant(
        |mask| {
            let mut need = 0u32;
            for (i, &x) in points.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    need |= 1 << x;
                }
            }
            process
                .configurations
                .iter()
                .filter(|(c, _)| c & need == need)
                .map(|(_, w)| w.clone())
                .sum()
        },
        points.len(),
    )
}
