use super::partitions::{set_partitions, SetPartition};
use super::scalar::Scalar;
use crate::error::{invalid, Error, Result};

/// Largest `n` accepted by [`multilinear_cumulant`].
pub const MAX_CUMULANT_ORDER: usize = 8;

/// `Σ_π w(π) ∏_j f(π_j)` with `w = (−1)^{ℓ−1}(ℓ−1)!` when `signed`, else `w = 1`.
pub(crate) fn partition_sum<S: Scalar, F: FnMut(&[usize]) -> S>(
    partitions: &[SetPartition],
    signed: bool,
    mut block_value: F,
) -> S {
    let mut total = S::zero();
    for pi in partitions {
        let mut term = if signed {
            S::from_int(pi.moebius_weight())
        } else {
            S::one()
        };
        for block in &pi.blocks {
            let v = block_value(block);
            if v.is_zero() {
                term = S::zero();
                break;
            }
            term = term * v;
        }
        total = total + term;
    }
    total
}

/// `ρ_k` (or `ρ_k^T`) on all `k`-tuples of a ground set of size `n`, for `k = 1..=max_order`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTable<S> {
    ground: usize,
    /// whether `ρ_k` vanishes at tuples with repeated points
    pub zero_on_diagonal: bool,
    orders: Vec<Vec<S>>,
}

impl<S: Scalar> CorrelationTable<S> {
    pub fn from_fn<F: FnMut(&[usize]) -> S>(
        ground: usize,
        max_order: usize,
        zero_on_diagonal: bool,
        mut f: F,
    ) -> Result<Self> {
        let total: f64 = (1..=max_order)
            .map(|k| (ground as f64).powi(k as i32))
            .sum();
        if total > 1e7 {
            return Err(Error::CostGuard {
                what: "correlation table entries",
                limit: 10_000_000,
                requested: total as usize,
            });
        }
        let mut orders = Vec::with_capacity(max_order);
        let mut tuple = Vec::new();
        for k in 1..=max_order {
            let count = ground.pow(k as u32);
            let mut values = Vec::with_capacity(count);
            for code in 0..count {
                decode(code, ground, k, &mut tuple);
                values.push(f(&tuple));
            }
            orders.push(values);
        }
        Ok(CorrelationTable {
            ground,
            zero_on_diagonal,
            orders,
        })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn max_order(&self) -> usize {
        self.orders.len()
    }

    pub fn get(&self, tuple: &[usize]) -> &S {
        let code = tuple.iter().fold(0usize, |acc, &x| acc * self.ground + x);
        &self.orders[tuple.len() - 1][code]
    }
}

pub(crate) fn decode(mut code: usize, ground: usize, k: usize, out: &mut Vec<usize>) {
    out.clear();
    out.resize(k, 0);
    for slot in out.iter_mut().rev() {
        *slot = code % ground;
        code /= ground;
    }
}

fn transform<S: Scalar>(
    table: &CorrelationTable<S>,
    k: usize,
    signed: bool,
) -> Result<CorrelationTable<S>> {
    if k == 0 || k > table.max_order() {
        return Err(invalid(format!(
            "order {k} outside the table orders 1..={}",
            table.max_order()
        )));
    }
    let partitions: Vec<Vec<SetPartition>> = (0..=k).map(set_partitions).collect::<Result<_>>()?;
    let mut sub = Vec::with_capacity(k);
    // the transformed table carries no diagonal convention of its own
    CorrelationTable::from_fn(table.ground, k, false, |tuple| {
        partition_sum(&partitions[tuple.len()], signed, |block| {
            sub.clear();
            sub.extend(block.iter().map(|&i| tuple[i]));
            table.get(&sub).clone()
        })
    })
}

/// `ρ_j^T = Σ_π (−1)^{ℓ(π)−1}(ℓ(π)−1)! ∏ ρ_{|π_i|}(x_{π_i})` for `j ≤ k`.
pub fn truncate_correlations<S: Scalar>(
    table: &CorrelationTable<S>,
    k: usize,
) -> Result<CorrelationTable<S>> {
    transform(table, k, true)
}

/// Inverse of [`truncate_correlations`]: `ρ_j = Σ_π ∏ ρ^T_{|π_i|}(x_{π_i})`.
pub fn moebius_expand<S: Scalar>(
    truncated: &CorrelationTable<S>,
    k: usize,
) -> Result<CorrelationTable<S>> {
    transform(truncated, k, false)
}

/// Multilinear cumulant `κ_n[Y_1, …, Y_n]` from joint moments `m_S = E ∏_{i∈S} Y_i`, with
/// `S` passed as a bit mask over `0..n`.
pub fn multilinear_cumulant<S: Scalar, F: FnMut(u32) -> S>(moment: F, n: usize) -> Result<S> {
    if n == 0 || n > MAX_CUMULANT_ORDER {
        return Err(Error::CostGuard {
            what: "cumulant order",
            limit: MAX_CUMULANT_ORDER,
            requested: n,
        });
    }
    let mut moment = moment;
    let partitions = set_partitions(n)?;
    Ok(partition_sum(&partitions, true, |block| {
        moment(block.iter().fold(0u32, |m, &i| m | (1 << i)))
    }))
}
