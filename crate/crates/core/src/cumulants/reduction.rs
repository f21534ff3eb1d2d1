use super::partitions::MAX_MAP_SIZE;
use super::scalar::Scalar;
use crate::error::{invalid, Error, Result};

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// `c_τ = (−1)^{m−ℓ}(ℓ−1)!(m−ℓ)! / (m!(m−1)!)`, indexed by `ℓ = ℓ(τ)`.
pub fn reduction_coefficient<S: Scalar>(m: usize, levels: usize) -> S {
    let sign = if (m - levels) % 2 == 0 { 1 } else { -1 };
    S::from_int(sign * factorial(levels - 1) * factorial(m - levels))
        / S::from_int(factorial(m) * factorial(m - 1))
}

fn check_square<S>(zeta: &[Vec<S>]) -> Result<usize> {
    let m = zeta.len();
    if m == 0 {
        return Err(invalid("ζ must be a nonempty square matrix"));
    }
    if m > MAX_MAP_SIZE {
        return Err(Error::CostGuard {
            what: "Q_m order",
            limit: MAX_MAP_SIZE,
            requested: m,
        });
    }
    if zeta.iter().any(|row| row.len() != m) {
        return Err(invalid("ζ must be square"));
    }
    Ok(m)
}

/// `Σ_{τ: [m] → [codomain]} c_{ℓ(τ)} ∏_i entry(i, τ(i))`, walking τ as an odometer.
fn map_sum<S: Scalar, E: Fn(usize, usize) -> S>(m: usize, codomain: usize, entry: E) -> S {
    let coefficients: Vec<S> = (0..=m)
        .map(|l| {
            if l == 0 {
                S::zero()
            } else {
                reduction_coefficient(m, l)
            }
        })
        .collect();
    let mut tau = vec![0usize; m];
    let mut counts = vec![0usize; codomain];
    let mut total = S::zero();
    loop {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut product = S::one();
        for (i, &t) in tau.iter().enumerate() {
            counts[t] += 1;
            product = product * entry(i, t);
        }
        let levels = counts.iter().filter(|&&c| c > 0).count();
        total = total + coefficients[levels].clone() * product;
        // advance
        let mut i = m;
        loop {
            if i == 0 {
                return total;
            }
            i -= 1;
            tau[i] += 1;
            if tau[i] < codomain {
                break;
            }
            tau[i] = 0;
        }
    }
}

/// Raw symmetrized form `(1/m!) Σ_{τ:[m]→[m]} (−1)^{m−ℓ(τ)} / C(m−1, ℓ(τ)−1) ∏ ζ_{i,τ(i)}`.
pub fn q_m_raw<S: Scalar>(zeta: &[Vec<S>]) -> Result<S> {
    let m = check_square(zeta)?;
    Ok(map_sum(m, m, |i, j| zeta[i][j].clone()))
}

/// Reduced form `Σ_{τ:[m]→[m−1]} c_τ ∏ (ζ_{i,τ(i)} − ζ_{i,m})`, a function of row differences.
pub fn q_m_reduced<S: Scalar>(zeta: &[Vec<S>]) -> Result<S> {
    let m = check_square(zeta)?;
    if m < 2 {
        return Err(invalid("the reduced form needs m ≥ 2"));
    }
    Ok(map_sum(m, m - 1, |i, j| {
        zeta[i][j].clone() - zeta[i][m - 1].clone()
    }))
}
