use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest multi-index order handled anywhere in the crate.
pub const MAX_ORDER: u32 = 16;

/// A multi-index `γ = (γ_1, …, γ_d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// `e_axis` scaled by `order`.
    pub fn axis(dim: usize, axis: usize, order: u32) -> Self {
        let mut e = vec![0; dim];
        e[axis] = order;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `γ! = ∏ γ_i!`, refused above [`MAX_ORDER`].
    pub fn factorial(&self) -> Result<u64> {
        let order = self.order();
        if order > MAX_ORDER {
            return Err(Error::CostGuard {
                what: "multi-index order",
                limit: MAX_ORDER as usize,
                requested: order as usize,
            });
        }
        Ok(self.0.iter().map(|&k| super::factorial(k)).product())
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|k| k % 2 == 0)
    }

    pub fn doubled(&self) -> Self {
        MultiIndex(self.0.iter().map(|k| 2 * k).collect())
    }

    /// `γ/2` when every entry is even.
    pub fn halved(&self) -> Option<Self> {
        self.is_even()
            .then(|| MultiIndex(self.0.iter().map(|k| k / 2).collect()))
    }

    pub fn add(&self, other: &Self) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, if `other <= self` entrywise.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// The monomial `x^γ`.
    pub fn monomial(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&k, &xi)| xi.powi(k as i32))
            .product()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// All `γ ∈ Z_+^d` with `|γ| = m`, sorted lexicographically.
pub fn multi_indices_of_order(d: usize, m: u32) -> Result<Vec<MultiIndex>> {
    if d == 0 {
        return Err(invalid("multi-index dimension must be at least 1"));
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; d];
    fill(&mut current, 0, m, &mut out);
    out.sort();
    Ok(out)
}

/// All multi-indices with `|γ| <= max_order`, grouped by order.
pub fn multi_indices_up_to(d: usize, max_order: u32) -> Result<Vec<MultiIndex>> {
    let mut out = Vec::new();
    for m in 0..=max_order {
        out.extend(multi_indices_of_order(d, m)?);
    }
    Ok(out)
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for k in 0..=remaining {
        current[pos] = k;
        fill(current, pos + 1, remaining - k, out);
    }
}
