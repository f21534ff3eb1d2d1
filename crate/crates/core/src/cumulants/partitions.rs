use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest ground set for [`set_partitions`].
pub const MAX_PARTITION_SIZE: usize = 10;
/// Largest `m` for the `m^m` function enumerations.
pub const MAX_MAP_SIZE: usize = 7;

/// A set partition of `{0, …, m−1}` with blocks in order of their smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn ground_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Coefficient `(−1)^{ℓ−1}(ℓ−1)!` of the Möbius function on the partition lattice.
    pub fn moebius_weight(&self) -> i64 {
        let l = self.block_count() as i64;
        let fact: i64 = (1..l).product();
        if l % 2 == 1 {
            fact
        } else {
            -fact
        }
    }

    /// Block label of each element.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.ground_size()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                labels[i] = b;
            }
        }
        labels
    }
}

/// All set partitions of `{0, …, m−1}`, enumerated through restricted growth strings.
pub fn set_partitions(m: usize) -> Result<Vec<SetPartition>> {
    if m > MAX_PARTITION_SIZE {
        return Err(Error::CostGuard {
            what: "set partition size",
            limit: MAX_PARTITION_SIZE,
            requested: m,
        });
    }
    let mut out = Vec::new();
    let mut growth = vec![0usize; m];
    fn recurse(i: usize, max_label: usize, growth: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
        let m = growth.len();
        if i == m {
            let blocks_n = if m == 0 { 0 } else { max_label + 1 };
            let mut blocks = vec![Vec::new(); blocks_n];
            for (j, &g) in growth.iter().enumerate() {
                blocks[g].push(j);
            }
            out.push(SetPartition { blocks });
            return;
        }
        let top = if i == 0 { 0 } else { max_label + 1 };
        for label in 0..=top {
            growth[i] = label;
            recurse(i + 1, max_label.max(label), growth, out);
        }
    }
    recurse(0, 0, &mut growth, &mut out);
    Ok(out)
}

/// A function `τ: [m] → [codomain]` (0-based); `ℓ(τ)` is the size of its range.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationMap {
    pub values: Vec<usize>,
    pub codomain: usize,
}

impl TruncationMap {
    pub fn new(values: Vec<usize>, codomain: usize) -> Result<Self> {
        if let Some(v) = values.iter().find(|&&v| v >= codomain) {
            return Err(invalid(format!(
                "map value {v} outside the codomain of size {codomain}"
            )));
        }
        Ok(TruncationMap { values, codomain })
    }

    pub fn domain(&self) -> usize {
        self.values.len()
    }

    pub fn level_count(&self) -> usize {
        let mut seen = vec![false; self.codomain];
        for &v in &self.values {
            seen[v] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }
}

/// All `codomain^m` functions `[m] → [codomain]`, in lexicographic order.
pub fn all_maps(m: usize, codomain: usize) -> Result<Vec<TruncationMap>> {
    if m > MAX_MAP_SIZE {
        return Err(Error::CostGuard {
            what: "function enumeration size",
            limit: MAX_MAP_SIZE,
            requested: m,
        });
    }
    if codomain == 0 {
        return Ok(if m == 0 {
            vec![TruncationMap {
                values: vec![],
                codomain,
            }]
        } else {
            vec![]
        });
    }
    let total = codomain.pow(m as u32);
    Ok((0..total)
        .map(|mut code| {
            let mut values = vec![0; m];
            for slot in values.iter_mut().rev() {
                *slot = code % codomain;
                code /= codomain;
            }
            TruncationMap { values, codomain }
        })
        .collect())
}
