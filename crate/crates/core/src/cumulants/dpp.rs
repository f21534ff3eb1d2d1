use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::correlations::{decode, truncate_correlations, CorrelationTable};
use crate::error::{invalid, Error, Result};

/// Largest tuple length for the cyclic formula.
pub const MAX_DPP_ORDER: usize = 8;
/// Hermitian and idempotency tolerance of [`verify_integral_identity_projection`].
pub const PROJECTION_TOLERANCE: f64 = 1e-10;

/// Complex kernel `K(x, y)` on the points `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl KernelMatrix {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(invalid(format!(
                "need {n}×{n} entries, got {}",
                entries.len()
            )));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(invalid("kernel entries must be finite"));
        }
        Ok(KernelMatrix { n, entries })
    }

    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        KernelMatrix::new(n, entries.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// `n` on the first line, then the `n²` entries row-major. Entries are real numbers or
    /// complex numbers written like `0.5-0.25i`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        let n: usize = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("kernel matrix must start with its size".into()))?;
        let entries = tokens
            .map(|t| {
                t.parse::<Complex64>()
                    .map_err(|_| Error::Parse(format!("bad matrix entry `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        KernelMatrix::new(n, entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.entries.chunks(self.n) {
            let line: Vec<String> = row.iter().map(|z| format!("{z}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> Complex64 {
        self.entries[x * self.n + y]
    }

    pub fn hermitian_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for x in 0..self.n {
            for y in 0..self.n {
                worst = worst.max((self.get(x, y) - self.get(y, x).conj()).norm());
            }
        }
        worst
    }

    /// `max |(K²)(x, y) − K(x, y)|`.
    pub fn idempotency_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for x in 0..self.n {
            for y in 0..self.n {
                let square: Complex64 = (0..self.n).map(|u| self.get(x, u) * self.get(u, y)).sum();
                worst = worst.max((square - self.get(x, y)).norm());
            }
        }
        worst
    }

    /// `det(K(x_i, x_j))`, the `k`-point correlation of the determinantal process.
    pub fn minor_determinant(&self, tuple: &[usize]) -> Complex64 {
        let k = tuple.len();
        let mut a: Vec<Complex64> = Vec::with_capacity(k * k);
        for &x in tuple {
            for &y in tuple {
                a.push(self.get(x, y));
            }
        }
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..k {
            let pivot = (col..k)
                .max_by(|&i, &j| a[i * k + col].norm().total_cmp(&a[j * k + col].norm()))
                .unwrap_or(col);
            if a[pivot * k + col].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..k {
                    a.swap(pivot * k + j, col * k + j);
                }
                det = -det;
            }
            let p = a[col * k + col];
            det *= p;
            for i in col + 1..k {
                let factor = a[i * k + col] / p;
                for j in col..k {
                    let v = a[col * k + j];
                    a[i * k + j] -= factor * v;
                }
            }
        }
        det
    }
}

/// Heap's algorithm over permutations of `1..k`, so every `k`-cycle through 0 is visited once.
pub(crate) fn for_each_cycle(k: usize, mut visit: impl FnMut(&[usize])) {
    if k == 1 {
        visit(&[0]);
        return;
    }
    let mut order: Vec<usize> = (1..k).collect();
    let mut cycle = vec![0usize; k];
    let mut emit = |order: &[usize], cycle: &mut Vec<usize>| {
        // cycle 0 → order[0] → order[1] → … → 0, stored as successor map
        let mut from = 0;
        for &to in order {
            cycle[from] = to;
            from = to;
        }
        cycle[from] = 0;
        visit(cycle);
    };
    let n = order.len();
    let mut c = vec![0usize; n];
    emit(&order, &mut cycle);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            emit(&order, &mut cycle);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// `ρ_k^T(x_1, …, x_k) = (−1)^{k−1} Σ_{cyclic P} ∏ K(x_i, x_{P(i)})`, real part.
pub fn dpp_truncated_correlation(kernel: &KernelMatrix, tuple: &[usize]) -> Result<f64> {
    let k = tuple.len();
    if k == 0 || k > MAX_DPP_ORDER {
        return Err(Error::CostGuard {
            what: "DPP tuple length",
            limit: MAX_DPP_ORDER,
            requested: k,
        });
    }
    if let Some(&x) = tuple.iter().find(|&&x| x >= kernel.n) {
        return Err(invalid(format!(
            "point {x} outside the kernel's {} points",
            kernel.n
        )));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for_each_cycle(k, |succ| {
        let mut prod = Complex64::new(1.0, 0.0);
        for (i, &j) in succ.iter().enumerate() {
            prod *= kernel.get(tuple[i], tuple[j]);
        }
        total += prod;
    });
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * total.re)
}

/// `ρ_j^T` for all `j ≤ k` by truncating the determinant minors `ρ_j = det K[x, x]`.
pub fn dpp_truncated_table(kernel: &KernelMatrix, k: usize) -> Result<CorrelationTable<f64>> {
    let minors = CorrelationTable::from_fn(kernel.n, k, false, |t| kernel.minor_determinant(t).re)?;
    truncate_correlations(&minors, k)
}

/// Random rank-`rank` orthogonal projection on `n` points (complex Gaussian columns,
/// Gram-Schmidt).
pub fn random_projection_kernel<R: Rng + ?Sized>(
    n: usize,
    rank: usize,
    rng: &mut R,
) -> Result<KernelMatrix> {
    if rank == 0 || rank > n {
        return Err(invalid(format!("rank must lie in 1..={n}, got {rank}")));
    }
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(rank);
    while basis.len() < rank {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        for _ in 0..2 {
            for b in &basis {
                let overlap: Complex64 = b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= overlap * bi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        basis.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    for b in &basis {
        for x in 0..n {
            for y in 0..n {
                entries[x * n + y] += b[x] * b[y].conj();
            }
        }
    }
    KernelMatrix::new(n, entries)
}

/// Defects of `Σ_u ρ_k^T(x, u) + (k−1) ρ_{k−1}^T(x) = 0` over distinct `(k−1)`-tuples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DppIdentityReport {
    pub order: usize,
    pub max_defect: f64,
    pub worst_tuple: Vec<usize>,
    pub tuples_checked: usize,
    pub hermitian_error: f64,
    pub idempotency_error: f64,
}

/// The integral-identity defect for any kernel, projection or not.
pub fn integral_identity_defect_dpp(kernel: &KernelMatrix, k: usize) -> Result<DppIdentityReport> {
    if !(2..=MAX_DPP_ORDER).contains(&k) {
        return Err(invalid(format!(
            "identity order must lie in 2..={MAX_DPP_ORDER}, got {k}"
        )));
    }
    if kernel.n > 128 {
        return Err(Error::CostGuard {
            what: "DPP kernel size",
            limit: 128,
            requested: kernel.n,
        });
    }
    let n = kernel.n;
    let work = (n as f64).powi(k as i32) * (1..k).product::<usize>() as f64;
    if work > 1e8 {
        return Err(Error::CostGuard {
            what: "DPP identity work",
            limit: 100_000_000,
            requested: work as usize,
        });
    }
    let mut worst = (0.0f64, Vec::new());
    let mut checked = 0;
    let mut prefix = Vec::new();
    let mut full = Vec::with_capacity(k);
    for code in 0..n.pow(k as u32 - 1) {
        decode(code, n, k - 1, &mut prefix);
        let mut seen = 0u128;
        if !prefix.iter().all(|&x| {
            let fresh = seen & (1 << x) == 0;
            seen |= 1 << x;
            fresh
        }) {
            continue;
        }
        let mut lhs = 0.0;
        for u in 0..n {
            full.clone_from(&prefix);
            full.push(u);
            lhs += dpp_truncated_correlation(kernel, &full)?;
        }
        let defect = (lhs + (k as f64 - 1.0) * dpp_truncated_correlation(kernel, &prefix)?).abs();
        checked += 1;
        if defect > worst.0 || worst.1.is_empty() {
            worst = (defect.max(worst.0), prefix.clone());
        }
    }
    Ok(DppIdentityReport {
        order: k,
        max_defect: worst.0,
        worst_tuple: worst.1,
        tuples_checked: checked,
        hermitian_error: kernel.hermitian_error(),
        idempotency_error: kernel.idempotency_error(),
    })
}

/// Checks the integral identity on a projection kernel; rejects kernels that are not
/// Hermitian idempotents to [`PROJECTION_TOLERANCE`].
pub fn verify_integral_identity_projection(
    kernel: &KernelMatrix,
    k: usize,
) -> Result<DppIdentityReport> {
    let hermitian = kernel.hermitian_error();
    if hermitian > PROJECTION_TOLERANCE {
        return Err(invalid(format!(
            "kernel is not Hermitian (error {hermitian:e})"
        )));
    }
    let idempotency = kernel.idempotency_error();
    if idempotency > PROJECTION_TOLERANCE {
        return Err(invalid(format!(
            "kernel is not a projection, |K² − K| = {idempotency:e}"
        )));
    }
    integral_identity_defect_dpp(kernel, k)
}
