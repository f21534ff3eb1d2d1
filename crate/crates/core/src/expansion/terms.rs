use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::inner::derivative_inner_product;
use super::spectral::{auto_grid, spectral_pair};
use super::test_function::TestFunction;
use crate::error::{invalid, Error, Result};
use crate::kernels::{kernel_moments, KernelMomentReport, TruncatedCorrelationKernel};
use crate::numerics::{
    factorial, multi_indices_of_order, round_significant, sphere_area, MultiIndex,
};

/// One `(γ, I(γ), ⟨f, ∂^γ g⟩)` contribution to a series term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermContribution {
    pub gamma: MultiIndex,
    pub moment: f64,
    pub inner_product: f64,
}

/// `Q_m(f, g) = Σ_{|γ|=m} I(γ)/γ! ⟨f, ∂^γ g⟩`, with `Q_0 = (λ_D + I(0)) ⟨f, g⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    pub order: u32,
    pub value: f64,
    pub contributions: Vec<TermContribution>,
}

impl ExpansionTerm {
    /// `Σ I(γ)/γ! ⟨f, ∂^γ g⟩` recomputed from the contributions (`λ_D` enters `Q_0` through `moment`).
    pub fn bookkeeping_sum(&self) -> Result<f64> {
        let mut total = 0.0;
        for c in &self.contributions {
            total += c.moment / c.gamma.factorial()? as f64 * c.inner_product;
        }
        Ok(total)
    }

    pub fn to_record(&self) -> String {
        self.to_string()
    }

    /// Parses `Q m=<m> value=<v> terms=<n>`; the contributions are not part of the record.
    pub fn parse_record(line: &str) -> Result<(u32, f64, usize)> {
        let mut parts = line.split_whitespace();
        if parts.next() != Some("Q") {
            return Err(Error::Parse(format!("not a Q record: `{line}`")));
        }
        let mut field = |key: &str| -> Result<String> {
            let part = parts
                .next()
                .ok_or_else(|| Error::Parse(format!("record lacks `{key}`")))?;
            part.strip_prefix(&format!("{key}="))
                .map(str::to_string)
                .ok_or_else(|| Error::Parse(format!("expected `{key}=`, found `{part}`")))
        };
        let bad = |e: String| Error::Parse(e);
        let m = field("m")?.parse::<u32>().map_err(|e| bad(e.to_string()))?;
        let v = field("value")?
            .parse::<f64>()
            .map_err(|e| bad(e.to_string()))?;
        let n = field("terms")?
            .parse::<usize>()
            .map_err(|e| bad(e.to_string()))?;
        Ok((m, v, n))
    }
}

impl fmt::Display for ExpansionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Q m={} value={} terms={}",
            self.order,
            round_significant(self.value, 12),
            self.contributions.len()
        )
    }
}

fn check_order(
    kernel: &TruncatedCorrelationKernel,
    f: &TestFunction,
    g: &TestFunction,
    m: u32,
) -> Result<()> {
    if m % 2 == 1 {
        return Err(invalid(format!(
            "odd order m = {m} requested; odd terms vanish by symmetry of K"
        )));
    }
    if f.dim != kernel.dim || g.dim != kernel.dim {
        return Err(invalid("kernel and test function dimensions differ"));
    }
    Ok(())
}

/// A `β ≤ γ` with `|β| = |γ|/2`, filled greedily.
fn half_split(gamma: &MultiIndex) -> MultiIndex {
    let mut remaining = gamma.order() / 2;
    let mut beta: Vec<u32> = gamma.entries().iter().map(|&g| g / 2).collect();
    remaining -= beta.iter().sum::<u32>();
    for (b, &g) in beta.iter_mut().zip(gamma.entries()) {
        if remaining == 0 {
            break;
        }
        if *b < g {
            *b += 1;
            remaining -= 1;
        }
    }
    MultiIndex::new(beta)
}

/// `⟨f, ∂^γ g⟩`, averaging the direct form with the integration-by-parts form
/// `(−1)^{|β|} ⟨∂^β f, ∂^{γ−β} g⟩` when both are available.
pub fn derivative_pairing(f: &TestFunction, g: &TestFunction, gamma: &MultiIndex) -> Result<f64> {
    let zero = MultiIndex::zero(f.dim);
    let beta = half_split(gamma);
    let rest = gamma.checked_sub(&beta).expect("β ≤ γ");
    let sign = if beta.order() % 2 == 0 { 1.0 } else { -1.0 };
    let direct_ok = g.sobolev_order() >= gamma.order();
    let parts_ok = f.sobolev_order() >= beta.order() && g.sobolev_order() >= rest.order();
    match (direct_ok, parts_ok) {
        (true, true) if beta.order() > 0 => {
            let direct = derivative_inner_product(f, &zero, g, gamma)?;
            let parts = sign * derivative_inner_product(f, &beta, g, &rest)?;
            Ok(0.5 * (direct + parts))
        }
        (true, _) => derivative_inner_product(f, &zero, g, gamma),
        (false, true) => Ok(sign * derivative_inner_product(f, &beta, g, &rest)?),
        (false, false) => Err(Error::HypothesisViolated(format!(
            "order {} exceeds the Sobolev orders of {} and {}",
            gamma.order(),
            f.label,
            g.label
        ))),
    }
}

pub(crate) fn moments_for(
    kernel: &TruncatedCorrelationKernel,
    m: u32,
) -> Result<KernelMomentReport> {
    kernel_moments(kernel, m.max(2))
}

/// `Q_m` from kernel moments and spatial inner products.
pub fn q_term_spatial(
    kernel: &TruncatedCorrelationKernel,
    f: &TestFunction,
    g: &TestFunction,
    m: u32,
) -> Result<ExpansionTerm> {
    check_order(kernel, f, g, m)?;
    let report = moments_for(kernel, m)?;
    q_term_spatial_with(kernel, &report, f, g, m)
}

pub(crate) fn q_term_spatial_with(
    kernel: &TruncatedCorrelationKernel,
    report: &KernelMomentReport,
    f: &TestFunction,
    g: &TestFunction,
    m: u32,
) -> Result<ExpansionTerm> {
    check_order(kernel, f, g, m)?;
    let mut contributions = Vec::new();
    if m == 0 {
        let zero = MultiIndex::zero(kernel.dim);
        let inner = derivative_inner_product(f, &zero, g, &zero)?;
        contributions.push(TermContribution {
            gamma: zero,
            moment: report.defect,
            inner_product: inner,
        });
    } else {
        for gamma in multi_indices_of_order(kernel.dim, m)? {
            let moment = report
                .moment(&gamma)
                .ok_or_else(|| invalid(format!("moment I({gamma}) unavailable")))?;
            if moment == 0.0 {
                continue;
            }
            contributions.push(TermContribution {
                inner_product: derivative_pairing(f, g, &gamma)?,
                gamma,
                moment,
            });
        }
    }
    let mut term = ExpansionTerm {
        order: m,
        value: 0.0,
        contributions,
    };
    term.value = term.bookkeeping_sum()?;
    Ok(term)
}

/// `Q_m` through `(2π)^{-d} Σ_γ i^{|γ|} I(γ)/γ! ∫ t^γ f̂ conj(ĝ)`.
pub fn q_term_fourier(
    kernel: &TruncatedCorrelationKernel,
    f: &TestFunction,
    g: &TestFunction,
    m: u32,
) -> Result<ExpansionTerm> {
    check_order(kernel, f, g, m)?;
    let report = moments_for(kernel, m)?;
    let pair = spectral_pair(f, g, auto_grid(f, g, 0.0), 0.0)?;
    let geometry = &pair.geometry;
    let d = geometry.dim();
    let norm = geometry.frequency_cell_volume() / (2.0 * PI).powi(d as i32);
    // i^m for even m
    let phase = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let mut t = vec![0.0; d];
    let lattice_integral = |gamma: &MultiIndex, t: &mut Vec<f64>| -> f64 {
        let mut acc = 0.0;
        for k in 0..geometry.len() {
            let product = (pair.f_hat[k] * pair.g_hat[k].conj()).re;
            if product == 0.0 {
                continue;
            }
            geometry.frequency_point_into(k, t);
            acc += product * gamma.monomial(t);
        }
        acc * norm
    };
    let mut contributions = Vec::new();
    if m == 0 {
        let zero = MultiIndex::zero(d);
        contributions.push(TermContribution {
            inner_product: lattice_integral(&zero, &mut t),
            gamma: zero,
            moment: report.defect,
        });
    } else {
        for gamma in multi_indices_of_order(d, m)? {
            let moment = report.moment(&gamma).unwrap_or(0.0);
            if moment == 0.0 {
                continue;
            }
            contributions.push(TermContribution {
                inner_product: phase * lattice_integral(&gamma, &mut t),
                gamma,
                moment,
            });
        }
    }
    let mut term = ExpansionTerm {
        order: m,
        value: 0.0,
        contributions,
    };
    term.value = term.bookkeeping_sum()?;
    Ok(term)
}

/// `⟨Δ^{p/2} f, Δ^{p/2} g⟩ = Σ_{|β|=p} p!/β! ⟨∂^β f, ∂^β g⟩`.
pub fn laplacian_power_pairing(f: &TestFunction, g: &TestFunction, p: u32) -> Result<f64> {
    let pf = factorial(p) as f64;
    let mut total = 0.0;
    for beta in multi_indices_of_order(f.dim, p)? {
        total += pf / beta.factorial()? as f64 * derivative_inner_product(f, &beta, g, &beta)?;
    }
    Ok(total)
}

/// Isotropic form `(−1)^p σ_d J(d−1+2p) / (p! 2^p d(d+2)…(d+2p−2)) ⟨Δ^{p/2}f, Δ^{p/2}g⟩`
/// (plus `λ_D ⟨f,g⟩` when `p = 0`).
pub fn q_term_isotropic(
    kernel: &TruncatedCorrelationKernel,
    f: &TestFunction,
    g: &TestFunction,
    p: u32,
) -> Result<ExpansionTerm> {
    if !kernel.isotropic {
        return Err(invalid(format!(
            "kernel `{}` is not isotropic",
            kernel.label
        )));
    }
    check_order(kernel, f, g, 2 * p)?;
    let d = kernel.dim as u32;
    let j = kernel.radial_moment(d - 1 + 2 * p, &kernel.moment_spec())?;
    let denominator = factorial(p) as f64
        * 2f64.powi(p as i32)
        * (0..p).map(|i| f64::from(d + 2 * i)).product::<f64>();
    let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
    let mut coefficient = sign * sphere_area(kernel.dim) * j / denominator;
    if p == 0 {
        coefficient += kernel.diagonal_intensity;
    }
    let pairing = laplacian_power_pairing(f, g, p)?;
    Ok(ExpansionTerm {
        order: 2 * p,
        value: coefficient * pairing,
        contributions: vec![TermContribution {
            gamma: MultiIndex::zero(kernel.dim),
            moment: coefficient,
            inner_product: pairing,
        }],
    })
}
