use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::domain::{BoundaryCurve, SmoothDomain};
use crate::error::{invalid, Result};

/// Default matching tolerance for coincident analytic arcs.
pub const DEFAULT_MATCH_TOLERANCE: f64 = 1e-9;
/// Parameter samples per boundary component.
pub const CLASSIFIER_SAMPLES: usize = 4096;
const BISECTION_STEPS: usize = 60;

/// Position of a boundary point of one domain relative to another.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    Outside,
    Inside,
    /// On the other boundary with `ε = sign⟨N_A, N_B⟩`.
    Shared(i8),
}

/// A parameter interval `[start, end]` of one boundary component with a constant class.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryRun {
    pub component: usize,
    pub start: f64,
    pub end: f64,
    pub class: PointClass,
    /// Number of classifier samples inside the run.
    pub nodes: usize,
}

/// One shared arc on the boundary of `A`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharedArc {
    pub component: usize,
    pub start: f64,
    pub end: f64,
    pub epsilon: i8,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharedBoundary {
    pub arcs: Vec<SharedArc>,
    pub signed_length: f64,
    pub unsigned_length: f64,
}

pub(crate) fn classify_point(
    curve: &BoundaryCurve,
    theta: f64,
    other: &SmoothDomain,
    delta: f64,
) -> PointClass {
    let x = curve.point(theta);
    let n = curve.outward_normal(theta);
    for component in other.components() {
        let (distance, m) = component.distance_and_normal(&x);
        if distance < delta {
            let dot = n[0] * m[0] + n[1] * m[1];
            if dot.abs() > 1.0 - delta {
                return PointClass::Shared(if dot > 0.0 { 1 } else { -1 });
            }
        }
    }
    if other.contains(&x) {
        PointClass::Inside
    } else {
        PointClass::Outside
    }
}

/// Splits every boundary component of `domain` into runs classified against `other`.
///
/// Class changes between samples are located by bisection. Runs holding a single sample
/// (tangency points) are merged into their neighbours when those agree.
pub fn boundary_runs(
    domain: &SmoothDomain,
    other: &SmoothDomain,
    delta: f64,
) -> Result<Vec<BoundaryRun>> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!(
            "matching tolerance must lie in (0, 1), got {delta}"
        )));
    }
    if domain.dim() != other.dim() {
        return Err(invalid("domains have different dimensions"));
    }
    let n = CLASSIFIER_SAMPLES;
    let step = TAU / n as f64;
    let mut runs = Vec::new();
    for (index, curve) in domain.components().iter().enumerate() {
        let classes: Vec<PointClass> = (0..n)
            .map(|i| classify_point(curve, i as f64 * step, other, delta))
            .collect();
        let changes: Vec<usize> = (0..n)
            .filter(|&i| classes[i] != classes[(i + 1) % n])
            .collect();
        if changes.is_empty() {
            runs.push(BoundaryRun {
                component: index,
                start: 0.0,
                end: TAU,
                class: classes[0],
                nodes: n,
            });
            continue;
        }
        let cuts: Vec<f64> = changes
            .iter()
            .map(|&i| {
                let (mut lo, mut hi) = (i as f64 * step, (i + 1) as f64 * step);
                for _ in 0..BISECTION_STEPS {
                    let mid = 0.5 * (lo + hi);
                    if classify_point(curve, mid, other, delta) == classes[i] {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect();
        let mut component_runs: Vec<BoundaryRun> = (0..changes.len())
            .map(|k| {
                let next = (k + 1) % changes.len();
                let mut end = cuts[next];
                if next == 0 {
                    end += TAU;
                }
                let nodes = (changes[next] + if next == 0 { n } else { 0 }) - changes[k];
                BoundaryRun {
                    component: index,
                    start: cuts[k],
                    end,
                    class: classes[(changes[k] + 1) % n],
                    nodes,
                }
            })
            .collect();
        merge_isolated(&mut component_runs);
        runs.extend(component_runs);
    }
    Ok(runs)
}

fn merge_isolated(runs: &mut Vec<BoundaryRun>) {
    loop {
        let m = runs.len();
        if m < 3 {
            return;
        }
        let Some(k) = (0..m).find(|&k| {
            runs[k].nodes <= 1 && runs[(k + m - 1) % m].class == runs[(k + 1) % m].class
        }) else {
            return;
        };
        let prev = (k + m - 1) % m;
        let next = (k + 1) % m;
        let mut merged = runs[prev];
        let mut end = runs[next].end;
        if end < merged.start {
            end += TAU;
        }
        merged.end = end;
        merged.nodes += runs[k].nodes + runs[next].nodes;
        let mut keep = Vec::with_capacity(m - 2);
        for (i, run) in runs.iter().enumerate() {
            if i == prev {
                keep.push(merged);
            } else if i != k && i != next {
                keep.push(*run);
            }
        }
        *runs = keep;
    }
}

/// Shared arcs of `∂A ∩ ∂B` with their sign `ε = sign⟨N_A, N_B⟩`.
pub fn classify_shared_boundary(
    a: &SmoothDomain,
    b: &SmoothDomain,
    delta: f64,
) -> Result<SharedBoundary> {
    if delta <= 0.0 {
        return Err(invalid(format!(
            "matching tolerance must be positive, got {delta}"
        )));
    }
    let mut arcs = Vec::new();
    for run in boundary_runs(a, b, delta)? {
        if let PointClass::Shared(epsilon) = run.class {
            if run.nodes <= 1 {
                continue;
            }
            let length = a.components()[run.component].arc_length(run.start, run.end)?;
            arcs.push(SharedArc {
                component: run.component,
                start: run.start,
                end: run.end,
                epsilon,
                length,
            });
        }
    }
    let signed_length = arcs.iter().map(|a| a.epsilon as f64 * a.length).sum();
    let unsigned_length = arcs.iter().map(|a| a.length).sum();
    Ok(SharedBoundary {
        arcs,
        signed_length,
        unsigned_length,
    })
}

/// `|A ∩ B|` by Green's theorem over the boundary pieces of the intersection.
pub fn intersection_area(a: &SmoothDomain, b: &SmoothDomain) -> Result<f64> {
    let delta = DEFAULT_MATCH_TOLERANCE;
    let mut area = 0.0;
    for run in boundary_runs(a, b, delta)? {
        if matches!(run.class, PointClass::Inside | PointClass::Shared(1)) {
            area += a.components()[run.component].green_area(run.start, run.end)?;
        }
    }
    for run in boundary_runs(b, a, delta)? {
        if run.class == PointClass::Inside {
            area += b.components()[run.component].green_area(run.start, run.end)?;
        }
    }
    Ok(area.max(0.0))
}
