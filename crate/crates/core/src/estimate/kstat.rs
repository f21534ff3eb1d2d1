use crate::error::{invalid, Result};

/// Unbiased k-statistics `k_1, …, k_order` (`order ≤ 4`), returned in that order.
///
/// Data are shifted by their first value before the power sums are formed, so constant data
/// give exact zeros.
pub fn k_statistics(values: &[f64], order: usize) -> Result<Vec<f64>> {
    if !(1..=4).contains(&order) {
        return Err(invalid(format!(
            "k-statistics are available for orders 1..=4, got {order}"
        )));
    }
    let n = values.len();
    if n < order + 1 {
        return Err(invalid(format!(
            "order {order} needs at least {} values, got {n}",
            order + 1
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(invalid("k-statistics need finite values"));
    }
    let origin = values[0];
    let shifted: Vec<f64> = values.iter().map(|v| v - origin).collect();
    let mean = shifted.iter().sum::<f64>() / n as f64;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in &shifted {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let nf = n as f64;
    let mut out = vec![origin + mean];
    if order >= 2 {
        out.push(m2 / (nf - 1.0));
    }
    if order >= 3 {
        out.push(nf * m3 / ((nf - 1.0) * (nf - 2.0)));
    }
    if order >= 4 {
        let numerator = nf * ((nf + 1.0) * m4 - 3.0 * (nf - 1.0) * m2 * m2 / nf);
        out.push(numerator / ((nf - 1.0) * (nf - 2.0) * (nf - 3.0)));
    }
    Ok(out)
}

/// `(k_3 / k_2^{3/2}, k_4 / k_2²)`.
pub fn standardized_cumulants(values: &[f64]) -> Result<(f64, f64)> {
    let k = k_statistics(values, 4)?;
    if k[1] <= 0.0 {
        return Err(invalid(
            "standardization needs a positive variance estimate",
        ));
    }
    Ok((k[2] / k[1].powf(1.5), k[3] / (k[1] * k[1])))
}
