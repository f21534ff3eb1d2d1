use crate::error::{invalid, Result};
use crate::expansion::TestFunction;
use crate::simulate::Sample;

/// `X_L(f) = ∫ f(x/L) X(dx)`: a sum over points, or a grid Riemann sum against the density.
///
/// Fails with a support violation when `f(·/L)` leaves the sample's usable window.
pub fn linear_statistic(sample: &Sample, f: &TestFunction, scale: f64) -> Result<f64> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(invalid("the scale L must be positive and finite"));
    }
    if f.dim != sample.dim() {
        return Err(invalid(format!(
            "test function dimension {} differs from the sample dimension {}",
            f.dim,
            sample.dim()
        )));
    }
    sample.usable().check_support(f, scale)?;
    let mut x = vec![0.0; f.dim];
    match sample {
        Sample::Points(points) => Ok(points
            .points()
            .map(|p| {
                for (xi, pi) in x.iter_mut().zip(p) {
                    *xi = pi / scale;
                }
                f.eval(&x)
            })
            .sum()),
        Sample::Measure(measure) => {
            let geometry = &measure.field.geometry;
            let mut total = 0.0;
            for (i, density) in measure.field.values.iter().enumerate() {
                geometry.point_into(i, &mut x);
                for xi in &mut x {
                    *xi /= scale;
                }
                total += f.eval(&x) * density;
            }
            Ok(total * geometry.cell_volume())
        }
    }
}
