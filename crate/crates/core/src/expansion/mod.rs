//! Covariance series terms `Q_{2p}`, variance bounds, exact Fourier covariances and
//! asymptotic predictions for linear statistics `X_L(f)`.

mod bound;
mod inner;
mod predict;
mod spectral;
mod terms;
mod test_function;

pub use bound::{derivative_sup, variance_upper_bound, VarianceBound, MOMENT_NULL_THRESHOLD};
pub use inner::{derivative_inner_product, lens_area, norm_squared, sobolev_seminorm_squared};
pub use predict::{predict_asymptotics, AsymptoticClass, AsymptoticPrediction};
pub use spectral::{
    auto_grid, covariance_exact_fourier, covariance_exact_fourier_on, required_extent, FourierGrid,
};
pub use terms::{
    derivative_pairing, laplacian_power_pairing, q_term_fourier, q_term_isotropic, q_term_spatial,
    ExpansionTerm, TermContribution,
};
pub use test_function::{gauss_derivative_1d, AxisFactor, Shape, TestFunction};
