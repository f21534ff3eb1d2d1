//! Shared numerics.

mod format;
mod fourier;
mod multi_index;
mod quadrature;
mod rng;
mod special;

pub use format::round_significant;
pub use fourier::{dft_forward, dft_inverse, GridField, GridGeometry, Spectrum};
pub use multi_index::{multi_indices_of_order, multi_indices_up_to, MultiIndex, MAX_ORDER};
pub use quadrature::{
    integrate_interval, integrate_piecewise, integrate_radial, integrate_tensor, QuadratureSpec,
    MAX_TENSOR_DIM,
};
pub use rng::{replicate_seed, seeded_rng, SimRng};
pub use special::{
    binomial, dirichlet_even_moment, factorial, gamma_half, sphere_abs_first_moment, sphere_area,
    surface_constant, ZETA3,
};
