//! Seeded samplers: Poisson, finite Ginibre, perturbed lattices, the wavelet convolution
//! measure and zeros of the planar Gaussian entire function. Every sampler is a pure
//! function of its parameters and seed.

mod convolution;
mod gef;
mod ginibre;
mod lattice;
mod poisson;
mod process;
mod sample;

pub use convolution::{
    sample_convolution_measure, BaseField, ConvolutionGrid, MAX_CELLS_PER_UNIT,
    MAX_CONVOLUTION_GRID_POINTS,
};
pub use gef::{
    gef_truncation_degree, sample_gef_zeros, sample_gef_zeros_with_constant, MAX_GEF_RADIUS,
};
pub use ginibre::{sample_ginibre, GINIBRE_EDGE_MARGIN, MAX_GINIBRE_SIZE, MIN_GINIBRE_SIZE};
pub use lattice::sample_perturbed_lattice;
pub use poisson::sample_poisson;
pub use process::{ProcessSpec, DEFAULT_CELLS_PER_UNIT, PROCESS_NAMES};
pub(crate) use sample::csv_error;
pub use sample::{MeasureSample, PointSample, Sample, Window};
