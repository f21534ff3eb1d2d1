//! Covariance asymptotics of linear statistics of stationary random measures.
//!
//! The crate is organised by task:
//!
//! * [`numerics`]: multi-indices, adaptive quadrature, grids and the discrete Fourier transform.
//! * [`kernels`]: truncated pair-correlation kernels and their moments.
//! * [`expansion`]: the `Q_{2p}` covariance series, variance bounds and asymptotic prediction.
//! * [`indicator`]: surface-order limits for indicator statistics of smooth planar domains.
//! * [`cumulants`]: set partitions, truncated correlations and cumulant identities.
//! * [`simulate`]: seeded samplers for the example processes.
//! * [`estimate`]: linear statistics on samples, k-statistics and scaling fits.
//!
//! Fourier transforms use the convention `f̂(t) = ∫ f(x) e^{i<x,t>} dx`.

pub mod cumulants;
pub mod error;
pub mod estimate;
pub mod expansion;
pub mod indicator;
pub mod kernels;
pub mod numerics;
pub mod simulate;

pub use error::{Error, Result};
