//! Set partitions, truncated correlations, the `Q_m` reduction and cumulant identities for
//! discrete processes and determinantal kernels.

mod correlations;
mod discrete;
mod dpp;
mod moments;
mod partitions;
mod reduction;
mod scalar;

pub use correlations::{
    moebius_expand, multilinear_cumulant, truncate_correlations, CorrelationTable,
    MAX_CUMULANT_ORDER,
};
pub use discrete::{
    cumulant_linear_statistic_discrete, indicator_cumulant, verify_integral_identity_discrete,
    DiscreteCumulantReport, DiscreteProcess, IntegralIdentityReport, MAX_DISCRETE_ORDER,
    MAX_GROUND_SIZE,
};
pub use dpp::{
    dpp_truncated_correlation, dpp_truncated_table, integral_identity_defect_dpp,
    random_projection_kernel, verify_integral_identity_projection, DppIdentityReport, KernelMatrix,
    MAX_DPP_ORDER, PROJECTION_TOLERANCE,
};
pub use moments::{
    ginibre_higher_density, ginibre_kernel, ginibre_truncated_correlation, i_m_moment,
    HigherDensity, MAX_IM_ORDER,
};
pub use partitions::{
    all_maps, set_partitions, SetPartition, TruncationMap, MAX_MAP_SIZE, MAX_PARTITION_SIZE,
};
pub use reduction::{q_m_raw, q_m_reduced, reduction_coefficient};
pub use scalar::{ratio, rational_from_f64, Scalar};
