//! Linear statistics on samples, k-statistics, variance curves with jackknife intervals and
//! log-log scaling fits.

mod fit;
mod kstat;
mod pair;
mod series;
mod statistic;

pub use fit::{fit_power_law, fit_scaling, ScalingFit, BOOTSTRAP_RESAMPLES};
pub use kstat::{k_statistics, standardized_cumulants};
pub use pair::{pair_correlation_binned, PairCorrelationBin};
pub use series::{
    jackknife_variance, summarize, summary_from_csv, summary_to_csv, variance_curve, SeriesEntry,
    StatisticSeries, SummaryRow, CSV_DIGITS,
};
pub use statistic::linear_statistic;
