//! Monte Carlo sweeps and the statistics applied to them.

mod phase;
mod regress;
mod stats;
mod sweep;

pub use phase::{phase_classify, phase_classify_rational, PhaseRegion, PhaseResult};
pub use regress::{
    attachment_frequencies, attachment_prob_estimate, beta1_per_node, common_neighbor_growth, log_grid,
    scaling_regression, GridPoint, RateConfig, RateEstimate,
};
pub use stats::{
    ccdf, fit_loglog, fit_loglog_tail, ks_evolution, ks_two_sample, mean_se, pareto_sample, FitResult, KsEvolution,
    KsPoint, TailPolicy,
};
pub use sweep::{
    betti_samples, read_records, record_points, run_sweep, run_trial, snapshot_samples, summarize, write_summary_csv,
    PointSummary, Snapshot, SweepPoint, SweepSpec, TrialRecord, TrialStatus,
};
