//! Covariance bound checks, normal approximation distances, MCMC thinning,
//! CLT diagnostics and the ERGM moment probes.

mod clt;
mod cov_bound;
mod gof;
mod mcmc;
mod normal;
mod probes;

pub use clt::{clt_report_ergm, clt_report_gcwm, pearson, CltReport, ErgmCltConfig, ErgmCltReport, MIN_EFFECTIVE_SAMPLES};
pub use cov_bound::{cov_bound_check, sample_cov, CovBoundCheck, CovMode};
pub use gof::{chi_square_gof, ChiSquareTest};
pub use mcmc::{integrated_autocorrelation_time, thinned_phase_chain, ChainPlan, ThinnedChain};
pub use normal::{normal_distance_law, normal_distance_samples, NormalDistance};
pub use probes::{
    log_log_slope, marginal_probe, multilinear_deviation, multilinear_probe, EdgeSelection, MarginalPoint, MultilinearProbe,
    ProbePoint,
};
