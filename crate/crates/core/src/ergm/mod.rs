//! Exponential random graph models on n labelled vertices with potential
//! edge set of size C(n,2).

pub mod catalog;
pub mod cutnorm;
pub mod gamma;
pub mod graph;
pub mod hom;
pub mod local_fkg;
pub mod model;
pub mod sampler;

pub use catalog::{canonical_form, probe_family};
pub use cutnorm::{check_balls_disjoint, cut_norm_to_constant, CutBall, CutNormBound, CutTracker, DEFAULT_EXACT_MAX_N};
pub use gamma::{circulant, circulant_gamma_member, gamma_membership, GammaReport, GoodSet};
pub use graph::{edge_count_of, edge_endpoints, edge_index, GraphConfig};
pub use hom::{count_homomorphisms, edge_derivative, hom_density, r_statistic, SmallGraph};
pub use local_fkg::{local_fkg_witness_ergm, superadditivity_gap};
pub use model::{edge_count_law, Conditioning, ErgmMeasure, ErgmPhase, ErgmRateAnalysis, ErgmSpec};
pub use sampler::{phase_sampler, trajectory_csv, PhaseChain, PhaseRun, StepRecord};
