//! FKG diagnostics: the lattice condition, exact and sampled defects, the
//! general covariance bound and the monotone coupling experiment.

mod bound;
mod coupling;
mod defect;
mod lattice_check;

pub use bound::{coupling_bounds, theorem_bound, BoundInputs, CouplingBounds};
pub use coupling::{coupling_experiment, CouplingReport, CouplingSetup, EventFrequency, ReplicaOutcome};
pub use defect::{exact_defect, exact_defect_table, sampled_defect, CovSource, DefectMethod, DefectReport, ThresholdFunction};
pub use lattice_check::{check_lattice_condition, check_lattice_table, LatticeMode, LatticeReport, LATTICE_TOL};
