//! Simulation and verification toolkit for approximate FKG inequalities in
//! metastable phases of mean-field spin systems.
//!
//! The crate covers generalized Curie–Weiss models ([`gcwm`]) and
//! exponential random graph models ([`ergm`]), their phase-conditioned
//! Glauber dynamics and four-chain monotone coupling ([`glauber`]), exact
//! small-instance FKG oracles ([`fkg`]) and covariance / normal
//! approximation diagnostics ([`stats`]).

pub mod ergm;
pub mod error;
pub mod fkg;
pub mod gcwm;
pub mod glauber;
pub mod lattice;
pub mod numeric;
pub mod rate;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
