use rand::Rng;

use super::measure::GibbsMeasure;
use super::{conditional_into, inverse_cdf};
use crate::error::{invalid, Result};
use crate::lattice::SpinConfig;

/// The four chains of the monotone coupling: stationary μ-chain, stationary
/// tilted chain, and μ- and tilted chains started from a common point z.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledQuadruple {
    pub x_stationary: SpinConfig,
    pub x_tilted_stationary: SpinConfig,
    pub x_from_z: SpinConfig,
    pub x_tilted_from_z: SpinConfig,
    pub t: u64,
}

/// The shared randomness consumed by one coupled step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledMove {
    pub site: usize,
    pub u: f64,
}

impl CoupledQuadruple {
    pub fn new(x_stationary: SpinConfig, x_tilted_stationary: SpinConfig, z: SpinConfig) -> Result<Self> {
        if !x_stationary.same_shape(&x_tilted_stationary) || !x_stationary.same_shape(&z) {
            return invalid("coupled chains must share dimension and alphabet");
        }
        Ok(Self { x_stationary, x_tilted_stationary, x_from_z: z.clone(), x_tilted_from_z: z, t: 0 })
    }

    /// Apply a given (site, U) to all four chains.
    pub fn apply<M: GibbsMeasure + ?Sized, T: GibbsMeasure + ?Sized>(&mut self, mu: &M, mu_tilde: &T, mv: CoupledMove) -> Result<()> {
        let a = mu.alphabet_size() as usize;
        let mut lw = vec![0.0; a];
        let mut pr = vec![0.0; a];
        let i = mv.site;
        for (chain, tilted) in [
            (&mut self.x_stationary, false),
            (&mut self.x_tilted_stationary, true),
            (&mut self.x_from_z, false),
            (&mut self.x_tilted_from_z, true),
        ] {
            if tilted {
                conditional_into(mu_tilde, chain, i, &mut lw, &mut pr)?;
            } else {
                conditional_into(mu, chain, i, &mut lw, &mut pr)?;
            }
            chain.set(i, inverse_cdf(&pr, mv.u));
        }
        self.t += 1;
        Ok(())
    }
}

/// One step of the monotone coupling: a single coordinate and a single
/// uniform draw drive all four chains through their inverse conditional CDFs.
pub fn monotone_coupled_step<M: GibbsMeasure + ?Sized, T: GibbsMeasure + ?Sized, R: Rng + ?Sized>(
    q: &mut CoupledQuadruple,
    mu: &M,
    mu_tilde: &T,
    rng: &mut R,
) -> Result<CoupledMove> {
    let site = rng.random_range(0..q.x_stationary.dimension());
    let u: f64 = rng.random();
    let mv = CoupledMove { site, u };
    q.apply(mu, mu_tilde, mv)?;
    Ok(mv)
}
