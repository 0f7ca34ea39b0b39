//! Four-chain monotone coupling experiment: base and tilted chains from a
//! common start z, run alongside their stationary versions for T steps.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::bound::{coupling_bounds, CouplingBounds};
use crate::error::{invalid, rejected, Result};
use crate::glauber::{glauber_step_mut, make_tilt_with, monotone_coupled_step, CoupledQuadruple, GibbsMeasure, ShiftRule, TiltSpec};
use crate::lattice::{Distance, IncreasingFunction, Region, SpinConfig};
use crate::numeric::wilson_interval;
use crate::rng::{SeedStream, StreamRng};

pub struct CouplingSetup<'a, M> {
    pub mu: &'a M,
    pub g: IncreasingFunction,
    /// Defaults to 1/T when `None`.
    pub epsilon: Option<f64>,
    pub shift_rule: ShiftRule,
    pub lambda: &'a Region,
    pub t: u64,
    pub replicas: u64,
    /// Contraction coefficient used in the analytic bounds.
    pub alpha: f64,
    pub mu_lambda_complement: f64,
    pub z_candidates: u64,
    pub pilot_runs: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EventFrequency {
    pub count: u64,
    pub replicas: u64,
    pub frequency: f64,
    pub wilson_center: f64,
    pub wilson_halfwidth: f64,
    pub bound: f64,
    /// frequency ≤ bound + 2 Wilson half-widths.
    pub within_bound: bool,
}

impl EventFrequency {
    fn new(count: u64, replicas: u64, bound: f64) -> Self {
        let (c, hw) = wilson_interval(count, replicas);
        let frequency = count as f64 / replicas as f64;
        Self { count, replicas, frequency, wilson_center: c, wilson_halfwidth: hw, bound, within_bound: frequency <= bound + 2.0 * hw }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReplicaOutcome {
    pub replica: u64,
    /// X_T^z ≠ X_T.
    pub base_mismatch: bool,
    /// X̃_T^z ≠ X̃_T.
    pub tilted_mismatch: bool,
    /// X̃_T^z ≱ X_T^z.
    pub not_dominated: bool,
    /// Some chain started at z left Λ before T.
    pub exited_lambda: bool,
    /// Steps where X^z ≤ X̃^z held with both in Λ but failed afterwards.
    pub order_violations: u64,
    pub order_checks: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CouplingReport {
    pub base_mixes: EventFrequency,
    pub tilted_mixes: EventFrequency,
    pub domination: EventFrequency,
    pub bounds: CouplingBounds,
    pub epsilon: f64,
    pub shift_rule: ShiftRule,
    pub z: SpinConfig,
    pub z_escape_estimate: f64,
    pub t: u64,
    pub alpha: f64,
    pub mu_lambda_complement: f64,
    pub diameter: Distance,
    pub order_checks: u64,
    pub order_violations: u64,
    #[serde(skip)]
    pub outcomes: Vec<ReplicaOutcome>,
}

impl CouplingReport {
    pub fn all_within_bounds(&self) -> bool {
        self.base_mixes.within_bound && self.tilted_mixes.within_bound && self.domination.within_bound
    }

    /// CSV: replica,base_mismatch,tilted_mismatch,not_dominated,exited_lambda,order_violations
    pub fn outcomes_csv(&self) -> String {
        let mut s = String::from("replica,base_mismatch,tilted_mismatch,not_dominated,exited_lambda,order_violations\n");
        for o in &self.outcomes {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                o.replica, o.base_mismatch as u8, o.tilted_mismatch as u8, o.not_dominated as u8, o.exited_lambda as u8, o.order_violations
            ));
        }
        s
    }
}

/// Exact draw from the tilted measure by rejection from exact μ-draws.
fn tilted_draw<M: GibbsMeasure, S: Fn(&mut StreamRng) -> SpinConfig>(tilt: &TiltSpec<M>, stationary: &S, rng: &mut StreamRng) -> SpinConfig {
    let cap = tilt.shift + tilt.g.sup_norm_bound;
    loop {
        let x = stationary(rng);
        if rng.random::<f64>() * cap < tilt.g_tilde(&x) {
            return x;
        }
    }
}

/// Runs the coupling experiment. `stationary` must return exact draws from μ.
pub fn coupling_experiment<M, S>(setup: &CouplingSetup<'_, M>, stationary: S, stream: &SeedStream) -> Result<CouplingReport>
where
    M: GibbsMeasure + Clone,
    S: Fn(&mut StreamRng) -> SpinConfig + Sync,
{
    if setup.t == 0 || setup.replicas == 0 {
        return invalid("T and replicas must be positive");
    }
    let epsilon = setup.epsilon.unwrap_or(1.0 / setup.t as f64);
    let tilt = make_tilt_with(setup.mu.clone(), setup.g.clone(), epsilon, setup.shift_rule)?;
    let diameter = match setup.lambda.certified_diameter() {
        Some(d) => d,
        None => return invalid(format!("region '{}' needs a certified diameter", setup.lambda.label())),
    };
    let bounds = coupling_bounds(setup.alpha, setup.t, setup.mu.alphabet_size(), epsilon, setup.mu_lambda_complement, diameter);
    let (z, escape) = select_start(setup, &stationary, &stream.child("z-selection"))?;
    let run_stream = stream.child("replicas");
    let outcomes: Vec<Result<ReplicaOutcome>> = (0..setup.replicas)
        .into_par_iter()
        .map(|r| {
            let mut rng = run_stream.replica(r);
            let x0 = stationary(&mut rng);
            let xt0 = tilted_draw(&tilt, &stationary, &mut rng);
            let mut q = CoupledQuadruple::new(x0, xt0, z.clone())?;
            let mut out = ReplicaOutcome {
                replica: r,
                base_mismatch: false,
                tilted_mismatch: false,
                not_dominated: false,
                exited_lambda: false,
                order_violations: 0,
                order_checks: 0,
            };
            for _ in 0..setup.t {
                let inside = setup.lambda.contains(&q.x_from_z) && setup.lambda.contains(&q.x_tilted_from_z);
                let ordered = q.x_from_z.leq(&q.x_tilted_from_z);
                if !inside {
                    out.exited_lambda = true;
                }
                monotone_coupled_step(&mut q, setup.mu, &tilt, &mut rng)?;
                if inside && ordered {
                    out.order_checks += 1;
                    if !q.x_from_z.leq(&q.x_tilted_from_z) {
                        out.order_violations += 1;
                    }
                }
            }
            out.base_mismatch = q.x_from_z != q.x_stationary;
            out.tilted_mismatch = q.x_tilted_from_z != q.x_tilted_stationary;
            out.not_dominated = !q.x_from_z.leq(&q.x_tilted_from_z);
            Ok(out)
        })
        .collect();
    let outcomes: Vec<ReplicaOutcome> = outcomes.into_iter().collect::<Result<_>>()?;
    let count = |f: fn(&ReplicaOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count() as u64;
    let n = setup.replicas;
    Ok(CouplingReport {
        base_mixes: EventFrequency::new(count(|o| o.base_mismatch), n, bounds.base_mixes),
        tilted_mixes: EventFrequency::new(count(|o| o.tilted_mismatch), n, bounds.tilted_mixes),
        domination: EventFrequency::new(count(|o| o.not_dominated), n, bounds.domination),
        bounds,
        epsilon,
        shift_rule: setup.shift_rule,
        z,
        z_escape_estimate: escape,
        t: setup.t,
        alpha: setup.alpha,
        mu_lambda_complement: setup.mu_lambda_complement,
        diameter,
        order_checks: outcomes.iter().map(|o| o.order_checks).sum(),
        order_violations: outcomes.iter().map(|o| o.order_violations).sum(),
        outcomes,
    })
}

/// First stationary candidate in Λ whose pilot escape frequency is at most
/// 2·T·μ(Λ^c).
fn select_start<M: GibbsMeasure, S: Fn(&mut StreamRng) -> SpinConfig>(
    setup: &CouplingSetup<'_, M>,
    stationary: &S,
    stream: &SeedStream,
) -> Result<(SpinConfig, f64)> {
    let threshold = 2.0 * setup.t as f64 * setup.mu_lambda_complement;
    let mut rng = stream.replica(0);
    let mut best = f64::INFINITY;
    let mut tried = 0;
    for _ in 0..setup.z_candidates.max(1) * 100 {
        if tried >= setup.z_candidates.max(1) {
            break;
        }
        let z = stationary(&mut rng);
        if !setup.lambda.contains(&z) {
            continue;
        }
        tried += 1;
        if threshold >= 1.0 || setup.pilot_runs == 0 {
            return Ok((z, f64::NAN));
        }
        let mut escapes = 0u64;
        for _ in 0..setup.pilot_runs {
            let mut x = z.clone();
            for _ in 0..setup.t {
                glauber_step_mut(setup.mu, &mut x, &mut rng)?;
                if !setup.lambda.contains(&x) {
                    escapes += 1;
                    break;
                }
            }
        }
        let freq = escapes as f64 / setup.pilot_runs as f64;
        best = best.min(freq);
        if freq <= threshold {
            return Ok((z, freq));
        }
    }
    rejected(format!(
        "no admissible start z in '{}': {tried} candidates tried, best pilot escape frequency {best}, threshold {threshold}",
        setup.lambda.label()
    ))
}
