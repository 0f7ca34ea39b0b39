use rayon::prelude::*;
use serde::Serialize;

use crate::ergm::{edge_count_of, Conditioning, ErgmSpec, GraphConfig, PhaseChain};
use crate::error::{invalid, rejected, Result};
use crate::rng::SeedStream;

/// Integrated autocorrelation time τ = ½ + Σ_{t≥1} ρ_t by Geyer's initial
/// positive sequence (τ = ½ for an uncorrelated series).
pub fn integrated_autocorrelation_time(series: &[f64]) -> Result<f64> {
    let m = series.len();
    if m < 10 {
        return invalid(format!("autocorrelation needs at least 10 points, got {m}"));
    }
    let mean = series.iter().sum::<f64>() / m as f64;
    let c: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let var = c.iter().map(|x| x * x).sum::<f64>() / m as f64;
    if var == 0.0 {
        return Ok(0.5);
    }
    let rho = |t: usize| c[..m - t].iter().zip(&c[t..]).map(|(a, b)| a * b).sum::<f64>() / (m as f64 * var);
    let mut tau = -0.5;
    let mut k = 0;
    while 2 * k + 1 < m {
        let g = rho(2 * k) + rho(2 * k + 1);
        if g <= 0.0 {
            break;
        }
        tau += g;
        k += 1;
    }
    Ok(tau.max(0.5))
}

/// Sweep counts for one thinned collection run. A sweep is C(n,2) steps.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChainPlan {
    pub chains: usize,
    pub burn_in_sweeps: u64,
    pub pilot_sweeps: u64,
    /// Total retained states over all chains.
    pub samples: usize,
}

impl Default for ChainPlan {
    fn default() -> Self {
        Self { chains: 8, burn_in_sweeps: 200, pilot_sweeps: 2000, samples: 2000 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThinnedChain {
    #[serde(skip)]
    pub states: Vec<GraphConfig>,
    pub n: usize,
    pub sweep_steps: u64,
    /// Pilot τ̂ of the per-sweep edge count, in sweeps (largest over chains).
    pub tau_pilot: f64,
    /// Sweeps between retained states.
    pub thin: u64,
    /// τ̂ of the retained series, averaged over chains.
    pub tau_retained: f64,
    pub effective_samples: f64,
    pub rejections: u64,
    pub steps: u64,
    pub approximate: bool,
    pub conditioning: String,
}

/// Runs `plan.chains` independent conditioned chains from Erdős–Rényi(p_start)
/// warm starts: burn-in, a pilot run to measure τ̂, then collection every
/// ⌈2τ̂⌉ sweeps. Chain c uses replica stream c.
pub fn thinned_phase_chain(
    spec: &ErgmSpec,
    conditioning: &Conditioning,
    p_start: f64,
    plan: &ChainPlan,
    stream: &SeedStream,
) -> Result<ThinnedChain> {
    if plan.chains == 0 || plan.samples < plan.chains {
        return invalid("need at least one chain and one sample per chain");
    }
    let sweep = edge_count_of(spec.n) as u64;
    let pilots: Vec<_> = (0..plan.chains)
        .into_par_iter()
        .map(|c| -> Result<_> {
            let mut rng = stream.replica(c as u64);
            let mut chain = PhaseChain::warm_start(spec, conditioning.clone(), p_start, &mut rng)?;
            chain.run(plan.burn_in_sweeps * sweep, &mut rng, |_, _| {});
            let mut series = Vec::with_capacity(plan.pilot_sweeps as usize);
            for _ in 0..plan.pilot_sweeps {
                chain.run(sweep, &mut rng, |_, _| {});
                series.push(chain.graph().edge_count() as f64);
            }
            let tau = integrated_autocorrelation_time(&series)?;
            Ok((chain, rng, tau))
        })
        .collect::<Result<Vec<_>>>()?;
    let tau_pilot = pilots.iter().map(|p| p.2).fold(0.5, f64::max);
    let thin = (2.0 * tau_pilot).ceil().max(1.0) as u64;
    let per_chain = plan.samples.div_ceil(plan.chains);
    let collected: Vec<_> = pilots
        .into_par_iter()
        .map(|(mut chain, mut rng, _)| -> Result<_> {
            let mut states = Vec::with_capacity(per_chain);
            for _ in 0..per_chain {
                chain.run(thin * sweep, &mut rng, |_, _| {});
                states.push(chain.graph().clone());
            }
            let series: Vec<f64> = states.iter().map(|g| g.edge_count() as f64).collect();
            let tau = if series.len() >= 10 { integrated_autocorrelation_time(&series)? } else { 0.5 };
            Ok((states, tau, chain.rejections(), chain.steps()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut states = Vec::with_capacity(per_chain * plan.chains);
    let mut ess = 0.0;
    let mut tau_sum = 0.0;
    let (mut rejections, mut steps) = (0, 0);
    for (s, tau, r, st) in collected {
        ess += s.len() as f64 / (2.0 * tau);
        tau_sum += tau;
        rejections += r;
        steps += st;
        states.extend(s);
    }
    if states.iter().any(|g| !conditioning.contains(g)) {
        return rejected("a retained state left the conditioning region");
    }
    Ok(ThinnedChain {
        states,
        n: spec.n,
        sweep_steps: sweep,
        tau_pilot,
        thin,
        tau_retained: tau_sum / plan.chains as f64,
        effective_samples: ess,
        rejections,
        steps,
        approximate: conditioning.is_approximate(),
        conditioning: conditioning.label(),
    })
}
