//! Phase-conditioned Glauber dynamics on graphs. Moves that would leave the
//! conditioning region are rejected and the chain stays put; for binary
//! spins this is the same kernel as resampling from the support-restricted
//! conditional law.

use rand::Rng;
use serde::Serialize;

use super::cutnorm::{CutBall, CutTracker};
use super::graph::{edge_endpoints, GraphConfig};
use super::model::{Conditioning, ErgmSpec};
use crate::error::{invalid, rejected, Result};
use crate::numeric::phi;

/// One Glauber step: the edge index drawn, the value the unconditioned
/// kernel proposed, and whether the state changed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: u64,
    pub edge: usize,
    pub proposed: u8,
    /// False when the proposed value would leave the conditioning region.
    pub accepted: bool,
    pub changed: bool,
}

pub const WARM_START_ATTEMPTS: usize = 100;

pub struct PhaseChain<'a> {
    spec: &'a ErgmSpec,
    conditioning: Conditioning,
    graph: GraphConfig,
    tracker: Option<(CutTracker, f64)>,
    endpoints: Vec<(usize, usize)>,
    steps: u64,
    rejections: u64,
}

impl<'a> PhaseChain<'a> {
    pub fn new(spec: &'a ErgmSpec, conditioning: Conditioning, start: GraphConfig) -> Result<Self> {
        if start.n() != spec.n {
            return invalid(format!("start graph has {} vertices, spec has n={}", start.n(), spec.n));
        }
        if !conditioning.contains(&start) {
            return rejected(format!("start graph lies outside '{}'", conditioning.label()));
        }
        let tracker = match &conditioning {
            Conditioning::Ball(b) => Some((CutTracker::new(&start, b.p_star, b.exact_mode_max_n)?, b.eta)),
            _ => None,
        };
        Ok(Self { spec, conditioning, graph: start, tracker, endpoints: edge_endpoints(spec.n), steps: 0, rejections: 0 })
    }

    /// Erdős–Rényi(n, p_start) warm start, redrawn until it lies in the
    /// conditioning region.
    pub fn warm_start<R: Rng + ?Sized>(spec: &'a ErgmSpec, conditioning: Conditioning, p_start: f64, rng: &mut R) -> Result<Self> {
        for _ in 0..WARM_START_ATTEMPTS {
            let g = GraphConfig::erdos_renyi(spec.n, p_start, rng);
            if conditioning.contains(&g) {
                return Self::new(spec, conditioning, g);
            }
        }
        rejected(format!(
            "warm start outside '{}' after {WARM_START_ATTEMPTS} attempts; the radius is too small",
            conditioning.label()
        ))
    }

    pub fn graph(&self) -> &GraphConfig {
        &self.graph
    }

    pub fn conditioning(&self) -> &Conditioning {
        &self.conditioning
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn rejections(&self) -> u64 {
        self.rejections
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> StepRecord {
        let e = rng.random_range(0..self.endpoints.len());
        let u: f64 = rng.random();
        let (a, b) = self.endpoints[e];
        let p1 = phi(self.spec.site_log_odds(&self.graph, a, b));
        let proposed = (u >= 1.0 - p1) as u8;
        let old = self.graph.has_edge(a, b) as u8;
        self.steps += 1;
        let mut rec = StepRecord { step: self.steps, edge: e, proposed, accepted: true, changed: false };
        if proposed == old {
            return rec;
        }
        let inside = match &mut self.tracker {
            Some((t, eta)) => {
                t.flip(a, b);
                let ok = t.value() <= *eta;
                if !ok {
                    t.flip(a, b);
                }
                ok
            }
            None => {
                self.graph.set_edge(a, b, proposed == 1);
                let ok = self.conditioning.contains(&self.graph);
                self.graph.set_edge(a, b, old == 1);
                ok
            }
        };
        if inside {
            self.graph.set_edge(a, b, proposed == 1);
            rec.changed = true;
        } else {
            self.rejections += 1;
            rec.accepted = false;
        }
        rec
    }

    /// Runs `steps` steps, calling `observer` after each.
    pub fn run<R: Rng + ?Sized>(&mut self, steps: u64, rng: &mut R, mut observer: impl FnMut(&GraphConfig, &StepRecord)) {
        for _ in 0..steps {
            let rec = self.step(rng);
            observer(&self.graph, &rec);
        }
    }
}

/// Output of [`phase_sampler`].
#[derive(Debug, Clone, Serialize)]
pub struct PhaseRun {
    /// States after every `record_every` steps.
    #[serde(skip)]
    pub states: Vec<GraphConfig>,
    pub steps: u64,
    pub rejections: u64,
    pub approximate: bool,
    pub conditioning: String,
}

/// Conditioned Glauber dynamics for the phase around p*: warm start from
/// G(n, p*), exact cut-ball conditioning for n within the ball's exact-mode
/// limit and the density-band proxy above it.
pub fn phase_sampler<R: Rng + ?Sized>(
    spec: &ErgmSpec,
    p_star: f64,
    ball: &CutBall,
    steps: u64,
    record_every: u64,
    rng: &mut R,
) -> Result<PhaseRun> {
    let analysis = spec.rate_analysis(10_000, 1e-10)?;
    if analysis.phases.iter().all(|ph| (ph.p_star - p_star).abs() > 1e-6) {
        return rejected(format!("p*={p_star} is not a non-critical maximizer of the rate function"));
    }
    if record_every == 0 {
        return invalid("record_every must be positive");
    }
    let conditioning = Conditioning::for_ball(CutBall { p_star, ..*ball }, spec.n);
    let approximate = conditioning.is_approximate();
    let label = conditioning.label();
    let mut chain = PhaseChain::warm_start(spec, conditioning, p_star, rng)?;
    let mut states = Vec::with_capacity((steps / record_every) as usize);
    chain.run(steps, rng, |g, rec| {
        if rec.step % record_every == 0 {
            states.push(g.clone());
        }
    });
    Ok(PhaseRun { states, steps, rejections: chain.rejections(), approximate, conditioning: label })
}

/// CSV of per-step records: step,flipped_edge,accepted.
pub fn trajectory_csv(records: &[StepRecord]) -> String {
    let mut s = String::from("step,flipped_edge,accepted\n");
    for r in records {
        let edge = if r.changed { r.edge.to_string() } else { String::new() };
        s.push_str(&format!("{},{},{}\n", r.step, edge, r.accepted as u8));
    }
    s
}
