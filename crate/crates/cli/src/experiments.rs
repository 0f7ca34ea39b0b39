//! One function per experiment kind. Each takes a resolved config and
//! returns the artifacts to write; none of them touch the filesystem.

use phasefkg::ergm::{
    circulant_gamma_member, hom_density, local_fkg_witness_ergm, phase_sampler, Conditioning, CutBall, ErgmMeasure, ErgmSpec, GoodSet,
    SmallGraph,
};
use phasefkg::fkg::{
    check_lattice_condition, coupling_experiment, exact_defect_table, sampled_defect, theorem_bound, BoundInputs, CouplingSetup, CovSource,
    DefectReport, LatticeMode, LatticeReport, LATTICE_TOL,
};
use phasefkg::gcwm::{
    exact_magnetization_law, local_fkg_witness, out_of_band_log_mass, GcwmMeasure, GcwmParams, LocalFkgReport, PhaseBand, ScanMode,
};
use phasefkg::glauber::{estimate_contraction, ExactTable, GibbsMeasure, ShiftRule};
use phasefkg::lattice::{Distance, IncreasingFunction};
use phasefkg::rate::RateAnalysis;
use phasefkg::rng::SeedStream;
use phasefkg::stats::{clt_report_ergm, clt_report_gcwm, log_log_slope, ChainPlan, ErgmCltConfig};
use phasefkg::Result;
use rand::Rng;
use serde_json::{json, Value};

use crate::config::*;
use crate::output::{Artifacts, Table};
use crate::validate::{ModelPlan, Resolved};

/// Exact defects enumerate up-sets, which is feasible up to this dimension.
const EXACT_DEFECT_MAX_DIM: usize = 5;
const RATE_PLOT_POINTS: usize = 400;

pub fn run_experiment(r: &Resolved) -> Result<Artifacts> {
    let stream = SeedStream::new(r.config.seed, r.config.kind.name());
    match r.config.kind {
        Kind::GcwmAnalyze => gcwm_analyze(r),
        Kind::GcwmFkg => gcwm_fkg(r, &stream),
        Kind::GcwmClt => gcwm_clt(r),
        Kind::ErgmAnalyze => ergm_analyze(r),
        Kind::ErgmSample => ergm_sample(r, &stream),
        Kind::ErgmFkg => ergm_fkg(r, &stream),
        Kind::ErgmClt => ergm_clt(r, &stream),
        Kind::Defect => defect(r, &stream),
        Kind::Coupling => coupling(r, &stream),
        Kind::BoundEval => bound_eval(r),
    }
}

fn gcwm(r: &Resolved) -> (&GcwmParams, &RateAnalysis) {
    match &r.model {
        ModelPlan::Gcwm { params, analysis } | ModelPlan::GcwmGrid { params, analysis } => (params, analysis),
        _ => unreachable!("kind resolved to a GCWM plan"),
    }
}

fn ergm(r: &Resolved) -> (&ErgmSpec, &phasefkg::ergm::ErgmRateAnalysis) {
    match &r.model {
        ModelPlan::Ergm { spec, analysis } => (spec, analysis),
        _ => unreachable!("kind resolved to an ERGM plan"),
    }
}

fn selected_band(r: &Resolved) -> PhaseBand {
    r.bands()[r.run().phase.unwrap_or(0)]
}

fn ball(r: &Resolved, p_star: f64, eta: f64) -> CutBall {
    let mut b = CutBall::new(p_star, eta).expect("validated ball");
    if let Some(m) = r.run().exact_mode_max_n {
        b.exact_mode_max_n = m;
    }
    b
}

fn stationary_table(analysis: &RateAnalysis) -> Table {
    let mut t = Table::new("stationary_points", &["m", "rate", "derivative", "fixed_point_residual", "map_derivative", "kind", "critical"]);
    for s in &analysis.stationary_points {
        t.push(vec![
            s.m.into(),
            s.l.into(),
            s.dl.into(),
            s.fixed_point_residual.into(),
            s.map_derivative.into(),
            format!("{:?}", s.kind).into(),
            s.critical.into(),
        ]);
    }
    t
}

fn rate_plot(f: impl Fn(f64) -> Result<f64>) -> Result<Table> {
    let mut t = Table::new("rate_function", &["m", "rate"]);
    for i in 1..RATE_PLOT_POINTS {
        let m = i as f64 / RATE_PLOT_POINTS as f64;
        t.push(vec![m.into(), f(m)?.into()]);
    }
    Ok(t)
}

fn gcwm_analyze(r: &Resolved) -> Result<Artifacts> {
    let (params, analysis) = gcwm(r);
    let run = r.run();
    let mut art = Artifacts::default();
    let bands = r.bands();
    let lemmas = analysis
        .strictly_concave_maximizers
        .iter()
        .map(|&m| params.check_lemma_equiv(m, run.lemma_tol.unwrap()))
        .collect::<Result<Vec<_>>>()?;
    art.set("global_maximizers", &analysis.global_maximizers);
    art.set("strictly_concave_maximizers", &analysis.strictly_concave_maximizers);
    art.set("critical_excluded", &analysis.critical_excluded);
    art.set("max_rate", analysis.max_value);
    art.set("lemma_checks", &lemmas);
    art.set("lemma_agree", lemmas.iter().all(|l| l.agree));
    art.set("bands", &bands);
    art.set(
        "mean_field_variance",
        analysis.strictly_concave_maximizers.iter().map(|&m| params.mean_field_variance(m)).collect::<Vec<_>>(),
    );
    art.set("out_of_band_log_mass", out_of_band_log_mass(params, &bands)?);
    let mut decay = Table::new("out_of_band_mass", &["n", "log_mass", "rate"]);
    for &n in run.n_grid.as_deref().unwrap_or_default() {
        let lm = out_of_band_log_mass(&params.with_n(n), &bands)?;
        decay.push(vec![n.into(), lm.into(), (-lm / n as f64).into()]);
    }
    art.data.push(stationary_table(analysis));
    art.data.push(decay);
    art.plots.push(rate_plot(|m| params.rate_function(m).map(|v| v.0))?);
    Ok(art)
}

fn lattice_mode(dim: usize, scan: Scan, pairs: u64) -> LatticeMode {
    if scan == Scan::Exhaustive && dim <= 12 {
        LatticeMode::Exhaustive
    } else {
        LatticeMode::Sampled { per_stratum: pairs.div_ceil(dim.max(1) as u64).max(1) }
    }
}

fn lattice_row(t: &mut Table, label: &str, rep: &LatticeReport) {
    let w = rep.witness.as_ref().map(|(x, y)| format!("{x} {y}")).unwrap_or_default();
    t.push(vec![label.into(), rep.min_log_ratio.into(), rep.holds().into(), rep.pairs_checked.into(), rep.exhaustive.into(), w.into()]);
}

/// JSON number, or "inf" / "-inf" / "nan" where JSON has no number.
fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn lattice_json(rep: &LatticeReport) -> Value {
    json!({
        "min_log_ratio": num(rep.min_log_ratio),
        "holds": rep.holds(),
        "pairs_checked": rep.pairs_checked,
        "exhaustive": rep.exhaustive,
        "witness": rep.witness.as_ref().map(|(x, y)| [x.to_string(), y.to_string()]),
    })
}

fn local_json(rep: &LocalFkgReport) -> Value {
    json!({
        "min_log_ratio": num(rep.min_log_ratio),
        "holds": rep.min_log_ratio >= LATTICE_TOL,
        "pairs_checked": rep.pairs_checked,
        "superadditivity_checked": rep.superadditivity_checked,
        "superadditivity_violations": rep.superadditivity_violations,
        "exhaustive": rep.exhaustive,
        "witness": rep.witness.as_ref().map(|(x, y)| [x.to_string(), y.to_string()]),
    })
}

const LATTICE_HEADER: [&str; 6] = ["measure", "min_log_ratio", "holds", "pairs_checked", "exhaustive", "witness"];

fn gcwm_fkg(r: &Resolved, stream: &SeedStream) -> Result<Artifacts> {
    let (params, _) = gcwm(r);
    let run = r.run();
    let n = params.n;
    let scan = run.scan.unwrap();
    let pairs = run.pairs.unwrap();
    let mut art = Artifacts::default();
    let mut lat = Table::new("lattice", &LATTICE_HEADER);
    let mut rng = stream.child("lattice").replica(0);
    let mode = lattice_mode(n, scan, pairs);
    let full = check_lattice_condition(&GcwmMeasure::new(params.clone(), None), mode, &mut rng)?;
    lattice_row(&mut lat, "unconditioned", &full);
    art.set("lattice_unconditioned", lattice_json(&full));
    let mut loc = Table::new(
        "local_fkg",
        &["m_star", "min_log_ratio", "holds", "pairs_checked", "superadditivity_checked", "superadditivity_violations", "exhaustive"],
    );
    let mut band_reports = Vec::new();
    let mut local_reports = Vec::new();
    for (i, band) in r.bands().iter().enumerate() {
        let mut rng = stream.child(&format!("band-{i}")).replica(0);
        let rep = check_lattice_condition(&GcwmMeasure::new(params.clone(), Some(*band)), mode, &mut rng)?;
        lattice_row(&mut lat, &format!("band m*={:.10}", band.m_star), &rep);
        band_reports.push(lattice_json(&rep));
        let smode = if scan == Scan::Exhaustive { ScanMode::Exhaustive } else { ScanMode::Sampled { pairs } };
        let lr = local_fkg_witness(params, band, smode, &mut rng)?;
        loc.push(vec![
            band.m_star.into(),
            lr.min_log_ratio.into(),
            (lr.min_log_ratio >= LATTICE_TOL).into(),
            lr.pairs_checked.into(),
            lr.superadditivity_checked.into(),
            lr.superadditivity_violations.into(),
            lr.exhaustive.into(),
        ]);
        local_reports.push(local_json(&lr));
    }
    art.set("lattice_band_conditioned", &band_reports);
    art.set("local_fkg_holds", local_reports.iter().all(|l| l["holds"] == true));
    art.set("local_fkg", &local_reports);
    art.data.push(lat);
    art.data.push(loc);
    Ok(art)
}

fn gcwm_clt(r: &Resolved) -> Result<Artifacts> {
    let (params, _) = gcwm(r);
    let band = selected_band(r);
    let grid = r.run().n_grid.clone().unwrap();
    let reports = clt_report_gcwm(params, &band, &grid)?;
    let mut t = Table::new("clt", &["n", "center", "scale", "d_k", "d_w", "variance", "reference_variance", "variance_ratio"]);
    for c in &reports {
        t.push(vec![
            c.n.into(),
            c.center.into(),
            c.scale.into(),
            c.d_k.into(),
            c.d_w.into(),
            c.variance.into(),
            c.reference_variance.into(),
            c.variance_ratio.into(),
        ]);
    }
    let mut art = Artifacts::default();
    art.set("band", band);
    art.set("reports", &reports);
    art.set("d_k_slope", log_log_slope(&reports.iter().map(|c| (c.n as f64, c.d_k)).collect::<Vec<_>>()));
    art.set("d_w_slope", log_log_slope(&reports.iter().map(|c| (c.n as f64, c.d_w)).collect::<Vec<_>>()));
    art.data.push(t);
    Ok(art)
}

fn ergm_analyze(r: &Resolved) -> Result<Artifacts> {
    let (spec, analysis) = ergm(r);
    let run = r.run();
    let mut art = Artifacts::default();
    let lemmas = analysis.phases.iter().map(|p| spec.check_lemma_equiv(p.p_star, run.lemma_tol.unwrap())).collect::<Result<Vec<_>>>()?;
    let mut members = Vec::new();
    let mut gamma = Table::new("gamma_members", &["p_star", "worst_deviation", "offending_probe", "member", "edges"]);
    for ph in &analysis.phases {
        let gs = GoodSet::new(ph.p_star, run.gamma_epsilon.unwrap(), run.gamma_v_max.unwrap())?;
        match circulant_gamma_member(&gs, spec.n) {
            Ok((g, rep)) => {
                let off = rep.offending.as_ref().map(|o| o.0.clone()).unwrap_or_default();
                gamma.push(vec![ph.p_star.into(), rep.worst_deviation.into(), off.into(), rep.member.into(), g.to_edge_list().into()]);
                members.push(json!({ "p_star": ph.p_star, "report": rep, "edge_count": g.edge_count() }));
            }
            Err(e) => members.push(json!({ "p_star": ph.p_star, "error": e.to_string() })),
        }
    }
    art.set("phases", &analysis.phases);
    art.set("global_maximizers", &analysis.analysis.global_maximizers);
    art.set("critical_excluded", &analysis.analysis.critical_excluded);
    art.set("lemma_checks", &lemmas);
    art.set("lemma_agree", lemmas.iter().all(|l| l.agree));
    art.set("gamma_members", members);
    art.data.push(stationary_table(&analysis.analysis));
    art.data.push(gamma);
    art.plots.push(rate_plot(|p| spec.rate_function(p).map(|v| v.0))?);
    Ok(art)
}

fn ergm_sample(r: &Resolved, stream: &SeedStream) -> Result<Artifacts> {
    let (spec, _) = ergm(r);
    let run = r.run();
    let p_star = r.phase_value();
    let b = ball(r, p_star, run.eta.unwrap());
    let mut rng = stream.replica(0);
    let out = phase_sampler(spec, p_star, &b, run.steps.unwrap(), run.record_every.unwrap(), &mut rng)?;
    let every = run.record_every.unwrap();
    let mut header = vec!["step".to_string(), "edge_density".to_string()];
    header.extend(spec.graphs.iter().map(|g| format!("t_{}", g.name)));
    let mut t = Table { name: "trace".into(), header, rows: Vec::new() };
    let mut mean = 0.0;
    for (i, g) in out.states.iter().enumerate() {
        let d = g.edge_count() as f64 / spec.dimension() as f64;
        mean += d;
        let mut row = vec![(i as u64 * every).into(), d.into()];
        row.extend(spec.graphs.iter().map(|h| hom_density(h, g).into()));
        t.push(row);
    }
    let mut art = Artifacts::default();
    if out.approximate {
        art.approximate(out.conditioning.clone());
    }
    art.set("p_star", p_star);
    art.set("conditioning", &out.conditioning);
    art.set("steps", out.steps);
    art.set("rejections", out.rejections);
    art.set("recorded", out.states.len());
    art.set("mean_edge_density", if out.states.is_empty() { f64::NAN } else { mean / out.states.len() as f64 });
    art.set("final_state_edges", out.states.last().map(|g| g.edges()));
    art.data.push(t);
    Ok(art)
}

fn ergm_fkg(r: &Resolved, stream: &SeedStream) -> Result<Artifacts> {
    let (spec, _) = ergm(r);
    let run = r.run();
    let p_star = r.phase_value();
    let scan = run.scan.unwrap();
    let pairs = run.pairs.unwrap();
    let support = Conditioning::for_ball(ball(r, p_star, run.eta.unwrap()), spec.n);
    let lambda = Conditioning::for_ball(ball(r, p_star, run.lambda_eta.unwrap()), spec.n);
    let mut art = Artifacts::default();
    for c in [&support, &lambda] {
        if c.is_approximate() {
            art.approximate(c.label());
        }
    }
    let mode = lattice_mode(spec.dimension(), scan, pairs);
    let mut lat = Table::new("lattice", &LATTICE_HEADER);
    let mut rng = stream.child("lattice").replica(0);
    let full = check_lattice_condition(&ErgmMeasure::new(spec.clone(), Conditioning::None), mode, &mut rng)?;
    lattice_row(&mut lat, "unconditioned", &full);
    let cond = check_lattice_condition(&ErgmMeasure::new(spec.clone(), support.clone()), mode, &mut rng)?;
    lattice_row(&mut lat, &support.label(), &cond);
    let smode = if scan == Scan::Exhaustive { ScanMode::Exhaustive } else { ScanMode::Sampled { pairs } };
    let mut rng = stream.child("local").replica(0);
    let local = local_fkg_witness_ergm(spec, &support, &lambda, smode, &mut rng)?;
    art.set("p_star", p_star);
    art.set("support", support.label());
    art.set("lambda", lambda.label());
    art.set("lattice_unconditioned", lattice_json(&full));
    art.set("lattice_conditioned", lattice_json(&cond));
    art.set("local_fkg", local_json(&local));
    art.set("local_fkg_holds", local.min_log_ratio >= LATTICE_TOL);
    art.set("lattice_conditioned_holds", cond.holds());
    art.data.push(lat);
    Ok(art)
}

fn ergm_clt(r: &Resolved, stream: &SeedStream) -> Result<Artifacts> {
    let (spec, _) = ergm(r);
    let run = r.run();
    let p_star = r.phase_value();
    let cfg = ErgmCltConfig {
        eta: run.eta.unwrap(),
        exact_mode_max_n: run.exact_mode_max_n.unwrap(),
        subgraph: SmallGraph::by_name(run.subgraph.as_deref().unwrap())?,
        plan: ChainPlan {
            chains: run.chains.unwrap(),
            burn_in_sweeps: run.burn_in_sweeps.unwrap(),
            pilot_sweeps: run.pilot_sweeps.unwrap(),
            samples: run.samples.unwrap(),
        },
    };
    let rep = clt_report_ergm(spec, p_star, &cfg, stream)?;
    let mut art = Artifacts::default();
    if rep.chain.approximate {
        art.approximate(rep.chain.conditioning.clone());
    }
    let mut t = Table::new("clt", &["statistic", "center", "scale", "d_k", "d_w", "variance", "reference_variance", "variance_ratio"]);
    for c in [&rep.edge, &rep.subgraph] {
        t.push(vec![
            c.statistic.clone().into(),
            c.center.into(),
            c.scale.into(),
            c.d_k.into(),
            c.d_w.into(),
            c.variance.into(),
            c.reference_variance.into(),
            c.variance_ratio.into(),
        ]);
    }
    let mut samples = Table::new("samples", &["index", "edges", "subgraph_density"]);
    for (i, g) in rep.chain.states.iter().enumerate() {
        samples.push(vec![i.into(), g.edge_count().into(), hom_density(&cfg.subgraph, g).into()]);
    }
    art.set("p_star", rep.p_star);
    art.set("sigma_n_squared", rep.sigma_n_squared);
    art.set("edge", &rep.edge);
    art.set("subgraph", &rep.subgraph);
    art.set("correlation", rep.correlation);
    art.set(
        "chain",
        json!({
            "conditioning": rep.chain.conditioning,
            "tau_pilot": rep.chain.tau_pilot,
            "thin": rep.chain.thin,
            "tau_retained": rep.chain.tau_retained,
            "effective_samples": rep.chain.effective_samples,
            "rejections": rep.chain.rejections,
            "steps": rep.chain.steps,
            "samples": rep.chain.states.len(),
        }),
    );
    art.data.push(t);
    art.data.push(samples);
    Ok(art)
}

fn defect_of(table: &ExactTable, method: DefectMethodChoice, pairs: u64, stream: &SeedStream) -> Result<DefectReport> {
    let dim = table.dimension();
    let exact = match method {
        DefectMethodChoice::Exact => true,
        DefectMethodChoice::Sampled => false,
        DefectMethodChoice::Auto => dim <= EXACT_DEFECT_MAX_DIM,
    };
    if exact {
        exact_defect_table(table)
    } else {
        sampled_defect(CovSource::Exact(table), dim, pairs, &mut stream.replica(0))
    }
}

fn defect(r: &Resolved, stream: &SeedStream) -> Result<Artifacts> {
    let run = r.run();
    let mut art = Artifacts::default();
    let (table, label) = match &r.model {
        ModelPlan::Gcwm { params, .. } => {
            let band = selected_band(r);
            let mu = GcwmMeasure::new(params.clone(), Some(band));
            art.set("band", band);
            (ExactTable::from_measure(&mu)?, mu.label())
        }
        ModelPlan::Ergm { spec, .. } => {
            let p_star = r.phase_value();
            let cond = Conditioning::for_ball(ball(r, p_star, run.eta.unwrap()), spec.n);
            if cond.is_approximate() {
                art.approximate(cond.label());
            }
            art.set("p_star", p_star);
            let mu = ErgmMeasure::new(spec.clone(), cond);
            (mu.exact_table()?, mu.label())
        }
        _ => unreachable!("defect resolves to a model"),
    };
    let rep = defect_of(&table, run.method.unwrap(), run.pairs.unwrap(), stream)?;
    if rep.lower_bound {
        art.approximate("sampled defect (lower bound)");
    }
    let mut t = Table::new("defect", &["measure", "delta", "raw_max", "clamped", "method", "sample_count", "std_error", "lower_bound"]);
    t.push(vec![
        label.clone().into(),
        rep.delta.into(),
        rep.raw_max.into(),
        rep.clamped.into(),
        format!("{:?}", rep.method).into(),
        rep.sample_count.into(),
        rep.std_error.into(),
        rep.lower_bound.into(),
    ]);
    art.set("measure", label);
    art.set("defect", &rep);
    art.data.push(t);
    Ok(art)
}

fn coupling(r: &Resolved, stream: &SeedStream) -> Result<Artifacts> {
    let (params, _) = gcwm(r);
    let run = r.run();
    let n = params.n;
    let band = selected_band(r);
    let mu = GcwmMeasure::new(params.clone(), Some(band));
    let law = exact_magnetization_law(params, Some(&band))?;
    let mu_c: f64 = (0..=n).filter(|&k| !band.inner_contains_level(k, n)).map(|k| law.prob(k)).sum();
    let lambda = band.inner_region(n);
    let mut art = Artifacts::default();
    let alpha = match run.alpha {
        Some(a) => a,
        None => {
            let est = estimate_contraction(
                &mu,
                &lambda,
                |rng| loop {
                    let a = mu.sample_exact(&law, rng);
                    let i = rng.random_range(0..n);
                    let b = a.with(i, 1 - a.get(i));
                    if lambda.contains(&a) && lambda.contains(&b) {
                        return Ok((a, b));
                    }
                },
                run.contraction_reps.unwrap(),
                &stream.child("contraction"),
                n as f64,
            )?;
            art.set("contraction", est);
            est.alpha_upper().min(1.0)
        }
    };
    let setup = CouplingSetup {
        mu: &mu,
        g: IncreasingFunction::magnetization(n),
        epsilon: run.tilt_epsilon,
        shift_rule: match run.shift_rule.unwrap() {
            ShiftRuleChoice::Certified => ShiftRule::Certified,
            ShiftRuleChoice::Paper => ShiftRule::Paper,
        },
        lambda: &lambda,
        t: run.t.unwrap(),
        replicas: run.replicas.unwrap(),
        alpha,
        mu_lambda_complement: mu_c,
        z_candidates: run.z_candidates.unwrap(),
        pilot_runs: run.pilot_runs.unwrap(),
    };
    let rep = coupling_experiment(&setup, |rng| mu.sample_exact(&law, rng), &stream.child("coupling"))?;
    let mut events = Table::new("events", &["event", "count", "replicas", "frequency", "wilson_center", "wilson_halfwidth", "bound", "within_bound"]);
    for (name, e) in [("base_mixes", &rep.base_mixes), ("tilted_mixes", &rep.tilted_mixes), ("domination", &rep.domination)] {
        events.push(vec![
            name.into(),
            e.count.into(),
            e.replicas.into(),
            e.frequency.into(),
            e.wilson_center.into(),
            e.wilson_halfwidth.into(),
            e.bound.into(),
            e.within_bound.into(),
        ]);
    }
    let mut outcomes = Table::new(
        "replicas",
        &["replica", "base_mismatch", "tilted_mismatch", "not_dominated", "exited_lambda", "order_violations", "order_checks"],
    );
    for o in &rep.outcomes {
        outcomes.push(vec![
            o.replica.into(),
            o.base_mismatch.into(),
            o.tilted_mismatch.into(),
            o.not_dominated.into(),
            o.exited_lambda.into(),
            o.order_violations.into(),
            o.order_checks.into(),
        ]);
    }
    art.set("band", band);
    art.set("alpha", alpha);
    art.set("mu_lambda_complement", mu_c);
    art.set("t", rep.t);
    art.set("epsilon", rep.epsilon);
    art.set("shift_rule", rep.shift_rule);
    art.set("diameter", rep.diameter);
    art.set("z", rep.z.to_string());
    art.set("z_escape_estimate", rep.z_escape_estimate);
    art.set("events", json!({ "base_mixes": rep.base_mixes, "tilted_mixes": rep.tilted_mixes, "domination": rep.domination }));
    art.set("bounds", rep.bounds);
    art.set("order_checks", rep.order_checks);
    art.set("order_violations", rep.order_violations);
    art.set("all_within_bounds", rep.all_within_bounds());
    art.data.push(events);
    art.data.push(outcomes);
    Ok(art)
}

fn bound_eval(r: &Resolved) -> Result<Artifacts> {
    let run = r.run();
    let mut t = Table::new("bound", &["t", "bound", "vacuous"]);
    let mut values = Vec::new();
    for &h in run.t_grid.as_deref().unwrap_or_default() {
        let b = theorem_bound(&BoundInputs {
            alpha: run.alpha.unwrap(),
            t: h,
            alphabet_size: run.alphabet_size.unwrap(),
            mu_lambda_complement: run.mu_lambda_complement.unwrap(),
            diameter: Distance::Finite(run.diameter.unwrap()),
        })?;
        // Covariances of functions with sup norm 1 are at most 1.
        t.push(vec![h.into(), b.into(), (b >= 1.0).into()]);
        values.push(json!({ "t": h, "bound": b }));
    }
    let mut art = Artifacts::default();
    art.set("bounds", values);
    art.data.push(t);
    Ok(art)
}
