//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits nonzero when any of them fails.

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use projgrad::oracle::{constraint_of_cut, constraints_of, project_exhaustive, reference_solution};
use projgrad::solver::{a1_solve, a2_solve, RunReport};
use projgrad::{project_intersection, FeasibleSet, Halfcut, Matrix, Objective, ProblemInstance, SolverConfig, Vector};
use projgrad_bench::run::execute;
use projgrad_bench::{registry, ConfigOverrides, RunSpec, Strategy};

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into() }
    }
}

fn v(x: Vec<f64>) -> Vector {
    Vector::new(x).unwrap()
}

fn point(rng: &mut StdRng, n: usize, r: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-r..r)).collect()
}

fn normal(rng: &mut StdRng, n: usize) -> Vec<f64> {
    loop {
        let a = point(rng, n, 2.0);
        if a.iter().map(|x| x * x).sum::<f64>() > 1e-2 {
            return a;
        }
    }
}

/// Every set variant, chosen by `kind % 6`.
fn random_set(rng: &mut StdRng, kind: usize, n: usize) -> FeasibleSet {
    match kind % 6 {
        0 => {
            let lower: Vec<f64> = point(rng, n, 3.0);
            let upper = lower.iter().map(|l| l + rng.gen_range(0.0..3.0)).collect();
            let lower = lower.into_iter().map(|l| if rng.gen_bool(0.2) { f64::NEG_INFINITY } else { l }).collect();
            FeasibleSet::boxed(lower, upper).unwrap()
        }
        1 => FeasibleSet::ball(v(point(rng, n, 2.0)), rng.gen_range(0.1..3.0)).unwrap(),
        2 => FeasibleSet::halfspace(v(normal(rng, n)), rng.gen_range(-2.0..2.0)).unwrap(),
        3 => FeasibleSet::hyperplane(v(normal(rng, n)), rng.gen_range(-2.0..2.0)).unwrap(),
        4 => FeasibleSet::simplex(n, rng.gen_range(0.2..4.0)).unwrap(),
        _ => FeasibleSet::whole_space(n).unwrap(),
    }
}

fn within(limit: Duration, took: Duration) -> bool {
    took <= limit
}

fn projection_properties() -> Verdict {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1);
    let mut worst = [f64::INFINITY; 4];
    for i in 0..1000 {
        let n = rng.gen_range(1..=10);
        let set = random_set(&mut rng, i, n);
        let x = v(point(&mut rng, n, 5.0));
        let y = v(point(&mut rng, n, 5.0));
        let z = set.project(&v(point(&mut rng, n, 5.0))).unwrap();
        let px = set.project(&x).unwrap();
        let py = set.project(&y).unwrap();
        // ⟨x − P(x), z − P(x)⟩ ≤ 0
        let obtuse = -x.sub(&px).unwrap().dot(&z.sub(&px).unwrap()).unwrap();
        // ⟨z − y, z − P(y)⟩ ≥ ‖z − P(y)‖²
        let member = z.sub(&y).unwrap().dot(&z.sub(&py).unwrap()).unwrap() - z.sub(&py).unwrap().norm_squared();
        let idempotent = -set.project(&px).unwrap().dist(&px).unwrap();
        let nonexpansive = x.dist(&y).unwrap() - px.dist(&py).unwrap();
        for (w, m) in worst.iter_mut().zip([obtuse, member, idempotent, nonexpansive]) {
            *w = w.min(m);
        }
    }
    let took = start.elapsed();
    let ok = worst.iter().all(|&m| m >= -1e-10) && within(Duration::from_secs(5), took);
    Verdict::new(
        ok,
        format!(
            "1000 triples; worst margins (i) {:.1e}, (ii) {:.1e}, idempotence {:.1e}, nonexpansive {:.1e}; {:.2}s",
            worst[0],
            worst[1],
            worst[2],
            worst[3],
            took.as_secs_f64()
        ),
    )
}

fn intersection_oracle() -> Verdict {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut unsolved = 0;
    for i in 0..200 {
        let n = rng.gen_range(1..=4);
        let set = random_set(&mut rng, i, n);
        let inside = set.project(&v(point(&mut rng, n, 3.0))).unwrap();
        let cuts: Vec<Halfcut> = (0..rng.gen_range(0..=2))
            .map(|_| {
                let a = v(normal(&mut rng, n));
                let b = a.dot(&inside).unwrap() + rng.gen_range(0.0..0.5);
                Halfcut::new(a, b)
            })
            .collect();
        let anchor = v(point(&mut rng, n, 4.0));
        let mut all = constraints_of(&set);
        all.extend(cuts.iter().filter_map(constraint_of_cut));
        let (Some(expected), Ok(got)) =
            (project_exhaustive(&all, anchor.as_slice()), project_intersection(&set, &cuts, &anchor, 1e-10, 10_000))
        else {
            unsolved += 1;
            continue;
        };
        worst = worst.max(got.point.dist(&v(expected)).unwrap());
    }
    let took = start.elapsed();
    let ok = unsolved == 0 && worst <= 1e-6 && within(Duration::from_secs(30), took);
    Verdict::new(ok, format!("200 instances; max deviation {worst:.1e}; unsolved {unsolved}; {:.2}s", took.as_secs_f64()))
}

fn a1_convergence() -> Verdict {
    let start = Instant::now();
    let cfg = SolverConfig { max_outer_iters: 5000, ..Default::default() };
    let mut ok = true;
    let mut parts = Vec::new();
    for id in ["quadratic-box", "pnorm4-ball", "pnorm1.5-box"] {
        let inst = registry::instance(id, 0).unwrap();
        let report = a1_solve(&inst, &cfg).unwrap();
        let known = inst.known_solution.as_ref().unwrap();
        let d_known = report.final_x.dist(known).unwrap();
        let reference = reference_solution(&inst.objective, &inst.set, inst.x0.as_slice()).unwrap();
        let d_oracle = report.final_x.dist(&v(reference.solution)).unwrap();
        let pass = report.final_residual <= 1e-6 && report.iterations <= 5000 && d_known <= 1e-5 && d_oracle <= 1e-5;
        ok &= pass;
        parts.push(format!(
            "{id}: {} it, residual {:.1e}, |x−x*| {:.1e}, |x−oracle| {:.1e}",
            report.iterations, report.final_residual, d_known, d_oracle
        ));
    }
    let took = start.elapsed();
    ok &= within(Duration::from_secs(10), took);
    Verdict::new(ok, format!("{}; {:.2}s", parts.join("; "), took.as_secs_f64()))
}

/// Registry runs of one strategy: the default configuration and one with
/// an oversized stepsize that makes the line searches backtrack.
fn registry_runs(strategy: Strategy) -> Vec<(String, RunReport)> {
    let mut out = Vec::new();
    for id in registry::ids() {
        for (label, beta) in [("default", None), ("beta=8", Some(8.0))] {
            let overrides = ConfigOverrides {
                beta_schedule: beta.map(|b| vec![b]),
                boundary_beta: beta,
                constant_beta: Some(0.5),
                exo_constant: Some(0.5),
                ..Default::default()
            };
            let spec = RunSpec::new(
                format!("{id}-{label}"),
                id.to_string(),
                registry::instance(id, 0).unwrap(),
                strategy,
                overrides,
                0,
                None,
            )
            .unwrap();
            out.push((format!("{id} ({label})"), execute(&spec).unwrap().report));
        }
    }
    out
}

fn monitor_suite(strategy: Strategy, names: &[&str]) -> Verdict {
    let runs = registry_runs(strategy);
    let mut failures = Vec::new();
    let mut evaluations = 0;
    for (label, report) in &runs {
        if !report.status.is_success() {
            failures.push(format!("{label}: {}", report.status));
        }
        for name in names {
            if let Some(m) = report.monitors.get(name) {
                evaluations += m.evaluations;
                if !m.passed() {
                    failures.push(format!("{label}: {name} margin {:.1e}", m.worst_margin));
                }
            }
        }
    }
    let detail = format!("{} runs, {} checks", runs.len(), evaluations);
    if failures.is_empty() {
        Verdict::new(evaluations > 0, detail)
    } else {
        Verdict::new(false, format!("{detail}; {}", failures.join("; ")))
    }
}

fn a2_target() -> Verdict {
    let start = Instant::now();
    let cfg = SolverConfig::default();
    let flat = registry::instance("flat", 0).unwrap();
    let a2 = a2_solve(&flat, &cfg).unwrap();
    // the solution set is the segment {1} × [0, 2]
    let target = v(vec![1.0, 1.7]);
    let reference = reference_solution(&flat.objective, &flat.set, flat.x0.as_slice()).unwrap();
    let nearest = v(reference.nearest_to_anchor.expect("quadratic solution sets are explicit"));
    let d_target = a2.final_x.dist(&target).unwrap();
    let d_oracle = a2.final_x.dist(&nearest).unwrap();
    let mut ok = d_target <= 1e-5 && d_oracle <= 1e-5;
    let mut worst: f64 = 0.0;
    for id in ["ray-1d", "quadratic-box", "quadratic-interior", "pnorm4-ball", "pnorm1.5-box"] {
        let inst = registry::instance(id, 0).unwrap();
        let d = a2_solve(&inst, &cfg).unwrap().final_x.dist(&a1_solve(&inst, &cfg).unwrap().final_x).unwrap();
        worst = worst.max(d);
    }
    ok &= worst <= 1e-5;
    let took = start.elapsed();
    ok &= within(Duration::from_secs(10), took);
    Verdict::new(
        ok,
        format!(
            "flat: |x−(1,1.7)| {d_target:.1e}, |x−oracle| {d_oracle:.1e}; max |A2−A1| on unique-solution instances {worst:.1e}; {:.2}s",
            took.as_secs_f64()
        ),
    )
}

fn first_below(report: &RunReport, tol: f64) -> Option<usize> {
    report.trace.iter().find(|r| r.residual <= tol).map(|r| r.k)
}

fn spec_for(id: &str, strategy: Strategy, overrides: ConfigOverrides) -> RunSpec {
    RunSpec::new(id.into(), id.into(), registry::instance(id, 0).unwrap(), strategy, overrides, 0, None).unwrap()
}

fn strategy_comparison() -> Verdict {
    const EXO: f64 = 0.25;
    let c = execute(&spec_for("ray-1d", Strategy::FeasibleDirection, ConfigOverrides::default())).unwrap().report;
    let b = execute(&spec_for("ray-1d", Strategy::Boundary, ConfigOverrides::default())).unwrap().report;
    let d_overrides = ConfigOverrides { exo_constant: Some(EXO), ..Default::default() };
    let d = execute(&spec_for("ray-1d", Strategy::Exogenous, d_overrides)).unwrap().report;

    let steps = |r: &RunReport| r.trace.iter().filter(|t| t.alpha.is_some()).cloned().collect::<Vec<_>>();
    let c_one = steps(&c).iter().all(|t| t.projections == 1) && !steps(&c).is_empty();
    let b_count = steps(&b).iter().all(|t| t.projections == t.inner_trials.unwrap() + 1) && !steps(&b).is_empty();
    let d_bound = d.trace.windows(2).all(|w| w[1].x.dist(&w[0].x).unwrap() <= EXO / (w[0].k as f64 + 1.0) + 1e-12);
    let (kc, kd) = (first_below(&c, 1e-2), first_below(&d, 1e-2));
    let slower = matches!((kc, kd), (Some(kc), Some(kd)) if kd >= 10 * kc.max(1));
    Verdict::new(
        c_one && b_count && d_bound && slower,
        format!(
            "(c) one projection per step: {c_one}; (b) ℓ+1 projections: {b_count}; (d) step ≤ δ_k: {d_bound}; \
             iterations to residual 1e-2: (c) {kc:?}, (d) {kd:?} with c = {EXO}"
        ),
    )
}

fn gradient_check() -> Verdict {
    let mut rng = StdRng::seed_from_u64(8);
    let n = 3;
    let mut worst = [0.0f64; 3];
    for _ in 0..100 {
        let x = v(point(&mut rng, n, 2.0));
        let p = rng.gen_range(1.5..4.0);
        let pnorm = Objective::pnorm(p, v(point(&mut rng, n, 2.0))).unwrap();
        let m: Vec<Vec<f64>> = (0..n).map(|_| point(&mut rng, n, 1.0)).collect();
        let q = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| m[k][i] * m[k][j]).sum()).collect()).collect();
        let quad = Objective::quadratic(Matrix::from_rows(q).unwrap(), v(point(&mut rng, n, 2.0)), 0.3).unwrap();
        let rows = (0..4).map(|_| point(&mut rng, n, 1.0)).collect();
        let lse = Objective::log_sum_exp(Matrix::from_rows(rows).unwrap(), v(point(&mut rng, 4, 1.0))).unwrap();
        for (w, f) in worst.iter_mut().zip([&pnorm, &quad, &lse]) {
            *w = w.max(f.check_gradient(&x, 1e-5).unwrap());
        }
    }
    Verdict::new(
        worst.iter().all(|&e| e <= 1e-7),
        format!("100 points each; max error pnorm {:.1e}, quadratic {:.1e}, logsumexp {:.1e}", worst[0], worst[1], worst[2]),
    )
}

/// Rechecks `j − 1` for every step that backtracked.
fn armijo_termination() -> Verdict {
    let mut max_j = 0;
    let mut retested = 0;
    let mut violations = Vec::new();
    for strategy in Strategy::ALL {
        for (label, report) in registry_runs(strategy) {
            max_j = max_j.max(report.max_inner_trials);
            let id = label.split(' ').next().unwrap();
            let inst = registry::instance(id, 0).unwrap();
            for r in report.trace.iter().filter(|r| r.inner_trials.is_some_and(|j| j > 0)) {
                retested += 1;
                if !rejects_previous_trial(&inst, strategy, r) {
                    violations.push(format!("{label} {strategy} k={}", r.k));
                }
            }
        }
    }
    Verdict::new(
        max_j < 80 && violations.is_empty() && retested > 0,
        format!("max j(k) = {max_j}; {retested} backtracking steps retested; non-minimal: {violations:?}"),
    )
}

fn rejects_previous_trial(inst: &ProblemInstance, strategy: Strategy, r: &projgrad::IterateRecord) -> bool {
    let SolverConfig { theta, delta, .. } = SolverConfig::default();
    let x = &r.x;
    let f = inst.objective.eval(x).unwrap();
    let g = inst.objective.grad(x).unwrap();
    let beta = r.beta.unwrap();
    match strategy {
        Strategy::Boundary => {
            let wider = beta / theta;
            let trial = inst.set.project(&Vector::axpby(1.0, x, -wider, &g).unwrap()).unwrap();
            inst.objective.eval(&trial).unwrap() > f - delta * g.dot(&x.sub(&trial).unwrap()).unwrap()
        }
        _ => {
            let w = inst.set.project(&Vector::axpby(1.0, x, -beta, &g).unwrap()).unwrap();
            let step = theta.powi(r.inner_trials.unwrap() as i32 - 1);
            let trial = Vector::axpby(step, &w, 1.0 - step, x).unwrap();
            inst.objective.eval(&trial).unwrap() > f - delta * step * g.dot(&x.sub(&w).unwrap()).unwrap()
        }
    }
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("projection properties", projection_properties),
        ("intersection projection vs active-set oracle", intersection_oracle),
        ("A1 convergence", a1_convergence),
        ("A1 monitors", || {
            monitor_suite(Strategy::FeasibleDirection, &["monotone_descent", "innergrad", "quasi_fejer", "epsilon_sum_bound"])
        }),
        ("A2 strong-convergence target", a2_target),
        ("A2 monitors", || {
            monitor_suite(
                Strategy::Strong,
                &[
                    "anchor_distance_nondecreasing",
                    "ball_containment",
                    "level_below_value",
                    "level_above_optimum",
                    "cut_distance_chain",
                    "solution_in_h_cut",
                    "solution_in_w_cut",
                ],
            )
        }),
        ("strategy comparison", strategy_comparison),
        ("gradient validation", gradient_check),
        ("Armijo finite termination", armijo_termination),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let verdict = check();
        if !verdict.passed {
            failed += 1;
        }
        println!("{} criterion {}: {name}: {}", if verdict.passed { "PASS" } else { "FAIL" }, i + 1, verdict.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
