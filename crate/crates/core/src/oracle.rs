//! Brute-force reference solvers for small instances.
//!
//! These enumerate active sets exhaustively and share no code path with
//! the iterative projectors and solvers; they exist to cross-check them.

use nalgebra::{DMatrix, DVector};

use crate::objectives::{Matrix, Objective};
use crate::sets::{FeasibleSet, Halfcut, SetKind};

const PINV_EPS: f64 = 1e-12;
const FEAS_TOL: f64 = 1e-9;
/// Enumeration is exponential in the number of inequalities.
pub const MAX_INEQUALITIES: usize = 16;

/// A single convex constraint in explicit form.
#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    /// `⟨a, x⟩ ≤ b`, or `= b` when `equality` is set.
    Linear { a: Vec<f64>, b: f64, equality: bool },
    /// `‖x − center‖ ≤ radius`
    Ball { center: Vec<f64>, radius: f64 },
}

impl Constraint {
    fn violation(&self, x: &DVector<f64>) -> f64 {
        match self {
            Constraint::Linear { a, b, equality } => {
                let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
                let s = (dot(a, x.as_slice()) - b) / norm.max(f64::MIN_POSITIVE);
                if *equality {
                    s.abs()
                } else {
                    s.max(0.0)
                }
            }
            Constraint::Ball { center, radius } => {
                let d = x.iter().zip(center).map(|(p, c)| (p - c) * (p - c)).sum::<f64>().sqrt();
                (d - radius).max(0.0)
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Explicit constraints describing a feasible set.
pub fn constraints_of(set: &FeasibleSet) -> Vec<Constraint> {
    let n = set.dim();
    let unit = |i: usize, s: f64| {
        let mut a = vec![0.0; n];
        a[i] = s;
        a
    };
    match set.kind() {
        SetKind::Box { lower, upper } => {
            let mut out = Vec::new();
            for i in 0..n {
                if lower[i].is_finite() {
                    out.push(Constraint::Linear { a: unit(i, -1.0), b: -lower[i], equality: false });
                }
                if upper[i].is_finite() {
                    out.push(Constraint::Linear { a: unit(i, 1.0), b: upper[i], equality: false });
                }
            }
            out
        }
        SetKind::Ball { center, radius } => {
            vec![Constraint::Ball { center: center.as_slice().to_vec(), radius: *radius }]
        }
        SetKind::Halfspace { normal, offset } => {
            vec![Constraint::Linear { a: normal.as_slice().to_vec(), b: *offset, equality: false }]
        }
        SetKind::Hyperplane { normal, offset } => {
            vec![Constraint::Linear { a: normal.as_slice().to_vec(), b: *offset, equality: true }]
        }
        SetKind::Simplex { scale, .. } => {
            let mut out: Vec<Constraint> =
                (0..n).map(|i| Constraint::Linear { a: unit(i, -1.0), b: 0.0, equality: false }).collect();
            out.push(Constraint::Linear { a: vec![1.0; n], b: *scale, equality: true });
            out
        }
        SetKind::WholeSpace { .. } => Vec::new(),
    }
}

pub fn constraint_of_cut(cut: &Halfcut) -> Option<Constraint> {
    if cut.degenerate {
        return None;
    }
    Some(Constraint::Linear { a: cut.normal.as_slice().to_vec(), b: cut.offset, equality: false })
}

/// Orthogonal projection onto `{x : A x = b}` via the pseudo-inverse, or
/// `None` when the system is inconsistent.
fn affine_projection(rows: &[&Vec<f64>], rhs: &[f64], p: &DVector<f64>) -> Option<DVector<f64>> {
    if rows.is_empty() {
        return Some(p.clone());
    }
    let n = p.len();
    let a = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    let b = DVector::from_column_slice(rhs);
    let pinv = a.clone().pseudo_inverse(PINV_EPS).ok()?;
    let y = p - &pinv * (&a * p - &b);
    let scale = 1.0 + b.amax() + y.amax();
    if (&a * &y - &b).amax() > 1e-9 * scale {
        return None;
    }
    Some(y)
}

fn subsets(count: usize, max_size: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1u32 << count))
        .filter(move |m| m.count_ones() as usize <= max_size)
        .map(move |m| (0..count).filter(|i| m & (1 << i) != 0).collect())
}

/// Exact Euclidean projection of `anchor` onto the intersection of the
/// constraints, by enumerating active sets. Supports at most one ball.
///
/// Every candidate is the projection onto the manifold cut out by a
/// subset of active constraints; the nearest feasible candidate is the
/// projection because the true projection is one of them.
pub fn project_exhaustive(constraints: &[Constraint], anchor: &[f64]) -> Option<Vec<f64>> {
    let n = anchor.len();
    let p = DVector::from_column_slice(anchor);
    let mut equalities: Vec<(&Vec<f64>, f64)> = Vec::new();
    let mut inequalities: Vec<(&Vec<f64>, f64)> = Vec::new();
    let mut ball: Option<(DVector<f64>, f64)> = None;
    for c in constraints {
        match c {
            Constraint::Linear { a, b, equality: true } => equalities.push((a, *b)),
            Constraint::Linear { a, b, equality: false } => inequalities.push((a, *b)),
            Constraint::Ball { center, radius } => {
                if ball.is_some() {
                    return None;
                }
                ball = Some((DVector::from_column_slice(center), *radius));
            }
        }
    }
    if inequalities.len() > MAX_INEQUALITIES {
        return None;
    }

    let feasible = |x: &DVector<f64>| constraints.iter().all(|c| c.violation(x) <= FEAS_TOL);
    let mut best: Option<(f64, DVector<f64>)> = None;
    let mut consider = |x: DVector<f64>| {
        if feasible(&x) {
            let d = (&x - &p).norm();
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, x));
            }
        }
    };

    for active in subsets(inequalities.len(), n) {
        let mut rows: Vec<&Vec<f64>> = equalities.iter().map(|(a, _)| *a).collect();
        let mut rhs: Vec<f64> = equalities.iter().map(|(_, b)| *b).collect();
        for &i in &active {
            rows.push(inequalities[i].0);
            rhs.push(inequalities[i].1);
        }
        let Some(on_face) = affine_projection(&rows, &rhs, &p) else { continue };
        consider(on_face.clone());
        if let Some((center, radius)) = &ball {
            // sphere ∩ affine set is a sphere around the projected center
            let Some(c_face) = affine_projection(&rows, &rhs, center) else { continue };
            let offset = (&c_face - center).norm();
            if offset > *radius {
                continue;
            }
            let r_face = (radius * radius - offset * offset).sqrt();
            let dir = &on_face - &c_face;
            let len = dir.norm();
            if len > 1e-14 {
                consider(&c_face + dir * (r_face / len));
            }
        }
    }
    best.map(|(_, x)| x.as_slice().to_vec())
}

/// A minimizer of a convex quadratic over linear constraints, found by
/// solving the KKT system of every active set.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticOracle {
    pub solution: Vec<f64>,
    pub fstar: f64,
}

fn quadratic_value(q: &Matrix, b: &[f64], c: f64, x: &[f64]) -> f64 {
    let mut quad = 0.0;
    for i in 0..q.rows() {
        quad += x[i] * dot(q.row(i), x);
    }
    0.5 * quad + dot(b, x) + c
}

pub fn solve_quadratic(q: &Matrix, b: &[f64], c: f64, constraints: &[Constraint]) -> Option<QuadraticOracle> {
    let n = b.len();
    let mut eq: Vec<(&Vec<f64>, f64)> = Vec::new();
    let mut ineq: Vec<(&Vec<f64>, f64)> = Vec::new();
    for con in constraints {
        match con {
            Constraint::Linear { a, b, equality: true } => eq.push((a, *b)),
            Constraint::Linear { a, b, equality: false } => ineq.push((a, *b)),
            Constraint::Ball { .. } => return None,
        }
    }
    if ineq.len() > MAX_INEQUALITIES {
        return None;
    }
    let mut best: Option<QuadraticOracle> = None;
    for active in subsets(ineq.len(), n) {
        let rows: Vec<(&Vec<f64>, f64)> =
            eq.iter().cloned().chain(active.iter().map(|&i| ineq[i])).collect();
        let m = rows.len();
        let mut kkt = DMatrix::zeros(n + m, n + m);
        let mut rhs = DVector::zeros(n + m);
        for i in 0..n {
            for j in 0..n {
                kkt[(i, j)] = q.get(i, j);
            }
            rhs[i] = -b[i];
        }
        for (r, (a, bi)) in rows.iter().enumerate() {
            for j in 0..n {
                kkt[(n + r, j)] = a[j];
                kkt[(j, n + r)] = a[j];
            }
            rhs[n + r] = *bi;
        }
        let Ok(pinv) = kkt.clone().pseudo_inverse(PINV_EPS) else { continue };
        let sol = &pinv * &rhs;
        if (&kkt * &sol - &rhs).amax() > 1e-8 * (1.0 + rhs.amax()) {
            continue;
        }
        // inequality multipliers must be nonnegative
        let multipliers_ok = (eq.len()..m).all(|r| sol[n + r] >= -1e-9);
        let x = DVector::from_iterator(n, sol.iter().take(n).cloned());
        if !multipliers_ok || !constraints.iter().all(|c| c.violation(&x) <= FEAS_TOL) {
            continue;
        }
        let xs = x.as_slice().to_vec();
        let f = quadratic_value(q, b, c, &xs);
        if best.as_ref().is_none_or(|o| f < o.fstar) {
            best = Some(QuadraticOracle { solution: xs, fstar: f });
        }
    }
    best
}

/// Projection of `anchor` onto the solution set of a convex quadratic
/// program, given one solution `xbar`.
///
/// The solution set is `C ∩ {Q(x − x̄) = 0} ∩ {⟨Qx̄ + b, x − x̄⟩ = 0}`.
pub fn project_onto_quadratic_solutions(
    q: &Matrix,
    b: &[f64],
    constraints: &[Constraint],
    xbar: &[f64],
    anchor: &[f64],
) -> Option<Vec<f64>> {
    let n = b.len();
    let mut all = constraints.to_vec();
    for i in 0..n {
        let row = q.row(i).to_vec();
        if row.iter().any(|v| *v != 0.0) {
            let rhs = dot(&row, xbar);
            all.push(Constraint::Linear { a: row, b: rhs, equality: true });
        }
    }
    let grad: Vec<f64> = (0..n).map(|i| dot(q.row(i), xbar) + b[i]).collect();
    if grad.iter().any(|v| v.abs() > 1e-14) {
        let rhs = dot(&grad, xbar);
        all.push(Constraint::Linear { a: grad, b: rhs, equality: true });
    }
    project_exhaustive(&all, anchor)
}

/// Reference solution of `min f` over `set`: exact active-set KKT for
/// quadratics over polyhedra, otherwise a grid search refined by a
/// safeguarded fixed-step projected descent.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub solution: Vec<f64>,
    pub fstar: f64,
    /// Projection of the queried anchor onto the solution set, when the
    /// solution set is known explicitly (quadratic objectives).
    pub nearest_to_anchor: Option<Vec<f64>>,
    pub method: &'static str,
}

pub fn reference_solution(obj: &Objective, set: &FeasibleSet, anchor: &[f64]) -> Option<ReferenceSolution> {
    let constraints = constraints_of(set);
    if let Objective::Quadratic { q, b, c } = obj {
        if !matches!(set.kind(), SetKind::Ball { .. }) {
            let sol = solve_quadratic(q, b.as_slice(), *c, &constraints)?;
            let nearest = project_onto_quadratic_solutions(q, b.as_slice(), &constraints, &sol.solution, anchor);
            return Some(ReferenceSolution {
                solution: sol.solution,
                fstar: sol.fstar,
                nearest_to_anchor: nearest,
                method: "active_set_kkt",
            });
        }
    }
    grid_refine(obj, set, anchor)
}

fn bounding_box(set: &FeasibleSet, anchor: &[f64]) -> Vec<(f64, f64)> {
    let n = set.dim();
    let around = |i: usize| (anchor[i] - 10.0, anchor[i] + 10.0);
    match set.kind() {
        SetKind::Box { lower, upper } => (0..n)
            .map(|i| {
                let (lo, hi) = around(i);
                (if lower[i].is_finite() { lower[i] } else { lo }, if upper[i].is_finite() { upper[i] } else { hi })
            })
            .collect(),
        SetKind::Ball { center, radius } => center.iter().map(|c| (c - radius, c + radius)).collect(),
        SetKind::Simplex { scale, .. } => vec![(0.0, *scale); n],
        _ => (0..n).map(around).collect(),
    }
}

fn grid_refine(obj: &Objective, set: &FeasibleSet, anchor: &[f64]) -> Option<ReferenceSolution> {
    let n = set.dim();
    if n > 4 {
        return None;
    }
    let per_axis: usize = match n {
        1 => 2001,
        2 => 201,
        3 => 41,
        _ => 17,
    };
    let bounds = bounding_box(set, anchor);
    let eval = |x: &crate::vector::Vector| obj.eval(x).ok();
    let mut best: Option<(f64, crate::vector::Vector)> = None;
    let total = per_axis.pow(n as u32);
    for idx in 0..total {
        let mut rem = idx;
        let mut pt = Vec::with_capacity(n);
        for (lo, hi) in &bounds {
            let t = (rem % per_axis) as f64 / (per_axis - 1) as f64;
            rem /= per_axis;
            pt.push(lo + t * (hi - lo));
        }
        let x = set.project(&crate::vector::Vector::new(pt).ok()?).ok()?;
        if let Some(f) = eval(&x) {
            if best.as_ref().is_none_or(|(bf, _)| f < *bf) {
                best = Some((f, x));
            }
        }
    }
    let (mut fbest, mut x) = best?;
    let mut t = bounds.iter().map(|(lo, hi)| hi - lo).fold(0.0, f64::max) / per_axis as f64;
    let mut iterations = 0;
    while t > 1e-15 && iterations < 200_000 {
        iterations += 1;
        let g = obj.grad(&x).ok()?;
        let gn = g.norm();
        if gn == 0.0 {
            break;
        }
        let trial = set.project(&crate::vector::Vector::axpby(1.0, &x, -t / gn.max(1.0), &g).ok()?).ok()?;
        let ft = eval(&trial)?;
        if ft < fbest {
            fbest = ft;
            x = trial;
            t *= 1.5;
        } else {
            t *= 0.5;
        }
    }
    Some(ReferenceSolution {
        solution: x.as_slice().to_vec(),
        fstar: fbest,
        nearest_to_anchor: None,
        method: "grid_refine",
    })
}
