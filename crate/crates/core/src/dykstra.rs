//! Projection onto `C ∩ H_1 ∩ … ∩ H_m`, by exact active-set solvers or by
//! Dykstra's alternating projections.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::polyhedral;
use crate::sets::{FeasibleSet, Halfcut, SetKind};
use crate::vector::Vector;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_CYCLES: usize = 10_000;

/// How an intersection projection was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectionMethod {
    /// No active cuts; a single projection onto the base set.
    BaseOnly,
    Dykstra,
    /// Exact active-set solve for a ball with at most two cuts.
    BallActiveSet,
    /// Exact primal-dual active-set solve for a polyhedral base.
    PolyhedralActiveSet,
}

/// Outcome of a converged intersection projection.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionProjection {
    pub point: Vector,
    pub cycles: usize,
    /// Projections onto the base set performed.
    pub base_projections: usize,
    pub method: IntersectionMethod,
}

enum Piece<'a> {
    Base(&'a FeasibleSet),
    Cut(&'a Halfcut),
}

impl Piece<'_> {
    fn project(&self, x: &Vector) -> Result<Vector> {
        match self {
            Piece::Base(s) => s.project(x),
            Piece::Cut(c) => c.project(x),
        }
    }

    fn violation(&self, x: &Vector) -> Result<f64> {
        match self {
            Piece::Base(s) => s.violation(x),
            Piece::Cut(c) => c.violation(x),
        }
    }
}

/// Projects `anchor` onto the intersection of `base` with the halfspace
/// `cuts`.
///
/// Degenerate whole-space cuts are dropped; a degenerate empty cut is an
/// error. The projection is computed exactly for a polyhedral base (any
/// number of cuts, by a primal-dual active-set method) and for a ball with
/// at most two cuts (by enumerating active sets). A ball with more cuts,
/// or an exact solve that fails, goes to [`dykstra`].
///
/// Dykstra alone is not accurate enough for the strongly convergent
/// method. Near a boundary solution the level cut is almost tangent to a
/// ball, or almost parallel to a face of a polyhedron, and the cycles slow
/// to a crawl. Its stopping test then passes with the point still about
/// `tol` away from the projection, and the outer iteration drifts by that
/// much per step instead of reaching a fixed point.
pub fn project_intersection(
    base: &FeasibleSet,
    cuts: &[Halfcut],
    anchor: &Vector,
    tol: f64,
    max_cycles: usize,
) -> Result<IntersectionProjection> {
    anchor.check_dim(base.dim())?;
    if cuts.iter().any(Halfcut::is_empty) {
        return Err(Error::EmptyCut);
    }
    let active: Vec<&Halfcut> = cuts.iter().filter(|c| !c.degenerate).collect();
    for c in &active {
        c.normal.check_dim(base.dim())?;
    }
    if active.is_empty() {
        return Ok(IntersectionProjection {
            point: base.project(anchor)?,
            cycles: 0,
            base_projections: 1,
            method: IntersectionMethod::BaseOnly,
        });
    }
    let exact = IntersectionProjection { point: anchor.clone(), cycles: 0, base_projections: 1, method: IntersectionMethod::BaseOnly };
    if let SetKind::Ball { center, radius } = base.kind() {
        if active.len() <= 2 {
            if let Some(point) = ball_with_cuts(center, *radius, &active, anchor)? {
                return Ok(IntersectionProjection { point, method: IntersectionMethod::BallActiveSet, ..exact });
            }
        }
    } else if let Some(mut rows) = polyhedral::rows_of(base) {
        rows.extend(active.iter().map(|c| polyhedral::cut_row(c)));
        let a = DVector::from_column_slice(anchor.as_slice());
        if let Some(x) = polyhedral::project(&rows, &a) {
            let point = Vector::new(x.as_slice().to_vec())?;
            let feasible = base.violation(&point)? <= tol
                && active.iter().try_fold(true, |ok, c| Ok::<_, Error>(ok && c.violation(&point)? <= tol))?;
            if feasible {
                return Ok(IntersectionProjection { point, method: IntersectionMethod::PolyhedralActiveSet, ..exact });
            }
        }
    }
    dykstra(base, &active, anchor, tol, max_cycles)
}

/// Dykstra's alternating projections onto `base ∩ cuts`, with one
/// correction vector per set.
///
/// Converges when one full cycle changes the per-set iterates and
/// corrections by less than `tol` in total and every membership holds
/// within `tol`. The base set is
/// projected last, so the returned point lies in it exactly.
pub fn dykstra(
    base: &FeasibleSet,
    cuts: &[&Halfcut],
    anchor: &Vector,
    tol: f64,
    max_cycles: usize,
) -> Result<IntersectionProjection> {
    anchor.check_dim(base.dim())?;
    let mut pieces: Vec<Piece<'_>> = cuts.iter().filter(|c| !c.degenerate).map(|c| Piece::Cut(c)).collect();
    pieces.push(Piece::Base(base));

    let zero = Vector::zeros(anchor.dim())?;
    let mut corrections = vec![zero; pieces.len()];
    let mut iterates: Vec<Vector> = vec![anchor.clone(); pieces.len()];
    let mut x = anchor.clone();

    for cycle in 1..=max_cycles {
        let mut movement = 0.0;
        for (i, piece) in pieces.iter().enumerate() {
            let y = x.add(&corrections[i])?;
            let next = piece.project(&y)?;
            let correction = y.sub(&next)?;
            // iterates can sit still for whole cycles while a correction
            // keeps growing, so both enter the stop test
            movement += next.dist(&iterates[i])? + correction.dist(&corrections[i])?;
            corrections[i] = correction;
            iterates[i] = next.clone();
            x = next;
        }
        if movement < tol && pieces.iter().try_fold(true, |ok, p| Ok::<_, Error>(ok && p.violation(&x)? <= tol))? {
            return Ok(IntersectionProjection {
                point: x,
                cycles: cycle,
                base_projections: cycle,
                method: IntersectionMethod::Dykstra,
            });
        }
    }
    Err(Error::IntersectionNonconvergence { cycles: max_cycles, best: x })
}

/// Projection of `y` onto `{x : ⟨a_i, x⟩ = b_i, i ∈ active}`; `None` when
/// the normals are numerically dependent.
fn affine_projection(y: &Vector, active: &[&Halfcut]) -> Result<Option<Vector>> {
    match active {
        [] => Ok(Some(y.clone())),
        [c] => Ok(Some(Vector::axpby(1.0, y, -c.excess(y)? / c.normal.norm_squared(), &c.normal)?)),
        [c1, c2] => {
            let (g11, g22, g12) = (c1.normal.norm_squared(), c2.normal.norm_squared(), c1.normal.dot(&c2.normal)?);
            let det = g11 * g22 - g12 * g12;
            if det <= 1e-12 * g11 * g22 {
                return Ok(None);
            }
            let (r1, r2) = (c1.excess(y)?, c2.excess(y)?);
            let l1 = (g22 * r1 - g12 * r2) / det;
            let l2 = (g11 * r2 - g12 * r1) / det;
            let step = Vector::axpby(l1, &c1.normal, l2, &c2.normal)?;
            Ok(Some(y.sub(&step)?))
        }
        _ => Ok(None),
    }
}

/// Exact projection onto `B(center, radius) ∩ cuts` for at most two cuts.
///
/// For each candidate active set `A` of cuts, the KKT point with the ball
/// inactive is `P_A(anchor)`; with the ball active it is the point of the
/// sphere `B ∩ aff A` nearest to `P_A(anchor)`, found radially from
/// `P_A(center)`. The projection is the feasible candidate closest to
/// `anchor`.
fn ball_with_cuts(center: &Vector, radius: f64, cuts: &[&Halfcut], anchor: &Vector) -> Result<Option<Vector>> {
    let slack = 1e-14 * radius.max(anchor.dist(center)?).max(1.0);
    let feasible = |x: &Vector| -> Result<bool> {
        if x.dist(center)? > radius + slack {
            return Ok(false);
        }
        for c in cuts {
            if c.violation(x)? > slack {
                return Ok(false);
            }
        }
        Ok(true)
    };

    let mut subsets: Vec<Vec<&Halfcut>> = vec![Vec::new()];
    for (i, c) in cuts.iter().enumerate() {
        subsets.push(vec![*c]);
        for d in &cuts[i + 1..] {
            subsets.push(vec![*c, *d]);
        }
    }

    let mut best: Option<(f64, Vector)> = None;
    for active in &subsets {
        let Some(pa) = affine_projection(anchor, active)? else { continue };
        let Some(pc) = affine_projection(center, active)? else { continue };
        let mut candidates = vec![pa.clone()];
        let h2 = radius * radius - pc.dist(center)?.powi(2);
        if h2 >= 0.0 {
            let away = pa.dist(&pc)?;
            if away > 0.0 {
                candidates.push(Vector::axpby(1.0, &pc, h2.sqrt() / away, &pa.sub(&pc)?)?);
            } else if h2 == 0.0 {
                candidates.push(pc.clone());
            }
        }
        for x in candidates {
            if feasible(&x)? {
                let d = x.dist(anchor)?;
                if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                    best = Some((d, x));
                }
            }
        }
    }
    Ok(best.map(|(_, x)| x))
}
