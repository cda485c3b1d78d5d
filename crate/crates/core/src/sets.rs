//! Closed convex sets with exact Euclidean projections.

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::vector::Vector;

#[derive(Debug, Clone, PartialEq)]
pub enum SetKind {
    /// Componentwise bounds; entries may be infinite.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Ball { center: Vector, radius: f64 },
    /// `{x : ⟨normal, x⟩ ≤ offset}`
    Halfspace { normal: Vector, offset: f64 },
    /// `{x : ⟨normal, x⟩ = offset}`
    Hyperplane { normal: Vector, offset: f64 },
    /// `{x ≥ 0 : Σ x_i = scale}`
    Simplex { dim: usize, scale: f64 },
    WholeSpace { dim: usize },
}

/// A nonempty closed convex set. Constructors enforce the invariants of
/// each variant.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleSet {
    kind: SetKind,
}

impl FeasibleSet {
    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::EmptyVector);
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch { expected: lower.len(), found: upper.len() });
        }
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if l.is_nan() || u.is_nan() || *l == f64::INFINITY || *u == f64::NEG_INFINITY {
                return Err(Error::InvalidSet(format!("box bound {i} is not usable")));
            }
            if l > u {
                return Err(Error::InvalidSet(format!("box lower[{i}] = {l} exceeds upper[{i}] = {u}")));
            }
        }
        Ok(Self { kind: SetKind::Box { lower, upper } })
    }

    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidSet(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Self { kind: SetKind::Ball { center, radius } })
    }

    pub fn halfspace(normal: Vector, offset: f64) -> Result<Self> {
        check_normal(&normal, offset)?;
        Ok(Self { kind: SetKind::Halfspace { normal, offset } })
    }

    pub fn hyperplane(normal: Vector, offset: f64) -> Result<Self> {
        check_normal(&normal, offset)?;
        Ok(Self { kind: SetKind::Hyperplane { normal, offset } })
    }

    pub fn simplex(dim: usize, scale: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidSet(format!("simplex scale must be positive, got {scale}")));
        }
        Ok(Self { kind: SetKind::Simplex { dim, scale } })
    }

    pub fn whole_space(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        Ok(Self { kind: SetKind::WholeSpace { dim } })
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            SetKind::Box { lower, .. } => lower.len(),
            SetKind::Ball { center, .. } => center.dim(),
            SetKind::Halfspace { normal, .. } | SetKind::Hyperplane { normal, .. } => normal.dim(),
            SetKind::Simplex { dim, .. } | SetKind::WholeSpace { dim } => *dim,
        }
    }

    /// Euclidean projection of `x` onto the set.
    pub fn project(&self, x: &Vector) -> Result<Vector> {
        x.check_dim(self.dim())?;
        match &self.kind {
            SetKind::Box { lower, upper } => Vector::new(
                x.iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(v, (l, u))| v.max(*l).min(*u))
                    .collect(),
            ),
            SetKind::Ball { center, radius } => {
                let d = x.dist(center)?;
                if d <= *radius {
                    Ok(x.clone())
                } else {
                    Vector::axpby(1.0 - radius / d, center, radius / d, x)
                }
            }
            SetKind::Halfspace { normal, offset } => {
                let excess = normal.dot(x)? - offset;
                if excess <= 0.0 {
                    Ok(x.clone())
                } else {
                    Vector::axpby(1.0, x, -excess / normal.norm_squared(), normal)
                }
            }
            SetKind::Hyperplane { normal, offset } => {
                let excess = normal.dot(x)? - offset;
                Vector::axpby(1.0, x, -excess / normal.norm_squared(), normal)
            }
            SetKind::Simplex { scale, .. } => project_simplex(x, *scale),
            SetKind::WholeSpace { .. } => Ok(x.clone()),
        }
    }

    /// Largest violation of any defining constraint, measured as a distance
    /// (zero for members).
    pub fn violation(&self, x: &Vector) -> Result<f64> {
        x.check_dim(self.dim())?;
        let v = match &self.kind {
            SetKind::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(v, (l, u))| (l - v).max(v - u).max(0.0))
                .fold(0.0, f64::max),
            SetKind::Ball { center, radius } => (x.dist(center)? - radius).max(0.0),
            SetKind::Halfspace { normal, offset } => {
                ((normal.dot(x)? - offset) / normal.norm()).max(0.0)
            }
            SetKind::Hyperplane { normal, offset } => {
                ((normal.dot(x)? - offset) / normal.norm()).abs()
            }
            SetKind::Simplex { scale, .. } => {
                let neg = x.iter().map(|v| (-v).max(0.0)).fold(0.0, f64::max);
                let sum: f64 = x.iter().sum();
                neg.max((sum - scale).abs())
            }
            SetKind::WholeSpace { .. } => 0.0,
        };
        Ok(v)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> Result<bool> {
        Ok(self.violation(x)? <= tol)
    }
}

fn check_normal(normal: &Vector, offset: f64) -> Result<()> {
    if normal.norm() == 0.0 {
        return Err(Error::InvalidSet("normal vector must be nonzero".into()));
    }
    if !offset.is_finite() {
        return Err(Error::InvalidSet("offset must be finite".into()));
    }
    Ok(())
}

/// Sort-and-threshold projection onto `{x ≥ 0, Σx = scale}`.
fn project_simplex(x: &Vector, scale: f64) -> Result<Vector> {
    let mut sorted: Vec<f64> = x.as_slice().to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut tau = 0.0;
    for (j, u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - scale) / (j as f64 + 1.0);
        if u - candidate > 0.0 {
            tau = candidate;
        }
    }
    Vector::new(x.iter().map(|v| (v - tau).max(0.0)).collect())
}

/// Halfspace `{x : ⟨normal, x⟩ ≤ offset}` that may be degenerate.
///
/// A zero normal yields either the whole space (`offset ≥ 0`) or the
/// empty set (`offset < 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct Halfcut {
    pub normal: Vector,
    pub offset: f64,
    pub degenerate: bool,
}

impl Halfcut {
    pub fn new(normal: Vector, offset: f64) -> Self {
        let degenerate = normal.norm() == 0.0;
        Self { normal, offset, degenerate }
    }

    pub fn is_whole_space(&self) -> bool {
        self.degenerate && self.offset >= 0.0
    }

    pub fn is_empty(&self) -> bool {
        self.degenerate && self.offset < 0.0
    }

    /// Signed amount `⟨normal, x⟩ − offset`; positive outside.
    pub fn excess(&self, x: &Vector) -> Result<f64> {
        Ok(self.normal.dot(x)? - self.offset)
    }

    pub fn violation(&self, x: &Vector) -> Result<f64> {
        if self.degenerate {
            return Ok(if self.offset >= 0.0 { 0.0 } else { -self.offset });
        }
        Ok((self.excess(x)? / self.normal.norm()).max(0.0))
    }

    pub fn project(&self, x: &Vector) -> Result<Vector> {
        x.check_dim(self.normal.dim())?;
        if self.is_empty() {
            return Err(Error::EmptyCut);
        }
        if self.degenerate {
            return Ok(x.clone());
        }
        let excess = self.excess(x)?;
        if excess <= 0.0 {
            Ok(x.clone())
        } else {
            Vector::axpby(1.0, x, -excess / self.normal.norm_squared(), &self.normal)
        }
    }
}

/// Anything that can project onto the feasible set.
pub trait Projector {
    fn project(&self, x: &Vector) -> Result<Vector>;
}

impl Projector for FeasibleSet {
    fn project(&self, x: &Vector) -> Result<Vector> {
        FeasibleSet::project(self, x)
    }
}

/// Wraps a set and counts how many projections are requested.
#[derive(Debug)]
pub struct CountingProjector<'a> {
    set: &'a FeasibleSet,
    calls: Cell<usize>,
}

impl<'a> CountingProjector<'a> {
    pub fn new(set: &'a FeasibleSet) -> Self {
        Self { set, calls: Cell::new(0) }
    }

    pub fn calls(&self) -> usize {
        self.calls.get()
    }

    pub fn set(&self) -> &FeasibleSet {
        self.set
    }
}

impl Projector for CountingProjector<'_> {
    fn project(&self, x: &Vector) -> Result<Vector> {
        self.calls.set(self.calls.get() + 1);
        self.set.project(x)
    }
}
