//! Euclidean projection onto a polyhedron with the dual active-set method
//! of Goldfarb and Idnani, specialised to the identity Hessian.
//!
//! Starting from the unconstrained minimizer `a`, the most violated
//! constraint is added one at a time while the active ones stay tight;
//! constraints whose multiplier would turn negative are dropped on the
//! way. Steps are taken in the null space of the active normals through
//! an orthonormal basis, so a normal lying almost in the span of the
//! active ones still gives an accurate primal step even though its
//! multiplier is huge.

use nalgebra::{DMatrix, DVector};

use crate::sets::{FeasibleSet, Halfcut, SetKind};

/// `⟨normal, x⟩ ≤ offset`, or `= offset`.
#[derive(Debug, Clone)]
pub(crate) struct Row {
    normal: DVector<f64>,
    offset: f64,
    equality: bool,
}

/// Explicit rows of a polyhedral set; `None` for a ball.
pub(crate) fn rows_of(set: &FeasibleSet) -> Option<Vec<Row>> {
    let n = set.dim();
    let unit = |i: usize, s: f64| DVector::from_fn(n, |j, _| if j == i { s } else { 0.0 });
    let linear = |a: &[f64], b: f64, equality: bool| Row { normal: DVector::from_column_slice(a), offset: b, equality };
    Some(match set.kind() {
        SetKind::Box { lower, upper } => {
            let mut out = Vec::new();
            for i in 0..n {
                if lower[i].is_finite() {
                    out.push(Row { normal: unit(i, -1.0), offset: -lower[i], equality: false });
                }
                if upper[i].is_finite() {
                    out.push(Row { normal: unit(i, 1.0), offset: upper[i], equality: false });
                }
            }
            out
        }
        SetKind::Ball { .. } => return None,
        SetKind::Halfspace { normal, offset } => vec![linear(normal.as_slice(), *offset, false)],
        SetKind::Hyperplane { normal, offset } => vec![linear(normal.as_slice(), *offset, true)],
        SetKind::Simplex { scale, .. } => {
            let mut out: Vec<Row> = (0..n).map(|i| Row { normal: unit(i, -1.0), offset: 0.0, equality: false }).collect();
            out.push(linear(&vec![1.0; n], *scale, true));
            out
        }
        SetKind::WholeSpace { .. } => Vec::new(),
    })
}

pub(crate) fn cut_row(cut: &Halfcut) -> Row {
    Row { normal: DVector::from_column_slice(cut.normal.as_slice()), offset: cut.offset, equality: false }
}

struct Active {
    row: usize,
    /// `−1` when an equality entered from below.
    sign: f64,
    multiplier: f64,
}

/// Rounding-level slack on `⟨n, x⟩ − b`.
fn slack(row: &Row, norm: f64, x: &DVector<f64>) -> f64 {
    16.0 * f64::EPSILON * (norm * (1.0 + x.norm()) + row.offset.abs())
}

/// Null-space component `z` of `n` and coefficients `r` with `n = N r + z`.
fn split(rows: &[Row], active: &[Active], n: &DVector<f64>) -> Option<(DVector<f64>, DVector<f64>)> {
    if active.is_empty() {
        return Some((n.clone(), DVector::zeros(0)));
    }
    let dim = n.len();
    let basis = DMatrix::from_fn(dim, active.len(), |i, k| active[k].sign * rows[active[k].row].normal[i]);
    let qr = basis.qr();
    let q = qr.q();
    let coeffs = q.transpose() * n;
    let mut z = n - &q * &coeffs;
    // second pass restores orthogonality lost to cancellation
    z -= &q * (q.transpose() * &z);
    let r = qr.r().solve_upper_triangular(&coeffs)?;
    Some((z, r))
}

/// Projection of `anchor` onto `{x : rows}`, or `None` when the rows are
/// inconsistent or the iteration budget runs out.
pub(crate) fn project(rows: &[Row], anchor: &DVector<f64>) -> Option<DVector<f64>> {
    let norms: Vec<f64> = rows.iter().map(|r| r.normal.norm()).collect();
    let mut x = anchor.clone();
    let mut active: Vec<Active> = Vec::new();
    let mut budget = 20 * (rows.len() + anchor.len()) + 10;

    loop {
        // most violated inactive row, measured as a distance
        let mut pick: Option<(usize, f64, f64)> = None;
        for (i, row) in rows.iter().enumerate() {
            if norms[i] == 0.0 || active.iter().any(|a| a.row == i) {
                continue;
            }
            let s = row.normal.dot(&x) - row.offset;
            let (sign, s) = if row.equality && s < 0.0 { (-1.0, -s) } else { (1.0, s) };
            if s > slack(row, norms[i], &x) && pick.is_none_or(|(_, _, d)| s / norms[i] > d) {
                pick = Some((i, sign, s / norms[i]));
            }
        }
        let Some((p, sign, _)) = pick else { return Some(x) };
        let np = &rows[p].normal * sign;
        let bp = rows[p].offset * sign;
        let mut added = 0.0;

        loop {
            budget = budget.checked_sub(1)?;
            let (z, r) = split(rows, &active, &np)?;
            let s = np.dot(&x) - bp;
            let t_full = if z.norm() > 1e-13 * norms[p] { s.max(0.0) / z.norm_squared() } else { f64::INFINITY };
            let mut t_drop = f64::INFINITY;
            let mut drop = None;
            for (k, a) in active.iter().enumerate() {
                if !rows[a.row].equality && r[k] > 0.0 && a.multiplier / r[k] < t_drop {
                    t_drop = a.multiplier / r[k];
                    drop = Some(k);
                }
            }
            let t = t_full.min(t_drop);
            if !t.is_finite() {
                return None;
            }
            for (k, a) in active.iter_mut().enumerate() {
                a.multiplier -= t * r[k];
            }
            added += t;
            if t_full.is_finite() {
                x -= &z * t;
            }
            if t_full <= t_drop {
                for a in active.iter_mut().filter(|a| !rows[a.row].equality) {
                    a.multiplier = a.multiplier.max(0.0);
                }
                active.push(Active { row: p, sign, multiplier: added });
                break;
            }
            active.remove(drop.expect("a finite drop step has an index"));
        }
    }
}
