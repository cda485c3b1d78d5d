//! Convex differentiable objectives with exact gradients.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::vector::Vector;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_rows = rows.len();
        if n_rows == 0 {
            return Err(Error::EmptyVector);
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(Error::EmptyVector);
        }
        let mut data = Vec::with_capacity(n_rows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r);
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { context: "matrix entry" });
        }
        Ok(Self { rows: n_rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { rows: n, cols: n, data }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Self::identity(n);
        for (i, v) in d.iter().enumerate() {
            m.data[i * n + i] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul_vec(&self, x: &Vector) -> Result<Vec<f64>> {
        x.check_dim(self.cols)?;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x.iter()).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    /// `(1/p)‖x − shift‖^p`, `p > 1`. Its gradient is uniformly continuous
    /// but globally Lipschitz only for `p = 2`.
    PNorm { p: f64, shift: Vector },
    /// `½⟨x, Qx⟩ + ⟨b, x⟩ + c` with `Q` symmetric positive semidefinite.
    Quadratic { q: Matrix, b: Vector, c: f64 },
    /// `log Σ_i exp(⟨a_i, x⟩ + t_i)`.
    LogSumExp { rows: Matrix, offsets: Vector },
}

impl Objective {
    pub fn pnorm(p: f64, shift: Vector) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidObjective(format!("p-norm exponent must exceed 1, got {p}")));
        }
        Ok(Objective::PNorm { p, shift })
    }

    pub fn quadratic(q: Matrix, b: Vector, c: f64) -> Result<Self> {
        let n = b.dim();
        if q.rows() != n || q.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: q.rows().max(q.cols()) });
        }
        if !c.is_finite() {
            return Err(Error::NonFinite { context: "quadratic constant" });
        }
        let scale = q.data.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            for j in 0..i {
                if (q.get(i, j) - q.get(j, i)).abs() > 1e-12 * scale {
                    return Err(Error::InvalidObjective(format!("Q is not symmetric at ({i}, {j})")));
                }
            }
        }
        let min_eig = q.to_nalgebra().symmetric_eigen().eigenvalues.min();
        if min_eig < -1e-10 * scale {
            return Err(Error::InvalidObjective(format!(
                "Q is not positive semidefinite (eigenvalue {min_eig:e})"
            )));
        }
        Ok(Objective::Quadratic { q, b, c })
    }

    pub fn log_sum_exp(rows: Matrix, offsets: Vector) -> Result<Self> {
        if rows.rows() != offsets.dim() {
            return Err(Error::DimensionMismatch { expected: rows.rows(), found: offsets.dim() });
        }
        Ok(Objective::LogSumExp { rows, offsets })
    }

    pub fn dim(&self) -> usize {
        match self {
            Objective::PNorm { shift, .. } => shift.dim(),
            Objective::Quadratic { b, .. } => b.dim(),
            Objective::LogSumExp { rows, .. } => rows.cols(),
        }
    }

    pub fn eval(&self, x: &Vector) -> Result<f64> {
        x.check_dim(self.dim())?;
        let value = match self {
            Objective::PNorm { p, shift } => x.dist(shift)?.powf(*p) / p,
            Objective::Quadratic { q, b, c } => {
                let qx = q.mul_vec(x)?;
                let quad: f64 = qx.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
                0.5 * quad + b.dot(x)? + c
            }
            Objective::LogSumExp { rows, offsets } => {
                let z = affine(rows, offsets, x)?;
                let m = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                m + z.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
            }
        };
        if !value.is_finite() {
            return Err(Error::NonFinite { context: "objective value" });
        }
        Ok(value)
    }

    pub fn grad(&self, x: &Vector) -> Result<Vector> {
        x.check_dim(self.dim())?;
        match self {
            Objective::PNorm { p, shift } => {
                let d = x.sub(shift)?;
                let r = d.norm();
                if r == 0.0 {
                    // continuous extension; f is differentiable here for p > 1
                    return Vector::zeros(x.dim());
                }
                d.scale(r.powf(p - 2.0))
            }
            Objective::Quadratic { q, b, .. } => {
                let qx = q.mul_vec(x)?;
                Vector::new(qx.iter().zip(b.iter()).map(|(a, b)| a + b).collect())
                    .map_err(|_| Error::NonFinite { context: "gradient" })
            }
            Objective::LogSumExp { rows, offsets } => {
                let z = affine(rows, offsets, x)?;
                let m = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let weights: Vec<f64> = z.iter().map(|v| (v - m).exp()).collect();
                let total: f64 = weights.iter().sum();
                let mut g = vec![0.0; rows.cols()];
                for (i, w) in weights.iter().enumerate() {
                    for (gj, aij) in g.iter_mut().zip(rows.row(i)) {
                        *gj += w / total * aij;
                    }
                }
                Vector::new(g)
            }
        }
    }

    /// Largest coordinatewise gap between the gradient and a central
    /// difference with step `h`.
    pub fn check_gradient(&self, x: &Vector, h: f64) -> Result<f64> {
        if !(h > 0.0) {
            return Err(Error::InvalidObjective(format!("difference step must be positive, got {h}")));
        }
        let g = self.grad(x)?;
        let mut worst = 0.0f64;
        for i in 0..x.dim() {
            let e = Vector::basis(x.dim(), i)?;
            let fwd = self.eval(&Vector::axpby(1.0, x, h, &e)?)?;
            let bwd = self.eval(&Vector::axpby(1.0, x, -h, &e)?)?;
            worst = worst.max(((fwd - bwd) / (2.0 * h) - g[i]).abs());
        }
        Ok(worst)
    }
}

fn affine(rows: &Matrix, offsets: &Vector, x: &Vector) -> Result<Vec<f64>> {
    Ok(rows.mul_vec(x)?.iter().zip(offsets.iter()).map(|(a, t)| a + t).collect())
}
