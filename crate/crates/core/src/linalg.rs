//! Dense linear-algebra helpers shared by every module: the positive-definiteness
//! oracle, symmetric generalized eigenvalues and central finite differences.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Default relative pivot tolerance of [`positive_definite`].
pub const PD_TOL: f64 = 1e-10;

/// Default relative symmetry tolerance (scaled by the matrix infinity-norm).
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Induced infinity-norm (maximum absolute row sum).
pub fn norm_inf(a: &DMatrix<f64>) -> f64 {
    a.row_iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn vec_norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// `‖A − Aᵀ‖_∞`.
pub fn symmetry_defect(a: &DMatrix<f64>) -> f64 {
    norm_inf(&(a - a.transpose()))
}

/// True when `‖A − Aᵀ‖_∞ ≤ tol · ‖A‖_∞`.
pub fn is_symmetric(a: &DMatrix<f64>, tol: f64) -> bool {
    symmetry_defect(a) <= tol * norm_inf(a)
}

pub fn symmetric_part(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// Pivot sequence of a diagonally pivoted Cholesky factorization.
///
/// The factorization stops at the first pivot that is not above `threshold`;
/// that pivot is the last entry of `pivots` and `completed` is false.
#[derive(Debug, Clone, PartialEq)]
pub struct PivotReport {
    pub pivots: Vec<f64>,
    pub completed: bool,
}

impl PivotReport {
    pub fn min_pivot(&self) -> f64 {
        self.pivots.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Runs the pivoted factorization on the symmetric part of `a`.
pub fn cholesky_pivots(a: &DMatrix<f64>, threshold: f64) -> PivotReport {
    let m = a.nrows();
    let mut w = symmetric_part(a);
    let mut pivots = Vec::with_capacity(m);
    for k in 0..m {
        let mut p = k;
        for i in k + 1..m {
            if w[(i, i)] > w[(p, p)] {
                p = i;
            }
        }
        if p != k {
            w.swap_rows(k, p);
            w.swap_columns(k, p);
        }
        let pivot = w[(k, k)];
        pivots.push(pivot);
        if !(pivot > threshold) {
            return PivotReport {
                pivots,
                completed: false,
            };
        }
        let l = pivot.sqrt();
        for i in k + 1..m {
            w[(i, k)] /= l;
        }
        for j in k + 1..m {
            let ljk = w[(j, k)];
            for i in j..m {
                let v = w[(i, k)] * ljk;
                w[(i, j)] -= v;
                if i != j {
                    w[(j, i)] = w[(i, j)];
                }
            }
        }
    }
    PivotReport {
        pivots,
        completed: true,
    }
}

/// The positive-definiteness oracle used throughout the crate.
///
/// `mat` must be symmetric up to `tol · ‖mat‖_∞`; its symmetric part is then
/// factorized and the answer is true iff every pivot exceeds
/// `tol · max_i |mat_ii|`.
pub fn positive_definite(mat: &DMatrix<f64>, tol: f64) -> Result<bool> {
    if mat.nrows() != mat.ncols() {
        return Err(Error::Dimension {
            what: "square matrix".into(),
            expected: mat.nrows(),
            got: mat.ncols(),
        });
    }
    let defect = symmetry_defect(mat);
    let allowed = tol * norm_inf(mat);
    if defect > allowed {
        return Err(Error::NotSymmetric {
            defect,
            tolerance: allowed,
        });
    }
    let max_diag = mat.diagonal().iter().fold(0.0, |acc: f64, d| acc.max(d.abs()));
    Ok(cholesky_pivots(mat, tol * max_diag).completed)
}

/// `S^{-1/2}` for a symmetric positive-definite `S`.
pub fn inverse_sqrt_spd(s: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !positive_definite(s, PD_TOL)? {
        return Err(Error::NotPositiveDefinite {
            context: "matrix to be square-rooted".into(),
        });
    }
    let eig = SymmetricEigen::new(symmetric_part(s));
    let d = eig.eigenvalues.map(|x| 1.0 / x.sqrt());
    let v = &eig.eigenvectors;
    Ok(v * DMatrix::from_diagonal(&d) * v.transpose())
}

/// Eigenvalues `λ` of `P w = λ S w` for symmetric `P` and symmetric positive-definite `S`,
/// sorted ascending. Computed through `S^{-1/2} P S^{-1/2}`.
pub fn generalized_eigenvalues(p: &DMatrix<f64>, s: &DMatrix<f64>) -> Result<Vec<f64>> {
    let r = inverse_sqrt_spd(s)?;
    let reduced = symmetric_part(&(&r * symmetric_part(p) * &r));
    let mut values: Vec<f64> = SymmetricEigen::new(reduced).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Central-difference step `ε^{1/3} · max(1, |x|)`.
pub fn fd_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * x.abs().max(1.0)
}

/// Central-difference Jacobian `∂f_i/∂u_j` (rows index outputs).
pub fn fd_jacobian<F>(f: F, u: &[f64]) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let m = u.len();
    let mut probe = u.to_vec();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(m);
    for j in 0..m {
        let h = fd_step(u[j]);
        probe[j] = u[j] + h;
        let plus = f(&probe);
        probe[j] = u[j] - h;
        let minus = f(&probe);
        probe[j] = u[j];
        cols.push(
            plus.iter()
                .zip(&minus)
                .map(|(p, q)| (p - q) / (2.0 * h))
                .collect(),
        );
    }
    let rows = cols.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows, m, |i, j| cols[j][i])
}

pub fn fd_gradient<F>(f: F, u: &[f64]) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut probe = u.to_vec();
    (0..u.len())
        .map(|j| {
            let h = fd_step(u[j]);
            probe[j] = u[j] + h;
            let plus = f(&probe);
            probe[j] = u[j] - h;
            let minus = f(&probe);
            probe[j] = u[j];
            (plus - minus) / (2.0 * h)
        })
        .collect()
}

/// Second-order central Hessian with step `ε^{1/4} · max(1, |x|)`.
pub fn fd_hessian<F>(f: F, u: &[f64]) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let m = u.len();
    let steps: Vec<f64> = u.iter().map(|x| f64::EPSILON.powf(0.25) * x.abs().max(1.0)).collect();
    let mut probe = u.to_vec();
    let mut eval = |di: (usize, f64), dj: (usize, f64)| {
        probe.copy_from_slice(u);
        probe[di.0] += di.1;
        probe[dj.0] += dj.1;
        f(&probe)
    };
    DMatrix::from_fn(m, m, |i, j| {
        let (hi, hj) = (steps[i], steps[j]);
        (eval((i, hi), (j, hj)) - eval((i, hi), (j, -hj)) - eval((i, -hi), (j, hj))
            + eval((i, -hi), (j, -hj)))
            / (4.0 * hi * hj)
    })
}

/// Solves `a x = b` by LU; `context` names the matrix in the error.
pub fn solve(a: &DMatrix<f64>, b: &DVector<f64>, context: &str) -> Result<DVector<f64>> {
    a.clone().lu().solve(b).ok_or_else(|| Error::Singular {
        context: context.to_string(),
    })
}
