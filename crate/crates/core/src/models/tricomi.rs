//! Tricomi's equation `y φ_xx − φ_yy = 0` as a symmetric positive system.
//!
//! With `u = e^{−λx}(φ_x, φ_y)` one has `L = diag(y, 1)(∂_x + λ) − [[0,1],[1,0]] ∂_y`,
//! and `K = Z L` with `Z = [[1, y], [1, 1]]` has coefficients
//! `A¹ = [[y, y], [y, 1]]`, `A² = −[[y, 1], [1, 1]]`, `B = λ A¹`, so that
//! `B − ½(∂_x A¹ + ∂_y A²) = [[½ + λy, λy], [λy, λ]]`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::MatrixField;
use crate::linalg::{cholesky_pivots, positive_definite, PD_TOL};

pub const CERTIFICATE_SAMPLES: usize = 1001;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TricomiCertificate {
    pub positive: bool,
    /// Smallest Cholesky pivot over the samples.
    pub min_pivot: f64,
    pub worst_y: f64,
    /// `(y, smallest pivot)` at each sample.
    pub pivots: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct TricomiModel {
    pub lambda: f64,
    pub y_bound: f64,
    /// Coefficients of `∂_x`, `∂_y` and the zero-order term of `K`, as fields of `(x, y)`.
    pub a1: MatrixField,
    pub a2: MatrixField,
    pub b: MatrixField,
    pub certificate: TricomiCertificate,
}

/// `B − ½(∂_x A¹ + ∂_y A²)` at height `y`.
pub fn positivity_matrix(lambda: f64, y: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.5 + lambda * y, lambda * y, lambda * y, lambda])
}

/// Supremum of the `λ` for which the matrix is positive definite on `|y| ≤ y_bound`.
pub fn lambda_max(y_bound: f64) -> f64 {
    if y_bound == 0.0 {
        f64::INFINITY
    } else {
        1.0 / (2.0 * (y_bound * y_bound + y_bound))
    }
}

/// Builds `K` and certifies positivity on `|y| ≤ y_bound` from
/// [`CERTIFICATE_SAMPLES`] equally spaced heights. `λ = 0` gives a failing
/// certificate; negative `λ` is an error.
pub fn tricomi_system(lambda: f64, y_bound: f64) -> Result<TricomiModel> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "lambda".into(),
            reason: format!("must be non-negative and finite (got {lambda})"),
        });
    }
    if !(y_bound >= 0.0 && y_bound.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "y_bound".into(),
            reason: format!("must be non-negative and finite (got {y_bound})"),
        });
    }
    let mut pivots = Vec::with_capacity(CERTIFICATE_SAMPLES);
    let mut positive = true;
    for i in 0..CERTIFICATE_SAMPLES {
        let y = -y_bound + 2.0 * y_bound * i as f64 / (CERTIFICATE_SAMPLES - 1) as f64;
        let p = positivity_matrix(lambda, y);
        positive &= positive_definite(&p, PD_TOL)?;
        pivots.push((y, cholesky_pivots(&p, f64::NEG_INFINITY).min_pivot()));
    }
    let (worst_y, min_pivot) = pivots
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one sample");
    let a1 = MatrixField::from_fn(2, |x, _| {
        let y = x[x.len() - 1];
        DMatrix::from_row_slice(2, 2, &[y, y, y, 1.0])
    });
    let a2 = MatrixField::from_fn(2, |x, _| {
        let y = x[x.len() - 1];
        -DMatrix::from_row_slice(2, 2, &[y, 1.0, 1.0, 1.0])
    });
    let b = MatrixField::from_fn(2, move |x, _| {
        let y = x[x.len() - 1];
        DMatrix::from_row_slice(2, 2, &[y, y, y, 1.0]) * lambda
    });
    Ok(TricomiModel {
        lambda,
        y_bound,
        a1,
        a2,
        b,
        certificate: TricomiCertificate {
            positive,
            min_pivot,
            worst_y,
            pivots,
        },
    })
}
