//! `∂_t E − curl B + j = 0`, `∂_t B + curl E = 0` in the unknowns `(E, B)`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::{Constraint, ConstraintMonitor, ScalarSource};
use crate::field::{MatrixField, VectorField};
use crate::system::SystemDef;

/// `j(t, x)`.
pub type CurrentFn = dyn Fn(f64, &[f64]) -> [f64; 3] + Send + Sync;

pub struct MaxwellModel {
    pub system: SystemDef,
    pub div_e: ConstraintMonitor,
    pub div_b: ConstraintMonitor,
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Coefficient of `∂_j` (already symmetric, so the symmetrizer is the identity).
pub fn maxwell_coefficient(j: usize) -> DMatrix<f64> {
    let mut mj = DMatrix::zeros(6, 6);
    for i in 0..3 {
        for k in 0..3 {
            let e = levi_civita(i, j, k);
            mj[(i, 3 + k)] = -e;
            mj[(3 + i, k)] = e;
        }
    }
    mj
}

pub fn maxwell_system(charge: Option<ScalarSource>, current: Option<Arc<CurrentFn>>) -> MaxwellModel {
    let mut coeff = vec![MatrixField::identity(6)];
    coeff.extend((0..3).map(|j| MatrixField::constant(maxwell_coefficient(j))));
    let source = match current {
        None => VectorField::zero(6),
        Some(j) => VectorField::from_fn(6, move |x, _| {
            let c = j(x[0], &x[1..]);
            DVector::from_column_slice(&[-c[0], -c[1], -c[2], 0.0, 0.0, 0.0])
        }),
    };
    let system = SystemDef::new(3, coeff, source).expect("Maxwell coefficients are well formed");
    MaxwellModel {
        system,
        div_e: ConstraintMonitor::new("div_e", Constraint::Divergence { offset: 0, charge }),
        div_b: ConstraintMonitor::new("div_b", Constraint::Divergence { offset: 3, charge: None }),
    }
}
