//! Coefficient fields evaluated at a space-time point `x = (t, x¹, …, xⁿ)` and a state `u`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type MatrixFn = dyn Fn(&[f64], &[f64]) -> DMatrix<f64> + Send + Sync;
pub type VectorFn = dyn Fn(&[f64], &[f64]) -> DVector<f64> + Send + Sync;

/// An `m × m` matrix-valued function of `(x, u)`.
#[derive(Clone)]
pub enum MatrixField {
    Constant(DMatrix<f64>),
    Function { m: usize, eval: Arc<MatrixFn> },
}

impl MatrixField {
    pub fn constant(mat: DMatrix<f64>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols(), "matrix field must be square");
        MatrixField::Constant(mat)
    }

    pub fn identity(m: usize) -> Self {
        MatrixField::Constant(DMatrix::identity(m, m))
    }

    pub fn zeros(m: usize) -> Self {
        MatrixField::Constant(DMatrix::zeros(m, m))
    }

    pub fn from_fn<F>(m: usize, f: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        MatrixField::Function {
            m,
            eval: Arc::new(f),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            MatrixField::Constant(mat) => mat.nrows(),
            MatrixField::Function { m, .. } => *m,
        }
    }

    pub fn as_constant(&self) -> Option<&DMatrix<f64>> {
        match self {
            MatrixField::Constant(mat) => Some(mat),
            MatrixField::Function { .. } => None,
        }
    }

    pub fn evaluate(&self, x: &[f64], u: &[f64]) -> Result<DMatrix<f64>> {
        let mat = match self {
            MatrixField::Constant(mat) => mat.clone(),
            MatrixField::Function { eval, .. } => eval(x, u),
        };
        let m = self.dim();
        if mat.nrows() != m || mat.ncols() != m {
            return Err(Error::Dimension {
                what: "matrix field value".into(),
                expected: m,
                got: if mat.nrows() != m { mat.nrows() } else { mat.ncols() },
            });
        }
        Ok(mat)
    }

    /// Pointwise product `self · other`.
    pub fn compose(&self, other: &MatrixField) -> MatrixField {
        match (self, other) {
            (MatrixField::Constant(a), MatrixField::Constant(b)) => MatrixField::Constant(a * b),
            _ => {
                let (a, b) = (self.clone(), other.clone());
                MatrixField::from_fn(self.dim(), move |x, u| {
                    let left = a.evaluate(x, u).expect("left factor dimension");
                    let right = b.evaluate(x, u).expect("right factor dimension");
                    left * right
                })
            }
        }
    }
}

impl fmt::Debug for MatrixField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixField::Constant(mat) => f.debug_tuple("Constant").field(mat).finish(),
            MatrixField::Function { m, .. } => write!(f, "Function {{ m: {m} }}"),
        }
    }
}

/// A length-`m` vector-valued function of `(x, u)` (source terms).
#[derive(Clone)]
pub enum VectorField {
    Zero(usize),
    Function { m: usize, eval: Arc<VectorFn> },
}

impl VectorField {
    pub fn zero(m: usize) -> Self {
        VectorField::Zero(m)
    }

    pub fn from_fn<F>(m: usize, f: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> DVector<f64> + Send + Sync + 'static,
    {
        VectorField::Function {
            m,
            eval: Arc::new(f),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            VectorField::Zero(m) | VectorField::Function { m, .. } => *m,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, VectorField::Zero(_))
    }

    pub fn evaluate(&self, x: &[f64], u: &[f64]) -> Result<DVector<f64>> {
        match self {
            VectorField::Zero(m) => Ok(DVector::zeros(*m)),
            VectorField::Function { m, eval } => {
                let v = eval(x, u);
                crate::error::check_len("vector field value", *m, v.len())?;
                Ok(v)
            }
        }
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VectorField::Zero(m) => write!(f, "Zero({m})"),
            VectorField::Function { m, .. } => write!(f, "Function {{ m: {m} }}"),
        }
    }
}

type CheckFn = dyn Fn(&[f64]) -> std::result::Result<(), String> + Send + Sync;

/// Pointwise admissibility test on states; returns a reason on rejection.
#[derive(Clone)]
pub struct StateCheck(Arc<CheckFn>);

impl StateCheck {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&[f64]) -> std::result::Result<(), String> + Send + Sync + 'static,
    {
        StateCheck(Arc::new(f))
    }

    pub fn check(&self, u: &[f64]) -> std::result::Result<(), String> {
        (self.0)(u)
    }
}

impl fmt::Debug for StateCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("StateCheck")
    }
}
