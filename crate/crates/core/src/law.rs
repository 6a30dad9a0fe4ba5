//! Conservation laws `∂_t u + ∂_j f^j(u) = N(x, u)`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{check_len, Error, Result};
use crate::field::{MatrixField, StateCheck, VectorField};
use crate::linalg::fd_jacobian;
use crate::system::{probe_normals, StateBox, SystemDef};

pub type FluxFn = dyn Fn(usize, &[f64]) -> Vec<f64> + Send + Sync;
pub type FluxJacobianFn = dyn Fn(usize, &[f64]) -> DMatrix<f64> + Send + Sync;
pub type SpeedFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// A system of conservation laws with time flux `f^{A0} = u^A`.
///
/// `flux(j, u)` returns the space flux `f^j(u)` for `j = 0..n` (axis index).
#[derive(Clone)]
pub struct ConservationLaw {
    pub n: usize,
    pub m: usize,
    flux: Arc<FluxFn>,
    jacobian: Option<Arc<FluxJacobianFn>>,
    wave_speed: Option<Arc<SpeedFn>>,
    pub source: VectorField,
    pub state_box: StateBox,
    pub admissible: Option<StateCheck>,
}

impl fmt::Debug for ConservationLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConservationLaw")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("exact_jacobian", &self.jacobian.is_some())
            .field("source", &self.source)
            .field("state_box", &self.state_box)
            .finish()
    }
}

impl ConservationLaw {
    pub fn new<F>(n: usize, m: usize, flux: F, state_box: StateBox) -> Result<Self>
    where
        F: Fn(usize, &[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        if !(1..=3).contains(&n) {
            return Err(Error::InvalidParameter {
                name: "n".into(),
                reason: format!("space dimension must be 1, 2 or 3 (got {n})"),
            });
        }
        check_len("state box", m, state_box.dim())?;
        Ok(ConservationLaw {
            n,
            m,
            flux: Arc::new(flux),
            jacobian: None,
            wave_speed: None,
            source: VectorField::zero(m),
            state_box,
            admissible: None,
        })
    }

    /// Scalar one-dimensional law `u_t + f(u)_x = 0`.
    pub fn scalar<F>(f: F, state_box: StateBox) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ConservationLaw::new(1, 1, move |_, u| vec![f(u[0])], state_box)
    }

    pub fn with_jacobian<J>(mut self, jac: J) -> Self
    where
        J: Fn(usize, &[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        self.jacobian = Some(Arc::new(jac));
        self
    }

    /// Supplies an exact bound on `|λ|` over all directions, used for the CFL check.
    pub fn with_wave_speed<S>(mut self, speed: S) -> Self
    where
        S: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.wave_speed = Some(Arc::new(speed));
        self
    }

    pub fn with_source(mut self, source: VectorField) -> Result<Self> {
        check_len("source dimension", self.m, source.dim())?;
        self.source = source;
        Ok(self)
    }

    pub fn with_admissibility(mut self, check: StateCheck) -> Self {
        self.admissible = Some(check);
        self
    }

    pub fn has_exact_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    pub fn flux(&self, j: usize, u: &[f64]) -> Vec<f64> {
        (self.flux)(j, u)
    }

    /// `∂f^j/∂u`: the supplied Jacobian, or the shared central-difference one.
    pub fn jacobian(&self, j: usize, u: &[f64]) -> DMatrix<f64> {
        match &self.jacobian {
            Some(jac) => jac(j, u),
            None => fd_jacobian(|w| (self.flux)(j, w), u),
        }
    }

    pub fn check_in_box(&self, u: &[f64]) -> Result<()> {
        check_len("state", self.m, u.len())?;
        if self.state_box.contains(u) {
            Ok(())
        } else {
            Err(Error::OutsideBox { state: u.to_vec() })
        }
    }

    /// Largest `|λ|` of `Σ_j ν_j ∂f^j/∂u` over the probe normals.
    pub fn max_speed(&self, u: &[f64]) -> f64 {
        if let Some(speed) = &self.wave_speed {
            return speed(u);
        }
        let jacs: Vec<DMatrix<f64>> = (0..self.n).map(|j| self.jacobian(j, u)).collect();
        let mut best: f64 = 0.0;
        for nu in probe_normals(self.n) {
            let symbol = jacs
                .iter()
                .zip(&nu)
                .fold(DMatrix::zeros(self.m, self.m), |acc, (jm, w)| acc + jm * *w);
            for ev in symbol.complex_eigenvalues().iter() {
                best = best.max(ev.norm());
            }
        }
        best
    }

    /// Quasi-linear form `∂_t u + (∂f^j/∂u) ∂_j u = N`.
    pub fn quasilinear(&self) -> SystemDef {
        let mut coeff = vec![MatrixField::identity(self.m)];
        for j in 0..self.n {
            let law = self.clone();
            coeff.push(MatrixField::from_fn(self.m, move |_, u| law.jacobian(j, u)));
        }
        let mut sys = SystemDef::new(self.n, coeff, self.source.clone())
            .expect("conservation law dimensions are validated at construction");
        sys.admissible = self.admissible.clone();
        sys
    }
}
