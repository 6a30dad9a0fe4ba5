//! Ready-made systems with their symmetrizers, admissible sets and constraint monitors.

pub mod ck;
pub mod euler;
pub mod maxwell;
pub mod scalar;
pub mod tricomi;
pub mod wave;

use std::sync::Arc;

use crate::error::Result;
use crate::grid::GridField;
use crate::lxf::Monitor;

pub use ck::{ck_realify, realify, CkModel};
pub use euler::{euler_conservative_1d, euler_polytropic_sh, euler_sh_box, isothermal_euler_1d};
pub use maxwell::{maxwell_system, MaxwellModel};
pub use scalar::{advection, burgers, burgers_entropy_pair, polynomial_law, polynomial_entropy_pair};
pub use tricomi::{tricomi_system, TricomiCertificate, TricomiModel};
pub use wave::{wave_system, WaveCoefficients, WaveModel};

/// A constraint residual may grow to this multiple of its initial value before the check fails.
pub const CONSTRAINT_GROWTH_LIMIT: f64 = 3.0;

pub type ScalarSource = Arc<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;

/// Differential relation that the exact evolution preserves.
#[derive(Clone)]
pub enum Constraint {
    /// `v_j − D_j v_0` for the first-order wave system (`v_0` is component 0, `v_j` component `j`).
    Gradient,
    /// `D_j u^{offset + j} − ρ(t, x)`: a centred divergence of three consecutive components.
    Divergence { offset: usize, charge: Option<ScalarSource> },
    /// `D_x u + i D_y u` for `m` complex unknowns stored as `(Re u, Im u)`.
    CauchyRiemann { m: usize },
}

/// Discrete `L²` norm of a constraint residual, taken over the cells whose centred
/// stencil stays inside the grid.
#[derive(Clone)]
pub struct ConstraintMonitor {
    pub name: String,
    pub constraint: Constraint,
}

fn centred(state: &GridField, c: usize, axis: usize, a: usize) -> f64 {
    let plus = state.cell(state.neighbor(c, axis, true))[a];
    let minus = state.cell(state.neighbor(c, axis, false))[a];
    (plus - minus) / (2.0 * state.h[axis])
}

impl ConstraintMonitor {
    pub fn new(name: &str, constraint: Constraint) -> Self {
        ConstraintMonitor {
            name: name.into(),
            constraint,
        }
    }

    /// Squared residual at one cell.
    fn residual_sq(&self, state: &GridField, c: usize, t: f64) -> f64 {
        let n = state.n();
        match &self.constraint {
            Constraint::Gradient => (0..n)
                .map(|j| (state.cell(c)[j + 1] - centred(state, c, j, 0)).powi(2))
                .sum(),
            Constraint::Divergence { offset, charge } => {
                let div: f64 = (0..n).map(|j| centred(state, c, j, offset + j)).sum();
                let rho = charge.as_ref().map_or(0.0, |q| q(t, &state.center(c)));
                (div - rho).powi(2)
            }
            Constraint::CauchyRiemann { m } => (0..*m)
                .map(|a| {
                    let re = centred(state, c, 0, a) - centred(state, c, 1, m + a);
                    let im = centred(state, c, 0, m + a) + centred(state, c, 1, a);
                    re * re + im * im
                })
                .sum(),
        }
    }

    pub fn value(&self, state: &GridField, t: f64) -> f64 {
        let mut sum = 0.0;
        for c in 0..state.cells() {
            if (0..state.n()).any(|j| state.touches_ghost(c, j)) {
                continue;
            }
            sum += self.residual_sq(state, c, t);
        }
        (sum * state.cell_volume()).sqrt()
    }
}

impl Monitor for ConstraintMonitor {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn columns(&self) -> Vec<String> {
        vec!["residual".into()]
    }

    fn evaluate(&self, t: f64, state: &GridField) -> Result<Vec<f64>> {
        state.check_finite(t)?;
        Ok(vec![self.value(state, t)])
    }
}
