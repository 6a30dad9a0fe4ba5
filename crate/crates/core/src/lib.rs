//! Toolkit for symmetric-hyperbolic first-order systems and conservation laws.
//!
//! * [`system`]: quasi-linear systems, symmetry and hyperbolicity predicates, characteristic speeds.
//! * [`entropy`]: entropy pairs, entropy variables, Legendre duality, Hessian symmetrizers.
//! * [`energy`]: energy identity diagnostics and finite propagation of support for linear systems.
//! * [`lxf`]: the Lax-Friedrichs integrator, explicit viscous regularization and run traces.
//! * [`shocks`]: Rankine-Hugoniot relations, entropy admissibility and scalar Riemann problems.
//! * [`models`]: wave, Maxwell, polytropic Euler, Tricomi and Cauchy-Kowalewska systems.

pub mod energy;
pub mod entropy;
pub mod error;
pub mod field;
pub mod grid;
pub mod law;
pub mod linalg;
pub mod lxf;
pub mod models;
pub mod output;
pub mod shocks;
pub mod system;

pub use error::{Error, Result};
pub use field::{MatrixField, StateCheck, VectorField};
pub use grid::{Boundary, GridField};
pub use law::ConservationLaw;
pub use system::{Sample, StateBox, SystemDef};
