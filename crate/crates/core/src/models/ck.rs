//! Realification of the complex system `u_t = A u_z + B` in one complex variable
//! `z = x + iy`. For analytic `u`, `u_z = u_x = −i u_y`, so
//! `u_t = H₁ u_x + H₂ u_y + B` with the Hermitian `H₁ = ½(A + A*)`,
//! `H₂ = (1/2i)(A − A*)`. Complex unknowns are stored as `(Re u, Im u)`.

use std::sync::Arc;

use nalgebra::{Complex, DMatrix, DVector};

use super::{Constraint, ConstraintMonitor};
use crate::error::{Error, Result};
use crate::field::{MatrixField, VectorField};
use crate::system::{symmetry_residual, Sample, SystemDef};

pub type C64 = Complex<f64>;
/// `B(t, x, y, u)` for complex `u`.
pub type ComplexSourceFn = dyn Fn(&[f64], &[C64]) -> Vec<C64> + Send + Sync;

/// Tolerance on the symmetry of the realified coefficients.
pub const REALIFY_TOL: f64 = 1e-12;

/// Real form `[[Re H, −Im H], [Im H, Re H]]` of a complex matrix.
pub fn realify(h: &DMatrix<C64>) -> DMatrix<f64> {
    let m = h.nrows();
    let mut r = DMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            let z = h[(i, j)];
            r[(i, j)] = z.re;
            r[(i, m + j)] = -z.im;
            r[(m + i, j)] = z.im;
            r[(m + i, m + j)] = z.re;
        }
    }
    r
}

/// The Hermitian pair `(½(A + A*), (1/2i)(A − A*))`.
pub fn hermitian_parts(a: &DMatrix<C64>) -> (DMatrix<C64>, DMatrix<C64>) {
    let adj = a.adjoint();
    let half = C64::new(0.5, 0.0);
    let h1 = (a + &adj) * half;
    let h2 = (a - &adj) * C64::new(0.0, -0.5);
    (h1, h2)
}

pub struct CkModel {
    pub system: SystemDef,
    pub cauchy_riemann: ConstraintMonitor,
}

/// Builds the real system `u_t − H₁ u_x − H₂ u_y = B` (`m` complex unknowns, `2m` real
/// components) and verifies symmetry of its coefficients.
pub fn ck_realify(a: &DMatrix<C64>, source: Option<Arc<ComplexSourceFn>>) -> Result<CkModel> {
    let m = a.nrows();
    if a.ncols() != m || m == 0 {
        return Err(Error::Dimension {
            what: "complex coefficient A".into(),
            expected: m,
            got: a.ncols(),
        });
    }
    let (h1, h2) = hermitian_parts(a);
    let coeff = vec![
        MatrixField::identity(2 * m),
        MatrixField::constant(-realify(&h1)),
        MatrixField::constant(-realify(&h2)),
    ];
    let src = match source {
        None => VectorField::zero(2 * m),
        Some(b) => VectorField::from_fn(2 * m, move |x, u| {
            let uc: Vec<C64> = (0..m).map(|i| C64::new(u[i], u[m + i])).collect();
            let out = b(x, &uc);
            DVector::from_iterator(2 * m, out.iter().map(|z| z.re).chain(out.iter().map(|z| z.im)))
        }),
    };
    let system = SystemDef::new(2, coeff, src)?;
    let residual = symmetry_residual(&system, &[Sample::new(vec![0.0; 3], vec![0.0; 2 * m])])?;
    let worst = residual.iter().copied().fold(0.0, f64::max);
    if worst > REALIFY_TOL {
        return Err(Error::Construction {
            detail: format!("realified coefficients not symmetric (residual {worst:e})"),
        });
    }
    Ok(CkModel {
        system,
        cauchy_riemann: ConstraintMonitor::new("cauchy_riemann", Constraint::CauchyRiemann { m }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(z: C64) -> DMatrix<C64> {
        DMatrix::from_element(1, 1, z)
    }

    #[test]
    fn imaginary_unit_gives_pure_y_advection() {
        let (h1, h2) = hermitian_parts(&scalar(C64::new(0.0, 1.0)));
        assert_eq!(h1[(0, 0)], C64::new(0.0, 0.0));
        assert_eq!(h2[(0, 0)], C64::new(1.0, 0.0));
    }

    #[test]
    fn realify_is_a_ring_map() {
        let a = DMatrix::from_row_slice(2, 2, &[C64::new(1.0, 2.0), C64::new(0.5, -1.0), C64::new(-0.3, 0.0), C64::new(0.0, 4.0)]);
        let b = DMatrix::from_row_slice(2, 2, &[C64::new(0.1, 0.2), C64::new(-2.0, 1.0), C64::new(1.0, 1.0), C64::new(3.0, -0.5)]);
        assert!((realify(&(&a * &b)) - realify(&a) * realify(&b)).amax() < 1e-14);
    }

    #[test]
    fn real_advection_speed() {
        let model = ck_realify(&scalar(C64::new(2.0, 0.0)), None).unwrap();
        let mx = model.system.coeff[1].as_constant().unwrap();
        assert_eq!(mx, &(-DMatrix::identity(2, 2) * 2.0));
    }
}
