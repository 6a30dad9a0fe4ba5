//! First-order reduction of `u_tt + 2a^j ∂_jt u − a^{jk} ∂_jk u = f`
//! in the unknowns `v = (u, ∂_1 u, …, ∂_n u, ∂_t u)`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::{Constraint, ConstraintMonitor};
use crate::error::{check_len, Error, Result};
use crate::field::{MatrixField, VectorField};
use crate::linalg::{self, positive_definite, PD_TOL};
use crate::system::SystemDef;

pub type DriftFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
pub type MetricFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;
/// `f(t, x, v)`.
pub type ForcingFn = dyn Fn(f64, &[f64], &[f64]) -> f64 + Send + Sync;

/// Coefficients as functions of the space point `x`.
#[derive(Clone)]
pub struct WaveCoefficients {
    pub n: usize,
    pub drift: Arc<DriftFn>,
    pub metric: Arc<MetricFn>,
    pub forcing: Option<Arc<ForcingFn>>,
    constant: bool,
}

impl WaveCoefficients {
    pub fn constant(drift: Vec<f64>, metric: DMatrix<f64>) -> Self {
        let n = drift.len();
        WaveCoefficients {
            n,
            drift: Arc::new(move |_| drift.clone()),
            metric: Arc::new(move |_| metric.clone()),
            forcing: None,
            constant: true,
        }
    }

    /// `u_tt − Δu = 0`.
    pub fn standard(n: usize) -> Self {
        WaveCoefficients::constant(vec![0.0; n], DMatrix::identity(n, n))
    }

    pub fn variable<A, M>(n: usize, drift: A, metric: M) -> Self
    where
        A: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        M: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        WaveCoefficients {
            n,
            drift: Arc::new(drift),
            metric: Arc::new(metric),
            forcing: None,
            constant: false,
        }
    }

    pub fn with_forcing<F>(mut self, f: F) -> Self
    where
        F: Fn(f64, &[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        self.forcing = Some(Arc::new(f));
        self
    }
}

pub struct WaveModel {
    pub system: SystemDef,
    pub constraint: ConstraintMonitor,
}

fn coefficient(coeffs: &WaveCoefficients, k: usize, x: &[f64]) -> DMatrix<f64> {
    let n = coeffs.n;
    let m = n + 2;
    let a = (coeffs.drift)(x);
    let g = (coeffs.metric)(x);
    let mut mk = DMatrix::zeros(m, m);
    mk[(k + 1, n + 1)] = -1.0;
    mk[(n + 1, n + 1)] = 2.0 * a[k];
    for j in 0..n {
        mk[(n + 1, j + 1)] = -g[(j, k)];
    }
    mk
}

fn symmetrizer(coeffs: &WaveCoefficients, x: &[f64]) -> DMatrix<f64> {
    let n = coeffs.n;
    let mut s = DMatrix::identity(n + 2, n + 2);
    s.view_mut((1, 1), (n, n)).copy_from(&(coeffs.metric)(x));
    s
}

/// Builds the system with symmetrizer `diag(1, a^{jk}, 1)`. The metric `a^{jk}` is
/// checked for symmetry and positivity at `points` (space points).
pub fn wave_system(coeffs: WaveCoefficients, points: &[Vec<f64>]) -> Result<WaveModel> {
    let n = coeffs.n;
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidParameter {
            name: "n".into(),
            reason: format!("space dimension must be 1, 2 or 3 (got {n})"),
        });
    }
    for x in points {
        check_len("space point", n, x.len())?;
        check_len("drift a^j", n, (coeffs.drift)(x).len())?;
        let g = (coeffs.metric)(x);
        if g.shape() != (n, n) {
            return Err(Error::Dimension {
                what: "metric a^jk".into(),
                expected: n,
                got: g.nrows(),
            });
        }
        if !positive_definite(&linalg::symmetric_part(&g), PD_TOL)? || !linalg::is_symmetric(&g, linalg::SYMMETRY_TOL) {
            return Err(Error::NotPositiveDefinite {
                context: format!("a^jk at x = {x:?}"),
            });
        }
    }
    let m = n + 2;
    let origin = vec![0.0; n];
    let mut coeff = vec![MatrixField::identity(m)];
    for k in 0..n {
        coeff.push(if coeffs.constant {
            MatrixField::constant(coefficient(&coeffs, k, &origin))
        } else {
            let c = coeffs.clone();
            MatrixField::from_fn(m, move |x, _| coefficient(&c, k, &x[1..]))
        });
    }
    let sigma = if coeffs.constant {
        MatrixField::constant(symmetrizer(&coeffs, &origin))
    } else {
        let c = coeffs.clone();
        MatrixField::from_fn(m, move |x, _| symmetrizer(&c, &x[1..]))
    };
    let forcing = coeffs.forcing.clone();
    let source = VectorField::from_fn(m, move |x, v| {
        let mut s = DVector::zeros(m);
        s[0] = v[n + 1];
        if let Some(f) = &forcing {
            s[n + 1] = f(x[0], &x[1..], v);
        }
        s
    });
    let system = SystemDef::new(n, coeff, source)?.with_symmetrizer(sigma)?;
    Ok(WaveModel {
        system,
        constraint: ConstraintMonitor::new("gradient_constraint", Constraint::Gradient),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Boundary, GridField};
    use crate::lxf::{lxf_step, Monitor};
    use crate::system::{characteristic_speeds, is_sh, Sample};

    #[test]
    fn standard_1d_speeds() {
        let model = wave_system(WaveCoefficients::standard(1), &[vec![0.0]]).unwrap();
        let speeds = characteristic_speeds(&model.system, &[0.0, 0.0], &[0.0; 3], &[1.0]).unwrap();
        for (s, e) in speeds.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((s - e).abs() < 1e-12);
        }
    }

    #[test]
    fn variable_coefficients_are_symmetric_hyperbolic() {
        let coeffs = WaveCoefficients::variable(
            2,
            |x| vec![0.3 * x[0], -0.2],
            |x| DMatrix::from_row_slice(2, 2, &[2.0 + x[1].sin(), 0.4, 0.4, 1.0]),
        );
        let points: Vec<Vec<f64>> = (0..5).map(|i| vec![0.2 * i as f64, -0.3 * i as f64]).collect();
        let model = wave_system(coeffs, &points).unwrap();
        let samples: Vec<Sample> = points
            .iter()
            .map(|p| Sample::new(vec![0.0, p[0], p[1]], vec![0.1, 0.2, 0.3, 0.4]))
            .collect();
        assert!(is_sh(&model.system, &samples).unwrap().holds());
    }

    #[test]
    fn indefinite_metric_is_rejected() {
        let coeffs = WaveCoefficients::constant(vec![0.0], DMatrix::from_element(1, 1, -1.0));
        assert!(matches!(wave_system(coeffs, &[vec![0.0]]), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn zero_data_keeps_monitor_zero() {
        let model = wave_system(WaveCoefficients::standard(1), &[vec![0.0]]).unwrap();
        let g = GridField::uniform(1, 20, -1.0, 1.0, 3, Boundary::Periodic).unwrap();
        let next = lxf_step(&model.system, &g, 0.0, 0.05).unwrap();
        assert_eq!(model.constraint.evaluate(0.05, &next).unwrap(), vec![0.0]);
    }
}
