//! Energy diagnostics for linear symmetric-hyperbolic systems
//! `Q ∂_t u + A^j ∂_j u + B u = f` and the finite-propagation-of-support test.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Error, Result};
use crate::field::{MatrixField, VectorField};
use crate::grid::GridField;
use crate::linalg::{self, fd_step, generalized_eigenvalues, positive_definite, PD_TOL};
use crate::lxf::Snapshot;
use crate::system::{probe_normals, SystemDef};

/// Factor applied to the sampled cone slope in the support test.
pub const CONE_SLOPE_SAFETY: f64 = 1.01;

/// Allowed growth of the undamped energy over a run with step `k`: `E(t) ≤ E(0)(1 + 10k)`.
pub fn energy_growth_bound(k: f64) -> f64 {
    1.0 + 10.0 * k
}

/// Coefficients are fields of the space-time point `(t, x)`; the state argument is ignored.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub n: usize,
    pub m: usize,
    pub q: MatrixField,
    pub a: Vec<MatrixField>,
    pub b: MatrixField,
    pub forcing: VectorField,
}

impl LinearSystem {
    /// Validates symmetry of `Q`, `A^j` and positivity of `Q` at `points` (space-time).
    pub fn new(q: MatrixField, a: Vec<MatrixField>, b: MatrixField, forcing: VectorField, points: &[Vec<f64>]) -> Result<Self> {
        let n = a.len();
        let m = q.dim();
        if !(1..=3).contains(&n) {
            return Err(Error::InvalidParameter {
                name: "A".into(),
                reason: format!("expected 1 to 3 space coefficients, got {n}"),
            });
        }
        for field in a.iter().chain([&b]) {
            check_len("coefficient dimension", m, field.dim())?;
        }
        check_len("forcing dimension", m, forcing.dim())?;
        let sys = LinearSystem { n, m, q, a, b, forcing };
        for p in points {
            check_len("space-time point", n + 1, p.len())?;
            let q = sys.q.evaluate(p, &[])?;
            if !positive_definite(&q, PD_TOL)? {
                return Err(Error::NotPositiveDefinite {
                    context: format!("Q at {p:?}"),
                });
            }
            for a in &sys.a {
                let a = a.evaluate(p, &[])?;
                if !linalg::is_symmetric(&a, linalg::SYMMETRY_TOL) {
                    return Err(Error::NotSymmetric {
                        defect: linalg::symmetry_defect(&a),
                        tolerance: linalg::SYMMETRY_TOL * linalg::norm_inf(&a),
                    });
                }
            }
        }
        Ok(sys)
    }

    /// Constant-coefficient system, validated once.
    pub fn constant(q: DMatrix<f64>, a: Vec<DMatrix<f64>>, b: DMatrix<f64>) -> Result<Self> {
        let n = a.len();
        let m = q.nrows();
        LinearSystem::new(
            MatrixField::constant(q),
            a.into_iter().map(MatrixField::constant).collect(),
            MatrixField::constant(b),
            VectorField::zero(m),
            &[vec![0.0; n + 1]],
        )
    }

    /// Smallest pivot of `Q` over the grid cells at time `t`.
    pub fn q_min_pivot(&self, grid: &GridField, t: f64) -> Result<f64> {
        let mut worst = f64::INFINITY;
        for c in 0..grid.cells() {
            let q = self.q.evaluate(&spacetime(t, &grid.center(c)), &[])?;
            worst = worst.min(linalg::cholesky_pivots(&q, f64::NEG_INFINITY).min_pivot());
        }
        Ok(worst)
    }

    /// The same equation as a quasi-linear [`SystemDef`] with `N = f − B u`.
    pub fn to_system(&self) -> SystemDef {
        let strip = |field: &MatrixField| match field {
            MatrixField::Constant(_) => field.clone(),
            MatrixField::Function { .. } => {
                let inner = field.clone();
                MatrixField::from_fn(field.dim(), move |x, _| inner.evaluate(x, &[]).expect("linear coefficient"))
            }
        };
        let mut coeff = vec![strip(&self.q)];
        coeff.extend(self.a.iter().map(strip));
        let (b, f, m) = (self.b.clone(), self.forcing.clone(), self.m);
        let source = if self.forcing.is_zero() && b.as_constant().is_some_and(|c| c.iter().all(|v| *v == 0.0)) {
            VectorField::zero(m)
        } else {
            VectorField::from_fn(m, move |x, u| {
                let bu = b.evaluate(x, &[]).expect("linear coefficient") * DVector::from_column_slice(u);
                f.evaluate(x, &[]).expect("linear forcing") - bu
            })
        };
        SystemDef::new(self.n, coeff, source).expect("validated linear system")
    }
}

pub(crate) fn spacetime(t: f64, x: &[f64]) -> Vec<f64> {
    let mut p = Vec::with_capacity(x.len() + 1);
    p.push(t);
    p.extend_from_slice(x);
    p
}

/// `Σ_cells uᵀ Q(t, x) u × cell volume`, summed in lexicographic cell order.
pub fn energy(field: &GridField, q: &MatrixField, t: f64) -> Result<f64> {
    field.check_finite(t)?;
    check_len("Q dimension", field.m, q.dim())?;
    let mut total = 0.0;
    for c in 0..field.cells() {
        let u = DVector::from_column_slice(field.cell(c));
        let qm = match q.as_constant() {
            Some(qc) => qc.clone(),
            None => q.evaluate(&spacetime(t, &field.center(c)), field.cell(c))?,
        };
        total += u.dot(&(qm * &u));
    }
    Ok(total * field.cell_volume())
}

/// `C = 2B − ∂_t Q − Σ_j ∂_j A^j` by central differences (exact for constant coefficients).
pub fn c_matrix(sys: &LinearSystem, t: f64, x: &[f64]) -> Result<DMatrix<f64>> {
    check_len("space point", sys.n, x.len())?;
    let p = spacetime(t, x);
    let derivative = |field: &MatrixField, axis: usize| -> Result<DMatrix<f64>> {
        if field.as_constant().is_some() {
            return Ok(DMatrix::zeros(sys.m, sys.m));
        }
        let h = fd_step(p[axis]);
        let mut plus = p.clone();
        plus[axis] += h;
        let mut minus = p.clone();
        minus[axis] -= h;
        Ok((field.evaluate(&plus, &[])? - field.evaluate(&minus, &[])?) / (2.0 * h))
    };
    let mut c = sys.b.evaluate(&p, &[])? * 2.0 - derivative(&sys.q, 0)?;
    for (j, a) in sys.a.iter().enumerate() {
        c -= derivative(a, j + 1)?;
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingReport {
    /// Smallest `λ ≥ 0` (to within 1e-6) with `C + 2λQ` positive definite at every sample.
    pub lambda: f64,
    /// `C` is only semi-definite: any `λ > 0` works but `λ = 0` does not.
    pub semidefinite_at_zero: bool,
}

const DAMPING_RESOLUTION: f64 = 1e-6;

/// Exponent `λ` such that `v = u e^{−λt}` solves a system with `C + 2λQ` positive definite.
pub fn damping_lambda(sys: &LinearSystem, samples: &[Vec<f64>]) -> Result<DampingReport> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut pairs = Vec::with_capacity(samples.len());
    for p in samples {
        check_len("space-time point", sys.n + 1, p.len())?;
        let q = sys.q.evaluate(p, &[])?;
        if !positive_definite(&q, PD_TOL)? {
            return Err(Error::NotPositiveDefinite {
                context: format!("Q at {p:?}"),
            });
        }
        let c = linalg::symmetric_part(&c_matrix(sys, p[0], &p[1..])?);
        pairs.push((c, q));
    }
    let pd_at = |lambda: f64| -> Result<bool> {
        for (c, q) in &pairs {
            if !positive_definite(&linalg::symmetric_part(&(c + q * (2.0 * lambda))), PD_TOL)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if pd_at(0.0)? {
        return Ok(DampingReport {
            lambda: 0.0,
            semidefinite_at_zero: false,
        });
    }
    let mut hi = 1.0;
    while !pd_at(hi)? {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NotPositiveDefinite {
                context: "C + 2λQ for every λ up to 1e12".into(),
            });
        }
    }
    let mut lo = 0.0;
    while hi - lo > DAMPING_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if pd_at(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if hi <= DAMPING_RESOLUTION {
        Ok(DampingReport {
            lambda: 0.0,
            semidefinite_at_zero: true,
        })
    } else {
        Ok(DampingReport {
            lambda: hi,
            semidefinite_at_zero: false,
        })
    }
}

/// Largest generalized eigenvalue of `(Σ_j ν_j A^j) w = a Q w` over the grid cells
/// and the probe normals; a sampled lower bound for the cone slope.
pub fn cone_slope(sys: &LinearSystem, grid: &GridField, t: f64) -> Result<f64> {
    check_len("grid dimension", sys.n, grid.n())?;
    let constant = sys.q.as_constant().is_some() && sys.a.iter().all(|a| a.as_constant().is_some());
    let cells = if constant { 1 } else { grid.cells() };
    let normals = probe_normals(sys.n);
    let mut best = f64::NEG_INFINITY;
    for c in 0..cells {
        let p = spacetime(t, &grid.center(c));
        let q = sys.q.evaluate(&p, &[])?;
        let a: Vec<DMatrix<f64>> = sys.a.iter().map(|f| f.evaluate(&p, &[])).collect::<Result<_>>()?;
        for nu in &normals {
            let symbol = a
                .iter()
                .zip(nu)
                .fold(DMatrix::zeros(sys.m, sys.m), |acc, (mat, w)| acc + mat * *w);
            let ev = generalized_eigenvalues(&symbol, &q).map_err(|e| match e {
                Error::NotPositiveDefinite { .. } => Error::NotPositiveDefinite {
                    context: format!("Q at {p:?}"),
                },
                other => other,
            })?;
            best = best.max(*ev.last().expect("m >= 1"));
        }
    }
    Ok(best.max(0.0))
}

/// Width added to the continuum cone when testing support of a Lax-Friedrichs
/// solution: one stencil (`√n · h`) plus, per step, the amount by which the
/// numerical reach `√n · h` exceeds the continuum reach `a* · k`.
pub fn lxf_support_margin(n: usize, h: f64, k: f64, a_star: f64, steps: usize) -> f64 {
    let reach = (n as f64).sqrt() * h;
    reach + steps as f64 * (reach - a_star * k).max(0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportVerdict {
    pub passed: bool,
    /// Largest `|u|` found outside the cone over all snapshots.
    pub max_outside: f64,
    /// First `(t, x)` with `|u| > tol` outside the cone.
    pub first_violation: Option<(f64, Vec<f64>)>,
}

/// Checks `|u| ≤ tol` at every cell with `|x| ≥ R + a t + margin`.
pub fn support_test(snapshots: &[Snapshot], radius: f64, slope: f64, margin: f64, tol: f64) -> SupportVerdict {
    let mut verdict = SupportVerdict {
        passed: true,
        max_outside: 0.0,
        first_violation: None,
    };
    for snap in snapshots {
        let edge = radius + slope * snap.t + margin;
        let field = &snap.field;
        for c in 0..field.cells() {
            let x = field.center(c);
            if x.iter().map(|v| v * v).sum::<f64>().sqrt() < edge {
                continue;
            }
            let amp = linalg::vec_norm_inf(field.cell(c));
            verdict.max_outside = verdict.max_outside.max(amp);
            if amp > tol {
                verdict.passed = false;
                if verdict.first_violation.is_none() {
                    verdict.first_violation = Some((snap.t, x));
                }
            }
        }
    }
    verdict
}
