//! Quasi-linear first-order systems `M^α(x,u) ∂_α u = N(x,u)` and the algebraic
//! predicates that make them symmetric-hyperbolic.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Error, Result};
use crate::field::{MatrixField, StateCheck, VectorField};
use crate::linalg::{self, norm_inf, positive_definite, symmetric_part, symmetry_defect};

/// A point `(x, u)` at which pointwise conditions are checked.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Space-time point `(t, x¹, …, xⁿ)`.
    pub x: Vec<f64>,
    pub u: Vec<f64>,
}

impl Sample {
    pub fn new(x: Vec<f64>, u: Vec<f64>) -> Self {
        Sample { x, u }
    }

    /// A sample at the space-time origin.
    pub fn state(n: usize, u: Vec<f64>) -> Self {
        Sample {
            x: vec![0.0; n + 1],
            u,
        }
    }
}

/// Axis-aligned box of admissible states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl StateBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len(), "state box bounds differ in length");
        assert!(
            lower.iter().zip(&upper).all(|(l, u)| l <= u),
            "state box lower bound exceeds upper bound"
        );
        StateBox { lower, upper }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, u: &[f64]) -> bool {
        u.len() == self.dim()
            && u
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, h))| *v >= *l && *v <= *h)
    }

    /// Tensor grid with `points` nodes per axis (endpoints included), in
    /// lexicographic order with the first component varying fastest.
    pub fn tensor_grid(&self, points: usize) -> Vec<Vec<f64>> {
        let points = points.max(1);
        let m = self.dim();
        let axis = |a: usize, i: usize| {
            if points == 1 {
                0.5 * (self.lower[a] + self.upper[a])
            } else {
                self.lower[a] + (self.upper[a] - self.lower[a]) * i as f64 / (points - 1) as f64
            }
        };
        let total = points.pow(m as u32);
        (0..total)
            .map(|mut idx| {
                (0..m)
                    .map(|a| {
                        let i = idx % points;
                        idx /= points;
                        axis(a, i)
                    })
                    .collect()
            })
            .collect()
    }

    /// Maps a point of the unit cube onto the box.
    pub fn from_unit(&self, unit: &[f64]) -> Vec<f64> {
        unit.iter()
            .enumerate()
            .map(|(a, s)| self.lower[a] + s * (self.upper[a] - self.lower[a]))
            .collect()
    }
}

/// A quasi-linear system `M^α(x,u) ∂_α u = N(x,u)`, `α = 0..n`, with an optional
/// symmetrizer `σ(x,u)` and hyperbolicity covector `k_α`.
#[derive(Clone, Debug)]
pub struct SystemDef {
    pub n: usize,
    pub m: usize,
    pub coeff: Vec<MatrixField>,
    pub source: VectorField,
    pub symmetrizer: Option<MatrixField>,
    pub direction: Vec<f64>,
    /// Optional admissibility test applied to every state during evolution.
    pub admissible: Option<StateCheck>,
}

impl SystemDef {
    pub fn new(n: usize, coeff: Vec<MatrixField>, source: VectorField) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::InvalidParameter {
                name: "n".into(),
                reason: format!("space dimension must be 1, 2 or 3 (got {n})"),
            });
        }
        check_len("coefficient list (n + 1)", n + 1, coeff.len())?;
        let m = coeff[0].dim();
        for c in &coeff {
            check_len("coefficient dimension", m, c.dim())?;
        }
        check_len("source dimension", m, source.dim())?;
        let mut direction = vec![0.0; n + 1];
        direction[0] = 1.0;
        Ok(SystemDef {
            n,
            m,
            coeff,
            source,
            symmetrizer: None,
            direction,
            admissible: None,
        })
    }

    pub fn with_symmetrizer(mut self, sigma: MatrixField) -> Result<Self> {
        check_len("symmetrizer dimension", self.m, sigma.dim())?;
        self.symmetrizer = Some(sigma);
        Ok(self)
    }

    pub fn with_direction(mut self, k: Vec<f64>) -> Result<Self> {
        check_len("direction covector", self.n + 1, k.len())?;
        self.direction = k;
        Ok(self)
    }

    pub fn with_admissibility(mut self, check: StateCheck) -> Self {
        self.admissible = Some(check);
        self
    }

    fn check_sample(&self, s: &Sample) -> Result<()> {
        check_len("sample point (n + 1)", self.n + 1, s.x.len())?;
        check_len("sample state", self.m, s.u.len())
    }

    pub fn symmetrizer_at(&self, x: &[f64], u: &[f64]) -> Result<DMatrix<f64>> {
        match &self.symmetrizer {
            Some(sigma) => sigma.evaluate(x, u),
            None => Ok(DMatrix::identity(self.m, self.m)),
        }
    }

    /// `S^α = σ · M^α` for every `α`.
    pub fn symmetrized(&self, x: &[f64], u: &[f64]) -> Result<Vec<DMatrix<f64>>> {
        let sigma = self.symmetrizer_at(x, u)?;
        self.coeff
            .iter()
            .map(|c| Ok(&sigma * c.evaluate(x, u)?))
            .collect()
    }

    /// The quadratic form `k_α σ M^α` induced on the space of unknowns.
    pub fn metric(&self, x: &[f64], u: &[f64]) -> Result<DMatrix<f64>> {
        let s = self.symmetrized(x, u)?;
        Ok(self.combine(&s, &self.direction))
    }

    fn combine(&self, s: &[DMatrix<f64>], weights: &[f64]) -> DMatrix<f64> {
        s.iter()
            .zip(weights)
            .fold(DMatrix::zeros(self.m, self.m), |acc, (mat, w)| acc + mat * *w)
    }

    /// `M⁰(x,u)^{-1} [N − Σ_j M^j ∂_j u]`, the explicit time derivative.
    pub fn time_derivative(&self, x: &[f64], u: &[f64], grads: &[DVector<f64>]) -> Result<DVector<f64>> {
        let mut rhs = self.source.evaluate(x, u)?;
        for (j, g) in grads.iter().enumerate() {
            rhs -= self.coeff[j + 1].evaluate(x, u)? * g;
        }
        linalg::solve(&self.coeff[0].evaluate(x, u)?, &rhs, "time coefficient M0")
    }
}

/// For each `α`, the maximum over samples of `‖S^α − (S^α)ᵀ‖_∞`.
pub fn symmetry_residual(sys: &SystemDef, samples: &[Sample]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut worst = vec![0.0; sys.n + 1];
    for s in samples {
        sys.check_sample(s)?;
        for (alpha, mat) in sys.symmetrized(&s.x, &s.u)?.iter().enumerate() {
            worst[alpha] = f64::max(worst[alpha], symmetry_defect(mat));
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShFailureKind {
    NotSymmetric { alpha: usize, defect: f64 },
    DirectionNotPositiveDefinite { min_pivot: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShFailure {
    pub sample: usize,
    pub kind: ShFailureKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShVerdict {
    pub symmetric: bool,
    pub direction_pd: bool,
    /// Per-`α` maximum symmetry defect over the samples.
    pub residuals: Vec<f64>,
    pub failure: Option<ShFailure>,
}

impl ShVerdict {
    pub fn holds(&self) -> bool {
        self.symmetric && self.direction_pd
    }
}

/// Symmetric-hyperbolicity at every sample: each `σ M^α` symmetric (relative
/// tolerance [`linalg::SYMMETRY_TOL`]) and `k_α σ M^α` positive definite.
pub fn is_sh(sys: &SystemDef, samples: &[Sample]) -> Result<ShVerdict> {
    is_sh_with_tol(sys, samples, linalg::SYMMETRY_TOL, linalg::PD_TOL)
}

pub fn is_sh_with_tol(sys: &SystemDef, samples: &[Sample], sym_tol: f64, pd_tol: f64) -> Result<ShVerdict> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut verdict = ShVerdict {
        symmetric: true,
        direction_pd: true,
        residuals: vec![0.0; sys.n + 1],
        failure: None,
    };
    for (idx, s) in samples.iter().enumerate() {
        sys.check_sample(s)?;
        let mats = sys.symmetrized(&s.x, &s.u)?;
        for (alpha, mat) in mats.iter().enumerate() {
            let defect = symmetry_defect(mat);
            verdict.residuals[alpha] = verdict.residuals[alpha].max(defect);
            if defect > sym_tol * norm_inf(mat) {
                verdict.symmetric = false;
                verdict.failure.get_or_insert(ShFailure {
                    sample: idx,
                    kind: ShFailureKind::NotSymmetric { alpha, defect },
                });
            }
        }
        let metric = symmetric_part(&sys.combine(&mats, &sys.direction));
        if !positive_definite(&metric, pd_tol)? {
            verdict.direction_pd = false;
            let max_diag = metric.diagonal().amax();
            let min_pivot = linalg::cholesky_pivots(&metric, pd_tol * max_diag).min_pivot();
            verdict.failure.get_or_insert(ShFailure {
                sample: idx,
                kind: ShFailureKind::DirectionNotPositiveDefinite { min_pivot },
            });
        }
    }
    Ok(verdict)
}

/// Generalized eigenvalues of `(Σ_j ν_j S^j) w = λ S⁰ w`, sorted ascending.
pub fn characteristic_speeds(sys: &SystemDef, x: &[f64], u: &[f64], normal: &[f64]) -> Result<Vec<f64>> {
    check_len("normal", sys.n, normal.len())?;
    sys.check_sample(&Sample::new(x.to_vec(), u.to_vec()))?;
    let s = sys.symmetrized(x, u)?;
    let symbol = s[1..]
        .iter()
        .zip(normal)
        .fold(DMatrix::zeros(sys.m, sys.m), |acc, (mat, w)| acc + mat * *w);
    linalg::generalized_eigenvalues(&symbol, &s[0]).map_err(|e| match e {
        Error::NotPositiveDefinite { .. } => Error::NotPositiveDefinite {
            context: format!("S0 at x = {x:?}, u = {u:?}"),
        },
        other => other,
    })
}

/// The `2n` axis normals `±e_j` together with the `2ⁿ` diagonal normals `(±1, …, ±1)/√n`.
pub fn probe_normals(n: usize) -> Vec<Vec<f64>> {
    let mut normals = Vec::with_capacity(2 * n + (1 << n));
    for j in 0..n {
        for sign in [1.0, -1.0] {
            let mut v = vec![0.0; n];
            v[j] = sign;
            normals.push(v);
        }
    }
    let scale = 1.0 / (n as f64).sqrt();
    for mask in 0..(1usize << n) {
        normals.push(
            (0..n)
                .map(|j| if mask >> j & 1 == 1 { -scale } else { scale })
                .collect(),
        );
    }
    normals
}

/// Largest `|λ|` over [`probe_normals`] at one point.
pub fn max_abs_speed(sys: &SystemDef, x: &[f64], u: &[f64]) -> Result<f64> {
    let mut best: f64 = 0.0;
    for nu in probe_normals(sys.n) {
        for s in characteristic_speeds(sys, x, u, &nu)? {
            best = best.max(s.abs());
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn advection(a: f64) -> SystemDef {
        SystemDef::new(
            1,
            vec![MatrixField::identity(1), MatrixField::constant(DMatrix::from_element(1, 1, a))],
            VectorField::zero(1),
        )
        .unwrap()
    }

    #[test]
    fn scalar_system_is_symmetric() {
        let sys = SystemDef::new(
            1,
            vec![
                MatrixField::identity(1),
                MatrixField::from_fn(1, |_, u| DMatrix::from_element(1, 1, u[0])),
            ],
            VectorField::zero(1),
        )
        .unwrap();
        let samples = vec![Sample::state(1, vec![3.0]), Sample::state(1, vec![-7.0])];
        assert_eq!(symmetry_residual(&sys, &samples).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn nilpotent_coefficient_has_unit_residual() {
        let sys = SystemDef::new(
            1,
            vec![
                MatrixField::identity(2),
                MatrixField::constant(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0])),
            ],
            VectorField::zero(2),
        )
        .unwrap();
        let r = symmetry_residual(&sys, &[Sample::state(1, vec![0.0, 0.0])]).unwrap();
        assert_eq!(r, vec![0.0, 1.0]);
        let v = is_sh(&sys, &[Sample::state(1, vec![0.0, 0.0])]).unwrap();
        assert!(!v.symmetric);
        assert!(v.direction_pd);
    }

    #[test]
    fn sample_dimension_mismatch_is_error() {
        let sys = advection(1.0);
        let err = symmetry_residual(&sys, &[Sample::state(1, vec![1.0, 2.0])]).unwrap_err();
        assert!(matches!(err, Error::Dimension { .. }));
        assert_eq!(symmetry_residual(&sys, &[]).unwrap_err(), Error::EmptySamples);
    }

    #[test]
    fn negative_time_coefficient_fails_direction_check() {
        let sys = SystemDef::new(
            1,
            vec![MatrixField::constant(-DMatrix::identity(2, 2)), MatrixField::zeros(2)],
            VectorField::zero(2),
        )
        .unwrap();
        let v = is_sh(&sys, &[Sample::state(1, vec![0.0, 0.0])]).unwrap();
        assert!(v.symmetric);
        assert!(!v.direction_pd);
        assert!(matches!(
            v.failure.unwrap().kind,
            ShFailureKind::DirectionNotPositiveDefinite { .. }
        ));
    }

    #[test]
    fn advection_speed() {
        let sys = advection(2.5);
        let s = characteristic_speeds(&sys, &[0.0, 0.0], &[1.0], &[1.0]).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0] - 2.5).abs() < 1e-14);
    }

    #[test]
    fn speeds_require_positive_time_matrix() {
        let sys = SystemDef::new(
            1,
            vec![MatrixField::constant(-DMatrix::identity(1, 1)), MatrixField::identity(1)],
            VectorField::zero(1),
        )
        .unwrap();
        assert!(matches!(
            characteristic_speeds(&sys, &[0.0, 0.0], &[0.0], &[1.0]),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn probe_normals_are_unit() {
        for n in 1..=3 {
            let normals = probe_normals(n);
            assert_eq!(normals.len(), 2 * n + (1 << n));
            for v in normals {
                let len: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((len - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn tensor_grid_includes_corners() {
        let b = StateBox::new(vec![-2.0, 0.0], vec![2.0, 1.0]);
        let g = b.tensor_grid(3);
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], vec![-2.0, 0.0]);
        assert_eq!(g[8], vec![2.0, 1.0]);
        assert!(g.iter().all(|u| b.contains(u)));
    }
}
