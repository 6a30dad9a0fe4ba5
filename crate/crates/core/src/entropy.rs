//! Entropy pairs, entropy variables, Legendre duality and the Hessian symmetrizer
//! of a conservation law with a convex entropy.
//!
//! For `∂_t u + ∂_j f^j(u) = 0` the following are checked pointwise on samples of
//! the law's state box:
//!
//! * the entropy identity `∇U · ∂f^j/∂u = ∇U^j` ([`entropy_pair_residual`]);
//! * `σ = ∇²U` symmetrizes the quasi-linear form ([`hessian_symmetrizer`]);
//! * in the entropy variables `v = ∇U(u)` the fluxes derive from potentials
//!   `g^j(v) = v · f^j − U^j`, i.e. `∂g^j/∂v = f^j` ([`flux_potential_check`]).

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Error, Result};
use crate::field::MatrixField;
use crate::law::ConservationLaw;
use crate::linalg::{self, fd_gradient, fd_jacobian, fd_step, positive_definite, vec_norm_inf};
use crate::system::{is_sh_with_tol, Sample, ShVerdict};

/// Tolerance degradation applied when a derivative is obtained by finite differences.
pub const FD_TOLERANCE_FACTOR: f64 = 1e3;
/// Bound on [`entropy_pair_residual`] for pairs with exact derivatives.
pub const PAIR_RESIDUAL_TOL: f64 = 1e-8;

type ScalarFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradientFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
type HessianFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;
type IndexedScalarFn = dyn Fn(usize, &[f64]) -> f64 + Send + Sync;
type IndexedGradientFn = dyn Fn(usize, &[f64]) -> Vec<f64> + Send + Sync;

/// A convex entropy `U(u)` with entropy fluxes `U^j(u)`.
#[derive(Clone)]
pub struct EntropyPair {
    pub n: usize,
    entropy: Arc<ScalarFn>,
    gradient: Option<Arc<GradientFn>>,
    hessian: Option<Arc<HessianFn>>,
    flux: Arc<IndexedScalarFn>,
    flux_gradient: Option<Arc<IndexedGradientFn>>,
}

impl fmt::Debug for EntropyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EntropyPair")
            .field("n", &self.n)
            .field("exact_gradient", &self.gradient.is_some())
            .field("exact_hessian", &self.hessian.is_some())
            .field("exact_flux_gradient", &self.flux_gradient.is_some())
            .finish()
    }
}

impl EntropyPair {
    /// Pair from values only; every derivative falls back to finite differences.
    pub fn new<U, F>(n: usize, entropy: U, flux: F) -> Self
    where
        U: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        F: Fn(usize, &[f64]) -> f64 + Send + Sync + 'static,
    {
        EntropyPair {
            n,
            entropy: Arc::new(entropy),
            gradient: None,
            hessian: None,
            flux: Arc::new(flux),
            flux_gradient: None,
        }
    }

    pub fn with_gradient<G>(mut self, g: G) -> Self
    where
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.gradient = Some(Arc::new(g));
        self
    }

    pub fn with_hessian<H>(mut self, h: H) -> Self
    where
        H: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        self.hessian = Some(Arc::new(h));
        self
    }

    pub fn with_flux_gradient<G>(mut self, g: G) -> Self
    where
        G: Fn(usize, &[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.flux_gradient = Some(Arc::new(g));
        self
    }

    /// Scalar one-dimensional pair `(U, F)` with exact first and second derivatives.
    pub fn scalar<U, DU, D2U, F, DF>(u: U, du: DU, d2u: D2U, f: F, df: DF) -> Self
    where
        U: Fn(f64) -> f64 + Send + Sync + 'static,
        DU: Fn(f64) -> f64 + Send + Sync + 'static,
        D2U: Fn(f64) -> f64 + Send + Sync + 'static,
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        DF: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        EntropyPair::new(1, move |s| u(s[0]), move |_, s| f(s[0]))
            .with_gradient(move |s| vec![du(s[0])])
            .with_hessian(move |s| DMatrix::from_element(1, 1, d2u(s[0])))
            .with_flux_gradient(move |_, s| vec![df(s[0])])
    }

    pub fn has_exact_derivatives(&self) -> bool {
        self.gradient.is_some() && self.hessian.is_some() && self.flux_gradient.is_some()
    }

    pub fn value(&self, u: &[f64]) -> f64 {
        (self.entropy)(u)
    }

    pub fn gradient(&self, u: &[f64]) -> Vec<f64> {
        match &self.gradient {
            Some(g) => g(u),
            None => fd_gradient(|w| (self.entropy)(w), u),
        }
    }

    pub fn hessian(&self, u: &[f64]) -> DMatrix<f64> {
        match (&self.hessian, &self.gradient) {
            (Some(h), _) => h(u),
            (None, Some(g)) => linalg::symmetric_part(&fd_jacobian(|w| g(w), u)),
            (None, None) => linalg::fd_hessian(|w| (self.entropy)(w), u),
        }
    }

    pub fn flux_value(&self, j: usize, u: &[f64]) -> f64 {
        (self.flux)(j, u)
    }

    pub fn flux_gradient(&self, j: usize, u: &[f64]) -> Vec<f64> {
        match &self.flux_gradient {
            Some(g) => g(j, u),
            None => fd_gradient(|w| (self.flux)(j, w), u),
        }
    }
}

fn tolerance_factor(law: &ConservationLaw, pair: &EntropyPair) -> f64 {
    if law.has_exact_jacobian() && pair.has_exact_derivatives() {
        1.0
    } else {
        FD_TOLERANCE_FACTOR
    }
}

fn check_pair(law: &ConservationLaw, pair: &EntropyPair) -> Result<()> {
    check_len("entropy flux count", law.n, pair.n)
}

/// `max_{samples, j} ‖∇U · ∂f^j/∂u − ∇U^j‖_∞`.
pub fn entropy_pair_residual(law: &ConservationLaw, pair: &EntropyPair, samples: &[Vec<f64>]) -> Result<f64> {
    check_pair(law, pair)?;
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut worst: f64 = 0.0;
    for u in samples {
        law.check_in_box(u)?;
        let grad = DVector::from_vec(pair.gradient(u));
        for j in 0..law.n {
            let lhs = law.jacobian(j, u).transpose() * &grad;
            let rhs = pair.flux_gradient(j, u);
            for (a, b) in lhs.iter().zip(&rhs) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    Ok(worst)
}

/// Entropy variables `v = ∇U(u)`.
pub fn entropy_variables(pair: &EntropyPair, u: &[f64]) -> Vec<f64> {
    pair.gradient(u)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Converged when `‖∇U(u) − v‖_∞ ≤ tol · max(1, ‖v‖_∞)`.
    pub tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-10,
            max_iter: 50,
            max_halvings: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LegendreDual {
    pub u: Vec<f64>,
    /// `g⁰(v) = u · v − U(u)`.
    pub g0: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// Inverts `v = ∇U(u)` by damped Newton iteration and evaluates the Legendre
/// transform `g⁰(v) = u · v − U(u)`.
pub fn legendre_dual(pair: &EntropyPair, v: &[f64], u_guess: &[f64]) -> Result<LegendreDual> {
    legendre_dual_with(pair, v, u_guess, NewtonOptions::default())
}

pub fn legendre_dual_with(pair: &EntropyPair, v: &[f64], u_guess: &[f64], opts: NewtonOptions) -> Result<LegendreDual> {
    check_len("entropy variables", u_guess.len(), v.len())?;
    let residual_of = |u: &[f64]| -> Vec<f64> { pair.gradient(u).iter().zip(v).map(|(g, w)| g - w).collect() };
    let target = opts.tol * vec_norm_inf(v).max(1.0);
    let mut u = u_guess.to_vec();
    let mut r = residual_of(&u);
    let mut norm = vec_norm_inf(&r);
    let mut iterations = 0;
    while !(norm <= target) {
        if iterations == opts.max_iter {
            return Err(Error::NoConvergence {
                iterations,
                residual: norm,
                last_iterate: u,
            });
        }
        iterations += 1;
        let step = linalg::solve(&pair.hessian(&u), &DVector::from_vec(r.clone()), "entropy Hessian")?;
        if step.iter().any(|s| !s.is_finite()) {
            return Err(Error::Singular {
                context: format!("entropy Hessian at u = {u:?}"),
            });
        }
        let mut scale = 1.0;
        let mut accepted = None;
        let mut fallback = None;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<f64> = u.iter().zip(step.iter()).map(|(x, s)| x - scale * s).collect();
            let tr = residual_of(&trial);
            let tn = vec_norm_inf(&tr);
            if tn.is_finite() {
                if tn < norm {
                    accepted = Some((trial, tr, tn));
                    break;
                }
                fallback = Some((trial, tr, tn));
            }
            scale *= 0.5;
        }
        match accepted.or(fallback) {
            Some((trial, tr, tn)) => {
                u = trial;
                r = tr;
                norm = tn;
            }
            None => {
                return Err(Error::NoConvergence {
                    iterations,
                    residual: norm,
                    last_iterate: u,
                })
            }
        }
    }
    let g0 = u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() - pair.value(&u);
    Ok(LegendreDual {
        u,
        g0,
        iterations,
        residual: norm,
    })
}

#[derive(Debug, Clone)]
pub struct SymmetrizerReport {
    /// `σ(u) = ∇²U(u)`.
    pub sigma: MatrixField,
    pub verdict: ShVerdict,
}

/// Uses `σ = ∇²U` as symmetrizer of the quasi-linear form `σ ∂_t u + σ ∂f^j/∂u ∂_j u`
/// and checks symmetric-hyperbolicity at the samples.
pub fn hessian_symmetrizer(law: &ConservationLaw, pair: &EntropyPair, samples: &[Vec<f64>]) -> Result<SymmetrizerReport> {
    check_pair(law, pair)?;
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let factor = tolerance_factor(law, pair);
    for u in samples {
        law.check_in_box(u)?;
        let hess = pair.hessian(u);
        let convex = positive_definite(&linalg::symmetric_part(&hess), linalg::PD_TOL)?;
        if !convex {
            return Err(Error::NotPositiveDefinite {
                context: format!("entropy Hessian at u = {u:?} (convexity failure)"),
            });
        }
    }
    let p = pair.clone();
    let sigma = MatrixField::from_fn(law.m, move |_, u| linalg::symmetric_part(&p.hessian(u)));
    let sys = law.quasilinear().with_symmetrizer(sigma.clone())?;
    let pts: Vec<Sample> = samples.iter().map(|u| Sample::state(law.n, u.clone())).collect();
    let verdict = is_sh_with_tol(&sys, &pts, linalg::SYMMETRY_TOL * factor, linalg::PD_TOL)?;
    Ok(SymmetrizerReport { sigma, verdict })
}

/// Builds the flux potentials `g^j(v) = v · f^j(u(v)) − U^j(u(v))` and the Legendre
/// transform `g⁰`, and returns the largest of
/// `|∂g^j/∂v_A − f^{Aj}|`, `|∂g⁰/∂v_A − u^A|` and `|v · u − g⁰ − U(u)|`
/// over the samples, with `∂/∂v` taken by central differences.
pub fn flux_potential_check(law: &ConservationLaw, pair: &EntropyPair, samples: &[Vec<f64>]) -> Result<f64> {
    check_pair(law, pair)?;
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let potential = |j: usize, v: &[f64], u: &[f64]| -> f64 {
        let f = law.flux(j, u);
        v.iter().zip(&f).map(|(a, b)| a * b).sum::<f64>() - pair.flux_value(j, u)
    };
    let mut worst: f64 = 0.0;
    for u0 in samples {
        law.check_in_box(u0)?;
        let v = entropy_variables(pair, u0);
        let dual = legendre_dual(pair, &v, u0)?;
        let u = &dual.u;
        let reproduced = v.iter().zip(u).map(|(a, b)| a * b).sum::<f64>() - dual.g0;
        worst = worst.max((reproduced - pair.value(u)).abs());
        for a in 0..law.m {
            let delta = fd_step(v[a]);
            let mut vp = v.clone();
            vp[a] += delta;
            let mut vm = v.clone();
            vm[a] -= delta;
            let up = legendre_dual(pair, &vp, u)?;
            let um = legendre_dual(pair, &vm, u)?;
            let dg0 = (up.g0 - um.g0) / (2.0 * delta);
            worst = worst.max((dg0 - u[a]).abs());
            for j in 0..law.n {
                let dg = (potential(j, &vp, &up.u) - potential(j, &vm, &um.u)) / (2.0 * delta);
                worst = worst.max((dg - law.flux(j, u)[a]).abs());
            }
        }
    }
    Ok(worst)
}

/// For each direction `j`, whether `∂f^j/∂u` is symmetric at every sample (the law
/// is then symmetric without a symmetrizer).
pub fn conservative_symmetry_check(law: &ConservationLaw, samples: &[Vec<f64>]) -> Result<Vec<bool>> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let tol = if law.has_exact_jacobian() {
        linalg::SYMMETRY_TOL
    } else {
        linalg::SYMMETRY_TOL * FD_TOLERANCE_FACTOR
    };
    let mut result = vec![true; law.n];
    for u in samples {
        check_len("state", law.m, u.len())?;
        for (j, ok) in result.iter_mut().enumerate() {
            if !linalg::is_symmetric(&law.jacobian(j, u), tol) {
                *ok = false;
            }
        }
    }
    Ok(result)
}

type DiffusionFn = dyn Fn(&[f64], &[f64]) -> Vec<DMatrix<f64>> + Send + Sync;

/// Diffusion coefficients `B^{Ajk}_B(x, u)`: `n²` matrices indexed `j·n + k`, each with
/// entry `(A, B)`.
#[derive(Clone)]
pub struct DiffusionTensor {
    pub n: usize,
    pub m: usize,
    eval: Arc<DiffusionFn>,
}

impl fmt::Debug for DiffusionTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffusionTensor {{ n: {}, m: {} }}", self.n, self.m)
    }
}

impl DiffusionTensor {
    pub fn new<F>(n: usize, m: usize, eval: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> Vec<DMatrix<f64>> + Send + Sync + 'static,
    {
        DiffusionTensor {
            n,
            m,
            eval: Arc::new(eval),
        }
    }

    /// `B^{Ajk}_B = D^{jk} δ^A_B`.
    pub fn isotropic(m: usize, d: DMatrix<f64>) -> Self {
        let n = d.nrows();
        DiffusionTensor::new(n, m, move |_, _| {
            (0..n * n)
                .map(|idx| DMatrix::identity(m, m) * d[(idx / n, idx % n)])
                .collect()
        })
    }

    pub fn evaluate(&self, x: &[f64], u: &[f64]) -> Result<Vec<DMatrix<f64>>> {
        let blocks = (self.eval)(x, u);
        check_len("diffusion blocks (n²)", self.n * self.n, blocks.len())?;
        for b in &blocks {
            check_len("diffusion block", self.m, b.nrows())?;
            check_len("diffusion block", self.m, b.ncols())?;
            if b.iter().any(|v| !v.is_finite()) {
                return Err(Error::Inadmissible {
                    state: u.to_vec(),
                    reason: "non-finite diffusion coefficient".into(),
                });
            }
        }
        Ok(blocks)
    }
}

/// True iff `B^{Ajk}_B = B^{Bkj}_A` (relative tolerance) at every sample.
pub fn diffusion_symmetry_check(b: &DiffusionTensor, samples: &[Sample]) -> Result<bool> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let n = b.n;
    for s in samples {
        let blocks = b.evaluate(&s.x, &s.u)?;
        let scale = blocks.iter().map(linalg::norm_inf).fold(0.0, f64::max);
        for j in 0..n {
            for k in 0..n {
                let defect = linalg::norm_inf(&(&blocks[j * n + k] - blocks[k * n + j].transpose()));
                if defect > linalg::SYMMETRY_TOL * scale {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::StateBox;

    fn burgers() -> ConservationLaw {
        ConservationLaw::scalar(|u| 0.5 * u * u, StateBox::new(vec![-2.0], vec![2.0])).unwrap()
    }

    fn burgers_pair() -> EntropyPair {
        EntropyPair::scalar(
            |u| u * u,
            |u| 2.0 * u,
            |_| 2.0,
            |u| 2.0 / 3.0 * u.powi(3),
            |u| 2.0 * u * u,
        )
    }

    fn quadratic_pair(m: usize) -> EntropyPair {
        EntropyPair::new(1, |u: &[f64]| 0.5 * u.iter().map(|x| x * x).sum::<f64>(), |_, _| 0.0)
            .with_gradient(|u| u.to_vec())
            .with_hessian(move |_| DMatrix::identity(m, m))
            .with_flux_gradient(move |_, _| vec![0.0; m])
    }

    #[test]
    fn burgers_entropy_identity() {
        let samples = burgers().state_box.tensor_grid(41);
        assert!(entropy_pair_residual(&burgers(), &burgers_pair(), &samples).unwrap() <= 1e-8);
    }

    #[test]
    fn constant_pair_has_zero_residual() {
        let pair = EntropyPair::new(1, |_| 3.0, |_, _| -1.0);
        let samples = burgers().state_box.tensor_grid(5);
        assert_eq!(entropy_pair_residual(&burgers(), &pair, &samples).unwrap(), 0.0);
    }

    #[test]
    fn wrong_entropy_flux_residual_is_four() {
        let pair = EntropyPair::scalar(|u| u * u, |u| 2.0 * u, |_| 2.0, |u| u.powi(3), |u| 3.0 * u * u);
        let samples = burgers().state_box.tensor_grid(41);
        let r = entropy_pair_residual(&burgers(), &pair, &samples).unwrap();
        assert!((r - 4.0).abs() < 1e-8, "{r}");
    }

    #[test]
    fn residual_rejects_states_outside_box() {
        let err = entropy_pair_residual(&burgers(), &burgers_pair(), &[vec![3.0]]).unwrap_err();
        assert!(matches!(err, Error::OutsideBox { .. }));
    }

    #[test]
    fn entropy_variable_examples() {
        assert_eq!(entropy_variables(&quadratic_pair(2), &[3.0, -1.0]), vec![3.0, -1.0]);
        assert_eq!(entropy_variables(&burgers_pair(), &[2.0]), vec![4.0]);
        let log_pair = EntropyPair::new(1, |u: &[f64]| u[0] * u[0].ln() - u[0], |_, _| 0.0);
        assert!(entropy_variables(&log_pair, &[1.0])[0].abs() < 1e-9);
    }

    #[test]
    fn legendre_dual_examples() {
        let half_square = EntropyPair::scalar(|u| 0.5 * u * u, |u| u, |_| 1.0, |_| 0.0, |_| 0.0);
        let d = legendre_dual(&half_square, &[5.0], &[0.0]).unwrap();
        assert!((d.u[0] - 5.0).abs() < 1e-12 && (d.g0 - 12.5).abs() < 1e-12);

        let d = legendre_dual(&quadratic_pair(2), &[0.0, 0.0], &[0.3, -0.2]).unwrap();
        assert!(d.u.iter().all(|x| x.abs() < 1e-12) && d.g0.abs() < 1e-12);

        let quartic = EntropyPair::scalar(|u| u.powi(4) / 4.0, |u| u.powi(3), |u| 3.0 * u * u, |_| 0.0, |_| 0.0);
        let d = legendre_dual(&quartic, &[8.0], &[1.0]).unwrap();
        assert!((d.u[0] - 2.0).abs() < 1e-10 && (d.g0 - 12.0).abs() < 1e-9);
    }

    #[test]
    fn legendre_dual_reports_singular_hessian() {
        let flat = EntropyPair::scalar(|u| u, |_| 1.0, |_| 0.0, |_| 0.0, |_| 0.0);
        assert!(matches!(legendre_dual(&flat, &[2.0], &[0.0]), Err(Error::Singular { .. })));
    }

    #[test]
    fn legendre_dual_reports_non_convergence() {
        let quartic = EntropyPair::scalar(|u| u.powi(4) / 4.0, |u| u.powi(3), |u| 3.0 * u * u, |_| 0.0, |_| 0.0);
        let opts = NewtonOptions {
            max_iter: 2,
            ..NewtonOptions::default()
        };
        match legendre_dual_with(&quartic, &[1000.0], &[1.0], opts) {
            Err(Error::NoConvergence { iterations, .. }) => assert_eq!(iterations, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hessian_symmetrizer_for_burgers() {
        let samples = burgers().state_box.tensor_grid(9);
        let report = hessian_symmetrizer(&burgers(), &burgers_pair(), &samples).unwrap();
        assert!(report.verdict.holds());
        assert_eq!(report.sigma.evaluate(&[0.0, 0.0], &[1.0]).unwrap()[(0, 0)], 2.0);
    }

    #[test]
    fn hessian_symmetrizer_for_decoupled_system() {
        let c = 1.7;
        let law = ConservationLaw::new(
            2,
            3,
            move |_, u| u.iter().map(|x| c * x).collect(),
            StateBox::new(vec![-1.0; 3], vec![1.0; 3]),
        )
        .unwrap();
        let pair = EntropyPair::new(
            2,
            |u: &[f64]| 0.5 * u.iter().map(|x| x * x).sum::<f64>(),
            move |_, u| 0.5 * c * u.iter().map(|x| x * x).sum::<f64>(),
        );
        let samples = law.state_box.tensor_grid(3);
        let report = hessian_symmetrizer(&law, &pair, &samples).unwrap();
        assert!(report.verdict.holds());
        let sigma = report.sigma.evaluate(&[0.0; 3], &[0.2, 0.1, -0.4]).unwrap();
        assert!((sigma - DMatrix::identity(3, 3)).abs().max() < 1e-6);
    }

    #[test]
    fn non_convex_entropy_is_rejected() {
        let pair = EntropyPair::scalar(|u| -u * u, |u| -2.0 * u, |_| -2.0, |_| 0.0, |_| 0.0);
        let err = hessian_symmetrizer(&burgers(), &pair, &[vec![0.5]]).unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite { .. }));
    }

    #[test]
    fn flux_potential_for_burgers() {
        let samples = burgers().state_box.tensor_grid(21);
        assert!(flux_potential_check(&burgers(), &burgers_pair(), &samples).unwrap() <= 1e-6);
    }

    #[test]
    fn flux_potential_with_zero_fluxes() {
        let law = ConservationLaw::new(1, 2, |_, _| vec![0.0, 0.0], StateBox::new(vec![-1.0; 2], vec![1.0; 2])).unwrap();
        let r = flux_potential_check(&law, &quadratic_pair(2), &[vec![0.25, -0.5]]).unwrap();
        assert!(r < 1e-9, "{r}");
    }

    #[test]
    fn corrupted_entropy_flux_is_detected() {
        let pair = EntropyPair::scalar(
            |u| u * u,
            |u| 2.0 * u,
            |_| 2.0,
            |u| 2.0 / 3.0 * u.powi(3) + u,
            |u| 2.0 * u * u + 1.0,
        );
        let r = flux_potential_check(&burgers(), &pair, &burgers().state_box.tensor_grid(11)).unwrap();
        assert!((r - 0.5).abs() < 1e-6, "{r}");
    }

    #[test]
    fn conservative_symmetry_examples() {
        let bx = StateBox::new(vec![-1.0; 2], vec![1.0; 2]);
        let samples = bx.tensor_grid(5);
        // gradient of g = Σ (u^A)³
        let gradient = ConservationLaw::new(1, 2, |_, u| vec![3.0 * u[0] * u[0], 3.0 * u[1] * u[1]], bx.clone()).unwrap();
        assert_eq!(conservative_symmetry_check(&gradient, &samples).unwrap(), vec![true]);
        let swap = ConservationLaw::new(1, 2, |_, u| vec![u[1], u[0]], bx.clone()).unwrap();
        assert_eq!(conservative_symmetry_check(&swap, &samples).unwrap(), vec![true]);
        let shear = ConservationLaw::new(1, 2, |_, u| vec![u[1], 0.0], bx).unwrap();
        assert_eq!(conservative_symmetry_check(&shear, &samples).unwrap(), vec![false]);
    }

    #[test]
    fn diffusion_symmetry_examples() {
        let samples = vec![Sample::new(vec![0.0, 0.1, 0.2], vec![1.0, 2.0])];
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 3.0]));
        assert!(diffusion_symmetry_check(&DiffusionTensor::isotropic(2, d), &samples).unwrap());

        let scalar = DiffusionTensor::new(2, 1, |_, _| {
            [2.0, 0.5, 0.5, 1.0].iter().map(|v| DMatrix::from_element(1, 1, *v)).collect()
        });
        let s1 = vec![Sample::new(vec![0.0; 3], vec![0.0])];
        assert!(diffusion_symmetry_check(&scalar, &s1).unwrap());

        let bad = DiffusionTensor::new(1, 2, |_, _| vec![DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0])]);
        let s2 = vec![Sample::new(vec![0.0; 2], vec![0.0; 2])];
        assert!(!diffusion_symmetry_check(&bad, &s2).unwrap());
    }
}
