//! Discontinuities of one-dimensional conservation laws: jump relations, the
//! entropy condition, exact scalar Riemann solutions and viscous limits.
//!
//! Jumps are `[q] = q_right − q_left` throughout.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::entropy::{entropy_pair_residual, EntropyPair};
use crate::error::{check_len, Error, Result};
use crate::grid::{Boundary, GridField};
use crate::law::ConservationLaw;
use crate::linalg::{fd_step, vec_norm_inf};
use crate::lxf::{run, SchemeConfig, Snapshot};

/// Tolerance on the entropy production `[F] − c[U]`.
pub const ENTROPY_TOL: f64 = 1e-12;
/// Lower bound on `f''` accepted as convex (finite-difference noise).
pub const CONVEXITY_TOL: f64 = 1e-6;
/// Relative gap below which two characteristic speeds count as equal.
pub const EIGEN_GAP_TOL: f64 = 1e-8;
pub const DEFAULT_SHOCK_THRESHOLD: f64 = 0.25;
const PAIR_CHECK_TOL: f64 = 1e-6;

/// Allowed defect of a tracked shock speed on a grid of spacing `h` at time `t`: `5h/t`.
pub fn shock_speed_tolerance(h: f64, t: f64) -> f64 {
    5.0 * h / t
}

fn one_dimensional(law: &ConservationLaw) -> Result<()> {
    if law.n == 1 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "law".into(),
            reason: format!("expected a one-dimensional law, got n = {}", law.n),
        })
    }
}

fn scalar_law(law: &ConservationLaw) -> Result<()> {
    one_dimensional(law)?;
    check_len("scalar law components", 1, law.m)
}

fn f(law: &ConservationLaw, u: f64) -> f64 {
    law.flux(0, &[u])[0]
}

fn f_prime(law: &ConservationLaw, u: f64) -> f64 {
    law.jacobian(0, &[u])[(0, 0)]
}

/// Shock speed `c = [f(u)] / [u]` of a scalar law.
pub fn rh_speed(law: &ConservationLaw, u_l: f64, u_r: f64) -> Result<f64> {
    scalar_law(law)?;
    if u_l == u_r {
        return Err(Error::NoJump);
    }
    Ok((f(law, u_r) - f(law, u_l)) / (u_r - u_l))
}

/// `[f(u)] − c [u]`, componentwise.
pub fn rh_residual(law: &ConservationLaw, u_l: &[f64], u_r: &[f64], c: f64) -> Result<Vec<f64>> {
    one_dimensional(law)?;
    check_len("left state", law.m, u_l.len())?;
    check_len("right state", law.m, u_r.len())?;
    let (fl, fr) = (law.flux(0, u_l), law.flux(0, u_r));
    Ok((0..law.m).map(|a| (fr[a] - fl[a]) - c * (u_r[a] - u_l[a])).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyVerdict {
    /// `[F] − c [U]`; the weak entropy inequality holds across the jump iff this is ≤ 0.
    pub production: f64,
    pub admissible: bool,
}

/// Entropy condition across a jump of speed `c`.
pub fn entropy_admissible(law: &ConservationLaw, pair: &EntropyPair, u_l: &[f64], u_r: &[f64], c: f64) -> Result<EntropyVerdict> {
    one_dimensional(law)?;
    check_len("left state", law.m, u_l.len())?;
    check_len("right state", law.m, u_r.len())?;
    let segment: Vec<Vec<f64>> = (0..=10)
        .map(|i| {
            let s = i as f64 / 10.0;
            u_l.iter().zip(u_r).map(|(l, r)| l + s * (r - l)).collect()
        })
        .collect();
    let residual = entropy_pair_residual(law, pair, &segment)?;
    if residual > PAIR_CHECK_TOL {
        return Err(Error::InvalidParameter {
            name: "pair".into(),
            reason: format!("not an entropy pair on the segment (residual {residual:e})"),
        });
    }
    let production = (pair.flux_value(0, u_r) - pair.flux_value(0, u_l)) - c * (pair.value(u_r) - pair.value(u_l));
    Ok(EntropyVerdict {
        production,
        admissible: production <= ENTROPY_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShockCandidate {
    pub u_left: Vec<f64>,
    pub u_right: Vec<f64>,
    pub speed: f64,
    pub rh_residual: Vec<f64>,
    pub entropy: EntropyVerdict,
}

impl ShockCandidate {
    pub fn new(law: &ConservationLaw, pair: &EntropyPair, u_left: Vec<f64>, u_right: Vec<f64>, speed: f64) -> Result<Self> {
        let rh_residual = rh_residual(law, &u_left, &u_right, speed)?;
        let entropy = entropy_admissible(law, pair, &u_left, &u_right, speed)?;
        Ok(ShockCandidate {
            u_left,
            u_right,
            speed,
            rh_residual,
            entropy,
        })
    }

    pub fn rh_consistent(&self, tol: f64) -> bool {
        vec_norm_inf(&self.rh_residual) <= tol
    }
}

fn sorted_real_speeds(jac: &DMatrix<f64>) -> Result<Vec<f64>> {
    let scale = jac.amax().max(1.0);
    let mut speeds = Vec::with_capacity(jac.nrows());
    for ev in jac.complex_eigenvalues().iter() {
        if ev.im.abs() > 1e-9 * scale {
            return Err(Error::InvalidParameter {
                name: "u".into(),
                reason: "flux Jacobian has complex eigenvalues (not hyperbolic here)".into(),
            });
        }
        speeds.push(ev.re);
    }
    speeds.sort_by(f64::total_cmp);
    Ok(speeds)
}

/// Unit right eigenvector for the eigenvalue `lambda`, first nonzero component positive.
fn right_eigenvector(jac: &DMatrix<f64>, lambda: f64) -> Vec<f64> {
    let m = jac.nrows();
    let shifted = jac - DMatrix::identity(m, m) * lambda;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let smallest = (0..m)
        .min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))
        .expect("m >= 1");
    let mut r: Vec<f64> = v_t.row(smallest).iter().copied().collect();
    let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    let lead = r.iter().copied().find(|x| x.abs() > 1e-12 * norm).unwrap_or(1.0);
    let sign = if lead < 0.0 { -1.0 } else { 1.0 };
    for x in &mut r {
        *x *= sign / norm;
    }
    r
}

/// `∇λ_i · r_i` for the `i`-th characteristic field (speeds sorted ascending).
pub fn genuine_nonlinearity(law: &ConservationLaw, u: &[f64], i: usize) -> Result<f64> {
    one_dimensional(law)?;
    check_len("state", law.m, u.len())?;
    if i >= law.m {
        return Err(Error::InvalidParameter {
            name: "i".into(),
            reason: format!("field index {i} out of range for m = {}", law.m),
        });
    }
    let jac = law.jacobian(0, u);
    let speeds = sorted_real_speeds(&jac)?;
    let scale = speeds.iter().fold(1.0f64, |a, s| a.max(s.abs()));
    for nb in [i.wrapping_sub(1), i + 1] {
        if let Some(&other) = speeds.get(nb) {
            let gap = (speeds[i] - other).abs();
            if gap < EIGEN_GAP_TOL * scale {
                return Err(Error::EigenvalueCollision { index: i, gap });
            }
        }
    }
    let r = right_eigenvector(&jac, speeds[i]);
    let h = fd_step(vec_norm_inf(u));
    let shifted = |s: f64| -> Result<f64> {
        let w: Vec<f64> = u.iter().zip(&r).map(|(a, b)| a + s * b).collect();
        Ok(sorted_real_speeds(&law.jacobian(0, &w))?[i])
    };
    Ok((shifted(h)? - shifted(-h)?) / (2.0 * h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RiemannKind {
    Constant,
    Shock { speed: f64 },
    Rarefaction { left_edge: f64, right_edge: f64 },
}

/// Self-similar solution `w(x/t)` of a scalar Riemann problem.
#[derive(Debug, Clone)]
pub struct RiemannSolution {
    pub kind: RiemannKind,
    pub u_left: f64,
    pub u_right: f64,
    law: ConservationLaw,
}

impl RiemannSolution {
    /// `w(ξ)` at `ξ = x / t`.
    pub fn evaluate(&self, xi: f64) -> f64 {
        match self.kind {
            RiemannKind::Constant => self.u_left,
            RiemannKind::Shock { speed } => {
                if xi < speed {
                    self.u_left
                } else {
                    self.u_right
                }
            }
            RiemannKind::Rarefaction { left_edge, right_edge } => {
                if xi <= left_edge {
                    self.u_left
                } else if xi >= right_edge {
                    self.u_right
                } else {
                    // f' is increasing on [u_l, u_r]; bisect f'(w) = ξ.
                    let (mut lo, mut hi) = (self.u_left, self.u_right);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if mid <= lo || mid >= hi {
                            break;
                        }
                        if f_prime(&self.law, mid) < xi {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    0.5 * (lo + hi)
                }
            }
        }
    }

    /// The solution at time `t > 0` sampled at the cell centres of `layout`.
    pub fn profile(&self, layout: &GridField, t: f64) -> Result<GridField> {
        layout.clone().with_fill(|x| vec![self.evaluate(x[0] / t)])
    }
}

fn check_convex(law: &ConservationLaw, a: f64, b: f64) -> Result<()> {
    let (lo, hi) = (a.min(b), a.max(b));
    for i in 0..=100 {
        let u = lo + (hi - lo) * i as f64 / 100.0;
        let h = f64::EPSILON.powf(0.25) * u.abs().max(1.0);
        let second = (f(law, u + h) - 2.0 * f(law, u) + f(law, u - h)) / (h * h);
        if second < -CONVEXITY_TOL {
            return Err(Error::NotConvex {
                lower: lo,
                upper: hi,
                at: u,
                second_derivative: second,
            });
        }
    }
    Ok(())
}

/// Entropy solution of the scalar Riemann problem with a convex flux.
pub fn riemann_scalar(law: &ConservationLaw, u_l: f64, u_r: f64) -> Result<RiemannSolution> {
    scalar_law(law)?;
    check_convex(law, u_l, u_r)?;
    let kind = if u_l == u_r {
        RiemannKind::Constant
    } else if u_l > u_r {
        RiemannKind::Shock {
            speed: rh_speed(law, u_l, u_r)?,
        }
    } else {
        RiemannKind::Rarefaction {
            left_edge: f_prime(law, u_l),
            right_edge: f_prime(law, u_r),
        }
    };
    Ok(RiemannSolution {
        kind,
        u_left: u_l,
        u_right: u_r,
        law: law.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectedShock {
    /// `|Δu|`-weighted centre of the flagged interfaces.
    pub position: f64,
    /// `u[last + 1] − u[first]` across the cluster.
    pub jump: f64,
    /// First and last flagged interface (interface `i` lies between cells `i` and `i + 1`).
    pub interfaces: (usize, usize),
}

/// Flags interfaces with `|u_{i+1} − u_i| > threshold · max(1, range of u)` in component `a`
/// and merges flags at most two interfaces apart.
pub fn shock_detect(snapshot: &GridField, a: usize, threshold: f64) -> Result<Vec<DetectedShock>> {
    check_len("snapshot dimension", 1, snapshot.n())?;
    if a >= snapshot.m {
        return Err(Error::InvalidParameter {
            name: "component".into(),
            reason: format!("component {a} out of range for m = {}", snapshot.m),
        });
    }
    let u = snapshot.component(a);
    let (min, max) = u.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    let cut = threshold * (max - min).max(1.0);
    let flags: Vec<usize> = (0..u.len().saturating_sub(1))
        .filter(|&i| (u[i + 1] - u[i]).abs() > cut)
        .collect();

    let mut clusters: Vec<(usize, usize)> = Vec::new();
    for &i in &flags {
        match clusters.last_mut() {
            Some((_, last)) if i - *last <= 2 => *last = i,
            _ => clusters.push((i, i)),
        }
    }
    let h = snapshot.h[0];
    let x0 = snapshot.origin[0];
    Ok(clusters
        .into_iter()
        .map(|(first, last)| {
            let (mut weight, mut moment) = (0.0, 0.0);
            for i in first..=last {
                let w = (u[i + 1] - u[i]).abs();
                weight += w;
                moment += w * (x0 + (i as f64 + 0.5) * h);
            }
            DetectedShock {
                position: moment / weight,
                jump: u[last + 1] - u[first],
                interfaces: (first, last),
            }
        })
        .collect())
}

/// Least-squares line `x = x0 + c t` through `(t, x)` pairs; returns `(c, x0)`.
pub fn fit_line(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::EmptySamples);
    }
    let n = points.len() as f64;
    let tm = points.iter().map(|p| p.0).sum::<f64>() / n;
    let xm = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - tm).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter {
            name: "points".into(),
            reason: "all sample times coincide".into(),
        });
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - tm) * (p.1 - xm)).sum();
    let c = sxy / sxx;
    Ok((c, xm - c * tm))
}

/// The rightmost discontinuity followed through a sequence of snapshots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShockTrack {
    /// `(t, position)` in every snapshot where a discontinuity was found.
    pub path: Vec<(f64, f64)>,
    /// Least-squares slope of `path`.
    pub speed: f64,
    /// States read `offset` cells outside the flagged interfaces in the last snapshot.
    pub u_left: Vec<f64>,
    pub u_right: Vec<f64>,
}

/// Tracks the rightmost discontinuity of component `a` over snapshots with `t ≥ t_min`.
/// `None` when fewer than two snapshots contain one.
pub fn track_rightmost_shock(snapshots: &[Snapshot], a: usize, threshold: f64, t_min: f64, offset: usize) -> Result<Option<ShockTrack>> {
    let mut path = Vec::new();
    let mut last = None;
    for snap in snapshots.iter().filter(|s| s.t >= t_min) {
        if let Some(shock) = shock_detect(&snap.field, a, threshold)?.pop() {
            path.push((snap.t, shock.position));
            last = Some((snap, shock));
        }
    }
    let Some((snap, shock)) = last else {
        return Ok(None);
    };
    if path.len() < 2 {
        return Ok(None);
    }
    let (speed, _) = fit_line(&path)?;
    let cells = snap.field.cells();
    let left = shock.interfaces.0.saturating_sub(offset);
    let right = (shock.interfaces.1 + 1 + offset).min(cells - 1);
    Ok(Some(ShockTrack {
        path,
        speed,
        u_left: snap.field.cell(left).to_vec(),
        u_right: snap.field.cell(right).to_vec(),
    }))
}

/// `‖[f(u)] − c[u]‖_∞ / ‖[u]‖_∞` for a tracked shock: the relative speed defect.
pub fn rh_consistency(law: &ConservationLaw, track: &ShockTrack) -> Result<f64> {
    let residual = rh_residual(law, &track.u_left, &track.u_right, track.speed)?;
    let jump: Vec<f64> = track.u_right.iter().zip(&track.u_left).map(|(r, l)| r - l).collect();
    let size = vec_norm_inf(&jump);
    if size == 0.0 {
        return Err(Error::NoJump);
    }
    Ok(vec_norm_inf(&residual) / size)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViscousRow {
    pub eps: f64,
    /// Time step used for this `ε`.
    pub k: f64,
    /// `L¹` distance to the entropy solution.
    pub to_entropy_solution: f64,
    /// `L¹` distance to the expansion shock with the Rankine-Hugoniot speed (rarefaction data only).
    pub to_expansion_shock: Option<f64>,
}

/// Step data `u_l | u_r` at `x = 0` on the layout of `grid`.
pub fn step_data(grid: &GridField, u_l: f64, u_r: f64) -> Result<GridField> {
    grid.clone().with_fill(|x| vec![if x[0] < 0.0 { u_l } else { u_r }])
}

/// Runs the viscous scheme from step data for each `ε` and measures the `L¹`
/// distance to the entropy solution at time `t`. Requires `h ≤ ε/4`.
pub fn viscous_limit_compare(law: &ConservationLaw, u_l: f64, u_r: f64, eps: &[f64], grid: &GridField, t: f64, cfl_safety: f64) -> Result<Vec<ViscousRow>> {
    let exact = riemann_scalar(law, u_l, u_r)?;
    check_len("grid dimension", 1, grid.n())?;
    let h = grid.h[0];
    for &e in eps {
        if !(e > 0.0) {
            return Err(Error::InvalidParameter {
                name: "eps".into(),
                reason: "viscosities must be positive".into(),
            });
        }
        if h > e / 4.0 {
            return Err(Error::UnresolvedViscosity { h, limit: e / 4.0 });
        }
    }
    let layout = GridField {
        boundary: vec![Boundary::Outflow],
        ..grid.clone()
    };
    let initial = step_data(&layout, u_l, u_r)?;
    let target = exact.profile(&layout, t)?;
    let expansion = match exact.kind {
        RiemannKind::Rarefaction { .. } => {
            let c = rh_speed(law, u_l, u_r)?;
            Some(layout.clone().with_fill(|x| vec![if x[0] < c * t { u_l } else { u_r }])?)
        }
        _ => None,
    };
    let a_star = f_prime(law, u_l).abs().max(f_prime(law, u_r).abs());
    eps.iter()
        .map(|&e| {
            let mut lambda = cfl_safety * h / (2.0 * e);
            if a_star > 0.0 {
                lambda = lambda.min(cfl_safety / a_star);
            }
            let config = SchemeConfig::new(lambda, t).with_cfl_safety(cfl_safety).with_viscosity(e);
            let trace = run(law, &initial, &config, &[])?.into_result()?;
            Ok(ViscousRow {
                eps: e,
                k: trace.k,
                to_entropy_solution: trace.final_state.l1_distance(&target),
                to_expansion_shock: expansion.as_ref().map(|s| trace.final_state.l1_distance(s)),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::StateBox;

    fn burgers() -> ConservationLaw {
        ConservationLaw::scalar(|u| 0.5 * u * u, StateBox::new(vec![-5.0], vec![5.0]))
            .unwrap()
            .with_jacobian(|_, u| DMatrix::from_element(1, 1, u[0]))
    }

    fn burgers_pair() -> EntropyPair {
        EntropyPair::scalar(|u| u * u, |u| 2.0 * u, |_| 2.0, |u| 2.0 / 3.0 * u.powi(3), |u| 2.0 * u * u)
    }

    #[test]
    fn rh_speed_examples() {
        assert_eq!(rh_speed(&burgers(), 1.0, 0.0).unwrap(), 0.5);
        assert_eq!(rh_speed(&burgers(), 2.0, 0.0).unwrap(), 1.0);
        let adv = ConservationLaw::scalar(|u| 3.0 * u, StateBox::new(vec![-5.0], vec![5.0])).unwrap();
        assert!((rh_speed(&adv, -1.0, 4.0).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(rh_speed(&burgers(), 1.0, 1.0), Err(Error::NoJump));
    }

    #[test]
    fn rh_residual_examples() {
        let r = rh_residual(&burgers(), &[1.0], &[0.0], 0.7).unwrap();
        assert!((r[0] - 0.2).abs() < 1e-15);
        assert_eq!(rh_residual(&burgers(), &[1.0], &[0.0], 0.5).unwrap(), vec![0.0]);
    }

    #[test]
    fn entropy_production_examples() {
        let v = entropy_admissible(&burgers(), &burgers_pair(), &[1.0], &[0.0], 0.5).unwrap();
        assert!((v.production + 1.0 / 6.0).abs() < 1e-12);
        assert!(v.admissible);
        let v = entropy_admissible(&burgers(), &burgers_pair(), &[0.0], &[1.0], 0.5).unwrap();
        assert!((v.production - 1.0 / 6.0).abs() < 1e-12);
        assert!(!v.admissible);
        let v = entropy_admissible(&burgers(), &burgers_pair(), &[0.3], &[0.3], 0.1).unwrap();
        assert_eq!(v.production, 0.0);
        assert!(v.admissible);
    }

    #[test]
    fn wrong_pair_is_rejected() {
        let wrong = EntropyPair::scalar(|u| u * u, |u| 2.0 * u, |_| 2.0, |u| u, |_| 1.0);
        assert!(entropy_admissible(&burgers(), &wrong, &[1.0], &[0.0], 0.5).is_err());
    }

    #[test]
    fn genuine_nonlinearity_examples() {
        assert!((genuine_nonlinearity(&burgers(), &[0.7], 0).unwrap() - 1.0).abs() < 1e-8);
        let adv = ConservationLaw::scalar(|u| 2.0 * u, StateBox::new(vec![-5.0], vec![5.0])).unwrap();
        assert!(genuine_nonlinearity(&adv, &[0.7], 0).unwrap().abs() < 1e-8);
    }

    #[test]
    fn repeated_speed_is_a_collision() {
        let law = ConservationLaw::new(1, 2, |_, u| vec![u[0], u[1]], StateBox::new(vec![-1.0; 2], vec![1.0; 2])).unwrap();
        assert!(matches!(genuine_nonlinearity(&law, &[0.0, 0.0], 0), Err(Error::EigenvalueCollision { .. })));
    }

    #[test]
    fn riemann_examples() {
        let shock = riemann_scalar(&burgers(), 1.0, 0.0).unwrap();
        assert_eq!(shock.kind, RiemannKind::Shock { speed: 0.5 });
        assert_eq!(shock.evaluate(0.49), 1.0);
        assert_eq!(shock.evaluate(0.51), 0.0);

        let fan = riemann_scalar(&burgers(), 0.0, 1.0).unwrap();
        assert!(matches!(fan.kind, RiemannKind::Rarefaction { .. }));
        for xi in [-1.0, 0.0, 0.25, 0.5, 0.9, 1.0, 2.0] {
            assert!((fan.evaluate(xi) - f64::clamp(xi, 0.0, 1.0)).abs() < 1e-12, "{xi}");
        }

        assert_eq!(riemann_scalar(&burgers(), 3.0, 3.0).unwrap().kind, RiemannKind::Constant);
    }

    #[test]
    fn concave_flux_is_refused() {
        let law = ConservationLaw::scalar(|u| -u * u, StateBox::new(vec![-5.0], vec![5.0])).unwrap();
        assert!(matches!(riemann_scalar(&law, 1.0, 0.0), Err(Error::NotConvex { .. })));
    }

    #[test]
    fn detector_examples() {
        let g = GridField::uniform(1, 200, 0.0, 1.0, 1, Boundary::Periodic).unwrap();
        let smooth = g.clone().with_fill(|x| vec![(2.0 * std::f64::consts::PI * x[0]).sin()]).unwrap();
        assert!(shock_detect(&smooth, 0, 0.2).unwrap().is_empty());

        let step = g.with_fill(|x| vec![if x[0] < 0.3 { 2.0 } else { 0.5 }]).unwrap();
        let found = shock_detect(&step, 0, DEFAULT_SHOCK_THRESHOLD).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].jump, -1.5);
        assert!((found[0].position - 0.3).abs() < 1e-12);
    }

    #[test]
    fn line_fit_recovers_slope() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 0.1 + 0.5 * i as f64)).collect();
        let (c, x0) = fit_line(&pts).unwrap();
        assert!((c - 0.5).abs() < 1e-14 && (x0 - 0.1).abs() < 1e-14);
    }

    #[test]
    fn viscous_compare_refuses_unresolved_grid() {
        let g = GridField::uniform(1, 100, -1.0, 1.0, 1, Boundary::Outflow).unwrap();
        let r = viscous_limit_compare(&burgers(), 0.0, 1.0, &[0.01], &g, 0.2, 0.9);
        assert!(matches!(r, Err(Error::UnresolvedViscosity { .. })));
    }

    #[test]
    fn viscous_compare_trivial_jump() {
        let g = GridField::uniform(1, 200, -1.0, 1.0, 1, Boundary::Outflow).unwrap();
        let rows = viscous_limit_compare(&burgers(), 0.4, 0.4, &[0.05, 0.04], &g, 0.2, 0.9).unwrap();
        for row in rows {
            assert!(row.to_entropy_solution < 1e-13);
            assert!(row.to_expansion_shock.is_none());
        }
    }
}
