//! Polytropic gas dynamics: the symmetric form in pressure and velocity, and the
//! one-dimensional conservative form.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::field::{MatrixField, StateCheck, VectorField};
use crate::law::ConservationLaw;
use crate::system::{StateBox, SystemDef};

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 1.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "gamma".into(),
            reason: format!("need gamma > 1 (got {gamma})"),
        })
    }
}

/// Density from pressure with unit polytropic constant, `p = ρ^γ`.
pub fn density(p: f64, gamma: f64) -> f64 {
    p.powf(1.0 / gamma)
}

/// `(1/γp)(∂_t p + v·∇p) + div v = 0`, `ρ(∂_t v + (v·∇)v) + ∇p = 0` in the unknowns `(p, v)`.
pub fn euler_polytropic_sh(n: usize, gamma: f64) -> Result<SystemDef> {
    check_gamma(gamma)?;
    let m = n + 1;
    let mut coeff = vec![MatrixField::from_fn(m, move |_, u| {
        let mut m0 = DMatrix::zeros(m, m);
        m0[(0, 0)] = 1.0 / (gamma * u[0]);
        let rho = density(u[0], gamma);
        for i in 1..m {
            m0[(i, i)] = rho;
        }
        m0
    })];
    for j in 0..n {
        coeff.push(MatrixField::from_fn(m, move |_, u| {
            let vj = u[j + 1];
            let mut mj = DMatrix::zeros(m, m);
            mj[(0, 0)] = vj / (gamma * u[0]);
            mj[(0, j + 1)] = 1.0;
            mj[(j + 1, 0)] = 1.0;
            let rho_v = density(u[0], gamma) * vj;
            for i in 1..m {
                mj[(i, i)] = rho_v;
            }
            mj
        }));
    }
    Ok(SystemDef::new(n, coeff, VectorField::zero(m))?.with_admissibility(StateCheck::new(|u| {
        if u[0] > 0.0 {
            Ok(())
        } else {
            Err(format!("pressure must be positive (p = {})", u[0]))
        }
    })))
}

/// Sampling box `{0.1 ≤ p ≤ 10, |v_j| ≤ 3}`.
pub fn euler_sh_box(n: usize) -> StateBox {
    let mut lower = vec![0.1];
    let mut upper = vec![10.0];
    lower.extend(vec![-3.0; n]);
    upper.extend(vec![3.0; n]);
    StateBox::new(lower, upper)
}

/// `(ρ, ρv, E) ↦ (ρ, v, p)`.
pub fn primitive(u: &[f64], gamma: f64) -> [f64; 3] {
    let v = u[1] / u[0];
    [u[0], v, (gamma - 1.0) * (u[2] - 0.5 * u[0] * v * v)]
}

/// `(ρ, v, p) ↦ (ρ, ρv, E)`.
pub fn conservative(w: [f64; 3], gamma: f64) -> Vec<f64> {
    let [rho, v, p] = w;
    vec![rho, rho * v, p / (gamma - 1.0) + 0.5 * rho * v * v]
}

/// Fluxes `(ρv, ρv² + p, v(E + p))` with `p = (γ−1)(E − ½ρv²)`; requires `ρ > 0`, `p > 0`.
pub fn euler_conservative_1d(gamma: f64, state_box: StateBox) -> Result<ConservationLaw> {
    check_gamma(gamma)?;
    let law = ConservationLaw::new(
        1,
        3,
        move |_, u| {
            let [_, v, p] = primitive(u, gamma);
            vec![u[1], u[1] * v + p, v * (u[2] + p)]
        },
        state_box,
    )?;
    Ok(law
        .with_jacobian(move |_, u| {
            let [_, v, _] = primitive(u, gamma);
            let g1 = gamma - 1.0;
            let enthalpy = gamma * u[2] / u[0] - 0.5 * g1 * v * v;
            DMatrix::from_row_slice(
                3,
                3,
                &[
                    0.0,
                    1.0,
                    0.0,
                    0.5 * (gamma - 3.0) * v * v,
                    (3.0 - gamma) * v,
                    g1,
                    v * (0.5 * g1 * v * v - enthalpy),
                    enthalpy - g1 * v * v,
                    gamma * v,
                ],
            )
        })
        .with_wave_speed(move |u| {
            let [rho, v, p] = primitive(u, gamma);
            v.abs() + (gamma * p / rho).sqrt()
        })
        .with_admissibility(StateCheck::new(move |u| {
            let [rho, _, p] = primitive(u, gamma);
            if !(rho > 0.0) {
                Err(format!("density must be positive (rho = {rho})"))
            } else if !(p > 0.0) {
                Err(format!("pressure must be positive (p = {p})"))
            } else {
                Ok(())
            }
        })))
}

/// Isothermal gas `(ρ, ρv)` with unit sound speed: fluxes `(ρv, ρv² + ρ)`.
pub fn isothermal_euler_1d(state_box: StateBox) -> Result<ConservationLaw> {
    ConservationLaw::new(1, 2, |_, u| vec![u[1], u[1] * u[1] / u[0] + u[0]], state_box)
}
