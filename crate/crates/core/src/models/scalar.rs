//! Scalar one-dimensional laws with their quadratic entropy pairs.

use nalgebra::DMatrix;

use crate::entropy::EntropyPair;
use crate::error::{Error, Result};
use crate::law::ConservationLaw;
use crate::system::StateBox;

/// `u_t + (u²/2)_x = 0`.
pub fn burgers(state_box: StateBox) -> Result<ConservationLaw> {
    Ok(ConservationLaw::scalar(|u| 0.5 * u * u, state_box)?
        .with_jacobian(|_, u| DMatrix::from_element(1, 1, u[0]))
        .with_wave_speed(|u| u[0].abs()))
}

/// `U = u²`, `F = (2/3) u³`.
pub fn burgers_entropy_pair() -> EntropyPair {
    EntropyPair::scalar(|u| u * u, |u| 2.0 * u, |_| 2.0, |u| 2.0 / 3.0 * u.powi(3), |u| 2.0 * u * u)
}

/// `u_t + a u_x = 0`.
pub fn advection(a: f64, state_box: StateBox) -> Result<ConservationLaw> {
    Ok(ConservationLaw::scalar(move |u| a * u, state_box)?
        .with_jacobian(move |_, _| DMatrix::from_element(1, 1, a))
        .with_wave_speed(move |_| a.abs()))
}

fn horner(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c)
}

/// Flux `f(u) = Σ_i c_i u^i`.
pub fn polynomial_law(coeffs: Vec<f64>, state_box: StateBox) -> Result<ConservationLaw> {
    if coeffs.is_empty() {
        return Err(Error::InvalidParameter {
            name: "flux_coeffs".into(),
            reason: "at least one coefficient is required".into(),
        });
    }
    let derivative: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
    let d = derivative.clone();
    Ok(ConservationLaw::scalar(move |u| horner(&coeffs, u), state_box)?
        .with_jacobian(move |_, u| DMatrix::from_element(1, 1, horner(&derivative, u[0])))
        .with_wave_speed(move |u| horner(&d, u[0]).abs()))
}

/// `U = u²` with `F = Σ_i 2i c_i u^{i+1} / (i+1)`, the flux making `F' = U' f'`.
pub fn polynomial_entropy_pair(coeffs: &[f64]) -> EntropyPair {
    let f_coeffs: Vec<f64> = std::iter::once(0.0)
        .chain(coeffs.iter().enumerate().map(|(i, c)| 2.0 * i as f64 * c / (i as f64 + 1.0)))
        .collect();
    let df_coeffs: Vec<f64> = coeffs.iter().enumerate().map(|(i, c)| 2.0 * i as f64 * c).collect();
    EntropyPair::scalar(
        |u| u * u,
        |u| 2.0 * u,
        |_| 2.0,
        move |u| horner(&f_coeffs, u),
        move |u| horner(&df_coeffs, u),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::entropy_pair_residual;

    #[test]
    fn polynomial_pair_matches_burgers() {
        let b = StateBox::new(vec![-2.0], vec![2.0]);
        let law = polynomial_law(vec![0.0, 0.0, 0.5], b.clone()).unwrap();
        let pair = polynomial_entropy_pair(&[0.0, 0.0, 0.5]);
        for u in [-1.5, 0.0, 0.7] {
            assert!((pair.flux_value(0, &[u]) - burgers_entropy_pair().flux_value(0, &[u])).abs() < 1e-14);
            assert_eq!(law.flux(0, &[u]), burgers(b.clone()).unwrap().flux(0, &[u]));
        }
        let samples = b.tensor_grid(9);
        assert!(entropy_pair_residual(&law, &pair, &samples).unwrap() < 1e-14);
    }

    #[test]
    fn cubic_flux_pair() {
        let coeffs = vec![1.0, -0.5, 0.25, 0.1];
        let law = polynomial_law(coeffs.clone(), StateBox::new(vec![-2.0], vec![2.0])).unwrap();
        let pair = polynomial_entropy_pair(&coeffs);
        let samples = law.state_box.tensor_grid(11);
        assert!(entropy_pair_residual(&law, &pair, &samples).unwrap() < 1e-12);
    }
}
