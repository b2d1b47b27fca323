//! Special functions behind the contour formulas.

pub mod airy;
pub mod gamma;
pub mod whittaker;

pub use airy::{airy_ai, airy_ai_prime, airy_pair};
pub use gamma::{
    digamma, gamma, gamma_asymptotic_ratio, ln_gamma, log_gamma, log_gamma_unchecked,
    log_sklyanin_product, polygamma, sklyanin,
};
pub use whittaker::{
    plancherel_rank1_check, stade_check, whittaker_givental, GiventalQuadrature, IdentityCheck,
    WhittakerArg,
};

use crate::error::{Error, Result};
use serde::Serialize;

/// Constants of the two-point KPZ scaling for the `(0, gamma)` polymer, built
/// from `G(z) = log Gamma(z) - log Gamma(gamma - z) + f z` and
/// `F(z) = log Gamma(z) + log Gamma(gamma - z)` at the critical point `gamma/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingConstants {
    pub gamma: f64,
    /// Free energy `f = -2 Psi(gamma/2)`.
    pub f_gamma: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// `G'''(gamma/2) = 2 Psi''(gamma/2)`.
    pub g3: f64,
    /// `F''(gamma/2) = 2 Psi'(gamma/2)`.
    pub f2: f64,
    /// `G'(gamma/2)` and `G''(gamma/2)` evaluated from their definitions; both
    /// should vanish (double critical point).
    pub g1_residual: f64,
    pub g2_residual: f64,
}

/// `f`, `c_1 = (-G'''/2)^{-1/3}`, `c_2 = -c_1 F''^2 / (2 G''')`,
/// `c_3 = -F''/G'''`, all at `gamma/2`.
pub fn scaling_constants(gamma: f64) -> Result<ScalingConstants> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::Parameters(format!("gamma = {gamma} must be positive")));
    }
    let h = gamma / 2.0;
    let f_gamma = -2.0 * digamma(h)?;
    let g1_residual = digamma(h)? + digamma(gamma - h)? + f_gamma;
    let g2_residual = polygamma(1, h)? - polygamma(1, gamma - h)?;
    let g3 = polygamma(2, h)? + polygamma(2, gamma - h)?;
    let f2 = polygamma(1, h)? + polygamma(1, gamma - h)?;
    let c1 = (-g3 / 2.0).powf(-1.0 / 3.0);
    let c2 = -c1 * f2 * f2 / (2.0 * g3);
    let c3 = -f2 / g3;
    if !(c1 > 0.0 && c2 > 0.0 && c3 > 0.0) {
        return Err(Error::Convergence(format!(
            "scaling constants lost their sign at gamma = {gamma}: c1 = {c1}, c2 = {c2}, c3 = {c3}"
        )));
    }
    Ok(ScalingConstants { gamma, f_gamma, c1, c2, c3, g3, f2, g1_residual, g2_residual })
}
