use crate::contour::gauss_legendre;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};
use std::sync::OnceLock;

/// Ray length of the wedge contour.
pub const AIRY_RAY_LENGTH: f64 = 8.0;
/// Gauss–Legendre nodes per ray.
pub const AIRY_RAY_NODES: usize = 400;
/// Public evaluation range of [`airy_ai`].
pub const AIRY_RANGE: f64 = 10.0;

fn ray_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let (x, w) = gauss_legendre(AIRY_RAY_NODES);
        let half = AIRY_RAY_LENGTH / 2.0;
        (
            x.iter().map(|t| half * (t + 1.0)).collect(),
            w.iter().map(|w| half * w).collect(),
        )
    })
}

/// `(Ai(x), Ai'(x))` from `Ai(x) = (1/2 pi i) int e^{z^3/3 - x z} dz` over the
/// wedge `z_0 + r e^{+-i pi/3}`.
///
/// The vertex sits at the saddle `z_0 = sqrt(x)` for `x > 0`, which keeps the
/// integrand of size `e^{-2 x^{3/2} / 3}` and the result relatively accurate;
/// for `x <= 0` it sits at the origin. By conjugate symmetry the two rays
/// combine into `(1/pi) int_0^R Im(e^{phi(z)} e^{i pi/3}) dr`.
pub fn airy_wedge(x: f64) -> (f64, f64) {
    let (nodes, weights) = ray_rule();
    let z0 = x.max(0.0).sqrt();
    let dir = C64::from_polar(1.0, FRAC_PI_3);
    let (mut ai, mut aip) = (0.0, 0.0);
    for (&r, &w) in nodes.iter().zip(weights) {
        let z = z0 + r * dir;
        let f = (z * z * z / 3.0 - x * z).exp() * dir;
        ai += w * f.im;
        aip -= w * (z * f).im;
    }
    (ai / PI, aip / PI)
}

/// Large-argument expansions (asymptotic in `zeta = 2|x|^{3/2}/3`), used for
/// `|x| > 10`.
fn airy_asymptotic(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let zeta = 2.0 / 3.0 * ax.powf(1.5);
    // u_k, v_k coefficients of the Airy expansions.
    let mut u = vec![1.0f64];
    let mut v = vec![1.0f64];
    for k in 1..30 {
        let kf = k as f64;
        let uk = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(uk);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk);
    }
    if x > 0.0 {
        let (mut su, mut sv) = (0.0, 0.0);
        let mut p = 1.0;
        let mut last = f64::INFINITY;
        for k in 0..30 {
            let term = u[k] * p;
            if term.abs() > last {
                break;
            }
            last = term.abs();
            su += term;
            sv += v[k] * p;
            p *= -1.0 / zeta;
        }
        let e = (-zeta).exp() / (2.0 * PI.sqrt());
        (e * ax.powf(-0.25) * su, -e * ax.powf(0.25) * sv)
    } else {
        let (mut ue, mut uo, mut ve, mut vo) = (0.0, 0.0, 0.0, 0.0);
        let mut last = f64::INFINITY;
        for k in 0..30 {
            let p = zeta.powi(-(k as i32));
            let term = u[k] * p;
            if term.abs() > last {
                break;
            }
            last = term.abs();
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                ue += sign * term;
                ve += sign * v[k] * p;
            } else {
                uo += sign * term;
                vo += sign * v[k] * p;
            }
        }
        let (s, c) = (zeta - FRAC_PI_4).sin_cos();
        let pre = 1.0 / PI.sqrt();
        (
            pre * ax.powf(-0.25) * (c * ue + s * uo),
            pre * ax.powf(0.25) * (s * ve - c * vo),
        )
    }
}

/// `(Ai(x), Ai'(x))` on the whole real line; internal workhorse for kernels.
pub fn airy_pair(x: f64) -> (f64, f64) {
    if x.abs() <= AIRY_RANGE {
        airy_wedge(x)
    } else {
        airy_asymptotic(x)
    }
}

/// Airy function `Ai(x)` on the supported range `[-10, 10]`.
pub fn airy_ai(x: f64) -> Result<f64> {
    if !(-AIRY_RANGE..=AIRY_RANGE).contains(&x) {
        return Err(Error::OutOfRange(format!("Ai({x}) outside [-10, 10]")));
    }
    Ok(airy_wedge(x).0)
}

/// Derivative `Ai'(x)` on the supported range `[-10, 10]`.
pub fn airy_ai_prime(x: f64) -> Result<f64> {
    if !(-AIRY_RANGE..=AIRY_RANGE).contains(&x) {
        return Err(Error::OutOfRange(format!("Ai'({x}) outside [-10, 10]")));
    }
    Ok(airy_wedge(x).1)
}
