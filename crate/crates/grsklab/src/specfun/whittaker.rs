use super::gamma::{log_gamma, sklyanin};
use crate::contour::gauss_legendre_on;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::Serialize;

/// Arguments of a `GL(n)` Whittaker function `Psi^{(n)}_alpha(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WhittakerArg {
    /// Spectral parameters `alpha_1..alpha_n`.
    pub alpha: Vec<C64>,
    /// Base point `x_1..x_n > 0` (top row of the pattern).
    pub x: Vec<f64>,
}

/// Quadrature for the Givental integral: each pattern variable is written
/// `z = e^y` with `y` on `[-half_length, half_length]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GiventalQuadrature {
    pub half_length: f64,
    pub nodes: usize,
    /// Rank 3 (three nested dimensions) is only evaluated when this is set.
    pub allow_expensive: bool,
}

impl Default for GiventalQuadrature {
    fn default() -> Self {
        GiventalQuadrature { half_length: 12.0, nodes: 200, allow_expensive: false }
    }
}

/// Log of the Givental weight for a full pattern `z[i][j]` (`i`-th row has
/// `i + 1` entries, last row is `x`), without the `dz/z` measure:
/// `sum_i -alpha_i log(prod_j z_ij / prod_j z_{i-1,j}) - sum (z_ij/z_{i+1,j} + z_{i+1,j+1}/z_ij)`.
fn log_weight(alpha: &[C64], rows: &[Vec<f64>]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    let mut prev_sum = 0.0;
    for (i, row) in rows.iter().enumerate() {
        let s: f64 = row.iter().map(|z| z.ln()).sum();
        acc -= alpha[i] * (s - prev_sum);
        prev_sum = s;
    }
    let mut expo = 0.0;
    for i in 0..rows.len() - 1 {
        for j in 0..=i {
            expo += rows[i][j] / rows[i + 1][j] + rows[i + 1][j + 1] / rows[i][j];
        }
    }
    acc - expo
}

/// `Psi^{(n)}_alpha(x)` by nested quadrature of Givental's integral over the
/// interior of the Gelfand–Tsetlin pattern with top row `x`.
pub fn whittaker_givental(arg: &WhittakerArg, quad: &GiventalQuadrature) -> Result<C64> {
    let n = arg.alpha.len();
    if n == 0 || n != arg.x.len() {
        return Err(Error::Precondition("alpha and x must have the same positive length".into()));
    }
    if n > 3 {
        return Err(Error::DimensionCap(format!("Whittaker rank {n} > 3")));
    }
    if n == 3 && !quad.allow_expensive {
        return Err(Error::DimensionCap("rank 3 requires allow_expensive".into()));
    }
    if arg.x.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::Precondition("x must be positive".into()));
    }
    let (y, w) = gauss_legendre_on(quad.nodes, -quad.half_length, quad.half_length);
    let z: Vec<f64> = y.iter().map(|y| y.exp()).collect();
    let total = match n {
        1 => return Ok((-arg.alpha[0] * arg.x[0].ln()).exp()),
        2 => {
            let mut acc = C64::new(0.0, 0.0);
            for (k, &zk) in z.iter().enumerate() {
                let rows = [vec![zk], arg.x.clone()];
                acc += w[k] * log_weight(&arg.alpha, &rows).exp();
            }
            acc
        }
        _ => {
            let mut acc = C64::new(0.0, 0.0);
            for (a, &z11) in z.iter().enumerate() {
                for (b, &z21) in z.iter().enumerate() {
                    for (c, &z22) in z.iter().enumerate() {
                        let rows = [vec![z11], vec![z21, z22], arg.x.clone()];
                        acc += w[a] * w[b] * w[c] * log_weight(&arg.alpha, &rows).exp();
                    }
                }
            }
            acc
        }
    };
    Ok(total)
}

/// Both sides of Stade's identity and their relative difference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub relerr: f64,
}

impl IdentityCheck {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        IdentityCheck { lhs, rhs, relerr: (lhs - rhs).abs() / rhs.abs() }
    }
}

/// `int e^{-r x_1} Psi_{-nu}(x) Psi_{-lambda}(x) prod dx_i/x_i` against
/// `r^{-sum(nu_i + lambda_i)} prod_{i,j} Gamma(nu_i + lambda_j)`, for `n <= 2`.
///
/// Here `x_1` is the first top-row coordinate of the pattern, the one that
/// enters the exponent as `z_11 / x_1`.
pub fn stade_check(nu: &[f64], lambda: &[f64], r: f64, quad: &GiventalQuadrature) -> Result<IdentityCheck> {
    let n = nu.len();
    if n == 0 || n > 2 || lambda.len() != n {
        return Err(Error::Precondition("Stade check needs 1 <= n <= 2 and matching lengths".into()));
    }
    if !(r > 0.0) {
        return Err(Error::Precondition("r must be positive".into()));
    }
    for &a in nu {
        for &b in lambda {
            if !(a + b > 0.0) {
                return Err(Error::Precondition("need nu_i + lambda_j > 0".into()));
            }
        }
    }
    let mut log_rhs = -(nu.iter().sum::<f64>() + lambda.iter().sum::<f64>()) * r.ln();
    for &a in nu {
        for &b in lambda {
            log_rhs += log_gamma(C64::new(a + b, 0.0))?.re;
        }
    }
    let rhs = log_rhs.exp();
    let neg = |v: &[f64]| v.iter().map(|&a| C64::new(-a, 0.0)).collect::<Vec<_>>();
    let (an, al) = (neg(nu), neg(lambda));
    let (y, w) = gauss_legendre_on(quad.nodes, -quad.half_length, quad.half_length);
    let lhs = if n == 1 {
        let mut acc = 0.0;
        for (k, &yk) in y.iter().enumerate() {
            let x = yk.exp();
            acc += w[k] * (-r * x + (nu[0] + lambda[0]) * yk).exp();
        }
        acc
    } else {
        let mut acc = 0.0;
        for (a, &ya) in y.iter().enumerate() {
            for (b, &yb) in y.iter().enumerate() {
                let x = vec![ya.exp(), yb.exp()];
                let p1 = whittaker_givental(&WhittakerArg { alpha: an.clone(), x: x.clone() }, quad)?;
                let p2 = whittaker_givental(&WhittakerArg { alpha: al.clone(), x: x.clone() }, quad)?;
                acc += w[a] * w[b] * (-r * x[0]).exp() * (p1 * p2).re;
            }
        }
        acc
    };
    Ok(IdentityCheck::new(lhs, rhs))
}

/// Rank-one Plancherel isometry for `f(x) = e^{-x - 1/x}`:
/// `int |f|^2 dx/x` against `int_{i R} |f^(lambda)|^2 s_1(lambda) d lambda`
/// with `f^(lambda) = int f(x) x^{-lambda} dx/x`.
///
/// The transform `f^(i s)` is a discrete sum over the `y` grid; it aliases
/// once `s` times the central node spacing (about `pi L / nodes`) nears
/// `pi`, so the grid is enlarged to keep four nodes per oscillation up to
/// `|s| = spectral_half_length`.
pub fn plancherel_rank1_check(quad: &GiventalQuadrature, spectral_half_length: f64) -> Result<IdentityCheck> {
    if !(spectral_half_length > 0.0 && spectral_half_length.is_finite()) {
        return Err(Error::Precondition("spectral half-length must be positive".into()));
    }
    let resolved = (2.0 * quad.half_length * spectral_half_length).ceil() as usize;
    let (y, w) = gauss_legendre_on(quad.nodes.max(resolved), -quad.half_length, quad.half_length);
    let f: Vec<f64> = y.iter().map(|y| (-y.exp() - (-y).exp()).exp()).collect();
    let lhs: f64 = f.iter().zip(&w).map(|(f, w)| w * f * f).sum();
    // Along lambda = i s, s_1 d lambda = (2 pi i)^{-1} i ds = ds / (2 pi).
    let (s, ws) = gauss_legendre_on(4 * quad.nodes, -spectral_half_length, spectral_half_length);
    let mut rhs = 0.0;
    for (&sk, &wk) in s.iter().zip(&ws) {
        let lam = C64::new(0.0, sk);
        let mut fh = C64::new(0.0, 0.0);
        for ((&yk, &fk), &wy) in y.iter().zip(&f).zip(&w) {
            fh += wy * fk * (-lam * yk).exp();
        }
        let density = sklyanin(&[lam])? * C64::new(0.0, 1.0);
        rhs += wk * (fh.norm_sqr() * density).re;
    }
    Ok(IdentityCheck::new(lhs, rhs))
}
