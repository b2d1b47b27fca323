//! Fredholm determinants of kernels discretised on contours, and the
//! Borodin–Corwin–Remenik (BCR) determinant for the one-point Laplace
//! transform.

use super::laplace::lg;
use super::quadrature::{Estimate, QuadratureSpec};
use crate::error::{Error, Result};
use crate::sampling::ParameterSet;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::PI;

/// Kernel values `K(z_i, z_j)` on contour nodes with quadrature weights;
/// the Nyström matrix `K(z_i, z_j) w_j` represents the operator.
#[derive(Clone, Debug)]
pub struct KernelMatrix {
    pub nodes: Vec<C64>,
    pub weights: Vec<C64>,
    pub values: DMatrix<C64>,
}

impl KernelMatrix {
    pub fn new(nodes: Vec<C64>, weights: Vec<C64>, values: DMatrix<C64>) -> Result<Self> {
        let n = nodes.len();
        if weights.len() != n || values.nrows() != n || values.ncols() != n {
            return Err(Error::Shape(format!(
                "kernel matrix must be {n} x {n} with {n} weights, got {} x {} and {}",
                values.nrows(),
                values.ncols(),
                weights.len()
            )));
        }
        Ok(KernelMatrix { nodes, weights, values })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `K(z_i, z_j) w_j`.
    pub fn nystrom(&self) -> DMatrix<C64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |i, j| self.values[(i, j)] * self.weights[j])
    }

    /// Terms `e_0, ..., e_order` of `det(I + K) = sum_k e_k`, where `e_k` is
    /// the `k`-fold term `(1/k!) int det[K(z_i, z_j)]`; computed from the
    /// traces `tr(A^j)` of the Nyström matrix via Newton's identities.
    pub fn fredholm_terms(&self, order: usize) -> Vec<C64> {
        fredholm_terms_of(&self.nystrom(), order)
    }

    /// `det(I + A)` by LU.
    pub fn determinant(&self) -> C64 {
        let a = self.nystrom();
        (DMatrix::identity(a.nrows(), a.ncols()) + a).determinant()
    }
}

/// Newton's identities: `k e_k = sum_{j=1}^k (-1)^{j-1} e_{k-j} tr(A^j)`.
pub(crate) fn fredholm_terms_of(a: &DMatrix<C64>, order: usize) -> Vec<C64> {
    let mut traces = Vec::with_capacity(order);
    let mut power = a.clone();
    for j in 1..=order {
        if j > 1 {
            power = &power * a;
        }
        traces.push(power.trace());
    }
    let mut e = vec![C64::new(1.0, 0.0)];
    for k in 1..=order {
        let mut s = C64::new(0.0, 0.0);
        for j in 1..=k {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            s += sign * e[k - j] * traces[j - 1];
        }
        e.push(s / k as f64);
    }
    e
}

/// Contours of the BCR determinant: circle `C_{delta1}` and line `Re w = delta2`,
/// together with the parameter shift that centres the column parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BcrContours {
    pub delta1: f64,
    pub delta2: f64,
    /// `c` with `alpha' = alpha + c`, `alphahat' = alphahat - c`.
    pub shift: f64,
}

/// A truncated Fredholm series with its individual terms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FredholmEstimate {
    pub estimate: Estimate,
    /// Real parts of `e_0, ..., e_order` at the refined discretisation.
    pub terms: Vec<f64>,
    pub contours: BcrContours,
}

/// Default BCR contours. The measure only depends on `alpha_i + alphahat_j`,
/// so the parameters are shifted by `c` = midpoint of the `alphahat` range;
/// then `delta2 = 0.4 min(alpha'_min, 2)` and
/// `delta1 = 0.2 min(delta2, 1 - delta2)`, moved outwards if needed to enclose
/// every `-alphahat'_j`.
pub fn bcr_default_contours(m: usize, n: usize, params: &ParameterSet) -> BcrContours {
    let ah = &params.alphahat[..n];
    let lo = ah.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ah.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let shift = (lo + hi) / 2.0;
    let amin = params.alpha[..m].iter().map(|a| a + shift).fold(f64::INFINITY, f64::min);
    let delta2 = 0.4 * amin.min(2.0);
    let room = delta2.min(1.0 - delta2);
    let spread = (hi - lo) / 2.0;
    let delta1 = (0.2 * room).max((spread + room) / 2.0);
    BcrContours { delta1, delta2, shift }
}

fn check_bcr(m: usize, n: usize, params: &ParameterSet, c: &BcrContours) -> Result<()> {
    let BcrContours { delta1, delta2, shift } = *c;
    let bad = |msg: String| Err(Error::PoleCollision(msg));
    if !(delta2 > 0.0 && delta2 < 1.0) {
        return bad(format!("BCR needs 0 < delta2 < 1, got {delta2}"));
    }
    if !(delta1 > 0.0 && delta1 < delta2.min(1.0 - delta2)) {
        return bad(format!("BCR needs 0 < delta1 < min(delta2, 1 - delta2), got {delta1}"));
    }
    for (j, b) in params.alphahat[..n].iter().enumerate() {
        if (b - shift).abs() >= delta1 {
            return bad(format!(
                "shifted alphahat_{} = {} must lie inside the circle of radius {delta1}",
                j + 1,
                b - shift
            ));
        }
    }
    for (i, a) in params.alpha[..m].iter().enumerate() {
        if a + shift <= delta2 {
            return bad(format!(
                "shifted alpha_{} = {} must lie right of the line Re w = {delta2}",
                i + 1,
                a + shift
            ));
        }
    }
    Ok(())
}

/// The BCR kernel matrix on `C_{delta1}`:
/// `K(v, v') = (1/2 pi i) int_{Re w = delta2} dw / (w - v') * pi / sin(pi (v - w))
///  * exp(g(w) - g(v))`, with
/// `g(z) = z ln u + sum_i ln Gamma(alpha'_i - z) - sum_j ln Gamma(z + alphahat'_j)`.
pub fn bcr_kernel(
    m: usize,
    n: usize,
    log_u: f64,
    params: &ParameterSet,
    contours: &BcrContours,
    quad: &QuadratureSpec,
) -> Result<KernelMatrix> {
    check_bcr(m, n, params, contours)?;
    let al: Vec<f64> = params.alpha[..m].iter().map(|a| a + contours.shift).collect();
    let ah: Vec<f64> = params.alphahat[..n].iter().map(|b| b - contours.shift).collect();
    let g = |z: C64| -> Result<C64> {
        let mut s = z * log_u;
        for &a in &al {
            s += lg(a - z)?;
        }
        for &b in &ah {
            s -= lg(z + b)?;
        }
        Ok(s)
    };
    let circle = quad.circle(contours.delta1).discretize();
    let line = quad.line(contours.delta2).discretize();
    let gv: Vec<C64> = circle.nodes.iter().map(|&v| g(v)).collect::<Result<_>>()?;
    let gw: Vec<C64> = line.nodes.iter().map(|&w| g(w)).collect::<Result<_>>()?;
    let two_pi_i = C64::new(0.0, 2.0 * PI);
    let (mc, ml) = (circle.len(), line.len());
    let gmat = DMatrix::from_fn(mc, ml, |i, k| {
        let (v, w) = (circle.nodes[i], line.nodes[k]);
        PI / (PI * (v - w)).sin() * (gw[k] - gv[i]).exp() * line.weights[k] / two_pi_i
    });
    let dmat = DMatrix::from_fn(ml, mc, |k, j| 1.0 / (line.nodes[k] - circle.nodes[j]));
    let values = gmat * dmat;
    if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Convergence("BCR kernel is not finite (u too extreme?)".into()));
    }
    let weights = circle.weights.iter().map(|w| w / two_pi_i).collect();
    KernelMatrix::new(circle.nodes, weights, values)
}

/// `E[exp(-u Z_{m,n})] = det(I + K_u)` truncated after `order` terms. The
/// kernel has rank at most `n`, so terms beyond order `n` vanish.
#[allow(clippy::too_many_arguments)]
pub fn bcr_fredholm(
    m: usize,
    n: usize,
    u: f64,
    params: &ParameterSet,
    contours: Option<BcrContours>,
    quad: &QuadratureSpec,
    order: usize,
) -> Result<FredholmEstimate> {
    if n == 0 || m == 0 {
        return Err(Error::Precondition("BCR needs m, n >= 1".into()));
    }
    params.require(m, n)?;
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::Precondition(format!("u = {u} must be positive")));
    }
    bcr_fredholm_log(m, n, u.ln(), params, contours, quad, order)
}

/// [`bcr_fredholm`] with `ln u` as input.
#[allow(clippy::too_many_arguments)]
pub fn bcr_fredholm_log(
    m: usize,
    n: usize,
    log_u: f64,
    params: &ParameterSet,
    contours: Option<BcrContours>,
    quad: &QuadratureSpec,
    order: usize,
) -> Result<FredholmEstimate> {
    params.require(m, n)?;
    quad.validate()?;
    let contours = contours.unwrap_or_else(|| bcr_default_contours(m, n, params));
    let series = |q: &QuadratureSpec| -> Result<Vec<C64>> {
        Ok(bcr_kernel(m, n, log_u, params, &contours, q)?.fredholm_terms(order))
    };
    let coarse = series(quad)?;
    let fine = series(&quad.refined())?;
    let sum = |t: &[C64]| t.iter().sum::<C64>();
    Ok(FredholmEstimate {
        estimate: Estimate::from_pair(sum(&coarse), sum(&fine)),
        terms: fine.iter().map(|t| t.re).collect(),
        contours,
    })
}
