//! Extended Airy kernel, one- and two-time distributions of the Airy process
//! as (truncated) block Fredholm series, and the limiting terms of the
//! two-point Laplace-transform series under KPZ scaling.
//!
//! Kernel entries are `lambda`-integrals of Airy products. For `t >= t'` the
//! branch `int_0^inf e^{-lambda (t - t')} Ai(xi + lambda) Ai(xi' + lambda)` is
//! integrated directly. For `t < t'` (gap `s = t' - t`) the branch
//! `-int_{-inf}^0 e^{lambda s} Ai Ai` oscillates slowly when `s` is small, so
//! up to `s = 2` it is rewritten with the exact full-line integral
//! `int_R e^{lambda s} Ai(xi + lambda) Ai(xi' + lambda) dlambda
//!  = (4 pi s)^{-1/2} exp(s^3/12 - (xi + xi') s/2 - (xi - xi')^2/(4 s))`
//! as `int_0^inf e^{lambda s} Ai Ai - (full line)`; beyond `s = 2` the direct
//! integral is used (the subtraction would cancel catastrophically).

use crate::contour::fredholm::fredholm_terms_of;
use crate::contour::{gauss_legendre_on, Estimate};
use crate::error::{Error, Result};
use crate::specfun::{airy_pair, scaling_constants};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Thresholds below this value are rejected (oscillatory regime).
pub const MIN_THRESHOLD: f64 = -5.0;
/// Largest truncation order per time of [`airy_two_point`].
pub const MAX_ORDER: usize = 3;
/// Largest `k1 + k2` of [`limit_term`].
pub const MAX_LIMIT_DIM: usize = 3;
/// Smallest non-zero time gap the discretised kernel resolves: as
/// `t' - t -> 0+` the negative branch tends to `K_Ai - delta(xi - xi')`.
pub const MIN_TIME_GAP: f64 = 0.05;
/// Gap up to which the negative branch uses the full-line subtraction.
const HEAT_SWITCH: f64 = 2.0;
/// Exponent at which integrands are considered negligible.
const TAIL_EXPONENT: f64 = 40.0;
/// Fourier points per time for extracting the graded series coefficients.
const DFT_POINTS: usize = 16;

/// Discretisation of the Airy computations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AiryQuadrature {
    /// `lambda` cutoff beyond the positive part of the smallest argument.
    pub lambda_cutoff: f64,
    /// Gauss–Legendre nodes of a `lambda` integral.
    pub lambda_nodes: usize,
    /// Space variables run over `[xi, max(xi, 0) + space_tail]`.
    pub space_tail: f64,
    /// Gauss–Legendre nodes per time in space.
    pub space_nodes: usize,
}

impl Default for AiryQuadrature {
    fn default() -> Self {
        AiryQuadrature { lambda_cutoff: 12.0, lambda_nodes: 160, space_tail: 12.0, space_nodes: 48 }
    }
}

impl AiryQuadrature {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_cutoff > 0.0 && self.space_tail > 0.0) || self.lambda_nodes < 8 || self.space_nodes < 4 {
            return Err(Error::Precondition(format!("invalid Airy quadrature {self:?}")));
        }
        Ok(())
    }

    /// Longer cutoffs and 1.5 times the nodes.
    pub fn refined(&self) -> Self {
        AiryQuadrature {
            lambda_cutoff: 1.25 * self.lambda_cutoff,
            lambda_nodes: self.lambda_nodes * 3 / 2,
            space_tail: 1.25 * self.space_tail,
            space_nodes: self.space_nodes * 3 / 2,
        }
    }
}

fn check_threshold(xi: f64) -> Result<()> {
    if xi.is_nan() || xi < MIN_THRESHOLD {
        return Err(Error::OutOfRange(format!("threshold {xi} below {MIN_THRESHOLD}")));
    }
    Ok(())
}

/// `Ai(y_i + sign * x_k)` for all pairs.
fn airy_table(y: &[f64], x: &[f64], sign: f64) -> DMatrix<f64> {
    let vals: Vec<f64> = (0..y.len() * x.len())
        .into_par_iter()
        .map(|p| airy_pair(y[p / x.len()] + sign * x[p % x.len()]).0)
        .collect();
    DMatrix::from_row_slice(y.len(), x.len(), &vals)
}

/// `sum_k w_k Ai(y_i + s x_k) Ai(y'_j + s x_k)`.
fn airy_gram(y: &[f64], yp: &[f64], x: &[f64], w: &[f64], sign: f64) -> DMatrix<f64> {
    let a = airy_table(y, x, sign);
    let b = airy_table(yp, x, sign);
    let mut aw = a;
    for (k, wk) in w.iter().enumerate() {
        aw.column_mut(k).scale_mut(*wk);
    }
    aw * b.transpose()
}

/// `(4 pi s)^{-1/2} exp(s^3/12 - (a + b) s/2 - (a - b)^2/(4 s))`.
fn full_line(a: f64, b: f64, s: f64) -> f64 {
    (s.powi(3) / 12.0 - (a + b) * s / 2.0 - (a - b).powi(2) / (4.0 * s)).exp() / (4.0 * PI * s).sqrt()
}

/// Matrix of the extended kernel `Ai(t, y_i; t', y'_j)` with `dt = t - t'`.
fn kernel_block(y: &[f64], yp: &[f64], dt: f64, q: &AiryQuadrature) -> Result<DMatrix<f64>> {
    let ymin = y.iter().chain(yp).copied().fold(f64::INFINITY, f64::min);
    for &v in y.iter().chain(yp) {
        check_threshold(v)?;
    }
    let base = q.lambda_cutoff + (-ymin).max(0.0);
    if dt >= 0.0 {
        let (x, w) = gauss_legendre_on(q.lambda_nodes, 0.0, base);
        let w: Vec<f64> = x.iter().zip(&w).map(|(x, w)| w * (-x * dt).exp()).collect();
        return Ok(airy_gram(y, yp, &x, &w, 1.0));
    }
    let s = -dt;
    if s < MIN_TIME_GAP {
        return Err(Error::Convergence(format!(
            "time gap {s} below {MIN_TIME_GAP}: the negative branch is too sharply peaked to resolve"
        )));
    }
    if s <= HEAT_SWITCH {
        // Extend the cutoff until the Airy decay beats the exponential growth.
        let mut len = base;
        while 4.0 / 3.0 * (ymin + len).max(0.0).powf(1.5) - s * len < TAIL_EXPONENT {
            len += 1.0;
        }
        let nodes = q.lambda_nodes * (len / base).ceil() as usize;
        let (x, w) = gauss_legendre_on(nodes, 0.0, len);
        let w: Vec<f64> = x.iter().zip(&w).map(|(x, w)| w * (x * s).exp()).collect();
        let mut m = airy_gram(y, yp, &x, &w, 1.0);
        for (i, &a) in y.iter().enumerate() {
            for (j, &b) in yp.iter().enumerate() {
                m[(i, j)] -= full_line(a, b, s);
            }
        }
        Ok(m)
    } else {
        // -int_0^inf e^{-x s} Ai(y - x) Ai(y' - x) dx; oscillations of
        // frequency <= sqrt(|y - x|) need ~16 nodes per unit length.
        let len = TAIL_EXPONENT / s;
        let nodes = q.lambda_nodes.max((16.0 * len) as usize);
        let (x, w) = gauss_legendre_on(nodes, 0.0, len);
        let w: Vec<f64> = x.iter().zip(&w).map(|(x, w)| -w * (-x * s).exp()).collect();
        Ok(airy_gram(y, yp, &x, &w, -1.0))
    }
}

/// Extended Airy kernel `Ai(t, xi; t', xi')` with a refinement error estimate.
pub fn extended_airy_kernel(t: f64, xi: f64, tp: f64, xip: f64) -> Result<Estimate> {
    extended_airy_kernel_with(t, xi, tp, xip, &AiryQuadrature::default())
}

/// [`extended_airy_kernel`] with an explicit discretisation.
pub fn extended_airy_kernel_with(t: f64, xi: f64, tp: f64, xip: f64, q: &AiryQuadrature) -> Result<Estimate> {
    q.validate()?;
    if ![t, xi, tp, xip].iter().all(|v| v.is_finite()) {
        return Err(Error::Precondition("kernel arguments must be finite".into()));
    }
    let eval = |q: &AiryQuadrature| -> Result<C64> { Ok(C64::new(kernel_block(&[xi], &[xip], t - tp, q)?[(0, 0)], 0.0)) };
    Ok(Estimate::from_pair(eval(q)?, eval(&q.refined())?))
}

/// Truncated block Fredholm series of a multi-time Airy distribution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AiryEstimate {
    /// Series truncated at `order` per time.
    pub value: f64,
    /// Refinement error estimate of `value`.
    pub error: f64,
    /// The untruncated determinant `det(I - f Ai f)` on the same grid.
    pub full: f64,
    /// Partial sums truncated at orders `0..=order` per time.
    pub partial_sums: Vec<f64>,
    /// `terms[a][b]`: the term with `a` variables at the first time and `b`
    /// at the second (a single column for one time).
    pub terms: Vec<Vec<f64>>,
    /// Whether the increments of the partial sums decrease in size.
    pub monotone: bool,
}

/// Space grids per time and the symmetrised Nyström matrix of `f Ai f`.
fn nystrom(times: &[f64], xis: &[f64], q: &AiryQuadrature) -> Result<(DMatrix<f64>, Vec<usize>)> {
    let grids: Vec<(Vec<f64>, Vec<f64>)> =
        xis.iter().map(|&xi| gauss_legendre_on(q.space_nodes, xi, xi.max(0.0) + q.space_tail)).collect();
    let sizes: Vec<usize> = grids.iter().map(|g| g.0.len()).collect();
    let total: usize = sizes.iter().sum();
    let mut a = DMatrix::zeros(total, total);
    let mut r0 = 0;
    for (r, (yr, wr)) in grids.iter().enumerate() {
        let mut c0 = 0;
        for (s, (ys, ws)) in grids.iter().enumerate() {
            let block = kernel_block(yr, ys, times[r] - times[s], q)?;
            for i in 0..yr.len() {
                for j in 0..ys.len() {
                    a[(r0 + i, c0 + j)] = wr[i].sqrt() * block[(i, j)] * ws[j].sqrt();
                }
            }
            c0 += ys.len();
        }
        r0 += yr.len();
    }
    Ok((a, sizes))
}

struct Series {
    full: f64,
    terms: Vec<Vec<f64>>,
}

fn one_time_series(xi: f64, order: usize, q: &AiryQuadrature) -> Result<Series> {
    let (a, _) = nystrom(&[0.0], &[xi], q)?;
    let n = a.nrows();
    let full = (DMatrix::<f64>::identity(n, n) - &a).determinant();
    let minus = a.map(|v| C64::new(-v, 0.0));
    let e = fredholm_terms_of(&minus, order);
    Ok(Series { full, terms: e.iter().map(|z| vec![z.re]).collect() })
}

/// Coefficients of `det(I - diag(z1, z2) A)` in `z1^a z2^b` by a discrete
/// Fourier transform on the unit torus.
fn two_time_series(times: [f64; 2], xis: [f64; 2], order: usize, q: &AiryQuadrature) -> Result<Series> {
    let (a, sizes) = nystrom(&times, &xis, q)?;
    let n = a.nrows();
    let full = (DMatrix::<f64>::identity(n, n) - &a).determinant();
    let m = DFT_POINTS;
    let ac = a.map(|v| C64::new(v, 0.0));
    let values: Vec<C64> = (0..m * m)
        .into_par_iter()
        .map(|p| {
            let z = [C64::from_polar(1.0, 2.0 * PI * (p / m) as f64 / m as f64), C64::from_polar(1.0, 2.0 * PI * (p % m) as f64 / m as f64)];
            let mut b = DMatrix::<C64>::identity(n, n);
            for i in 0..n {
                let zi = if i < sizes[0] { z[0] } else { z[1] };
                for j in 0..n {
                    b[(i, j)] -= zi * ac[(i, j)];
                }
            }
            b.determinant()
        })
        .collect();
    let mut terms = vec![vec![0.0; order + 1]; order + 1];
    for (ea, row) in terms.iter_mut().enumerate() {
        for (eb, t) in row.iter_mut().enumerate() {
            let mut s = C64::new(0.0, 0.0);
            for p in 0..m * m {
                let phase = -2.0 * PI * ((p / m) * ea + (p % m) * eb) as f64 / m as f64;
                s += values[p] * C64::from_polar(1.0, phase);
            }
            *t = s.re / (m * m) as f64;
        }
    }
    Ok(Series { full, terms })
}

fn partial_sums(terms: &[Vec<f64>], order: usize) -> Vec<f64> {
    (0..=order)
        .map(|k| terms.iter().take(k + 1).flat_map(|row| row.iter().take(k + 1)).sum())
        .collect()
}

/// `P(Ai(t1) <= xi1, Ai(t2) <= xi2)` for the stationary Airy process as the
/// block Fredholm series truncated at `order` variables per time. Equal
/// times reduce to one time with threshold `min(xi1, xi2)`; an infinite
/// threshold drops its time.
pub fn airy_two_point(t1: f64, t2: f64, xi1: f64, xi2: f64, order: usize) -> Result<AiryEstimate> {
    airy_two_point_with(t1, t2, xi1, xi2, order, &AiryQuadrature::default())
}

/// [`airy_two_point`] with an explicit discretisation.
pub fn airy_two_point_with(
    t1: f64,
    t2: f64,
    xi1: f64,
    xi2: f64,
    order: usize,
    q: &AiryQuadrature,
) -> Result<AiryEstimate> {
    if order > MAX_ORDER {
        return Err(Error::DimensionCap(format!("order {order} > {MAX_ORDER}")));
    }
    q.validate()?;
    if !(t1.is_finite() && t2.is_finite()) {
        return Err(Error::Precondition("times must be finite".into()));
    }
    for xi in [xi1, xi2] {
        if xi != f64::INFINITY {
            check_threshold(xi)?;
        }
    }
    let run = |q: &AiryQuadrature| -> Result<Series> {
        match (xi1.is_finite(), xi2.is_finite()) {
            (false, false) => Ok(Series { full: 1.0, terms: vec![vec![1.0]] }),
            (true, false) => one_time_series(xi1, order, q),
            (false, true) => one_time_series(xi2, order, q),
            (true, true) if t1 == t2 => one_time_series(xi1.min(xi2), order, q),
            (true, true) => two_time_series([t1, t2], [xi1, xi2], order, q),
        }
    };
    let coarse = run(q)?;
    let fine = run(&q.refined())?;
    let order = order.min(fine.terms.len() - 1);
    let sums = partial_sums(&fine.terms, order);
    let value = sums[order];
    let error = (partial_sums(&coarse.terms, order)[order] - value).abs();
    let steps: Vec<f64> = sums.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let monotone = steps.windows(2).all(|w| w[1] <= w[0]);
    Ok(AiryEstimate { value, error, full: fine.full, partial_sums: sums, terms: fine.terms, monotone })
}

/// One-point Airy distribution `F_2(xi)` (GUE Tracy–Widom) through the same
/// engine, truncated at `order`.
pub fn airy_one_point(xi: f64, order: usize) -> Result<AiryEstimate> {
    airy_two_point(0.0, 0.0, xi, f64::INFINITY, order)
}

/// Thresholds and times of the Airy process matching the two scaled points:
/// times `(-c3 t1, c3 t2)`, thresholds `c1 r_i + c2 t_i^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AiryArguments {
    pub times: [f64; 2],
    pub thresholds: [f64; 2],
}

pub fn airy_arguments(t1: f64, t2: f64, r1: f64, r2: f64, gamma: f64) -> Result<AiryArguments> {
    let k = scaling_constants(gamma)?;
    Ok(AiryArguments {
        times: [-k.c3 * t1, k.c3 * t2],
        thresholds: [k.c1 * r1 + k.c2 * t1 * t1, k.c1 * r2 + k.c2 * t2 * t2],
    })
}

/// Limit probability `P(Ai(-c3 t1) <= c1 r1 + c2 t1^2, Ai(c3 t2) <= c1 r2 + c2 t2^2)`.
pub fn conjecture_rhs(t1: f64, t2: f64, r1: f64, r2: f64, gamma: f64, order: usize) -> Result<AiryEstimate> {
    let a = airy_arguments(t1, t2, r1, r2, gamma)?;
    airy_two_point(a.times[0], a.times[1], a.thresholds[0], a.thresholds[1], order)
}

/// Limit of the `(k2, k1)` term of the two-point series: `k2` variables at
/// the second point (threshold `theta2`, time `c3 t2`) and `k1` at the first
/// (`theta1`, `-c3 t1`). Computed as
/// `(-1)^{k1+k2}/(k1! k2!) int_{(0,inf)^{k1+k2}} det[...] dtau` with entries
/// `A'(tau, tau') = int_0^inf Ai(theta2 + x + tau) Ai(theta2 + x + tau') dx`,
/// `B'(tau, tau') = int_0^inf e^{-c3 (t1+t2) x} Ai(theta2 + tau + x) Ai(theta1 + tau' + x) dx`,
/// `C'(tau, tau') = -int_0^inf e^{-c3 (t1+t2) x} Ai(theta1 + tau - x) Ai(theta2 + tau' - x) dx`,
/// `D'` as `A'` with `theta1`, by tensor-product quadrature over the orthant.
#[allow(clippy::too_many_arguments)]
pub fn limit_term(
    k2: usize,
    k1: usize,
    t1: f64,
    t2: f64,
    r1: f64,
    r2: f64,
    gamma: f64,
    q: &AiryQuadrature,
) -> Result<Estimate> {
    let d = k1 + k2;
    if d > MAX_LIMIT_DIM {
        return Err(Error::DimensionCap(format!("k1 + k2 = {d} > {MAX_LIMIT_DIM}")));
    }
    if !(t1 > 0.0 && t2 > 0.0) {
        return Err(Error::Precondition("need t1, t2 > 0".into()));
    }
    q.validate()?;
    let args = airy_arguments(t1, t2, r1, r2, gamma)?;
    let [theta1, theta2] = args.thresholds;
    check_threshold(theta1)?;
    check_threshold(theta2)?;
    if d == 0 {
        return Ok(Estimate::exact(1.0));
    }
    let gap = args.times[1] - args.times[0];
    let eval = |q: &AiryQuadrature| -> Result<C64> {
        let len = q.space_tail + (-theta1.min(theta2)).max(0.0);
        let (tau, w) = gauss_legendre_on(q.space_nodes, 0.0, len);
        let y2: Vec<f64> = tau.iter().map(|t| theta2 + t).collect();
        let y1: Vec<f64> = tau.iter().map(|t| theta1 + t).collect();
        let a = kernel_block(&y2, &y2, 0.0, q)?;
        let b = kernel_block(&y2, &y1, gap, q)?;
        let c = kernel_block(&y1, &y2, -gap, q)?;
        let dd = kernel_block(&y1, &y1, 0.0, q)?;
        let entry = |i: usize, j: usize, ti: usize, tj: usize| -> f64 {
            match (i < k2, j < k2) {
                (true, true) => a[(ti, tj)],
                (true, false) => b[(ti, tj)],
                (false, true) => c[(ti, tj)],
                (false, false) => dd[(ti, tj)],
            }
        };
        let k = tau.len();
        let total = k.pow(d as u32);
        let sum: f64 = (0..total)
            .into_par_iter()
            .map(|flat| {
                let mut idx = [0usize; MAX_LIMIT_DIM];
                let mut rest = flat;
                let mut weight = 1.0;
                for slot in idx.iter_mut().take(d) {
                    *slot = rest % k;
                    rest /= k;
                    weight *= w[*slot];
                }
                weight * DMatrix::from_fn(d, d, |i, j| entry(i, j, idx[i], idx[j])).determinant()
            })
            .sum();
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        let fact = |n: usize| (1..=n).product::<usize>() as f64;
        Ok(C64::new(sign * sum / (fact(k1) * fact(k2)), 0.0))
    };
    Ok(Estimate::from_pair(eval(q)?, eval(&q.refined())?))
}

/// `F_2(s) = det(I - K_Ai)_{L^2(s, inf)}` with the closed-form Airy kernel
/// `(Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y)` on a dense Gauss–Legendre grid;
/// independent of the `lambda`-integral route.
pub fn tracy_widom_f2(s: f64) -> Result<f64> {
    check_threshold(s)?;
    let (x, w) = gauss_legendre_on(96, s, s.max(0.0) + 16.0);
    let ai: Vec<(f64, f64)> = x.iter().map(|&v| airy_pair(v)).collect();
    let n = x.len();
    let k = DMatrix::from_fn(n, n, |i, j| {
        let (a, ap) = ai[i];
        let (b, bp) = ai[j];
        let kij = if i == j { ap * ap - x[i] * a * a } else { (a * bp - ap * b) / (x[i] - x[j]) };
        w[i].sqrt() * kij * w[j].sqrt()
    });
    Ok((DMatrix::<f64>::identity(n, n) - k).determinant())
}
