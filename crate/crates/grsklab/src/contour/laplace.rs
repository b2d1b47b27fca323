//! One- and two-point Laplace transforms of the log-gamma polymer partition
//! function as contour integrals over vertical lines.
//!
//! Every integral is symmetric in the variables attached to one line, and
//! carries the Sklyanin factor `prod_{i != j} 1/Gamma(z_i - z_j)`; see
//! [`super::tensor`] for how the tensor-product sums are organised. The
//! integrands are assembled in log form per node and exponentiated once, so
//! very large `u` (given through `ln u`) do not overflow.

use super::quadrature::{Estimate, QuadratureSpec};
use super::tensor::{grouped_sum, Cross, Group};
use crate::error::{Error, Result};
use crate::sampling::ParameterSet;
use crate::specfun::log_gamma;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Cap on the total number of line variables in one integral.
pub const MAX_CONTOUR_DIM: usize = 4;
/// Cap on the dimension of the one-point integral.
pub const MAX_ONE_POINT_DIM: usize = 3;

/// Nodes `z_k` of `Re z = delta` and real weights `dz / (2 pi i) = dy / (2 pi)`.
pub(crate) struct LineRule {
    pub z: Vec<C64>,
    pub w: Vec<f64>,
}

pub(crate) fn line_rule(delta: f64, quad: &QuadratureSpec) -> LineRule {
    let d = quad.line(delta).discretize();
    LineRule { z: d.nodes, w: d.weights.iter().map(|w| w.im / (2.0 * PI)).collect() }
}

/// `1 / (Gamma(s) Gamma(-s)) = -s sin(pi s) / pi` with `s = a - b`.
pub(crate) fn sklyanin_pair(a: C64, b: C64) -> C64 {
    let s = a - b;
    -s * (PI * s).sin() / PI
}

pub(crate) fn lg(z: C64) -> Result<C64> {
    log_gamma(z)
}

fn lg_real(x: f64) -> Result<f64> {
    Ok(log_gamma(C64::new(x, 0.0))?.re)
}

/// Per-node factors `w_k exp(log_f(z_k) - shift)` of a line group, with
/// `shift` the largest `Re log_f` on the line. Large parameters make single
/// factors overflow even when the integral is moderate, so callers fold
/// `dim * shift` into their logarithmic constant instead.
fn node_factors(rule: &LineRule, log_f: impl Fn(C64) -> Result<C64>) -> Result<(Vec<C64>, f64)> {
    let logs: Vec<C64> = rule.z.iter().map(|&z| log_f(z)).collect::<Result<_>>()?;
    let shift = logs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    let values = logs
        .iter()
        .zip(&rule.z)
        .zip(&rule.w)
        .map(|((l, &z), &w)| {
            let v = w * (l - shift).exp();
            if v.re.is_finite() && v.im.is_finite() && shift.is_finite() {
                Ok(v)
            } else {
                Err(Error::PoleCollision(format!("integrand not finite at z = {z}")))
            }
        })
        .collect::<Result<_>>()?;
    Ok((values, shift))
}

/// `exp(log_const)` times the grouped sum, overflow-checked.
fn scaled(log_const: f64, sum: C64) -> Result<C64> {
    let v = log_const.exp() * sum;
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Convergence(format!("contour integral overflows (log constant {log_const})")))
    }
}

fn sklyanin_group(rule: &LineRule, node: Vec<C64>, dim: usize) -> Group {
    Group::new(node, |a, b| sklyanin_pair(rule.z[a], rule.z[b]), dim)
}

fn require_u(u: f64, name: &str) -> Result<()> {
    if !(u >= 0.0 && u.is_finite()) {
        return Err(Error::Precondition(format!("{name} = {u} must be finite and non-negative")));
    }
    Ok(())
}

fn require_line(delta: f64, bound: f64, what: &str) -> Result<()> {
    if !delta.is_finite() || delta <= bound {
        return Err(Error::PoleCollision(format!(
            "contour Re = {delta} must lie to the right of {bound} ({what})"
        )));
    }
    Ok(())
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Default line of the one-point integral: half a rate (capped at 1/2) to
/// the right of the rightmost pole.
pub fn laplace1_default_delta(m: usize, n: usize, params: &ParameterSet) -> f64 {
    let right = max_of(
        params.alphahat[..n].iter().copied().chain(params.alpha[..m].iter().map(|a| -a)),
    );
    right + 0.5 * params.min_rate(m, n).min(1.0)
}

/// `E[exp(-u Z_{m,n})]` by the `n`-fold integral over `Re mu = delta` of
/// `s_n(mu) prod_{j,j'} Gamma(mu_j - alphahat_{j'}) prod_j u^{-mu_j} F(mu_j)
///  / (u^{-alphahat_j} F(alphahat_j))`, `F(z) = prod_{i <= m} Gamma(z + alpha_i)`.
pub fn laplace1(
    m: usize,
    n: usize,
    u: f64,
    params: &ParameterSet,
    delta: Option<f64>,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    if n == 0 || m < n {
        return Err(Error::Precondition(format!("laplace1 needs m >= n >= 1, got ({m}, {n})")));
    }
    if n > MAX_ONE_POINT_DIM {
        return Err(Error::DimensionCap(format!("laplace1 with n = {n} > {MAX_ONE_POINT_DIM}")));
    }
    params.require(m, n)?;
    require_u(u, "u")?;
    if u == 0.0 {
        return Ok(Estimate::exact(1.0));
    }
    laplace1_log(m, n, u.ln(), params, delta, quad)
}

/// [`laplace1`] with `ln u` as input.
pub fn laplace1_log(
    m: usize,
    n: usize,
    log_u: f64,
    params: &ParameterSet,
    delta: Option<f64>,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    let delta = delta.unwrap_or_else(|| laplace1_default_delta(m, n, params));
    let ah = &params.alphahat[..n];
    let al = &params.alpha[..m];
    require_line(delta, max_of(ah.iter().copied()), "poles of Gamma(mu - alphahat)")?;
    require_line(delta, max_of(al.iter().map(|a| -a)), "poles of Gamma(mu + alpha)")?;
    let mut log_const = 0.0;
    for &b in ah {
        log_const += b * log_u;
        for &a in al {
            log_const -= lg_real(a + b)?;
        }
    }
    quad.estimate(|q| {
        let rule = line_rule(delta, q);
        let (node, shift) = node_factors(&rule, |z| {
            let mut s = -z * log_u;
            for &b in ah {
                s += lg(z - b)?;
            }
            for &a in al {
                s += lg(z + a)?;
            }
            Ok(s)
        })?;
        scaled(log_const + n as f64 * shift, grouped_sum(&[sklyanin_group(&rule, node, n)], &[]))
    })
}

/// Contour lines used by a two-point formula.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct TwoPointLines {
    /// Line of the `lambda` variables.
    pub delta: f64,
    /// Line of the `mu` variables.
    pub delta_mu: f64,
}

fn check_two_points(p1: (usize, usize), p2: (usize, usize)) -> Result<()> {
    let ((m1, n1), (m2, n2)) = (p1, p2);
    if m1 == 0 || n2 == 0 {
        return Err(Error::Precondition("points must have positive coordinates".into()));
    }
    if !(m1 < m2 && n1 > n2) {
        return Err(Error::Shape(format!(
            "points ({m1},{n1}), ({m2},{n2}) do not form a staircase (m1 < m2, n1 > n2)"
        )));
    }
    Ok(())
}

/// Default lines for case a: `lambda` at `0.4 kappa` and `mu` at `0.4 kappa`
/// to the right of their respective rightmost poles, `kappa` the minimal rate.
/// For the `(0, gamma)` polymer this is `delta = 0.4 gamma`, `mu` on
/// `delta + gamma`. Fails if the points do not fit case a.
pub fn case_a_default_lines(
    p1: (usize, usize),
    p2: (usize, usize),
    params: &ParameterSet,
) -> Result<TwoPointLines> {
    check_case_a(p1, p2, params)?;
    let ((m1, n1), (m2, n2)) = (p1, p2);
    let kappa = params.min_rate(m2, n1);
    let lam = max_of(
        params.alpha[..m1].iter().copied().chain(params.alphahat[n2..n1].iter().map(|b| -b)),
    );
    let mu = max_of(
        params.alphahat[..n2].iter().copied().chain(params.alpha[m1..m2].iter().map(|a| -a)),
    );
    Ok(TwoPointLines { delta: lam + 0.4 * kappa, delta_mu: mu + 0.4 * kappa })
}

/// Joint Laplace transform `E[exp(-u1 Z_{m1,n1} - u2 Z_{m2,n2})]` when
/// `m2 >= n2`: an `m1`-fold `lambda` integral and an `n2`-fold `mu` integral
/// coupled by `prod_{i,j} Gamma(lambda_i + mu_j) / Gamma(alpha_i + alphahat_j)`.
///
/// `delta` is the `lambda` line and `gamma_shift` the offset of the `mu`
/// line from it; `None` selects [`case_a_default_lines`].
pub fn laplace2_case_a(
    p1: (usize, usize),
    p2: (usize, usize),
    u: (f64, f64),
    params: &ParameterSet,
    delta: Option<f64>,
    gamma_shift: Option<f64>,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    require_u(u.0, "u1")?;
    require_u(u.1, "u2")?;
    check_case_a(p1, p2, params)?;
    if u == (0.0, 0.0) {
        return Ok(Estimate::exact(1.0));
    }
    if u.0 == 0.0 || u.1 == 0.0 {
        return Err(Error::Precondition(
            "two-point formulas need both u > 0 (or both zero)".into(),
        ));
    }
    let def = case_a_default_lines(p1, p2, params)?;
    let lines = match (delta, gamma_shift) {
        (None, None) => def,
        (d, s) => {
            let delta = d.unwrap_or(def.delta);
            TwoPointLines { delta, delta_mu: delta + s.unwrap_or(def.delta_mu - def.delta) }
        }
    };
    laplace2_case_a_log(p1, p2, (u.0.ln(), u.1.ln()), params, lines, quad)
}

fn check_case_a(p1: (usize, usize), p2: (usize, usize), params: &ParameterSet) -> Result<()> {
    check_two_points(p1, p2)?;
    let ((m1, n1), (m2, n2)) = (p1, p2);
    if !(m1 <= n1 && m2 >= n2) {
        return Err(Error::Precondition(format!(
            "case a needs m1 <= n1 and m2 >= n2, got ({m1},{n1}), ({m2},{n2})"
        )));
    }
    if m1 + n2 > MAX_CONTOUR_DIM {
        return Err(Error::DimensionCap(format!("m1 + n2 = {} > {MAX_CONTOUR_DIM}", m1 + n2)));
    }
    params.require(m2, n1)
}

/// [`laplace2_case_a`] with `(ln u1, ln u2)` and explicit lines.
pub fn laplace2_case_a_log(
    p1: (usize, usize),
    p2: (usize, usize),
    log_u: (f64, f64),
    params: &ParameterSet,
    lines: TwoPointLines,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    check_case_a(p1, p2, params)?;
    let ((m1, n1), (m2, n2)) = (p1, p2);
    let (al, ah) = (&params.alpha, &params.alphahat);
    let TwoPointLines { delta: dl, delta_mu: dm } = lines;
    require_line(dl, max_of(al[..m1].iter().copied()), "poles of Gamma(lambda - alpha)")?;
    require_line(dl, max_of(ah[n2..n1].iter().map(|b| -b)), "poles of Gamma(lambda + alphahat)")?;
    require_line(dm, max_of(ah[..n2].iter().copied()), "poles of Gamma(mu - alphahat)")?;
    require_line(dm, max_of(al[m1..m2].iter().map(|a| -a)), "poles of Gamma(mu + alpha)")?;
    require_line(dl + dm, 0.0, "poles of Gamma(lambda + mu)")?;

    let mut log_const = 0.0;
    for &a in &al[..m1] {
        log_const += a * log_u.0;
        for &b in &ah[n2..n1] {
            log_const -= lg_real(a + b)?;
        }
        for &b in &ah[..n2] {
            log_const -= lg_real(a + b)?;
        }
    }
    for &b in &ah[..n2] {
        log_const += b * log_u.1;
        for &a in &al[m1..m2] {
            log_const -= lg_real(a + b)?;
        }
    }
    quad.estimate(|q| {
        let rl = line_rule(dl, q);
        let rm = line_rule(dm, q);
        let (nl, sl) = node_factors(&rl, |z| {
            let mut s = -z * log_u.0;
            for &a in &al[..m1] {
                s += lg(z - a)?;
            }
            for &b in &ah[n2..n1] {
                s += lg(z + b)?;
            }
            Ok(s)
        })?;
        let (nm, sm) = node_factors(&rm, |z| {
            let mut s = -z * log_u.1;
            for &b in &ah[..n2] {
                s += lg(z - b)?;
            }
            for &a in &al[m1..m2] {
                s += lg(z + a)?;
            }
            Ok(s)
        })?;
        let groups = [sklyanin_group(&rl, nl, m1), sklyanin_group(&rm, nm, n2)];
        let cross = cross_table(&groups, 0, 1, |a, b| rl.z[a] + rm.z[b])?;
        scaled(log_const + m1 as f64 * sl + n2 as f64 * sm, grouped_sum(&groups, &[cross]))
    })
}

/// `Gamma(arg(a, b))` for every node pair.
fn cross_table(groups: &[Group], g: usize, h: usize, arg: impl Fn(usize, usize) -> C64) -> Result<Cross> {
    let mut err = None;
    let c = Cross::new(groups, g, h, |a, b| match lg(arg(a, b)) {
        Ok(v) => v.exp(),
        Err(e) => {
            err.get_or_insert(e);
            C64::new(0.0, 0.0)
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(c),
    }
}

/// Default lines for case b: `lambda` at `0.4 kappa` right of its poles, `mu`
/// at `0.1 kappa` right of both its poles and the `lambda` line. For the
/// `(0, gamma)` polymer: `delta = 0.4 gamma`, `delta' = delta + 0.1 gamma`.
/// Fails if the points do not fit case b.
pub fn case_b_default_lines(
    p1: (usize, usize),
    p2: (usize, usize),
    params: &ParameterSet,
) -> Result<TwoPointLines> {
    check_case_b(p1, p2, params)?;
    let ((m1, n1), (m2, n2)) = (p1, p2);
    let kappa = params.min_rate(m2, n1);
    let lam = max_of(
        params.alpha[..m1].iter().copied().chain(params.alphahat[n2..n1].iter().map(|b| -b)),
    ) + 0.4 * kappa;
    let mu = max_of(
        params.alpha[m1..m2]
            .iter()
            .copied()
            .chain(params.alphahat[..n2].iter().map(|b| -b))
            .chain([lam]),
    );
    Ok(TwoPointLines { delta: lam, delta_mu: mu + 0.1 * kappa })
}

fn check_case_b(p1: (usize, usize), p2: (usize, usize), params: &ParameterSet) -> Result<()> {
    check_two_points(p1, p2)?;
    let ((m1, n1), (m2, n2)) = (p1, p2);
    if m2 >= n2 {
        return Err(Error::Precondition(format!(
            "case b needs m2 < n2, got ({m2},{n2}); use case a"
        )));
    }
    if m1 + m2 > MAX_CONTOUR_DIM {
        return Err(Error::DimensionCap(format!("m1 + m2 = {} > {MAX_CONTOUR_DIM}", m1 + m2)));
    }
    params.require(m2, n1)
}

/// Joint Laplace transform when `m2 < n2`: an `m1`-fold integral on
/// `Re lambda = delta` and an `m2`-fold integral on `Re mu = delta' > delta`,
/// coupled by `prod_{i <= m1, i' <= m2} Gamma(mu_{i'} - lambda_i)`.
pub fn laplace2_case_b(
    p1: (usize, usize),
    p2: (usize, usize),
    u: (f64, f64),
    params: &ParameterSet,
    delta: Option<f64>,
    delta_prime: Option<f64>,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    require_u(u.0, "u1")?;
    require_u(u.1, "u2")?;
    check_case_b(p1, p2, params)?;
    if u == (0.0, 0.0) {
        return Ok(Estimate::exact(1.0));
    }
    if u.0 == 0.0 || u.1 == 0.0 {
        return Err(Error::Precondition(
            "two-point formulas need both u > 0 (or both zero)".into(),
        ));
    }
    let def = case_b_default_lines(p1, p2, params)?;
    let delta = delta.unwrap_or(def.delta);
    let delta_mu = delta_prime.unwrap_or(def.delta_mu - def.delta + delta);
    laplace2_case_b_log(p1, p2, (u.0.ln(), u.1.ln()), params, TwoPointLines { delta, delta_mu }, quad)
}

/// [`laplace2_case_b`] with `(ln u1, ln u2)` and explicit lines.
pub fn laplace2_case_b_log(
    p1: (usize, usize),
    p2: (usize, usize),
    log_u: (f64, f64),
    params: &ParameterSet,
    lines: TwoPointLines,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    check_case_b(p1, p2, params)?;
    let ((m1, n1), (m2, n2)) = (p1, p2);
    let (al, ah) = (&params.alpha, &params.alphahat);
    let TwoPointLines { delta: dl, delta_mu: dm } = lines;
    require_line(dl, max_of(al[..m1].iter().copied()), "poles of Gamma(lambda - alpha)")?;
    require_line(dl, max_of(ah[n2..n1].iter().map(|b| -b)), "poles of Gamma(lambda + alphahat)")?;
    require_line(dm, max_of(al[m1..m2].iter().copied()), "poles of Gamma(mu - alpha)")?;
    require_line(dm, max_of(ah[..n2].iter().map(|b| -b)), "poles of Gamma(mu + alphahat)")?;
    require_line(dm, dl, "poles of Gamma(mu - lambda)")?;
    let log_ratio = log_u.0 - log_u.1;

    let mut log_const = 0.0;
    for &a in &al[..m1] {
        log_const += a * log_ratio;
        for &b in &ah[n2..n1] {
            log_const -= lg_real(a + b)?;
        }
    }
    for &a in &al[..m2] {
        log_const += a * log_u.1;
        for &b in &ah[..n2] {
            log_const -= lg_real(a + b)?;
        }
    }
    quad.estimate(|q| {
        let rl = line_rule(dl, q);
        let rm = line_rule(dm, q);
        let (nl, sl) = node_factors(&rl, |z| {
            let mut s = -z * log_ratio;
            for &a in &al[..m1] {
                s += lg(z - a)?;
            }
            for &b in &ah[n2..n1] {
                s += lg(z + b)?;
            }
            Ok(s)
        })?;
        let (nm, sm) = node_factors(&rm, |z| {
            let mut s = -z * log_u.1;
            for &a in &al[m1..m2] {
                s += lg(z - a)?;
            }
            for &b in &ah[..n2] {
                s += lg(z + b)?;
            }
            Ok(s)
        })?;
        let groups = [sklyanin_group(&rl, nl, m1), sklyanin_group(&rm, nm, m2)];
        let cross = cross_table(&groups, 0, 1, |a, b| rm.z[b] - rl.z[a])?;
        scaled(log_const + m1 as f64 * sl + m2 as f64 * sm, grouped_sum(&groups, &[cross]))
    })
}

/// Two-point Laplace transform of the semi-discrete (O'Connell–Yor) polymer,
/// `E[exp(-u1 Z(m1, t1) - u2 Z(m2, t2))]`, where line `i` carries a Brownian
/// motion with drift `-alpha_i`. Same structure as case b with the gamma
/// factors of the columns replaced by `exp(t/2 (z^2 - alpha^2))`.
#[allow(clippy::too_many_arguments)]
pub fn oy_laplace2(
    m: (usize, usize),
    t: (f64, f64),
    u: (f64, f64),
    alpha: &[f64],
    delta: Option<f64>,
    delta_prime: Option<f64>,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    let ((m1, m2), (t1, t2)) = (m, t);
    if !(m1 >= 1 && m1 < m2) {
        return Err(Error::Precondition(format!("need 1 <= m1 < m2, got {m1}, {m2}")));
    }
    if !(t1 > t2 && t2 > 0.0 && t1.is_finite()) {
        return Err(Error::Precondition(format!("need t1 > t2 > 0, got {t1}, {t2}")));
    }
    if m1 + m2 > MAX_CONTOUR_DIM {
        return Err(Error::DimensionCap(format!("m1 + m2 = {} > {MAX_CONTOUR_DIM}", m1 + m2)));
    }
    if alpha.len() < m2 || alpha.iter().any(|a| !a.is_finite()) {
        return Err(Error::Parameters(format!("need {m2} finite drifts")));
    }
    require_u(u.0, "u1")?;
    require_u(u.1, "u2")?;
    if u == (0.0, 0.0) {
        return Ok(Estimate::exact(1.0));
    }
    if u.0 == 0.0 || u.1 == 0.0 {
        return Err(Error::Precondition(
            "two-point formulas need both u > 0 (or both zero)".into(),
        ));
    }
    let dl = delta.unwrap_or_else(|| max_of(alpha[..m1].iter().copied()) + 0.3);
    let dm = delta_prime.unwrap_or_else(|| max_of(alpha[m1..m2].iter().copied().chain([dl])) + 0.3);
    require_line(dl, max_of(alpha[..m1].iter().copied()), "poles of Gamma(lambda - alpha)")?;
    require_line(dm, max_of(alpha[m1..m2].iter().copied()), "poles of Gamma(mu - alpha)")?;
    require_line(dm, dl, "poles of Gamma(mu - lambda)")?;
    let (lu1, lu2) = (u.0.ln(), u.1.ln());
    let log_ratio = lu1 - lu2;
    let dt = t1 - t2;
    let mut log_const = 0.0;
    for &a in &alpha[..m1] {
        log_const += a * log_ratio - dt / 2.0 * a * a;
    }
    for &a in &alpha[..m2] {
        log_const += a * lu2 - t2 / 2.0 * a * a;
    }
    quad.estimate(|q| {
        let rl = line_rule(dl, q);
        let rm = line_rule(dm, q);
        let (nl, sl) = node_factors(&rl, |z| {
            let mut s = -z * log_ratio + dt / 2.0 * z * z;
            for &a in &alpha[..m1] {
                s += lg(z - a)?;
            }
            Ok(s)
        })?;
        let (nm, sm) = node_factors(&rm, |z| {
            let mut s = -z * lu2 + t2 / 2.0 * z * z;
            for &a in &alpha[m1..m2] {
                s += lg(z - a)?;
            }
            Ok(s)
        })?;
        let groups = [sklyanin_group(&rl, nl, m1), sklyanin_group(&rm, nm, m2)];
        let cross = cross_table(&groups, 0, 1, |a, b| rm.z[b] - rl.z[a])?;
        scaled(log_const + m1 as f64 * sl + m2 as f64 * sm, grouped_sum(&groups, &[cross]))
    })
}
