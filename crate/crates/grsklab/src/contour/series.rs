//! The Fredholm-like double series of the two-point Laplace transform of the
//! `(0, gamma)` polymer, its block-Cauchy structure and its terms along the
//! KPZ scaling `N -> infinity`.
//!
//! Index convention: `joint_series_term(k2, k1, ..)` is the summand with
//! `k2` contour pairs `(v, w)` attached to the second point `(m2, n2)` and
//! Laplace variable `u2`, and `k1` pairs `(vs, ws)` attached to the first
//! point `(m1, n1)` and `u1`. Thus `(1, 0)` is the first Fredholm term of the
//! one-point BCR determinant of the second point.

use super::fredholm::fredholm_terms_of;
use super::laplace::lg;
use super::quadrature::{gauss_legendre_on, Estimate, QuadratureSpec};
use crate::error::{Error, Result};
use crate::sampling::ParameterSet;
use crate::specfun::{scaling_constants, ScalingConstants};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Cap on `k1 + k2` (each unit adds a circle and a line integral).
pub const MAX_SERIES_PAIRS: usize = 2;

/// Contours of the series: `v`-variables on the circle `C_{delta1}`,
/// `w`-variables on the line `Re w = delta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesContours {
    pub delta: f64,
    pub delta1: f64,
}

impl SeriesContours {
    /// `delta = 0.4 gamma`, `delta1 = 0.2 min(delta, 1 - delta)`.
    pub fn default_for(gamma: f64) -> Self {
        let delta = 0.4 * gamma;
        SeriesContours { delta, delta1: 0.2 * delta.min(1.0 - delta) }
    }

    /// Wider contours for the pre-limit terms: `delta = 0.45 gamma`,
    /// `delta1 = 0.55 min(delta, 1 - delta)`. A larger circle keeps
    /// `|Gamma(v)|^{n}` moderate when `n` grows with `N`.
    pub fn prelimit_default(gamma: f64) -> Self {
        let delta = 0.45 * gamma;
        SeriesContours { delta, delta1: 0.55 * delta.min(1.0 - delta) }
    }

    fn check(&self, gamma: f64) -> Result<()> {
        let SeriesContours { delta, delta1 } = *self;
        if !(delta > 0.0 && delta < gamma / 2.0) {
            return Err(Error::PoleCollision(format!("series needs 0 < delta < gamma/2, got {delta}")));
        }
        if !(delta1 > 0.0 && delta1 < delta.min(1.0 - delta)) {
            return Err(Error::PoleCollision(format!(
                "series needs 0 < delta1 < min(delta, 1 - delta), got {delta1}"
            )));
        }
        Ok(())
    }
}

/// Discretised pair contour `(v, w)`: factor of one pair attached to a point.
struct PairTable {
    v: Vec<C64>,
    w: Vec<C64>,
    /// `f[i * M_w + k]`: weights, `pi / sin(pi (v - w))`, `u^{w - v}` and the
    /// gamma ratios, for `v = v_i`, `w = w_k`.
    f: Vec<C64>,
}

impl PairTable {
    /// `a` copies of `Gamma(gamma - .)` and `b` copies of `Gamma(.)`:
    /// `u^{w-v} (Gamma(gamma - w)/Gamma(gamma - v))^a (Gamma(v)/Gamma(w))^b`.
    fn new(
        log_u: f64,
        a: usize,
        b: usize,
        gamma: f64,
        contours: &SeriesContours,
        quad: &QuadratureSpec,
    ) -> Result<Self> {
        let circle = quad.circle(contours.delta1).discretize();
        let line = quad.line(contours.delta).discretize();
        let two_pi_i = C64::new(0.0, 2.0 * PI);
        let h = |z: C64| -> Result<C64> { Ok(z * log_u + a as f64 * lg(gamma - z)? - b as f64 * lg(z)?) };
        let hv: Vec<C64> = circle.nodes.iter().map(|&v| h(v)).collect::<Result<_>>()?;
        let hw: Vec<C64> = line.nodes.iter().map(|&w| h(w)).collect::<Result<_>>()?;
        let mut f = Vec::with_capacity(circle.len() * line.len());
        for (i, &v) in circle.nodes.iter().enumerate() {
            for (k, &w) in line.nodes.iter().enumerate() {
                let val = circle.weights[i] / two_pi_i * line.weights[k] / two_pi_i * PI
                    / (PI * (v - w)).sin()
                    * (hw[k] - hv[i]).exp();
                if !(val.re.is_finite() && val.im.is_finite()) {
                    return Err(Error::Convergence(format!(
                        "series integrand overflows at v = {v}, w = {w}"
                    )));
                }
                f.push(val);
            }
        }
        Ok(PairTable { v: circle.nodes, w: line.nodes, f })
    }

    /// `Q[i, j] = sum_k f(v_i, w_k) / (w_k - v_j)`: the one-point Fredholm
    /// operator of this point, discretised on the circle.
    fn operator(&self) -> DMatrix<C64> {
        let (mv, mw) = (self.v.len(), self.w.len());
        DMatrix::from_fn(mv, mv, |i, j| {
            (0..mw).map(|k| self.f[i * mw + k] / (self.w[k] - self.v[j])).sum()
        })
    }
}

fn check_geometry(p1: (usize, usize), p2: (usize, usize)) -> Result<()> {
    let ((m1, n1), (m2, n2)) = (p1, p2);
    if !(m1 >= 1 && n2 >= 1 && m1 <= n1 && m2 >= n2 && m2 > m1 && n2 < n1) {
        return Err(Error::Precondition(format!(
            "series needs m1 <= n1, m2 >= n2, m2 > m1, n2 < n1; got ({m1},{n1}), ({m2},{n2})"
        )));
    }
    Ok(())
}

/// The `(k2, k1)` summand of the joint Laplace transform
/// `E[exp(-u1 Z_{m1,n1} - u2 Z_{m2,n2})] = sum_{k2 <= n2, k1 <= m1} term(k2, k1)`
/// for the `(0, gamma)` polymer.
#[allow(clippy::too_many_arguments)]
pub fn joint_series_term(
    k2: usize,
    k1: usize,
    p1: (usize, usize),
    p2: (usize, usize),
    u: (f64, f64),
    params: &ParameterSet,
    contours: Option<SeriesContours>,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    if !(u.0 > 0.0 && u.1 > 0.0 && u.0.is_finite() && u.1.is_finite()) {
        return Err(Error::Precondition("series needs u1, u2 > 0".into()));
    }
    let gamma = params.require_homogeneous()?;
    params.require(p2.0, p1.1)?;
    let contours = contours.unwrap_or_else(|| SeriesContours::default_for(gamma));
    joint_series_term_log(k2, k1, p1, p2, (u.0.ln(), u.1.ln()), gamma, &contours, quad)
}

/// [`joint_series_term`] with `(ln u1, ln u2)` and explicit `gamma`.
#[allow(clippy::too_many_arguments)]
pub fn joint_series_term_log(
    k2: usize,
    k1: usize,
    p1: (usize, usize),
    p2: (usize, usize),
    log_u: (f64, f64),
    gamma: f64,
    contours: &SeriesContours,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    check_geometry(p1, p2)?;
    let ((m1, n1), (m2, n2)) = (p1, p2);
    if k2 > n2 || k1 > m1 {
        return Err(Error::Precondition(format!(
            "term ({k2}, {k1}) outside the series range k2 <= {n2}, k1 <= {m1}"
        )));
    }
    if k1 + k2 > MAX_SERIES_PAIRS {
        return Err(Error::DimensionCap(format!("k1 + k2 = {} > {MAX_SERIES_PAIRS}", k1 + k2)));
    }
    contours.check(gamma)?;
    if k1 + k2 == 0 {
        return Ok(Estimate::exact(1.0));
    }
    quad.estimate(|q| {
        let second = || PairTable::new(log_u.1, m2, n2, gamma, contours, q);
        let first = || PairTable::new(log_u.0, n1, m1, gamma, contours, q);
        Ok(match (k2, k1) {
            (k, 0) => fredholm_terms_of(&second()?.operator(), k)[k],
            (0, k) => fredholm_terms_of(&first()?.operator(), k)[k],
            _ => mixed_term(&second()?, &first()?, gamma)?,
        })
    })
}

/// The `(1, 1)` term: a four-fold sum over `(v, w)` and `(vs, ws)` with the
/// cross factor `Gamma(g - ws - w) Gamma(g - vs - v) / (Gamma(g - ws - v) Gamma(g - vs - w))`.
fn mixed_term(second: &PairTable, first: &PairTable, gamma: f64) -> Result<C64> {
    let (mv, mw) = (second.v.len(), second.w.len());
    let table = |a: &[C64], b: &[C64], sign: f64| -> Result<Vec<C64>> {
        let mut t = Vec::with_capacity(a.len() * b.len());
        for &x in a {
            for &y in b {
                t.push((sign * lg(gamma - x - y)?).exp());
            }
        }
        Ok(t)
    };
    // Index convention: first argument belongs to the first point.
    let ww = table(&first.w, &second.w, 1.0)?; // Gamma(g - ws - w)
    let vv = table(&first.v, &second.v, 1.0)?; // Gamma(g - vs - v)
    let wv = table(&first.w, &second.v, -1.0)?; // 1/Gamma(g - ws - v)
    let vw = table(&first.v, &second.w, -1.0)?; // 1/Gamma(g - vs - w)
    // b(vs, ws) = f1 / (ws - vs)
    let b: Vec<C64> = (0..mv * mw)
        .map(|p| first.f[p] / (first.w[p % mw] - first.v[p / mw]))
        .collect();
    let parts: Vec<C64> = (0..mv)
        .into_par_iter()
        .map(|i| {
            let v = second.v[i];
            let mut acc = C64::new(0.0, 0.0);
            let mut y = vec![C64::new(0.0, 0.0); mw];
            for k in 0..mw {
                let a = second.f[i * mw + k] / (second.w[k] - v);
                // y[ks] = Gamma(g - ws_ks - w_k) / Gamma(g - ws_ks - v_i)
                for (ks, yk) in y.iter_mut().enumerate() {
                    *yk = ww[ks * mw + k] * wv[ks * mv + i];
                }
                let mut inner = C64::new(0.0, 0.0);
                for is in 0..mv {
                    let x = vv[is * mv + i] * vw[is * mw + k];
                    let row = &b[is * mw..(is + 1) * mw];
                    let dot: C64 = row.iter().zip(&y).map(|(b, y)| b * y).sum();
                    inner += x * dot;
                }
                acc += a * inner;
            }
            acc
        })
        .collect();
    Ok(parts.iter().sum())
}

/// Result of a two-sided identity check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexCheck {
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub relerr: f64,
}

impl ComplexCheck {
    fn new(lhs: C64, rhs: C64) -> Self {
        ComplexCheck { lhs: [lhs.re, lhs.im], rhs: [rhs.re, rhs.im], relerr: (lhs - rhs).norm() / lhs.norm() }
    }
}

fn cauchy_det(a: &[C64], b: &[C64]) -> C64 {
    DMatrix::from_fn(a.len(), b.len(), |i, j| 1.0 / (a[i] - b[j])).determinant()
}

/// Block Cauchy identity: the product of the two Cauchy determinants and
/// the rational cross factor (`lhs`), against the integral over
/// `(0, inf)^{n+m}` of the determinant with blocks
/// `e^{-x_j (w_i - v_j)}`, `-e^{-x_{n+j} (gamma - w_i - ws_j)}`,
/// `e^{-x_j (gamma - vs_i - v_j)}`, `e^{-x_{n+j} (ws_j - vs_i)}` (`rhs`),
/// evaluated by tensor-product quadrature with `nodes_per_dim` nodes.
pub fn block_cauchy_check(
    w: &[C64],
    v: &[C64],
    ws: &[C64],
    vs: &[C64],
    gamma: f64,
    nodes_per_dim: usize,
) -> Result<ComplexCheck> {
    let (n, m) = (w.len(), ws.len());
    if v.len() != n || vs.len() != m || n + m == 0 {
        return Err(Error::Precondition("need |w| = |v|, |ws| = |vs| and n + m > 0".into()));
    }
    if n + m > 4 {
        return Err(Error::DimensionCap(format!("n + m = {} > 4", n + m)));
    }
    let half = gamma / 2.0;
    if w.iter().chain(v).chain(ws).chain(vs).any(|z| z.re >= half) {
        return Err(Error::Precondition("need Re of all variables < gamma/2".into()));
    }
    for (a, b) in [(w, v), (ws, vs)] {
        if a.iter().any(|x| b.iter().any(|y| (x - y).re <= 0.0)) {
            return Err(Error::Precondition("need Re(w_i - v_j) > 0 and Re(ws_i - vs_j) > 0".into()));
        }
    }
    let mut lhs = cauchy_det(w, v) * cauchy_det(ws, vs);
    for k in 0..n {
        for l in 0..m {
            lhs *= (gamma - ws[l] - v[k]) * (gamma - vs[l] - w[k])
                / ((gamma - ws[l] - w[k]) * (gamma - vs[l] - v[k]));
        }
    }
    // Column j's rates: Re of the exponent coefficients in that column.
    let entry = |i: usize, j: usize, x: f64| -> C64 {
        match (i < n, j < n) {
            (true, true) => (-x * (w[i] - v[j])).exp(),
            (true, false) => -(-x * (gamma - w[i] - ws[j - n])).exp(),
            (false, true) => (-x * (gamma - vs[i - n] - v[j])).exp(),
            (false, false) => (-x * (ws[j - n] - vs[i - n])).exp(),
        }
    };
    let d = n + m;
    let mut rmin = f64::INFINITY;
    let mut rmax: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let r = -(entry(i, j, 1.0).norm().ln());
            rmin = rmin.min(r);
            rmax = rmax.max(r);
        }
    }
    let (x, wx) = orthant_rule(rmin, rmax, nodes_per_dim);
    let k = x.len();
    let total = k.pow(d as u32);
    let rhs: C64 = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut idx = flat;
            let mut weight = 1.0;
            let mut xs = [0.0; 4];
            for xj in xs.iter_mut().take(d) {
                let t = idx % k;
                idx /= k;
                *xj = x[t];
                weight *= wx[t];
            }
            weight * DMatrix::from_fn(d, d, |i, j| entry(i, j, xs[j])).determinant()
        })
        .sum();
    Ok(ComplexCheck::new(lhs, rhs))
}

/// Composite Gauss–Legendre rule on `(0, X)` for sums of exponentials with
/// decay rates in `[rmin, rmax]`: panels of width `0.25/rmax` doubling up to
/// `X = 40/rmin`, about `nodes` nodes in total.
fn orthant_rule(rmin: f64, rmax: f64, nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let end = 40.0 / rmin;
    let mut edges = vec![0.0];
    let mut h = 0.25 / rmax;
    while *edges.last().unwrap() < end {
        edges.push(edges.last().unwrap() + h);
        h *= 2.0;
    }
    let q = nodes.div_ceil(edges.len() - 1).max(2);
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for p in edges.windows(2) {
        let (x, w) = gauss_legendre_on(q, p[0], p[1]);
        xs.extend(x);
        ws.extend(w);
    }
    (xs, ws)
}

/// Scaling inputs of the pre-limit terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingInputs {
    pub n: usize,
    pub t1: f64,
    pub t2: f64,
    pub r1: f64,
    pub r2: f64,
}

/// `(m1, n1) = (N - t1 N^{2/3}, N + t1 N^{2/3})`,
/// `(m2, n2) = (N + t2 N^{2/3}, N - t2 N^{2/3})`, rounded to the nearest
/// integer, and `ln u_i = -N f_gamma - r_i N^{1/3}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScaledGeometry {
    pub p1: (usize, usize),
    pub p2: (usize, usize),
    /// Unrounded `t_i N^{2/3}`.
    pub shift1: f64,
    pub shift2: f64,
    pub log_u1: f64,
    pub log_u2: f64,
}

pub fn scaled_geometry(s: &ScalingInputs, k: &ScalingConstants) -> Result<ScaledGeometry> {
    if s.n == 0 || !(s.t1 > 0.0 && s.t2 > 0.0) {
        return Err(Error::Precondition("need N >= 1 and t1, t2 > 0".into()));
    }
    let nf = s.n as f64;
    let (s1, s2) = (s.t1 * nf.powf(2.0 / 3.0), s.t2 * nf.powf(2.0 / 3.0));
    let (d1, d2) = (s1.round() as i64, s2.round() as i64);
    let n = s.n as i64;
    if n - d1 < 1 || n - d2 < 1 {
        return Err(Error::Precondition(format!("t N^(2/3) too large for N = {}", s.n)));
    }
    let p1 = ((n - d1) as usize, (n + d1) as usize);
    let p2 = ((n + d2) as usize, (n - d2) as usize);
    let c = nf.cbrt();
    Ok(ScaledGeometry {
        p1,
        p2,
        shift1: s1,
        shift2: s2,
        log_u1: -nf * k.f_gamma - s.r1 * c,
        log_u2: -nf * k.f_gamma - s.r2 * c,
    })
}

/// Largest `N` accepted by [`prelimit_term`].
pub const MAX_PRELIMIT_N: usize = 24;

/// A pre-limit term together with the rounded geometry it was evaluated on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PrelimitTerm {
    pub estimate: Estimate,
    pub geometry: ScaledGeometry,
}

/// `I^{(N)}_{k2, k1}`: the `(k2, k1)` summand of the series at the scaled
/// geometry. The `x` and `tau` integrals of the exponential block
/// representation are elementary Laplace integrals and are carried out in
/// closed form (they reproduce the Cauchy determinants and `1/(v - w)`
/// factors), so the term coincides with [`joint_series_term`] there.
pub fn prelimit_term(
    k2: usize,
    k1: usize,
    scaling: &ScalingInputs,
    gamma: f64,
    contours: Option<SeriesContours>,
    quad: &QuadratureSpec,
) -> Result<PrelimitTerm> {
    if scaling.n > MAX_PRELIMIT_N {
        return Err(Error::DimensionCap(format!("N = {} > {MAX_PRELIMIT_N}", scaling.n)));
    }
    let k = scaling_constants(gamma)?;
    let geometry = scaled_geometry(scaling, &k)?;
    let contours = contours.unwrap_or_else(|| SeriesContours::prelimit_default(gamma));
    let estimate = joint_series_term_log(
        k2,
        k1,
        geometry.p1,
        geometry.p2,
        (geometry.log_u1, geometry.log_u2),
        gamma,
        &contours,
        quad,
    )?;
    Ok(PrelimitTerm { estimate, geometry })
}

/// `(|Im w|, log|integrand| - bound exponent)` at sampled nodes of the
/// `(1, 0)` / `(0, 1)` integrand (one `(v, w)` pair, `v` fixed on the circle),
/// where the exponent is `-pi (m2 - n2)/2 |w|` (second point) or
/// `-pi (n1 - m1)/2 |w|` (first point). The bound holds when these excesses
/// stay bounded above as `|Im w|` grows.
pub fn single_pair_bound_excess(
    second_point: bool,
    scaling: &ScalingInputs,
    gamma: f64,
    contours: &SeriesContours,
    heights: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let k = scaling_constants(gamma)?;
    let g = scaled_geometry(scaling, &k)?;
    let ((m1, n1), (m2, n2)) = (g.p1, g.p2);
    let (log_u, a, b, rate) = if second_point {
        (g.log_u2, m2, n2, (m2 - n2) as f64)
    } else {
        (g.log_u1, n1, m1, (n1 - m1) as f64)
    };
    let v = C64::new(-contours.delta1, 0.0);
    let log_f = |z: C64| -> Result<C64> { Ok(z * log_u + a as f64 * lg(gamma - z)? - b as f64 * lg(z)?) };
    let lv = log_f(v)?;
    heights
        .iter()
        .map(|&y| {
            let w = C64::new(contours.delta, y);
            let s = PI * (v - w);
            // log|pi / sin(s)| computed stably for large |Im s|.
            let log_sin = s.im.abs() - std::f64::consts::LN_2 + (1.0 - (-2.0 * s.im.abs()).exp() * (2.0 * s.re).cos()).abs().ln() / 2.0;
            let log_mod = (log_f(w)? - lv).re + PI.ln() - log_sin - (w - v).norm().ln();
            Ok((y.abs(), log_mod + PI * rate / 2.0 * w.norm()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_cauchy_single_column() {
        let w = [C64::new(0.4, 0.0)];
        let v = [C64::new(0.1, 0.0)];
        let c = block_cauchy_check(&w, &v, &[], &[], 1.0, 200).unwrap();
        assert!((c.lhs[0] - 1.0 / 0.3).abs() < 1e-12);
        assert!(c.relerr < 1e-10, "{c:?}");
    }

    #[test]
    fn scaled_geometry_rounds() {
        let k = scaling_constants(1.0).unwrap();
        let s = ScalingInputs { n: 8, t1: 0.5, t2: 0.5, r1: 0.0, r2: 0.0 };
        let g = scaled_geometry(&s, &k).unwrap();
        assert_eq!(g.p1, (6, 10));
        assert_eq!(g.p2, (10, 6));
        assert!((g.log_u1 + 8.0 * k.f_gamma).abs() < 1e-12);
    }

    #[test]
    fn single_pair_term_is_first_bcr_term() {
        let p = ParameterSet::homogeneous(4, 4, 1.0).unwrap();
        let q = QuadratureSpec::default();
        let t = joint_series_term(1, 0, (1, 4), (3, 2), (0.7, 0.7), &p, None, &q).unwrap();
        let c = crate::contour::BcrContours { delta1: 0.08, delta2: 0.4, shift: 1.0 };
        let b = crate::contour::bcr_fredholm(3, 2, 0.7, &p, Some(c), &q, 1).unwrap();
        assert!((t.value - b.terms[1]).abs() < 1e-8, "{} vs {}", t.value, b.terms[1]);
    }

    #[test]
    fn zero_term_is_one() {
        let p = ParameterSet::homogeneous(3, 3, 1.0).unwrap();
        let t = joint_series_term(0, 0, (1, 3), (3, 1), (0.5, 0.5), &p, None, &QuadratureSpec::default())
            .unwrap();
        assert_eq!(t.value, 1.0);
    }
}
