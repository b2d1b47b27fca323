//! `laplace` and `fredholm`: contour-integral and determinant evaluations of
//! the log-gamma Laplace transforms, with optional cross-checks.

use crate::args::{extent, params_json, quadrature_json, FredholmArgs, LaplaceArgs, McArgs};
use crate::error::{CliError, CliResult};
use crate::output::Report;
use grsklab::contour::{
    bcr_default_contours, bcr_fredholm, case_a_default_lines, case_b_default_lines, joint_series_term, laplace1,
    laplace1_default_delta, laplace2_case_a, laplace2_case_b, BcrContours, Estimate, QuadratureSpec, SeriesContours,
    MAX_SERIES_PAIRS,
};
use grsklab::sampling::{mc_laplace_streams, ParameterSet};
use serde_json::{json, Value};

/// A contour evaluation with the formula and contours it used.
#[derive(Debug, Clone)]
pub struct LaplaceEval {
    pub estimate: Estimate,
    pub formula: &'static str,
    pub contours: Value,
}

/// Parameters of the transposed polymer: `Z_{m,n}(alpha, alphahat)` has the
/// law of `Z_{n,m}(alphahat, alpha)`.
fn transposed(params: &ParameterSet) -> CliResult<ParameterSet> {
    Ok(ParameterSet::new(params.alphahat.clone(), params.alpha.clone())?)
}

/// Dispatches to the one-point formula or the two-point formula whose
/// geometry matches (`m2 >= n2`: case a, otherwise case b).
pub fn evaluate(
    points: &[(usize, usize)],
    us: &[f64],
    params: &ParameterSet,
    delta: Option<f64>,
    delta2: Option<f64>,
    quad: &QuadratureSpec,
) -> CliResult<LaplaceEval> {
    match (points, us) {
        (&[(m, n)], &[u]) => {
            let (m, n, params, formula) = if m >= n {
                (m, n, params.clone(), "one_point")
            } else {
                (n, m, transposed(params)?, "one_point_transposed")
            };
            let delta = delta.unwrap_or_else(|| laplace1_default_delta(m, n, &params));
            let estimate = laplace1(m, n, u, &params, Some(delta), quad)?;
            Ok(LaplaceEval { estimate, formula, contours: json!({ "delta": delta }) })
        }
        (&[p1, p2], &[u1, u2]) => {
            if p2.0 < p2.1 {
                let def = case_b_default_lines(p1, p2, params)?;
                let d = delta.unwrap_or(def.delta);
                let dm = delta2.unwrap_or(d + def.delta_mu - def.delta);
                let estimate = laplace2_case_b(p1, p2, (u1, u2), params, Some(d), Some(dm), quad)?;
                Ok(LaplaceEval { estimate, formula: "two_point_case_b", contours: json!({ "delta": d, "delta_mu": dm }) })
            } else {
                let def = case_a_default_lines(p1, p2, params)?;
                let d = delta.unwrap_or(def.delta);
                let dm = delta2.unwrap_or(def.delta_mu);
                let estimate = laplace2_case_a(p1, p2, (u1, u2), params, Some(d), Some(dm - d), quad)?;
                Ok(LaplaceEval { estimate, formula: "two_point_case_a", contours: json!({ "delta": d, "delta_mu": dm }) })
            }
        }
        _ => Err(CliError::invalid("need one u per point, for one or two points")),
    }
}

fn estimate_json(e: &Estimate) -> Value {
    json!({ "value": e.value, "error_estimate": e.error, "imag_residual": e.imag })
}

fn mc_check(points: &[(usize, usize)], us: &[f64], params: &ParameterSet, mc: &McArgs, value: f64) -> CliResult<Value> {
    let e = mc_laplace_streams(points, us, params, mc.samples, mc.seed, mc.streams)?;
    Ok(json!({
        "mean": e.mean,
        "stderr": e.stderr,
        "n": e.n_samples,
        "seed": e.seed,
        "streams": mc.streams,
        "z_score": (value - e.mean) / e.stderr,
    }))
}

fn bcr_contours(m: usize, n: usize, params: &ParameterSet, delta1: Option<f64>, delta2: Option<f64>) -> BcrContours {
    let mut c = bcr_default_contours(m, n, params);
    if let Some(d) = delta1 {
        c.delta1 = d;
    }
    if let Some(d) = delta2 {
        c.delta2 = d;
    }
    c
}

fn fredholm_json(
    m: usize,
    n: usize,
    u: f64,
    params: &ParameterSet,
    contours: BcrContours,
    quad: &QuadratureSpec,
    order: usize,
) -> CliResult<Value> {
    let f = bcr_fredholm(m, n, u, params, Some(contours), quad, order)?;
    Ok(json!({
        "value": f.estimate.value,
        "error_estimate": f.estimate.error,
        "imag_residual": f.estimate.imag,
        "order": order,
        "terms": f.terms,
        "contours": { "delta1": f.contours.delta1, "delta2": f.contours.delta2, "shift": f.contours.shift },
    }))
}

#[allow(clippy::too_many_arguments)]
fn series_json(
    p1: (usize, usize),
    p2: (usize, usize),
    u: (f64, f64),
    params: &ParameterSet,
    delta1: Option<f64>,
    quad: &QuadratureSpec,
    order: usize,
) -> CliResult<Value> {
    let gamma = params.require_homogeneous()?;
    let mut contours = SeriesContours::default_for(gamma);
    if let Some(d) = delta1 {
        contours.delta1 = d;
    }
    if order > MAX_SERIES_PAIRS {
        return Err(CliError::invalid(format!("series order {order} exceeds {MAX_SERIES_PAIRS} pairs per point")));
    }
    let mut terms = Vec::new();
    let (mut sum, mut err) = (0.0, 0.0);
    for k2 in 0..=order {
        for k1 in 0..=order {
            let e = joint_series_term(k2, k1, p1, p2, u, params, Some(contours), quad)?;
            sum += e.value;
            err += e.error;
            terms.push(json!({ "k2": k2, "k1": k1, "value": e.value, "error_estimate": e.error }));
        }
    }
    // Sufficient condition for swapping the contour and series integrals:
    // 2 k <= n1 - m1 for the pair counts k of every included term.
    let interchange_condition_met = 2 * order <= p1.1.saturating_sub(p1.0);
    Ok(json!({
        "order": order,
        "interchange_condition_met": interchange_condition_met,
        "partial_sum": sum,
        "error_estimate": err,
        "terms": terms,
        "contours": { "delta": contours.delta, "delta1": contours.delta1 },
    }))
}

pub fn run(a: &LaplaceArgs) -> CliResult<Report> {
    let (points, us) = a.points.validated()?;
    let (rows, cols) = extent(&points);
    let params = a.params.resolve(rows, cols)?;
    let quad = a.quad.spec()?;
    let eval = evaluate(&points, &us, &params, a.delta, a.delta2, &quad)?;
    let mut out = estimate_json(&eval.estimate);
    out["formula"] = json!(eval.formula);
    out["contours"] = eval.contours;
    if let Some(order) = a.order {
        match (points.as_slice(), us.as_slice()) {
            (&[(m, n)], &[u]) => {
                let (m, n, p) = if m >= n { (m, n, params.clone()) } else { (n, m, transposed(&params)?) };
                let c = bcr_contours(m, n, &p, a.delta1, a.delta2);
                out["fredholm"] = fredholm_json(m, n, u, &p, c, &quad, order)?;
            }
            (&[p1, p2], &[u1, u2]) => {
                out["series"] = series_json(p1, p2, (u1, u2), &params, a.delta1, &quad, order)?;
            }
            _ => unreachable!("validated above"),
        }
    }
    if a.mc_check {
        out["mc_check"] = mc_check(&points, &us, &params, &a.mc, eval.estimate.value)?;
    }
    out["metadata"] = json!({
        "points": points,
        "u": us,
        "parameters": params_json(&params),
        "quadrature": quadrature_json(&quad),
    });
    Ok(Report::json(out))
}

pub fn fredholm(a: &FredholmArgs) -> CliResult<Report> {
    let (m, n) = match a.point.as_slice() {
        &[m, n] if m > 0 && n > 0 => (m, n),
        _ => return Err(CliError::invalid("--point takes m,n with positive entries")),
    };
    let params = a.params.resolve(m, n)?;
    let quad = a.quad.spec()?;
    let order = a.order.unwrap_or(n);
    let contours = bcr_contours(m, n, &params, a.delta1, a.delta2);
    let mut out = fredholm_json(m, n, a.u, &params, contours, &quad, order)?;
    out["rank_bound"] = json!(n);
    out["metadata"] = json!({
        "point": [m, n],
        "u": a.u,
        "parameters": params_json(&params),
        "quadrature": quadrature_json(&quad),
    });
    Ok(Report::json(out))
}
