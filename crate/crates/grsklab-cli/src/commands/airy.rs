//! `airy2`: two-time Airy-process distribution functions.

use crate::args::Airy2Args;
use crate::error::CliResult;
use crate::output::Report;
use grsklab::airy::{airy_arguments, airy_two_point, AiryEstimate, AiryQuadrature};
use serde_json::{json, Value};

/// JSON view of a truncated block Fredholm series.
pub fn estimate_json(e: &AiryEstimate) -> Value {
    json!({
        "value": e.value,
        "error_estimate": e.error,
        "full_determinant": e.full,
        "partial_sums": e.partial_sums,
        "terms": e.terms,
        "monotone": e.monotone,
    })
}

pub fn run(a: &Airy2Args) -> CliResult<Report> {
    let (times, thresholds, scaled) = match a.gamma {
        Some(gamma) => {
            let args = airy_arguments(a.t1, a.t2, a.r1, a.r2, gamma)?;
            let scaled = json!({ "gamma": gamma, "t1": a.t1, "t2": a.t2, "r1": a.r1, "r2": a.r2 });
            (args.times, args.thresholds, Some(scaled))
        }
        None => {
            // clap guarantees both thresholds without --gamma.
            let (x1, x2) = (a.x1.unwrap_or_default(), a.x2.unwrap_or_default());
            ([a.t1, a.t2], [x1, x2], None)
        }
    };
    let e = airy_two_point(times[0], times[1], thresholds[0], thresholds[1], a.order)?;
    let mut out = estimate_json(&e);
    out["times"] = json!(times);
    out["thresholds"] = json!(thresholds);
    out["metadata"] = json!({
        "order": a.order,
        "scaled_polymer": scaled,
        "quadrature": AiryQuadrature::default(),
    });
    Ok(Report::json(out))
}
