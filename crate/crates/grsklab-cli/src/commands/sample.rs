//! `sample`: Monte Carlo Laplace transforms and single weight draws.

use crate::args::{extent, params_json, SampleArgs};
use crate::error::CliResult;
use crate::output::Report;
use grsklab::arrays::{ArrayJson, IndexSet};
use grsklab::sampling::{mc_laplace_streams, sample_array};
use serde_json::json;

pub fn run(a: &SampleArgs) -> CliResult<Report> {
    let points = a.points.points()?;
    let (rows, cols) = extent(&points);
    let params = a.params.resolve(rows, cols)?;
    if a.draw {
        let shape = IndexSet::new(points.clone())?;
        let w = sample_array(&shape, &params, a.mc.seed)?;
        return Ok(Report::json(json!({
            "array": ArrayJson::from(&w),
            "metadata": { "parameters": params_json(&params), "seed": a.mc.seed },
        })));
    }
    let (points, us) = a.points.validated()?;
    let e = mc_laplace_streams(&points, &us, &params, a.mc.samples, a.mc.seed, a.mc.streams)?;
    Ok(Report::json(json!({
        "mean": e.mean,
        "stderr": e.stderr,
        "n": e.n_samples,
        "seed": e.seed,
        "metadata": {
            "points": points,
            "u": us,
            "parameters": params_json(&params),
            "streams": a.mc.streams,
        },
    })))
}
