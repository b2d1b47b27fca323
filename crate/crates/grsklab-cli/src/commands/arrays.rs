//! `grsk` and `gpng`: array files in, transformed arrays plus invariants out.

use crate::args::ArrayArgs;
use crate::error::{CliError, CliResult};
use crate::output::Report;
use grsklab::arrays::{
    energy, gpng as gpng_map, gpng_triangular, grsk as grsk_map, type_vectors, ArrayJson, PolygonalArray,
    TriangularArray, TriangularJson,
};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use std::path::Path;

/// A parsed array file.
pub enum ArrayInput {
    Polygonal(PolygonalArray<f64>),
    Triangular(TriangularArray<f64>),
}

fn parse_as<T: DeserializeOwned>(path: &Path, text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Parse { path: path.to_path_buf(), message: e.to_string() })
}

/// Reads an array file; JSON errors carry line and column, shape errors name
/// the violated staircase condition.
pub fn read_array(path: &Path) -> CliResult<ArrayInput> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let probe: Value = parse_as(path, &text)?;
    let shape_err = |e: grsklab::Error| CliError::Parse { path: path.to_path_buf(), message: e.to_string() };
    if probe.get("triangular").is_some() {
        let t: TriangularJson = parse_as(path, &text)?;
        Ok(ArrayInput::Triangular(TriangularArray::try_from(t).map_err(shape_err)?))
    } else {
        let a: ArrayJson = parse_as(path, &text)?;
        Ok(ArrayInput::Polygonal(PolygonalArray::try_from(a).map_err(shape_err)?))
    }
}

fn require_mode(w: &PolygonalArray<f64>, polygonal: bool) -> CliResult<()> {
    let k = w.shape().corners().len();
    if k > 1 && !polygonal {
        return Err(CliError::invalid(format!(
            "the input shape has {k} corners; pass --polygonal to transform non-rectangular arrays"
        )));
    }
    Ok(())
}

fn inverse_sum(w: &PolygonalArray<f64>) -> f64 {
    w.values().map(|x| 1.0 / x).sum()
}

fn polygonal_report(w: &PolygonalArray<f64>, t: &PolygonalArray<f64>, map: &str) -> Value {
    let corners: Vec<Value> =
        t.shape().corners().iter().map(|&(m, n)| json!({ "m": m, "n": n, "value": t.at(m, n) })).collect();
    let tv = type_vectors(t);
    json!({
        "output": ArrayJson::from(t),
        "energy": energy(t),
        "input_inverse_sum": inverse_sum(w),
        "type_vectors": { "row_type": tv.row_type, "col_type": tv.col_type },
        "corners": corners,
        "metadata": {
            "map": map,
            "shape": if w.shape().is_rectangular() { "matrix" } else { "polygonal" },
            "corners": w.shape().corners(),
        },
    })
}

pub fn grsk(a: &ArrayArgs) -> CliResult<Report> {
    let w = match read_array(&a.input)? {
        ArrayInput::Polygonal(w) => w,
        ArrayInput::Triangular(t) => t.into_polygonal(),
    };
    require_mode(&w, a.polygonal)?;
    Ok(Report::json(polygonal_report(&w, &grsk_map(&w), "grsk")))
}

pub fn gpng(a: &ArrayArgs) -> CliResult<Report> {
    match read_array(&a.input)? {
        ArrayInput::Polygonal(w) => {
            require_mode(&w, a.polygonal)?;
            Ok(Report::json(polygonal_report(&w, &gpng_map(&w), "gpng")))
        }
        ArrayInput::Triangular(w) => {
            let n = w.order();
            let h = gpng_triangular(&w);
            let antidiagonal: Vec<Value> = (1..=n)
                .map(|p| json!({ "p": p, "q": n + 1 - p, "value": h.get(p, n + 1 - p) }))
                .collect();
            Ok(Report::json(json!({
                "output": TriangularJson::from(&h),
                "energy": energy(h.as_polygonal()),
                "input_inverse_sum": inverse_sum(w.as_polygonal()),
                "antidiagonal": antidiagonal,
                "metadata": { "map": "gpng_triangular", "shape": "triangular", "order": n },
            })))
        }
    }
}
