//! `sweep`: evaluate a grid of Laplace arguments (or Airy fluctuation
//! levels) from a JSON configuration, one CSV row per grid point.
//!
//! A failing grid point does not stop the sweep; its row carries the error
//! message in the `error` column and empty result columns.

use crate::commands::laplace::evaluate;
use crate::error::{CliError, CliResult};
use crate::output::{num, table_to_json, Report, Table};
use grsklab::airy::conjecture_rhs;
use grsklab::contour::QuadratureSpec;
use grsklab::sampling::{mc_laplace_streams, ParameterSet, DEFAULT_STREAMS};
use serde::Deserialize;
use serde_json::json;
use std::path::Path;
use std::time::Instant;

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    /// Contour formulas (one or two points).
    Laplace,
    /// Monte Carlo estimates with a fixed seed (common random numbers across the grid).
    MonteCarlo,
    /// Limiting two-point law of the scaled polymer over a grid of (r1, r2).
    Airy,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    #[serde(default)]
    pub u1: Vec<f64>,
    #[serde(default)]
    pub u2: Vec<f64>,
    #[serde(default)]
    pub r1: Vec<f64>,
    #[serde(default)]
    pub r2: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub kind: SweepKind,
    #[serde(default)]
    pub points: Vec<[usize; 2]>,
    pub gamma: Option<f64>,
    pub alpha: Option<Vec<f64>>,
    pub alphahat: Option<Vec<f64>>,
    #[serde(default)]
    pub grid: Grid,
    pub quadrature: Option<QuadratureSpec>,
    pub delta: Option<f64>,
    pub delta2: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub streams: Option<usize>,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub order: Option<usize>,
}

impl SweepConfig {
    fn params(&self) -> CliResult<ParameterSet> {
        let rows = self.points.iter().map(|p| p[0]).max().unwrap_or(0);
        let cols = self.points.iter().map(|p| p[1]).max().unwrap_or(0);
        let p = match (self.gamma, &self.alpha, &self.alphahat) {
            (Some(g), None, None) => ParameterSet::homogeneous(rows, cols, g)?,
            (None, Some(a), Some(b)) => ParameterSet::new(a.clone(), b.clone())?,
            _ => return Err(CliError::invalid("give either \"gamma\" or both \"alpha\" and \"alphahat\"")),
        };
        p.require(rows, cols)?;
        Ok(p)
    }

    fn points(&self) -> CliResult<Vec<(usize, usize)>> {
        if !(1..=2).contains(&self.points.len()) {
            return Err(CliError::invalid("\"points\" needs one or two [m, n] pairs"));
        }
        Ok(self.points.iter().map(|p| (p[0], p[1])).collect())
    }

    /// Grid points as argument tuples: `u1` alone for one point, the
    /// Cartesian product `u1 x u2` (or `r1 x r2`) otherwise.
    fn grid(&self) -> Vec<Vec<f64>> {
        let (a, b) = match self.kind {
            SweepKind::Airy => (&self.grid.r1, Some(&self.grid.r2)),
            _ if self.points.len() == 1 => (&self.grid.u1, None),
            _ => (&self.grid.u1, Some(&self.grid.u2)),
        };
        match b {
            None => a.iter().map(|&x| vec![x]).collect(),
            Some(b) => a.iter().flat_map(|&x| b.iter().map(move |&y| vec![x, y])).collect(),
        }
    }
}

pub fn read_config(path: &Path) -> CliResult<SweepConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse { path: path.to_path_buf(), message: e.to_string() })
}

/// Output columns of one row, formatted for CSV.
fn evaluate_row(cfg: &SweepConfig, args: &[f64], ctx: &Context) -> CliResult<Vec<String>> {
    match cfg.kind {
        SweepKind::Laplace => {
            let e = evaluate(&ctx.points, args, &ctx.params, cfg.delta, cfg.delta2, &ctx.quad)?;
            Ok(vec![num(e.estimate.value), num(e.estimate.error)])
        }
        SweepKind::MonteCarlo => {
            let e = mc_laplace_streams(&ctx.points, args, &ctx.params, ctx.samples, ctx.seed, ctx.streams)?;
            Ok(vec![num(e.mean), num(e.stderr), e.n_samples.to_string(), e.seed.to_string()])
        }
        SweepKind::Airy => {
            let (t1, t2) = (cfg.t1.unwrap_or(0.5), cfg.t2.unwrap_or(0.5));
            let gamma = cfg.gamma.ok_or_else(|| CliError::invalid("airy sweeps need \"gamma\""))?;
            let e = conjecture_rhs(t1, t2, args[0], args[1], gamma, ctx.order)?;
            Ok(vec![num(e.value), num(e.error)])
        }
    }
}

/// Validated, grid-independent inputs.
struct Context {
    points: Vec<(usize, usize)>,
    params: ParameterSet,
    quad: QuadratureSpec,
    samples: u64,
    seed: u64,
    streams: usize,
    order: usize,
}

pub fn run(a: &crate::args::SweepArgs) -> CliResult<Report> {
    let cfg = read_config(&a.config)?;
    let quad = cfg.quadrature.unwrap_or_default();
    quad.validate()?;
    let (points, params) = match cfg.kind {
        SweepKind::Airy => (Vec::new(), ParameterSet::homogeneous(1, 1, cfg.gamma.unwrap_or(1.0))?),
        _ => (cfg.points()?, cfg.params()?),
    };
    let ctx = Context {
        points,
        params,
        quad,
        samples: cfg.samples.unwrap_or(100_000),
        seed: cfg.seed.unwrap_or(0),
        streams: cfg.streams.unwrap_or(DEFAULT_STREAMS),
        order: cfg.order.unwrap_or(grsklab::airy::MAX_ORDER),
    };
    let mut header: Vec<String> = match (cfg.kind, ctx.points.len()) {
        (SweepKind::Airy, _) => vec!["r1".into(), "r2".into()],
        (_, 1) => vec!["u1".into()],
        _ => vec!["u1".into(), "u2".into()],
    };
    let results: Vec<&str> = match cfg.kind {
        SweepKind::MonteCarlo => vec!["mean", "stderr", "n", "seed"],
        _ => vec!["value", "error_estimate"],
    };
    header.extend(results.iter().map(|s| s.to_string()));
    header.extend(["wall_time_s".to_string(), "error".to_string()]);

    let mut rows = Vec::new();
    for args in cfg.grid() {
        let start = Instant::now();
        let mut row: Vec<String> = args.iter().map(|&x| num(x)).collect();
        match evaluate_row(&cfg, &args, &ctx) {
            Ok(cols) => {
                row.extend(cols);
                row.push(format!("{:.6}", start.elapsed().as_secs_f64()));
                row.push(String::new());
            }
            Err(e) => {
                row.extend(results.iter().map(|_| String::new()));
                row.push(format!("{:.6}", start.elapsed().as_secs_f64()));
                row.push(e.to_string());
            }
        }
        rows.push(row);
    }
    let table = Table { header, rows };
    let json = json!({
        "rows": table_to_json(&table),
        "metadata": {
            "config": a.config,
            "quadrature": crate::args::quadrature_json(&ctx.quad),
            "samples": ctx.samples,
            "seed": ctx.seed,
            "streams": ctx.streams,
        },
    });
    Ok(Report { json, table: Some(table), success: true })
}
