//! Flag definitions. Quadrature and sampling defaults can be overridden by
//! `GRSKLAB_*` environment variables; explicit flags win over both.

use crate::error::{CliError, CliResult};
use clap::{Args, Parser, Subcommand, ValueEnum};
use grsklab::contour::{QuadratureSpec, DEFAULT_CIRCLE_NODES, DEFAULT_HALF_LENGTH, DEFAULT_NODES_PER_UNIT};
use grsklab::sampling::{ParameterSet, DEFAULT_STREAMS};
use serde_json::{json, Value};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "grsklab", version, about = "Geometric RSK / PNG workbench and log-gamma polymer Laplace transforms")]
pub struct Cli {
    /// Cap on worker threads (default: all available cores).
    #[arg(long, global = true, env = "GRSKLAB_THREADS")]
    pub threads: Option<usize>,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Output format (default: csv for `sweep`, json otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn format(&self) -> Format {
        match (self.format, &self.command) {
            (Some(f), _) => f,
            (None, Command::Sweep(_)) => Format::Csv,
            (None, _) => Format::Json,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply geometric RSK to an array file.
    Grsk(ArrayArgs),
    /// Apply geometric PNG to an array file (matrix, polygonal or triangular).
    Gpng(ArrayArgs),
    /// Monte Carlo Laplace transform of log-gamma partition functions, or one sampled weight array.
    Sample(SampleArgs),
    /// Contour-integral Laplace transform at one or two points.
    Laplace(LaplaceArgs),
    /// Fredholm-determinant form of the one-point Laplace transform.
    Fredholm(FredholmArgs),
    /// Two-time Airy-process distribution (or its scaled-polymer counterpart with --gamma).
    Airy2(Airy2Args),
    /// Run a verification suite and report every property with its observed error.
    Verify(VerifyArgs),
    /// Evaluate a grid of inputs from a JSON configuration and write one CSV row per point.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct ArrayArgs {
    /// Array JSON file: {"corners": [[m, n], ...], "rows": [...]} or {"triangular": n, "rows": [...]}.
    pub input: PathBuf,
    /// Accept polygonal (multi-corner) shapes; without it the input must be a rectangle.
    #[arg(long)]
    pub polygonal: bool,
}

/// Log-gamma parameters: either homogeneous `--gamma` or explicit lists.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Homogeneous polymer: alpha_i = 0, alphahat_j = gamma.
    #[arg(long, env = "GRSKLAB_GAMMA", conflicts_with_all = ["alpha", "alphahat"])]
    pub gamma: Option<f64>,
    /// Row parameters alpha_1, alpha_2, ... (comma separated).
    #[arg(long, value_delimiter = ',', requires = "alphahat")]
    pub alpha: Vec<f64>,
    /// Column parameters alphahat_1, alphahat_2, ... (comma separated).
    #[arg(long, value_delimiter = ',', requires = "alpha")]
    pub alphahat: Vec<f64>,
}

impl ParamArgs {
    /// Parameters covering rows `1..=rows` and columns `1..=cols`.
    pub fn resolve(&self, rows: usize, cols: usize) -> CliResult<ParameterSet> {
        let params = match self.gamma {
            Some(g) => ParameterSet::homogeneous(rows, cols, g)?,
            None if self.alpha.is_empty() => {
                return Err(CliError::invalid("give --gamma or both --alpha and --alphahat"))
            }
            None => ParameterSet::new(self.alpha.clone(), self.alphahat.clone())?,
        };
        params.require(rows, cols)?;
        Ok(params)
    }
}

pub fn params_json(p: &ParameterSet) -> Value {
    json!({ "alpha": p.alpha, "alphahat": p.alphahat, "gamma": p.gamma })
}

#[derive(Debug, Clone, Args)]
pub struct QuadArgs {
    /// Half-length of truncated vertical contours.
    #[arg(long = "L", env = "GRSKLAB_L", default_value_t = DEFAULT_HALF_LENGTH)]
    pub half_length: f64,
    /// Gauss–Legendre nodes per vertical line (default: 2 L x 10).
    #[arg(long, env = "GRSKLAB_NODES")]
    pub nodes: Option<usize>,
    /// Trapezoid nodes per circle.
    #[arg(long, env = "GRSKLAB_CIRCLE_NODES", default_value_t = DEFAULT_CIRCLE_NODES)]
    pub circle_nodes: usize,
    /// Refinement factor of the second evaluation used for the error estimate.
    #[arg(long, env = "GRSKLAB_REFINEMENT", default_value_t = 2)]
    pub refinement: usize,
}

impl QuadArgs {
    pub fn spec(&self) -> CliResult<QuadratureSpec> {
        let nodes_per_unit = match self.nodes {
            Some(0) => return Err(CliError::invalid("--nodes must be positive")),
            Some(n) => n as f64 / (2.0 * self.half_length),
            None => DEFAULT_NODES_PER_UNIT,
        };
        let spec = QuadratureSpec {
            half_length: self.half_length,
            nodes_per_unit,
            circle_nodes: self.circle_nodes,
            refinement: self.refinement,
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn quadrature_json(q: &QuadratureSpec) -> Value {
    json!({
        "half_length": q.half_length,
        "line_nodes": q.line_nodes(),
        "nodes_per_unit": q.nodes_per_unit,
        "circle_nodes": q.circle_nodes,
        "refinement": q.refinement,
    })
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    /// Monte Carlo sample count.
    #[arg(long, env = "GRSKLAB_SAMPLES", default_value_t = 1_000_000)]
    pub samples: u64,
    /// RNG seed; each stream s uses (seed, stream s).
    #[arg(long, env = "GRSKLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Number of independent RNG streams (fixes the result independently of --threads).
    #[arg(long, env = "GRSKLAB_STREAMS", default_value_t = DEFAULT_STREAMS)]
    pub streams: usize,
}

/// One or two lattice points `m1,n1[,m2,n2]`.
#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    /// Points m1,n1[,m2,n2].
    #[arg(long, value_delimiter = ',', required = true)]
    pub points: Vec<usize>,
    /// Laplace arguments u1[,u2], one per point.
    #[arg(long, value_delimiter = ',')]
    pub u: Vec<f64>,
}

impl PointArgs {
    pub fn points(&self) -> CliResult<Vec<(usize, usize)>> {
        parse_points(&self.points)
    }

    pub fn validated(&self) -> CliResult<(Vec<(usize, usize)>, Vec<f64>)> {
        let points = self.points()?;
        if self.u.len() != points.len() {
            return Err(CliError::invalid(format!("{} point(s) but {} value(s) of --u", points.len(), self.u.len())));
        }
        if let Some(u) = self.u.iter().find(|u| !(**u >= 0.0 && u.is_finite())) {
            return Err(CliError::invalid(format!("--u {u} must be finite and non-negative")));
        }
        Ok((points, self.u.clone()))
    }
}

pub fn parse_points(flat: &[usize]) -> CliResult<Vec<(usize, usize)>> {
    if !(flat.len() == 2 || flat.len() == 4) {
        return Err(CliError::invalid(format!(
            "--points takes m1,n1 or m1,n1,m2,n2 ({} numbers given)",
            flat.len()
        )));
    }
    let points: Vec<_> = flat.chunks(2).map(|c| (c[0], c[1])).collect();
    if points.iter().any(|&(m, n)| m == 0 || n == 0) {
        return Err(CliError::invalid("point coordinates are 1-based and must be positive"));
    }
    Ok(points)
}

/// Rows and columns spanned by the points.
pub fn extent(points: &[(usize, usize)]) -> (usize, usize) {
    let rows = points.iter().map(|p| p.0).max().unwrap_or(0);
    let cols = points.iter().map(|p| p.1).max().unwrap_or(0);
    (rows, cols)
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub points: PointArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub mc: McArgs,
    /// Emit one sampled weight array over the staircase with the given points as corners instead.
    #[arg(long)]
    pub draw: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct LaplaceArgs {
    #[command(flatten)]
    pub points: PointArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
    /// Line Re z = delta (one point) or Re lambda = delta (two points).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Circle radius of the Fredholm (one point) or series (two points) cross-check.
    #[arg(long)]
    pub delta1: Option<f64>,
    /// Second line: Re mu (two points) or Re w of the Fredholm cross-check (one point).
    #[arg(long)]
    pub delta2: Option<f64>,
    /// Also evaluate the Fredholm determinant (one point) or the double series truncated at this many pairs per point (two points).
    #[arg(long)]
    pub order: Option<usize>,
    /// Also estimate the transform by Monte Carlo.
    #[arg(long)]
    pub mc_check: bool,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Args)]
pub struct FredholmArgs {
    /// The point m,n.
    #[arg(long, value_delimiter = ',', required = true)]
    pub point: Vec<usize>,
    /// Laplace argument.
    #[arg(long)]
    pub u: f64,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
    /// Circle radius of the v contour.
    #[arg(long)]
    pub delta1: Option<f64>,
    /// Line Re w = delta2.
    #[arg(long)]
    pub delta2: Option<f64>,
    /// Fredholm expansion order (default: n, where the series terminates).
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct Airy2Args {
    /// First time (or scaled time t1 > 0 with --gamma).
    #[arg(long)]
    pub t1: f64,
    /// Second time (or scaled time t2 > 0 with --gamma).
    #[arg(long)]
    pub t2: f64,
    /// Threshold at the first time (ignored with --gamma).
    #[arg(long, required_unless_present = "gamma")]
    pub x1: Option<f64>,
    /// Threshold at the second time (ignored with --gamma).
    #[arg(long, required_unless_present = "gamma")]
    pub x2: Option<f64>,
    /// Fredholm truncation order per time.
    #[arg(long, default_value_t = grsklab::airy::MAX_ORDER)]
    pub order: usize,
    /// Polymer parameter: evaluate the limiting two-point law of the scaled log-gamma polymer.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Fluctuation level at the first scaled point.
    #[arg(long, default_value_t = 0.0, requires = "gamma")]
    pub r1: f64,
    /// Fluctuation level at the second scaled point.
    #[arg(long, default_value_t = 0.0, requires = "gamma")]
    pub r2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Combinatorial,
    Analytic,
    Asymptotic,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Largest array side exercised by the combinatorial suite.
    #[arg(long, default_value_t = 4)]
    pub max_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override every numeric tolerance of the suite.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Monte Carlo samples of the analytic suite.
    #[arg(long, env = "GRSKLAB_SAMPLES", default_value_t = 200_000)]
    pub samples: u64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep configuration JSON.
    pub config: PathBuf,
}
