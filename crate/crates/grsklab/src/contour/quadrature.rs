use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Newton iteration on
/// `P_n`, cached per order).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&n) {
        return (r.0.clone(), r.1.clone());
    }
    let rule = Arc::new(compute_gauss_legendre(n));
    cache.lock().unwrap().insert(n, rule.clone());
    (rule.0.clone(), rule.1.clone())
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = nf * (z * p - p0) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss–Legendre nodes and weights mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|w| half * w).collect(),
    )
}

/// Panel edges on `[0, len]`: widths start at `h0` and double up to `hmax`.
/// Grading towards the origin resolves poles sitting close to a contour that
/// crosses the real axis there.
fn graded_edges(len: f64, h0: f64, hmax: f64) -> Vec<f64> {
    let mut e = vec![0.0];
    let mut h = h0;
    while *e.last().unwrap() < len - 1e-12 {
        let next = (e.last().unwrap() + h).min(len);
        e.push(next);
        h = (2.0 * h).min(hmax);
    }
    e
}

/// Composite Gauss–Legendre rule on `[-len, len]`, graded towards `0`, with
/// roughly `target` nodes in total (at least 4 per panel).
pub fn graded_symmetric_rule(len: f64, target: usize) -> (Vec<f64>, Vec<f64>) {
    let half = graded_edges(len, 0.05, 1.0);
    let panels = 2 * (half.len() - 1);
    let q = target.div_ceil(panels).max(4);
    let mut edges: Vec<f64> = half.iter().rev().map(|e| -e).collect();
    edges.extend(half.iter().skip(1));
    let mut nodes = Vec::with_capacity(panels * q);
    let mut weights = Vec::with_capacity(panels * q);
    for p in edges.windows(2) {
        let (x, w) = gauss_legendre_on(q, p[0], p[1]);
        nodes.extend(x);
        weights.extend(w);
    }
    (nodes, weights)
}

/// Default truncation half-length of vertical lines.
pub const DEFAULT_HALF_LENGTH: f64 = 12.0;
/// Default node density on vertical lines (240 nodes on `[-12, 12]`).
pub const DEFAULT_NODES_PER_UNIT: f64 = 10.0;
/// Default trapezoidal node count on circles.
pub const DEFAULT_CIRCLE_NODES: usize = 48;

/// Discretisation parameters shared by all contour formulas.
///
/// A refinement step multiplies the node density and circle node count by
/// `refinement` and stretches lines by a factor 1.5, so the difference between
/// the two evaluations sees both discretisation and truncation error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct QuadratureSpec {
    pub half_length: f64,
    pub nodes_per_unit: f64,
    pub circle_nodes: usize,
    pub refinement: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            half_length: DEFAULT_HALF_LENGTH,
            nodes_per_unit: DEFAULT_NODES_PER_UNIT,
            circle_nodes: DEFAULT_CIRCLE_NODES,
            refinement: 2,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_length > 0.0 && self.half_length.is_finite())
            || !(self.nodes_per_unit > 0.0 && self.nodes_per_unit.is_finite())
            || self.circle_nodes < 3
            || self.refinement < 2
        {
            return Err(Error::Precondition(format!(
                "quadrature spec needs positive length and density, >= 3 circle nodes and refinement >= 2: {self:?}"
            )));
        }
        Ok(())
    }

    /// Total node target on a line.
    pub fn line_nodes(&self) -> usize {
        (2.0 * self.half_length * self.nodes_per_unit).round().max(1.0) as usize
    }

    /// The vertical line `Re z = delta`.
    pub fn line(&self, delta: f64) -> ContourSpec {
        ContourSpec::line(delta, self.half_length, self.line_nodes())
    }

    /// The circle of radius `radius` about the origin.
    pub fn circle(&self, radius: f64) -> ContourSpec {
        ContourSpec::circle(radius, self.circle_nodes)
    }

    pub fn refined(&self) -> Self {
        let r = self.refinement as f64;
        QuadratureSpec {
            half_length: 1.5 * self.half_length,
            nodes_per_unit: r * self.nodes_per_unit,
            circle_nodes: self.refinement * self.circle_nodes,
            refinement: self.refinement,
        }
    }

    /// Runs `eval` at this spec and its refinement.
    pub fn estimate(&self, eval: impl Fn(&QuadratureSpec) -> Result<C64>) -> Result<Estimate> {
        self.validate()?;
        let coarse = eval(self)?;
        let fine = eval(&self.refined())?;
        Ok(Estimate::from_pair(coarse, fine))
    }
}

/// A truncated, discretised integration contour.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContourSpec {
    /// `delta + i y`, `y` from `-half_length` to `half_length` (traced upwards),
    /// composite Gauss–Legendre graded towards the real axis.
    VerticalLine { delta: f64, half_length: f64, nodes: usize },
    /// Counter-clockwise circle, trapezoidal rule (spectrally accurate for
    /// periodic integrands).
    Circle { center: C64, radius: f64, nodes: usize },
    /// Two rays `vertex + r e^{-+i angle}`, `0 <= r <= ray_length`, traced from
    /// the lower ray's far end through the vertex to the upper ray's far end.
    Wedge { vertex: C64, angle: f64, ray_length: f64, nodes: usize },
    /// Straight segments through `points`, Gauss–Legendre per segment.
    Polyline { points: Vec<C64>, nodes_per_segment: usize },
}

/// Contour nodes `z_k` together with complex weights `dz_k`.
#[derive(Clone, Debug, Default)]
pub struct Discretized {
    pub nodes: Vec<C64>,
    pub weights: Vec<C64>,
}

impl Discretized {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
    /// Same nodes with every weight multiplied by `c`.
    pub fn scaled(mut self, c: C64) -> Self {
        self.weights.iter_mut().for_each(|w| *w *= c);
        self
    }
}

impl ContourSpec {
    pub fn line(delta: f64, half_length: f64, nodes: usize) -> Self {
        ContourSpec::VerticalLine { delta, half_length, nodes }
    }

    pub fn circle(radius: f64, nodes: usize) -> Self {
        ContourSpec::Circle { center: C64::new(0.0, 0.0), radius, nodes }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Precondition(format!("contour: {m}")));
        match self {
            ContourSpec::VerticalLine { half_length, nodes, delta } => {
                if !(*half_length > 0.0) || *nodes == 0 || !delta.is_finite() {
                    return bad("vertical line needs finite delta, positive length and nodes");
                }
            }
            ContourSpec::Circle { radius, nodes, .. } => {
                if !(*radius > 0.0) || *nodes < 3 {
                    return bad("circle needs a positive radius and at least 3 nodes");
                }
            }
            ContourSpec::Wedge { ray_length, nodes, angle, .. } => {
                if !(*ray_length > 0.0) || *nodes == 0 || !(*angle > 0.0 && *angle < PI) {
                    return bad("wedge needs positive ray length, nodes and an angle in (0, pi)");
                }
            }
            ContourSpec::Polyline { points, nodes_per_segment } => {
                if points.len() < 2 || *nodes_per_segment == 0 {
                    return bad("polyline needs two points and positive node count");
                }
            }
        }
        Ok(())
    }

    /// Nodes and weights `dz`.
    pub fn discretize(&self) -> Discretized {
        match *self {
            ContourSpec::VerticalLine { delta, half_length, nodes } => {
                let (y, w) = graded_symmetric_rule(half_length, nodes);
                Discretized {
                    nodes: y.iter().map(|&y| C64::new(delta, y)).collect(),
                    weights: w.iter().map(|&w| C64::new(0.0, w)).collect(),
                }
            }
            ContourSpec::Circle { center, radius, nodes } => {
                let h = 2.0 * PI / nodes as f64;
                let mut d = Discretized::default();
                for k in 0..nodes {
                    let e = C64::from_polar(radius, h * k as f64);
                    d.nodes.push(center + e);
                    d.weights.push(C64::new(0.0, h) * e);
                }
                d
            }
            ContourSpec::Wedge { vertex, angle, ray_length, nodes } => {
                let (r, w) = gauss_legendre_on(nodes, 0.0, ray_length);
                let up = C64::from_polar(1.0, angle);
                let down = C64::from_polar(1.0, -angle);
                let mut d = Discretized::default();
                for (&r, &w) in r.iter().zip(&w).rev() {
                    d.nodes.push(vertex + r * down);
                    d.weights.push(-w * down);
                }
                for (&r, &w) in r.iter().zip(&w) {
                    d.nodes.push(vertex + r * up);
                    d.weights.push(w * up);
                }
                d
            }
            ContourSpec::Polyline { ref points, nodes_per_segment } => {
                let (x, w) = gauss_legendre(nodes_per_segment);
                let mut d = Discretized::default();
                for seg in points.windows(2) {
                    let (a, b) = (seg[0], seg[1]);
                    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
                    for (&t, &wt) in x.iter().zip(&w) {
                        d.nodes.push(mid + half * t);
                        d.weights.push(half * wt);
                    }
                }
                d
            }
        }
    }

    /// The same contour with twice the nodes (and, for unbounded contours,
    /// 1.5 times the truncation length).
    pub fn refined(&self) -> Self {
        match self.clone() {
            ContourSpec::VerticalLine { delta, half_length, nodes } => {
                ContourSpec::VerticalLine { delta, half_length: 1.5 * half_length, nodes: 3 * nodes }
            }
            ContourSpec::Circle { center, radius, nodes } => {
                ContourSpec::Circle { center, radius, nodes: 2 * nodes }
            }
            ContourSpec::Wedge { vertex, angle, ray_length, nodes } => {
                ContourSpec::Wedge { vertex, angle, ray_length: 1.5 * ray_length, nodes: 2 * nodes }
            }
            ContourSpec::Polyline { points, nodes_per_segment } => {
                ContourSpec::Polyline { points, nodes_per_segment: 2 * nodes_per_segment }
            }
        }
    }
}

/// `sum_k f(z_k) dz_k`; fails if `f` is non-finite at a node (a pole on the
/// contour).
pub fn integrate(f: impl Fn(C64) -> C64, c: &ContourSpec) -> Result<C64> {
    c.validate()?;
    let d = c.discretize();
    let mut acc = C64::new(0.0, 0.0);
    for (&z, &w) in d.nodes.iter().zip(&d.weights) {
        let v = f(z);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::PoleCollision(format!("integrand not finite at z = {z}")));
        }
        acc += v * w;
    }
    Ok(acc)
}

/// A real value together with a refinement-based error estimate and the
/// imaginary part left over by the quadrature (zero in exact arithmetic).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub imag: f64,
}

impl Estimate {
    /// Real part of the refined value, `|fine - coarse|` as error.
    pub fn from_pair(coarse: C64, fine: C64) -> Self {
        Estimate { value: fine.re, error: (fine - coarse).norm(), imag: fine.im }
    }

    /// Exact value (no quadrature involved).
    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0, imag: 0.0 }
    }
}

/// Complex counterpart of [`Estimate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexEstimate {
    pub value: C64,
    pub error: f64,
}

/// [`integrate`] on `c` and on `c.refined()`; returns the refined value and
/// the difference as error estimate.
pub fn integrate_with_refinement(f: impl Fn(C64) -> C64, c: &ContourSpec) -> Result<ComplexEstimate> {
    let coarse = integrate(&f, c)?;
    let fine = integrate(&f, &c.refined())?;
    Ok(ComplexEstimate { value: fine, error: (fine - coarse).norm() })
}
