//! Sampling the log-gamma measure and Monte Carlo Laplace transforms.
//!
//! Every weight `w_ij` is inverse-gamma: `1/w_ij ~ Gamma(alpha_i + alphahat_j, 1)`.
//! The Monte Carlo estimator of `E[exp(-sum_l u_l Z_{m_l, n_l})]` draws one
//! array on the staircase spanned by the points per sample and runs the
//! partition-function recursion on it.

use crate::arrays::{IndexSet, PolygonalArray};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default number of independent RNG streams used by [`mc_laplace`].
pub const DEFAULT_STREAMS: usize = 16;
/// Smallest admissible Monte Carlo sample count.
pub const MIN_SAMPLES: u64 = 1000;

/// Polymer parameters `(alpha_i)` (rows) and `(alphahat_j)` (columns).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    pub alpha: Vec<f64>,
    pub alphahat: Vec<f64>,
    /// Set when the parameters are the `(0, gamma)` specialisation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl ParameterSet {
    /// General parameters; requires finite entries with `alpha_i + alphahat_j > 0`.
    pub fn new(alpha: Vec<f64>, alphahat: Vec<f64>) -> Result<Self> {
        if alpha.iter().chain(&alphahat).any(|a| !a.is_finite()) {
            return Err(Error::Parameters("parameters must be finite".into()));
        }
        for (i, a) in alpha.iter().enumerate() {
            for (j, b) in alphahat.iter().enumerate() {
                if !(a + b > 0.0) {
                    return Err(Error::Parameters(format!(
                        "alpha_{} + alphahat_{} = {} must be positive",
                        i + 1,
                        j + 1,
                        a + b
                    )));
                }
            }
        }
        let gamma = homogeneous_gamma(&alpha, &alphahat);
        Ok(ParameterSet { alpha, alphahat, gamma })
    }

    /// The `(0, gamma)` specialisation: `alpha_i = 0`, `alphahat_j = gamma`.
    pub fn homogeneous(rows: usize, cols: usize, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Parameters(format!("gamma = {gamma} must be positive")));
        }
        Ok(ParameterSet { alpha: vec![0.0; rows], alphahat: vec![gamma; cols], gamma: Some(gamma) })
    }

    /// Shape parameter `alpha_i + alphahat_j` of cell `(i, j)` (1-based).
    pub fn rate(&self, i: usize, j: usize) -> f64 {
        self.alpha[i - 1] + self.alphahat[j - 1]
    }

    /// Checks that the parameters cover `rows x cols`.
    pub fn require(&self, rows: usize, cols: usize) -> Result<()> {
        if self.alpha.len() < rows || self.alphahat.len() < cols {
            return Err(Error::Parameters(format!(
                "need {rows} alpha and {cols} alphahat values, have {} and {}",
                self.alpha.len(),
                self.alphahat.len()
            )));
        }
        Ok(())
    }

    /// `gamma` of the `(0, gamma)` specialisation, or an error.
    pub fn require_homogeneous(&self) -> Result<f64> {
        self.gamma.ok_or_else(|| {
            Error::Precondition("operation needs the (0, gamma) specialisation".into())
        })
    }

    /// `min_{i <= rows, j <= cols} (alpha_i + alphahat_j)`.
    pub fn min_rate(&self, rows: usize, cols: usize) -> f64 {
        let mut k = f64::INFINITY;
        for a in &self.alpha[..rows] {
            for b in &self.alphahat[..cols] {
                k = k.min(a + b);
            }
        }
        k
    }
}

fn homogeneous_gamma(alpha: &[f64], alphahat: &[f64]) -> Option<f64> {
    let g = *alphahat.first()?;
    (alpha.iter().all(|&a| a == 0.0) && alphahat.iter().all(|&b| b == g)).then_some(g)
}

/// Monte Carlo value with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n)`.
    pub stderr: f64,
    #[serde(rename = "n")]
    pub n_samples: u64,
    pub seed: u64,
}

impl MCEstimate {
    /// Pools two independent estimates of the same quantity.
    pub fn pooled(&self, other: &MCEstimate) -> MCEstimate {
        let a = Moments::from_estimate(self);
        let b = Moments::from_estimate(other);
        a.merge(&b).estimate(self.seed)
    }
}

/// Draws `1/Gamma(shape, 1)`.
///
/// `rand_distr::Gamma` implements Marsaglia–Tsang: for shape `a >= 1` set
/// `d = a - 1/3`, `c = 1/sqrt(9d)`, draw `x ~ N(0,1)`, `v = (1 + c x)^3` and
/// accept `d v` when `v > 0` and `ln U < x^2/2 + d - d v + d ln v`. For
/// `a < 1` it boosts: `G_a = G_{a+1} U^{1/a}` with an independent uniform `U`.
fn inverse_gamma<R: Rng + ?Sized>(dist: &Gamma<f64>, rng: &mut R) -> f64 {
    1.0 / dist.sample(rng)
}

fn gamma_dist(shape: f64) -> Result<Gamma<f64>> {
    Gamma::new(shape, 1.0).map_err(|e| Error::Parameters(format!("Gamma({shape}, 1): {e}")))
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One log-gamma array on `index` (row-major draw order), reproducible from `seed`.
pub fn sample_array(index: &IndexSet, params: &ParameterSet, seed: u64) -> Result<PolygonalArray<f64>> {
    params.require(index.rows(), index.cols())?;
    let dists = cell_distributions(index, params)?;
    let mut rng = stream_rng(seed, 0);
    let mut k = 0;
    PolygonalArray::from_fn(index.clone(), |_, _| {
        let w = inverse_gamma(&dists[k], &mut rng);
        k += 1;
        w
    })
}

fn cell_distributions(index: &IndexSet, params: &ParameterSet) -> Result<Vec<Gamma<f64>>> {
    index.cells().map(|(i, j)| gamma_dist(params.rate(i, j))).collect()
}

/// Count, mean and centred second moment of a sample.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    fn merge(&self, o: &Moments) -> Moments {
        if self.n == 0 {
            return *o;
        }
        if o.n == 0 {
            return *self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        let (na, nb) = (self.n as f64, o.n as f64);
        Moments {
            n,
            mean: self.mean + d * nb / n as f64,
            m2: self.m2 + o.m2 + d * d * na * nb / n as f64,
        }
    }

    fn from_estimate(e: &MCEstimate) -> Moments {
        let n = e.n_samples as f64;
        Moments { n: e.n_samples, mean: e.mean, m2: e.stderr * e.stderr * n * (n - 1.0) }
    }

    fn estimate(&self, seed: u64) -> MCEstimate {
        let n = self.n as f64;
        let var = if self.n > 1 { self.m2 / (n - 1.0) } else { 0.0 };
        MCEstimate { mean: self.mean, stderr: (var / n).sqrt(), n_samples: self.n, seed }
    }
}

fn pairwise_merge(parts: &[Moments]) -> Moments {
    match parts.len() {
        0 => Moments::default(),
        1 => parts[0],
        k => pairwise_merge(&parts[..k / 2]).merge(&pairwise_merge(&parts[k / 2..])),
    }
}

/// Monte Carlo estimate of `E[exp(-sum_l u_l Z_{m_l, n_l})]`, using
/// [`DEFAULT_STREAMS`] streams.
pub fn mc_laplace(
    points: &[(usize, usize)],
    us: &[f64],
    params: &ParameterSet,
    n_samples: u64,
    seed: u64,
) -> Result<MCEstimate> {
    mc_laplace_streams(points, us, params, n_samples, seed, DEFAULT_STREAMS)
}

/// [`mc_laplace`] with an explicit number of RNG streams. Stream `k` is the
/// ChaCha8 stream `k` of the generator keyed by `seed` and handles an equal
/// share of the samples; per-stream moments are merged pairwise in a fixed
/// order, so the result does not depend on the thread count.
pub fn mc_laplace_streams(
    points: &[(usize, usize)],
    us: &[f64],
    params: &ParameterSet,
    n_samples: u64,
    seed: u64,
    streams: usize,
) -> Result<MCEstimate> {
    if points.is_empty() || points.len() != us.len() {
        return Err(Error::Precondition("need one u per point".into()));
    }
    if us.iter().any(|u| !(*u >= 0.0 && u.is_finite())) {
        return Err(Error::Precondition("u must be finite and non-negative".into()));
    }
    if n_samples < MIN_SAMPLES {
        return Err(Error::Precondition(format!("n_samples = {n_samples} < {MIN_SAMPLES}")));
    }
    if streams == 0 || streams as u64 > n_samples {
        return Err(Error::Precondition("streams must be in 1..=n_samples".into()));
    }
    for w in points.windows(2) {
        if !(w[0].0 < w[1].0 && w[0].1 > w[1].1) {
            return Err(Error::Shape(format!(
                "points {:?} do not form a staircase (m increasing, n decreasing)",
                points
            )));
        }
    }
    let shape = IndexSet::new(points.to_vec())?;
    params.require(shape.rows(), shape.cols())?;
    let dists = cell_distributions(&shape, params)?;
    let rows: Vec<usize> = (1..=shape.rows()).map(|i| shape.row_len(i)).collect();
    // (row, col, u) of every evaluation point, 0-based.
    let targets: Vec<(usize, usize, f64)> =
        points.iter().zip(us).map(|(&(m, n), &u)| (m - 1, n - 1, u)).collect();

    let per = n_samples / streams as u64;
    let extra = n_samples % streams as u64;
    let parts: Vec<Moments> = (0..streams as u64)
        .into_par_iter()
        .map(|k| {
            let count = per + u64::from(k < extra);
            let mut rng = stream_rng(seed, k);
            let width = rows[0];
            let mut z = vec![0.0f64; rows.len() * width];
            let mut mom = Moments::default();
            for _ in 0..count {
                let mut c = 0;
                for (i, &len) in rows.iter().enumerate() {
                    for j in 0..len {
                        let w = inverse_gamma(&dists[c], &mut rng);
                        c += 1;
                        let up = if i > 0 { z[(i - 1) * width + j] } else { 0.0 };
                        let left = if j > 0 { z[i * width + j - 1] } else { 0.0 };
                        z[i * width + j] = if i == 0 && j == 0 { w } else { w * (up + left) };
                    }
                }
                let expo: f64 = targets.iter().map(|&(i, j, u)| u * z[i * width + j]).sum();
                mom.push((-expo).exp());
            }
            mom
        })
        .collect();
    Ok(pairwise_merge(&parts).estimate(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_rates() {
        assert!(ParameterSet::new(vec![-1.0], vec![0.5]).is_err());
        assert!(ParameterSet::new(vec![0.0], vec![0.5]).is_ok());
        assert_eq!(ParameterSet::new(vec![0.0, 0.0], vec![1.5]).unwrap().gamma, Some(1.5));
    }

    #[test]
    fn sample_array_is_reproducible() {
        let p = ParameterSet::homogeneous(3, 3, 1.0).unwrap();
        let s = IndexSet::rectangle(3, 3).unwrap();
        let a = sample_array(&s, &p, 7).unwrap();
        let b = sample_array(&s, &p, 7).unwrap();
        let c = sample_array(&s, &p, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn zero_u_gives_one() {
        let p = ParameterSet::homogeneous(2, 2, 1.0).unwrap();
        let e = mc_laplace(&[(2, 2)], &[0.0], &p, 2000, 1).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn rejects_bad_staircase() {
        let p = ParameterSet::homogeneous(3, 3, 1.0).unwrap();
        assert!(matches!(
            mc_laplace(&[(1, 3), (2, 3)], &[0.5, 0.5], &p, 2000, 1),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn thread_count_does_not_matter() {
        let p = ParameterSet::homogeneous(2, 2, 1.0).unwrap();
        let a = mc_laplace(&[(2, 2)], &[0.5], &p, 5000, 3).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| mc_laplace(&[(2, 2)], &[0.5], &p, 5000, 3).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn pooling_matches_merged_moments() {
        let a = MCEstimate { mean: 0.5, stderr: 0.01, n_samples: 1000, seed: 1 };
        let b = MCEstimate { mean: 0.5, stderr: 0.01, n_samples: 1000, seed: 2 };
        let p = a.pooled(&b);
        assert_eq!(p.n_samples, 2000);
        assert!((p.mean - 0.5).abs() < 1e-15);
        assert!(p.stderr < 0.01);
    }
}
