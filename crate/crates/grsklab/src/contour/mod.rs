//! Contour quadrature and the contour-integral / Fredholm formulas for the
//! Laplace transforms of the log-gamma polymer partition function.
//!
//! * [`laplace`] — one-point formula, two-point formulas (both geometries)
//!   and the O'Connell–Yor analogue.
//! * [`fredholm`] — kernel matrices, Fredholm terms, the BCR determinant.
//! * [`series`] — the double series of the two-point transform, the block
//!   Cauchy identity and the pre-limit terms along the KPZ scaling.

mod quadrature;
mod tensor;

pub mod fredholm;
pub mod laplace;
pub mod series;

pub use fredholm::{bcr_default_contours, bcr_fredholm, bcr_fredholm_log, bcr_kernel, BcrContours, FredholmEstimate, KernelMatrix};
pub use laplace::{
    case_a_default_lines, case_b_default_lines, laplace1, laplace1_default_delta, laplace1_log, laplace2_case_a,
    laplace2_case_a_log, laplace2_case_b, laplace2_case_b_log, oy_laplace2, TwoPointLines,
};
pub use quadrature::{
    gauss_legendre, gauss_legendre_on, graded_symmetric_rule, integrate, integrate_with_refinement, ComplexEstimate,
    ContourSpec, Discretized, Estimate, QuadratureSpec, DEFAULT_CIRCLE_NODES, DEFAULT_HALF_LENGTH,
    DEFAULT_NODES_PER_UNIT,
};
pub use series::{
    block_cauchy_check, joint_series_term, joint_series_term_log, prelimit_term, scaled_geometry,
    single_pair_bound_excess, ComplexCheck, PrelimitTerm, ScaledGeometry, ScalingInputs, SeriesContours,
    MAX_PRELIMIT_N, MAX_SERIES_PAIRS,
};
