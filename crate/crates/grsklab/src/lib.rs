//! Geometric RSK / geometric PNG on positive arrays, the log-gamma directed
//! polymer, and numerical evaluation of the contour-integral and Fredholm
//! formulas for its one- and two-point Laplace transforms.
//!
//! * [`arrays`] — local moves, gRSK, gPNG, energy and type functionals.
//! * [`oracle`] — brute-force path sums, non-intersecting tuples, Jacobians.
//! * [`sampling`] — log-gamma weights and Monte Carlo Laplace transforms.
//! * [`specfun`] — complex log-gamma, polygamma, Sklyanin measure, Airy,
//!   Whittaker functions.
//! * [`contour`] — contour quadrature and the Laplace-transform formulas.
//! * [`airy`] — extended Airy kernel and two-time Airy distributions.

pub mod airy;
pub mod arrays;
pub mod contour;
pub mod error;
pub mod oracle;
pub mod sampling;
pub mod specfun;

pub use error::{Error, Result};
