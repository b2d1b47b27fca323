//! Number systems the local moves can run over.
//!
//! The local moves only ever add, multiply and divide, so anything with those
//! three operations (a semifield) works: ordinary positive floats, exact
//! rationals, a log-scaled float that cannot overflow, and the max-plus
//! semifield, where the same code computes classical (tropical) RSK.

use num_rational::Ratio;
use num_traits::{Num, Signed};
use std::fmt::Debug;

pub trait Semifield: Clone + Debug {
    fn one() -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn over(&self, rhs: &Self) -> Self;
    /// Whether the value may appear as an array entry (positive, finite, ...).
    fn is_admissible(&self) -> bool;
}

impl Semifield for f64 {
    fn one() -> Self {
        1.0
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn over(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn is_admissible(&self) -> bool {
        self.is_finite() && *self > 0.0
    }
}

impl<I> Semifield for Ratio<I>
where
    Ratio<I>: Num + Signed + Clone + Debug,
{
    fn one() -> Self {
        num_traits::One::one()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }
    fn times(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }
    fn over(&self, rhs: &Self) -> Self {
        self.clone() / rhs.clone()
    }
    fn is_admissible(&self) -> bool {
        self.is_positive()
    }
}

/// A positive real stored by its natural logarithm: `LogScale(x)` is `e^x`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogScale(pub f64);

impl Semifield for LogScale {
    fn one() -> Self {
        LogScale(0.0)
    }
    fn plus(&self, rhs: &Self) -> Self {
        let (hi, lo) = if self.0 >= rhs.0 { (self.0, rhs.0) } else { (rhs.0, self.0) };
        LogScale(hi + (lo - hi).exp().ln_1p())
    }
    fn times(&self, rhs: &Self) -> Self {
        LogScale(self.0 + rhs.0)
    }
    fn over(&self, rhs: &Self) -> Self {
        LogScale(self.0 - rhs.0)
    }
    fn is_admissible(&self) -> bool {
        self.0.is_finite()
    }
}

/// The max-plus semifield: `plus` is `max`, `times` is `+`, `over` is `-`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct MaxPlus(pub f64);

impl Semifield for MaxPlus {
    fn one() -> Self {
        MaxPlus(0.0)
    }
    fn plus(&self, rhs: &Self) -> Self {
        MaxPlus(self.0.max(rhs.0))
    }
    fn times(&self, rhs: &Self) -> Self {
        MaxPlus(self.0 + rhs.0)
    }
    fn over(&self, rhs: &Self) -> Self {
        MaxPlus(self.0 - rhs.0)
    }
    fn is_admissible(&self) -> bool {
        self.0.is_finite()
    }
}
