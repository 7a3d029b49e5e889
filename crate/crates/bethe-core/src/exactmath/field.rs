//! The scalar abstraction shared by the point-wise (rational) and symbolic
//! (rational-function) instantiations of the engine.

use super::{Rat, UniRat};
use crate::error::Error;
use num_traits::{One, Zero};
use std::fmt::{Debug, Display};
use std::hash::Hash;

/// An exact field element. Implemented by [`Rat`] (point-wise evaluation)
/// and [`UniRat`] (evaluation with one formal variable, for limits).
///
/// `Ord` is a canonical total order used only to keep parameter sets and
/// term maps deterministic; for `UniRat` it has no analytic meaning.
pub trait Scalar: Clone + Eq + Ord + Hash + Debug + Display + Sized {
    /// Additive identity.
    fn zero() -> Self;
    /// Multiplicative identity.
    fn one() -> Self;
    /// Embeds a rational constant.
    fn from_rat(r: &Rat) -> Self;
    /// Sum.
    fn add(&self, other: &Self) -> Self;
    /// Difference.
    fn sub(&self, other: &Self) -> Self;
    /// Product.
    fn mul(&self, other: &Self) -> Self;
    /// Additive inverse.
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// True for the additive identity.
    fn is_zero(&self) -> bool;
    /// Evaluates a univariate rational function at this element (for `Rat`
    /// plain evaluation, for `UniRat` composition).
    fn apply_ratfunc(f: &UniRat, at: &Self) -> Result<Self, Error>;

    /// True for the multiplicative identity.
    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Quotient; `Err` when `other` is zero.
    fn div(&self, other: &Self) -> Result<Self, Error> {
        other
            .inv()
            .map(|i| self.mul(&i))
            .ok_or_else(|| Error::pole(format!("division of {self} by zero")))
    }
}

impl Scalar for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }

    fn one() -> Self {
        <Rat as One>::one()
    }

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn apply_ratfunc(f: &UniRat, at: &Self) -> Result<Self, Error> {
        f.eval(at)
    }
}
