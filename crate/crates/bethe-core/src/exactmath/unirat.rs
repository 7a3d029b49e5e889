//! Univariate rational functions with exact limit evaluation.

use super::field::Scalar;
use super::poly::Poly;
use super::Rat;
use crate::error::Error;
use std::fmt;

/// A point at which a limit of a [`UniRat`] is taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitPoint {
    /// A finite rational point.
    Finite(Rat),
    /// The point at infinity.
    Infinity,
}

/// A rational function `num/den` in one variable `u`, kept canonical:
/// `gcd(num, den) = 1`, `den` monic and nonzero, and the zero function is
/// `0/1`. Canonicity makes equality and hashing structural.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UniRat {
    num: Poly,
    den: Poly,
}

impl UniRat {
    /// Builds `num/den` in canonical form.
    ///
    /// # Errors
    /// Fails when `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::pole("rational function with zero denominator"));
        }
        if num.is_zero() {
            return Ok(UniRat {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        let g = Poly::gcd(&num, &den);
        let (num, _) = num.divmod(&g);
        let (den, _) = den.divmod(&g);
        let lead = den.leading().expect("nonzero denominator").clone();
        Ok(UniRat {
            num: num.scale(&lead.recip()),
            den: den.monic(),
        })
    }

    /// Embeds a polynomial.
    pub fn from_poly(p: Poly) -> Self {
        UniRat {
            num: p,
            den: Poly::one(),
        }
    }

    /// Embeds a rational constant.
    pub fn constant(c: Rat) -> Self {
        UniRat::from_poly(Poly::constant(c))
    }

    /// The identity function `u`.
    pub fn var() -> Self {
        UniRat::from_poly(Poly::var())
    }

    /// Numerator polynomial (coprime to the denominator).
    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    /// Denominator polynomial (monic).
    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// Returns the constant value when the function is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.den == Poly::one() && self.num.degree().map_or(true, |d| d == 0) {
            Some(
                self.num
                    .coeffs()
                    .first()
                    .cloned()
                    .unwrap_or_else(<Rat as Scalar>::zero),
            )
        } else {
            None
        }
    }

    /// Evaluates at a rational point.
    ///
    /// # Errors
    /// Reports a genuine pole when the (reduced) denominator vanishes there.
    pub fn eval(&self, at: &Rat) -> Result<Rat, Error> {
        let d = self.den.eval(at);
        if Scalar::is_zero(&d) {
            return Err(Error::pole(format!("{self} at u = {at}")));
        }
        Ok(self.num.eval(at) / d)
    }

    /// Substitutes another rational function for the variable.
    ///
    /// # Errors
    /// Fails when the substituted denominator is identically zero (the
    /// composite is undefined everywhere).
    pub fn compose(&self, point: &UniRat) -> Result<UniRat, Error> {
        let eval_poly = |p: &Poly| -> UniRat {
            let mut acc = UniRat::constant(<Rat as Scalar>::zero());
            for c in p.coeffs().iter().rev() {
                acc = acc
                    .mul(point)
                    .add(&UniRat::constant(c.clone()));
            }
            acc
        };
        let num = eval_poly(&self.num);
        let den = eval_poly(&self.den);
        if Scalar::is_zero(&den) {
            return Err(Error::pole(format!("{self} composed at {point}")));
        }
        num.div(&den)
    }

    /// The exact limit at a finite point or at infinity.
    ///
    /// At a finite point this is plain evaluation (the representation is
    /// reduced, so a vanishing denominator is a genuine pole). At infinity
    /// the limit is 0 when the numerator degree is smaller, the ratio of
    /// leading coefficients when the degrees match, and divergent otherwise.
    pub fn limit_at(&self, point: &LimitPoint) -> Result<Rat, Error> {
        match point {
            LimitPoint::Finite(x) => self.eval(x),
            LimitPoint::Infinity => {
                if self.num.is_zero() {
                    return Ok(<Rat as Scalar>::zero());
                }
                let dn = self.num.degree().unwrap_or(0);
                let dd = self.den.degree().unwrap_or(0);
                if dn < dd {
                    Ok(<Rat as Scalar>::zero())
                } else if dn == dd {
                    Ok(self.num.leading().unwrap() / self.den.leading().unwrap())
                } else {
                    Err(Error::Divergent(format!("{self} at infinity")))
                }
            }
        }
    }
}

impl fmt::Display for UniRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for UniRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniRat({self})")
    }
}

impl Scalar for UniRat {
    fn zero() -> Self {
        UniRat::constant(<Rat as Scalar>::zero())
    }

    fn one() -> Self {
        UniRat::constant(<Rat as Scalar>::one())
    }

    fn from_rat(r: &Rat) -> Self {
        UniRat::constant(r.clone())
    }

    fn add(&self, other: &Self) -> Self {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        UniRat::new(num, den).expect("nonzero denominators")
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        UniRat::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominators")
    }

    fn neg(&self) -> Self {
        UniRat {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(UniRat::new(self.den.clone(), self.num.clone()).expect("nonzero numerator"))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn apply_ratfunc(f: &UniRat, at: &Self) -> Result<Self, Error> {
        f.compose(at)
    }
}
