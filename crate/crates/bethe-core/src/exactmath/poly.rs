//! Dense univariate polynomials over the rationals.

use super::Rat;
use num_traits::{One, Zero};
use std::fmt;

/// A polynomial in one variable `u`, stored densely by ascending degree.
/// The zero polynomial is the empty coefficient vector; the leading
/// coefficient is never zero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly(Vec<Rat>);

impl Poly {
    /// Builds a polynomial from ascending-degree coefficients, trimming
    /// trailing zeros.
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Poly(vec![Rat::one()])
    }

    /// A constant polynomial.
    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `u`.
    pub fn var() -> Self {
        Poly(vec![Rat::zero(), Rat::one()])
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Ascending-degree coefficients.
    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    /// Leading coefficient, or `None` for the zero polynomial.
    pub fn leading(&self) -> Option<&Rat> {
        self.0.last()
    }

    /// Evaluates at a rational point by Horner's rule.
    pub fn eval(&self, at: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    /// Sum of two polynomials.
    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.0.get(k).cloned().unwrap_or_else(Rat::zero);
            let b = other.0.get(k).cloned().unwrap_or_else(Rat::zero);
            out.push(a + b);
        }
        Poly::new(out)
    }

    /// Difference of two polynomials.
    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    /// Product of two polynomials.
    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Scales by a rational constant.
    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|a| a * c).collect())
    }

    /// Euclidean division: returns `(quotient, remainder)` with
    /// `deg r < deg d`.
    ///
    /// # Panics
    /// Panics if `d` is zero (internal invariant; callers check).
    pub fn divmod(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead = d.leading().unwrap();
        let mut rem = self.0.clone();
        let mut quot = vec![Rat::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / lead;
            if !c.is_zero() {
                for (i, b) in d.0.iter().enumerate() {
                    rem[k + i] -= &c * b;
                }
                quot[k] = c;
            }
            // The leading entry is now exactly zero.
            rem.pop();
            while rem.last().map_or(false, |c| c.is_zero()) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly(rem))
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut x = a.monic();
        let mut y = b.monic();
        while !y.is_zero() {
            let (_, r) = x.divmod(&y);
            x = y;
            y = r.monic();
        }
        if x.is_zero() {
            Poly::zero()
        } else {
            x
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c < &Rat::zero() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < &Rat::zero() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = if c < &Rat::zero() { -c } else { c.clone() };
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        write!(f, "u")?;
                    } else {
                        write!(f, "u^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn p(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| rat(c, 1)).collect())
    }

    #[test]
    fn arithmetic_and_eval() {
        let a = p(&[1, 2]); // 1 + 2u
        let b = p(&[-1, 1]); // u - 1
        assert_eq!(a.mul(&b), p(&[-1, -1, 2]));
        assert_eq!(a.add(&b), p(&[0, 3]));
        assert_eq!(a.eval(&rat(3, 1)), rat(7, 1));
        assert_eq!(a.mul(&b).eval(&rat(2, 1)), rat(5, 1));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn divmod_recovers_factors() {
        let d = p(&[-2, 1]); // u - 2
        let q = p(&[3, 0, 1]); // u^2 + 3
        let r = p(&[5]);
        let n = d.mul(&q).add(&r);
        let (q2, r2) = n.divmod(&d);
        assert_eq!(q2, q);
        assert_eq!(r2, r);
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let common = p(&[1, 1]); // u + 1
        let a = common.mul(&p(&[-3, 1])).scale(&rat(4, 1));
        let b = common.mul(&p(&[2, 1])).scale(&rat(-7, 3));
        assert_eq!(Poly::gcd(&a, &b), common);
        assert_eq!(Poly::gcd(&Poly::zero(), &a), a.monic());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[-1, 0, 2]).to_string(), "2*u^2 - 1");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::var().to_string(), "u");
    }
}
