//! Exact scalar arithmetic: big rationals, dense polynomials, univariate
//! rational functions with exact limits, and the rational kernels `g`, `f`,
//! `h` (plus graded variants) from which every formula in this crate is
//! assembled.

mod field;
mod kernels;
mod poly;
mod unirat;

pub use field::Scalar;
pub use kernels::{
    delta_product, delta_product_primed, graded_parts, kernel_value, set_parts, set_product,
    signed_c, Frac, Kernel,
};
pub use poly::Poly;
pub use unirat::{LimitPoint, UniRat};

use crate::error::Error;
use num_bigint::BigInt;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator. Parses and displays as `p/q` (or `p` when `q = 1`).
pub type Rat = num_rational::BigRational;

/// Builds a rational from an integer numerator and denominator.
///
/// # Panics
/// Panics if `den == 0`; use [`parse_rat`] for fallible construction.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Builds a rational from an integer.
pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// Parses a rational from `p`, `-p`, or `p/q` notation.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let t = s.trim();
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {t:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {t:?}")))?;
        if d == BigInt::from(0) {
            return Err(Error::Parse(format!("zero denominator in {t:?}")));
        }
        Ok(Rat::new(n, d))
    } else {
        let n: BigInt = t
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {t:?}")))?;
        Ok(Rat::from_integer(n))
    }
}

/// The algebra gl(m|n): `m` even basis states, `n` odd ones. The non-graded
/// gl(K) case is represented as gl(K|0). There are `m + n - 1` Bethe levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgebraSpec {
    m: usize,
    n: usize,
}

impl AlgebraSpec {
    /// Creates gl(m|n). Requires `m + n >= 2` so that at least one Bethe
    /// level exists.
    pub fn new(m: usize, n: usize) -> Result<Self, Error> {
        if m + n < 2 {
            return Err(Error::Model(format!(
                "gl({m}|{n}) has no Bethe levels; need m + n >= 2"
            )));
        }
        Ok(AlgebraSpec { m, n })
    }

    /// Creates the non-graded gl(K), i.e. gl(K|0).
    pub fn non_graded(k: usize) -> Result<Self, Error> {
        AlgebraSpec::new(k, 0)
    }

    /// Number of even basis states.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of odd basis states.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of Bethe levels, `m + n - 1`.
    pub fn levels(&self) -> usize {
        self.m + self.n - 1
    }

    /// Dimension of one site state space, `m + n`.
    pub fn states(&self) -> usize {
        self.m + self.n
    }

    /// True when at least one state is odd.
    pub fn is_graded(&self) -> bool {
        self.n > 0
    }

    /// Parity of basis state `i` (1-based): 0 for `i <= m`, 1 above.
    ///
    /// # Errors
    /// Fails when `i` is outside `1..=m+n`.
    pub fn parity(&self, i: usize) -> Result<u8, Error> {
        if i == 0 || i > self.states() {
            return Err(Error::Index(format!(
                "state {i} outside 1..={}",
                self.states()
            )));
        }
        Ok(u8::from(i > self.m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_and_display_round_trip() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-4/2").unwrap().to_string(), "-2");
        assert_eq!(parse_rat(" 7 ").unwrap().to_string(), "7");
        assert_eq!(rat(2, -4).to_string(), "-1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn algebra_levels_and_parity() {
        let a = AlgebraSpec::non_graded(3).unwrap();
        assert_eq!(a.levels(), 2);
        assert!(!a.is_graded());
        assert_eq!(a.parity(3).unwrap(), 0);

        let s = AlgebraSpec::new(2, 1).unwrap();
        assert_eq!(s.levels(), 2);
        assert_eq!(s.parity(2).unwrap(), 0);
        assert_eq!(s.parity(3).unwrap(), 1);
        assert!(s.parity(4).is_err());
        assert!(AlgebraSpec::new(1, 0).is_err());
    }
}
