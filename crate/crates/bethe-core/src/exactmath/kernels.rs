//! The rational kernels `g`, `f`, `h`, their graded variants, set products,
//! triangular products, and the split-fraction accumulator used to evaluate
//! partition-sum terms without materializing intermediate poles.

use super::field::Scalar;
use crate::error::Error;

/// Kernel selector.
///
/// With constant `c`: `g(u,v) = c/(u-v)`, `f(u,v) = (u-v+c)/(u-v)`,
/// `h(u,v) = (u-v+c)/c`, so `f = 1 + g` and `h = f/g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// `g(u,v) = c/(u-v)`.
    G,
    /// `f(u,v) = (u-v+c)/(u-v)`.
    F,
    /// `h(u,v) = (u-v+c)/c`.
    H,
}

/// `c_[p] = (-1)^p c`: the signed constant entering graded kernels.
pub fn signed_c<F: Scalar>(c: &F, parity: u8) -> F {
    if parity % 2 == 0 {
        c.clone()
    } else {
        c.neg()
    }
}

/// Numerator/denominator of a graded kernel as a pair, with no pole checks.
/// Parity 0 is the non-graded kernel.
pub fn graded_parts<F: Scalar>(kernel: Kernel, parity: u8, c: &F, u: &F, v: &F) -> (F, F) {
    let cp = signed_c(c, parity);
    let diff = u.sub(v);
    match kernel {
        Kernel::G => (cp, diff),
        Kernel::F => (diff.add(&cp), diff),
        Kernel::H => (diff.add(&cp), cp),
    }
}

/// Evaluates one graded kernel.
///
/// # Errors
/// Reports a pole when `u = v` for `g`/`f` (or when `c = 0` for `h`).
pub fn kernel_value<F: Scalar>(
    kernel: Kernel,
    parity: u8,
    c: &F,
    u: &F,
    v: &F,
) -> Result<F, Error> {
    let (num, den) = graded_parts(kernel, parity, c, u, v);
    if den.is_zero() {
        return Err(Error::pole(format!("{kernel:?}({u}, {v})")));
    }
    Ok(num.mul(&den.inv().expect("nonzero denominator")))
}

/// Product of kernel parts over all pairs `(u, v)` with `u` from `us`, `v`
/// from `vs`; `(1, 1)` when either set is empty.
pub fn set_parts<F: Scalar>(kernel: Kernel, parity: u8, c: &F, us: &[F], vs: &[F]) -> (F, F) {
    let mut num = F::one();
    let mut den = F::one();
    for u in us {
        for v in vs {
            let (n, d) = graded_parts(kernel, parity, c, u, v);
            num = num.mul(&n);
            den = den.mul(&d);
        }
    }
    (num, den)
}

/// Product of one kernel over all pairs of the two sets; 1 when either set
/// is empty.
///
/// # Errors
/// Propagates a pole from any pair.
pub fn set_product<F: Scalar>(
    kernel: Kernel,
    parity: u8,
    c: &F,
    us: &[F],
    vs: &[F],
) -> Result<F, Error> {
    let mut acc = F::one();
    for u in us {
        for v in vs {
            acc = acc.mul(&kernel_value(kernel, parity, c, u, v)?);
        }
    }
    Ok(acc)
}

/// Triangular product `prod_{i<j} kernel(x_j, x_i)`; 1 for fewer than two
/// entries.
///
/// # Errors
/// Propagates a pole (repeated entries with `g` or `f`).
pub fn delta_product<F: Scalar>(kernel: Kernel, parity: u8, c: &F, xs: &[F]) -> Result<F, Error> {
    let mut acc = F::one();
    for j in 1..xs.len() {
        for i in 0..j {
            acc = acc.mul(&kernel_value(kernel, parity, c, &xs[j], &xs[i])?);
        }
    }
    Ok(acc)
}

/// Reversed triangular product `prod_{i<j} kernel(x_i, x_j)`.
///
/// # Errors
/// Propagates a pole (repeated entries with `g` or `f`).
pub fn delta_product_primed<F: Scalar>(
    kernel: Kernel,
    parity: u8,
    c: &F,
    xs: &[F],
) -> Result<F, Error> {
    let mut acc = F::one();
    for j in 1..xs.len() {
        for i in 0..j {
            acc = acc.mul(&kernel_value(kernel, parity, c, &xs[i], &xs[j])?);
        }
    }
    Ok(acc)
}

/// A product of scalars kept as an unreduced `num/den` pair.
///
/// Partition-sum terms are products of kernel factors, some of which sit in
/// the denominator of the formula. A denominator factor whose own
/// denominator vanishes (for example `f(v, v)`) represents a factor that
/// diverges, so its reciprocal makes the whole term vanish; keeping the two
/// parts separate turns that limit into exact arithmetic. Only a vanishing
/// final denominator is a genuine pole.
#[derive(Debug, Clone)]
pub struct Frac<F: Scalar> {
    num: F,
    den: F,
}

impl<F: Scalar> Frac<F> {
    /// The multiplicative identity `1/1`.
    pub fn one() -> Self {
        Frac {
            num: F::one(),
            den: F::one(),
        }
    }

    /// Multiplies by a plain scalar value.
    pub fn mul_value(&mut self, v: &F) {
        self.num = self.num.mul(v);
    }

    /// Divides by a plain scalar value (a vanishing `v` surfaces as a
    /// genuine pole in [`Frac::value`]).
    pub fn div_value(&mut self, v: &F) {
        self.den = self.den.mul(v);
    }

    /// Multiplies by a kernel given as `(num, den)` parts.
    pub fn mul_parts(&mut self, parts: &(F, F)) {
        self.num = self.num.mul(&parts.0);
        self.den = self.den.mul(&parts.1);
    }

    /// Divides by a kernel given as `(num, den)` parts; an infinite kernel
    /// (vanishing part denominator) correctly annihilates the term.
    pub fn div_parts(&mut self, parts: &(F, F)) {
        self.num = self.num.mul(&parts.1);
        self.den = self.den.mul(&parts.0);
    }

    /// Final value.
    ///
    /// # Errors
    /// A vanishing accumulated denominator is reported as a genuine pole
    /// (including the ambiguous `0/0` case, which valid inputs never
    /// produce).
    pub fn value(self) -> Result<F, Error> {
        match self.den.inv() {
            Some(i) => Ok(self.num.mul(&i)),
            None => Err(Error::pole(format!(
                "term evaluated to {}/0",
                self.num
            ))),
        }
    }
}
