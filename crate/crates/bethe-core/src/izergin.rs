//! The domain-wall determinant `K(ȳ|x̄)`, the pole-free ratio `K/f` needed
//! when the argument sets intersect, and two summation identities used by
//! the recursion proofs.

use crate::error::Error;
use crate::exactmath::{
    delta_product, delta_product_primed, graded_parts, set_product, Kernel, LimitPoint, Poly, Rat,
    Scalar, UniRat,
};
use crate::partitions::{enumerate_splits, ParamSet};

/// Arguments of the determinant: row set `ȳ`, column set `x̄`, and the
/// graded-kernel parity (0 selects the non-graded kernels).
#[derive(Debug, Clone)]
pub struct IzerginArgs<F: Scalar = Rat> {
    /// Row parameters.
    pub ys: ParamSet<F>,
    /// Column parameters.
    pub xs: ParamSet<F>,
    /// Kernel parity.
    pub parity: u8,
}

/// Determinant of a square matrix by Gaussian elimination with exact
/// division; returns zero for singular matrices.
pub fn determinant<F: Scalar>(mut m: Vec<Vec<F>>) -> F {
    let n = m.len();
    let mut sign_flip = false;
    let mut acc = F::one();
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(r) => r,
            None => return F::zero(),
        };
        if pivot_row != col {
            m.swap(col, pivot_row);
            sign_flip = !sign_flip;
        }
        let pivot = m[col][col].clone();
        let pivot_inv = pivot.inv().expect("nonzero pivot");
        for row in col + 1..n {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = m[row][col].mul(&pivot_inv);
            for k in col..n {
                let delta = factor.mul(&m[col][k]);
                m[row][k] = m[row][k].sub(&delta);
            }
        }
        acc = acc.mul(&pivot);
    }
    if sign_flip {
        acc.neg()
    } else {
        acc
    }
}

/// The Izergin-type determinant.
///
/// Cardinality mismatch gives 0; two empty sets give 1. Evaluation uses the
/// row-absorbed form `Δ_g(ȳ) Δ'_g(x̄) det[ g(y_l, x_k) prod_{j≠k} h(y_l, x_j) ]`,
/// whose only poles are coinciding `y = x` pairs.
///
/// # Errors
/// Reports a pole when some `y` equals some `x` (use [`izergin_over_f`] or
/// [`kf_ratio_closed`] for the regularized ratio instead).
pub fn izergin<F: Scalar>(c: &F, args: &IzerginArgs<F>) -> Result<F, Error> {
    let ys = args.ys.values();
    let xs = args.xs.values();
    if ys.len() != xs.len() {
        return Ok(F::zero());
    }
    let p = ys.len();
    if p == 0 {
        return Ok(F::one());
    }
    for y in ys {
        if args.xs.contains(y) {
            return Err(Error::pole(format!("izergin with coinciding entry {y}")));
        }
    }
    let parity = args.parity;
    let mut mat = Vec::with_capacity(p);
    for y in ys {
        let mut row = Vec::with_capacity(p);
        for (k, x) in xs.iter().enumerate() {
            let (gn, gd) = graded_parts(Kernel::G, parity, c, y, x);
            let mut entry = gn.mul(&gd.inv().expect("distinct y/x checked"));
            for (j, xo) in xs.iter().enumerate() {
                if j != k {
                    let (hn, hd) = graded_parts(Kernel::H, parity, c, y, xo);
                    entry = entry.mul(&hn).mul(&hd.inv().expect("nonzero c"));
                }
            }
            row.push(entry);
        }
        mat.push(row);
    }
    let det = determinant(mat);
    let pre = delta_product(Kernel::G, parity, c, ys)?
        .mul(&delta_product_primed(Kernel::G, parity, c, xs)?);
    Ok(pre.mul(&det))
}

/// The ratio `K(ȳ|x̄)/f(ȳ,x̄)` in closed form, finite even when `ȳ` and `x̄`
/// share elements. Works over any scalar, so the symbolic engine can use it
/// directly.
///
/// With `p = |ȳ|`:
/// `K/f = c^{p(p-1)-p^2} / (prod_{i<j}(y_j - y_i)(x_i - x_j)) * det M`,
/// `M_{l,k} = c^2 prod_{j≠k}(y_l - x_j) / (y_l - x_k + c)`.
///
/// # Errors
/// Cardinality mismatch, or a pole when some `y - x = -c` (a genuine
/// singularity of the ratio).
pub fn kf_ratio_closed<F: Scalar>(
    c: &F,
    parity: u8,
    ys: &[F],
    xs: &[F],
) -> Result<F, Error> {
    if ys.len() != xs.len() {
        return Err(Error::Cardinality(format!(
            "ratio needs equal cardinalities, got {} and {}",
            ys.len(),
            xs.len()
        )));
    }
    let p = ys.len();
    if p == 0 {
        return Ok(F::one());
    }
    let cs = crate::exactmath::signed_c(c, parity);
    let c2 = cs.mul(&cs);

    let mut mat = Vec::with_capacity(p);
    for y in ys {
        let mut row = Vec::with_capacity(p);
        for (k, x) in xs.iter().enumerate() {
            let den = y.sub(x).add(&cs);
            let den_inv = den.inv().ok_or_else(|| {
                Error::pole(format!("ratio singular: {y} - {x} = -c"))
            })?;
            let mut entry = c2.mul(&den_inv);
            for (j, xo) in xs.iter().enumerate() {
                if j != k {
                    entry = entry.mul(&y.sub(xo));
                }
            }
            row.push(entry);
        }
        mat.push(row);
    }
    let det = determinant(mat);

    let mut pre_den = F::one();
    for j in 1..p {
        for i in 0..j {
            pre_den = pre_den.mul(&ys[j].sub(&ys[i]));
            pre_den = pre_den.mul(&xs[i].sub(&xs[j]));
        }
    }
    // Power of c: p(p-1) from the Delta_g prefactors minus p^2 from g/h.
    let mut c_pow = F::one();
    for _ in 0..p * (p - 1) {
        c_pow = c_pow.mul(&cs);
    }
    let mut c_div = F::one();
    for _ in 0..p * p {
        c_div = c_div.mul(&cs);
    }
    let pre = c_pow
        .mul(&pre_den.inv().expect("within-set distinct"))
        .mul(&c_div.inv().expect("nonzero c"));
    Ok(pre.mul(&det))
}

/// Scalars that can evaluate the regularized ratio `K/f`; the point-wise
/// instantiation uses ε-regularization, the symbolic one the closed form.
pub trait KfRatio: Scalar {
    /// `K(ȳ|x̄)/f(ȳ,x̄)`, finite for intersecting sets.
    fn kf_ratio(c: &Self, parity: u8, ys: &[Self], xs: &[Self]) -> Result<Self, Error>;
}

impl KfRatio for Rat {
    fn kf_ratio(c: &Self, parity: u8, ys: &[Self], xs: &[Self]) -> Result<Self, Error> {
        izergin_over_f_with_order(c, parity, ys, xs, false)
    }
}

impl KfRatio for UniRat {
    fn kf_ratio(c: &Self, parity: u8, ys: &[Self], xs: &[Self]) -> Result<Self, Error> {
        kf_ratio_closed(c, parity, ys, xs)
    }
}

/// The ratio `K(ȳ|x̄)/f(ȳ,x̄)` over rationals by ε-regularization: each
/// entry of `ȳ` that also occurs in `x̄` is shifted by a distinct multiple
/// of a formal ε, the ratio is evaluated as a rational function of ε, and
/// the exact limit ε → 0 is taken.
///
/// # Errors
/// Cardinality mismatch, or a genuine pole when the limit does not exist.
pub fn izergin_over_f(c: &Rat, parity: u8, ys: &ParamSet, xs: &ParamSet) -> Result<Rat, Error> {
    izergin_over_f_with_order(c, parity, ys.values(), xs.values(), false)
}

/// Same as [`izergin_over_f`] with the ε multipliers assigned in reverse,
/// used to confirm the limit is assignment-independent.
pub fn izergin_over_f_reversed(
    c: &Rat,
    parity: u8,
    ys: &ParamSet,
    xs: &ParamSet,
) -> Result<Rat, Error> {
    izergin_over_f_with_order(c, parity, ys.values(), xs.values(), true)
}

fn izergin_over_f_with_order(
    c: &Rat,
    parity: u8,
    ys: &[Rat],
    xs: &[Rat],
    reverse: bool,
) -> Result<Rat, Error> {
    if ys.len() != xs.len() {
        return Err(Error::Cardinality(format!(
            "ratio needs equal cardinalities, got {} and {}",
            ys.len(),
            xs.len()
        )));
    }
    let p = ys.len();
    if p == 0 {
        return Ok(<Rat as Scalar>::one());
    }
    let coinciding: Vec<bool> = ys.iter().map(|y| xs.contains(y)).collect();

    if !coinciding.iter().any(|&b| b) {
        // Disjoint sets: direct quotient, no regularization.
        let args = IzerginArgs {
            ys: ParamSet::new(ys.to_vec())?,
            xs: ParamSet::new(xs.to_vec())?,
            parity,
        };
        let k = izergin(c, &args)?;
        let f = set_product(Kernel::F, parity, c, ys, xs)?;
        return k.div(&f);
    }

    // Shift the k-th coinciding entry by k·ε (or reversed multipliers).
    let n_coinciding = coinciding.iter().filter(|&&b| b).count();
    let mut mult_iter = 0usize;
    let mut ys_eps = Vec::with_capacity(p);
    for (y, &coin) in ys.iter().zip(&coinciding) {
        let m = if coin {
            mult_iter += 1;
            if reverse {
                n_coinciding + 1 - mult_iter
            } else {
                mult_iter
            }
        } else {
            0
        };
        // y + m·ε as a polynomial in ε.
        ys_eps.push(UniRat::from_poly(Poly::new(vec![
            y.clone(),
            Rat::from_integer(m.into()),
        ])));
    }
    let xs_eps: Vec<UniRat> = xs.iter().map(|x| UniRat::constant(x.clone())).collect();
    let c_eps = UniRat::constant(c.clone());

    let num = izergin(
        &c_eps,
        &IzerginArgs {
            ys: ParamSet::new(ys_eps.clone())?,
            xs: ParamSet::new(xs_eps.clone())?,
            parity,
        },
    )?;
    let den = set_product(Kernel::F, parity, &c_eps, &ys_eps, &xs_eps)?;
    let ratio = num.div(&den)?;
    ratio.limit_at(&LimitPoint::Finite(<Rat as Scalar>::zero()))
}

/// Both sides of the shift-reflection identity
/// `K(x̄ - c|ȳ) = (-1)^p K(ȳ|x̄)/f(ȳ,x̄)`.
///
/// # Errors
/// Propagates pole errors from degenerate inputs.
pub fn identity_izp(c: &Rat, xs: &ParamSet, ys: &ParamSet) -> Result<(Rat, Rat), Error> {
    if xs.len() != ys.len() {
        return Err(Error::Cardinality(
            "identity needs equal cardinalities".into(),
        ));
    }
    let p = xs.len();
    let shifted = xs.shifted(&-c);
    let lhs = izergin(
        c,
        &IzerginArgs {
            ys: shifted,
            xs: ys.clone(),
            parity: 0,
        },
    )?;
    let k = izergin(
        c,
        &IzerginArgs {
            ys: ys.clone(),
            xs: xs.clone(),
            parity: 0,
        },
    )?;
    let f = set_product(Kernel::F, 0, c, ys.values(), xs.values())?;
    let mut rhs = k.div(&f)?;
    if p % 2 == 1 {
        rhs = rhs.neg();
    }
    Ok((lhs, rhs))
}

/// Both sides of the summation identity
/// `sum_{{w̄_I, w̄_II} ⊢ w̄, |w̄_I| = |ū|} K(w̄_I|ū) K(v̄|w̄_II) f(w̄_II, w̄_I)
///  = (-1)^{|ū|} f(w̄, ū) K({ū - c, v̄}|w̄)`.
///
/// # Errors
/// Cardinality mismatch (`|w̄| = |ū| + |v̄|` required) or pole errors on
/// degenerate draws.
pub fn identity_lm1(
    c: &Rat,
    us: &ParamSet,
    vs: &ParamSet,
    ws: &ParamSet,
) -> Result<(Rat, Rat), Error> {
    let m1 = us.len();
    let m2 = vs.len();
    if ws.len() != m1 + m2 {
        return Err(Error::Cardinality(format!(
            "need |w̄| = {} + {}, got {}",
            m1,
            m2,
            ws.len()
        )));
    }
    let mut lhs = <Rat as Scalar>::zero();
    for split in enumerate_splits(ws, &[m1, m2])? {
        let w1 = ws.select(&split[0]);
        let w2 = ws.select(&split[1]);
        let k1 = izergin(
            c,
            &IzerginArgs {
                ys: ParamSet::new(w1.clone())?,
                xs: us.clone(),
                parity: 0,
            },
        )?;
        let k2 = izergin(
            c,
            &IzerginArgs {
                ys: vs.clone(),
                xs: ParamSet::new(w2.clone())?,
                parity: 0,
            },
        )?;
        let f = set_product(Kernel::F, 0, c, &w2, &w1)?;
        lhs = lhs.add(&k1.mul(&k2).mul(&f));
    }

    let mut merged = us.shifted(&-c).values().to_vec();
    merged.extend(vs.values().iter().cloned());
    let rhs_k = izergin(
        c,
        &IzerginArgs {
            ys: ParamSet::new(merged)?,
            xs: ws.clone(),
            parity: 0,
        },
    )?;
    let f_all = set_product(Kernel::F, 0, c, ws.values(), us.values())?;
    let mut rhs = f_all.mul(&rhs_k);
    if m1 % 2 == 1 {
        rhs = rhs.neg();
    }
    Ok((lhs, rhs))
}
