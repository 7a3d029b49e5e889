//! Action of monodromy matrix entries on formal linear combinations of
//! Bethe vectors, with exact rational coefficients.
//!
//! A Bethe vector is represented symbolically by its parameter index; the
//! action of an entry `T_{i,j}(z̄)` expands over all admissible partitions
//! of the merged parameter sets and produces a new combination. The model
//! enters only through the free functional ratios `α_s` and the vacuum
//! eigenvalue `λ_{N+1}`, both supplied by a [`ModelContext`].

use std::collections::hash_map::Entry as HashEntry;
use std::collections::{btree_map, BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use crate::draw;
use crate::error::Error;
use crate::exactmath::{set_parts, AlgebraSpec, Frac, Kernel, Rat, Scalar, UniRat};
use crate::izergin::KfRatio;
use crate::partitions::{enumerate_ij_partitions, BetheIndex, ParamSet};
use crate::superaction::{phi_hat_set_parts, phi_set_parts};

/// Whether a symbol is a Bethe vector (ket) or a dual Bethe vector (bra).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BetheSide {
    Ket,
    Bra,
}

/// A formal Bethe vector symbol: a side together with a parameter index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalBV<F: Scalar = Rat> {
    pub side: BetheSide,
    pub index: BetheIndex<F>,
}

impl<F: Scalar> FormalBV<F> {
    pub fn ket(index: BetheIndex<F>) -> Self {
        FormalBV { side: BetheSide::Ket, index }
    }

    pub fn bra(index: BetheIndex<F>) -> Self {
        FormalBV { side: BetheSide::Bra, index }
    }
}

impl<F: Scalar> fmt::Display for FormalBV<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.side {
            BetheSide::Ket => "B",
            BetheSide::Bra => "C",
        };
        write!(f, "{tag}(")?;
        for (s, level) in self.index.levels().iter().enumerate() {
            if s > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{{")?;
            for (k, v) in level.values().iter().enumerate() {
                if k > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, ")")
    }
}

/// A finite linear combination of Bethe vector symbols. Zero coefficients
/// are never stored, so equality of combinations is structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalCombination<F: Scalar = Rat> {
    terms: BTreeMap<FormalBV<F>, F>,
}

impl<F: Scalar> FormalCombination<F> {
    pub fn new() -> Self {
        FormalCombination { terms: BTreeMap::new() }
    }

    /// The combination `1 * symbol`.
    pub fn symbol(bv: FormalBV<F>) -> Self {
        let mut out = Self::new();
        out.insert_add(bv, F::one());
        out
    }

    /// The single ket `B(index)`.
    pub fn ket(index: BetheIndex<F>) -> Self {
        Self::symbol(FormalBV::ket(index))
    }

    /// The single bra `C(index)`.
    pub fn bra(index: BetheIndex<F>) -> Self {
        Self::symbol(FormalBV::bra(index))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> btree_map::Iter<'_, FormalBV<F>, F> {
        self.terms.iter()
    }

    /// The coefficient of a symbol, zero when absent.
    pub fn coefficient(&self, bv: &FormalBV<F>) -> F {
        self.terms.get(bv).cloned().unwrap_or_else(F::zero)
    }

    /// Adds `coeff * bv`, removing the entry if the total cancels.
    pub fn insert_add(&mut self, bv: FormalBV<F>, coeff: F) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(bv) {
            btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn scale(&self, factor: &F) -> Self {
        let mut out = Self::new();
        for (bv, cf) in &self.terms {
            out.insert_add(bv.clone(), cf.mul(factor));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (bv, cf) in &other.terms {
            out.insert_add(bv.clone(), cf.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&F::zero().sub(&F::one())))
    }
}

impl<F: Scalar> Default for FormalCombination<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Scalar> fmt::Display for FormalCombination<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (bv, cf)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({cf}) {bv}")?;
        }
        Ok(())
    }
}

/// How the free functional ratios `α_s(u)` are supplied.
#[derive(Debug, Clone)]
pub enum AlphaMode {
    /// Every requested value is an independent deterministic draw.
    Free,
    /// At a stored root the ratio takes exactly the value dictated by the
    /// Bethe equations; elsewhere it is a draw.
    OnShell { roots: BetheIndex<Rat> },
    /// At a stored root the ratio vanishes; elsewhere it is a draw.
    Generalized { roots: BetheIndex<Rat> },
    /// Explicit rational functions, one per level, plus `λ_{N+1}`.
    Explicit { alphas: Vec<UniRat>, lambda_last: UniRat },
}

/// Model data needed to evaluate actions: the algebra, the constant `c`,
/// the twist `κ`, and the functional ratios. Drawn values are memoized so
/// repeated requests agree; the draw is a keyed PRF of `seed`, so values
/// do not depend on evaluation order.
#[derive(Debug)]
pub struct ModelContext {
    pub algebra: AlgebraSpec,
    pub c: Rat,
    pub kappa: Vec<Rat>,
    pub mode: AlphaMode,
    pub seed: u64,
    memo: Mutex<HashMap<(usize, String), Rat>>,
}

impl ModelContext {
    pub fn new(
        algebra: AlgebraSpec,
        c: Rat,
        kappa: Vec<Rat>,
        mode: AlphaMode,
        seed: u64,
    ) -> Result<Self, Error> {
        if c.is_zero() {
            return Err(Error::Model("c must be nonzero".into()));
        }
        if kappa.len() != algebra.states() {
            return Err(Error::Model(format!(
                "twist needs {} entries, got {}",
                algebra.states(),
                kappa.len()
            )));
        }
        if kappa.iter().any(|k| k.is_zero()) {
            return Err(Error::Model("twist entries must be nonzero".into()));
        }
        match &mode {
            AlphaMode::OnShell { roots } | AlphaMode::Generalized { roots } => {
                if roots.num_levels() != algebra.levels() {
                    return Err(Error::Model("root index has wrong number of levels".into()));
                }
            }
            AlphaMode::Explicit { alphas, .. } => {
                if alphas.len() != algebra.levels() {
                    return Err(Error::Model("need one ratio per level".into()));
                }
            }
            AlphaMode::Free => {}
        }
        Ok(ModelContext { algebra, c, kappa, mode, seed, memo: Mutex::new(HashMap::new()) })
    }

    /// A fully generic model: all functional data drawn deterministically.
    pub fn free(algebra: AlgebraSpec, c: Rat, kappa: Vec<Rat>, seed: u64) -> Result<Self, Error> {
        Self::new(algebra, c, kappa, AlphaMode::Free, seed)
    }

    /// The twist entry `κ_i`, 1-based.
    pub fn kappa(&self, i: usize) -> Result<&Rat, Error> {
        self.kappa
            .get(i.wrapping_sub(1))
            .ok_or_else(|| Error::Index(format!("twist index {i} out of range")))
    }

    fn memo_draw(&self, table: usize, label: &str) -> Rat {
        let key = (table, label.to_string());
        let mut memo = self.memo.lock().expect("memo lock");
        match memo.entry(key) {
            HashEntry::Occupied(e) => e.get().clone(),
            HashEntry::Vacant(e) => {
                let tag = format!("ratio:{table}:{label}");
                e.insert(draw::draw_nonzero_rat(self.seed, &tag)).clone()
            }
        }
    }

    /// The ratio `α_s` at a point. Points are compared exactly; in the
    /// non-explicit modes a point that is not a stored root is treated as
    /// an opaque label and drawn deterministically.
    pub fn alpha<F: Scalar>(&self, s: usize, point: &F) -> Result<F, Error> {
        let n = self.algebra.levels();
        if s < 1 || s > n {
            return Err(Error::Index(format!("ratio level {s} outside 1..={n}")));
        }
        match &self.mode {
            AlphaMode::Explicit { alphas, .. } => F::apply_ratfunc(&alphas[s - 1], point),
            AlphaMode::OnShell { roots } => {
                for root in roots.level(s).values() {
                    if *point == F::from_rat(root) {
                        let v = bethe_rhs(&self.algebra, &self.c, roots, s, root)?;
                        return Ok(F::from_rat(&v));
                    }
                }
                Ok(F::from_rat(&self.memo_draw(s, &format!("{point}"))))
            }
            AlphaMode::Generalized { roots } => {
                if roots.level(s).values().iter().any(|r| *point == F::from_rat(r)) {
                    return Ok(F::zero());
                }
                Ok(F::from_rat(&self.memo_draw(s, &format!("{point}"))))
            }
            AlphaMode::Free => Ok(F::from_rat(&self.memo_draw(s, &format!("{point}")))),
        }
    }

    /// Product of `α_s` over a set of points.
    pub fn alpha_set<F: Scalar>(&self, s: usize, points: &[F]) -> Result<F, Error> {
        let mut out = F::one();
        for p in points {
            out = out.mul(&self.alpha(s, p)?);
        }
        Ok(out)
    }

    /// The vacuum eigenvalue `λ_{N+1}` at a point.
    pub fn lambda_last<F: Scalar>(&self, point: &F) -> Result<F, Error> {
        match &self.mode {
            AlphaMode::Explicit { lambda_last, .. } => F::apply_ratfunc(lambda_last, point),
            _ => {
                let table = self.algebra.states();
                Ok(F::from_rat(&self.memo_draw(table, &format!("{point}"))))
            }
        }
    }

    /// `λ_i(u) = α_i(u) ⋯ α_N(u) λ_{N+1}(u)`.
    pub fn lambda<F: Scalar>(&self, i: usize, point: &F) -> Result<F, Error> {
        let states = self.algebra.states();
        if i < 1 || i > states {
            return Err(Error::Index(format!("eigenvalue index {i} outside 1..={states}")));
        }
        let mut out = self.lambda_last(point)?;
        for s in i..states {
            out = out.mul(&self.alpha(s, point)?);
        }
        Ok(out)
    }
}

/// Right-hand side of the Bethe equation for the root `t` at the given
/// level: the ratio the model function `α_level` must take there for the
/// vector to be on shell. Valid for graded and non-graded algebras.
pub fn bethe_rhs(
    alg: &AlgebraSpec,
    c: &Rat,
    ts: &BetheIndex<Rat>,
    level: usize,
    t: &Rat,
) -> Result<Rat, Error> {
    let n = alg.levels();
    if level < 1 || level > n {
        return Err(Error::Index(format!("level {level} outside 1..={n}")));
    }
    let rest = ts.level(level).without(t)?;
    let this = [t.clone()];
    let mut fr = Frac::one();
    fr.mul_parts(&phi_hat_set_parts(alg, level, c, &this, rest.values()));
    fr.div_parts(&phi_set_parts(alg, level, c, rest.values(), &this));
    let up = ts.level(level + 1);
    let down = ts.level(level - 1);
    fr.mul_parts(&set_parts(Kernel::F, alg.parity(level + 1)?, c, up.values(), &this));
    fr.div_parts(&set_parts(Kernel::F, alg.parity(level)?, c, &this, down.values()));
    fr.value()
}

/// Residuals `α_i(t) - rhs_i(t)` for every root; all zero exactly when the
/// index solves the Bethe equations in the given model.
pub fn bethe_residual(
    ctx: &ModelContext,
    ts: &BetheIndex<Rat>,
) -> Result<Vec<(usize, usize, Rat)>, Error> {
    let mut out = Vec::new();
    for s in 1..=ctx.algebra.levels() {
        for (k, t) in ts.level(s).values().iter().enumerate() {
            let lhs = ctx.alpha::<Rat>(s, t)?;
            let rhs = bethe_rhs(&ctx.algebra, &ctx.c, ts, s, t)?;
            out.push((s, k, lhs - rhs));
        }
    }
    Ok(out)
}

/// How the paired-kernel factor in the action is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KfStyle {
    /// The determinant ratio, valid for any number of spectral parameters.
    Ratio,
    /// The reciprocal `1/h`, the specialized single-parameter form.
    InverseH,
}

fn side_name(side: BetheSide) -> &'static str {
    match side {
        BetheSide::Ket => "ket",
        BetheSide::Bra => "bra",
    }
}

/// Core expansion: coefficients of `T_{i,j}(z̄)` applied to one index.
fn act_on_index<F: Scalar + KfRatio>(
    ctx: &ModelContext,
    i: usize,
    j: usize,
    zs: &ParamSet<F>,
    index: &BetheIndex<F>,
    style: KfStyle,
) -> Result<Vec<(BetheIndex<F>, F)>, Error> {
    if ctx.algebra.is_graded() {
        return Err(Error::Model("graded algebras use the graded action".into()));
    }
    let n = ctx.algebra.levels();
    if index.num_levels() != n {
        return Err(Error::Model(format!(
            "index has {} levels, algebra needs {n}",
            index.num_levels()
        )));
    }
    if zs.is_empty() {
        return Err(Error::Cardinality("need at least one spectral parameter".into()));
    }
    let cf = F::from_rat(&ctx.c);
    let mut prefactor = F::one();
    for z in zs.values() {
        prefactor = prefactor.mul(&ctx.lambda_last(z)?);
    }
    let enumeration = enumerate_ij_partitions(index, zs, i, j)?;
    let mut out = Vec::new();
    for part in &enumeration.partitions {
        let mut wi: Vec<Vec<F>> = Vec::with_capacity(n + 2);
        let mut wii: Vec<Vec<F>> = Vec::with_capacity(n + 2);
        let mut wiii: Vec<Vec<F>> = Vec::with_capacity(n + 2);
        for s in 0..=n + 1 {
            let tri = part.level(s);
            wi.push(enumeration.values(&tri.part_i, s));
            wii.push(enumeration.values(&tri.part_ii, s));
            wiii.push(enumeration.values(&tri.part_iii, s));
        }
        let mut term = Frac::one();
        // Bridge factors between the two constrained ranges; absent when
        // i <= j.
        for s in j..i {
            term.mul_parts(&set_parts(Kernel::F, 0, &cf, &wi[s], &wiii[s]));
        }
        for s in j..i.saturating_sub(1) {
            term.div_parts(&set_parts(Kernel::F, 0, &cf, &wi[s + 1], &wiii[s]));
        }
        // Creation-side ladder over levels below the row index.
        for s in 1..i {
            apply_kf(&mut term, style, &cf, &wi[s], &wi[s - 1])?;
            term.mul_parts(&set_parts(Kernel::F, 0, &cf, &wi[s], &wii[s]));
            term.div_parts(&set_parts(Kernel::F, 0, &cf, &wi[s], &wii[s - 1]));
        }
        // Annihilation-side ladder over levels at or above the column
        // index; this is where the model ratios enter.
        for s in j..=n {
            term.mul_value(&ctx.alpha_set(s, &wiii[s])?);
            apply_kf(&mut term, style, &cf, &wiii[s + 1], &wiii[s])?;
            term.mul_parts(&set_parts(Kernel::F, 0, &cf, &wii[s], &wiii[s]));
            term.div_parts(&set_parts(Kernel::F, 0, &cf, &wii[s + 1], &wiii[s]));
        }
        let coeff = term.value()?.mul(&prefactor);
        if coeff.is_zero() {
            continue;
        }
        let levels = (1..=n)
            .map(|s| ParamSet::new(wii[s].clone()).expect("distinct within level"))
            .collect();
        out.push((BetheIndex::new(levels), coeff));
    }
    Ok(out)
}

fn apply_kf<F: Scalar + KfRatio>(
    term: &mut Frac<F>,
    style: KfStyle,
    c: &F,
    ys: &[F],
    xs: &[F],
) -> Result<(), Error> {
    match style {
        KfStyle::Ratio => {
            term.mul_value(&F::kf_ratio(c, 0, ys, xs)?);
        }
        KfStyle::InverseH => {
            term.div_parts(&set_parts(Kernel::H, 0, c, ys, xs));
        }
    }
    Ok(())
}

fn act_combination<F: Scalar + KfRatio>(
    ctx: &ModelContext,
    i: usize,
    j: usize,
    zs: &ParamSet<F>,
    combo: &FormalCombination<F>,
    style: KfStyle,
    side: BetheSide,
) -> Result<FormalCombination<F>, Error> {
    let mut out = FormalCombination::new();
    for (bv, cf) in combo.terms() {
        if bv.side != side {
            return Err(Error::Model(format!(
                "this action applies to {} symbols only",
                side_name(side)
            )));
        }
        for (index, co) in act_on_index(ctx, i, j, zs, &bv.index, style)? {
            out.insert_add(FormalBV { side, index }, co.mul(cf));
        }
    }
    Ok(out)
}

/// Action of `T_{i,j}(z̄)` on a combination of kets, for any number of
/// pairwise distinct spectral parameters.
pub fn act_multiple<F: Scalar + KfRatio>(
    ctx: &ModelContext,
    i: usize,
    j: usize,
    zs: &ParamSet<F>,
    combo: &FormalCombination<F>,
) -> Result<FormalCombination<F>, Error> {
    act_combination(ctx, i, j, zs, combo, KfStyle::Ratio, BetheSide::Ket)
}

/// Action of `T_{i,j}(z)` on a combination of kets: the single-parameter
/// form, where every paired kernel collapses to a reciprocal `h`.
pub fn act_single<F: Scalar + KfRatio>(
    ctx: &ModelContext,
    i: usize,
    j: usize,
    z: &F,
    combo: &FormalCombination<F>,
) -> Result<FormalCombination<F>, Error> {
    let zs = ParamSet::singleton(z.clone());
    act_combination(ctx, i, j, &zs, combo, KfStyle::InverseH, BetheSide::Ket)
}

/// Right action of `T_{i,j}(z̄)` on a combination of bras. The expansion
/// coefficients coincide with those of the transposed-entry left action on
/// kets with the same index.
pub fn act_dual<F: Scalar + KfRatio>(
    ctx: &ModelContext,
    i: usize,
    j: usize,
    zs: &ParamSet<F>,
    combo: &FormalCombination<F>,
) -> Result<FormalCombination<F>, Error> {
    act_combination(ctx, j, i, zs, combo, KfStyle::Ratio, BetheSide::Bra)
}

/// Action of the zero mode `T_{i+1,i}[0]`, the leading coefficient of the
/// lowering entry at large argument.
pub fn act_zero_mode<F: Scalar + KfRatio>(
    ctx: &ModelContext,
    i: usize,
    combo: &FormalCombination<F>,
) -> Result<FormalCombination<F>, Error> {
    if ctx.algebra.is_graded() {
        return Err(Error::Model("graded algebras use the graded zero mode".into()));
    }
    let n = ctx.algebra.levels();
    if i < 1 || i > n {
        return Err(Error::Index(format!("zero mode level {i} outside 1..={n}")));
    }
    let cf = F::from_rat(&ctx.c);
    let kap_up = F::from_rat(ctx.kappa(i + 1)?);
    let kap_down = F::from_rat(ctx.kappa(i)?);
    let mut out = FormalCombination::new();
    for (bv, cf_in) in combo.terms() {
        if bv.side != BetheSide::Ket {
            return Err(Error::Model("this action applies to ket symbols only".into()));
        }
        let index = &bv.index;
        if index.num_levels() != n {
            return Err(Error::Model(format!(
                "index has {} levels, algebra needs {n}",
                index.num_levels()
            )));
        }
        let level_i = index.level(i);
        let up = index.level(i + 1);
        let down = index.level(i - 1);
        for t in level_i.values() {
            let rest = level_i.without(t)?;
            let this = [t.clone()];
            let mut raise = Frac::one();
            raise.mul_value(&kap_up);
            raise.mul_value(&ctx.alpha(i, t)?);
            raise.mul_parts(&set_parts(Kernel::F, 0, &cf, rest.values(), &this));
            raise.div_parts(&set_parts(Kernel::F, 0, &cf, up.values(), &this));
            let mut lower = Frac::one();
            lower.mul_value(&kap_down);
            lower.mul_parts(&set_parts(Kernel::F, 0, &cf, &this, rest.values()));
            lower.div_parts(&set_parts(Kernel::F, 0, &cf, &this, down.values()));
            let coeff = raise.value()?.sub(&lower.value()?).mul(cf_in);
            out.insert_add(FormalBV::ket(index.with_level(i, rest)), coeff);
        }
    }
    Ok(out)
}

/// Action of the transfer matrix `Σ_i T_{i,i}(z)`.
pub fn act_transfer<F: Scalar + KfRatio>(
    ctx: &ModelContext,
    z: &F,
    combo: &FormalCombination<F>,
) -> Result<FormalCombination<F>, Error> {
    let mut out = FormalCombination::new();
    for i in 1..=ctx.algebra.states() {
        out = out.add(&act_single(ctx, i, i, z, combo)?);
    }
    Ok(out)
}

/// The transfer matrix eigenvalue on an on-shell vector with the given
/// index: `Σ_i λ_i(z) f(z, t̄^{i-1}) f(t̄^i, z)`.
pub fn eigenvalue_tau<F: Scalar>(
    ctx: &ModelContext,
    z: &F,
    ts: &BetheIndex<F>,
) -> Result<F, Error> {
    if ctx.algebra.is_graded() {
        return Err(Error::Model("graded algebras use the graded eigenvalue".into()));
    }
    let cf = F::from_rat(&ctx.c);
    let mut total = F::zero();
    for i in 1..=ctx.algebra.states() {
        let mut fr = Frac::one();
        fr.mul_value(&ctx.lambda(i, z)?);
        let below = ts.level(i - 1);
        let here = ts.level(i);
        fr.mul_parts(&set_parts(Kernel::F, 0, &cf, &[z.clone()], below.values()));
        fr.mul_parts(&set_parts(Kernel::F, 0, &cf, here.values(), &[z.clone()]));
        total = total.add(&fr.value()?);
    }
    Ok(total)
}

/// Both sides of the commutator identity between an entry action and a
/// zero mode: the bracket applied to `combo` on the left, and the twist
/// multiples of shifted-entry actions on the right.
pub fn verify_zero_mode_commutator<F: Scalar + KfRatio>(
    ctx: &ModelContext,
    i: usize,
    j: usize,
    ell: usize,
    z: &F,
    combo: &FormalCombination<F>,
) -> Result<(FormalCombination<F>, FormalCombination<F>), Error> {
    let after_zm = act_single(ctx, i, j, z, &act_zero_mode(ctx, ell, combo)?)?;
    let before_zm = act_zero_mode(ctx, ell, &act_single(ctx, i, j, z, combo)?)?;
    let lhs = after_zm.sub(&before_zm);
    let mut rhs = FormalCombination::new();
    if i == ell {
        let kap = F::from_rat(ctx.kappa(i)?);
        rhs = rhs.add(&act_single(ctx, i + 1, j, z, combo)?.scale(&kap));
    }
    if ell + 1 == j {
        let kap = F::from_rat(ctx.kappa(j)?);
        rhs = rhs.sub(&act_single(ctx, i, j - 1, z, combo)?.scale(&kap));
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::draw::draw_generic;
    use crate::exactmath::{rat, rat_int, LimitPoint, Poly};

    fn gl2_ctx(seed: u64) -> ModelContext {
        ModelContext::free(
            AlgebraSpec::non_graded(2).unwrap(),
            rat_int(2),
            vec![rat_int(1), rat_int(3)],
            seed,
        )
        .unwrap()
    }

    fn gl3_ctx(seed: u64) -> ModelContext {
        ModelContext::free(
            AlgebraSpec::non_graded(3).unwrap(),
            rat_int(2),
            vec![rat_int(1), rat_int(3), rat(1, 2)],
            seed,
        )
        .unwrap()
    }

    fn index_from(levels: Vec<Vec<Rat>>) -> BetheIndex<Rat> {
        BetheIndex::new(levels.into_iter().map(|v| ParamSet::new(v).unwrap()).collect())
    }

    #[test]
    fn creation_from_vacuum_is_a_single_term() {
        let ctx = gl2_ctx(7);
        let z = rat_int(5);
        let vac = FormalCombination::ket(BetheIndex::empty(1));
        let got = act_multiple(&ctx, 1, 2, &ParamSet::singleton(z.clone()), &vac).unwrap();
        assert_eq!(got.len(), 1);
        let bv = FormalBV::ket(index_from(vec![vec![z.clone()]]));
        assert_eq!(got.coefficient(&bv), ctx.lambda_last(&z).unwrap());
        let via_single = act_single(&ctx, 1, 2, &z, &vac).unwrap();
        assert_eq!(got, via_single);
    }

    #[test]
    fn corner_entry_populates_every_level_with_one_term() {
        let ctx = gl3_ctx(11);
        let z = rat_int(5);
        let vac = FormalCombination::ket(BetheIndex::empty(2));
        let got = act_single(&ctx, 1, 3, &z, &vac).unwrap();
        assert_eq!(got.len(), 1);
        let bv = FormalBV::ket(index_from(vec![vec![z.clone()], vec![z.clone()]]));
        assert_eq!(got.coefficient(&bv), ctx.lambda_last(&z).unwrap());

        // Acting again on the diagonal index still produces one term: all
        // other partitions cancel or vanish.
        let z2 = rat_int(9);
        let again = act_single(&ctx, 1, 3, &z2, &got).unwrap();
        assert_eq!(again.len(), 1);
        let bv2 = FormalBV::ket(index_from(vec![
            vec![z.clone(), z2.clone()],
            vec![z.clone(), z2.clone()],
        ]));
        let expect = ctx
            .lambda_last(&z)
            .unwrap()
            .mul(&ctx.lambda_last(&z2).unwrap());
        assert_eq!(again.coefficient(&bv2), expect);
    }

    #[test]
    fn single_parameter_action_matches_general_form() {
        let ctx = gl3_ctx(23);
        let pool = draw_generic(23, "pool", 4, &ctx.c, 3, &[]);
        let ts = index_from(vec![vec![pool[0].clone(), pool[1].clone()], vec![pool[2].clone()]]);
        let z = pool[3].clone();
        let combo = FormalCombination::ket(ts);
        for i in 1..=3 {
            for j in 1..=3 {
                let a = act_single(&ctx, i, j, &z, &combo).unwrap();
                let b =
                    act_multiple(&ctx, i, j, &ParamSet::singleton(z.clone()), &combo).unwrap();
                assert_eq!(a, b, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn two_parameter_action_composes_in_either_order() {
        let ctx = gl2_ctx(31);
        let pool = draw_generic(31, "pool", 4, &ctx.c, 4, &[]);
        let ts = index_from(vec![vec![pool[0].clone(), pool[1].clone()]]);
        let combo = FormalCombination::ket(ts);
        let z1 = pool[2].clone();
        let z2 = pool[3].clone();
        let zs = ParamSet::new(vec![z1.clone(), z2.clone()]).unwrap();
        for i in 1..=2 {
            for j in 1..=2 {
                let joint = act_multiple(&ctx, i, j, &zs, &combo).unwrap();
                let seq12 =
                    act_single(&ctx, i, j, &z1, &act_single(&ctx, i, j, &z2, &combo).unwrap())
                        .unwrap();
                let seq21 =
                    act_single(&ctx, i, j, &z2, &act_single(&ctx, i, j, &z1, &combo).unwrap())
                        .unwrap();
                assert_eq!(joint, seq12, "entry ({i},{j})");
                assert_eq!(joint, seq21, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn two_parameter_action_composes_at_higher_rank() {
        let ctx = gl3_ctx(37);
        let pool = draw_generic(37, "pool", 4, &ctx.c, 4, &[]);
        let ts = index_from(vec![vec![pool[0].clone()], vec![pool[1].clone()]]);
        let combo = FormalCombination::ket(ts);
        let z1 = pool[2].clone();
        let z2 = pool[3].clone();
        let zs = ParamSet::new(vec![z1.clone(), z2.clone()]).unwrap();
        for (i, j) in [(1, 3), (3, 1), (2, 2), (1, 2), (3, 2), (2, 3)] {
            let joint = act_multiple(&ctx, i, j, &zs, &combo).unwrap();
            let seq =
                act_single(&ctx, i, j, &z1, &act_single(&ctx, i, j, &z2, &combo).unwrap())
                    .unwrap();
            assert_eq!(joint, seq, "entry ({i},{j})");
        }
    }

    #[test]
    fn zero_mode_on_rank_one() {
        let ctx = gl2_ctx(41);
        let t = rat_int(4);
        let combo = FormalCombination::ket(index_from(vec![vec![t.clone()]]));
        let got = act_zero_mode(&ctx, 1, &combo).unwrap();
        assert_eq!(got.len(), 1);
        let vac = FormalBV::ket(BetheIndex::empty(1));
        let expect = ctx.kappa[1].clone() * ctx.alpha::<Rat>(1, &t).unwrap()
            - ctx.kappa[0].clone();
        assert_eq!(got.coefficient(&vac), expect);
    }

    #[test]
    fn zero_mode_is_the_large_argument_limit() {
        // Explicit model so the action can be evaluated with a formal
        // spectral parameter and expanded at infinity.
        let alg = AlgebraSpec::non_graded(3).unwrap();
        let c = rat_int(2);
        let kappa = vec![rat_int(2), rat_int(3), rat(1, 2)];
        let anchor = Poly::new(vec![rat_int(-7), rat_int(1)]);
        let f1 = Poly::new(vec![rat_int(-7) + c.clone(), rat_int(1)]);
        let alpha1 = UniRat::new(
            f1.scale(&(kappa[0].clone() / kappa[1].clone())),
            anchor.clone(),
        )
        .unwrap();
        let alpha2 = UniRat::constant(kappa[1].clone() / kappa[2].clone());
        // Consistency of the expansion requires λ_{N+1} -> κ_{N+1} at
        // large argument.
        let g1 = Poly::new(vec![rat_int(-9), rat_int(1)]);
        let g2 = Poly::new(vec![rat_int(-9) + c.clone(), rat_int(1)]);
        let lambda_last = UniRat::new(g2.scale(&kappa[2]), g1).unwrap();
        let ctx = ModelContext::new(
            alg,
            c.clone(),
            kappa.clone(),
            AlphaMode::Explicit { alphas: vec![alpha1, alpha2], lambda_last },
            0,
        )
        .unwrap();

        let pool = draw_generic(43, "pool", 3, &c, 4, &[rat_int(7), rat_int(9)]);
        let ts_rat = index_from(vec![vec![pool[0].clone(), pool[1].clone()], vec![pool[2].clone()]]);
        let ts_uni = BetheIndex::new(
            ts_rat
                .levels()
                .iter()
                .map(|l| {
                    ParamSet::new(
                        l.values().iter().map(|v| UniRat::constant(v.clone())).collect(),
                    )
                    .unwrap()
                })
                .collect(),
        );
        let u = UniRat::var();
        let over_c = u.clone().mul(&UniRat::constant(c.recip()));
        for i in 1..=2 {
            let combo = FormalCombination::ket(ts_uni.clone());
            let lowered =
                act_multiple(&ctx, i + 1, i, &ParamSet::singleton(u.clone()), &combo).unwrap();
            let expect = act_zero_mode(&ctx, i, &FormalCombination::ket(ts_rat.clone())).unwrap();
            let mut seen = 0;
            for (bv, coeff) in lowered.terms() {
                let scaled = coeff.mul(&over_c);
                let lim = scaled.limit_at(&LimitPoint::Infinity).unwrap();
                let constant_index: Option<Vec<ParamSet<Rat>>> = bv
                    .index
                    .levels()
                    .iter()
                    .map(|l| {
                        l.values()
                            .iter()
                            .map(|v| v.as_constant())
                            .collect::<Option<Vec<_>>>()
                            .map(|vals| ParamSet::new(vals).unwrap())
                    })
                    .collect();
                match constant_index {
                    Some(levels) => {
                        let key = FormalBV::ket(BetheIndex::new(levels));
                        assert_eq!(lim, expect.coefficient(&key), "level {i}");
                        seen += 1;
                    }
                    // A symbol that retains the formal parameter decays as
                    // a vector, so its coefficient only needs a finite
                    // scaled limit; the coefficient itself is O(1/u).
                    None => {
                        let _ = lim;
                    }
                }
            }
            assert_eq!(seen, expect.len(), "level {i}");
        }
    }

    #[test]
    fn transfer_matrix_has_on_shell_eigenvector() {
        let c = rat_int(2);
        let roots_pool = draw_generic(47, "roots", 2, &c, 3, &[]);
        let roots = index_from(vec![roots_pool.clone()]);
        let ctx = ModelContext::new(
            AlgebraSpec::non_graded(2).unwrap(),
            c.clone(),
            vec![rat_int(1), rat_int(3)],
            AlphaMode::OnShell { roots: roots.clone() },
            47,
        )
        .unwrap();
        let z = draw_generic(48, "z", 1, &c, 3, &roots_pool)[0].clone();
        let combo = FormalCombination::ket(roots.clone());
        let got = act_transfer(&ctx, &z, &combo).unwrap();
        assert_eq!(got.len(), 1, "unwanted terms must cancel");
        let tau = eigenvalue_tau(&ctx, &z, &roots).unwrap();
        assert_eq!(got.coefficient(&FormalBV::ket(roots)), tau);
    }

    #[test]
    fn transfer_matrix_has_on_shell_eigenvector_at_higher_rank() {
        let c = rat_int(2);
        let pool = draw_generic(53, "roots", 2, &c, 3, &[]);
        let roots = index_from(vec![vec![pool[0].clone()], vec![pool[1].clone()]]);
        let ctx = ModelContext::new(
            AlgebraSpec::non_graded(3).unwrap(),
            c.clone(),
            vec![rat_int(1), rat_int(3), rat(1, 2)],
            AlphaMode::OnShell { roots: roots.clone() },
            53,
        )
        .unwrap();
        let z = draw_generic(54, "z", 1, &c, 3, &pool)[0].clone();
        let combo = FormalCombination::ket(roots.clone());
        let got = act_transfer(&ctx, &z, &combo).unwrap();
        assert_eq!(got.len(), 1, "unwanted terms must cancel");
        let tau = eigenvalue_tau(&ctx, &z, &roots).unwrap();
        assert_eq!(got.coefficient(&FormalBV::ket(roots)), tau);
    }

    #[test]
    fn residuals_vanish_exactly_on_shell() {
        let c = rat_int(2);
        let pool = draw_generic(59, "roots", 2, &c, 3, &[]);
        let roots = index_from(vec![vec![pool[0].clone()], vec![pool[1].clone()]]);
        let on = ModelContext::new(
            AlgebraSpec::non_graded(3).unwrap(),
            c.clone(),
            vec![rat_int(1), rat_int(3), rat(1, 2)],
            AlphaMode::OnShell { roots: roots.clone() },
            59,
        )
        .unwrap();
        assert!(bethe_residual(&on, &roots).unwrap().iter().all(|(_, _, r)| r.is_zero()));
        let free = gl3_ctx(59);
        assert!(bethe_residual(&free, &roots).unwrap().iter().any(|(_, _, r)| !r.is_zero()));
    }

    #[test]
    fn zero_mode_commutator_cases() {
        let ctx = gl3_ctx(61);
        let pool = draw_generic(61, "pool", 3, &ctx.c, 4, &[]);
        let ts = index_from(vec![vec![pool[0].clone()], vec![pool[1].clone()]]);
        let combo = FormalCombination::ket(ts);
        let z = pool[2].clone();
        // (i, j, ell) hitting: both deltas, row only, column only, neither.
        for (i, j, ell) in [(1, 2, 1), (1, 3, 1), (3, 2, 1), (1, 2, 2), (2, 2, 2)] {
            let (lhs, rhs) = verify_zero_mode_commutator(&ctx, i, j, ell, &z, &combo).unwrap();
            assert_eq!(lhs, rhs, "case ({i},{j},{ell})");
        }
    }

    #[test]
    fn dual_action_carries_the_same_coefficients() {
        let ctx = gl3_ctx(67);
        let pool = draw_generic(67, "pool", 3, &ctx.c, 4, &[]);
        let ts = index_from(vec![vec![pool[0].clone()], vec![pool[1].clone()]]);
        let zs = ParamSet::singleton(pool[2].clone());
        for (i, j) in [(1, 2), (2, 1), (2, 2), (1, 3)] {
            let ket = act_multiple(&ctx, i, j, &zs, &FormalCombination::ket(ts.clone())).unwrap();
            let bra = act_dual(&ctx, j, i, &zs, &FormalCombination::bra(ts.clone())).unwrap();
            assert_eq!(ket.len(), bra.len());
            for (bv, cf) in ket.terms() {
                let mate = FormalBV::bra(bv.index.clone());
                assert_eq!(bra.coefficient(&mate), *cf, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn side_and_argument_validation() {
        let ctx = gl2_ctx(71);
        let vac_bra = FormalCombination::bra(BetheIndex::empty(1));
        assert!(act_single(&ctx, 1, 2, &rat_int(1), &vac_bra).is_err());
        let vac = FormalCombination::<Rat>::ket(BetheIndex::empty(1));
        assert!(act_multiple(&ctx, 1, 2, &ParamSet::empty(), &vac).is_err());
        assert!(act_multiple(&ctx, 0, 2, &ParamSet::singleton(rat_int(1)), &vac).is_err());
        assert!(act_zero_mode(&ctx, 2, &vac).is_err());
    }
}
