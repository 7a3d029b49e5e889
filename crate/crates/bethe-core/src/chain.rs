//! Brute-force spin-chain oracle: exact dense monodromy matrices of a small
//! twisted inhomogeneous rational chain, explicit Bethe vectors for the
//! families that admit a closed construction (rank one, a single populated
//! level, corner-nested), and component-wise comparison of the formal action
//! engine against matrix truth.
//!
//! The Hilbert space is the `L`-fold tensor power of the fundamental
//! `(m+n)`-dimensional site space. In graded mode every operator embedding
//! carries the Koszul sign `(-1)^{Σ_k [A_k] Σ_{l<k} [v_l]}`, the permutation
//! in the R-matrix is the graded one, and odd entry products are converted
//! to symmetric products by the triangular `h`-normalizer. General-rank
//! off-shell vectors are deliberately out of scope: only the families above
//! are constructible without the full nested induction, and the oracle
//! checks are phrased so every comparison stays inside one such family.

use crate::action::{
    act_multiple, act_zero_mode, AlphaMode, FormalBV, FormalCombination, ModelContext,
};
use crate::error::Error;
use crate::exactmath::{
    kernel_value, signed_c, AlgebraSpec, Kernel, LimitPoint, Poly, Rat, Scalar, UniRat,
};
use crate::partitions::{BetheIndex, ParamSet};
use crate::superaction::{
    graded_act_multiple, graded_act_zero_mode, symmetric_product_normalizer, GammaProfile,
};

/// Default cap on the Hilbert-space dimension `(m+n)^L`.
pub const DIM_CAP: usize = 4096;

/// Dense exact vector over the tensor-product basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactVector<F: Scalar = Rat> {
    entries: Vec<F>,
}

impl<F: Scalar> ExactVector<F> {
    /// The zero vector of the given dimension.
    pub fn zero(dim: usize) -> Self {
        ExactVector {
            entries: vec![F::zero(); dim],
        }
    }

    /// The `k`-th standard basis vector.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = ExactVector::zero(dim);
        v.entries[k] = F::one();
        v
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Component `k`.
    pub fn get(&self, k: usize) -> &F {
        &self.entries[k]
    }

    /// All components in basis order.
    pub fn entries(&self) -> &[F] {
        &self.entries
    }

    /// Component-wise sum.
    ///
    /// # Errors
    /// Fails on dimension mismatch.
    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        same_dim(self.dim(), other.dim())?;
        Ok(ExactVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    /// Component-wise difference.
    ///
    /// # Errors
    /// Fails on dimension mismatch.
    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        same_dim(self.dim(), other.dim())?;
        Ok(ExactVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    /// Scalar multiple.
    pub fn scale(&self, factor: &F) -> Self {
        ExactVector {
            entries: self.entries.iter().map(|a| a.mul(factor)).collect(),
        }
    }

    /// True when every component vanishes.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }
}

/// Exact bilinear pairing `Σ_k bra_k ket_k` in the tensor basis. Bra
/// vectors are built as images of operator strings applied to the dual
/// vacuum, so the pairing itself carries no extra signs.
///
/// # Errors
/// Fails on dimension mismatch.
pub fn inner_product<F: Scalar>(bra: &ExactVector<F>, ket: &ExactVector<F>) -> Result<F, Error> {
    same_dim(bra.dim(), ket.dim())?;
    let mut acc = F::zero();
    for (a, b) in bra.entries.iter().zip(&ket.entries) {
        if !a.is_zero() && !b.is_zero() {
            acc = acc.add(&a.mul(b));
        }
    }
    Ok(acc)
}

/// Dense exact square matrix over the tensor-product basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix<F: Scalar = Rat> {
    dim: usize,
    rows: Vec<Vec<F>>,
}

impl<F: Scalar> ExactMatrix<F> {
    /// The zero matrix.
    pub fn zero(dim: usize) -> Self {
        ExactMatrix {
            dim,
            rows: vec![vec![F::zero(); dim]; dim],
        }
    }

    /// The identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = ExactMatrix::zero(dim);
        for k in 0..dim {
            m.rows[k][k] = F::one();
        }
        m
    }

    /// Dimension (the matrix is square).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> &F {
        &self.rows[row][col]
    }

    /// Sets the entry at `(row, col)`.
    pub fn set(&mut self, row: usize, col: usize, value: F) {
        self.rows[row][col] = value;
    }

    /// Matrix sum.
    ///
    /// # Errors
    /// Fails on dimension mismatch.
    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        same_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for r in 0..self.dim {
            for c in 0..self.dim {
                if !other.rows[r][c].is_zero() {
                    out.rows[r][c] = out.rows[r][c].add(&other.rows[r][c]);
                }
            }
        }
        Ok(out)
    }

    /// Matrix difference.
    ///
    /// # Errors
    /// Fails on dimension mismatch.
    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        same_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for r in 0..self.dim {
            for c in 0..self.dim {
                if !other.rows[r][c].is_zero() {
                    out.rows[r][c] = out.rows[r][c].sub(&other.rows[r][c]);
                }
            }
        }
        Ok(out)
    }

    /// Scalar multiple.
    pub fn scale(&self, factor: &F) -> Self {
        ExactMatrix {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|a| a.mul(factor)).collect())
                .collect(),
        }
    }

    /// Matrix product `self * other`, skipping zero entries.
    ///
    /// # Errors
    /// Fails on dimension mismatch.
    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        same_dim(self.dim, other.dim)?;
        let mut out = Self::zero(self.dim);
        for r in 0..self.dim {
            for s in 0..self.dim {
                let a = &self.rows[r][s];
                if a.is_zero() {
                    continue;
                }
                for c in 0..self.dim {
                    let b = &other.rows[s][c];
                    if !b.is_zero() {
                        out.rows[r][c] = out.rows[r][c].add(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Column action `self * v`.
    ///
    /// # Errors
    /// Fails on dimension mismatch.
    pub fn apply(&self, v: &ExactVector<F>) -> Result<ExactVector<F>, Error> {
        same_dim(self.dim, v.dim())?;
        let mut out = ExactVector::<F>::zero(self.dim);
        for r in 0..self.dim {
            let mut acc = F::zero();
            for (s, a) in self.rows[r].iter().enumerate() {
                if !a.is_zero() && !v.entries[s].is_zero() {
                    acc = acc.add(&a.mul(&v.entries[s]));
                }
            }
            out.entries[r] = acc;
        }
        Ok(out)
    }

    /// Row action `vᵀ * self`, used to push dual vectors through operator
    /// strings.
    ///
    /// # Errors
    /// Fails on dimension mismatch.
    pub fn apply_transposed(&self, v: &ExactVector<F>) -> Result<ExactVector<F>, Error> {
        same_dim(self.dim, v.dim())?;
        let mut out = ExactVector::<F>::zero(self.dim);
        for (r, row) in self.rows.iter().enumerate() {
            if v.entries[r].is_zero() {
                continue;
            }
            for (c, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    out.entries[c] = out.entries[c].add(&v.entries[r].mul(a));
                }
            }
        }
        Ok(out)
    }

    /// True when every entry vanishes.
    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Scalar::is_zero)
    }
}

fn same_dim(a: usize, b: usize) -> Result<(), Error> {
    if a == b {
        Ok(())
    } else {
        Err(Error::Model(format!("dimension mismatch: {a} vs {b}")))
    }
}

/// Tensor factor layout: `slots` copies of the `d`-dimensional state space,
/// the first `aux` of them auxiliary. Basis indices place slot 0 at the most
/// significant digit.
struct TensorSpace {
    slots: usize,
    d: usize,
    dim: usize,
    parity: Vec<u8>,
}

impl TensorSpace {
    fn new(alg: &AlgebraSpec, slots: usize) -> Result<Self, Error> {
        let d = alg.states();
        let mut dim = 1usize;
        for _ in 0..slots {
            dim = dim
                .checked_mul(d)
                .ok_or_else(|| Error::ChainTooLarge("tensor space overflows usize".into()))?;
        }
        let parity = (1..=d).map(|s| alg.parity(s)).collect::<Result<_, _>>()?;
        Ok(TensorSpace {
            slots,
            d,
            dim,
            parity,
        })
    }

    fn stride(&self, slot: usize) -> usize {
        self.d.pow((self.slots - 1 - slot) as u32)
    }

    /// State occupying `slot` in basis index `idx`, 0-based.
    fn state(&self, idx: usize, slot: usize) -> usize {
        (idx / self.stride(slot)) % self.d
    }

    /// Sum of parities of the states strictly left of `slot`.
    fn parity_left(&self, idx: usize, slot: usize) -> u8 {
        let mut acc = 0u8;
        for s in 0..slot {
            acc ^= self.parity[self.state(idx, s)];
        }
        acc
    }

    /// Basis index with the states at two slots exchanged.
    fn swapped(&self, idx: usize, slot_a: usize, slot_b: usize) -> usize {
        let a = self.state(idx, slot_a) as isize;
        let b = self.state(idx, slot_b) as isize;
        let sa = self.stride(slot_a) as isize;
        let sb = self.stride(slot_b) as isize;
        (idx as isize + (b - a) * sa + (a - b) * sb) as usize
    }
}

/// Returns `M + g * P_{a,b} M`: left-multiplication by the graded
/// two-slot exchange `R = 1 + g P`, with the Koszul sign
/// `(-1)^{[a] + ([a]+[b])(π_<(slot_a) + π_<(slot_b))}` on each basis map
/// `(…a…b…) ↦ (…b…a…)`.
fn exchange_step<F: Scalar>(
    m: &ExactMatrix<F>,
    sp: &TensorSpace,
    slot_a: usize,
    slot_b: usize,
    g: &F,
) -> ExactMatrix<F> {
    let mut out = m.clone();
    let neg_g = g.neg();
    for r in 0..sp.dim {
        if m.rows[r].iter().all(Scalar::is_zero) {
            continue;
        }
        let a = sp.state(r, slot_a);
        let b = sp.state(r, slot_b);
        let r2 = sp.swapped(r, slot_a, slot_b);
        let exp = sp.parity[a]
            ^ ((sp.parity[a] ^ sp.parity[b]) & (sp.parity_left(r, slot_a) ^ sp.parity_left(r, slot_b)));
        let w = if exp == 1 { &neg_g } else { g };
        for c in 0..sp.dim {
            let x = &m.rows[r][c];
            if !x.is_zero() {
                out.rows[r2][c] = out.rows[r2][c].add(&w.mul(x));
            }
        }
    }
    out
}

/// Outcome of one oracle comparison: a label, a verdict, and the first
/// differing component when the verdict is negative.
#[derive(Debug, Clone)]
pub struct OracleReport {
    /// Human-readable description of the comparison.
    pub label: String,
    /// True when both sides agreed on every component.
    pub ok: bool,
    /// First differing component, as `component k: lhs .. rhs ..`.
    pub mismatch: Option<String>,
}

fn fmt_params(set: &ParamSet<Rat>) -> String {
    let inner: Vec<String> = set.values().iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

fn compare_vectors(label: String, lhs: &ExactVector, rhs: &ExactVector) -> OracleReport {
    for k in 0..lhs.dim() {
        if lhs.get(k) != rhs.get(k) {
            return OracleReport {
                label,
                ok: false,
                mismatch: Some(format!(
                    "component {k}: lhs {}, rhs {}",
                    lhs.get(k),
                    rhs.get(k)
                )),
            };
        }
    }
    OracleReport {
        label,
        ok: true,
        mismatch: None,
    }
}

/// A small twisted inhomogeneous chain in the fundamental representation:
/// `sites` tensor factors, pairwise distinct inhomogeneities `xi`, a
/// diagonal twist `kappa` (one nonzero entry per basis state), and the
/// kernel constant `c`.
#[derive(Debug, Clone)]
pub struct ChainSpec {
    algebra: AlgebraSpec,
    sites: usize,
    xi: Vec<Rat>,
    kappa: Vec<Rat>,
    c: Rat,
}

impl ChainSpec {
    /// Validates and builds a chain description.
    ///
    /// # Errors
    /// Fails when `xi` has the wrong length or repeats, when `kappa` has the
    /// wrong length or a zero entry, when `c` is zero, or when the Hilbert
    /// space dimension `(m+n)^sites` exceeds [`DIM_CAP`].
    pub fn new(
        algebra: AlgebraSpec,
        sites: usize,
        xi: Vec<Rat>,
        kappa: Vec<Rat>,
        c: Rat,
    ) -> Result<Self, Error> {
        if sites == 0 {
            return Err(Error::Model("need at least one site".into()));
        }
        if xi.len() != sites {
            return Err(Error::Model(format!(
                "need {sites} inhomogeneities, got {}",
                xi.len()
            )));
        }
        for (k, x) in xi.iter().enumerate() {
            if xi[..k].contains(x) {
                return Err(Error::Model(format!("repeated inhomogeneity {x}")));
            }
        }
        if kappa.len() != algebra.states() {
            return Err(Error::Model(format!(
                "twist needs {} entries, got {}",
                algebra.states(),
                kappa.len()
            )));
        }
        if kappa.iter().any(Rat::is_zero) {
            return Err(Error::Model("twist entries must be nonzero".into()));
        }
        if c.is_zero() {
            return Err(Error::Model("c must be nonzero".into()));
        }
        let mut dim = 1usize;
        for _ in 0..sites {
            dim = dim
                .checked_mul(algebra.states())
                .ok_or_else(|| Error::ChainTooLarge("dimension overflows usize".into()))?;
            if dim > DIM_CAP {
                return Err(Error::ChainTooLarge(format!(
                    "{}^{sites} exceeds the cap {DIM_CAP}",
                    algebra.states()
                )));
            }
        }
        Ok(ChainSpec {
            algebra,
            sites,
            xi,
            kappa,
            c,
        })
    }

    /// The algebra gl(m|n).
    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    /// Number of sites.
    pub fn sites(&self) -> usize {
        self.sites
    }

    /// Inhomogeneities, one per site.
    pub fn xi(&self) -> &[Rat] {
        &self.xi
    }

    /// Twist diagonal, one entry per basis state.
    pub fn kappa(&self) -> &[Rat] {
        &self.kappa
    }

    /// Kernel constant.
    pub fn c(&self) -> &Rat {
        &self.c
    }

    /// Hilbert-space dimension `(m+n)^sites`.
    pub fn dim(&self) -> usize {
        self.algebra.states().pow(self.sites as u32)
    }

    /// The reference state: every site in state 1.
    pub fn vacuum(&self) -> ExactVector {
        ExactVector::basis(self.dim(), 0)
    }

    fn space(&self, aux: usize) -> Result<TensorSpace, Error> {
        TensorSpace::new(&self.algebra, aux + self.sites)
    }

    /// The full monodromy matrix on `aux ⊗ H`: the twist times the ordered
    /// product of exchange R-matrices over the sites, last site leftmost.
    ///
    /// # Errors
    /// Reports a pole when the argument collides with an inhomogeneity.
    pub fn monodromy_full<F: Scalar>(&self, u: &F) -> Result<ExactMatrix<F>, Error> {
        let sp = self.space(1)?;
        let mut m = ExactMatrix::identity(sp.dim);
        for k in 1..=self.sites {
            let g = g_of(&self.c, u, &F::from_rat(&self.xi[k - 1]))?;
            m = exchange_step(&m, &sp, 0, k, &g);
        }
        // Twist: left multiplication by the diagonal on the auxiliary slot.
        for r in 0..sp.dim {
            let kap = F::from_rat(&self.kappa[sp.state(r, 0)]);
            for c in 0..sp.dim {
                if !m.rows[r][c].is_zero() {
                    m.rows[r][c] = m.rows[r][c].mul(&kap);
                }
            }
        }
        Ok(m)
    }

    /// All operator blocks `T_{i,j}(u)` at once, indexed `[i-1][j-1]`.
    /// Each block is the auxiliary `(i,j)` submatrix times the sign
    /// `(-1)^{([i]+[j])[j]}` that converts a graded tensor coefficient into
    /// the matrix of the operator on `H`.
    ///
    /// # Errors
    /// Reports a pole when the argument collides with an inhomogeneity.
    pub fn monodromy_entries<F: Scalar>(&self, u: &F) -> Result<Vec<Vec<ExactMatrix<F>>>, Error> {
        let full = self.monodromy_full(u)?;
        let d = self.algebra.states();
        let hd = self.dim();
        let mut grid = Vec::with_capacity(d);
        for i in 1..=d {
            let pi = self.algebra.parity(i)?;
            let mut row = Vec::with_capacity(d);
            for j in 1..=d {
                let pj = self.algebra.parity(j)?;
                let flip = ((pi ^ pj) & pj) == 1;
                let mut block = ExactMatrix::zero(hd);
                for r in 0..hd {
                    for c in 0..hd {
                        let v = full.get((i - 1) * hd + r, (j - 1) * hd + c);
                        if !v.is_zero() {
                            block.set(r, c, if flip { v.neg() } else { v.clone() });
                        }
                    }
                }
                row.push(block);
            }
            grid.push(row);
        }
        Ok(grid)
    }

    /// The operator matrix of one monodromy entry `T_{i,j}(u)` on `H`.
    ///
    /// # Errors
    /// Fails on out-of-range indices or an argument at an inhomogeneity.
    pub fn monodromy_entry<F: Scalar>(
        &self,
        i: usize,
        j: usize,
        u: &F,
    ) -> Result<ExactMatrix<F>, Error> {
        let d = self.algebra.states();
        if i < 1 || i > d || j < 1 || j > d {
            return Err(Error::Index(format!("entry ({i},{j}) outside 1..={d}")));
        }
        let mut grid = self.monodromy_entries(u)?;
        Ok(grid.swap_remove(i - 1).swap_remove(j - 1))
    }

    /// Vacuum eigenvalue `λ_i` as an explicit rational function of the
    /// argument: `κ_1 ∏_k f_[1](u, ξ_k)` for `i = 1` (the signed constant
    /// accounts for an odd first state), the constant `κ_i` otherwise.
    ///
    /// # Errors
    /// Fails on an out-of-range index.
    pub fn vacuum_lambda(&self, i: usize) -> Result<UniRat, Error> {
        let d = self.algebra.states();
        if i < 1 || i > d {
            return Err(Error::Index(format!("state {i} outside 1..={d}")));
        }
        if i > 1 {
            return Ok(UniRat::constant(self.kappa[i - 1].clone()));
        }
        let cp = signed_c(&self.c, self.algebra.parity(1)?);
        let mut num = Poly::constant(self.kappa[0].clone());
        let mut den = Poly::one();
        for x in &self.xi {
            num = num.mul(&Poly::new(vec![&cp - x, Rat::one()]));
            den = den.mul(&Poly::new(vec![-x, Rat::one()]));
        }
        UniRat::new(num, den)
    }

    /// A model context whose functional ratios are exactly this chain's
    /// `α_s = λ_s / λ_{s+1}`, so formal-engine coefficients and matrix
    /// computations refer to the same model.
    ///
    /// # Errors
    /// Propagates context validation failures.
    pub fn model_context(&self, seed: u64) -> Result<ModelContext, Error> {
        let nlev = self.algebra.levels();
        let mut alphas = Vec::with_capacity(nlev);
        for s in 1..=nlev {
            let hi = self.vacuum_lambda(s)?;
            let lo = self.vacuum_lambda(s + 1)?;
            alphas.push(hi.div(&lo)?);
        }
        let lambda_last = self.vacuum_lambda(self.algebra.states())?;
        ModelContext::new(
            self.algebra,
            self.c.clone(),
            self.kappa.clone(),
            AlphaMode::Explicit { alphas, lambda_last },
            seed,
        )
    }

    /// Applies the symmetric product `𝕋_{i,j}(z̄)` to a vector: the ordered
    /// entry product over ascending labels, rightmost factor first, times
    /// the odd-entry `h`-normalizer.
    ///
    /// # Errors
    /// Propagates pole and dimension failures.
    pub fn apply_symmetric_entry(
        &self,
        i: usize,
        j: usize,
        zs: &ParamSet<Rat>,
        v: &ExactVector,
    ) -> Result<ExactVector, Error> {
        let mut out = v.clone();
        for z in zs.values().iter().rev() {
            out = self.monodromy_entry(i, j, z)?.apply(&out)?;
        }
        let norm = symmetric_product_normalizer(&self.algebra, i, j, &self.c, zs)?;
        Ok(out.scale(&norm))
    }

    /// The transfer matrix `Σ_i T_{i,i}(z)` as an operator on `H`.
    ///
    /// # Errors
    /// Reports a pole when `z` collides with an inhomogeneity.
    pub fn transfer_matrix(&self, z: &Rat) -> Result<ExactMatrix, Error> {
        let grid = self.monodromy_entries(z)?;
        let mut out = ExactMatrix::zero(self.dim());
        for (i, row) in grid.into_iter().enumerate() {
            for (j, block) in row.into_iter().enumerate() {
                if i == j {
                    out = out.add(&block)?;
                }
            }
        }
        Ok(out)
    }

    /// The zero mode `T_{i,j}[0]`: the leading large-argument coefficient
    /// of `(u/c)(T_{i,j}(u) - δ_{ij} κ_i)`, extracted entrywise through the
    /// symbolic argument.
    ///
    /// # Errors
    /// Fails on out-of-range indices; a divergence would indicate a
    /// malformed monodromy and is propagated.
    pub fn zero_mode_matrix(&self, i: usize, j: usize) -> Result<ExactMatrix, Error> {
        let u = UniRat::var();
        let entry = self.monodromy_entry::<UniRat>(i, j, &u)?;
        let over_c = UniRat::new(Poly::var(), Poly::constant(self.c.clone()))?;
        let kap = UniRat::constant(self.kappa[i - 1].clone());
        let hd = self.dim();
        let mut out = ExactMatrix::zero(hd);
        for r in 0..hd {
            for c in 0..hd {
                let mut e = entry.get(r, c).clone();
                if i == j && r == c {
                    e = e.sub(&kap);
                }
                if e.is_zero() {
                    continue;
                }
                out.set(r, c, over_c.mul(&e).limit_at(&LimitPoint::Infinity)?);
            }
        }
        Ok(out)
    }

    /// Residual of the exchange relation on two auxiliary copies:
    /// `R_{12}(u,v) T_1(u) T_2(v) - T_2(v) T_1(u) R_{12}(u,v)` as a matrix
    /// on `aux ⊗ aux ⊗ H`. Zero exactly when the defining commutation
    /// relations hold.
    ///
    /// # Errors
    /// Reports a pole at `u = v` or at an inhomogeneity collision.
    pub fn rtt_residual(&self, u: &Rat, v: &Rat) -> Result<ExactMatrix, Error> {
        let sp = self.space(2)?;
        let site_slot = |k: usize| k + 1;

        let mut t1 = ExactMatrix::identity(sp.dim);
        for k in 1..=self.sites {
            let g = g_of(&self.c, u, &self.xi[k - 1])?;
            t1 = exchange_step(&t1, &sp, 0, site_slot(k), &g);
        }
        scale_aux_rows(&mut t1, &sp, 0, &self.kappa);

        let mut t2 = ExactMatrix::identity(sp.dim);
        for k in 1..=self.sites {
            let g = g_of(&self.c, v, &self.xi[k - 1])?;
            t2 = exchange_step(&t2, &sp, 1, site_slot(k), &g);
        }
        scale_aux_rows(&mut t2, &sp, 1, &self.kappa);

        let g12 = g_of(&self.c, u, v)?;
        let r12 = exchange_step(&ExactMatrix::identity(sp.dim), &sp, 0, 1, &g12);

        let lhs = r12.mul(&t1)?.mul(&t2)?;
        let rhs = t2.mul(&t1)?.mul(&r12)?;
        lhs.sub(&rhs)
    }

    /// Explicit rank-one Bethe vector `𝕋_{12}(t̄)|0⟩ / λ_2(t̄)` for a chain
    /// with a single Bethe level. For an odd raising entry the symmetric
    /// product supplies the triangular `h`-normalizer, which reproduces the
    /// recursive corner construction element by element.
    ///
    /// # Errors
    /// Fails off rank one or on a pole.
    pub fn explicit_bv_rank1(&self, ts: &ParamSet<Rat>) -> Result<ExactVector, Error> {
        if self.algebra.levels() != 1 {
            return Err(Error::Model(
                "explicit rank-one vectors need a single Bethe level".into(),
            ));
        }
        let raw = self.apply_symmetric_entry(1, 2, ts, &self.vacuum())?;
        let lam2 = self.vacuum_lambda(2)?;
        let mut norm = Rat::one();
        for t in ts.values() {
            norm *= lam2.eval(t)?;
        }
        if norm.is_zero() {
            return Err(Error::pole("vacuum eigenvalue vanished"));
        }
        Ok(raw.scale(&norm.recip()))
    }

    /// Explicit dual rank-one vector `⟨0| T_{21}(x̄) / λ_2(x̄)` as a
    /// coordinate row, for a non-graded rank-one chain.
    ///
    /// # Errors
    /// Fails off non-graded rank one or on a pole.
    pub fn dual_bra_rank1(&self, xs: &ParamSet<Rat>) -> Result<ExactVector, Error> {
        if self.algebra.levels() != 1 || self.algebra.is_graded() {
            return Err(Error::Model(
                "explicit dual vectors are built for the non-graded rank-one chain".into(),
            ));
        }
        let mut row = self.vacuum();
        for x in xs.values() {
            row = self.monodromy_entry(2, 1, x)?.apply_transposed(&row)?;
        }
        let lam2 = self.vacuum_lambda(2)?;
        let mut norm = Rat::one();
        for x in xs.values() {
            norm *= lam2.eval(x)?;
        }
        if norm.is_zero() {
            return Err(Error::pole("vacuum eigenvalue vanished"));
        }
        Ok(row.scale(&norm.recip()))
    }

    /// Explicit single-level vector: `𝕋_{i,i+1}(t̄)|0⟩` divided by the
    /// coefficient that the formal multiple action predicts for the forced
    /// partition, so the vector matches the formal symbol with only level
    /// `i` populated.
    ///
    /// # Errors
    /// Fails when the forced-partition coefficient vanishes or the formal
    /// action leaves the single-level family.
    pub fn explicit_bv_single_level(
        &self,
        i: usize,
        ts: &ParamSet<Rat>,
    ) -> Result<ExactVector, Error> {
        let nlev = self.algebra.levels();
        if i < 1 || i > nlev {
            return Err(Error::Index(format!("level {i} outside 1..={nlev}")));
        }
        let raw = self.apply_symmetric_entry(i, i + 1, ts, &self.vacuum())?;
        if ts.is_empty() {
            return Ok(raw);
        }
        let ctx = self.model_context(0)?;
        let acted = self.formal_entry_action(&ctx, i, i + 1, ts, &BetheIndex::empty(nlev))?;
        let target = FormalBV::ket(BetheIndex::empty(nlev).with_level(i, ts.clone()));
        let coeff = acted.coefficient(&target);
        if coeff.is_zero() {
            return Err(Error::Model(
                "forced-partition coefficient vanished; cannot normalize".into(),
            ));
        }
        if acted.len() != 1 {
            return Err(Error::Model(
                "vacuum action left the single-level family".into(),
            ));
        }
        Ok(raw.scale(&coeff.recip()))
    }

    /// Explicit corner-nested vector for the index whose every level equals
    /// `ws`: built one element at a time through the corner entry, dividing
    /// by `λ_{m+n}(z)` and, in graded mode, by the level-`m` `h`-product the
    /// corner action prescribes.
    ///
    /// # Errors
    /// Fails on a pole.
    pub fn explicit_bv_corner(&self, ws: &ParamSet<Rat>) -> Result<ExactVector, Error> {
        let top = self.algebra.states();
        let lam = self.vacuum_lambda(top)?;
        let mut v = self.vacuum();
        let mut cur: ParamSet<Rat> = ParamSet::empty();
        for z in ws.values() {
            v = self.monodromy_entry(1, top, z)?.apply(&v)?;
            let mut denom = lam.eval(z)?;
            if self.algebra.is_graded() {
                for t in cur.values() {
                    denom *= kernel_value(Kernel::H, 0, &self.c, t, z)?;
                }
            }
            if denom.is_zero() {
                return Err(Error::pole("corner normalization vanished"));
            }
            v = v.scale(&denom.recip());
            cur = cur.union(&ParamSet::singleton(z.clone()))?;
        }
        Ok(v)
    }

    /// A twist that puts a single rank-one root exactly on shell: copies
    /// this chain's twist but replaces `κ_2` by `κ_1 ∏_k f_[1](t, ξ_k)`, so
    /// the one-root Bethe equation `α_1(t) = 1` holds identically.
    ///
    /// # Errors
    /// Fails off rank one or when the solved entry vanishes.
    pub fn rank1_on_shell_kappa(&self, t: &Rat) -> Result<Vec<Rat>, Error> {
        if self.algebra.levels() != 1 {
            return Err(Error::Model("on-shell twist solving is rank-one".into()));
        }
        let p1 = self.algebra.parity(1)?;
        let mut k2 = self.kappa[0].clone();
        for x in &self.xi {
            k2 *= kernel_value(Kernel::F, p1, &self.c, t, x)?;
        }
        if k2.is_zero() {
            return Err(Error::Model("solved twist entry vanished".into()));
        }
        let mut kappa = self.kappa.clone();
        kappa[1] = k2;
        Ok(kappa)
    }

    fn formal_entry_action(
        &self,
        ctx: &ModelContext,
        i: usize,
        j: usize,
        zs: &ParamSet<Rat>,
        index: &BetheIndex<Rat>,
    ) -> Result<FormalCombination<Rat>, Error> {
        let combo = FormalCombination::ket(index.clone());
        if self.algebra.is_graded() {
            graded_act_multiple(ctx, GammaProfile::default(), i, j, zs, &combo)
        } else {
            act_multiple(ctx, i, j, zs, &combo)
        }
    }

    /// Compares the formal action of `T_{i,j}(z̄)` on a rank-one vector
    /// against matrix truth: the left side applies entry matrices to the
    /// explicit vector, the right side re-expands the formal combination
    /// over explicit vectors.
    ///
    /// # Errors
    /// Propagates construction failures; a value disagreement is reported
    /// in the returned [`OracleReport`], not as an error.
    pub fn oracle_check_action(
        &self,
        i: usize,
        j: usize,
        zs: &ParamSet<Rat>,
        ts: &ParamSet<Rat>,
    ) -> Result<OracleReport, Error> {
        if self.algebra.levels() != 1 {
            return Err(Error::Model(
                "the action oracle compares on rank-one chains".into(),
            ));
        }
        let label = format!("T[{i},{j}]({}) on rank-one {}", fmt_params(zs), fmt_params(ts));
        let ctx = self.model_context(0)?;
        let lhs = self.apply_symmetric_entry(i, j, zs, &self.explicit_bv_rank1(ts)?)?;
        let index = BetheIndex::new(vec![ts.clone()]);
        let formal = self.formal_entry_action(&ctx, i, j, zs, &index)?;
        let mut rhs = ExactVector::zero(self.dim());
        for (bv, co) in formal.terms() {
            let vec = self.explicit_bv_rank1(&bv.index.level(1))?;
            rhs = rhs.add(&vec.scale(co))?;
        }
        Ok(compare_vectors(label, &lhs, &rhs))
    }

    /// Compares the formal corner action `T_{1,m+n}(z̄)` on a corner-nested
    /// vector against matrix truth. The formal output must stay in the
    /// corner-nested family (all levels equal); any stray index is reported
    /// as a mismatch.
    ///
    /// # Errors
    /// Propagates construction failures.
    pub fn oracle_check_corner(
        &self,
        zs: &ParamSet<Rat>,
        ws: &ParamSet<Rat>,
    ) -> Result<OracleReport, Error> {
        let top = self.algebra.states();
        let nlev = self.algebra.levels();
        let label = format!("corner T[1,{top}]({}) on nested {}", fmt_params(zs), fmt_params(ws));
        let ctx = self.model_context(0)?;
        let lhs = self.apply_symmetric_entry(1, top, zs, &self.explicit_bv_corner(ws)?)?;
        let nested = BetheIndex::new(vec![ws.clone(); nlev]);
        let formal = self.formal_entry_action(&ctx, 1, top, zs, &nested)?;
        let mut rhs = ExactVector::zero(self.dim());
        for (bv, co) in formal.terms() {
            let first = bv.index.level(1);
            if (2..=nlev).any(|s| bv.index.level(s) != first) {
                return Ok(OracleReport {
                    label,
                    ok: false,
                    mismatch: Some(format!("stray index {:?}", bv.index)),
                });
            }
            rhs = rhs.add(&self.explicit_bv_corner(&first)?.scale(co))?;
        }
        Ok(compare_vectors(label, &lhs, &rhs))
    }

    /// Compares the zero mode `T_{ℓ+1,ℓ}[0]` on an explicit single-level
    /// vector (level `i` populated by `ts`) against the formal zero-mode
    /// action re-expanded over single-level vectors. For `ℓ ≠ i` the formal
    /// sum is empty and the matrix side must annihilate the vector.
    ///
    /// # Errors
    /// Propagates construction failures.
    pub fn oracle_check_zero_mode(
        &self,
        ell: usize,
        i: usize,
        ts: &ParamSet<Rat>,
    ) -> Result<OracleReport, Error> {
        let nlev = self.algebra.levels();
        let label = format!("zero mode T[{},{ell}][0] on single-level {i}: {}", ell + 1, fmt_params(ts));
        let v = self.explicit_bv_single_level(i, ts)?;
        let lhs = self.zero_mode_matrix(ell + 1, ell)?.apply(&v)?;
        let ctx = self.model_context(0)?;
        let index = BetheIndex::empty(nlev).with_level(i, ts.clone());
        let combo = FormalCombination::ket(index);
        let formal = if self.algebra.is_graded() {
            graded_act_zero_mode(&ctx, ell, &combo)?
        } else {
            act_zero_mode(&ctx, ell, &combo)?
        };
        let mut rhs = ExactVector::zero(self.dim());
        for (bv, co) in formal.terms() {
            for s in 1..=nlev {
                if s != i && !bv.index.level(s).is_empty() {
                    return Ok(OracleReport {
                        label,
                        ok: false,
                        mismatch: Some(format!("stray index {:?}", bv.index)),
                    });
                }
            }
            let vec = self.explicit_bv_single_level(i, &bv.index.level(i))?;
            rhs = rhs.add(&vec.scale(co))?;
        }
        Ok(compare_vectors(label, &lhs, &rhs))
    }
}

fn g_of<F: Scalar>(c: &Rat, u: &F, v: &F) -> Result<F, Error> {
    let diff = u.sub(v);
    if diff.is_zero() {
        return Err(Error::pole(format!("coincident arguments {u} and {v}")));
    }
    F::from_rat(c).div(&diff)
}

fn scale_aux_rows<F: Scalar>(m: &mut ExactMatrix<F>, sp: &TensorSpace, slot: usize, kappa: &[Rat]) {
    for r in 0..sp.dim {
        let kap = F::from_rat(&kappa[sp.state(r, slot)]);
        for c in 0..sp.dim {
            if !m.rows[r][c].is_zero() {
                m.rows[r][c] = m.rows[r][c].mul(&kap);
            }
        }
    }
}
