//! The verification suites behind the `verify` subcommand. Every check
//! states one identity of the library, draws its parameters
//! deterministically from the configured seed, and compares both sides at
//! exact rational equality.

use bethe_core::action::{
    act_multiple, act_single, act_transfer, act_zero_mode, eigenvalue_tau,
    verify_zero_mode_commutator, AlphaMode, FormalBV, FormalCombination, ModelContext,
};
use bethe_core::draw::{draw_generic, DetStream};
use bethe_core::exactmath::{
    delta_product, delta_product_primed, kernel_value, set_parts, set_product, signed_c, Kernel,
    LimitPoint, UniRat,
};
use bethe_core::izergin::{
    identity_izp, identity_lm1, izergin, izergin_over_f, izergin_over_f_reversed, kf_ratio_closed,
    IzerginArgs,
};
use bethe_core::superaction::{graded_act_multiple, graded_act_zero_mode};
use bethe_core::{
    check_beta_dressed_sum, check_generalized_model_reduction, check_hc_mu_symmetry,
    check_sp_symmetry, inner_product, scalar_product_sum, AlgebraSpec, BetheIndex, ChainSpec,
    GammaProfile, HCSelector, HcEngine, ParamSet, Rat, Scalar,
};

use crate::report::{run_suite, Check, CheckResult, SuiteReport};

pub const SUITE_NAMES: [&str; 6] =
    ["kernels", "izergin", "action", "graded", "scalar", "chain"];

/// Shared configuration for one `verify` run.
#[derive(Clone)]
pub struct SuiteConfig {
    pub c: Rat,
    pub seed: u64,
}

pub fn build_suite(name: &str, cfg: &SuiteConfig) -> Option<SuiteReport> {
    let checks = match name {
        "kernels" => kernel_checks(cfg),
        "izergin" => izergin_checks(cfg),
        "action" => action_checks(cfg),
        "graded" => graded_checks(cfg),
        "scalar" => scalar_checks(cfg),
        "chain" => chain_checks(cfg),
        _ => return None,
    };
    Some(run_suite(name, checks))
}

fn fmt_set(s: &ParamSet<Rat>) -> String {
    let inner: Vec<String> = s.values().iter().map(|v| v.to_string()).collect();
    format!("[{}]", inner.join(","))
}

fn fmt_index(ix: &BetheIndex<Rat>) -> String {
    let inner: Vec<String> = ix.levels().iter().map(fmt_set).collect();
    inner.join(";")
}

/// Draws a pair of disjoint indices with the given level cardinalities,
/// generic with respect to `c`-shifts within and across the two indices.
fn draw_pair(
    seed: u64,
    tag: &str,
    c: &Rat,
    sizes: &[usize],
) -> (BetheIndex<Rat>, BetheIndex<Rat>) {
    let total: usize = sizes.iter().sum();
    let pool = draw_generic(seed, tag, 2 * total, c, 4, &[]);
    let mut it = pool.into_iter();
    let mut xs = Vec::new();
    let mut ts = Vec::new();
    for &len in sizes {
        xs.push(ParamSet::new((0..len).map(|_| it.next().unwrap()).collect()).unwrap());
        ts.push(ParamSet::new((0..len).map(|_| it.next().unwrap()).collect()).unwrap());
    }
    (BetheIndex::new(xs), BetheIndex::new(ts))
}

fn nonzero_kappa(seed: u64, tag: &str, count: usize) -> Vec<Rat> {
    let mut stream = DetStream::new(seed, tag);
    (0..count).map(|_| stream.next_nonzero_rat()).collect()
}

// ---------------------------------------------------------------------
// kernels
// ---------------------------------------------------------------------

fn kernel_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let c = cfg.c.clone();
    let pts = draw_generic(cfg.seed, "kernel-pts", 5, &c, 4, &[]);
    let params = format!(
        "c={} pts=[{}]",
        c,
        pts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
    );

    let mut checks = Vec::new();
    {
        let (c, pts) = (c.clone(), pts.clone());
        checks.push(Check::new(
            "kernel-ladder",
            "f(u,v) = 1 + g(u,v) and h(u,v) = f(u,v)/g(u,v) for both parities",
            params.clone(),
            move || {
                for parity in [0u8, 1] {
                    for u in &pts {
                        for v in &pts {
                            if u == v {
                                continue;
                            }
                            let g = kernel_value(Kernel::G, parity, &c, u, v).unwrap();
                            let f = kernel_value(Kernel::F, parity, &c, u, v).unwrap();
                            let h = kernel_value(Kernel::H, parity, &c, u, v).unwrap();
                            if f != Rat::one().add(&g) {
                                return CheckResult::flag(
                                    false,
                                    Some(format!("f != 1+g at ({u},{v}) parity {parity}")),
                                );
                            }
                            if h != f.div(&g).unwrap() {
                                return CheckResult::flag(
                                    false,
                                    Some(format!("h != f/g at ({u},{v}) parity {parity}")),
                                );
                            }
                        }
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let (c, pts) = (c.clone(), pts.clone());
        checks.push(Check::new(
            "signed-constant-parity",
            "odd kernels coincide with even kernels at negated constant",
            params.clone(),
            move || {
                if signed_c(&c, 0) != c || signed_c(&c, 1) != c.neg() {
                    return CheckResult::flag(false, Some("signed constant wrong".into()));
                }
                let neg = c.neg();
                for kernel in [Kernel::G, Kernel::F, Kernel::H] {
                    for u in &pts {
                        for v in &pts {
                            if u == v {
                                continue;
                            }
                            let odd = kernel_value(kernel, 1, &c, u, v).unwrap();
                            let even = kernel_value(kernel, 0, &neg, u, v).unwrap();
                            if odd != even {
                                return CheckResult::flag(
                                    false,
                                    Some(format!("{kernel:?}({u},{v}) parity mismatch")),
                                );
                            }
                        }
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let (c, pts) = (c.clone(), pts.clone());
        checks.push(Check::new(
            "set-product-multiplicativity",
            "set products factor over disjoint unions and match their part form",
            params.clone(),
            move || {
                let us = [pts[0].clone(), pts[1].clone()];
                let us_a = [pts[0].clone()];
                let us_b = [pts[1].clone()];
                let vs = [pts[2].clone(), pts[3].clone(), pts[4].clone()];
                for kernel in [Kernel::G, Kernel::F, Kernel::H] {
                    let whole = set_product(kernel, 0, &c, &us, &vs).unwrap();
                    let part_a = set_product(kernel, 0, &c, &us_a, &vs).unwrap();
                    let part_b = set_product(kernel, 0, &c, &us_b, &vs).unwrap();
                    if whole != part_a.mul(&part_b) {
                        return CheckResult::flag(
                            false,
                            Some(format!("{kernel:?} does not factor")),
                        );
                    }
                    let (num, den) = set_parts(kernel, 0, &c, &us, &vs);
                    if whole != num.div(&den).unwrap() {
                        return CheckResult::flag(
                            false,
                            Some(format!("{kernel:?} parts disagree with product")),
                        );
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let (c, pts) = (c.clone(), pts.clone());
        checks.push(Check::new(
            "triangular-products",
            "triangular kernel products match explicit loops and g is antisymmetric",
            params,
            move || {
                let xs = [pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[3].clone()];
                for kernel in [Kernel::G, Kernel::F, Kernel::H] {
                    let mut plain = Rat::one();
                    let mut primed = Rat::one();
                    for j in 1..xs.len() {
                        for i in 0..j {
                            plain =
                                plain.mul(&kernel_value(kernel, 0, &c, &xs[j], &xs[i]).unwrap());
                            primed =
                                primed.mul(&kernel_value(kernel, 0, &c, &xs[i], &xs[j]).unwrap());
                        }
                    }
                    if delta_product(kernel, 0, &c, &xs).unwrap() != plain {
                        return CheckResult::flag(
                            false,
                            Some(format!("{kernel:?} triangular product off")),
                        );
                    }
                    if delta_product_primed(kernel, 0, &c, &xs).unwrap() != primed {
                        return CheckResult::flag(
                            false,
                            Some(format!("{kernel:?} reversed triangular product off")),
                        );
                    }
                }
                // 6 pairs on 4 points: the antisymmetry sign is (-1)^6 = 1.
                let lhs = delta_product(Kernel::G, 0, &c, &xs).unwrap();
                let rhs = delta_product_primed(Kernel::G, 0, &c, &xs).unwrap();
                if lhs != rhs {
                    return CheckResult::flag(false, Some("g antisymmetry sign off".into()));
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    checks
}

// ---------------------------------------------------------------------
// izergin
// ---------------------------------------------------------------------

fn izergin_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let c = cfg.c.clone();
    let seed = cfg.seed;
    let mut checks = Vec::new();

    {
        let c = c.clone();
        checks.push(Check::new(
            "empty-normalization",
            "the determinant kernel of two empty sets is 1",
            format!("c={c}"),
            move || {
                let args = IzerginArgs {
                    ys: ParamSet::empty(),
                    xs: ParamSet::empty(),
                    parity: 0,
                };
                CheckResult::scalar(izergin(&c, &args).unwrap(), "1")
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "single-point-is-g",
            "the one-point kernel equals g(y,x)",
            format!("c={c} seeds={seed}..{}", seed + 2),
            move || {
                for s in seed..seed + 3 {
                    let pts = draw_generic(s, "iz-single", 2, &c, 2, &[]);
                    let args = IzerginArgs {
                        ys: ParamSet::singleton(pts[0].clone()),
                        xs: ParamSet::singleton(pts[1].clone()),
                        parity: 0,
                    };
                    let k = izergin(&c, &args).unwrap();
                    let g = kernel_value(Kernel::G, 0, &c, &pts[0], &pts[1]).unwrap();
                    if k != g {
                        return CheckResult::flag(false, Some(format!("seed {s}: {k} vs {g}")));
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    for size in 1..=4usize {
        let c = c.clone();
        checks.push(Check::new(
            format!("shift-reflection-size-{size}"),
            "shifting one argument set by -c reflects the kernel up to a sign and an f-product",
            format!("c={c} size={size} seeds={seed}..{}", seed + 2),
            move || {
                for s in seed..seed + 3 {
                    let pts = draw_generic(s, "iz-shift", 2 * size, &c, 4, &[]);
                    let xs = ParamSet::new(pts[..size].to_vec()).unwrap();
                    let ys = ParamSet::new(pts[size..].to_vec()).unwrap();
                    let (lhs, rhs) = identity_izp(&c, &xs, &ys).unwrap();
                    if lhs != rhs {
                        return CheckResult::flag(
                            false,
                            Some(format!("seed {s}: {lhs} vs {rhs}")),
                        );
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    for (m1, m2) in [(1usize, 1usize), (2, 1), (1, 2), (2, 2)] {
        let c = c.clone();
        checks.push(Check::new(
            format!("merge-split-sum-{m1}-{m2}"),
            "the partition sum over two kernels merges into a single shifted kernel",
            format!("c={c} shape=({m1},{m2}) seeds={seed}..{}", seed + 2),
            move || {
                for s in seed..seed + 3 {
                    let pts = draw_generic(s, "iz-merge", 2 * (m1 + m2), &c, 4, &[]);
                    let us = ParamSet::new(pts[..m1].to_vec()).unwrap();
                    let vs = ParamSet::new(pts[m1..m1 + m2].to_vec()).unwrap();
                    let ws = ParamSet::new(pts[m1 + m2..].to_vec()).unwrap();
                    let (lhs, rhs) = identity_lm1(&c, &us, &vs, &ws).unwrap();
                    if lhs != rhs {
                        return CheckResult::flag(
                            false,
                            Some(format!("seed {s}: {lhs} vs {rhs}")),
                        );
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    for size in 1..=3usize {
        let c = c.clone();
        checks.push(Check::new(
            format!("regularized-ratio-size-{size}"),
            "the kernel-over-f ratio at coinciding sets is assignment-independent and matches its closed form",
            format!("c={c} size={size} seeds={seed}..{}", seed + 2),
            move || {
                for s in seed..seed + 3 {
                    let pts = draw_generic(s, "iz-ratio", size + 1, &c, 4, &[]);
                    let xs = ParamSet::new(pts[..size].to_vec()).unwrap();
                    // ys shares all but one entry with xs.
                    let mut yv = pts[..size - 1].to_vec();
                    yv.push(pts[size].clone());
                    let ys = ParamSet::new(yv).unwrap();
                    let a = izergin_over_f(&c, 0, &ys, &xs).unwrap();
                    let b = izergin_over_f_reversed(&c, 0, &ys, &xs).unwrap();
                    let closed = kf_ratio_closed(&c, 0, ys.values(), xs.values()).unwrap();
                    if a != b || a != closed {
                        return CheckResult::flag(
                            false,
                            Some(format!("seed {s}: {a} / {b} / {closed}")),
                        );
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    checks
}

// ---------------------------------------------------------------------
// action
// ---------------------------------------------------------------------

fn action_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let c = cfg.c.clone();
    let seed = cfg.seed;
    let kappa = nonzero_kappa(seed, "action-kappa", 3);
    let pool = draw_generic(seed, "action-pts", 5, &c, 4, &[]);
    let ts = BetheIndex::new(vec![
        ParamSet::singleton(pool[0].clone()),
        ParamSet::singleton(pool[1].clone()),
    ]);
    let params = format!("c={c} seed={seed} t={} z={}", fmt_index(&ts), pool[2]);

    let mut checks = Vec::new();
    {
        let (c, kappa, ts, z) = (c.clone(), kappa.clone(), ts.clone(), pool[2].clone());
        checks.push(Check::new(
            "zero-mode-commutator-grid",
            "the bracket of an entry action with a lowering zero mode equals its twist multiples",
            params.clone(),
            move || {
                let alg = AlgebraSpec::non_graded(3).unwrap();
                let ctx = ModelContext::free(alg, c, kappa, 1).unwrap();
                let combo = FormalCombination::ket(ts);
                for i in 1..=3usize {
                    for j in 1..=3usize {
                        for ell in 1..=2usize {
                            let (lhs, rhs) =
                                verify_zero_mode_commutator(&ctx, i, j, ell, &z, &combo).unwrap();
                            if lhs != rhs {
                                return CheckResult::flag(
                                    false,
                                    Some(format!("entry ({i},{j}), mode {ell}")),
                                );
                            }
                        }
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let (c, kappa, ts) = (c.clone(), kappa.clone(), ts.clone());
        let (za, zb) = (pool[2].clone(), pool[3].clone());
        checks.push(Check::new(
            "pair-action-composition",
            "a two-parameter entry action equals the two single actions composed",
            params.clone(),
            move || {
                let alg = AlgebraSpec::non_graded(3).unwrap();
                let ctx = ModelContext::free(alg, c, kappa, 1).unwrap();
                let combo = FormalCombination::ket(ts);
                let zs = ParamSet::new(vec![za.clone(), zb.clone()]).unwrap();
                for i in 1..=3usize {
                    for j in 1..=3usize {
                        let pair = act_multiple(&ctx, i, j, &zs, &combo).unwrap();
                        let one = act_single(&ctx, i, j, &za, &combo).unwrap();
                        let two = act_single(&ctx, i, j, &zb, &one).unwrap();
                        if pair != two {
                            return CheckResult::flag(
                                false,
                                Some(format!("entry ({i},{j})")),
                            );
                        }
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "zero-mode-large-argument-limit",
            "the scaled lowering action at a formal argument tends to the zero-mode action",
            format!("c={c} seed={seed} chain: 3 states, 2 sites"),
            move || match zero_mode_limit_case(&c, seed) {
                Ok(None) => CheckResult::flag(true, None),
                Ok(Some(detail)) => CheckResult::flag(false, Some(detail)),
                Err(e) => CheckResult::error(e),
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "on-shell-transfer-eigenvector",
            "on shell, the transfer matrix reproduces the vector with the predicted eigenvalue",
            format!("c={c} seed={seed} ranks 1 and 2"),
            move || {
                for (states, sizes) in [(2usize, vec![2usize]), (3, vec![1, 1])] {
                    let alg = AlgebraSpec::non_graded(states).unwrap();
                    let roots_pool = draw_generic(seed, "onshell-roots", sizes.iter().sum(), &c, 3, &[]);
                    let mut it = roots_pool.iter().cloned();
                    let roots = BetheIndex::new(
                        sizes
                            .iter()
                            .map(|&len| {
                                ParamSet::new((0..len).map(|_| it.next().unwrap()).collect())
                                    .unwrap()
                            })
                            .collect(),
                    );
                    let kappa = nonzero_kappa(seed, "onshell-kappa", states);
                    let ctx = ModelContext::new(
                        alg,
                        c.clone(),
                        kappa,
                        AlphaMode::OnShell { roots: roots.clone() },
                        seed,
                    )
                    .unwrap();
                    let z = draw_generic(seed, "onshell-z", 1, &c, 3, &roots_pool)[0].clone();
                    let got = act_transfer(&ctx, &z, &FormalCombination::ket(roots.clone())).unwrap();
                    if got.len() != 1 {
                        return CheckResult::flag(
                            false,
                            Some(format!("rank {}: unwanted terms survive", states - 1)),
                        );
                    }
                    let tau = eigenvalue_tau(&ctx, &z, &roots).unwrap();
                    if got.coefficient(&FormalBV::ket(roots)) != tau {
                        return CheckResult::flag(
                            false,
                            Some(format!("rank {}: eigenvalue off", states - 1)),
                        );
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "on-shell-bracket-cancellation",
            "the paired diagonal contributions at one root cancel once the root is on shell",
            format!("c={c} seed={seed} rank 2"),
            move || match bracket_cancellation_case(&c, seed) {
                Ok(None) => CheckResult::flag(true, None),
                Ok(Some(detail)) => CheckResult::flag(false, Some(detail)),
                Err(e) => CheckResult::error(e),
            },
        ));
    }
    checks
}

/// The scaled limit comparison on a physical two-site chain: every constant
/// index of `(u/c) T_{i+1,i}(u)` applied to a ket must tend, at large `u`,
/// to the zero-mode coefficient of the same index.
fn zero_mode_limit_case(c: &Rat, seed: u64) -> Result<Option<String>, String> {
    let err = |e: bethe_core::Error| e.to_string();
    let alg = AlgebraSpec::non_graded(3).map_err(err)?;
    let xi = draw_generic(seed, "limit-xi", 2, c, 4, &[]);
    let kappa = nonzero_kappa(seed, "limit-kappa", 3);
    let spec = ChainSpec::new(alg, 2, xi.clone(), kappa, c.clone()).map_err(err)?;
    let ctx = spec.model_context(seed).map_err(err)?;
    let pool = draw_generic(seed, "limit-pts", 3, c, 4, &xi);
    let ts_rat = BetheIndex::new(vec![
        ParamSet::new(vec![pool[0].clone(), pool[1].clone()]).map_err(err)?,
        ParamSet::singleton(pool[2].clone()),
    ]);
    let ts_uni = BetheIndex::new(
        ts_rat
            .levels()
            .iter()
            .map(|l| {
                ParamSet::new(l.values().iter().map(|v| UniRat::constant(v.clone())).collect())
                    .unwrap()
            })
            .collect(),
    );
    let u = UniRat::var();
    let over_c = u.mul(&UniRat::constant(c.clone().recip()));
    for i in 1..=2usize {
        let combo = FormalCombination::ket(ts_uni.clone());
        let lowered =
            act_multiple(&ctx, i + 1, i, &ParamSet::singleton(UniRat::var()), &combo).map_err(err)?;
        let expect = act_zero_mode(&ctx, i, &FormalCombination::ket(ts_rat.clone())).map_err(err)?;
        let mut seen = 0usize;
        for (bv, coeff) in lowered.terms() {
            let lim = coeff.mul(&over_c).limit_at(&LimitPoint::Infinity).map_err(err)?;
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
            if let Some(levels) = constant_index {
                let key = FormalBV::ket(BetheIndex::new(levels));
                if lim != expect.coefficient(&key) {
                    return Ok(Some(format!("level {i}: limit misses a zero-mode term")));
                }
                seen += 1;
            }
        }
        if seen != expect.len() {
            return Ok(Some(format!("level {i}: {seen} of {} terms reached", expect.len())));
        }
    }
    Ok(None)
}

/// The isolated cancellation between the two diagonal partitions singling
/// out one root: `α_i(t) f(t̄_ℓ, t)/f(t̄^{i+1}, t) = f(t, t̄_ℓ)/f(t, t̄^{i-1})`
/// must hold exactly when `t` satisfies its Bethe equation.
fn bracket_cancellation_case(c: &Rat, seed: u64) -> Result<Option<String>, String> {
    let err = |e: bethe_core::Error| e.to_string();
    let alg = AlgebraSpec::non_graded(3).map_err(err)?;
    let pool = draw_generic(seed, "bracket-roots", 3, c, 3, &[]);
    let roots = BetheIndex::new(vec![
        ParamSet::new(vec![pool[0].clone(), pool[1].clone()]).map_err(err)?,
        ParamSet::singleton(pool[2].clone()),
    ]);
    let kappa = nonzero_kappa(seed, "bracket-kappa", 3);
    let ctx = ModelContext::new(
        alg,
        c.clone(),
        kappa,
        AlphaMode::OnShell { roots: roots.clone() },
        seed,
    )
    .map_err(err)?;
    for i in 1..=2usize {
        for t in roots.level(i).values() {
            let rest = roots.level(i).without(t).map_err(err)?;
            let above = roots.level(i + 1);
            let below = roots.level(i - 1);
            let alpha = ctx.alpha(i, t).map_err(err)?;
            let lhs = alpha
                .mul(&set_product(Kernel::F, 0, c, rest.values(), &[t.clone()]).map_err(err)?)
                .div(&set_product(Kernel::F, 0, c, above.values(), &[t.clone()]).map_err(err)?)
                .map_err(err)?;
            let rhs = set_product(Kernel::F, 0, c, &[t.clone()], rest.values())
                .map_err(err)?
                .div(&set_product(Kernel::F, 0, c, &[t.clone()], below.values()).map_err(err)?)
                .map_err(err)?;
            if lhs != rhs {
                return Ok(Some(format!("level {i}, root {t}: bracket fails to cancel")));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------
// graded
// ---------------------------------------------------------------------

fn graded_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let c = cfg.c.clone();
    let seed = cfg.seed;
    let mut checks = Vec::new();

    {
        let c = c.clone();
        checks.push(Check::new(
            "even-sector-reduction",
            "with no odd states the graded action reproduces the plain action",
            format!("c={c} seed={seed} 3 states"),
            move || {
                let alg = AlgebraSpec::non_graded(3).unwrap();
                let kappa = nonzero_kappa(seed, "graded-kappa", 3);
                let ctx = ModelContext::free(alg, c.clone(), kappa, seed).unwrap();
                let pool = draw_generic(seed, "graded-even", 4, &c, 4, &[]);
                let ts = BetheIndex::new(vec![
                    ParamSet::singleton(pool[0].clone()),
                    ParamSet::singleton(pool[1].clone()),
                ]);
                let combo = FormalCombination::ket(ts);
                for zs in [
                    ParamSet::singleton(pool[2].clone()),
                    ParamSet::new(vec![pool[2].clone(), pool[3].clone()]).unwrap(),
                ] {
                    for i in 1..=3usize {
                        for j in 1..=3usize {
                            let graded = graded_act_multiple(
                                &ctx,
                                GammaProfile::default(),
                                i,
                                j,
                                &zs,
                                &combo,
                            )
                            .unwrap();
                            let plain = act_multiple(&ctx, i, j, &zs, &combo).unwrap();
                            if graded != plain {
                                return CheckResult::flag(
                                    false,
                                    Some(format!("entry ({i},{j}), {} points", zs.len())),
                                );
                            }
                        }
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "odd-sector-reduction",
            "with only odd states the graded action is the plain action at negated constant",
            format!("c={c} seed={seed} 3 states"),
            move || {
                let odd_alg = AlgebraSpec::new(0, 3).unwrap();
                let even_alg = AlgebraSpec::non_graded(3).unwrap();
                let kappa = nonzero_kappa(seed, "graded-kappa", 3);
                let ctx_odd =
                    ModelContext::free(odd_alg, c.clone(), kappa.clone(), seed).unwrap();
                let ctx_even = ModelContext::free(even_alg, c.neg(), kappa, seed).unwrap();
                let pool = draw_generic(seed, "graded-odd", 4, &c, 4, &[]);
                let ts = BetheIndex::new(vec![
                    ParamSet::new(vec![pool[0].clone(), pool[3].clone()]).unwrap(),
                    ParamSet::singleton(pool[1].clone()),
                ]);
                let combo = FormalCombination::ket(ts);
                let zs = ParamSet::singleton(pool[2].clone());
                for i in 1..=3usize {
                    for j in 1..=3usize {
                        let odd = graded_act_multiple(
                            &ctx_odd,
                            GammaProfile::default(),
                            i,
                            j,
                            &zs,
                            &combo,
                        )
                        .unwrap();
                        let even = act_multiple(&ctx_even, i, j, &zs, &combo).unwrap();
                        if odd != even {
                            return CheckResult::flag(false, Some(format!("entry ({i},{j})")));
                        }
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "graded-zero-mode-reduction",
            "with no odd states the graded zero mode reproduces the plain zero mode",
            format!("c={c} seed={seed} 3 states"),
            move || {
                let alg = AlgebraSpec::non_graded(3).unwrap();
                let kappa = nonzero_kappa(seed, "graded-kappa", 3);
                let ctx = ModelContext::free(alg, c.clone(), kappa, seed).unwrap();
                let pool = draw_generic(seed, "graded-zm", 3, &c, 4, &[]);
                let ts = BetheIndex::new(vec![
                    ParamSet::new(vec![pool[0].clone(), pool[1].clone()]).unwrap(),
                    ParamSet::singleton(pool[2].clone()),
                ]);
                let combo = FormalCombination::ket(ts);
                for i in 1..=2usize {
                    let graded = graded_act_zero_mode(&ctx, i, &combo).unwrap();
                    let plain = act_zero_mode(&ctx, i, &combo).unwrap();
                    if graded != plain {
                        return CheckResult::flag(false, Some(format!("mode {i}")));
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "rank-one-mixed-value",
            "the mixed-parity rank-one highest coefficient is the plain g-product",
            format!("c={c} seed={seed} sizes 1 and 2"),
            move || {
                let alg = AlgebraSpec::new(1, 1).unwrap();
                let engine = HcEngine::new(c.clone()).unwrap();
                for r in [1usize, 2] {
                    let (xs, ts) = draw_pair(seed, "graded-rank1", &c, &[r]);
                    let mut expect = Rat::one();
                    for x in xs.level(1).values() {
                        for t in ts.level(1).values() {
                            expect = expect.mul(&kernel_value(Kernel::G, 0, &c, x, t).unwrap());
                        }
                    }
                    for sel in HCSelector::ALL {
                        let got = engine.evaluate(&alg, sel, &xs, &ts).unwrap();
                        if got != expect {
                            return CheckResult::flag(
                                false,
                                Some(format!("size {r}, {sel}: {got} vs {expect}")),
                            );
                        }
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "purely-odd-flip",
            "the all-odd highest coefficient equals the all-even one at negated constant",
            format!("c={c} seed={seed} 3 states"),
            move || {
                let odd = AlgebraSpec::new(0, 3).unwrap();
                let even = AlgebraSpec::non_graded(3).unwrap();
                let pos = HcEngine::new(c.clone()).unwrap();
                let neg = HcEngine::new(c.neg()).unwrap();
                for (sizes, tag) in [(vec![1usize, 1], "flip-a"), (vec![2, 1], "flip-b")] {
                    let (xs, ts) = draw_pair(seed, tag, &c, &sizes);
                    let reference = neg.evaluate(&even, HCSelector::LastLevel, &xs, &ts).unwrap();
                    for sel in [HCSelector::LastLevel, HCSelector::ShiftedLast] {
                        let got = pos.evaluate(&odd, sel, &xs, &ts).unwrap();
                        if got != reference {
                            return CheckResult::flag(
                                false,
                                Some(format!("sizes {sizes:?}, {sel}")),
                            );
                        }
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "shift-map-reflection",
            "the shift map sends the graded highest coefficient to the parity-flipped algebra",
            format!("c={c} seed={seed} mixed algebras"),
            move || {
                for (m, n, sizes, tag) in [
                    (1usize, 1usize, vec![1usize], "refl-a"),
                    (1, 1, vec![2], "refl-b"),
                    (2, 1, vec![1, 1], "refl-c"),
                    (1, 2, vec![1, 1], "refl-d"),
                ] {
                    let alg = AlgebraSpec::new(m, n).unwrap();
                    let (xs, ts) = draw_pair(seed, tag, &c, &sizes);
                    let report = check_hc_mu_symmetry(&c, &alg, &xs, &ts).unwrap();
                    if !report.passed() {
                        return CheckResult::flag(
                            false,
                            Some(format!("gl({m}|{n}) sizes {sizes:?}")),
                        );
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    checks
}

// ---------------------------------------------------------------------
// scalar
// ---------------------------------------------------------------------

fn scalar_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let c = cfg.c.clone();
    let seed = cfg.seed;
    let mut checks = Vec::new();

    {
        let c = c.clone();
        checks.push(Check::new(
            "expansion-agreement",
            "all four recursive expansions of the highest coefficient agree",
            format!("c={c} seed={seed} rank 2"),
            move || {
                let alg = AlgebraSpec::non_graded(3).unwrap();
                let engine = HcEngine::new(c.clone()).unwrap();
                for (sizes, tag) in [(vec![1usize, 1], "hc-a"), (vec![2, 1], "hc-b"), (vec![1, 2], "hc-c")]
                {
                    let (xs, ts) = draw_pair(seed, tag, &c, &sizes);
                    let reference = engine
                        .evaluate(&alg, HCSelector::FirstLevel, &xs, &ts)
                        .unwrap();
                    for sel in &HCSelector::ALL[1..] {
                        let got = engine.evaluate(&alg, *sel, &xs, &ts).unwrap();
                        if got != reference {
                            return CheckResult::flag(
                                false,
                                Some(format!("sizes {sizes:?}, {sel}: {got} vs {reference}")),
                            );
                        }
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "rank-one-base",
            "the rank-one highest coefficient is the determinant kernel",
            format!("c={c} seed={seed} sizes 1..3"),
            move || {
                let alg = AlgebraSpec::non_graded(2).unwrap();
                let engine = HcEngine::new(c.clone()).unwrap();
                for r in 1..=3usize {
                    let (xs, ts) = draw_pair(seed, "hc-base", &c, &[r]);
                    let got = engine.evaluate(&alg, HCSelector::LastLevel, &xs, &ts).unwrap();
                    let expect = izergin(
                        &c,
                        &IzerginArgs { ys: ts.level(1), xs: xs.level(1), parity: 0 },
                    )
                    .unwrap();
                    if got != expect {
                        return CheckResult::flag(
                            false,
                            Some(format!("size {r}: {got} vs {expect}")),
                        );
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "empty-normalization",
            "empty indices give highest coefficient and scalar product 1",
            format!("c={c}"),
            move || {
                let engine = HcEngine::new(c.clone()).unwrap();
                for states in 2..=4usize {
                    let alg = AlgebraSpec::non_graded(states).unwrap();
                    let empty = BetheIndex::<Rat>::empty(states - 1);
                    for sel in HCSelector::ALL {
                        let got = engine.evaluate(&alg, sel, &empty, &empty).unwrap();
                        if got != Rat::one() {
                            return CheckResult::flag(
                                false,
                                Some(format!("{states} states, {sel}")),
                            );
                        }
                    }
                    let kappa = nonzero_kappa(seed, "empty-kappa", states);
                    let ctx = ModelContext::free(alg, c.clone(), kappa, seed).unwrap();
                    let s = scalar_product_sum(&ctx, &empty, &empty).unwrap();
                    if s != Rat::one() {
                        return CheckResult::flag(
                            false,
                            Some(format!("{states} states: scalar product {s}")),
                        );
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "shift-map-symmetry",
            "the highest coefficient is invariant under the shift map",
            format!("c={c} seed={seed} rank 2"),
            move || {
                let alg = AlgebraSpec::non_graded(3).unwrap();
                for (sizes, tag) in [(vec![1usize, 1], "mu-a"), (vec![1, 2], "mu-b")] {
                    let (xs, ts) = draw_pair(seed, tag, &c, &sizes);
                    let report = check_hc_mu_symmetry(&c, &alg, &xs, &ts).unwrap();
                    if !report.passed() {
                        return CheckResult::flag(false, Some(format!("sizes {sizes:?}")));
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "scalar-product-symmetry",
            "the scalar product is symmetric in its two indices",
            format!("c={c} seed={seed} ranks 1 and 2"),
            move || {
                for (states, sizes, tag) in
                    [(2usize, vec![2usize], "sp-a"), (3, vec![1, 1], "sp-b")]
                {
                    let alg = AlgebraSpec::non_graded(states).unwrap();
                    let kappa = nonzero_kappa(seed, "sp-kappa", states);
                    let ctx = ModelContext::free(alg, c.clone(), kappa, seed).unwrap();
                    let (xs, ts) = draw_pair(seed, tag, &c, &sizes);
                    let report = check_sp_symmetry(&ctx, &xs, &ts).unwrap();
                    if !report.passed() {
                        return CheckResult::flag(
                            false,
                            Some(format!("{states} states sizes {sizes:?}")),
                        );
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "generalized-model-reduction",
            "when the ratio vanishes on one index the sum collapses and matches the pairing route",
            format!("c={c} seed={seed} rank 2"),
            move || {
                let (xs, ts) = draw_pair(seed, "gen-red", &c, &[1, 1]);
                let reports = check_generalized_model_reduction(&c, &xs, &ts, seed).unwrap();
                for report in &reports {
                    if !report.passed() {
                        return CheckResult::flag(false, Some(format!("{report}")));
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "beta-dressed-sum",
            "renormalized vectors obey the dressed sum formula",
            format!("c={c} seed={seed} rank 2"),
            move || {
                let alg = AlgebraSpec::non_graded(3).unwrap();
                let kappa = nonzero_kappa(seed, "beta-kappa", 3);
                let ctx = ModelContext::free(alg, c.clone(), kappa, seed).unwrap();
                let (xs, ts) = draw_pair(seed, "beta-sum", &c, &[1, 1]);
                let report = check_beta_dressed_sum(&ctx, &xs, &ts).unwrap();
                if !report.passed() {
                    return CheckResult::flag(false, Some(format!("{report}")));
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    checks
}

// ---------------------------------------------------------------------
// chain
// ---------------------------------------------------------------------

fn chain_spec(m: usize, n: usize, sites: usize, c: &Rat, seed: u64) -> ChainSpec {
    let alg = AlgebraSpec::new(m, n).unwrap();
    let xi = draw_generic(seed, "chain-xi", sites, c, 4, &[]);
    let kappa = nonzero_kappa(seed, "chain-kappa", m + n);
    ChainSpec::new(alg, sites, xi, kappa, c.clone()).unwrap()
}

fn chain_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let c = cfg.c.clone();
    let seed = cfg.seed;
    let mut checks = Vec::new();

    {
        let c = c.clone();
        checks.push(Check::new(
            "exchange-relation",
            "the monodromy matrix satisfies the quadratic exchange relation",
            format!("c={c} seed={seed} 2 sites, plain and mixed parity"),
            move || {
                for (m, n) in [(2usize, 0usize), (1, 1)] {
                    let spec = chain_spec(m, n, 2, &c, seed);
                    let uv = draw_generic(seed, "rtt-uv", 2, &c, 4, spec.xi());
                    let residual = spec.rtt_residual(&uv[0], &uv[1]).unwrap();
                    if !residual.is_zero() {
                        return CheckResult::flag(
                            false,
                            Some(format!("gl({m}|{n}): nonzero residual")),
                        );
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "vacuum-triangularity",
            "lowering entries annihilate the vacuum and diagonal entries scale it",
            format!("c={c} seed={seed} 2 sites, plain and graded"),
            move || {
                for (m, n) in [(2usize, 0usize), (2, 1)] {
                    let spec = chain_spec(m, n, 2, &c, seed);
                    let states = m + n;
                    let u = draw_generic(seed, "vac-u", 1, &c, 4, spec.xi())[0].clone();
                    let vac = spec.vacuum();
                    for i in 1..=states {
                        for j in 1..=states {
                            let entry = spec.monodromy_entry(i, j, &u).unwrap();
                            let image = entry.apply(&vac).unwrap();
                            if i > j && !image.is_zero() {
                                return CheckResult::flag(
                                    false,
                                    Some(format!("gl({m}|{n}): entry ({i},{j}) does not annihilate")),
                                );
                            }
                            if i == j {
                                let lam = spec.vacuum_lambda(i).unwrap();
                                let value = Rat::apply_ratfunc(&lam, &u).unwrap();
                                if image != vac.scale(&value) {
                                    return CheckResult::flag(
                                        false,
                                        Some(format!("gl({m}|{n}): diagonal {i} eigenvalue off")),
                                    );
                                }
                            }
                        }
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "rank-one-action-grid",
            "entry actions on explicit rank-one vectors match the formal engine",
            format!("c={c} seed={seed} 2 sites, plain and mixed parity"),
            move || {
                for (m, n) in [(2usize, 0usize), (1, 1)] {
                    let spec = chain_spec(m, n, 2, &c, seed);
                    let pool = draw_generic(seed, "grid-pts", 2, &c, 4, spec.xi());
                    let ts = ParamSet::singleton(pool[0].clone());
                    let zs = ParamSet::singleton(pool[1].clone());
                    for i in 1..=2usize {
                        for j in 1..=2usize {
                            let report = spec.oracle_check_action(i, j, &zs, &ts).unwrap();
                            if !report.ok {
                                return CheckResult::flag(
                                    false,
                                    Some(format!(
                                        "gl({m}|{n}): {}",
                                        report.mismatch.unwrap_or_default()
                                    )),
                                );
                            }
                        }
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "zero-mode-closure",
            "zero modes keep explicit single-level vectors inside their family",
            format!("c={c} seed={seed} 3 states, 2 sites"),
            move || {
                let spec = chain_spec(3, 0, 2, &c, seed);
                let pool = draw_generic(seed, "closure-pts", 1, &c, 4, spec.xi());
                let ts = ParamSet::singleton(pool[0].clone());
                for ell in 1..=2usize {
                    for i in 1..=2usize {
                        let report = spec.oracle_check_zero_mode(ell, i, &ts).unwrap();
                        if !report.ok {
                            return CheckResult::flag(
                                false,
                                Some(format!(
                                    "mode {ell} on level {i}: {}",
                                    report.mismatch.unwrap_or_default()
                                )),
                            );
                        }
                    }
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "inner-product-sum-formula",
            "the partition sum reproduces the literal matrix inner product",
            format!("c={c} seed={seed} 2 states, 2 sites"),
            move || {
                let spec = chain_spec(2, 0, 2, &c, seed);
                let ctx = spec.model_context(0).unwrap();
                let pool = draw_generic(seed, "ip-pts", 2, &c, 4, spec.xi());
                let xs = BetheIndex::new(vec![ParamSet::singleton(pool[0].clone())]);
                let ts = BetheIndex::new(vec![ParamSet::singleton(pool[1].clone())]);
                let lhs = scalar_product_sum(&ctx, &xs, &ts).unwrap();
                let bra = spec.dual_bra_rank1(&xs.level(1)).unwrap();
                let ket = spec.explicit_bv_rank1(&ts.level(1)).unwrap();
                let rhs = inner_product(&bra, &ket).unwrap();
                CheckResult::scalar(lhs, rhs)
            },
        ));
    }
    {
        let c = c.clone();
        checks.push(Check::new(
            "on-shell-transfer-matrix",
            "with the solved twist the explicit vector is a transfer-matrix eigenvector",
            format!("c={c} seed={seed} 2 states, 2 sites"),
            move || {
                let base = chain_spec(2, 0, 2, &c, seed);
                let pool = draw_generic(seed, "shell-pts", 2, &c, 4, base.xi());
                let t = pool[0].clone();
                let kappa = base.rank1_on_shell_kappa(&t).unwrap();
                let spec = ChainSpec::new(
                    AlgebraSpec::non_graded(2).unwrap(),
                    2,
                    base.xi().to_vec(),
                    kappa,
                    c.clone(),
                )
                .unwrap();
                let ctx = spec.model_context(0).unwrap();
                let roots = BetheIndex::new(vec![ParamSet::singleton(t.clone())]);
                let vector = spec.explicit_bv_rank1(&roots.level(1)).unwrap();
                let z = pool[1].clone();
                let image = spec.transfer_matrix(&z).unwrap().apply(&vector).unwrap();
                let tau = eigenvalue_tau(&ctx, &z, &roots).unwrap();
                if image != vector.scale(&tau) {
                    return CheckResult::flag(false, Some("image is not tau times the vector".into()));
                }
                CheckResult::flag(true, None)
            },
        ));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use bethe_core::exactmath::rat_int;

    #[test]
    fn every_suite_passes_with_default_config() {
        let cfg = SuiteConfig { c: rat_int(1), seed: 0 };
        for name in SUITE_NAMES {
            let report = build_suite(name, &cfg).unwrap();
            for check in &report.checks {
                assert_eq!(check.status, "pass", "{name}/{}: {:?}", check.id, check.detail);
            }
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        let cfg = SuiteConfig { c: rat_int(1), seed: 0 };
        assert!(build_suite("nonsense", &cfg).is_none());
    }
}
