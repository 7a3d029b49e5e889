//! The acceptance gate: ten end-to-end criteria, each a separate test so
//! the harness prints one pass/fail line per criterion. Every comparison
//! is exact rational equality; nothing is approximate.

use std::time::Instant;

use bethe_core::action::{
    act_multiple, act_single, act_transfer, act_zero_mode, eigenvalue_tau,
    verify_zero_mode_commutator, AlphaMode, FormalBV, FormalCombination, ModelContext,
};
use bethe_core::draw::{draw_generic, DetStream};
use bethe_core::exactmath::{kernel_value, set_product, Kernel, LimitPoint, Kernel::F as KF, UniRat};
use bethe_core::izergin::{
    identity_izp, identity_lm1, izergin, izergin_over_f, izergin_over_f_reversed, kf_ratio_closed,
    IzerginArgs,
};
use bethe_core::superaction::{graded_act_multiple, graded_act_zero_mode};
use bethe_core::{
    check_generalized_model_reduction, check_hc_mu_symmetry, check_sp_symmetry, inner_product,
    scalar_product_sum, AlgebraSpec, BetheIndex, ChainSpec, GammaProfile, HCSelector, HcEngine,
    ParamSet, Rat, Scalar,
};

fn rint(v: i64) -> Rat {
    Rat::from_integer(v.into())
}

fn kappas(seed: u64, tag: &str, count: usize) -> Vec<Rat> {
    let mut stream = DetStream::new(seed, tag);
    (0..count).map(|_| stream.next_nonzero_rat()).collect()
}

/// Two disjoint indices with the given level cardinalities, generic with
/// respect to `c`-shifts.
fn draw_two(seed: u64, tag: &str, c: &Rat, sizes: &[usize]) -> (BetheIndex<Rat>, BetheIndex<Rat>) {
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

fn draw_one(seed: u64, tag: &str, c: &Rat, sizes: &[usize], avoid: &[Rat]) -> BetheIndex<Rat> {
    let total: usize = sizes.iter().sum();
    let pool = draw_generic(seed, tag, total, c, 4, avoid);
    let mut it = pool.into_iter();
    BetheIndex::new(
        sizes
            .iter()
            .map(|&len| ParamSet::new((0..len).map(|_| it.next().unwrap()).collect()).unwrap())
            .collect(),
    )
}

fn chain_of(m: usize, n: usize, sites: usize, c: &Rat, seed: u64) -> ChainSpec {
    let alg = AlgebraSpec::new(m, n).unwrap();
    let xi = draw_generic(seed, "xi", sites, c, 4, &[]);
    let kappa = kappas(seed, "kappa", m + n);
    ChainSpec::new(alg, sites, xi, kappa, c.clone()).unwrap()
}

fn done(name: &str, started: Instant) {
    println!("criterion {name}: PASS ({:.2?})", started.elapsed());
}

#[test]
fn criterion_01_determinant_kernel_identities() {
    let started = Instant::now();
    let c = rint(3);
    for seed in [11u64, 12, 13] {
        // Shift-reflection for every size up to 4.
        for size in 0..=4usize {
            let pool = draw_generic(seed, "acc-izp", 2 * size, &c, 4, &[]);
            let xs = ParamSet::new(pool[..size].to_vec()).unwrap();
            let ys = ParamSet::new(pool[size..].to_vec()).unwrap();
            let (lhs, rhs) = identity_izp(&c, &xs, &ys).unwrap();
            assert_eq!(lhs, rhs, "shift-reflection size {size} seed {seed}");
        }
        // Regularized ratio: both assignment orders and the closed form,
        // with every possible number of coinciding entries.
        for size in 1..=4usize {
            for shared in 0..=size {
                let pool = draw_generic(seed, "acc-izpr", 2 * size - shared, &c, 4, &[]);
                let xs = ParamSet::new(pool[..size].to_vec()).unwrap();
                let mut yv = pool[..shared].to_vec();
                yv.extend(pool[size..2 * size - shared].iter().cloned());
                let ys = ParamSet::new(yv).unwrap();
                let a = izergin_over_f(&c, 0, &ys, &xs).unwrap();
                let b = izergin_over_f_reversed(&c, 0, &ys, &xs).unwrap();
                let closed = kf_ratio_closed(&c, 0, ys.values(), xs.values()).unwrap();
                assert_eq!(a, b, "ratio order size {size} shared {shared} seed {seed}");
                assert_eq!(a, closed, "ratio closed size {size} shared {shared} seed {seed}");
            }
        }
        // Merge of two kernels under the partition sum, all shapes up to
        // total size 4.
        for m1 in 1..=3usize {
            for m2 in 1..=3usize {
                if m1 + m2 > 4 {
                    continue;
                }
                let pool = draw_generic(seed, "acc-lm1", 2 * (m1 + m2), &c, 4, &[]);
                let us = ParamSet::new(pool[..m1].to_vec()).unwrap();
                let vs = ParamSet::new(pool[m1..m1 + m2].to_vec()).unwrap();
                let ws = ParamSet::new(pool[m1 + m2..].to_vec()).unwrap();
                let (lhs, rhs) = identity_lm1(&c, &us, &vs, &ws).unwrap();
                assert_eq!(lhs, rhs, "merge ({m1},{m2}) seed {seed}");
            }
        }
    }
    assert!(started.elapsed().as_secs() < 10, "criterion 1 exceeded its budget");
    done("01 determinant-kernel identities", started);
}

#[test]
fn criterion_02_action_zero_mode_commutator() {
    let started = Instant::now();
    let c = rint(2);
    for levels in 1..=3usize {
        let states = levels + 1;
        let alg = AlgebraSpec::non_graded(states).unwrap();
        let ctx = ModelContext::free(alg, c.clone(), kappas(23, "acc-zm-kappa", states), 23).unwrap();
        let mut sizes = vec![1usize; levels];
        sizes[0] = 2;
        let ts = draw_one(23 + levels as u64, "acc-zm-ts", &c, &sizes, &[]);
        let z = draw_generic(23 + levels as u64, "acc-zm-z", 1, &c, 4, &ts.all_values())[0].clone();
        let combo = FormalCombination::ket(ts);
        for i in 1..=states {
            for j in 1..=states {
                for ell in 1..=levels {
                    let (lhs, rhs) =
                        verify_zero_mode_commutator(&ctx, i, j, ell, &z, &combo).unwrap();
                    assert_eq!(lhs, rhs, "levels {levels} entry ({i},{j}) mode {ell}");
                }
            }
        }
    }
    assert!(started.elapsed().as_secs() < 120, "criterion 2 exceeded its budget");
    done("02 action and zero-mode commutator", started);
}

#[test]
fn criterion_03_multiple_action_composition() {
    let started = Instant::now();
    let c = rint(2);
    for levels in 1..=3usize {
        let states = levels + 1;
        let alg = AlgebraSpec::non_graded(states).unwrap();
        let ctx = ModelContext::free(alg, c.clone(), kappas(29, "acc-mult-kappa", states), 29).unwrap();
        let ts = draw_one(29 + levels as u64, "acc-mult-ts", &c, &vec![1; levels], &[]);
        let zpool = draw_generic(29 + levels as u64, "acc-mult-z", 3, &c, 4, &ts.all_values());
        let combo = FormalCombination::ket(ts);
        for p in 2..=3usize {
            let zs = ParamSet::new(zpool[..p].to_vec()).unwrap();
            for i in 1..=states {
                for j in 1..=states {
                    let many = act_multiple(&ctx, i, j, &zs, &combo).unwrap();
                    let mut folded = combo.clone();
                    for z in zs.values() {
                        folded = act_single(&ctx, i, j, z, &folded).unwrap();
                    }
                    assert_eq!(many, folded, "levels {levels} entry ({i},{j}) p {p}");
                }
            }
        }
    }
    assert!(started.elapsed().as_secs() < 300, "criterion 3 exceeded its budget");
    done("03 multiple action equals composed singles", started);
}

#[test]
fn criterion_04_zero_mode_is_the_large_argument_limit() {
    let started = Instant::now();
    let c = rint(2);
    for levels in 1..=3usize {
        let states = levels + 1;
        let spec = chain_of(states, 0, 2, &c, 31 + levels as u64);
        let ctx = spec.model_context(31).unwrap();
        let mut sizes = vec![1usize; levels];
        sizes[0] = 2;
        let ts_rat = draw_one(31 + levels as u64, "acc-lim-ts", &c, &sizes, spec.xi());
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
        let over_c = UniRat::var().mul(&UniRat::constant(c.clone().recip()));
        for i in 1..=levels {
            let lowered = act_multiple(
                &ctx,
                i + 1,
                i,
                &ParamSet::singleton(UniRat::var()),
                &FormalCombination::ket(ts_uni.clone()),
            )
            .unwrap();
            let expect = act_zero_mode(&ctx, i, &FormalCombination::ket(ts_rat.clone())).unwrap();
            let mut seen = 0usize;
            for (bv, coeff) in lowered.terms() {
                let lim = coeff.mul(&over_c).limit_at(&LimitPoint::Infinity).unwrap();
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
                if let Some(ix) = constant_index {
                    let key = FormalBV::ket(BetheIndex::new(ix));
                    assert_eq!(
                        lim,
                        expect.coefficient(&key),
                        "levels {levels} mode {i}: scaled limit"
                    );
                    seen += 1;
                }
            }
            assert_eq!(seen, expect.len(), "levels {levels} mode {i}: term count");
        }
    }
    done("04 zero mode is the scaled large-argument limit", started);
}

#[test]
fn criterion_05_on_shell_transfer_eigenvector() {
    let started = Instant::now();
    let c = rint(2);
    for (levels, sizes) in [(1usize, vec![2usize]), (2, vec![2, 1]), (3, vec![2, 1, 1])] {
        let states = levels + 1;
        let alg = AlgebraSpec::non_graded(states).unwrap();
        let seed = 37 + levels as u64;
        let roots = draw_one(seed, "acc-shell-roots", &c, &sizes, &[]);
        let kappa = kappas(seed, "acc-shell-kappa", states);
        let ctx = ModelContext::new(
            alg,
            c.clone(),
            kappa,
            AlphaMode::OnShell { roots: roots.clone() },
            seed,
        )
        .unwrap();
        let z = draw_generic(seed, "acc-shell-z", 1, &c, 4, &roots.all_values())[0].clone();
        let got = act_transfer(&ctx, &z, &FormalCombination::ket(roots.clone())).unwrap();
        assert_eq!(got.len(), 1, "levels {levels}: every unwanted coefficient must vanish");
        let tau = eigenvalue_tau(&ctx, &z, &roots).unwrap();
        assert_eq!(got.coefficient(&FormalBV::ket(roots.clone())), tau, "levels {levels}");

        // The isolated cancellation between the two diagonal partitions
        // singling out one root: the bracketed difference vanishes exactly
        // once that root satisfies its Bethe equation.
        for i in 1..=levels {
            for t in roots.level(i).values() {
                let rest = roots.level(i).without(t).unwrap();
                let alpha = ctx.alpha(i, t).unwrap();
                let lhs = alpha
                    .mul(&set_product(KF, 0, &c, rest.values(), &[t.clone()]).unwrap())
                    .div(&set_product(KF, 0, &c, roots.level(i + 1).values(), &[t.clone()]).unwrap())
                    .unwrap();
                let rhs = set_product(KF, 0, &c, &[t.clone()], rest.values())
                    .unwrap()
                    .div(&set_product(KF, 0, &c, &[t.clone()], roots.level(i - 1).values()).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs, "levels {levels} root {t}: bracket must cancel");
            }
        }
    }
    done("05 on-shell transfer eigenvector with exact cancellation", started);
}

#[test]
fn criterion_06_highest_coefficient_recursions_agree() {
    let started = Instant::now();
    let c = rint(2);
    // All four expansions on rank-2 and rank-3 indices.
    for (levels, sizes, salt) in [
        (2usize, vec![1usize, 1], 0u64),
        (2, vec![2, 1], 1),
        (2, vec![2, 2], 2),
        (3, vec![1, 1, 1], 3),
        (3, vec![2, 1, 1], 4),
    ] {
        let alg = AlgebraSpec::non_graded(levels + 1).unwrap();
        let engine = HcEngine::new(c.clone()).unwrap();
        let (xs, ts) = draw_two(41 + salt, "acc-hc", &c, &sizes);
        let reference = engine.evaluate(&alg, HCSelector::FirstLevel, &xs, &ts).unwrap();
        for sel in &HCSelector::ALL[1..] {
            let got = engine.evaluate(&alg, *sel, &xs, &ts).unwrap();
            assert_eq!(got, reference, "levels {levels} sizes {sizes:?} {sel}");
        }
    }
    // Rank-one base case: the determinant kernel with the index order
    // K(t|x), for sizes up to 3.
    let alg2 = AlgebraSpec::non_graded(2).unwrap();
    let engine = HcEngine::new(c.clone()).unwrap();
    for r in 1..=3usize {
        let (xs, ts) = draw_two(47 + r as u64, "acc-hc-base", &c, &[r]);
        let got = engine.evaluate(&alg2, HCSelector::LastLevel, &xs, &ts).unwrap();
        let expect = izergin(
            &c,
            &IzerginArgs { ys: ts.level(1), xs: xs.level(1), parity: 0 },
        )
        .unwrap();
        assert_eq!(got, expect, "rank-one base size {r}");
    }
    // Empty normalization for every rank up to 3 and every expansion.
    for levels in 1..=3usize {
        let alg = AlgebraSpec::non_graded(levels + 1).unwrap();
        let empty = BetheIndex::<Rat>::empty(levels);
        for sel in HCSelector::ALL {
            assert_eq!(
                engine.evaluate(&alg, sel, &empty, &empty).unwrap(),
                Rat::one(),
                "empty at {levels} levels, {sel}"
            );
        }
    }
    done("06 highest-coefficient recursions, base, and normalization", started);
}

#[test]
fn criterion_07_shift_map_and_scalar_product_symmetry() {
    let started = Instant::now();
    let c = rint(2);
    for (levels, sizes, salt) in [
        (1usize, vec![2usize], 0u64),
        (2, vec![1, 1], 1),
        (2, vec![1, 2], 2),
        (3, vec![1, 1, 1], 3),
    ] {
        let alg = AlgebraSpec::non_graded(levels + 1).unwrap();
        let (xs, ts) = draw_two(53 + salt, "acc-mu", &c, &sizes);
        let report = check_hc_mu_symmetry(&c, &alg, &xs, &ts).unwrap();
        assert!(report.passed(), "shift map at {levels} levels sizes {sizes:?}: {report}");
    }
    for (levels, sizes, salt) in [
        (1usize, vec![2usize], 0u64),
        (2, vec![1, 1], 1),
        (3, vec![1, 1, 1], 2),
    ] {
        let states = levels + 1;
        let alg = AlgebraSpec::non_graded(states).unwrap();
        let ctx =
            ModelContext::free(alg, c.clone(), kappas(59 + salt, "acc-sp-kappa", states), 59 + salt)
                .unwrap();
        let (xs, ts) = draw_two(59 + salt, "acc-sp", &c, &sizes);
        let report = check_sp_symmetry(&ctx, &xs, &ts).unwrap();
        assert!(report.passed(), "scalar product at {levels} levels: {report}");
    }
    done("07 shift-map and scalar-product symmetry", started);
}

#[test]
fn criterion_08_graded_reductions() {
    let started = Instant::now();
    let c = rint(2);
    // (a) No odd states: the graded action and zero mode reproduce the
    // plain ones coefficient-identically for p up to 2.
    for levels in 1..=3usize {
        let states = levels + 1;
        let alg = AlgebraSpec::non_graded(states).unwrap();
        let ctx =
            ModelContext::free(alg, c.clone(), kappas(61, "acc-gr-kappa", states), 61).unwrap();
        let ts = draw_one(61 + levels as u64, "acc-gr-ts", &c, &vec![1; levels], &[]);
        let zpool = draw_generic(61 + levels as u64, "acc-gr-z", 2, &c, 4, &ts.all_values());
        let combo = FormalCombination::ket(ts);
        for p in 1..=2usize {
            let zs = ParamSet::new(zpool[..p].to_vec()).unwrap();
            for i in 1..=states {
                for j in 1..=states {
                    let graded =
                        graded_act_multiple(&ctx, GammaProfile::default(), i, j, &zs, &combo)
                            .unwrap();
                    let plain = act_multiple(&ctx, i, j, &zs, &combo).unwrap();
                    assert_eq!(graded, plain, "even reduction {levels} levels ({i},{j}) p {p}");
                }
            }
        }
        for i in 1..=levels {
            let graded = graded_act_zero_mode(&ctx, i, &combo).unwrap();
            let plain = act_zero_mode(&ctx, i, &combo).unwrap();
            assert_eq!(graded, plain, "even zero-mode reduction {levels} levels mode {i}");
        }
    }
    // (b) Only odd states: the graded action is the plain action at
    // negated constant, drawn from the same seed.
    for states in 2..=4usize {
        let levels = states - 1;
        let odd = AlgebraSpec::new(0, states).unwrap();
        let even = AlgebraSpec::non_graded(states).unwrap();
        let kappa = kappas(67, "acc-odd-kappa", states);
        let ctx_odd = ModelContext::free(odd, c.clone(), kappa.clone(), 67).unwrap();
        let ctx_even = ModelContext::free(even, c.neg(), kappa, 67).unwrap();
        let ts = draw_one(67 + states as u64, "acc-odd-ts", &c, &vec![1; levels], &[]);
        let zpool = draw_generic(67 + states as u64, "acc-odd-z", 2, &c, 4, &ts.all_values());
        let combo = FormalCombination::ket(ts);
        for p in 1..=2usize {
            let zs = ParamSet::new(zpool[..p].to_vec()).unwrap();
            for i in 1..=states {
                for j in 1..=states {
                    let lhs =
                        graded_act_multiple(&ctx_odd, GammaProfile::default(), i, j, &zs, &combo)
                            .unwrap();
                    let rhs = act_multiple(&ctx_even, i, j, &zs, &combo).unwrap();
                    assert_eq!(lhs, rhs, "odd reduction gl(0|{states}) ({i},{j}) p {p}");
                }
            }
        }
    }
    // (c) The graded recursions specialize on an all-even algebra to the
    // plain peels: the fused expansions equal the level peels exactly.
    let engine = HcEngine::new(c.clone()).unwrap();
    for (sizes, salt) in [(vec![1usize, 1], 0u64), (vec![2, 1], 1)] {
        let alg = AlgebraSpec::new(3, 0).unwrap();
        let (xs, ts) = draw_two(71 + salt, "acc-even-hc", &c, &sizes);
        let plain = engine.evaluate(&alg, HCSelector::LastLevel, &xs, &ts).unwrap();
        for sel in [HCSelector::ShiftedFirst, HCSelector::ShiftedLast] {
            let got = engine.evaluate(&alg, sel, &xs, &ts).unwrap();
            assert_eq!(got, plain, "all-even specialization sizes {sizes:?} {sel}");
        }
    }
    // (d) The mixed-parity rank-one value is the plain g-product.
    let mixed = AlgebraSpec::new(1, 1).unwrap();
    for r in 1..=3usize {
        let (xs, ts) = draw_two(73 + r as u64, "acc-mixed-hc", &c, &[r]);
        let mut expect = Rat::one();
        for x in xs.level(1).values() {
            for t in ts.level(1).values() {
                expect = expect.mul(&kernel_value(Kernel::G, 0, &c, x, t).unwrap());
            }
        }
        for sel in HCSelector::ALL {
            let got = engine.evaluate(&mixed, sel, &xs, &ts).unwrap();
            assert_eq!(got, expect, "mixed rank-one size {r} {sel}");
        }
    }
    // (e) The reflection into the parity-flipped algebra, at one odd and
    // one even state and across the (2,1) / (1,2) pair.
    for (m, n, sizes, salt) in [
        (1usize, 1usize, vec![1usize], 0u64),
        (1, 1, vec![2], 1),
        (2, 1, vec![1, 1], 2),
        (1, 2, vec![1, 1], 3),
    ] {
        let alg = AlgebraSpec::new(m, n).unwrap();
        let (xs, ts) = draw_two(79 + salt, "acc-refl", &c, &sizes);
        let report = check_hc_mu_symmetry(&c, &alg, &xs, &ts).unwrap();
        assert!(report.passed(), "reflection gl({m}|{n}) sizes {sizes:?}: {report}");
    }
    done("08 graded reductions and reflection", started);
}

#[test]
fn criterion_09_chain_oracle_ground_truth() {
    let started = Instant::now();
    let c = rint(2);
    // Exchange relation across parities and sizes.
    for (m, n, sites) in [(2usize, 0usize, 2usize), (2, 0, 3), (1, 1, 2), (1, 1, 3), (0, 2, 2), (2, 1, 2)] {
        for seed in [1u64, 2] {
            let spec = chain_of(m, n, sites, &c, seed);
            let uv = draw_generic(seed, "acc-rtt-uv", 2, &c, 4, spec.xi());
            assert!(
                spec.rtt_residual(&uv[0], &uv[1]).unwrap().is_zero(),
                "exchange gl({m}|{n}) {sites} sites seed {seed}"
            );
        }
    }
    // Vacuum triangularity with the advertised eigenvalues.
    for (m, n, sites) in [(2usize, 0usize, 3usize), (3, 0, 2), (1, 1, 2), (2, 1, 2), (0, 2, 2)] {
        let spec = chain_of(m, n, sites, &c, 5);
        let u = draw_generic(5, "acc-vac-u", 1, &c, 4, spec.xi())[0].clone();
        let vac = spec.vacuum();
        for i in 1..=m + n {
            for j in 1..=m + n {
                let image = spec.monodromy_entry(i, j, &u).unwrap().apply(&vac).unwrap();
                if i > j {
                    assert!(image.is_zero(), "gl({m}|{n}) entry ({i},{j}) must annihilate");
                } else if i == j {
                    let lam = Rat::apply_ratfunc(&spec.vacuum_lambda(i).unwrap(), &u).unwrap();
                    assert_eq!(image, vac.scale(&lam), "gl({m}|{n}) diagonal {i}");
                }
            }
        }
    }
    // Full rank-one action grid against explicit matrices: p up to 2,
    // chains up to 4 sites, vectors up to 3 excitations.
    for (m, n) in [(2usize, 0usize), (1, 1)] {
        for sites in [2usize, 4] {
            let spec = chain_of(m, n, sites, &c, 7);
            let pool = draw_generic(7, "acc-grid-pts", 5, &c, 4, spec.xi());
            for r in 0..=3usize {
                let ts = ParamSet::new(pool[..r].to_vec()).unwrap();
                for p in 1..=2usize {
                    let zs = ParamSet::new(pool[3..3 + p].to_vec()).unwrap();
                    for i in 1..=2usize {
                        for j in 1..=2usize {
                            let report = spec.oracle_check_action(i, j, &zs, &ts).unwrap();
                            assert!(
                                report.ok,
                                "gl({m}|{n}) {sites} sites r {r} p {p} ({i},{j}): {:?}",
                                report.mismatch
                            );
                        }
                    }
                }
            }
        }
    }
    // Single-level zero-mode closure on a rank-2 chain.
    {
        let spec = chain_of(3, 0, 2, &c, 9);
        let pool = draw_generic(9, "acc-closure-pts", 2, &c, 4, spec.xi());
        for r in 1..=2usize {
            let ts = ParamSet::new(pool[..r].to_vec()).unwrap();
            for ell in 1..=2usize {
                for i in 1..=2usize {
                    let report = spec.oracle_check_zero_mode(ell, i, &ts).unwrap();
                    assert!(report.ok, "mode {ell} level {i} r {r}: {:?}", report.mismatch);
                }
            }
        }
    }
    // Sum formula against the literal inner product at rank one.
    for sites in [2usize, 3] {
        let spec = chain_of(2, 0, sites, &c, 13);
        let ctx = spec.model_context(0).unwrap();
        for r in 1..=2usize {
            let pool = draw_generic(13 + r as u64, "acc-ip-pts", 2 * r, &c, 4, spec.xi());
            let xs = BetheIndex::new(vec![ParamSet::new(pool[..r].to_vec()).unwrap()]);
            let ts = BetheIndex::new(vec![ParamSet::new(pool[r..].to_vec()).unwrap()]);
            let lhs = scalar_product_sum(&ctx, &xs, &ts).unwrap();
            let bra = spec.dual_bra_rank1(&xs.level(1)).unwrap();
            let ket = spec.explicit_bv_rank1(&ts.level(1)).unwrap();
            let rhs = inner_product(&bra, &ket).unwrap();
            assert_eq!(lhs, rhs, "{sites} sites r {r}");
        }
    }
    assert!(started.elapsed().as_secs() < 600, "criterion 9 exceeded its budget");
    done("09 chain-oracle ground truth", started);
}

#[test]
fn criterion_10_generalized_model_reduction() {
    let started = Instant::now();
    let c = rint(2);
    for (sizes, salt) in [
        (vec![1usize], 0u64),
        (vec![2], 1),
        (vec![1, 1], 2),
        (vec![1, 1, 1], 3),
    ] {
        let (xs, ts) = draw_two(83 + salt, "acc-gen", &c, &sizes);
        let reports = check_generalized_model_reduction(&c, &xs, &ts, 83 + salt).unwrap();
        assert_eq!(reports.len(), 2);
        for report in &reports {
            assert!(report.passed(), "sizes {sizes:?}: {report}");
        }
    }
    done("10 generalized-model reduction", started);
}
