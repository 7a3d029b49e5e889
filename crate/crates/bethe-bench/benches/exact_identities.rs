//! Timings for the computational hot paths: determinant kernels, entry
//! actions, highest-coefficient recursions, partition sums, and dense
//! monodromy construction.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use bethe_bench::{chain, index, points};
use bethe_core::action::{act_multiple, FormalCombination, ModelContext};
use bethe_core::exactmath::rat_int;
use bethe_core::izergin::{izergin, IzerginArgs};
use bethe_core::{
    scalar_product_sum, AlgebraSpec, HCRequest, HCSelector, HcEngine, ParamSet, Scalar,
};

fn bench_izergin(criterion: &mut Criterion) {
    let c = rat_int(2);
    let mut group = criterion.benchmark_group("determinant-kernel");
    for size in [2usize, 4, 6] {
        let pool = points("iz", 2 * size, &c);
        let ys = ParamSet::new(pool[..size].to_vec()).unwrap();
        let xs = ParamSet::new(pool[size..].to_vec()).unwrap();
        group.bench_function(format!("size-{size}"), |b| {
            b.iter(|| izergin(&c, &IzerginArgs { ys: ys.clone(), xs: xs.clone(), parity: 0 }))
        });
    }
    group.finish();
}

fn bench_entry_action(criterion: &mut Criterion) {
    let c = rat_int(2);
    let alg = AlgebraSpec::non_graded(3).unwrap();
    let kappa = vec![rat_int(1), rat_int(3), rat_int(5)];
    let ctx = ModelContext::free(alg, c.clone(), kappa, 1729).unwrap();
    let ts = index("act-ts", &c, &[2, 1]);
    let zpool = points("act-z", 2, &c);
    let zs = ParamSet::new(zpool).unwrap();
    let combo = FormalCombination::ket(ts);
    criterion.bench_function("entry-action-two-parameters", |b| {
        b.iter_batched(
            || combo.clone(),
            |input| act_multiple(&ctx, 2, 1, &zs, &input).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_highest_coefficient(criterion: &mut Criterion) {
    let c = rat_int(2);
    let alg = AlgebraSpec::non_graded(3).unwrap();
    let xs = index("hc-xs", &c, &[2, 1]);
    let ts = index("hc-ts", &c, &[2, 1]);
    let mut group = criterion.benchmark_group("highest-coefficient");
    for selector in [HCSelector::FirstLevel, HCSelector::ShiftedLast] {
        group.bench_function(selector.as_str(), |b| {
            b.iter_batched(
                // A fresh engine per iteration so the memo table does not
                // turn later passes into lookups.
                || HcEngine::new(c.clone()).unwrap(),
                |engine| {
                    engine
                        .highest_coefficient(&HCRequest {
                            algebra: alg,
                            xs: xs.clone(),
                            ts: ts.clone(),
                            selector,
                        })
                        .unwrap()
                },
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn bench_partition_sum(criterion: &mut Criterion) {
    let c = rat_int(2);
    let alg = AlgebraSpec::non_graded(3).unwrap();
    let kappa = vec![<bethe_core::Rat as Scalar>::one(); 3];
    let ctx = ModelContext::free(alg, c.clone(), kappa, 1729).unwrap();
    let xs = index("sum-xs", &c, &[1, 1]);
    let ts = index("sum-ts", &c, &[1, 1]);
    criterion.bench_function("scalar-product-partition-sum", |b| {
        b.iter(|| scalar_product_sum(&ctx, &xs, &ts).unwrap())
    });
}

fn bench_monodromy(criterion: &mut Criterion) {
    let c = rat_int(2);
    let spec = chain(2, 0, 3, &c);
    let u = points("mono-u", 1, &c)[0].clone();
    criterion.bench_function("dense-monodromy-three-sites", |b| {
        b.iter(|| spec.monodromy_entries(&u).unwrap())
    });
}

criterion_group!(
    benches,
    bench_izergin,
    bench_entry_action,
    bench_highest_coefficient,
    bench_partition_sum,
    bench_monodromy
);
criterion_main!(benches);
