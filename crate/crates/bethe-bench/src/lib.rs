//! Shared fixtures for the criterion benchmarks: deterministic parameter
//! draws sized for stable timing rather than for coverage.

use bethe_core::draw::{draw_generic, DetStream};
use bethe_core::{AlgebraSpec, BetheIndex, ChainSpec, ParamSet, Rat};

/// Generic points with the benchmark seed.
pub fn points(tag: &str, count: usize, c: &Rat) -> Vec<Rat> {
    draw_generic(1729, tag, count, c, 4, &[])
}

/// An index with the given level cardinalities over fresh points.
pub fn index(tag: &str, c: &Rat, sizes: &[usize]) -> BetheIndex<Rat> {
    let total = sizes.iter().sum();
    let pool = points(tag, total, c);
    let mut it = pool.into_iter();
    BetheIndex::new(
        sizes
            .iter()
            .map(|&len| ParamSet::new((0..len).map(|_| it.next().unwrap()).collect()).unwrap())
            .collect(),
    )
}

/// A small twisted inhomogeneous chain for the dense-matrix benchmarks.
pub fn chain(m: usize, n: usize, sites: usize, c: &Rat) -> ChainSpec {
    let alg = AlgebraSpec::new(m, n).unwrap();
    let xi = points("bench-xi", sites, c);
    let mut stream = DetStream::new(1729, "bench-kappa");
    let kappa = (0..m + n).map(|_| stream.next_nonzero_rat()).collect();
    ChainSpec::new(alg, sites, xi, kappa, c.clone()).unwrap()
}
