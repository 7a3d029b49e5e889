//! Parameter multisets, nested Bethe indices, and the constrained set
//! partitions indexing every sum the engine evaluates.

use crate::error::Error;
use crate::exactmath::{Rat, Scalar};
use itertools::Itertools;

/// A finite set of scalars in canonical ascending order. Values must be
/// pairwise distinct within one set (the formulas are singular on
/// within-level repeats); the same value may appear in different sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamSet<F: Scalar = Rat> {
    vals: Vec<F>,
}

impl<F: Scalar> ParamSet<F> {
    /// Builds a set, sorting into canonical order.
    ///
    /// # Errors
    /// Rejects repeated values.
    pub fn new(mut vals: Vec<F>) -> Result<Self, Error> {
        vals.sort();
        for w in vals.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateInLevel {
                    value: w[0].to_string(),
                });
            }
        }
        Ok(ParamSet { vals })
    }

    /// The empty set.
    pub fn empty() -> Self {
        ParamSet { vals: Vec::new() }
    }

    /// A one-element set.
    pub fn singleton(v: F) -> Self {
        ParamSet { vals: vec![v] }
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.vals.len()
    }

    /// True when empty.
    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    /// The values in canonical order.
    pub fn values(&self) -> &[F] {
        &self.vals
    }

    /// Membership test.
    pub fn contains(&self, v: &F) -> bool {
        self.vals.binary_search(v).is_ok()
    }

    /// Union with another set.
    ///
    /// # Errors
    /// Rejects overlapping values (they would repeat within the result).
    pub fn union(&self, other: &ParamSet<F>) -> Result<ParamSet<F>, Error> {
        let mut vals = self.vals.clone();
        vals.extend(other.vals.iter().cloned());
        ParamSet::new(vals)
    }

    /// Values at the given positions, in the given position order.
    pub fn select(&self, positions: &[usize]) -> Vec<F> {
        positions.iter().map(|&k| self.vals[k].clone()).collect()
    }

    /// The set shifted by a constant (re-canonicalized).
    pub fn shifted(&self, delta: &F) -> ParamSet<F> {
        let vals = self.vals.iter().map(|v| v.add(delta)).collect();
        ParamSet::new(vals).expect("shifting preserves distinctness")
    }

    /// The set with one value removed.
    ///
    /// # Errors
    /// Fails when the value is absent.
    pub fn without(&self, v: &F) -> Result<ParamSet<F>, Error> {
        match self.vals.binary_search(v) {
            Ok(k) => {
                let mut vals = self.vals.clone();
                vals.remove(k);
                Ok(ParamSet { vals })
            }
            Err(_) => Err(Error::Index(format!("value {v} not in set"))),
        }
    }
}

/// A nested configuration of Bethe parameters: one [`ParamSet`] per level,
/// `N` levels. The conventional boundary levels `0` and `N+1` are empty and
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BetheIndex<F: Scalar = Rat> {
    levels: Vec<ParamSet<F>>,
}

impl<F: Scalar> BetheIndex<F> {
    /// Wraps per-level sets.
    pub fn new(levels: Vec<ParamSet<F>>) -> Self {
        BetheIndex { levels }
    }

    /// All levels empty.
    pub fn empty(num_levels: usize) -> Self {
        BetheIndex {
            levels: vec![ParamSet::empty(); num_levels],
        }
    }

    /// Number of levels `N`.
    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Level `s`, 1-based; levels `0` and `N+1` are implicitly empty.
    pub fn level(&self, s: usize) -> ParamSet<F> {
        if s == 0 || s > self.levels.len() {
            ParamSet::empty()
        } else {
            self.levels[s - 1].clone()
        }
    }

    /// All stored levels in order.
    pub fn levels(&self) -> &[ParamSet<F>] {
        &self.levels
    }

    /// Per-level cardinalities.
    pub fn cardinalities(&self) -> Vec<usize> {
        self.levels.iter().map(ParamSet::len).collect()
    }

    /// Total number of parameters over all levels.
    pub fn total(&self) -> usize {
        self.levels.iter().map(ParamSet::len).sum()
    }

    /// Copy with level `s` (1-based) replaced.
    pub fn with_level(&self, s: usize, set: ParamSet<F>) -> BetheIndex<F> {
        let mut levels = self.levels.clone();
        levels[s - 1] = set;
        BetheIndex { levels }
    }

    /// Every stored value (used to build pole-avoidance pools).
    pub fn all_values(&self) -> Vec<F> {
        self.levels
            .iter()
            .flat_map(|l| l.values().iter().cloned())
            .collect()
    }
}

/// One level's split into the three ordered subsets, as positions into the
/// merged level set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelTriple {
    /// Positions of the first subset.
    pub part_i: Vec<usize>,
    /// Positions of the middle subset (what remains in the output vector).
    pub part_ii: Vec<usize>,
    /// Positions of the third subset.
    pub part_iii: Vec<usize>,
}

/// A partition of the merged sets `w^s = z ∪ t^s` for `s = 0..=N+1`
/// satisfying the `(i,j)`-condition: the boundary level `0` is entirely in
/// the first subset and level `N+1` entirely in the third; the first subset
/// has cardinality `p = |z|` exactly on levels `s < i` (else empty); the
/// third has cardinality `p` exactly on levels `s >= j` (else empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IJPartition {
    /// Triples for levels `0..=N+1`.
    pub triples: Vec<LevelTriple>,
}

impl IJPartition {
    /// The triple at level `s` (0-based into `0..=N+1`).
    pub fn level(&self, s: usize) -> &LevelTriple {
        &self.triples[s]
    }
}

/// The merged level sets together with every admissible partition.
#[derive(Debug, Clone)]
pub struct IJEnumeration<F: Scalar = Rat> {
    /// `w^s` for `s = 0..=N+1`; `w^0 = w^{N+1} = z`.
    pub merged: Vec<ParamSet<F>>,
    /// All partitions, lexicographic in the chosen index subsets.
    pub partitions: Vec<IJPartition>,
}

impl<F: Scalar> IJEnumeration<F> {
    /// Values of the given part at level `s`.
    pub fn values(&self, part: &[usize], s: usize) -> Vec<F> {
        self.merged[s].select(part)
    }
}

/// Enumerates every partition of `w^s = z ∪ t^s` satisfying the
/// `(i,j)`-condition, deterministically (lexicographic in index subsets).
/// When a constrained level is too small to hold the required subsets the
/// enumeration is empty (the corresponding operator action vanishes).
///
/// # Errors
/// Fails when `i` or `j` is outside `1..=N+1` or when `z` shares a value
/// with some level of `t` (the merged level would repeat a value).
pub fn enumerate_ij_partitions<F: Scalar>(
    ts: &BetheIndex<F>,
    zs: &ParamSet<F>,
    i: usize,
    j: usize,
) -> Result<IJEnumeration<F>, Error> {
    let n_levels = ts.num_levels();
    for (name, v) in [("i", i), ("j", j)] {
        if v == 0 || v > n_levels + 1 {
            return Err(Error::Index(format!(
                "{name} = {v} outside 1..={}",
                n_levels + 1
            )));
        }
    }
    let p = zs.len();

    let mut merged = Vec::with_capacity(n_levels + 2);
    merged.push(zs.clone());
    for s in 1..=n_levels {
        merged.push(ts.level(s).union(zs)?);
    }
    merged.push(zs.clone());

    // Admissible triples per interior level.
    let mut per_level: Vec<Vec<LevelTriple>> = Vec::with_capacity(n_levels);
    for (s, w) in merged.iter().enumerate().take(n_levels + 1).skip(1) {
        let need_i = if s < i { p } else { 0 };
        let need_iii = if s >= j { p } else { 0 };
        if need_i + need_iii > w.len() {
            return Ok(IJEnumeration {
                merged,
                partitions: Vec::new(),
            });
        }
        let all: Vec<usize> = (0..w.len()).collect();
        let mut triples = Vec::new();
        for first in all.iter().cloned().combinations(need_i) {
            let rest: Vec<usize> = all
                .iter()
                .cloned()
                .filter(|k| !first.contains(k))
                .collect();
            for third in rest.iter().cloned().combinations(need_iii) {
                let mid: Vec<usize> = rest
                    .iter()
                    .cloned()
                    .filter(|k| !third.contains(k))
                    .collect();
                triples.push(LevelTriple {
                    part_i: first.clone(),
                    part_ii: mid,
                    part_iii: third,
                });
            }
        }
        per_level.push(triples);
    }

    let boundary_first = LevelTriple {
        part_i: (0..p).collect(),
        part_ii: Vec::new(),
        part_iii: Vec::new(),
    };
    let boundary_last = LevelTriple {
        part_i: Vec::new(),
        part_ii: Vec::new(),
        part_iii: (0..p).collect(),
    };

    let partitions = per_level
        .iter()
        .map(|v| v.iter())
        .multi_cartesian_product()
        .map(|choice| {
            let mut triples = Vec::with_capacity(n_levels + 2);
            triples.push(boundary_first.clone());
            triples.extend(choice.into_iter().cloned());
            triples.push(boundary_last.clone());
            IJPartition { triples }
        })
        .collect();

    Ok(IJEnumeration { merged, partitions })
}

/// Enumerates ordered splits of `set` into blocks of the given sizes, as
/// position groups, lexicographic in the chosen index subsets.
///
/// # Errors
/// Fails when the sizes do not sum to `set.len()`.
pub fn enumerate_splits<F: Scalar>(
    set: &ParamSet<F>,
    cardinalities: &[usize],
) -> Result<Vec<Vec<Vec<usize>>>, Error> {
    let total: usize = cardinalities.iter().sum();
    if total != set.len() {
        return Err(Error::Cardinality(format!(
            "block sizes sum to {total}, set has {}",
            set.len()
        )));
    }
    let all: Vec<usize> = (0..set.len()).collect();
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = Vec::with_capacity(cardinalities.len());
    fn recurse(
        remaining: &[usize],
        cards: &[usize],
        current: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        match cards.split_first() {
            None => out.push(current.clone()),
            Some((&c, rest_cards)) => {
                for block in remaining.iter().cloned().combinations(c) {
                    let rest: Vec<usize> = remaining
                        .iter()
                        .cloned()
                        .filter(|k| !block.contains(k))
                        .collect();
                    current.push(block);
                    recurse(&rest, rest_cards, current, out);
                    current.pop();
                }
            }
        }
    }
    recurse(&all, cardinalities, &mut current, &mut out);
    Ok(out)
}

/// The reordering map sending level `k` to position `N+1-k` shifted by
/// `-(N-k)c`; with it the highest coefficient obeys an exact reflection
/// symmetry.
pub fn mu_map<F: Scalar>(ts: &BetheIndex<F>, c: &Rat) -> BetheIndex<F> {
    let n_levels = ts.num_levels();
    let cf = F::from_rat(c);
    let mut levels = Vec::with_capacity(n_levels);
    for new_k in 1..=n_levels {
        let old = n_levels + 1 - new_k;
        // Shift by -(N - old)c = -(new_k - 1)c.
        let mut delta = F::zero();
        for _ in 0..(new_k - 1) {
            delta = delta.sub(&cf);
        }
        levels.push(ts.level(old).shifted(&delta));
    }
    BetheIndex::new(levels)
}

/// The graded reordering map: level `k` moves to position `N+1-k` shifted by
/// `+|k-m|c` in gl(m|n).
pub fn mu_map_graded<F: Scalar>(ts: &BetheIndex<F>, c: &Rat, m: usize) -> BetheIndex<F> {
    let n_levels = ts.num_levels();
    let cf = F::from_rat(c);
    let mut levels = Vec::with_capacity(n_levels);
    for new_k in 1..=n_levels {
        let old = n_levels + 1 - new_k;
        let steps = old.abs_diff(m);
        let mut delta = F::zero();
        for _ in 0..steps {
            delta = delta.add(&cf);
        }
        levels.push(ts.level(old).shifted(&delta));
    }
    BetheIndex::new(levels)
}

/// Binomial coefficient (small arguments), for partition-count checks.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat_int, Rat};

    fn set(vals: &[i64]) -> ParamSet<Rat> {
        ParamSet::new(vals.iter().map(|&v| rat_int(v)).collect()).unwrap()
    }

    #[test]
    fn param_set_is_canonical_and_duplicate_free() {
        let s = set(&[3, 1, 2]);
        assert_eq!(s.values(), &[rat_int(1), rat_int(2), rat_int(3)]);
        assert!(ParamSet::new(vec![rat_int(1), rat_int(1)]).is_err());
        assert!(set(&[1, 2]).union(&set(&[2, 3])).is_err());
    }

    #[test]
    fn boundary_levels_are_implicitly_empty() {
        let b = BetheIndex::new(vec![set(&[1]), set(&[4, 5])]);
        assert!(b.level(0).is_empty());
        assert_eq!(b.level(2).len(), 2);
        assert!(b.level(3).is_empty());
        assert_eq!(b.cardinalities(), vec![1, 2]);
    }

    /// Brute-force oracle: filter all ways of labelling each merged element
    /// I/II/III by the definition's cardinality constraints.
    fn brute_force_count(card_t: &[usize], p: usize, i: usize, j: usize) -> usize {
        let n_levels = card_t.len();
        let mut count = 1usize;
        for s in 1..=n_levels {
            let w = card_t[s - 1] + p;
            let need_i = if s < i { p } else { 0 };
            let need_iii = if s >= j { p } else { 0 };
            if need_i + need_iii > w {
                return 0;
            }
            let mut level_count = 0usize;
            // Enumerate labellings of w positions with exactly need_i "I"
            // and need_iii "III" labels.
            let masks = 3usize.pow(w as u32);
            for code in 0..masks {
                let mut c = code;
                let (mut a, mut b) = (0, 0);
                for _ in 0..w {
                    match c % 3 {
                        0 => a += 1,
                        1 => b += 1,
                        _ => {}
                    }
                    c /= 3;
                }
                if a == need_i && b == need_iii {
                    level_count += 1;
                }
            }
            count *= level_count;
        }
        count
    }

    #[test]
    fn ij_partition_counts_match_brute_force() {
        // Levels with 1 or 2 parameters, p = 1, all (i, j) pairs at N = 2.
        let ts = BetheIndex::new(vec![set(&[10]), set(&[20, 30])]);
        let zs = set(&[1]);
        for i in 1..=3 {
            for j in 1..=3 {
                let e = enumerate_ij_partitions(&ts, &zs, i, j).unwrap();
                let expect = brute_force_count(&[1, 2], 1, i, j);
                assert_eq!(e.partitions.len(), expect, "count at i={i} j={j}");
            }
        }
    }

    #[test]
    fn non_overlapping_counts_follow_the_binomial_product() {
        // For i <= j no level carries both constraints, so the count is
        // prod_{s<i} C(|w_s|, p) * prod_{s>=j} C(|w_s|, p).
        let ts = BetheIndex::new(vec![set(&[10, 11]), set(&[20]), set(&[30, 31])]);
        let zs = set(&[1, 2]);
        let p = 2;
        for i in 1..=4usize {
            for j in i..=4usize {
                let e = enumerate_ij_partitions(&ts, &zs, i, j).unwrap();
                let mut expect: u128 = 1;
                for s in 1..=3usize {
                    let w = ts.level(s).len() + p;
                    if s < i {
                        expect *= binomial(w, p);
                    }
                    if s >= j {
                        expect *= binomial(w, p);
                    }
                }
                assert_eq!(e.partitions.len() as u128, expect, "i={i} j={j}");
            }
        }
    }

    #[test]
    fn forced_and_empty_cases() {
        // i=1, j=N+1: everything stays in the middle subset.
        let ts = BetheIndex::new(vec![set(&[10]), set(&[20])]);
        let zs = set(&[1]);
        let e = enumerate_ij_partitions(&ts, &zs, 1, 3).unwrap();
        assert_eq!(e.partitions.len(), 1);
        for s in 1..=2 {
            let t = e.partitions[0].level(s);
            assert!(t.part_i.is_empty() && t.part_iii.is_empty());
            assert_eq!(t.part_ii.len(), e.merged[s].len());
        }

        // Annihilation on the empty index: no admissible partition.
        let empty = BetheIndex::<Rat>::empty(1);
        let e2 = enumerate_ij_partitions(&empty, &zs, 2, 1).unwrap();
        assert!(e2.partitions.is_empty());

        // All levels empty, creation operator: unique forced partition.
        let e3 = enumerate_ij_partitions(&BetheIndex::empty(2), &zs, 1, 3).unwrap();
        assert_eq!(e3.partitions.len(), 1);
    }

    #[test]
    fn splits_enumerate_position_blocks() {
        let s = set(&[1, 2]);
        let sp = enumerate_splits(&s, &[1, 1]).unwrap();
        assert_eq!(sp, vec![vec![vec![0], vec![1]], vec![vec![1], vec![0]]]);
        let s3 = set(&[1, 2, 3]);
        assert_eq!(enumerate_splits(&s3, &[3, 0]).unwrap().len(), 1);
        let s4 = set(&[1, 2, 3, 4]);
        assert_eq!(enumerate_splits(&s4, &[2, 2]).unwrap().len(), 6);
        assert!(enumerate_splits(&s4, &[1, 1]).is_err());
    }

    #[test]
    fn mu_map_matches_hand_example_and_double_application() {
        let c = rat_int(1);
        let ts = BetheIndex::new(vec![set(&[2]), set(&[5])]);
        let mapped = mu_map(&ts, &c);
        assert_eq!(mapped.level(1).values(), &[rat_int(5)]);
        assert_eq!(mapped.level(2).values(), &[rat_int(1)]);

        // Applying the map twice shifts every level by -(N-1)c.
        let twice = mu_map(&mapped, &c);
        for s in 1..=2 {
            let expect = ts.level(s).shifted(&-&c);
            assert_eq!(twice.level(s), expect);
        }

        // Single level: identity.
        let one = BetheIndex::new(vec![set(&[7])]);
        assert_eq!(mu_map(&one, &c), one);
    }

    #[test]
    fn graded_mu_map_shifts_away_from_the_middle() {
        let c = rat_int(1);
        // gl(2|1): N = 2, m = 2; level 1 shifts by |1-2|c, level 2 by 0.
        let ts = BetheIndex::new(vec![set(&[2]), set(&[5])]);
        let mapped = mu_map_graded(&ts, &c, 2);
        assert_eq!(mapped.level(1).values(), &[rat_int(5)]);
        assert_eq!(mapped.level(2).values(), &[rat_int(3)]);

        // gl(1|1): identity.
        let one = BetheIndex::new(vec![set(&[7])]);
        assert_eq!(mu_map_graded(&one, &c, 1), one);
    }
}
