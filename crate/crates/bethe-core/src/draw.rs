//! Seeded deterministic rationals for generic-parameter draws.
//!
//! Tests, the verify suites, and the free-functional model mode all need
//! reproducible "generic" rationals. Draws are keyed by a seed plus a
//! structural tag, so they are independent of evaluation order, and a
//! rejection rule keeps all pairwise differences away from `0, ±c, ...,
//! ±kc`, the coincidences that create accidental kernel poles.

use crate::exactmath::{rat, Rat};
use num_traits::Zero;

/// 64-bit FNV-1a hash of a structural key.
fn fnv1a(key: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in key.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// SplitMix64 stream seeded from a hash; the standard mixer, good enough
/// for test-data generation and fully deterministic.
#[derive(Debug, Clone)]
pub struct DetStream {
    state: u64,
}

impl DetStream {
    /// Streams keyed by `(seed, tag)`.
    pub fn new(seed: u64, tag: &str) -> Self {
        DetStream {
            state: fnv1a(&format!("{seed}:{tag}")),
        }
    }

    /// Next raw 64-bit value.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..bound` (`bound > 0`).
    pub fn next_below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// A small rational with numerator in `[-60, 60]` and denominator from a
    /// fixed set of small primes.
    pub fn next_rat(&mut self) -> Rat {
        const DENS: [i64; 5] = [1, 2, 3, 5, 7];
        let num = self.next_below(121) as i64 - 60;
        let den = DENS[self.next_below(DENS.len() as u64) as usize];
        rat(num, den)
    }

    /// A small nonzero rational.
    pub fn next_nonzero_rat(&mut self) -> Rat {
        loop {
            let r = self.next_rat();
            if !r.is_zero() {
                return r;
            }
        }
    }
}

/// A single deterministic nonzero rational keyed by `(seed, tag)`.
pub fn draw_nonzero_rat(seed: u64, tag: &str) -> Rat {
    DetStream::new(seed, tag).next_nonzero_rat()
}

/// True when `candidate` keeps all pairwise differences with `pool` outside
/// `{0, ±c, ..., ±max_mult·c}`.
fn is_generic(candidate: &Rat, pool: &[Rat], c: &Rat, max_mult: u32) -> bool {
    for p in pool {
        let d = candidate - p;
        for k in 0..=max_mult {
            let kc = Rat::from_integer(k.into()) * c;
            if d == kc || d == -kc {
                return false;
            }
        }
    }
    true
}

/// Draws `count` rationals, deterministic in `(seed, tag)`, rejecting any
/// candidate whose difference with an existing value (from `avoid` or drawn
/// earlier) is a multiple `k·c` with `|k| <= max_mult`. This keeps every
/// kernel evaluation over the drawn parameters (including after shifts by up
/// to `max_mult` steps of `c`) away from poles.
pub fn draw_generic(
    seed: u64,
    tag: &str,
    count: usize,
    c: &Rat,
    max_mult: u32,
    avoid: &[Rat],
) -> Vec<Rat> {
    let mut stream = DetStream::new(seed, tag);
    let mut pool: Vec<Rat> = avoid.to_vec();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let cand = stream.next_rat();
        if is_generic(&cand, &pool, c, max_mult) {
            pool.push(cand.clone());
            out.push(cand);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat_int;

    #[test]
    fn draws_are_deterministic_and_tag_sensitive() {
        let a = draw_generic(7, "x", 4, &rat_int(1), 3, &[]);
        let b = draw_generic(7, "x", 4, &rat_int(1), 3, &[]);
        let c = draw_generic(7, "y", 4, &rat_int(1), 3, &[]);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejection_keeps_differences_off_the_lattice() {
        let c = rat(1, 1);
        let avoid = vec![rat_int(2)];
        let vals = draw_generic(11, "t", 6, &c, 4, &avoid);
        let mut all = avoid.clone();
        all.extend(vals.iter().cloned());
        for (i, a) in all.iter().enumerate() {
            for b in all.iter().skip(i + 1) {
                let d = a - b;
                for k in 0..=4 {
                    let kc = rat_int(k) * &c;
                    assert_ne!(d, kc, "difference hit {k}c");
                    assert_ne!(d, -kc, "difference hit -{k}c");
                }
            }
        }
    }
}
