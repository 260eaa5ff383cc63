//! Brute-force enumeration of permutation tuples with prescribed cycle types.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::algebra::{factorial, Rational};
use crate::error::{Error, Result};
use crate::hurwitz::RamificationProfile;
use crate::partition::Partition;

pub const DEFAULT_MAX_DEGREE: usize = 6;

type Perm = Vec<u8>;

/// Raw tuple counts for a profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleCount {
    pub degree: usize,
    /// Tuples with product the identity.
    pub tuples: u64,
    /// Those tuples that also generate a transitive group.
    pub transitive: u64,
}

impl OracleCount {
    pub fn disconnected(&self) -> Rational {
        Rational::new(BigInt::from(self.tuples), factorial(self.degree))
    }

    pub fn connected(&self) -> Rational {
        Rational::new(BigInt::from(self.transitive), factorial(self.degree))
    }
}

/// Every permutation of `0..d` with cycle type `mu`, each exactly once.
///
/// Cycles are written starting at their smallest element and emitted in
/// increasing order of that element, which makes the decomposition canonical.
pub fn conjugacy_class(mu: &Partition) -> Vec<Perm> {
    let d = mu.size();
    let mut out = Vec::new();
    let mut perm = vec![u8::MAX; d];
    let mut used = vec![false; d];
    let mut remaining: Vec<usize> = mu.parts().to_vec();
    class_rec(&mut perm, &mut used, &mut remaining, &mut out);
    out
}

fn class_rec(perm: &mut Perm, used: &mut [bool], remaining: &mut Vec<usize>, out: &mut Vec<Perm>) {
    let Some(start) = used.iter().position(|&u| !u) else {
        out.push(perm.clone());
        return;
    };
    let mut lengths = remaining.clone();
    lengths.dedup();
    for len in lengths {
        let pos = remaining.iter().position(|&x| x == len).unwrap();
        remaining.remove(pos);
        used[start] = true;
        let mut cycle = vec![start];
        cycle_rec(perm, used, remaining, &mut cycle, len, out);
        used[start] = false;
        remaining.insert(pos, len);
    }
}

fn cycle_rec(
    perm: &mut Perm,
    used: &mut [bool],
    remaining: &mut Vec<usize>,
    cycle: &mut Vec<usize>,
    len: usize,
    out: &mut Vec<Perm>,
) {
    if cycle.len() == len {
        for w in 0..len {
            perm[cycle[w]] = cycle[(w + 1) % len] as u8;
        }
        class_rec(perm, used, remaining, out);
        for &c in cycle.iter() {
            perm[c] = u8::MAX;
        }
        return;
    }
    for x in 0..used.len() {
        if used[x] {
            continue;
        }
        used[x] = true;
        cycle.push(x);
        cycle_rec(perm, used, remaining, cycle, len, out);
        cycle.pop();
        used[x] = false;
    }
}

pub fn cycle_type(perm: &[u8]) -> Partition {
    let mut seen = vec![false; perm.len()];
    let mut parts = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        parts.push(len);
    }
    Partition::from_unsorted(parts)
}

/// `(a ∘ b)(i) = a(b(i))`.
fn compose(a: &[u8], b: &[u8]) -> Perm {
    b.iter().map(|&i| a[i as usize]).collect()
}

fn find(parent: &mut [u8], x: u8) -> u8 {
    let mut root = x;
    while parent[root as usize] != root {
        root = parent[root as usize];
    }
    let mut y = x;
    while parent[y as usize] != root {
        let next = parent[y as usize];
        parent[y as usize] = root;
        y = next;
    }
    root
}

fn is_transitive(d: usize, generators: &[&[u8]]) -> bool {
    let mut parent: Vec<u8> = (0..d as u8).collect();
    let mut components = d;
    for g in generators {
        for (i, &j) in g.iter().enumerate() {
            let a = find(&mut parent, i as u8);
            let b = find(&mut parent, j);
            if a != b {
                parent[a as usize] = b;
                components -= 1;
            }
        }
    }
    components <= 1
}

/// Enumerator with a guard on the permutation degree.
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    pub max_degree: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

impl Oracle {
    pub fn new(max_degree: usize) -> Self {
        Oracle { max_degree }
    }

    /// Counts tuples `(α_1, …, α_m)` with `α_i ∈ C_{μ⁽ⁱ⁾}` and `α_1 ⋯ α_m = e`.
    ///
    /// The first `m - 1` entries are enumerated; the last is forced.
    pub fn count(&self, rp: &RamificationProfile) -> Result<OracleCount> {
        let d = rp.degree();
        if d > self.max_degree {
            return Err(Error::SizeLimit {
                what: "oracle degree",
                value: d,
                limit: self.max_degree,
            });
        }
        let profiles = rp.profiles();
        let (last, free) = profiles.split_last().expect("profiles are nonempty");
        let identity: Perm = (0..d as u8).collect();
        if free.is_empty() {
            let hit = u64::from(cycle_type(&identity) == *last);
            return Ok(OracleCount {
                degree: d,
                tuples: hit,
                transitive: if d == 1 { hit } else { 0 },
            });
        }
        let classes: Vec<Vec<Perm>> = free.iter().map(conjugacy_class).collect();
        let (tuples, transitive) = classes[0]
            .par_iter()
            .map(|a| {
                let mut acc = (0u64, 0u64);
                let mut stack: Vec<&[u8]> = vec![a];
                walk(d, &classes[1..], a.clone(), &mut stack, last, &mut acc);
                acc
            })
            .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
        Ok(OracleCount {
            degree: d,
            tuples,
            transitive,
        })
    }

    pub fn disconnected(&self, rp: &RamificationProfile) -> Result<Rational> {
        Ok(self.count(rp)?.disconnected())
    }

    pub fn connected(&self, rp: &RamificationProfile) -> Result<Rational> {
        Ok(self.count(rp)?.connected())
    }
}

fn walk<'a>(
    d: usize,
    classes: &'a [Vec<Perm>],
    product: Perm,
    stack: &mut Vec<&'a [u8]>,
    last: &Partition,
    acc: &mut (u64, u64),
) {
    let Some((class, rest)) = classes.split_first() else {
        // The forced last entry is the inverse of `product`; the cycle type is shared.
        if cycle_type(&product) == *last {
            acc.0 += 1;
            // The forced entry lies in the group generated by the others.
            if is_transitive(d, stack) {
                acc.1 += 1;
            }
        }
        return;
    };
    for g in class {
        stack.push(g);
        walk(d, rest, compose(&product, g), stack, last, acc);
        stack.pop();
    }
}

/// `(1/d!)·#{tuples with product e}` with the default degree bound.
pub fn oracle_disconnected(rp: &RamificationProfile) -> Result<Rational> {
    Oracle::default().disconnected(rp)
}

/// As [`oracle_disconnected`], counting only tuples acting transitively on `{1..d}`.
pub fn oracle_connected(rp: &RamificationProfile) -> Result<Rational> {
    Oracle::default().connected(rp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};
    use crate::partition::partitions_of;
    use std::collections::HashSet;

    fn rp(s: &str) -> RamificationProfile {
        s.parse().unwrap()
    }

    #[test]
    fn class_sizes_and_uniqueness() {
        for d in 0..=6 {
            let mut all = HashSet::new();
            for mu in partitions_of(d, None) {
                let class = conjugacy_class(&mu);
                let expected = factorial(d) / mu.z_factor();
                assert_eq!(BigInt::from(class.len()), expected, "{mu}");
                for perm in class {
                    assert_eq!(cycle_type(&perm), mu);
                    assert!(all.insert(perm));
                }
            }
            assert_eq!(BigInt::from(all.len()), factorial(d));
        }
    }

    #[test]
    fn disconnected_examples() {
        assert_eq!(oracle_disconnected(&rp("2|2")).unwrap(), rat(1, 2));
        assert_eq!(oracle_disconnected(&rp("1,1|1,1")).unwrap(), rat(1, 2));
        assert_eq!(oracle_disconnected(&rp("3|3|3")).unwrap(), rat(1, 3));
        assert_eq!(oracle_disconnected(&rp("2")).unwrap(), int(0));
    }

    #[test]
    fn connected_examples() {
        assert_eq!(oracle_connected(&rp("2|2")).unwrap(), rat(1, 2));
        assert_eq!(oracle_connected(&rp("1,1|1,1")).unwrap(), int(0));
        assert_eq!(oracle_connected(&rp("1")).unwrap(), int(1));
        assert_eq!(oracle_connected(&rp("1|1")).unwrap(), int(1));
    }

    #[test]
    fn degree_bound_is_enforced() {
        let err = oracle_disconnected(&rp("7|7")).unwrap_err();
        assert_eq!(err.kind(), "size_limit");
        assert!(Oracle::new(7).count(&rp("7|1,1,1,1,1,1,1")).is_ok());
    }
}
