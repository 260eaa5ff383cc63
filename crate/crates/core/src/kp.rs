//! KP affine coordinates of `Z_(r)` and Zhou's formula for connected n-point functions.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{factorial, shifted_product, Rational, VPoly};
use crate::error::{Error, Result};
use crate::partition::Partition;

/// `a_{n,m} = (-1)^n / ((m+n+1) m! n!) · ∏_i ∏_{j=-n}^{m} (v_i + j)`, with `s = 1`.
pub fn affine_entry(r: usize, n: usize, m: usize) -> VPoly {
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let c = Rational::new(
        BigInt::from(sign),
        BigInt::from(m + n + 1) * factorial(m) * factorial(n),
    );
    shifted_product(r, -(n as i64), m as i64).scale(&c)
}

/// The entries `a_{n,m}` with `n + m + 1 ≤ max_weight`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMatrix {
    r: usize,
    max_weight: usize,
    entries: BTreeMap<(usize, usize), VPoly>,
}

impl AffineMatrix {
    pub fn arity(&self) -> usize {
        self.r
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn entry(&self, n: usize, m: usize) -> Option<&VPoly> {
        self.entries.get(&(n, m))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &VPoly)> {
        self.entries.iter()
    }
}

pub fn affine_coords(r: usize, max_weight: usize) -> AffineMatrix {
    let mut entries = BTreeMap::new();
    for w in 1..=max_weight {
        for n in 0..w {
            entries.insert((n, w - 1 - n), affine_entry(r, n, w - 1 - n));
        }
    }
    AffineMatrix {
        r,
        max_weight,
        entries,
    }
}

/// How the product over an l-cycle is closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleClosure {
    /// `σ(l+1) = σ(1)`: factors `Â(z_{c_0}, z_{c_1}) ⋯ Â(z_{c_{l-1}}, z_{c_0})`.
    Cyclic,
    /// `σ(l+1) = σ(l)`: the last factor is the diagonal `Â(z_{c_{l-1}}, z_{c_{l-1}})`.
    Literal,
}

/// One choice of term for a factor `Â(z_a, z_b)`.
#[derive(Clone, Copy, Debug)]
enum Term {
    /// `a_{n,m} z_a^{-n-1} z_b^{-m-1}`.
    Affine(usize, usize),
    /// A kernel monomial with sign `±1`.
    Kernel(i64),
}

struct Extraction<'a> {
    factors: &'a [(usize, usize)],
    /// Index of the last factor that mentions each variable.
    last_use: Vec<usize>,
    target: Vec<i64>,
    max_weight: usize,
    kernel_bound: i64,
}

/// Signed counts of A-term multisets, `sorted (n, m) list → Σ signs`.
type Groups = HashMap<Vec<(usize, usize)>, i64>;
type GroupEntry = (Vec<(usize, usize)>, i64);

impl Extraction<'_> {
    fn run(&self) -> Groups {
        let mut groups = Groups::new();
        let mut exps = vec![0i64; self.target.len()];
        let mut chosen = Vec::new();
        self.dfs(0, &mut exps, &mut chosen, 1, self.budget_total(), &mut groups);
        groups
    }

    fn budget_total(&self) -> usize {
        // Σ_A (n + m + 1) equals |μ|, which is Σ over the targets of (-t - 1).
        self.target.iter().map(|t| (-t - 1) as usize).sum()
    }

    /// Exponent still needed by `v` when `i` is its completing factor.
    fn needed(&self, v: usize, exps: &[i64]) -> i64 {
        self.target[v] - exps[v]
    }

    fn dfs(
        &self,
        i: usize,
        exps: &mut Vec<i64>,
        chosen: &mut Vec<(usize, usize)>,
        sign: i64,
        budget: usize,
        groups: &mut Groups,
    ) {
        if i == self.factors.len() {
            if budget == 0 && exps == &self.target {
                let mut key = chosen.clone();
                key.sort_unstable();
                *groups.entry(key).or_insert(0) += sign;
            }
            return;
        }
        let (a, b) = self.factors[i];
        let a_done = self.last_use[a] == i;
        let b_done = self.last_use[b] == i;
        for (term, ea, eb) in self.candidates(i, exps, budget) {
            exps[a] += ea;
            exps[b] += eb;
            let ok = (!a_done || exps[a] == self.target[a]) && (!b_done || exps[b] == self.target[b]);
            if ok {
                match term {
                    Term::Affine(n, m) => {
                        chosen.push((n, m));
                        self.dfs(i + 1, exps, chosen, sign, budget - (n + m + 1), groups);
                        chosen.pop();
                    }
                    Term::Kernel(s) => {
                        self.dfs(i + 1, exps, chosen, sign * s, budget, groups);
                    }
                }
            }
            exps[a] -= ea;
            exps[b] -= eb;
        }
    }

    /// Terms of factor `i` with the exponents they give to `(a, b)`; constrained
    /// parameters are solved from the variables this factor completes.
    fn candidates(&self, i: usize, exps: &[i64], budget: usize) -> Vec<(Term, i64, i64)> {
        let (a, b) = self.factors[i];
        let cap = budget.min(self.max_weight);
        let mut out = Vec::new();
        if a == b {
            // Diagonal: only A(z_a, z_a), both exponents on `a`.
            let fixed = (self.last_use[a] == i).then(|| self.needed(a, exps));
            for w in 1..=cap {
                if let Some(need) = fixed {
                    if need != -(w as i64) - 1 {
                        continue;
                    }
                }
                for n in 0..w {
                    let m = w - 1 - n;
                    out.push((Term::Affine(n, m), -(n as i64) - 1, -(m as i64) - 1));
                }
            }
            return out;
        }
        let need_a = (self.last_use[a] == i).then(|| self.needed(a, exps));
        let need_b = (self.last_use[b] == i).then(|| self.needed(b, exps));

        // Affine part: a gets -n-1, b gets -m-1.
        let ns: Vec<usize> = match need_a {
            Some(t) if t <= -1 => vec![(-t - 1) as usize],
            Some(_) => vec![],
            None => (0..cap).collect(),
        };
        for n in ns {
            let ms: Vec<usize> = match need_b {
                Some(t) if t <= -1 => vec![(-t - 1) as usize],
                Some(_) => vec![],
                None => (0..cap.saturating_sub(n)).collect(),
            };
            for m in ms {
                if n + m < cap {
                    out.push((Term::Affine(n, m), -(n as i64) - 1, -(m as i64) - 1));
                }
            }
        }

        // Kernel part. For a < b: Σ_k z_a^{-1-k} z_b^k; for a > b: -Σ_k z_a^k z_b^{-1-k}.
        let (neg, pos, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
        let need_neg = if neg == a { need_a } else { need_b };
        let need_pos = if pos == a { need_a } else { need_b };
        let ks: Vec<i64> = match (need_neg, need_pos) {
            (Some(t), _) => vec![-t - 1],
            (None, Some(t)) => vec![t],
            (None, None) => (0..=self.kernel_bound).collect(),
        };
        for k in ks {
            if k < 0 {
                continue;
            }
            let (ea, eb) = if a < b { (-1 - k, k) } else { (k, -1 - k) };
            out.push((Term::Kernel(s), ea, eb));
        }
        out
    }
}

fn cycles_through_zero(l: usize) -> Vec<Vec<usize>> {
    let mut rest: Vec<usize> = (1..l).collect();
    let mut out = Vec::new();
    permute(&mut rest, 0, &mut out);
    out.into_iter()
        .map(|p| std::iter::once(0).chain(p).collect())
        .collect()
}

fn permute(xs: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == xs.len() {
        out.push(xs.clone());
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permute(xs, k + 1, out);
        xs.swap(k, i);
    }
}

fn cycle_factors(c: &[usize], closure: CycleClosure) -> Vec<(usize, usize)> {
    let l = c.len();
    (0..l)
        .map(|i| match closure {
            CycleClosure::Cyclic => (c[i], c[(i + 1) % l]),
            CycleClosure::Literal => (c[i], c[(i + 1).min(l - 1)]),
        })
        .collect()
}

/// `Σ_k N°_k(μ) ∏ v_i^{k_i}` by Zhou's formula with cyclic closure.
pub fn zhou_npoint(mu: &Partition, am: &AffineMatrix) -> Result<VPoly> {
    zhou_npoint_with(mu, am, CycleClosure::Cyclic)
}

pub fn zhou_npoint_with(mu: &Partition, am: &AffineMatrix, closure: CycleClosure) -> Result<VPoly> {
    if mu.size() > am.max_weight() {
        return Err(Error::SizeLimit {
            what: "|μ| against the affine truncation",
            value: mu.size(),
            limit: am.max_weight(),
        });
    }
    let mut total = VPoly::zero(am.arity());
    for (key, count) in zhou_groups(mu, am.max_weight(), closure)? {
        let mut term = VPoly::constant(am.arity(), Rational::from_integer(BigInt::from(count)));
        for (n, m) in key {
            term = &term * am.entry(n, m).expect("entry within truncation");
        }
        total += &term;
    }
    Ok(total.scale(&zhou_prefactor(mu)))
}

/// `(-1)^{l-1} / z_μ`.
fn zhou_prefactor(mu: &Partition) -> Rational {
    let sign = if mu.length() % 2 == 1 { 1 } else { -1 };
    Rational::new(BigInt::from(sign), mu.z_factor())
}

/// Signed multiplicities of the A-term multisets surviving extraction, in key order.
fn zhou_groups(mu: &Partition, max_weight: usize, closure: CycleClosure) -> Result<Vec<GroupEntry>> {
    let l = mu.length();
    if l == 0 {
        return Err(Error::Contract("the n-point function needs l(μ) ≥ 1".into()));
    }
    let target: Vec<i64> = mu.parts().iter().map(|&p| -(p as i64) - 1).collect();
    let groups = cycles_through_zero(l)
        .into_par_iter()
        .map(|c| {
            let factors = cycle_factors(&c, closure);
            let mut last_use = vec![0; l];
            for (i, &(a, b)) in factors.iter().enumerate() {
                last_use[a] = i;
                last_use[b] = i;
            }
            let ex = Extraction {
                factors: &factors,
                last_use,
                target: target.clone(),
                max_weight,
                kernel_bound: 2 * (mu.size() + max_weight) as i64,
            };
            ex.run()
        })
        .reduce(Groups::new, |mut x, y| {
            for (k, v) in y {
                *x.entry(k).or_insert(0) += v;
            }
            x
        });
    let mut keys: Vec<_> = groups.into_iter().filter(|(_, c)| *c != 0).collect();
    keys.sort();
    Ok(keys)
}

/// The coefficient of `∏ v_i^{e_i}` in [`zhou_npoint`] for arity `exps.len()`.
///
/// Every `a_{n,m}` is a constant times `∏_i f_{n,m}(v_i)` for one univariate `f_{n,m}`,
/// so each product of entries is handled in a single variable.
pub fn zhou_coefficient(mu: &Partition, exps: &[u32]) -> Result<Rational> {
    if exps.is_empty() {
        return Err(Error::Contract("need at least one variable".into()));
    }
    let mut total = Rational::zero();
    for (key, count) in zhou_groups(mu, mu.size(), CycleClosure::Cyclic)? {
        let mut c = Rational::from_integer(BigInt::from(count));
        let mut f = VPoly::one(1);
        for &(n, m) in &key {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            c *= Rational::new(
                BigInt::from(sign),
                BigInt::from(m + n + 1) * factorial(m) * factorial(n),
            );
            f = &f * &shifted_product(1, -(n as i64), m as i64);
        }
        for &e in exps {
            c *= f.coeff(&[e]);
        }
        total += c;
    }
    Ok(total * zhou_prefactor(mu))
}

/// `(1/n) Σ_{k+l=n-1} (-1)^k ∏_i ∏_{j=-k}^{l} (v_i + j) / ((k+l+1) k! l!)`.
pub fn one_point_closed(n: usize, r: usize) -> VPoly {
    assert!(n >= 1, "part size must be positive");
    let mut out = VPoly::zero(r);
    for k in 0..n {
        out += &affine_entry(r, k, n - 1 - k);
    }
    out.scale(&Rational::new(BigInt::one(), BigInt::from(n)))
}

/// The two-point function for `μ = (n₁, n₂)` from the kernel-difference and A·A sums.
pub fn two_point_closed(n1: usize, n2: usize, r: usize) -> VPoly {
    assert!(n1 >= n2 && n2 >= 1, "need n1 ≥ n2 ≥ 1");
    let sign = |e: usize| if e.is_multiple_of(2) { 1 } else { -1 };
    let mut bracket = VPoly::zero(r);
    for k in 0..n1 {
        let den = BigInt::from(n1 + n2) * factorial(n1 - 1 - k) * factorial(n2 + k);
        let first = shifted_product(r, k as i64 + 1 - n1 as i64, (n2 + k) as i64)
            .scale(&Rational::new(BigInt::from(sign(n1 - 1 - k)), den.clone()));
        let second = shifted_product(r, -((n2 + k) as i64), (n1 - 1 - k) as i64)
            .scale(&Rational::new(BigInt::from(sign(n2 + k)), den));
        bracket = &(&bracket + &first) - &second;
    }
    for l in 0..n1 {
        for k in 0..n2 {
            let left = shifted_product(r, l as i64 + 1 - n1 as i64, (n2 - 1 - k) as i64).scale(
                &Rational::new(
                    BigInt::from(sign(n1 - 1 - l)),
                    BigInt::from(n1 + n2 - k - l - 1) * factorial(n2 - 1 - k) * factorial(n1 - 1 - l),
                ),
            );
            let right = shifted_product(r, -(k as i64), l as i64).scale(&Rational::new(
                BigInt::from(sign(k)),
                BigInt::from(l + k + 1) * factorial(l) * factorial(k),
            ));
            bracket = &bracket - &(&left * &right);
        }
    }
    let delta = if n1 == n2 { 2 } else { 1 };
    bracket.scale(&Rational::new(BigInt::one(), BigInt::from(n1 * n2 * delta)))
}
