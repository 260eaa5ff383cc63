//! Disconnected and connected Hurwitz-type correlators of generalized dessins.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{factorial, Rational, VPoly};
use crate::characters::CharCache;
use crate::error::{Error, Result};
use crate::partition::{partitions_of, Partition};
use crate::series::{Basis, GradedSeries};

/// Cycle types `(μ⁽¹⁾, …, μ⁽ᵐ⁾)` of a tuple of permutations of a common degree `d ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RamificationProfile {
    profiles: Vec<Partition>,
}

impl RamificationProfile {
    pub fn new(profiles: Vec<Partition>) -> Result<Self> {
        let Some(first) = profiles.first() else {
            return Err(Error::Contract("a ramification profile needs at least one partition".into()));
        };
        let d = first.size();
        if d == 0 {
            return Err(Error::Contract("ramification profiles need degree d ≥ 1".into()));
        }
        if let Some(bad) = profiles.iter().find(|p| p.size() != d) {
            return Err(Error::Contract(format!(
                "profile {bad} has size {}, expected {d}",
                bad.size()
            )));
        }
        Ok(RamificationProfile { profiles })
    }

    pub fn profiles(&self) -> &[Partition] {
        &self.profiles
    }

    pub fn degree(&self) -> usize {
        self.profiles[0].size()
    }

    pub fn genus(&self) -> Genus {
        let m = self.profiles.len() as i64;
        let lengths: i64 = self.profiles.iter().map(|p| p.length() as i64).sum();
        Genus::from_twice(2 + self.degree() as i64 * (m - 2) - lengths)
    }
}

impl fmt::Display for RamificationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.profiles.iter().map(|p| p.to_text()).collect();
        f.write_str(&parts.join("|"))
    }
}

/// `|`-separated partitions, e.g. `"2|2"` or `"3|2,1|2,1"`.
impl FromStr for RamificationProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let profiles = s
            .split('|')
            .map(str::parse)
            .collect::<Result<Vec<Partition>>>()?;
        RamificationProfile::new(profiles)
    }
}

/// Genus solved from the Riemann–Hurwitz relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Genus {
    Valid(u64),
    Negative(i64),
    /// `2g` is odd; carries `2g`.
    HalfInteger(i64),
}

impl Genus {
    fn from_twice(twice: i64) -> Genus {
        if twice.rem_euclid(2) == 1 {
            Genus::HalfInteger(twice)
        } else if twice < 0 {
            Genus::Negative(twice / 2)
        } else {
            Genus::Valid((twice / 2) as u64)
        }
    }

    /// Whether a connected covering with this data can exist.
    pub fn is_admissible(&self) -> bool {
        matches!(self, Genus::Valid(_))
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genus::Valid(g) => write!(f, "{g}"),
            Genus::Negative(g) => write!(f, "{g} (negative)"),
            Genus::HalfInteger(t) => write!(f, "{t}/2 (non-integral)"),
        }
    }
}

/// `2g - 2 = d(r - 1) - Σ k_i - l(μ)` for `r` profiles with `k_i` parts over `μ`.
pub fn riemann_hurwitz_genus(r: usize, k: &[usize], mu: &Partition) -> Genus {
    let ksum: i64 = k.iter().map(|&x| x as i64).sum();
    let twice = 2 + mu.size() as i64 * (r as i64 - 1) - ksum - mu.length() as i64;
    Genus::from_twice(twice)
}

/// Burnside character formula for `H•`.
pub fn burnside_disconnected(rp: &RamificationProfile, cache: &CharCache) -> Result<Rational> {
    let d = rp.degree();
    let table = cache.table(d)?;
    let fact = factorial(d);
    let class_sizes: Vec<BigInt> = rp.profiles().iter().map(|p| &fact / p.z_factor()).collect();
    let total = table
        .partitions()
        .par_iter()
        .map(|eta| {
            let dim = eta.dim_irrep();
            let mut term = Rational::new(dim.clone() * &dim, fact.clone() * &fact);
            for (p, size) in rp.profiles().iter().zip(&class_sizes) {
                term *= Rational::new(size * BigInt::from(table.chi(eta, p)), dim.clone());
            }
            term
        })
        .reduce(Rational::zero, |a, b| a + b);
    Ok(total)
}

fn check_counts(r: usize, k: &[usize]) -> Result<()> {
    if r == 0 {
        return Err(Error::Contract("arity r must be at least 1".into()));
    }
    if k.len() != r {
        return Err(Error::Contract(format!(
            "expected {r} preimage counts, got {}",
            k.len()
        )));
    }
    Ok(())
}

/// `N•_{k}(μ)`: Burnside sum with the profiles over `1..r` summed over fixed lengths `k_i`.
pub fn n_bullet(r: usize, k: &[usize], mu: &Partition, cache: &CharCache) -> Result<Rational> {
    check_counts(r, k)?;
    let d = mu.size();
    if d == 0 {
        let all_zero = k.iter().all(|&x| x == 0);
        return Ok(if all_zero { Rational::one() } else { Rational::zero() });
    }
    if k.iter().any(|&x| x == 0 || x > d) {
        return Ok(Rational::zero());
    }
    let table = cache.table(d)?;
    let fact = factorial(d);
    let z_mu = mu.z_factor();
    let total = table
        .partitions()
        .par_iter()
        .map(|eta| {
            let chi = table.chi(eta, mu);
            if chi == 0 {
                return Rational::zero();
            }
            let w = Rational::new(fact.clone(), eta.dim_irrep()).pow(r as i32 - 1);
            let mut term = w * Rational::new(BigInt::from(chi), z_mu.clone());
            for &ki in k {
                term *= table.length_sum(eta, ki);
            }
            term
        })
        .reduce(Rational::zero, |a, b| a + b);
    Ok(total)
}

/// `Z_(r) = Σ_μ Σ_k N•_k(μ) ∏ v_i^{k_i} p_μ` through degree `max_degree`.
pub fn disconnected_series(r: usize, max_degree: usize, cache: &CharCache) -> Result<GradedSeries> {
    let mut out = GradedSeries::one(Basis::PowerSum, r, max_degree);
    for d in 1..=max_degree {
        let table = cache.table(d)?;
        let fact = factorial(d);
        // Per η: (d!/dim)^{r-1} ∏_i L_η(v_i), with L_η(v) = Σ_k lengthsum(η, k) v^k.
        let weights: Vec<VPoly> = table
            .partitions()
            .par_iter()
            .map(|eta| {
                let mut l = VPoly::zero(1);
                for k in 1..=d {
                    l += &VPoly::var(1, 0).pow(k as u32).scale(&table.length_sum(eta, k));
                }
                let mut prod = VPoly::one(r);
                for i in 0..r {
                    prod = &prod * &l.embed(r, &[i]);
                }
                let w = Rational::new(fact.clone(), eta.dim_irrep()).pow(r as i32 - 1);
                prod.scale(&w)
            })
            .collect();
        let coeffs: Vec<(Partition, VPoly)> = partitions_of(d, None)
            .into_par_iter()
            .map(|mu| {
                let z = mu.z_factor();
                let mut c = VPoly::zero(r);
                for (eta, w) in table.partitions().iter().zip(&weights) {
                    let chi = table.chi(eta, &mu);
                    if chi != 0 {
                        c += &w.scale(&Rational::new(BigInt::from(chi), z.clone()));
                    }
                }
                (mu, c)
            })
            .collect();
        for (mu, c) in coeffs {
            out.add_term(mu, c);
        }
    }
    Ok(out)
}

/// `log Z_(r)` through degree `max_degree`: the coefficient of `p_μ` is `Σ_k N°_k(μ) ∏ v_i^{k_i}`.
pub fn connected_series(r: usize, max_degree: usize, cache: &CharCache) -> Result<GradedSeries> {
    disconnected_series(r, max_degree, cache)?.log()
}

/// `N°_k(μ)`, read off `log Z_(r)`.
pub fn n_circ(r: usize, k: &[usize], mu: &Partition, cache: &CharCache) -> Result<Rational> {
    check_counts(r, k)?;
    let d = mu.size();
    if d == 0 || k.iter().any(|&x| x == 0 || x > d) {
        return Ok(Rational::zero());
    }
    let exps: Vec<u32> = k.iter().map(|&x| x as u32).collect();
    Ok(connected_series(r, d, cache)?.coeff(mu).coeff(&exps))
}
