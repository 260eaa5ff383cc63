//! Truncated generating series graded by degree, with `VPoly` coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{Rational, VPoly};
use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Coefficients of `s_η(t)`.
    Schur,
    /// Coefficients of `p_μ`.
    PowerSum,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Schur => "schur",
            Basis::PowerSum => "powersum",
        })
    }
}

/// A series `Σ_d Σ_{μ ⊢ d} c_μ(v) b_μ` truncated above `max_degree`.
///
/// Zero coefficients are never stored, so structural equality is equality of series.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedSeries {
    basis: Basis,
    arity: usize,
    max_degree: usize,
    data: BTreeMap<usize, BTreeMap<Partition, VPoly>>,
}

impl GradedSeries {
    pub fn zero(basis: Basis, arity: usize, max_degree: usize) -> Self {
        GradedSeries {
            basis,
            arity,
            max_degree,
            data: BTreeMap::new(),
        }
    }

    pub fn one(basis: Basis, arity: usize, max_degree: usize) -> Self {
        let mut s = GradedSeries::zero(basis, arity, max_degree);
        s.add_term(Partition::empty(), VPoly::one(arity));
        s
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Adds `c` to the coefficient of `index`; terms above the truncation are dropped.
    pub fn add_term(&mut self, index: Partition, c: VPoly) {
        assert_eq!(c.arity(), self.arity, "arity mismatch");
        let d = index.size();
        if d > self.max_degree || c.is_zero() {
            return;
        }
        let slice = self.data.entry(d).or_default();
        match slice.get_mut(&index) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    slice.remove(&index);
                }
            }
            None => {
                slice.insert(index, c);
            }
        }
        if slice.is_empty() {
            self.data.remove(&d);
        }
    }

    pub fn coeff(&self, index: &Partition) -> VPoly {
        self.data
            .get(&index.size())
            .and_then(|s| s.get(index))
            .cloned()
            .unwrap_or_else(|| VPoly::zero(self.arity))
    }

    /// The terms of degree `d`, in partition order.
    pub fn slice(&self, d: usize) -> impl Iterator<Item = (&Partition, &VPoly)> {
        self.data.get(&d).into_iter().flat_map(|s| s.iter())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &VPoly)> {
        self.data.values().flat_map(|s| s.iter())
    }

    pub fn len(&self) -> usize {
        self.data.values().map(|s| s.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Restriction to degrees `≤ max_degree`, with the new truncation recorded.
    pub fn truncate(&self, max_degree: usize) -> GradedSeries {
        let mut out = GradedSeries::zero(self.basis, self.arity, max_degree);
        for (p, c) in self.terms() {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> GradedSeries {
        let mut out = GradedSeries::zero(self.basis, self.arity, self.max_degree);
        for (p, v) in self.terms() {
            out.add_term(p.clone(), v.scale(c));
        }
        out
    }

    fn check_compatible(&self, other: &GradedSeries) {
        assert_eq!(self.basis, other.basis, "basis mismatch");
        assert_eq!(self.arity, other.arity, "arity mismatch");
    }

    pub fn add(&self, other: &GradedSeries) -> GradedSeries {
        self.check_compatible(other);
        let mut out = self.truncate(self.max_degree.min(other.max_degree));
        for (p, v) in other.terms() {
            out.add_term(p.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &GradedSeries) -> GradedSeries {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Product in the power-sum basis, where `p_λ p_μ = p_{λ ∪ μ}`.
    pub fn mul(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.check_compatible(other);
        self.require_powersum("multiplication")?;
        let max = self.max_degree.min(other.max_degree);
        let mut out = GradedSeries::zero(self.basis, self.arity, max);
        for (da, sa) in &self.data {
            for (db, sb) in &other.data {
                if da + db > max {
                    break;
                }
                for (pa, ca) in sa {
                    for (pb, cb) in sb {
                        out.add_term(pa.union(pb), ca * cb);
                    }
                }
            }
        }
        Ok(out)
    }

    fn require_powersum(&self, what: &str) -> Result<()> {
        if self.basis != Basis::PowerSum {
            return Err(Error::Contract(format!(
                "{what} needs the power-sum basis, got {}",
                self.basis
            )));
        }
        Ok(())
    }

    fn constant_term(&self) -> VPoly {
        self.coeff(&Partition::empty())
    }

    /// `log(1 + X) = Σ_{j ≥ 1} (-1)^{j+1} X^j / j` for a series with constant term 1.
    pub fn log(&self) -> Result<GradedSeries> {
        self.require_powersum("log")?;
        if self.constant_term() != VPoly::one(self.arity) {
            return Err(Error::Contract(
                "log needs degree-0 coefficient 1".to_string(),
            ));
        }
        let x = self.sub(&GradedSeries::one(self.basis, self.arity, self.max_degree));
        let mut out = GradedSeries::zero(self.basis, self.arity, self.max_degree);
        let mut power = x.clone();
        for j in 1..=self.max_degree {
            let sign = if j % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&Rational::new(BigInt::from(sign), BigInt::from(j))));
            power = power.mul(&x)?;
        }
        Ok(out)
    }

    /// `exp(X) = Σ_j X^j / j!` for a series with zero constant term.
    pub fn exp(&self) -> Result<GradedSeries> {
        self.require_powersum("exp")?;
        if !self.constant_term().is_zero() {
            return Err(Error::Contract(
                "exp needs degree-0 coefficient 0".to_string(),
            ));
        }
        let mut out = GradedSeries::one(self.basis, self.arity, self.max_degree);
        let mut term = GradedSeries::one(self.basis, self.arity, self.max_degree);
        for j in 1..=self.max_degree {
            term = term.mul(self)?.scale(&Rational::new(BigInt::one(), BigInt::from(j)));
            out = out.add(&term);
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_empty() || self.terms().all(|(_, c)| c.is_zero())
    }
}

impl Default for GradedSeries {
    fn default() -> Self {
        GradedSeries::zero(Basis::PowerSum, 1, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn scalar_log() {
        // log(1 + c p1) = c p1 - c^2 p1^2 / 2 at D = 2.
        let mut z = GradedSeries::one(Basis::PowerSum, 1, 2);
        z.add_term(p("1"), VPoly::var(1, 0));
        let l = z.log().unwrap();
        assert_eq!(l.coeff(&p("1")).to_text(), "v1");
        assert_eq!(l.coeff(&p("1,1")).to_text(), "-1/2*v1^2");
        assert_eq!(l.len(), 2);
    }

    #[test]
    fn degree_zero_preconditions() {
        let z = GradedSeries::zero(Basis::PowerSum, 1, 3);
        assert_eq!(z.log().unwrap_err().kind(), "contract_violation");
        let one = GradedSeries::one(Basis::PowerSum, 1, 3);
        assert_eq!(one.exp().unwrap_err().kind(), "contract_violation");
        let schur = GradedSeries::one(Basis::Schur, 1, 3);
        assert_eq!(schur.log().unwrap_err().kind(), "contract_violation");
    }

    #[test]
    fn truncation_drops_high_terms() {
        let mut s = GradedSeries::zero(Basis::PowerSum, 1, 2);
        s.add_term(p("3"), VPoly::one(1));
        assert!(s.is_empty());
        s.add_term(p("2"), VPoly::one(1));
        s.add_term(p("2"), VPoly::constant(1, int(-1)));
        assert!(s.is_empty());
    }

    #[test]
    fn product_concatenates_indices() {
        let mut a = GradedSeries::zero(Basis::PowerSum, 1, 5);
        a.add_term(p("2"), VPoly::constant(1, rat(1, 2)));
        let mut b = GradedSeries::zero(Basis::PowerSum, 1, 5);
        b.add_term(p("2,1"), VPoly::var(1, 0));
        let c = a.mul(&b).unwrap();
        assert_eq!(c.coeff(&p("2,2,1")).to_text(), "1/2*v1");
    }

    fn arb_series(arity: usize, max_degree: usize) -> impl Strategy<Value = GradedSeries> {
        let indices: Vec<Partition> = (1..=max_degree)
            .flat_map(|d| crate::partition::partitions_of(d, None))
            .collect();
        let n = indices.len();
        prop::collection::vec((-3i64..=3, 0u32..=2, 0..arity), n).prop_map(move |cs| {
            let mut s = GradedSeries::zero(Basis::PowerSum, arity, max_degree);
            for (idx, (c, e, var)) in indices.iter().zip(cs) {
                let v = VPoly::var(arity, var).pow(e).scale(&int(c));
                s.add_term(idx.clone(), v);
            }
            s
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn exp_log_round_trip(x in arb_series(2, 4)) {
            let z = x.exp().unwrap();
            prop_assert_eq!(z.log().unwrap(), x.clone());
            let one_plus = x.add(&GradedSeries::one(Basis::PowerSum, 2, 4));
            prop_assert_eq!(one_plus.log().unwrap().exp().unwrap(), one_plus);
        }
    }
}
