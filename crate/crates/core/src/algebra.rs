//! Exact rationals and sparse polynomials in the bookkeeping variables `v1..vr`.
//!
//! Every quantity in the crate is exact. [`VPoly`] keeps its terms in a
//! `BTreeMap` keyed by [`Monomial`], whose order is graded lexicographic, so
//! iteration and the text rendering are canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient `C(n, k)` for a (possibly negative) integer `n`.
pub fn binomial(n: i64, k: usize) -> Rational {
    let mut num = BigInt::one();
    for j in 0..k as i64 {
        num *= BigInt::from(n - j);
    }
    Rational::new(num, factorial(k))
}

/// Exponent vector of a monomial. Ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn unit(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn product(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over the rationals in a fixed number of variables.
///
/// No zero coefficient is ever stored, so structural equality is polynomial
/// equality. Binary operations between polynomials of different arity are a
/// contract violation and panic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VPoly {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl VPoly {
    pub fn zero(arity: usize) -> Self {
        VPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = VPoly::zero(arity);
        p.add_term(Monomial::unit(arity), c);
        p
    }

    pub fn one(arity: usize) -> Self {
        VPoly::constant(arity, Rational::one())
    }

    /// The variable `v_{index+1}` (zero-based index).
    pub fn var(arity: usize, index: usize) -> Self {
        assert!(index < arity, "variable index {index} out of range for arity {arity}");
        let mut exps = vec![0; arity];
        exps[index] = 1;
        VPoly::monomial(Monomial(exps), Rational::one())
    }

    /// `v_{index+1} + c`.
    pub fn linear(arity: usize, index: usize, c: Rational) -> Self {
        &VPoly::var(arity, index) + &VPoly::constant(arity, c)
    }

    pub fn monomial(exps: Monomial, c: Rational) -> Self {
        let mut p = VPoly::zero(exps.0.len());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = VPoly::zero(arity);
        for (m, c) in terms {
            assert_eq!(m.0.len(), arity, "monomial length does not match arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// The constant term, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> VPoly {
        if c.is_zero() {
            return VPoly::zero(self.arity);
        }
        VPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> VPoly {
        let mut acc = VPoly::one(self.arity);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at a point. Panics if the point length differs from the arity.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(
            point.len(),
            self.arity,
            "evaluation point has length {} but arity is {}",
            point.len(),
            self.arity
        );
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }

    /// Re-embed into a larger arity; variable `i` maps to `positions[i]`.
    pub fn embed(&self, arity: usize, positions: &[usize]) -> VPoly {
        assert_eq!(positions.len(), self.arity);
        let mut out = VPoly::zero(arity);
        for (m, c) in &self.terms {
            let mut exps = vec![0; arity];
            for (i, &e) in m.0.iter().enumerate() {
                exps[positions[i]] += e;
            }
            out.add_term(Monomial(exps), c.clone());
        }
        out
    }

    /// Canonical text with variables `v1..vr`.
    pub fn to_text(&self) -> String {
        let names: Vec<String> = (1..=self.arity).map(|i| format!("v{i}")).collect();
        self.render(&names)
    }

    /// Text rendering, highest graded-lex term first, e.g. `v1^2*v2 - 1/2*v1 + 3`.
    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        assert_eq!(names.len(), self.arity);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        names[j].as_ref().to_string()
                    } else {
                        format!("{}^{}", names[j].as_ref(), e)
                    }
                })
                .collect();
            if vars.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }

    fn check_arity(&self, other: &VPoly) {
        assert_eq!(
            self.arity, other.arity,
            "arity mismatch: {} vs {}",
            self.arity, other.arity
        );
    }
}

impl fmt::Display for VPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl AddAssign<&VPoly> for VPoly {
    fn add_assign(&mut self, rhs: &VPoly) {
        self.check_arity(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add for &VPoly {
    type Output = VPoly;
    fn add(self, rhs: &VPoly) -> VPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for VPoly {
    type Output = VPoly;
    fn add(mut self, rhs: VPoly) -> VPoly {
        self += &rhs;
        self
    }
}

impl Neg for &VPoly {
    type Output = VPoly;
    fn neg(self) -> VPoly {
        VPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &VPoly {
    type Output = VPoly;
    fn sub(self, rhs: &VPoly) -> VPoly {
        self + &(-rhs)
    }
}

impl Mul for &VPoly {
    type Output = VPoly;
    fn mul(self, rhs: &VPoly) -> VPoly {
        self.check_arity(rhs);
        let mut out = VPoly::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.product(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for VPoly {
    type Output = VPoly;
    fn mul(self, rhs: VPoly) -> VPoly {
        &self * &rhs
    }
}

/// `e_j(v_1, ..., v_r)`, with `e_0 = 1`. Panics if `j > r`.
pub fn elementary_symmetric(r: usize, j: usize) -> VPoly {
    assert!(j <= r, "elementary symmetric degree {j} exceeds arity {r}");
    let mut out = VPoly::zero(r);
    let mut chosen = Vec::with_capacity(j);
    fn rec(r: usize, j: usize, start: usize, chosen: &mut Vec<usize>, out: &mut VPoly) {
        if chosen.len() == j {
            let mut exps = vec![0; r];
            for &i in chosen.iter() {
                exps[i] = 1;
            }
            out.add_term(Monomial(exps), Rational::one());
            return;
        }
        for i in start..r {
            chosen.push(i);
            rec(r, j, i + 1, chosen, out);
            chosen.pop();
        }
    }
    rec(r, j, 0, &mut chosen, &mut out);
    out
}

/// `∏_{i=1}^{r} ∏_{j=lo}^{hi} (v_i + j)`; the empty range gives 1.
pub fn shifted_product(r: usize, lo: i64, hi: i64) -> VPoly {
    let mut univariate = VPoly::one(1);
    for j in lo..=hi {
        univariate = &univariate * &VPoly::linear(1, 0, int(j));
    }
    product_over_variables(&univariate, r)
}

/// `∏_{i=1}^{r} f(v_i)` for a univariate `f`.
pub fn product_over_variables(f: &VPoly, r: usize) -> VPoly {
    assert_eq!(f.arity(), 1);
    let mut out = VPoly::one(r);
    for i in 0..r {
        out = &out * &f.embed(r, &[i]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(arity: usize, i: usize) -> VPoly {
        VPoly::var(arity, i)
    }

    #[test]
    fn difference_of_squares() {
        let one = VPoly::one(1);
        let p = &(&v(1, 0) + &one) * &(&v(1, 0) - &one);
        let expected = &v(1, 0).pow(2) - &one;
        assert_eq!(p, expected);
        assert_eq!(p.to_text(), "v1^2 - 1");
    }

    #[test]
    fn additive_identity_and_monomial_product() {
        let p = &v(2, 0) + &VPoly::constant(2, rat(1, 3));
        assert_eq!(&p + &VPoly::zero(2), p);
        let m = &v(2, 0) * &v(2, 1);
        assert_eq!((&m * &m).coeff(&[2, 2]), int(1));
        assert_eq!((&m * &m).len(), 1);
    }

    #[test]
    fn evaluation() {
        let m = &v(2, 0) * &v(2, 1);
        assert_eq!(m.eval(&[int(2), int(3)]), int(6));
        assert_eq!(VPoly::constant(3, rat(1, 3)).eval(&[int(5), int(-1), int(7)]), rat(1, 3));
        assert_eq!(elementary_symmetric(3, 2).eval(&[int(1), int(1), int(1)]), int(3));
    }

    #[test]
    #[should_panic(expected = "length")]
    fn evaluation_length_mismatch_panics() {
        VPoly::one(2).eval(&[int(1)]);
    }

    #[test]
    #[should_panic(expected = "arity mismatch")]
    fn arity_mismatch_panics() {
        let _ = &VPoly::one(2) + &VPoly::one(3);
    }

    #[test]
    fn elementary_symmetric_examples() {
        assert_eq!(elementary_symmetric(3, 3), &(&v(3, 0) * &v(3, 1)) * &v(3, 2));
        assert_eq!(elementary_symmetric(2, 1), &v(2, 0) + &v(2, 1));
        assert_eq!(elementary_symmetric(4, 0), VPoly::one(4));
    }

    #[test]
    #[should_panic]
    fn elementary_symmetric_rejects_large_degree() {
        elementary_symmetric(2, 3);
    }

    #[test]
    fn rendering_is_graded_lex_descending() {
        let p = &(&v(2, 0).pow(2) * &VPoly::constant(2, rat(-1, 2))) + &(&v(2, 1) + &VPoly::constant(2, int(3)));
        assert_eq!(p.to_text(), "-1/2*v1^2 + v2 + 3");
        assert_eq!(VPoly::zero(2).to_text(), "0");
    }

    #[test]
    fn product_of_linear_factors_gives_elementary_symmetric() {
        // prod_i (x + v_i) with x as the last variable equals sum_j x^(r-j) e_j(v).
        for r in 1..=5 {
            let x = VPoly::var(r + 1, r);
            let mut lhs = VPoly::one(r + 1);
            for i in 0..r {
                lhs = &lhs * &(&x + &VPoly::var(r + 1, i));
            }
            let positions: Vec<usize> = (0..r).collect();
            let mut rhs = VPoly::zero(r + 1);
            for j in 0..=r {
                rhs += &(&x.pow((r - j) as u32) * &elementary_symmetric(r, j).embed(r + 1, &positions));
            }
            assert_eq!(lhs, rhs, "r = {r}");
        }
    }

    fn arb_vpoly(arity: usize) -> impl Strategy<Value = VPoly> {
        prop::collection::vec(
            (prop::collection::vec(0u32..3, arity), -5i64..6, 1i64..4),
            0..5,
        )
        .prop_map(move |terms| {
            VPoly::from_terms(
                arity,
                terms.into_iter().map(|(e, n, d)| (Monomial::new(e), rat(n, d))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_vpoly(3), b in arb_vpoly(3), c in arb_vpoly(3)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn evaluation_is_a_ring_homomorphism(a in arb_vpoly(2), b in arb_vpoly(2), x in -4i64..5, y in -4i64..5) {
            let pt = [int(x), int(y)];
            prop_assert_eq!((&a * &b).eval(&pt), a.eval(&pt) * b.eval(&pt));
            prop_assert_eq!((&a + &b).eval(&pt), a.eval(&pt) + b.eval(&pt));
        }
    }
}
