//! Cut-and-join operators acting on the Schur basis, the coefficients `a_k(v)`,
//! and the flows that build `Z_(r)` and its one-variable specialization.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{elementary_symmetric, factorial, int, Rational, VPoly};
use crate::characters::{principal_eval, schur_to_powersum, CharCache};
use crate::error::{Error, Result};
use crate::partition::{falling_factorial, partitions_of, Partition};
use crate::series::{Basis, GradedSeries};

/// Coefficients `a_1(v), …, a_{r+1}(v)` of `Σ_k a_k P₋₁⁽ᵏ⁾`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSpec {
    pub r: usize,
    /// `coefficients[k - 1] = a_k`.
    pub coefficients: Vec<VPoly>,
}

impl OperatorSpec {
    pub fn a(&self, k: usize) -> &VPoly {
        &self.coefficients[k - 1]
    }

    /// Checks `Σ_k k a_k ∏_{j=0}^{k-2} (x - j) = ∏_i (x + v_i)` with `x` as an extra variable.
    pub fn satisfies_relation(&self) -> bool {
        let r = self.r;
        let n = r + 1;
        let x = |c: i64| VPoly::linear(n, r, int(c));
        let coords: Vec<usize> = (0..r).collect();
        let mut lhs = VPoly::zero(n);
        for (idx, a) in self.coefficients.iter().enumerate() {
            let k = idx + 1;
            let mut term = a.embed(n, &coords).scale(&int(k as i64));
            for j in 0..k.saturating_sub(1) {
                term = &term * &x(-(j as i64));
            }
            lhs += &term;
        }
        let mut rhs = VPoly::one(n);
        for i in 0..r {
            rhs = &rhs * &(&VPoly::var(n, i) + &VPoly::var(n, r));
        }
        lhs == rhs
    }
}

/// The closed form `a_k = (1/k) Σ_{j=0}^{r} Σ_{i=0}^{k-1} (-1)^{i+k-1} i^{r-j} / (i! (k-1-i)!) e_j`
/// with `0^0 = 1`; the `i = 0` term is the separate `(-1)^{k-1} e_r / k!`.
pub fn a_coeffs_closed(r: usize) -> OperatorSpec {
    assert!(r >= 1, "arity r must be at least 1");
    let e: Vec<VPoly> = (0..=r).map(|j| elementary_symmetric(r, j)).collect();
    let coefficients = (1..=r + 1)
        .map(|k| {
            let mut a = VPoly::zero(r);
            for (j, ej) in e.iter().enumerate() {
                let mut c = Rational::zero();
                for i in 0..k {
                    let sign = if (i + k - 1) % 2 == 0 { 1 } else { -1 };
                    let power = BigInt::from(i).pow((r - j) as u32);
                    c += Rational::new(
                        BigInt::from(sign) * power,
                        factorial(i) * factorial(k - 1 - i),
                    );
                }
                a += &ej.scale(&(c / int(k as i64)));
            }
            a
        })
        .collect();
    OperatorSpec { r, coefficients }
}

/// Solves the defining relation triangularly by substituting `x = 0, 1, …, r`.
pub fn a_coeffs_from_relation(r: usize) -> OperatorSpec {
    assert!(r >= 1, "arity r must be at least 1");
    let mut coefficients: Vec<VPoly> = Vec::with_capacity(r + 1);
    for n in 0..=r {
        let mut rest = VPoly::one(r);
        for i in 0..r {
            rest = &rest * &VPoly::linear(r, i, int(n as i64));
        }
        for (idx, a) in coefficients.iter().enumerate() {
            let k = idx + 1;
            let w = Rational::from_integer(BigInt::from(k) * falling_factorial(n as i64, k - 1));
            rest = &rest - &a.scale(&w);
        }
        let denom = Rational::from_integer(BigInt::from(n + 1) * factorial(n));
        coefficients.push(rest.scale(&(Rational::one() / denom)));
    }
    OperatorSpec { r, coefficients }
}

fn require_schur(g: &GradedSeries) -> Result<()> {
    if g.basis() != Basis::Schur {
        return Err(Error::Contract(format!(
            "operator acts on the schur basis, got {}",
            g.basis()
        )));
    }
    Ok(())
}

/// Applies `s_μ ↦ Σ_{μ+□} w(□) s_{μ+□}` degree by degree; the truncation grows by one.
fn raise_by_box(g: &GradedSeries, weight: impl Fn(i64) -> VPoly + Sync) -> GradedSeries {
    let mut out = GradedSeries::zero(Basis::Schur, g.arity(), g.max_degree() + 1);
    let source: Vec<(&Partition, &VPoly)> = g.terms().collect();
    let pieces: Vec<Vec<(Partition, VPoly)>> = source
        .par_iter()
        .map(|(mu, c)| {
            mu.addable_boxes()
                .into_iter()
                .map(|b| (mu.add_box(b), *c * &weight(b.content())))
                .collect()
        })
        .collect();
    for (mu, c) in pieces.into_iter().flatten() {
        out.add_term(mu, c);
    }
    out
}

/// `P₋₁⁽ᵏ⁾ s_μ = Σ_{μ+□} k [c(□)]_{k-1} s_{μ+□}`.
pub fn apply_p_minus1(k: usize, g: &GradedSeries) -> Result<GradedSeries> {
    require_schur(g)?;
    if k == 0 {
        return Err(Error::Contract("operator order k must be at least 1".into()));
    }
    let r = g.arity();
    Ok(raise_by_box(g, |c| {
        let w = BigInt::from(k) * falling_factorial(c, k - 1);
        VPoly::constant(r, Rational::from_integer(w))
    }))
}

/// `(Σ_k a_k P₋₁⁽ᵏ⁾) s_μ = Σ_{μ+□} ∏_i (c(□) + v_i) s_{μ+□}`, applied through the content product.
pub fn apply_combined(spec: &OperatorSpec, g: &GradedSeries) -> Result<GradedSeries> {
    require_schur(g)?;
    if g.arity() != spec.r {
        return Err(Error::Contract(format!(
            "operator has arity {}, series has arity {}",
            spec.r,
            g.arity()
        )));
    }
    let r = spec.r;
    Ok(raise_by_box(g, |c| {
        let mut w = VPoly::one(r);
        for i in 0..r {
            w = &w * &VPoly::linear(r, i, int(c));
        }
        w
    }))
}

/// The same operator assembled as `Σ_k a_k · P₋₁⁽ᵏ⁾`.
pub fn apply_combined_by_orders(spec: &OperatorSpec, g: &GradedSeries) -> Result<GradedSeries> {
    require_schur(g)?;
    let mut out = GradedSeries::zero(Basis::Schur, g.arity(), g.max_degree() + 1);
    for (idx, a) in spec.coefficients.iter().enumerate() {
        for (mu, c) in apply_p_minus1(idx + 1, g)?.terms() {
            out.add_term(mu.clone(), c * a);
        }
    }
    Ok(out)
}

/// `P₁⁽ᵏ⁾` for `k = 1, 2`: `P₁⁽¹⁾ = ∂/∂t_1` and `P₁⁽²⁾ s_μ = Σ_{μ-□} 2(c(□) - 1) s_{μ-□}`.
pub fn apply_p_plus1(k: usize, g: &GradedSeries) -> Result<GradedSeries> {
    require_schur(g)?;
    if !(1..=2).contains(&k) {
        return Err(Error::Contract(format!(
            "only P_1 of order 1 and 2 is available, got {k}"
        )));
    }
    let r = g.arity();
    let mut out = GradedSeries::zero(Basis::Schur, r, g.max_degree());
    for (mu, c) in g.terms() {
        for b in mu.removable_boxes() {
            let w = if k == 1 { 1 } else { 2 * (b.content() - 1) };
            out.add_term(mu.remove_box(b), c.scale(&int(w)));
        }
    }
    Ok(out)
}

/// `L₁ = (P₁⁽²⁾ + 2 P₁⁽¹⁾) / 2`, which removes a box with weight `c(□)`.
pub fn apply_l1(g: &GradedSeries) -> Result<GradedSeries> {
    let two = apply_p_plus1(2, g)?;
    let one = apply_p_plus1(1, g)?;
    Ok(two.add(&one.scale(&int(2))).scale(&Rational::new(BigInt::one(), BigInt::from(2))))
}

fn unit_schur(r: usize, max_degree: usize) -> GradedSeries {
    GradedSeries::one(Basis::Schur, r, max_degree)
}

/// `Z_(r) = exp(Σ a_k P₋₁⁽ᵏ⁾)(1)`: each slice is the previous one acted on and divided by `d + 1`.
pub fn z_flow(r: usize, max_degree: usize) -> GradedSeries {
    let spec = a_coeffs_closed(r);
    let mut out = unit_schur(r, max_degree);
    let mut slice = unit_schur(r, 0);
    for d in 0..max_degree {
        let next = apply_combined(&spec, &slice).expect("schur basis with matching arity");
        slice = next.scale(&Rational::new(BigInt::one(), BigInt::from(d + 1)));
        for (mu, c) in slice.terms() {
            out.add_term(mu.clone(), c.clone());
        }
    }
    out
}

/// Coefficient of `s_η` is `∏_□ ∏_i (v_i + c(□)) / ∏_□ h(□)`.
pub fn z_direct(r: usize, max_degree: usize) -> GradedSeries {
    let mut out = unit_schur(r, max_degree);
    for d in 1..=max_degree {
        let coeffs: Vec<(Partition, VPoly)> = partitions_of(d, None)
            .into_par_iter()
            .map(|eta| {
                let mut c = VPoly::constant(r, principal_eval(&eta));
                for content in eta.contents() {
                    for i in 0..r {
                        c = &c * &VPoly::linear(r, i, int(content));
                    }
                }
                (eta, c)
            })
            .collect();
        for (eta, c) in coeffs {
            out.add_term(eta, c);
        }
    }
    out
}

pub fn schur_series_to_powersum(g: &GradedSeries, cache: &CharCache) -> Result<GradedSeries> {
    require_schur(g)?;
    let mut out = GradedSeries::zero(Basis::PowerSum, g.arity(), g.max_degree());
    for (eta, c) in g.terms() {
        for (mu, w) in schur_to_powersum(eta, cache)? {
            out.add_term(mu, c.scale(&w));
        }
    }
    Ok(out)
}

/// `exp(L₋₁ + v t_1)(1)` in arity 1, with `L₋₁ = P₋₁⁽²⁾ / 2` and `t_1 = P₋₁⁽¹⁾`.
pub fn virasoro_flow(max_degree: usize) -> GradedSeries {
    let mut out = unit_schur(1, max_degree);
    let mut slice = unit_schur(1, 0);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    for d in 0..max_degree {
        let l = apply_p_minus1(2, &slice).expect("schur basis").scale(&half);
        let mut t = GradedSeries::zero(Basis::Schur, 1, d + 1);
        for (mu, c) in apply_p_minus1(1, &slice).expect("schur basis").terms() {
            t.add_term(mu.clone(), c * &VPoly::var(1, 0));
        }
        slice = l.add(&t).scale(&Rational::new(BigInt::one(), BigInt::from(d + 1)));
        for (mu, c) in slice.terms() {
            out.add_term(mu.clone(), c.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::characters::hook_content_eval;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn single(r: usize, mu: &str) -> GradedSeries {
        let mu = p(mu);
        let mut g = GradedSeries::zero(Basis::Schur, r, mu.size());
        g.add_term(mu, VPoly::one(r));
        g
    }

    #[test]
    fn a_coeffs_small_arity() {
        let a1 = a_coeffs_closed(1);
        assert_eq!(a1.a(1).to_text(), "v1");
        assert_eq!(a1.a(2).to_text(), "1/2");
        let a2 = a_coeffs_closed(2);
        assert_eq!(a2.a(1).to_text(), "v1*v2");
        assert_eq!(a2.a(2).to_text(), "1/2*v1 + 1/2*v2 + 1/2");
        assert_eq!(a2.a(3).to_text(), "1/3");
        let a3 = a_coeffs_closed(3);
        let e = |j| elementary_symmetric(3, j);
        assert_eq!(a3.a(4).clone(), VPoly::constant(3, rat(1, 4)));
        assert_eq!(a3.a(3).clone(), (&e(1) + &VPoly::constant(3, int(3))).scale(&rat(1, 3)));
        assert_eq!(a3.a(2).clone(), (&(&e(2) + &e(1)) + &e(0)).scale(&rat(1, 2)));
        assert_eq!(a3.a(1).clone(), e(3));
    }

    #[test]
    fn routes_to_a_coeffs_agree() {
        for r in 1..=8 {
            let closed = a_coeffs_closed(r);
            assert_eq!(closed, a_coeffs_from_relation(r), "r={r}");
            assert!(closed.satisfies_relation(), "r={r}");
        }
    }

    #[test]
    fn p_minus1_examples() {
        let s0 = unit_schur(1, 0);
        let g = apply_p_minus1(1, &s0).unwrap();
        assert_eq!(g.coeff(&p("1")), VPoly::one(1));
        let g = apply_p_minus1(2, &single(1, "1")).unwrap();
        assert_eq!(g.coeff(&p("2")), VPoly::constant(1, int(2)));
        assert_eq!(g.coeff(&p("1,1")), VPoly::constant(1, int(-2)));
        assert!(apply_p_minus1(3, &s0).unwrap().is_empty());
        let ps = GradedSeries::one(Basis::PowerSum, 1, 0);
        assert_eq!(apply_p_minus1(1, &ps).unwrap_err().kind(), "contract_violation");
    }

    #[test]
    fn combined_examples() {
        let g = apply_combined(&a_coeffs_closed(2), &unit_schur(2, 0)).unwrap();
        assert_eq!(g.coeff(&p("1")).to_text(), "v1*v2");
        let g = apply_combined(&a_coeffs_closed(1), &single(1, "1")).unwrap();
        assert_eq!(g.coeff(&p("2")).to_text(), "v1 + 1");
        assert_eq!(g.coeff(&p("1,1")).to_text(), "v1 - 1");
    }

    #[test]
    fn combined_matches_sum_over_orders() {
        for r in 1..=3 {
            let spec = a_coeffs_closed(r);
            for d in 0..=5 {
                for mu in partitions_of(d, None) {
                    let g = single(r, &mu.to_text());
                    assert_eq!(
                        apply_combined(&spec, &g).unwrap(),
                        apply_combined_by_orders(&spec, &g).unwrap(),
                        "r={r} μ={mu}"
                    );
                }
            }
        }
    }

    #[test]
    fn flow_examples() {
        let z = z_flow(2, 2);
        assert_eq!(z.coeff(&Partition::empty()), VPoly::one(2));
        assert_eq!(z.coeff(&p("1")).to_text(), "v1*v2");
        let upper = crate::algebra::shifted_product(2, 0, 1).scale(&rat(1, 2));
        let lower = crate::algebra::shifted_product(2, -1, 0).scale(&rat(1, 2));
        assert_eq!(z.coeff(&p("2")), upper);
        assert_eq!(z.coeff(&p("1,1")), lower);
        let direct = z_direct(1, 3);
        assert_eq!(direct.coeff(&p("2,1")).to_text(), "1/3*v1^3 - 1/3*v1");
        assert_eq!(z_direct(2, 1).coeff(&p("1")).to_text(), "v1*v2");
    }

    #[test]
    fn flow_equals_direct_small() {
        for r in 1..=3 {
            assert_eq!(z_flow(r, 4), z_direct(r, 4), "r={r}");
        }
    }

    #[test]
    fn cut_and_join_equation() {
        let r = 2;
        let spec = a_coeffs_closed(r);
        let z = z_direct(r, 5);
        for d in 0..5 {
            let mut slice = GradedSeries::zero(Basis::Schur, r, d);
            for (mu, c) in z.slice(d) {
                slice.add_term(mu.clone(), c.clone());
            }
            let lhs = apply_combined(&spec, &slice).unwrap();
            let mut rhs = GradedSeries::zero(Basis::Schur, r, d + 1);
            for (mu, c) in z.slice(d + 1) {
                rhs.add_term(mu.clone(), c.scale(&int(d as i64 + 1)));
            }
            assert_eq!(lhs, rhs, "d={d}");
        }
    }

    #[test]
    fn powersum_conversion_examples() {
        let cache = CharCache::in_memory();
        let g = schur_series_to_powersum(&single(1, "1"), &cache).unwrap();
        assert_eq!(g.coeff(&p("1")), VPoly::one(1));
        let g = schur_series_to_powersum(&single(1, "2"), &cache).unwrap();
        assert_eq!(g.coeff(&p("2")), VPoly::constant(1, rat(1, 2)));
        assert_eq!(g.coeff(&p("1,1")), VPoly::constant(1, rat(1, 2)));
        let z = schur_series_to_powersum(&z_direct(2, 3), &cache).unwrap();
        assert_eq!(z, crate::hurwitz::disconnected_series(2, 3, &cache).unwrap());
    }

    #[test]
    fn virasoro_flow_matches_hook_content() {
        let z = virasoro_flow(6);
        assert_eq!(z.coeff(&p("1")).to_text(), "v1");
        assert_eq!(z.coeff(&p("1,1")).to_text(), "1/2*v1^2 - 1/2*v1");
        for d in 0..=6 {
            for mu in partitions_of(d, None) {
                assert_eq!(z.coeff(&mu), hook_content_eval(&mu, 1, 0).value(), "{mu}");
            }
        }
    }

    #[test]
    fn lowering_operators() {
        let g = apply_l1(&single(1, "2")).unwrap();
        assert_eq!(g.coeff(&p("1")), VPoly::one(1));
        let g = apply_l1(&single(1, "1,1")).unwrap();
        assert_eq!(g.coeff(&p("1")), VPoly::constant(1, int(-1)));
        assert!(apply_p_plus1(3, &single(1, "1")).is_err());
    }

    /// The Euler-operator step: `(L₁ + v ∂/∂t_1) s_λ` at `t_k = v/k` is `|λ| s_λ(t_k = v/k)`.
    #[test]
    fn euler_identity_for_lowering() {
        for d in 1..=7 {
            for lambda in partitions_of(d, None) {
                let g = single(1, &lambda.to_text());
                let l1 = apply_l1(&g).unwrap();
                let dt1 = apply_p_plus1(1, &g).unwrap();
                let mut lhs = VPoly::zero(1);
                for (mu, c) in l1.terms() {
                    lhs += &(c * &hook_content_eval(mu, 1, 0).value());
                }
                for (mu, c) in dt1.terms() {
                    let v = VPoly::var(1, 0);
                    lhs += &(&(c * &v) * &hook_content_eval(mu, 1, 0).value());
                }
                let rhs = hook_content_eval(&lambda, 1, 0).value().scale(&int(d as i64));
                assert_eq!(lhs, rhs, "{lambda}");
            }
        }
    }
}
