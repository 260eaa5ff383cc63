//! Exact polynomial fitting of sampled correlators, with held-out verification
//! and binomial-basis expansions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{binomial, factorial, int, Rational, VPoly};
use crate::characters::CharCache;
use crate::error::{Error, Result};
use crate::hurwitz::{connected_series, n_bullet, riemann_hurwitz_genus, Genus};
use crate::kp::zhou_coefficient;
use crate::partition::Partition;
use crate::series::GradedSeries;

/// Largest symmetric-group degree the Stanley sampler will build character tables for.
pub const MAX_TABLE_DEGREE: usize = 16;

/// `Σ c_d C(n, d)` or `Σ c_{d1,d2} C(n1, d1) C(n2, d2)`; keys are degree tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialExpansion {
    dimension: usize,
    coefficients: BTreeMap<Vec<usize>, Rational>,
}

impl BinomialExpansion {
    pub fn new(dimension: usize, coefficients: BTreeMap<Vec<usize>, Rational>) -> Self {
        assert!(coefficients.keys().all(|k| k.len() == dimension));
        let coefficients = coefficients.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        BinomialExpansion {
            dimension,
            coefficients,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn coefficients(&self) -> &BTreeMap<Vec<usize>, Rational> {
        &self.coefficients
    }

    pub fn coeff(&self, degrees: &[usize]) -> Rational {
        self.coefficients.get(degrees).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, point: &[i64]) -> Rational {
        self.coefficients
            .iter()
            .map(|(ds, c)| {
                ds.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&d, &x)| acc * binomial(x, d))
            })
            .sum()
    }

    pub fn is_nonneg_integral(&self) -> bool {
        self.coefficients
            .values()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    /// Expansion in the monomial basis.
    pub fn to_vpoly(&self) -> VPoly {
        let mut out = VPoly::zero(self.dimension);
        for (ds, c) in &self.coefficients {
            let mut term = VPoly::constant(self.dimension, c.clone());
            for (i, &d) in ds.iter().enumerate() {
                term = &term * &binomial_poly(d).embed(self.dimension, &[i]);
            }
            out += &term;
        }
        out
    }

    /// e.g. `2*C(n,4) + 3*C(n,3) + C(n,2)`.
    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.coefficients.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (ds, c)) in self.coefficients.iter().rev().enumerate() {
            let factors: Vec<String> = ds
                .iter()
                .zip(names)
                .filter(|(&d, _)| d > 0)
                .map(|(d, name)| format!("C({},{d})", name.as_ref()))
                .collect();
            let negative = c.is_negative();
            let magnitude = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if factors.is_empty() {
                out.push_str(&magnitude.to_string());
            } else {
                if !magnitude.is_one() {
                    out.push_str(&format!("{magnitude}*"));
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

/// `{4: 1, 3: 1}` in one variable, `{(1, 1): 1}` in two; highest degree first.
impl fmt::Display for BinomialExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self
            .coefficients
            .iter()
            .rev()
            .map(|(ds, c)| {
                let key = if ds.len() == 1 {
                    ds[0].to_string()
                } else {
                    let inner: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
                    format!("({})", inner.join(", "))
                };
                format!("{key}: {c}")
            })
            .collect();
        write!(f, "{{{}}}", entries.join(", "))
    }
}

/// `C(x, d)` as a polynomial in one variable.
pub fn binomial_poly(d: usize) -> VPoly {
    let mut p = VPoly::one(1);
    for j in 0..d {
        p = &p * &VPoly::linear(1, 0, int(-(j as i64)));
    }
    p.scale(&Rational::new(BigInt::one(), factorial(d)))
}

/// A sample where the fitted polynomial disagrees with the data.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub point: Vec<i64>,
    pub expected: Rational,
    pub predicted: Rational,
}

/// No polynomial of the allowed degree fits all samples; the data that broke it.
#[derive(Clone, Debug, PartialEq)]
pub struct FitFailure {
    pub degree: usize,
    pub offending: Vec<Mismatch>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonFit {
    pub poly: VPoly,
    pub degree: usize,
    pub binomial: BinomialExpansion,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FitOutcome {
    Fit(NewtonFit),
    Failure(FitFailure),
}

/// Δ^d p(0) for every `d` up to the degree of a univariate `p`.
pub fn binomial_expansion_1d(p: &VPoly) -> BinomialExpansion {
    assert_eq!(p.arity(), 1);
    let deg = p.total_degree().unwrap_or(0) as usize;
    let mut values: Vec<Rational> = (0..=deg).map(|x| p.eval(&[int(x as i64)])).collect();
    let mut coefficients = BTreeMap::new();
    for d in 0..=deg {
        coefficients.insert(vec![d], values[0].clone());
        values = values.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    BinomialExpansion::new(1, coefficients)
}

/// Interpolates through the first `max_degree + 1` points (all of them by default)
/// by divided differences, then checks the rest.
pub fn newton_fit(points: &[(i64, Rational)], max_degree: Option<usize>) -> Result<FitOutcome> {
    if points.is_empty() {
        return Err(Error::Contract("fitting needs at least one point".into()));
    }
    let mut xs: Vec<i64> = points.iter().map(|(x, _)| *x).collect();
    xs.sort_unstable();
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Contract("sample arguments must be distinct".into()));
    }
    let used = max_degree.map_or(points.len(), |d| (d + 1).min(points.len()));
    let (fit_pts, check_pts) = points.split_at(used);

    let mut table: Vec<Rational> = fit_pts.iter().map(|(_, y)| y.clone()).collect();
    let mut coeffs = vec![table[0].clone()];
    for level in 1..used {
        table = (0..used - level)
            .map(|i| {
                let dx = fit_pts[i + level].0 - fit_pts[i].0;
                (&table[i + 1] - &table[i]) / int(dx)
            })
            .collect();
        coeffs.push(table[0].clone());
    }
    let mut poly = VPoly::zero(1);
    let mut basis = VPoly::one(1);
    for (i, c) in coeffs.iter().enumerate() {
        poly += &basis.scale(c);
        basis = &basis * &VPoly::linear(1, 0, int(-fit_pts[i].0));
    }
    let degree = poly.total_degree().unwrap_or(0) as usize;

    let offending: Vec<Mismatch> = check_pts
        .iter()
        .filter_map(|(x, y)| {
            let predicted = poly.eval(&[int(*x)]);
            (predicted != *y).then(|| Mismatch {
                point: vec![*x],
                expected: y.clone(),
                predicted,
            })
        })
        .collect();
    if !offending.is_empty() {
        return Ok(FitOutcome::Failure(FitFailure {
            degree: used - 1,
            offending,
        }));
    }
    let binomial = binomial_expansion_1d(&poly);
    Ok(FitOutcome::Fit(NewtonFit {
        poly,
        degree,
        binomial,
    }))
}

/// Solves `Σ_{(d1,d2) ∈ basis} c C(n1,d1) C(n2,d2) = value` on exactly `basis.len()` points.
/// `None` when the system is singular.
pub fn fit_product_binomial(
    points: &[([i64; 2], Rational)],
    basis: &[(usize, usize)],
) -> Option<BinomialExpansion> {
    let n = basis.len();
    assert_eq!(points.len(), n, "square system expected");
    let mut rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|([x1, x2], y)| {
            let mut row: Vec<Rational> = basis
                .iter()
                .map(|&(d1, d2)| binomial(*x1, d1) * binomial(*x2, d2))
                .collect();
            row.push(y.clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        let inv = Rational::one() / &rows[col][col];
        for v in rows[col].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &factor * p;
                }
            }
        }
    }
    let coefficients = basis
        .iter()
        .enumerate()
        .map(|(i, &(d1, d2))| (vec![d1, d2], rows[i][n].clone()))
        .collect();
    Some(BinomialExpansion::new(2, coefficients))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub point: Vec<i64>,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HoldoutCheck {
    pub point: Vec<i64>,
    pub expected: Rational,
    pub predicted: Rational,
}

impl HoldoutCheck {
    pub fn ok(&self) -> bool {
        self.expected == self.predicted
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitReport {
    pub variables: Vec<String>,
    pub fitted: VPoly,
    /// Degree bound the accepted fit was computed with.
    pub degree_used: usize,
    pub samples: Vec<Sample>,
    pub holdout: Vec<HoldoutCheck>,
    pub binomial: Option<BinomialExpansion>,
    pub nonneg_integral: Option<bool>,
    pub failure: Option<FitFailure>,
    /// Riemann–Hurwitz rules out every sample; all values are zero without evaluation.
    pub vanishes: bool,
}

impl FitReport {
    pub fn holdout_verified(&self) -> Vec<bool> {
        self.holdout.iter().map(HoldoutCheck::ok).collect()
    }

    /// Fit succeeded and every held-out point is predicted exactly.
    pub fn verified(&self) -> bool {
        self.failure.is_none() && !self.holdout.is_empty() && self.holdout.iter().all(HoldoutCheck::ok)
    }

    pub fn to_json(&self) -> Value {
        let point = |p: &[i64]| json!(p);
        json!({
            "variables": self.variables,
            "fitted": self.fitted.render(&self.variables),
            "degree_used": self.degree_used,
            "samples": self.samples.iter().map(|s| json!({
                "point": point(&s.point),
                "value": s.value.to_string(),
            })).collect::<Vec<_>>(),
            "holdout": self.holdout.iter().map(|h| json!({
                "point": point(&h.point),
                "expected": h.expected.to_string(),
                "predicted": h.predicted.to_string(),
                "ok": h.ok(),
            })).collect::<Vec<_>>(),
            "holdout_verified": self.holdout_verified(),
            "binomial": self.binomial.as_ref().map(|b| b.to_string()),
            "binomial_text": self.binomial.as_ref().map(|b| b.render(&self.variables)),
            "nonneg_integral": self.nonneg_integral,
            "vanishes": self.vanishes,
            "failure": self.failure.as_ref().map(|f| json!({
                "degree": f.degree,
                "offending": f.offending.iter().map(|m| json!({
                    "point": point(&m.point),
                    "expected": m.expected.to_string(),
                    "predicted": m.predicted.to_string(),
                })).collect::<Vec<_>>(),
            })),
            "verified": self.verified(),
        })
    }
}

fn univariate_names() -> Vec<String> {
    vec!["n".to_string()]
}

/// Fits `n ↦ n! N•_{n-λ_1,…,n-λ_k,n,…,n}((μ, 1^{n-|μ|}))` (Stanley-type polynomiality).
///
/// Samples start at `n = max(|μ|, λ_1 + 1, 1)`; the degree bound is `|μ| + 2|λ|`, and the
/// default sample count is one more than interpolation needs, so the fit is checked in-sample too.
pub fn stanley_fit(
    r: usize,
    lambda: &Partition,
    mu: &Partition,
    n_samples: Option<usize>,
    holdout: usize,
    cache: &CharCache,
) -> Result<FitReport> {
    if lambda.length() > r {
        return Err(Error::Contract(format!(
            "λ = {lambda} has more than r = {r} parts"
        )));
    }
    let bound = mu.size() + 2 * lambda.size();
    let n_samples = n_samples.unwrap_or(bound + 2);
    if n_samples < bound + 2 {
        return Err(Error::Contract(format!(
            "need at least {} samples for degree bound {bound}",
            bound + 2
        )));
    }
    let start = mu.size().max(lambda.row(1) + 1).max(1);
    let last = start + n_samples + holdout - 1;
    if last > MAX_TABLE_DEGREE {
        return Err(Error::SizeLimit {
            what: "sample degree",
            value: last,
            limit: MAX_TABLE_DEGREE,
        });
    }
    let value = |n: usize| -> Result<Rational> {
        let k: Vec<usize> = (1..=r).map(|i| n - lambda.row(i)).collect();
        let mut parts = mu.parts().to_vec();
        parts.extend(std::iter::repeat_n(1, n - mu.size()));
        let nu = Partition::from_unsorted(parts);
        Ok(n_bullet(r, &k, &nu, cache)? * Rational::from_integer(factorial(n)))
    };
    let samples: Vec<(i64, Rational)> = (start..start + n_samples)
        .into_par_iter()
        .map(|n| Ok((n as i64, value(n)?)))
        .collect::<Result<_>>()?;
    let outcome = newton_fit(&samples, Some(bound))?;
    let samples_out = samples
        .iter()
        .map(|(x, y)| Sample {
            point: vec![*x],
            value: y.clone(),
        })
        .collect();
    let mut report = FitReport {
        variables: univariate_names(),
        fitted: VPoly::zero(1),
        degree_used: bound,
        samples: samples_out,
        holdout: Vec::new(),
        binomial: None,
        nonneg_integral: None,
        failure: None,
        vanishes: false,
    };
    match outcome {
        FitOutcome::Failure(f) => report.failure = Some(f),
        FitOutcome::Fit(fit) => {
            for n in start + n_samples..=last {
                report.holdout.push(HoldoutCheck {
                    point: vec![n as i64],
                    expected: value(n)?,
                    predicted: fit.poly.eval(&[int(n as i64)]),
                });
            }
            report.nonneg_integral = Some(fit.binomial.is_nonneg_integral());
            report.binomial = Some(fit.binomial);
            report.fitted = fit.poly;
        }
    }
    Ok(report)
}

/// Which engine supplies connected correlators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrelatorRoute {
    Zhou,
    Log,
}

/// Settings for [`conjecture_fit`].
#[derive(Clone, Debug)]
pub struct ConjectureSpec {
    /// First sample; defaults to the smallest admissible point.
    pub start: Option<usize>,
    pub holdout: usize,
    /// Give up once the degree bound passes this.
    pub max_degree: usize,
    /// Largest `|μ|` the sampler may touch, holdouts included.
    pub max_weight: Option<usize>,
    pub route: CorrelatorRoute,
}

impl Default for ConjectureSpec {
    fn default() -> Self {
        ConjectureSpec {
            start: None,
            holdout: 2,
            max_degree: 12,
            max_weight: None,
            route: CorrelatorRoute::Zhou,
        }
    }
}

/// Evaluates `z_μ N°_{|μ|-k_1,…,|μ|-k_{r-1},k_r}(μ)`, caching the engine state.
pub struct ConnectedSampler<'a> {
    r: usize,
    k: Vec<usize>,
    route: CorrelatorRoute,
    cache: &'a CharCache,
    log: Option<GradedSeries>,
}

impl<'a> ConnectedSampler<'a> {
    pub fn new(r: usize, k: &[usize], route: CorrelatorRoute, cache: &'a CharCache) -> Result<Self> {
        if r == 0 || k.len() != r {
            return Err(Error::Contract(format!(
                "expected {r} counts k, got {}",
                k.len()
            )));
        }
        Ok(ConnectedSampler {
            r,
            k: k.to_vec(),
            route,
            cache,
            log: None,
        })
    }

    /// The exponent vector `(n-k_1, …, n-k_{r-1}, k_r)`, or `None` if some entry is not positive.
    fn exponents(&self, n: usize) -> Option<Vec<u32>> {
        let mut e = Vec::with_capacity(self.r);
        for (i, &ki) in self.k.iter().enumerate() {
            let x = if i + 1 == self.r { ki as i64 } else { n as i64 - ki as i64 };
            if x < 1 {
                return None;
            }
            e.push(x as u32);
        }
        Some(e)
    }

    /// Builds the log series through `weight` up front; a no-op on the Zhou route.
    pub fn reserve(&mut self, weight: usize) -> Result<()> {
        if self.route == CorrelatorRoute::Log && self.log.as_ref().is_none_or(|g| g.max_degree() < weight) {
            self.log = Some(connected_series(self.r, weight, self.cache)?);
        }
        Ok(())
    }

    pub fn value(&mut self, mu: &Partition) -> Result<Rational> {
        let n = mu.size();
        let Some(exps) = self.exponents(n) else {
            return Ok(Rational::zero());
        };
        let ks: Vec<usize> = exps.iter().map(|&e| e as usize).collect();
        if !vanishing_filter(self.r, &ks, mu) {
            return Ok(Rational::zero());
        }
        let c = match self.route {
            CorrelatorRoute::Zhou => zhou_coefficient(mu, &exps)?,
            CorrelatorRoute::Log => {
                self.reserve(n)?;
                self.log.as_ref().expect("reserved").coeff(mu).coeff(&exps)
            }
        };
        Ok(c * Rational::from_integer(mu.z_factor()))
    }
}

/// `true` iff the Riemann–Hurwitz genus is a nonnegative integer, i.e. the correlator may be nonzero.
pub fn vanishing_filter(r: usize, k: &[usize], mu: &Partition) -> bool {
    riemann_hurwitz_genus(r, k, mu).is_admissible()
}

/// The genus for the conjecture family `(|μ|-k_1, …, k_r)` over `l`-part μ; independent of μ.
fn family_genus(r: usize, k: &[usize], l: usize) -> Genus {
    let offsets: i64 = k[..r - 1].iter().map(|&x| x as i64).sum();
    let twice = 2 + offsets - k[r - 1] as i64 - l as i64;
    match twice {
        t if t.is_odd() => Genus::HalfInteger(t),
        t if t < 0 => Genus::Negative(t / 2),
        t => Genus::Valid((t / 2) as u64),
    }
}

/// Fits `μ ↦ z_μ N°_{|μ|-k_1,…,|μ|-k_{r-1},k_r}(μ)` for one- and two-part μ,
/// raising the degree from the Riemann–Hurwitz guess `2g` until the holdouts verify.
pub fn conjecture_fit(
    r: usize,
    k: &[usize],
    l: usize,
    spec: &ConjectureSpec,
    cache: &CharCache,
) -> Result<FitReport> {
    let mut sampler = ConnectedSampler::new(r, k, spec.route, cache)?;
    let kmax = k.iter().copied().max().unwrap_or(0);
    let genus = family_genus(r, k, l);
    let guess = match genus {
        Genus::Valid(g) => 2 * g as usize,
        _ => 0,
    };
    match l {
        1 => {
            let start = spec.start.unwrap_or(kmax + 1).max(kmax + 1);
            fit_one_point(&mut sampler, start, guess, spec, !genus.is_admissible())
        }
        2 => {
            let shift = spec.start.unwrap_or(kmax).max(kmax).max(1);
            fit_two_point(&mut sampler, shift, guess, spec, !genus.is_admissible())
        }
        _ => Err(Error::Contract(format!(
            "conjecture fits support one- and two-part μ, got l = {l}"
        ))),
    }
}

fn fit_one_point(
    sampler: &mut ConnectedSampler<'_>,
    start: usize,
    guess: usize,
    spec: &ConjectureSpec,
    vanishes: bool,
) -> Result<FitReport> {
    let mut values: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut value = |n: usize, sampler: &mut ConnectedSampler<'_>| -> Result<Rational> {
        if let Some(v) = values.get(&n) {
            return Ok(v.clone());
        }
        let v = sampler.value(&Partition::new(vec![n])?)?;
        values.insert(n, v.clone());
        Ok(v)
    };
    let budget_needed = start + guess + spec.holdout;
    let mut last_report = None;
    for degree in guess..=spec.max_degree.max(guess) {
        let need = start + degree + spec.holdout;
        if spec.max_weight.is_some_and(|w| need > w) {
            break;
        }
        sampler.reserve(need)?;
        let mut pts = Vec::new();
        for n in start..=start + degree {
            pts.push((n as i64, value(n, sampler)?));
        }
        let FitOutcome::Fit(fit) = newton_fit(&pts, Some(degree))? else {
            unreachable!("interpolation through degree + 1 points always succeeds");
        };
        let mut holdout = Vec::new();
        for n in start + degree + 1..=start + degree + spec.holdout {
            holdout.push(HoldoutCheck {
                point: vec![n as i64],
                expected: value(n, sampler)?,
                predicted: fit.poly.eval(&[int(n as i64)]),
            });
        }
        let report = FitReport {
            variables: univariate_names(),
            degree_used: degree,
            samples: pts
                .iter()
                .map(|(x, y)| Sample {
                    point: vec![*x],
                    value: y.clone(),
                })
                .collect(),
            nonneg_integral: Some(fit.binomial.is_nonneg_integral()),
            binomial: Some(fit.binomial),
            fitted: fit.poly,
            holdout,
            failure: None,
            vanishes,
        };
        if report.verified() {
            return Ok(report);
        }
        last_report = Some(report);
    }
    let Some(mut report) = last_report else {
        return Err(Error::SizeLimit {
            what: "sample weight for the first degree tried",
            value: budget_needed,
            limit: spec.max_weight.unwrap_or(0),
        });
    };
    report.failure = Some(FitFailure {
        degree: report.degree_used,
        offending: report
            .holdout
            .iter()
            .filter(|h| !h.ok())
            .map(|h| Mismatch {
                point: h.point.clone(),
                expected: h.expected.clone(),
                predicted: h.predicted.clone(),
            })
            .collect(),
    });
    Ok(report)
}

fn fit_two_point(
    sampler: &mut ConnectedSampler<'_>,
    shift: usize,
    guess: usize,
    spec: &ConjectureSpec,
    vanishes: bool,
) -> Result<FitReport> {
    let mut values: BTreeMap<[i64; 2], Rational> = BTreeMap::new();
    let mut value = |p: [i64; 2], sampler: &mut ConnectedSampler<'_>| -> Result<Rational> {
        if let Some(v) = values.get(&p) {
            return Ok(v.clone());
        }
        let mu = Partition::new(vec![p[0] as usize, p[1] as usize])?;
        let v = sampler.value(&mu)?;
        values.insert(p, v.clone());
        Ok(v)
    };
    let names = vec!["n1".to_string(), "n2".to_string()];
    let s = shift as i64;
    let budget_needed = (shift + 2 * guess + 1).max(shift + guess + 2 * spec.holdout);
    let mut last_report = None;
    for degree in guess..=spec.max_degree.max(guess) {
        let need = (shift + 2 * degree + 1).max(shift + degree + 2 * spec.holdout);
        if spec.max_weight.is_some_and(|w| need > w) {
            break;
        }
        sampler.reserve(need)?;
        let mut basis = Vec::new();
        let mut pts = Vec::new();
        for total in 0..=degree {
            for j in 0..=total {
                let i = total - j;
                basis.push((total - j, j));
                let p = [s + (i + j) as i64, 1 + j as i64];
                pts.push((p, value(p, sampler)?));
            }
        }
        let Some(expansion) = fit_product_binomial(&pts, &basis) else {
            return Err(Error::Contract("sample grid is not unisolvent".into()));
        };
        let mut holdout = Vec::new();
        for h in 0..spec.holdout as i64 {
            let p = [s + degree as i64 + 1 + h, 1 + h];
            holdout.push(HoldoutCheck {
                point: p.to_vec(),
                expected: value(p, sampler)?,
                predicted: expansion.eval(&p),
            });
        }
        let report = FitReport {
            variables: names.clone(),
            fitted: expansion.to_vpoly(),
            degree_used: degree,
            samples: pts
                .iter()
                .map(|(p, y)| Sample {
                    point: p.to_vec(),
                    value: y.clone(),
                })
                .collect(),
            holdout,
            nonneg_integral: Some(expansion.is_nonneg_integral()),
            binomial: Some(expansion),
            failure: None,
            vanishes,
        };
        if report.verified() {
            return Ok(report);
        }
        last_report = Some(report);
    }
    let Some(mut report) = last_report else {
        return Err(Error::SizeLimit {
            what: "sample weight for the first degree tried",
            value: budget_needed,
            limit: spec.max_weight.unwrap_or(0),
        });
    };
    report.failure = Some(FitFailure {
        degree: report.degree_used,
        offending: report
            .holdout
            .iter()
            .filter(|h| !h.ok())
            .map(|h| Mismatch {
                point: h.point.clone(),
                expected: h.expected.clone(),
                predicted: h.predicted.clone(),
            })
            .collect(),
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn expansion(pairs: &[(usize, i64)]) -> BinomialExpansion {
        BinomialExpansion::new(1, pairs.iter().map(|&(d, c)| (vec![d], int(c))).collect())
    }

    #[test]
    fn newton_examples() {
        let pts: Vec<(i64, Rational)> = (2..=6).map(|n| (n, binomial(n, 2))).collect();
        let FitOutcome::Fit(fit) = newton_fit(&pts, None).unwrap() else { panic!() };
        assert_eq!(fit.binomial.to_string(), "{2: 1}");
        assert_eq!(fit.degree, 2);

        let pts: Vec<(i64, Rational)> = (3..=9).map(|n| (n, binomial(n, 4) + binomial(n, 3))).collect();
        let FitOutcome::Fit(fit) = newton_fit(&pts, None).unwrap() else { panic!() };
        assert_eq!(fit.binomial, expansion(&[(4, 1), (3, 1)]));
        assert_eq!(fit.binomial.to_string(), "{4: 1, 3: 1}");

        let pts: Vec<(i64, Rational)> = (0..4).map(|n| (n, rat(7, 3))).collect();
        let FitOutcome::Fit(fit) = newton_fit(&pts, None).unwrap() else { panic!() };
        assert_eq!(fit.degree, 0);
        assert_eq!(fit.poly.to_text(), "7/3");
    }

    #[test]
    fn overdetermined_inconsistency_is_reported() {
        let pts: Vec<(i64, Rational)> = (0..6).map(|n| (n, int(1 << n))).collect();
        let FitOutcome::Failure(f) = newton_fit(&pts, Some(3)).unwrap() else { panic!() };
        assert_eq!(f.degree, 3);
        assert_eq!(f.offending.len(), 2);
        assert_eq!(f.offending[0].point, vec![4]);
        assert!(newton_fit(&[], None).is_err());
        assert!(newton_fit(&[(1, int(0)), (1, int(1))], None).is_err());
    }

    #[test]
    fn binomial_render_and_reconstruct() {
        let b = expansion(&[(4, 2), (3, 3), (2, 1)]);
        assert_eq!(b.render(&["n"]), "2*C(n,4) + 3*C(n,3) + C(n,2)");
        assert!(b.is_nonneg_integral());
        for n in 0..10 {
            assert_eq!(b.eval(&[n]), b.to_vpoly().eval(&[int(n)]));
        }
        let b2 = BinomialExpansion::new(2, BTreeMap::from([(vec![1, 1], int(1))]));
        assert_eq!(b2.to_string(), "{(1, 1): 1}");
        assert_eq!(b2.render(&["n1", "n2"]), "C(n1,1)*C(n2,1)");
        assert_eq!(b2.to_vpoly().to_text(), "v1*v2");
        assert!(!expansion(&[(1, -1)]).is_nonneg_integral());
    }

    #[test]
    fn product_binomial_solve() {
        let basis = vec![(0, 0), (1, 0), (0, 1)];
        let f = |x: i64, y: i64| int(3 * x - y + 2);
        let pts: Vec<([i64; 2], Rational)> =
            [[1, 1], [2, 1], [2, 2]].iter().map(|&[x, y]| ([x, y], f(x, y))).collect();
        let b = fit_product_binomial(&pts, &basis).unwrap();
        assert_eq!(b.coeff(&[1, 0]), int(3));
        assert_eq!(b.coeff(&[0, 1]), int(-1));
        assert_eq!(b.coeff(&[0, 0]), int(2));
    }

    #[test]
    fn vanishing_filter_examples() {
        for n in 2..8usize {
            let mu = Partition::new(vec![n]).unwrap();
            assert!(!vanishing_filter(1, &[2], &mu));
            assert!(!vanishing_filter(3, &[n - 1, n - 1, 2], &mu));
        }
        for (n1, n2) in [(1, 1), (3, 2), (4, 4)] {
            let mu = Partition::new(vec![n1, n2]).unwrap();
            assert!(vanishing_filter(2, &[n1 + n2 - 1, 1], &mu));
        }
    }

    #[test]
    fn stanley_trivial_case() {
        let cache = CharCache::in_memory();
        let rep = stanley_fit(1, &Partition::empty(), &Partition::empty(), None, 3, &cache).unwrap();
        assert!(rep.verified());
        assert_eq!(rep.fitted.to_text(), "1");
        assert!(stanley_fit(1, &"1,1".parse().unwrap(), &Partition::empty(), None, 2, &cache).is_err());
    }

    #[test]
    fn conjecture_one_point_r2() {
        let cache = CharCache::in_memory();
        let rep = conjecture_fit(2, &[1, 2], 1, &ConjectureSpec::default(), &cache).unwrap();
        assert!(rep.verified());
        assert_eq!(rep.binomial.as_ref().unwrap().to_string(), "{2: 1}");
        assert_eq!(rep.nonneg_integral, Some(true));

        let rep = conjecture_fit(2, &[1, 1], 1, &ConjectureSpec::default(), &cache).unwrap();
        assert!(rep.verified());
        assert!(rep.fitted.is_zero());
    }

    #[test]
    fn conjecture_two_point_r2() {
        let cache = CharCache::in_memory();
        let rep = conjecture_fit(2, &[1, 1], 2, &ConjectureSpec::default(), &cache).unwrap();
        assert!(rep.verified());
        assert_eq!(rep.fitted.render(&rep.variables), "n1*n2");
        assert_eq!(rep.binomial.as_ref().unwrap().to_string(), "{(1, 1): 1}");
        assert_eq!(rep.nonneg_integral, Some(true));
    }
}
