use dessin_core::algebra::{Monomial, Rational, VPoly};
use dessin_core::characters::{character_route_eval, hook_content_eval, CharCache};
use dessin_core::cutjoin::{
    a_coeffs_closed, a_coeffs_from_relation, schur_series_to_powersum, virasoro_flow, z_direct, z_flow,
};
use dessin_core::hurwitz::{
    burnside_disconnected, connected_series, disconnected_series, n_bullet, n_circ, RamificationProfile,
};
use dessin_core::kp::{affine_coords, zhou_coefficient, zhou_npoint};
use dessin_core::oracle::{Oracle, DEFAULT_MAX_DEGREE};
use dessin_core::partition::{partitions_of, Partition};
use dessin_core::polyfit::{conjecture_fit, stanley_fit, ConjectureSpec, CorrelatorRoute};
use dessin_core::series::GradedSeries;
use serde_json::{json, Value};

use crate::{
    BasisArg, CliError, CmdResult, ConjectureArgs, CorrelatorArgs, FitRoute, OracleArgs, Outcome,
    PartitionFunctionArgs, Route, SeriesRoute, StanleyArgs, Suite, VerifyArgs,
};

fn parse_partition(s: &str) -> Result<Partition, CliError> {
    Ok(s.parse::<Partition>()?)
}

fn parse_counts(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::new("parse", format!("bad count {t:?} in {s:?}")))
        })
        .collect()
}

fn exps(k: &[usize]) -> Vec<u32> {
    k.iter().map(|&x| x as u32).collect()
}

/// Every `r`-tuple of partitions of `d`.
fn profile_tuples(d: usize, r: usize) -> Vec<Vec<Partition>> {
    let parts = partitions_of(d, None);
    let mut out = vec![vec![]];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|t: Vec<Partition>| {
                parts.iter().map(move |q| {
                    let mut t = t.clone();
                    t.push(q.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Σ over profile tuples of enumerated counts, as a polynomial in `v` by profile lengths.
fn enumerated(r: usize, mu: &Partition, connected: bool) -> Result<VPoly, CliError> {
    let oracle = Oracle::default();
    let mut out = VPoly::zero(r);
    for etas in profile_tuples(mu.size(), r) {
        let lengths: Vec<u32> = etas.iter().map(|e| e.length() as u32).collect();
        let mut all = vec![mu.clone()];
        all.extend(etas);
        let count = oracle.count(&RamificationProfile::new(all)?)?;
        let v = if connected { count.connected() } else { count.disconnected() };
        out.add_term(Monomial::new(lengths), v);
    }
    Ok(out)
}

fn route_name(route: Route) -> &'static str {
    match route {
        Route::Zhou => "zhou",
        Route::Log => "log",
        Route::Burnside => "burnside",
        Route::All => "all",
    }
}

/// One route's answer as canonical text.
fn correlator_value(
    route: Route,
    a: &CorrelatorArgs,
    mu: &Partition,
    k: Option<&[usize]>,
    cache: &CharCache,
) -> Result<String, CliError> {
    let d = mu.size();
    let pick = |poly: VPoly| match k {
        Some(k) => poly.coeff(&exps(k)).to_string(),
        None => poly.to_text(),
    };
    match (route, a.connected) {
        (Route::Zhou, true) => match k {
            Some(k) => {
                if k.len() != a.r {
                    return Err(CliError::new("contract_violation", format!("expected {} counts k", a.r)));
                }
                Ok(zhou_coefficient(mu, &exps(k))?.to_string())
            }
            None => Ok(zhou_npoint(mu, &affine_coords(a.r, d))?.to_text()),
        },
        (Route::Log, true) => match k {
            Some(k) => Ok(n_circ(a.r, k, mu, cache)?.to_string()),
            None => Ok(connected_series(a.r, d, cache)?.coeff(mu).to_text()),
        },
        (Route::Burnside, false) => match k {
            Some(k) => Ok(n_bullet(a.r, k, mu, cache)?.to_string()),
            None => Ok(disconnected_series(a.r, d, cache)?.coeff(mu).to_text()),
        },
        // Brute-force tuple enumeration: transitive tuples for N°, all tuples for N•.
        (Route::Burnside, true) => {
            if let Some(k) = k {
                if k.len() != a.r {
                    return Err(CliError::new("contract_violation", format!("expected {} counts k", a.r)));
                }
            }
            Ok(pick(enumerated(a.r, mu, true)?))
        }
        (Route::Zhou | Route::Log, false) => Err(CliError::new(
            "contract_violation",
            "zhou and log routes compute connected correlators; add --connected or use burnside",
        )),
        (Route::All, _) => unreachable!("expanded by the caller"),
    }
}

pub fn correlator(a: &CorrelatorArgs, cache: &CharCache) -> CmdResult {
    if a.r == 0 {
        return Err(CliError::new("contract_violation", "r must be at least 1"));
    }
    let mu = parse_partition(&a.mu)?;
    if mu.is_empty() {
        return Err(CliError::new("contract_violation", "μ must be nonempty"));
    }
    let k = a.k.as_deref().map(parse_counts).transpose()?;
    if k.is_none() && !a.generating {
        return Err(CliError::new("usage", "give --k or --generating"));
    }
    let k = if a.generating { None } else { k };
    let route = a.route.unwrap_or(if a.connected { Route::Zhou } else { Route::Burnside });
    let mut doc = json!({
        "r": a.r,
        "mu": mu.to_text(),
        "k": k,
        "connected": a.connected,
        "generating": a.generating,
        "route": route_name(route),
    });
    if route != Route::All {
        doc["value"] = json!(correlator_value(route, a, &mu, k.as_deref(), cache)?);
        return Ok(Outcome::ok(doc));
    }
    let mut routes = serde_json::Map::new();
    let engines: &[Route] = if a.connected { &[Route::Zhou, Route::Log] } else { &[Route::Burnside] };
    for &r in engines {
        routes.insert(route_name(r).into(), json!(correlator_value(r, a, &mu, k.as_deref(), cache)?));
    }
    if mu.size() <= DEFAULT_MAX_DEGREE {
        let poly = enumerated(a.r, &mu, a.connected)?;
        let text = match &k {
            Some(k) => poly.coeff(&exps(k)).to_string(),
            None => poly.to_text(),
        };
        routes.insert("enumeration".into(), json!(text));
    }
    let values: Vec<&Value> = routes.values().collect();
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    doc["value"] = values[0].clone();
    doc["routes"] = Value::Object(routes);
    doc["agree"] = json!(agree);
    Ok(Outcome { result: doc, ok: agree })
}

fn series_json(g: &GradedSeries) -> Value {
    let terms: Vec<Value> = g
        .terms()
        .map(|(p, c)| json!({"index": p.to_text(), "coeff": c.to_text()}))
        .collect();
    json!({"basis": g.basis().to_string(), "arity": g.arity(), "max_degree": g.max_degree(), "terms": terms})
}

pub fn partition_function(a: &PartitionFunctionArgs, cache: &CharCache) -> CmdResult {
    if a.r == 0 {
        return Err(CliError::new("contract_violation", "r must be at least 1"));
    }
    let series = match a.basis {
        BasisArg::Schur => {
            if a.connected {
                return Err(CliError::new("contract_violation", "--connected needs the powersum basis"));
            }
            match a.route.unwrap_or(SeriesRoute::Direct) {
                SeriesRoute::Direct => z_direct(a.r, a.degree),
                SeriesRoute::Flow => z_flow(a.r, a.degree),
                SeriesRoute::Burnside => {
                    return Err(CliError::new("contract_violation", "burnside builds the powersum basis"))
                }
            }
        }
        BasisArg::Powersum => {
            let z = match a.route.unwrap_or(SeriesRoute::Burnside) {
                SeriesRoute::Burnside => disconnected_series(a.r, a.degree, cache)?,
                SeriesRoute::Flow => schur_series_to_powersum(&z_flow(a.r, a.degree), cache)?,
                SeriesRoute::Direct => schur_series_to_powersum(&z_direct(a.r, a.degree), cache)?,
            };
            if a.connected {
                z.log()?
            } else {
                z
            }
        }
    };
    let mut doc = series_json(&series);
    doc["r"] = json!(a.r);
    doc["connected"] = json!(a.connected);
    Ok(Outcome::ok(doc))
}

struct CheckReport {
    name: &'static str,
    params: Value,
    counterexample: Option<Value>,
}

impl CheckReport {
    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "params": self.params,
            "status": if self.counterexample.is_none() { "pass" } else { "fail" },
            "counterexample": self.counterexample,
        })
    }
}

fn arities(r: Option<usize>, default_max: usize) -> Vec<usize> {
    match r {
        Some(r) => vec![r],
        None => (1..=default_max).collect(),
    }
}

fn check_cutjoin(r: usize, degree: usize) -> CheckReport {
    let flow = z_flow(r, degree);
    let direct = z_direct(r, degree);
    let counterexample = (0..=degree)
        .flat_map(|d| partitions_of(d, None))
        .find(|mu| flow.coeff(mu) != direct.coeff(mu))
        .map(|mu| json!({"lambda": mu.to_text(), "flow": flow.coeff(&mu).to_text(), "direct": direct.coeff(&mu).to_text()}));
    CheckReport {
        name: "cutjoin",
        params: json!({"r": r, "degree": degree}),
        counterexample,
    }
}

fn check_zhou(r: usize, max_weight: usize, cache: &CharCache) -> Result<CheckReport, CliError> {
    let log = connected_series(r, max_weight, cache)?;
    let am = affine_coords(r, max_weight);
    let mut counterexample = None;
    'outer: for d in 1..=max_weight {
        for mu in partitions_of(d, None) {
            let z = zhou_npoint(&mu, &am)?;
            if z != log.coeff(&mu) {
                counterexample = Some(json!({"mu": mu.to_text(), "zhou": z.to_text(), "log": log.coeff(&mu).to_text()}));
                break 'outer;
            }
        }
    }
    Ok(CheckReport {
        name: "zhou",
        params: json!({"r": r, "max_weight": max_weight}),
        counterexample,
    })
}

fn check_burnside(max_d: usize, cache: &CharCache) -> Result<CheckReport, CliError> {
    let oracle = Oracle::default();
    let mut counterexample = None;
    let mut checked = 0usize;
    'outer: for d in 1..=max_d {
        for m in 2..=3 {
            for profiles in profile_tuples(d, m) {
                let rp = RamificationProfile::new(profiles)?;
                let o = oracle.disconnected(&rp)?;
                let b = burnside_disconnected(&rp, cache)?;
                checked += 1;
                if o != b {
                    counterexample = Some(json!({"profile": rp.to_string(), "oracle": o.to_string(), "burnside": b.to_string()}));
                    break 'outer;
                }
            }
        }
    }
    Ok(CheckReport {
        name: "burnside",
        params: json!({"d": max_d, "profiles_checked": checked}),
        counterexample,
    })
}

fn check_appendix(degree: usize, cache: &CharCache) -> Result<CheckReport, CliError> {
    let flow = virasoro_flow(degree);
    let mut counterexample = None;
    'outer: for d in 0..=degree {
        for mu in partitions_of(d, None) {
            let hc = hook_content_eval(&mu, 1, 0).value();
            let ch = character_route_eval(&mu, 1, 0, cache)?;
            let vf = flow.coeff(&mu);
            if hc != ch || hc != vf {
                counterexample = Some(json!({
                    "mu": mu.to_text(),
                    "hook_content": hc.to_text(),
                    "character": ch.to_text(),
                    "virasoro": vf.to_text(),
                }));
                break 'outer;
            }
        }
    }
    Ok(CheckReport {
        name: "appendix",
        params: json!({"degree": degree}),
        counterexample,
    })
}

fn check_akcoeffs(r: usize) -> CheckReport {
    let closed = a_coeffs_closed(r);
    let relation = a_coeffs_from_relation(r);
    let counterexample = (1..=r + 1)
        .find(|&k| closed.a(k) != relation.a(k))
        .map(|k| json!({"k": k, "closed": closed.a(k).to_text(), "relation": relation.a(k).to_text()}))
        .or_else(|| (!closed.satisfies_relation()).then(|| json!({"relation": "not satisfied"})));
    CheckReport {
        name: "akcoeffs",
        params: json!({"r": r}),
        counterexample,
    }
}

pub fn verify(a: &VerifyArgs, cache: &CharCache) -> CmdResult {
    let degree = a.degree;
    let max_d = a.d.unwrap_or(4);
    if max_d > DEFAULT_MAX_DEGREE {
        return Err(CliError::new(
            "size_limit",
            format!("burnside check degree {max_d} exceeds oracle limit {DEFAULT_MAX_DEGREE}"),
        ));
    }
    let run = |suite: Suite| -> Result<Vec<CheckReport>, CliError> {
        Ok(match suite {
            Suite::Cutjoin => arities(a.r, 3)
                .into_iter()
                .map(|r| check_cutjoin(r, degree.unwrap_or(5)))
                .collect(),
            Suite::Zhou => arities(a.r, 3)
                .into_iter()
                .map(|r| check_zhou(r, a.max_weight.unwrap_or(5), cache))
                .collect::<Result<_, _>>()?,
            Suite::Burnside => vec![check_burnside(max_d, cache)?],
            Suite::Appendix => vec![check_appendix(degree.unwrap_or(8), cache)?],
            Suite::Akcoeffs => arities(a.r, 8).into_iter().map(check_akcoeffs).collect(),
            Suite::All => unreachable!("expanded below"),
        })
    };
    let suites = match a.suite {
        Suite::All => vec![Suite::Cutjoin, Suite::Zhou, Suite::Burnside, Suite::Appendix, Suite::Akcoeffs],
        s => vec![s],
    };
    let mut checks = Vec::new();
    for s in suites {
        checks.extend(run(s)?);
    }
    let pass = checks.iter().all(|c| c.counterexample.is_none());
    let doc = json!({
        "checks": checks.iter().map(CheckReport::to_json).collect::<Vec<_>>(),
        "pass": pass,
    });
    Ok(Outcome { result: doc, ok: pass })
}

pub fn fit_stanley(a: &StanleyArgs, cache: &CharCache) -> CmdResult {
    let lambda = parse_partition(&a.lambda)?;
    let mu = parse_partition(&a.mu)?;
    let rep = stanley_fit(a.r, &lambda, &mu, a.samples, a.holdout, cache)?;
    let mut doc = rep.to_json();
    doc["kind"] = json!("stanley");
    doc["params"] = json!({"r": a.r, "lambda": lambda.to_text(), "mu": mu.to_text()});
    Ok(Outcome { ok: rep.verified(), result: doc })
}

pub fn fit_conjecture(a: &ConjectureArgs, cache: &CharCache) -> CmdResult {
    let k = parse_counts(&a.k)?;
    let spec = ConjectureSpec {
        start: None,
        holdout: a.holdout,
        max_degree: a.max_degree,
        max_weight: a.nmax,
        route: match a.route {
            FitRoute::Zhou => CorrelatorRoute::Zhou,
            FitRoute::Log => CorrelatorRoute::Log,
        },
    };
    let rep = conjecture_fit(a.r, &k, a.length, &spec, cache)?;
    let mut doc = rep.to_json();
    doc["kind"] = json!("conjecture");
    doc["params"] = json!({"r": a.r, "k": k, "length": a.length, "nmax": a.nmax});
    // A failed fit is data about the conjecture, not an error; the exit code still flags it.
    Ok(Outcome { ok: rep.verified(), result: doc })
}

pub fn oracle(a: &OracleArgs) -> CmdResult {
    let rp: RamificationProfile = a.profiles.parse()?;
    let count = Oracle::new(a.max_degree).count(&rp)?;
    let value: Rational = if a.connected { count.connected() } else { count.disconnected() };
    Ok(Outcome::ok(json!({
        "profiles": rp.to_string(),
        "degree": count.degree,
        "tuples": count.tuples,
        "transitive": count.transitive,
        "disconnected": count.disconnected().to_string(),
        "connected": count.connected().to_string(),
        "value": value.to_string(),
    })))
}

pub fn cache_chars(d: usize, cache: &CharCache) -> CmdResult {
    let Some(path) = cache.file_for(d) else {
        return Err(CliError::new(
            "usage",
            "no cache directory; pass --cache-dir or set DESSIN_CACHE_DIR",
        ));
    };
    let existed = path.exists();
    let table = cache.table(d)?;
    let orthogonal = table.column_orthogonality_holds() && table.row_orthogonality_holds();
    Ok(Outcome {
        ok: orthogonal,
        result: json!({
            "d": d,
            "partitions": table.partitions().len(),
            "path": path.display().to_string(),
            "status": if existed { "present" } else { "written" },
            "orthogonal": orthogonal,
        }),
    })
}
