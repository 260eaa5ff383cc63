//! Symmetric-group characters, the Schur/power-sum change of basis, and the
//! two closed-form Schur evaluations.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{int, Rational, VPoly};
use crate::error::{Error, Result};
use crate::partition::{partitions_of, Partition};

const CACHE_FORMAT: u64 = 1;

/// χ^λ(C_μ) by the Murnaghan–Nakayama rule.
pub fn mn_character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::Contract(format!(
            "character needs |λ| = |μ|, got |{lambda}| = {} and |{mu}| = {}",
            lambda.size(),
            mu.size()
        )));
    }
    let mut memo = HashMap::new();
    Ok(mn_rec(lambda, mu.parts(), &mut memo))
}

/// Strip border strips of lengths `mu[..]` from `shape`, largest first.
///
/// `mu` is always the suffix of the class whose parts sum to `|shape|`, so
/// the remaining shape alone is a valid memo key for a fixed class.
fn mn_rec(shape: &Partition, mu: &[usize], memo: &mut HashMap<Partition, i64>) -> i64 {
    if mu.is_empty() {
        return 1;
    }
    if let Some(&v) = memo.get(shape) {
        return v;
    }
    let k = mu[0];
    let len = shape.length();
    // Beta numbers λ_i + (l - i), strictly decreasing.
    let beta: Vec<usize> = (1..=len).map(|i| shape.row(i) + len - i).collect();
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < k {
            continue;
        }
        let target = b - k;
        if beta.contains(&target) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut moved = beta.clone();
        moved[idx] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let parts = moved
            .iter()
            .enumerate()
            .map(|(i, &x)| x - (len - 1 - i))
            .collect();
        let sub = Partition::from_unsorted(parts);
        let v = mn_rec(&sub, &mu[1..], memo);
        if between % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    memo.insert(shape.clone(), total);
    total
}

/// Full character table of `S_d`, rows and columns in partition order.
#[derive(Debug)]
pub struct CharTable {
    d: usize,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    values: Vec<i64>,
    length_sums: OnceLock<Vec<Vec<Rational>>>,
}

impl PartialEq for CharTable {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.partitions == other.partitions && self.values == other.values
    }
}

impl Eq for CharTable {}

impl CharTable {
    pub fn compute(d: usize) -> CharTable {
        let partitions = partitions_of(d, None);
        let columns: Vec<Vec<i64>> = partitions
            .par_iter()
            .map(|mu| {
                let mut memo = HashMap::new();
                partitions
                    .iter()
                    .map(|lambda| mn_rec(lambda, mu.parts(), &mut memo))
                    .collect()
            })
            .collect();
        let n = partitions.len();
        let mut values = vec![0; n * n];
        for (j, col) in columns.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                values[i * n + j] = v;
            }
        }
        CharTable::from_parts(d, partitions, values)
    }

    fn from_parts(d: usize, partitions: Vec<Partition>, values: Vec<i64>) -> CharTable {
        let index = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        CharTable {
            d,
            partitions,
            index,
            values,
            length_sums: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn value_at(&self, i: usize, j: usize) -> i64 {
        self.values[i * self.partitions.len() + j]
    }

    /// χ^λ(C_μ). Panics if either partition is not of size `d`.
    pub fn chi(&self, lambda: &Partition, mu: &Partition) -> i64 {
        let i = self.index_of(lambda).expect("λ is not a partition of d");
        let j = self.index_of(mu).expect("μ is not a partition of d");
        self.value_at(i, j)
    }

    /// `Σ_{ν ⊢ d, l(ν) = k} χ^η(C_ν) / z_ν`, memoized for every (η, k).
    pub fn length_sum(&self, eta: &Partition, k: usize) -> Rational {
        let sums = self.length_sums.get_or_init(|| {
            let n = self.partitions.len();
            let z: Vec<BigInt> = self.partitions.iter().map(|p| p.z_factor()).collect();
            (0..n)
                .map(|i| {
                    let mut row = vec![Rational::zero(); self.d + 1];
                    for (j, nu) in self.partitions.iter().enumerate() {
                        row[nu.length()] +=
                            Rational::new(BigInt::from(self.value_at(i, j)), z[j].clone());
                    }
                    row
                })
                .collect()
        });
        let i = self.index_of(eta).expect("η is not a partition of d");
        sums[i].get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Σ_λ χ^λ(C_μ) χ^λ(C_ν) = δ_{μν} z_μ` for every pair of classes.
    pub fn column_orthogonality_holds(&self) -> bool {
        let n = self.partitions.len();
        (0..n).all(|a| {
            (a..n).all(|b| {
                let s: i64 = (0..n).map(|i| self.value_at(i, a) * self.value_at(i, b)).sum();
                let expected = if a == b {
                    self.partitions[a].z_factor()
                } else {
                    BigInt::zero()
                };
                BigInt::from(s) == expected
            })
        })
    }

    /// `Σ_μ χ^λ(C_μ) χ^η(C_μ) / z_μ = δ_{λη}`.
    pub fn row_orthogonality_holds(&self) -> bool {
        let n = self.partitions.len();
        let z: Vec<BigInt> = self.partitions.iter().map(|p| p.z_factor()).collect();
        (0..n).all(|a| {
            (a..n).all(|b| {
                let s: Rational = (0..n)
                    .map(|j| {
                        Rational::new(
                            BigInt::from(self.value_at(a, j) * self.value_at(b, j)),
                            z[j].clone(),
                        )
                    })
                    .sum();
                s == if a == b { Rational::one() } else { Rational::zero() }
            })
        })
    }

    /// `χ^λ(C_{(1^d)}) = dim V^λ` for every λ.
    pub fn identity_column_is_dimension(&self) -> bool {
        let j = self.index_of(&Partition::column(self.d)).expect("identity class");
        self.partitions
            .iter()
            .enumerate()
            .all(|(i, lambda)| BigInt::from(self.value_at(i, j)) == lambda.dim_irrep())
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = json!({"format": CACHE_FORMAT, "d": self.d}).to_string();
        out.push('\n');
        for (i, lambda) in self.partitions.iter().enumerate() {
            for (j, mu) in self.partitions.iter().enumerate() {
                let rec = json!({
                    "lambda": lambda.to_text(),
                    "mu": mu.to_text(),
                    "chi": self.value_at(i, j).to_string(),
                });
                out.push_str(&rec.to_string());
                out.push('\n');
            }
        }
        out
    }

    pub fn from_jsonl(d: usize, reader: impl BufRead) -> std::result::Result<CharTable, String> {
        let mut lines = reader.lines();
        let header: Value = match lines.next() {
            Some(line) => serde_json::from_str(&line.map_err(|e| e.to_string())?)
                .map_err(|e| format!("bad header: {e}"))?,
            None => return Err("empty file".into()),
        };
        if header["format"].as_u64() != Some(CACHE_FORMAT) {
            return Err(format!("unsupported format tag {}", header["format"]));
        }
        if header["d"].as_u64() != Some(d as u64) {
            return Err(format!("header degree {} does not match {d}", header["d"]));
        }
        let partitions = partitions_of(d, None);
        let n = partitions.len();
        let index: HashMap<&Partition, usize> =
            partitions.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut values = vec![None; n * n];
        for line in lines {
            let line = line.map_err(|e| e.to_string())?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Value = serde_json::from_str(&line).map_err(|e| format!("bad record: {e}"))?;
            let field = |k: &str| {
                rec[k]
                    .as_str()
                    .map(str::to_owned)
                    .ok_or_else(|| format!("record lacks string field {k:?}"))
            };
            let lambda: Partition = field("lambda")?.parse().map_err(|e: Error| e.to_string())?;
            let mu: Partition = field("mu")?.parse().map_err(|e: Error| e.to_string())?;
            let chi: i64 = field("chi")?.parse().map_err(|_| "bad character value".to_string())?;
            let (Some(&i), Some(&j)) = (index.get(&lambda), index.get(&mu)) else {
                return Err(format!("record ({lambda}; {mu}) is not of degree {d}"));
            };
            values[i * n + j] = Some(chi);
        }
        let values = values
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or("table is incomplete")?;
        Ok(CharTable::from_parts(d, partitions, values))
    }
}

/// Character tables shared across calls, optionally persisted to a directory.
#[derive(Debug, Default)]
pub struct CharCache {
    dir: Option<PathBuf>,
    tables: Mutex<HashMap<usize, Arc<CharTable>>>,
}

impl CharCache {
    pub fn in_memory() -> Self {
        CharCache::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        CharCache {
            dir: Some(dir.into()),
            tables: Mutex::new(HashMap::new()),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn file_for(&self, d: usize) -> Option<PathBuf> {
        self.dir.as_ref().map(|dir| dir.join(format!("chars_d{d}.jsonl")))
    }

    pub fn table(&self, d: usize) -> Result<Arc<CharTable>> {
        let mut tables = self.tables.lock().expect("character cache lock poisoned");
        if let Some(t) = tables.get(&d) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(self.load_or_compute(d)?);
        tables.insert(d, Arc::clone(&table));
        Ok(table)
    }

    fn load_or_compute(&self, d: usize) -> Result<CharTable> {
        let Some(path) = self.file_for(d) else {
            return Ok(CharTable::compute(d));
        };
        if path.exists() {
            let file = fs::File::open(&path).map_err(|source| Error::CacheIo {
                path: path.clone(),
                source,
            })?;
            match CharTable::from_jsonl(d, BufReader::new(file)) {
                Ok(t) => return Ok(t),
                Err(why) => {
                    log::warn!("discarding character cache {}: {why}", path.display());
                }
            }
        }
        let table = CharTable::compute(d);
        write_atomically(&path, table.to_jsonl().as_bytes())?;
        Ok(table)
    }
}

fn write_atomically(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |source| Error::CacheIo {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io_err)?;
    }
    let tmp = path.with_extension(format!("jsonl.tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io_err)?;
    f.write_all(bytes).map_err(io_err)?;
    f.sync_all().map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

/// `s_μ = Σ_{λ ⊢ |μ|} χ^μ(C_λ)/z_λ · p_λ`.
pub fn schur_to_powersum(mu: &Partition, cache: &CharCache) -> Result<BTreeMap<Partition, Rational>> {
    let table = cache.table(mu.size())?;
    Ok(table
        .partitions()
        .iter()
        .map(|lambda| {
            let c = Rational::new(BigInt::from(table.chi(mu, lambda)), lambda.z_factor());
            (lambda.clone(), c)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect())
}

/// `s_μ(t_k = v_i/k)` as a numerator `∏_□ (v_i + c(□))` over the hook product.
#[derive(Clone, Debug, PartialEq)]
pub struct HookContent {
    pub numerator: VPoly,
    pub hook_product: BigInt,
}

impl HookContent {
    pub fn value(&self) -> VPoly {
        self.numerator
            .scale(&Rational::new(BigInt::one(), self.hook_product.clone()))
    }
}

/// The content/hook evaluation of `s_μ` in variable `v_i` of an arity-`r` ring.
pub fn hook_content_eval(mu: &Partition, r: usize, i: usize) -> HookContent {
    assert!(i < r, "variable index out of range");
    let mut numerator = VPoly::one(r);
    for c in mu.contents() {
        numerator = &numerator * &VPoly::linear(r, i, int(c));
    }
    HookContent {
        numerator,
        hook_product: mu.hook_product(),
    }
}

/// `Σ_λ χ^μ(C_λ)/z_λ · v_i^{l(λ)}`: `s_μ` with every `p_k` replaced by `v_i`.
pub fn character_route_eval(mu: &Partition, r: usize, i: usize, cache: &CharCache) -> Result<VPoly> {
    assert!(i < r, "variable index out of range");
    let mut out = VPoly::zero(r);
    for (lambda, c) in schur_to_powersum(mu, cache)? {
        out += &VPoly::var(r, i).pow(lambda.length() as u32).scale(&c);
    }
    Ok(out)
}

/// `s_η` at `p_1 = 1`, `p_k = 0` otherwise: `1 / ∏ h(□)`.
pub fn principal_eval(eta: &Partition) -> Rational {
    Rational::new(BigInt::one(), eta.hook_product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn trivial_and_sign_characters() {
        for d in 1..=7 {
            for mu in partitions_of(d, None) {
                assert_eq!(mn_character(&Partition::new(vec![d]).unwrap(), &mu).unwrap(), 1);
                let sign = if (d - mu.length()) % 2 == 0 { 1 } else { -1 };
                assert_eq!(mn_character(&Partition::column(d), &mu).unwrap(), sign);
            }
        }
        assert_eq!(mn_character(&p("2,1"), &p("3")).unwrap(), -1);
    }

    #[test]
    fn size_mismatch_is_contract_violation() {
        let err = mn_character(&p("2"), &p("1")).unwrap_err();
        assert_eq!(err.kind(), "contract_violation");
    }

    /// Trace of a permutation in the standard 2-dim irrep of S_3 is (#fixed points) - 1.
    #[test]
    fn s3_table_matches_permutation_traces() {
        let t = CharTable::compute(3);
        let classes = [p("1,1,1"), p("2,1"), p("3")];
        let fixed_points = [3, 1, 0];
        for (mu, fp) in classes.iter().zip(fixed_points) {
            assert_eq!(t.chi(&p("2,1"), mu), fp - 1);
        }
        let t1 = CharTable::compute(1);
        assert_eq!(t1.value_at(0, 0), 1);
    }

    #[test]
    fn orthogonality_up_to_eight() {
        for d in 0..=8 {
            let t = CharTable::compute(d);
            assert!(t.column_orthogonality_holds(), "d={d}");
            assert!(t.row_orthogonality_holds(), "d={d}");
            assert!(t.identity_column_is_dimension(), "d={d}");
        }
    }

    #[test]
    fn schur_to_powersum_examples() {
        let cache = CharCache::in_memory();
        let s1 = schur_to_powersum(&p("1"), &cache).unwrap();
        assert_eq!(s1, BTreeMap::from([(p("1"), int(1))]));
        let s2 = schur_to_powersum(&p("2"), &cache).unwrap();
        assert_eq!(s2, BTreeMap::from([(p("2"), rat(1, 2)), (p("1,1"), rat(1, 2))]));
        let s11 = schur_to_powersum(&p("1,1"), &cache).unwrap();
        assert_eq!(s11, BTreeMap::from([(p("2"), rat(-1, 2)), (p("1,1"), rat(1, 2))]));
    }

    #[test]
    fn hook_content_examples() {
        assert_eq!(hook_content_eval(&p("1"), 1, 0).value().to_text(), "v1");
        assert_eq!(
            hook_content_eval(&p("2"), 1, 0).value().to_text(),
            "1/2*v1^2 + 1/2*v1"
        );
        let hc = hook_content_eval(&p("2,1"), 1, 0);
        assert_eq!(hc.hook_product, BigInt::from(3));
        assert_eq!(hc.value().to_text(), "1/3*v1^3 - 1/3*v1");
    }

    #[test]
    fn principal_eval_examples() {
        assert_eq!(principal_eval(&p("1")), int(1));
        assert_eq!(principal_eval(&p("2,1")), rat(1, 3));
        assert_eq!(principal_eval(&p("3")), rat(1, 6));
    }

    #[test]
    fn evaluation_routes_agree() {
        let cache = CharCache::in_memory();
        for d in 0..=8 {
            for mu in partitions_of(d, None) {
                let hc = hook_content_eval(&mu, 2, 1).value();
                let ch = character_route_eval(&mu, 2, 1, &cache).unwrap();
                assert_eq!(hc, ch, "{mu}");
                let at_p1: Rational = schur_to_powersum(&mu, &cache)
                    .unwrap()
                    .into_iter()
                    .filter(|(l, _)| l.parts().iter().all(|&x| x == 1))
                    .map(|(_, c)| c)
                    .sum();
                assert_eq!(principal_eval(&mu), at_p1, "{mu}");
            }
        }
    }

    #[test]
    fn length_sums_match_direct_sum() {
        let t = CharTable::compute(5);
        for eta in t.partitions() {
            for k in 0..=6 {
                let direct: Rational = partitions_of(5, Some(k))
                    .iter()
                    .map(|nu| Rational::new(BigInt::from(t.chi(eta, nu)), nu.z_factor()))
                    .sum();
                assert_eq!(t.length_sum(eta, k), direct);
            }
        }
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CharCache::with_dir(dir.path());
        let t = cache.table(5).unwrap();
        let path = cache.file_for(5).unwrap();
        let first = fs::read(&path).unwrap();

        let reloaded = CharCache::with_dir(dir.path()).table(5).unwrap();
        assert_eq!(reloaded.values, t.values);
        assert_eq!(reloaded.to_jsonl().as_bytes(), &first[..]);

        fs::write(&path, "{\"format\": 1, \"d\": 5}\nnot json\n").unwrap();
        let recomputed = CharCache::with_dir(dir.path()).table(5).unwrap();
        assert_eq!(recomputed.values, t.values);
        assert_eq!(fs::read(&path).unwrap(), first);

        fs::write(&path, "{\"format\": 0, \"d\": 5}\n").unwrap();
        CharCache::with_dir(dir.path()).table(5).unwrap();
        assert_eq!(fs::read(&path).unwrap(), first);
    }
}
