//! Integer partitions and Young-diagram combinatorics.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::factorial;
use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
///
/// Partitions order first by size and then reverse-lexicographically, so
/// `(3) < (2,1) < (1,1,1)`; this is the iteration order of every map keyed
/// by partitions in the crate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

/// A cell of a Young diagram, 1-based (`row`, `col`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramBox {
    pub row: usize,
    pub col: usize,
}

impl DiagramBox {
    pub fn new(row: usize, col: usize) -> Self {
        DiagramBox { row, col }
    }

    /// `col - row`.
    pub fn content(&self) -> i64 {
        self.col as i64 - self.row as i64
    }
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    /// Sorts the parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// `(1^n)`.
    pub fn column(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Row `i` (1-based); zero past the last row.
    pub fn row(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// `m_i(λ)`: how many parts equal `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    pub fn transpose(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count())
            .collect();
        Partition { parts }
    }

    /// Frobenius coordinates `(m_1..m_k | n_1..n_k)` with `m_i = λ_i - i`, `n_i = λ^t_i - i`.
    pub fn frobenius(&self) -> (Vec<usize>, Vec<usize>) {
        let t = self.transpose();
        let k = (1..=self.length()).take_while(|&i| self.row(i) >= i).count();
        let m = (1..=k).map(|i| self.row(i) - i).collect();
        let n = (1..=k).map(|i| t.row(i) - i).collect();
        (m, n)
    }

    /// The hook partition `(m+1, 1^n)`.
    pub fn hook(m: usize, n: usize) -> Partition {
        let mut parts = vec![m + 1];
        parts.extend(std::iter::repeat_n(1, n));
        Partition { parts }
    }

    pub fn contains(&self, b: DiagramBox) -> bool {
        b.row >= 1 && b.col >= 1 && b.col <= self.row(b.row)
    }

    pub fn boxes(&self) -> impl Iterator<Item = DiagramBox> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |j| DiagramBox::new(i + 1, j)))
    }

    pub fn hook_length(&self, b: DiagramBox) -> Result<usize> {
        if !self.contains(b) {
            return Err(Error::Contract(format!(
                "box ({}, {}) lies outside the diagram of {self}",
                b.row, b.col
            )));
        }
        let arm = self.row(b.row) - b.col;
        let leg = self.parts[b.row..].iter().filter(|&&p| p >= b.col).count();
        Ok(arm + leg + 1)
    }

    pub fn content(&self, b: DiagramBox) -> Result<i64> {
        if !self.contains(b) {
            return Err(Error::Contract(format!(
                "box ({}, {}) lies outside the diagram of {self}",
                b.row, b.col
            )));
        }
        Ok(b.content())
    }

    pub fn contents(&self) -> Vec<i64> {
        self.boxes().map(|b| b.content()).collect()
    }

    pub fn hook_lengths(&self) -> Vec<usize> {
        let t = self.transpose();
        self.boxes()
            .map(|b| (self.row(b.row) - b.col) + (t.row(b.col) - b.row) + 1)
            .collect()
    }

    pub fn hook_product(&self) -> BigInt {
        self.hook_lengths()
            .into_iter()
            .fold(BigInt::one(), |acc, h| acc * BigInt::from(h))
    }

    /// `z_λ = ∏_i i^{m_i} m_i!`, the centralizer order of a permutation of cycle type λ.
    pub fn z_factor(&self) -> BigInt {
        let mut z = BigInt::one();
        let mut i = 0;
        while i < self.parts.len() {
            let p = self.parts[i];
            let mut m = 0;
            while i < self.parts.len() && self.parts[i] == p {
                m += 1;
                i += 1;
            }
            z *= BigInt::from(p).pow(m as u32) * factorial(m);
        }
        z
    }

    /// Dimension of the irreducible `S_{|λ|}` representation, by the hook length formula.
    pub fn dim_irrep(&self) -> BigInt {
        factorial(self.size()) / self.hook_product()
    }

    /// Cells whose addition leaves a partition, top row first.
    pub fn addable_boxes(&self) -> Vec<DiagramBox> {
        let mut out = Vec::new();
        for i in 1..=self.length() + 1 {
            if i == 1 || self.row(i - 1) > self.row(i) {
                out.push(DiagramBox::new(i, self.row(i) + 1));
            }
        }
        out
    }

    /// Cells whose removal leaves a partition, top row first.
    pub fn removable_boxes(&self) -> Vec<DiagramBox> {
        (1..=self.length())
            .filter(|&i| self.row(i) > self.row(i + 1))
            .map(|i| DiagramBox::new(i, self.row(i)))
            .collect()
    }

    /// Panics unless `b` is addable.
    pub fn add_box(&self, b: DiagramBox) -> Partition {
        let mut parts = self.parts.clone();
        if b.row == parts.len() + 1 {
            assert_eq!(b.col, 1, "box is not addable");
            parts.push(1);
        } else {
            assert_eq!(parts[b.row - 1] + 1, b.col, "box is not addable");
            parts[b.row - 1] += 1;
        }
        Partition::new(parts).expect("box is not addable")
    }

    /// Panics unless `b` is removable.
    pub fn remove_box(&self, b: DiagramBox) -> Partition {
        let mut parts = self.parts.clone();
        assert_eq!(parts[b.row - 1], b.col, "box is not removable");
        parts[b.row - 1] -= 1;
        if parts[b.row - 1] == 0 {
            parts.pop();
        }
        Partition::new(parts).expect("box is not removable")
    }

    /// Concatenate parts and re-sort (the index product `p_λ p_μ = p_{λ∪μ}`).
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Partition::from_unsorted(parts)
    }

    /// Comma-separated text form, `[]` for the empty partition.
    pub fn to_text(&self) -> String {
        if self.parts.is_empty() {
            "[]".to_string()
        } else {
            self.parts
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let inner = trimmed
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .or_else(|| trimmed.strip_prefix('(').and_then(|t| t.strip_suffix(')')))
            .unwrap_or(trimmed)
            .trim();
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad partition part {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `d` in reverse-lexicographic order, optionally of a fixed length.
pub fn partitions_of(d: usize, length: Option<usize>) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(
        remaining: usize,
        max_part: usize,
        length: Option<usize>,
        current: &mut Vec<usize>,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            if length.is_none_or(|l| l == current.len()) {
                out.push(Partition {
                    parts: current.clone(),
                });
            }
            return;
        }
        if let Some(l) = length {
            if current.len() >= l {
                return;
            }
            // Remaining slots cannot absorb what is left.
            if (l - current.len()) * max_part < remaining {
                return;
            }
        }
        for p in (1..=max_part.min(remaining)).rev() {
            current.push(p);
            rec(remaining - p, p, length, current, out);
            current.pop();
        }
    }
    rec(d, d, length, &mut current, &mut out);
    out
}

/// `[a]_k = a (a-1) ... (a-k+1)`, with `[a]_0 = 1`.
pub fn falling_factorial(a: i64, k: usize) -> BigInt {
    (0..k as i64).fold(BigInt::one(), |acc, j| acc * BigInt::from(a - j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p(&[3, 1]).transpose(), p(&[2, 1, 1]));
        assert_eq!(Partition::empty().transpose(), Partition::empty());
        assert_eq!(p(&[2, 2]).transpose(), p(&[2, 2]));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(p(&[1]).frobenius(), (vec![0], vec![0]));
        assert_eq!(p(&[2, 2]).frobenius(), (vec![1, 0], vec![1, 0]));
        for m in 0..4 {
            for n in 0..4 {
                assert_eq!(Partition::hook(m, n).frobenius(), (vec![m], vec![n]));
            }
        }
    }

    #[test]
    fn hooks_and_contents() {
        let l = p(&[2, 1]);
        assert_eq!(l.hook_length(DiagramBox::new(1, 1)).unwrap(), 3);
        assert_eq!(l.content(DiagramBox::new(1, 1)).unwrap(), 0);
        let sq = p(&[2, 2]);
        assert_eq!(sq.hook_length(DiagramBox::new(1, 2)).unwrap(), 2);
        assert_eq!(sq.content(DiagramBox::new(1, 2)).unwrap(), 1);
        let row = p(&[5]);
        for j in 1..=5 {
            assert_eq!(row.hook_length(DiagramBox::new(1, j)).unwrap(), 5 - j + 1);
            assert_eq!(row.content(DiagramBox::new(1, j)).unwrap(), j as i64 - 1);
        }
        assert!(l.hook_length(DiagramBox::new(2, 2)).is_err());
        assert!(l.content(DiagramBox::new(3, 1)).is_err());
    }

    #[test]
    fn z_factor_examples() {
        assert_eq!(p(&[2, 1]).z_factor(), BigInt::from(2));
        assert_eq!(p(&[1, 1, 1]).z_factor(), BigInt::from(6));
        assert_eq!(p(&[3, 3, 2]).z_factor(), BigInt::from(36));
        assert_eq!(Partition::empty().z_factor(), BigInt::from(1));
    }

    /// Count standard Young tableaux by peeling off removable corners.
    fn count_tableaux(l: &Partition) -> u64 {
        if l.is_empty() {
            return 1;
        }
        l.removable_boxes()
            .into_iter()
            .map(|b| count_tableaux(&l.remove_box(b)))
            .sum()
    }

    #[test]
    fn dim_irrep_examples() {
        assert_eq!(p(&[2, 1]).dim_irrep(), BigInt::from(2));
        assert_eq!(p(&[6]).dim_irrep(), BigInt::from(1));
        assert_eq!(count_tableaux(&p(&[2, 2])), 2);
        assert_eq!(p(&[2, 2]).dim_irrep(), BigInt::from(2));
        for d in 0..=8 {
            for l in partitions_of(d, None) {
                assert_eq!(l.dim_irrep(), BigInt::from(count_tableaux(&l)), "{l}");
            }
        }
    }

    #[test]
    fn addable_and_removable() {
        let e = Partition::empty();
        assert_eq!(e.addable_boxes(), vec![DiagramBox::new(1, 1)]);
        let l = p(&[2, 1]);
        let add: Vec<i64> = l.addable_boxes().iter().map(|b| b.content()).collect();
        assert_eq!(add, vec![2, 0, -2]);
        let rem: Vec<i64> = l.removable_boxes().iter().map(|b| b.content()).collect();
        assert_eq!(rem, vec![1, -1]);
    }

    #[test]
    fn partitions_of_examples() {
        assert_eq!(partitions_of(4, None).len(), 5);
        assert_eq!(partitions_of(5, Some(2)), vec![p(&[4, 1]), p(&[3, 2])]);
        assert_eq!(partitions_of(0, None), vec![Partition::empty()]);
        assert_eq!(partitions_of(3, None), vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]);
        let counts: Vec<usize> = (0..=10).map(|d| partitions_of(d, None).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn partitions_of_is_sorted_by_partition_order() {
        for d in 0..=8 {
            let ps = partitions_of(d, None);
            assert!(ps.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(falling_factorial(-3, 0), BigInt::from(1));
        assert_eq!(falling_factorial(2, 4), BigInt::from(0));
        assert_eq!(falling_factorial(-1, 2), BigInt::from(2));
    }

    #[test]
    fn text_form_round_trip() {
        assert_eq!("2,1".parse::<Partition>().unwrap(), p(&[2, 1]));
        assert_eq!("[]".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!(p(&[3, 1, 1]).to_text(), "3,1,1");
        assert_eq!(Partition::empty().to_text(), "[]");
        assert!("1,2".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
    }

    #[test]
    fn structural_invariants() {
        for d in 0..=10 {
            for l in partitions_of(d, None) {
                assert_eq!(l.transpose().transpose(), l);
                assert_eq!(l.addable_boxes().len(), l.removable_boxes().len() + 1);
                // Addable contents follow the row-wise case split.
                for b in l.addable_boxes() {
                    let expected = if b.row <= l.length() {
                        l.row(b.row) as i64 + 1 - b.row as i64
                    } else {
                        -(l.length() as i64)
                    };
                    assert_eq!(b.content(), expected);
                }
            }
        }
    }

    #[test]
    fn class_equation_and_dimension_sum() {
        for d in 0..=8 {
            let ps = partitions_of(d, None);
            let fact = factorial(d);
            let dims: BigInt = ps.iter().map(|l| l.dim_irrep().pow(2)).sum();
            assert_eq!(dims, fact);
            let classes: BigInt = ps.iter().map(|l| &fact / l.z_factor()).sum();
            assert_eq!(classes, fact);
        }
    }
}
