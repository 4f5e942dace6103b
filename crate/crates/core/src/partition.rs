//! Integer partitions and Young-diagram combinatorics.
//!
//! A [`Partition`] is stored as its weakly decreasing list of positive parts.
//! Indexing conventions follow the usual 1-based notation: `part(i)` is
//! `λ_i`, `dual_part(j)` is `λ'_j` and `multiplicity(k)` is `α_k`, all of
//! which return zero outside their natural range.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, ParseError};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
    size: usize,
}

/// An outer corner of a Young diagram, in `(row, column)` coordinates.
///
/// `index` is the 1-based position of the cell when corners are listed by
/// increasing row (equivalently, decreasing column).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RemovableCell {
    pub index: usize,
    pub row: usize,
    pub col: usize,
}

impl Partition {
    /// The empty partition of 0.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a partition from weakly decreasing positive parts.
    pub fn from_parts(parts: Vec<usize>) -> Result<Self, Error> {
        if let Some(pos) = parts.iter().position(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("part {} is zero", pos + 1)));
        }
        if let Some(pos) = parts.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts are not weakly decreasing at position {} ({} < {})",
                pos + 2,
                parts[pos],
                parts[pos + 1]
            )));
        }
        Ok(Self::new_unchecked(parts))
    }

    /// Like [`Partition::from_parts`] but sorts the parts first.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self, Error> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::from_parts(parts)
    }

    /// `k^m`: the rectangle with `m` rows of length `k`.
    pub fn rectangle(k: usize, m: usize) -> Self {
        if k == 0 {
            return Self::empty();
        }
        Self::new_unchecked(vec![k; m])
    }

    pub(crate) fn new_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.iter().all(|&p| p > 0));
        let size = parts.iter().sum();
        Self { parts, size }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `n(λ)`, the number being partitioned.
    pub fn size(&self) -> usize {
        self.size
    }

    /// `N(λ)`, the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `λ_i` (1-based), zero past the last part.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// The largest part `λ_1`, which is also the length `N'` of the dual.
    pub fn largest(&self) -> usize {
        self.part(1)
    }

    /// `λ'_j = #{i : λ_i ≥ j}` (1-based), zero for `j > λ_1`.
    ///
    /// `j = 0` returns `N(λ)`; callers that need the `λ'_0 = ∞` convention
    /// must branch on it themselves.
    pub fn dual_part(&self, j: usize) -> usize {
        self.parts.partition_point(|&p| p >= j)
    }

    /// The dual (conjugate) partition: column heights of the diagram.
    pub fn dual(&self) -> Self {
        let parts = (1..=self.largest()).map(|j| self.dual_part(j)).collect();
        Self::new_unchecked(parts)
    }

    /// `α_k`, the number of parts equal to `k`.
    pub fn multiplicity(&self, k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        self.dual_part(k) - self.dual_part(k + 1)
    }

    /// Multiplicities `(α_1, …, α_{λ_1})`, zeros kept.
    pub fn multiplicities(&self) -> Vec<usize> {
        (1..=self.largest()).map(|k| self.multiplicity(k)).collect()
    }

    /// Rebuilds a partition from a multiplicity vector indexed from part value 1.
    pub fn from_multiplicities(alpha: &[usize]) -> Self {
        let mut parts = Vec::new();
        for (k, &a) in alpha.iter().enumerate().rev() {
            parts.extend(std::iter::repeat_n(k + 1, a));
        }
        Self::new_unchecked(parts)
    }

    /// Number of distinct part values, i.e. the number of removable cells `s`.
    pub fn distinct_parts(&self) -> usize {
        let mut s = 0;
        let mut prev = 0;
        for &p in &self.parts {
            if p != prev {
                s += 1;
                prev = p;
            }
        }
        s
    }

    /// Outer corners of the diagram, ordered by increasing row.
    pub fn removable_cells(&self) -> Result<Vec<RemovableCell>, Error> {
        if self.is_empty() {
            return Err(Error::EmptyPartition("removable_cells"));
        }
        Ok(self.corners())
    }

    pub(crate) fn corners(&self) -> Vec<RemovableCell> {
        let mut cells = Vec::with_capacity(self.distinct_parts());
        for (i, &p) in self.parts.iter().enumerate() {
            let last_of_run = self.parts.get(i + 1).is_none_or(|&next| next < p);
            if last_of_run {
                cells.push(RemovableCell {
                    index: cells.len() + 1,
                    row: i + 1,
                    col: p,
                });
            }
        }
        cells
    }

    /// `λ↓_j`: the partition left after deleting the `j`-th removable cell.
    pub fn remove_cell(&self, j: usize) -> Result<Self, Error> {
        let cells = self.removable_cells()?;
        let cell = j
            .checked_sub(1)
            .and_then(|i| cells.get(i))
            .ok_or(Error::CellIndexOutOfRange { index: j, count: cells.len() })?;
        Ok(self.without_cell(cell))
    }

    pub(crate) fn without_cell(&self, cell: &RemovableCell) -> Self {
        let mut parts = self.parts.clone();
        parts[cell.row - 1] -= 1;
        if parts[cell.row - 1] == 0 {
            parts.pop();
        }
        Self {
            parts,
            size: self.size - 1,
        }
    }

    /// `λ1^k`: append `k` parts equal to 1.
    pub fn extend_ones(&self, k: usize) -> Self {
        let mut parts = self.parts.clone();
        parts.extend(std::iter::repeat_n(1, k));
        Self {
            parts,
            size: self.size + k,
        }
    }

    /// Drops every part equal to 1.
    pub fn strip_ones(&self) -> Self {
        let parts: Vec<usize> = self.parts.iter().copied().filter(|&p| p > 1).collect();
        Self::new_unchecked(parts)
    }

    /// Dimension of the irreducible symmetric-group representation indexed by
    /// this partition, via the branching recursion over removable cells.
    pub fn dim_irrep(&self) -> Result<BigUint, Error> {
        if self.is_empty() {
            return Err(Error::EmptyPartition("dim_irrep"));
        }
        Ok(dim_irrep_memo(self))
    }

    /// Symbolic notation, e.g. `2^2 5 7 9` (ascending) or `9 7 5 2^2`.
    ///
    /// When every part is a single digit and occurs once the compact digit
    /// run (`321`) is used instead. A lone multi-digit part without a zero
    /// digit is written with an explicit `^1` so that it does not read back
    /// as a digit run.
    pub fn to_symbolic(&self, ascending: bool) -> String {
        let mut factors: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match factors.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => factors.push((p, 1)),
            }
        }
        if ascending {
            factors.reverse();
        }
        if factors.len() > 1 && factors.iter().all(|&(v, m)| v < 10 && m == 1) {
            return factors.iter().map(|(v, _)| v.to_string()).collect();
        }
        if let [(v, 1)] = factors[..] {
            let text = v.to_string();
            if text.len() > 1 && !text.contains('0') {
                return format!("{text}^1");
            }
            return text;
        }
        factors
            .iter()
            .map(|&(v, m)| if m == 1 { v.to_string() } else { format!("{v}^{m}") })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses symbolic notation; see [`parse_symbolic`].
    pub fn parse_symbolic(text: &str) -> Result<Self, ParseError> {
        parse_symbolic(text)
    }

    /// All partitions of `n` in reverse-lexicographic order, starting with `(n)`.
    pub fn all(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        gen_partitions(n, n, &mut current, &mut out);
        out
    }
}

fn gen_partitions(rest: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition::new_unchecked(current.clone()));
        return;
    }
    for p in (1..=max.min(rest)).rev() {
        current.push(p);
        gen_partitions(rest - p, p, current, out);
        current.pop();
    }
}

fn dim_cache() -> &'static RwLock<HashMap<Partition, BigUint>> {
    static CACHE: OnceLock<RwLock<HashMap<Partition, BigUint>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn dim_irrep_memo(p: &Partition) -> BigUint {
    if p.size() <= 1 {
        return BigUint::one();
    }
    if let Some(v) = dim_cache().read().unwrap().get(p) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    for cell in p.corners() {
        total += dim_irrep_memo(&p.without_cell(&cell));
    }
    dim_cache()
        .write()
        .unwrap()
        .entry(p.clone())
        .or_insert_with(|| total.clone());
    total
}

/// Parses the symbolic partition notation.
///
/// The input is either a single run of nonzero digits, each digit a part
/// (`321`), or whitespace-separated factors `k` / `k^m` in any order. Repeated
/// part values are summed. The empty string is the empty partition.
pub fn parse_symbolic(text: &str) -> Result<Partition, ParseError> {
    let tokens = tokenize(text);
    if let [(start, tok)] = tokens[..] {
        if tok.len() > 1 && tok.bytes().all(|b| (b'1'..=b'9').contains(&b)) {
            let parts = tok.bytes().map(|b| (b - b'0') as usize).collect();
            return Partition::from_unsorted(parts).map_err(|e| ParseError::new(start, e.to_string()));
        }
    }
    let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
    for (start, tok) in tokens {
        let (value, mult) = parse_factor(start, tok)?;
        *counts.entry(value).or_default() += mult;
    }
    let mut parts = Vec::new();
    for (&v, &m) in counts.iter().rev() {
        parts.extend(std::iter::repeat_n(v, m));
    }
    Ok(Partition::new_unchecked(parts))
}

fn tokenize(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_ascii_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

fn parse_factor(start: usize, tok: &str) -> Result<(usize, usize), ParseError> {
    let (base, exp) = match tok.find('^') {
        Some(i) => (&tok[..i], Some((i + 1, &tok[i + 1..]))),
        None => (tok, None),
    };
    let value = parse_int(start, base, "part value")?;
    if value == 0 {
        return Err(ParseError::new(start, "part value must be positive"));
    }
    let mult = match exp {
        None => 1,
        Some((off, e)) => {
            let m = parse_int(start + off, e, "exponent")?;
            if m == 0 {
                return Err(ParseError::new(start + off, "exponent must be positive"));
            }
            m
        }
    };
    Ok((value, mult))
}

fn parse_int(pos: usize, s: &str, what: &str) -> Result<usize, ParseError> {
    if s.is_empty() {
        return Err(ParseError::new(pos, format!("expected {what}")));
    }
    if let Some(i) = s.find(|c: char| !c.is_ascii_digit()) {
        return Err(ParseError::new(pos + i, format!("unexpected character in {what}")));
    }
    s.parse().map_err(|_| ParseError::new(pos, format!("{what} too large")))
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_symbolic(false))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{:?}", self.parts)
    }
}

impl FromStr for Partition {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_symbolic(s)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_symbolic(false))
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_symbolic(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::from_parts(parts.to_vec()).unwrap()
    }

    #[test]
    fn figure_one_partition() {
        let lambda = p(&[5, 5, 3, 3, 3, 2, 2, 1, 1]);
        assert_eq!(lambda.size(), 25);
        assert_eq!(lambda.len(), 9);
        assert_eq!(lambda.dual(), p(&[9, 7, 5, 2, 2]));
        assert_eq!(lambda.multiplicities(), vec![2, 2, 3, 0, 2]);
        let cells: Vec<_> = lambda
            .removable_cells()
            .unwrap()
            .iter()
            .map(|c| (c.row, c.col))
            .collect();
        assert_eq!(cells, vec![(2, 5), (5, 3), (7, 2), (9, 1)]);
        assert_eq!(lambda.remove_cell(4).unwrap(), p(&[5, 5, 3, 3, 3, 2, 2, 1]));
    }

    #[test]
    fn construction_rules() {
        assert!(Partition::from_parts(vec![]).unwrap().is_empty());
        assert!(Partition::from_parts(vec![3, 1, 2]).is_err());
        assert!(Partition::from_parts(vec![2, 0]).is_err());
        assert_eq!(Partition::from_unsorted(vec![3, 1, 2]).unwrap(), p(&[3, 2, 1]));
    }

    #[test]
    fn small_cases() {
        let two_one = p(&[2, 1]);
        assert_eq!(two_one.dual(), two_one);
        assert_eq!(two_one.remove_cell(1).unwrap(), p(&[1, 1]));
        assert_eq!(two_one.remove_cell(2).unwrap(), p(&[2]));
        assert!(two_one.remove_cell(0).is_err());
        assert!(two_one.remove_cell(3).is_err());
        assert_eq!(p(&[6]).dual(), Partition::rectangle(1, 6));
        assert_eq!(p(&[4]).removable_cells().unwrap().len(), 1);
        assert_eq!(p(&[3, 2, 1]).multiplicities(), vec![1, 1, 1]);
        assert_eq!(Partition::rectangle(1, 5).multiplicities(), vec![5]);
        assert!(Partition::empty().removable_cells().is_err());
        assert!(Partition::empty().dim_irrep().is_err());
    }

    #[test]
    fn extend_ones_appends_parts() {
        assert_eq!(p(&[2]).extend_ones(3), p(&[2, 1, 1, 1]));
        assert_eq!(p(&[3, 2]).extend_ones(0), p(&[3, 2]));
        let ext = p(&[2, 2]).extend_ones(6);
        assert_eq!(ext.to_symbolic(false), "2^2 1^6");
        assert_eq!(ext.len(), 8);
    }

    #[test]
    fn symbolic_examples() {
        assert_eq!(parse_symbolic("1^2 2^2 3^3 5^2").unwrap(), p(&[5, 5, 3, 3, 3, 2, 2, 1, 1]));
        assert_eq!(parse_symbolic("321").unwrap(), p(&[3, 2, 1]));
        assert_eq!(parse_symbolic("2^2 5 7 9").unwrap(), p(&[9, 7, 5, 2, 2]));
        assert_eq!(parse_symbolic("10").unwrap(), p(&[10]));
        assert_eq!(parse_symbolic("12^1").unwrap(), p(&[12]));
        assert_eq!(parse_symbolic("2 2^2").unwrap(), p(&[2, 2, 2]));
        assert_eq!(parse_symbolic("  ").unwrap(), Partition::empty());
        assert_eq!(p(&[9, 7, 5, 2, 2]).to_symbolic(true), "2^2 5 7 9");
        assert_eq!(p(&[3, 2, 1]).to_symbolic(false), "321");
        assert_eq!(p(&[12]).to_symbolic(false), "12^1");
        assert_eq!(Partition::empty().to_symbolic(false), "");
    }

    #[test]
    fn symbolic_errors_carry_position() {
        let err = parse_symbolic("garbage^").unwrap_err();
        assert_eq!(err.position, 0);
        let err = parse_symbolic("3 2^0").unwrap_err();
        assert_eq!(err.position, 4);
        let err = parse_symbolic("3 0").unwrap_err();
        assert_eq!(err.position, 2);
        let err = parse_symbolic("2^").unwrap_err();
        assert_eq!(err.position, 2);
        assert!(parse_symbolic("2^x").is_err());
    }

    #[test]
    fn dim_irrep_small() {
        assert_eq!(p(&[1]).dim_irrep().unwrap(), BigUint::from(1u32));
        assert_eq!(p(&[2, 1]).dim_irrep().unwrap(), BigUint::from(2u32));
        assert_eq!(p(&[3, 2, 1]).dim_irrep().unwrap(), BigUint::from(16u32));
    }

    #[test]
    fn enumeration_order_and_counts() {
        let six: Vec<String> = Partition::all(6).iter().map(|l| l.to_symbolic(false)).collect();
        assert_eq!(
            six,
            ["6", "51", "42", "4 1^2", "3^2", "321", "3 1^3", "2^3", "2^2 1^2", "2 1^4", "1^6"]
        );
        let counts: Vec<usize> = (0..=12).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
    }
}
