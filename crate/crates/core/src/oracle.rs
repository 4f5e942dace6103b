//! Brute-force ground truth: classify strictly upper-triangular matrices over
//! a prime field by Jordan type and tally the counts.
//!
//! The Jordan type of a nilpotent `A` is read off the rank sequence
//! `r_k = rank A^k`: the number of blocks of size `k` is
//! `r_{k-1} - 2 r_k + r_{k+1}`.
//!
//! Exhaustive enumeration walks the entry vector in lexicographic order. The
//! space is cut into a fixed set of prefix chunks independent of the worker
//! count, each chunk is tallied on its own and the tallies are summed, so the
//! result does not depend on how many threads ran.
//!
//! Sampling splits the trials into chunks of [`SAMPLE_CHUNK`]; chunk `c` draws
//! from `ChaCha8Rng::seed_from_u64(seed)` switched to stream `c`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::partition::Partition;

/// Largest matrix dimension the oracle handles.
pub const MAX_DIM: usize = 16;
/// Default guard on the number of matrices an exhaustive run may visit.
pub const DEFAULT_BUDGET: u64 = 100_000_000;
/// Trials per independently seeded sampling chunk.
pub const SAMPLE_CHUNK: u64 = 4096;
/// Largest supported field order (keeps products inside `u64`).
pub const MAX_PRIME: u64 = (1 << 31) - 1;

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(q: u64) -> Result<u32, Error> {
    if !is_prime(q) || q > MAX_PRIME {
        return Err(Error::NotPrime(q));
    }
    Ok(q as u32)
}

fn check_dim(n: usize) -> Result<(), Error> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    Ok(())
}

fn inverse_mod(a: u32, p: u32) -> u32 {
    let p = p as u64;
    let mut base = a as u64 % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc as u32
}

/// A square matrix over `F_p`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    n: usize,
    p: u32,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zero(n: usize, p: u64) -> Result<Self, Error> {
        let p = check_prime(p)?;
        Ok(Self {
            n,
            p,
            data: vec![0; n * n],
        })
    }

    /// Builds a matrix from rows; entries are reduced mod `p`.
    pub fn from_rows(rows: &[Vec<u64>], p: u64) -> Result<Self, Error> {
        let mut m = Self::zero(rows.len(), p)?;
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), m.n, "matrix must be square");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn identity(n: usize, p: u64) -> Result<Self, Error> {
        let mut m = Self::zero(n, p)?;
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p as u64
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.n + j] = (v % self.p as u64) as u32;
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!((self.n, self.p), (rhs.n, rhs.p), "incompatible matrices");
        let n = self.n;
        let p = self.p as u64;
        let mut data = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k] as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    data[idx] = ((data[idx] as u64 + a * rhs.data[k * n + j] as u64) % p) as u32;
                }
            }
        }
        Self { n, p: self.p, data }
    }

    pub fn rank(&self) -> usize {
        let mut work = self.data.clone();
        rank_fp_in_place(&mut work, self.n, self.p)
    }
}

/// Rank over `F_p` by Gaussian elimination.
pub fn matrix_rank(m: &FpMatrix) -> usize {
    m.rank()
}

fn rank_fp_in_place(a: &mut [u32], n: usize, p: u32) -> usize {
    let p64 = p as u64;
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..n).find(|&r| a[r * n + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for j in 0..n {
                a.swap(pivot * n + j, rank * n + j);
            }
        }
        let inv = inverse_mod(a[rank * n + col], p) as u64;
        for r in rank + 1..n {
            let f = a[r * n + col] as u64;
            if f == 0 {
                continue;
            }
            let factor = f * inv % p64;
            for j in col..n {
                let sub = factor * a[rank * n + j] as u64 % p64;
                a[r * n + j] = ((a[r * n + j] as u64 + p64 - sub) % p64) as u32;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over `F_2` of a matrix given as row bitmasks.
fn rank_gf2(rows: &mut [u32]) -> usize {
    let mut rank = 0;
    for bit in 0..32 {
        let mask = 1u32 << bit;
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & mask != 0) else {
            continue;
        };
        rows.swap(pivot, rank);
        let pr = rows[rank];
        for r in rows.iter_mut().skip(rank + 1) {
            if *r & mask != 0 {
                *r ^= pr;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// A strictly upper-triangular matrix over `F_q`, storing only the entries
/// above the diagonal in row-major order: `(0,1), (0,2), …, (0,n-1), (1,2), …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UTMatrix {
    n: usize,
    q: u32,
    entries: Vec<u32>,
}

/// Number of entries strictly above the diagonal.
pub fn upper_entries(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl UTMatrix {
    pub fn from_entries(n: usize, q: u64, entries: Vec<u64>) -> Result<Self, Error> {
        check_dim(n)?;
        let q = check_prime(q)?;
        assert_eq!(entries.len(), upper_entries(n), "wrong number of entries");
        let entries = entries.into_iter().map(|e| (e % q as u64) as u32).collect();
        Ok(Self { n, q, entries })
    }

    pub fn zero(n: usize, q: u64) -> Result<Self, Error> {
        Self::from_entries(n, q, vec![0; upper_entries(n)])
    }

    /// The nilpotent Jordan block `J_n` (ones on the superdiagonal).
    pub fn jordan_block(n: usize, q: u64) -> Result<Self, Error> {
        let mut m = Self::zero(n, q)?;
        for i in 0..n.saturating_sub(1) {
            m.set(i, i + 1, 1);
        }
        Ok(m)
    }

    /// Extracts the strictly upper part of a dense matrix, which must be
    /// strictly upper-triangular.
    pub fn from_dense(m: &FpMatrix) -> Result<Self, Error> {
        let n = m.dim();
        let mut ut = Self::zero(n, m.modulus())?;
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j);
                if j > i {
                    ut.set(i, j, v as u64);
                } else if v != 0 {
                    return Err(Error::NotStrictlyUpper { row: i, col: j });
                }
            }
        }
        Ok(ut)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field_order(&self) -> u64 {
        self.q as u64
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    fn index(&self, i: usize, j: usize) -> usize {
        assert!(i < j && j < self.n, "({i},{j}) is not strictly upper");
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        if j <= i {
            return 0;
        }
        self.entries[self.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        let idx = self.index(i, j);
        self.entries[idx] = (v % self.q as u64) as u32;
    }

    pub fn to_dense(&self) -> FpMatrix {
        let mut m = FpMatrix::zero(self.n, self.q as u64).expect("prime checked on construction");
        for i in 0..self.n {
            for j in i + 1..self.n {
                m.set(i, j, self.get(i, j) as u64);
            }
        }
        m
    }

    /// `(rank A, rank A^2, …, rank A^n)`.
    pub fn rank_sequence(&self) -> Vec<usize> {
        let dense = self.to_dense();
        let mut power = dense.clone();
        let mut ranks = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let r = power.rank();
            ranks.push(r);
            if r == 0 {
                break;
            }
            power = power.mul(&dense);
        }
        ranks.resize(self.n, 0);
        ranks
    }
}

/// Jordan block sizes from `rank A^k` for `k = 1..`; `r_0 = n`.
pub fn type_from_ranks(n: usize, ranks: &[usize]) -> Partition {
    let r = |k: usize| -> i64 {
        match k {
            0 => n as i64,
            _ => ranks.get(k - 1).copied().unwrap_or(0) as i64,
        }
    };
    let alpha: Vec<usize> = (1..=n)
        .map(|k| {
            let a = r(k - 1) - 2 * r(k) + r(k + 1);
            usize::try_from(a).expect("rank sequence of a nilpotent matrix is convex")
        })
        .collect();
    Partition::from_multiplicities(&alpha)
}

pub fn jordan_type(m: &UTMatrix) -> Partition {
    type_from_ranks(m.n, &m.rank_sequence())
}

/// Packs `rank A^k`, `k = 1..n-1`, into 4-bit fields.
type RankKey = u64;

fn key_to_partition(n: usize, key: RankKey) -> Partition {
    let ranks: Vec<usize> = (0..n.saturating_sub(1))
        .map(|k| ((key >> (4 * k)) & 0xf) as usize)
        .collect();
    type_from_ranks(n, &ranks)
}

/// Reusable scratch space for classifying many matrices of one shape.
struct Classifier {
    n: usize,
    p: u32,
    base: Vec<u32>,
    power: Vec<u32>,
    next: Vec<u32>,
    work: Vec<u32>,
}

impl Classifier {
    fn new(n: usize, p: u32) -> Self {
        let len = if p == 2 { n } else { n * n };
        Self {
            n,
            p,
            base: vec![0; len],
            power: vec![0; len],
            next: vec![0; len],
            work: vec![0; len],
        }
    }

    fn load(&mut self, entries: &[u32]) {
        let n = self.n;
        self.base.iter_mut().for_each(|x| *x = 0);
        let mut idx = 0;
        for i in 0..n {
            for j in i + 1..n {
                let v = entries[idx];
                idx += 1;
                if self.p == 2 {
                    self.base[i] |= v << j;
                } else {
                    self.base[i * n + j] = v;
                }
            }
        }
    }

    fn classify(&mut self, entries: &[u32]) -> RankKey {
        self.load(entries);
        if self.p == 2 {
            self.classify_gf2()
        } else {
            self.classify_fp()
        }
    }

    fn classify_gf2(&mut self) -> RankKey {
        let n = self.n;
        self.power.copy_from_slice(&self.base);
        let mut key = 0;
        for k in 0..n - 1 {
            self.work.copy_from_slice(&self.power);
            let r = rank_gf2(&mut self.work);
            if r == 0 {
                break;
            }
            key |= (r as u64) << (4 * k);
            // next row i = XOR of base rows j for each set bit j of power row i
            for i in 0..n {
                let mut row = self.power[i];
                let mut acc = 0;
                while row != 0 {
                    let j = row.trailing_zeros() as usize;
                    acc ^= self.base[j];
                    row &= row - 1;
                }
                self.next[i] = acc;
            }
            std::mem::swap(&mut self.power, &mut self.next);
        }
        key
    }

    fn classify_fp(&mut self) -> RankKey {
        let n = self.n;
        let p = self.p as u64;
        self.power.copy_from_slice(&self.base);
        let mut key = 0;
        for k in 0..n - 1 {
            self.work.copy_from_slice(&self.power);
            let r = rank_fp_in_place(&mut self.work, n, self.p);
            if r == 0 {
                break;
            }
            key |= (r as u64) << (4 * k);
            self.next.iter_mut().for_each(|x| *x = 0);
            for i in 0..n {
                for m in i + 1..n {
                    let a = self.power[i * n + m] as u64;
                    if a == 0 {
                        continue;
                    }
                    for j in m + 1..n {
                        let idx = i * n + j;
                        self.next[idx] =
                            ((self.next[idx] as u64 + a * self.base[m * n + j] as u64) % p) as u32;
                    }
                }
            }
            std::mem::swap(&mut self.power, &mut self.next);
        }
        key
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TallyMode {
    Exhaustive,
    Sample,
}

/// Counts of matrices per Jordan type. In sample mode `total` is the number
/// of trials and the counts are observation frequencies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTally {
    pub n: usize,
    pub q: u64,
    pub mode: TallyMode,
    pub counts: BTreeMap<Partition, BigUint>,
    pub total: BigUint,
}

impl CountTally {
    pub fn count(&self, lambda: &Partition) -> BigUint {
        self.counts.get(lambda).cloned().unwrap_or_default()
    }

    pub fn frequency(&self, lambda: &Partition) -> f64 {
        let total = self.total.to_f64().unwrap_or(0.0);
        if total == 0.0 {
            return 0.0;
        }
        self.count(lambda).to_f64().unwrap_or(0.0) / total
    }

    /// Whether every observed count is zero (e.g. zero trials).
    pub fn is_empty(&self) -> bool {
        self.counts.values().all(Zero::is_zero)
    }

    pub fn observed_sum(&self) -> BigUint {
        self.counts.values().sum()
    }

    fn from_keys(n: usize, q: u64, mode: TallyMode, keys: HashMap<RankKey, u64>, total: BigUint) -> Self {
        let counts = keys
            .into_iter()
            .map(|(k, c)| (key_to_partition(n, k), BigUint::from(c)))
            .collect();
        Self {
            n,
            q,
            mode,
            counts,
            total,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TallyJson {
    n: usize,
    q: u64,
    mode: TallyMode,
    counts: BTreeMap<String, String>,
    total: String,
}

impl Serialize for CountTally {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TallyJson {
            n: self.n,
            q: self.q,
            mode: self.mode,
            counts: self
                .counts
                .iter()
                .map(|(k, v)| (k.to_symbolic(false), v.to_string()))
                .collect(),
            total: self.total.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CountTally {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TallyJson::deserialize(deserializer)?;
        let counts = raw
            .counts
            .iter()
            .map(|(k, v)| {
                let lambda = crate::partition::parse_symbolic(k).map_err(D::Error::custom)?;
                let count = v.parse::<BigUint>().map_err(D::Error::custom)?;
                Ok((lambda, count))
            })
            .collect::<Result<_, D::Error>>()?;
        Ok(Self {
            n: raw.n,
            q: raw.q,
            mode: raw.mode,
            counts,
            total: raw.total.parse().map_err(D::Error::custom)?,
        })
    }
}

/// Runs `f` on a pool of `workers` threads, or on the global pool when `None`.
fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

fn merge(mut a: HashMap<RankKey, u64>, b: HashMap<RankKey, u64>) -> HashMap<RankKey, u64> {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

/// Options for [`enumerate_counts`].
#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    pub budget: u64,
    /// Thread count; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            workers: None,
        }
    }
}

/// Exhaustive tally over all `q^{n(n-1)/2}` strictly upper-triangular matrices.
pub fn enumerate_counts(n: usize, q: u64, opts: EnumerateOptions) -> Result<CountTally, Error> {
    check_dim(n)?;
    let p = check_prime(q)?;
    let m = upper_entries(n);
    let total = BigUint::from(q).pow(m as u32);
    if total > BigUint::from(opts.budget) {
        return Err(Error::BudgetExceeded {
            required: total.to_string(),
            budget: opts.budget,
        });
    }
    // Prefix length: enough chunks to spread work, never more than the entries.
    let mut prefix = 0;
    while prefix < m && (q as u128).pow(prefix as u32) < 256 {
        prefix += 1;
    }
    let chunks = q.pow(prefix as u32);
    let suffix = m - prefix;

    let keys = with_workers(opts.workers, || {
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let mut classifier = Classifier::new(n, p);
                let mut entries = vec![0u32; m];
                let mut c = chunk;
                for slot in entries[..prefix].iter_mut().rev() {
                    *slot = (c % q) as u32;
                    c /= q;
                }
                let mut tally: HashMap<RankKey, u64> = HashMap::new();
                loop {
                    *tally.entry(classifier.classify(&entries)).or_default() += 1;
                    // odometer over the suffix, last entry fastest
                    let mut pos = m;
                    loop {
                        if pos == m - suffix {
                            return tally;
                        }
                        pos -= 1;
                        entries[pos] += 1;
                        if entries[pos] < p {
                            break;
                        }
                        entries[pos] = 0;
                    }
                }
            })
            .reduce(HashMap::new, merge)
    });
    Ok(CountTally::from_keys(n, q, TallyMode::Exhaustive, keys, total))
}

/// Monte-Carlo tally of `trials` uniformly random matrices.
pub fn sample_counts(n: usize, q: u64, trials: u64, seed: u64, workers: Option<usize>) -> Result<CountTally, Error> {
    check_dim(n)?;
    let p = check_prime(q)?;
    let m = upper_entries(n);
    let chunks = trials.div_ceil(SAMPLE_CHUNK);
    let keys = with_workers(workers, || {
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(chunk);
                let count = SAMPLE_CHUNK.min(trials - chunk * SAMPLE_CHUNK);
                let mut classifier = Classifier::new(n, p);
                let mut entries = vec![0u32; m];
                let mut tally: HashMap<RankKey, u64> = HashMap::new();
                for _ in 0..count {
                    entries.iter_mut().for_each(|e| *e = rng.gen_range(0..p));
                    *tally.entry(classifier.classify(&entries)).or_default() += 1;
                }
                tally
            })
            .reduce(HashMap::new, merge)
    });
    Ok(CountTally::from_keys(n, q, TallyMode::Sample, keys, BigUint::from(trials)))
}

/// Exact tallies for every `n <= n_max` by extending one column at a time.
///
/// Every strictly upper-triangular `(m+1)×(m+1)` matrix is `[[A, v], [0, 0]]`
/// with `A` strictly upper-triangular of size `m` and `v ∈ F_q^m`. Conjugating
/// `A` by any `g ∈ GL_m` and replacing `v` by `g v` permutes the choices of `v`
/// without changing the Jordan type of the whole matrix, so the number of `v`
/// producing each type depends only on the type of `A`. It is counted by
/// brute force over `v` with `A` in Jordan normal form, and the counts are
/// chained from `n = 1`. The result is exact and needs `Σ p(m) q^m`
/// classifications instead of `q^{n(n-1)/2}`.
///
/// Entry `i` of the result is the tally for `n = i + 1`.
pub fn extension_counts(n_max: usize, q: u64, workers: Option<usize>) -> Result<Vec<CountTally>, Error> {
    check_dim(n_max)?;
    let p = check_prime(q)?;
    let mut current: BTreeMap<Partition, BigUint> = BTreeMap::new();
    current.insert(Partition::from_parts(vec![1]).expect("valid"), BigUint::from(1u32));
    let mut out = vec![CountTally {
        n: 1,
        q,
        mode: TallyMode::Exhaustive,
        counts: current.clone(),
        total: BigUint::from(1u32),
    }];
    for m in 1..n_max {
        let sources: Vec<(Partition, BigUint)> = current.into_iter().collect();
        let transitions = with_workers(workers, || {
            sources
                .par_iter()
                .map(|(lambda, _)| column_transitions(lambda, m, p))
                .collect::<Vec<_>>()
        });
        let mut next: BTreeMap<Partition, BigUint> = BTreeMap::new();
        for ((_, count), trans) in sources.iter().zip(transitions) {
            for (key, ways) in trans {
                *next.entry(key_to_partition(m + 1, key)).or_default() += count * BigUint::from(ways);
            }
        }
        out.push(CountTally {
            n: m + 1,
            q,
            mode: TallyMode::Exhaustive,
            counts: next.clone(),
            total: BigUint::from(q).pow(upper_entries(m + 1) as u32),
        });
        current = next;
    }
    Ok(out)
}

/// Jordan normal form of `lambda` as a strictly upper-triangular entry vector.
fn jordan_form_entries(lambda: &Partition) -> Vec<u32> {
    let m = lambda.size();
    let mut dense = vec![0u32; m * m];
    let mut start = 0;
    for &block in lambda.parts() {
        for i in start..start + block - 1 {
            dense[i * m + i + 1] = 1;
        }
        start += block;
    }
    let mut entries = Vec::with_capacity(upper_entries(m));
    for i in 0..m {
        for j in i + 1..m {
            entries.push(dense[i * m + j]);
        }
    }
    entries
}

fn column_transitions(lambda: &Partition, m: usize, p: u32) -> HashMap<RankKey, u64> {
    let base = jordan_form_entries(lambda);
    // (m+1)-matrix entries, row-major above the diagonal; row i gains column m
    // as its last entry, so the old row i occupies a contiguous run before it.
    let mut entries = Vec::with_capacity(upper_entries(m + 1));
    let mut column_slots = Vec::with_capacity(m);
    let mut src = 0;
    for i in 0..m {
        let row_len = m - i - 1;
        entries.extend_from_slice(&base[src..src + row_len]);
        src += row_len;
        column_slots.push(entries.len());
        entries.push(0);
    }
    let mut classifier = Classifier::new(m + 1, p);
    let mut tally = HashMap::new();
    loop {
        *tally.entry(classifier.classify(&entries)).or_default() += 1;
        let mut idx = m;
        loop {
            if idx == 0 {
                return tally;
            }
            idx -= 1;
            let slot = column_slots[idx];
            entries[slot] += 1;
            if entries[slot] < p {
                break;
            }
            entries[slot] = 0;
        }
    }
}

/// Classifies one matrix through the same fast path the enumerator uses.
pub fn fast_jordan_type(m: &UTMatrix) -> Partition {
    let mut classifier = Classifier::new(m.n, m.q);
    key_to_partition(m.n, classifier.classify(&m.entries))
}
