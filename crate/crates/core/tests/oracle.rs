use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nilcount::counting::Counter;
use nilcount::oracle::{
    self, enumerate_counts, fast_jordan_type, jordan_type, sample_counts, upper_entries, EnumerateOptions, FpMatrix,
    TallyMode, UTMatrix,
};
use nilcount::{Error, Partition};

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, q: u64) -> UTMatrix {
    let entries = (0..upper_entries(n)).map(|_| rng.gen_range(0..q)).collect();
    UTMatrix::from_entries(n, q, entries).unwrap()
}

fn inverse_mod(a: u64, q: u64) -> u64 {
    // q is prime: a^(q-2)
    let (mut base, mut exp, mut acc) = (a % q, q - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

/// Random invertible upper-triangular matrix together with its inverse.
fn random_upper_unit(rng: &mut ChaCha8Rng, n: usize, q: u64) -> (FpMatrix, FpMatrix) {
    let mut g = FpMatrix::zero(n, q).unwrap();
    for i in 0..n {
        g.set(i, i, rng.gen_range(1..q));
        for j in i + 1..n {
            g.set(i, j, rng.gen_range(0..q));
        }
    }
    // back substitution column by column: g · h = I with h upper-triangular
    let mut h = FpMatrix::zero(n, q).unwrap();
    for j in 0..n {
        for i in (0..=j).rev() {
            let mut rhs = if i == j { 1 } else { 0 };
            for k in i + 1..=j {
                rhs = (rhs + q * q - g.get(i, k) as u64 * h.get(k, j) as u64 % q) % q;
            }
            h.set(i, j, rhs * inverse_mod(g.get(i, i) as u64, q) % q);
        }
    }
    (g, h)
}

#[test]
fn small_examples() {
    assert_eq!(jordan_type(&UTMatrix::zero(4, 3).unwrap()), p("1^4"));
    assert_eq!(jordan_type(&UTMatrix::jordan_block(5, 2).unwrap()), p("5"));
    let mut m = UTMatrix::zero(3, 2).unwrap();
    m.set(0, 1, 1);
    assert_eq!(jordan_type(&m), p("21"));

    let tally = enumerate_counts(2, 3, EnumerateOptions::default()).unwrap();
    assert_eq!(tally.count(&p("2")), BigUint::from(2u32));
    assert_eq!(tally.count(&p("1^2")), BigUint::from(1u32));
    let tally = enumerate_counts(1, 7, EnumerateOptions::default()).unwrap();
    assert_eq!(tally.count(&p("1")), BigUint::from(1u32));
    assert_eq!(tally.mode, TallyMode::Exhaustive);
}

#[test]
fn conjugation_preserves_jordan_type() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for &(n, q) in &[(4, 2), (5, 3), (6, 5), (8, 7), (10, 2), (12, 3)] {
        for _ in 0..50 {
            let a = random_matrix(&mut rng, n, q);
            let (g, h) = random_upper_unit(&mut rng, n, q);
            assert_eq!(g.mul(&h), FpMatrix::identity(n, q).unwrap());
            let conj = UTMatrix::from_dense(&g.mul(&a.to_dense()).mul(&h)).unwrap();
            assert_eq!(jordan_type(&conj), jordan_type(&a));
            assert_eq!(fast_jordan_type(&conj), jordan_type(&a));
        }
    }
}

#[test]
fn rank_second_differences_are_block_counts() {
    let n = 4;
    let q = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..500 {
        let a = random_matrix(&mut rng, n, q);
        let mut r = vec![n];
        r.extend(a.rank_sequence());
        r.extend([0, 0]);
        let alpha: Vec<i64> = (1..=n).map(|k| r[k - 1] as i64 - 2 * r[k] as i64 + r[k + 1] as i64).collect();
        assert!(alpha.iter().all(|&x| x >= 0));
        let weighted: i64 = alpha.iter().enumerate().map(|(i, a)| (i as i64 + 1) * a).sum();
        assert_eq!(weighted, n as i64);
        assert_eq!(jordan_type(&a).multiplicities(), {
            let mut m: Vec<usize> = alpha.iter().map(|&x| x as usize).collect();
            while m.last() == Some(&0) {
                m.pop();
            }
            m
        });
    }
}

#[test]
fn exhaustive_tallies_sum_to_the_full_space() {
    let counter = Counter::new();
    for (n, q) in [(4, 2), (4, 3), (3, 5), (5, 2)] {
        let tally = enumerate_counts(n, q, EnumerateOptions::default()).unwrap();
        assert_eq!(tally.observed_sum(), BigUint::from(q).pow(upper_entries(n) as u32));
        assert_eq!(tally.total, tally.observed_sum());
        for lambda in Partition::all(n) {
            assert_eq!(BigInt::from(tally.count(&lambda)), counter.p_poly(&lambda).eval(&BigInt::from(q)));
        }
    }
}

#[test]
fn extension_counts_agree_with_enumeration() {
    let chained = oracle::extension_counts(6, 2, None).unwrap();
    for (i, tally) in chained.iter().enumerate() {
        let direct = enumerate_counts(i + 1, 2, EnumerateOptions::default()).unwrap();
        assert_eq!(tally.counts, direct.counts, "n = {}", i + 1);
    }
}

#[test]
fn sampled_frequency_is_close() {
    let trials = 100_000;
    let tally = sample_counts(4, 2, trials, 2024, None).unwrap();
    assert_eq!(tally.mode, TallyMode::Sample);
    assert_eq!(tally.observed_sum(), BigUint::from(trials));
    let expected = 8.0 / 64.0;
    let se = (expected * (1.0 - expected) / trials as f64).sqrt();
    let observed = tally.frequency(&p("4"));
    assert!((observed - expected).abs() < 3.0 * se, "observed {observed}, expected {expected} ± {se}");

    let tally = sample_counts(8, 2, trials, 2024, None).unwrap();
    assert_eq!(tally.count(&p("1^8")), BigUint::default());
}

#[test]
fn sampling_is_reproducible_and_worker_independent() {
    let base = sample_counts(5, 3, 20_000, 11, Some(1)).unwrap();
    for workers in [Some(2), Some(8), None] {
        assert_eq!(sample_counts(5, 3, 20_000, 11, workers).unwrap(), base);
    }
    assert_ne!(sample_counts(5, 3, 20_000, 12, Some(1)).unwrap(), base);
    assert!(sample_counts(5, 3, 0, 11, None).unwrap().is_empty());
}

#[test]
fn guards() {
    assert!(matches!(enumerate_counts(3, 4, EnumerateOptions::default()), Err(Error::NotPrime(4))));
    assert!(matches!(sample_counts(3, 1, 10, 0, None), Err(Error::NotPrime(1))));
    assert!(matches!(
        enumerate_counts(7, 5, EnumerateOptions::default()),
        Err(Error::BudgetExceeded { .. })
    ));
    let small = EnumerateOptions {
        budget: 100,
        workers: None,
    };
    match enumerate_counts(4, 3, small) {
        Err(Error::BudgetExceeded { required, budget }) => {
            assert_eq!(required, "729");
            assert_eq!(budget, 100);
        }
        other => panic!("expected refusal, got {other:?}"),
    }
    assert!(matches!(UTMatrix::zero(17, 2), Err(Error::DimensionTooLarge(17))));
    let mut lower = FpMatrix::zero(3, 2).unwrap();
    lower.set(2, 0, 1);
    assert!(matches!(
        UTMatrix::from_dense(&lower),
        Err(Error::NotStrictlyUpper { row: 2, col: 0 })
    ));
}
