//! Invariant suites shared by the command-line `verify` command and the tests.
//!
//! Each check returns a [`CheckResult`] listing the offending partitions, so a
//! failure report names exactly what disagreed.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::counting::{self, Counter};
use crate::error::Error;
use crate::oracle::{self, EnumerateOptions};
use crate::partition::Partition;
use crate::poly::{IntPolynomial, TruncatedSeries};
use crate::stabilization::{limit_series, plus_difference_divisible};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckResult {
    fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(CheckResult::pass)
    }
}

/// `Σ_{λ ⊢ n} P_λ = q^{n(n-1)/2}` for `1 <= n <= n_max`.
pub fn check_sum_identity(counter: &Counter, n_max: usize) -> CheckResult {
    let mut check = CheckResult::new("sum identity");
    for n in 1..=n_max {
        let sum: IntPolynomial = Partition::all(n).iter().map(|l| counter.p_poly(l)).sum();
        let expected = counting::total_count(n);
        check.record(sum == expected, || format!("n={n}: sum is {sum}, expected {expected}"));
    }
    check
}

/// The full self-checking assembly (recursions, closed formulas, positivity,
/// degrees, leading coefficient) for every partition with `1 <= n <= n_max`.
pub fn check_factorizations(counter: &Counter, n_max: usize) -> CheckResult {
    let mut check = CheckResult::new("factorization agreement");
    for n in 1..=n_max {
        for lambda in Partition::all(n) {
            let result = counter.factored_count(&lambda);
            check.record(result.is_ok(), || result.unwrap_err().to_string());
        }
    }
    check
}

/// `Σ_{λ ⊢ n} (dim V_λ)^2 = n!`.
pub fn check_dimension_squares(n_max: usize) -> CheckResult {
    let mut check = CheckResult::new("sum of squared dimensions");
    let mut factorial = BigUint::one();
    for n in 1..=n_max {
        factorial *= n;
        let sum: BigUint = Partition::all(n)
            .iter()
            .map(|l| {
                let d = l.dim_irrep().expect("nonempty");
                &d * &d
            })
            .sum();
        check.record(sum == factorial, || format!("n={n}: {sum} != {factorial}"));
    }
    check
}

/// `R_{λ1} - R_λ` divisible by `q^{α_1 + 1}`, and `R_λ` agreeing with the
/// limit series through degree `α_1`, for every `λ` with `1 <= n <= n_max`.
pub fn check_stabilization(counter: &Counter, n_max: usize) -> CheckResult {
    let mut check = CheckResult::new("stabilization");
    for n in 1..=n_max {
        for lambda in Partition::all(n) {
            let alpha1 = lambda.multiplicity(1);
            check.record(plus_difference_divisible(counter, &lambda), || {
                format!("{lambda}: R_(λ1) - R_λ not divisible by q^{}", alpha1 + 1)
            });
            let limit = limit_series(&lambda, alpha1);
            let r = counter.r_poly(&lambda);
            let agrees = limit.coeffs().iter().enumerate().all(|(i, c)| &r.coeff(i) == c);
            check.record(agrees, || format!("{lambda}: R_λ disagrees with the limit series below q^{}", alpha1 + 1));
        }
    }
    check
}

fn series_from_factors(order: usize, factors: &[(usize, usize)]) -> TruncatedSeries {
    // each (k, m) contributes (1 - q^k)^m to the denominator
    let mut denom = TruncatedSeries::one(order);
    for &(k, m) in factors {
        denom = denom
            .mul(&TruncatedSeries::one_minus_q_pow(k, order).pow(m))
            .expect("same order");
    }
    denom.invert().expect("unit constant term")
}

/// Limit series of distinct parts, of rectangles `N^k` and of the doubled
/// staircase `N^2 (N-1)^2 … 2^2`, against their product forms.
pub fn check_limit_closed_forms(max: usize, order: usize) -> CheckResult {
    let mut check = CheckResult::new("limit series closed forms");
    for big_n in 2..=max {
        for k in 1..=max {
            let lambda = Partition::rectangle(big_n, k);
            let mut factors = vec![(1, (big_n - 1) * k + 1)];
            factors.extend((2..=k).map(|i| (i, 1)));
            let expected = series_from_factors(order, &factors);
            check.record(limit_series(&lambda, order) == expected, || format!("rectangle {lambda}"));
        }
        let staircase =
            Partition::from_parts((2..=big_n).rev().flat_map(|i| [i, i]).collect()).expect("valid");
        let expected = series_from_factors(order, &[(1, big_n * big_n - 1), (2, big_n - 1)]);
        check.record(limit_series(&staircase, order) == expected, || format!("staircase {staircase}"));
    }
    // distinct parts i_1 > … > i_k > 1
    for lambda in (2..=2 * max).flat_map(Partition::all) {
        if lambda.parts().iter().any(|&x| x < 2) || lambda.distinct_parts() != lambda.len() {
            continue;
        }
        let expected = series_from_factors(order, &[(1, lambda.size())]);
        check.record(limit_series(&lambda, order) == expected, || format!("distinct parts {lambda}"));
    }
    check
}

/// Exhaustive enumeration against `P_λ(q)` for each `(n, q)`.
pub fn check_oracle(counter: &Counter, cases: &[(usize, u64)], opts: EnumerateOptions) -> Result<CheckResult, Error> {
    let mut check = CheckResult::new("oracle agreement");
    for &(n, q) in cases {
        let tally = oracle::enumerate_counts(n, q, opts)?;
        let total = BigUint::from(q).pow(oracle::upper_entries(n) as u32);
        check.record(tally.observed_sum() == total, || format!("n={n} q={q}: tally sums to {}", tally.observed_sum()));
        let qq = BigInt::from(q);
        for lambda in Partition::all(n) {
            let expected = counter.p_poly(&lambda).eval(&qq);
            let got = BigInt::from(tally.count(&lambda));
            check.record(got == expected, || format!("n={n} q={q} {lambda}: enumerated {got}, P_λ({q}) = {expected}"));
        }
    }
    Ok(check)
}

/// The symbolic suites: everything except brute-force enumeration.
pub fn formulas(counter: &Counter, n_max: usize) -> VerifyReport {
    VerifyReport {
        checks: vec![
            check_sum_identity(counter, n_max),
            check_factorizations(counter, n_max),
            check_dimension_squares(n_max.min(12)),
            check_stabilization(counter, n_max.min(10)),
            check_limit_closed_forms(4, 12),
        ],
    }
}

/// `(n, q)` pairs for the oracle: every `n <= n_max` with each `q`, skipping
/// pairs over the enumeration budget.
pub fn oracle_cases(n_max: usize, qs: &[u64], budget: u64) -> Vec<(usize, u64)> {
    let mut cases = Vec::new();
    for n in 1..=n_max {
        for &q in qs {
            let size = BigUint::from(q).pow(oracle::upper_entries(n) as u32);
            if size <= BigUint::from(budget) {
                cases.push((n, q));
            }
        }
    }
    cases
}
