//! Stabilization of `R_{λ1^k}` as `k → ∞` and the limit series.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::counting::Counter;
use crate::partition::Partition;
use crate::poly::TruncatedSeries;

/// `S_k = (1-q)(1-q^2)…(1-q^k)` truncated at `order`; `S_0 = 1`.
pub fn s_factor(k: usize, order: usize) -> TruncatedSeries {
    (1..=k).fold(TruncatedSeries::one(order), |acc, i| {
        acc.mul(&TruncatedSeries::one_minus_q_pow(i, order))
            .expect("same order")
    })
}

/// The limit `R_{λ1^∞} = 1 / ((1-q)^{n-N} S_{α_2} … S_{α_{N'}})` to `order`.
///
/// Parts equal to 1 are dropped first, and `n`, `N`, `α_i` refer to what is
/// left.
pub fn limit_series(lambda: &Partition, order: usize) -> TruncatedSeries {
    let base = lambda.strip_ones();
    let one_minus_q = TruncatedSeries::one_minus_q_pow(1, order);
    let mut denom = one_minus_q.pow(base.size() - base.len());
    for k in 2..=base.largest() {
        let alpha = base.multiplicity(k);
        if alpha > 0 {
            denom = denom.mul(&s_factor(alpha, order)).expect("same order");
        }
    }
    denom.invert().expect("constant term is 1")
}

/// Outcome of comparing `R_{λ1^k}` for consecutive `k` and against the limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationReport {
    pub lambda: Partition,
    pub order: usize,
    pub k_range: Vec<usize>,
    #[serde(with = "crate::poly::decimal_strings")]
    pub limit: Vec<BigInt>,
    pub steps: Vec<StabilizationStep>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationStep {
    pub k: usize,
    /// Number of parts equal to 1 in `λ1^k`.
    pub alpha1: usize,
    /// Lowest degree at which `R_{λ1^{k+1}} - R_{λ1^k}` is nonzero, `None` if equal.
    pub diff_valuation: Option<usize>,
    /// Whether the difference above is divisible by `q^{alpha1 + 1}`.
    pub divisible: bool,
    /// Number of leading coefficients where `R_{λ1^k}` agrees with the limit
    /// series, capped at `order + 1`.
    pub agreement_with_limit: usize,
    /// `min(alpha1 + 1, order + 1)`: the agreement stabilization guarantees.
    pub required_agreement: usize,
}

/// Checks stabilization for `k = 0..=k_max`.
pub fn verify_stabilization(lambda: &Partition, k_max: usize, order: usize) -> StabilizationReport {
    verify_stabilization_with(Counter::global(), lambda, k_max, order)
}

pub fn verify_stabilization_with(
    counter: &Counter,
    lambda: &Partition,
    k_max: usize,
    order: usize,
) -> StabilizationReport {
    let limit = limit_series(lambda, order);
    let mut steps = Vec::with_capacity(k_max + 1);
    let mut current = counter.r_poly(lambda);
    for k in 0..=k_max {
        let ext = lambda.extend_ones(k);
        let alpha1 = ext.multiplicity(1);
        let next = counter.r_poly(&ext.extend_ones(1));
        let diff_valuation = (&next - &current).valuation();
        let divisible = diff_valuation.is_none_or(|v| v > alpha1);
        let agreement_with_limit = limit
            .coeffs()
            .iter()
            .enumerate()
            .take_while(|(i, c)| current.coeff(*i) == **c)
            .count();
        steps.push(StabilizationStep {
            k,
            alpha1,
            diff_valuation,
            divisible,
            agreement_with_limit,
            required_agreement: (alpha1 + 1).min(order + 1),
        });
        current = next;
    }
    let pass = steps
        .iter()
        .all(|s| s.divisible && s.agreement_with_limit >= s.required_agreement);
    StabilizationReport {
        lambda: lambda.clone(),
        order,
        k_range: (0..=k_max).collect(),
        limit: limit.coeffs().to_vec(),
        steps,
        pass,
    }
}

/// Whether `R_{λ^+} - R_λ` is divisible by `q^{α_1 + 1}`, where `λ^+ = λ1`.
pub fn plus_difference_divisible(counter: &Counter, lambda: &Partition) -> bool {
    let diff = &counter.r_poly(&lambda.extend_ones(1)) - &counter.r_poly(lambda);
    diff.valuation().is_none_or(|v| v > lambda.multiplicity(1))
}
