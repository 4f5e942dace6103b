//! Acceptance suite. Each test prints one `PASS`/`FAIL` line for its
//! criterion (run with `--nocapture` to see them) and then asserts it.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};

use nilcount::counting::Counter;
use nilcount::oracle::{self, EnumerateOptions};
use nilcount::poly::TruncatedSeries;
use nilcount::stabilization::{limit_series, plus_difference_divisible};
use nilcount::table::{self, TableRow};
use nilcount::verify;
use nilcount::{d_exponent, deg_p, deg_r, e_exponent, Partition};

const GOLDEN: &str = include_str!("../data/table_n10.golden");

fn report(criterion: u32, title: &str, ok: bool, detail: &str) -> bool {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("{status} criterion {criterion}: {title} — {detail}");
    ok
}

fn partitions_up_to(n_max: usize) -> impl Iterator<Item = Partition> {
    (1..=n_max).flat_map(Partition::all)
}

#[test]
fn criterion_1_table_reproduces_golden_file() {
    let start = Instant::now();
    let rows = table::table_rows(&Counter::new(), 10, None).expect("table");
    let elapsed = start.elapsed();
    let produced = table::render_text(&rows);

    let golden: Vec<&str> = GOLDEN.lines().collect();
    let ours: Vec<&str> = produced.lines().collect();
    let differing: Vec<String> = golden
        .iter()
        .zip(&ours)
        .filter(|(g, o)| g != o)
        .map(|(g, _)| TableRow::parse_text(g).map_or_else(|| g.to_string(), |r| r.lambda))
        .collect();
    let matching = golden.len().min(ours.len()) - differing.len();
    let ok = produced == GOLDEN && elapsed < Duration::from_secs(5);
    let mut detail = format!(
        "{matching}/{} golden rows match ({} produced), {:.2?}",
        golden.len(),
        ours.len(),
        elapsed
    );
    if !differing.is_empty() {
        detail += &format!("; differing rows: {}", differing.join(", "));
    }
    report(1, "table for n <= 10 equals the golden file", ok, &detail);
    assert_eq!(ours.len(), golden.len(), "row count");
    assert!(elapsed < Duration::from_secs(5), "table took {elapsed:?}");
    let diffs: Vec<String> = golden
        .iter()
        .zip(&ours)
        .filter(|(g, o)| g != o)
        .map(|(g, o)| format!("\n  golden:   {g}\n  computed: {o}"))
        .collect();
    assert!(diffs.is_empty(), "table rows differ from the golden file:{}", diffs.concat());
}

#[test]
fn criterion_2_sum_identity() {
    let check = verify::check_sum_identity(&Counter::new(), 12);
    let detail = format!("n = 1..=12, {} failures {:?}", check.failures.len(), check.failures);
    assert!(report(2, "sum over λ ⊢ n of P_λ equals q^(n(n-1)/2)", check.pass(), &detail));
}

#[test]
fn criterion_3_oracle_equivalence() {
    let start = Instant::now();
    let counter = Counter::new();
    let mut cases: Vec<(usize, u64)> = (1..=5).flat_map(|n| [2, 3, 5].map(|q| (n, q))).collect();
    cases.push((6, 2));
    let check = verify::check_oracle(&counter, &cases, EnumerateOptions::default()).expect("enumeration");

    let small = oracle::enumerate_counts(3, 2, EnumerateOptions::default()).expect("n=3");
    let spot: Vec<BigUint> = ["3", "2 1", "1^3"]
        .iter()
        .map(|s| small.count(&s.parse().unwrap()))
        .collect();
    let spot_ok = spot == [2u32, 5, 1].map(BigUint::from) && small.observed_sum() == BigUint::from(8u32);

    let elapsed = start.elapsed();
    let ok = check.pass() && spot_ok && elapsed < Duration::from_secs(600);
    let detail = format!(
        "{} comparisons over {} (n, q) cases, {} failures; n=3 q=2 counts {:?}; {:.1?}",
        check.cases,
        cases.len(),
        check.failures.len(),
        spot,
        elapsed
    );
    for failure in &check.failures {
        println!("  {failure}");
    }
    assert!(report(3, "exhaustive enumeration matches P_λ(q)", ok, &detail));
}

#[test]
fn criterion_4_dual_recursions_agree() {
    let counter = Counter::new();
    let mut failures = Vec::new();
    let mut cases = 0;
    for lambda in partitions_up_to(12) {
        cases += 1;
        let (d, e, r) = counter.p_poly(&lambda).factor_out().expect("nonzero");
        if r != counter.r_poly(&lambda)
            || d != d_exponent(&lambda).unwrap()
            || e != e_exponent(&lambda).unwrap()
        {
            failures.push(lambda.to_string());
        }
    }
    let detail = format!("{cases} partitions with n <= 12, failures {failures:?}");
    assert!(report(4, "R recursion and closed exponents match the factored P", failures.is_empty(), &detail));
}

#[test]
fn criterion_5_degrees_and_coefficients() {
    let counter = Counter::new();
    let mut failures = Vec::new();
    let mut cases = 0;
    for lambda in partitions_up_to(12) {
        cases += 1;
        let p = counter.p_poly(&lambda);
        let r = counter.r_poly(&lambda);
        let dim = BigInt::from(lambda.dim_irrep().unwrap());
        let checks = [
            ("deg P", p.degree() == Some(deg_p(&lambda).unwrap())),
            ("deg R", r.degree() == Some(deg_r(&lambda).unwrap())),
            ("leading coefficient", p.leading_coeff() == Some(&dim)),
            ("R(0) = 1", r.coeff(0).is_one()),
            ("positivity", r.coeffs().iter().all(Signed::is_positive)),
        ];
        for (name, ok) in checks {
            if !ok {
                failures.push(format!("{lambda}: {name}"));
            }
        }
    }
    let detail = format!("{cases} partitions with n <= 12, failures {failures:?}");
    assert!(report(5, "degrees, leading coefficient, constant term, positivity", failures.is_empty(), &detail));
}

#[test]
fn criterion_6_stabilization() {
    let counter = Counter::new();
    let mut failures = Vec::new();
    let mut cases = 0;
    for lambda in partitions_up_to(9) {
        cases += 1;
        let alpha1 = lambda.multiplicity(1);
        if !plus_difference_divisible(&counter, &lambda) {
            failures.push(format!("{lambda}: R_(λ1) - R_λ not divisible by q^{}", alpha1 + 1));
        }
        let limit = limit_series(&lambda, alpha1);
        let prefix = TruncatedSeries::from_poly(&counter.r_poly(&lambda), alpha1);
        if limit != prefix {
            failures.push(format!("{lambda}: limit series prefix through q^{alpha1}"));
        }
    }
    let closed = verify::check_limit_closed_forms(4, 12);
    failures.extend(closed.failures.iter().cloned());

    let expected: Vec<BigInt> = [1, 3, 7, 13, 22, 34, 50].map(BigInt::from).to_vec();
    let square = Partition::rectangle(2, 2);
    let spot = limit_series(&square, 6);
    if spot.coeffs() != expected.as_slice() {
        failures.push(format!("limit of 2^2 starts {:?}", spot.coeffs()));
    }
    let golden_row = GOLDEN
        .lines()
        .filter_map(TableRow::parse_text)
        .find(|r| r.lambda == "2^2 1^6")
        .expect("2^2 1^6 row");
    if golden_row.r[..7] != expected[..] {
        failures.push("golden row 2^2 1^6 prefix".into());
    }
    let detail = format!(
        "{cases} partitions with n <= 9, {} closed-form cases, limit of 2^2 = {:?}…, failures {failures:?}",
        closed.cases,
        spot.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>()
    );
    assert!(report(6, "stabilization and limit series", failures.is_empty(), &detail));
}

#[test]
fn criterion_7_dimension_squares() {
    let check = verify::check_dimension_squares(8);
    let detail = format!("n = 1..=8, failures {:?}", check.failures);
    assert!(report(7, "sum of (dim V_λ)^2 equals n!", check.pass(), &detail));
}

#[test]
fn criterion_8_worker_count_independence() {
    let tables: Vec<String> = [1, 2, 8]
        .iter()
        .map(|&w| table::render_text(&table::table_rows(&Counter::new(), 10, Some(w)).unwrap()))
        .collect();
    let tallies: Vec<String> = [1, 2, 8]
        .iter()
        .map(|&w| {
            let opts = EnumerateOptions {
                workers: Some(w),
                ..EnumerateOptions::default()
            };
            serde_json::to_string(&oracle::enumerate_counts(5, 3, opts).unwrap()).unwrap()
        })
        .collect();
    let table_ok = tables.iter().all(|t| t == &tables[0]);
    let tally_ok = tallies.iter().all(|t| t == &tallies[0]);
    let detail = format!("table n <= 10 identical: {table_ok}; enumeration n=5 q=3 identical: {tally_ok}");
    assert!(report(8, "output identical for 1, 2 and 8 workers", table_ok && tally_ok, &detail));
}

