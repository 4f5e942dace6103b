//! The factorization table: one row per partition, `λ  q^dQ^e  [r0,r1,…]`.
//!
//! Rows run over `n = 2, 3, …` and, within each `n`, over partitions in
//! reverse-lexicographic order starting from the one-row partition `(n)`.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{factor_prefix, Counter, FactoredCount};
use crate::error::Error;
use crate::partition::Partition;

/// Largest `n` a table request may ask for unless the caller raises it.
pub const DEFAULT_MAX_N: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub lambda: String,
    pub d: usize,
    pub e: usize,
    #[serde(with = "crate::poly::decimal_strings")]
    pub r: Vec<BigInt>,
}

impl TableRow {
    pub fn from_count(fc: &FactoredCount) -> Self {
        Self {
            lambda: fc.lambda.to_symbolic(false),
            d: fc.d,
            e: fc.e,
            r: fc.r.coeffs().to_vec(),
        }
    }

    pub fn prefix(&self) -> String {
        factor_prefix(self.d, self.e)
    }

    /// `<λ> <prefix> [c0,c1,…]`.
    pub fn to_text(&self) -> String {
        format!("{} {} {}", self.lambda, self.prefix(), crate::poly::bracketed(&self.r))
    }

    pub fn to_csv(&self) -> String {
        let r: Vec<String> = self.r.iter().map(ToString::to_string).collect();
        format!("{},{},{},\"{}\"", self.lambda, self.d, self.e, r.join(","))
    }

    /// Parses a text row. The partition may itself contain spaces, so the
    /// row is split from the right.
    pub fn parse_text(line: &str) -> Option<Self> {
        let line = line.trim();
        let (head, coeffs) = line.rsplit_once(' ')?;
        let (lambda, prefix) = head.rsplit_once(' ')?;
        let inner = coeffs.strip_prefix('[')?.strip_suffix(']')?;
        let r = inner
            .split(',')
            .map(|c| c.trim().parse().ok())
            .collect::<Option<Vec<BigInt>>>()?;
        let (d, e) = parse_prefix(prefix)?;
        Some(Self {
            lambda: lambda.trim().to_string(),
            d,
            e,
            r,
        })
    }
}

fn parse_prefix(s: &str) -> Option<(usize, usize)> {
    if s == "1" {
        return Some((0, 0));
    }
    let (q_part, big_q_part) = match s.find('Q') {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    let exp = |t: &str| -> Option<usize> {
        match t {
            "" => Some(1),
            _ => t.strip_prefix('^')?.parse().ok(),
        }
    };
    let d = match q_part {
        "" => 0,
        t => exp(t.strip_prefix('q')?)?,
    };
    let e = match big_q_part {
        None => 0,
        Some(t) => exp(t)?,
    };
    Some((d, e))
}

pub const CSV_HEADER: &str = "lambda,d,e,r";

/// All partitions listed by the table for `2 <= n <= n_max`, in table order.
pub fn table_partitions(n_max: usize) -> Vec<Partition> {
    (2..=n_max).flat_map(Partition::all).collect()
}

/// Computes the table rows, verifying each entry. `workers = None` uses the
/// global rayon pool; the row order never depends on the worker count.
pub fn table_rows(counter: &Counter, n_max: usize, workers: Option<usize>) -> Result<Vec<TableRow>, Error> {
    let lambdas = table_partitions(n_max);
    let run = || {
        lambdas
            .par_iter()
            .map(|l| counter.factored_count(l).map(|fc| TableRow::from_count(&fc)))
            .collect::<Result<Vec<_>, _>>()
    };
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    }
}

pub fn render_text(rows: &[TableRow]) -> String {
    rows.iter().map(|r| r.to_text() + "\n").collect()
}

pub fn render_csv(rows: &[TableRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_rows() {
        let rows = table_rows(&Counter::new(), 2, Some(1)).unwrap();
        assert_eq!(render_text(&rows), "2 Q [1]\n1^2 1 [1]\n");
        assert!(table_rows(&Counter::new(), 0, None).unwrap().is_empty());
    }

    #[test]
    fn prefix_forms() {
        let row = |d, e| TableRow {
            lambda: "x".into(),
            d,
            e,
            r: vec![BigInt::from(1)],
        };
        assert_eq!(row(0, 0).prefix(), "1");
        assert_eq!(row(0, 1).prefix(), "Q");
        assert_eq!(row(1, 2).prefix(), "qQ^2");
        assert_eq!(row(4, 3).prefix(), "q^4Q^3");
        assert_eq!(row(3, 0).prefix(), "q^3");
        assert_eq!(row(0, 5).prefix(), "Q^5");
        assert_eq!(row(2, 1).prefix(), "q^2Q");
        for (d, e) in [(0, 0), (0, 1), (1, 2), (4, 3), (3, 0), (0, 5), (2, 1), (1, 0)] {
            assert_eq!(parse_prefix(&row(d, e).prefix()), Some((d, e)));
        }
    }

    #[test]
    fn text_row_parses_back() {
        let line = "2^2 1^6 qQ^2 [1,3,7,13,22,34,50,69,82,88,87,78,61,35]";
        let row = TableRow::parse_text(line).unwrap();
        assert_eq!(row.lambda, "2^2 1^6");
        assert_eq!((row.d, row.e), (1, 2));
        assert_eq!(row.to_text(), line);
        assert_eq!(row.to_csv(), "2^2 1^6,1,2,\"1,3,7,13,22,34,50,69,82,88,87,78,61,35\"");
    }
}
