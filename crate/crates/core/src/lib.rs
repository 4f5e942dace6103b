//! Exact counts of strictly upper-triangular matrices over `F_q` by Jordan type.
//!
//! For a partition `λ` of `n`, [`counting::p_poly`] gives the polynomial
//! `P_λ(q)` counting strictly upper-triangular `n×n` matrices over `F_q` whose
//! Jordan type is `λ`. It factors as `q^d (q-1)^e R_λ(q)`; [`counting`] computes
//! `R_λ` by a separate recursion and checks it against the factorization and
//! the closed formulas for `d` and `e`. [`stabilization`] covers the limit of
//! `R_{λ1^k}` as `k` grows, and [`oracle`] counts matrices by brute force.

pub mod counting;
pub mod error;
pub mod oracle;
pub mod partition;
pub mod poly;
pub mod stabilization;
pub mod table;
pub mod verify;

pub use counting::{
    d_exponent, deg_p, deg_r, e_exponent, factored_count, p_poly, r_poly, Counter, FactoredCount,
};
pub use error::{Error, ParseError};
pub use oracle::{enumerate_counts, jordan_type, sample_counts, CountTally, UTMatrix};
pub use partition::{parse_symbolic, Partition, RemovableCell};
pub use poly::{IntPolynomial, TruncatedSeries};
pub use stabilization::{limit_series, s_factor, verify_stabilization, StabilizationReport};
