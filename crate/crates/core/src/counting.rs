//! Counting polynomials `P_λ(q)` and their factorization `q^d (q-1)^e R_λ(q)`.
//!
//! Two independent recursions over removable cells are provided: one for
//! `P_λ` and one for `R_λ` directly. [`factored_count`] runs both and checks
//! them against each other and against the closed formulas for `d`, `e`,
//! `deg P`, `deg R` and the leading coefficient.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::partition::Partition;
use crate::poly::IntPolynomial;

/// `P_λ = q^d (q-1)^e R_λ` together with the expanded product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredCount {
    pub lambda: Partition,
    pub d: usize,
    pub e: usize,
    pub r: IntPolynomial,
    pub p: IntPolynomial,
}

impl FactoredCount {
    pub fn deg_p(&self) -> usize {
        self.p.degree().unwrap_or(0)
    }

    pub fn deg_r(&self) -> usize {
        self.r.degree().unwrap_or(0)
    }

    /// The `q^d Q^e` prefix with `Q = q - 1`, e.g. `q^4Q^3`, `qQ^2`, `Q`, `1`.
    pub fn prefix(&self) -> String {
        factor_prefix(self.d, self.e)
    }
}

/// Renders `q^d Q^e` minimally: no zero exponents, exponent 1 without a caret,
/// and `1` when both exponents vanish.
pub fn factor_prefix(d: usize, e: usize) -> String {
    let mut s = String::new();
    match d {
        0 => {}
        1 => s.push('q'),
        d => s.push_str(&format!("q^{d}")),
    }
    match e {
        0 => {}
        1 => s.push('Q'),
        e => s.push_str(&format!("Q^{e}")),
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

/// Memo tables for the `P` and `R` recursions.
#[derive(Default)]
pub struct Counter {
    p_cache: RwLock<HashMap<Partition, IntPolynomial>>,
    r_cache: RwLock<HashMap<Partition, IntPolynomial>>,
}

/// On-disk form of a [`Counter`]'s memo tables, keyed by symbolic partition.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CacheFile {
    #[serde(default)]
    pub p: BTreeMap<String, IntPolynomial>,
    #[serde(default)]
    pub r: BTreeMap<String, IntPolynomial>,
}

impl Counter {
    pub fn new() -> Self {
        Self::default()
    }

    /// The process-wide counter used by the free functions of this module.
    pub fn global() -> &'static Counter {
        static GLOBAL: OnceLock<Counter> = OnceLock::new();
        GLOBAL.get_or_init(Counter::new)
    }

    /// `P_λ(q)`, the number of strictly upper-triangular `n×n` matrices over
    /// `F_q` of Jordan type `λ`.
    ///
    /// Recursion over removable cells `(i_j, i'_j)`:
    /// `P_λ = Σ_j (q^{n - λ'_{i'_j}} - q^{n-1-λ'_{i'_j - 1}}) P_{λ↓_j}`, where the
    /// subtracted term is absent for a cell in the first column. `P_∅ = 1`.
    pub fn p_poly(&self, lambda: &Partition) -> IntPolynomial {
        if lambda.is_empty() {
            return IntPolynomial::one();
        }
        if let Some(hit) = self.p_cache.read().unwrap().get(lambda) {
            return hit.clone();
        }
        let n = lambda.size();
        let mut total = IntPolynomial::zero();
        for cell in lambda.corners() {
            let col = cell.col;
            let mut coeff = IntPolynomial::monomial(n - lambda.dual_part(col));
            if col > 1 {
                coeff = &coeff - &IntPolynomial::monomial(n - 1 - lambda.dual_part(col - 1));
            }
            let sub = self.p_poly(&lambda.without_cell(&cell));
            total = &total + &(&coeff * &sub);
        }
        self.p_cache
            .write()
            .unwrap()
            .entry(lambda.clone())
            .or_insert(total)
            .clone()
    }

    /// `R_λ(q)` by its own recursion:
    /// `R_λ = Σ_j q^{λ'_{i'_j + 1}} (1 + q + … + q^{α_{i'_j - 1}}) R_{λ↓_j}`,
    /// with `α_0 = 0` and `R_∅ = 1`.
    pub fn r_poly(&self, lambda: &Partition) -> IntPolynomial {
        if lambda.is_empty() {
            return IntPolynomial::one();
        }
        if let Some(hit) = self.r_cache.read().unwrap().get(lambda) {
            return hit.clone();
        }
        let mut total = IntPolynomial::zero();
        for cell in lambda.corners() {
            let col = cell.col;
            let factor = IntPolynomial::geometric_sum(lambda.multiplicity(col - 1))
                .shift(lambda.dual_part(col + 1));
            let sub = self.r_poly(&lambda.without_cell(&cell));
            total = &total + &(&factor * &sub);
        }
        self.r_cache
            .write()
            .unwrap()
            .entry(lambda.clone())
            .or_insert(total)
            .clone()
    }

    /// Assembles `(d, e, R, P)` and verifies every closed formula against
    /// the factorization of `P_λ`. Any disagreement is reported as
    /// [`Error::Inconsistent`].
    pub fn factored_count(&self, lambda: &Partition) -> Result<FactoredCount, Error> {
        if lambda.is_empty() {
            return Err(Error::EmptyPartition("factored_count"));
        }
        let p = self.p_poly(lambda);
        let r = self.r_poly(lambda);
        let fail = |invariant: &'static str, detail: String| Error::Inconsistent {
            lambda: lambda.to_string(),
            invariant,
            detail,
        };

        let (d, e, r_factored) = p
            .factor_out()
            .map_err(|_| fail("P_λ nonzero", "P_λ is the zero polynomial".into()))?;
        let d_formula = d_exponent(lambda)?;
        if d != d_formula {
            return Err(fail("d(λ) closed formula", format!("factorization gives {d}, formula gives {d_formula}")));
        }
        let e_formula = e_exponent(lambda)?;
        if e != e_formula {
            return Err(fail("e(λ) = n - N", format!("factorization gives {e}, formula gives {e_formula}")));
        }
        if r != r_factored {
            return Err(fail(
                "R_λ recursion matches factored P_λ",
                format!("recursion gives {}, factorization gives {}", r.bracketed(), r_factored.bracketed()),
            ));
        }
        if !r.coeff(0).is_one() {
            return Err(fail("R_λ(0) = 1", format!("constant term is {}", r.coeff(0))));
        }
        if let Some(c) = r.coeffs().iter().find(|c| !c.is_positive()) {
            return Err(fail("R_λ coefficients positive", format!("found coefficient {c}")));
        }
        let deg_r_formula = deg_r(lambda)?;
        if r.degree() != Some(deg_r_formula) {
            return Err(fail("deg R_λ closed formula", format!("{:?} vs {deg_r_formula}", r.degree())));
        }
        let deg_p_formula = deg_p(lambda)?;
        if p.degree() != Some(deg_p_formula) {
            return Err(fail("deg P_λ closed formula", format!("{:?} vs {deg_p_formula}", p.degree())));
        }
        let dim = BigInt::from(lambda.dim_irrep()?);
        if p.leading_coeff() != Some(&dim) {
            return Err(fail(
                "leading coefficient of P_λ = dim V_λ",
                format!("{:?} vs {dim}", p.leading_coeff()),
            ));
        }
        Ok(FactoredCount {
            lambda: lambda.clone(),
            d,
            e,
            r,
            p,
        })
    }

    /// Seeds the memo tables from a cache file. Entries are trusted as-is;
    /// a corrupted entry surfaces later as an [`Error::Inconsistent`].
    pub fn load_cache(&self, path: &Path) -> Result<(), Error> {
        let text = std::fs::read_to_string(path)?;
        let file: CacheFile = serde_json::from_str(&text)?;
        self.seed(&file)
    }

    pub fn seed(&self, file: &CacheFile) -> Result<(), Error> {
        let parse = |key: &str| {
            crate::partition::parse_symbolic(key).map_err(|e| Error::Cache(format!("bad key {key:?}: {e}")))
        };
        let mut p = self.p_cache.write().unwrap();
        for (key, poly) in &file.p {
            p.insert(parse(key)?, poly.clone());
        }
        drop(p);
        let mut r = self.r_cache.write().unwrap();
        for (key, poly) in &file.r {
            r.insert(parse(key)?, poly.clone());
        }
        Ok(())
    }

    pub fn snapshot(&self) -> CacheFile {
        let dump = |cache: &RwLock<HashMap<Partition, IntPolynomial>>| {
            cache
                .read()
                .unwrap()
                .iter()
                .map(|(k, v)| (k.to_symbolic(false), v.clone()))
                .collect()
        };
        CacheFile {
            p: dump(&self.p_cache),
            r: dump(&self.r_cache),
        }
    }

    pub fn save_cache(&self, path: &Path) -> Result<(), Error> {
        let json = serde_json::to_string_pretty(&self.snapshot())?;
        std::fs::write(path, json)?;
        Ok(())
    }
}

pub fn p_poly(lambda: &Partition) -> IntPolynomial {
    Counter::global().p_poly(lambda)
}

pub fn r_poly(lambda: &Partition) -> IntPolynomial {
    Counter::global().r_poly(lambda)
}

pub fn factored_count(lambda: &Partition) -> Result<FactoredCount, Error> {
    Counter::global().factored_count(lambda)
}

fn choose2(x: usize) -> i128 {
    let x = x as i128;
    x * (x - 1) / 2
}

fn nonempty(lambda: &Partition, op: &'static str) -> Result<(), Error> {
    if lambda.is_empty() {
        return Err(Error::EmptyPartition(op));
    }
    Ok(())
}

fn adjacent_dual_products(lambda: &Partition) -> i128 {
    (1..lambda.largest())
        .map(|i| (lambda.dual_part(i) * lambda.dual_part(i + 1)) as i128)
        .sum()
}

/// Exponent of `q` in `P_λ`: `C(n,2) - C(N,2) - Σ_{i<N'} λ'_i λ'_{i+1}`.
pub fn d_exponent(lambda: &Partition) -> Result<usize, Error> {
    nonempty(lambda, "d_exponent")?;
    let d = choose2(lambda.size()) - choose2(lambda.len()) - adjacent_dual_products(lambda);
    Ok(usize::try_from(d).expect("d(λ) is nonnegative"))
}

/// Exponent of `q - 1` in `P_λ`: `n - N`.
pub fn e_exponent(lambda: &Partition) -> Result<usize, Error> {
    nonempty(lambda, "e_exponent")?;
    Ok(lambda.size() - lambda.len())
}

/// `deg P_λ = Σ_{i<j} λ'_i λ'_j`.
pub fn deg_p(lambda: &Partition) -> Result<usize, Error> {
    nonempty(lambda, "deg_p")?;
    let dual = lambda.dual();
    let total: usize = dual.parts().iter().sum();
    let squares: usize = dual.parts().iter().map(|x| x * x).sum();
    Ok((total * total - squares) / 2)
}

/// `deg R_λ = Σ_{i<N'} λ'_i λ'_{i+1} - Σ_{i=2}^{N'} C(λ'_i + 1, 2)`.
pub fn deg_r(lambda: &Partition) -> Result<usize, Error> {
    nonempty(lambda, "deg_r")?;
    let tail: i128 = (2..=lambda.largest())
        .map(|i| choose2(lambda.dual_part(i) + 1))
        .sum();
    let deg = adjacent_dual_products(lambda) - tail;
    Ok(usize::try_from(deg).expect("deg R_λ is nonnegative"))
}

/// `q^{n(n-1)/2}`, the total number of strictly upper-triangular matrices.
pub fn total_count(n: usize) -> IntPolynomial {
    IntPolynomial::monomial(n * n.saturating_sub(1) / 2)
}

/// Leading coefficient of `P_λ`, which should equal `dim V_λ`.
pub fn leading_coefficient(lambda: &Partition) -> Option<BigUint> {
    p_poly(lambda).leading_coeff().and_then(|c| c.to_biguint())
}
