//! Dense integer polynomials in `q` and truncated power series.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A polynomial with arbitrary-precision integer coefficients.
///
/// `coeffs[k]` is the coefficient of `q^k`; there are never trailing zeros,
/// so the zero polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `q^m`.
    pub fn monomial(m: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); m + 1];
        coeffs[m] = BigInt::one();
        Self { coeffs }
    }

    /// `q - 1`.
    pub fn q_minus_one() -> Self {
        Self::from_i64s(&[-1, 1])
    }

    /// `1 + q + … + q^t`.
    pub fn geometric_sum(t: usize) -> Self {
        Self {
            coeffs: vec![BigInt::one(); t + 1],
        }
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient, `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Multiplies by `q^m`.
    pub fn shift(&self, m: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); m];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by `q - 1` via synthetic division, returning `None` when
    /// the division is not exact.
    pub fn div_q_minus_one(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        // Synthetic division by the root 1, from the top coefficient down.
        let d = self.coeffs.len() - 1;
        let mut quotient = vec![BigInt::zero(); d];
        let mut carry = BigInt::zero();
        for k in (1..=d).rev() {
            carry += &self.coeffs[k];
            quotient[k - 1] = carry.clone();
        }
        carry += &self.coeffs[0];
        carry.is_zero().then(|| Self::new(quotient))
    }

    /// Splits off the largest powers of `q` and `q - 1`: returns `(d, e, r)`
    /// with `self = q^d (q-1)^e r`, `r(0) != 0` and `r(1) != 0`.
    pub fn factor_out(&self) -> Result<(usize, usize, Self), Error> {
        let d = self.valuation().ok_or(Error::ZeroPolynomial)?;
        let mut r = Self::new(self.coeffs[d..].to_vec());
        let mut e = 0;
        while let Some(next) = r.div_q_minus_one() {
            r = next;
            e += 1;
        }
        Ok((d, e, r))
    }

    /// `q^d (q-1)^e self`.
    pub fn with_factors(&self, d: usize, e: usize) -> Self {
        (&Self::q_minus_one().pow(e) * self).shift(d)
    }

    /// The `[c0,c1,…]` rendering used by the table.
    pub fn bracketed(&self) -> String {
        bracketed(&self.coeffs)
    }
}

pub(crate) fn bracketed(coeffs: &[BigInt]) -> String {
    let body: Vec<String> = coeffs.iter().map(ToString::to_string).collect();
    format!("[{}]", body.join(","))
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial{}", self.bracketed())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            let show_coeff = k == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("q")?,
                _ => write!(f, "q^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        IntPolynomial::new(coeffs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::new(coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;

            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for IntPolynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| &acc + &p)
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        decimal_strings::serialize(&self.coeffs, serializer)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        decimal_strings::deserialize(deserializer).map(Self::new)
    }
}

/// Serde adapter for coefficient vectors as JSON arrays of decimal strings.
pub mod decimal_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(coeffs: &[BigInt], serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(coeffs.iter().map(|c| c.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        raw.iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Power series in `q` truncated after the `q^order` term.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TruncatedSeries {
    order: usize,
    #[serde(with = "decimal_strings")]
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// The series with the given leading coefficients, zero-padded or cut to `order`.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>, order: usize) -> Self {
        coeffs.resize(order + 1, BigInt::zero());
        Self { order, coeffs }
    }

    pub fn from_poly(poly: &IntPolynomial, order: usize) -> Self {
        Self::from_coeffs(poly.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::from_poly(&IntPolynomial::one(), order)
    }

    /// `1 - q^k` for `k >= 1`.
    pub fn one_minus_q_pow(k: usize, order: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        coeffs[0] = BigInt::one();
        if k <= order {
            coeffs[k] -= 1;
        }
        Self { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, Error> {
        self.check_order(rhs)?;
        let m = self.order;
        let mut coeffs = vec![BigInt::zero(); m + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=m - i].iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(Self { order: m, coeffs })
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..e {
            acc = acc.mul(self).expect("same order");
        }
        acc
    }

    /// Multiplicative inverse; the constant term must be `±1`.
    pub fn invert(&self) -> Result<Self, Error> {
        let c0 = &self.coeffs[0];
        if !c0.abs().is_one() {
            return Err(Error::NonUnitConstant(c0.to_string()));
        }
        let m = self.order;
        let mut inv: Vec<BigInt> = Vec::with_capacity(m + 1);
        inv.push(c0.clone());
        for k in 1..=m {
            let mut acc = BigInt::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &inv[k - j];
            }
            // c0 is ±1, so dividing by it is multiplying by it.
            inv.push(-(acc * c0));
        }
        Ok(Self { order: m, coeffs: inv })
    }

    fn check_order(&self, rhs: &Self) -> Result<(), Error> {
        if self.order != rhs.order {
            return Err(Error::OrderMismatch(self.order, rhs.order));
        }
        Ok(())
    }
}
