//! Exact rationals, truncated power series and rational functions whose
//! denominators are products of cyclotomic-style factors (1 - t^p)^k.
//!
//! Nothing in here touches floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator (the invariant `num_rational` maintains on every constructor).
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// "p/q", or just "p" when the denominator is one.
pub fn rat_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("malformed rational {0:?}")]
pub struct ParseRationalError(pub String);

pub fn parse_rat(s: &str) -> Result<Rational, ParseRationalError> {
    let bad = || ParseRationalError(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// serde adapter: a rational as a "p/q" string.
pub mod serde_rat {
    use super::*;
    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(D::Error::custom)
    }
}

/// serde adapter: a list of rationals as "p/q" strings.
pub mod serde_rat_vec {
    use super::*;
    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(rat_to_string).collect();
        strs.serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| parse_rat(s).map_err(D::Error::custom))
            .collect()
    }
}

/// serde adapter: a list of rational vectors.
pub mod serde_rat_matrix {
    use super::*;
    pub fn serialize<S: Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<Vec<String>> = v
            .iter()
            .map(|row| row.iter().map(rat_to_string).collect())
            .collect();
        strs.serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let strs = Vec::<Vec<String>>::deserialize(d)?;
        strs.iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse_rat(s).map_err(D::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// serde adapter: big integers as JSON numbers when they fit in an i64,
/// decimal strings otherwise.
pub mod serde_bigint_vec {
    use super::*;
    use serde_json::Value;

    pub fn to_value(x: &BigInt) -> Value {
        match x.to_i64() {
            Some(v) => Value::from(v),
            None => Value::String(x.to_string()),
        }
    }

    pub fn from_value(v: &Value) -> Option<BigInt> {
        match v {
            Value::Number(n) => n.as_i64().map(BigInt::from),
            Value::String(s) => s.parse().ok(),
            _ => None,
        }
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let vals: Vec<Value> = v.iter().map(to_value).collect();
        vals.serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let vals = Vec::<Value>::deserialize(d)?;
        vals.iter()
            .map(|v| from_value(v).ok_or_else(|| D::Error::custom("expected an integer")))
            .collect()
    }
}

/// Single big integer, same encoding as [`serde_bigint_vec`].
pub mod serde_bigint_scalar {
    use super::serde_bigint_vec::{from_value, to_value};
    use super::*;
    use serde_json::Value;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_value(v).serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let v = Value::deserialize(d)?;
        from_value(&v).ok_or_else(|| D::Error::custom("expected an integer"))
    }
}

/// Integer polynomial in t, coefficient i at index i, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPoly {
    #[serde(with = "serde_bigint_vec")]
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Build from (exponent, coefficient) terms; repeated exponents add up.
    pub fn from_terms(terms: &[(usize, i64)]) -> Self {
        let len = terms.iter().map(|t| t.0 + 1).max().unwrap_or(0);
        let mut c = vec![BigInt::zero(); len];
        for &(e, v) in terms {
            c[e] += v;
        }
        Self::new(c)
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![BigInt::one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::new(c)
    }

    /// (1 - t^p)^k expanded.
    pub fn one_minus_power(p: usize, k: u32) -> IntPoly {
        let base = IntPoly::from_terms(&[(0, 1), (p, -1)]);
        let mut out = IntPoly::one();
        for _ in 0..k {
            out = out.mul(&base);
        }
        out
    }

    pub fn to_series(&self, order: usize) -> TruncatedSeries {
        TruncatedSeries::new(
            (0..=order)
                .map(|i| Rational::from_integer(self.coeff(i)))
                .collect(),
        )
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Power series truncated at `order`; coefficient k sits at index k.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coefficients: Vec<Rational>,
}

impl TruncatedSeries {
    /// Panics on an empty coefficient list: a series always knows degree 0.
    pub fn new(coefficients: Vec<Rational>) -> Self {
        assert!(!coefficients.is_empty(), "a truncated series needs order >= 0");
        TruncatedSeries { coefficients }
    }

    pub fn from_ints<T: Into<BigInt> + Copy>(coeffs: &[T]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coefficients[k]
    }

    pub fn truncate(&self, order: usize) -> TruncatedSeries {
        let k = order.min(self.order());
        TruncatedSeries::new(self.coefficients[..=k].to_vec())
    }

    /// The coefficients as integers, or `None` if any is fractional.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coefficients
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// Integer coefficients narrowed to i64.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.to_integers()?.iter().map(|c| c.to_i64()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    order: usize,
    #[serde(with = "serde_rat_vec")]
    coefficients: Vec<Rational>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesJson {
            order: self.order(),
            coefficients: self.coefficients.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = SeriesJson::deserialize(d)?;
        if j.coefficients.len() != j.order + 1 {
            return Err(D::Error::custom("coefficient count must be order + 1"));
        }
        Ok(TruncatedSeries::new(j.coefficients))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(rat_to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Cauchy product, truncated at the smaller of the two orders.
pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let order = a.order().min(b.order());
    let coeffs = (0..=order)
        .map(|k| {
            (0..=k)
                .map(|i| &a.coefficients[i] * &b.coefficients[k - i])
                .fold(Rational::zero(), |acc, x| acc + x)
        })
        .collect();
    TruncatedSeries::new(coeffs)
}

/// Numerator over a product of factors (1 - t^period)^multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RfJson", into = "RfJson")]
pub struct RationalFunctionProd {
    numerator: IntPoly,
    denominator: Vec<(usize, u32)>,
}

#[derive(Serialize, Deserialize)]
struct RfJson {
    numerator: IntPoly,
    denominator: Vec<(usize, u32)>,
}

impl From<RationalFunctionProd> for RfJson {
    fn from(r: RationalFunctionProd) -> Self {
        RfJson {
            numerator: r.numerator,
            denominator: r.denominator,
        }
    }
}

impl TryFrom<RfJson> for RationalFunctionProd {
    type Error = String;
    fn try_from(j: RfJson) -> Result<Self, String> {
        if j.denominator.iter().any(|&(p, _)| p == 0) {
            return Err("denominator periods must be positive".into());
        }
        Ok(RationalFunctionProd::new(j.numerator, &j.denominator))
    }
}

impl RationalFunctionProd {
    /// Factors with equal periods are merged and zero multiplicities dropped,
    /// so the stored list has strictly increasing periods.
    ///
    /// Panics on a zero period.
    pub fn new(numerator: IntPoly, factors: &[(usize, u32)]) -> Self {
        let mut merged: std::collections::BTreeMap<usize, u32> = Default::default();
        for &(p, k) in factors {
            assert!(p > 0, "period must be positive");
            *merged.entry(p).or_default() += k;
        }
        RationalFunctionProd {
            numerator,
            denominator: merged.into_iter().filter(|&(_, k)| k > 0).collect(),
        }
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &[(usize, u32)] {
        &self.denominator
    }

    pub fn denominator_poly(&self) -> IntPoly {
        denominator_poly(&self.denominator)
    }
}

impl fmt::Display for RationalFunctionProd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.numerator)?;
        if !self.denominator.is_empty() {
            write!(f, " / ")?;
            for (p, k) in &self.denominator {
                let base = if *p == 1 { "t".to_string() } else { format!("t^{p}") };
                if *k == 1 {
                    write!(f, "(1 - {base})")?;
                } else {
                    write!(f, "(1 - {base})^{k}")?;
                }
            }
        }
        Ok(())
    }
}

pub fn denominator_poly(factors: &[(usize, u32)]) -> IntPoly {
    factors
        .iter()
        .fold(IntPoly::one(), |acc, &(p, k)| acc.mul(&IntPoly::one_minus_power(p, k)))
}

/// Exact expansion through degree `order`. Each factor 1/(1 - t^p) is a
/// running sum with stride p, so only integer additions are needed.
pub fn series_expand(rf: &RationalFunctionProd, order: usize) -> TruncatedSeries {
    let mut c: Vec<BigInt> = (0..=order).map(|i| rf.numerator.coeff(i)).collect();
    for &(p, k) in &rf.denominator {
        for _ in 0..k {
            for i in p..=order {
                let prev = c[i - p].clone();
                c[i] += prev;
            }
        }
    }
    TruncatedSeries::new(c.into_iter().map(Rational::from_integer).collect())
}

/// Equality of rational functions by cross-multiplying numerators with the
/// other side's expanded denominator.
pub fn rf_equal(a: &RationalFunctionProd, b: &RationalFunctionProd) -> bool {
    a.numerator.mul(&b.denominator_poly()) == b.numerator.mul(&a.denominator_poly())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FitError {
    #[error("series is not represented by this denominator: first inconsistent degree {degree}")]
    Mismatch { degree: usize },
    #[error("series order {order} is below the numerator degree budget {budget}")]
    OrderTooSmall { order: usize, budget: usize },
}

/// Recover the numerator N(t) of degree at most `max_degree` with
/// N(t) / denominator = s through s.order. Coefficients of s·denominator
/// above `max_degree` must vanish and all of them must be integral.
pub fn rational_fit(
    s: &TruncatedSeries,
    denominator: &[(usize, u32)],
    max_degree: usize,
) -> Result<IntPoly, FitError> {
    if s.order() < max_degree {
        return Err(FitError::OrderTooSmall {
            order: s.order(),
            budget: max_degree,
        });
    }
    let p = denominator_poly(denominator).to_series(s.order());
    let prod = series_mul(s, &p);
    let mut out = Vec::with_capacity(max_degree + 1);
    for (k, c) in prod.coefficients().iter().enumerate() {
        if !c.is_integer() {
            return Err(FitError::Mismatch { degree: k });
        }
        if k <= max_degree {
            out.push(c.to_integer());
        } else if !c.is_zero() {
            return Err(FitError::Mismatch { degree: k });
        }
    }
    Ok(IntPoly::new(out))
}

/// Coefficient i equals coefficient deg - i for every i.
pub fn palindromic(p: &IntPoly) -> bool {
    let c = p.coeffs();
    c.iter().eq(c.iter().rev())
}

/// Greatest common divisor of a list of big integers (0 for an empty list).
pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}
