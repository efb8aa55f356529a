//! Polynomials in z, z̄ over Q(i) with the bracket {z_j, z̄_k} = −2i δ_jk.

use crate::exact::{rat_to_string, serde_rat, Rational};
use crate::invariants::{dim2_data, Dim2IsoData, InvariantError, YPoly};
use crate::weights::WeightMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Largest total degree a bracket result may have.
pub const DEGREE_GUARD: u32 = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PoissonError {
    #[error("bracket degree {0} exceeds the guard of {DEGREE_GUARD}")]
    DegreeGuard(u32),
    #[error("polynomials live in different numbers of variables ({0} vs {1})")]
    VariableCount(usize, usize),
    #[error("identity {identity} fails; difference {difference}")]
    IdentityFailure { identity: String, difference: String },
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

/// x + y·i with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(x: i64) -> Self {
        Self::real(Rational::from_integer(BigInt::from(x)))
    }

    pub fn i() -> Self {
        GaussRational {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }
}

impl Add for &GaussRational {
    type Output = GaussRational;
    fn add(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussRational {
    type Output = GaussRational;
    fn sub(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussRational {
    type Output = GaussRational;
    fn mul(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-&self.re, -&self.im)
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", rat_to_string(&self.re)),
            (true, false) => write!(f, "{}i", rat_to_string(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "({} {} {}i)", rat_to_string(&self.re), sign, rat_to_string(&self.im.abs()))
            }
        }
    }
}

/// Exponent pair (a, b) of z^a z̄^b.
pub type Exponent = (Vec<u32>, Vec<u32>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CPolynomial {
    n: usize,
    terms: BTreeMap<Exponent, GaussRational>,
}

impl CPolynomial {
    pub fn zero(n: usize) -> Self {
        CPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: GaussRational) -> Self {
        Self::monomial(n, c, vec![0; n], vec![0; n])
    }

    pub fn monomial(n: usize, c: GaussRational, a: Vec<u32>, b: Vec<u32>) -> Self {
        assert!(a.len() == n && b.len() == n, "exponent length must be {n}");
        let mut p = Self::zero(n);
        p.add_term((a, b), c);
        p
    }

    /// The coordinate z_j (0-based).
    pub fn z(n: usize, j: usize) -> Self {
        let mut a = vec![0; n];
        a[j] = 1;
        Self::monomial(n, GaussRational::one(), a, vec![0; n])
    }

    /// The coordinate z̄_j (0-based).
    pub fn zbar(n: usize, j: usize) -> Self {
        let mut b = vec![0; n];
        b[j] = 1;
        Self::monomial(n, GaussRational::one(), vec![0; n], b)
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &GaussRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, a: &[u32], b: &[u32]) -> GaussRational {
        self.terms
            .get(&(a.to_vec(), b.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|(a, b)| a.iter().chain(b).sum())
            .max()
    }

    fn add_term(&mut self, e: Exponent, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        let mut out = Self::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (e, x) in &self.terms {
            out.terms.insert(e.clone(), x * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.n, GaussRational::one());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// ∂/∂z_j (holomorphic = false gives ∂/∂z̄_j).
    pub fn derivative(&self, j: usize, holomorphic: bool) -> Self {
        let mut out = Self::zero(self.n);
        for ((a, b), c) in &self.terms {
            let e = if holomorphic { a[j] } else { b[j] };
            if e == 0 {
                continue;
            }
            let (mut a, mut b) = (a.clone(), b.clone());
            if holomorphic {
                a[j] -= 1;
            } else {
                b[j] -= 1;
            }
            out.add_term((a, b), c * &GaussRational::from_int(e as i64));
        }
        out
    }

    /// Swaps (a, b) and conjugates the coefficients.
    pub fn conjugate(&self) -> Self {
        let mut out = Self::zero(self.n);
        for ((a, b), c) in &self.terms {
            out.terms.insert((b.clone(), a.clone()), c.conj());
        }
        out
    }

    pub fn is_real(&self) -> bool {
        *self == self.conjugate()
    }

    /// (p + p̄)/2.
    pub fn real_part(&self) -> Self {
        (self + &self.conjugate()).scale(&GaussRational::real(Rational::new(1.into(), 2.into())))
    }

    /// (p − p̄)/(2i).
    pub fn imag_part(&self) -> Self {
        (self - &self.conjugate()).scale(&GaussRational::new(
            Rational::zero(),
            Rational::new((-1).into(), 2.into()),
        ))
    }
}

impl Add for &CPolynomial {
    type Output = CPolynomial;
    fn add(self, o: &CPolynomial) -> CPolynomial {
        assert_eq!(self.n, o.n);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &CPolynomial {
    type Output = CPolynomial;
    fn sub(self, o: &CPolynomial) -> CPolynomial {
        assert_eq!(self.n, o.n);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &CPolynomial {
    type Output = CPolynomial;
    fn mul(self, o: &CPolynomial) -> CPolynomial {
        assert_eq!(self.n, o.n);
        let mut out = CPolynomial::zero(self.n);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                let a = a1.iter().zip(a2).map(|(x, y)| x + y).collect();
                let b = b1.iter().zip(b2).map(|(x, y)| x + y).collect();
                out.add_term((a, b), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &CPolynomial {
    type Output = CPolynomial;
    fn neg(self) -> CPolynomial {
        self.scale(&GaussRational::from_int(-1))
    }
}

impl fmt::Display for CPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|((a, b), c)| {
                let m = crate::invariants::MonomialExp {
                    a: a.clone(),
                    b: b.clone(),
                };
                let ms = m.to_string();
                if ms == "1" {
                    c.to_string()
                } else if *c == GaussRational::one() {
                    ms
                } else {
                    format!("{c}*{ms}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    a: Vec<u32>,
    b: Vec<u32>,
    #[serde(with = "serde_rat")]
    re: Rational,
    #[serde(with = "serde_rat")]
    im: Rational,
}

impl Serialize for CPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|((a, b), c)| TermJson {
                a: a.clone(),
                b: b.clone(),
                re: c.re.clone(),
                im: c.im.clone(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CPolynomial {
    /// The variable count is taken from the first term; an empty list is
    /// the zero polynomial in zero variables.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(d)?;
        let n = terms.first().map_or(0, |t| t.a.len());
        let mut p = CPolynomial::zero(n);
        for t in terms {
            if t.a.len() != n || t.b.len() != n {
                return Err(serde::de::Error::custom("inconsistent exponent lengths"));
            }
            p.add_term((t.a, t.b), GaussRational::new(t.re, t.im));
        }
        Ok(p)
    }
}

/// {p, q} = −2i Σ_k (∂p/∂z_k ∂q/∂z̄_k − ∂p/∂z̄_k ∂q/∂z_k).
pub fn bracket(p: &CPolynomial, q: &CPolynomial) -> Result<CPolynomial, PoissonError> {
    if p.n != q.n {
        return Err(PoissonError::VariableCount(p.n, q.n));
    }
    let deg = (p.degree().unwrap_or(0) + q.degree().unwrap_or(0)).saturating_sub(2);
    if deg > DEGREE_GUARD {
        return Err(PoissonError::DegreeGuard(deg));
    }
    let mut sum = CPolynomial::zero(p.n);
    for k in 0..p.n {
        let t1 = &p.derivative(k, true) * &q.derivative(k, false);
        let t2 = &p.derivative(k, false) * &q.derivative(k, true);
        sum = &sum + &(&t1 - &t2);
    }
    Ok(sum.scale(&GaussRational::new(Rational::zero(), Rational::from_integer((-2).into()))))
}

pub fn conjugate(p: &CPolynomial) -> CPolynomial {
    p.conjugate()
}

pub fn is_real(p: &CPolynomial) -> bool {
    p.is_real()
}

/// J_a = ½ Σ_j A_{aj} z_j z̄_j.
pub fn moment_component(w: &WeightMatrix, a: usize) -> CPolynomial {
    let n = w.n();
    let mut p = CPolynomial::zero(n);
    for j in 0..n {
        let mut e = vec![0; n];
        e[j] = 1;
        p.add_term(
            (e.clone(), e),
            GaussRational::real(Rational::new(BigInt::from(w.entry(a, j)), BigInt::from(2))),
        );
    }
    p
}

/// {J_a, p} = 0 for every moment-map component.
pub fn is_invariant(w: &WeightMatrix, p: &CPolynomial) -> Result<bool, PoissonError> {
    for a in 0..w.ell() {
        if !bracket(&moment_component(w, a), p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Substitutes a polynomial for each y variable.
pub fn substitute(p: &YPoly, images: &[CPolynomial]) -> CPolynomial {
    assert_eq!(p.vars(), images.len());
    let n = images.first().map_or(0, |q| q.n);
    let mut out = CPolynomial::zero(n);
    for (e, c) in p.terms() {
        let mut term = CPolynomial::constant(n, GaussRational::real(c.clone()));
        for (img, &k) in images.iter().zip(e) {
            if k > 0 {
                term = &term * &img.pow(k);
            }
        }
        out = &out + &term;
    }
    out
}

/// The real Hilbert basis ρ₁, …, ρ_{ℓ+3} of a dimension-2 quotient, in the
/// original column order of `w`.
pub fn dim2_hilbert_basis(w: &WeightMatrix, d: &Dim2IsoData) -> Vec<CPolynomial> {
    let n = w.n();
    let ell = d.ell();
    let c = d.perm[ell];
    let mut a = vec![0u32; n];
    a[c] = d.cal_a as u32;
    for i in 0..ell {
        a[d.perm[i]] = d.m[i] as u32;
    }
    let wmono = CPolynomial::monomial(n, GaussRational::one(), a, vec![0; n]);
    let diag = |j: usize| &CPolynomial::z(n, j) * &CPolynomial::zbar(n, j);
    let mut out = vec![wmono.real_part(), wmono.imag_part(), diag(c)];
    out.extend((0..ell).map(|i| diag(d.perm[i])));
    out
}

/// Right-hand side of {ρ₁, ρ₂} as a polynomial in y₁, …, y_{ℓ+3}:
/// 𝒜² y₃^{𝒜−1} Π y_{3+i}^{m_i} + Σ_{m_i>0} m_i² y₃^𝒜 y_{3+i}^{m_i−1} Π_{k≠i} y_{3+k}^{m_k}.
pub fn bracket_rhs(d: &Dim2IsoData) -> YPoly {
    let ell = d.ell();
    let mut p = YPoly::zero(ell + 3);
    let base = |e3: u32| {
        let mut e = vec![0u32; ell + 3];
        e[2] = e3;
        for i in 0..ell {
            e[3 + i] = d.m[i] as u32;
        }
        e
    };
    let sq = |x: u64| Rational::from_integer(BigInt::from(x) * BigInt::from(x));
    p.add_term(sq(d.cal_a), base(d.cal_a as u32 - 1));
    for i in 0..ell {
        if d.m[i] > 0 {
            let mut e = base(d.cal_a as u32);
            e[3 + i] -= 1;
            p.add_term(sq(d.m[i]), e);
        }
    }
    p
}

/// Reduces a polynomial in y₃, y₄, … by the shell relations
/// y_{3+i} = (m_i/𝒜) y₃, returning the coefficients of y₃^k by k.
pub fn shell_reduce(p: &YPoly, d: &Dim2IsoData) -> BTreeMap<u32, Rational> {
    let mut out: BTreeMap<u32, Rational> = BTreeMap::new();
    for (e, c) in p.terms() {
        assert!(e[0] == 0 && e[1] == 0, "shell reduction expects no y1, y2");
        let mut coeff = c.clone();
        let mut deg = e[2];
        for i in 0..d.ell() {
            let r = Rational::new(BigInt::from(d.m[i]), BigInt::from(d.cal_a));
            coeff *= num_traits::pow(r, e[3 + i] as usize);
            deg += e[3 + i];
        }
        *out.entry(deg).or_insert_with(Rational::zero) += coeff;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dim2BracketReport {
    pub big_n: u64,
    pub identities: Vec<String>,
}

/// Symbolic check of the dimension-2 bracket table.
pub fn verify_dim2_brackets(w: &WeightMatrix) -> Result<Dim2BracketReport, PoissonError> {
    let d = dim2_data(w)?;
    let rho = dim2_hilbert_basis(w, &d);
    let ell = d.ell();
    let mut identities = Vec::new();
    let check = |name: String, lhs: CPolynomial, rhs: CPolynomial, ids: &mut Vec<String>| {
        let diff = &lhs - &rhs;
        if diff.is_zero() {
            ids.push(name);
            Ok(())
        } else {
            Err(PoissonError::IdentityFailure {
                identity: name,
                difference: diff.to_string(),
            })
        }
    };
    let int = |x: i64| GaussRational::from_int(x);
    let two_a = 2 * d.cal_a as i64;
    check(
        "{rho1,rho3} = 2A rho2".into(),
        bracket(&rho[0], &rho[2])?,
        rho[1].scale(&int(two_a)),
        &mut identities,
    )?;
    check(
        "{rho2,rho3} = -2A rho1".into(),
        bracket(&rho[1], &rho[2])?,
        rho[0].scale(&int(-two_a)),
        &mut identities,
    )?;
    for i in 0..ell {
        let two_m = 2 * d.m[i] as i64;
        check(
            format!("{{rho1,rho{}}} = 2m{} rho2", 4 + i, i + 1),
            bracket(&rho[0], &rho[3 + i])?,
            rho[1].scale(&int(two_m)),
            &mut identities,
        )?;
        check(
            format!("{{rho2,rho{}}} = -2m{} rho1", 4 + i, i + 1),
            bracket(&rho[1], &rho[3 + i])?,
            rho[0].scale(&int(-two_m)),
            &mut identities,
        )?;
    }

    // images of y1..y_{ℓ+3}
    let images: Vec<CPolynomial> = rho.clone();
    let rhs = bracket_rhs(&d);
    check(
        "{rho1,rho2} = product formula".into(),
        bracket(&rho[0], &rho[1])?,
        substitute(&rhs, &images),
        &mut identities,
    )?;

    // ρ₁² + ρ₂² = ρ₃^𝒜 Π ρ_{3+i}^{m_i}
    let mut e = vec![0u32; ell + 3];
    e[2] = d.cal_a as u32;
    for i in 0..ell {
        e[3 + i] = d.m[i] as u32;
    }
    let mut norm = YPoly::zero(ell + 3);
    norm.add_term(Rational::one(), e);
    check(
        "rho1^2 + rho2^2 = rho3^A prod rho_(3+i)^m_i".into(),
        &(&rho[0] * &rho[0]) + &(&rho[1] * &rho[1]),
        substitute(&norm, &images),
        &mut identities,
    )?;

    // shell reductions
    let reduce_check = |name: &str, p: &YPoly, coeff: Rational, deg: u32, ids: &mut Vec<String>| {
        let got = shell_reduce(p, &d);
        let mut want = BTreeMap::new();
        want.insert(deg, coeff);
        if got == want {
            ids.push(name.to_string());
            Ok(())
        } else {
            Err(PoissonError::IdentityFailure {
                identity: name.to_string(),
                difference: format!("{got:?} vs {want:?}"),
            })
        }
    };
    let big_n = d.big_n as u32;
    reduce_check(
        "{y1,y2} = B y3^(N-1) on the shell",
        &rhs,
        d.cal_b.clone(),
        big_n - 1,
        &mut identities,
    )?;
    reduce_check(
        "y1^2 + y2^2 = c y3^N on the shell",
        &norm,
        d.cone_coefficient(),
        big_n,
        &mut identities,
    )?;

    for (k, r) in rho.iter().enumerate() {
        if !is_invariant(w, r)? {
            return Err(PoissonError::IdentityFailure {
                identity: format!("rho{} is invariant", k + 1),
                difference: r.to_string(),
            });
        }
        identities.push(format!("rho{} is invariant", k + 1));
    }
    if !d.verify_arrow() {
        return Err(PoissonError::IdentityFailure {
            identity: "alpha^2 N^2 = beta^(N-1) B".into(),
            difference: format!("alpha^2 = {}, beta = {}, B = {}", d.alpha_sq, d.beta, d.cal_b),
        });
    }
    identities.push("alpha^2 N^2 = beta^(N-1) B".into());
    Ok(Dim2BracketReport {
        big_n: d.big_n,
        identities,
    })
}
