//! Torus invariants on C[z, z̄]: graded dimensions by two independent
//! counts, monomial Hilbert bases, the quotient Hilbert series and the
//! dimension-2 isomorphism data.

use crate::exact::{
    rational_fit, serde_rat, FitError, IntPoly, Rational, RationalFunctionProd, TruncatedSeries,
};
use crate::lattice::kernel_lattice_basis;
use crate::weights::{cone_rays, effectiveness_report, WeightError, WeightMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use thiserror::Error;

/// Bounds of the graded-dimension contract.
pub const MAX_COLUMNS: usize = 8;
pub const MAX_DEGREE: usize = 20;
/// Largest number of invariant monomials a Hilbert-basis search may visit.
pub const MAX_MONOMIALS: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("graded dimension algorithms disagree at degree {degree}: {enumeration} vs {laurent}")]
    AlgorithmMismatch {
        degree: usize,
        enumeration: u64,
        laurent: u64,
    },
    #[error("weight matrix has rank {rank} < {ell}")]
    NotFullRank { rank: usize, ell: usize },
    #[error("weight matrix cannot be brought to the form [D | n]")]
    NotDim2Form,
    #[error("gcd(a_{index}, n_{index}) = {gcd} is not 1")]
    GcdViolation { index: usize, gcd: u64 },
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Fit(#[from] FitError),
}

/// Monomial z^a z̄^b.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonomialExp {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl MonomialExp {
    pub fn degree(&self) -> u32 {
        self.a.iter().chain(&self.b).sum()
    }

    pub fn conjugate(&self) -> MonomialExp {
        MonomialExp {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    pub fn is_invariant(&self, w: &WeightMatrix) -> bool {
        (0..w.ell()).all(|r| {
            (0..w.n())
                .map(|j| w.entry(r, j) * (self.a[j] as i64 - self.b[j] as i64))
                .sum::<i64>()
                == 0
        })
    }

    pub fn divides(&self, other: &MonomialExp) -> bool {
        self.a.iter().zip(&other.a).all(|(x, y)| x <= y)
            && self.b.iter().zip(&other.b).all(|(x, y)| x <= y)
    }

    pub fn quotient(&self, divisor: &MonomialExp) -> MonomialExp {
        MonomialExp {
            a: self.a.iter().zip(&divisor.a).map(|(x, y)| x - y).collect(),
            b: self.b.iter().zip(&divisor.b).map(|(x, y)| x - y).collect(),
        }
    }
}

impl Serialize for GeneratorJson<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Generator", 3)?;
        st.serialize_field("a", &self.0.a)?;
        st.serialize_field("b", &self.0.b)?;
        st.serialize_field("degree", &self.0.degree())?;
        st.end()
    }
}

struct GeneratorJson<'a>(&'a MonomialExp);

impl fmt::Display for MonomialExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, &e) in self.a.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("z{}", j + 1)),
                _ => parts.push(format!("z{}^{}", j + 1, e)),
            }
        }
        for (j, &e) in self.b.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("zb{}", j + 1)),
                _ => parts.push(format!("zb{}^{}", j + 1, e)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDims {
    pub dims: Vec<u64>,
}

impl GradedDims {
    pub fn to_series(&self) -> TruncatedSeries {
        TruncatedSeries::from_ints(&self.dims)
    }
}

fn check_budget(w: &WeightMatrix, k: usize) -> Result<(), InvariantError> {
    if w.n() > MAX_COLUMNS {
        return Err(InvariantError::Budget(format!(
            "{} columns exceed the limit of {MAX_COLUMNS}",
            w.n()
        )));
    }
    if k > MAX_DEGREE {
        return Err(InvariantError::Budget(format!(
            "degree {k} exceeds the limit of {MAX_DEGREE}"
        )));
    }
    Ok(())
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Largest |A_{rj}| over columns j ≥ start, per row.
fn suffix_max_abs(w: &WeightMatrix) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0i64; w.ell()]; w.n() + 1];
    for j in (0..w.n()).rev() {
        for r in 0..w.ell() {
            out[j][r] = out[j + 1][r].max(w.entry(r, j).abs());
        }
    }
    out
}

/// Calls `f(u)` for every u ∈ ker A ∩ Z^n with |u|₁ ≤ k.
fn for_each_kernel_vector(w: &WeightMatrix, k: usize, mut f: impl FnMut(&[i64])) {
    let cols: Vec<Vec<i64>> = (0..w.n()).map(|j| w.column(j)).collect();
    let bounds = suffix_max_abs(w);
    let mut u = vec![0i64; w.n()];
    let mut partial = vec![0i64; w.ell()];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        j: usize,
        budget: i64,
        u: &mut Vec<i64>,
        partial: &mut Vec<i64>,
        cols: &[Vec<i64>],
        bounds: &[Vec<i64>],
        f: &mut dyn FnMut(&[i64]),
    ) {
        if j == u.len() {
            if partial.iter().all(|&s| s == 0) {
                f(u);
            }
            return;
        }
        for v in -budget..=budget {
            let rest = budget - v.abs();
            let mut ok = true;
            for r in 0..partial.len() {
                let s = partial[r] + v * cols[j][r];
                if s.abs() > rest * bounds[j + 1][r] {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            u[j] = v;
            for r in 0..partial.len() {
                partial[r] += v * cols[j][r];
            }
            rec(j + 1, rest, u, partial, cols, bounds, f);
            for r in 0..partial.len() {
                partial[r] -= v * cols[j][r];
            }
        }
        u[j] = 0;
    }
    rec(0, k as i64, &mut u, &mut partial, &cols, &bounds, &mut f);
}

/// Direct count: every invariant (a, b) is (u⁺ + c, u⁻ + c) for a kernel
/// vector u and a padding c ≥ 0 of size (k − |u|₁)/2.
pub fn graded_dims_enumeration(w: &WeightMatrix, k: usize) -> Vec<u128> {
    let n = w.n() as u64;
    let mut dims = vec![0u128; k + 1];
    for_each_kernel_vector(w, k, |u| {
        let l: usize = u.iter().map(|x| x.unsigned_abs() as usize).sum();
        for d in (l..=k).step_by(2) {
            let pad = ((d - l) / 2) as u64;
            dims[d] += binomial(pad + n - 1, n - 1);
        }
    });
    dims
}

/// Constant term in u of Π_j 1/((1 − u^{c_j} t)(1 − u^{−c_j} t)), truncated
/// at t^k. States are (weight, degree); each geometric factor is applied as
/// the recurrence F = G + u^c t F.
pub fn graded_dims_laurent(w: &WeightMatrix, k: usize) -> Vec<u128> {
    let bounds = suffix_max_abs(w);
    let mut levels: Vec<HashMap<Vec<i64>, u128>> = vec![HashMap::new(); k + 1];
    levels[0].insert(vec![0; w.ell()], 1);
    for j in 0..w.n() {
        let col = w.column(j);
        for sign in [1i64, -1] {
            for d in 1..=k {
                let (lower, upper) = levels.split_at_mut(d);
                for (wt, &v) in lower[d - 1].iter() {
                    let shifted: Vec<i64> = wt.iter().zip(&col).map(|(x, c)| x + sign * c).collect();
                    *upper[0].entry(shifted).or_insert(0) += v;
                }
            }
        }
        for (d, level) in levels.iter_mut().enumerate() {
            let rest = (k - d) as i64;
            level.retain(|wt, _| {
                wt.iter()
                    .zip(&bounds[j + 1])
                    .all(|(x, b)| x.abs() <= rest * b)
            });
        }
    }
    let zero = vec![0i64; w.ell()];
    levels.iter().map(|l| l.get(&zero).copied().unwrap_or(0)).collect()
}

/// N_k = #{(a, b) : A(a − b) = 0, |a| + |b| = k} for k = 0..=K, computed by
/// both algorithms and cross-checked.
pub fn graded_dims(w: &WeightMatrix, k: usize) -> Result<GradedDims, InvariantError> {
    check_budget(w, k)?;
    let (e, l) = rayon::join(
        || graded_dims_enumeration(w, k),
        || graded_dims_laurent(w, k),
    );
    let to64 = |x: u128| u64::try_from(x).map_err(|_| InvariantError::Budget("count overflow".into()));
    let mut dims = Vec::with_capacity(k + 1);
    for d in 0..=k {
        if e[d] != l[d] {
            return Err(InvariantError::AlgorithmMismatch {
                degree: d,
                enumeration: to64(e[d])?,
                laurent: to64(l[d])?,
            });
        }
        dims.push(to64(e[d])?);
    }
    Ok(GradedDims { dims })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertBasisResult {
    #[serde(serialize_with = "ser_generators")]
    pub generators: Vec<MonomialExp>,
    pub degree_cap: usize,
    pub complete: bool,
}

fn ser_generators<S: serde::Serializer>(g: &[MonomialExp], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(g.len()))?;
    for m in g {
        seq.serialize_element(&GeneratorJson(m))?;
    }
    seq.end()
}

/// All invariant monomials of degree ≤ cap, sorted by (degree, exponents).
pub fn invariant_monomials(w: &WeightMatrix, cap: usize) -> Result<Vec<MonomialExp>, InvariantError> {
    let n = w.n();
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_kernel_vector(w, cap, |u| {
        if overflow {
            return;
        }
        let l: usize = u.iter().map(|x| x.unsigned_abs() as usize).sum();
        let base_a: Vec<u32> = u.iter().map(|&x| x.max(0) as u32).collect();
        let base_b: Vec<u32> = u.iter().map(|&x| (-x).max(0) as u32).collect();
        let max_pad = (cap - l) / 2;
        let mut c = vec![0u32; n];
        compositions_up_to(&mut c, 0, max_pad as u32, &mut |c| {
            out.push(MonomialExp {
                a: base_a.iter().zip(c).map(|(x, y)| x + y).collect(),
                b: base_b.iter().zip(c).map(|(x, y)| x + y).collect(),
            });
        });
        if out.len() > MAX_MONOMIALS {
            overflow = true;
        }
    });
    if overflow {
        return Err(InvariantError::Budget(format!(
            "more than {MAX_MONOMIALS} invariant monomials up to degree {cap}"
        )));
    }
    out.sort_by(|x, y| x.degree().cmp(&y.degree()).then_with(|| x.cmp(y)));
    Ok(out)
}

fn compositions_up_to(c: &mut Vec<u32>, j: usize, budget: u32, f: &mut dyn FnMut(&[u32])) {
    if j == c.len() {
        f(c);
        return;
    }
    for v in 0..=budget {
        c[j] = v;
        compositions_up_to(c, j + 1, budget - v, f);
    }
    c[j] = 0;
}

/// Irreducible invariant monomials of degree ≤ cap. A monomial is reducible
/// exactly when some generator of smaller degree divides it, since the
/// quotient of two invariant monomials is invariant.
pub fn hilbert_basis_monomials(
    w: &WeightMatrix,
    degree_cap: usize,
) -> Result<HilbertBasisResult, InvariantError> {
    let all = invariant_monomials(w, degree_cap)?;
    let mut generators: Vec<MonomialExp> = Vec::new();
    for m in all.iter().skip(1) {
        if !generators.iter().any(|g| g.divides(m)) {
            generators.push(m.clone());
        }
    }
    // independent completeness pass: memoized factorization over generators
    let gens: HashSet<&MonomialExp> = generators.iter().collect();
    let mut factorable: HashMap<&MonomialExp, bool> = HashMap::new();
    let mut complete = true;
    for m in all.iter() {
        let ok = if m.degree() == 0 || gens.contains(m) {
            true
        } else {
            generators.iter().any(|g| {
                g.divides(m) && g != m && {
                    let q = m.quotient(g);
                    let key = all
                        .binary_search_by(|x| x.degree().cmp(&q.degree()).then_with(|| x.cmp(&q)))
                        .ok()
                        .map(|i| &all[i]);
                    key.map_or(false, |k| factorable.get(k).copied().unwrap_or(false))
                }
            })
        };
        factorable.insert(m, ok);
        complete &= ok;
    }
    Ok(HilbertBasisResult {
        generators,
        degree_cap,
        complete,
    })
}

/// Hilbert series of the symplectic quotient: invariant series times
/// (1 − t²)^ℓ. The shell relations are assumed to form a regular sequence,
/// which holds for full-rank weight matrices.
pub fn quotient_hilbert_series(w: &WeightMatrix, k: usize) -> Result<TruncatedSeries, InvariantError> {
    let rank = w.matrix().rank();
    if rank < w.ell() {
        return Err(InvariantError::NotFullRank { rank, ell: w.ell() });
    }
    let dims = graded_dims(w, k)?.to_series();
    let factor = IntPoly::one_minus_power(2, w.ell() as u32).to_series(k);
    Ok(crate::exact::series_mul(&dims, &factor))
}

/// Numerator of the quotient series over Π_j (1 − t^{|r_j|})², where r_j are
/// the primitive ray generators and |r_j| their coordinate sum (the degree
/// of z^{r_j}·z̄^0 paired with its conjugate).
pub fn gorenstein_fit(w: &WeightMatrix, order: usize) -> Result<RationalFunctionProd, InvariantError> {
    let rays = cone_rays(w)?;
    let mut periods: BTreeMap<usize, u32> = BTreeMap::new();
    let mut total = 0;
    for r in &rays {
        let deg: usize = r.iter().map(|x| x.to_usize().expect("small ray")).sum();
        *periods.entry(deg).or_insert(0) += 2;
        total += 2 * deg;
    }
    let den: Vec<(usize, u32)> = periods.into_iter().collect();
    let s = quotient_hilbert_series(w, order)?;
    let num = rational_fit(&s, &den, total.min(order))?;
    Ok(RationalFunctionProd::new(num, &den))
}

/// Sparse polynomial with rational coefficients in y₁, y₂, …
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct YPoly {
    terms: BTreeMap<Vec<u32>, Rational>,
    vars: usize,
}

impl YPoly {
    pub fn zero(vars: usize) -> Self {
        YPoly {
            terms: BTreeMap::new(),
            vars,
        }
    }

    pub fn add_term(&mut self, coeff: Rational, exps: Vec<u32>) {
        assert_eq!(exps.len(), self.vars);
        let e = self.terms.entry(exps.clone()).or_insert_with(Rational::zero);
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for YPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // lexicographic with y1 > y2 > …
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(v, &p)| if p == 1 { format!("y{}", v + 1) } else { format!("y{}^{}", v + 1, p) })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", crate::exact::rat_to_string(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", crate::exact::rat_to_string(&abs), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct YTermJson {
    exponents: Vec<u32>,
    #[serde(with = "serde_rat")]
    coefficient: Rational,
}

#[derive(Serialize, Deserialize)]
struct YPolyJson {
    vars: usize,
    terms: Vec<YTermJson>,
    text: String,
}

impl Serialize for YPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        YPolyJson {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| YTermJson {
                    exponents: e.clone(),
                    coefficient: c.clone(),
                })
                .collect(),
            text: self.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for YPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = YPolyJson::deserialize(d)?;
        let mut p = YPoly::zero(j.vars);
        for t in j.terms {
            if t.exponents.len() != j.vars {
                return Err(serde::de::Error::custom("exponent length differs from vars"));
            }
            p.add_term(t.coefficient, t.exponents);
        }
        Ok(p)
    }
}

/// Constants of the isomorphism between a dimension-2 quotient and C/Z_N.
///
/// Columns are addressed through `perm`: column `perm[i]` plays the role of
/// z_{i+1} for i < ℓ and `perm[ℓ]` is the distinguished last column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dim2IsoData {
    pub perm: Vec<usize>,
    pub a: Vec<u64>,
    pub n_col: Vec<u64>,
    pub cal_a: u64,
    pub m: Vec<u64>,
    pub cal_m: u64,
    pub big_n: u64,
    #[serde(with = "serde_rat")]
    pub beta: Rational,
    #[serde(with = "serde_rat")]
    pub alpha_sq: Rational,
    #[serde(with = "serde_rat")]
    pub cal_b: Rational,
    pub kernel_generators: Vec<YPoly>,
    pub generator_degrees: Vec<u64>,
}

fn pow_rat(base: u64, e: u64) -> Rational {
    Rational::from_integer(num_traits::pow(BigInt::from(base), e as usize))
}

impl Dim2IsoData {
    pub fn ell(&self) -> usize {
        self.a.len()
    }

    /// Π m_i^{m_i}, with 0⁰ = 1.
    pub fn m_power_product(&self) -> Rational {
        self.m.iter().fold(Rational::one(), |p, &m| p * pow_rat(m, m))
    }

    /// Coefficient Π m_i^{m_i} / 𝒜^ℳ of y₃^N in the first kernel generator.
    pub fn cone_coefficient(&self) -> Rational {
        self.m_power_product() / pow_rat(self.cal_a, self.cal_m)
    }

    /// Images of y₁, y₂ (as α², since only their squares enter), y₃ and
    /// y_{3+i} under the arrow to R[x₁, x₂, x₃], as coefficients of x_i.
    pub fn arrow_scalings(&self) -> (Rational, Rational, Vec<Rational>) {
        let n = Rational::from_integer(BigInt::from(self.big_n));
        (
            self.alpha_sq.clone(),
            self.beta.clone(),
            self.m
                .iter()
                .map(|&m| Rational::from_integer(BigInt::from(m)) / &n)
                .collect(),
        )
    }

    /// α²N² = β^{N−1}ℬ, βN = 𝒜, and the arrow sends the kernel generators
    /// to α²(x₁² + x₂² − x₃^N) and 0.
    pub fn verify_arrow(&self) -> bool {
        let n = Rational::from_integer(BigInt::from(self.big_n));
        let beta_pow = |e: u64| num_traits::pow(self.beta.clone(), e as usize);
        let identity = &self.alpha_sq * &n * &n == beta_pow(self.big_n - 1) * &self.cal_b;
        let beta_ok = &self.beta * &n == Rational::from_integer(BigInt::from(self.cal_a));
        // y1² + y2² − c·y3^N ↦ α²x1² + α²x2² − c·β^N x3^N
        let cone = self.cone_coefficient() * beta_pow(self.big_n) == self.alpha_sq;
        // y_{3+i} − (m_i/𝒜) y3 ↦ (m_i/N − (m_i/𝒜)β) x3
        let (_, beta, images) = self.arrow_scalings();
        let shell = self.m.iter().zip(&images).all(|(&m, img)| {
            let c = Rational::new(BigInt::from(m), BigInt::from(self.cal_a));
            (img - c * &beta).is_zero()
        });
        identity && beta_ok && cone && shell
    }
}

/// Theorem-level data for n = ℓ + 1.
///
/// A literal [D | n] input is validated as given. Any other full-rank input
/// with a nonnegative kernel ray is brought to that form by rational row
/// operations after moving a column to the end; the invariant monomials only
/// see the kernel lattice, so the quotient is unchanged. The last column is
/// chosen to give the lexicographically smallest permutation.
pub fn dim2_data(w: &WeightMatrix) -> Result<Dim2IsoData, InvariantError> {
    let ell = w.ell();
    if w.n() != ell + 1 {
        return Err(InvariantError::NotDim2Form);
    }
    if let Some((a, n)) = literal_form(w) {
        for i in 0..ell {
            let g = a[i].gcd(&n[i]);
            if g != 1 {
                return Err(InvariantError::GcdViolation { index: i, gcd: g });
            }
        }
        return Ok(build_dim2((0..=ell).collect(), a, n));
    }
    if w.matrix().rank() != ell {
        return Err(InvariantError::NotDim2Form);
    }
    let kernel = kernel_lattice_basis(w.matrix());
    let mut v: Vec<BigInt> = kernel.row(0);
    if v.iter().any(|x| x.is_negative()) {
        v = v.iter().map(|x| -x).collect();
    }
    if v.iter().any(|x| x.is_negative()) {
        return Err(InvariantError::NotDim2Form);
    }
    let c = (0..w.n())
        .rev()
        .find(|&j| v[j].is_positive())
        .ok_or(InvariantError::NotDim2Form)?;
    let mut perm: Vec<usize> = (0..w.n()).filter(|&j| j != c).collect();
    perm.push(c);
    let last = v[c].to_u64().ok_or(InvariantError::NotDim2Form)?;
    let mut a = Vec::with_capacity(ell);
    let mut n = Vec::with_capacity(ell);
    for &p in &perm[..ell] {
        // row i reads −a_i x_p + n_i x_c = 0 with n_i / a_i = v_p / v_c
        let vp = v[p].to_u64().ok_or(InvariantError::NotDim2Form)?;
        let g = vp.gcd(&last);
        a.push(last / g);
        n.push(vp / g);
    }
    Ok(build_dim2(perm, a, n))
}

/// Recognizes diag(−a₁,…,−a_ℓ) followed by a nonnegative column.
fn literal_form(w: &WeightMatrix) -> Option<(Vec<u64>, Vec<u64>)> {
    let ell = w.ell();
    let mut a = Vec::with_capacity(ell);
    let mut n = Vec::with_capacity(ell);
    for i in 0..ell {
        for j in 0..ell {
            let x = w.entry(i, j);
            if i == j && x >= 0 || i != j && x != 0 {
                return None;
            }
        }
        let last = w.entry(i, ell);
        if last < 0 {
            return None;
        }
        a.push((-w.entry(i, i)) as u64);
        n.push(last as u64);
    }
    Some((a, n))
}

fn build_dim2(perm: Vec<usize>, a: Vec<u64>, n_col: Vec<u64>) -> Dim2IsoData {
    let ell = a.len();
    let cal_a = a.iter().fold(1u64, |l, &x| l.lcm(&x));
    let m: Vec<u64> = a.iter().zip(&n_col).map(|(&ai, &ni)| ni * cal_a / ai).collect();
    let cal_m: u64 = m.iter().sum();
    let big_n = cal_a + cal_m;
    let nr = Rational::from_integer(BigInt::from(big_n));
    let beta = Rational::new(BigInt::from(cal_a), BigInt::from(big_n));
    let mpp = m.iter().fold(Rational::one(), |p, &x| p * pow_rat(x, x));
    let alpha_sq = pow_rat(cal_a, cal_a) * &mpp / pow_rat(big_n, big_n);
    // ℬ = N Π m^m / 𝒜^{ℳ−1}, written as N·𝒜·Π m^m / 𝒜^ℳ to allow ℳ = 0
    let cal_b = &nr * Rational::from_integer(BigInt::from(cal_a)) * &mpp / pow_rat(cal_a, cal_m);

    let vars = ell + 3;
    let mut g1 = YPoly::zero(vars);
    let mut e = vec![0u32; vars];
    e[0] = 2;
    g1.add_term(Rational::one(), e.clone());
    e[0] = 0;
    e[1] = 2;
    g1.add_term(Rational::one(), e.clone());
    e[1] = 0;
    e[2] = big_n as u32;
    g1.add_term(-(&mpp / pow_rat(cal_a, cal_m)), e);
    let mut kernel_generators = vec![g1];
    for i in 0..ell {
        let mut g = YPoly::zero(vars);
        let mut e = vec![0u32; vars];
        e[3 + i] = 1;
        g.add_term(Rational::one(), e.clone());
        e[3 + i] = 0;
        e[2] = 1;
        g.add_term(-Rational::new(BigInt::from(m[i]), BigInt::from(cal_a)), e);
        kernel_generators.push(g);
    }
    let mut generator_degrees = vec![big_n, big_n];
    generator_degrees.extend(std::iter::repeat(2).take(ell + 1));
    Dim2IsoData {
        perm,
        a,
        n_col,
        cal_a,
        m,
        cal_m,
        big_n,
        beta,
        alpha_sq,
        cal_b,
        kernel_generators,
        generator_degrees,
    }
}

/// Real invariant series of C/Z_N: (1 − t^{2N}) / ((1 − t^N)²(1 − t²)).
pub fn cyclic_line_series(n: usize) -> RationalFunctionProd {
    RationalFunctionProd::new(IntPoly::one_minus_power(2 * n, 1), &[(2, 1), (n, 2)])
}

/// Whether the effective reduction of `w` has a one-dimensional quotient
/// (n − ℓ = 1 after removing dependent rows).
pub fn is_dim2(w: &WeightMatrix) -> bool {
    let r = effectiveness_report(w);
    r.reduced.n() == r.reduced.ell() + 1
}
