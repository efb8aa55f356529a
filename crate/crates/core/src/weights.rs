//! Weight-matrix geometry: effectiveness, the polytope P_A = ker A ∩ simplex,
//! the three equivalent simplicial criteria, cone rays, the Cox group and the
//! moment map.
//!
//! Column indices are 0-based throughout.

use crate::exact::{serde_rat_matrix, serde_rat_vec, Rational};
use crate::lattice::{
    integer_row_reduce, kernel_lattice_basis, minors_gcd, primitive_from_rational,
    rational_rank, rational_rref, smith_normal_form, solve_unique, subsets, to_rational_rows,
    IntMatrix, LatticeError,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Largest column count accepted by the exhaustive vertex enumeration.
pub const MAX_VERTEX_COLUMNS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("weight matrix must have at least one row and one column")]
    Empty,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("cone is not simplicial")]
    NotSimplicial,
    #[error("polytope has dimension {dimension}, expected {expected}")]
    DegeneratePolytope { dimension: i64, expected: i64 },
    #[error("torus action is not effective")]
    NotEffective,
    #[error("vertex enumeration is limited to {MAX_VERTEX_COLUMNS} columns, got {0}")]
    TooManyColumns(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightMatrix {
    ell: usize,
    n: usize,
    #[serde(rename = "A")]
    a: IntMatrix,
}

impl WeightMatrix {
    pub fn new(a: IntMatrix) -> Result<Self, WeightError> {
        if a.rows() == 0 || a.cols() == 0 {
            return Err(WeightError::Empty);
        }
        Ok(WeightMatrix {
            ell: a.rows(),
            n: a.cols(),
            a,
        })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, WeightError> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    /// Single-row convenience constructor.
    pub fn row(weights: &[i64]) -> Self {
        Self::from_rows(&[weights.to_vec()]).expect("nonempty row")
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn entry(&self, a: usize, j: usize) -> i64 {
        self.a.get(a, j).to_i64().expect("weights fit in i64")
    }

    /// Column j as a small-integer vector.
    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.ell).map(|a| self.entry(a, j)).collect()
    }

    pub fn rows_i64(&self) -> Vec<Vec<i64>> {
        self.a.to_i64_rows()
    }

    pub fn permute_columns(&self, perm: &[usize]) -> WeightMatrix {
        WeightMatrix::new(self.a.select_columns(perm)).expect("same shape")
    }
}

impl fmt::Debug for WeightMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.a)
    }
}

impl fmt::Display for WeightMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectivenessReport {
    pub rank: usize,
    pub full_rank: bool,
    #[serde(with = "crate::exact::serde_bigint_scalar")]
    pub minors_gcd: BigInt,
    pub effective: bool,
    pub reduced: WeightMatrix,
}

/// Rank, minor gcd and an effective replacement with the same zero fiber.
///
/// The replacement is the saturation of the row lattice (rows spanning
/// (Q-row space) ∩ Z^n). The torus-invariant monomials and the shell
/// depend only on that row space, so nothing downstream changes.
pub fn effectiveness_report(w: &WeightMatrix) -> EffectivenessReport {
    let a = w.matrix();
    let rank = a.rank();
    let full_rank = rank == w.ell;
    let gcd = if w.ell <= w.n {
        minors_gcd(a, w.ell).expect("valid minor size")
    } else {
        BigInt::zero()
    };
    let effective = full_rank && gcd.is_one();
    let reduced = if effective {
        w.clone()
    } else if rank == 0 {
        // no torus directions act; keep a single zero row so shapes stay valid
        WeightMatrix::new(IntMatrix::zeros(1, w.n)).expect("nonempty")
    } else {
        reduce_row_space(w, rank)
    };
    EffectivenessReport {
        rank,
        full_rank,
        minors_gcd: gcd,
        effective,
        reduced,
    }
}

fn reduce_row_space(w: &WeightMatrix, rank: usize) -> WeightMatrix {
    // Prefer the first independent rows of the input when they already span
    // the saturated lattice, so [[-1,1,1],[-2,2,2]] reduces to [-1,1,1].
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..w.ell {
        let mut trial = chosen.clone();
        trial.push(i);
        if w.a.select_rows(&trial).rank() == trial.len() {
            chosen = trial;
        }
    }
    let sub = w.a.select_rows(&chosen);
    if minors_gcd(&sub, rank).map(|g| g.is_one()).unwrap_or(false) {
        return WeightMatrix::new(sub).expect("nonempty");
    }
    let kernel = kernel_lattice_basis(&w.a);
    let saturated = if kernel.rows() == 0 {
        IntMatrix::identity(w.n)
    } else {
        kernel_lattice_basis(&kernel)
    };
    let (_, h) = integer_row_reduce(&saturated);
    let keep: Vec<usize> = (0..h.rows()).filter(|&i| !h.is_zero_row(i)).collect();
    WeightMatrix::new(h.select_rows(&keep)).expect("nonempty")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeDescription {
    #[serde(with = "serde_rat_matrix")]
    pub vertices: Vec<Vec<Rational>>,
    pub dimension: i64,
    pub support: Vec<usize>,
}

impl PolytopeDescription {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Vertices of {Ax = 0, Σx = 1, x ≥ 0} as basic feasible solutions: a
/// feasible point is a vertex exactly when its support columns of [A; 1] are
/// linearly independent, so every independent column subset is tried.
pub fn polytope(w: &WeightMatrix) -> Result<PolytopeDescription, WeightError> {
    if w.n > MAX_VERTEX_COLUMNS {
        return Err(WeightError::TooManyColumns(w.n));
    }
    let mut m = to_rational_rows(w.matrix());
    m.push(vec![Rational::one(); w.n]);
    let mut b = vec![Rational::zero(); w.ell];
    b.push(Rational::one());
    let max_size = rational_rank(&m);

    let mut vertices: Vec<Vec<Rational>> = Vec::new();
    for mask in 1u32..(1 << w.n) {
        let cols: Vec<usize> = (0..w.n).filter(|&j| mask >> j & 1 == 1).collect();
        if cols.len() > max_size {
            continue;
        }
        let sub: Vec<Vec<Rational>> = m
            .iter()
            .map(|row| cols.iter().map(|&j| row[j].clone()).collect())
            .collect();
        let Some(x) = solve_unique(&sub, &b) else { continue };
        // strictly positive on the subset, otherwise a smaller subset finds it
        if x.iter().any(|v| !v.is_positive()) {
            continue;
        }
        let mut full = vec![Rational::zero(); w.n];
        for (k, &j) in cols.iter().enumerate() {
            full[j] = x[k].clone();
        }
        vertices.push(full);
    }
    vertices.sort_by(|p, q| q.cmp(p));
    vertices.dedup();

    let dimension = if vertices.is_empty() {
        -1
    } else {
        let diffs: Vec<Vec<Rational>> = vertices[1..]
            .iter()
            .map(|v| v.iter().zip(&vertices[0]).map(|(x, y)| x - y).collect())
            .collect();
        rational_rank(&diffs) as i64
    };
    let support = (0..w.n)
        .filter(|&j| vertices.iter().any(|v| !v[j].is_zero()))
        .collect();
    Ok(PolytopeDescription {
        vertices,
        dimension,
        support,
    })
}

/// [D | C | 0] layout of the support submatrix A′ after a column ordering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardForm {
    /// Column order: pivots, separated columns, zero columns of A′, then the
    /// columns outside the support.
    pub perm: Vec<usize>,
    /// Rational row transform U with U·A′ equal to the reduced rows followed
    /// by zero rows. It is unimodular only when the reduction needs no
    /// rescaling; in general it clears denominators as the elimination does.
    #[serde(with = "serde_rat_matrix", rename = "U")]
    pub transform: Vec<Vec<Rational>>,
    /// Diagonal of D (strictly negative).
    #[serde(rename = "D", with = "crate::exact::serde_bigint_vec")]
    pub d: Vec<BigInt>,
    /// r × q block C (nonnegative, no zero rows).
    #[serde(rename = "C", with = "serde_bigint_matrix")]
    pub c: Vec<Vec<BigInt>>,
    /// Number of zero columns of A′ inside the support.
    pub zero_columns: usize,
}

pub(crate) mod serde_bigint_matrix {
    use crate::exact::serde_bigint_vec::{from_value, to_value};
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::Value;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let vals: Vec<Vec<Value>> = v.iter().map(|r| r.iter().map(to_value).collect()).collect();
        vals.serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let vals = Vec::<Vec<Value>>::deserialize(d)?;
        vals.iter()
            .map(|r| {
                r.iter()
                    .map(|v| from_value(v).ok_or_else(|| D::Error::custom("expected an integer")))
                    .collect()
            })
            .collect()
    }
}

/// A facet normal μ with its separated index j (⟨e_j, μ⟩ < 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normal {
    pub index: usize,
    #[serde(with = "crate::exact::serde_bigint_vec")]
    pub mu: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialReport {
    pub simplicial: bool,
    pub vertex_count: usize,
    pub polytope: PolytopeDescription,
    pub standard_form: Option<StandardForm>,
    pub normals: Option<Vec<Normal>>,
    /// Vertex count, standard-form existence and normal sign pattern agree.
    pub criteria_agree: bool,
}

struct SupportData {
    /// nonzero columns of A inside the support
    nonzero: Vec<usize>,
    /// zero columns of A inside the support
    zero: Vec<usize>,
    /// columns outside the support
    outside: Vec<usize>,
    /// rational row basis of A restricted to `nonzero`, indexed by position
    basis: Vec<Vec<Rational>>,
    /// indices of the original rows forming `basis`
    basis_rows: Vec<usize>,
}

fn support_data(w: &WeightMatrix, poly: &PolytopeDescription) -> SupportData {
    let a = to_rational_rows(w.matrix());
    let in_support = |j: usize| poly.support.contains(&j);
    let nonzero: Vec<usize> = poly
        .support
        .iter()
        .copied()
        .filter(|&j| (0..w.ell).any(|r| !a[r][j].is_zero()))
        .collect();
    let zero: Vec<usize> = poly
        .support
        .iter()
        .copied()
        .filter(|j| !nonzero.contains(j))
        .collect();
    let outside: Vec<usize> = (0..w.n).filter(|&j| !in_support(j)).collect();
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    let mut basis_rows = Vec::new();
    for (r, row) in a.iter().enumerate() {
        let restricted: Vec<Rational> = nonzero.iter().map(|&j| row[j].clone()).collect();
        let mut trial = basis.clone();
        trial.push(restricted.clone());
        if rational_rank(&trial) == trial.len() {
            basis = trial;
            basis_rows.push(r);
        }
    }
    SupportData {
        nonzero,
        zero,
        outside,
        basis,
        basis_rows,
    }
}

/// For a pivot set (positions into `nonzero`), the reduced rows with
/// negative diagonal, scaled to primitive integers. `None` when the pivot
/// block is singular or some entry of C comes out negative.
fn reduced_rows(sd: &SupportData, pivots: &[usize]) -> Option<(Vec<Vec<BigInt>>, Vec<Vec<Rational>>)> {
    let r = sd.basis.len();
    let width = sd.nonzero.len();
    // M = B_P^{-1} B computed by rref of [B_P | B]
    let mut aug: Vec<Vec<Rational>> = sd
        .basis
        .iter()
        .map(|row| {
            let mut v: Vec<Rational> = pivots.iter().map(|&p| row[p].clone()).collect();
            v.extend(row.iter().cloned());
            v
        })
        .collect();
    // append an identity to recover B_P^{-1}
    for (i, row) in aug.iter_mut().enumerate() {
        for k in 0..r {
            row.push(if i == k { Rational::one() } else { Rational::zero() });
        }
    }
    let piv = rational_rref(&mut aug);
    if piv.len() < r || piv[..r] != (0..r).collect::<Vec<_>>()[..] {
        return None;
    }
    let mut rows = Vec::with_capacity(r);
    let mut scales = Vec::with_capacity(r);
    for (i, row) in aug.iter().enumerate() {
        let m: Vec<Rational> = row[r..r + width].to_vec();
        // row i reads x_{p_i} + Σ m_j x_j = 0; negate and clear denominators
        let l = m.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ints: Vec<BigInt> = m
            .iter()
            .map(|x| -(x * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let ints: Vec<BigInt> = ints.iter().map(|x| x / &g).collect();
        debug_assert!(ints[pivots[i]].is_negative());
        if ints
            .iter()
            .enumerate()
            .any(|(j, x)| j != pivots[i] && x.is_negative())
        {
            return None;
        }
        let factor = Rational::new(-l, g);
        let inv_row: Vec<Rational> = row[r + width..].iter().map(|x| x * &factor).collect();
        rows.push(ints);
        scales.push(inv_row);
    }
    Some((rows, scales))
}

/// Theorem-style simplicial test with all three criteria computed.
pub fn simplicial_check(w: &WeightMatrix) -> Result<SimplicialReport, WeightError> {
    let poly = polytope(w)?;
    let vertex_count = poly.vertices.len();
    if poly.is_empty() {
        return Ok(SimplicialReport {
            simplicial: true,
            vertex_count,
            polytope: poly,
            standard_form: None,
            normals: None,
            criteria_agree: true,
        });
    }
    let by_count = vertex_count as i64 == poly.dimension + 1;
    let sd = support_data(w, &poly);
    let r = sd.basis.len();
    let width = sd.nonzero.len();

    // criterion (2) by brute force over pivot sets, lexicographic order
    let brute = subsets(width, r)
        .into_iter()
        .find(|p| reduced_rows(&sd, p).is_some());

    // constructive route: each vertex of the nonzero part gets a coordinate
    // where it alone is nonzero; those coordinates are the non-pivots
    let constructive = if by_count {
        constructive_pivots(&sd, &poly)
    } else {
        None
    };

    let mut standard_form = None;
    let mut normals = None;
    let mut normals_ok = true;
    if let Some(piv) = constructive.clone() {
        if let Some((rows, scales)) = reduced_rows(&sd, &piv) {
            let (sf, ns) = assemble_form(w, &sd, &piv, &rows, &scales);
            normals_ok = check_normals(w, &poly, &ns);
            standard_form = Some(sf);
            normals = Some(ns);
        } else {
            normals_ok = false;
        }
    }
    let criteria_agree = by_count == brute.is_some()
        && by_count == constructive.is_some()
        && normals_ok
        && (!by_count || normals.is_some());
    debug_assert!(criteria_agree, "simplicial criteria disagree on {w}");
    Ok(SimplicialReport {
        simplicial: by_count,
        vertex_count,
        polytope: poly,
        standard_form,
        normals,
        criteria_agree,
    })
}

fn constructive_pivots(sd: &SupportData, poly: &PolytopeDescription) -> Option<Vec<usize>> {
    let verts: Vec<&Vec<Rational>> = poly
        .vertices
        .iter()
        .filter(|v| sd.nonzero.iter().any(|&j| !v[j].is_zero()))
        .collect();
    let width = sd.nonzero.len();
    if verts.len() + sd.basis.len() != width {
        return None;
    }
    // candidate separated coordinates (positions into `nonzero`) per vertex
    let candidates: Vec<Vec<usize>> = verts
        .iter()
        .enumerate()
        .map(|(i, v)| {
            (0..width)
                .filter(|&p| {
                    let j = sd.nonzero[p];
                    !v[j].is_zero()
                        && verts
                            .iter()
                            .enumerate()
                            .all(|(k, u)| k == i || u[j].is_zero())
                })
                .collect()
        })
        .collect();
    let mut best: Option<Vec<usize>> = None;
    let mut chosen = Vec::new();
    fn rec(
        i: usize,
        cands: &[Vec<usize>],
        width: usize,
        chosen: &mut Vec<usize>,
        best: &mut Option<Vec<usize>>,
    ) {
        if i == cands.len() {
            let piv: Vec<usize> = (0..width).filter(|p| !chosen.contains(p)).collect();
            if best.as_ref().map_or(true, |b| piv < *b) {
                *best = Some(piv);
            }
            return;
        }
        for &c in &cands[i] {
            if !chosen.contains(&c) {
                chosen.push(c);
                rec(i + 1, cands, width, chosen, best);
                chosen.pop();
            }
        }
    }
    rec(0, &candidates, width, &mut chosen, &mut best);
    best
}

fn assemble_form(
    w: &WeightMatrix,
    sd: &SupportData,
    piv: &[usize],
    rows: &[Vec<BigInt>],
    scales: &[Vec<Rational>],
) -> (StandardForm, Vec<Normal>) {
    let width = sd.nonzero.len();
    let sep: Vec<usize> = (0..width).filter(|p| !piv.contains(p)).collect();
    let mut perm: Vec<usize> = piv.iter().map(|&p| sd.nonzero[p]).collect();
    perm.extend(sep.iter().map(|&p| sd.nonzero[p]));
    perm.extend(&sd.zero);
    perm.extend(&sd.outside);

    let d: Vec<BigInt> = rows.iter().zip(piv).map(|(row, &p)| row[p].clone()).collect();
    let c: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| sep.iter().map(|&p| row[p].clone()).collect())
        .collect();

    // U: reduced rows from the basis rows, then one zero row per dependent row
    let a = to_rational_rows(w.matrix());
    let mut transform: Vec<Vec<Rational>> = Vec::with_capacity(w.ell);
    for s in scales {
        let mut u = vec![Rational::zero(); w.ell];
        for (k, &br) in sd.basis_rows.iter().enumerate() {
            u[br] = s[k].clone();
        }
        transform.push(u);
    }
    for i in (0..w.ell).filter(|i| !sd.basis_rows.contains(i)) {
        // row_i restricted to the support = Σ c_k basis_k
        let restricted: Vec<Rational> = sd.nonzero.iter().map(|&j| a[i][j].clone()).collect();
        let sys: Vec<Vec<Rational>> = (0..width)
            .map(|p| sd.basis.iter().map(|b| b[p].clone()).collect())
            .collect();
        let coeffs = solve_unique(&sys, &restricted).expect("dependent row");
        let mut u = vec![Rational::zero(); w.ell];
        u[i] = Rational::one();
        for (k, &br) in sd.basis_rows.iter().enumerate() {
            u[br] -= &coeffs[k];
        }
        transform.push(u);
    }

    let normals = rows
        .iter()
        .zip(piv)
        .map(|(row, &p)| {
            let mut mu = vec![BigInt::zero(); w.n];
            for (q, &j) in sd.nonzero.iter().enumerate() {
                mu[j] = row[q].clone();
            }
            Normal {
                index: sd.nonzero[p],
                mu,
            }
        })
        .collect();
    (
        StandardForm {
            perm,
            transform,
            d,
            c,
            zero_columns: sd.zero.len(),
        },
        normals,
    )
}

/// Sign pattern of the normals, and that they cut out exactly ker A on the
/// support (each vertex is annihilated, and the rank matches).
fn check_normals(w: &WeightMatrix, poly: &PolytopeDescription, normals: &[Normal]) -> bool {
    let pivots: Vec<usize> = normals.iter().map(|n| n.index).collect();
    for nm in normals {
        for &j in &poly.support {
            let x = &nm.mu[j];
            let ok = if j == nm.index {
                x.is_negative()
            } else if pivots.contains(&j) {
                x.is_zero()
            } else {
                !x.is_negative()
            };
            if !ok {
                return false;
            }
        }
        let annihilates = poly.vertices.iter().all(|v| {
            v.iter()
                .zip(&nm.mu)
                .fold(Rational::zero(), |s, (x, m)| s + x * Rational::from_integer(m.clone()))
                .is_zero()
        });
        if !annihilates {
            return false;
        }
    }
    let mu_rows: Vec<Vec<Rational>> = normals
        .iter()
        .map(|n| n.mu.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let a = to_rational_rows(w.matrix());
    let support_rows: Vec<Vec<Rational>> = a
        .iter()
        .map(|row| {
            (0..w.n)
                .map(|j| {
                    if poly.support.contains(&j) {
                        row[j].clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let r = rational_rank(&support_rows);
    let mut both = support_rows;
    both.extend(mu_rows.iter().cloned());
    rational_rank(&mu_rows) == r && rational_rank(&both) == r
}

/// Primitive generators of the extreme rays of ker A ∩ R^n_{≥0}, sorted.
pub fn cone_rays(w: &WeightMatrix) -> Result<Vec<Vec<BigInt>>, WeightError> {
    let poly = polytope(w)?;
    let mut rays: Vec<Vec<BigInt>> = poly
        .vertices
        .iter()
        .map(|v| primitive_from_rational(v))
        .collect::<Result<_, _>>()?;
    rays.sort_by(|p, q| q.cmp(p));
    Ok(rays)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxGroupData {
    #[serde(with = "crate::exact::serde_bigint_vec")]
    pub invariant_factors: Vec<BigInt>,
    #[serde(with = "crate::exact::serde_bigint_scalar")]
    pub order: BigInt,
}

impl CoxGroupData {
    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

/// The finite group Γ from the coordinates of the ray generators in a
/// kernel lattice basis.
pub fn cox_group(w: &WeightMatrix) -> Result<CoxGroupData, WeightError> {
    let eff = effectiveness_report(w);
    if !eff.effective {
        return Err(WeightError::NotEffective);
    }
    let report = simplicial_check(w)?;
    if !report.simplicial {
        return Err(WeightError::NotSimplicial);
    }
    let expected = w.n as i64 - w.ell as i64 - 1;
    if report.polytope.dimension != expected {
        return Err(WeightError::DegeneratePolytope {
            dimension: report.polytope.dimension,
            expected,
        });
    }
    let rays = cone_rays(w)?;
    let basis = kernel_lattice_basis(w.matrix());
    let k = basis.rows();
    // solve basisᵀ c = ray for each ray
    let bt: Vec<Vec<Rational>> = (0..w.n)
        .map(|j| (0..k).map(|i| Rational::from_integer(basis.get(i, j).clone())).collect())
        .collect();
    let mut coords: Vec<Vec<BigInt>> = Vec::with_capacity(rays.len());
    for ray in &rays {
        let rhs: Vec<Rational> = ray.iter().map(|x| Rational::from_integer(x.clone())).collect();
        let c = solve_unique(&bt, &rhs).expect("ray lies in the kernel lattice span");
        coords.push(
            c.iter()
                .map(|x| {
                    assert!(x.is_integer(), "kernel basis must be saturated");
                    x.to_integer()
                })
                .collect(),
        );
    }
    let v = IntMatrix::from_big_rows(&coords, k);
    let snf = smith_normal_form(&v);
    let diag = snf.diagonal();
    let invariant_factors: Vec<BigInt> = diag.iter().filter(|d| **d > BigInt::one()).cloned().collect();
    let order = diag.iter().fold(BigInt::one(), |p, d| p * d);
    debug_assert_eq!(order.abs(), v.det().abs());
    Ok(CoxGroupData {
        invariant_factors,
        order,
    })
}

/// Moment-map coefficients: component a attaches A_{aj}/2 to z_j z̄_j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentMapData {
    pub components: Vec<MomentComponent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MomentComponent {
    #[serde(with = "serde_rat_vec")]
    pub coefficients: Vec<Rational>,
}

pub fn moment_map(w: &WeightMatrix) -> MomentMapData {
    MomentMapData {
        components: (0..w.ell)
            .map(|a| MomentComponent {
                coefficients: (0..w.n)
                    .map(|j| Rational::new(w.matrix().get(a, j).clone(), BigInt::from(2)))
                    .collect(),
            })
            .collect(),
    }
}
