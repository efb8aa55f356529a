//! Integer matrix algebra: Hermite and Smith normal forms, minor gcds,
//! saturated kernel bases, primitive vectors, and a little exact rational
//! elimination for the callers that need to solve systems.

use crate::exact::{serde_bigint_vec, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("minor size {k} exceeds the {rows}x{cols} matrix or is zero")]
    Dimension { k: usize, rows: usize, cols: usize },
    #[error("the zero vector has no primitive form")]
    ZeroVector,
    #[error("rows of unequal length")]
    Ragged,
}

/// Dense row-major integer matrix. Zero rows or columns are allowed, which
/// keeps kernel bases of full-rank maps representable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        IntMatrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LatticeError::Ragged);
        }
        Ok(Self::new(
            rows.len(),
            cols,
            rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        ))
    }

    pub fn from_big_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        Self::new(rows.len(), cols, rows.iter().flatten().cloned().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// Entries narrowed to i64; panics if one does not fit.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.row_vecs()
            .into_iter()
            .map(|r| r.iter().map(|x| x.to_i64().expect("entry fits in i64")).collect())
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let vecs: Vec<Vec<BigInt>> = rows.iter().map(|&i| self.row(i)).collect();
        IntMatrix::from_big_rows(&vecs, self.cols)
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        (0..self.cols).all(|j| self.get(i, j).is_zero())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = self.row_vecs();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    pub fn rank(&self) -> usize {
        let (_, r) = integer_row_reduce(self);
        (0..r.rows).filter(|&i| !r.is_zero_row(i)).count()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(dst, j) + f * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, dst) + f * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .row_vecs()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<serde_json::Value>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries = self
            .row_vecs()
            .iter()
            .map(|r| serde_json::Value::Array(r.iter().map(serde_bigint_vec::to_value).collect()))
            .collect();
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        if j.entries.len() != j.rows {
            return Err(D::Error::custom("row count mismatch"));
        }
        let mut flat = Vec::with_capacity(j.rows * j.cols);
        for row in &j.entries {
            let arr = row
                .as_array()
                .ok_or_else(|| D::Error::custom("rows must be arrays"))?;
            if arr.len() != j.cols {
                return Err(D::Error::custom("column count mismatch"));
            }
            for v in arr {
                flat.push(
                    serde_bigint_vec::from_value(v)
                        .ok_or_else(|| D::Error::custom("entries must be integers"))?,
                );
            }
        }
        Ok(IntMatrix::new(j.rows, j.cols, flat))
    }
}

/// Smith normal form U·A·V = S.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    #[serde(rename = "U")]
    pub u: IntMatrix,
    #[serde(rename = "S")]
    pub s: IntMatrix,
    #[serde(rename = "V")]
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries of S (the invariant factors, zeros included).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s.get(i, i).clone())
            .collect()
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All k-element subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    combinations(n, k)
}

/// gcd of all k×k minors; 0 when they all vanish.
pub fn minors_gcd(a: &IntMatrix, k: usize) -> Result<BigInt, LatticeError> {
    if k == 0 || k > a.rows.min(a.cols) {
        return Err(LatticeError::Dimension {
            k,
            rows: a.rows,
            cols: a.cols,
        });
    }
    let mut g = BigInt::zero();
    for rs in combinations(a.rows, k) {
        let sub = a.select_rows(&rs);
        for cs in combinations(a.cols, k) {
            g = g.gcd(&sub.select_columns(&cs).det());
            if g.is_one() {
                return Ok(g);
            }
        }
    }
    Ok(g)
}

/// Row-style Hermite normal form: R = U·A with U unimodular, pivots positive,
/// entries above each pivot reduced into [0, pivot), zero rows last.
pub fn integer_row_reduce(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut r = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut pivot_row = 0;
    for col in 0..a.cols {
        if pivot_row == a.rows {
            break;
        }
        loop {
            // smallest nonzero magnitude at or below the pivot row
            let best = (pivot_row..a.rows)
                .filter(|&i| !r.get(i, col).is_zero())
                .min_by_key(|&i| r.get(i, col).abs());
            let Some(best) = best else { break };
            r.swap_rows(pivot_row, best);
            u.swap_rows(pivot_row, best);
            let mut clean = true;
            for i in pivot_row + 1..a.rows {
                if r.get(i, col).is_zero() {
                    continue;
                }
                let q = -r.get(i, col).div_floor(r.get(pivot_row, col));
                r.add_row(i, pivot_row, &q);
                u.add_row(i, pivot_row, &q);
                if !r.get(i, col).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r.get(pivot_row, col).is_zero() {
            continue;
        }
        if r.get(pivot_row, col).is_negative() {
            r.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let p = r.get(pivot_row, col).clone();
        for i in 0..pivot_row {
            let q = -r.get(i, col).div_floor(&p);
            r.add_row(i, pivot_row, &q);
            u.add_row(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (u, r)
}

/// Basis (as rows) of the saturated lattice {v ∈ Z^n : A v = 0}, itself put
/// in Hermite form so the output is canonical.
pub fn kernel_lattice_basis(a: &IntMatrix) -> IntMatrix {
    let (u, h) = integer_row_reduce(&a.transpose());
    let kernel_rows: Vec<Vec<BigInt>> = (0..h.rows)
        .filter(|&i| h.is_zero_row(i))
        .map(|i| u.row(i))
        .collect();
    if kernel_rows.is_empty() {
        return IntMatrix::zeros(0, a.cols);
    }
    let basis = IntMatrix::from_big_rows(&kernel_rows, a.cols);
    integer_row_reduce(&basis).1
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut v = IntMatrix::identity(a.cols);
    let n = a.rows.min(a.cols);
    for t in 0..n {
        loop {
            // move the smallest nonzero entry of the trailing block to (t, t)
            let mut best: Option<(usize, usize)> = None;
            for i in t..a.rows {
                for j in t..a.cols {
                    let x = s.get(i, j);
                    if !x.is_zero()
                        && best.map_or(true, |(bi, bj)| x.abs() < s.get(bi, bj).abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish_smith(u, s, v);
            };
            s.swap_rows(t, bi);
            u.swap_rows(t, bi);
            s.swap_cols(t, bj);
            v.swap_cols(t, bj);
            let p = s.get(t, t).clone();
            let mut done = true;
            for i in t + 1..a.rows {
                let q = -s.get(i, t).div_floor(&p);
                s.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !s.get(i, t).is_zero() {
                    done = false;
                }
            }
            for j in t + 1..a.cols {
                let q = -s.get(t, j).div_floor(&p);
                s.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !s.get(t, j).is_zero() {
                    done = false;
                }
            }
            if !done {
                continue;
            }
            // the pivot must divide the rest of the block
            let offender = (t + 1..a.rows)
                .flat_map(|i| (t + 1..a.cols).map(move |j| (i, j)))
                .find(|&(i, j)| !s.get(i, j).is_multiple_of(&p));
            match offender {
                Some((i, _)) => {
                    s.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    finish_smith(u, s, v)
}

fn finish_smith(u: IntMatrix, s: IntMatrix, v: IntMatrix) -> SmithForm {
    let mut s = s;
    let mut u = u;
    for t in 0..s.rows.min(s.cols) {
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, s, v }
}

/// Divide by the gcd of the entries and make the first nonzero entry positive.
pub fn primitive_vector(v: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    let first_negative = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let g = if first_negative { -g } else { g };
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Clear denominators of a rational vector and take its primitive form.
pub fn primitive_from_rational(v: &[Rational]) -> Result<Vec<BigInt>, LatticeError> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    primitive_vector(&ints)
}

/// Reduced row echelon form over Q; returns the pivot columns.
pub fn rational_rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rational_rank(m: &[Vec<Rational>]) -> usize {
    let mut w = m.to_vec();
    rational_rref(&mut w).len()
}

/// Unique solution of M x = b over Q, `None` if inconsistent or not unique.
pub fn solve_unique(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rational_rref(&mut aug);
    if pivots.contains(&cols) || pivots.len() != cols {
        return None;
    }
    Some((0..cols).map(|i| aug[i][cols].clone()).collect())
}

pub fn to_rational_rows(a: &IntMatrix) -> Vec<Vec<Rational>> {
    a.row_vecs()
        .into_iter()
        .map(|r| r.into_iter().map(Rational::from_integer).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(m(&[vec![2, 1], vec![7, 4]]).det(), BigInt::from(1));
        assert_eq!(
            m(&[vec![0, 2, 1], vec![1, 0, 0], vec![3, 1, 5]]).det(),
            BigInt::from(-9)
        );
        assert_eq!(m(&[vec![1, 2], vec![2, 4]]).det(), BigInt::zero());
    }

    #[test]
    fn solve_simple_system() {
        let a = to_rational_rows(&m(&[vec![1, 1], vec![1, -1]]));
        let x = solve_unique(&a, &[Rational::from_integer(3.into()), Rational::from_integer(1.into())]).unwrap();
        assert_eq!(x, vec![Rational::from_integer(2.into()), Rational::from_integer(1.into())]);
        let sing = to_rational_rows(&m(&[vec![1, 1], vec![2, 2]]));
        assert!(solve_unique(&sing, &[Rational::zero(), Rational::one()]).is_none());
    }
}
