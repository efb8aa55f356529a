//! Molien series of finite subgroups of U₂ acting on C² ⊕ C̄², and the
//! closed forms for cyclic and binary dihedral groups.

use crate::duval::{FiniteSubgroup, U2Element};
use crate::exact::{IntPoly, RationalFunctionProd, TruncatedSeries};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_MOLIEN_ORDER: usize = 64;
pub const DRIFT_BOUND: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MolienError {
    #[error("series order {0} exceeds {MAX_MOLIEN_ORDER}")]
    OrderTooLarge(usize),
    #[error("coefficient {degree} is {value}, off an integer by {drift}")]
    IntegralityFailure { degree: usize, value: f64, drift: f64 },
    #[error("empty group")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MolienResult {
    pub order: usize,
    pub coefficients: Vec<u64>,
    pub group_order: usize,
    pub drift: f64,
}

impl MolienResult {
    pub fn series(&self) -> TruncatedSeries {
        TruncatedSeries::from_ints(&self.coefficients.iter().map(|&c| c as i64).collect::<Vec<_>>())
    }
}

/// Power series of 1/det(id − t·g) on C² ⊕ C̄² up to t^k.
///
/// With s = Re tr g and p = Re λ₁ · Re λ₂ the denominator is
/// (1 − 2Re λ₁ t + t²)(1 − 2Re λ₂ t + t²) = 1 − 2s t + (2 + 4p)t² − 2s t³ + t⁴,
/// and p = (2 Re det + |tr|² − 2)/4 needs no eigenvalues.
pub fn element_series(g: &U2Element, k: usize) -> Vec<f64> {
    let tr = g.trace();
    let det = g.det();
    let s = tr.re;
    let p = (2.0 * det.re + tr.norm_sqr() - 2.0) / 4.0;
    let c1 = 2.0 * s;
    let c2 = 2.0 + 4.0 * p;
    let mut a = vec![0.0; k + 1];
    for i in 0..=k {
        let at = |j: usize| if i >= j { a[i - j] } else { 0.0 };
        let v = if i == 0 { 1.0 } else { 0.0 } + c1 * at(1) - c2 * at(2) + c1 * at(3) - at(4);
        a[i] = v;
    }
    a
}

#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Molien coefficients through t^k by direct summation over the elements.
pub fn molien_series(g: &FiniteSubgroup, k: usize) -> Result<MolienResult, MolienError> {
    molien_of_elements(&g.elements, k)
}

pub fn molien_of_elements(elements: &[U2Element], k: usize) -> Result<MolienResult, MolienError> {
    if k > MAX_MOLIEN_ORDER {
        return Err(MolienError::OrderTooLarge(k));
    }
    if elements.is_empty() {
        return Err(MolienError::Empty);
    }
    // chunked so the per-chunk sums are independent of the thread count
    let partial: Vec<Vec<Kahan>> = elements
        .par_chunks(256)
        .map(|chunk| {
            let mut acc = vec![Kahan::default(); k + 1];
            for g in chunk {
                for (a, v) in acc.iter_mut().zip(element_series(g, k)) {
                    a.add(v);
                }
            }
            acc
        })
        .collect();
    let n = elements.len() as f64;
    let mut coefficients = Vec::with_capacity(k + 1);
    let mut drift: f64 = 0.0;
    for d in 0..=k {
        let mut total = Kahan::default();
        for p in &partial {
            total.add(p[d].sum);
            total.add(-p[d].c);
        }
        let value = total.sum / n;
        let rounded = value.round();
        let dd = (value - rounded).abs();
        if dd >= DRIFT_BOUND || rounded < 0.0 {
            return Err(MolienError::IntegralityFailure {
                degree: d,
                value,
                drift: dd,
            });
        }
        drift = drift.max(dd);
        coefficients.push(rounded as u64);
    }
    Ok(MolienResult {
        order: k,
        coefficients,
        group_order: elements.len(),
        drift,
    })
}

/// Dimension of the degree-d invariants.
pub fn dim_invariants(g: &FiniteSubgroup, d: usize) -> Result<u64, MolienError> {
    Ok(molien_series(g, d)?.coefficients[d])
}

/// (1 + t² + 2N t^N − t^{2N} − 2N t^{N+2} − t^{2N+2}) / ((1 − t²)³ (1 − t^N)²).
pub fn cyclic_closed_form(n: usize) -> RationalFunctionProd {
    assert!(n >= 1, "cyclic closed form needs N ≥ 1");
    let ni = n as i64;
    let num = IntPoly::from_terms(&[
        (0, 1),
        (2, 1),
        (n, 2 * ni),
        (2 * n, -1),
        (n + 2, -2 * ni),
        (2 * n + 2, -1),
    ]);
    RationalFunctionProd::new(num, &[(2, 3), (n, 2)])
}

/// Q(t)/((1 − t²)(1 − t⁴)²(1 − t^{2N})²) with
/// Q = 1 + 3t⁴ + (2N−1)t^{2N} + (2N+3)t^{2N+2} − (2N+3)t^{2N+4} − (2N−1)t^{2N+6} − 3t^{4N+2} − t^{4N+6}.
pub fn dihedral_closed_form(n: usize) -> RationalFunctionProd {
    assert!(n >= 1, "dihedral closed form needs N ≥ 1");
    let ni = n as i64;
    let num = IntPoly::from_terms(&[
        (0, 1),
        (4, 3),
        (2 * n, 2 * ni - 1),
        (2 * n + 2, 2 * ni + 3),
        (2 * n + 4, -(2 * ni + 3)),
        (2 * n + 6, -(2 * ni - 1)),
        (4 * n + 2, -3),
        (4 * n + 6, -1),
    ]);
    RationalFunctionProd::new(num, &[(2, 1), (4, 2), (2 * n, 2)])
}

/// Integer coefficients of a rational function through t^k.
pub fn expand_to_u64(rf: &RationalFunctionProd, k: usize) -> Vec<u64> {
    crate::exact::series_expand(rf, k)
        .coefficients()
        .iter()
        .map(|c| {
            assert!(c.is_integer(), "closed form expands to integers");
            let v: BigInt = c.to_integer();
            v.to_u64().expect("non-negative")
        })
        .collect()
}
