//! Finite subgroups of U₂ after du Val: explicit matrix groups, an exact
//! lattice form for the diagonal (abelian) ones, and a bounded enumeration
//! of conjugacy classes.

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fmt;
use thiserror::Error;

/// Distance under which two matrices count as equal.
pub const ELEMENT_TOLERANCE: f64 = 1e-9;
/// Largest group a closure may produce.
pub const CLOSURE_BUDGET: usize = 10_000;
/// Largest order cap accepted by [`enumerate_duval`].
pub const MAX_ORDER_CAP: u64 = 2000;

const QUANT: f64 = 1e6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DuvalError {
    #[error("closure exceeded {CLOSURE_BUDGET} elements")]
    ClosureBudget,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("the quotient isomorphism of {0} is not determined: alternatives give different groups")]
    PhiAmbiguous(String),
    #[error("order cap {0} exceeds the limit of {MAX_ORDER_CAP}")]
    Budget(u64),
    #[error("{0} generated a group of order {1}, expected {2}")]
    OrderMismatch(String, usize, usize),
}

/// 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct U2Element {
    pub m: [Complex64; 4],
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// e^{2πi·k/n}.
pub fn root_of_unity(k: i64, n: u64) -> Complex64 {
    let r = k.rem_euclid(n as i64) as f64 / n as f64;
    Complex64::from_polar(1.0, 2.0 * PI * r)
}

impl U2Element {
    pub fn new(m: [Complex64; 4]) -> Self {
        U2Element { m }
    }

    pub fn identity() -> Self {
        Self::diag(c(1.0, 0.0), c(1.0, 0.0))
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        U2Element {
            m: [a, c(0.0, 0.0), c(0.0, 0.0), b],
        }
    }

    pub fn scalar(z: Complex64) -> Self {
        Self::diag(z, z)
    }

    /// w + xi + yj + zk as [[w + xi, y + zi], [−y + zi, w − xi]].
    pub fn quaternion(w: f64, x: f64, y: f64, z: f64) -> Self {
        U2Element {
            m: [c(w, x), c(y, z), c(-y, z), c(w, -x)],
        }
    }

    /// The matrix b = [[0, 1], [−1, 0]].
    pub fn b() -> Self {
        Self::quaternion(0.0, 0.0, 1.0, 0.0)
    }

    pub fn mul(&self, o: &U2Element) -> U2Element {
        let a = &self.m;
        let b = &o.m;
        U2Element {
            m: [
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ],
        }
    }

    pub fn scale(&self, z: Complex64) -> U2Element {
        U2Element {
            m: self.m.map(|x| x * z),
        }
    }

    pub fn adjoint(&self) -> U2Element {
        let a = &self.m;
        U2Element {
            m: [a[0].conj(), a[2].conj(), a[1].conj(), a[3].conj()],
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0] + self.m[3]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn pow(&self, k: u64) -> U2Element {
        (0..k).fold(U2Element::identity(), |acc, _| acc.mul(self))
    }

    /// max |entry difference|.
    pub fn distance(&self, o: &U2Element) -> f64 {
        self.m
            .iter()
            .zip(&o.m)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self) -> bool {
        self.adjoint().mul(self).distance(&U2Element::identity()) < ELEMENT_TOLERANCE
    }

    pub fn is_diagonal(&self) -> bool {
        self.m[1].norm() < ELEMENT_TOLERANCE && self.m[2].norm() < ELEMENT_TOLERANCE
    }

    /// Smallest k ≥ 1 with g^k = I, up to `limit`.
    pub fn order(&self, limit: u64) -> Option<u64> {
        let mut p = *self;
        for k in 1..=limit {
            if p.distance(&U2Element::identity()) < ELEMENT_TOLERANCE {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }

    fn reals(&self) -> [f64; 8] {
        let m = &self.m;
        [
            m[0].re, m[0].im, m[1].re, m[1].im, m[2].re, m[2].im, m[3].re, m[3].im,
        ]
    }

    pub fn to_pairs(&self) -> [[f64; 2]; 4] {
        self.m.map(|z| [z.re, z.im])
    }

    pub fn from_pairs(p: &[[f64; 2]; 4]) -> Self {
        U2Element {
            m: p.map(|[re, im]| c(re, im)),
        }
    }
}

/// Matrix set with tolerant membership. Entries are bucketed on a 1e−6
/// grid; coordinates within the tolerance of a cell boundary are also
/// looked up in the neighbouring cell.
#[derive(Clone, Debug, Default)]
pub struct ElementSet {
    elements: Vec<U2Element>,
    index: HashMap<[i64; 8], Vec<usize>>,
}

impl ElementSet {
    pub fn new() -> Self {
        Self::default()
    }

    fn base_key(g: &U2Element) -> [i64; 8] {
        g.reals().map(|x| (x * QUANT).round() as i64)
    }

    fn candidate_keys(g: &U2Element) -> Vec<[i64; 8]> {
        let vals = g.reals();
        let base = Self::base_key(g);
        let mut keys = vec![base];
        for (i, &x) in vals.iter().enumerate() {
            let scaled = x * QUANT;
            let frac = scaled - scaled.floor();
            if (frac - 0.5).abs() < 1e-3 {
                let alt = if scaled.round() > scaled { base[i] - 1 } else { base[i] + 1 };
                let extra: Vec<[i64; 8]> = keys
                    .iter()
                    .map(|k| {
                        let mut k = *k;
                        k[i] = alt;
                        k
                    })
                    .collect();
                keys.extend(extra);
            }
        }
        keys
    }

    pub fn find(&self, g: &U2Element) -> Option<usize> {
        for key in Self::candidate_keys(g) {
            if let Some(ids) = self.index.get(&key) {
                for &i in ids {
                    if self.elements[i].distance(g) < ELEMENT_TOLERANCE {
                        return Some(i);
                    }
                }
            }
        }
        None
    }

    pub fn contains(&self, g: &U2Element) -> bool {
        self.find(g).is_some()
    }

    /// Inserts unless present; returns true when the element is new.
    pub fn insert(&mut self, g: U2Element) -> bool {
        if self.contains(&g) {
            return false;
        }
        let id = self.elements.len();
        self.index.entry(Self::base_key(&g)).or_default().push(id);
        self.elements.push(g);
        true
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[U2Element] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<U2Element> {
        self.elements
    }
}

/// Provenance of a finite subgroup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GroupSpec {
    CyclicScalar { n: u64 },
    CyclicSu2 { n: u64 },
    BinaryDihedral { n: u64 },
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
    /// (Z_{2m}/Z_f; Z_{2n}/Z_g)_d
    Duval1 { m: u64, n: u64, f: u64, g: u64, d: u64 },
    /// (Z_{2m}/Z_{2m}; D_l/D_l)
    Duval2 { m: u64, l: u64 },
    /// (Z_{4m}/Z_{2m}; D_l/Z_{2l})
    Duval3 { m: u64, l: u64 },
    /// (Z_{4m}/Z_m; D_l/Z_l)
    Duval3b { m: u64, l: u64 },
    /// (Z_{4m}/Z_{2m}; D_{2l}/D_l)
    Duval4 { m: u64, l: u64 },
    /// (Z_{2m}/Z_{2m}; T/T)
    Duval5 { m: u64 },
    /// (Z_{6m}/Z_{2m}; T/D_2)
    Duval6 { m: u64 },
    /// (Z_{2m}/Z_{2m}; O/O)
    Duval7 { m: u64 },
    /// (Z_{4m}/Z_{2m}; O/T)
    Duval8 { m: u64 },
    /// (Z_{2m}/Z_{2m}; I/I)
    Duval9 { m: u64 },
    FromGenerators { matrices: Vec<[[f64; 2]; 4]> },
}

impl Eq for GroupSpec {}

fn z(k: u64) -> String {
    if k == 1 {
        "1".into()
    } else {
        format!("Z{k}")
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GroupSpec::*;
        match self {
            CyclicScalar { n } => write!(f, "Z{n}<U1"),
            CyclicSu2 { n } => write!(f, "Z{n}<SU2"),
            BinaryDihedral { n } => write!(f, "D{n}"),
            BinaryTetrahedral => write!(f, "T24"),
            BinaryOctahedral => write!(f, "O48"),
            BinaryIcosahedral => write!(f, "I120"),
            Duval1 { m, n, f: ff, g, d } => {
                write!(f, "({}/{};{}/{})_{}", z(2 * m), z(*ff), z(2 * n), z(*g), d)
            }
            Duval2 { m, l } => write!(f, "({}/{};D{l}/D{l})", z(2 * m), z(2 * m)),
            Duval3 { m, l } => write!(f, "({}/{};D{l}/{})", z(4 * m), z(2 * m), z(2 * l)),
            Duval3b { m, l } => write!(f, "({}/{};D{l}/{})", z(4 * m), z(*m), z(*l)),
            Duval4 { m, l } => write!(f, "({}/{};D{}/D{l})", z(4 * m), z(2 * m), 2 * l),
            Duval5 { m } => write!(f, "({}/{};T24/T24)", z(2 * m), z(2 * m)),
            Duval6 { m } => write!(f, "({}/{};T24/D2)", z(6 * m), z(2 * m)),
            Duval7 { m } => write!(f, "({}/{};O48/O48)", z(2 * m), z(2 * m)),
            Duval8 { m } => write!(f, "({}/{};O48/T24)", z(4 * m), z(2 * m)),
            Duval9 { m } => write!(f, "({}/{};I120/I120)", z(2 * m), z(2 * m)),
            FromGenerators { matrices } => write!(f, "<{} generators>", matrices.len()),
        }
    }
}

impl GroupSpec {
    /// Family number (0 for the named SU₂ and scalar families, 10 for
    /// explicit generators) and parameters, for deterministic sorting.
    pub fn sort_key(&self) -> (u32, Vec<u64>) {
        use GroupSpec::*;
        match self {
            Duval1 { m, n, f, g, d } => (1, vec![*m, *n, *f, *g, *d]),
            Duval2 { m, l } => (2, vec![*m, *l]),
            Duval3 { m, l } => (3, vec![*m, *l, 0]),
            Duval3b { m, l } => (3, vec![*m, *l, 1]),
            Duval4 { m, l } => (4, vec![*m, *l]),
            Duval5 { m } => (5, vec![*m]),
            Duval6 { m } => (6, vec![*m]),
            Duval7 { m } => (7, vec![*m]),
            Duval8 { m } => (8, vec![*m]),
            Duval9 { m } => (9, vec![*m]),
            CyclicScalar { n } => (0, vec![0, *n]),
            CyclicSu2 { n } => (0, vec![1, *n]),
            BinaryDihedral { n } => (0, vec![2, *n]),
            BinaryTetrahedral => (0, vec![3]),
            BinaryOctahedral => (0, vec![4]),
            BinaryIcosahedral => (0, vec![5]),
            FromGenerators { .. } => (10, vec![]),
        }
    }

    /// Family label used in certificates.
    pub fn family(&self) -> String {
        use GroupSpec::*;
        match self {
            Duval3b { .. } => "type3b".into(),
            FromGenerators { .. } => "generators".into(),
            _ => match self.sort_key().0 {
                0 => "su2_or_scalar".into(),
                k => format!("type{k}"),
            },
        }
    }

    pub fn from_generators(gens: &[U2Element]) -> GroupSpec {
        GroupSpec::FromGenerators {
            matrices: gens.iter().map(|g| g.to_pairs()).collect(),
        }
    }

    /// Order predicted by the classification, when the spec is a family.
    pub fn expected_order(&self) -> Option<u64> {
        use GroupSpec::*;
        Some(match self {
            CyclicScalar { n } | CyclicSu2 { n } => *n,
            BinaryDihedral { n } => 4 * n,
            BinaryTetrahedral => 24,
            BinaryOctahedral => 48,
            BinaryIcosahedral => 120,
            Duval1 { n, f, .. } => n * f,
            Duval2 { m, l } | Duval3 { m, l } => 4 * l * m,
            Duval3b { m, l } => 2 * l * m,
            Duval4 { m, l } => 8 * l * m,
            Duval5 { m } | Duval6 { m } => 24 * m,
            Duval7 { m } | Duval8 { m } => 48 * m,
            Duval9 { m } => 120 * m,
            FromGenerators { .. } => return None,
        })
    }

    pub fn validate(&self) -> Result<(), DuvalError> {
        use GroupSpec::*;
        let bad = |s: String| Err(DuvalError::InvalidParams(s));
        match self {
            CyclicScalar { n } | CyclicSu2 { n } | BinaryDihedral { n } if *n == 0 => {
                bad(format!("{self:?}: order parameter must be positive"))
            }
            Duval1 { m, n, f, g, d } => {
                if *m == 0 || *n == 0 || *f == 0 || *g == 0 {
                    return bad("Type 1 parameters must be positive".into());
                }
                if (2 * m) % f != 0 || (2 * n) % g != 0 {
                    return bad(format!("f must divide 2m and g must divide 2n in {self}"));
                }
                if 2 * m / f != 2 * n / g {
                    return bad(format!("2m/f must equal 2n/g in {self}"));
                }
                if f % 2 != g % 2 {
                    return bad(format!("f and g must have the same parity in {self}"));
                }
                let cc = 2 * m / f;
                if d.gcd(&cc) != 1 {
                    return bad(format!("d must be prime to 2m/f = {cc} in {self}"));
                }
                Ok(())
            }
            Duval2 { m, l } | Duval4 { m, l } if *m == 0 || *l == 0 => bad(format!("{self:?}")),
            Duval3 { m, l } | Duval3b { m, l } => {
                if *m == 0 || *l == 0 || m % 2 == 0 || l % 2 == 0 {
                    bad(format!("Type 3 needs odd m and l, got m = {m}, l = {l}"))
                } else {
                    Ok(())
                }
            }
            Duval5 { m } | Duval6 { m } | Duval7 { m } | Duval8 { m } | Duval9 { m } if *m == 0 => {
                bad(format!("{self:?}"))
            }
            FromGenerators { matrices } => {
                for p in matrices {
                    if !U2Element::from_pairs(p).is_unitary() {
                        return bad("generator is not unitary".into());
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiniteSubgroup {
    pub elements: Vec<U2Element>,
    pub spec: GroupSpec,
    pub order: usize,
}

impl FiniteSubgroup {
    pub fn element_set(&self) -> ElementSet {
        let mut s = ElementSet::new();
        for g in &self.elements {
            s.insert(*g);
        }
        s
    }

    /// Every element of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &FiniteSubgroup) -> bool {
        let s = other.element_set();
        self.elements.iter().all(|g| s.contains(g))
    }

    /// Products of all pairs land back in the set.
    pub fn is_closed(&self) -> bool {
        let s = self.element_set();
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| s.contains(&a.mul(b))))
    }

    pub fn fingerprint(&self) -> Fingerprint {
        fingerprint(&self.elements)
    }
}

/// Sorted (trace, determinant) multiset on the 1e−6 grid.
pub type Fingerprint = Vec<[i64; 4]>;

pub fn fingerprint(elements: &[U2Element]) -> Fingerprint {
    let mut fp: Vec<[i64; 4]> = elements
        .iter()
        .map(|g| {
            let t = g.trace();
            let d = g.det();
            [t.re, t.im, d.re, d.im].map(|x| {
                let v = (x * QUANT).round() as i64;
                if v == 0 { 0 } else { v }
            })
        })
        .collect();
    fp.sort_unstable();
    fp
}

/// Group generated by `gens` by breadth-first closure.
pub fn closure(gens: &[U2Element]) -> Result<Vec<U2Element>, DuvalError> {
    let mut set = ElementSet::new();
    set.insert(U2Element::identity());
    let mut frontier = vec![U2Element::identity()];
    while let Some(g) = frontier.pop() {
        for h in gens {
            let p = g.mul(h);
            if set.insert(p) {
                if set.len() > CLOSURE_BUDGET {
                    return Err(DuvalError::ClosureBudget);
                }
                frontier.push(p);
            }
        }
    }
    Ok(set.into_elements())
}

fn golden() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// t₀ = (−1 + i + j + k)/2.
pub fn tetrahedral_t0() -> U2Element {
    U2Element::quaternion(-0.5, 0.5, 0.5, 0.5)
}

/// (1 + i)/√2.
pub fn octahedral_lift() -> U2Element {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    U2Element::quaternion(s, s, 0.0, 0.0)
}

pub fn exceptional_generators(which: &GroupSpec) -> Vec<U2Element> {
    let i = U2Element::quaternion(0.0, 1.0, 0.0, 0.0);
    let j = U2Element::b();
    match which {
        GroupSpec::BinaryTetrahedral => vec![i, j, tetrahedral_t0()],
        GroupSpec::BinaryOctahedral => vec![i, j, tetrahedral_t0(), octahedral_lift()],
        GroupSpec::BinaryIcosahedral => {
            let phi = golden();
            vec![i, j, U2Element::quaternion(phi / 2.0, 0.5 / phi, 0.5, 0.0)]
        }
        _ => panic!("not an exceptional group"),
    }
}

fn exceptional(which: &GroupSpec, expected: usize) -> Result<Vec<U2Element>, DuvalError> {
    let els = closure(&exceptional_generators(which))?;
    if els.len() != expected {
        return Err(DuvalError::OrderMismatch(which.to_string(), els.len(), expected));
    }
    Ok(els)
}

fn cyclic_su2(n: u64) -> Vec<U2Element> {
    (0..n)
        .map(|k| U2Element::diag(root_of_unity(k as i64, n), root_of_unity(-(k as i64), n)))
        .collect()
}

fn binary_dihedral(n: u64) -> Vec<U2Element> {
    let rot = cyclic_su2(2 * n);
    let b = U2Element::b();
    let mut out = rot.clone();
    out.extend(rot.iter().map(|r| r.mul(&b)));
    out
}

/// L, L_K, R_K and the coset representative t with φ(ω_{|L|}L_K) = tR_K,
/// for the families built as {ω_{|L|}^j t^j r : r ∈ R_K}.
#[derive(Clone, Debug)]
pub struct QuotientData {
    pub l_order: u64,
    pub lk_order: u64,
    pub rk: GroupSpec,
    pub t: U2Element,
    /// Other admissible choices of t (other isomorphisms φ).
    pub alternatives: Vec<U2Element>,
}

pub fn quotient_data(spec: &GroupSpec) -> Option<QuotientData> {
    use GroupSpec::*;
    let id = U2Element::identity();
    let b = U2Element::b();
    let q = |l_order, lk_order, rk, t, alternatives| {
        Some(QuotientData {
            l_order,
            lk_order,
            rk,
            t,
            alternatives,
        })
    };
    match *spec {
        Duval2 { m, l } => q(2 * m, 2 * m, BinaryDihedral { n: l }, id, vec![]),
        Duval3 { m, l } => q(4 * m, 2 * m, CyclicSu2 { n: 2 * l }, b, vec![]),
        Duval3b { m, l } => q(4 * m, m, CyclicSu2 { n: l }, b, vec![b.pow(3)]),
        Duval4 { m, l } => q(
            4 * m,
            2 * m,
            BinaryDihedral { n: l },
            U2Element::diag(root_of_unity(1, 4 * l), root_of_unity(-1, 4 * l)),
            vec![],
        ),
        Duval5 { m } => q(2 * m, 2 * m, BinaryTetrahedral, id, vec![]),
        Duval6 { m } => q(
            6 * m,
            2 * m,
            BinaryDihedral { n: 2 },
            tetrahedral_t0(),
            vec![tetrahedral_t0().pow(2)],
        ),
        Duval7 { m } => q(2 * m, 2 * m, BinaryOctahedral, id, vec![]),
        Duval8 { m } => q(4 * m, 2 * m, BinaryTetrahedral, octahedral_lift(), vec![]),
        Duval9 { m } => q(2 * m, 2 * m, BinaryIcosahedral, id, vec![]),
        _ => None,
    }
}

fn quotient_elements(qd: &QuotientData, t: &U2Element) -> Result<Vec<U2Element>, DuvalError> {
    let rk = generate(&qd.rk)?.elements;
    let mut set = ElementSet::new();
    let mut tj = U2Element::identity();
    for j in 0..qd.l_order {
        let lift = tj.scale(root_of_unity(j as i64, qd.l_order));
        for r in &rk {
            set.insert(lift.mul(r));
        }
        tj = tj.mul(t);
    }
    Ok(set.into_elements())
}

/// Type 1 elements ω_{2m}^j · diag(ω_{2n}^k, ω_{2n}^{−k}) with k ≡ dj mod c.
fn type1_elements(m: u64, n: u64, f: u64, d: u64) -> Vec<U2Element> {
    let cc = 2 * m / f;
    let mut set = ElementSet::new();
    for j in 0..2 * m {
        let l = root_of_unity(j as i64, 2 * m);
        let k0 = (d * j) % cc;
        let mut k = k0;
        while k < 2 * n {
            let r = U2Element::diag(root_of_unity(k as i64, 2 * n), root_of_unity(-(k as i64), 2 * n));
            set.insert(r.scale(l));
            k += cc;
        }
    }
    set.into_elements()
}

/// Element list for a spec, checked against the classification order.
pub fn generate(spec: &GroupSpec) -> Result<FiniteSubgroup, DuvalError> {
    use GroupSpec::*;
    spec.validate()?;
    let elements = match spec {
        CyclicScalar { n } => (0..*n)
            .map(|k| U2Element::scalar(root_of_unity(k as i64, *n)))
            .collect(),
        CyclicSu2 { n } => cyclic_su2(*n),
        BinaryDihedral { n } => binary_dihedral(*n),
        BinaryTetrahedral => exceptional(spec, 24)?,
        BinaryOctahedral => exceptional(spec, 48)?,
        BinaryIcosahedral => exceptional(spec, 120)?,
        Duval1 { m, n, f, d, .. } => type1_elements(*m, *n, *f, *d),
        FromGenerators { matrices } => {
            let gens: Vec<U2Element> = matrices.iter().map(U2Element::from_pairs).collect();
            closure(&gens)?
        }
        _ => {
            let qd = quotient_data(spec).expect("quotient family");
            let els = quotient_elements(&qd, &qd.t)?;
            let fp = fingerprint(&els);
            for alt in &qd.alternatives {
                if fingerprint(&quotient_elements(&qd, alt)?) != fp {
                    return Err(DuvalError::PhiAmbiguous(spec.to_string()));
                }
            }
            els
        }
    };
    if let Some(exp) = spec.expected_order() {
        if elements.len() as u64 != exp {
            return Err(DuvalError::OrderMismatch(spec.to_string(), elements.len(), exp as usize));
        }
    }
    Ok(FiniteSubgroup {
        order: elements.len(),
        elements,
        spec: spec.clone(),
    })
}

/// Same as [`generate`] for the du Val product families.
pub fn duval_product_group(spec: &GroupSpec) -> Result<FiniteSubgroup, DuvalError> {
    if spec.sort_key().0 == 0 || spec.sort_key().0 == 10 {
        return Err(DuvalError::InvalidParams(format!("{spec} is not a du Val product family")));
    }
    generate(spec)
}

/// Finite subgroup of the diagonal torus, stored exactly.
///
/// The group is {diag(e^{2πix}, e^{2πiy}) : (x, y) ∈ Λ/Z²} where DΛ is the
/// integer lattice with Hermite basis (p, q), (0, s), containing DZ².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiagonalGroup {
    pub d: u64,
    pub p: u64,
    pub q: u64,
    pub s: u64,
}

fn hnf2(rows: &[(i64, i64)]) -> (i64, i64, i64) {
    // Euclid on the first column, gcd of the leftover second entries
    let mut first: Option<(i64, i64)> = None;
    let mut s = 0i64;
    for &(a, b) in rows {
        let (mut x, mut y) = (a, b);
        match first {
            None => {
                if x != 0 {
                    first = Some((x, y));
                } else {
                    s = s.gcd(&y);
                }
            }
            Some((mut p, mut q)) => {
                while x != 0 {
                    let t = p / x;
                    p -= t * x;
                    q -= t * y;
                    std::mem::swap(&mut p, &mut x);
                    std::mem::swap(&mut q, &mut y);
                }
                s = s.gcd(&y);
                first = Some((p, q));
            }
        }
    }
    let (mut p, mut q) = first.expect("lattice contains DZ²");
    if p < 0 {
        p = -p;
        q = -q;
    }
    let q = if s == 0 { q } else { q.rem_euclid(s) };
    (p, q, s)
}

impl DiagonalGroup {
    /// Lattice generated by Z² and the points (a/D, b/D) for (a, b) in `gens`.
    pub fn from_generators(d: u64, gens: &[(i64, i64)]) -> DiagonalGroup {
        let di = d as i64;
        let mut rows = vec![(di, 0), (0, di)];
        rows.extend(gens.iter().map(|&(a, b)| (a.rem_euclid(di), b.rem_euclid(di))));
        let (p, q, s) = hnf2(&rows);
        DiagonalGroup::normalized(d, p as u64, q as u64, s as u64)
    }

    fn normalized(d: u64, p: u64, q: u64, s: u64) -> DiagonalGroup {
        let h = d.gcd(&p).gcd(&q).gcd(&s);
        DiagonalGroup {
            d: d / h,
            p: p / h,
            q: q / h,
            s: s / h,
        }
    }

    pub fn order(&self) -> u64 {
        self.d * self.d / (self.p * self.s)
    }

    /// Group with the two coordinates exchanged.
    pub fn swapped(&self) -> DiagonalGroup {
        let d = self.d as i64;
        let (p, q, s) = hnf2(&[
            (self.q as i64, self.p as i64),
            (self.s as i64, 0),
            (d, 0),
            (0, d),
        ]);
        DiagonalGroup::normalized(self.d, p as u64, q as u64, s as u64)
    }

    /// Representative of the conjugacy class (diagonal groups are conjugate
    /// in U₂ exactly when they agree up to the coordinate swap).
    pub fn canonical(&self) -> DiagonalGroup {
        (*self).min(self.swapped())
    }

    // points (ap, aq + bs); (t, ±t) lies in the group iff a(p ∓ q) ≡ 0 mod s
    fn diagonal_line_order(&self, sign: i64) -> u64 {
        let s = self.s as i64;
        let r = (self.p as i64 - sign * self.q as i64).rem_euclid(s);
        let step = (s / s.gcd(&r)) as u64;
        self.d / (self.p * step)
    }

    /// Order of the scalar subgroup {diag(λ, λ)}.
    pub fn scalar_subgroup_order(&self) -> u64 {
        self.diagonal_line_order(1)
    }

    /// Order of the subgroup inside SU₂, {diag(λ, λ⁻¹)}.
    pub fn su2_subgroup_order(&self) -> u64 {
        self.diagonal_line_order(-1)
    }

    /// Angle numerators (x·D, y·D) of all elements.
    pub fn points(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::with_capacity(self.order() as usize);
        for a in 0..self.d / self.p {
            for b in 0..self.d / self.s {
                out.push(((a * self.p) % self.d, (a * self.q + b * self.s) % self.d));
            }
        }
        out
    }

    pub fn elements(&self) -> Vec<U2Element> {
        self.points()
            .into_iter()
            .map(|(x, y)| U2Element::diag(root_of_unity(x as i64, self.d), root_of_unity(y as i64, self.d)))
            .collect()
    }

    /// z₁^{a₁} z₂^{a₂} z̄₁^{b₁} z̄₂^{b₂} is invariant iff (a₁ − b₁, a₂ − b₂) = (u, v)
    /// pairs to an integer with every element.
    pub fn character_is_trivial(&self, u: i64, v: i64) -> bool {
        let d = self.d as i64;
        (u * self.p as i64 + v * self.q as i64).rem_euclid(d) == 0 && (v * self.s as i64).rem_euclid(d) == 0
    }

    /// Exact Molien coefficients through t^k: a monomial of degree k with
    /// differences (u, v) exists in ((k − |u| − |v|)/2 + 1) ways.
    pub fn molien_coefficients(&self, k: usize) -> Vec<u64> {
        let k = k as i64;
        let mut out = vec![0u64; k as usize + 1];
        for u in -k..=k {
            for v in -(k - u.abs())..=(k - u.abs()) {
                if !self.character_is_trivial(u, v) {
                    continue;
                }
                let l = u.abs() + v.abs();
                let mut deg = l;
                while deg <= k {
                    out[deg as usize] += ((deg - l) / 2 + 1) as u64;
                    deg += 2;
                }
            }
        }
        out
    }
}

/// Exact form of a Type 1 group: generators (1/2m + d/2n, 1/2m − d/2n) and
/// (c/2n, −c/2n).
pub fn type1_diagonal(m: u64, n: u64, f: u64, d: u64) -> DiagonalGroup {
    let cc = 2 * m / f;
    let big = (2 * m).lcm(&(2 * n));
    let lm = (big / (2 * m)) as i64;
    let ln = (big / (2 * n)) as i64;
    let di = d as i64;
    let ci = cc as i64;
    DiagonalGroup::from_generators(big, &[(lm + di * ln, lm - di * ln), (ci * ln, -ci * ln)])
}

/// Exact diagonal form of a family instance that happens to be abelian
/// (Type 1, and Types 2 and 3 with l = 1, where b diagonalizes to
/// diag(i, −i)).
pub fn diagonal_form(spec: &GroupSpec) -> Option<DiagonalGroup> {
    use GroupSpec::*;
    match *spec {
        Duval1 { m, n, f, d, .. } => Some(type1_diagonal(m, n, f, d)),
        CyclicScalar { n } => Some(DiagonalGroup::from_generators(n, &[(1, 1)])),
        CyclicSu2 { n } => Some(DiagonalGroup::from_generators(n, &[(1, -1)])),
        BinaryDihedral { n: 1 } => Some(DiagonalGroup::from_generators(4, &[(1, -1)])),
        Duval2 { m, l: 1 } => {
            let big = (2 * m).lcm(&4);
            let a = (big / (2 * m)) as i64;
            let q = (big / 4) as i64;
            Some(DiagonalGroup::from_generators(big, &[(a, a), (q, -q)]))
        }
        Duval3 { m, l: 1 } => {
            let big = (4 * m).lcm(&4);
            let a = (big / (4 * m)) as i64;
            let q = (big / 4) as i64;
            Some(DiagonalGroup::from_generators(big, &[(a + q, a - q), (2 * q, 2 * q)]))
        }
        Duval3b { m, l: 1 } => {
            let big = (4 * m).lcm(&4);
            let a = (big / (4 * m)) as i64;
            let q = (big / 4) as i64;
            Some(DiagonalGroup::from_generators(big, &[(a + q, a - q)]))
        }
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassKind {
    Diagonal { lattice: DiagonalGroup },
    General,
}

/// One conjugacy class found by the enumeration, with every family instance
/// that realizes it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuValClass {
    pub spec: GroupSpec,
    pub aliases: Vec<GroupSpec>,
    pub order: u64,
    #[serde(flatten)]
    pub kind: ClassKind,
}

impl DuValClass {
    /// Materializes the representative.
    pub fn group(&self) -> Result<FiniteSubgroup, DuvalError> {
        generate(&self.spec)
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.kind, ClassKind::Diagonal { .. })
    }

    pub fn has_alias(&self, spec: &GroupSpec) -> bool {
        self.spec == *spec || self.aliases.contains(spec)
    }
}

fn type1_tuples(cap: u64) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    // order = n f = c f g / 2 with 2m = cf, 2n = cg
    for cc in 1..=2 * cap {
        let coprime: Vec<u64> = (1..=cc).filter(|d| d.gcd(&cc) == 1).collect();
        for f in 1..=2 * cap / cc {
            if (cc * f) % 2 != 0 {
                continue;
            }
            for g in (1..=2 * cap / (cc * f)).filter(|g| g % 2 == f % 2) {
                if (cc * g) % 2 != 0 || cc * f * g / 2 > cap {
                    continue;
                }
                let m = cc * f / 2;
                let n = cc * g / 2;
                for &d in &coprime {
                    out.push(GroupSpec::Duval1 { m, n, f, g, d });
                }
            }
        }
    }
    out
}

fn general_specs(cap: u64) -> Vec<GroupSpec> {
    use GroupSpec::*;
    let mut out = Vec::new();
    for m in 1..=cap {
        for l in 1..=cap {
            if 4 * l * m > cap {
                break;
            }
            out.push(Duval2 { m, l });
        }
        for l in (1..=cap).step_by(2) {
            if m % 2 == 1 && 4 * l * m <= cap {
                out.push(Duval3 { m, l });
            }
            if m % 2 == 1 && 2 * l * m <= cap {
                out.push(Duval3b { m, l });
            }
        }
        for l in 1..=cap {
            if 8 * l * m > cap {
                break;
            }
            out.push(Duval4 { m, l });
        }
        for (spec, order) in [
            (Duval5 { m }, 24 * m),
            (Duval6 { m }, 24 * m),
            (Duval7 { m }, 48 * m),
            (Duval8 { m }, 48 * m),
            (Duval9 { m }, 120 * m),
        ] {
            if order <= cap {
                out.push(spec);
            }
        }
    }
    out
}

/// The cyclic, binary dihedral and exceptional families on their own; they
/// only ever show up as aliases of du Val instances.
fn named_specs(cap: u64) -> Vec<GroupSpec> {
    use GroupSpec::*;
    let mut out = Vec::new();
    for n in 1..=cap {
        out.push(CyclicScalar { n });
        out.push(CyclicSu2 { n });
        if 4 * n <= cap {
            out.push(BinaryDihedral { n });
        }
    }
    for (spec, order) in [(BinaryTetrahedral, 24), (BinaryOctahedral, 48), (BinaryIcosahedral, 120)] {
        if order <= cap {
            out.push(spec);
        }
    }
    out
}

// du Val instances represent a class before the standalone families
fn representative_rank(s: &GroupSpec) -> (bool, (u32, Vec<u64>)) {
    let k = s.sort_key();
    (k.0 == 0, k)
}

/// All conjugacy classes of du Val family instances with order ≤ cap.
///
/// Abelian instances are kept exactly as lattices and merged up to the
/// coordinate swap; the others are materialized and merged by their
/// (trace, determinant) fingerprint. The list is sorted by order, diagonal
/// classes first, then by lattice or representative.
pub fn enumerate_duval(order_cap: u64) -> Result<Vec<DuValClass>, DuvalError> {
    if order_cap > MAX_ORDER_CAP {
        return Err(DuvalError::Budget(order_cap));
    }
    let mut diag: BTreeMap<DiagonalGroup, Vec<GroupSpec>> = BTreeMap::new();
    for spec in type1_tuples(order_cap) {
        let key = diagonal_form(&spec).expect("type 1").canonical();
        diag.entry(key).or_default().push(spec);
    }
    let mut general = Vec::new();
    for spec in general_specs(order_cap).into_iter().chain(named_specs(order_cap)) {
        match diagonal_form(&spec) {
            Some(g) => diag.entry(g.canonical()).or_default().push(spec),
            None => general.push(spec),
        }
    }
    let materialized: Vec<(GroupSpec, Fingerprint)> = general
        .into_par_iter()
        .map(|spec| generate(&spec).map(|g| (spec, g.fingerprint())))
        .collect::<Result<_, _>>()?;
    let mut by_fp: HashMap<Fingerprint, Vec<GroupSpec>> = HashMap::new();
    for (spec, fp) in materialized {
        by_fp.entry(fp).or_default().push(spec);
    }

    let mut classes: Vec<DuValClass> = Vec::with_capacity(diag.len() + by_fp.len());
    for (lattice, mut specs) in diag {
        specs.sort_by_key(representative_rank);
        let spec = specs.remove(0);
        classes.push(DuValClass {
            order: lattice.order(),
            spec,
            aliases: specs,
            kind: ClassKind::Diagonal { lattice },
        });
    }
    let gen_classes: Vec<DuValClass> = by_fp
        .into_values()
        .map(|mut specs| {
            specs.sort_by_key(representative_rank);
            let spec = specs.remove(0);
            DuValClass {
                order: spec.expected_order().expect("family"),
                spec,
                aliases: specs,
                kind: ClassKind::General,
            }
        })
        .collect();
    classes.extend(gen_classes);
    classes.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.kind_key().cmp(&b.kind_key())));
    Ok(classes)
}

impl DuValClass {
    fn kind_key(&self) -> (u8, DiagonalGroup, (u32, Vec<u64>)) {
        match self.kind {
            ClassKind::Diagonal { lattice } => (0, lattice, (0, vec![])),
            ClassKind::General => (
                1,
                DiagonalGroup { d: 0, p: 0, q: 0, s: 0 },
                self.spec.sort_key(),
            ),
        }
    }
}
