//! Orbifold verdicts for weight matrices, and the bounded search that
//! excludes finite quotients C²/G by comparing Hilbert and Molien series.

use crate::duval::{
    enumerate_duval, generate, quotient_data, root_of_unity, ClassKind, DiagonalGroup, DuValClass, DuvalError,
    FiniteSubgroup, GroupSpec, U2Element,
};
use crate::exact::TruncatedSeries;
use crate::invariants::{cyclic_line_series, dim2_data, quotient_hilbert_series, Dim2IsoData, InvariantError};
use crate::molien::{
    cyclic_closed_form, dihedral_closed_form, dim_invariants, expand_to_u64, molien_series, MolienError,
};
use crate::weights::{effectiveness_report, simplicial_check, PolytopeDescription, WeightError, WeightMatrix};
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::OnceLock;
use thiserror::Error;

pub const DEFAULT_SERIES_ORDER: usize = 8;
pub const DEFAULT_ORDER_CAP: u64 = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObstructionError {
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Duval(#[from] DuvalError),
    #[error(transparent)]
    Molien(#[from] MolienError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("only [-1,1,1] and [-1,1,2] have a recorded argument")]
    UnsupportedMatrix,
    #[error("quotient series of a dimension-2 quotient differs from C/Z_{0} at degree {1}")]
    Dim2SeriesMismatch(u64, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionCertificate {
    pub candidate: GroupSpec,
    pub order: u64,
    pub mismatch_degree: usize,
    pub target_coefficient: u64,
    pub group_coefficient: u64,
    /// Subgroup whose own coefficient already falls below the target.
    pub pruned_by: Option<GroupSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_coefficient: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ExclusionOutcome {
    Excluded { certificates: Vec<ExclusionCertificate> },
    Matched { candidates: Vec<GroupSpec> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OrbifoldVerdict {
    NotRationalHomologyManifold {
        vertex_count: usize,
        polytope: PolytopeDescription,
    },
    Dim2Orbifold {
        data: Dim2IsoData,
        target_n: u64,
    },
    NoFiniteMatchUpToBound {
        order_cap: u64,
        series_order: usize,
        certificates: Vec<ExclusionCertificate>,
    },
    CandidatesFound {
        candidates: Vec<GroupSpec>,
    },
    PointQuotient,
}

impl OrbifoldVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            OrbifoldVerdict::NotRationalHomologyManifold { .. } => "NotRationalHomologyManifold",
            OrbifoldVerdict::Dim2Orbifold { .. } => "Dim2Orbifold",
            OrbifoldVerdict::NoFiniteMatchUpToBound { .. } => "NoFiniteMatchUpToBound",
            OrbifoldVerdict::CandidatesFound { .. } => "CandidatesFound",
            OrbifoldVerdict::PointQuotient => "PointQuotient",
        }
    }
}

/// Integer coefficients of a series whose entries are all non-negative
/// integers.
pub fn series_to_u64(s: &TruncatedSeries) -> Result<Vec<u64>, ObstructionError> {
    s.to_i64()
        .filter(|v| v.iter().all(|&c| c >= 0))
        .map(|v| v.into_iter().map(|c| c as u64).collect())
        .ok_or_else(|| ObstructionError::Precondition("target must have non-negative integer coefficients".into()))
}

/// Decides which of the verdicts applies to the quotient of `w`.
pub fn check_orbifold(
    w: &WeightMatrix,
    series_order: usize,
    order_cap: u64,
) -> Result<OrbifoldVerdict, ObstructionError> {
    if series_order < 5 || order_cap < 2 {
        return Err(ObstructionError::Precondition(
            "series_order must be at least 5 and order_cap at least 2".into(),
        ));
    }
    let reduced = effectiveness_report(w).reduced;
    let report = simplicial_check(&reduced)?;
    if report.polytope.is_empty() {
        return Ok(OrbifoldVerdict::PointQuotient);
    }
    if !report.simplicial {
        return Ok(OrbifoldVerdict::NotRationalHomologyManifold {
            vertex_count: report.vertex_count,
            polytope: report.polytope,
        });
    }
    if reduced.n() == reduced.ell() + 1 {
        let data = dim2_data(&reduced)?;
        let k = series_order.max(12);
        let got = quotient_hilbert_series(&reduced, k)?;
        let want = crate::exact::series_expand(&cyclic_line_series(data.big_n as usize), k);
        if let Some(d) = (0..=k).find(|&d| got.coeff(d) != want.coeff(d)) {
            return Err(ObstructionError::Dim2SeriesMismatch(data.big_n, d));
        }
        return Ok(OrbifoldVerdict::Dim2Orbifold {
            target_n: data.big_n,
            data,
        });
    }
    let target = series_to_u64(&quotient_hilbert_series(&reduced, series_order)?)?;
    Ok(match exclusion_run(&target, order_cap)? {
        ExclusionOutcome::Excluded { certificates } => OrbifoldVerdict::NoFiniteMatchUpToBound {
            order_cap,
            series_order,
            certificates,
        },
        ExclusionOutcome::Matched { candidates } => OrbifoldVerdict::CandidatesFound { candidates },
    })
}

/// A subgroup used for pruning together with its Molien coefficients.
#[derive(Clone, Debug)]
pub struct Witness {
    pub spec: GroupSpec,
    pub coefficients: Vec<u64>,
}

/// Series of the cyclic, binary dihedral and exceptional witnesses.
struct SeriesCache {
    k: usize,
    cyclic: HashMap<u64, Vec<u64>>,
    dihedral: HashMap<u64, Vec<u64>>,
    exceptional: HashMap<&'static str, Vec<u64>>,
}

fn exceptional_series() -> &'static HashMap<&'static str, Vec<u64>> {
    static CELL: OnceLock<HashMap<&'static str, Vec<u64>>> = OnceLock::new();
    CELL.get_or_init(|| {
        [
            ("T", GroupSpec::BinaryTetrahedral),
            ("O", GroupSpec::BinaryOctahedral),
            ("I", GroupSpec::BinaryIcosahedral),
        ]
        .into_iter()
        .map(|(key, spec)| {
            let g = generate(&spec).expect("exceptional group");
            (key, molien_series(&g, crate::molien::MAX_MOLIEN_ORDER).expect("integral").coefficients)
        })
        .collect()
    })
}

impl SeriesCache {
    fn new(k: usize, cap: u64) -> Self {
        let cyclic = (1..=cap)
            .into_par_iter()
            .map(|n| (n, expand_to_u64(&cyclic_closed_form(n as usize), k)))
            .collect();
        let dihedral = (1..=cap / 4)
            .into_par_iter()
            .map(|n| (n, expand_to_u64(&dihedral_closed_form(n as usize), k)))
            .collect();
        let exceptional = exceptional_series()
            .iter()
            .map(|(key, v)| (*key, v[..=k].to_vec()))
            .collect();
        SeriesCache {
            k,
            cyclic,
            dihedral,
            exceptional,
        }
    }

    fn cyclic(&self, n: u64) -> Vec<u64> {
        self.cyclic
            .get(&n)
            .cloned()
            .unwrap_or_else(|| expand_to_u64(&cyclic_closed_form(n as usize), self.k))
    }

    fn named(&self, spec: &GroupSpec) -> Option<Vec<u64>> {
        use GroupSpec::*;
        Some(match *spec {
            CyclicScalar { n } | CyclicSu2 { n } => self.cyclic(n),
            BinaryDihedral { n } => self
                .dihedral
                .get(&n)
                .cloned()
                .unwrap_or_else(|| expand_to_u64(&dihedral_closed_form(n as usize), self.k)),
            BinaryTetrahedral => self.exceptional["T"].clone(),
            BinaryOctahedral => self.exceptional["O"].clone(),
            BinaryIcosahedral => self.exceptional["I"].clone(),
            _ => return None,
        })
    }
}

fn type1_lift(m: u64, n: u64, d: u64) -> (U2Element, DiagonalGroup) {
    let big = (2 * m).lcm(&(2 * n));
    let lm = (big / (2 * m)) as i64;
    let ln = (big / (2 * n)) as i64;
    let di = d as i64;
    let h = U2Element::scalar(root_of_unity(1, 2 * m))
        .mul(&U2Element::diag(root_of_unity(di, 2 * n), root_of_unity(-di, 2 * n)));
    (h, DiagonalGroup::from_generators(big, &[(lm + di * ln, lm - di * ln)]))
}

fn witnesses(class: &DuValClass, cache: &SeriesCache) -> Result<Vec<Witness>, ObstructionError> {
    let k = cache.k;
    let mut out = Vec::new();
    let push_named = |spec: GroupSpec, out: &mut Vec<Witness>| {
        let coefficients = cache.named(&spec).expect("named witness");
        out.push(Witness { spec, coefficients });
    };
    match (&class.kind, &class.spec) {
        (ClassKind::Diagonal { lattice }, GroupSpec::Duval1 { m, n, d, .. }) => {
            let a = lattice.scalar_subgroup_order();
            let b = lattice.su2_subgroup_order();
            if a > 1 {
                push_named(GroupSpec::CyclicScalar { n: a }, &mut out);
            }
            if b > 1 {
                push_named(GroupSpec::CyclicSu2 { n: b }, &mut out);
            }
            let (h, lift) = type1_lift(*m, *n, *d);
            if lift.order() > 1 {
                out.push(Witness {
                    spec: GroupSpec::from_generators(&[h]),
                    coefficients: lift.molien_coefficients(k),
                });
            }
        }
        (ClassKind::General, spec) => {
            let qd = quotient_data(spec).expect("general classes come from the product families");
            if qd.lk_order > 1 {
                push_named(GroupSpec::CyclicScalar { n: qd.lk_order }, &mut out);
            }
            push_named(qd.rk.clone(), &mut out);
            let h = qd.t.scale(root_of_unity(1, qd.l_order));
            let spec = GroupSpec::from_generators(&[h]);
            let g = generate(&spec)?;
            out.push(Witness {
                spec,
                coefficients: molien_series(&g, k)?.coefficients,
            });
        }
        _ => {}
    }
    Ok(out)
}

/// True Molien coefficients of a class: exact for diagonal classes.
pub fn class_coefficients(class: &DuValClass, k: usize) -> Result<Vec<u64>, ObstructionError> {
    Ok(match class.kind {
        ClassKind::Diagonal { lattice } => lattice.molien_coefficients(k),
        ClassKind::General => molien_series(&class.group()?, k)?.coefficients,
    })
}

enum ClassResult {
    Certificate(ExclusionCertificate),
    Match(GroupSpec),
}

fn examine(class: &DuValClass, target: &[u64], cache: &SeriesCache) -> Result<ClassResult, ObstructionError> {
    let k = target.len() - 1;
    let ws = witnesses(class, cache)?;
    let mut best: Option<(usize, &Witness)> = None;
    for w in &ws {
        if let Some(deg) = (0..=k).find(|&d| w.coefficients[d] < target[d]) {
            if best.map_or(true, |(b, _)| deg < b) {
                best = Some((deg, w));
            }
        }
    }
    let coefficients = class_coefficients(class, k)?;
    let cert = |deg: usize, w: Option<&Witness>| ExclusionCertificate {
        candidate: class.spec.clone(),
        order: class.order,
        mismatch_degree: deg,
        target_coefficient: target[deg],
        group_coefficient: coefficients[deg],
        pruned_by: w.map(|w| w.spec.clone()),
        witness_coefficient: w.map(|w| w.coefficients[deg]),
    };
    if let Some((deg, w)) = best {
        debug_assert!(coefficients[deg] <= w.coefficients[deg]);
        return Ok(ClassResult::Certificate(cert(deg, Some(w))));
    }
    Ok(match (0..=k).find(|&d| coefficients[d] != target[d]) {
        Some(deg) => ClassResult::Certificate(cert(deg, None)),
        None => ClassResult::Match(class.spec.clone()),
    })
}

/// Compares `target` with the Molien series of every du Val class of order
/// at most `order_cap`.
pub fn exclusion_run(target: &[u64], order_cap: u64) -> Result<ExclusionOutcome, ObstructionError> {
    if target.first() != Some(&1) {
        return Err(ObstructionError::Precondition("target must start with 1".into()));
    }
    let classes = enumerate_duval(order_cap)?;
    exclusion_over(target, &classes, order_cap)
}

/// Same as [`exclusion_run`] over an explicit class list.
pub fn exclusion_over(
    target: &[u64],
    classes: &[DuValClass],
    order_cap: u64,
) -> Result<ExclusionOutcome, ObstructionError> {
    let k = target.len() - 1;
    if k > crate::molien::MAX_MOLIEN_ORDER {
        return Err(MolienError::OrderTooLarge(k).into());
    }
    let cache = SeriesCache::new(k, order_cap.max(1));
    let results: Vec<ClassResult> = classes
        .par_iter()
        .map(|c| examine(c, target, &cache))
        .collect::<Result<_, _>>()?;
    let mut certificates = Vec::new();
    let mut candidates = Vec::new();
    for r in results {
        match r {
            ClassResult::Certificate(c) => certificates.push(c),
            ClassResult::Match(s) => candidates.push(s),
        }
    }
    if !candidates.is_empty() {
        candidates.sort_by_key(|s| s.sort_key());
        return Ok(ExclusionOutcome::Matched { candidates });
    }
    certificates.sort_by(|a, b| a.candidate.sort_key().cmp(&b.candidate.sort_key()));
    Ok(ExclusionOutcome::Excluded { certificates })
}

/// Re-derives a certificate from scratch: the candidate is materialized and
/// its Molien coefficient recomputed by direct summation; a pruning witness
/// must be a subset of the candidate with a coefficient below the target.
pub fn verify_certificate(cert: &ExclusionCertificate, target: &[u64]) -> Result<bool, ObstructionError> {
    let d = cert.mismatch_degree;
    if target.get(d) != Some(&cert.target_coefficient) || cert.target_coefficient == cert.group_coefficient {
        return Ok(false);
    }
    let g = generate(&cert.candidate)?;
    if dim_invariants(&g, d)? != cert.group_coefficient {
        return Ok(false);
    }
    if let Some(w) = &cert.pruned_by {
        let h = generate(w)?;
        let hc = dim_invariants(&h, d)?;
        if !h.is_subset_of(&g) || hc >= cert.target_coefficient || cert.group_coefficient > hc {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Counts of certificates per (family, mismatch degree, pruned).
pub fn certificate_summary(certs: &[ExclusionCertificate]) -> Vec<(String, usize, bool, usize)> {
    let mut m: std::collections::BTreeMap<(String, usize, bool), usize> = Default::default();
    for c in certs {
        *m.entry((c.candidate.family(), c.mismatch_degree, c.pruned_by.is_some()))
            .or_default() += 1;
    }
    m.into_iter().map(|((f, d, p), n)| (f, d, p, n)).collect()
}

/// One parameter sweep of the hand argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridStep {
    pub name: String,
    pub degree: usize,
    pub cases: usize,
    pub min_dimension: u64,
    pub max_dimension: u64,
    pub claimed_bound: u64,
    pub holds: bool,
}

/// A group checked by its own series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitMismatch {
    pub group: GroupSpec,
    pub name: String,
    pub prefix: Vec<u64>,
    pub degree: usize,
    pub group_coefficient: u64,
    pub target_coefficient: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperArgumentReport {
    pub matrix: Vec<i64>,
    pub target: Vec<u64>,
    pub key_degree: usize,
    pub key_coefficient: u64,
    pub steps: Vec<GridStep>,
    pub mismatches: Vec<ExplicitMismatch>,
}

impl PaperArgumentReport {
    pub fn holds(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
            && self.mismatches.iter().all(|m| m.group_coefficient != m.target_coefficient)
    }
}

fn cyclic_generated(a: i64, b: i64, n: u64) -> Result<FiniteSubgroup, ObstructionError> {
    let h = U2Element::diag(root_of_unity(a, n), root_of_unity(b, n));
    Ok(generate(&GroupSpec::from_generators(&[h]))?)
}

fn coprime_to(r: u64) -> impl Iterator<Item = u64> {
    (1..=r).filter(move |d| d.gcd(&r) == 1)
}

fn grid<I>(name: &str, degree: usize, bound: u64, strict: bool, groups: I) -> Result<GridStep, ObstructionError>
where
    I: IntoIterator<Item = Result<FiniteSubgroup, ObstructionError>>,
{
    let mut cases = 0;
    let mut max = 0;
    let mut min = u64::MAX;
    for g in groups {
        cases += 1;
        let v = dim_invariants(&g?, degree)?;
        max = max.max(v);
        min = min.min(v);
    }
    Ok(GridStep {
        name: name.into(),
        degree,
        cases,
        min_dimension: if cases == 0 { 0 } else { min },
        max_dimension: max,
        claimed_bound: bound,
        holds: if strict { max < bound } else { max <= bound },
    })
}

fn explicit(group: GroupSpec, target: &[u64], degree: usize) -> Result<ExplicitMismatch, ObstructionError> {
    let g = generate(&group)?;
    let prefix = molien_series(&g, target.len() - 1)?.coefficients;
    Ok(ExplicitMismatch {
        name: group.to_string(),
        group_coefficient: prefix[degree],
        target_coefficient: target[degree],
        prefix,
        degree,
        group,
    })
}

/// Replays the family-by-family exclusion for [−1,1,1] and [−1,1,2] on
/// parameter grids up to r = 30.
pub fn paper_argument_report(w: &WeightMatrix) -> Result<PaperArgumentReport, ObstructionError> {
    let rows = w.rows_i64();
    let row = match rows.as_slice() {
        [r] if r == &[-1, 1, 1] || r == &[-1, 1, 2] => r.clone(),
        _ => return Err(ObstructionError::UnsupportedMatrix),
    };
    let target = series_to_u64(&quotient_hilbert_series(w, 8)?)?;
    let key_degree = if row[2] == 1 { 2 } else { 3 };
    let key = target[key_degree];
    let mut steps = Vec::new();
    let mut mismatches = Vec::new();

    // cyclic subgroups of SU₂ (and by conjugacy of the scalars) that fall short
    let short: Vec<u64> = (1..=30u64)
        .filter(|&n| expand_to_u64(&cyclic_closed_form(n as usize), 8)[key_degree] < key)
        .collect();
    steps.push(grid(
        "cyclic subgroups Z_N < SU2 short of the target, N <= 30",
        key_degree,
        key,
        true,
        short.iter().map(|&n| Ok(generate(&GroupSpec::CyclicSu2 { n })?)),
    )?);
    steps.push(grid(
        "binary dihedral subgroups D_N, N <= 30",
        key_degree,
        key,
        true,
        (1..=30u64).map(|n| Ok(generate(&GroupSpec::BinaryDihedral { n })?)),
    )?);

    if key_degree == 2 {
        steps.push(grid(
            "Type 1 f=g=2: alpha = diag(w_2r^(d+1), w_2r^(1-d)), 2 <= r <= 30",
            2,
            6,
            false,
            (2..=30u64).flat_map(|r| coprime_to(r).map(move |d| cyclic_generated(d as i64 + 1, 1 - d as i64, 2 * r))),
        )?);
        steps.push(grid(
            "Type 1 f=g=1: alpha = diag(w_r^(d+1), w_r^(1-d)), r even, 4 <= r <= 30",
            2,
            6,
            false,
            (4..=30u64)
                .step_by(2)
                .flat_map(|r| coprime_to(r).map(move |d| cyclic_generated(d as i64 + 1, 1 - d as i64, r))),
        )?);
        mismatches.push(explicit(GroupSpec::CyclicSu2 { n: 2 }, &target, 2)?);
        mismatches.push(explicit(GroupSpec::Duval3b { m: 1, l: 1 }, &target, 1)?);
        mismatches.push(explicit(GroupSpec::Duval3 { m: 1, l: 1 }, &target, 2)?);
    } else {
        steps.push(grid(
            "Type 1 f=g=1: alpha = diag(w_r^(d+1), w_r^(1-d)), r even, 8 <= r <= 30, 1 < d < r-1",
            3,
            4,
            false,
            (8..=30u64).step_by(2).flat_map(|r| {
                coprime_to(r)
                    .filter(move |&d| d > 1 && d < r - 1)
                    .map(move |d| cyclic_generated(d as i64 + 1, 1 - d as i64, r))
            }),
        )?);
        // d = 1 and d = r - 1 leave a coordinate fixed, so linear invariants exist
        let linear: Vec<_> = (4..=30u64)
            .step_by(2)
            .flat_map(|r| [1, r - 1].map(|d| cyclic_generated(d as i64 + 1, 1 - d as i64, r)))
            .collect::<Result<_, _>>()?;
        let linear_dims = linear
            .iter()
            .map(|g| dim_invariants(g, 1))
            .collect::<Result<Vec<_>, _>>()?;
        let min_linear = linear_dims.iter().copied().min().unwrap_or(0);
        let max_linear = linear_dims.iter().copied().max().unwrap_or(0);
        steps.push(GridStep {
            name: "Type 1 f=g=1, d = 1 or r-1: linear invariants present, r even, 4 <= r <= 30".into(),
            degree: 1,
            cases: linear.len(),
            min_dimension: min_linear,
            max_dimension: max_linear,
            claimed_bound: 1,
            holds: min_linear >= 1,
        });
        let t1 = |m, n, f, g, d| generate(&GroupSpec::Duval1 { m, n, f, g, d }).map_err(ObstructionError::from);
        steps.push(grid(
            "Type 1 f=3, g=1: (Z_3r/Z3; Z_r/1)_d, r even, 4 <= r <= 30",
            2,
            4,
            true,
            (4..=30u64)
                .step_by(2)
                .flat_map(move |r| coprime_to(r).map(move |d| t1(3 * r / 2, r / 2, 3, 1, d))),
        )?);
        steps.push(grid(
            "Type 1 f=1, g=3: (Z_r/1; Z_3r/Z3)_d, r even, 4 <= r <= 30",
            2,
            4,
            true,
            (4..=30u64)
                .step_by(2)
                .flat_map(move |r| coprime_to(r).map(move |d| t1(r / 2, 3 * r / 2, 1, 3, d))),
        )?);
        steps.push(grid(
            "Type 1 f=g=3: (Z_3r/Z3; Z_3r/Z3)_d, r even, 2 <= r <= 30",
            2,
            4,
            true,
            (2..=30u64)
                .step_by(2)
                .flat_map(move |r| coprime_to(r).map(move |d| t1(3 * r / 2, 3 * r / 2, 3, 3, d))),
        )?);
        mismatches.push(explicit(GroupSpec::Duval1 { m: 3, n: 1, f: 3, g: 1, d: 1 }, &target, 3)?);
        mismatches.push(explicit(GroupSpec::Duval1 { m: 1, n: 3, f: 1, g: 3, d: 1 }, &target, 3)?);
        mismatches.push(explicit(GroupSpec::Duval3b { m: 3, l: 3 }, &target, 2)?);
        mismatches.push(explicit(GroupSpec::Duval3b { m: 1, l: 3 }, &target, 2)?);
        mismatches.push(explicit(GroupSpec::Duval3b { m: 3, l: 1 }, &target, 2)?);
        mismatches.push(explicit(GroupSpec::Duval3b { m: 1, l: 1 }, &target, 1)?);
    }
    Ok(PaperArgumentReport {
        matrix: row,
        key_degree,
        key_coefficient: key,
        target,
        steps,
        mismatches,
    })
}
