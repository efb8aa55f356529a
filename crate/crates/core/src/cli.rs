//! Command-line front end. [`run`] takes the argument list and returns the
//! exit status with both output streams, so it can be tested in-process.

use crate::duval::{enumerate_duval, generate, ClassKind, GroupSpec};
use crate::invariants::{dim2_data, hilbert_basis_monomials, quotient_hilbert_series};
use crate::molien::molien_series;
use crate::obstruction::{
    certificate_summary, check_orbifold, series_to_u64, ExclusionCertificate, OrbifoldVerdict,
    DEFAULT_ORDER_CAP, DEFAULT_SERIES_ORDER,
};
use crate::poisson::verify_dim2_brackets;
use crate::weights::{cone_rays, cox_group, effectiveness_report, simplicial_check, WeightMatrix};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "TORIC_ORBIFOLD_THREADS";

/// Certificates printed in full unless `--all-certificates` is given.
pub const CERTIFICATE_PREVIEW: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "toric-orbifold",
    version,
    about = "Symplectic quotients by tori: simplicial criteria, Hilbert and Molien series, orbifold exclusion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct MatrixArg {
    /// Weight matrix: rows separated by ';', entries by whitespace, e.g. "-1 1 2"
    #[arg(short = 'A', long = "matrix", allow_hyphen_values = true)]
    matrix: String,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Effectiveness, polytope, simplicial criteria and the Cox group
    Analyze(MatrixArg),
    /// Hilbert series of the symplectic quotient
    Hilbert {
        #[command(flatten)]
        m: MatrixArg,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// Hilbert basis of invariant monomials up to a degree
    Basis {
        #[command(flatten)]
        m: MatrixArg,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Molien series of a finite subgroup of U2
    Molien {
        /// JSON spec or shorthand: su2:N, scalar:N, dihedral:N, T, O, I, duval1:m,n,f,g,d, duval3b:m,l, ...
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long)]
        json: bool,
    },
    /// Orbifold verdict, with exclusion certificates when no group matches
    CheckOrbifold {
        #[command(flatten)]
        m: MatrixArg,
        #[arg(long, default_value_t = DEFAULT_SERIES_ORDER)]
        order: usize,
        #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
        cap: u64,
        /// Print every certificate instead of a summary and a preview
        #[arg(long)]
        all_certificates: bool,
    },
    /// Isomorphism data with C/Z_N for a dimension-2 quotient
    Dim2(MatrixArg),
    /// Conjugacy classes of du Val groups up to an order
    DuvalList {
        #[arg(long, default_value_t = 24)]
        cap: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    Analysis { kind: &'static str, message: String },
}

fn analysis<E: std::fmt::Display>(kind: &'static str) -> impl FnOnce(E) -> CliError {
    move |e| CliError::Analysis {
        kind,
        message: e.to_string(),
    }
}

/// Parses "r11 r12 ...; r21 ..." into a weight matrix.
pub fn parse_matrix(s: &str) -> Result<WeightMatrix, String> {
    let rows: Vec<Vec<i64>> = s
        .split(';')
        .map(|r| {
            r.split_whitespace()
                .map(|x| x.parse::<i64>().map_err(|e| format!("bad entry {x:?}: {e}")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    if rows.iter().any(|r| r.is_empty()) {
        return Err("empty row".into());
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err("rows have different lengths".into());
    }
    WeightMatrix::from_rows(&rows).map_err(|e| e.to_string())
}

fn parse_params(s: &str, count: usize) -> Result<Vec<u64>, String> {
    let v: Vec<u64> = s
        .split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|e| format!("bad parameter {x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != count {
        return Err(format!("expected {count} parameters, got {}", v.len()));
    }
    Ok(v)
}

/// Parses a group given as tagged JSON or as a shorthand.
pub fn parse_group(s: &str) -> Result<GroupSpec, String> {
    use GroupSpec::*;
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| e.to_string());
    }
    let (name, params) = s.split_once(':').unwrap_or((s, ""));
    let one = |p| parse_params(p, 1).map(|v| v[0]);
    let two = |p| parse_params(p, 2).map(|v| (v[0], v[1]));
    Ok(match name.to_ascii_lowercase().as_str() {
        "su2" | "cyclic_su2" => CyclicSu2 { n: one(params)? },
        "scalar" | "cyclic_scalar" => CyclicScalar { n: one(params)? },
        "dihedral" | "binary_dihedral" => BinaryDihedral { n: one(params)? },
        "t" | "t24" | "binary_tetrahedral" => BinaryTetrahedral,
        "o" | "o48" | "binary_octahedral" => BinaryOctahedral,
        "i" | "i120" | "binary_icosahedral" => BinaryIcosahedral,
        "duval1" => {
            let v = parse_params(params, 5)?;
            Duval1 { m: v[0], n: v[1], f: v[2], g: v[3], d: v[4] }
        }
        "duval2" => two(params).map(|(m, l)| Duval2 { m, l })?,
        "duval3" => two(params).map(|(m, l)| Duval3 { m, l })?,
        "duval3b" => two(params).map(|(m, l)| Duval3b { m, l })?,
        "duval4" => two(params).map(|(m, l)| Duval4 { m, l })?,
        "duval5" => Duval5 { m: one(params)? },
        "duval6" => Duval6 { m: one(params)? },
        "duval7" => Duval7 { m: one(params)? },
        "duval8" => Duval8 { m: one(params)? },
        "duval9" => Duval9 { m: one(params)? },
        other => return Err(format!("unknown group {other:?}")),
    })
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn series_text(c: &[u64]) -> String {
    let mut terms = Vec::new();
    for (k, &v) in c.iter().enumerate() {
        if v == 0 {
            continue;
        }
        terms.push(match (k, v) {
            (0, v) => v.to_string(),
            (1, 1) => "t".into(),
            (1, v) => format!("{v}t"),
            (k, 1) => format!("t^{k}"),
            (k, v) => format!("{v}t^{k}"),
        });
    }
    format!("{} + O(t^{})", terms.join(" + "), c.len())
}

fn analyze(m: &MatrixArg) -> Result<String, CliError> {
    let w = parse_matrix(&m.matrix).map_err(CliError::Parse)?;
    let eff = effectiveness_report(&w);
    let simp = simplicial_check(&eff.reduced).map_err(analysis("weight"))?;
    let cox = if eff.effective && !simp.polytope.is_empty() {
        cox_group(&w).ok()
    } else {
        None
    };
    let rays = cone_rays(&eff.reduced).map_err(analysis("weight"))?;
    if m.json {
        return Ok(to_json(&json!({
            "matrix": w.rows_i64(),
            "effectiveness": eff,
            "vertices": simp.polytope.vertices.iter()
                .map(|v| v.iter().map(crate::exact::rat_to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "dimension": simp.polytope.dimension,
            "simplicial": simp.simplicial,
            "vertex_count": simp.vertex_count,
            "standard_form": simp.standard_form,
            "normals": simp.normals,
            "criteria_agree": simp.criteria_agree,
            "rays": rays.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "cox_group": cox,
        })));
    }
    let mut out = String::new();
    let _ = writeln!(out, "matrix: {:?}", w.rows_i64());
    let _ = writeln!(
        out,
        "effective: {} (rank {}, minors gcd {})",
        eff.effective, eff.rank, eff.minors_gcd
    );
    if !eff.effective {
        let _ = writeln!(out, "reduced: {:?}", eff.reduced.rows_i64());
    }
    let _ = writeln!(
        out,
        "polytope: {} vertices, dimension {}",
        simp.vertex_count, simp.polytope.dimension
    );
    for v in &simp.polytope.vertices {
        let v: Vec<String> = v.iter().map(crate::exact::rat_to_string).collect();
        let _ = writeln!(out, "  ({})", v.join(", "));
    }
    let _ = writeln!(out, "simplicial: {}", simp.simplicial);
    if let Some(sf) = &simp.standard_form {
        let _ = writeln!(out, "standard form column order: {:?}", sf.perm);
    }
    if let Some(c) = cox {
        let f: Vec<String> = c.invariant_factors.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "Cox group order {} (invariant factors [{}])", c.order, f.join(", "));
    }
    Ok(out)
}

fn hilbert(m: &MatrixArg, order: usize) -> Result<String, CliError> {
    let w = parse_matrix(&m.matrix).map_err(CliError::Parse)?;
    let s = quotient_hilbert_series(&w, order).map_err(analysis("invariant"))?;
    let c = series_to_u64(&s).map_err(analysis("invariant"))?;
    Ok(if m.json {
        to_json(&json!({ "order": order, "coefficients": c }))
    } else {
        format!("{}\n", series_text(&c))
    })
}

fn basis(m: &MatrixArg, order: usize) -> Result<String, CliError> {
    let w = parse_matrix(&m.matrix).map_err(CliError::Parse)?;
    let b = hilbert_basis_monomials(&w, order).map_err(analysis("invariant"))?;
    if m.json {
        return Ok(to_json(&b));
    }
    let mut out = format!(
        "{} generators up to degree {} (complete: {})\n",
        b.generators.len(),
        b.degree_cap,
        b.complete
    );
    for g in &b.generators {
        let _ = writeln!(out, "  {g}  (degree {})", g.degree());
    }
    Ok(out)
}

fn molien(group: &str, order: usize, as_json: bool) -> Result<String, CliError> {
    let spec = parse_group(group).map_err(CliError::Parse)?;
    spec.validate().map_err(|e| CliError::Parse(e.to_string()))?;
    let g = generate(&spec).map_err(analysis("group"))?;
    let r = molien_series(&g, order).map_err(analysis("molien"))?;
    Ok(if as_json {
        to_json(&r)
    } else {
        format!(
            "{spec} (order {})\n{}\nmax integrality drift {:.3e}\n",
            r.group_order,
            series_text(&r.coefficients),
            r.drift
        )
    })
}

fn certificate_line(c: &ExclusionCertificate) -> String {
    let mut s = format!(
        "{} (order {}): t^{} coefficient {} vs {}",
        c.candidate, c.order, c.mismatch_degree, c.group_coefficient, c.target_coefficient
    );
    if let Some(w) = &c.pruned_by {
        let _ = write!(
            s,
            ", pruned by {} with coefficient {}",
            w,
            c.witness_coefficient.unwrap_or_default()
        );
    }
    s
}

fn check(m: &MatrixArg, order: usize, cap: u64, all: bool) -> Result<String, CliError> {
    let w = parse_matrix(&m.matrix).map_err(CliError::Parse)?;
    let v = check_orbifold(&w, order, cap).map_err(analysis("obstruction"))?;
    if m.json {
        let mut value = serde_json::to_value(&v).expect("serializable");
        if let (OrbifoldVerdict::NoFiniteMatchUpToBound { certificates, .. }, false) = (&v, all) {
            let summary: Vec<Value> = certificate_summary(certificates)
                .into_iter()
                .map(|(family, degree, pruned, count)| {
                    json!({"family": family, "mismatch_degree": degree, "pruned": pruned, "count": count})
                })
                .collect();
            value["certificate_count"] = json!(certificates.len());
            value["certificate_summary"] = json!(summary);
            value["certificates"] = serde_json::to_value(&certificates[..certificates.len().min(CERTIFICATE_PREVIEW)])
                .expect("serializable");
            value["certificates_truncated"] = json!(certificates.len() > CERTIFICATE_PREVIEW);
        }
        return Ok(to_json(&value));
    }
    let mut out = format!("verdict: {}\n", v.name());
    match &v {
        OrbifoldVerdict::NotRationalHomologyManifold { vertex_count, polytope } => {
            let _ = writeln!(
                out,
                "polytope has {vertex_count} vertices in dimension {}, so the cone is not simplicial",
                polytope.dimension
            );
        }
        OrbifoldVerdict::Dim2Orbifold { data, target_n } => {
            let _ = writeln!(
                out,
                "quotient is C/Z_{target_n} (A = {}, M = {}, beta = {})",
                data.cal_a,
                data.cal_m,
                crate::exact::rat_to_string(&data.beta)
            );
        }
        OrbifoldVerdict::NoFiniteMatchUpToBound {
            order_cap,
            series_order,
            certificates,
        } => {
            let _ = writeln!(
                out,
                "no finite subgroup of U2 of order <= {order_cap} matches the Hilbert series through t^{series_order}"
            );
            let _ = writeln!(out, "{} certificates", certificates.len());
            for (family, degree, pruned, count) in certificate_summary(certificates) {
                let how = if pruned { "pruned by a subgroup" } else { "direct" };
                let _ = writeln!(out, "  {family:>12}  t^{degree}  {how:<20} {count}");
            }
            let shown = if all { certificates.len() } else { CERTIFICATE_PREVIEW };
            for c in certificates.iter().take(shown) {
                let _ = writeln!(out, "  {}", certificate_line(c));
            }
            if certificates.len() > shown {
                let _ = writeln!(out, "  ... ({} more, use --all-certificates)", certificates.len() - shown);
            }
        }
        OrbifoldVerdict::CandidatesFound { candidates } => {
            for c in candidates {
                let _ = writeln!(out, "  {c}");
            }
        }
        OrbifoldVerdict::PointQuotient => {
            let _ = writeln!(out, "the zero fiber is the origin");
        }
    }
    Ok(out)
}

fn dim2(m: &MatrixArg) -> Result<String, CliError> {
    let w = parse_matrix(&m.matrix).map_err(CliError::Parse)?;
    let reduced = effectiveness_report(&w).reduced;
    let data = dim2_data(&reduced).map_err(analysis("invariant"))?;
    let brackets = verify_dim2_brackets(&reduced).map_err(analysis("poisson"))?;
    if m.json {
        return Ok(to_json(&json!({ "data": data, "brackets": brackets })));
    }
    let r = crate::exact::rat_to_string;
    let mut out = String::new();
    let _ = writeln!(out, "column order {:?}, a = {:?}, n = {:?}", data.perm, data.a, data.n_col);
    let _ = writeln!(out, "A = {}, m = {:?}, M = {}, N = {}", data.cal_a, data.m, data.cal_m, data.big_n);
    let _ = writeln!(
        out,
        "beta = {}, alpha^2 = {}, B = {}",
        r(&data.beta),
        r(&data.alpha_sq),
        r(&data.cal_b)
    );
    let _ = writeln!(out, "kernel:");
    for k in &data.kernel_generators {
        let _ = writeln!(out, "  {k}");
    }
    let _ = writeln!(out, "verified identities:");
    for i in &brackets.identities {
        let _ = writeln!(out, "  {i}");
    }
    Ok(out)
}

fn duval_list(cap: u64, as_json: bool) -> Result<String, CliError> {
    let classes = enumerate_duval(cap).map_err(analysis("group"))?;
    if as_json {
        let v: Vec<Value> = classes
            .iter()
            .map(|c| {
                json!({
                    "name": c.spec.to_string(),
                    "order": c.order,
                    "spec": c.spec,
                    "aliases": c.aliases.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                    "diagonal": match c.kind { ClassKind::Diagonal { lattice } => Some(lattice), ClassKind::General => None },
                })
            })
            .collect();
        return Ok(to_json(&v));
    }
    let mut out = format!("{} conjugacy classes of order <= {cap}\n", classes.len());
    for c in &classes {
        let aliases: Vec<String> = c.aliases.iter().map(|a| a.to_string()).collect();
        let kind = if c.is_diagonal() { "abelian" } else { "" };
        let _ = write!(out, "{:>5}  {:<28} {kind:<8}", c.order, c.spec.to_string());
        if !aliases.is_empty() {
            let _ = write!(out, " = {}", aliases.join(" = "));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Runs one invocation; `args` excludes the program name.
pub fn run<I, S>(args: I) -> CommandOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("toric-orbifold")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let status = if e.use_stderr() { 2 } else { 0 };
            return if status == 0 {
                CommandOutput { status, stdout: text, stderr: String::new() }
            } else {
                CommandOutput { status, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = match &cli.command {
        Command::Analyze(m) => analyze(m),
        Command::Hilbert { m, order } => hilbert(m, *order),
        Command::Basis { m, order } => basis(m, *order),
        Command::Molien { group, order, json } => molien(group, *order, *json),
        Command::CheckOrbifold {
            m,
            order,
            cap,
            all_certificates,
        } => check(m, *order, *cap, *all_certificates),
        Command::Dim2(m) => dim2(m),
        Command::DuvalList { cap, json } => duval_list(*cap, *json),
    };
    match result {
        Ok(stdout) => CommandOutput {
            status: 0,
            stdout,
            stderr: String::new(),
        },
        Err(CliError::Parse(message)) => CommandOutput {
            status: 2,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        },
        Err(CliError::Analysis { kind, message }) => CommandOutput {
            status: 1,
            stdout: to_json(&json!({ "error": kind, "message": message })),
            stderr: format!("error: {message}\n"),
        },
    }
}
