//! Serializable end-to-end reports over parsed definition files.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::extension::{check_cocycle, coboundary_from, pseudo_class, CocycleReport, ExtendedAlgebra, Extension, ThetaChecks};
use crate::group_law::{AxiomReport, DEFAULT_JET_ORDER};
use crate::lie::{left_right_commute_residuals, maurer_cartan_residuals, BracketEntry};
use crate::linalg;
use crate::polarization::{self, find_polarizations, search_family, PolarizationSummary, Verdict};
use crate::specfile::{GroupSpec, NamedVector, SpecFile};
use crate::symbolic::{Expr, Scalar, SymbolKind, SymbolTable};
use crate::virasoro::{self, Characteristic, VirasoroSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Computation(String),
}

fn input(e: impl ToString) -> ReportError {
    ReportError::Input(e.to_string())
}

fn computation(e: impl ToString) -> ReportError {
    ReportError::Computation(e.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub kind: &'static str,
    pub axioms: Option<AxiomReport>,
    /// Exact inverse found by solving `g * g^-1 = e`.
    pub inverse_exact: Option<bool>,
    pub cocycle: Option<CocycleReport>,
    /// Cocycle identity for the coboundary of the generating function.
    pub coboundary: Option<CocycleReport>,
    pub jacobi_residuals: Vec<String>,
    pub defects: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.defects.is_empty()
    }
}

fn group_check(g: &GroupSpec) -> Result<CheckReport, ReportError> {
    let mut defects = Vec::new();
    let axioms = g.law.verify_axioms().map_err(computation)?;
    for c in axioms.checks.iter().filter(|c| !c.passed) {
        defects.push(format!("axiom `{}` fails: {}", c.axiom, c.residual.join("; ")));
    }
    let inverse = g.law.invert(DEFAULT_JET_ORDER).map_err(computation)?;
    let mut cocycle = None;
    if let Some(xi) = &g.cocycle {
        let r = check_cocycle(xi, &g.law).map_err(computation)?;
        if !r.passed() {
            defects.push(format!("cocycle fails: residual {}", r.residual.clone().unwrap_or_default()));
        }
        cocycle = Some(r);
    }
    let mut coboundary = None;
    if let Some(lambda) = &g.generating {
        let xi = coboundary_from(lambda, &g.law).map_err(computation)?;
        let r = check_cocycle(&xi, &g.law).map_err(computation)?;
        if !r.passed() {
            defects.push(format!("coboundary fails: residual {}", r.residual.clone().unwrap_or_default()));
        }
        coboundary = Some(r);
    }
    Ok(CheckReport {
        name: g.name.clone(),
        kind: "group",
        axioms: Some(axioms),
        inverse_exact: Some(inverse.exact),
        cocycle,
        coboundary,
        jacobi_residuals: Vec::new(),
        defects,
    })
}

pub fn check(spec: &SpecFile) -> Result<CheckReport, ReportError> {
    let blank = |name: &str, kind, jacobi: Vec<String>| {
        let defects = jacobi.iter().map(|r| format!("Jacobi fails on {r}")).collect();
        CheckReport {
            name: name.into(),
            kind,
            axioms: None,
            inverse_exact: None,
            cocycle: None,
            coboundary: None,
            jacobi_residuals: jacobi,
            defects,
        }
    };
    match spec {
        SpecFile::Group(g) => group_check(g),
        SpecFile::Algebra(a) => {
            let full = a.algebra.full_algebra();
            let mut r = full.antisymmetry_residuals();
            r.extend(full.jacobi_residuals());
            Ok(blank(&a.name, "algebra", r))
        }
        SpecFile::Virasoro { name, values } => {
            let v = virasoro_spec(values)?;
            Ok(blank(name, "virasoro", v.jacobi_residuals()))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldEntry {
    pub generator: String,
    pub field: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub name: String,
    pub kind: &'static str,
    pub left_fields: Vec<FieldEntry>,
    pub right_fields: Vec<FieldEntry>,
    pub structure_constants: Vec<BracketEntry>,
    pub right_structure_constants: Vec<BracketEntry>,
    pub maurer_cartan_residuals: Vec<String>,
    pub left_right_residuals: Vec<String>,
    pub quantization_form: Option<String>,
    pub theta_checks: Option<ThetaChecks>,
    /// Nonzero entries `Sigma(X_i, X_j)` for `i < j`.
    pub two_form: Vec<BracketEntry>,
    pub theta_at_identity: Vec<String>,
    pub characteristic: Vec<String>,
    pub characteristic_closed: bool,
    /// Central, horizontal generators.
    pub gauge_generators: Vec<String>,
    pub noether_invariants: BTreeMap<String, String>,
    /// Noether invariant of each gauge generator.
    pub gauge_invariants: Vec<String>,
    /// Values of the generating function's gradient at the identity.
    pub pseudo_class: Option<Vec<String>>,
    pub virasoro: Option<Characteristic>,
}

fn fields(names: &[String], fields: &[crate::lie::VectorField], coords: &[crate::symbolic::Sym]) -> Vec<FieldEntry> {
    names
        .iter()
        .zip(fields)
        .map(|(n, f)| FieldEntry { generator: n.clone(), field: f.render(coords) })
        .collect()
}

fn two_form(alg: &ExtendedAlgebra) -> Vec<BracketEntry> {
    let names = alg.names();
    let mut out = Vec::new();
    for i in 0..alg.dim() {
        for j in i + 1..alg.dim() {
            if !alg.sigma[i][j].is_zero() {
                out.push(BracketEntry { left: names[i].clone(), right: names[j].clone(), value: alg.sigma[i][j].to_string() });
            }
        }
    }
    out
}

/// Basis of horizontal elements commuting with every generator, `Xi` included.
pub fn gauge_generators(alg: &ExtendedAlgebra) -> Vec<Vec<Expr>> {
    let full = alg.full_algebra();
    let n = alg.dim();
    let mut rows: Vec<Vec<Expr>> = Vec::new();
    for j in 0..=n {
        for k in 0..=n {
            rows.push((0..n).map(|i| full.c[i][j][k].clone()).collect());
        }
    }
    rows.push(alg.theta_e.clone());
    linalg::nullspace(&rows, n)
        .into_iter()
        .map(|mut v| {
            v.push(Expr::zero());
            v
        })
        .collect()
}

fn algebra_part(alg: &ExtendedAlgebra) -> (Vec<BracketEntry>, Vec<BracketEntry>, Vec<String>, Vec<String>, bool, Vec<String>) {
    let chars = polarization::characteristic_subalgebra(alg);
    (
        alg.full_algebra().table(),
        two_form(alg),
        alg.theta_e.iter().map(Expr::to_string).collect(),
        chars.basis.iter().map(|v| polarization::render(alg, v)).collect(),
        chars.closed,
        gauge_generators(alg).iter().map(|v| polarization::render(alg, v)).collect(),
    )
}

fn empty_analysis(name: &str, kind: &'static str) -> AnalyzeReport {
    AnalyzeReport {
        name: name.into(),
        kind,
        left_fields: Vec::new(),
        right_fields: Vec::new(),
        structure_constants: Vec::new(),
        right_structure_constants: Vec::new(),
        maurer_cartan_residuals: Vec::new(),
        left_right_residuals: Vec::new(),
        quantization_form: None,
        theta_checks: None,
        two_form: Vec::new(),
        theta_at_identity: Vec::new(),
        characteristic: Vec::new(),
        characteristic_closed: true,
        gauge_generators: Vec::new(),
        noether_invariants: BTreeMap::new(),
        gauge_invariants: Vec::new(),
        pseudo_class: None,
        virasoro: None,
    }
}

pub fn extension_of(g: &GroupSpec) -> Result<Extension, ReportError> {
    let xi = g.cocycle.clone().unwrap_or_else(Expr::zero);
    Extension::build(&g.law, &xi, &g.theta_scale).map_err(computation)
}

pub fn analyze(spec: &SpecFile) -> Result<AnalyzeReport, ReportError> {
    match spec {
        SpecFile::Group(g) => {
            let ext = extension_of(g)?;
            let coords = &ext.law.coords;
            let names = &ext.lie.algebra.names;
            let (table, sigma, theta_e, characteristic, closed, gauge) = algebra_part(&ext.algebra);
            let invariants = ext.noether_invariants();
            let noether = names.iter().zip(&invariants).map(|(n, f)| (n.clone(), f.to_string())).collect();
            let gauge_invariants = gauge_generators(&ext.algebra)
                .iter()
                .map(|v| v.iter().zip(&invariants).fold(Expr::zero(), |acc, (c, f)| &acc + &(c * f)).to_string())
                .collect();
            let pseudo = match &g.generating {
                Some(l) => Some(pseudo_class(l, &g.law).map_err(computation)?.iter().map(Expr::to_string).collect()),
                None => None,
            };
            Ok(AnalyzeReport {
                left_fields: fields(names, &ext.lie.left, coords),
                right_fields: fields(&ext.lie.right_algebra.names, &ext.lie.right, coords),
                structure_constants: table,
                right_structure_constants: ext.lie.right_algebra.table(),
                maurer_cartan_residuals: maurer_cartan_residuals(&ext.lie.forms, &ext.lie.algebra, coords),
                left_right_residuals: left_right_commute_residuals(&ext.lie.left, &ext.lie.right, coords),
                quantization_form: Some(render_form(&ext.theta.form.comps, coords)),
                theta_checks: Some(ext.theta_checks()),
                two_form: sigma,
                theta_at_identity: theta_e,
                characteristic,
                characteristic_closed: closed,
                gauge_generators: gauge,
                noether_invariants: noether,
                gauge_invariants,
                pseudo_class: pseudo,
                ..empty_analysis(&g.name, "group")
            })
        }
        SpecFile::Algebra(a) => {
            let (table, sigma, theta_e, characteristic, closed, gauge) = algebra_part(&a.algebra);
            Ok(AnalyzeReport {
                structure_constants: table,
                two_form: sigma,
                theta_at_identity: theta_e,
                characteristic,
                characteristic_closed: closed,
                gauge_generators: gauge,
                ..empty_analysis(&a.name, "algebra")
            })
        }
        SpecFile::Virasoro { name, values } => {
            let v = virasoro_spec(values)?;
            let ch = virasoro::characteristic_modes(&v);
            Ok(AnalyzeReport {
                characteristic: ch.kernel_modes.iter().map(|&n| virasoro::mode_name(n)).collect(),
                characteristic_closed: ch.closed,
                virasoro: Some(ch),
                ..empty_analysis(name, "virasoro")
            })
        }
    }
}

fn render_form(comps: &[Expr], coords: &[crate::symbolic::Sym]) -> String {
    let terms: Vec<String> = comps
        .iter()
        .zip(coords)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, x)| format!("({c}) d{x}"))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnomalySummary {
    pub at: String,
    pub verdict: Verdict,
    pub method: String,
    pub witnesses: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolarizeReport {
    pub name: String,
    pub family: Vec<String>,
    pub explored: usize,
    pub complete: bool,
    /// Surfaced verbatim when the search hits its limit.
    pub notice: Option<String>,
    pub polarizations: Vec<PolarizationSummary>,
    pub anomaly: Vec<AnomalySummary>,
}

impl PolarizeReport {
    pub fn passed(&self) -> bool {
        self.complete
    }
}

pub const INCOMPLETE_SEARCH: &str = "incomplete search: the candidate limit was reached before the enumeration finished";

fn pairs(v: &[NamedVector]) -> Vec<(String, Vec<Expr>)> {
    v.iter().map(|s| (s.name.clone(), s.coeffs.clone())).collect()
}

/// Parameters that may vanish are scanned at zero as well.
fn vanishing_parameters(table: &SymbolTable, alg: &ExtendedAlgebra) -> Vec<crate::symbolic::Sym> {
    let used = alg.parameters();
    table
        .entries()
        .iter()
        .filter(|(s, k)| matches!(k, SymbolKind::Parameter { nonzero: false, positive: false }) && used.contains(s))
        .map(|(s, _)| s.clone())
        .collect()
}

pub fn polarize(spec: &SpecFile) -> Result<PolarizeReport, ReportError> {
    let (name, alg, table, diag, seeds) = match spec {
        SpecFile::Group(g) => {
            let ext = extension_of(g)?;
            (g.name.clone(), ext.algebra, g.law.table.clone(), pairs(&g.diagonalizable), pairs(&g.seeds))
        }
        SpecFile::Algebra(a) => (a.name.clone(), a.algebra.clone(), a.table.clone(), pairs(&a.diagonalizable), pairs(&a.seeds)),
        SpecFile::Virasoro { .. } => {
            return Err(input("Virasoro data has no finite polarization search; use the virasoro command"))
        }
    };
    let family = search_family(&alg, &diag, &seeds);
    let result = find_polarizations(&alg, &family);
    let anomaly = polarization::anomaly_scan(&alg, &vanishing_parameters(&table, &alg))
        .into_iter()
        .map(|(at, r)| AnomalySummary {
            at,
            verdict: r.verdict,
            method: r.method.clone(),
            witnesses: r
                .witnesses
                .iter()
                .map(|w| w.iter().map(|v| polarization::render(&alg, v)).collect())
                .collect(),
        })
        .collect();
    Ok(PolarizeReport {
        name,
        family: family.iter().map(|m| m.label.clone()).collect(),
        explored: result.explored,
        complete: result.complete,
        notice: (!result.complete).then(|| INCOMPLETE_SEARCH.to_string()),
        polarizations: result.polarizations.iter().map(|p| p.summary(&alg)).collect(),
        anomaly,
    })
}

/// Reads `cutoff`, `c`, `cprime` from Virasoro key/value data; `cprime` defaults to `c r^2`.
pub fn virasoro_spec(values: &BTreeMap<String, String>) -> Result<VirasoroSpec, ReportError> {
    let cutoff = values.get("cutoff").map(|s| s.parse::<i64>().map_err(input)).transpose()?.unwrap_or(6);
    let c = rational_value(values, "c")?.unwrap_or_else(Scalar::one);
    let r = values.get("r").map(|s| s.parse::<i64>().map_err(input)).transpose()?;
    let cp = match (rational_value(values, "cprime")?, r) {
        (Some(cp), _) => cp,
        (None, Some(r)) => &c * &Scalar::from_int(r * r),
        (None, None) => c.clone(),
    };
    VirasoroSpec::new(cutoff, Expr::constant(c), Expr::constant(cp)).map_err(input)
}

pub fn rational_value(values: &BTreeMap<String, String>, key: &str) -> Result<Option<Scalar>, ReportError> {
    values
        .get(key)
        .map(|s| parse_rational(s).ok_or_else(|| input(format!("`{key} = {s}` is not a rational number"))))
        .transpose()
}

/// `p`, `-p`, or `p/q` with integer `p`, `q`.
pub fn parse_rational(s: &str) -> Option<Scalar> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().ok()?, d.trim().parse::<i64>().ok()?),
        None => (s.parse::<i64>().ok()?, 1),
    };
    (d != 0).then(|| Scalar::from_ratio(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load;

    #[test]
    fn fixtures_check() {
        for name in ["galilei", "hw", "rk", "schrodinger", "su2", "template", "virasoro"] {
            let r = check(&load(name).unwrap()).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.defects);
        }
    }

    #[test]
    fn gauge_generators_of_fixtures() {
        let su2 = analyze(&load("su2").unwrap()).unwrap();
        assert_eq!(su2.gauge_generators, vec!["z1 + z1c".to_string()]);
        assert_eq!(su2.noether_invariants.len(), 4);
        let sch = analyze(&load("schrodinger").unwrap()).unwrap();
        assert_eq!(sch.gauge_generators.len(), 1);
        assert_eq!(sch.gauge_generators, vec!["A + D".to_string()]);
        assert_eq!(sch.gauge_invariants, vec!["0".to_string()]);
        assert!(sch.maurer_cartan_residuals.is_empty());
    }

    #[test]
    fn kernel_directions_of_rk() {
        let r = analyze(&load("rk").unwrap()).unwrap();
        assert_eq!(r.characteristic, vec!["a".to_string()]);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6"), Some(Scalar::from_ratio(-1, 2)));
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1/0"), None);
    }
}
