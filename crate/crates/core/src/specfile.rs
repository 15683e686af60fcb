//! Plain-text group definition files.
//!
//! ```text
//! name = galilei
//! [parameters]
//! m = positive
//! [coordinates]        # name = identity value
//! B = 0
//! [aux]                # name = radicand (polynomial in coordinates)
//! s = A*D - B*C
//! [law]                # one entry per coordinate and auxiliary symbol
//! B = B' + B
//! [inverse]            # optional
//! [cocycle]            # xi = two-slot expression
//! [generating]         # lambda = one-slot expression
//! [theta]              # scale = normalization of the quantization form
//! [algebra]            # abstract algebras: generators = e1, e2, ...
//! [brackets]           # e1, e2 = combination (Xi allowed)
//! [seeds]              # name = combination of generators (Xi allowed)
//! [diagonalizable]     # name = combination of generators
//! [options]            # free-form key = value
//! ```
//!
//! `#` starts a comment. Sections may appear in any order except that `[parameters]`,
//! `[coordinates]` and `[aux]` must precede sections holding expressions.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::extension::{ExtendedAlgebra, CENTRAL};
use crate::group_law::{declare_primes, AuxLaw, GroupError, GroupLaw};
use crate::lie::LieAlgebra;
use crate::symbolic::{parse_expr, Expr, Poly, Sym, SymbolKind, SymbolTable, SymbolicError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

type Result<T> = std::result::Result<T, SpecError>;

/// Named linear combination of generators; the last entry is the `Xi` coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedVector {
    pub name: String,
    pub coeffs: Vec<Expr>,
}

#[derive(Debug, Clone)]
pub struct GroupSpec {
    pub name: String,
    pub law: GroupLaw,
    pub cocycle: Option<Expr>,
    pub generating: Option<Expr>,
    pub theta_scale: Expr,
    pub seeds: Vec<NamedVector>,
    pub diagonalizable: Vec<NamedVector>,
    pub options: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub struct AlgebraSpec {
    pub name: String,
    pub table: SymbolTable,
    pub algebra: ExtendedAlgebra,
    pub seeds: Vec<NamedVector>,
    pub diagonalizable: Vec<NamedVector>,
    pub options: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub enum SpecFile {
    Group(Box<GroupSpec>),
    Algebra(Box<AlgebraSpec>),
    /// Key/value data for the Virasoro tools.
    Virasoro { name: String, values: BTreeMap<String, String> },
}

impl SpecFile {
    pub fn name(&self) -> &str {
        match self {
            SpecFile::Group(g) => &g.name,
            SpecFile::Algebra(a) => &a.name,
            SpecFile::Virasoro { name, .. } => name,
        }
    }
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

fn err(line: usize, message: impl Into<String>) -> SpecError {
    SpecError::Line { line, message: message.into() }
}

fn sym_err(line: usize, e: SymbolicError) -> SpecError {
    err(line, e.to_string())
}

/// Splits the file into sections of `key = value` entries.
fn sections(text: &str) -> Result<(Vec<Entry>, BTreeMap<String, Vec<Entry>>, Vec<String>)> {
    let mut top = Vec::new();
    let mut map: BTreeMap<String, Vec<Entry>> = BTreeMap::new();
    let mut order = Vec::new();
    let mut current: Option<String> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line, "unterminated section header"))?
                .trim()
                .to_string();
            if map.contains_key(&name) {
                return Err(err(line, format!("duplicate section [{name}]")));
            }
            map.insert(name.clone(), Vec::new());
            order.push(name.clone());
            current = Some(name);
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| err(line, "expected `key = value`"))?;
        let entry = Entry { line, key: key.trim().to_string(), value: value.trim().to_string() };
        match &current {
            Some(s) => map.get_mut(s).expect("section").push(entry),
            None => top.push(entry),
        }
    }
    Ok((top, map, order))
}

const KNOWN: &[&str] = &[
    "parameters",
    "coordinates",
    "aux",
    "law",
    "inverse",
    "cocycle",
    "generating",
    "theta",
    "algebra",
    "brackets",
    "seeds",
    "diagonalizable",
    "options",
    "virasoro",
];

pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let (top, secs, order) = sections(text)?;
    for s in &order {
        if !KNOWN.contains(&s.as_str()) {
            return Err(SpecError::Invalid(format!("unknown section [{s}]")));
        }
    }
    let name = top
        .iter()
        .find(|e| e.key == "name")
        .map(|e| e.value.clone())
        .ok_or_else(|| SpecError::Invalid("missing `name = ...`".into()))?;
    let empty = Vec::new();
    let sec = |n: &str| secs.get(n).unwrap_or(&empty);
    let options: BTreeMap<String, String> =
        sec("options").iter().map(|e| (e.key.clone(), e.value.clone())).collect();

    if secs.contains_key("virasoro") {
        let values = sec("virasoro").iter().map(|e| (e.key.clone(), e.value.clone())).collect();
        return Ok(SpecFile::Virasoro { name, values });
    }

    let mut table = SymbolTable::new();
    for e in sec("parameters") {
        let (positive, nonzero) = match e.value.as_str() {
            "positive" => (true, true),
            "nonzero" => (false, true),
            "real" | "" => (false, false),
            other => return Err(err(e.line, format!("unknown parameter flag `{other}`"))),
        };
        table.parameter(&e.key, positive, nonzero).map_err(|x| sym_err(e.line, x))?;
    }

    if secs.contains_key("algebra") {
        return parse_algebra(name, table, sec("algebra"), sec("brackets"), sec("seeds"), sec("diagonalizable"), options);
    }

    let mut coords = Vec::new();
    for e in sec("coordinates") {
        coords.push(table.coordinate(&e.key).map_err(|x| sym_err(e.line, x))?);
    }
    if coords.is_empty() {
        return Err(SpecError::Invalid("no coordinates declared".into()));
    }
    let identity: Vec<Expr> = sec("coordinates")
        .iter()
        .map(|e| parse_expr(&e.value, &table).map_err(|x| sym_err(e.line, x)))
        .collect::<Result<_>>()?;
    let mut aux_syms = Vec::new();
    for e in sec("aux") {
        let r = parse_expr(&e.value, &table).map_err(|x| sym_err(e.line, x))?;
        if !r.is_polynomial() || !r.numer().aux_syms().is_empty() {
            return Err(err(e.line, "radicand must be a polynomial in the coordinates"));
        }
        aux_syms.push(table.aux(&e.key, r.numer().clone()).map_err(|x| sym_err(e.line, x))?);
    }
    declare_primes(&mut table, &coords, &aux_syms)?;

    let find = |entries: &Vec<Entry>, key: &str| entries.iter().find(|e| e.key == key).map(|e| (e.line, e.value.clone()));
    let parse_at = |line: usize, v: &str, t: &SymbolTable| parse_expr(v, t).map_err(|x| sym_err(line, x));

    let mut law = Vec::new();
    for c in &coords {
        let (line, v) = find(sec("law"), c.name()).ok_or_else(|| SpecError::Invalid(format!("[law] missing `{c}`")))?;
        law.push(parse_at(line, &v, &table)?);
    }
    let has_inverse = secs.contains_key("inverse");
    let mut inverse = Vec::new();
    if has_inverse {
        for c in &coords {
            let (line, v) =
                find(sec("inverse"), c.name()).ok_or_else(|| SpecError::Invalid(format!("[inverse] missing `{c}`")))?;
            inverse.push(parse_at(line, &v, &table)?);
        }
    }
    let mut aux = Vec::new();
    for s in &aux_syms {
        let (line, v) = find(sec("law"), s.name()).ok_or_else(|| SpecError::Invalid(format!("[law] missing `{s}`")))?;
        let compose = parse_at(line, &v, &table)?;
        let inv = match find(sec("inverse"), s.name()) {
            Some((l, v)) => Some(parse_at(l, &v, &table)?),
            None => None,
        };
        let id = GroupLaw::aux_identity(s.radicand().expect("aux"), &coords, &identity)
            .ok_or_else(|| SpecError::Invalid(format!("radicand of `{s}` has no rational root at the identity")))?;
        aux.push(AuxLaw { sym: s.clone(), compose, inverse: inv, identity: id });
    }
    let cocycle = match find(sec("cocycle"), "xi") {
        Some((l, v)) => Some(parse_at(l, &v, &table)?),
        None => None,
    };
    let generating = match find(sec("generating"), "lambda") {
        Some((l, v)) => Some(parse_at(l, &v, &table)?),
        None => None,
    };
    let theta_scale = match find(sec("theta"), "scale") {
        Some((l, v)) => parse_at(l, &v, &table)?,
        None => Expr::one(),
    };
    let names: Vec<String> = coords.iter().map(|c| c.name().to_string()).collect();
    let seeds = parse_vectors(sec("seeds"), &names, &table)?;
    let diagonalizable = parse_vectors(sec("diagonalizable"), &names, &table)?;
    let law = GroupLaw::new(&name, table, coords, identity, law, aux, has_inverse.then_some(inverse))?;
    Ok(SpecFile::Group(Box::new(GroupSpec {
        name,
        law,
        cocycle,
        generating,
        theta_scale,
        seeds,
        diagonalizable,
        options,
    })))
}

/// Parses `name = combination` lines into coefficient vectors over `names` plus `Xi`.
fn parse_vectors(entries: &[Entry], names: &[String], params: &SymbolTable) -> Result<Vec<NamedVector>> {
    entries
        .iter()
        .map(|e| {
            let coeffs = parse_combination(&e.value, names, params).map_err(|m| err(e.line, m))?;
            Ok(NamedVector { name: e.key.clone(), coeffs })
        })
        .collect()
}

/// Linear combination of generator names (and `Xi`) with coefficients in the parameters.
pub fn parse_combination(text: &str, names: &[String], params: &SymbolTable) -> std::result::Result<Vec<Expr>, String> {
    let mut t = SymbolTable::new();
    for p in params.parameters() {
        t.add(&p, SymbolKind::Free).map_err(|e| e.to_string())?;
    }
    for n in names.iter().map(String::as_str).chain([CENTRAL]) {
        t.add(&Sym::new(n), SymbolKind::Free).map_err(|e| e.to_string())?;
    }
    let e = parse_expr(text, &t).map_err(|e| e.to_string())?;
    let gen_syms: Vec<Sym> = names
        .iter()
        .map(String::as_str)
        .chain([CENTRAL])
        .map(|n| t.get(n).expect("declared").clone())
        .collect();
    let coeffs: Vec<Expr> = gen_syms.iter().map(|g| e.diff(g)).collect();
    let mut recon = Expr::zero();
    for (g, c) in gen_syms.iter().zip(&coeffs) {
        if gen_syms.iter().any(|h| c.vars().contains(h)) {
            return Err("combination is not linear in the generators".into());
        }
        recon = &recon + &(c * &Expr::sym(g));
    }
    if recon != e {
        return Err("combination has a term without a generator".into());
    }
    Ok(coeffs)
}

fn parse_algebra(
    name: String,
    table: SymbolTable,
    algebra: &[Entry],
    brackets: &[Entry],
    seeds: &[Entry],
    diag: &[Entry],
    options: BTreeMap<String, String>,
) -> Result<SpecFile> {
    let gens = algebra
        .iter()
        .find(|e| e.key == "generators")
        .ok_or_else(|| SpecError::Invalid("[algebra] needs `generators = ...`".into()))?;
    let names: Vec<String> = gens.value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    let n = names.len();
    let mut base = LieAlgebra::zero(names.clone());
    let mut sigma = vec![vec![Expr::zero(); n]; n];
    for e in brackets {
        let (a, b) = e.key.split_once(',').ok_or_else(|| err(e.line, "bracket key must be `x, y`"))?;
        let i = names.iter().position(|x| x == a.trim()).ok_or_else(|| err(e.line, format!("unknown generator `{}`", a.trim())))?;
        let j = names.iter().position(|x| x == b.trim()).ok_or_else(|| err(e.line, format!("unknown generator `{}`", b.trim())))?;
        let v = parse_combination(&e.value, &names, &table).map_err(|m| err(e.line, m))?;
        base.set_bracket(i, j, v[..n].to_vec());
        sigma[i][j] = v[n].clone();
        sigma[j][i] = -&v[n];
    }
    let seeds = parse_vectors(seeds, &names, &table)?;
    let diagonalizable = parse_vectors(diag, &names, &table)?;
    Ok(SpecFile::Algebra(Box::new(AlgebraSpec {
        name,
        table,
        algebra: ExtendedAlgebra::new(base, sigma),
        seeds,
        diagonalizable,
        options,
    })))
}

/// Returns the radicand polynomial for an auxiliary symbol declared in a table.
pub fn radicand_of(table: &SymbolTable, name: &str) -> Option<Poly> {
    table.get(name).and_then(|s| s.radicand().cloned())
}
