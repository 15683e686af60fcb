//! Groups given by a composition law `g'' = g' * g` in named coordinates.
//!
//! The left factor `g'` uses primed symbols (`A'`), the right factor `g` the bare ones.
//! Auxiliary square roots carry their own composition, inverse and identity value.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::symbolic::{Expr, Poly, Scalar, Sym, SymbolTable, SymbolicError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("{0}")]
    Invalid(String),
    #[error("non-invertible Jacobian at the identity")]
    NonInvertible,
    #[error("supplied inverse fails: residual {0}")]
    InverseMismatch(String),
}

pub type Result<T> = std::result::Result<T, GroupError>;

/// Composition data of an auxiliary symbol `s = sqrt(R)` (e.g. `s'' = s'*s`).
#[derive(Debug, Clone)]
pub struct AuxLaw {
    pub sym: Sym,
    pub compose: Expr,
    pub inverse: Option<Expr>,
    pub identity: Expr,
}

/// A group element given by coordinate values and auxiliary values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    pub coords: Vec<Expr>,
    pub aux: Vec<Expr>,
}

#[derive(Debug, Clone)]
pub struct GroupLaw {
    pub name: String,
    pub table: SymbolTable,
    pub coords: Vec<Sym>,
    pub identity: Vec<Expr>,
    pub law: Vec<Expr>,
    pub aux: Vec<AuxLaw>,
    pub inverse: Option<Vec<Expr>>,
    /// Index of the additive U(1) phase coordinate, when the group is extended.
    pub phase: Option<usize>,
    primed_coords: Vec<Sym>,
    primed_aux: Vec<Sym>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    pub residual: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Inverse of a group law, exact or truncated at a jet order.
#[derive(Debug, Clone)]
pub struct Inverse {
    pub coords: Vec<Expr>,
    pub exact: bool,
    pub order: Option<u32>,
}

pub const DEFAULT_JET_ORDER: u32 = 6;

pub fn primed_name(name: &str) -> String {
    format!("{name}'")
}

/// Fresh copies of coordinate and auxiliary symbols under a suffix. Auxiliary radicands
/// are renamed consistently.
pub fn renamed_symbols(coords: &[Sym], aux: &[Sym], suffix: &str) -> (Vec<Sym>, Vec<Sym>) {
    let new_coords: Vec<Sym> = coords.iter().map(|c| Sym::new(format!("{}{suffix}", c.name()))).collect();
    let map: BTreeMap<Sym, Expr> =
        coords.iter().zip(&new_coords).map(|(a, b)| (a.clone(), Expr::sym(b))).collect();
    let new_aux = aux
        .iter()
        .map(|s| {
            let r = Expr::poly(s.radicand().expect("aux").clone())
                .substitute(&map)
                .expect("polynomial renaming");
            Sym::aux(format!("{}{suffix}", s.name()), r.numer().clone())
        })
        .collect();
    (new_coords, new_aux)
}

/// Declares primed copies of coordinates and auxiliary symbols in `table`.
pub fn declare_primes(table: &mut SymbolTable, coords: &[Sym], aux: &[Sym]) -> Result<()> {
    let (pc, pa) = renamed_symbols(coords, aux, "'");
    for s in pc {
        table.add(&s, crate::symbolic::SymbolKind::Free)?;
    }
    for s in pa {
        table.add(&s, crate::symbolic::SymbolKind::Aux)?;
    }
    Ok(())
}

fn bind(map: &mut BTreeMap<Sym, Expr>, syms: &[Sym], vals: &[Expr]) {
    for (s, v) in syms.iter().zip(vals) {
        map.insert(s.clone(), v.clone());
    }
}

impl GroupLaw {
    /// Builds a law; primed symbols must already be declared in `table`
    /// (see [`declare_primes`]).
    pub fn new(
        name: &str,
        table: SymbolTable,
        coords: Vec<Sym>,
        identity: Vec<Expr>,
        law: Vec<Expr>,
        aux: Vec<AuxLaw>,
        inverse: Option<Vec<Expr>>,
    ) -> Result<GroupLaw> {
        if identity.len() != coords.len() || law.len() != coords.len() {
            return Err(GroupError::Invalid("arity mismatch between coordinates, identity and law".into()));
        }
        if inverse.as_ref().is_some_and(|v| v.len() != coords.len()) {
            return Err(GroupError::Invalid("inverse arity mismatch".into()));
        }
        let lookup = |s: &Sym| {
            table
                .get(&primed_name(s.name()))
                .cloned()
                .ok_or_else(|| GroupError::Invalid(format!("missing primed symbol for `{s}`")))
        };
        let primed_coords = coords.iter().map(lookup).collect::<Result<Vec<_>>>()?;
        let primed_aux = aux.iter().map(|a| lookup(&a.sym)).collect::<Result<Vec<_>>>()?;
        Ok(GroupLaw {
            name: name.to_string(),
            table,
            coords,
            identity,
            law,
            aux,
            inverse,
            phase: None,
            primed_coords,
            primed_aux,
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn aux_syms(&self) -> Vec<Sym> {
        self.aux.iter().map(|a| a.sym.clone()).collect()
    }

    pub fn primed_coords(&self) -> &[Sym] {
        &self.primed_coords
    }

    pub fn primed_aux(&self) -> &[Sym] {
        &self.primed_aux
    }

    pub fn parameters(&self) -> Vec<Sym> {
        self.table.parameters()
    }

    /// The generic element `g` (bare symbols).
    pub fn generic(&self) -> Point {
        Point {
            coords: self.coords.iter().map(Expr::sym).collect(),
            aux: self.aux.iter().map(|a| Expr::sym(&a.sym)).collect(),
        }
    }

    /// The generic element `g'` (primed symbols).
    pub fn generic_primed(&self) -> Point {
        Point {
            coords: self.primed_coords.iter().map(Expr::sym).collect(),
            aux: self.primed_aux.iter().map(Expr::sym).collect(),
        }
    }

    /// A generic element in fresh symbols with the given suffix.
    pub fn generic_copy(&self, suffix: &str) -> Point {
        let (c, a) = renamed_symbols(&self.coords, &self.aux_syms(), suffix);
        Point { coords: c.iter().map(Expr::sym).collect(), aux: a.iter().map(Expr::sym).collect() }
    }

    pub fn identity_point(&self) -> Point {
        Point { coords: self.identity.clone(), aux: self.aux.iter().map(|a| a.identity.clone()).collect() }
    }

    /// Bindings that evaluate bare symbols at `g`.
    pub fn bindings_at(&self, g: &Point) -> BTreeMap<Sym, Expr> {
        let mut m = BTreeMap::new();
        bind(&mut m, &self.coords, &g.coords);
        bind(&mut m, &self.aux_syms(), &g.aux);
        m
    }

    /// Bindings for a two-slot expression `f(g', g)` evaluated at `(left, right)`.
    pub fn slot_bindings(&self, left: &Point, right: &Point) -> BTreeMap<Sym, Expr> {
        let mut m = self.bindings_at(right);
        bind(&mut m, &self.primed_coords, &left.coords);
        bind(&mut m, &self.primed_aux, &left.aux);
        m
    }

    /// Evaluates a two-slot expression `f(g', g)`.
    pub fn eval2(&self, f: &Expr, left: &Point, right: &Point) -> Result<Expr> {
        Ok(f.substitute(&self.slot_bindings(left, right))?)
    }

    /// Evaluates a one-slot expression `f(g)`.
    pub fn eval1(&self, f: &Expr, g: &Point) -> Result<Expr> {
        Ok(f.substitute(&self.bindings_at(g))?)
    }

    pub fn compose(&self, left: &Point, right: &Point) -> Result<Point> {
        let b = self.slot_bindings(left, right);
        let coords = self.law.iter().map(|e| e.substitute(&b)).collect::<std::result::Result<_, _>>()?;
        let aux = self.aux.iter().map(|a| a.compose.substitute(&b)).collect::<std::result::Result<_, _>>()?;
        Ok(Point { coords, aux })
    }

    /// Image of `g` under a supplied or exact inverse.
    pub fn inverse_of(&self, inv: &[Expr], g: &Point) -> Result<Point> {
        let b = self.bindings_at(g);
        let coords = inv.iter().map(|e| e.substitute(&b)).collect::<std::result::Result<_, _>>()?;
        let mut aux = Vec::new();
        for a in &self.aux {
            let e = a
                .inverse
                .as_ref()
                .ok_or_else(|| GroupError::Invalid(format!("no inverse for auxiliary `{}`", a.sym)))?;
            aux.push(e.substitute(&b)?);
        }
        Ok(Point { coords, aux })
    }

    fn point_diff(&self, a: &Point, b: &Point) -> Vec<String> {
        let mut out = Vec::new();
        for (k, (x, y)) in a.coords.iter().zip(&b.coords).enumerate() {
            let r = x - y;
            if !r.is_zero() {
                out.push(format!("{}: {}", self.coords[k], r));
            }
        }
        for (k, (x, y)) in a.aux.iter().zip(&b.aux).enumerate() {
            let r = x - y;
            if !r.is_zero() {
                out.push(format!("{}: {}", self.aux[k].sym, r));
            }
        }
        out
    }

    fn check(&self, axiom: &str, a: &Point, b: &Point) -> AxiomCheck {
        let residual = self.point_diff(a, b);
        AxiomCheck { axiom: axiom.to_string(), passed: residual.is_empty(), residual }
    }

    pub fn verify_axioms(&self) -> Result<AxiomReport> {
        let e = self.identity_point();
        let g = self.generic();
        let mut checks = vec![
            self.check("left identity", &self.compose(&e, &g)?, &g),
            self.check("right identity", &self.compose(&g, &e)?, &g),
        ];
        let g1 = self.generic_copy("#1");
        let g2 = self.generic_copy("#2");
        let g3 = self.generic_copy("#3");
        let lhs = self.compose(&self.compose(&g1, &g2)?, &g3)?;
        let rhs = self.compose(&g1, &self.compose(&g2, &g3)?)?;
        checks.push(self.check("associativity", &lhs, &rhs));
        if let Some(inv) = &self.inverse {
            let gi = self.inverse_of(inv, &g)?;
            checks.push(self.check("left inverse", &self.compose(&gi, &g)?, &e));
            checks.push(self.check("right inverse", &self.compose(&g, &gi)?, &e));
        }
        Ok(AxiomReport { checks })
    }

    /// Inverse: the supplied one (verified), or the jet-order power-series inverse.
    pub fn invert(&self, order: u32) -> Result<Inverse> {
        if let Some(inv) = &self.inverse {
            let g = self.generic();
            let gi = self.inverse_of(inv, &g)?;
            let r = self.point_diff(&self.compose(&gi, &g)?, &self.identity_point());
            if !r.is_empty() {
                return Err(GroupError::InverseMismatch(r.join("; ")));
            }
            return Ok(Inverse { coords: inv.clone(), exact: true, order: None });
        }
        self.jet_inverse(order)
    }

    /// Power-series inverse around the identity, truncated at total degree `order`.
    pub fn jet_inverse(&self, order: u32) -> Result<Inverse> {
        let n = self.dim();
        let (u, ua) = renamed_symbols(&self.coords, &self.aux_syms(), "#u");
        let (v, _) = renamed_symbols(&self.coords, &self.aux_syms(), "#v");
        // Shifted chart: g = e + u, g' = e + v; auxiliaries become roots of shifted radicands.
        let shift = |syms: &[Sym]| -> Vec<Expr> {
            syms.iter().zip(&self.identity).map(|(s, e)| e + &Expr::sym(s)).collect()
        };
        let gu = shift(&u);
        let gv = shift(&v);
        let shifted_aux = |pt: &[Expr], suffix: &str| -> Result<Vec<Expr>> {
            let b = {
                let mut m = BTreeMap::new();
                bind(&mut m, &self.coords, pt);
                m
            };
            self.aux
                .iter()
                .map(|a| {
                    let r = Expr::poly(a.sym.radicand().expect("aux").clone()).substitute(&b)?;
                    Ok(Expr::sym(&Sym::aux(format!("{}{suffix}", a.sym.name()), r.numer().clone())))
                })
                .collect()
        };
        let pu = Point { coords: gu.clone(), aux: shifted_aux(&gu, "#u")? };
        let pv = Point { coords: gv.clone(), aux: shifted_aux(&gv, "#v")? };
        let _ = ua;
        let composed = self.compose(&pv, &pu)?;
        let mut vars: Vec<Sym> = v.clone();
        vars.extend(u.iter().cloned());
        // F(v, u) - v - u, expanded to the jet order.
        let mut nonlinear = Vec::with_capacity(n);
        for k in 0..n {
            let f = &composed.coords[k] - &self.identity[k];
            let series = f.taylor(&vars, order)?;
            let lin = &Expr::sym(&v[k]) + &Expr::sym(&u[k]);
            let check_lin = series.degree_part(&vars, 1);
            if check_lin != lin || !series.degree_part(&vars, 0).is_zero() {
                return Err(GroupError::NonInvertible);
            }
            nonlinear.push(&series - &lin);
        }
        let mut h: Vec<Expr> = vec![Expr::zero(); n];
        for _ in 0..=order + 1 {
            let b: BTreeMap<Sym, Expr> = v.iter().cloned().zip(h.iter().cloned()).collect();
            let mut next = Vec::with_capacity(n);
            for k in 0..n {
                let nl = nonlinear[k].substitute(&b)?.truncate(&u, order);
                next.push((-&Expr::sym(&u[k]) - nl).truncate(&u, order));
            }
            if next == h {
                break;
            }
            h = next;
        }
        // Back to the original chart: u = g - e.
        let back: BTreeMap<Sym, Expr> = u
            .iter()
            .zip(&self.coords)
            .zip(&self.identity)
            .map(|((us, c), e)| (us.clone(), &Expr::sym(c) - e))
            .collect();
        let coords: Vec<Expr> = h
            .iter()
            .zip(&self.identity)
            .map(|(hk, e)| Ok(e + &hk.substitute(&back)?))
            .collect::<Result<_>>()?;
        let exact = self.is_exact_inverse(&coords)?;
        Ok(Inverse { coords, exact, order: if exact { None } else { Some(order) } })
    }

    fn is_exact_inverse(&self, inv: &[Expr]) -> Result<bool> {
        let uses_primed_aux = self
            .law
            .iter()
            .any(|e| self.primed_aux.iter().any(|s| e.vars().contains(s)));
        if uses_primed_aux {
            return Ok(false);
        }
        let g = self.generic();
        let b = self.bindings_at(&g);
        let coords = inv.iter().map(|e| e.substitute(&b)).collect::<std::result::Result<_, _>>()?;
        let left = Point { coords, aux: self.primed_aux.iter().map(Expr::sym).collect() };
        let b2 = self.slot_bindings(&left, &g);
        for (k, e) in self.law.iter().enumerate() {
            if e.substitute(&b2)? != self.identity[k] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Identity value of an auxiliary symbol: the rational square root of its radicand at `e`.
    pub fn aux_identity(radicand: &Poly, coords: &[Sym], identity: &[Expr]) -> Option<Expr> {
        let b: BTreeMap<Sym, Expr> = coords.iter().cloned().zip(identity.iter().cloned()).collect();
        let v = Expr::poly(radicand.clone()).substitute(&b).ok()?.constant_value()?;
        v.rational_sqrt().map(Expr::constant).or_else(|| {
            if v.is_zero() {
                Some(Expr::constant(Scalar::zero()))
            } else {
                None
            }
        })
    }

    /// Copy of the law with a sign-flipped (or otherwise replaced) composition entry.
    pub fn with_law_entry(&self, index: usize, expr: Expr) -> GroupLaw {
        let mut out = self.clone();
        out.law[index] = expr;
        out
    }

    pub(crate) fn set_phase(&mut self, index: usize) {
        self.phase = Some(index);
    }

    pub(crate) fn push_coordinate(&mut self, sym: Sym, primed: Sym, identity: Expr, law: Expr) {
        self.coords.push(sym);
        self.primed_coords.push(primed);
        self.identity.push(identity);
        self.law.push(law);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse_expr;

    fn galilei() -> GroupLaw {
        let mut t = SymbolTable::new();
        let coords: Vec<Sym> = ["B", "A", "V"].iter().map(|n| t.coordinate(n).unwrap()).collect();
        declare_primes(&mut t, &coords, &[]).unwrap();
        let law = ["B' + B", "A' + A + V'*B", "V' + V"]
            .iter()
            .map(|s| parse_expr(s, &t).unwrap())
            .collect();
        GroupLaw::new("galilei", t, coords, vec![Expr::zero(); 3], law, vec![], None).unwrap()
    }

    #[test]
    fn galilei_axioms_and_jet_inverse() {
        let g = galilei();
        assert!(g.verify_axioms().unwrap().passed());
        let inv = g.invert(DEFAULT_JET_ORDER).unwrap();
        assert!(inv.exact);
        let t = &g.table;
        let expected: Vec<Expr> =
            ["-B", "-A + V*B", "-V"].iter().map(|s| parse_expr(s, t).unwrap()).collect();
        assert_eq!(inv.coords, expected);
    }

    #[test]
    fn corrupted_law_fails_associativity() {
        let g = galilei();
        // Any bilinear correction term keeps the law associative; a quadratic one does not.
        let flipped = g.with_law_entry(1, parse_expr("A' + A - V'*B", &g.table).unwrap());
        assert!(flipped.verify_axioms().unwrap().passed());
        let bad = g.with_law_entry(1, parse_expr("A' + A + V'*B^2", &g.table).unwrap());
        let rep = bad.verify_axioms().unwrap();
        let assoc = rep.checks.iter().find(|c| c.axiom == "associativity").unwrap();
        assert!(!assoc.passed && !assoc.residual.is_empty());
    }
}
