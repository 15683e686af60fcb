//! Invariant vector fields, Maurer–Cartan forms and structure constants of a group law.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::group_law::{GroupLaw, Result};
use crate::linalg;
use crate::symbolic::{Expr, Sym};

/// Vector field in the coordinate frame: `sum_j comps[j] * d/d coords[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    pub comps: Vec<Expr>,
}

/// One-form in the coordinate frame: `sum_j comps[j] * d coords[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneForm {
    pub comps: Vec<Expr>,
}

impl VectorField {
    pub fn zero(n: usize) -> Self {
        VectorField { comps: vec![Expr::zero(); n] }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }

    /// `X(f)`.
    pub fn apply(&self, coords: &[Sym], f: &Expr) -> Expr {
        let mut acc = Expr::zero();
        for (c, x) in self.comps.iter().zip(coords) {
            if !c.is_zero() {
                let d = f.diff(x);
                if !d.is_zero() {
                    acc = &acc + &(c * &d);
                }
            }
        }
        acc
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        VectorField { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &Expr) -> VectorField {
        VectorField { comps: self.comps.iter().map(|a| a * c).collect() }
    }

    pub fn combination(fields: &[VectorField], coeffs: &[Expr]) -> VectorField {
        let n = fields.first().map_or(0, |f| f.comps.len());
        let mut out = VectorField::zero(n);
        for (f, c) in fields.iter().zip(coeffs) {
            if !c.is_zero() {
                out = out.add(&f.scale(c));
            }
        }
        out
    }

    /// Human-readable form such as `A*d/dA + C*d/dC`.
    pub fn render(&self, coords: &[Sym]) -> String {
        let parts: Vec<String> = self
            .comps
            .iter()
            .zip(coords)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, x)| if c.is_one() { format!("d/d{x}") } else { format!("({c})*d/d{x}") })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl OneForm {
    pub fn pair(&self, x: &VectorField) -> Expr {
        self.comps
            .iter()
            .zip(&x.comps)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Exterior derivative as the antisymmetric matrix `(d a)_{jk} = d_j a_k - d_k a_j`.
    pub fn exterior_derivative(&self, coords: &[Sym]) -> Vec<Vec<Expr>> {
        let n = coords.len();
        let mut out = vec![vec![Expr::zero(); n]; n];
        for j in 0..n {
            for k in (j + 1)..n {
                let v = &self.comps[k].diff(&coords[j]) - &self.comps[j].diff(&coords[k]);
                out[k][j] = -&v;
                out[j][k] = v;
            }
        }
        out
    }

    /// Lie derivative `L_X` of the form.
    pub fn lie_derivative(&self, x: &VectorField, coords: &[Sym]) -> OneForm {
        let n = coords.len();
        let comps = (0..n)
            .map(|a| {
                let mut acc = x.apply(coords, &self.comps[a]);
                for b in 0..n {
                    if !self.comps[b].is_zero() {
                        let d = x.comps[b].diff(&coords[a]);
                        if !d.is_zero() {
                            acc = &acc + &(&self.comps[b] * &d);
                        }
                    }
                }
                acc
            })
            .collect();
        OneForm { comps }
    }
}

/// `[X, Y]_j = X(Y_j) - Y(X_j)`.
pub fn commutator(x: &VectorField, y: &VectorField, coords: &[Sym]) -> VectorField {
    VectorField {
        comps: (0..coords.len())
            .map(|j| &x.apply(coords, &y.comps[j]) - &y.apply(coords, &x.comps[j]))
            .collect(),
    }
}

/// Lie algebra in a named basis with `c[i][j][k] = C^k_ij`, i.e. `[e_i, e_j] = C^k_ij e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    pub names: Vec<String>,
    pub c: Vec<Vec<Vec<Expr>>>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub value: String,
}

impl LieAlgebra {
    pub fn zero(names: Vec<String>) -> Self {
        let n = names.len();
        LieAlgebra { names, c: vec![vec![vec![Expr::zero(); n]; n]; n] }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Sets `[e_i, e_j] = v` and `[e_j, e_i] = -v`.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: Vec<Expr>) {
        self.c[j][i] = v.iter().map(|x| -x).collect();
        self.c[i][j] = v;
    }

    /// Bracket of two coefficient vectors.
    pub fn bracket(&self, x: &[Expr], y: &[Expr]) -> Vec<Expr> {
        let n = self.dim();
        let mut out = vec![Expr::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let f = &x[i] * &y[j];
                for k in 0..n {
                    if !self.c[i][j][k].is_zero() {
                        out[k] = &out[k] + &(&f * &self.c[i][j][k]);
                    }
                }
            }
        }
        out
    }

    pub fn unit(&self, i: usize) -> Vec<Expr> {
        let mut v = vec![Expr::zero(); self.dim()];
        v[i] = Expr::one();
        v
    }

    pub fn render_vector(&self, v: &[Expr]) -> String {
        render_combination(&self.names, v)
    }

    /// Nonzero brackets `[e_i, e_j]`, `i < j`, in basis order.
    pub fn table(&self) -> Vec<BracketEntry> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.c[i][j].iter().any(|x| !x.is_zero()) {
                    out.push(BracketEntry {
                        left: self.names[i].clone(),
                        right: self.names[j].clone(),
                        value: self.render_vector(&self.c[i][j]),
                    });
                }
            }
        }
        out
    }

    pub fn antisymmetry_residuals(&self) -> Vec<String> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let r = &self.c[i][j][k] + &self.c[j][i][k];
                    if !r.is_zero() {
                        out.push(format!("C^{}_({},{}) not antisymmetric: {r}", self.names[k], self.names[i], self.names[j]));
                    }
                }
            }
        }
        out
    }

    /// Residuals of `[e_i,[e_j,e_k]] + cyclic = 0`.
    pub fn jacobi_residuals(&self) -> Vec<String> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (ei, ej, ek) = (self.unit(i), self.unit(j), self.unit(k));
                    let a = self.bracket(&ei, &self.bracket(&ej, &ek));
                    let b = self.bracket(&ej, &self.bracket(&ek, &ei));
                    let c = self.bracket(&ek, &self.bracket(&ei, &ej));
                    let s: Vec<Expr> = (0..n).map(|m| &(&a[m] + &b[m]) + &c[m]).collect();
                    if s.iter().any(|x| !x.is_zero()) {
                        out.push(format!(
                            "({}, {}, {}): {}",
                            self.names[i],
                            self.names[j],
                            self.names[k],
                            self.render_vector(&s)
                        ));
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad(x)` acting on coefficient vectors: column `j` is `[x, e_j]`.
    pub fn ad_matrix(&self, x: &[Expr]) -> Vec<Vec<Expr>> {
        let n = self.dim();
        let cols: Vec<Vec<Expr>> = (0..n).map(|j| self.bracket(x, &self.unit(j))).collect();
        linalg::transpose(&cols)
    }
}

pub fn render_combination(names: &[String], v: &[Expr]) -> String {
    let mut out = String::new();
    for (c, n) in v.iter().zip(names).filter(|(c, _)| !c.is_zero()) {
        let neg = c.constant_value().is_some_and(|s| s.is_negative_leading());
        let mag = if neg { -c } else { c.clone() };
        let term = if mag.is_one() { n.clone() } else { format!("({mag})*{n}") };
        match (out.is_empty(), neg) {
            (true, true) => out = format!("-{term}"),
            (true, false) => out = term,
            (false, true) => out = format!("{out} - {term}"),
            (false, false) => out = format!("{out} + {term}"),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn identity_and_rename(law: &GroupLaw) -> BTreeMap<Sym, Expr> {
    let e = law.identity_point();
    let mut b = law.bindings_at(&e);
    for (p, c) in law.primed_coords().iter().zip(&law.coords) {
        b.insert(p.clone(), Expr::sym(c));
    }
    for (p, a) in law.primed_aux().iter().zip(&law.aux) {
        b.insert(p.clone(), Expr::sym(&a.sym));
    }
    b
}

/// `X^L_i(g) = d(g * h)/d h^i` at `h = e`.
pub fn left_invariant_fields(law: &GroupLaw) -> Result<Vec<VectorField>> {
    let b = identity_and_rename(law);
    law.coords
        .iter()
        .map(|ci| {
            let comps = law
                .law
                .iter()
                .map(|lj| Ok(lj.diff(ci).substitute(&b)?))
                .collect::<Result<Vec<_>>>()?;
            Ok(VectorField { comps })
        })
        .collect()
}

/// `X^R_i(g) = d(h * g)/d h^i` at `h = e`.
pub fn right_invariant_fields(law: &GroupLaw) -> Result<Vec<VectorField>> {
    let e = law.identity_point();
    let mut b = BTreeMap::new();
    for (p, v) in law.primed_coords().iter().zip(&e.coords) {
        b.insert(p.clone(), v.clone());
    }
    for (p, v) in law.primed_aux().iter().zip(&e.aux) {
        b.insert(p.clone(), v.clone());
    }
    law.primed_coords()
        .iter()
        .map(|pi| {
            let comps = law
                .law
                .iter()
                .map(|lj| Ok(lj.diff(pi).substitute(&b)?))
                .collect::<Result<Vec<_>>>()?;
            Ok(VectorField { comps })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ClosureFailure {
    pub left: String,
    pub right: String,
    pub residual: String,
}

/// Structure constants read off at the identity, with closure verified symbolically
/// everywhere. Requires `fields[k]` to equal `d/d coords[k]` at the identity.
pub fn structure_constants(
    law: &GroupLaw,
    fields: &[VectorField],
) -> std::result::Result<LieAlgebra, ClosureFailure> {
    let names: Vec<String> = law.coords.iter().map(|c| c.name().to_string()).collect();
    let coords = &law.coords;
    let at_e = law.bindings_at(&law.identity_point());
    let mut alg = LieAlgebra::zero(names.clone());
    let n = fields.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let br = commutator(&fields[i], &fields[j], coords);
            let consts: Vec<Expr> = br
                .comps
                .iter()
                .map(|x| x.substitute(&at_e).expect("identity evaluation"))
                .collect();
            let recon = VectorField::combination(fields, &consts);
            let diff: Vec<Expr> = br.comps.iter().zip(&recon.comps).map(|(a, b)| a - b).collect();
            if diff.iter().any(|x| !x.is_zero()) {
                return Err(ClosureFailure {
                    left: names[i].clone(),
                    right: names[j].clone(),
                    residual: diff.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "),
                });
            }
            alg.set_bracket(i, j, consts);
        }
    }
    Ok(alg)
}

/// Dual coframe `theta^i(X_j) = delta^i_j`; `None` for a singular frame.
pub fn maurer_cartan_forms(fields: &[VectorField]) -> Option<Vec<OneForm>> {
    let m: Vec<Vec<Expr>> = fields.iter().map(|f| f.comps.clone()).collect();
    let mt = linalg::transpose(&m);
    let theta = linalg::inverse(&mt)?;
    Some(theta.into_iter().map(|comps| OneForm { comps }).collect())
}

/// Residuals of `d theta^i = -1/2 C^i_jk theta^j ^ theta^k` in coordinate components.
pub fn maurer_cartan_residuals(forms: &[OneForm], alg: &LieAlgebra, coords: &[Sym]) -> Vec<String> {
    let n = coords.len();
    let mut out = Vec::new();
    for (i, th) in forms.iter().enumerate() {
        let d = th.exterior_derivative(coords);
        for a in 0..n {
            for b in (a + 1)..n {
                let mut rhs = Expr::zero();
                for j in 0..n {
                    for k in 0..n {
                        let c = &alg.c[j][k][i];
                        if c.is_zero() {
                            continue;
                        }
                        let w = &(&forms[j].comps[a] * &forms[k].comps[b]) - &(&forms[j].comps[b] * &forms[k].comps[a]);
                        rhs = &rhs + &(c * &w);
                    }
                }
                let r = &d[a][b] + &rhs.scale(&crate::symbolic::Scalar::from_ratio(1, 2));
                if !r.is_zero() {
                    out.push(format!("d theta^{} ({}, {}): {r}", alg.names[i], coords[a], coords[b]));
                }
            }
        }
    }
    out
}

/// Residuals of `[X^L_i, X^R_j] = 0`.
pub fn left_right_commute_residuals(left: &[VectorField], right: &[VectorField], coords: &[Sym]) -> Vec<String> {
    let mut out = Vec::new();
    for (i, l) in left.iter().enumerate() {
        for (j, r) in right.iter().enumerate() {
            let c = commutator(l, r, coords);
            if !c.is_zero() {
                out.push(format!("[L_{}, R_{}] = {}", coords[i], coords[j], c.render(coords)));
            }
        }
    }
    out
}

/// Invariant data of a group law computed once.
#[derive(Debug, Clone)]
pub struct LieStructure {
    pub left: Vec<VectorField>,
    pub right: Vec<VectorField>,
    pub algebra: LieAlgebra,
    pub right_algebra: LieAlgebra,
    pub forms: Vec<OneForm>,
}

#[derive(Debug, thiserror::Error)]
pub enum LieError {
    #[error(transparent)]
    Group(#[from] crate::group_law::GroupError),
    #[error("fields do not close: [{left}, {right}] residual {residual}")]
    NotClosed { left: String, right: String, residual: String },
    #[error("singular invariant frame")]
    Singular,
}

impl From<ClosureFailure> for LieError {
    fn from(f: ClosureFailure) -> Self {
        LieError::NotClosed { left: f.left, right: f.right, residual: f.residual }
    }
}

impl LieStructure {
    pub fn of(law: &GroupLaw) -> std::result::Result<LieStructure, LieError> {
        let left = left_invariant_fields(law)?;
        let right = right_invariant_fields(law)?;
        let algebra = structure_constants(law, &left)?;
        let right_algebra = structure_constants(law, &right)?;
        let forms = maurer_cartan_forms(&left).ok_or(LieError::Singular)?;
        Ok(LieStructure { left, right, algebra, right_algebra, forms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::Extension;
    use crate::fixtures::{load, FIXTURES};
    use crate::specfile::SpecFile;

    /// `C^k_ij = a^k_ij - a^k_ji` with `a^k_ij = d^2 (g' g)^k / d g'^i d g^j` at the identity.
    fn second_order_constants(law: &GroupLaw) -> Vec<Vec<Vec<Expr>>> {
        let e = law.identity_point();
        let at_e = law.slot_bindings(&e, &e);
        let n = law.dim();
        let a: Vec<Vec<Vec<Expr>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        law.law
                            .iter()
                            .map(|m| m.diff(&law.primed_coords()[i]).diff(&law.coords[j]).substitute(&at_e).unwrap())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][j][k] - &a[j][i][k]).collect()).collect())
            .collect()
    }

    fn groups() -> Vec<(String, crate::specfile::GroupSpec)> {
        FIXTURES
            .iter()
            .filter_map(|(name, _)| match load(name).unwrap() {
                SpecFile::Group(g) => Some((name.to_string(), *g)),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn structure_constants_match_second_order_oracle() {
        for (name, g) in groups() {
            let base = LieStructure::of(&g.law).unwrap();
            assert_eq!(base.algebra.c, second_order_constants(&g.law), "{name}");
            let xi = g.cocycle.clone().unwrap_or_else(Expr::zero);
            let ext = Extension::build(&g.law, &xi, &g.theta_scale).unwrap();
            assert_eq!(ext.lie.algebra.c, second_order_constants(&ext.law), "{name} extended");
        }
    }

    #[test]
    fn right_fields_carry_the_opposite_algebra() {
        for (name, g) in groups() {
            let s = LieStructure::of(&g.law).unwrap();
            let negated: Vec<Vec<Vec<Expr>>> =
                s.algebra.c.iter().map(|r| r.iter().map(|v| v.iter().map(|x| -x).collect()).collect()).collect();
            assert_eq!(s.right_algebra.c, negated, "{name}");
            assert!(left_right_commute_residuals(&s.left, &s.right, &g.law.coords).is_empty(), "{name}");
            assert!(maurer_cartan_residuals(&s.forms, &s.algebra, &g.law.coords).is_empty(), "{name}");
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(16))]

        #[test]
        fn extended_brackets_satisfy_jacobi_on_combinations(
            x in proptest::collection::vec(-3i64..=3, 7),
            y in proptest::collection::vec(-3i64..=3, 7),
            z in proptest::collection::vec(-3i64..=3, 7),
        ) {
            let g = groups().into_iter().find(|(n, _)| n == "schrodinger").unwrap().1;
            let xi = g.cocycle.clone().unwrap();
            let full = Extension::build(&g.law, &xi, &g.theta_scale).unwrap().algebra.full_algebra();
            let v = |c: &[i64]| c.iter().map(|k| Expr::int(*k)).collect::<Vec<_>>();
            let (x, y, z) = (v(&x), v(&y), v(&z));
            let cyclic = [(&x, &y, &z), (&y, &z, &x), (&z, &x, &y)];
            let mut sum = vec![Expr::zero(); full.dim()];
            for (a, b, c) in cyclic {
                let t = full.bracket(a, &full.bracket(b, c));
                sum = sum.iter().zip(&t).map(|(p, q)| p + q).collect();
            }
            proptest::prop_assert!(sum.iter().all(Expr::is_zero));
            let xy = full.bracket(&x, &y);
            let yx = full.bracket(&y, &x);
            proptest::prop_assert!(xy.iter().zip(&yx).all(|(p, q)| (p + q).is_zero()));
        }
    }
}
