//! Linear differential operators with expression coefficients in a fixed list of variables.

use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::Matrix;
use crate::symbolic::{Expr, Monomial, Poly, Sym};

/// Multi-index over the operator variables.
pub type MultiIndex = Vec<u32>;

/// `sum_alpha c_alpha(u) d^alpha`, coefficients to the left.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOp {
    vars: Vec<Sym>,
    terms: BTreeMap<MultiIndex, Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpError {
    /// The image of a basis monomial is not polynomial in the operator variables.
    NotPolynomial(String),
    /// A conjugation series failed to terminate within the term limit.
    Unterminated(usize),
}

impl fmt::Display for OpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpError::NotPolynomial(e) => write!(f, "image `{e}` is not polynomial in the reduced variables"),
            OpError::Unterminated(n) => write!(f, "conjugation series did not terminate after {n} terms"),
        }
    }
}

impl std::error::Error for OpError {}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j + 1) as i64)
}

/// All multi-indices `gamma <= alpha` componentwise.
fn sub_indices(alpha: &[u32]) -> Vec<MultiIndex> {
    let mut out = vec![Vec::new()];
    for &a in alpha {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=a).map(move |g| {
                    let mut p = prefix.clone();
                    p.push(g);
                    p
                })
            })
            .collect();
    }
    out
}

impl DiffOp {
    pub fn zero(vars: &[Sym]) -> Self {
        DiffOp { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn multiplication(vars: &[Sym], f: Expr) -> Self {
        let mut op = DiffOp::zero(vars);
        op.insert(vec![0; vars.len()], f);
        op
    }

    pub fn identity(vars: &[Sym]) -> Self {
        DiffOp::multiplication(vars, Expr::one())
    }

    pub fn partial(vars: &[Sym], k: usize) -> Self {
        let mut idx = vec![0; vars.len()];
        idx[k] = 1;
        let mut op = DiffOp::zero(vars);
        op.insert(idx, Expr::one());
        op
    }

    /// `c d^alpha`.
    pub fn term(vars: &[Sym], alpha: MultiIndex, c: Expr) -> Self {
        let mut op = DiffOp::zero(vars);
        op.insert(alpha, c);
        op
    }

    /// `sum_k coeffs[k] d_k + mult`.
    pub fn first_order(vars: &[Sym], coeffs: &[Expr], mult: Expr) -> Self {
        let mut op = DiffOp::multiplication(vars, mult);
        for (k, c) in coeffs.iter().enumerate() {
            op = op.add(&DiffOp::partial(vars, k).left_mul(c));
        }
        op
    }

    fn insert(&mut self, idx: MultiIndex, c: Expr) {
        let sum = match self.terms.remove(&idx) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(idx, sum);
        }
    }

    pub fn vars(&self) -> &[Sym] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Expr> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().sum()).max().unwrap_or(0)
    }

    /// The coefficient of `d^alpha`.
    pub fn coefficient(&self, alpha: &[u32]) -> Expr {
        self.terms.get(alpha).cloned().unwrap_or_else(Expr::zero)
    }

    /// `Some(c)` when the operator is multiplication by the constant-in-variables `c`.
    pub fn as_multiplier(&self) -> Option<Expr> {
        let zero = vec![0; self.vars.len()];
        if self.terms.keys().any(|k| k != &zero) {
            return None;
        }
        Some(self.coefficient(&zero))
    }

    pub fn add(&self, o: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &DiffOp) -> DiffOp {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> DiffOp {
        self.scale(&Expr::int(-1))
    }

    /// Multiplication of every coefficient by `c`.
    pub fn scale(&self, c: &Expr) -> DiffOp {
        self.left_mul(c)
    }

    fn left_mul(&self, c: &Expr) -> DiffOp {
        let mut out = DiffOp::zero(&self.vars);
        for (k, v) in &self.terms {
            out.insert(k.clone(), c * v);
        }
        out
    }

    /// Derivative of a coefficient by a multi-index.
    fn diff_multi(&self, f: &Expr, gamma: &[u32]) -> Expr {
        let mut out = f.clone();
        for (v, &g) in self.vars.iter().zip(gamma) {
            for _ in 0..g {
                out = out.diff(v);
            }
        }
        out
    }

    /// Operator product `self ∘ o`.
    pub fn compose(&self, o: &DiffOp) -> DiffOp {
        let mut out = DiffOp::zero(&self.vars);
        for (alpha, c) in &self.terms {
            for gamma in sub_indices(alpha) {
                let weight: i64 = alpha.iter().zip(&gamma).map(|(&a, &g)| binomial(a, g)).product();
                for (beta, d) in &o.terms {
                    let dd = self.diff_multi(d, &gamma);
                    if dd.is_zero() {
                        continue;
                    }
                    let idx: MultiIndex =
                        alpha.iter().zip(&gamma).zip(beta).map(|((&a, &g), &b)| a - g + b).collect();
                    out.insert(idx, &(c * &dd) * &Expr::int(weight));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> DiffOp {
        (0..e).fold(DiffOp::identity(&self.vars), |acc, _| acc.compose(self))
    }

    pub fn commutator(&self, o: &DiffOp) -> DiffOp {
        self.compose(o).sub(&o.compose(self))
    }

    pub fn apply(&self, f: &Expr) -> Expr {
        self.terms.iter().map(|(alpha, c)| c * &self.diff_multi(f, alpha)).sum()
    }

    /// `e^{-E} ∘ self ∘ e^{E}`: every `d_k` becomes `d_k + dE/du_k`.
    pub fn conjugate_exp(&self, exponent: &Expr) -> DiffOp {
        let shifted: Vec<DiffOp> = (0..self.vars.len())
            .map(|k| {
                DiffOp::partial(&self.vars, k)
                    .add(&DiffOp::multiplication(&self.vars, exponent.diff(&self.vars[k])))
            })
            .collect();
        let mut out = DiffOp::zero(&self.vars);
        for (alpha, c) in &self.terms {
            let mut term = DiffOp::multiplication(&self.vars, c.clone());
            for (k, &a) in alpha.iter().enumerate() {
                term = term.compose(&shifted[k].pow(a));
            }
            out = out.add(&term);
        }
        out
    }

    /// `e^{-t T} ∘ self ∘ e^{t T}` for a generator `T` free of `t` and of `d_t`.
    /// Nested commutator series; `Unterminated` when it does not close in `max_terms`.
    pub fn conjugate_flow(&self, generator: &DiffOp, time: usize, max_terms: usize) -> Result<DiffOp, OpError> {
        let t = Expr::sym(&self.vars[time]);
        let series = |x: &DiffOp| -> Result<DiffOp, OpError> {
            let mut acc = DiffOp::zero(&self.vars);
            let mut current = x.clone();
            let mut factor = Expr::one();
            for k in 0..max_terms {
                if current.is_zero() {
                    return Ok(acc);
                }
                acc = acc.add(&current.left_mul(&factor));
                current = current.commutator(generator);
                factor = (&factor * &t).checked_div(&Expr::int(k as i64 + 1)).expect("nonzero");
            }
            if current.is_zero() {
                Ok(acc)
            } else {
                Err(OpError::Unterminated(max_terms))
            }
        };
        let d_t = DiffOp::partial(&self.vars, time).add(generator);
        let mut out = DiffOp::zero(&self.vars);
        for (alpha, c) in &self.terms {
            let mut rest = alpha.clone();
            rest[time] = 0;
            let mut head = DiffOp::zero(&self.vars);
            head.insert(rest, c.clone());
            out = out.add(&series(&head)?.compose(&d_t.pow(alpha[time])));
        }
        Ok(out)
    }

    pub fn substitute(&self, bindings: &BTreeMap<Sym, Expr>) -> crate::symbolic::Result<DiffOp> {
        let mut out = DiffOp::zero(&self.vars);
        for (k, c) in &self.terms {
            out.insert(k.clone(), c.substitute(bindings)?);
        }
        Ok(out)
    }

    pub fn depends_on(&self, s: &Sym) -> bool {
        self.terms.values().any(|c| c.contains(s))
    }

    /// Action on functions independent of variable `k`, restricted to `u_k = value`:
    /// terms differentiating in `u_k` are dropped and `u_k` is removed from the variables.
    pub fn slice(&self, k: usize, value: &Expr) -> crate::symbolic::Result<DiffOp> {
        let mut vars = self.vars.clone();
        let removed = vars.remove(k);
        let mut out = DiffOp::zero(&vars);
        for (alpha, c) in &self.terms {
            if alpha[k] > 0 {
                continue;
            }
            let mut idx = alpha.clone();
            idx.remove(k);
            out.insert(idx, c.substitute_one(&removed, value)?);
        }
        Ok(out)
    }

    /// Linear change of variable `u_k = w / factor` with `w` named `new_var`, so that
    /// `d/du_k = factor d/dw`.
    pub fn rescale(&self, k: usize, new_var: &Sym, factor: &Expr) -> crate::symbolic::Result<DiffOp> {
        let old = self.vars[k].clone();
        let mut vars = self.vars.clone();
        vars[k] = new_var.clone();
        let value = Expr::sym(new_var).checked_div(factor)?;
        let mut out = DiffOp::zero(&vars);
        for (alpha, c) in &self.terms {
            out.insert(alpha.clone(), &c.substitute_one(&old, &value)? * &factor.pow(alpha[k]));
        }
        Ok(out)
    }

    /// Matrix on a monomial basis; column `j` is the image of `basis[j]`.
    /// A column is flagged when its image leaves the span of the basis.
    pub fn matrix_on(&self, basis: &[MultiIndex]) -> Result<OpMatrix, OpError> {
        let pos: BTreeMap<&MultiIndex, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut m: Matrix<Expr> = vec![vec![Expr::zero(); basis.len()]; basis.len()];
        let mut boundary = vec![false; basis.len()];
        for (j, b) in basis.iter().enumerate() {
            let image = self.apply(&monomial_expr(&self.vars, b));
            let coeffs = poly_coefficients(&image, &self.vars)
                .ok_or_else(|| OpError::NotPolynomial(image.to_string()))?;
            for (idx, c) in coeffs {
                match pos.get(&idx) {
                    Some(&i) => m[i][j] = c,
                    None => boundary[j] = true,
                }
            }
        }
        Ok(OpMatrix { matrix: m, boundary })
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (alpha, c) in self.terms.iter().rev() {
            let mut d = String::new();
            for (v, &a) in self.vars.iter().zip(alpha) {
                match a {
                    0 => {}
                    1 => d.push_str(&format!("d_{v}")),
                    _ => d.push_str(&format!("d_{v}^{a}")),
                }
            }
            parts.push(match (d.is_empty(), c.is_one()) {
                (true, _) => format!("({c})"),
                (false, true) => d,
                (false, false) => format!("({c})*{d}"),
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// An operator matrix with the columns whose image was cut by the truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct OpMatrix {
    pub matrix: Matrix<Expr>,
    pub boundary: Vec<bool>,
}

/// Monomials in `nvars` variables of total degree at most `degree`, by degree then
/// lexicographically.
pub fn monomial_basis(nvars: usize, degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for d in 0..=degree {
        let mut level = vec![Vec::new()];
        for k in 0..nvars {
            level = level
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    let used: u32 = prefix.iter().sum();
                    let range: Vec<u32> = if k + 1 == nvars { vec![d - used] } else { (0..=d - used).rev().collect() };
                    range.into_iter().map(move |e| {
                        let mut p = prefix.clone();
                        p.push(e);
                        p
                    })
                })
                .collect();
        }
        if nvars == 0 {
            if d == 0 {
                out.push(Vec::new());
            }
            continue;
        }
        out.extend(level);
    }
    out
}

pub fn monomial_expr(vars: &[Sym], idx: &[u32]) -> Expr {
    let pairs: Vec<(Sym, u32)> = vars.iter().cloned().zip(idx.iter().copied()).filter(|(_, e)| *e > 0).collect();
    Expr::poly(Poly::term(Monomial::from_pairs(pairs), crate::symbolic::Scalar::one()))
}

/// Coefficients of `f` as a polynomial in `vars`; `None` when a denominator involves them.
pub fn poly_coefficients(f: &Expr, vars: &[Sym]) -> Option<BTreeMap<MultiIndex, Expr>> {
    if vars.iter().any(|v| f.denom().contains(v)) {
        return None;
    }
    let mut acc: BTreeMap<MultiIndex, Poly> = BTreeMap::new();
    for (m, c) in f.numer().terms() {
        let idx: MultiIndex = vars.iter().map(|v| m.exponent(v)).collect();
        let rest: Vec<(Sym, u32)> =
            m.factors().iter().filter(|(s, _)| !vars.contains(s)).cloned().collect();
        let term = Poly::term(Monomial::from_pairs(rest), c.clone());
        let slot = acc.entry(idx).or_insert_with(Poly::zero);
        *slot = slot.add(&term);
    }
    let den = f.denom().clone();
    Some(
        acc.into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| (k, Expr::from_frac(p, den.clone()).expect("nonzero denominator")))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y() -> Vec<Sym> {
        vec![Sym::new("y")]
    }

    #[test]
    fn weyl_commutator() {
        let v = y();
        let d = DiffOp::partial(&v, 0);
        let m = DiffOp::multiplication(&v, Expr::sym(&v[0]));
        assert_eq!(d.commutator(&m), DiffOp::identity(&v));
    }

    #[test]
    fn conjugation_by_gaussian() {
        let v = y();
        let yy = Expr::sym(&v[0]);
        let d = DiffOp::partial(&v, 0);
        let e = (&yy * &yy).scale(&crate::symbolic::Scalar::from_int(-1));
        // e^{y^2} d e^{-y^2} = d - 2y
        let c = d.conjugate_exp(&e);
        let expect = d.sub(&DiffOp::multiplication(&v, &yy * &Expr::int(2)));
        assert_eq!(c, expect);
        // the conjugation is an algebra map
        let d2 = d.compose(&d).conjugate_exp(&e);
        assert_eq!(d2, c.compose(&c));
    }

    #[test]
    fn flow_conjugation_terminates() {
        let v = vec![Sym::new("t"), Sym::new("y")];
        let y = Expr::sym(&v[1]);
        let t_gen = DiffOp::partial(&v, 1).pow(2);
        let a = DiffOp::multiplication(&v, y.clone());
        // e^{-t d^2} y e^{t d^2} = y + t[y, d^2] = y - 2t d
        let c = a.conjugate_flow(&t_gen, 0, 8).unwrap();
        let expect = a.sub(&DiffOp::partial(&v, 1).scale(&(&Expr::sym(&v[0]) * &Expr::int(2))));
        assert_eq!(c, expect);
    }

    #[test]
    fn basis_and_matrices() {
        assert_eq!(monomial_basis(1, 3).len(), 4);
        assert_eq!(monomial_basis(2, 2).len(), 6);
        let v = y();
        let raise = DiffOp::multiplication(&v, Expr::sym(&v[0]));
        let m = raise.matrix_on(&monomial_basis(1, 2)).unwrap();
        assert_eq!(m.boundary, vec![false, false, true]);
        assert!(m.matrix[1][0].is_one());
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    fn vars() -> Vec<Sym> {
        vec![Sym::new("u"), Sym::new("w")]
    }

    /// Terms `(c0 + c1 u + c2 w) d^alpha` with `alpha` of total order at most 2.
    fn op(coeffs: &[i64]) -> DiffOp {
        let v = vars();
        let (u, w) = (Expr::sym(&v[0]), Expr::sym(&v[1]));
        let alphas: [[u32; 2]; 6] = [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]];
        let mut out = DiffOp::zero(&v);
        for (alpha, c) in alphas.iter().zip(coeffs.chunks(3)) {
            let coeff = &(&Expr::int(c[0]) + &(&u * &Expr::int(c[1]))) + &(&w * &Expr::int(c[2]));
            out = out.add(&DiffOp::term(&v, alpha.to_vec(), coeff));
        }
        out
    }

    fn operator() -> impl Strategy<Value = DiffOp> {
        proptest::collection::vec(-3i64..=3, 18).prop_map(|c| op(&c))
    }

    fn function() -> impl Strategy<Value = Expr> {
        proptest::collection::vec(-4i64..=4, 6).prop_map(|c| {
            let v = vars();
            monomial_basis(2, 3)
                .iter()
                .zip(c.iter().cycle())
                .map(|(idx, k)| &monomial_expr(&v, idx) * &Expr::int(*k))
                .sum()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn composition_agrees_with_successive_application(a in operator(), b in operator(), f in function()) {
            prop_assert_eq!(a.compose(&b).apply(&f), a.apply(&b.apply(&f)));
        }

        #[test]
        fn commutators_satisfy_jacobi(a in operator(), b in operator(), c in operator()) {
            let j = a
                .commutator(&b.commutator(&c))
                .add(&b.commutator(&c.commutator(&a)))
                .add(&c.commutator(&a.commutator(&b)));
            prop_assert!(j.is_zero());
        }
    }
}
