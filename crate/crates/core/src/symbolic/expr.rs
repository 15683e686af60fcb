use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::{Monomial, Poly, Sym};
use super::scalar::Scalar;
use super::{Result, SymbolicError};

/// Canonical rational expression `num / den`.
///
/// Invariants: `den` is free of auxiliary symbols, monic under the graded-lex order,
/// and coprime to every coefficient of `num` taken over the auxiliary monomials.
/// Zero is `0 / 1`. Two expressions are equal iff their fields are identical.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Expr {
    num: Poly,
    den: Poly,
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl Expr {
    pub fn zero() -> Self {
        Expr { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Expr::constant(Scalar::one())
    }

    pub fn i() -> Self {
        Expr::constant(Scalar::i())
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(Scalar::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Expr::constant(Scalar::from_ratio(n, d))
    }

    pub fn constant(c: Scalar) -> Self {
        Expr { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn sym(s: &Sym) -> Self {
        Expr { num: Poly::var(s), den: Poly::one() }
    }

    pub fn poly(p: Poly) -> Self {
        Expr { num: p, den: Poly::one() }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<Sym> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    /// Symbols the expression depends on, with auxiliary symbols replaced by the
    /// symbols of their radicands.
    pub fn free_vars(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        for s in self.vars() {
            match s.radicand() {
                Some(r) => out.extend(r.vars()),
                None => {
                    out.insert(s);
                }
            }
        }
        out
    }

    pub fn contains(&self, s: &Sym) -> bool {
        self.free_vars().contains(s)
    }

    /// Builds the canonical form of `num / den`.
    pub fn from_frac(num: Poly, den: Poly) -> Result<Expr> {
        if den.is_zero() {
            return Err(SymbolicError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Expr::zero());
        }
        let (mut num, mut den) = (num, den);
        while let Some(t) = den.aux_syms().into_iter().next() {
            let parts = den.coeffs_in(&t);
            let d0 = parts[0].clone();
            let d1 = parts.get(1).cloned().unwrap_or_default();
            let conj = d0.sub(&d1.mul(&Poly::var(&t)));
            num = num.mul(&conj);
            den = den.mul(&conj);
            if den.is_zero() {
                return Err(SymbolicError::ZeroDenominator);
            }
        }
        if num.is_zero() {
            return Ok(Expr::zero());
        }
        if let Some(c) = den.constant_value() {
            let inv = c.inv().expect("nonzero constant");
            return Ok(Expr { num: num.scale(&inv), den: Poly::one() });
        }
        let parts = num.split_aux();
        let mut g = den.clone();
        for p in parts.values() {
            g = Poly::gcd(&g, p);
            if g.is_one() {
                break;
            }
        }
        if !g.is_one() {
            let mut reduced = Poly::zero();
            for (aux, p) in &parts {
                let q = p.div_exact(&g).expect("gcd divides");
                reduced = reduced.add(&q.mul_monomial(aux, &Scalar::one()));
            }
            num = reduced;
            den = den.div_exact(&g).expect("gcd divides");
        }
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(Expr { num, den })
    }

    fn frac(num: Poly, den: Poly) -> Expr {
        Expr::from_frac(num, den).expect("nonzero denominator")
    }

    pub fn scale(&self, c: &Scalar) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr { num: self.num.scale(c), den: self.den.clone() }
    }

    /// `self / o`; fails when `o` is identically zero.
    pub fn checked_div(&self, o: &Expr) -> Result<Expr> {
        if o.is_zero() {
            return Err(SymbolicError::ZeroDenominator);
        }
        Expr::from_frac(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn inv(&self) -> Result<Expr> {
        Expr::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Expr {
        if e == 0 {
            return Expr::one();
        }
        if self.num.aux_syms().is_empty() {
            return Expr { num: self.num.pow(e), den: self.den.pow(e) };
        }
        Expr::frac(self.num.pow(e), self.den.pow(e))
    }

    pub fn powi(&self, e: i64) -> Result<Expr> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inv()?.pow((-e) as u32))
        }
    }

    /// Partial derivative; auxiliary symbols are differentiated through `s^2 = R`.
    pub fn diff(&self, v: &Sym) -> Expr {
        let dn = total_derivative(&self.num, v);
        if self.den.is_one() {
            return dn;
        }
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return dn.mul_poly_den(&self.den);
        }
        let d = Expr::poly(self.den.clone());
        let top = &(&dn * &d) - &Expr::poly(self.num.mul(&dd));
        top.checked_div(&Expr::poly(self.den.pow(2))).expect("nonzero denominator")
    }

    fn mul_poly_den(&self, d: &Poly) -> Expr {
        Expr::frac(self.num.clone(), self.den.mul(d))
    }

    /// Simultaneous substitution of symbols by expressions.
    pub fn substitute(&self, bindings: &BTreeMap<Sym, Expr>) -> Result<Expr> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let mut cache: BTreeMap<(Sym, u32), Expr> = BTreeMap::new();
        let n = subst_poly(&self.num, bindings, &mut cache)?;
        let d = subst_poly(&self.den, bindings, &mut cache)?;
        n.checked_div(&d)
    }

    pub fn substitute_one(&self, s: &Sym, value: &Expr) -> Result<Expr> {
        let mut b = BTreeMap::new();
        b.insert(s.clone(), value.clone());
        self.substitute(&b)
    }

    /// Value at a point given by scalars; `None` when a symbol is unbound or the
    /// denominator vanishes.
    pub fn eval(&self, at: &BTreeMap<Sym, Scalar>) -> Option<Scalar> {
        let b: BTreeMap<Sym, Expr> =
            at.iter().map(|(k, v)| (k.clone(), Expr::constant(v.clone()))).collect();
        self.substitute(&b).ok()?.constant_value()
    }

    /// Drops every numerator term of degree above `order` in `vars`.
    /// The denominator must not depend on `vars`.
    pub fn truncate(&self, vars: &[Sym], order: u32) -> Expr {
        let mut keep = Poly::zero();
        for (m, c) in self.num.terms() {
            let deg: u32 = vars.iter().map(|v| m.exponent(v)).sum();
            if deg <= order {
                keep = keep.add(&Poly::term(m.clone(), c.clone()));
            }
        }
        Expr::frac(keep, self.den.clone())
    }

    /// Taylor polynomial at `vars = 0` through total degree `order`; the coefficients
    /// may be rational in the remaining symbols.
    pub fn taylor(&self, vars: &[Sym], order: u32) -> Result<Expr> {
        let zero: BTreeMap<Sym, Expr> = vars.iter().map(|v| (v.clone(), Expr::zero())).collect();
        let mut aux_series = BTreeMap::new();
        for t in self.num.aux_syms() {
            aux_series.insert(t.clone(), sqrt_series(&t, vars, &zero, order)?);
        }
        let num = if aux_series.is_empty() {
            Expr::poly(self.num.clone())
        } else {
            Expr::poly(self.num.clone()).substitute(&aux_series)?.truncate(vars, order)
        };
        let den = Expr::poly(self.den.clone());
        let d0 = den.substitute(&zero)?;
        if d0.is_zero() {
            return Err(SymbolicError::ZeroDenominator);
        }
        let u = (&den - &d0).checked_div(&d0)?;
        let mut inv = Expr::one();
        let mut power = Expr::one();
        for _ in 0..order {
            power = (&power * &u).truncate(vars, order).neg();
            if power.is_zero() {
                break;
            }
            inv = &inv + &power;
        }
        let inv = inv.checked_div(&d0)?;
        Ok((&num * &inv).truncate(vars, order))
    }

    /// Homogeneous part of the given total degree in `vars` (polynomial numerators only).
    pub fn degree_part(&self, vars: &[Sym], degree: u32) -> Expr {
        let mut keep = Poly::zero();
        for (m, c) in self.num.terms() {
            let deg: u32 = vars.iter().map(|v| m.exponent(v)).sum();
            if deg == degree {
                keep = keep.add(&Poly::term(m.clone(), c.clone()));
            }
        }
        Expr::frac(keep, self.den.clone())
    }

    /// Complex conjugation of coefficients (all symbols treated as real).
    pub fn conj(&self) -> Expr {
        let c = |p: &Poly| {
            let mut out = Poly::zero();
            for (m, s) in p.terms() {
                out = out.add(&Poly::term(m.clone(), s.conj()));
            }
            out
        };
        Expr::frac(c(&self.num), c(&self.den))
    }
}

fn total_derivative(p: &Poly, v: &Sym) -> Expr {
    let mut out = Expr::poly(p.derivative(v));
    for t in p.aux_syms() {
        let r = t.radicand().expect("aux");
        let dr = r.derivative(v);
        if dr.is_zero() {
            continue;
        }
        let dp_dt = p.derivative(&t);
        if dp_dt.is_zero() {
            continue;
        }
        // dt/dv = R_v * t / (2 R)
        let num = dp_dt.mul(&dr).mul(&Poly::var(&t));
        let den = r.scale(&Scalar::from_int(2));
        out = &out + &Expr::frac(num, den);
    }
    out
}

fn subst_poly(
    p: &Poly,
    b: &BTreeMap<Sym, Expr>,
    cache: &mut BTreeMap<(Sym, u32), Expr>,
) -> Result<Expr> {
    for s in p.aux_syms() {
        if !b.contains_key(&s) {
            let r = s.radicand().expect("aux");
            if r.vars().iter().any(|v| b.contains_key(v)) {
                return Err(SymbolicError::UnboundAux(s.name().to_string()));
            }
        }
    }
    let mut acc = Expr::zero();
    let mut plain = Poly::zero();
    for (m, c) in p.terms() {
        if !m.factors().iter().any(|(s, _)| b.contains_key(s)) {
            plain = plain.add(&Poly::term(m.clone(), c.clone()));
            continue;
        }
        let mut keep = Vec::new();
        let mut t = Expr::constant(c.clone());
        for (s, e) in m.factors() {
            match b.get(s) {
                Some(val) => {
                    let key = (s.clone(), *e);
                    let pw = cache.entry(key).or_insert_with(|| val.pow(*e)).clone();
                    t = &t * &pw;
                }
                None => keep.push((s.clone(), *e)),
            }
        }
        if !keep.is_empty() {
            t = &t * &Expr::poly(Poly::term(Monomial::from_pairs(keep), Scalar::one()));
        }
        acc = &acc + &t;
    }
    Ok(&acc + &Expr::poly(plain))
}

fn sqrt_series(
    t: &Sym,
    vars: &[Sym],
    zero: &BTreeMap<Sym, Expr>,
    order: u32,
) -> Result<Expr> {
    let r = Expr::poly(t.radicand().expect("aux").clone());
    let r0 = r.substitute(zero)?;
    let root = r0
        .constant_value()
        .and_then(|c| c.rational_sqrt())
        .ok_or_else(|| SymbolicError::IrrationalAux(t.name().to_string()))?;
    let u = (&r - &r0).checked_div(&r0)?;
    let mut sum = Expr::one();
    let mut power = Expr::one();
    let mut coeff = BigRational::from_integer(BigInt::from(1));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    for k in 1..=order {
        let kk = BigRational::from_integer(BigInt::from(k));
        coeff = coeff * (&half - (&kk - BigRational::from_integer(BigInt::from(1)))) / kk;
        power = (&power * &u).truncate(vars, order);
        if power.is_zero() {
            break;
        }
        sum = &sum + &power.scale(&Scalar::real(coeff.clone()));
    }
    Ok(sum.scale(&root).truncate(vars, order))
}

impl<'a> Add<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn add(self, o: &Expr) -> Expr {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return Expr { num: self.num.add(&o.num), den: Poly::one() };
            }
            return Expr::frac(self.num.add(&o.num), self.den.clone());
        }
        if o.den.is_one() {
            return Expr::frac(self.num.add(&o.num.mul(&self.den)), self.den.clone());
        }
        if self.den.is_one() {
            return Expr::frac(self.num.mul(&o.den).add(&o.num), o.den.clone());
        }
        let g = Poly::gcd(&self.den, &o.den);
        let a = o.den.div_exact(&g).expect("gcd");
        let b = self.den.div_exact(&g).expect("gcd");
        Expr::frac(self.num.mul(&a).add(&o.num.mul(&b)), self.den.mul(&a))
    }
}

impl<'a> Sub<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn sub(self, o: &Expr) -> Expr {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn mul(self, o: &Expr) -> Expr {
        if self.is_zero() || o.is_zero() {
            return Expr::zero();
        }
        if let Some(c) = self.constant_value() {
            return o.scale(&c);
        }
        if let Some(c) = o.constant_value() {
            return self.scale(&c);
        }
        if self.den.is_one() && o.den.is_one() {
            return Expr { num: self.num.mul(&o.num), den: Poly::one() };
        }
        Expr::frac(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                (&self).$m(&o)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<Scalar> for Expr {
    fn from(c: Scalar) -> Self {
        Expr::constant(c)
    }
}

impl From<&Sym> for Expr {
    fn from(s: &Sym) -> Self {
        Expr::sym(s)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| &a + &b)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return self.num.fmt_sum(f);
        }
        write!(f, "(")?;
        self.num.fmt_sum(f)?;
        write!(f, ")/(")?;
        self.den.fmt_sum(f)?;
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: &str) -> Sym {
        Sym::new(n)
    }

    #[test]
    fn fractions_cancel() {
        let x = Expr::sym(&s("x"));
        let y = Expr::sym(&s("y"));
        let a = (&x * &x - &y * &y).checked_div(&(&x - &y)).unwrap();
        assert_eq!(a, &x + &y);
        let b = Expr::one().checked_div(&x).unwrap();
        assert_eq!(&b * &x, Expr::one());
    }

    #[test]
    fn aux_denominator_is_rationalized() {
        let a = s("a");
        let t = Sym::aux("t", Poly::var(&a));
        let inv = Expr::sym(&t).inv().unwrap();
        assert!(inv.denom().aux_syms().is_empty());
        assert_eq!(&inv * &Expr::sym(&t), Expr::one());
    }

    #[test]
    fn aux_chain_rule() {
        let a = s("a");
        let t = Sym::aux("t", Poly::var(&a));
        let d = Expr::sym(&t).diff(&a);
        let expected = (Expr::sym(&t)).checked_div(&Expr::sym(&a).scale(&Scalar::from_int(2))).unwrap();
        assert_eq!(d, expected);
    }

    #[test]
    fn taylor_of_geometric_series() {
        let x = s("x");
        let e = Expr::one().checked_div(&(Expr::one() - Expr::sym(&x))).unwrap();
        let t = e.taylor(std::slice::from_ref(&x), 3).unwrap();
        let xe = Expr::sym(&x);
        let expected = Expr::one() + xe.clone() + xe.pow(2) + xe.pow(3);
        assert_eq!(t, expected);
    }

    #[test]
    fn taylor_of_square_root() {
        let x = s("x");
        let t = Sym::aux("t", Poly::one().add(&Poly::var(&x)));
        let series = Expr::sym(&t).taylor(std::slice::from_ref(&x), 2).unwrap();
        let xe = Expr::sym(&x);
        let expected = Expr::one() + xe.scale(&Scalar::from_ratio(1, 2)) - xe.pow(2).scale(&Scalar::from_ratio(1, 8));
        assert_eq!(series, expected);
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use crate::symbolic::{parse_expr, SymbolTable};
    use proptest::prelude::*;

    /// Polynomial in `x`, `y` from a coefficient list over monomials `x^a y^b`, `a, b <= 2`.
    fn poly(coeffs: &[(i64, i64)], x: &Sym, y: &Sym) -> Expr {
        let (xe, ye) = (Expr::sym(x), Expr::sym(y));
        let mut acc = Expr::zero();
        for (k, (re, im)) in coeffs.iter().enumerate() {
            let c = Expr::constant(&Scalar::from_int(*re) + &(&Scalar::i() * &Scalar::from_int(*im)));
            acc = &acc + &(&c * &(&xe.pow((k / 3) as u32) * &ye.pow((k % 3) as u32)));
        }
        acc
    }

    fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
        proptest::collection::vec((-5i64..=5, -2i64..=2), 9)
    }

    fn point() -> impl Strategy<Value = (Scalar, Scalar)> {
        ((-6i64..=6, 1i64..=4), (-6i64..=6, 1i64..=4))
            .prop_map(|((a, b), (c, d))| (Scalar::from_ratio(a, b), Scalar::from_ratio(c, d)))
    }

    fn table() -> (SymbolTable, Sym, Sym) {
        let mut t = SymbolTable::new();
        let x = t.coordinate("x").unwrap();
        let y = t.coordinate("y").unwrap();
        (t, x, y)
    }

    fn at(x: &Sym, y: &Sym, p: &(Scalar, Scalar)) -> BTreeMap<Sym, Scalar> {
        BTreeMap::from([(x.clone(), p.0.clone()), (y.clone(), p.1.clone())])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// Exact Taylor expansion in `x` about a rational point as an oracle for `diff`.
        #[test]
        fn derivatives_reproduce_shifted_values(c in coeffs(), p in point(), h in -5i64..=5) {
            let (_, x, y) = table();
            let f = poly(&c, &x, &y);
            let h = Scalar::from_int(h);
            let shifted = at(&x, &y, &(&p.0 + &h, p.1.clone()));
            let mut series = Scalar::zero();
            let mut d = f.clone();
            let mut factorial = Scalar::one();
            for k in 0..=2u32 {
                if k > 0 {
                    d = d.diff(&x);
                    factorial = &factorial * &Scalar::from_int(k as i64);
                }
                let term = &d.eval(&at(&x, &y, &p)).unwrap() * &h.pow(k);
                series = &series + &(&term / &factorial);
            }
            prop_assert!(d.diff(&x).is_zero());
            prop_assert_eq!(f.eval(&shifted).unwrap(), series);
        }

        #[test]
        fn quotient_rule(a in coeffs(), b in proptest::collection::vec((-5i64..=5, -2i64..=2), 4)) {
            let (_, x, y) = table();
            let f = poly(&a, &x, &y);
            let g = poly(&b, &x, &y);
            prop_assume!(!g.is_zero());
            let q = f.checked_div(&g).unwrap();
            let expected = (&(&f.diff(&x) * &g) - &(&f * &g.diff(&x))).checked_div(&g.pow(2)).unwrap();
            prop_assert_eq!(q.diff(&x), expected);
        }

        #[test]
        fn substitution_commutes_with_evaluation(a in coeffs(), b in coeffs(), p in point()) {
            let (_, x, y) = table();
            let f = poly(&a, &x, &y);
            let g = poly(&b, &x, &y);
            let composed = f.substitute_one(&x, &g).unwrap();
            let gx = g.eval(&at(&x, &y, &p)).unwrap();
            let direct = f.eval(&at(&x, &y, &(gx, p.1.clone()))).unwrap();
            prop_assert_eq!(composed.eval(&at(&x, &y, &p)).unwrap(), direct);
        }

        #[test]
        fn printing_round_trips(a in coeffs(), b in coeffs()) {
            let (t, x, y) = table();
            let g = poly(&b, &x, &y);
            prop_assume!(!g.is_zero());
            let e = poly(&a, &x, &y).checked_div(&g).unwrap();
            prop_assert_eq!(parse_expr(&e.to_string(), &t).unwrap(), e);
        }
    }
}
