use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::scalar::Scalar;

struct SymData {
    name: String,
    radicand: Option<Poly>,
}

/// A named symbol. Auxiliary symbols carry a radicand `R` and obey `s^2 = R`.
///
/// Identity, ordering and hashing use the name only.
#[derive(Clone)]
pub struct Sym(Arc<SymData>);

impl Sym {
    pub fn new(name: impl Into<String>) -> Self {
        Sym(Arc::new(SymData { name: name.into(), radicand: None }))
    }

    /// An auxiliary square root `name = sqrt(radicand)`. The radicand must not contain
    /// auxiliary symbols itself.
    pub fn aux(name: impl Into<String>, radicand: Poly) -> Self {
        debug_assert!(radicand.aux_syms().is_empty());
        Sym(Arc::new(SymData { name: name.into(), radicand: Some(radicand) }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn radicand(&self) -> Option<&Poly> {
        self.0.radicand.as_ref()
    }

    pub fn is_aux(&self) -> bool {
        self.0.radicand.is_some()
    }
}

impl PartialEq for Sym {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.0.name == o.0.name
    }
}
impl Eq for Sym {}

impl Hash for Sym {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.0.name.hash(h)
    }
}

impl PartialOrd for Sym {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Sym {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.name.cmp(&o.0.name)
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.name)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.name)
    }
}

/// Power product of symbols, sorted by symbol name, exponents positive.
///
/// Ordered graded-lexicographically: higher total degree is greater; ties are broken
/// lexicographically with alphabetically earlier symbols ranking higher.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(Vec<(Sym, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: &Sym) -> Self {
        Monomial(vec![(s.clone(), 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(Sym, u32)>) -> Self {
        pairs.retain(|(_, e)| *e > 0);
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Sym, u32)> = Vec::with_capacity(pairs.len());
        for (s, e) in pairs {
            match out.last_mut() {
                Some((ls, le)) if *ls == s => *le += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, s: &Sym) -> u32 {
        self.0.iter().find(|(v, _)| v == s).map_or(0, |(_, e)| *e)
    }

    pub fn factors(&self) -> &[(Sym, u32)] {
        &self.0
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            match self.0[i].0.cmp(&o.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(o.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + o.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&o.0[j..]);
        Monomial(out)
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (s, e) in &self.0 {
            if j < o.0.len() && o.0[j].0 < *s {
                return None;
            }
            if j < o.0.len() && o.0[j].0 == *s {
                let oe = o.0[j].1;
                j += 1;
                match e.cmp(&oe) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((s.clone(), e - oe)),
                }
            } else {
                out.push((s.clone(), *e));
            }
        }
        if j < o.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for (s, e) in &self.0 {
            let oe = o.exponent(s);
            if oe > 0 {
                out.push((s.clone(), (*e).min(oe)));
            }
        }
        Monomial(out)
    }

    /// Removes a symbol, returning its exponent and the remaining monomial.
    pub fn split_off(&self, s: &Sym) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(v, x)| {
                if v == s {
                    e = *x;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (e, Monomial(rest))
    }

    fn has_reducible_aux(&self) -> bool {
        self.0.iter().any(|(s, e)| *e >= 2 && s.is_aux())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        let d = self.degree().cmp(&o.degree());
        if d != Ordering::Equal {
            return d;
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), o.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((a, ea)), Some((b, eb))) => match a.cmp(b) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (s, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial over the Gaussian rationals.
///
/// Products are reduced with respect to auxiliary symbols: every `s^2` is replaced by
/// the radicand of `s`, so auxiliary exponents never exceed one.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(s: &Sym) -> Self {
        Poly::term(Monomial::var(s), Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading term under the graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.leading().map_or_else(Scalar::zero, |(_, c)| c.clone())
    }

    /// Adds `c*m` without auxiliary reduction.
    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `c*m`, expanding any auxiliary power `s^k`, `k >= 2`.
    fn add_reduced_term(&mut self, m: Monomial, c: Scalar) {
        if !m.has_reducible_aux() {
            self.add_term(m, c);
            return;
        }
        let mut base = Vec::new();
        let mut factor = Poly::one();
        for (s, e) in m.factors() {
            if s.is_aux() && *e >= 2 {
                let r = s.radicand().expect("aux radicand");
                factor = factor.mul(&r.pow(e / 2));
                if e % 2 == 1 {
                    base.push((s.clone(), 1));
                }
            } else {
                base.push((s.clone(), *e));
            }
        }
        let base = Monomial(base);
        for (fm, fc) in factor.terms {
            self.add_term(base.mul(&fm), &fc * &c);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Poly {
        let mut out = Poly::zero();
        for (tm, tc) in &self.terms {
            out.add_reduced_term(tm.mul(m), tc * c);
        }
        out
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let (small, big) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        if let Some(c) = small.constant_value() {
            return big.scale(&c);
        }
        let mut out = Poly::zero();
        for (m1, c1) in &small.terms {
            for (m2, c2) in &big.terms {
                out.add_reduced_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn vars(&self) -> BTreeSet<Sym> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(s, _)| s.clone()))
            .collect()
    }

    pub fn aux_syms(&self) -> BTreeSet<Sym> {
        self.vars().into_iter().filter(Sym::is_aux).collect()
    }

    pub fn contains(&self, s: &Sym) -> bool {
        self.terms.keys().any(|m| m.exponent(s) > 0)
    }

    pub fn degree_in(&self, s: &Sym) -> u32 {
        self.terms.keys().map(|m| m.exponent(s)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Coefficients with respect to `s`: `self = sum_k out[k] * s^k`.
    pub fn coeffs_in(&self, s: &Sym) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(s) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(s);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(s: &Sym, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let xk = Monomial::from_pairs(vec![(s.clone(), k as u32)]);
            for (m, v) in &c.terms {
                out.add_reduced_term(m.mul(&xk), v.clone());
            }
        }
        out
    }

    /// Formal partial derivative, treating every symbol as independent.
    pub fn derivative(&self, s: &Sym) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(s);
            if e == 0 {
                continue;
            }
            let mm = rest.mul(&Monomial::from_pairs(vec![(s.clone(), e - 1)]));
            out.add_term(mm, c * &Scalar::from_int(e as i64));
        }
        out
    }

    /// Groups terms by their auxiliary-symbol part: `self = sum_a a * out[a]`.
    pub fn split_aux(&self) -> BTreeMap<Monomial, Poly> {
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (aux, plain): (Vec<_>, Vec<_>) =
                m.factors().iter().cloned().partition(|(s, _)| s.is_aux());
            out.entry(Monomial(aux))
                .or_default()
                .add_term(Monomial(plain), c.clone());
        }
        out
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    /// `d` must be free of auxiliary symbols.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.inv()?));
        }
        let dm = dm.clone();
        let dci = dc.inv()?;
        let mut q = Poly::zero();
        let mut r = self.clone();
        while let Some((rm, rc)) = r.leading() {
            let tm = rm.div(&dm)?;
            let tc = rc * &dci;
            r = r.sub(&d.mul_monomial(&tm, &tc));
            q.add_term(tm, tc);
        }
        Some(q)
    }

    /// Greatest common divisor (monic) of two auxiliary-free polynomials.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one();
        }
        if a.len() == 1 || b.len() == 1 {
            let (single, other) = if a.len() == 1 { (a, b) } else { (b, a) };
            let mut g = single.leading().unwrap().0.clone();
            for m in other.terms.keys() {
                g = g.gcd(m);
                if g.is_one() {
                    break;
                }
            }
            return Poly::term(g, Scalar::one());
        }
        if a == b {
            return a.monic();
        }
        let va = a.vars();
        let vb = b.vars();
        let Some(x) = va.intersection(&vb).next().cloned() else {
            return Poly::one();
        };
        let ca = a.coeffs_in(&x);
        let cb = b.coeffs_in(&x);
        let cont_a = gcd_list(&ca);
        let cont_b = gcd_list(&cb);
        let g_cont = Poly::gcd(&cont_a, &cont_b);
        let pa: Vec<Poly> = ca.iter().map(|c| c.div_exact(&cont_a).expect("content")).collect();
        let pb: Vec<Poly> = cb.iter().map(|c| c.div_exact(&cont_b).expect("content")).collect();
        let (mut r0, mut r1) = if pa.len() >= pb.len() { (pa, pb) } else { (pb, pa) };
        let g = loop {
            if r1.len() == 1 {
                break vec![Poly::one()];
            }
            let r = prem(&r0, &r1);
            if r.is_empty() {
                break primitive(&r1);
            }
            let r = primitive(&r);
            if r.len() == 1 {
                break vec![Poly::one()];
            }
            r0 = r1;
            r1 = r;
        };
        g_cont.mul(&Poly::from_coeffs_in(&x, &g)).monic()
    }

    /// Evaluates with every symbol replaced by a scalar; unbound symbols are an error.
    pub fn eval(&self, at: &dyn Fn(&Sym) -> Option<Scalar>) -> Option<Scalar> {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (s, e) in m.factors() {
                t = &t * &at(s)?.pow(*e);
            }
            acc += &t;
        }
        Some(acc)
    }

    pub(crate) fn fmt_sum(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = !c.is_compound() && c.is_negative_leading();
            let mag = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                if mag.is_compound() {
                    write!(f, "({mag})")?;
                } else {
                    write!(f, "{mag}")?;
                }
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else if mag.is_compound() {
                write!(f, "({mag})*{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_sum(f)
    }
}

fn gcd_list(ps: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for p in ps {
        if p.is_zero() {
            continue;
        }
        g = Poly::gcd(&g, p);
        if g.is_one() {
            break;
        }
    }
    g
}

fn trim(v: &mut Vec<Poly>) {
    while v.last().is_some_and(Poly::is_zero) {
        v.pop();
    }
}

/// Pseudo-remainder of univariate polynomials with polynomial coefficients.
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r: Vec<Poly> = a.to_vec();
    trim(&mut r);
    let n = b.len() - 1;
    let lc = &b[n];
    while r.len() > n {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - n;
        for (k, rk) in r.iter_mut().enumerate() {
            *rk = rk.mul(lc);
            if k >= shift {
                *rk = rk.sub(&lr.mul(&b[k - shift]));
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Primitive part of a univariate polynomial with polynomial coefficients, made monic.
fn primitive(v: &[Poly]) -> Vec<Poly> {
    let cont = gcd_list(v);
    let mut out: Vec<Poly> = v.iter().map(|c| c.div_exact(&cont).expect("content")).collect();
    trim(&mut out);
    if let Some(top) = out.last() {
        let lc = top.leading_coeff();
        if let Some(inv) = lc.inv() {
            if !lc.is_one() {
                out = out.iter().map(|c| c.scale(&inv)).collect();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Poly {
        Poly::var(&Sym::new(n))
    }

    fn c(n: i64) -> Poly {
        Poly::constant(Scalar::from_int(n))
    }

    #[test]
    fn grlex_order() {
        let x = Sym::new("x");
        let y = Sym::new("y");
        let x2 = Monomial::from_pairs(vec![(x.clone(), 2)]);
        let xy = Monomial::from_pairs(vec![(x.clone(), 1), (y.clone(), 1)]);
        let y2 = Monomial::from_pairs(vec![(y.clone(), 2)]);
        let y3 = Monomial::from_pairs(vec![(y, 3)]);
        assert!(x2 > xy && xy > y2 && y3 > x2);
        assert!(Monomial::var(&x) > Monomial::one());
    }

    #[test]
    fn gcd_of_products() {
        let (x, y, z) = (v("x"), v("y"), v("z"));
        let f = x.add(&y).mul(&x.sub(&z)).mul(&y.add(&c(2)));
        let g = x.add(&y).mul(&z.add(&c(1))).mul(&y.add(&c(2)));
        let expected = x.add(&y).mul(&y.add(&c(2))).monic();
        assert_eq!(Poly::gcd(&f, &g), expected);
    }

    #[test]
    fn gcd_coprime() {
        let (x, y) = (v("x"), v("y"));
        let f = x.mul(&x).add(&y);
        let g = x.add(&y.mul(&y));
        assert!(Poly::gcd(&f, &g).is_one());
    }

    #[test]
    fn exact_division() {
        let (x, y) = (v("x"), v("y"));
        let f = x.mul(&x).sub(&y.mul(&y));
        let q = f.div_exact(&x.sub(&y)).unwrap();
        assert_eq!(q, x.add(&y));
        assert!(f.div_exact(&x.add(&c(1))).is_none());
    }

    #[test]
    fn aux_reduction_on_multiply() {
        let a = Sym::new("a");
        let s = Sym::aux("s", Poly::var(&a));
        let sp = Poly::var(&s);
        assert_eq!(sp.mul(&sp), Poly::var(&a));
        assert_eq!(sp.pow(3), Poly::var(&a).mul(&sp));
    }
}
