//! Universal enveloping algebra of an extended Lie algebra: PBW normal forms and
//! higher-order polarization checks.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::extension::{ExtendedAlgebra, CENTRAL};
use crate::lie::LieAlgebra;
use crate::linalg::{in_span, nullspace, Matrix};
use crate::symbolic::{parse_expr, Expr, Sym, SymbolKind, SymbolTable};

/// Word of generator indices; the central generator has index `dim`.
pub type Word = Vec<usize>;

/// Finite sum of words with expression coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct UeaElement {
    terms: BTreeMap<Word, Expr>,
}

impl UeaElement {
    pub fn zero() -> Self {
        UeaElement::default()
    }

    pub fn scalar(c: Expr) -> Self {
        let mut u = UeaElement::zero();
        u.insert(Vec::new(), c);
        u
    }

    pub fn generator(i: usize) -> Self {
        let mut u = UeaElement::zero();
        u.insert(vec![i], Expr::one());
        u
    }

    pub fn word(w: Word, c: Expr) -> Self {
        let mut u = UeaElement::zero();
        u.insert(w, c);
        u
    }

    /// `sum_i v_i X_i` for an extended vector (central coefficient last).
    pub fn from_vector(v: &[Expr]) -> Self {
        let mut u = UeaElement::zero();
        for (i, c) in v.iter().enumerate() {
            u.insert(vec![i], c.clone());
        }
        u
    }

    fn insert(&mut self, w: Word, c: Expr) {
        let sum = match self.terms.remove(&w) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(w, sum);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Word, Expr> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn add(&self, o: &UeaElement) -> UeaElement {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &UeaElement) -> UeaElement {
        self.add(&o.scale(&Expr::int(-1)))
    }

    pub fn scale(&self, c: &Expr) -> UeaElement {
        let mut out = UeaElement::zero();
        for (w, v) in &self.terms {
            out.insert(w.clone(), c * v);
        }
        out
    }

    /// Concatenation product.
    pub fn mul(&self, o: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (a, c) in &self.terms {
            for (b, d) in &o.terms {
                let mut w = a.clone();
                w.extend(b);
                out.insert(w, c * d);
            }
        }
        out
    }

    pub fn commutator(&self, o: &UeaElement) -> UeaElement {
        self.mul(o).sub(&o.mul(self))
    }

    /// The scalar coefficient when the element has only the empty word.
    /// Replaces every occurrence of generator `g` by the scalar `value`; normal order is kept.
    pub fn evaluate_generator(&self, g: usize, value: &Expr) -> UeaElement {
        let mut out = UeaElement::zero();
        for (w, c) in &self.terms {
            let rest: Word = w.iter().copied().filter(|&x| x != g).collect();
            let power = (w.len() - rest.len()) as u32;
            out.insert(rest, c * &value.pow(power));
        }
        out
    }

    pub fn as_scalar(&self) -> Option<Expr> {
        match self.terms.len() {
            0 => Some(Expr::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(w, c)| {
                let word: Vec<&str> = w.iter().map(|&i| names[i].as_str()).collect();
                match (word.is_empty(), c.is_one()) {
                    (true, _) => format!("({c})"),
                    (false, true) => word.join("*"),
                    (false, false) => format!("({c})*{}", word.join("*")),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Enveloping algebra of a Lie algebra with a fixed generator order.
#[derive(Debug, Clone)]
pub struct Enveloping {
    pub algebra: LieAlgebra,
    /// `rank[i]` is the position of generator `i` in the PBW order.
    pub rank: Vec<usize>,
}

impl Enveloping {
    /// Left enveloping algebra of an extension with the default order (coordinates, then `Xi`).
    pub fn of(alg: &ExtendedAlgebra) -> Self {
        let algebra = alg.full_algebra();
        let rank = (0..algebra.dim()).collect();
        Enveloping { algebra, rank }
    }

    /// Declares the PBW order by generator names; unnamed generators follow in index order.
    pub fn with_order(mut self, order: &[&str]) -> Result<Self, String> {
        let mut seq: Vec<usize> = Vec::new();
        for name in order {
            let i = self.algebra.index(name).ok_or_else(|| format!("unknown generator `{name}`"))?;
            if seq.contains(&i) {
                return Err(format!("generator `{name}` listed twice"));
            }
            seq.push(i);
        }
        for i in 0..self.algebra.dim() {
            if !seq.contains(&i) {
                seq.push(i);
            }
        }
        for (pos, &i) in seq.iter().enumerate() {
            self.rank[i] = pos;
        }
        Ok(self)
    }

    pub fn names(&self) -> &[String] {
        &self.algebra.names
    }

    pub fn central(&self) -> usize {
        self.algebra.dim() - 1
    }

    /// Rewrites every descent `X_a X_b` (rank a > rank b) as `X_b X_a + [X_a, X_b]`.
    pub fn normal_form(&self, u: &UeaElement) -> UeaElement {
        let mut memo: BTreeMap<Word, UeaElement> = BTreeMap::new();
        let mut out = UeaElement::zero();
        for (w, c) in &u.terms {
            out = out.add(&self.normal_word(w, &mut memo).scale(c));
        }
        out
    }

    fn normal_word(&self, w: &[usize], memo: &mut BTreeMap<Word, UeaElement>) -> UeaElement {
        if let Some(r) = memo.get(w) {
            return r.clone();
        }
        let descent = (0..w.len().saturating_sub(1)).find(|&k| self.rank[w[k]] > self.rank[w[k + 1]]);
        let result = match descent {
            None => UeaElement::word(w.to_vec(), Expr::one()),
            Some(k) => {
                let (a, b) = (w[k], w[k + 1]);
                let mut swapped = w.to_vec();
                swapped.swap(k, k + 1);
                let mut acc = self.normal_word(&swapped, memo);
                for (l, c) in self.algebra.c[a][b].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut shorter = w[..k].to_vec();
                    shorter.push(l);
                    shorter.extend_from_slice(&w[k + 2..]);
                    acc = acc.add(&self.normal_word(&shorter, memo).scale(c));
                }
                acc
            }
        };
        memo.insert(w.to_vec(), result.clone());
        result
    }

    pub fn is_normal(&self, u: &UeaElement) -> bool {
        u.terms.keys().all(|w| w.windows(2).all(|p| self.rank[p[0]] <= self.rank[p[1]]))
    }

    /// Normal-ordered commutator.
    pub fn bracket(&self, a: &UeaElement, b: &UeaElement) -> UeaElement {
        self.normal_form(&a.commutator(b))
    }

    /// True when the normal form involves only the central generator (including constants).
    pub fn is_central_polynomial(&self, u: &UeaElement) -> bool {
        let xi = self.central();
        self.normal_form(u).terms.keys().all(|w| w.iter().all(|&g| g == xi))
    }

    /// Parses a noncommutative polynomial in the generator names with coefficients in the
    /// parameters of `params`.
    pub fn parse(&self, text: &str, params: &SymbolTable) -> Result<UeaElement, String> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0, env: self, params };
        let u = p.sum()?;
        if p.pos != p.tokens.len() {
            return Err(format!("unexpected `{}`", p.tokens[p.pos]));
        }
        Ok(u)
    }
}

fn tokenize(text: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if "+-*/^()".contains(c) {
            out.push(c.to_string());
            k += 1;
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push(chars[start..k].iter().collect());
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<String>,
    pos: usize,
    env: &'a Enveloping,
    params: &'a SymbolTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(String::as_str)
    }

    fn sum(&mut self) -> Result<UeaElement, String> {
        let mut acc = match self.peek() {
            Some("-") => {
                self.pos += 1;
                self.product()?.scale(&Expr::int(-1))
            }
            Some("+") => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        while let Some(op) = self.peek() {
            match op {
                "+" => {
                    self.pos += 1;
                    acc = acc.add(&self.product()?);
                }
                "-" => {
                    self.pos += 1;
                    acc = acc.sub(&self.product()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<UeaElement, String> {
        let mut acc = self.power()?;
        while let Some(op) = self.peek() {
            match op {
                "*" => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                "/" => {
                    self.pos += 1;
                    let d = self.power()?;
                    let s = d.as_scalar().ok_or("division by a non-scalar element")?;
                    let inv = s.inv().map_err(|e| e.to_string())?;
                    acc = acc.scale(&inv);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<UeaElement, String> {
        let base = self.atom()?;
        if self.peek() == Some("^") {
            self.pos += 1;
            let e: u32 = self
                .tokens
                .get(self.pos)
                .and_then(|t| t.parse().ok())
                .ok_or("exponent must be a nonnegative integer")?;
            self.pos += 1;
            return Ok((0..e).fold(UeaElement::scalar(Expr::one()), |acc, _| acc.mul(&base)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<UeaElement, String> {
        let t = self.tokens.get(self.pos).cloned().ok_or("unexpected end of input")?;
        self.pos += 1;
        if t == "(" {
            let inner = self.sum()?;
            if self.peek() != Some(")") {
                return Err("missing `)`".into());
            }
            self.pos += 1;
            return Ok(inner);
        }
        if t == "-" {
            return Ok(self.power()?.scale(&Expr::int(-1)));
        }
        if let Some(i) = self.env.algebra.index(&t) {
            return Ok(UeaElement::generator(i));
        }
        let mut table = SymbolTable::new();
        for p in self.params.parameters() {
            table.add(&p, SymbolKind::Free).map_err(|e| e.to_string())?;
        }
        let e = parse_expr(&t, &table).map_err(|e| e.to_string())?;
        Ok(UeaElement::scalar(e))
    }
}

/// Outcome of the higher-order polarization checks.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct HoReport {
    pub central_exclusion: bool,
    pub closure: bool,
    pub vector_field_content: Vec<String>,
    pub content_matches: bool,
    pub defects: Vec<String>,
}

impl HoReport {
    pub fn passed(&self) -> bool {
        self.central_exclusion && self.closure && self.content_matches
    }
}

/// Coordinates of normal forms over a shared list of words.
fn coordinates(elements: &[UeaElement], words: &[Word]) -> Matrix<Expr> {
    elements
        .iter()
        .map(|u| words.iter().map(|w| u.terms.get(w).cloned().unwrap_or_else(Expr::zero)).collect())
        .collect()
}

/// Checks a candidate higher-order polarization:
/// no nonzero element of its span is a polynomial in `Xi` alone; every commutator of two
/// elements, with `Xi = i`, lies in the span of `{elements} ∪ {X_g · element}` (the left
/// ideal truncated at one extra generator); the degree-one part of the span equals
/// `first_order`.
pub fn ho_polarization_check(env: &Enveloping, elements: &[UeaElement], first_order: &[Vec<Expr>]) -> HoReport {
    let names = env.names().to_vec();
    let xi = env.central();
    let normal: Vec<UeaElement> = elements.iter().map(|e| env.normal_form(e)).collect();
    let mut defects = Vec::new();

    let words_of = |list: &[UeaElement]| -> Vec<Word> {
        let set: BTreeSet<Word> = list.iter().flat_map(|u| u.terms.keys().cloned()).collect();
        set.into_iter().collect()
    };

    // Central exclusion: combinations killing every word with a non-central letter.
    let words = words_of(&normal);
    let noncentral: Vec<Word> = words.iter().filter(|w| w.iter().any(|&g| g != xi)).cloned().collect();
    let coords = coordinates(&normal, &noncentral);
    let kernel = nullspace(&crate::linalg::transpose(&coords), normal.len());
    let mut central_exclusion = true;
    for v in &kernel {
        let combo = normal.iter().zip(v).fold(UeaElement::zero(), |acc, (u, c)| acc.add(&u.scale(c)));
        if !combo.is_zero() {
            central_exclusion = false;
            defects.push(format!("span contains the central polynomial {}", combo.render(&names)));
        }
    }

    // Closure into the span plus first-level left multiples, on equivariant functions
    // where `Xi` acts as `i`.
    let on_equivariant = |u: &UeaElement| u.evaluate_generator(xi, &Expr::i());
    let mut generators_set: Vec<UeaElement> = normal.iter().map(on_equivariant).collect();
    for g in 0..names.len() {
        for e in &normal {
            generators_set.push(on_equivariant(&env.normal_form(&UeaElement::generator(g).mul(e))));
        }
    }
    let mut closure = true;
    for i in 0..normal.len() {
        for j in i + 1..normal.len() {
            let c = on_equivariant(&env.bracket(&normal[i], &normal[j]));
            if c.is_zero() {
                continue;
            }
            let mut all = generators_set.clone();
            all.push(c.clone());
            let words = words_of(&all);
            let basis = coordinates(&generators_set, &words);
            let target = coordinates(std::slice::from_ref(&c), &words).remove(0);
            if !in_span(&basis, &target) {
                closure = false;
                defects.push(format!(
                    "[{}, {}] = {} leaves the polarization",
                    elements_label(i),
                    elements_label(j),
                    c.render(&names)
                ));
            }
        }
    }

    // Degree-one content of the span.
    let words = words_of(&normal);
    let higher: Vec<Word> = words.iter().filter(|w| w.len() != 1).cloned().collect();
    let coords = coordinates(&normal, &higher);
    let kernel = nullspace(&crate::linalg::transpose(&coords), normal.len());
    let content: Vec<Vec<Expr>> = kernel
        .iter()
        .map(|v| {
            let combo = normal.iter().zip(v).fold(UeaElement::zero(), |acc, (u, c)| acc.add(&u.scale(c)));
            (0..names.len()).map(|g| combo.terms.get(&vec![g]).cloned().unwrap_or_else(Expr::zero)).collect()
        })
        .collect();
    let content = crate::linalg::span_basis(&content);
    let declared = crate::linalg::span_basis(first_order);
    let content_matches = content.len() == declared.len() && declared.iter().all(|d| in_span(&content, d));
    if !content_matches {
        defects.push("degree-one content differs from the declared first-order polarization".into());
    }
    let vector_field_content = content
        .iter()
        .map(|v| crate::lie::render_combination(&names, v))
        .collect();
    HoReport { central_exclusion, closure, vector_field_content, content_matches, defects }
}

fn elements_label(i: usize) -> String {
    format!("e{}", i + 1)
}

/// Symbol for the central generator, used when coefficients mention it.
pub fn central_symbol() -> Sym {
    Sym::new(CENTRAL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::Extension;
    use crate::fixtures::load;
    use crate::specfile::SpecFile;

    fn hw() -> (Enveloping, SymbolTable) {
        let SpecFile::Group(g) = load("hw").unwrap() else { panic!() };
        let ext = Extension::build(&g.law, g.cocycle.as_ref().unwrap(), &g.theta_scale).unwrap();
        (Enveloping::of(&ext.algebra), g.law.table.clone())
    }

    #[test]
    fn heisenberg_reordering() {
        let (env, t) = hw();
        let vq = env.parse("v*q", &t).unwrap();
        let expect = env.parse("q*v - (m/hbar)*Xi", &t).unwrap();
        assert_eq!(env.normal_form(&vq), expect);
        let sym = env.parse("q*v + v*q", &t).unwrap();
        assert_eq!(env.normal_form(&sym), env.parse("2*q*v - (m/hbar)*Xi", &t).unwrap());
        let ordered = env.parse("q*q*v*Xi", &t).unwrap();
        assert_eq!(env.normal_form(&ordered), ordered);
    }

    #[test]
    fn normal_form_is_idempotent() {
        let (env, t) = hw();
        let u = env.parse("v*v*q*q - Xi*v*q", &t).unwrap();
        let n = env.normal_form(&u);
        assert!(env.is_normal(&n));
        assert_eq!(env.normal_form(&n), n);
    }

    #[test]
    fn enveloping_closure_of_first_order_polarization_passes() {
        let (env, t) = hw();
        let els: Vec<UeaElement> = ["v", "v*v", "v*v*v"].iter().map(|x| env.parse(x, &t).unwrap()).collect();
        let v = env.algebra.unit(env.algebra.index("v").unwrap());
        let report = ho_polarization_check(&env, &els, &[v]);
        assert!(report.passed(), "{:?}", report.defects);
    }

    #[test]
    fn central_polynomial_is_excluded() {
        let (env, t) = hw();
        let els: Vec<UeaElement> = ["v", "q*v - v*q"].iter().map(|x| env.parse(x, &t).unwrap()).collect();
        let v = env.algebra.unit(env.algebra.index("v").unwrap());
        let report = ho_polarization_check(&env, &els, &[v]);
        assert!(!report.central_exclusion);
    }

    #[test]
    fn evaluating_the_central_generator() {
        let (env, t) = hw();
        let u = env.parse("Xi*Xi*q + Xi", &t).unwrap();
        let got = u.evaluate_generator(env.central(), &Expr::i());
        assert_eq!(got, env.parse("-q + i", &t).unwrap());
    }
}
