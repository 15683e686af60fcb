//! Characteristic subalgebras, Darboux frames, first-order polarizations and anomaly detection.
//!
//! Vectors live in the extended Lie algebra: `n` base coefficients followed by the `Xi`
//! coefficient. The relevant two-form is `omega(x, y) = Theta([x, y])` at the identity.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::extension::ExtendedAlgebra;
use crate::linalg::{self, Matrix};
use crate::symbolic::{Expr, Sym};

pub type Vector = Vec<Expr>;

/// Upper bound on explored subalgebras before a search is declared incomplete.
pub const SEARCH_LIMIT: usize = 50_000;

fn xi_unit(n: usize) -> Vector {
    let mut v = vec![Expr::zero(); n + 1];
    v[n] = Expr::one();
    v
}

/// Lifts a base vector to the horizontal extended vector with the same base part.
pub fn horizontal_lift(alg: &ExtendedAlgebra, base: &[Expr]) -> Vector {
    let n = alg.dim();
    let mut v = base[..n].to_vec();
    let t: Expr = alg.theta_e.iter().zip(base).map(|(a, b)| a * b).sum();
    v.push(-t);
    v
}

pub fn render(alg: &ExtendedAlgebra, v: &[Expr]) -> String {
    alg.full_algebra().render_vector(v)
}

fn is_complex(v: &[Expr]) -> bool {
    v.iter().any(|c| c.conj() != *c)
}

fn key(basis: &[Vector]) -> String {
    basis
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn same_span(a: &[Vector], b: &[Vector]) -> bool {
    linalg::span_basis(a) == linalg::span_basis(b)
}

/// Span of `gens` closed under the extended bracket; `None` once `Xi` enters the span.
pub fn closure(alg: &ExtendedAlgebra, gens: &[Vector]) -> Option<Vec<Vector>> {
    let n = alg.dim();
    let xi = xi_unit(n);
    let mut basis = linalg::span_basis(gens);
    'grow: loop {
        if linalg::in_span(&basis, &xi) {
            return None;
        }
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let b = alg.bracket_ext(&basis[i], &basis[j]);
                if !linalg::in_span(&basis, &b) {
                    basis.push(b);
                    basis = linalg::span_basis(&basis);
                    continue 'grow;
                }
            }
        }
        return Some(basis);
    }
}

pub fn is_subalgebra(alg: &ExtendedAlgebra, basis: &[Vector]) -> bool {
    closure(alg, basis).is_some_and(|c| c.len() == linalg::span_basis(basis).len())
}

fn intersection_dim(a: &[Vector], b: &[Vector]) -> usize {
    let sum: Vec<Vector> = a.iter().chain(b).cloned().collect();
    linalg::span_basis(a).len() + linalg::span_basis(b).len() - linalg::span_basis(&sum).len()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharSubalgebra {
    /// Extended vectors `(b, -Theta(b))` with `b` spanning `Ker omega`.
    pub basis: Vec<Vector>,
    pub closed: bool,
}

pub fn characteristic_subalgebra(alg: &ExtendedAlgebra) -> CharSubalgebra {
    let n = alg.dim();
    let kernel = linalg::nullspace(&alg.omega(), n);
    let basis: Vec<Vector> = kernel.iter().map(|b| horizontal_lift(alg, b)).collect();
    let closed = basis.iter().all(|x| {
        basis.iter().all(|y| linalg::in_span(&basis, &alg.bracket_ext(x, y)))
    });
    CharSubalgebra { basis, closed }
}

/// Darboux frame of `omega` with scaling-only normalization: `omega(p_a, q_a) = 1`.
#[derive(Debug, Clone)]
pub struct Darboux {
    pub pairs: Vec<(Vec<Expr>, Vec<Expr>)>,
    pub kernel: Vec<Vec<Expr>>,
    /// Partial complex structure on base coefficient vectors: `J p = q`, `J q = -p`,
    /// `J = 0` on the kernel.
    pub j: Matrix<Expr>,
}

impl Darboux {
    /// `J^2 + 1` on each pair vector and `J` on each kernel vector; all should vanish.
    pub fn residuals(&self) -> Vec<Vec<Expr>> {
        let apply = |v: &[Expr]| -> Vec<Expr> {
            linalg::matmul(&self.j, &v.iter().map(|x| vec![x.clone()]).collect::<Vec<_>>())
                .into_iter()
                .map(|r| r[0].clone())
                .collect()
        };
        let mut out = Vec::new();
        for (p, q) in &self.pairs {
            for v in [p, q] {
                let jj = apply(&apply(v));
                out.push(jj.iter().zip(v).map(|(a, b)| a + b).collect());
            }
        }
        for k in &self.kernel {
            out.push(apply(k));
        }
        out
    }
}

fn form(w: &Matrix<Expr>, x: &[Expr], y: &[Expr]) -> Expr {
    let mut acc = Expr::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() && !w[i][j].is_zero() {
                acc = &acc + &(&(xi * yj) * &w[i][j]);
            }
        }
    }
    acc
}

fn combo(a: &[Expr], ca: &Expr, b: &[Expr], cb: &Expr) -> Vec<Expr> {
    a.iter().zip(b).map(|(x, y)| &(x * ca) + &(y * cb)).collect()
}

pub fn darboux_normal_form(alg: &ExtendedAlgebra) -> Darboux {
    let n = alg.dim();
    let w = alg.omega();
    let kernel = linalg::nullspace(&w, n);
    let mut rest: Vec<Vec<Expr>> = (0..n).map(|i| alg.base.unit(i)).collect();
    let mut pairs = Vec::new();
    loop {
        let found = (0..rest.len()).find_map(|a| {
            ((a + 1)..rest.len()).find(|&b| !form(&w, &rest[a], &rest[b]).is_zero()).map(|b| (a, b))
        });
        let Some((a, b)) = found else { break };
        let p = rest[a].clone();
        let scale = form(&w, &p, &rest[b]).inv().expect("nonzero pairing");
        let q: Vec<Expr> = rest[b].iter().map(|x| x * &scale).collect();
        rest = rest
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != a && *k != b)
            .map(|(_, z)| {
                // z - omega(z, q) p + omega(z, p) q is omega-orthogonal to p and q.
                let zq = form(&w, z, &q);
                let zp = form(&w, z, &p);
                let t = combo(z, &Expr::one(), &p, &-zq);
                combo(&t, &Expr::one(), &q, &zp)
            })
            .filter(|z| z.iter().any(|x| !x.is_zero()))
            .collect();
        pairs.push((p, q));
    }
    // J in the adapted basis, conjugated back to coordinates.
    let k = pairs.len();
    let mut cols: Vec<Vec<Expr>> = pairs.iter().map(|(p, _)| p.clone()).collect();
    cols.extend(pairs.iter().map(|(_, q)| q.clone()));
    cols.extend(kernel.iter().cloned());
    let t = linalg::transpose(&cols);
    let mut j0: Matrix<Expr> = linalg::zeros(n, n);
    for a in 0..k {
        j0[k + a][a] = Expr::one();
        j0[a][k + a] = -Expr::one();
    }
    let j = match linalg::inverse(&t) {
        Some(ti) => linalg::matmul(&linalg::matmul(&t, &j0), &ti),
        None => linalg::zeros(n, n),
    };
    Darboux { pairs, kernel, j }
}

/// Solution of `Theta'(x) = 0` on a subalgebra for `Theta' = Theta + alpha_i theta^i`.
#[derive(Debug, Clone)]
pub struct Horizontalization {
    /// Particular solution with free components set to zero.
    pub alpha: Vec<Expr>,
    pub solution_dim: usize,
    pub algebra: ExtendedAlgebra,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolarizationError {
    #[error("no left-invariant shift makes the subalgebra horizontal")]
    Inconsistent,
    #[error("subspace contains Xi")]
    ContainsXi,
}

pub fn horizontalize(alg: &ExtendedAlgebra, basis: &[Vector]) -> Result<Horizontalization, PolarizationError> {
    let n = alg.dim();
    if linalg::in_span(basis, &xi_unit(n)) {
        return Err(PolarizationError::ContainsXi);
    }
    let rows: Matrix<Expr> = basis.iter().map(|v| v[..n].to_vec()).collect();
    let rhs: Vec<Expr> = basis.iter().map(|v| -alg.theta_pairing(v)).collect();
    let alpha = linalg::solve(&rows, &rhs).ok_or(PolarizationError::Inconsistent)?;
    let solution_dim = n - linalg::rank(&rows);
    let algebra = alg.with_theta_shift(&alpha);
    Ok(Horizontalization { alpha, solution_dim, algebra })
}

#[derive(Debug, Clone)]
pub struct Polarization {
    pub basis: Vec<Vector>,
    pub horizontal: bool,
    /// `Theta(x_k)` for each basis vector before any shift.
    pub theta_pairings: Vec<Expr>,
    pub horizontalization: Option<Horizontalization>,
    pub full: bool,
    pub symplectic: bool,
    pub complex: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct PolarizationSummary {
    pub basis: Vec<String>,
    pub horizontal: bool,
    pub full: bool,
    pub symplectic: bool,
    pub complex: bool,
    pub horizontalizing_shift: Option<Vec<String>>,
}

impl Polarization {
    pub fn summary(&self, alg: &ExtendedAlgebra) -> PolarizationSummary {
        PolarizationSummary {
            basis: self.basis.iter().map(|v| render(alg, v)).collect(),
            horizontal: self.horizontal,
            full: self.full,
            symplectic: self.symplectic,
            complex: self.complex,
            horizontalizing_shift: self
                .horizontalization
                .as_ref()
                .map(|h| h.alpha.iter().map(|a| a.to_string()).collect()),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn spans(&self, vectors: &[Vector]) -> bool {
        same_span(&self.basis, vectors)
    }
}

/// Flags a subalgebra (already known to exclude `Xi`).
pub fn classify(alg: &ExtendedAlgebra, basis: &[Vector]) -> Result<Polarization, PolarizationError> {
    let basis = linalg::span_basis(basis);
    let theta_pairings: Vec<Expr> = basis.iter().map(|v| alg.theta_pairing(v)).collect();
    let horizontal = theta_pairings.iter().all(Expr::is_zero);
    let horizontalization = if horizontal { None } else { Some(horizontalize(alg, &basis)?) };
    let effective = horizontalization.as_ref().map_or(alg, |h| &h.algebra);
    let chars = characteristic_subalgebra(effective);
    let full = chars.basis.iter().all(|k| linalg::in_span(&basis, k));
    let rank = linalg::rank(&effective.omega());
    let symplectic = 2 * (basis.len() - intersection_dim(&basis, &chars.basis)) == rank;
    let complex = basis.iter().any(|v| is_complex(v));
    Ok(Polarization { basis, horizontal, theta_pairings, horizontalization, full, symplectic, complex })
}

/// A candidate generator for the search.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub label: String,
    pub vector: Vector,
}

/// Canonical basis, eigenvectors of `ad(h)` for each diagonalizable `h`, then seeds.
pub fn search_family(
    alg: &ExtendedAlgebra,
    diagonalizable: &[(String, Vector)],
    seeds: &[(String, Vector)],
) -> Vec<FamilyMember> {
    let n = alg.dim();
    let mut out: Vec<FamilyMember> = (0..n)
        .map(|i| FamilyMember { label: alg.names()[i].clone(), vector: horizontal_lift(alg, &alg.base.unit(i)) })
        .collect();
    for (name, h) in diagonalizable {
        let ad = alg.base.ad_matrix(&h[..n]);
        let Some(m) = linalg::constant_matrix(&ad) else { continue };
        let (values, _) = linalg::exact_eigenvalues(&m);
        for value in values {
            let ev = Expr::constant(value.clone());
            for (k, v) in linalg::eigenspace(&ad, &ev).into_iter().enumerate() {
                out.push(FamilyMember {
                    label: format!("{name}[{value}]#{k}"),
                    vector: horizontal_lift(alg, &v),
                });
            }
        }
    }
    for (name, v) in seeds {
        out.push(FamilyMember { label: name.clone(), vector: v.clone() });
    }
    let mut seen: Vec<Vector> = Vec::new();
    out.retain(|m| {
        let k = linalg::span_basis(std::slice::from_ref(&m.vector));
        if k.is_empty() || seen.contains(&k[0]) {
            false
        } else {
            seen.push(k[0].clone());
            true
        }
    });
    out
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub polarizations: Vec<Polarization>,
    pub explored: usize,
    pub complete: bool,
}

/// Maximal subalgebras excluding `Xi` generated within the family. Candidates must be
/// horizontal unless they contain a non-horizontal family member.
pub fn find_polarizations(alg: &ExtendedAlgebra, family: &[FamilyMember]) -> SearchResult {
    let nonhorizontal: Vec<bool> = family.iter().map(|m| !alg.theta_pairing(&m.vector).is_zero()).collect();
    let mut visited: BTreeSet<String> = BTreeSet::new();
    let mut valid: Vec<Vec<Vector>> = Vec::new();
    let mut stack: Vec<(Vec<Vector>, bool)> = vec![(Vec::new(), false)];
    let mut complete = true;
    while let Some((basis, seeded)) = stack.pop() {
        for (k, m) in family.iter().enumerate() {
            if linalg::in_span(&basis, &m.vector) {
                continue;
            }
            let mut gens = basis.clone();
            gens.push(m.vector.clone());
            let Some(c) = closure(alg, &gens) else { continue };
            let flag = seeded || nonhorizontal[k];
            let horizontal = c.iter().all(|v| alg.theta_pairing(v).is_zero());
            if !horizontal && !flag {
                continue;
            }
            if !visited.insert(key(&c)) {
                continue;
            }
            if visited.len() > SEARCH_LIMIT {
                complete = false;
                break;
            }
            valid.push(c.clone());
            stack.push((c, flag));
        }
        if !complete {
            break;
        }
    }
    let maximal: Vec<&Vec<Vector>> = valid
        .iter()
        .filter(|p| {
            !valid
                .iter()
                .any(|q| q.len() > p.len() && p.iter().all(|v| linalg::in_span(q, v)))
        })
        .collect();
    let polarizations = maximal.into_iter().filter_map(|p| classify(alg, p).ok()).collect();
    SearchResult { polarizations, explored: visited.len(), complete }
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// A full and symplectic first-order polarization exists (a witness is attached).
    Exists,
    /// Proved absent by invariant-Lagrangian enumeration.
    Absent,
    /// The enumeration could not be completed.
    Incomplete,
}

#[derive(Debug, Clone)]
pub struct AnomalyReport {
    pub verdict: Verdict,
    pub method: String,
    pub characteristic_dim: usize,
    pub quotient_dim: usize,
    pub witnesses: Vec<Vec<Vector>>,
}

impl AnomalyReport {
    pub fn anomalous(&self) -> Option<bool> {
        match self.verdict {
            Verdict::Exists => Some(false),
            Verdict::Absent => Some(true),
            Verdict::Incomplete => None,
        }
    }
}

fn is_scalar_matrix(m: &Matrix<Expr>) -> bool {
    let n = m.len();
    (0..n).all(|i| (0..n).all(|j| if i == j { m[i][j] == m[0][0] } else { m[i][j].is_zero() }))
}

/// Dimension of the associative algebra generated by `mats` and the identity.
fn generated_algebra_dim(mats: &[Matrix<Expr>], d: usize) -> usize {
    let flat = |m: &Matrix<Expr>| -> Vec<Expr> { m.iter().flatten().cloned().collect() };
    let mut elems: Vec<Matrix<Expr>> = vec![linalg::identity(d)];
    let mut span: Vec<Vec<Expr>> = vec![flat(&elems[0])];
    let mut frontier = elems.clone();
    while !frontier.is_empty() && span.len() < d * d {
        let mut next = Vec::new();
        for a in &frontier {
            for g in mats {
                let p = linalg::matmul(a, g);
                let f = flat(&p);
                if !linalg::in_span(&span, &f) {
                    span.push(f);
                    span = linalg::span_basis(&span);
                    next.push(p.clone());
                    elems.push(p);
                }
            }
        }
        frontier = next;
    }
    span.len()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Decides whether a full and symplectic first-order polarization exists.
///
/// Such a polarization is `K + L` with `K` the characteristic subalgebra and `L` an
/// `ad(K)`-invariant Lagrangian subspace of `V = g/K`. Irreducibility of `ad(K)` on `V`
/// (Burnside: the generated algebra is all of `End V`) proves absence. Otherwise the
/// invariant subspaces are enumerated from the eigenlines of one non-scalar `ad(k)`, which
/// is complete when that operator has simple spectrum in `Q` or `iQ`, or when `dim V = 2`.
pub fn detect_anomaly(alg: &ExtendedAlgebra) -> AnomalyReport {
    let n = alg.dim();
    let w = alg.omega();
    let chars = characteristic_subalgebra(alg);
    let kbase: Vec<Vec<Expr>> = chars.basis.iter().map(|v| v[..n].to_vec()).collect();
    let mut vbasis: Vec<Vec<Expr>> = Vec::new();
    for i in 0..n {
        let e = alg.base.unit(i);
        let mut cur: Vec<Vec<Expr>> = kbase.clone();
        cur.extend(vbasis.iter().cloned());
        if !linalg::in_span(&cur, &e) {
            vbasis.push(e);
        }
    }
    let kd = kbase.len();
    let d = vbasis.len();
    let report = |verdict, method: &str, witnesses| AnomalyReport {
        verdict,
        method: method.to_string(),
        characteristic_dim: kd,
        quotient_dim: d,
        witnesses,
    };
    let mut cols: Vec<Vec<Expr>> = kbase.clone();
    cols.extend(vbasis.iter().cloned());
    let coords_of = linalg::inverse(&linalg::transpose(&cols)).expect("adapted basis");
    let quotient = |x: &[Expr]| -> Vec<Expr> {
        (kd..n).map(|r| (0..n).map(|c| &coords_of[r][c] * &x[c]).sum()).collect()
    };
    let rho: Vec<Matrix<Expr>> = kbase
        .iter()
        .map(|k| {
            let cols: Vec<Vec<Expr>> = vbasis.iter().map(|v| quotient(&alg.base.bracket(k, v))).collect();
            linalg::transpose(&cols)
        })
        .collect();
    let lift = |coeffs: &[Expr]| -> Vec<Expr> {
        (0..n).map(|c| vbasis.iter().zip(coeffs).map(|(v, a)| &v[c] * a).sum()).collect()
    };
    let try_lagrangian = |lines: &[Vec<Expr>]| -> Option<Vec<Vector>> {
        let l: Vec<Vec<Expr>> = lines.iter().map(|x| lift(x)).collect();
        for a in &l {
            for b in &l {
                if !form(&w, a, b).is_zero() {
                    return None;
                }
            }
        }
        let mut p: Vec<Vector> = chars.basis.clone();
        p.extend(l.iter().map(|x| horizontal_lift(alg, x)));
        is_subalgebra(alg, &p).then(|| linalg::span_basis(&p))
    };
    if d == 0 {
        return report(Verdict::Exists, "characteristic subalgebra is everything", vec![linalg::span_basis(&chars.basis)]);
    }
    if generated_algebra_dim(&rho, d) == d * d {
        return report(Verdict::Absent, "ad(K) acts irreducibly on g/K (Burnside)", Vec::new());
    }
    let half = d / 2;
    let candidates_from = |lines: &[Vec<Expr>]| -> Vec<Vec<Vector>> {
        let mut found = Vec::new();
        for s in subsets(lines.len(), half) {
            let pick: Vec<Vec<Expr>> = s.iter().map(|&i| lines[i].clone()).collect();
            if linalg::rank(&pick) < half {
                continue;
            }
            let invariant = rho.iter().all(|r| {
                pick.iter().all(|x| {
                    let y: Vec<Expr> = (0..d).map(|i| (0..d).map(|j| &r[i][j] * &x[j]).sum()).collect();
                    linalg::in_span(&pick, &y)
                })
            });
            if invariant {
                if let Some(p) = try_lagrangian(&pick) {
                    if !found.iter().any(|q: &Vec<Vector>| same_span(q, &p)) {
                        found.push(p);
                    }
                }
            }
        }
        found
    };
    let Some(t) = rho.iter().find(|r| !is_scalar_matrix(r)) else {
        // ad(K) acts by scalars: every Lagrangian is invariant; try the Darboux halves.
        let dar = darboux_normal_form(alg);
        let to_q = |v: &Vec<Expr>| quotient(v);
        let mut lines: Vec<Vec<Expr>> = dar.pairs.iter().map(|(p, _)| to_q(p)).collect();
        lines.extend(dar.pairs.iter().map(|(_, q)| to_q(q)));
        let found = candidates_from(&lines);
        return if found.is_empty() {
            report(Verdict::Incomplete, "ad(K) scalar on g/K; only Darboux Lagrangians tried", Vec::new())
        } else {
            report(Verdict::Exists, "ad(K) scalar on g/K; Darboux Lagrangian is a subalgebra", found)
        };
    };
    let Some(tc) = linalg::constant_matrix(t) else {
        return report(Verdict::Incomplete, "ad(K) on g/K depends on parameters", Vec::new());
    };
    let (values, spectrum_complete) = linalg::exact_eigenvalues(&tc);
    let mut lines: Vec<Vec<Expr>> = Vec::new();
    for v in &values {
        lines.extend(linalg::eigenspace(t, &Expr::constant(v.clone())));
    }
    let simple = spectrum_complete && values.len() == d;
    if !(simple || (spectrum_complete && d == 2)) {
        let found = candidates_from(&lines);
        return if found.is_empty() {
            report(Verdict::Incomplete, "eigenline enumeration not exhaustive", Vec::new())
        } else {
            report(Verdict::Exists, "invariant Lagrangian found among eigenlines", found)
        };
    }
    let found = candidates_from(&lines);
    if found.is_empty() {
        report(Verdict::Absent, "no invariant Lagrangian subalgebra among all invariant subspaces", Vec::new())
    } else {
        report(Verdict::Exists, "invariant Lagrangian subalgebra found by exhaustive enumeration", found)
    }
}

/// Runs `detect_anomaly` at generic parameters and with each listed parameter set to zero.
pub fn anomaly_scan(alg: &ExtendedAlgebra, specialize: &[Sym]) -> Vec<(String, AnomalyReport)> {
    let mut out = vec![("generic".to_string(), detect_anomaly(alg))];
    for p in specialize {
        let mut b = BTreeMap::new();
        b.insert(p.clone(), Expr::zero());
        out.push((format!("{p} = 0"), detect_anomaly(&alg.specialize(&b))));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::Extension;
    use crate::fixtures::load;
    use crate::specfile::SpecFile;

    fn group_algebra(name: &str) -> ExtendedAlgebra {
        let SpecFile::Group(g) = load(name).unwrap() else { panic!("group fixture") };
        let xi = g.cocycle.clone().unwrap_or_else(Expr::zero);
        Extension::build(&g.law, &xi, &g.theta_scale).unwrap().algebra
    }

    fn template() -> crate::specfile::AlgebraSpec {
        match load("template").unwrap() {
            SpecFile::Algebra(a) => *a,
            _ => panic!("algebra fixture"),
        }
    }

    fn unit(alg: &ExtendedAlgebra, name: &str) -> Vector {
        horizontal_lift(alg, &alg.base.unit(alg.base.index(name).unwrap()))
    }

    #[test]
    fn schrodinger_characteristic_subalgebra() {
        let alg = group_algebra("schrodinger");
        let k = characteristic_subalgebra(&alg);
        assert!(k.closed);
        let expected: Vec<Vector> = vec![
            combo(&unit(&alg, "A"), &Expr::one(), &unit(&alg, "D"), &Expr::one()),
            combo(&unit(&alg, "A"), &Expr::one(), &unit(&alg, "D"), &-Expr::one()),
            unit(&alg, "B"),
            unit(&alg, "C"),
        ];
        assert!(same_span(&k.basis, &expected));
    }

    #[test]
    fn darboux_frame_squares_to_minus_one() {
        for alg in [group_algebra("hw"), group_algebra("schrodinger"), template().algebra] {
            let d = darboux_normal_form(&alg);
            assert!(d.residuals().iter().all(|r| r.iter().all(Expr::is_zero)));
            assert_eq!(2 * d.pairs.len() + d.kernel.len(), alg.dim());
        }
        assert_eq!(darboux_normal_form(&template().algebra).pairs.len(), 2);
    }

    #[test]
    fn anomaly_verdicts() {
        assert_eq!(detect_anomaly(&group_algebra("schrodinger")).verdict, Verdict::Absent);
        assert_eq!(detect_anomaly(&group_algebra("hw")).verdict, Verdict::Exists);
        assert_eq!(detect_anomaly(&group_algebra("galilei")).verdict, Verdict::Exists);
        let t = template();
        let k = t.table.get("k").unwrap().clone();
        let scan = anomaly_scan(&t.algebra, &[k]);
        assert_eq!(scan[0].1.verdict, Verdict::Exists);
        assert_eq!(scan[0].1.witnesses.len(), 2);
        assert_eq!(scan[1].1.verdict, Verdict::Absent);
    }

    #[test]
    fn su2_nonhorizontal_polarization() {
        let SpecFile::Group(g) = load("su2").unwrap() else { panic!() };
        let alg = group_algebra("su2");
        let seed = g.seeds.iter().find(|s| s.name == "nonhorizontal").unwrap().coeffs.clone();
        let p = vec![seed, unit(&alg, "z2"), combo(&unit(&alg, "z1"), &Expr::one(), &unit(&alg, "z1c"), &Expr::one())];
        assert!(is_subalgebra(&alg, &p));
        let h = horizontalize(&alg, &p).unwrap();
        assert_eq!(h.solution_dim, 1);
        assert_eq!(linalg::rank(&h.algebra.omega()), 2);
        let pol = classify(&alg, &p).unwrap();
        assert!(!pol.horizontal && pol.full && pol.symplectic);
    }
}
