//! Two-cocycles, central extensions, the quantization 1-form and the Lie-algebra cocycle.
//!
//! The U(1) fiber is carried by an additive phase coordinate `phi` with `zeta = exp(i*phi)`,
//! so the extended law reads `phi'' = phi' + phi + xi(g', g)` and the vertical generator is
//! `Xi = d/dphi`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::group_law::{GroupError, GroupLaw, Point, Result};
use crate::lie::{self, LieAlgebra, LieStructure, OneForm, VectorField};
use crate::linalg;
use crate::symbolic::{Expr, Sym, SymbolKind};

pub const PHASE: &str = "phi";
pub const CENTRAL: &str = "Xi";

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CocycleReport {
    pub left_normalized: bool,
    pub right_normalized: bool,
    pub cocycle_identity: bool,
    pub residual: Option<String>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.left_normalized && self.right_normalized && self.cocycle_identity
    }
}

/// `xi(g1,g2) + xi(g1*g2,g3) = xi(g1,g2*g3) + xi(g2,g3)` and `xi(e,g) = xi(g,e) = 0`.
pub fn check_cocycle(xi: &Expr, law: &GroupLaw) -> Result<CocycleReport> {
    let e = law.identity_point();
    let g = law.generic();
    let left = law.eval2(xi, &e, &g)?;
    let right = law.eval2(xi, &g, &e)?;
    let g1 = law.generic_copy("#1");
    let g2 = law.generic_copy("#2");
    let g3 = law.generic_copy("#3");
    let g12 = law.compose(&g1, &g2)?;
    let g23 = law.compose(&g2, &g3)?;
    let lhs = &law.eval2(xi, &g1, &g2)? + &law.eval2(xi, &g12, &g3)?;
    let rhs = &law.eval2(xi, &g1, &g23)? + &law.eval2(xi, &g2, &g3)?;
    let r = &lhs - &rhs;
    let mut residual = Vec::new();
    if !left.is_zero() {
        residual.push(format!("xi(e,g) = {left}"));
    }
    if !right.is_zero() {
        residual.push(format!("xi(g,e) = {right}"));
    }
    if !r.is_zero() {
        residual.push(format!("cocycle identity: {r}"));
    }
    Ok(CocycleReport {
        left_normalized: left.is_zero(),
        right_normalized: right.is_zero(),
        cocycle_identity: r.is_zero(),
        residual: (!residual.is_empty()).then(|| residual.join("; ")),
    })
}

/// `lambda(g'*g) - lambda(g') - lambda(g)`.
pub fn coboundary_from(lambda: &Expr, law: &GroupLaw) -> Result<Expr> {
    let gp = law.generic_primed();
    let g = law.generic();
    let prod = law.compose(&gp, &g)?;
    let at_prod = law.eval1(lambda, &prod)?;
    let at_gp = law.eval1(lambda, &gp)?;
    Ok(&(&at_prod - &at_gp) - lambda)
}

/// Gradient of `lambda` at the identity.
pub fn pseudo_class(lambda: &Expr, law: &GroupLaw) -> Result<Vec<Expr>> {
    let b = law.bindings_at(&law.identity_point());
    law.coords.iter().map(|c| Ok(lambda.diff(c).substitute(&b)?)).collect()
}

/// Central extension by `xi`; the phase coordinate is appended last.
pub fn extend_group(law: &GroupLaw, xi: &Expr) -> Result<GroupLaw> {
    let rep = check_cocycle(xi, law)?;
    if !rep.passed() {
        return Err(GroupError::Invalid(format!(
            "cocycle check fails: {}",
            rep.residual.unwrap_or_default()
        )));
    }
    let mut out = law.clone();
    let phi = out.table.add(&Sym::new(PHASE), SymbolKind::Coordinate)?;
    let phi_p = out.table.add(&Sym::new(format!("{PHASE}'")), SymbolKind::Free)?;
    let composed = &(&Expr::sym(&phi_p) + &Expr::sym(&phi)) + xi;
    let inverse = match &law.inverse {
        Some(inv) => {
            let g = law.generic();
            let gi = law.inverse_of(inv, &g)?;
            let mut v = inv.clone();
            v.push(&(-&Expr::sym(&phi)) - &law.eval2(xi, &gi, &g)?);
            Some(v)
        }
        None => None,
    };
    out.push_coordinate(phi, phi_p, Expr::zero(), composed);
    out.inverse = inverse;
    out.set_phase(law.dim());
    Ok(out)
}

/// The quantization 1-form on the extended group, in extended coordinates.
#[derive(Debug, Clone)]
pub struct QuantizationForm {
    pub form: OneForm,
    /// Overall normalization (`Theta(Xi)`), 1 unless a fixture rescales.
    pub scale: Expr,
}

/// `Theta = scale * (dphi + d xi(g', g)/d g^i |_{g' = g^-1} dg^i)`.
pub fn quantization_one_form(
    ext: &GroupLaw,
    xi: &Expr,
    base_inverse: &[Expr],
    scale: &Expr,
) -> Result<QuantizationForm> {
    let phase = ext.phase.ok_or_else(|| GroupError::Invalid("law is not extended".into()))?;
    let n = ext.dim();
    let base_coords: Vec<Sym> = ext.coords[..phase].to_vec();
    let g = ext.generic();
    let base_g = Point { coords: g.coords[..phase].to_vec(), aux: g.aux.clone() };
    // Inverse point in the base group; auxiliaries use their inverse laws.
    let b = {
        let mut m = BTreeMap::new();
        for (c, v) in base_coords.iter().zip(&base_g.coords) {
            m.insert(c.clone(), v.clone());
        }
        for (a, v) in ext.aux.iter().zip(&base_g.aux) {
            m.insert(a.sym.clone(), v.clone());
        }
        m
    };
    let inv_coords: Vec<Expr> = base_inverse.iter().map(|e| e.substitute(&b)).collect::<std::result::Result<_, _>>()?;
    let mut inv_aux = Vec::new();
    for a in &ext.aux {
        let e = a.inverse.as_ref().ok_or_else(|| GroupError::Invalid(format!("no inverse for `{}`", a.sym)))?;
        inv_aux.push(e.substitute(&b)?);
    }
    let mut bind = BTreeMap::new();
    for (p, v) in ext.primed_coords()[..phase].iter().zip(&inv_coords) {
        bind.insert(p.clone(), v.clone());
    }
    for (p, v) in ext.primed_aux().iter().zip(&inv_aux) {
        bind.insert(p.clone(), v.clone());
    }
    let mut comps = vec![Expr::zero(); n];
    for (k, c) in base_coords.iter().enumerate() {
        comps[k] = &xi.diff(c).substitute(&bind)? * scale;
    }
    comps[phase] = scale.clone();
    Ok(QuantizationForm { form: OneForm { comps }, scale: scale.clone() })
}

/// Base Lie algebra with its central extension `[e_i, e_j] = C^k_ij e_k + Sigma_ij Xi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedAlgebra {
    pub base: LieAlgebra,
    pub sigma: Vec<Vec<Expr>>,
    /// `Theta(e_i)` at the identity; `Theta(Xi) = 1`.
    pub theta_e: Vec<Expr>,
}

impl ExtendedAlgebra {
    pub fn new(base: LieAlgebra, sigma: Vec<Vec<Expr>>) -> Self {
        let n = base.dim();
        ExtendedAlgebra { base, sigma, theta_e: vec![Expr::zero(); n] }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn names(&self) -> &[String] {
        &self.base.names
    }

    /// Reads `Sigma` off the phase row of the extended group's structure constants.
    pub fn from_extended(full: &LieAlgebra, phase: usize) -> Self {
        let idx: Vec<usize> = (0..full.dim()).filter(|&k| k != phase).collect();
        let names = idx.iter().map(|&k| full.names[k].clone()).collect();
        let mut base = LieAlgebra::zero(names);
        let mut sigma = vec![vec![Expr::zero(); idx.len()]; idx.len()];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                base.c[a][b] = idx.iter().map(|&k| full.c[i][j][k].clone()).collect();
                sigma[a][b] = full.c[i][j][phase].clone();
            }
        }
        ExtendedAlgebra::new(base, sigma)
    }

    /// `Sigma(x, y)` for coefficient vectors on the base.
    pub fn sigma_pair(&self, x: &[Expr], y: &[Expr]) -> Expr {
        let mut acc = Expr::zero();
        for i in 0..self.dim() {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim() {
                if !y[j].is_zero() && !self.sigma[i][j].is_zero() {
                    acc = &acc + &(&(&x[i] * &y[j]) * &self.sigma[i][j]);
                }
            }
        }
        acc
    }

    /// The `(n+1)`-dimensional algebra with `Xi` appended last.
    pub fn full_algebra(&self) -> LieAlgebra {
        let n = self.dim();
        let mut names = self.base.names.clone();
        names.push(CENTRAL.into());
        let mut alg = LieAlgebra::zero(names);
        for i in 0..n {
            for j in 0..n {
                let mut v = self.base.c[i][j].clone();
                v.push(self.sigma[i][j].clone());
                alg.c[i][j] = v;
            }
        }
        alg
    }

    /// Bracket of extended vectors (base coefficients then the `Xi` coefficient).
    pub fn bracket_ext(&self, x: &[Expr], y: &[Expr]) -> Vec<Expr> {
        let n = self.dim();
        let mut out = self.base.bracket(&x[..n], &y[..n]);
        out.push(self.sigma_pair(&x[..n], &y[..n]));
        out
    }

    pub fn sigma_residuals(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if !(&self.sigma[i][j] + &self.sigma[j][i]).is_zero() {
                    out.push(format!("Sigma not antisymmetric at ({}, {})", self.base.names[i], self.base.names[j]));
                }
            }
        }
        out.extend(self.full_algebra().jacobi_residuals());
        out
    }

    /// Pseudo-extension by a coboundary with gradient `alpha` at the identity:
    /// `Sigma'_jk = Sigma_jk + alpha_i C^i_jk` in the canonical basis of the new extension.
    pub fn shifted(&self, alpha: &[Expr]) -> ExtendedAlgebra {
        let n = self.dim();
        let mut out = self.clone();
        for j in 0..n {
            for k in 0..n {
                out.sigma[j][k] = &self.sigma[j][k] + &self.contract(alpha, j, k);
            }
        }
        out
    }

    /// Same algebra with `Theta(e_i)` moved by `alpha_i` (a left-invariant shift of Theta).
    pub fn with_theta_shift(&self, alpha: &[Expr]) -> ExtendedAlgebra {
        let mut out = self.clone();
        out.theta_e = self.theta_e.iter().zip(alpha).map(|(t, a)| t + a).collect();
        out
    }

    fn contract(&self, alpha: &[Expr], j: usize, k: usize) -> Expr {
        alpha
            .iter()
            .enumerate()
            .filter(|(i, a)| !a.is_zero() && !self.base.c[j][k][*i].is_zero())
            .map(|(i, a)| a * &self.base.c[j][k][i])
            .sum()
    }

    /// `Theta([e_j, e_k])` at the identity: the two-form whose kernel and rank govern
    /// characteristic subalgebras and polarizations.
    pub fn omega(&self) -> Vec<Vec<Expr>> {
        let n = self.dim();
        (0..n)
            .map(|j| (0..n).map(|k| &self.sigma[j][k] + &self.contract(&self.theta_e, j, k)).collect())
            .collect()
    }

    /// `Theta(x)` at the identity for an extended vector (base coefficients then `Xi`).
    pub fn theta_pairing(&self, x: &[Expr]) -> Expr {
        let n = self.dim();
        let base: Expr = self.theta_e.iter().zip(&x[..n]).map(|(t, c)| t * c).sum();
        &base + &x[n]
    }

    /// Substitutes parameter values into every constant.
    pub fn specialize(&self, bindings: &BTreeMap<Sym, Expr>) -> ExtendedAlgebra {
        let s = |e: &Expr| e.substitute(bindings).expect("parameter specialization");
        ExtendedAlgebra {
            base: LieAlgebra {
                names: self.base.names.clone(),
                c: self.base.c.iter().map(|r| r.iter().map(|v| v.iter().map(s).collect()).collect()).collect(),
            },
            sigma: self.sigma.iter().map(|r| r.iter().map(s).collect()).collect(),
            theta_e: self.theta_e.iter().map(s).collect(),
        }
    }

    pub fn parameters(&self) -> Vec<Sym> {
        let mut set = std::collections::BTreeSet::new();
        for r in &self.base.c {
            for v in r {
                for x in v {
                    set.extend(x.free_vars());
                }
            }
        }
        for r in &self.sigma {
            for x in r {
                set.extend(x.free_vars());
            }
        }
        set.into_iter().collect()
    }
}

/// Everything derived from an extended group law.
#[derive(Debug, Clone)]
pub struct Extension {
    pub law: GroupLaw,
    pub lie: LieStructure,
    pub theta: QuantizationForm,
    pub algebra: ExtendedAlgebra,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ThetaChecks {
    pub theta_on_xi: bool,
    pub lie_xi_theta_zero: bool,
    pub right_invariance: bool,
    pub matches_maurer_cartan: bool,
    pub residuals: Vec<String>,
}

impl Extension {
    pub fn new(ext: GroupLaw, xi: &Expr, base_inverse: &[Expr], scale: &Expr) -> std::result::Result<Self, lie::LieError> {
        let mut lie = LieStructure::of(&ext)?;
        let phase = ext.phase.expect("extended");
        lie.algebra.names[phase] = CENTRAL.into();
        lie.right_algebra.names[phase] = CENTRAL.into();
        let theta = quantization_one_form(&ext, xi, base_inverse, scale)?;
        let mut algebra = ExtendedAlgebra::from_extended(&lie.algebra, phase);
        let at_e = ext.bindings_at(&ext.identity_point());
        algebra.theta_e = (0..phase)
            .map(|k| {
                theta.form.comps[k]
                    .checked_div(scale)
                    .and_then(|v| v.substitute(&at_e))
                    .expect("identity evaluation")
            })
            .collect();
        Ok(Extension { law: ext, lie, theta, algebra })
    }

    /// Extends `law` by `xi` and derives all invariant data; the base inverse must be exact.
    pub fn build(law: &GroupLaw, xi: &Expr, scale: &Expr) -> std::result::Result<Self, lie::LieError> {
        let inv = law.invert(crate::group_law::DEFAULT_JET_ORDER)?;
        if !inv.exact {
            return Err(GroupError::Invalid("base inverse is only known as a truncated series".into()).into());
        }
        let ext = extend_group(law, xi)?;
        Extension::new(ext, xi, &inv.coords, scale)
    }

    pub fn phase(&self) -> usize {
        self.law.phase.expect("extended")
    }

    pub fn xi_field(&self) -> VectorField {
        let mut v = VectorField::zero(self.law.dim());
        v.comps[self.phase()] = Expr::one();
        v
    }

    /// `Theta(Xi) = scale`, `L_Xi Theta = 0`, `L_{X^R} Theta = 0`, and agreement with the
    /// phase row of the left Maurer–Cartan forms.
    pub fn theta_checks(&self) -> ThetaChecks {
        let coords = &self.law.coords;
        let xi = self.xi_field();
        let mut residuals = Vec::new();
        let on_xi = self.theta.form.pair(&xi) == self.theta.scale;
        if !on_xi {
            residuals.push("Theta(Xi) differs from the normalization".into());
        }
        let lx = self.theta.form.lie_derivative(&xi, coords);
        let lxi_zero = lx.comps.iter().all(Expr::is_zero);
        if !lxi_zero {
            residuals.push("L_Xi Theta != 0".into());
        }
        let mut right_ok = true;
        for (k, r) in self.lie.right.iter().enumerate() {
            let l = self.theta.form.lie_derivative(r, coords);
            if l.comps.iter().any(|c| !c.is_zero()) {
                right_ok = false;
                residuals.push(format!("L_(X^R_{}) Theta != 0", coords[k]));
            }
        }
        let mc = &self.lie.forms[self.phase()];
        let mc_ok = mc
            .comps
            .iter()
            .zip(&self.theta.form.comps)
            .all(|(a, b)| &(a * &self.theta.scale) == b);
        if !mc_ok {
            residuals.push("Theta differs from the phase Maurer–Cartan form".into());
        }
        ThetaChecks {
            theta_on_xi: on_xi,
            lie_xi_theta_zero: lxi_zero,
            right_invariance: right_ok,
            matches_maurer_cartan: mc_ok,
            residuals,
        }
    }

    /// Noether invariants `F_i = Theta(X^R_i)` for the base generators.
    pub fn noether_invariants(&self) -> Vec<Expr> {
        let phase = self.phase();
        self.lie.right[..phase].iter().map(|r| self.theta.form.pair(r)).collect()
    }
}

/// `Theta_lambda = lambda0_i theta^i` and its differential computed two ways:
/// the exterior derivative and `-1/2 lambda0_i C^i_jk theta^j ^ theta^k`.
#[derive(Debug, Clone)]
pub struct ThetaLambda {
    pub form: OneForm,
    pub d_exterior: Vec<Vec<Expr>>,
    pub d_structure: Vec<Vec<Expr>>,
}

impl ThetaLambda {
    pub fn consistent(&self) -> bool {
        self.d_exterior == self.d_structure
    }

    /// Rank of the 2-form at a point given by bindings.
    pub fn rank_at(&self, at: &BTreeMap<Sym, Expr>) -> usize {
        let m: Vec<Vec<Expr>> = self
            .d_structure
            .iter()
            .map(|r| r.iter().map(|x| x.substitute(at).expect("evaluation")).collect())
            .collect();
        linalg::rank(&m)
    }
}

pub fn theta_lambda(lambda0: &[Expr], alg: &LieAlgebra, forms: &[OneForm], coords: &[Sym]) -> ThetaLambda {
    let n = coords.len();
    let mut comps = vec![Expr::zero(); n];
    for (l, th) in lambda0.iter().zip(forms) {
        if l.is_zero() {
            continue;
        }
        for a in 0..n {
            comps[a] = &comps[a] + &(l * &th.comps[a]);
        }
    }
    let form = OneForm { comps };
    let d_exterior = form.exterior_derivative(coords);
    let mut d_structure = vec![vec![Expr::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let mut acc = Expr::zero();
            for (i, l) in lambda0.iter().enumerate() {
                if l.is_zero() {
                    continue;
                }
                for j in 0..alg.dim() {
                    for k in 0..alg.dim() {
                        let c = &alg.c[j][k][i];
                        if c.is_zero() {
                            continue;
                        }
                        let w = &forms[j].comps[a] * &forms[k].comps[b];
                        acc = &acc + &(&(l * c) * &w);
                    }
                }
            }
            d_structure[a][b] = -acc;
        }
    }
    ThetaLambda { form, d_exterior, d_structure }
}

/// `Ad_g` on the Lie algebra: `d(g * h * g^-1)/dh` at `h = e`.
pub fn adjoint_matrix(law: &GroupLaw, g: &Point, inverse: &[Expr]) -> Result<Vec<Vec<Expr>>> {
    let gi = law.inverse_of(inverse, g)?;
    let h = law.generic();
    let ghg = law.compose(&law.compose(g, &h)?, &gi)?;
    let at_e = law.bindings_at(&law.identity_point());
    let n = law.dim();
    let mut m = vec![vec![Expr::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = ghg.coords[i].diff(&law.coords[j]).substitute(&at_e)?;
        }
    }
    Ok(m)
}

/// `omega_lambda(x, y) = -lambda([x, y])` as a matrix on the basis.
pub fn orbit_form(alg: &LieAlgebra, lambda0: &[Expr]) -> Vec<Vec<Expr>> {
    let n = alg.dim();
    (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    -(0..n)
                        .filter(|&i| !lambda0[i].is_zero())
                        .map(|i| &lambda0[i] * &alg.c[j][k][i])
                        .sum::<Expr>()
                })
                .collect()
        })
        .collect()
}

/// Checks `omega_{Ad*_g lambda}(x, y) = omega_lambda(Ad_{g^-1} x, Ad_{g^-1} y)` for an
/// explicit adjoint matrix, with `(Ad*_g lambda)(x) = lambda(Ad_{g^-1} x)`.
pub fn coadjoint_equivariance(alg: &LieAlgebra, ad_g: &[Vec<Expr>], lambda0: &[Expr]) -> bool {
    let Some(ad_inv) = linalg::inverse(&ad_g.to_vec()) else {
        return false;
    };
    let n = alg.dim();
    let moved: Vec<Expr> = (0..n)
        .map(|j| (0..n).map(|i| &lambda0[i] * &ad_inv[i][j]).sum())
        .collect();
    let lhs = orbit_form(alg, &moved);
    let w = orbit_form(alg, lambda0);
    let rhs = linalg::matmul(&linalg::matmul(&linalg::transpose(&ad_inv), &w), &ad_inv);
    lhs == rhs
}

#[cfg(test)]
mod properties {
    use super::*;
    use crate::fixtures::load;
    use crate::specfile::{GroupSpec, SpecFile};
    use proptest::prelude::*;

    fn group(name: &str) -> GroupSpec {
        match load(name).unwrap() {
            SpecFile::Group(g) => *g,
            _ => unreachable!("{name} is a group fixture"),
        }
    }

    /// `sum_i linear_i g^i + sum_{i<=j} quad_ij g^i g^j` on a group whose identity is the origin.
    fn generating_function(law: &GroupLaw, linear: &[i64], quad: &[i64]) -> Expr {
        let x: Vec<Expr> = law.coords.iter().map(Expr::sym).collect();
        let mut acc: Expr = x.iter().zip(linear).map(|(v, l)| v * &Expr::int(*l)).sum();
        let mut q = quad.iter();
        for i in 0..x.len() {
            for j in i..x.len() {
                acc = &acc + &(&(&x[i] * &x[j]) * &Expr::int(*q.next().unwrap()));
            }
        }
        acc
    }

    fn ints(len: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-4i64..=4, len)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn coboundaries_are_cocycles(linear in ints(3), quad in ints(6)) {
            let law = group("galilei").law;
            let lambda = generating_function(&law, &linear, &quad);
            let delta = coboundary_from(&lambda, &law).unwrap();
            prop_assert!(check_cocycle(&delta, &law).unwrap().passed());
            let grad: Vec<Expr> = linear.iter().map(|l| Expr::int(*l)).collect();
            prop_assert_eq!(pseudo_class(&lambda, &law).unwrap(), grad);
        }

        /// Group route: extend by `xi + delta lambda`. Algebra route: shift `Sigma` by the gradient.
        #[test]
        fn pseudo_shift_matches_the_group_extension(linear in ints(3), quad in ints(6)) {
            let g = group("galilei");
            let xi = g.cocycle.clone().unwrap();
            let lambda = generating_function(&g.law, &linear, &quad);
            let shifted_xi = &xi + &coboundary_from(&lambda, &g.law).unwrap();
            let by_group = Extension::build(&g.law, &shifted_xi, &g.theta_scale).unwrap().algebra;
            let base = Extension::build(&g.law, &xi, &g.theta_scale).unwrap().algebra;
            let by_algebra = base.shifted(&pseudo_class(&lambda, &g.law).unwrap());
            prop_assert_eq!(by_group.sigma, by_algebra.sigma.clone());
            prop_assert!(by_algebra.sigma_residuals().is_empty());
        }

        #[test]
        fn theta_lambda_differential_agrees(lambda0 in ints(3)) {
            let law = group("galilei").law;
            let s = LieStructure::of(&law).unwrap();
            let l: Vec<Expr> = lambda0.iter().map(|v| Expr::int(*v)).collect();
            prop_assert!(theta_lambda(&l, &s.algebra, &s.forms, &law.coords).consistent());
        }

        #[test]
        fn orbit_form_is_coadjoint_equivariant(lambda0 in ints(3), point in ints(3)) {
            let law = group("galilei").law;
            let s = LieStructure::of(&law).unwrap();
            let inv = law.invert(crate::group_law::DEFAULT_JET_ORDER).unwrap();
            prop_assert!(inv.exact);
            let g = Point { coords: point.iter().map(|v| Expr::int(*v)).collect(), aux: vec![] };
            let ad = adjoint_matrix(&law, &g, &inv.coords).unwrap();
            let l: Vec<Expr> = lambda0.iter().map(|v| Expr::int(*v)).collect();
            prop_assert!(coadjoint_equivariance(&s.algebra, &ad, &l));
        }
    }
}
