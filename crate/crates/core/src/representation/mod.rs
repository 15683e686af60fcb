//! Polarized wave-function spaces and the right action on them.
//!
//! A picture writes polarized functions as `Psi = e^{i phi} P(g) Phi(u(g))` with a symbolic
//! prefactor `P` and reduced variables `u`. A vector field `X` (phase component `chi`) acts on
//! `Phi` through the twisted operator `sum_k X(u_k) d_k + X(log P) + i chi`, whose
//! coefficients must be functions of `u` alone; they are read off on a section and checked
//! by substituting `u(g)` back.

mod metaplectic;
mod pictures;
mod su2;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::diffop::{DiffOp, MultiIndex, OpError};
use crate::extension::Extension;
use crate::lie::{LieAlgebra, VectorField};
use crate::linalg::{self, Matrix};
use crate::specfile::{GroupSpec, SpecFile};
use crate::symbolic::{Expr, Scalar, Sym};
use crate::uea::UeaElement;

pub use metaplectic::{
    anomaly_symptom, chart_picture, ho_polarization_v, limit_operators, metaplectic_representation,
    reference_chart_operators, reference_metaplectic_operators, AnomalySymptom, LimitOperators, MetaplecticReport,
    FirstOrderReduction, reduce_to_first_order, HO_POLARIZATION_V, HO_POLARIZATION_V_DESYMMETRIZED,
};
pub use pictures::{hw_picture, su2_picture, HwPicture};
pub use su2::{su2_representation, Su2Report};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("polarization element {element} is not solved by the picture: residual {residual}")]
    Inconsistent { element: String, residual: String },
    #[error("section does not invert the reduced variables: {0}")]
    BadSection(String),
    #[error("generator {generator} does not preserve the polarized space: {residual}")]
    NotReducible { generator: String, residual: String },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Operator(String),
}

impl From<OpError> for RepError {
    fn from(e: OpError) -> Self {
        RepError::Operator(e.to_string())
    }
}

impl From<crate::symbolic::SymbolicError> for RepError {
    fn from(e: crate::symbolic::SymbolicError) -> Self {
        RepError::Operator(e.to_string())
    }
}

/// `exp(exponent) * prod base^power`, never expanded.
#[derive(Debug, Clone, PartialEq)]
pub struct Prefactor {
    pub exponent: Expr,
    pub powers: Vec<(Expr, Expr)>,
}

impl Prefactor {
    pub fn one() -> Self {
        Prefactor { exponent: Expr::zero(), powers: Vec::new() }
    }

    /// `X(log P)`.
    pub fn log_derivative(&self, field: &VectorField, coords: &[Sym]) -> Expr {
        let mut acc = field.apply(coords, &self.exponent);
        for (base, power) in &self.powers {
            let d = field.apply(coords, base);
            if !d.is_zero() {
                acc = &acc + &(power * &d.checked_div(base).expect("nonzero base"));
            }
        }
        acc
    }

    pub fn substitute(&self, b: &BTreeMap<Sym, Expr>) -> crate::symbolic::Result<Prefactor> {
        Ok(Prefactor {
            exponent: self.exponent.substitute(b)?,
            powers: self
                .powers
                .iter()
                .map(|(x, p)| Ok((x.substitute(b)?, p.substitute(b)?)))
                .collect::<crate::symbolic::Result<_>>()?,
        })
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if !self.exponent.is_zero() {
            parts.push(format!("exp({})", self.exponent));
        }
        for (b, p) in &self.powers {
            parts.push(format!("({b})^({p})"));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" * ")
        }
    }
}

/// Data fixing a realization of polarized wave functions.
#[derive(Debug, Clone)]
pub struct Picture {
    pub name: String,
    /// Extended left vectors (`Xi` coefficient last).
    pub polarization: Vec<Vec<Expr>>,
    pub prefactor: Prefactor,
    pub reduced: Vec<Sym>,
    /// `u_k(g)` in group coordinates.
    pub reduced_exprs: Vec<Expr>,
    /// Group coordinates (phase and auxiliaries included) as functions of the reduced variables.
    pub section: BTreeMap<Sym, Expr>,
}

impl Picture {
    pub fn substitute_parameters(&self, b: &BTreeMap<Sym, Expr>) -> crate::symbolic::Result<Picture> {
        let mut p = self.clone();
        p.polarization = self
            .polarization
            .iter()
            .map(|v| v.iter().map(|c| c.substitute(b)).collect())
            .collect::<crate::symbolic::Result<_>>()?;
        p.prefactor = self.prefactor.substitute(b)?;
        p.reduced_exprs = self.reduced_exprs.iter().map(|e| e.substitute(b)).collect::<crate::symbolic::Result<_>>()?;
        Ok(p)
    }
}

/// Right action on the reduced functions of a picture.
#[derive(Debug, Clone)]
pub struct PolarizedSpace {
    pub picture: Picture,
    /// Right generator names, `Xi` included.
    pub names: Vec<String>,
    pub operators: Vec<DiffOp>,
    pub right_algebra: LieAlgebra,
    pub left_algebra: LieAlgebra,
    left_fields: Vec<VectorField>,
    coords: Vec<Sym>,
    phase: usize,
}

fn twisted_parts(field: &VectorField, picture: &Picture, coords: &[Sym], phase: usize) -> (Vec<Expr>, Expr) {
    let coeffs = picture.reduced_exprs.iter().map(|u| field.apply(coords, u)).collect();
    let mult = &picture.prefactor.log_derivative(field, coords) + &(&Expr::i() * &field.comps[phase]);
    (coeffs, mult)
}

/// Reads `f` on the section and checks that substituting `u(g)` back recovers `f`.
fn reduce_function(f: &Expr, picture: &Picture) -> Result<Expr, String> {
    let on_section = f.substitute(&picture.section).map_err(|e| e.to_string())?;
    let back: BTreeMap<Sym, Expr> =
        picture.reduced.iter().cloned().zip(picture.reduced_exprs.iter().cloned()).collect();
    let recovered = on_section.substitute(&back).map_err(|e| e.to_string())?;
    if &recovered == f {
        Ok(on_section)
    } else {
        Err(format!("{f} is not a function of the reduced variables"))
    }
}

fn reduce_field(field: &VectorField, picture: &Picture, coords: &[Sym], phase: usize) -> Result<DiffOp, String> {
    let (coeffs, mult) = twisted_parts(field, picture, coords, phase);
    let coeffs: Vec<Expr> = coeffs.iter().map(|c| reduce_function(c, picture)).collect::<Result<_, _>>()?;
    let mult = reduce_function(&mult, picture)?;
    Ok(DiffOp::first_order(&picture.reduced, &coeffs, mult))
}

/// Verifies the picture against its polarization and computes every right operator.
pub fn polarized_space(ext: &Extension, picture: Picture) -> Result<PolarizedSpace, RepError> {
    let coords = ext.law.coords.clone();
    let phase = ext.phase();
    for (sym, u) in picture.reduced.iter().zip(&picture.reduced_exprs) {
        let on = u.substitute(&picture.section).map_err(|e| RepError::BadSection(e.to_string()))?;
        if on != Expr::sym(sym) {
            return Err(RepError::BadSection(format!("{sym} = {u} evaluates to {on} on the section")));
        }
    }
    let full = ext.lie.algebra.clone();
    for v in &picture.polarization {
        let field = VectorField::combination(&ext.lie.left, v);
        let (coeffs, mult) = twisted_parts(&field, &picture, &coords, phase);
        for r in coeffs.iter().chain(std::iter::once(&mult)) {
            if !r.is_zero() {
                return Err(RepError::Inconsistent { element: full.render_vector(v), residual: r.to_string() });
            }
        }
    }
    let names = ext.lie.right_algebra.names.clone();
    let mut operators = Vec::new();
    for (k, field) in ext.lie.right.iter().enumerate() {
        let op = reduce_field(field, &picture, &coords, phase)
            .map_err(|residual| RepError::NotReducible { generator: names[k].clone(), residual })?;
        operators.push(op);
    }
    Ok(PolarizedSpace {
        picture,
        names,
        operators,
        right_algebra: ext.lie.right_algebra.clone(),
        left_algebra: full,
        left_fields: ext.lie.left.clone(),
        coords,
        phase,
    })
}

impl PolarizedSpace {
    pub fn vars(&self) -> &[Sym] {
        &self.picture.reduced
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn operator(&self, name: &str) -> Option<&DiffOp> {
        self.index(name).map(|k| &self.operators[k])
    }

    /// Right operator of an extended combination (`Xi` coefficient last).
    pub fn combination(&self, v: &[Expr]) -> DiffOp {
        v.iter()
            .zip(&self.operators)
            .fold(DiffOp::zero(self.vars()), |acc, (c, op)| acc.add(&op.scale(c)))
    }

    /// Twisted left operator of an extended combination, when it acts on reduced functions.
    pub fn left_operator(&self, v: &[Expr]) -> Result<DiffOp, RepError> {
        let field = VectorField::combination(&self.left_fields, v);
        reduce_field(&field, &self.picture, &self.coords, self.phase).map_err(|residual| RepError::NotReducible {
            generator: self.left_algebra.render_vector(v),
            residual,
        })
    }

    /// `[D_i, D_j] - C^k_ij D_k` for every pair, exact; empty when the right algebra is represented.
    pub fn commutation_residuals(&self) -> Vec<String> {
        commutation_residuals(&self.operators, &self.right_algebra)
    }

    /// Operator on reduced functions of an enveloping-algebra element acting through left
    /// fields. Words act right to left; results are jets `sum_alpha c_alpha(g) (d^alpha Phi)(u(g))`
    /// summed over all words and reduced only at the end, since single words of a
    /// polarization element need not preserve the polarized space.
    pub fn left_enveloping_operator(&self, u: &UeaElement) -> Result<DiffOp, RepError> {
        self.reduce_jet(u, self.enveloping_jet(u), None)
    }

    /// The equation `u Psi = 0` as an operator on reduced functions, divided by the jet
    /// coefficient of its highest multi-index. The overall factor may depend on the group
    /// point; only the ratios must be functions of the reduced variables.
    pub fn left_enveloping_equation(&self, u: &UeaElement) -> Result<DiffOp, RepError> {
        let jet = self.enveloping_jet(u);
        let pivot = jet.values().rev().find(|c| !c.is_zero()).cloned();
        self.reduce_jet(u, jet, pivot)
    }

    fn enveloping_jet(&self, u: &UeaElement) -> BTreeMap<MultiIndex, Expr> {
        let n = self.vars().len();
        let mut total: BTreeMap<MultiIndex, Expr> = BTreeMap::new();
        for (word, coeff) in u.terms() {
            let mut jet: BTreeMap<MultiIndex, Expr> = BTreeMap::new();
            jet.insert(vec![0; n], coeff.clone());
            for &g in word.iter().rev() {
                let field = &self.left_fields[g];
                let (du, mult) = twisted_parts(field, &self.picture, &self.coords, self.phase);
                let mut next: BTreeMap<MultiIndex, Expr> = BTreeMap::new();
                for (alpha, c) in &jet {
                    accumulate(&mut next, alpha.clone(), &field.apply(&self.coords, c) + &(&mult * c));
                    for (k, d) in du.iter().enumerate() {
                        if !d.is_zero() {
                            let mut beta = alpha.clone();
                            beta[k] += 1;
                            accumulate(&mut next, beta, c * d);
                        }
                    }
                }
                jet = next;
            }
            for (alpha, c) in jet {
                accumulate(&mut total, alpha, c);
            }
        }
        total
    }

    fn reduce_jet(
        &self,
        u: &UeaElement,
        jet: BTreeMap<MultiIndex, Expr>,
        pivot: Option<Expr>,
    ) -> Result<DiffOp, RepError> {
        let vars = self.vars().to_vec();
        let mut out = DiffOp::zero(&vars);
        for (alpha, c) in jet {
            if c.is_zero() {
                continue;
            }
            let c = match &pivot {
                Some(p) => c.checked_div(p)?,
                None => c,
            };
            let r = reduce_function(&c, &self.picture).map_err(|residual| RepError::NotReducible {
                generator: u.render(&self.left_algebra.names),
                residual,
            })?;
            out = out.add(&DiffOp::term(&vars, alpha, r));
        }
        Ok(out)
    }

    pub fn matrices(&self, basis: &[MultiIndex]) -> Result<Vec<Truncated>, RepError> {
        self.operators.iter().map(|op| Ok(Truncated::from_op(op, basis)?)).collect()
    }
}

fn accumulate(jet: &mut BTreeMap<MultiIndex, Expr>, idx: MultiIndex, v: Expr) {
    let e = jet.entry(idx).or_insert_with(Expr::zero);
    *e = &*e + &v;
}

/// A bundled group fixture with its extension.
/// Operators of a first-order picture with their commutation check.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct PictureReport {
    pub picture: String,
    pub prefactor: String,
    pub reduced: Vec<String>,
    pub operators: BTreeMap<String, String>,
    pub commutation_residuals: Vec<String>,
}

impl PictureReport {
    pub fn passed(&self) -> bool {
        self.commutation_residuals.is_empty()
    }
}

pub fn hw_representation(which: HwPicture) -> Result<PictureReport, RepError> {
    let (_, ext) = load_extension("hw")?;
    let picture = hw_picture(&ext, which)?;
    let name = picture.name.clone();
    let prefactor = picture.prefactor.render();
    let reduced = picture.reduced.iter().zip(&picture.reduced_exprs).map(|(u, e)| format!("{u} = {e}")).collect();
    let space = polarized_space(&ext, picture)?;
    let operators = space.names.iter().zip(&space.operators).map(|(n, op)| (n.clone(), op.render())).collect();
    Ok(PictureReport {
        picture: name,
        prefactor,
        reduced,
        operators,
        commutation_residuals: space.commutation_residuals(),
    })
}

pub(crate) fn load_extension(name: &str) -> Result<(Box<GroupSpec>, Extension), RepError> {
    let SpecFile::Group(g) = crate::fixtures::load(name).map_err(|e| RepError::Input(e.to_string()))? else {
        return Err(RepError::Input(format!("fixture `{name}` is not a group")));
    };
    let xi = g.cocycle.clone().unwrap_or_else(Expr::zero);
    let ext = Extension::build(&g.law, &xi, &g.theta_scale).map_err(|e| RepError::Input(e.to_string()))?;
    Ok((g, ext))
}

/// Operator-level check of `[M_i, M_j] = C^k_ij M_k` (central generator included).
pub fn commutation_residuals(ops: &[DiffOp], alg: &LieAlgebra) -> Vec<String> {
    let mut out = Vec::new();
    let vars = ops[0].vars().to_vec();
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            let lhs = ops[i].commutator(&ops[j]);
            let rhs = alg.c[i][j]
                .iter()
                .zip(ops)
                .fold(DiffOp::zero(&vars), |acc, (c, op)| acc.add(&op.scale(c)));
            let r = lhs.sub(&rhs);
            if !r.is_zero() {
                out.push(format!("[{}, {}]: residual {}", alg.names[i], alg.names[j], r));
            }
        }
    }
    out
}

/// Matrix-level check of the same relations, restricted to columns untouched by truncation.
/// Returns the residual labels and the number of checked columns per pair.
pub fn matrix_commutation_residuals(mats: &[Truncated], alg: &LieAlgebra) -> (Vec<String>, usize) {
    let mut out = Vec::new();
    let mut checked = usize::MAX;
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let mut t = mats[i].mul(&mats[j]).sub(&mats[j].mul(&mats[i]));
            for (k, c) in alg.c[i][j].iter().enumerate() {
                if !c.is_zero() {
                    t = t.sub(&mats[k].scale(c));
                }
            }
            checked = checked.min(t.valid_count());
            if !t.is_zero_on_valid() {
                out.push(format!("[{}, {}]", alg.names[i], alg.names[j]));
            }
        }
    }
    (out, if checked == usize::MAX { 0 } else { checked })
}

/// A matrix on a truncated basis with the columns on which it is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated {
    pub matrix: Matrix<Expr>,
    pub valid: Vec<bool>,
}

impl Truncated {
    pub fn from_op(op: &DiffOp, basis: &[MultiIndex]) -> Result<Self, OpError> {
        let m = op.matrix_on(basis)?;
        Ok(Truncated { matrix: m.matrix, valid: m.boundary.iter().map(|b| !b).collect() })
    }

    pub fn scalar(dim: usize, c: &Expr) -> Self {
        Truncated { matrix: linalg::mat_scale(&linalg::identity(dim), c), valid: vec![true; dim] }
    }

    pub fn dim(&self) -> usize {
        self.valid.len()
    }

    /// Column `c` of the product is exact when `o` is exact there and `self` is exact on
    /// every row `o` reaches.
    pub fn mul(&self, o: &Truncated) -> Truncated {
        let d = self.dim();
        let valid = (0..d)
            .map(|c| o.valid[c] && (0..d).all(|r| o.matrix[r][c].is_zero() || self.valid[r]))
            .collect();
        Truncated { matrix: linalg::matmul(&self.matrix, &o.matrix), valid }
    }

    pub fn add(&self, o: &Truncated) -> Truncated {
        Truncated {
            matrix: linalg::mat_add(&self.matrix, &o.matrix),
            valid: self.valid.iter().zip(&o.valid).map(|(a, b)| *a && *b).collect(),
        }
    }

    pub fn sub(&self, o: &Truncated) -> Truncated {
        Truncated {
            matrix: linalg::mat_sub(&self.matrix, &o.matrix),
            valid: self.valid.iter().zip(&o.valid).map(|(a, b)| *a && *b).collect(),
        }
    }

    pub fn scale(&self, c: &Expr) -> Truncated {
        Truncated { matrix: linalg::mat_scale(&self.matrix, c), valid: self.valid.clone() }
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    pub fn is_zero_on_valid(&self) -> bool {
        (0..self.dim()).filter(|&c| self.valid[c]).all(|c| self.matrix.iter().all(|row| row[c].is_zero()))
    }

    /// The common value when the matrix is `c * I` on its exact columns.
    pub fn scalar_on_valid(&self) -> Option<Expr> {
        let mut value: Option<Expr> = None;
        for c in (0..self.dim()).filter(|&c| self.valid[c]) {
            for (r, row) in self.matrix.iter().enumerate() {
                if r != c && !row[c].is_zero() {
                    return None;
                }
            }
            let d = &self.matrix[c][c];
            match &value {
                None => value = Some(d.clone()),
                Some(v) if v == d => {}
                Some(_) => return None,
            }
        }
        value
    }
}

/// Dimension of the space of matrices commuting with every given square matrix.
pub fn commutant_dimension(mats: &[Matrix<Expr>]) -> usize {
    let d = mats.first().map_or(0, Vec::len);
    let constant: Option<Vec<Matrix<Scalar>>> = mats.iter().map(constant_direction).collect();
    match constant {
        Some(cs) => commutant_kernel(&cs, d),
        None => commutant_kernel(mats, d),
    }
}

/// `m / e` as a constant matrix, where `e` is the first nonzero entry.
fn constant_direction(m: &Matrix<Expr>) -> Option<Matrix<Scalar>> {
    let Some(pivot) = m.iter().flatten().find(|x| !x.is_zero()) else {
        return Some(vec![vec![Scalar::zero(); m.len()]; m.len()]);
    };
    let inv = pivot.inv().ok()?;
    m.iter().map(|r| r.iter().map(|x| (x * &inv).constant_value()).collect()).collect()
}

fn commutant_kernel<F: linalg::Field>(mats: &[Matrix<F>], d: usize) -> usize {
    let mut rows: Matrix<F> = Vec::new();
    for m in mats {
        // (X M - M X)[r][c] in the unknowns X[a][b] at column a*d + b.
        for r in 0..d {
            for c in 0..d {
                let mut row = vec![F::zero(); d * d];
                for k in 0..d {
                    if !m[k][c].is_zero() {
                        row[r * d + k] = row[r * d + k].add(&m[k][c]);
                    }
                    if !m[r][k].is_zero() {
                        row[k * d + c] = row[k * d + c].sub(&m[r][k]);
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    d * d - linalg::rank(&rows)
}

/// Restriction to the rows and columns in `keep`.
pub fn restrict(m: &Matrix<Expr>, keep: &[usize]) -> Matrix<Expr> {
    keep.iter().map(|&r| keep.iter().map(|&c| m[r][c].clone()).collect()).collect()
}

/// Powers of a rotation `J = exp((pi/2) G)` acting through the matrix of `G`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct RotationPower {
    pub quarter_turns: u32,
    pub diagonalizable: bool,
    /// Distinct eigenvalue phases of `J^q`, as multiples of `pi` reduced to `[0, 2)`.
    pub phases_over_pi: Vec<String>,
    /// `Some` when `J^q` is a Gaussian-rational multiple of the identity.
    pub scalar: Option<String>,
}

fn eigenvalue_multiset(m: &Matrix<Expr>) -> Option<Vec<Scalar>> {
    let d = m.len();
    let upper = (0..d).all(|r| (0..r).all(|c| m[r][c].is_zero()));
    let lower = (0..d).all(|r| (r + 1..d).all(|c| m[r][c].is_zero()));
    if upper || lower {
        return (0..d).map(|k| m[k][k].constant_value()).collect();
    }
    let c = linalg::constant_matrix(m)?;
    let (roots, complete) = linalg::exact_roots(&linalg::char_poly(&c));
    complete.then_some(roots)
}

fn reduce_mod_two(x: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let q = (x / &two).floor();
    x - &(q * two)
}

/// `exp(i pi theta)` when it lies in `Q(i)`.
pub fn unit_phase(theta: &BigRational) -> Option<Scalar> {
    let t = reduce_mod_two(theta);
    let twice = &t * BigRational::from_integer(BigInt::from(2));
    if !twice.is_integer() {
        return None;
    }
    let k = twice.to_integer().mod_floor(&BigInt::from(4));
    Some(match k.to_string().as_str() {
        "0" => Scalar::one(),
        "1" => Scalar::i(),
        "2" => Scalar::from_int(-1),
        _ => -Scalar::i(),
    })
}

/// `J^q = exp(q (pi/2) G)`: requires eigenvalues of `G` in `i*Q` and diagonalizability.
pub fn rotation_power(generator: &Matrix<Expr>, quarter_turns: u32) -> Result<RotationPower, String> {
    let eig = eigenvalue_multiset(generator).ok_or("generator spectrum is not exactly computable")?;
    let mut distinct: Vec<Scalar> = Vec::new();
    for e in &eig {
        if !e.re.is_zero() {
            return Err(format!("eigenvalue {e} is not imaginary"));
        }
        if !distinct.contains(e) {
            distinct.push(e.clone());
        }
    }
    let diagonalizable = distinct.iter().all(|e| {
        let mult = eig.iter().filter(|x| *x == e).count();
        linalg::eigenspace(generator, &Expr::constant(e.clone())).len() == mult
    });
    let half_q = BigRational::new(BigInt::from(quarter_turns), BigInt::from(2));
    let mut phases: Vec<BigRational> = Vec::new();
    for e in &distinct {
        let p = reduce_mod_two(&(&e.im * &half_q));
        if !phases.contains(&p) {
            phases.push(p);
        }
    }
    phases.sort();
    let scalar = if diagonalizable && phases.len() == 1 {
        Some(match unit_phase(&phases[0]) {
            Some(s) => s.to_string(),
            None => format!("exp(i*pi*{})", phases[0]),
        })
    } else {
        None
    };
    Ok(RotationPower {
        quarter_turns,
        diagonalizable,
        phases_over_pi: phases.iter().map(|p| p.to_string()).collect(),
        scalar,
    })
}

/// Checks that `curve(t)` is the one-parameter subgroup `exp(theta G)` with
/// `t = tan(theta/2)`: it starts at the identity and `dg/dt = 2/(1+t^2) X^L_G(g)`.
/// Auxiliary values along the curve must square to their radicands.
pub fn rotation_curve_check(ext: &Extension, generator: &[Expr], curve: &BTreeMap<Sym, Expr>, t: &Sym) -> bool {
    let phase = ext.phase();
    let base = &ext.law.coords[..phase];
    let zero: BTreeMap<Sym, Expr> = [(t.clone(), Expr::zero())].into_iter().collect();
    for (k, c) in base.iter().enumerate() {
        let Some(g) = curve.get(c) else { return false };
        if g.substitute(&zero).ok().as_ref() != Some(&ext.law.identity[k]) {
            return false;
        }
    }
    for a in ext.law.aux_syms() {
        let (Some(val), Some(r)) = (curve.get(&a), a.radicand()) else { return false };
        let rad = Expr::poly(r.clone()).substitute(curve);
        if rad.ok().as_ref() != Some(&(val * val)) {
            return false;
        }
    }
    let mut v = generator.to_vec();
    v.push(Expr::zero());
    let field = VectorField::combination(&ext.lie.left, &v);
    let one_plus = &Expr::one() + &(&Expr::sym(t) * &Expr::sym(t));
    let speed = Expr::int(2).checked_div(&one_plus).expect("nonzero");
    base.iter().enumerate().all(|(k, c)| {
        let lhs = curve[c].diff(t);
        match field.comps[k].substitute(curve) {
            Ok(x) => lhs == &speed * &x,
            Err(_) => false,
        }
    })
}

/// `Some(k)` with `c = k(k-1)` solved over `Q`, both roots.
pub fn bargmann_indices(casimir: &Scalar) -> Option<(Scalar, Scalar)> {
    // k^2 - k - c = 0
    let coeffs = vec![-casimir.clone(), Scalar::from_int(-1), Scalar::one()];
    let (roots, complete) = linalg::exact_roots(&coeffs);
    if !complete || roots.len() != 2 {
        return None;
    }
    let (a, b) = (roots[0].clone(), roots[1].clone());
    if a.re <= b.re {
        Some((a, b))
    } else {
        Some((b, a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse_expr;

    fn hw_space(which: HwPicture) -> (Extension, PolarizedSpace) {
        let (_, ext) = load_extension("hw").unwrap();
        let picture = hw_picture(&ext, which).unwrap();
        let space = polarized_space(&ext, picture).unwrap();
        (ext, space)
    }

    fn expr(ext: &Extension, text: &str) -> Expr {
        let mut t = ext.law.table.clone();
        t.free("u").unwrap();
        parse_expr(text, &t).unwrap()
    }

    fn first_order(space: &PolarizedSpace, ext: &Extension, d: &str, m: &str) -> DiffOp {
        DiffOp::first_order(space.vars(), &[expr(ext, d)], expr(ext, m))
    }

    #[test]
    fn configuration_picture_operators() {
        let (ext, s) = hw_space(HwPicture::Configuration);
        assert_eq!(s.operator("q").unwrap(), &first_order(&s, &ext, "1", "0"));
        assert_eq!(s.operator("v").unwrap(), &first_order(&s, &ext, "0", "-i*m*u/hbar"));
        assert_eq!(s.operator("Xi").unwrap(), &first_order(&s, &ext, "0", "i"));
        assert!(s.commutation_residuals().is_empty());
    }

    #[test]
    fn momentum_picture_operators() {
        let (ext, s) = hw_space(HwPicture::Momentum);
        assert_eq!(s.operator("q").unwrap(), &first_order(&s, &ext, "0", "i*m*u/hbar"));
        assert_eq!(s.operator("v").unwrap(), &first_order(&s, &ext, "1", "0"));
        assert!(s.commutation_residuals().is_empty());
    }

    #[test]
    fn complex_picture_operators() {
        let (ext, s) = hw_space(HwPicture::Complex);
        assert_eq!(s.operator("q").unwrap(), &first_order(&s, &ext, "1", "m*omega*u/(2*hbar)"));
        assert_eq!(s.operator("v").unwrap(), &first_order(&s, &ext, "i/omega", "-i*m*u/(2*hbar)"));
        assert!(s.commutation_residuals().is_empty());
    }

    #[test]
    fn wrong_prefactor_is_inconsistent() {
        let (_, ext) = load_extension("hw").unwrap();
        let mut picture = hw_picture(&ext, HwPicture::Configuration).unwrap();
        picture.prefactor = Prefactor::one();
        assert!(matches!(polarized_space(&ext, picture), Err(RepError::Inconsistent { .. })));
    }

    #[test]
    fn spin_representations() {
        for lambda in 0..=6 {
            let r = su2_representation(&Scalar::from_int(lambda)).unwrap();
            assert_eq!(r.dimension, lambda as usize + 1);
            assert!(r.passed(), "lambda = {lambda}");
            assert_eq!(r.j_fourth.scalar.as_deref(), Some("1"));
            let sign = if lambda % 2 == 0 { "1" } else { "-1" };
            assert_eq!(r.j_squared.scalar.as_deref(), Some(sign));
        }
        assert!(su2_representation(&Scalar::from_ratio(1, 2)).is_err());
        assert!(su2_representation(&Scalar::from_int(-1)).is_err());
    }

    #[test]
    fn metaplectic_suite() {
        let r = metaplectic_representation(12).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.casimir.as_deref(), Some("-3/16"));
        assert_eq!(r.casimir_operator.as_deref(), Some("-3/16"));
        assert_eq!(r.bargmann_indices, Some(("1/4".into(), "3/4".into())));
        assert_eq!(r.vacuum_dilation, "-1/2");
        assert_eq!(r.j_squared.scalar, None);
        assert_eq!(r.chart_discrepancies.len(), 1);
    }

    #[test]
    fn higher_order_polarization_needs_symmetrization() {
        assert!(ho_polarization_v(true).unwrap().passed());
        let broken = ho_polarization_v(false).unwrap();
        assert!(broken.central_exclusion && !broken.closure);
    }

    #[test]
    fn first_order_reduction_of_the_oscillator_polarization() {
        let (_, ext) = load_extension("schrodinger").unwrap();
        let env = crate::uea::Enveloping::of(&ext.algebra)
            .with_order(&["Xi", "A", "B", "C", "D", "x2", "x1"])
            .unwrap();
        let els: Vec<UeaElement> =
            HO_POLARIZATION_V.iter().map(|t| env.parse(t, &ext.law.table).unwrap()).collect();
        let x1 = env.algebra.index("x1").unwrap();
        let red = reduce_to_first_order(&env, &els, &[x1]).unwrap();
        assert_eq!(red.first_order.len(), 4);
        assert_eq!(red.constraints.len(), 1);
        let unordered = crate::uea::Enveloping::of(&ext.algebra);
        assert!(reduce_to_first_order(&unordered, &els, &[x1]).is_err());
    }

    #[test]
    fn non_full_polarization_breaks_the_liftings() {
        let s = anomaly_symptom().unwrap();
        assert!(!s.full);
        assert!(s.present());
    }

    #[test]
    fn limit_operators_follow_from_the_reduced_operators() {
        let l = limit_operators(8).unwrap();
        assert_eq!(l.momentum, "(p)");
        assert!(l.omega_absent);
        assert_eq!(l.commutator.as_deref(), Some("-i*hbar*m"));
        assert_eq!(l.commutator, l.weyl_matrix);
    }

    #[test]
    fn unit_phases() {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(unit_phase(&r(1, 2)), Some(Scalar::i()));
        assert_eq!(unit_phase(&r(3, 1)), Some(Scalar::from_int(-1)));
        assert_eq!(unit_phase(&r(1, 4)), None);
    }

    #[test]
    fn bargmann_roots() {
        let (a, b) = bargmann_indices(&Scalar::from_ratio(-3, 16)).unwrap();
        assert_eq!((a, b), (Scalar::from_ratio(1, 4), Scalar::from_ratio(3, 4)));
    }
}

