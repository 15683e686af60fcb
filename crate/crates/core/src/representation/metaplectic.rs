//! Schrödinger group: higher-order polarization, reduction to a first-order chart, the
//! metaplectic operators on `y`, and the Galilei-limit triple.

use std::collections::BTreeMap;

use serde::Serialize;

use super::pictures::{build_picture, parse_vectors, picture_table, PictureSpec};
use super::{
    bargmann_indices, commutant_dimension, commutation_residuals, load_extension, matrix_commutation_residuals,
    polarized_space, restrict, rotation_curve_check, rotation_power, Picture, RepError, RotationPower, Truncated,
};
use crate::diffop::{monomial_basis, DiffOp};
use crate::extension::Extension;
use crate::polarization;
use crate::specfile::parse_combination;
use crate::symbolic::{parse_expr, Expr, Scalar, Sym, SymbolTable};
use crate::uea::{ho_polarization_check, Enveloping, HoReport, UeaElement};

/// The second-order polarization of the Schrödinger group in the oscillator chart.
pub const HO_POLARIZATION_V: [&str; 5] = [
    "A + D",
    "A - D - (i*hbar/(2*m*omega))*(x1*x2 + x2*x1)",
    "B + (i*hbar/(2*m*omega))*x1^2",
    "C - (i*hbar/(2*m*omega))*x2^2",
    "x1",
];

/// The same set with the symmetrized product in the second element replaced by `2 x1 x2`.
pub const HO_POLARIZATION_V_DESYMMETRIZED: [&str; 5] = [
    "A + D",
    "A - D - (i*hbar/(2*m*omega))*(2*x1*x2)",
    "B + (i*hbar/(2*m*omega))*x1^2",
    "C - (i*hbar/(2*m*omega))*x2^2",
    "x1",
];

/// First-order vector-field content declared for the second-order polarization.
const HO_FIRST_ORDER: [&str; 2] = ["A + D", "x1"];

/// PBW order with the annihilating generator `x1` last.
const PBW_ORDER: [&str; 7] = ["Xi", "A", "B", "C", "D", "x2", "x1"];

const LIFT: &str = "i*hbar/(2*m*omega)";

fn schrodinger() -> Result<Extension, RepError> {
    Ok(load_extension("schrodinger")?.1)
}

fn enveloping(ext: &Extension) -> Result<Enveloping, RepError> {
    Enveloping::of(&ext.algebra).with_order(&PBW_ORDER).map_err(RepError::Input)
}

fn parse_elements(env: &Enveloping, ext: &Extension, texts: &[&str]) -> Result<Vec<UeaElement>, RepError> {
    texts
        .iter()
        .map(|t| env.parse(t, &ext.law.table).map_err(|e| RepError::Input(format!("`{t}`: {e}"))))
        .collect()
}

fn constant(ext: &Extension, text: &str) -> Expr {
    parse_expr(text, &ext.law.table).expect("constant over the group parameters")
}

/// Runs the higher-order checks on the oscillator polarization, symmetrized or not.
pub fn ho_polarization_v(symmetrized: bool) -> Result<HoReport, RepError> {
    let ext = schrodinger()?;
    let env = enveloping(&ext)?;
    let texts = if symmetrized { HO_POLARIZATION_V } else { HO_POLARIZATION_V_DESYMMETRIZED };
    let elements = parse_elements(&env, &ext, &texts)?;
    let first = parse_vectors(&ext, &HO_FIRST_ORDER)?;
    Ok(ho_polarization_check(&env, &elements, &first))
}

/// First-order data extracted from a higher-order polarization.
#[derive(Debug, Clone)]
pub struct FirstOrderReduction {
    /// Extended left vectors (`Xi` coefficient last) acting as first-order equations.
    pub first_order: Vec<Vec<Expr>>,
    /// Remaining elements of degree two or more, with `Xi` replaced by `i`.
    pub constraints: Vec<UeaElement>,
}

/// Reduces elements on functions annihilated by the `annihilators`: words ending in one of
/// them vanish and `Xi` acts as `i`. The annihilators must come last in the PBW order so
/// that normal-ordered words carry them at the right end.
pub fn reduce_to_first_order(
    env: &Enveloping,
    elements: &[UeaElement],
    annihilators: &[usize],
) -> Result<FirstOrderReduction, String> {
    let xi = env.central();
    let dim = env.algebra.dim();
    let top = annihilators.iter().map(|&a| env.rank[a]).min().unwrap_or(dim);
    if (0..dim).any(|g| !annihilators.contains(&g) && env.rank[g] > top) {
        return Err("annihilating generators must be last in the PBW order".into());
    }
    let mut first_order: Vec<Vec<Expr>> = annihilators
        .iter()
        .map(|&a| (0..dim).map(|g| if g == a { Expr::one() } else { Expr::zero() }).collect())
        .collect();
    let mut constraints = Vec::new();
    for e in elements {
        let mut reduced = UeaElement::zero();
        for (word, c) in env.normal_form(e).terms() {
            if word.last().is_some_and(|g| annihilators.contains(g)) {
                continue;
            }
            let rest: Vec<usize> = word.iter().copied().filter(|&g| g != xi).collect();
            let mut coeff = c.clone();
            for _ in 0..word.len() - rest.len() {
                coeff = &coeff * &Expr::i();
            }
            reduced = reduced.add(&UeaElement::word(rest, coeff));
        }
        if reduced.is_zero() {
            continue;
        }
        if reduced.degree() <= 1 {
            let mut v = vec![Expr::zero(); dim];
            for (word, c) in reduced.terms() {
                match word.as_slice() {
                    [] => v[xi] = &(-&Expr::i()) * c,
                    [g] => v[*g] = c.clone(),
                    _ => unreachable!("degree checked"),
                }
            }
            first_order.push(v);
        } else {
            constraints.push(reduced);
        }
    }
    Ok(FirstOrderReduction { first_order: crate::linalg::span_basis(&first_order), constraints })
}

/// Chart `a != 0` of the oscillator picture: `Psi = e^{i phi} a^{-1/2} e^{(i k/2) x y} chi(tau, y)`
/// with `a = A/s`, `x = (A x1 + B x2)/s`, `y = x2 s/A`, `tau = C/A`, `k = m omega/hbar`.
pub fn chart_picture(ext: &Extension, polarization: Vec<Vec<Expr>>) -> Result<Picture, RepError> {
    build_picture(ext, chart_spec("oscillator-chart", polarization, &[("A/s", "-1/2")]))
}

fn chart_spec<'a>(name: &'a str, polarization: Vec<Vec<Expr>>, powers: &'a [(&'a str, &'a str)]) -> PictureSpec<'a> {
    PictureSpec {
        name,
        polarization,
        exponent: "i*m*omega*(A*x1 + B*x2)*x2/(2*hbar*A)",
        powers,
        reduced: &[("tau", "C/A"), ("y", "x2*s/A")],
        section: &[
            ("A", "1"),
            ("B", "0"),
            ("C", "tau"),
            ("D", "1"),
            ("s", "1"),
            ("x1", "0"),
            ("x2", "y"),
            ("phi", "0"),
        ],
    }
}

fn build_op(vars: &[Sym], table: &SymbolTable, terms: &[(&[u32], &str)]) -> DiffOp {
    terms.iter().fold(DiffOp::zero(vars), |acc, (alpha, c)| {
        let coeff = parse_expr(c, table).expect("operator coefficient");
        acc.add(&DiffOp::term(vars, alpha.to_vec(), coeff))
    })
}

/// Reference operators on `chi(tau, y)` in the oscillator chart, by right generator label.
/// The reference `A - D` carries `-tau d_tau`, while `[A - D, C] = 2C` requires `-2 tau d_tau`.
pub fn reference_chart_operators(ext: &Extension) -> Result<Vec<(String, DiffOp)>, RepError> {
    let table = picture_table(ext, &[("tau", ""), ("y", "")])?;
    let vars = [table.get("tau").expect("declared").clone(), table.get("y").expect("declared").clone()];
    let list: [(&str, &[(&[u32], &str)]); 6] = [
        ("x1", &[(&[0, 0], "i*m*omega*y/hbar"), (&[0, 1], "-tau")]),
        ("x2", &[(&[0, 1], "1")]),
        ("A + D", &[]),
        ("A - D", &[(&[0, 1], "-y"), (&[0, 0], "-1/2"), (&[1, 0], "-tau")]),
        ("B", &[(&[0, 0], "i*m*omega*y^2/(2*hbar) - tau/2"), (&[1, 0], "-tau^2"), (&[0, 1], "-tau*y")]),
        ("C", &[(&[1, 0], "1")]),
    ];
    Ok(list.iter().map(|(n, t)| (n.to_string(), build_op(&vars, &table, t))).collect())
}

/// Reference metaplectic operators on `phi(y)`, by right generator label.
pub fn reference_metaplectic_operators(ext: &Extension) -> Result<Vec<(String, DiffOp)>, RepError> {
    let table = picture_table(ext, &[("y", "")])?;
    let vars = [table.get("y").expect("declared").clone()];
    let list: [(&str, &[(&[u32], &str)]); 6] = [
        ("x1", &[(&[0], "i*m*omega*y/hbar")]),
        ("x2", &[(&[1], "1")]),
        ("A + D", &[]),
        ("A - D", &[(&[1], "-y"), (&[0], "-1/2")]),
        ("B", &[(&[0], "i*m*omega*y^2/(2*hbar)")]),
        ("C", &[(&[2], "i*hbar/(2*m*omega)")]),
    ];
    Ok(list.iter().map(|(n, t)| (n.to_string(), build_op(&vars, &table, t))).collect())
}

/// Differences between derived operators and a reference list of labelled combinations.
fn mismatches(ext: &Extension, derived: &[DiffOp], reference: &[(String, DiffOp)]) -> Result<Vec<String>, RepError> {
    let names = ext.lie.right_algebra.names.clone();
    let mut out = Vec::new();
    for (label, expected) in reference {
        let v = parse_combination(label, &names[..names.len() - 1], &ext.law.table).map_err(RepError::Input)?;
        let got = v.iter().zip(derived).fold(DiffOp::zero(expected.vars()), |acc, (c, op)| acc.add(&op.scale(c)));
        if got != *expected {
            out.push(format!("{label}: derived {got}, expected {expected}"));
        }
    }
    Ok(out)
}

/// Everything computed on the way to the metaplectic operators.
struct Derivation {
    ext: Extension,
    ho: HoReport,
    first_order: Vec<String>,
    constraint: String,
    prefactor: String,
    chart: Vec<DiffOp>,
    evolution: DiffOp,
    stationary: bool,
    operators: Vec<DiffOp>,
}

fn derive() -> Result<Derivation, RepError> {
    let ext = schrodinger()?;
    let env = enveloping(&ext)?;
    let elements = parse_elements(&env, &ext, &HO_POLARIZATION_V)?;
    let first = parse_vectors(&ext, &HO_FIRST_ORDER)?;
    let ho = ho_polarization_check(&env, &elements, &first);
    let x1 = env.algebra.index("x1").expect("generator");
    let reduction = reduce_to_first_order(&env, &elements, &[x1]).map_err(RepError::Input)?;
    let [constraint] = reduction.constraints.as_slice() else {
        return Err(RepError::Operator(format!(
            "expected one second-order constraint, found {}",
            reduction.constraints.len()
        )));
    };
    let full = ext.lie.algebra.clone();
    let first_order = reduction.first_order.iter().map(|v| full.render_vector(v)).collect();
    let picture = chart_picture(&ext, reduction.first_order.clone())?;
    let prefactor = picture.prefactor.render();
    let space = polarized_space(&ext, picture)?;

    // The constraint reads `c (d_tau - T) chi = 0` with `T` free of `tau` and `d_tau`.
    let q = space.left_enveloping_equation(constraint)?;
    let c = q.coefficient(&[1, 0]);
    if c.is_zero() {
        return Err(RepError::Operator(format!("constraint {q} has no d_tau term")));
    }
    let evolution = DiffOp::partial(space.vars(), 0).sub(&q.scale(&c.inv()?));
    let tau = space.vars()[0].clone();
    if evolution.terms().keys().any(|a| a[0] > 0) || evolution.depends_on(&tau) {
        return Err(RepError::Operator(format!("constraint {q} is not an evolution equation in tau")));
    }

    let mut stationary = true;
    let mut operators = Vec::new();
    for op in &space.operators {
        let flowed = op.conjugate_flow(&evolution, 0, 32)?;
        let sliced_terms = flowed.terms().iter().filter(|(a, _)| a[0] == 0);
        if sliced_terms.clone().any(|(_, c)| c.contains(&tau)) {
            stationary = false;
        }
        operators.push(flowed.slice(0, &Expr::zero())?);
    }
    Ok(Derivation {
        constraint: constraint.render(env.names()),
        ext,
        ho,
        first_order,
        prefactor,
        chart: space.operators.clone(),
        evolution,
        stationary,
        operators,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct MetaplecticReport {
    pub cutoff: u32,
    pub ho_check: HoReport,
    pub first_order: Vec<String>,
    pub constraint: String,
    pub prefactor: String,
    pub chart_operators: BTreeMap<String, String>,
    pub chart_commutation_residuals: Vec<String>,
    /// Differences from the reference chart operators; informational.
    pub chart_discrepancies: Vec<String>,
    pub evolution: String,
    pub evolution_matches: bool,
    /// Conjugated operators carry no `tau` dependence.
    pub stationary: bool,
    pub operators: BTreeMap<String, String>,
    pub operator_mismatches: Vec<String>,
    pub commutation_residuals: Vec<String>,
    pub matrix_residuals: Vec<String>,
    pub casimir_operator: Option<String>,
    pub casimir: Option<String>,
    pub stable_columns: usize,
    pub bargmann_indices: Option<(String, String)>,
    pub bargmann_consistent: bool,
    pub parity_split: bool,
    pub commutant_dimension: usize,
    pub lifting_failures: Vec<String>,
    pub vacuum_dilation: String,
    pub rotation_curve: bool,
    pub gaussian_triangular: bool,
    pub j_squared: RotationPower,
    pub j_fourth: RotationPower,
}

impl MetaplecticReport {
    pub fn passed(&self) -> bool {
        self.ho_check.passed()
            && self.chart_commutation_residuals.is_empty()
            && self.evolution_matches
            && self.stationary
            && self.operator_mismatches.is_empty()
            && self.commutation_residuals.is_empty()
            && self.matrix_residuals.is_empty()
            && self.casimir.as_deref() == Some("-3/16")
            && self.bargmann_consistent
            && self.parity_split
            && self.commutant_dimension == 2
            && self.lifting_failures.is_empty()
            && self.j_fourth.scalar.as_deref() == Some("-1")
    }
}

fn named(ext: &Extension, ops: &[DiffOp]) -> BTreeMap<String, String> {
    ext.lie.right_algebra.names.iter().cloned().zip(ops.iter().map(DiffOp::render)).collect()
}

/// `(i hbar/2 m omega)`-liftings of `B`, `C` and `A - D` to quadratics in `x1`, `x2`.
fn lifting_failures(ext: &Extension, ops: &[DiffOp]) -> Vec<String> {
    let idx = |n: &str| ext.lie.right_algebra.index(n).expect("generator");
    let lift = constant(ext, LIFT);
    let (x1, x2) = (&ops[idx("x1")], &ops[idx("x2")]);
    let k = ops[idx("A")].sub(&ops[idx("D")]);
    let checks = [
        ("B = -(i hbar/2 m omega) x1^2", ops[idx("B")].clone(), x1.pow(2).scale(&-&lift)),
        ("C = (i hbar/2 m omega) x2^2", ops[idx("C")].clone(), x2.pow(2).scale(&lift)),
        ("A - D = (i hbar/2 m omega)(x1 x2 + x2 x1)", k, x1.compose(x2).add(&x2.compose(x1)).scale(&lift)),
    ];
    checks
        .into_iter()
        .filter(|(_, lhs, rhs)| lhs != rhs)
        .map(|(label, lhs, rhs)| format!("{label}: {lhs} vs {rhs}"))
        .collect()
}

fn odd_offset_free(m: &Truncated) -> bool {
    m.matrix.iter().enumerate().all(|(r, row)| row.iter().enumerate().all(|(c, x)| x.is_zero() || (r + c) % 2 == 0))
}

/// The `sl(2,R)` part of the reduced representation on `1, y, ..., y^cutoff`.
pub fn metaplectic_representation(cutoff: u32) -> Result<MetaplecticReport, RepError> {
    if cutoff < 4 {
        return Err(RepError::Input(format!("cutoff {cutoff} below 4")));
    }
    let d = derive()?;
    let ext = &d.ext;
    let names = &ext.lie.right_algebra.names;
    let idx = |n: &str| ext.lie.right_algebra.index(n).expect("generator");

    let chart_discrepancies = mismatches(ext, &d.chart, &reference_chart_operators(ext)?)?;
    let chart_commutation_residuals = commutation_residuals(&d.chart, &ext.lie.right_algebra);
    let y_table = picture_table(ext, &[("tau", ""), ("y", "")])?;
    let expected_t = build_op(
        &[y_table.get("tau").expect("declared").clone(), y_table.get("y").expect("declared").clone()],
        &y_table,
        &[(&[0, 2], LIFT)],
    );
    let operator_mismatches = mismatches(ext, &d.operators, &reference_metaplectic_operators(ext)?)?;

    let ops = &d.operators;
    let vars = ops[0].vars().to_vec();
    let commutation = commutation_residuals(ops, &ext.lie.right_algebra);
    let basis = monomial_basis(1, cutoff);
    let mats: Vec<Truncated> = ops.iter().map(|op| Truncated::from_op(op, &basis)).collect::<Result<_, _>>()?;
    let (matrix_residuals, _) = matrix_commutation_residuals(&mats, &ext.lie.right_algebra);

    let quarter = Expr::ratio(1, 4);
    let half = Expr::ratio(1, 2);
    let k_op = ops[idx("A")].sub(&ops[idx("D")]);
    let (b_op, c_op) = (&ops[idx("B")], &ops[idx("C")]);
    let casimir_operator = k_op
        .pow(2)
        .scale(&quarter)
        .add(&b_op.compose(c_op).add(&c_op.compose(b_op)).scale(&half))
        .as_multiplier()
        .map(|c| c.to_string());
    let k_m = mats[idx("A")].sub(&mats[idx("D")]);
    let (b_m, c_m) = (&mats[idx("B")], &mats[idx("C")]);
    let cas = k_m.mul(&k_m).scale(&quarter).add(&b_m.mul(c_m).add(&c_m.mul(b_m)).scale(&half));
    let casimir_value = cas.scalar_on_valid();
    let casimir = casimir_value.as_ref().map(Expr::to_string);
    let stable: Vec<usize> = (0..cas.dim()).filter(|&c| cas.valid[c]).collect();
    let indices = casimir_value.as_ref().and_then(Expr::constant_value).and_then(|c| bargmann_indices(&c));
    let bargmann_consistent = match (&indices, casimir_value.as_ref().and_then(Expr::constant_value)) {
        (Some((a, b)), Some(c)) => [a, b].iter().all(|k| (*k * &(*k - &Scalar::one())) == c),
        _ => false,
    };
    let parity_split = [&k_m, b_m, c_m].iter().all(|m| odd_offset_free(m));
    let commutant = commutant_dimension(&[
        restrict(&k_m.matrix, &stable),
        restrict(&b_m.matrix, &stable),
        restrict(&c_m.matrix, &stable),
    ]);

    let vacuum_dilation = k_op.apply(&Expr::one()).to_string();

    let generator = parse_combination("B - C", &names[..names.len() - 1], &ext.law.table).map_err(RepError::Input)?;
    let t = Sym::new("t");
    let mut table = ext.law.table.clone();
    table.free("t").map_err(|e| RepError::Input(e.to_string()))?;
    let p = |s: &str| parse_expr(s, &table).expect("curve expression");
    let curve: BTreeMap<Sym, Expr> = [
        ("x1", "0"),
        ("x2", "0"),
        ("A", "(1 - t^2)/(1 + t^2)"),
        ("B", "2*t/(1 + t^2)"),
        ("C", "-2*t/(1 + t^2)"),
        ("D", "(1 - t^2)/(1 + t^2)"),
        ("s", "1"),
    ]
    .iter()
    .map(|(c, e)| (table.get(c).expect("coordinate").clone(), p(e)))
    .collect();
    let rotation_curve = rotation_curve_check(ext, &generator, &curve, &t);

    // Conjugation by the ground-state Gaussian makes `B - C` triangular on monomials.
    let gaussian = &(&Expr::sym(&vars[0]) * &Expr::sym(&vars[0])) * &constant(ext, "-m*omega/(2*hbar)");
    let rotation = b_op.sub(c_op).conjugate_exp(&gaussian);
    let rotation_m = Truncated::from_op(&rotation, &basis)?;
    let gaussian_triangular = rotation_m.valid.iter().all(|v| *v);
    let j_squared = rotation_power(&rotation_m.matrix, 2).map_err(RepError::Operator)?;
    let j_fourth = rotation_power(&rotation_m.matrix, 4).map_err(RepError::Operator)?;

    Ok(MetaplecticReport {
        cutoff,
        ho_check: d.ho.clone(),
        first_order: d.first_order.clone(),
        constraint: d.constraint.clone(),
        prefactor: d.prefactor.clone(),
        chart_operators: named(ext, &d.chart),
        chart_commutation_residuals,
        chart_discrepancies,
        evolution: d.evolution.render(),
        evolution_matches: d.evolution == expected_t,
        stationary: d.stationary,
        operators: named(ext, ops),
        operator_mismatches,
        commutation_residuals: commutation,
        matrix_residuals,
        casimir_operator,
        casimir,
        stable_columns: stable.len(),
        bargmann_indices: indices.map(|(a, b)| (a.to_string(), b.to_string())),
        bargmann_consistent,
        parity_split,
        commutant_dimension: commutant,
        lifting_failures: lifting_failures(ext, ops),
        vacuum_dilation,
        rotation_curve,
        gaussian_triangular,
        j_squared,
        j_fourth,
    })
}

/// `p = -i hbar X_x1`, `q = -i (hbar/omega) X_x2`, `E = i hbar omega X_B` in the variable `p`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct LimitOperators {
    pub cutoff: u32,
    pub momentum: String,
    pub position: String,
    pub energy: String,
    /// `[q, p]` when it is a multiplication operator.
    pub commutator: Option<String>,
    pub expected_commutator: String,
    pub weyl_operator: bool,
    /// `[q, p]` on the stable rows of the truncated basis, when scalar there.
    pub weyl_matrix: Option<String>,
    pub weyl_matrix_holds: bool,
    pub energy_operator_holds: bool,
    pub energy_matrix_holds: bool,
    pub omega_absent: bool,
}

impl LimitOperators {
    pub fn passed(&self) -> bool {
        self.weyl_operator
            && self.weyl_matrix_holds
            && self.energy_operator_holds
            && self.energy_matrix_holds
            && self.omega_absent
    }
}

pub fn limit_operators(cutoff: u32) -> Result<LimitOperators, RepError> {
    let d = derive()?;
    let ext = &d.ext;
    let idx = |n: &str| ext.lie.right_algebra.index(n).expect("generator");
    let c = |s: &str| constant(ext, s);
    let y = d.operators[0].vars()[0].clone();
    let momentum_y = d.operators[idx("x1")].scale(&c("-i*hbar"));
    let position_y = d.operators[idx("x2")].scale(&c("-i*hbar/omega"));
    let energy_y = d.operators[idx("B")].scale(&c("i*hbar*omega"));

    let mult = momentum_y
        .as_multiplier()
        .ok_or_else(|| RepError::Operator(format!("momentum {momentum_y} is not a multiplication")))?;
    let factor = mult.diff(&y);
    if mult != &factor * &Expr::sym(&y) || factor.is_zero() {
        return Err(RepError::Operator(format!("momentum {momentum_y} is not linear in y")));
    }
    let p = Sym::new("p");
    let momentum = momentum_y.rescale(0, &p, &factor)?;
    let position = position_y.rescale(0, &p, &factor)?;
    let energy = energy_y.rescale(0, &p, &factor)?;

    let expected = c("i*hbar");
    let commutator = position.commutator(&momentum).as_multiplier();
    let weyl_operator = commutator.as_ref() == Some(&expected);
    let basis = monomial_basis(1, cutoff);
    let (qm, pm, em) = (
        Truncated::from_op(&position, &basis)?,
        Truncated::from_op(&momentum, &basis)?,
        Truncated::from_op(&energy, &basis)?,
    );
    let weyl_matrix = qm.mul(&pm).sub(&pm.mul(&qm)).scalar_on_valid();
    let weyl_matrix_holds = weyl_matrix.as_ref() == Some(&expected);
    let inv_2m = c("1/(2*m)");
    let kinetic = momentum.compose(&momentum).scale(&inv_2m);
    let energy_operator_holds = energy == kinetic;
    let energy_matrix_holds = em.sub(&pm.mul(&pm).scale(&inv_2m)).is_zero_on_valid();
    let omega = ext.law.table.get("omega").expect("parameter").clone();
    let omega_absent = [&momentum, &position, &energy].iter().all(|op| !op.depends_on(&omega));
    Ok(LimitOperators {
        cutoff,
        momentum: momentum.render(),
        position: position.render(),
        energy: energy.render(),
        commutator: commutator.map(|x| x.to_string()),
        expected_commutator: expected.to_string(),
        weyl_operator,
        weyl_matrix: weyl_matrix.map(|x| x.to_string()),
        weyl_matrix_holds,
        energy_operator_holds,
        energy_matrix_holds,
        omega_absent,
    })
}

/// Quantization with the non-full first-order polarization `<x1, A, B, D>`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AnomalySymptom {
    pub polarization: Vec<String>,
    pub full: bool,
    pub symplectic: bool,
    /// Right generators whose action leaves the polarized space.
    pub unreducible: Vec<String>,
    pub lifting_failures: Vec<String>,
}

impl AnomalySymptom {
    pub fn present(&self) -> bool {
        !self.unreducible.is_empty() || !self.lifting_failures.is_empty()
    }
}

pub fn anomaly_symptom() -> Result<AnomalySymptom, RepError> {
    let ext = schrodinger()?;
    let texts = ["x1", "A", "B", "D"];
    let vectors = parse_vectors(&ext, &texts)?;
    let class = polarization::classify(&ext.algebra, &vectors).map_err(|e| RepError::Input(format!("{e:?}")))?;
    let picture = build_picture(&ext, chart_spec("non-full-chart", vectors, &[]))?;
    let (unreducible, lifting) = match polarized_space(&ext, picture) {
        Ok(space) => (Vec::new(), lifting_failures(&ext, &space.operators)),
        Err(RepError::NotReducible { generator, residual }) => (vec![format!("{generator}: {residual}")], Vec::new()),
        Err(e) => return Err(e),
    };
    Ok(AnomalySymptom {
        polarization: texts.iter().map(|s| s.to_string()).collect(),
        full: class.full,
        symplectic: class.symplectic,
        unreducible,
        lifting_failures: lifting,
    })
}
