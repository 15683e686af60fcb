//! Spin representations from the non-horizontal polarization of `SU(2) x U(1)`.

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::Serialize;

use super::{
    load_extension, matrix_commutation_residuals, polarized_space, rotation_curve_check, rotation_power, su2_picture, RepError,
    RotationPower, Truncated,
};
use crate::diffop::monomial_basis;
use crate::symbolic::{parse_expr, Expr, Scalar, Sym};

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Su2Report {
    pub lambda: i64,
    pub spin: String,
    pub dimension: usize,
    pub prefactor: String,
    pub operators: BTreeMap<String, String>,
    /// The span of `1, tau, ..., tau^lambda` is mapped into itself.
    pub invariant: bool,
    pub commutation_residuals: Vec<String>,
    pub matrix_residuals: Vec<String>,
    /// `[H,E] = 2E`, `[H,F] = -2F`, `[E,F] = H` for `H = X_z1 - X_z1c`, `E = X_z2c`, `F = -X_z2`.
    pub triple: bool,
    pub casimir: Option<String>,
    pub expected_casimir: String,
    pub highest_weight: bool,
    pub lowest_weight: bool,
    pub rotation_curve: bool,
    pub j_squared: RotationPower,
    pub j_fourth: RotationPower,
}

impl Su2Report {
    pub fn passed(&self) -> bool {
        self.invariant
            && self.commutation_residuals.is_empty()
            && self.matrix_residuals.is_empty()
            && self.triple
            && self.casimir.as_deref() == Some(self.expected_casimir.as_str())
            && self.highest_weight
            && self.lowest_weight
            && self.rotation_curve
    }
}

/// `lambda` must be a nonnegative integer: `J^4 = I` in `SU(2)` while the chart transition
/// multiplies by `(-1)^(-2 lambda)`, so single-valuedness forces integrality.
pub fn integral_lambda(lambda: &Scalar) -> Result<i64, RepError> {
    let reject = || {
        RepError::Input(format!(
            "lambda = {lambda} rejected: single-valued wave functions on SU(2) need J^4 to act \
             trivially, which forces lambda to be a nonnegative integer"
        ))
    };
    let n = lambda.as_integer().ok_or_else(reject)?;
    if n.is_negative() {
        return Err(reject());
    }
    n.to_string().parse::<i64>().map_err(|_| reject())
}

pub fn su2_representation(lambda: &Scalar) -> Result<Su2Report, RepError> {
    let lam = integral_lambda(lambda)?;
    let (g, ext) = load_extension("su2")?;
    let seeds: Vec<Vec<Expr>> = g.seeds.iter().map(|s| s.coeffs.clone()).collect();
    let lambda_sym = ext.law.table.get("lambda").cloned().unwrap_or_else(|| Sym::new("lambda"));
    let value = Expr::constant(lambda.clone());
    let bind: BTreeMap<Sym, Expr> = [(lambda_sym, value.clone())].into_iter().collect();
    let picture = su2_picture(&ext, seeds)?.substitute_parameters(&bind)?;
    let prefactor = picture.prefactor.render();
    let space = polarized_space(&ext, picture)?;

    let basis = monomial_basis(1, lam as u32);
    let mats = space.matrices(&basis)?;
    let invariant = mats.iter().all(|m| m.valid.iter().all(|v| *v));
    let commutation_residuals = space.commutation_residuals();
    let (matrix_residuals, _) = matrix_commutation_residuals(&mats, &space.right_algebra);

    let get = |name: &str| -> Result<&Truncated, RepError> {
        space.index(name).map(|k| &mats[k]).ok_or_else(|| RepError::Input(format!("no generator `{name}`")))
    };
    let h = get("z1")?.sub(get("z1c")?);
    let e = get("z2c")?.clone();
    let f = get("z2")?.scale(&Expr::int(-1));
    let br = |a: &Truncated, b: &Truncated| a.mul(b).sub(&b.mul(a));
    let triple = br(&h, &e).sub(&e.scale(&Expr::int(2))).is_zero_on_valid()
        && br(&h, &f).add(&f.scale(&Expr::int(2))).is_zero_on_valid()
        && br(&e, &f).sub(&h).is_zero_on_valid();
    let quarter = Expr::ratio(1, 4);
    let half = Expr::ratio(1, 2);
    let casimir_m = h.mul(&h).scale(&quarter).add(&e.mul(&f).add(&f.mul(&e)).scale(&half));
    let casimir = casimir_m.scalar_on_valid().map(|c| c.to_string());
    let j = Expr::ratio(lam, 2);
    let expected_casimir = (&j * &(&j + &Expr::one())).to_string();

    let d = basis.len();
    let col = |m: &Truncated, c: usize| -> Vec<Expr> { (0..d).map(|r| m.matrix[r][c].clone()).collect() };
    let only = |v: &[Expr], k: usize, val: &Expr| v.iter().enumerate().all(|(r, x)| if r == k { x == val } else { x.is_zero() });
    let top = Expr::int(lam);
    let highest_weight = col(&e, 0).iter().all(Expr::is_zero) && only(&col(&h, 0), 0, &top);
    let lowest_weight = col(&f, d - 1).iter().all(Expr::is_zero) && only(&col(&h, d - 1), d - 1, &(-&top));

    let generator = crate::specfile::parse_combination("z2 + z2c", ext.algebra.names(), &ext.law.table)
        .map_err(RepError::Input)?;
    let rotation = get("z2")?.add(get("z2c")?);
    let t = Sym::new("t");
    let mut table = ext.law.table.clone();
    table.free("t").map_err(|e| RepError::Input(e.to_string()))?;
    let p = |s: &str| parse_expr(s, &table).expect("curve expression");
    let curve: BTreeMap<Sym, Expr> = [
        ("z1", "(1 - t^2)/(1 + t^2)"),
        ("z2", "2*t/(1 + t^2)"),
        ("z1c", "(1 - t^2)/(1 + t^2)"),
        ("z2c", "2*t/(1 + t^2)"),
    ]
    .iter()
    .map(|(c, e)| (table.get(c).expect("coordinate").clone(), p(e)))
    .collect();
    let rotation_curve = rotation_curve_check(&ext, &generator[..generator.len() - 1], &curve, &t);
    let j_squared = rotation_power(&rotation.matrix, 2).map_err(RepError::Operator)?;
    let j_fourth = rotation_power(&rotation.matrix, 4).map_err(RepError::Operator)?;

    let operators = space
        .names
        .iter()
        .zip(&space.operators)
        .map(|(n, op)| (n.clone(), op.render()))
        .collect();
    let spin = if lam % 2 == 0 { (lam / 2).to_string() } else { format!("{lam}/2") };
    Ok(Su2Report {
        lambda: lam,
        spin,
        dimension: d,
        prefactor,
        operators,
        invariant,
        commutation_residuals,
        matrix_residuals,
        triple,
        casimir,
        expected_casimir,
        highest_weight,
        lowest_weight,
        rotation_curve,
        j_squared,
        j_fourth,
    })
}
