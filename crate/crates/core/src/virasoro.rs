//! Level-truncated Virasoro algebra, the Kac formula, and the Sugawara construction on a
//! truncated bosonic Fock space.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::extension::ExtendedAlgebra;
use crate::lie::LieAlgebra;
use crate::polarization::{self, PolarizationSummary};
use crate::symbolic::{Expr, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VirasoroError {
    #[error("mode cutoff must be at least 2, got {0}")]
    Cutoff(i64),
    #[error("modes ({n}, {m}) leave the truncation window |n|, |m|, |n+m| <= {cutoff}")]
    OutOfRange { n: i64, m: i64, cutoff: i64 },
    #[error("{0}")]
    Input(String),
}

/// Sign of the `c'` term in the central extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CentralSign {
    /// `-(i/12)(c n^3 - c' n)`.
    Minus,
    /// `-(i/12)(c n^3 + c' n)`, as in the string block.
    Plus,
}

/// `[l_n, l_m] = -i(n-m) l_{n+m} - (i/12)(c n^3 -+ c' n) delta_{n+m} Xi` for `|n|, |m|, |n+m| <= cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct VirasoroSpec {
    pub cutoff: i64,
    pub c: Expr,
    pub c_prime: Expr,
    pub sign: CentralSign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeBracket {
    pub mode: i64,
    pub coefficient: Expr,
    /// Coefficient of `Xi`.
    pub central: Expr,
}

pub fn mode_name(n: i64) -> String {
    if n < 0 {
        format!("lm{}", -n)
    } else {
        format!("l{n}")
    }
}

impl VirasoroSpec {
    pub fn new(cutoff: i64, c: Expr, c_prime: Expr) -> Result<Self, VirasoroError> {
        if cutoff < 2 {
            return Err(VirasoroError::Cutoff(cutoff));
        }
        Ok(VirasoroSpec { cutoff, c, c_prime, sign: CentralSign::Minus })
    }

    pub fn with_sign(mut self, sign: CentralSign) -> Self {
        self.sign = sign;
        self
    }

    fn in_window(&self, n: i64) -> bool {
        n.abs() <= self.cutoff
    }

    /// `-(i/12)(c n^3 -+ c' n)`.
    pub fn central_term(&self, n: i64) -> Expr {
        let cubic = &self.c * &Expr::int(n * n * n);
        let linear = &self.c_prime * &Expr::int(n);
        let inner = match self.sign {
            CentralSign::Minus => &cubic - &linear,
            CentralSign::Plus => &cubic + &linear,
        };
        &inner * &(&Expr::i() * &Expr::ratio(-1, 12))
    }

    pub fn bracket(&self, n: i64, m: i64) -> Result<ModeBracket, VirasoroError> {
        if !(self.in_window(n) && self.in_window(m) && self.in_window(n + m)) {
            return Err(VirasoroError::OutOfRange { n, m, cutoff: self.cutoff });
        }
        let coefficient = &Expr::i() * &Expr::int(m - n);
        let central = if n + m == 0 { self.central_term(n) } else { Expr::zero() };
        Ok(ModeBracket { mode: n + m, coefficient, central })
    }

    pub fn modes(&self) -> Vec<i64> {
        (-self.cutoff..=self.cutoff).collect()
    }

    fn index(&self, n: i64) -> usize {
        (n + self.cutoff) as usize
    }

    /// The truncated algebra on `l_{-N}, ..., l_N`; brackets leaving the window are dropped.
    pub fn algebra(&self) -> ExtendedAlgebra {
        let modes = self.modes();
        let names = modes.iter().map(|&n| mode_name(n)).collect();
        let mut base = LieAlgebra::zero(names);
        let dim = modes.len();
        let mut sigma = vec![vec![Expr::zero(); dim]; dim];
        for &n in &modes {
            for &m in &modes {
                if let Ok(b) = self.bracket(n, m) {
                    let mut v = vec![Expr::zero(); dim];
                    v[self.index(b.mode)] = b.coefficient;
                    base.c[self.index(n)][self.index(m)] = v;
                    sigma[self.index(n)][self.index(m)] = b.central;
                }
            }
        }
        ExtendedAlgebra::new(base, sigma)
    }

    /// Jacobi identity on every triple whose pairwise and total sums stay in the window.
    pub fn jacobi_residuals(&self) -> Vec<String> {
        let mut out = Vec::new();
        let modes = self.modes();
        // Element as (mode -> coefficient, Xi coefficient); brackets with Xi vanish.
        let nested = |a: i64, b: i64, c: i64| -> Option<(Expr, Expr, i64)> {
            let inner = self.bracket(b, c).ok()?;
            let outer = self.bracket(a, inner.mode).ok()?;
            Some((&inner.coefficient * &outer.coefficient, &inner.coefficient * &outer.central, outer.mode))
        };
        for &a in &modes {
            for &b in &modes {
                for &c in &modes {
                    let sums = [a + b, b + c, a + c, a + b + c];
                    if sums.iter().any(|s| !self.in_window(*s)) {
                        continue;
                    }
                    let mut mode_sum = Expr::zero();
                    let mut central_sum = Expr::zero();
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        if let Some((coef, central, _)) = nested(x, y, z) {
                            mode_sum = &mode_sum + &coef;
                            central_sum = &central_sum + &central;
                        }
                    }
                    if !mode_sum.is_zero() || !central_sum.is_zero() {
                        out.push(format!("({a}, {b}, {c})"));
                    }
                }
            }
        }
        out
    }
}

/// `r >= 1` with `c' = c r^2`, when it exists.
pub fn resonance(c: &Scalar, c_prime: &Scalar) -> Option<i64> {
    if c.is_zero() {
        return None;
    }
    let ratio = c_prime / c;
    let root = ratio.rational_sqrt()?;
    let r = root.as_integer()?;
    let r: i64 = r.to_string().parse().ok()?;
    let r = r.abs();
    (r >= 1).then_some(r)
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Characteristic {
    /// Modes with `c n^3 -+ c' n = 0` in the window.
    pub roots: Vec<i64>,
    /// Modes spanning the kernel of the two-form of the truncated algebra.
    pub kernel_modes: Vec<i64>,
    pub closed: bool,
    pub routes_agree: bool,
}

pub fn characteristic_modes(spec: &VirasoroSpec) -> Characteristic {
    let roots: Vec<i64> = spec.modes().into_iter().filter(|&n| spec.central_term(n).is_zero()).collect();
    let alg = spec.algebra();
    let chars = polarization::characteristic_subalgebra(&alg);
    let mut kernel_modes: Vec<i64> = Vec::new();
    let mut single_modes = true;
    for v in &chars.basis {
        let support: Vec<usize> = (0..alg.dim()).filter(|&k| !v[k].is_zero()).collect();
        match support.as_slice() {
            [k] => kernel_modes.push(*k as i64 - spec.cutoff),
            _ => single_modes = false,
        }
    }
    kernel_modes.sort();
    let routes_agree = single_modes && kernel_modes == roots;
    Characteristic { roots, kernel_modes, closed: chars.closed, routes_agree }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct VirasoroPolarizations {
    /// `<l_n : n <= 0>`.
    pub nonpositive: PolarizationSummary,
    /// `<l_{kr} : k >= -1>`.
    pub resonant: Option<PolarizationSummary>,
}

pub fn virasoro_polarizations(spec: &VirasoroSpec, r: Option<i64>) -> Result<VirasoroPolarizations, VirasoroError> {
    let alg = spec.algebra();
    let dim = alg.dim();
    let unit = |n: i64| -> Vec<Expr> {
        let mut v = vec![Expr::zero(); dim + 1];
        v[spec.index(n)] = Expr::one();
        v
    };
    let classify = |modes: Vec<i64>| -> Result<PolarizationSummary, VirasoroError> {
        let basis: Vec<Vec<Expr>> = modes.into_iter().map(unit).collect();
        if !polarization::is_subalgebra(&alg, &basis) {
            return Err(VirasoroError::Input("candidate is not a subalgebra of the truncated algebra".into()));
        }
        polarization::classify(&alg, &basis)
            .map(|p| p.summary(&alg))
            .map_err(|e| VirasoroError::Input(format!("{e:?}")))
    };
    let nonpositive = classify((-spec.cutoff..=0).collect())?;
    let resonant = match r {
        Some(r) if r >= 1 && r <= spec.cutoff => {
            Some(classify((-1..).map(|k| k * r).take_while(|&n| n <= spec.cutoff).collect())?)
        }
        _ => None,
    };
    Ok(VirasoroPolarizations { nonpositive, resonant })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> Scalar {
        match self {
            Branch::Plus => Scalar::one(),
            Branch::Minus => Scalar::from_int(-1),
        }
    }
}

/// `h = (1/48)(13 - c)(k^2 + s^2) +- (c^2 - 26c + 25)(k^2 - s^2) - 24ks - 2 + 2c`, read term by term.
pub fn kac_h(c: &Scalar, k: i64, s: i64, branch: Branch) -> Scalar {
    let int = Scalar::from_int;
    let (k2, s2) = (int(k * k), int(s * s));
    let first = &(&Scalar::from_ratio(1, 48) * &(&int(13) - c)) * &(&k2 + &s2);
    let quadratic = &(&(c * c) - &(&int(26) * c)) + &int(25);
    let second = &(&branch.sign() * &quadratic) * &(&k2 - &s2);
    let rest = &(&int(-24 * k * s) - &int(2)) + &(&int(2) * c);
    &(&first + &second) + &rest
}

/// The conventional form `((13 - c)(k^2 + s^2) +- sqrt((c - 1)(c - 25))(k^2 - s^2) - 24ks - 2 + 2c)/48`,
/// for cross-checking; `None` when the square root is irrational.
pub fn kac_h_conventional(c: &Scalar, k: i64, s: i64, branch: Branch) -> Option<Scalar> {
    let int = Scalar::from_int;
    let disc = &(c - &int(1)) * &(c - &int(25));
    let root = disc.rational_sqrt()?;
    let (k2, s2) = (int(k * k), int(s * s));
    let sum = &(&(&(&int(13) - c) * &(&k2 + &s2)) + &(&(&branch.sign() * &root) * &(&k2 - &s2)))
        + &(&(&int(-24 * k * s) - &int(2)) + &(&int(2) * c));
    Some(&sum * &Scalar::from_ratio(1, 48))
}

/// `h = -c (r^2 - 1)/24`, the value of `(c - c')/24` on `c' = c r^2`.
pub fn classical_anomaly_line(c: &Scalar, r: i64) -> Scalar {
    &(-c) * &Scalar::from_ratio(r * r - 1, 24)
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct KacScan {
    pub c: String,
    pub r: i64,
    pub classical_h: String,
    /// `(k, s, branch)` with `kac_h` equal to the classical value.
    pub matches: Vec<(i64, i64, Branch)>,
    /// `(k, s)` where both branches coincide.
    pub coincident: Vec<(i64, i64)>,
    pub table: Vec<KacEntry>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct KacEntry {
    pub k: i64,
    pub s: i64,
    pub plus: String,
    pub minus: String,
}

/// Evaluates `kac_h` on `1 <= k, s <= max` and compares with the classical line.
pub fn kac_scan(c: &Scalar, r: i64, max: i64) -> KacScan {
    let line = classical_anomaly_line(c, r);
    let mut matches = Vec::new();
    let mut coincident = Vec::new();
    let mut table = Vec::new();
    for k in 1..=max {
        for s in 1..=max {
            let plus = kac_h(c, k, s, Branch::Plus);
            let minus = kac_h(c, k, s, Branch::Minus);
            if plus == minus {
                coincident.push((k, s));
            }
            for (b, h) in [(Branch::Plus, &plus), (Branch::Minus, &minus)] {
                if *h == line {
                    matches.push((k, s, b));
                }
            }
            table.push(KacEntry { k, s, plus: plus.to_string(), minus: minus.to_string() });
        }
    }
    KacScan { c: c.to_string(), r, classical_h: line.to_string(), matches, coincident, table }
}

/// Occupation numbers `(mode n > 0, direction mu) -> count`.
pub type Occupation = BTreeMap<(u32, usize), u32>;
/// Finite combination of occupation states.
pub type FockVector = BTreeMap<Occupation, Scalar>;

fn level_of(o: &Occupation) -> u32 {
    o.iter().map(|((n, _), k)| n * k).sum()
}

fn add_to(v: &mut FockVector, o: Occupation, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(o.clone()).or_insert_with(Scalar::zero);
    *e += &c;
    if e.is_zero() {
        v.remove(&o);
    }
}

/// Bosonic Fock space of `d` oscillator families with `[a^mu_m, a^nu_n] = m eta^{mu nu} delta_{m+n}`,
/// `eta = diag(-1, 1, ..., 1)`, truncated at total level `level`.
#[derive(Debug, Clone)]
pub struct FockSpace {
    pub dimension: usize,
    pub level: u32,
    /// Eigenvalues of the zero modes `a^mu_0`.
    pub momentum: Vec<Scalar>,
    pub states: Vec<Occupation>,
    index: BTreeMap<Occupation, usize>,
}

fn eta(mu: usize) -> Scalar {
    if mu == 0 {
        Scalar::from_int(-1)
    } else {
        Scalar::one()
    }
}

impl FockSpace {
    pub fn new(dimension: usize, level: u32) -> Result<Self, VirasoroError> {
        Self::with_momentum(dimension, level, vec![Scalar::zero(); dimension])
    }

    pub fn with_momentum(dimension: usize, level: u32, momentum: Vec<Scalar>) -> Result<Self, VirasoroError> {
        if dimension == 0 || momentum.len() != dimension {
            return Err(VirasoroError::Input("momentum must have one entry per direction".into()));
        }
        let mut states = vec![Occupation::new()];
        // Extend by (mode, mu) slots in increasing order to enumerate each multiset once.
        for n in 1..=level {
            for mu in 0..dimension {
                let mut grown = Vec::new();
                for s in &states {
                    let mut k = 1;
                    while level_of(s) + n * k <= level {
                        let mut t = s.clone();
                        t.insert((n, mu), k);
                        grown.push(t);
                        k += 1;
                    }
                }
                states.extend(grown);
            }
        }
        states.sort_by_key(|s| (level_of(s), s.clone()));
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(FockSpace { dimension, level, momentum, states, index })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state_level(&self, i: usize) -> u32 {
        level_of(&self.states[i])
    }

    /// Number of states at each level `0..=level`.
    pub fn sector_dimensions(&self) -> Vec<usize> {
        let mut out = vec![0; self.level as usize + 1];
        for s in &self.states {
            out[level_of(s) as usize] += 1;
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> FockVector {
        [(self.states[i].clone(), Scalar::one())].into_iter().collect()
    }

    /// `a^mu_n` on the untruncated space.
    pub fn oscillator(&self, mu: usize, n: i64, v: &FockVector) -> FockVector {
        let mut out = FockVector::new();
        for (o, c) in v {
            match n.cmp(&0) {
                std::cmp::Ordering::Equal => add_to(&mut out, o.clone(), c * &self.momentum[mu]),
                std::cmp::Ordering::Less => {
                    let mut t = o.clone();
                    *t.entry(((-n) as u32, mu)).or_insert(0) += 1;
                    add_to(&mut out, t, c.clone());
                }
                std::cmp::Ordering::Greater => {
                    let slot = (n as u32, mu);
                    let Some(&k) = o.get(&slot) else { continue };
                    let mut t = o.clone();
                    if k == 1 {
                        t.remove(&slot);
                    } else {
                        t.insert(slot, k - 1);
                    }
                    let f = &(&Scalar::from_int(n) * &eta(mu)) * &Scalar::from_int(k as i64);
                    add_to(&mut out, t, c * &f);
                }
            }
        }
        out
    }

    /// `L_k = (1/2) sum_n eta_{mu nu} :a^mu_{k-n} a^nu_n:` with positive modes to the right.
    pub fn sugawara(&self, k: i64, v: &FockVector) -> FockVector {
        let mut out = FockVector::new();
        let top = v.keys().map(level_of).max().unwrap_or(0) as i64;
        let bound = top + k.abs() + 1;
        let half = Scalar::from_ratio(1, 2);
        for n in -bound..=bound {
            let (p, q) = (k - n, n);
            let (left, right) = if p > 0 && q < 0 { (q, p) } else { (p, q) };
            for mu in 0..self.dimension {
                let w = self.oscillator(mu, left, &self.oscillator(mu, right, v));
                let f = &half * &eta(mu);
                for (o, c) in w {
                    add_to(&mut out, o, &c * &f);
                }
            }
        }
        out
    }

    /// Matrix of an operator on the truncated basis; a column is invalid when its image
    /// reaches beyond the level cutoff.
    pub fn matrix(&self, op: impl Fn(&FockVector) -> FockVector) -> SparseTruncated {
        let d = self.dim();
        let mut cols = Vec::with_capacity(d);
        let mut valid = Vec::with_capacity(d);
        for j in 0..d {
            let image = op(&self.basis_vector(j));
            let mut col = BTreeMap::new();
            let mut ok = true;
            for (o, c) in image {
                match self.index.get(&o) {
                    Some(&i) => {
                        col.insert(i, c);
                    }
                    None => ok = false,
                }
            }
            cols.push(col);
            valid.push(ok);
        }
        SparseTruncated { cols, valid }
    }
}

/// Sparse column-major matrix with exactness flags per column.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseTruncated {
    pub cols: Vec<BTreeMap<usize, Scalar>>,
    pub valid: Vec<bool>,
}

impl SparseTruncated {
    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    /// Column `c` of `self * o` is exact when `o` is exact there and `self` is exact on
    /// every row `o` reaches.
    pub fn mul(&self, o: &SparseTruncated) -> SparseTruncated {
        let mut cols = Vec::with_capacity(o.dim());
        let mut valid = Vec::with_capacity(o.dim());
        for (c, col) in o.cols.iter().enumerate() {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            let mut ok = o.valid[c];
            for (r, x) in col {
                ok &= self.valid[*r];
                for (r2, y) in &self.cols[*r] {
                    let e = acc.entry(*r2).or_insert_with(Scalar::zero);
                    *e += &(y * x);
                }
            }
            acc.retain(|_, v| !v.is_zero());
            cols.push(acc);
            valid.push(ok);
        }
        SparseTruncated { cols, valid }
    }

    pub fn combine(&self, o: &SparseTruncated, scale: &Scalar) -> SparseTruncated {
        let mut cols = self.cols.clone();
        for (c, col) in o.cols.iter().enumerate() {
            for (r, x) in col {
                let e = cols[c].entry(*r).or_insert_with(Scalar::zero);
                *e += &(x * scale);
            }
            cols[c].retain(|_, v| !v.is_zero());
        }
        let valid = self.valid.iter().zip(&o.valid).map(|(a, b)| *a && *b).collect();
        SparseTruncated { cols, valid }
    }

    pub fn commutator(&self, o: &SparseTruncated) -> SparseTruncated {
        self.mul(o).combine(&o.mul(self), &Scalar::from_int(-1))
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    /// The common value when the matrix is scalar on its exact columns.
    pub fn scalar_on_valid(&self) -> Option<Scalar> {
        let mut value: Option<Scalar> = None;
        for (c, col) in self.cols.iter().enumerate().filter(|(c, _)| self.valid[*c]) {
            if col.keys().any(|r| *r != c) {
                return None;
            }
            let d = col.get(&c).cloned().unwrap_or_else(Scalar::zero);
            match &value {
                None => value = Some(d),
                Some(v) if *v == d => {}
                Some(_) => return None,
            }
        }
        value
    }
}

/// `[L_m, L_n] - (m - n) L_{m+n}` measured on the exact columns.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SugawaraCommutator {
    pub m: i64,
    pub n: i64,
    pub checked_columns: usize,
    /// Scalar remainder, `None` when the remainder is not a multiple of the identity.
    pub central: Option<String>,
    pub expected: String,
}

impl SugawaraCommutator {
    pub fn holds(&self) -> bool {
        self.checked_columns > 0 && self.central.as_deref() == Some(self.expected.as_str())
    }
}

/// `(d/12)(m^3 - m) delta_{m+n}`.
pub fn expected_central(d: usize, m: i64, n: i64) -> Scalar {
    if m + n != 0 {
        return Scalar::zero();
    }
    &Scalar::from_int(d as i64) * &Scalar::from_ratio(m * m * m - m, 12)
}

/// Matrices of `L_k` for `|k| <= max`.
pub fn sugawara_matrices(space: &FockSpace, max: i64) -> BTreeMap<i64, SparseTruncated> {
    (-max..=max).map(|k| (k, space.matrix(|v| space.sugawara(k, v)))).collect()
}

/// Exact columns of `[L_m, L_n] - (m - n) L_{m+n}` and its scalar value there.
fn remainder(mats: &BTreeMap<i64, SparseTruncated>, m: i64, n: i64) -> (usize, Option<Scalar>) {
    let r = mats[&m].commutator(&mats[&n]).combine(&mats[&(m + n)], &Scalar::from_int(n - m));
    (r.valid_count(), r.scalar_on_valid())
}

fn commutator_entry(space: &FockSpace, mats: &BTreeMap<i64, SparseTruncated>, m: i64, n: i64) -> SugawaraCommutator {
    let (checked_columns, central) = remainder(mats, m, n);
    SugawaraCommutator {
        m,
        n,
        checked_columns,
        central: central.map(|s| s.to_string()),
        expected: expected_central(space.dimension, m, n).to_string(),
    }
}

pub fn sugawara_commutator(space: &FockSpace, m: i64, n: i64) -> SugawaraCommutator {
    let max = m.abs().max(n.abs()).max((m + n).abs());
    commutator_entry(space, &sugawara_matrices(space, max), m, n)
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SugawaraReport {
    pub dimension: usize,
    pub level: u32,
    pub states: usize,
    pub sector_dimensions: Vec<usize>,
    pub commutators: Vec<SugawaraCommutator>,
    /// `[L_k, a^mu_m] = -m a^mu_{k+m}` for `|k|, |m| <= 2` on every basis state, untruncated.
    pub oscillator_action: bool,
    /// `L_0` equals `level + (1/2) eta(p, p)` on every basis state.
    pub level_operator: bool,
}

impl SugawaraReport {
    pub fn passed(&self) -> bool {
        self.commutators.iter().all(SugawaraCommutator::holds) && self.oscillator_action && self.level_operator
    }
}

pub fn sugawara_report(space: &FockSpace, max_mode: i64) -> SugawaraReport {
    let mats = sugawara_matrices(space, 2 * max_mode);
    let mut commutators = Vec::new();
    for m in -max_mode..=max_mode {
        for n in m + 1..=max_mode {
            commutators.push(commutator_entry(space, &mats, m, n));
        }
    }
    let mut oscillator_action = true;
    for i in 0..space.dim() {
        let v = space.basis_vector(i);
        for k in -2..=2i64 {
            let lv = space.sugawara(k, &v);
            for m in -2..=2i64 {
                for mu in 0..space.dimension {
                    let lhs = sub(&space.sugawara(k, &space.oscillator(mu, m, &v)), &space.oscillator(mu, m, &lv));
                    let rhs = scale(&space.oscillator(mu, k + m, &v), &Scalar::from_int(-m));
                    oscillator_action &= lhs == rhs;
                }
            }
        }
    }
    let p2 = space.momentum.iter().enumerate().fold(Scalar::zero(), |acc, (mu, p)| &acc + &(&eta(mu) * &(p * p)));
    let zero_point = &Scalar::from_ratio(1, 2) * &p2;
    let level_operator = (0..space.dim()).all(|i| {
        let want = &Scalar::from_int(space.state_level(i) as i64) + &zero_point;
        space.sugawara(0, &space.basis_vector(i)) == scale(&space.basis_vector(i), &want)
    });
    SugawaraReport {
        dimension: space.dimension,
        level: space.level,
        states: space.dim(),
        sector_dimensions: space.sector_dimensions(),
        commutators,
        oscillator_action,
        level_operator,
    }
}

fn scale(v: &FockVector, c: &Scalar) -> FockVector {
    let mut out = FockVector::new();
    for (o, x) in v {
        add_to(&mut out, o.clone(), x * c);
    }
    out
}

fn sub(a: &FockVector, b: &FockVector) -> FockVector {
    let mut out = a.clone();
    for (o, x) in b {
        add_to(&mut out, o.clone(), -x.clone());
    }
    out
}

/// Central remainder of `[L_m, L_{-m}]` for `d = 1..=max_d` and its slope in `d`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CentralSlope {
    pub mode: i64,
    pub level: u32,
    pub values: Vec<(usize, Option<String>)>,
    /// Common ratio `value/d` when every measured value is `d` times the same rational.
    pub slope: Option<String>,
    pub expected_slope: String,
}

impl CentralSlope {
    pub fn holds(&self) -> bool {
        self.slope.as_deref() == Some(self.expected_slope.as_str())
    }
}

pub fn central_slope(mode: i64, level: u32, max_d: usize) -> Result<CentralSlope, VirasoroError> {
    let mut values = Vec::new();
    let mut ratios: Vec<Option<Scalar>> = Vec::new();
    for d in 1..=max_d {
        let space = FockSpace::new(d, level)?;
        let (checked, value) = remainder(&sugawara_matrices(&space, mode.abs()), mode, -mode);
        let value = value.filter(|_| checked > 0);
        ratios.push(value.as_ref().map(|v| v / &Scalar::from_int(d as i64)));
        values.push((d, value.map(|v| v.to_string())));
    }
    let slope = match ratios.first() {
        Some(Some(first)) if ratios.iter().all(|r| r.as_ref() == Some(first)) => Some(first.to_string()),
        _ => None,
    };
    Ok(CentralSlope {
        mode,
        level,
        values,
        slope,
        expected_slope: Scalar::from_ratio(mode * mode * mode - mode, 12).to_string(),
    })
}

/// Checks on the Fock space obtained from the polarization `<a_{n<=0}, l_{n<=0}>`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct StringPolarization {
    pub dimension: usize,
    pub level: u32,
    /// Vacuum is killed by every `a^mu_{n>0}` and `L_{k>0}`.
    pub vacuum_annihilated: bool,
    pub sector_dimensions: Vec<usize>,
    pub partition_counts: Vec<usize>,
    /// `L_{+1}` lowers the level by exactly one.
    pub lowering_grading: bool,
}

impl StringPolarization {
    pub fn passed(&self) -> bool {
        self.vacuum_annihilated && self.sector_dimensions == self.partition_counts && self.lowering_grading
    }
}

/// Coefficients of `prod_{n>=1} (1 - q^n)^{-d}` up to `q^level`.
pub fn colored_partitions(d: usize, level: u32) -> Vec<usize> {
    let len = level as usize + 1;
    let mut series = vec![0usize; len];
    series[0] = 1;
    for n in 1..len {
        for _ in 0..d {
            // Multiply by 1/(1 - q^n).
            for k in n..len {
                series[k] += series[k - n];
            }
        }
    }
    series
}

pub fn string_polarization_check(d: usize, level: u32) -> Result<StringPolarization, VirasoroError> {
    let space = FockSpace::new(d, level)?;
    let vacuum = space.basis_vector(0);
    let mut vacuum_annihilated = true;
    for n in 1..=level as i64 + 1 {
        for mu in 0..d {
            vacuum_annihilated &= space.oscillator(mu, n, &vacuum).is_empty();
        }
        vacuum_annihilated &= space.sugawara(n, &vacuum).is_empty();
    }
    let lowering_grading = (0..space.dim()).all(|i| {
        let l = space.state_level(i);
        space.sugawara(1, &space.basis_vector(i)).keys().all(|o| level_of(o) + 1 == l)
    });
    Ok(StringPolarization {
        dimension: d,
        level,
        vacuum_annihilated,
        sector_dimensions: space.sector_dimensions(),
        partition_counts: colored_partitions(d, level),
        lowering_grading,
    })
}

/// Inputs for a full Virasoro run; `c_prime` defaults to `c r^2` when `r` is given, else `c`.
#[derive(Debug, Clone)]
pub struct VirasoroRequest {
    pub cutoff: i64,
    pub c: Scalar,
    pub c_prime: Option<Scalar>,
    pub r: Option<i64>,
    pub kac_max: i64,
    /// Fock dimension and level cutoff for the Sugawara checks.
    pub fock: Option<(usize, u32)>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct VirasoroReport {
    pub cutoff: i64,
    pub c: String,
    pub c_prime: String,
    pub resonance: Option<i64>,
    pub characteristic: Characteristic,
    pub expected_modes: Vec<i64>,
    pub modes_match: bool,
    pub jacobi_residuals: Vec<String>,
    pub polarizations: VirasoroPolarizations,
    pub classical_h: Option<String>,
    pub kac: Option<KacScan>,
    pub sugawara: Option<SugawaraReport>,
    pub central_slope: Option<CentralSlope>,
    pub string_polarization: Option<StringPolarization>,
}

impl VirasoroReport {
    pub fn passed(&self) -> bool {
        self.modes_match
            && self.characteristic.routes_agree
            && self.jacobi_residuals.is_empty()
            && self.sugawara.as_ref().is_none_or(SugawaraReport::passed)
            && self.central_slope.as_ref().is_none_or(CentralSlope::holds)
            && self.string_polarization.as_ref().is_none_or(StringPolarization::passed)
    }
}

/// For the `c n^3 - c' n` convention: `{0, +-r}` on resonance, every mode when `c = c' = 0`,
/// otherwise `{0}`.
pub fn expected_characteristic(spec: &VirasoroSpec, c: &Scalar, c_prime: &Scalar) -> Vec<i64> {
    if c.is_zero() && c_prime.is_zero() {
        return spec.modes();
    }
    match resonance(c, c_prime) {
        Some(r) => [-r, 0, r].into_iter().filter(|n| spec.in_window(*n)).collect(),
        None => vec![0],
    }
}

pub fn virasoro_report(req: &VirasoroRequest) -> Result<VirasoroReport, VirasoroError> {
    let c_prime = match (&req.c_prime, req.r) {
        (Some(cp), _) => cp.clone(),
        (None, Some(r)) => &req.c * &Scalar::from_int(r * r),
        (None, None) => req.c.clone(),
    };
    let spec = VirasoroSpec::new(req.cutoff, Expr::constant(req.c.clone()), Expr::constant(c_prime.clone()))?;
    let characteristic = characteristic_modes(&spec);
    let expected_modes = expected_characteristic(&spec, &req.c, &c_prime);
    let modes_match = characteristic.roots == expected_modes;
    let resonance = resonance(&req.c, &c_prime);
    let polarizations = virasoro_polarizations(&spec, resonance.or(req.r))?;
    let (sugawara, central_slope, string_polarization) = match req.fock {
        Some((d, level)) => {
            let space = FockSpace::new(d, level)?;
            (
                Some(sugawara_report(&space, 2)),
                Some(self::central_slope(2, level, d)?),
                Some(string_polarization_check(d, level)?),
            )
        }
        None => (None, None, None),
    };
    Ok(VirasoroReport {
        cutoff: req.cutoff,
        c: req.c.to_string(),
        c_prime: c_prime.to_string(),
        resonance,
        characteristic,
        expected_modes,
        modes_match,
        jacobi_residuals: spec.jacobi_residuals(),
        polarizations,
        classical_h: req.r.map(|r| classical_anomaly_line(&req.c, r).to_string()),
        kac: req.r.map(|r| kac_scan(&req.c, r, req.kac_max)),
        sugawara,
        central_slope,
        string_polarization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(c: i64, cp: i64) -> VirasoroSpec {
        VirasoroSpec::new(6, Expr::int(c), Expr::int(cp)).unwrap()
    }

    #[test]
    fn brackets() {
        let s = spec(1, 4);
        let b = s.bracket(2, -2).unwrap();
        assert_eq!(b.mode, 0);
        assert_eq!(b.coefficient, &Expr::i() * &Expr::int(-4));
        assert!(b.central.is_zero());
        let b = s.bracket(0, 3).unwrap();
        assert_eq!(b.coefficient, &Expr::i() * &Expr::int(3));
        let b = spec(3, 1).bracket(1, -1).unwrap();
        assert_eq!(b.central, &Expr::i() * &Expr::ratio(-2, 12));
        assert!(s.bracket(4, 4).is_err());
        assert!(VirasoroSpec::new(1, Expr::one(), Expr::one()).is_err());
    }

    #[test]
    fn truncated_jacobi() {
        assert!(spec(1, 4).jacobi_residuals().is_empty());
        assert!(spec(2, 7).with_sign(CentralSign::Plus).jacobi_residuals().is_empty());
    }

    #[test]
    fn characteristic_sets() {
        let ch = characteristic_modes(&spec(1, 4));
        assert_eq!(ch.roots, vec![-2, 0, 2]);
        assert!(ch.routes_agree && ch.closed);
        assert_eq!(characteristic_modes(&spec(1, 1)).roots, vec![-1, 0, 1]);
        assert_eq!(characteristic_modes(&spec(1, 3)).roots, vec![0]);
        assert_eq!(characteristic_modes(&spec(0, 0)).roots.len(), 13);
    }

    #[test]
    fn resonance_detection() {
        assert_eq!(resonance(&Scalar::from_int(2), &Scalar::from_int(18)), Some(3));
        assert_eq!(resonance(&Scalar::from_int(1), &Scalar::from_int(3)), None);
    }

    #[test]
    fn polarizations_of_the_resonant_case() {
        let p = virasoro_polarizations(&spec(1, 4), Some(2)).unwrap();
        assert!(!p.nonpositive.full && p.nonpositive.symplectic);
        let r = p.resonant.unwrap();
        assert!(r.full && !r.symplectic);
    }

    #[test]
    fn kac_branches() {
        let c = Scalar::from_ratio(1, 2);
        assert_eq!(kac_h(&c, 2, 2, Branch::Plus), kac_h(&c, 2, 2, Branch::Minus));
        for c in [1, 25] {
            let c = Scalar::from_int(c);
            assert_eq!(kac_h(&c, 3, 1, Branch::Plus), kac_h(&c, 3, 1, Branch::Minus));
        }
        // (13 - 1)(2)/48 - 24 - 2 + 2
        assert_eq!(kac_h(&Scalar::one(), 1, 1, Branch::Plus), Scalar::from_ratio(-47, 2));
        assert_eq!(classical_anomaly_line(&Scalar::from_int(24), 2), Scalar::from_int(-3));
        assert!(classical_anomaly_line(&Scalar::from_int(5), 1).is_zero());
        // Conventional form at c = 1: h_{1,1} = 0, h_{2,1} = 1/4.
        assert_eq!(kac_h_conventional(&Scalar::one(), 1, 1, Branch::Plus), Some(Scalar::zero()));
        assert_eq!(kac_h_conventional(&Scalar::one(), 2, 1, Branch::Plus), Some(Scalar::from_ratio(1, 4)));
    }

    #[test]
    fn fock_sectors() {
        let f = FockSpace::new(4, 4).unwrap();
        assert_eq!(f.sector_dimensions(), vec![1, 4, 14, 40, 105]);
        assert_eq!(colored_partitions(4, 4), vec![1, 4, 14, 40, 105]);
        assert_eq!(FockSpace::new(1, 2).unwrap().sector_dimensions(), vec![1, 1, 2]);
    }

    #[test]
    fn full_run() {
        let req = VirasoroRequest { cutoff: 6, c: Scalar::one(), c_prime: None, r: Some(2), kac_max: 4, fock: Some((1, 3)) };
        let r = virasoro_report(&req).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.characteristic.roots, vec![-2, 0, 2]);
        assert_eq!(r.classical_h.as_deref(), Some("-1/8"));
    }

    #[test]
    fn sugawara_small() {
        let f = FockSpace::new(2, 3).unwrap();
        let r = sugawara_report(&f, 2);
        assert!(r.passed(), "{r:?}");
        let s = central_slope(2, 4, 3).unwrap();
        assert!(s.holds(), "{s:?}");
        assert!(string_polarization_check(2, 3).unwrap().passed());
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    fn rational() -> impl Strategy<Value = Scalar> {
        (-40i64..=40, 1i64..=7).prop_map(|(n, d)| Scalar::from_ratio(n, d))
    }

    fn nonzero_rational() -> impl Strategy<Value = Scalar> {
        rational().prop_filter("nonzero", |c| !c.is_zero())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn truncated_brackets_satisfy_jacobi(c in rational(), cp in rational(), plus in any::<bool>()) {
            let sign = if plus { CentralSign::Plus } else { CentralSign::Minus };
            let spec = VirasoroSpec::new(4, Expr::constant(c), Expr::constant(cp)).unwrap().with_sign(sign);
            prop_assert!(spec.jacobi_residuals().is_empty());
        }

        #[test]
        fn resonant_line_has_three_characteristic_modes(c in nonzero_rational(), r in 1i64..=3) {
            let cp = &c * &Scalar::from_int(r * r);
            let spec = VirasoroSpec::new(5, Expr::constant(c.clone()), Expr::constant(cp.clone())).unwrap();
            let ch = characteristic_modes(&spec);
            prop_assert_eq!(&ch.roots, &vec![-r, 0, r]);
            prop_assert_eq!(&ch.kernel_modes, &ch.roots);
            prop_assert!(ch.closed && ch.routes_agree);
            prop_assert_eq!(resonance(&c, &cp), Some(r));
        }

        #[test]
        fn off_the_line_only_the_zero_mode_survives(c in nonzero_rational(), r in 0i64..=3) {
            // n^2 = r^2 + 1/2 has no integer solution.
            let cp = &c * &(&Scalar::from_int(r * r) + &Scalar::from_ratio(1, 2));
            let spec = VirasoroSpec::new(5, Expr::constant(c.clone()), Expr::constant(cp.clone())).unwrap();
            let ch = characteristic_modes(&spec);
            prop_assert_eq!(&ch.roots, &vec![0]);
            prop_assert_eq!(resonance(&c, &cp), None);
        }

        #[test]
        fn kac_branches_meet_on_the_diagonal(c in rational(), k in 1i64..=6) {
            prop_assert_eq!(kac_h(&c, k, k, Branch::Plus), kac_h(&c, k, k, Branch::Minus));
        }

        #[test]
        fn kac_branches_meet_where_the_discriminant_vanishes(k in 1i64..=6, s in 1i64..=6, at_25 in any::<bool>()) {
            let c = Scalar::from_int(if at_25 { 25 } else { 1 });
            prop_assert_eq!(kac_h(&c, k, s, Branch::Plus), kac_h(&c, k, s, Branch::Minus));
            prop_assert_eq!(
                kac_h_conventional(&c, k, s, Branch::Plus),
                kac_h_conventional(&c, k, s, Branch::Minus)
            );
        }

        #[test]
        fn classical_line_is_the_anomaly_difference(c in rational(), r in 0i64..=5) {
            let cp = &c * &Scalar::from_int(r * r);
            let diff = &(&c - &cp) * &Scalar::from_ratio(1, 24);
            prop_assert_eq!(classical_anomaly_line(&c, r), diff);
        }

        #[test]
        fn fock_sectors_count_colored_partitions(d in 1usize..=3, level in 0u32..=4) {
            let space = FockSpace::new(d, level).unwrap();
            prop_assert_eq!(space.sector_dimensions(), colored_partitions(d, level));
        }
    }
}
