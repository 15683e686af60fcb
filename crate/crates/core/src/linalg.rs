//! Exact dense linear algebra over a field.
//!
//! Pivoting treats any element that is not identically zero as invertible, so ranks over
//! expressions are generic ranks (parameters assumed away from special values).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::symbolic::{Expr, Scalar};

pub trait Field: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// `self / o` for nonzero `o`.
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }
}

impl Field for Expr {
    fn zero() -> Self {
        Expr::zero()
    }
    fn one() -> Self {
        Expr::one()
    }
    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self.checked_div(o).expect("nonzero pivot")
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
}

pub type Matrix<F> = Vec<Vec<F>>;

pub fn zeros<F: Field>(rows: usize, cols: usize) -> Matrix<F> {
    vec![vec![F::zero(); cols]; rows]
}

pub fn identity<F: Field>(n: usize) -> Matrix<F> {
    let mut m = zeros(n, n);
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = F::one();
    }
    m
}

pub fn transpose<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn matmul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = F::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = acc.add(&row[k].mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_add<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.add(y)).collect()).collect()
}

pub fn mat_sub<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.sub(y)).collect()).collect()
}

pub fn mat_scale<F: Field>(a: &Matrix<F>, c: &F) -> Matrix<F> {
    a.iter().map(|r| r.iter().map(|x| x.mul(c)).collect()).collect()
}

pub fn is_zero_matrix<F: Field>(a: &Matrix<F>) -> bool {
    a.iter().all(|r| r.iter().all(Field::is_zero))
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = F::one().div(&m[r][c]);
        if inv != F::one() {
            for x in m[r].iter_mut() {
                if !x.is_zero() {
                    *x = x.mul(&inv);
                }
            }
        }
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.sub(&f.mul(p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut w = m.clone();
    rref(&mut w).len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace<F: Field>(m: &Matrix<F>, cols: usize) -> Vec<Vec<F>> {
    let mut w = m.clone();
    let pivots = rref(&mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = w[r][f].neg();
            }
            v
        })
        .collect()
}

pub fn inverse<F: Field>(m: &Matrix<F>) -> Option<Matrix<F>> {
    let n = m.len();
    let mut aug: Matrix<F> = m
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if j == k { F::one() } else { F::zero() }));
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// One solution of `m x = b`, or `None` when inconsistent.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Matrix<F> =
        m.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

/// Row-reduced basis of the span of `vectors` (a canonical key for the subspace).
pub fn span_basis<F: Field>(vectors: &[Vec<F>]) -> Vec<Vec<F>> {
    let mut w = vectors.to_vec();
    let n = rref(&mut w).len();
    w.truncate(n);
    w
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span<F: Field>(basis: &[Vec<F>], v: &[F]) -> bool {
    let mut w = basis.to_vec();
    let r0 = rref(&mut w).len();
    w.push(v.to_vec());
    rref(&mut w).len() == r0
}

/// Characteristic polynomial `det(t I - m)`, coefficients from constant term upward
/// (Faddeev–LeVerrier).
pub fn char_poly(m: &Matrix<Scalar>) -> Vec<Scalar> {
    let n = m.len();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut mk: Matrix<Scalar> = zeros(n, n);
    for k in 1..=n {
        let mut next = matmul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = &row[i] + &coeffs[n - k + 1];
        }
        mk = next;
        let am = matmul(m, &mk);
        let tr: Scalar = (0..n).fold(Scalar::zero(), |acc, i| &acc + &am[i][i]);
        coeffs[n - k] = -(&tr / &Scalar::from_int(k as i64));
    }
    coeffs
}

pub fn poly_eval(coeffs: &[Scalar], t: &Scalar) -> Scalar {
    coeffs.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * t) + c)
}

/// Divides by `(t - r)`; `r` must be a root.
fn deflate(coeffs: &[Scalar], r: &Scalar) -> Vec<Scalar> {
    let n = coeffs.len() - 1;
    let mut out = vec![Scalar::zero(); n];
    let mut carry = Scalar::zero();
    for k in (1..=n).rev() {
        carry = &coeffs[k] + &(&carry * r);
        out[k - 1] = carry.clone();
    }
    out
}

const DIVISOR_LIMIT: u64 = 1 << 40;

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.magnitude().to_u64_digits();
    let n = match n.as_slice() {
        [] => return Some(vec![]),
        [x] if *x <= DIVISOR_LIMIT => *x,
        _ => return None,
    };
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    Some(out)
}

/// Rational roots of a polynomial with rational coefficients (rational root theorem).
fn rational_roots_real(coeffs: &[BigRational]) -> Option<Vec<BigRational>> {
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from(lcm.clone())).to_integer()).collect();
    let low = ints.iter().position(|c| !c.is_zero())?;
    let high = ints.iter().rposition(|c| !c.is_zero())?;
    let mut out = Vec::new();
    if low > 0 {
        out.push(BigRational::zero());
    }
    if high == low {
        return Some(out);
    }
    let ps = divisors(&ints[low])?;
    let qs = divisors(&ints[high])?;
    for p in &ps {
        for q in &qs {
            for sign in [1i64, -1] {
                let r = BigRational::new(BigInt::from(*p) * sign, BigInt::from(*q));
                let v = coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &r + c);
                if v.is_zero() && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    Some(out)
}

/// Roots lying in `Q` or `i*Q`, with multiplicity; `complete` when they exhaust the degree.
pub fn exact_roots(coeffs: &[Scalar]) -> (Vec<Scalar>, bool) {
    let mut poly: Vec<Scalar> = coeffs.to_vec();
    while poly.len() > 1 && poly.last().is_some_and(Scalar::is_zero) {
        poly.pop();
    }
    let mut roots = Vec::new();
    for rotate in [Scalar::one(), Scalar::i()] {
        // Real roots u of p(rotate * u): common roots of the real and imaginary coefficient parts.
        let rotated: Vec<Scalar> = poly.iter().enumerate().map(|(k, c)| c * &rotate.pow(k as u32)).collect();
        let re: Vec<BigRational> = rotated.iter().map(|c| c.re.clone()).collect();
        let im: Vec<BigRational> = rotated.iter().map(|c| c.im.clone()).collect();
        let part = if re.iter().any(|x| !x.is_zero()) { re } else { im };
        let Some(cands) = rational_roots_real(&part) else {
            return (roots, false);
        };
        for u in cands {
            let r = &rotate * &Scalar::real(u);
            while poly.len() > 1 && poly_eval(&poly, &r).is_zero() {
                poly = deflate(&poly, &r);
                roots.push(r.clone());
            }
        }
    }
    let complete = poly.len() == 1;
    (roots, complete)
}

/// Converts an expression matrix with constant entries.
pub fn constant_matrix(m: &Matrix<Expr>) -> Option<Matrix<Scalar>> {
    m.iter().map(|r| r.iter().map(Expr::constant_value).collect()).collect()
}

/// Distinct eigenvalues in `Q` or `i*Q`, and whether they exhaust the spectrum.
pub fn exact_eigenvalues(m: &Matrix<Scalar>) -> (Vec<Scalar>, bool) {
    let (roots, complete) = exact_roots(&char_poly(m));
    let mut distinct: Vec<Scalar> = Vec::new();
    for r in roots {
        if !distinct.contains(&r) {
            distinct.push(r);
        }
    }
    (distinct, complete)
}

/// Basis of the eigenspace of `m` for `value`.
pub fn eigenspace<F: Field>(m: &Matrix<F>, value: &F) -> Vec<Vec<F>> {
    let n = m.len();
    let shifted: Matrix<F> = m
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().enumerate().map(|(j, x)| if i == j { x.sub(value) } else { x.clone() }).collect())
        .collect();
    nullspace(&shifted, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn inverse_and_rank() {
        let m = vec![vec![s(2), s(1)], vec![s(1), s(1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(matmul(&m, &inv), identity(2));
        assert_eq!(rank(&vec![vec![s(1), s(2)], vec![s(2), s(4)]]), 1);
        assert!(inverse(&vec![vec![s(1), s(2)], vec![s(2), s(4)]]).is_none());
    }

    #[test]
    fn nullspace_and_solve() {
        let m = vec![vec![s(1), s(1), s(0)], vec![s(0), s(0), s(1)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns, vec![vec![s(-1), s(1), s(0)]]);
        let x = solve(&m, &[s(3), s(4)]).unwrap();
        assert_eq!(x, vec![s(3), s(0), s(4)]);
        assert!(solve(&vec![vec![s(0)]], &[s(1)]).is_none());
    }

    #[test]
    fn characteristic_polynomial_and_roots() {
        let m = vec![vec![s(2), s(1)], vec![s(0), s(-3)]];
        assert_eq!(char_poly(&m), vec![s(-6), s(1), s(1)]);
        let (ev, complete) = exact_eigenvalues(&m);
        assert!(complete);
        assert_eq!(ev, vec![s(2), s(-3)]);
        // t^2 + 1/4 has roots +-i/2; t^2 - 2 has none in Q or iQ.
        let (r, complete) = exact_roots(&[Scalar::from_ratio(1, 4), s(0), s(1)]);
        assert!(complete);
        assert_eq!(r.len(), 2);
        assert!(r.contains(&(&Scalar::i() * &Scalar::from_ratio(1, 2))));
        let (r, complete) = exact_roots(&[s(-2), s(0), s(1)]);
        assert!(r.is_empty() && !complete);
        let (r, complete) = exact_roots(&[s(0), s(0), s(1)]);
        assert!(complete && r == vec![s(0), s(0)]);
    }
}
