//! Monic polynomials over the complex numbers and the products of linear
//! factors that the simultaneous iterations are built from.

use std::ops::{Deref, DerefMut};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative floor below which two entries of a root vector count as equal.
pub const DEFAULT_COLLISION_EPS: f64 = 1e-12;

/// `p(t) = t^n + a_{n-1} t^{n-1} + ... + a_0`, stored as `(a_0, ..., a_{n-1})`.
///
/// The leading coefficient is implicit and always 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonicPolynomial {
    coeffs: Vec<C64>,
}

impl MonicPolynomial {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// Expands `prod_j (t - x_j)` by multiplying in one linear factor at a
    /// time.
    pub fn from_roots(roots: &RootVector) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        let mut full = product_coefficients(roots, &[]);
        full.pop();
        Ok(Self { coeffs: full })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `(a_0, ..., a_{n-1})`.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, t: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(1.0, 0.0), |acc, &a| acc * t + a)
    }

    /// `max_l |p(x_l)|`.
    pub fn max_residual(&self, x: &[C64]) -> f64 {
        x.iter().map(|&t| self.eval(t).norm()).fold(0.0, f64::max)
    }

    /// A bound on the rounding error of [`Self::eval`] at `t`:
    /// `2n * eps * sum_j |a_j| |t|^j` (with `a_n = 1`). Residuals below it
    /// carry no information about the distance to a root.
    pub fn eval_error_bound(&self, t: C64) -> f64 {
        let r = t.norm();
        let magnitude = self
            .coeffs
            .iter()
            .rev()
            .fold(1.0, |acc, a| acc * r + a.norm());
        2.0 * self.degree() as f64 * f64::EPSILON * magnitude
    }

    /// `max_l` of [`Self::eval_error_bound`] over `x`.
    pub fn max_eval_error_bound(&self, x: &[C64]) -> f64 {
        x.iter()
            .map(|&t| self.eval_error_bound(t))
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|a| a.im == 0.0)
    }
}

/// A vector of (approximate) roots `(x_1, ..., x_n)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RootVector(pub Vec<C64>);

impl RootVector {
    pub fn new(entries: Vec<C64>) -> Self {
        Self(entries)
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self(entries.iter().map(|&r| C64::new(r, 0.0)).collect())
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }

    /// `sum_l |x_l - y_l|`.
    pub fn l1_distance(&self, other: &[C64]) -> f64 {
        self.iter().zip(other).map(|(a, b)| (a - b).norm()).sum()
    }

    pub fn max_modulus(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Deref for RootVector {
    type Target = [C64];
    fn deref(&self) -> &[C64] {
        &self.0
    }
}

impl DerefMut for RootVector {
    fn deref_mut(&mut self) -> &mut [C64] {
        &mut self.0
    }
}

impl From<Vec<C64>> for RootVector {
    fn from(v: Vec<C64>) -> Self {
        Self(v)
    }
}

/// Complex division by Smith's method.
///
/// Unlike the textbook `(a conj(b)) / |b|^2`, this reduces to a single
/// correctly rounded real division when both operands are real.
pub fn div(a: C64, b: C64) -> C64 {
    if b.re.abs() >= b.im.abs() {
        let r = b.im / b.re;
        let den = b.re + b.im * r;
        C64::new((a.re + a.im * r) / den, (a.im - a.re * r) / den)
    } else {
        let r = b.re / b.im;
        let den = b.re * r + b.im;
        C64::new((a.re * r + a.im) / den, (a.im * r - a.re) / den)
    }
}

/// Ascending coefficients of `prod_{j not in skip} (t - x_j)`, including the
/// leading 1. The factors are multiplied in ascending index order, so the
/// result depends only on the set `skip`, not on its order.
pub fn product_coefficients(x: &[C64], skip: &[usize]) -> Vec<C64> {
    let mut c = Vec::with_capacity(x.len() + 1);
    c.push(C64::new(1.0, 0.0));
    for (j, &r) in x.iter().enumerate() {
        if skip.contains(&j) {
            continue;
        }
        c.push(C64::new(0.0, 0.0));
        for i in (1..c.len()).rev() {
            c[i] = c[i - 1] - r * c[i];
        }
        c[0] = -r * c[0];
    }
    c
}

fn check_index(index: usize, dim: usize) -> Result<()> {
    if index < dim {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, dim })
    }
}

/// `B_k(t) = -prod_{j != k} (t - x_j)`; equals `-1` when `n = 1`.
///
/// # Panics
/// If `k >= x.len()`.
pub fn deflated_product(x: &[C64], k: usize, t: C64) -> C64 {
    assert!(k < x.len(), "index {k} out of range for {}", x.len());
    -x.iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .fold(C64::new(1.0, 0.0), |acc, (_, &xj)| acc * (t - xj))
}

/// `B_{lk}(t) = prod_{v not in {l, k}} (t - x_v)`; equals 1 when `n = 2`.
pub fn pairwise_deflated_product(x: &[C64], l: usize, k: usize, t: C64) -> Result<C64> {
    check_index(l, x.len())?;
    check_index(k, x.len())?;
    if l == k {
        return Err(Error::RepeatedIndex(l));
    }
    Ok(x.iter()
        .enumerate()
        .filter(|&(v, _)| v != l && v != k)
        .fold(C64::new(1.0, 0.0), |acc, (_, &xv)| acc * (t - xv)))
}

/// `min_{i<j} |x_i - x_j|`, or `+inf` for fewer than two entries.
pub fn min_pairwise_separation(x: &[C64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            best = best.min((x[i] - x[j]).norm());
        }
    }
    best
}

/// First pair `(i, j, |x_i - x_j|)` whose separation is below
/// `eps * (1 + max |x|)`.
pub fn find_collision(x: &[C64], eps: f64) -> Option<(usize, usize, f64)> {
    let scale = 1.0 + x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let floor = eps * scale;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let d = (x[i] - x[j]).norm();
            if d <= floor {
                return Some((i, j, d));
            }
        }
    }
    None
}

pub fn ensure_distinct(x: &[C64], eps: f64) -> Result<()> {
    match find_collision(x, eps) {
        Some((i, j, separation)) => Err(Error::Collision { i, j, separation }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn example() -> MonicPolynomial {
        MonicPolynomial::from_real(&[6.0, 0.0, -5.0, 0.0]).unwrap()
    }

    /// Literal Vieta: a_{n-k} is the sum over k-subsets of products of negated roots.
    fn subset_sum_coeffs(x: &[C64]) -> Vec<C64> {
        let n = x.len();
        let mut a = vec![C64::new(0.0, 0.0); n];
        for mask in 1u32..(1 << n) {
            let k = mask.count_ones() as usize;
            let prod = (0..n)
                .filter(|&i| mask & (1 << i) != 0)
                .fold(C64::new(1.0, 0.0), |acc, i| acc * -x[i]);
            a[n - k] += prod;
        }
        a
    }

    #[test]
    fn eval_examples() {
        let p = example();
        assert!(p.eval(c(2f64.sqrt(), 0.0)).norm() < 1e-14);
        assert_eq!(p.eval(c(0.0, 0.0)), c(6.0, 0.0));
        assert!((p.eval(c(1.2, 0.0)) - c(0.8736, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn empty_polynomial_rejected() {
        assert_eq!(MonicPolynomial::new(vec![]), Err(Error::EmptyPolynomial));
        assert_eq!(
            MonicPolynomial::from_roots(&RootVector::default()),
            Err(Error::EmptyPolynomial)
        );
    }

    #[test]
    fn from_roots_examples() {
        let s2 = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        let p = MonicPolynomial::from_roots(&RootVector::from_real(&[s2, -s2, s3, -s3])).unwrap();
        let want = [6.0, 0.0, -5.0, 0.0];
        for (a, w) in p.coeffs().iter().zip(want) {
            assert!((a - c(w, 0.0)).norm() < 1e-14, "{a} vs {w}");
        }

        let p = MonicPolynomial::from_roots(&RootVector::from_real(&[0.0; 5])).unwrap();
        assert!(p.coeffs().iter().all(|a| a.norm() == 0.0));

        let p = MonicPolynomial::from_roots(&RootVector::from_real(&[1.0, 2.0])).unwrap();
        assert_eq!(p.coeffs(), &[c(2.0, 0.0), c(-3.0, 0.0)]);
    }

    #[test]
    fn from_roots_matches_subset_sums() {
        let x = [
            c(0.3, -1.1),
            c(2.0, 0.5),
            c(-0.7, 0.2),
            c(1.4, 1.9),
            c(-2.2, -0.4),
        ];
        for n in 1..=5 {
            let p = MonicPolynomial::from_roots(&RootVector::new(x[..n].to_vec())).unwrap();
            for (a, b) in p.coeffs().iter().zip(subset_sum_coeffs(&x[..n])) {
                assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()));
            }
        }
    }

    #[test]
    fn deflated_product_examples() {
        let x = [c(1.0, 0.0), c(2.0, 0.0)];
        assert_eq!(deflated_product(&x, 0, c(0.0, 0.0)), c(2.0, 0.0));
        assert_eq!(deflated_product(&x, 0, c(1.0, 0.0)), c(1.0, 0.0));
        assert_eq!(
            deflated_product(&[c(3.0, 4.0)], 0, c(-9.0, 2.0)),
            c(-1.0, 0.0)
        );
    }

    #[test]
    fn pairwise_deflated_product_examples() {
        let x2 = [c(1.0, 0.0), c(2.0, 0.0)];
        assert_eq!(
            pairwise_deflated_product(&x2, 0, 1, c(7.5, -3.0)),
            Ok(c(1.0, 0.0))
        );
        let x3 = RootVector::from_real(&[1.0, 2.0, 3.0]);
        assert_eq!(
            pairwise_deflated_product(&x3, 0, 1, c(0.0, 0.0)),
            Ok(c(-3.0, 0.0))
        );
        let x4 = RootVector::from_real(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(
            pairwise_deflated_product(&x4, 0, 1, c(0.0, 0.0)),
            Ok(c(12.0, 0.0))
        );
        assert_eq!(
            pairwise_deflated_product(&x4, 2, 2, c(0.0, 0.0)),
            Err(Error::RepeatedIndex(2))
        );
        assert_eq!(
            pairwise_deflated_product(&x4, 4, 2, c(0.0, 0.0)),
            Err(Error::IndexOutOfRange { index: 4, dim: 4 })
        );
    }

    #[test]
    fn smith_division() {
        assert_eq!(div(c(1.0, 0.0), c(3.0, 0.0)), c(1.0 / 3.0, 0.0));
        assert_eq!(div(c(0.1, 0.0), c(0.7, 0.0)).re, 0.1 / 0.7);
        let (a, b) = (c(1.5, -2.0), c(0.25, 4.0));
        assert!((div(a, b) - a / b).norm() < 1e-15);
        let (a, b) = (c(-3.0, 7.0), c(5.0, -0.5));
        assert!((div(a, b) * b - a).norm() < 1e-14);
    }

    #[test]
    fn separation_examples() {
        let x = RootVector::from_real(&[1.2, 1.8, -1.2, -1.8]);
        assert!((min_pairwise_separation(&x) - 0.6).abs() < 1e-15);
        assert_eq!(
            min_pairwise_separation(&RootVector::from_real(&[5.0, 5.0])),
            0.0
        );
        assert_eq!(min_pairwise_separation(&[c(0.0, 0.0), c(0.0, 3.0)]), 3.0);
        assert_eq!(min_pairwise_separation(&[c(1.0, 0.0)]), f64::INFINITY);
    }

    #[test]
    fn collision_is_relative_to_magnitude() {
        let big = [c(1e6, 0.0), c(1e6 + 1e-7, 0.0)];
        assert!(find_collision(&big, DEFAULT_COLLISION_EPS).is_some());
        let small = [c(0.0, 0.0), c(1e-9, 0.0)];
        assert!(find_collision(&small, DEFAULT_COLLISION_EPS).is_none());
        assert_eq!(
            ensure_distinct(&[c(5.0, 0.0), c(5.0, 0.0)], DEFAULT_COLLISION_EPS),
            Err(Error::Collision {
                i: 0,
                j: 1,
                separation: 0.0
            })
        );
    }
}
