//! The Vieta system `F(x) = V(x) - a` and its derivative structure.
//!
//! `V` sends a root vector to the coefficients of `prod (t - x_j)`. Every
//! derivative of `V` is again a vector of coefficients of a product of linear
//! factors, which is what makes the Jacobian inverse and the second-derivative
//! blocks available in closed form:
//!
//! - column `k` of `F'(x)` holds the coefficients of `B_k(t) = -prod_{j != k} (t - x_j)`;
//! - row `l` of `F'(x)^{-1}` is `(1, x_l, ..., x_l^{n-1}) / B_l(x_l)`;
//! - column `l` of the block `A_k(x)` holds the coefficients of
//!   `B_{lk}(t) = prod_{v not in {l, k}} (t - x_v)`, and column `k` is zero.
//!
//! Indices are zero-based throughout.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::poly::{deflated_product, div, ensure_distinct, product_coefficients, MonicPolynomial};

const ZERO: C64 = C64::new(0.0, 0.0);

/// `(a_0, ..., a_{n-1})` with `a_n = 1` implied. Also used for `b = V(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector(pub Vec<C64>);

impl std::ops::Deref for CoefficientVector {
    type Target = [C64];
    fn deref(&self) -> &[C64] {
        &self.0
    }
}

impl From<&MonicPolynomial> for CoefficientVector {
    fn from(p: &MonicPolynomial) -> Self {
        Self(p.coeffs().to_vec())
    }
}

/// `V(x)`: signed elementary symmetric sums, i.e. the non-leading
/// coefficients of `prod (t - x_j)`.
pub fn eval_v(x: &[C64]) -> CoefficientVector {
    let mut c = product_coefficients(x, &[]);
    c.pop();
    CoefficientVector(c)
}

/// `F(x) = V(x) - a`.
pub fn eval_f(x: &[C64], a: &[C64]) -> Result<Vec<C64>> {
    if x.len() != a.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            found: a.len(),
        });
    }
    Ok(eval_v(x).iter().zip(a).map(|(v, a)| v - a).collect())
}

/// Column `k` of `F'(x)`: the negated coefficients of `prod_{j != k} (t - x_j)`.
/// The last entry is always `-1`.
///
/// # Panics
/// If `k >= x.len()`.
pub fn jacobian_column(x: &[C64], k: usize) -> Vec<C64> {
    assert!(k < x.len(), "index {k} out of range for {}", x.len());
    product_coefficients(x, &[k])
        .into_iter()
        .map(|c| -c)
        .collect()
}

/// Column `l` of the block `A_k(x)`, i.e. `d^2 F / dx_k dx_l`.
///
/// Zero for `l == k`; otherwise the coefficients of
/// `prod_{v not in {k, l}} (t - x_v)` followed by a trailing zero. The
/// arithmetic is identical for `(k, l)` and `(l, k)`.
///
/// # Panics
/// If `k` or `l` is out of range.
pub fn hessian_block_column(x: &[C64], k: usize, l: usize) -> Vec<C64> {
    let n = x.len();
    assert!(k < n && l < n, "indices ({k}, {l}) out of range for {n}");
    if k == l {
        return vec![ZERO; n];
    }
    let mut col = product_coefficients(x, &[k, l]);
    col.push(ZERO);
    col
}

/// Row `l` of `F'(x)^{-1}`: `(1, x_l, ..., x_l^{n-1}) / B_l(x_l)`.
pub fn jacobian_inverse_row(x: &[C64], l: usize, collision_eps: f64) -> Result<Vec<C64>> {
    if l >= x.len() {
        return Err(Error::IndexOutOfRange {
            index: l,
            dim: x.len(),
        });
    }
    ensure_distinct(x, collision_eps)?;
    Ok(inverse_row_unchecked(x, l))
}

fn inverse_row_unchecked(x: &[C64], l: usize) -> Vec<C64> {
    let xl = x[l];
    let scale = deflated_product(x, l, xl).inv();
    let mut pow = C64::new(1.0, 0.0);
    (0..x.len())
        .map(|_| {
            let v = pow * scale;
            pow *= xl;
            v
        })
        .collect()
}

/// `F'(x)^{-1}` assembled row by row from the closed form.
pub fn closed_form_inverse(x: &[C64], collision_eps: f64) -> Result<DMatrix<C64>> {
    ensure_distinct(x, collision_eps)?;
    let n = x.len();
    let mut m = DMatrix::zeros(n, n);
    for l in 0..n {
        for (j, v) in inverse_row_unchecked(x, l).into_iter().enumerate() {
            m[(l, j)] = v;
        }
    }
    Ok(m)
}

/// `F'(x)^{-1} F(x)`, whose component `l` is `-p(x_l) / B_l(x_l)`; these are
/// the Weierstrass corrections `p(x_l) / prod_{j != l} (x_l - x_j)`.
pub fn newton_direction(x: &[C64], p: &MonicPolynomial, collision_eps: f64) -> Result<Vec<C64>> {
    if x.len() != p.degree() {
        return Err(Error::LengthMismatch {
            expected: p.degree(),
            found: x.len(),
        });
    }
    ensure_distinct(x, collision_eps)?;
    Ok((0..x.len())
        .map(|l| -div(p.eval(x[l]), deflated_product(x, l, x[l])))
        .collect())
}

/// `F'(x)^{-1} F''(x)(d, d)` with `d = F'(x)^{-1} F(x)`, collapsed to
/// `2 d_l sum_{v != l} d_v / (x_v - x_l)` in component `l`.
pub fn collapsed_second_order_term(
    x: &[C64],
    p: &MonicPolynomial,
    collision_eps: f64,
) -> Result<Vec<C64>> {
    let d = newton_direction(x, p, collision_eps)?;
    Ok((0..x.len())
        .map(|l| {
            let sum: C64 = (0..x.len())
                .filter(|&v| v != l)
                .map(|v| div(d[v], x[v] - x[l]))
                .sum();
            2.0 * d[l] * sum
        })
        .collect())
}

/// `F'(x)^{-1} A_k(x)` from the closed form, without a linear solve.
///
/// Entry `(j, j)` is `1 / (x_k - x_j)` for `j != k`, entry `(k, l)` is
/// `1 / (x_l - x_k)` for `l != k`, and everything else (including `(k, k)`)
/// is an exact zero.
pub fn inverse_times_hessian_block(
    x: &[C64],
    k: usize,
    collision_eps: f64,
) -> Result<DMatrix<C64>> {
    let n = x.len();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, dim: n });
    }
    ensure_distinct(x, collision_eps)?;
    let mut m = DMatrix::zeros(n, n);
    for j in (0..n).filter(|&j| j != k) {
        m[(j, j)] = (x[k] - x[j]).inv();
        m[(k, j)] = (x[j] - x[k]).inv();
    }
    Ok(m)
}

/// Dense `F'(x)` together with the blocks `A_1(x), ..., A_n(x)` of `F''(x)`.
///
/// Only materialized for validation; the solvers never build it.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeTensor {
    pub jacobian: DMatrix<C64>,
    pub hessian_blocks: Vec<DMatrix<C64>>,
}

impl DerivativeTensor {
    /// Assembles every column from the closed-form generating polynomials.
    pub fn assemble(x: &[C64]) -> Self {
        let n = x.len();
        let mut jacobian = DMatrix::zeros(n, n);
        for k in 0..n {
            jacobian.set_column(k, &nalgebra::DVector::from_vec(jacobian_column(x, k)));
        }
        let hessian_blocks = (0..n)
            .map(|k| {
                let mut block = DMatrix::zeros(n, n);
                for l in 0..n {
                    block.set_column(
                        l,
                        &nalgebra::DVector::from_vec(hessian_block_column(x, k, l)),
                    );
                }
                block
            })
            .collect();
        Self {
            jacobian,
            hessian_blocks,
        }
    }

    pub fn dim(&self) -> usize {
        self.jacobian.nrows()
    }

    /// `F''(x)(y, z)`: component `i` is `sum_k (sum_j A_k[i, j] y_j) z_k`.
    pub fn bilinear_apply(&self, y: &[C64], z: &[C64]) -> Result<Vec<C64>> {
        let n = self.dim();
        for v in [y, z] {
            if v.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        let rows = self.hessian_blocks.first().map_or(n, |b| b.nrows());
        let mut out = vec![ZERO; rows];
        for (block, &zk) in self.hessian_blocks.iter().zip(z) {
            for (i, o) in out.iter_mut().enumerate() {
                let row: C64 = (0..n).map(|j| block[(i, j)] * y[j]).sum();
                *o += row * zk;
            }
        }
        Ok(out)
    }

    /// The tensor with every block (and the Jacobian) left-multiplied by `b`.
    pub fn premultiplied(&self, b: &DMatrix<C64>) -> Self {
        Self {
            jacobian: b * &self.jacobian,
            hessian_blocks: self.hessian_blocks.iter().map(|a| b * a).collect(),
        }
    }
}
