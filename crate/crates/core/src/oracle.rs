//! Structure-free reference computations.
//!
//! Everything here goes through dense matrices and a pivoted LU solve, or
//! through finite differences of `V`, so it shares no shortcuts with the
//! closed forms in [`crate::vieta`] and [`crate::solvers`]. The randomized
//! [`run_checks`] suite compares the two routes.

use std::ops::RangeInclusive;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{
    deflated_product, min_pairwise_separation, pairwise_deflated_product, MonicPolynomial,
    RootVector, DEFAULT_COLLISION_EPS,
};
use crate::solvers::{Accumulation, Method};
use crate::vieta::{
    closed_form_inverse, collapsed_second_order_term, eval_f, eval_v, hessian_block_column,
    inverse_times_hessian_block, jacobian_column, jacobian_inverse_row, newton_direction,
    DerivativeTensor,
};

/// Default finite-difference step, scaled by `1 + |x_k|`.
pub const FD_STEP: f64 = 1e-6;

/// `|a - b| / (1 + |b|)`, the deviation measure used by every check.
pub fn relative_deviation(a: C64, b: C64) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

pub fn max_relative_deviation<'a>(
    a: impl IntoIterator<Item = &'a C64>,
    b: impl IntoIterator<Item = &'a C64>,
) -> f64 {
    a.into_iter()
        .zip(b)
        .map(|(a, b)| relative_deviation(*a, *b))
        .fold(0.0, f64::max)
}

fn check_len(x: &[C64], p: &MonicPolynomial) -> Result<()> {
    if x.len() != p.degree() {
        return Err(Error::LengthMismatch {
            expected: p.degree(),
            found: x.len(),
        });
    }
    Ok(())
}

/// `F'(x)^{-1}` by LU with partial pivoting.
pub fn dense_inverse(x: &[C64]) -> Result<DMatrix<C64>> {
    DerivativeTensor::assemble(x)
        .jacobian
        .lu()
        .try_inverse()
        .ok_or(Error::Singular)
}

/// `x - F'(x)^{-1} F(x)` via a dense solve.
pub fn newton_step_generic(x: &[C64], p: &MonicPolynomial) -> Result<RootVector> {
    check_len(x, p)?;
    let jac = DerivativeTensor::assemble(x).jacobian;
    let f = DVector::from_vec(eval_f(x, p.coeffs())?);
    let d = jac.lu().solve(&f).ok_or(Error::Singular)?;
    Ok(x.iter()
        .zip(d.iter())
        .map(|(a, b)| a - b)
        .collect::<Vec<_>>()
        .into())
}

/// `x - F'^{-1} (F + F''(d, d) / 2)` with `d = F'^{-1} F`, through the
/// assembled tensor and the generic bilinear form. One factorization serves
/// both solves.
pub fn chebyshev_step_generic(x: &[C64], p: &MonicPolynomial) -> Result<RootVector> {
    check_len(x, p)?;
    let tensor = DerivativeTensor::assemble(x);
    let lu = tensor.jacobian.clone().lu();
    let f = DVector::from_vec(eval_f(x, p.coeffs())?);
    let d = lu.solve(&f).ok_or(Error::Singular)?;
    let w = tensor.bilinear_apply(d.as_slice(), d.as_slice())?;
    let rhs = f + DVector::from_vec(w) * C64::new(0.5, 0.0);
    let s = lu.solve(&rhs).ok_or(Error::Singular)?;
    Ok(x.iter()
        .zip(s.iter())
        .map(|(a, b)| a - b)
        .collect::<Vec<_>>()
        .into())
}

/// `F'^{-1} F''(d, d)` with `d = F'^{-1} F`, by dense solves.
pub fn second_order_term_generic(x: &[C64], p: &MonicPolynomial) -> Result<Vec<C64>> {
    check_len(x, p)?;
    let tensor = DerivativeTensor::assemble(x);
    let lu = tensor.jacobian.clone().lu();
    let f = DVector::from_vec(eval_f(x, p.coeffs())?);
    let d = lu.solve(&f).ok_or(Error::Singular)?;
    let w = DVector::from_vec(tensor.bilinear_apply(d.as_slice(), d.as_slice())?);
    Ok(lu.solve(&w).ok_or(Error::Singular)?.as_slice().to_vec())
}

/// Closed-form and dense results of one step side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseStepReport {
    pub closed_form: RootVector,
    pub generic: RootVector,
    pub max_relative_deviation: f64,
}

pub fn compare_step(method: Method, x: &[C64], p: &MonicPolynomial) -> Result<DenseStepReport> {
    let closed_form = method.step(x, p, DEFAULT_COLLISION_EPS, Accumulation::Index)?;
    let generic = match method {
        Method::WeierstrassKerner => newton_step_generic(x, p)?,
        Method::Chebyshev => chebyshev_step_generic(x, p)?,
    };
    let max_relative_deviation = max_relative_deviation(closed_form.iter(), generic.iter());
    Ok(DenseStepReport {
        closed_form,
        generic,
        max_relative_deviation,
    })
}

fn shifted(x: &[C64], k: usize, h: f64) -> Vec<C64> {
    let mut y = x.to_vec();
    y[k] += h;
    y
}

/// Central differences of `V`, column by column.
pub fn finite_difference_jacobian(x: &[C64], step: f64) -> DMatrix<C64> {
    let n = x.len();
    let mut m = DMatrix::zeros(n, n);
    for k in 0..n {
        let h = step * (1.0 + x[k].norm());
        let plus = eval_v(&shifted(x, k, h));
        let minus = eval_v(&shifted(x, k, -h));
        for i in 0..n {
            m[(i, k)] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    m
}

/// `A_k(x)` by central differences in `x_k` of every Jacobian column.
pub fn finite_difference_hessian_block(x: &[C64], k: usize, step: f64) -> DMatrix<C64> {
    let n = x.len();
    let h = step * (1.0 + x[k].norm());
    let (up, down) = (shifted(x, k, h), shifted(x, k, -h));
    let mut m = DMatrix::zeros(n, n);
    for l in 0..n {
        let plus = jacobian_column(&up, l);
        let minus = jacobian_column(&down, l);
        for i in 0..n {
            m[(i, l)] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    m
}

/// One randomized test case: well-separated roots in the unit disk, a
/// polynomial built from them, and an iterate perturbed away from the roots.
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub roots: RootVector,
    pub poly: MonicPolynomial,
    pub iterate: RootVector,
}

fn point_in_disk(rng: &mut impl Rng, radius: f64) -> C64 {
    let r = radius * rng.random::<f64>().sqrt();
    C64::from_polar(r, rng.random::<f64>() * std::f64::consts::TAU)
}

/// Rejection-samples `n` roots in the unit disk at least `min_sep` apart,
/// then an iterate within `perturb` of them that keeps half that separation.
pub fn random_instance(rng: &mut impl Rng, n: usize, min_sep: f64, perturb: f64) -> RandomInstance {
    let roots: Vec<C64> = loop {
        let cand: Vec<C64> = (0..n).map(|_| point_in_disk(rng, 1.0)).collect();
        if min_pairwise_separation(&cand) >= min_sep {
            break cand;
        }
    };
    let iterate: Vec<C64> = loop {
        let cand: Vec<C64> = roots
            .iter()
            .map(|&r| r + point_in_disk(rng, perturb))
            .collect();
        if min_pairwise_separation(&cand) >= 0.5 * min_sep {
            break cand;
        }
    };
    let roots = RootVector::new(roots);
    let poly = MonicPolynomial::from_roots(&roots).expect("n >= 1");
    RandomInstance {
        roots,
        poly,
        iterate: iterate.into(),
    }
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Tolerances for each suite of [`run_checks`].
pub mod tolerance {
    pub const STEP: f64 = 1e-9;
    pub const INVERSE: f64 = 1e-9;
    pub const FD_JACOBIAN: f64 = 1e-6;
    pub const FD_HESSIAN: f64 = 1e-5;
    pub const GENERATING: f64 = 1e-12;
    pub const KRONECKER: f64 = 1e-10;
    pub const LEMMA: f64 = 1e-11;
    pub const SECOND_ORDER: f64 = 1e-9;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.max_deviation < self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub trials: u64,
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

#[derive(Default)]
struct Maxima([f64; 9]);

const SUITE_NAMES: [(&str, f64); 9] = [
    ("newton_step", tolerance::STEP),
    ("chebyshev_step", tolerance::STEP),
    ("closed_form_inverse", tolerance::INVERSE),
    ("fd_jacobian", tolerance::FD_JACOBIAN),
    ("fd_hessian", tolerance::FD_HESSIAN),
    ("generating_identities", tolerance::GENERATING),
    ("kronecker", tolerance::KRONECKER),
    ("bilinear_premultiply", tolerance::LEMMA),
    ("second_order_term", tolerance::SECOND_ORDER),
];

impl Maxima {
    fn bump(&mut self, i: usize, v: f64) {
        // NaN must surface as a failure.
        if v.is_nan() || v > self.0[i] {
            self.0[i] = if v.is_nan() { f64::INFINITY } else { v };
        }
    }
}

fn matrix_deviation(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    max_relative_deviation(a.iter(), b.iter())
}

fn check_instance(inst: &RandomInstance, rng: &mut impl Rng, acc: &mut Maxima) -> Result<()> {
    let x = &inst.iterate;
    let p = &inst.poly;
    let n = x.len();
    let eps = DEFAULT_COLLISION_EPS;

    acc.bump(
        0,
        compare_step(Method::WeierstrassKerner, x, p)?.max_relative_deviation,
    );
    acc.bump(
        1,
        compare_step(Method::Chebyshev, x, p)?.max_relative_deviation,
    );

    let closed_inv = closed_form_inverse(x, eps)?;
    acc.bump(2, matrix_deviation(&closed_inv, &dense_inverse(x)?));

    let tensor = DerivativeTensor::assemble(x);
    acc.bump(
        3,
        matrix_deviation(&finite_difference_jacobian(x, FD_STEP), &tensor.jacobian),
    );
    for k in 0..n {
        let fd = finite_difference_hessian_block(x, k, FD_STEP);
        acc.bump(4, matrix_deviation(&fd, &tensor.hessian_blocks[k]));
    }

    let t = point_in_disk(rng, 2.0);
    let horner = |c: &[C64]| {
        c.iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &a| acc * t + a)
    };
    for k in 0..n {
        acc.bump(
            5,
            relative_deviation(horner(&jacobian_column(x, k)), deflated_product(x, k, t)),
        );
        for l in (0..n).filter(|&l| l != k) {
            let b_lk = pairwise_deflated_product(x, l, k, t)?;
            acc.bump(
                5,
                relative_deviation(horner(&hessian_block_column(x, k, l)), b_lk),
            );
        }
    }

    for l in 0..n {
        let row = jacobian_inverse_row(x, l, eps)?;
        for k in 0..n {
            let dot: C64 = row
                .iter()
                .zip(jacobian_column(x, k))
                .map(|(a, b)| a * b)
                .sum();
            let delta = if l == k { 1.0 } else { 0.0 };
            acc.bump(6, (dot - delta).norm());
        }
    }

    let b = DMatrix::from_fn(n, n, |_, _| point_in_disk(rng, 1.0));
    let y: Vec<C64> = (0..n).map(|_| point_in_disk(rng, 1.0)).collect();
    let z: Vec<C64> = (0..n).map(|_| point_in_disk(rng, 1.0)).collect();
    let lhs = &b * DVector::from_vec(tensor.bilinear_apply(&y, &z)?);
    let rhs = tensor.premultiplied(&b).bilinear_apply(&y, &z)?;
    acc.bump(7, max_relative_deviation(lhs.iter(), rhs.iter()));

    // closed collapse vs dense solve vs the cross-matrix route.
    let closed = collapsed_second_order_term(x, p, eps)?;
    acc.bump(
        8,
        max_relative_deviation(closed.iter(), second_order_term_generic(x, p)?.iter()),
    );
    let d = newton_direction(x, p, eps)?;
    let mut via_cross = DVector::zeros(n);
    for k in 0..n {
        let cross = inverse_times_hessian_block(x, k, eps)?;
        via_cross += cross * DVector::from_column_slice(&d) * d[k];
    }
    acc.bump(8, max_relative_deviation(closed.iter(), via_cross.iter()));
    Ok(())
}

/// Runs every closed-form-vs-reference suite on `trials` random instances.
/// Degrees are drawn uniformly from `degrees`; each trial has its own
/// deterministic stream derived from `seed`.
pub fn run_checks(degrees: RangeInclusive<usize>, trials: u64, seed: u64) -> Result<CheckReport> {
    let mut acc = Maxima::default();
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let n = rng.random_range(degrees.clone());
        let inst = random_instance(&mut rng, n, 0.5 / n as f64, 0.3);
        check_instance(&inst, &mut rng, &mut acc)?;
    }
    let suites = SUITE_NAMES
        .iter()
        .zip(acc.0)
        .map(|(&(name, tolerance), max_deviation)| SuiteResult {
            name,
            max_deviation,
            tolerance,
        })
        .collect();
    Ok(CheckReport {
        trials,
        seed,
        suites,
    })
}
