//! Closed-form simultaneous iterations and the driver loop around them.
//!
//! With the Weierstrass quotients `q_l = p(x_l) / B_l(x_l)` (note
//! `B_l(x_l) = -prod_{j != l} (x_l - x_j)`):
//!
//! - Weierstrass-Kerner: `x_l <- x_l + q_l`
//! - Chebyshev-Tanabe: `x_l <- x_l - q_l * (sum_{v != l} q_v / (x_v - x_l) - 1)`
//!
//! Both are total-step updates: every component is computed from the same
//! input vector. Near a multiple root the iterates wander in rounding noise
//! and the iteration count depends on the exact arithmetic, so the
//! association above is kept as written and divisions use
//! [`crate::poly::div`], which is exact for real operands.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{div, ensure_distinct, MonicPolynomial, RootVector, DEFAULT_COLLISION_EPS};

/// 1-norm step threshold used by default.
pub const DEFAULT_TOL: f64 = 1e-15;
pub const DEFAULT_MAX_ITER: usize = 1000;
const MAX_JITTER_RETRIES: usize = 8;

/// Phase offset of the default start circle (the golden-ratio conjugate, in radians).
const CIRCLE_PHASE: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// Newton on the Vieta system, second order.
    #[serde(rename = "wdk")]
    WeierstrassKerner,
    /// Chebyshev on the Vieta system, third order.
    #[serde(rename = "chebyshev")]
    Chebyshev,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::WeierstrassKerner => "wdk",
            Method::Chebyshev => "chebyshev",
        }
    }

    pub fn step(
        self,
        x: &[C64],
        p: &MonicPolynomial,
        collision_eps: f64,
        accumulation: Accumulation,
    ) -> Result<RootVector> {
        match self {
            Method::WeierstrassKerner => wdk_step_with(x, p, collision_eps, accumulation),
            Method::Chebyshev => chebyshev_step_with(x, p, collision_eps, accumulation),
        }
    }
}

/// Order in which a step accumulates its products and sums over `v != l`.
///
/// Rounding depends on this order. At multiple roots the iteration is
/// chaotic, so different orders give very different iteration counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Accumulation {
    /// Ascending index, the plain loop.
    #[default]
    Index,
    /// Ascending value, by real then imaginary part. Permuting the entries
    /// of `x` then permutes the step's output bit for bit.
    ByValue,
}

impl Accumulation {
    fn order(self, x: &[C64]) -> Vec<usize> {
        let mut order: Vec<usize> = (0..x.len()).collect();
        if self == Accumulation::ByValue {
            order.sort_by(|&i, &j| {
                x[i].re
                    .total_cmp(&x[j].re)
                    .then(x[i].im.total_cmp(&x[j].im))
            });
        }
        order
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Stop once `||x^(m+1) - x^(m)||_1 < tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative separation floor, see [`crate::poly::find_collision`].
    pub collision_eps: f64,
    pub method: Method,
    pub record_trace: bool,
    /// On a collision, move one colliding entry back onto the start circle
    /// and keep going instead of aborting.
    pub jitter_retry: bool,
    pub accumulation: Accumulation,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            collision_eps: DEFAULT_COLLISION_EPS,
            method: Method::WeierstrassKerner,
            record_trace: false,
            jitter_retry: false,
            accumulation: Accumulation::Index,
        }
    }
}

impl SolverConfig {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "tol must be > 0 (got {})",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be >= 1".into()));
        }
        if self.collision_eps.is_nan() || self.collision_eps < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "collision_eps must be >= 0 (got {})",
                self.collision_eps
            )));
        }
        Ok(())
    }
}

/// Iterates `x^(0), x^(1), ...` with the step and residual norms between them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub iterates: Vec<RootVector>,
    /// `||x^(m+1) - x^(m)||_1` for each completed step.
    pub step_norms: Vec<f64>,
    /// `max_l |p(x_l^(m+1))|` for each completed step.
    pub residual_norms: Vec<f64>,
    /// Rounding-error bound of the residual evaluation at `x^(m+1)`, same
    /// indexing as `residual_norms`.
    #[serde(default)]
    pub residual_floors: Vec<f64>,
}

impl IterationTrace {
    pub fn steps(&self) -> usize {
        self.step_norms.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIterReached,
    CollisionDetected,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxIterReached => "max_iter_reached",
            Status::CollisionDetected => "collision_detected",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub roots: RootVector,
    pub iterations: usize,
    pub status: Status,
    /// The colliding pair when `status` is [`Status::CollisionDetected`].
    pub collision: Option<(usize, usize)>,
    pub last_step_norm: f64,
    pub residual: f64,
    pub trace: Option<IterationTrace>,
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

/// `q_l = p(x_l) / B_l(x_l)` for every `l`, with `B_l` accumulated in `order`.
fn weierstrass_quotients(x: &[C64], p: &MonicPolynomial, order: &[usize]) -> Vec<C64> {
    (0..x.len())
        .map(|l| {
            let b = -order
                .iter()
                .filter(|&&j| j != l)
                .fold(C64::new(1.0, 0.0), |acc, &j| acc * (x[l] - x[j]));
            div(p.eval(x[l]), b)
        })
        .collect()
}

/// One Weierstrass-Kerner step with the default collision tolerance.
pub fn wdk_step(x: &[C64], p: &MonicPolynomial) -> Result<RootVector> {
    wdk_step_with(x, p, DEFAULT_COLLISION_EPS, Accumulation::Index)
}

pub fn wdk_step_with(
    x: &[C64],
    p: &MonicPolynomial,
    collision_eps: f64,
    accumulation: Accumulation,
) -> Result<RootVector> {
    check_len(x, p)?;
    ensure_distinct(x, collision_eps)?;
    let q = weierstrass_quotients(x, p, &accumulation.order(x));
    Ok(x.iter()
        .zip(&q)
        .map(|(xl, ql)| xl + ql)
        .collect::<Vec<_>>()
        .into())
}

/// One Chebyshev-Tanabe step with the default collision tolerance.
pub fn chebyshev_step(x: &[C64], p: &MonicPolynomial) -> Result<RootVector> {
    chebyshev_step_with(x, p, DEFAULT_COLLISION_EPS, Accumulation::Index)
}

pub fn chebyshev_step_with(
    x: &[C64],
    p: &MonicPolynomial,
    collision_eps: f64,
    accumulation: Accumulation,
) -> Result<RootVector> {
    check_len(x, p)?;
    ensure_distinct(x, collision_eps)?;
    let order = accumulation.order(x);
    let q = weierstrass_quotients(x, p, &order);
    Ok((0..x.len())
        .map(|l| {
            let bracket = order
                .iter()
                .filter(|&&v| v != l)
                .fold(C64::new(-1.0, 0.0), |acc, &v| acc + div(q[v], x[v] - x[l]));
            x[l] - q[l] * bracket
        })
        .collect::<Vec<_>>()
        .into())
}

/// Runs the configured iteration from `x0`.
///
/// A collision does not produce an `Err`; it ends the run with
/// [`Status::CollisionDetected`] and whatever trace was recorded so far.
pub fn solve(p: &MonicPolynomial, x0: &RootVector, config: &SolverConfig) -> Result<SolverResult> {
    config.validate()?;
    check_len(x0, p)?;

    let mut x = x0.clone();
    let mut trace = config.record_trace.then(|| IterationTrace {
        iterates: vec![x0.clone()],
        ..Default::default()
    });
    let mut iterations = 0;
    let mut retries = 0;
    let mut status = Status::MaxIterReached;
    let mut collision = None;
    let mut last_step_norm = f64::INFINITY;

    while iterations < config.max_iter {
        let next = match config
            .method
            .step(&x, p, config.collision_eps, config.accumulation)
        {
            Ok(next) => next,
            Err(Error::Collision { i, j, .. }) => {
                if config.jitter_retry && retries < MAX_JITTER_RETRIES {
                    retries += 1;
                    x[j] = circle_point(p, j, retries as u64);
                    continue;
                }
                status = Status::CollisionDetected;
                collision = Some((i, j));
                break;
            }
            Err(e) => return Err(e),
        };
        let step_norm = next.l1_distance(&x);
        iterations += 1;
        last_step_norm = step_norm;
        if let Some(t) = trace.as_mut() {
            t.step_norms.push(step_norm);
            t.residual_norms.push(p.max_residual(&next));
            t.residual_floors.push(p.max_eval_error_bound(&next));
            t.iterates.push(next.clone());
        }
        x = next;
        if step_norm < config.tol {
            status = Status::Converged;
            break;
        }
    }

    let residual = p.max_residual(&x);
    Ok(SolverResult {
        roots: x,
        iterations,
        status,
        collision,
        last_step_norm,
        residual,
        trace,
    })
}

fn circle_geometry(p: &MonicPolynomial) -> (C64, f64) {
    let n = p.degree();
    let a = p.coeffs();
    let center = -a[n - 1] / n as f64;
    let radius = 1.0 + a.iter().map(|c| c.norm()).fold(0.0, f64::max);
    (center, radius)
}

fn seed_phase(seed: u64) -> f64 {
    // Weyl sequence: fractional parts of seed * golden ratio.
    (seed as f64 * CIRCLE_PHASE).fract() * TAU
}

fn circle_point(p: &MonicPolynomial, j: usize, seed: u64) -> C64 {
    let n = p.degree();
    let (center, radius) = circle_geometry(p);
    let phase = CIRCLE_PHASE + seed_phase(seed) / n as f64 + TAU * j as f64 / n as f64;
    center + C64::from_polar(radius, phase)
}

/// `n` equally spaced points on the circle of radius `1 + max |a_j|` around
/// `-a_{n-1} / n`. The seed rotates the whole configuration; seed 0 gives
/// the base phase.
pub fn default_initial_guess(p: &MonicPolynomial, seed: u64) -> RootVector {
    (0..p.degree())
        .map(|j| circle_point(p, j, seed))
        .collect::<Vec<_>>()
        .into()
}

/// Empirical order `log(e_{m+1}/e_m) / log(e_m/e_{m-1})` over the step norms,
/// taking the median of the last three usable triples. A triple is usable
/// when it is strictly contracting, no step norm in it is below
/// `100 * eps * (1 + max |x^(m)|)`, and each step starts from an iterate
/// whose residual is above the evaluation rounding floor (when the trace
/// records one). The last condition discards the noise phase near multiple
/// roots.
pub fn estimate_convergence_order(trace: &IterationTrace) -> Result<f64> {
    let e = &trace.step_norms;
    // e[m] leaves x^(m); its residual is residual_norms[m - 1].
    let informative = |m: usize| {
        m == 0
            || match (
                trace.residual_norms.get(m - 1),
                trace.residual_floors.get(m - 1),
            ) {
                (Some(r), Some(floor)) => r > floor,
                _ => true,
            }
    };
    let usable = |m: usize| {
        let scale = trace.iterates.get(m).map_or(1.0, |x| 1.0 + x.max_modulus());
        e[m].is_finite() && e[m] > 100.0 * f64::EPSILON * scale && informative(m)
    };
    let mut orders: Vec<f64> = (1..e.len().saturating_sub(1))
        .filter(|&m| usable(m - 1) && usable(m) && usable(m + 1))
        .filter(|&m| e[m - 1] > e[m] && e[m] > e[m + 1])
        .map(|m| (e[m + 1] / e[m]).ln() / (e[m] / e[m - 1]).ln())
        .filter(|q| q.is_finite())
        .collect();
    if orders.is_empty() {
        return Err(Error::UndefinedOrder("no usable triple of step norms"));
    }
    let tail = orders.split_off(orders.len().saturating_sub(3));
    Ok(median(tail))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}
