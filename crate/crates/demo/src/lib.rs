//! Browser front end for the simultaneous root finders.
//!
//! Three operations are exported to JavaScript, each returning a JSON string
//! that `www/index.js` draws on a canvas:
//!
//! - [`trajectories`]: the path of every root approximation in the complex plane;
//! - [`convergence`]: step norms per iteration for both methods, with estimated orders;
//! - [`circle_start`]: the default start points for a polynomial and seed.
//!
//! The `*_json` functions hold the logic and are plain Rust so they can be
//! tested off the browser.

use serde::Serialize;
use simroots::cli::{canonical_order, parse_complex_list};
use simroots::{
    default_initial_guess, estimate_convergence_order, solve, Method, MonicPolynomial, RootVector,
    SolverConfig,
};
use wasm_bindgen::prelude::*;

type Pair = [f64; 2];

fn pairs(x: &[num_complex::Complex64]) -> Vec<Pair> {
    x.iter().map(|z| [z.re, z.im]).collect()
}

fn parse_method(name: &str) -> Result<Method, String> {
    match name {
        "wdk" => Ok(Method::WeierstrassKerner),
        "chebyshev" => Ok(Method::Chebyshev),
        other => Err(format!(
            "unknown method {other:?} (expected wdk or chebyshev)"
        )),
    }
}

fn parse_problem(
    coeffs: &str,
    start: &str,
    seed: u64,
) -> Result<(MonicPolynomial, RootVector), String> {
    let p = MonicPolynomial::new(parse_complex_list(coeffs).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let x0 = if start.trim().is_empty() {
        default_initial_guess(&p, seed)
    } else {
        let v = parse_complex_list(start).map_err(|e| e.to_string())?;
        if v.len() != p.degree() {
            return Err(format!(
                "start has {} entries, polynomial has degree {}",
                v.len(),
                p.degree()
            ));
        }
        RootVector::new(v)
    };
    Ok((p, x0))
}

#[derive(Serialize)]
struct Trajectories {
    method: &'static str,
    status: &'static str,
    iterations: usize,
    /// `paths[l][m]` is component `l` of iterate `m`.
    paths: Vec<Vec<Pair>>,
    roots: Vec<Pair>,
}

pub fn trajectories_json(
    coeffs: &str,
    start: &str,
    method: &str,
    max_iter: usize,
) -> Result<String, String> {
    let (p, x0) = parse_problem(coeffs, start, 0)?;
    let method = parse_method(method)?;
    let cfg = SolverConfig {
        max_iter: max_iter.max(1),
        ..SolverConfig::new(method).with_trace()
    };
    let r = solve(&p, &x0, &cfg).map_err(|e| e.to_string())?;
    let trace = r.trace.unwrap_or_default();
    let paths = (0..p.degree())
        .map(|l| trace.iterates.iter().map(|x| [x[l].re, x[l].im]).collect())
        .collect();
    let out = Trajectories {
        method: method.name(),
        status: r.status.name(),
        iterations: r.iterations,
        paths,
        roots: pairs(&canonical_order(&r.roots)),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Curve {
    method: &'static str,
    status: &'static str,
    iterations: usize,
    step_norms: Vec<f64>,
    residuals: Vec<f64>,
    order: Option<f64>,
}

pub fn convergence_json(coeffs: &str, start: &str, max_iter: usize) -> Result<String, String> {
    let (p, x0) = parse_problem(coeffs, start, 0)?;
    let curves = [Method::WeierstrassKerner, Method::Chebyshev]
        .into_iter()
        .map(|m| {
            let cfg = SolverConfig {
                max_iter: max_iter.max(1),
                ..SolverConfig::new(m).with_trace()
            };
            let r = solve(&p, &x0, &cfg).map_err(|e| e.to_string())?;
            let trace = r.trace.unwrap_or_default();
            Ok(Curve {
                method: m.name(),
                status: r.status.name(),
                iterations: r.iterations,
                order: estimate_convergence_order(&trace).ok(),
                step_norms: trace.step_norms,
                residuals: trace.residual_norms,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    serde_json::to_string(&curves).map_err(|e| e.to_string())
}

pub fn circle_start_json(coeffs: &str, seed: u64) -> Result<String, String> {
    let (_, x0) = parse_problem(coeffs, "", seed)?;
    serde_json::to_string(&pairs(&x0)).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn trajectories(
    coeffs: &str,
    start: &str,
    method: &str,
    max_iter: usize,
) -> Result<String, JsValue> {
    trajectories_json(coeffs, start, method, max_iter).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn convergence(coeffs: &str, start: &str, max_iter: usize) -> Result<String, JsValue> {
    convergence_json(coeffs, start, max_iter).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn circle_start(coeffs: &str, seed: u32) -> Result<String, JsValue> {
    circle_start_json(coeffs, u64::from(seed)).map_err(|e| JsValue::from_str(&e))
}
