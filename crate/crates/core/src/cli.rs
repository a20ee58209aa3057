//! Command implementations behind the `simroots` binary.
//!
//! The binary only parses flags into a [`JobSpec`]; everything that writes a
//! report lives here so it can be driven from tests with an in-memory sink.

use std::io::{self, Write};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{run_checks, CheckReport};
use crate::poly::{MonicPolynomial, RootVector};
use crate::solvers::{
    default_initial_guess, estimate_convergence_order, solve, Method, SolverConfig, SolverResult,
    Status, DEFAULT_MAX_ITER, DEFAULT_TOL,
};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const COLLISION: i32 = 3;
    pub const MAX_ITER: i32 = 4;
    pub const CHECK_FAILED: i32 = 5;
}

/// Orders below this are reported as linear convergence.
const LINEAR_ORDER_FLAG: f64 = 1.5;

#[derive(Debug, Clone, PartialEq)]
pub enum Initial {
    Circle(u64),
    Explicit(Vec<C64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Wdk,
    Chebyshev,
    Both,
}

impl MethodChoice {
    pub fn methods(self) -> &'static [Method] {
        match self {
            MethodChoice::Wdk => &[Method::WeierstrassKerner],
            MethodChoice::Chebyshev => &[Method::Chebyshev],
            MethodChoice::Both => &[Method::WeierstrassKerner, Method::Chebyshev],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    JsonLines,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    /// `a_0` first; the leading 1 is implied.
    pub coefficients: Vec<C64>,
    pub initial: Initial,
    pub method: MethodChoice,
    pub tol: f64,
    pub max_iter: usize,
    pub trace: bool,
    pub output_format: OutputFormat,
}

impl JobSpec {
    pub fn new(coefficients: Vec<C64>) -> Self {
        Self {
            coefficients,
            initial: Initial::Circle(0),
            method: MethodChoice::Both,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            trace: false,
            output_format: OutputFormat::Text,
        }
    }

    /// The polynomial and the start vector, or a usage error.
    pub fn prepare(&self) -> Result<(MonicPolynomial, RootVector)> {
        let p = MonicPolynomial::new(self.coefficients.clone())?;
        let x0 = match &self.initial {
            Initial::Circle(seed) => default_initial_guess(&p, *seed),
            Initial::Explicit(v) => {
                if v.len() != p.degree() {
                    return Err(Error::LengthMismatch {
                        expected: p.degree(),
                        found: v.len(),
                    });
                }
                RootVector::new(v.clone())
            }
        };
        self.config(Method::WeierstrassKerner).validate()?;
        Ok((p, x0))
    }

    fn config(&self, method: Method) -> SolverConfig {
        SolverConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            method,
            record_trace: self.trace,
            ..SolverConfig::default()
        }
    }
}

fn parse_real(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Parse(format!("not a number: {s:?}")))
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (no spaces). A bare `i` means 1.
pub fn parse_complex(s: &str) -> Result<C64> {
    let s = s.trim().replace('\u{2212}', "-");
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(C64::new(parse_real(&s)?, 0.0));
    };
    // Split at the last sign that is not the leading one or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (parse_real(&body[..i])?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other)?,
    };
    Ok(C64::new(re, im))
}

/// Whitespace- or comma-separated complex literals.
pub fn parse_complex_list(s: &str) -> Result<Vec<C64>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(parse_complex)
        .collect()
}

/// One complex per line, `a_0` first; `#` starts a comment.
pub fn parse_coefficient_file(text: &str) -> Result<Vec<C64>> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty())
        .map(parse_complex)
        .collect()
}

/// Scientific notation with 16 significant digits and a three-digit
/// exponent, e.g. `1.402222222222222E+000`.
pub fn format_sci(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.15E}");
    let (mantissa, exp) = s.split_once('E').expect("E in exponent format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}E{sign}{:03}", exp.abs())
}

fn format_complex(z: C64) -> String {
    let im = format_sci(z.im);
    let im = if im.starts_with('-') {
        im
    } else {
        format!("+{im}")
    };
    format!("{} {}i", format_sci(z.re), im)
}

/// Sorted by real part, then imaginary part, then modulus.
pub fn canonical_order(roots: &[C64]) -> Vec<C64> {
    let mut v = roots.to_vec();
    v.sort_by(|a, b| {
        a.re.total_cmp(&b.re)
            .then(a.im.total_cmp(&b.im))
            .then(a.norm().total_cmp(&b.norm()))
    });
    v
}

fn pairs(x: &[C64]) -> Vec<[f64; 2]> {
    x.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Serialize)]
struct TraceRecord<'a> {
    method: &'a str,
    m: usize,
    x: Vec<[f64; 2]>,
    step_norm: f64,
    residual: f64,
}

#[derive(Serialize)]
struct SummaryRecord<'a> {
    kind: &'a str,
    method: &'a str,
    status: &'a str,
    iterations: usize,
    roots: Vec<[f64; 2]>,
    residual: f64,
    last_step_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    collision: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<Option<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    linear_convergence: Option<bool>,
}

fn json_line(out: &mut impl Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value).map_err(io::Error::other)?;
    writeln!(out)
}

fn exit_code(runs: &[(Method, SolverResult)]) -> i32 {
    if runs
        .iter()
        .any(|(_, r)| r.status == Status::CollisionDetected)
    {
        exit::COLLISION
    } else if runs.iter().any(|(_, r)| r.status == Status::MaxIterReached) {
        exit::MAX_ITER
    } else {
        exit::OK
    }
}

fn run_methods(spec: &JobSpec, trace: bool) -> Result<Vec<(Method, SolverResult)>> {
    let (p, x0) = spec.prepare()?;
    spec.method
        .methods()
        .iter()
        .map(|&m| {
            let mut cfg = spec.config(m);
            cfg.record_trace |= trace;
            solve(&p, &x0, &cfg).map(|r| (m, r))
        })
        .collect()
}

fn write_trace_text(out: &mut impl Write, r: &SolverResult) -> io::Result<()> {
    let Some(t) = &r.trace else { return Ok(()) };
    for (m, x) in t.iterates.iter().enumerate().skip(1) {
        write!(out, "{m:5}")?;
        for z in x.iter() {
            write!(out, "  {}", format_complex(*z))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn write_trace_jsonl(out: &mut impl Write, method: Method, r: &SolverResult) -> io::Result<()> {
    let Some(t) = &r.trace else { return Ok(()) };
    for (i, x) in t.iterates.iter().enumerate().skip(1) {
        json_line(
            out,
            &TraceRecord {
                method: method.name(),
                m: i,
                x: pairs(x),
                step_norm: t.step_norms[i - 1],
                residual: t.residual_norms[i - 1],
            },
        )?;
    }
    Ok(())
}

fn summary<'a>(method: Method, r: &SolverResult) -> SummaryRecord<'a> {
    SummaryRecord {
        kind: "summary",
        method: method.name(),
        status: r.status.name(),
        iterations: r.iterations,
        roots: pairs(&canonical_order(&r.roots)),
        residual: r.residual,
        last_step_norm: r.last_step_norm,
        collision: r.collision.map(|(i, j)| [i, j]),
        order: None,
        linear_convergence: None,
    }
}

/// Runs the selected method(s) and prints roots, counts and status.
pub fn cmd_solve(spec: &JobSpec, out: &mut impl Write) -> Result<i32> {
    let runs = run_methods(spec, false)?;
    write_solve(spec, &runs, out)?;
    Ok(exit_code(&runs))
}

fn write_solve(
    spec: &JobSpec,
    runs: &[(Method, SolverResult)],
    out: &mut impl Write,
) -> io::Result<()> {
    for (method, r) in runs {
        match spec.output_format {
            OutputFormat::Text => {
                writeln!(out, "method: {method}")?;
                write_trace_text(out, r)?;
                writeln!(out, "status: {}", r.status.name())?;
                if let Some((i, j)) = r.collision {
                    writeln!(out, "collision: entries {i} and {j}")?;
                }
                writeln!(out, "iterations: {}", r.iterations)?;
                writeln!(out, "residual: {}", format_sci(r.residual))?;
                writeln!(out, "roots:")?;
                for z in canonical_order(&r.roots) {
                    writeln!(out, "  {}", format_complex(z))?;
                }
            }
            OutputFormat::JsonLines => {
                write_trace_jsonl(out, *method, r)?;
                json_line(out, &summary(*method, r))?;
            }
        }
    }
    Ok(())
}

/// Runs every selected method from the same start and reports iteration
/// counts, residuals and estimated convergence orders.
pub fn cmd_compare(spec: &JobSpec, out: &mut impl Write) -> Result<i32> {
    let spec = JobSpec {
        method: MethodChoice::Both,
        ..spec.clone()
    };
    let runs = run_methods(&spec, true)?;
    write_compare(&spec, &runs, out)?;
    Ok(exit_code(&runs))
}

fn write_compare(
    spec: &JobSpec,
    runs: &[(Method, SolverResult)],
    out: &mut impl Write,
) -> io::Result<()> {
    if spec.output_format == OutputFormat::Text {
        writeln!(
            out,
            "{:<10} {:>10}  {:<18} {:>22}  {:>6}",
            "method", "iterations", "status", "residual", "order"
        )?;
    }
    let mut linear = false;
    for (method, r) in runs {
        let order = r
            .trace
            .as_ref()
            .and_then(|t| estimate_convergence_order(t).ok());
        let is_linear = order.is_some_and(|q| q < LINEAR_ORDER_FLAG);
        linear |= is_linear;
        match spec.output_format {
            OutputFormat::Text => {
                let order = order.map_or_else(|| "n/a".to_string(), |q| format!("{q:.2}"));
                writeln!(
                    out,
                    "{:<10} {:>10}  {:<18} {:>22}  {:>6}",
                    method.name(),
                    r.iterations,
                    r.status.name(),
                    format_sci(r.residual),
                    order
                )?;
            }
            OutputFormat::JsonLines => {
                if spec.trace {
                    write_trace_jsonl(out, *method, r)?;
                }
                let mut rec = summary(*method, r);
                rec.order = Some(order);
                rec.linear_convergence = Some(is_linear);
                json_line(out, &rec)?;
            }
        }
    }
    if linear && spec.output_format == OutputFormat::Text {
        writeln!(
            out,
            "note: estimated order below {LINEAR_ORDER_FLAG} means linear convergence, typical of a multiple root"
        )?;
    }
    Ok(())
}

/// Runs the randomized closed-form-vs-reference suites at a fixed degree.
pub fn cmd_check(
    degree: usize,
    trials: u64,
    seed: u64,
    format: OutputFormat,
    out: &mut impl Write,
) -> Result<i32> {
    if degree == 0 || trials == 0 {
        return Err(Error::InvalidConfig(
            "degree and trials must be >= 1".into(),
        ));
    }
    let report = run_checks(degree..=degree, trials, seed)?;
    write_check(degree, &report, format, out)?;
    Ok(if report.passed() {
        exit::OK
    } else {
        exit::CHECK_FAILED
    })
}

fn write_check(
    degree: usize,
    report: &CheckReport,
    format: OutputFormat,
    out: &mut impl Write,
) -> io::Result<()> {
    match format {
        OutputFormat::Text => {
            writeln!(
                out,
                "degree {degree}, {} trials, seed {}",
                report.trials, report.seed
            )?;
            for s in &report.suites {
                writeln!(
                    out,
                    "{:<22} max deviation {:>10.3e}  tolerance {:>7.0e}  {}",
                    s.name,
                    s.max_deviation,
                    s.tolerance,
                    if s.passed() { "PASS" } else { "FAIL" }
                )?;
            }
        }
        OutputFormat::JsonLines => {
            for s in &report.suites {
                json_line(out, s)?;
            }
        }
    }
    Ok(())
}
