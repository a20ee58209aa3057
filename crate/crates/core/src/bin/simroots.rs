use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use simroots::cli::{
    cmd_check, cmd_compare, cmd_solve, exit, parse_coefficient_file, parse_complex_list, Initial,
    JobSpec, MethodChoice, OutputFormat,
};
use simroots::solvers::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use simroots::{Error, Result};

/// Simultaneous polynomial root finding (Weierstrass-Kerner and Chebyshev-Tanabe).
#[derive(Parser)]
#[command(name = "simroots", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find all roots of a monic polynomial.
    Solve(JobArgs),
    /// Run both methods from the same start and compare their convergence.
    Compare(JobArgs),
    /// Cross-check the closed forms against dense linear algebra and finite differences.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Wdk,
    Chebyshev,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Jsonl,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Jsonl => OutputFormat::JsonLines,
        }
    }
}

#[derive(Args)]
struct JobArgs {
    /// Coefficients a_0 .. a_{n-1} (leading 1 implied), e.g. "6 0 -5 0" or "1+i,2".
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "coeffs_file",
        required_unless_present = "coeffs_file"
    )]
    coeffs: Option<String>,
    /// File with one coefficient per line, a_0 first; '#' starts a comment.
    #[arg(long)]
    coeffs_file: Option<PathBuf>,
    /// Explicit start vector, one complex per root.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "circle_seed")]
    start: Option<String>,
    /// Seed for the default start on a circle around the root centroid.
    #[arg(long)]
    circle_seed: Option<u64>,
    #[arg(long, value_enum, default_value = "both")]
    method: MethodArg,
    /// Stop when the 1-norm of the step drops below this.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Print every iterate.
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 6)]
    degree: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

impl JobArgs {
    fn into_spec(self) -> Result<JobSpec> {
        let coefficients = match (&self.coeffs, &self.coeffs_file) {
            (Some(list), _) => parse_complex_list(list)?,
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                parse_coefficient_file(&text)?
            }
            (None, None) => return Err(Error::Parse("no coefficients given".into())),
        };
        let initial = match self.start {
            Some(s) => Initial::Explicit(parse_complex_list(&s)?),
            None => Initial::Circle(self.circle_seed.unwrap_or(0)),
        };
        Ok(JobSpec {
            coefficients,
            initial,
            method: match self.method {
                MethodArg::Wdk => MethodChoice::Wdk,
                MethodArg::Chebyshev => MethodChoice::Chebyshev,
                MethodArg::Both => MethodChoice::Both,
            },
            tol: self.tol,
            max_iter: self.max_iter,
            trace: self.trace,
            output_format: self.format.into(),
        })
    }
}

fn run(cli: Cli) -> Result<i32> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match cli.command {
        Command::Solve(args) => cmd_solve(&args.into_spec()?, &mut out)?,
        Command::Compare(args) => cmd_compare(&args.into_spec()?, &mut out)?,
        Command::Check(args) => cmd_check(
            args.degree,
            args.trials,
            args.seed,
            args.format.into(),
            &mut out,
        )?,
    };
    out.flush().map_err(|e| Error::Io(e.to_string()))?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Error::OutputClosed) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("simroots: {e}");
            ExitCode::from(exit::USAGE as u8)
        }
    }
}
