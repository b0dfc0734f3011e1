use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stieltjes::bethe::{verify_polynomial, verify_solution_via_bae, RootSet, DEFAULT_BAE_TOLERANCE, DEFAULT_ROOT_DIGITS};
use stieltjes::casoratian::{casoratian_values, r_of, verify_abel};
use stieltjes::corpus::{build_entry, builtin, BuiltEntry, CorpusFile};
use stieltjes::gammah::{gamma_h, gamma_h_exact};
use stieltjes::norlund::{norlund_report, Phi, RegularizationConfig};
use stieltjes::scalar::{rational_to_f64, Real};
use stieltjes::uniqueness::certify;
use stieltjes::{polynomial_kernel, BigFloat, DifferenceEquation, Error, Precision, Rational};

use crate::error::{CliError, CliResult};
use crate::input::{rational_arg, read_json};
use crate::schema::*;

#[derive(Parser, Debug)]
#[command(name = "stieltjes", version, about = "Polynomial solutions of second-order difference equations")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub output: Format,
    /// Seed for randomized sampling.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Working precision in decimal digits.
    #[arg(long, env = "STIELTJES_DIGITS", global = true)]
    pub digits: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Polynomial solutions up to a degree bound.
    Solve(SolveArgs),
    /// Uniqueness certificate.
    Certify(InputArgs),
    /// Casoratian of two lattice solutions against its closed form.
    Casoratian(CasoratianArgs),
    /// Bethe-Ansatz check of the zeros of a polynomial solution.
    Bae(BaeArgs),
    /// Principal sums of the worked families.
    Norlund(NorlundArgs),
    /// The generalized gamma function.
    GammaH(GammaHArgs),
    /// Summary of the classical fixture corpus.
    Corpus(CorpusArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Equation JSON file.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub degree: usize,
}

#[derive(Args, Debug)]
pub struct CasoratianArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Start of the lattice.
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub x0: Rational,
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    /// Initial values `y(x0),y(x0+h)` of the first solution.
    #[arg(long, value_parser = rational_arg, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,0")]
    pub y1: Vec<Rational>,
    #[arg(long, value_parser = rational_arg, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1")]
    pub y2: Vec<Rational>,
    /// Draw both initial pairs from `--seed` instead.
    #[arg(long)]
    pub random_initial: bool,
}

#[derive(Args, Debug)]
pub struct BaeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Degree of the kernel element whose zeros are checked.
    #[arg(long, required_unless_present = "roots")]
    pub degree: Option<usize>,
    /// Check these zeros instead, comma separated.
    #[arg(long, value_parser = rational_arg, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "degree")]
    pub roots: Option<Vec<Rational>>,
    #[arg(long, default_value_t = DEFAULT_BAE_TOLERANCE)]
    pub tolerance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    Constant,
    Exp,
    Log,
}

#[derive(Args, Debug)]
pub struct NorlundArgs {
    #[arg(long, value_enum)]
    pub demo: Demo,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub h: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub x: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "0")]
    pub c: Rational,
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    #[arg(long, default_value_t = 0)]
    pub q: u32,
    /// Constant value, or coefficient of the exponential.
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "1")]
    pub a: Rational,
    /// Decay rate of the exponential.
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "1")]
    pub rate: Rational,
}

#[derive(Args, Debug)]
pub struct GammaHArgs {
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub h: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub x: Rational,
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    /// Corpus JSON file; the bundled fixture by default.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Only this entry.
    #[arg(long)]
    pub id: Option<String>,
    /// Cap on the degrees scanned per entry.
    #[arg(long)]
    pub max_degree: Option<u32>,
    /// Skip the Bethe-Ansatz checks.
    #[arg(long)]
    pub skip_bae: bool,
}

/// Serialized output of a command in both formats.
pub struct Rendered {
    pub json: String,
    pub text: String,
}

fn rendered<T: serde::Serialize + Render>(out: &T) -> Rendered {
    Rendered { json: serde_json::to_string_pretty(out).expect("outputs serialize"), text: out.text() }
}

pub fn run(cli: &Cli) -> CliResult<Rendered> {
    match &cli.command {
        Command::Solve(a) => solve(a).map(|o| rendered(&o)),
        Command::Certify(a) => certify_cmd(a).map(|o| rendered(&o)),
        Command::Casoratian(a) => casoratian(a, cli.digits, cli.seed).map(|o| rendered(&o)),
        Command::Bae(a) => bae(a, cli.digits).map(|o| rendered(&o)),
        Command::Norlund(a) => norlund(a).map(|o| rendered(&o)),
        Command::GammaH(a) => gamma_h_cmd(a, cli.digits).map(|o| rendered(&o)),
        Command::Corpus(a) => corpus(a, cli.digits).map(|o| rendered(&o)),
    }
}

fn equation(path: &std::path::Path) -> CliResult<DifferenceEquation> {
    read_json(path)
}

pub fn solve(a: &SolveArgs) -> CliResult<SolveOutput> {
    let equation = equation(&a.input)?;
    let kernel = polynomial_kernel(&equation, a.degree);
    Ok(SolveOutput { degrees: kernel.degrees(), equation, kernel })
}

pub fn certify_cmd(a: &InputArgs) -> CliResult<CertifyOutput> {
    Ok(certify(&equation(&a.input)?)?)
}

fn pair(v: &[Rational], name: &str) -> CliResult<(Rational, Rational)> {
    match v {
        [a, b] => Ok((a.clone(), b.clone())),
        _ => Err(CliError::Input(format!("--{name} needs exactly two values"))),
    }
}

pub fn casoratian(a: &CasoratianArgs, digits: Option<u32>, seed: u64) -> CliResult<CasoratianOutput> {
    let equation = equation(&a.input)?;
    let precision = Precision::digits(digits.unwrap_or(Precision::DEFAULT_DIGITS));
    let (y1, y2) = if a.random_initial {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || Rational::new(rng.random_range(-20i64..=20).into(), rng.random_range(1i64..=9).into());
        ((draw(), draw()), (draw(), draw()))
    } else {
        (pair(&a.y1, "y1")?, pair(&a.y2, "y2")?)
    };
    let steps = a.points + 2;
    let v1 = equation.cauchy_iterate(&a.x0, y1.0.clone(), y1.1.clone(), steps)?;
    let v2 = equation.cauchy_iterate(&a.x0, y2.0.clone(), y2.1.clone(), steps)?;
    let closed_form = r_of(&equation)?;
    let report = verify_abel(&equation, &v1, &v2, &a.x0, a.points, precision)?;
    let bits = precision.bits();
    let values = casoratian_values(&v1, &v2, equation.h())
        .into_iter()
        .take(a.points + 1)
        .enumerate()
        .map(|(k, w)| LatticePoint {
            x: &a.x0 + equation.h() * Rational::from_integer((k as i64).into()),
            w_decimal: BigFloat::from_rational(&w, bits).to_decimal_string(precision.decimal_digits() as usize),
            w,
        })
        .collect();
    Ok(CasoratianOutput {
        equation,
        x0: a.x0.clone(),
        y1_initial: vec![y1.0, y1.1],
        y2_initial: vec![y2.0, y2.1],
        precision_digits: precision.decimal_digits(),
        values,
        closed_form,
        report,
    })
}

pub fn bae(a: &BaeArgs, digits: Option<u32>) -> CliResult<BaeOutput> {
    let equation = equation(&a.input)?;
    let root_digits = digits.unwrap_or(DEFAULT_ROOT_DIGITS);
    let (polynomial, roots) = match (&a.roots, a.degree) {
        (Some(r), _) => (None, RootSet::new(r.clone())?),
        (None, Some(n)) => {
            let kernel = polynomial_kernel(&equation, n);
            let y = kernel
                .element_of_degree(n)
                .cloned()
                .ok_or_else(|| Error::Hypothesis(format!("no polynomial solution of degree {n}")))?;
            let roots = RootSet::from_polynomial(&y, root_digits)?;
            (Some(y), roots)
        }
        (None, None) => return Err(CliError::Input("either --degree or --roots is required".into())),
    };
    let report = verify_solution_via_bae(&equation, &roots, a.tolerance)?;
    Ok(BaeOutput { equation, polynomial, root_digits, report })
}

pub fn norlund(a: &NorlundArgs) -> CliResult<NorlundOutput> {
    let f = rational_to_f64;
    let phi = match a.demo {
        Demo::Constant => Phi::Constant { a: f(&a.a) },
        Demo::Exp => Phi::Exponential { coef: f(&a.a), rate: f(&a.rate) },
        Demo::Log => Phi::Logarithm,
    };
    let cfg = RegularizationConfig::with_pq(a.p, a.q);
    cfg.validate()?;
    let report = norlund_report(&phi, f(&a.c), f(&a.x), f(&a.h), &cfg)?;
    Ok(NorlundOutput { precision_digits: f64::DIGITS, report })
}

pub fn gamma_h_cmd(a: &GammaHArgs, digits: Option<u32>) -> CliResult<GammaHOutput> {
    let precision = Precision::digits(digits.unwrap_or(Precision::DEFAULT_DIGITS));
    let v = gamma_h(&a.x, &a.h, precision)?;
    Ok(GammaHOutput {
        x: a.x.clone(),
        h: a.h.clone(),
        pole: v.is_pole,
        pole_index: v.pole_index,
        value: (!v.is_pole).then(|| v.value.to_decimal_string(precision.decimal_digits() as usize)),
        exact: gamma_h_exact(&a.x, &a.h),
        precision_digits: precision.decimal_digits(),
    })
}

pub fn corpus(a: &CorpusArgs, digits: Option<u32>) -> CliResult<CorpusOutput> {
    let entries: Vec<BuiltEntry> = match &a.file {
        Some(path) => {
            let file: CorpusFile = read_json(path)?;
            file.entries.iter().map(build_entry).collect::<Result<_, _>>()?
        }
        None => builtin()?,
    };
    let root_digits = digits.unwrap_or(DEFAULT_ROOT_DIGITS);
    let mut out = Vec::new();
    for entry in entries.into_iter().filter(|e| a.id.as_ref().is_none_or(|id| &e.id == id)) {
        let top = a.max_degree.map_or(entry.max_degree, |m| m.min(entry.max_degree));
        let verdict = certify(&entry.equation(0)?)?.verdict;
        let mut degrees = Vec::new();
        for n in 0..=top {
            let eq = entry.equation(n)?;
            let kernel = polynomial_kernel(&eq, entry.max_degree as usize);
            let (bae_max, bae_pass) = match kernel.element_of_degree(n as usize) {
                Some(y) if n > 0 && !a.skip_bae => {
                    let rep = verify_polynomial(&eq, y, root_digits)?;
                    (Some(rep.bae_max), Some(rep.pass))
                }
                _ => (None, None),
            };
            degrees.push(CorpusDegree {
                n,
                lambda: entry.lambda_n(n),
                dimension: kernel.dimension,
                solution_degrees: kernel.degrees(),
                bae_max,
                bae_pass,
            });
        }
        out.push(CorpusSummary {
            id: entry.id,
            family: entry.family,
            data: entry.data,
            derivation: entry.derivation,
            verdict,
            degrees,
        });
    }
    if out.is_empty() {
        return Err(CliError::Input("no corpus entry matched".into()));
    }
    Ok(CorpusOutput { entries: out })
}
