//! `hlzeta` — point evaluation, parameter sweeps and identity checks.
//!
//! Exit codes: 0 success, 1 an identity check failed, 2 a computation did
//! not converge or left the double range, 3 bad input.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use hlzeta::extended_beta::{ebeta, EBetaArgs};
use hlzeta::extended_hypergeometric::{ehyp2f1, ehyp2f1_check};
use hlzeta::hlz::{hlz_check, hlz_eval, HlzParams};
use hlzeta::identity_lab::{run_identity_suite, IdentityGroup, SuiteConfig};
use hlzeta::json::{number, ParamEcho, Record};
use hlzeta::mittag_leffler::{ml_eval, MlDomain};
use hlzeta::quadrature::QuadratureSpec;
use hlzeta::series::SeriesOptions;
use hlzeta::{Approx, Error};

const MAX_SWEEP_POINTS: usize = 1_000_000;

#[derive(Parser)]
#[command(
    name = "hlzeta",
    version,
    about = "Extended Hurwitz-Lerch zeta function toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function at one point and print a JSON record.
    Eval {
        target: Target,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Evaluate on an evenly spaced grid in one parameter.
    Sweep {
        target: Target,
        /// Parameter to sweep.
        #[arg(long)]
        param: String,
        #[arg(long, allow_hyphen_values = true)]
        start: f64,
        #[arg(long, allow_hyphen_values = true)]
        stop: f64,
        /// Number of grid points, including both ends.
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Run identity checks and print the reports as a JSON array.
    Verify {
        /// Identity groups to run.
        names: Vec<String>,
        /// Run every group.
        #[arg(long, conflicts_with = "names")]
        all: bool,
        #[arg(long)]
        rep_tol: Option<f64>,
        #[arg(long)]
        mellin_tol: Option<f64>,
        #[arg(long)]
        genfun_tol: Option<f64>,
        #[arg(long)]
        derivative_rel_tol: Option<f64>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Print the version.
    Version,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    /// Extended beta B(x, y; p, λ).
    Ebeta,
    /// Mittag-Leffler E_λ(z).
    Ml,
    /// Extended hypergeometric F(s1, s2; s3; z; p, λ).
    Hyp,
    /// Extended Hurwitz-Lerch zeta Φ_{γ,ϑ;υ}(z, σ, a; p, λ).
    Hlz,
}

impl Target {
    /// Parameter names in output order, with defaults.
    fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            Target::Ebeta => &[("x", 1.5), ("y", 2.5), ("p", 1.0), ("lambda", 1.0)],
            Target::Ml => &[("lambda", 0.5), ("z", -1.0)],
            Target::Hyp => &[
                ("s1", 1.0),
                ("s2", 1.0),
                ("s3", 2.0),
                ("z", 0.5),
                ("p", 0.0),
                ("lambda", 1.0),
            ],
            Target::Hlz => &[
                ("gamma", 1.0),
                ("theta", 1.0),
                ("upsilon", 2.0),
                ("a", 1.0),
                ("sigma", 2.0),
                ("p", 0.0),
                ("lambda", 1.0),
                ("z", 0.5),
            ],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Target::Ebeta => "ebeta",
            Target::Ml => "ml",
            Target::Hyp => "hyp",
            Target::Hlz => "hlz",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    s1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    s2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    s3: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    upsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<f64>,
}

impl ParamArgs {
    fn given(&self) -> Vec<(&'static str, f64)> {
        [
            ("x", self.x),
            ("y", self.y),
            ("s1", self.s1),
            ("s2", self.s2),
            ("s3", self.s3),
            ("gamma", self.gamma),
            ("theta", self.theta),
            ("upsilon", self.upsilon),
            ("a", self.a),
            ("sigma", self.sigma),
            ("p", self.p),
            ("lambda", self.lambda),
            ("z", self.z),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .collect()
    }
}

#[derive(Args)]
struct TolArgs {
    /// Relative tolerance of every quadrature.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Absolute tolerance of every quadrature.
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Finest quadrature refinement level.
    #[arg(long)]
    max_level: Option<u32>,
    /// Relative stopping tolerance of every series.
    #[arg(long)]
    series_tol: Option<f64>,
    /// Term budget of every series.
    #[arg(long)]
    max_terms: Option<usize>,
}

impl TolArgs {
    fn apply(
        &self,
        mut spec: QuadratureSpec,
        mut opts: SeriesOptions,
    ) -> Result<(QuadratureSpec, SeriesOptions), Error> {
        if let Some(v) = self.rel_tol {
            spec.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            spec.abs_tol = v;
        }
        if let Some(v) = self.max_level {
            spec.max_level = v;
        }
        if let Some(v) = self.series_tol {
            opts.rel_tol = v;
        }
        if let Some(v) = self.max_terms {
            opts.max_terms = v;
        }
        spec.validate()?;
        opts.validate()?;
        Ok((spec, opts))
    }
}

enum Failure {
    Core(Error),
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::NonConvergent(_) | Error::NonFinite(_) | Error::Overflow(_)) => 2,
            Failure::Core(_) | Failure::Usage(_) => 3,
            Failure::Io(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

type Values = Vec<(&'static str, f64)>;

/// Defaults overridden by the given flags; flags foreign to the target are refused.
fn resolve(target: Target, params: &ParamArgs) -> Result<Values, Failure> {
    let mut values: Values = target.defaults().to_vec();
    for (name, v) in params.given() {
        match values.iter_mut().find(|(k, _)| *k == name) {
            Some(slot) => slot.1 = v,
            None => {
                return Err(Failure::Usage(format!(
                    "parameter --{name} does not apply to target {}",
                    target.name()
                )))
            }
        }
    }
    Ok(values)
}

fn get(values: &[(&str, f64)], name: &str) -> f64 {
    values
        .iter()
        .find(|(k, _)| *k == name)
        .map(|&(_, v)| v)
        .expect("target parameter")
}

fn hlz_params(v: &[(&str, f64)]) -> HlzParams {
    HlzParams {
        gamma: get(v, "gamma"),
        theta: get(v, "theta"),
        upsilon: get(v, "upsilon"),
        a: get(v, "a"),
        sigma: get(v, "sigma"),
        p: get(v, "p"),
        lambda: get(v, "lambda"),
    }
}

fn check(target: Target, v: &[(&str, f64)]) -> Result<(), Error> {
    match target {
        Target::Ebeta => {
            EBetaArgs::new(get(v, "x"), get(v, "y"), get(v, "p"), get(v, "lambda")).map(|_| ())
        }
        Target::Ml => MlDomain::new(get(v, "lambda"), get(v, "z")).map(|_| ()),
        Target::Hyp => ehyp2f1_check(
            get(v, "s1"),
            get(v, "s2"),
            get(v, "s3"),
            get(v, "z"),
            get(v, "p"),
            get(v, "lambda"),
        ),
        Target::Hlz => hlz_check(&hlz_params(v), get(v, "z")),
    }
}

fn evaluate(
    target: Target,
    v: &[(&str, f64)],
    spec: &QuadratureSpec,
    opts: &SeriesOptions,
) -> Result<Approx, Error> {
    match target {
        Target::Ebeta => ebeta(
            EBetaArgs::new(get(v, "x"), get(v, "y"), get(v, "p"), get(v, "lambda"))?,
            spec,
        ),
        Target::Ml => ml_eval(get(v, "lambda"), get(v, "z")),
        Target::Hyp => ehyp2f1(
            get(v, "s1"),
            get(v, "s2"),
            get(v, "s3"),
            get(v, "z"),
            get(v, "p"),
            get(v, "lambda"),
            opts,
            spec,
        ),
        Target::Hlz => hlz_eval(&hlz_params(v), get(v, "z"), opts, spec),
    }
}

fn cmd_eval(target: Target, params: &ParamArgs, tol: &TolArgs) -> Result<String, Failure> {
    let (spec, opts) = tol.apply(QuadratureSpec::default(), SeriesOptions::default())?;
    let values = resolve(target, params)?;
    check(target, &values)?;
    let approx = evaluate(target, &values, &spec, &opts)?;
    log::info!(
        "{} evaluated with {} units of work",
        target.name(),
        approx.work
    );
    let echo = ParamEcho::new(values.iter().copied());
    let mut out = serde_json::to_string(&Record {
        approx: &approx,
        params: &echo,
    })
    .expect("record serializes");
    out.push('\n');
    Ok(out)
}

struct SweepRequest<'a> {
    target: Target,
    param: &'a str,
    start: f64,
    stop: f64,
    count: usize,
    format: Format,
}

fn grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    let step = (stop - start) / (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i + 1 == count {
                stop
            } else {
                start + step * i as f64
            }
        })
        .collect()
}

fn cmd_sweep(req: &SweepRequest, params: &ParamArgs, tol: &TolArgs) -> Result<String, Failure> {
    let SweepRequest {
        target,
        param,
        start,
        stop,
        count,
        format,
    } = *req;
    if !(2..=MAX_SWEEP_POINTS).contains(&count) {
        return Err(Failure::Usage(format!(
            "--count must lie in [2, {MAX_SWEEP_POINTS}], got {count}"
        )));
    }
    if !(start.is_finite() && stop.is_finite() && start < stop) {
        return Err(Failure::Usage(format!(
            "need finite --start < --stop, got {start} and {stop}"
        )));
    }
    let (spec, opts) = tol.apply(QuadratureSpec::default(), SeriesOptions::default())?;
    let base = resolve(target, params)?;
    let slot = base.iter().position(|(k, _)| *k == param).ok_or_else(|| {
        Failure::Usage(format!("target {} has no parameter {param}", target.name()))
    })?;
    if params.given().iter().any(|(k, _)| *k == param) {
        return Err(Failure::Usage(format!(
            "--{param} is swept and cannot also be fixed"
        )));
    }
    let points: Vec<Values> = grid(start, stop, count)
        .into_iter()
        .map(|x| {
            let mut v = base.clone();
            v[slot].1 = x;
            v
        })
        .collect();
    for v in &points {
        check(target, v)?;
    }
    let results = points
        .par_iter()
        .map(|v| evaluate(target, v, &spec, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("x,value,err_est,work\n");
            for (v, r) in points.iter().zip(&results) {
                let (x, value, err) = (number(v[slot].1), number(r.value), number(r.err_est));
                writeln!(out, "{},{},{},{}", x.get(), value.get(), err.get(), r.work)
                    .expect("string write");
            }
        }
        Format::Json => {
            let echoes: Vec<ParamEcho> = points
                .iter()
                .map(|v| ParamEcho::new(v.iter().copied()))
                .collect();
            let records: Vec<Record> = results
                .iter()
                .zip(&echoes)
                .map(|(approx, params)| Record { approx, params })
                .collect();
            out = serde_json::to_string_pretty(&records).expect("records serialize");
            out.push('\n');
        }
    }
    Ok(out)
}

struct VerifyTolerances {
    rep: Option<f64>,
    mellin: Option<f64>,
    genfun: Option<f64>,
    derivative: Option<f64>,
}

fn cmd_verify(
    names: &[String],
    all: bool,
    tols: &VerifyTolerances,
    tol: &TolArgs,
) -> Result<(String, bool), Failure> {
    let groups = if all {
        IdentityGroup::ALL.to_vec()
    } else {
        if names.is_empty() {
            return Err(Failure::Usage(
                "name identity groups to run, or pass --all".into(),
            ));
        }
        names
            .iter()
            .map(|n| {
                IdentityGroup::from_name(n).ok_or_else(|| {
                    let known: Vec<_> = IdentityGroup::ALL.iter().map(|g| g.name()).collect();
                    Failure::Usage(format!(
                        "unknown identity group {n:?}; known: {}",
                        known.join(", ")
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    let mut config = SuiteConfig::only(&groups);
    (config.spec, config.opts) = tol.apply(config.spec, config.opts)?;
    for (slot, v) in [
        (&mut config.representation_tol, tols.rep),
        (&mut config.mellin_tol, tols.mellin),
        (&mut config.genfun_tol, tols.genfun),
        (&mut config.derivative_rel_tol, tols.derivative),
    ] {
        if let Some(v) = v {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Failure::Usage(format!(
                    "tolerances must be positive, got {v}"
                )));
            }
            *slot = v;
        }
    }
    let reports = run_identity_suite(&config);
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        log::warn!("{failed} of {} identity checks failed", reports.len());
    }
    let mut out = serde_json::to_string_pretty(&reports).expect("reports serialize");
    out.push('\n');
    Ok((out, failed == 0))
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Eval {
            target,
            params,
            tol,
        } => emit(&cmd_eval(target, &params, &tol)?, None).map(|_| true),
        Command::Sweep {
            target,
            param,
            start,
            stop,
            count,
            format,
            output,
            params,
            tol,
        } => {
            let req = SweepRequest {
                target,
                param: &param,
                start,
                stop,
                count,
                format,
            };
            // nothing is written unless every row succeeded
            let text = cmd_sweep(&req, &params, &tol)?;
            emit(&text, output.as_ref()).map(|_| true)
        }
        Command::Verify {
            names,
            all,
            rep_tol,
            mellin_tol,
            genfun_tol,
            derivative_rel_tol,
            tol,
        } => {
            let tols = VerifyTolerances {
                rep: rep_tol,
                mellin: mellin_tol,
                genfun: genfun_tol,
                derivative: derivative_rel_tol,
            };
            let (text, passed) = cmd_verify(&names, all, &tols, &tol)?;
            emit(&text, None)?;
            Ok(passed)
        }
        Command::Version => {
            emit(&format!("hlzeta {}\n", env!("CARGO_PKG_VERSION")), None).map(|_| true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HLZETA_LOG", "off")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("hlzeta: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
