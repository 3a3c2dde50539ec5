//! The `phantom` command-line front end.
//!
//! Exit codes: `0` success, `1` a finding (invalid measure, failed check,
//! violated bound) or bad input, `2` a measure document that does not match
//! the schema.

pub mod expr;

use std::collections::BTreeSet;
use std::io::Write;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::distributions::{build, closed_form_stats, DistSpec, Prv};
use crate::error::PhantomError;
use crate::limits::{
    chebyshev_bound, chebyshev_c_form, clt_experiment, markov_bound, slln_experiment, wlln_experiment, Law,
    MarkovVariant, Selection, SimConfig, SimReport,
};
use crate::measure::{MeasureMode, PhantomMeasure, SampleSpace};
use crate::randvar::{DiscretePRV, RandomVariable, Threshold};
use crate::ring::{OrderKind, Phantom};
use expr::{eval_str, render_phantom};

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "PHANTOM_SEED";
/// Relative tolerance of `dist --check`.
pub const CHECK_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "phantom", version, about = "Phantom numbers and phantom probability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a phantom expression such as "(1+2*p)^3".
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Phantom probability measures.
    #[command(subcommand)]
    Measure(MeasureCommand),
    /// Statistics of a named distribution.
    Dist(DistArgs),
    /// Monte-Carlo checks of the limit theorems.
    Simulate(SimulateArgs),
    /// Markov and Chebyshev inequalities.
    #[command(subcommand)]
    Inequality(InequalityCommand),
}

#[derive(Debug, Subcommand)]
enum MeasureCommand {
    /// Validate a measure document.
    Validate {
        path: std::path::PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Bernoulli,
    Binomial,
    Geometric,
    Poisson,
    Exponential,
    Normal,
    Stdnormal,
}

#[derive(Debug, Clone, Args)]
struct Params {
    #[arg(long, allow_hyphen_values = true)]
    p_re: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    p_ph: f64,
    #[arg(long, allow_hyphen_values = true)]
    lambda_re: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    lambda_ph: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mu_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mu_ph: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    sigma_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    sigma_ph: f64,
    /// Number of trials (binomial).
    #[arg(long = "trials", default_value_t = 1)]
    trials: u32,
    /// Maximum series length (geometric, poisson).
    #[arg(long, default_value_t = 100_000)]
    cutoff: usize,
}

impl Params {
    fn spec(&self, kind: Kind) -> Result<DistSpec, PhantomError> {
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| PhantomError::BadParameter(format!("{flag} is required for this distribution")))
        };
        let p = || need(self.p_re, "--p-re").map(|re| Phantom::new(re, self.p_ph));
        let lambda = || need(self.lambda_re, "--lambda-re").map(|re| Phantom::new(re, self.lambda_ph));
        let mu = Phantom::new(self.mu_re, self.mu_ph);
        let sigma = Phantom::new(self.sigma_re, self.sigma_ph);
        Ok(match kind {
            Kind::Bernoulli => DistSpec::bernoulli(p()?),
            Kind::Binomial => DistSpec::binomial(self.trials, p()?),
            Kind::Geometric => DistSpec::Geometric { p: p()?, cutoff: self.cutoff },
            Kind::Poisson => DistSpec::Poisson { lambda: lambda()?, cutoff: self.cutoff },
            Kind::Exponential => DistSpec::exponential(lambda()?),
            Kind::Normal => DistSpec::normal(mu, sigma),
            Kind::Stdnormal => DistSpec::std_normal(),
        })
    }
}

#[derive(Debug, Args)]
struct DistArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[command(flatten)]
    params: Params,
    /// mean, var, std, mgf:ZETA, or cdf:Z, where ZETA and Z are expressions
    /// and Z may also be inf or -inf.
    #[arg(long, default_value = "mean")]
    stat: String,
    /// lex or alpha:A, used by cdf.
    #[arg(long, default_value = "lex")]
    order: String,
    /// Compare mean, var, or std with the closed form; exit 1 on mismatch.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_parser = ["wlln", "clt", "slln"])]
    law: String,
    /// A discrete distribution: bernoulli, binomial, geometric, or poisson.
    #[arg(long, value_enum, default_value = "bernoulli")]
    dist: Kind,
    #[command(flatten)]
    params: Params,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// re, red, or mid.
    #[arg(long, default_value = "re")]
    component: String,
    #[arg(long, value_enum, default_value = "csv")]
    out: OutFormat,
    /// Window tolerance for slln.
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
struct PmfSource {
    /// Support as "value@prob;value@prob;...", each side an expression.
    #[arg(long)]
    pmf: Option<String>,
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    #[command(flatten)]
    params: Params,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum InequalityCommand {
    Markov {
        #[command(flatten)]
        source: PmfSource,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// i, ii, or iii.
        #[arg(long, default_value = "iii")]
        variant: String,
        #[arg(long, default_value = "lex")]
        order: String,
    },
    Chebyshev {
        #[command(flatten)]
        source: PmfSource,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "c")]
        z: Option<String>,
        #[arg(long)]
        c: Option<f64>,
    },
}

/// Schema of the document read by `measure validate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    pub mode: MeasureMode,
    pub outcomes: Vec<OutcomeDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeDoc {
    pub label: String,
    pub re: f64,
    pub ph: f64,
}

impl MeasureDoc {
    /// Parses and checks the schema: well-formed JSON, the listed fields
    /// only, at least one outcome, unique labels, finite numbers.
    pub fn from_json(text: &str) -> Result<Self, String> {
        let doc: MeasureDoc = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if doc.outcomes.is_empty() {
            return Err("outcomes must not be empty".into());
        }
        let mut seen = BTreeSet::new();
        for o in &doc.outcomes {
            if !seen.insert(o.label.as_str()) {
                return Err(format!("duplicate label {:?}", o.label));
            }
            if !(o.re.is_finite() && o.ph.is_finite()) {
                return Err(format!("outcome {:?} has a non-finite number", o.label));
            }
        }
        Ok(doc)
    }

    /// The measure without axiom checks; validate it to learn its findings.
    pub fn to_measure(&self) -> crate::Result<PhantomMeasure> {
        let space = SampleSpace::new(self.outcomes.iter().map(|o| o.label.clone()))?;
        let weights = self.outcomes.iter().map(|o| Phantom::new(o.re, o.ph)).collect();
        PhantomMeasure::unchecked(space, weights, self.mode)
    }
}

/// An error that ends a command with a message and an exit code.
struct Fail {
    code: i32,
    message: String,
}

impl From<PhantomError> for Fail {
    fn from(e: PhantomError) -> Self {
        Fail { code: 1, message: e.to_string() }
    }
}

impl From<expr::EvalError> for Fail {
    fn from(e: expr::EvalError) -> Self {
        Fail { code: 1, message: e.to_string() }
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail { code: 1, message: e.to_string() }
    }
}

fn fail(message: impl Into<String>) -> Fail {
    Fail { code: 1, message: message.into() }
}

type CmdResult = Result<i32, Fail>;

/// Runs the CLI with `args` (program name first), reading the seed
/// override from the environment.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let seed_override = std::env::var(SEED_ENV).ok();
    run_with_seed(args, seed_override.as_deref(), out, err)
}

/// [`run`] with an explicit value for the seed override.
pub fn run_with_seed<I, S>(args: I, seed_override: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    if !text.contains("Usage:") {
                        let _ = writeln!(err, "\n{}", Cli::command().render_usage());
                    }
                    1
                }
            };
        }
    };
    let result = match cli.command {
        Command::Eval { expr } => cmd_eval(&expr, out),
        Command::Measure(MeasureCommand::Validate { path, json }) => cmd_measure_validate(&path, json, out),
        Command::Dist(args) => cmd_dist(&args, out),
        Command::Simulate(args) => cmd_simulate(&args, seed_override, out),
        Command::Inequality(cmd) => cmd_inequality(&cmd, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn cmd_eval(src: &str, out: &mut dyn Write) -> CmdResult {
    let v = eval_str(src)?;
    writeln!(out, "{}", expr::render(v))?;
    Ok(0)
}

fn cmd_measure_validate(path: &std::path::Path, json: bool, out: &mut dyn Write) -> CmdResult {
    let schema = |message: String| Fail { code: 2, message };
    let text = std::fs::read_to_string(path).map_err(|e| schema(format!("{}: {e}", path.display())))?;
    let doc = MeasureDoc::from_json(&text).map_err(|e| schema(format!("schema error: {e}")))?;
    let report = doc.to_measure().map_err(|e| schema(format!("schema error: {e}")))?.validate();
    if json {
        writeln!(out, "{}", serde_json::to_string(&report).map_err(|e| fail(e.to_string()))?)?;
    } else {
        let mode = match report.mode {
            MeasureMode::Strict => "strict",
            MeasureMode::Lenient => "lenient",
        };
        writeln!(out, "{} ({mode})", if report.valid { "valid" } else { "invalid" })?;
        for f in &report.findings {
            writeln!(out, "  {}", f.message)?;
        }
    }
    Ok(if report.valid { 0 } else { 1 })
}

fn parse_order(s: &str) -> Result<OrderKind, Fail> {
    match s {
        "lex" => Ok(OrderKind::Lex),
        "real" => Ok(OrderKind::RealTerm),
        "abs" => Ok(OrderKind::AbsNorm),
        _ => match s.strip_prefix("alpha:") {
            Some(a) => {
                let a: f64 = a.parse().map_err(|_| fail(format!("bad alpha in order {s:?}")))?;
                Ok(OrderKind::alpha(a)?)
            }
            None => Err(fail(format!("unknown order {s:?}; use lex, alpha:A, real, or abs"))),
        },
    }
}

fn parse_threshold(s: &str) -> Result<Threshold, Fail> {
    Ok(match s.trim() {
        "inf" | "+inf" => Threshold::PosInfinity,
        "-inf" => Threshold::NegInfinity,
        other => Threshold::At(eval_str(other)?.to_phantom()),
    })
}

fn phantom_json(z: Phantom) -> serde_json::Value {
    json!({ "re": z.re, "ph": z.ph, "text": render_phantom(z) })
}

fn cmd_dist(args: &DistArgs, out: &mut dyn Write) -> CmdResult {
    let spec = args.params.spec(args.kind)?;
    let built = build(&spec)?;
    let x = &built.prv;
    let (name, arg) = args.stat.split_once(':').unwrap_or((args.stat.as_str(), ""));
    let value = match (name, arg.is_empty()) {
        ("mean", true) => x.mean()?,
        ("var", true) => x.variance()?,
        ("std", true) => x.std_dev()?,
        ("mgf", false) => x.mgf(eval_str(arg)?.to_phantom())?,
        ("cdf", false) => x.cdf(parse_threshold(arg)?, parse_order(&args.order)?)?,
        _ => return Err(fail(format!("unknown statistic {:?}; use mean, var, std, mgf:ZETA, or cdf:Z", args.stat))),
    };
    let check = if args.check {
        let (mean, var) = closed_form_stats(&spec)?;
        let expected = match name {
            "mean" => mean,
            "var" => var,
            "std" => Phantom::from_components(var.re.max(0.0).sqrt(), var.reduction().max(0.0).sqrt()),
            _ => return Err(fail("--check supports mean, var, and std")),
        };
        let scale = expected.abs().max(1.0);
        let ok = (value.re - expected.re).abs() <= CHECK_TOL * scale
            && (value.reduction() - expected.reduction()).abs() <= CHECK_TOL * scale;
        Some((expected, ok))
    } else {
        None
    };
    if args.json {
        let mut doc = json!({
            "kind": spec.name(),
            "stat": args.stat,
            "value": phantom_json(value),
        });
        if let Some(r) = built.residual {
            doc["residual"] = phantom_json(r);
        }
        if let Some((expected, ok)) = check {
            doc["check"] = json!({ "closed_form": phantom_json(expected), "ok": ok });
        }
        writeln!(out, "{doc}")?;
    } else {
        writeln!(out, "{}", render_phantom(value))?;
        if let Some((expected, ok)) = check {
            writeln!(out, "check: closed form {} {}", render_phantom(expected), if ok { "ok" } else { "MISMATCH" })?;
        }
    }
    Ok(match check {
        Some((_, false)) => 1,
        _ => 0,
    })
}

fn discrete_of(kind: Kind, params: &Params) -> Result<DiscretePRV, Fail> {
    match build(&params.spec(kind)?)?.prv {
        Prv::Discrete(x) => Ok(x),
        Prv::Continuous(_) => Err(fail("this command needs a discrete distribution")),
    }
}

fn csv_report(r: &SimReport) -> String {
    let mut s = String::new();
    if r.law == Law::Clt {
        s.push_str("bin,empirical,target\n");
        for b in &r.clt_bins {
            s.push_str(&format!("{},{},{}\n", b.bin, b.empirical, b.target));
        }
    } else {
        s.push_str("n,deviation\n");
        for p in &r.per_n_curve {
            s.push_str(&format!("{},{}\n", p.n, p.deviation));
        }
    }
    s
}

fn cmd_simulate(args: &SimulateArgs, seed_override: Option<&str>, out: &mut dyn Write) -> CmdResult {
    let law: Law = args.law.parse()?;
    let selection: Selection = args.component.parse()?;
    let seed = match seed_override {
        Some(s) => s.trim().parse().map_err(|_| fail(format!("{SEED_ENV}={s:?} is not a 64-bit seed")))?,
        None => args.seed,
    };
    let x = discrete_of(args.dist, &args.params)?;
    let cfg = SimConfig::new(seed, args.reps, args.n, selection)?;
    let report = match law {
        Law::Wlln => wlln_experiment(&x, &cfg)?,
        Law::Clt => clt_experiment(&x, &cfg)?,
        Law::Slln => slln_experiment(&x, &cfg, args.epsilon)?,
    };
    let text = match args.out {
        OutFormat::Csv => csv_report(&report),
        OutFormat::Json => {
            let mut t = serde_json::to_string_pretty(&report).map_err(|e| fail(e.to_string()))?;
            t.push('\n');
            t
        }
    };
    match &args.output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(0)
}

/// Parses `"value@prob;value@prob"` with expressions on both sides.
pub fn parse_pmf(src: &str) -> crate::Result<DiscretePRV> {
    let mut support = Vec::new();
    for item in src.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (v, p) = item
            .split_once('@')
            .ok_or_else(|| PhantomError::InvalidVariable(format!("{item:?} is not value@prob")))?;
        let ev = |s: &str| {
            eval_str(s)
                .map(expr::Value::to_phantom)
                .map_err(|e| PhantomError::InvalidVariable(format!("{s:?}: {e}")))
        };
        support.push((ev(v)?, ev(p)?));
    }
    DiscretePRV::new(support)
}

fn source_prv(src: &PmfSource) -> Result<DiscretePRV, Fail> {
    match (&src.pmf, src.kind) {
        (Some(pmf), None) => Ok(parse_pmf(pmf)?),
        (None, Some(kind)) => discrete_of(kind, &src.params),
        _ => Err(fail("give exactly one of --pmf and --kind")),
    }
}

fn cmd_inequality(cmd: &InequalityCommand, out: &mut dyn Write) -> CmdResult {
    let (holds, json_doc, text) = match cmd {
        InequalityCommand::Markov { source, z, variant, order } => {
            let x = source_prv(source)?;
            let variant: MarkovVariant = variant.parse()?;
            let z = eval_str(z)?.to_phantom();
            let c = markov_bound(&x, z, variant, parse_order(order)?)?;
            let text = format!(
                "lhs = {}\nrhs = {}\nholds = {}\n",
                render_phantom(c.lhs),
                render_phantom(c.rhs),
                c.holds
            );
            (c.holds, (source.json, serde_json::to_value(c)), text)
        }
        InequalityCommand::Chebyshev { source, z, c } => {
            let x = source_prv(source)?;
            let check = match (z, c) {
                (Some(z), None) => chebyshev_bound(&x, eval_str(z)?.to_phantom())?,
                (None, Some(c)) => chebyshev_c_form(&x, *c)?,
                _ => return Err(fail("give exactly one of --z and --c")),
            };
            let text = format!(
                "lhs = {}\nrhs = {}\nholds = {}\n",
                expr::format_real(check.lhs),
                expr::format_real(check.rhs),
                check.holds
            );
            (check.holds, (source.json, serde_json::to_value(check)), text)
        }
    };
    match json_doc {
        (true, v) => writeln!(out, "{}", v.map_err(|e| fail(e.to_string()))?)?,
        (false, _) => out.write_all(text.as_bytes())?,
    }
    Ok(if holds { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["phantom"];
        full.extend_from_slice(args);
        let code = run_with_seed(full, None, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn eval_command() {
        assert_eq!(call(&["eval", "(1+2*p)^3"]), (0, "1 + p*26\n".into(), String::new()));
        let (code, _, err) = call(&["eval", "inv(p)"]);
        assert_eq!(code, 1);
        assert!(err.contains("not invertible"), "{err}");
    }

    #[test]
    fn dist_examples() {
        let (code, out, _) = call(&["dist", "--kind", "bernoulli", "--p-re", "0.4", "--p-ph", "0.2", "--stat", "var"]);
        assert_eq!((code, out.as_str()), (0, "0.24\n"));
        let (code, out, _) = call(&["dist", "--kind", "exponential", "--lambda-re", "2", "--lambda-ph", "2", "--stat", "mean"]);
        assert_eq!((code, out.as_str()), (0, "0.5 - p*0.25\n"));
        let (code, _, _) = call(&["dist", "--kind", "poisson", "--lambda-re", "-1"]);
        assert_eq!(code, 1);
        let (code, out, _) = call(&["dist", "--kind", "poisson", "--lambda-re", "3", "--lambda-ph", "1", "--stat", "var", "--check"]);
        assert_eq!(code, 0, "{out}");
    }

    #[test]
    fn simulate_rejects_unknown_law() {
        let (code, _, err) = call(&["simulate", "--law", "nope"]);
        assert_eq!(code, 1);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn inequality_commands() {
        let (code, out, _) = call(&["inequality", "markov", "--pmf", "0@0.6-0.2*p;1@0.4+0.2*p", "--z", "0.5"]);
        assert_eq!(code, 0, "{out}");
        let (code, out, _) = call(&["inequality", "chebyshev", "--kind", "bernoulli", "--p-re", "0.4", "--p-ph", "0.2", "--c", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("rhs = 0.25"), "{out}");
    }

    #[test]
    fn measure_doc_schema() {
        assert!(MeasureDoc::from_json(r#"{"mode":"strict","outcomes":[{"label":"H","re":0.4,"ph":0.2}]}"#).is_ok());
        assert!(MeasureDoc::from_json(r#"{"mode":"strict","outcomes":[]}"#).is_err());
        assert!(MeasureDoc::from_json(r#"{"mode":"odd","outcomes":[{"label":"H","re":1,"ph":0}]}"#).is_err());
        assert!(MeasureDoc::from_json(
            r#"{"mode":"strict","outcomes":[{"label":"H","re":1,"ph":0},{"label":"H","re":0,"ph":0}]}"#
        )
        .is_err());
        assert!(MeasureDoc::from_json(r#"{"mode":"strict","outcomes":[{"label":"H","re":1}]}"#).is_err());
    }
}
