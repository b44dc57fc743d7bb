//! The `mes` command line: products, coproducts, divisor series, numerical
//! values, Fourier expansions and relation checks.
//!
//! Exit status is 0 on success, 1 when a relation check fails and 2 on usage
//! or input errors.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Complex;
use serde_json::{json, Value};

use mes_core::eisenstein::Expander;
use mes_core::hopf::coproduct;
use mes_core::json::{
    divisor_to_json, estimate_to_json, expansion_to_json, lincomb_from_json, lincomb_to_json, report_to_json,
    tensor_to_json, with_schema,
};
use mes_core::numerics::{psi_mono_numeric, psi_multi_numeric, Estimate, PrecisionCtx, ZetaCache};
use mes_core::products::{harmonic, index_shuffle, tast, tsha};
use mes_core::qseries::{g_hat, g_sha_hat, NormalizedDivisor, QSeries};
use mes_core::relations::{self, GenFunctionForm, RelationReport};
use mes_core::words::{IndexWord, LinComb};

#[derive(Parser, Debug)]
#[command(name = "mes", version, about = "Multiple Eisenstein series of level N")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every subcommand. Flags override `MES_*` variables.
#[derive(Args, Clone, Debug)]
pub struct Config {
    /// Level N.
    #[arg(short = 'N', long = "level", env = "MES_LEVEL", default_value_t = 2, global = true,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub level: u32,
    /// Truncation order M of q-series.
    #[arg(short = 'M', long = "order", env = "MES_ORDER", default_value_t = 15, global = true)]
    pub order: usize,
    /// Working precision in bits.
    #[arg(long, env = "MES_PRECISION", default_value_t = 192, global = true,
          value_parser = clap::value_parser!(u32).range(64..))]
    pub precision: u32,
    /// Direct summation cutoff K for nested sums.
    #[arg(short = 'K', long = "cutoff", env = "MES_CUTOFF", default_value_t = 100_000, global = true,
          value_parser = clap::value_parser!(u64).range(1000..))]
    pub cutoff: u64,
    /// Output format; JSON by default, except for `check`.
    #[arg(long, env = "MES_FORMAT", value_enum, global = true)]
    pub format: Option<Format>,
}

impl Config {
    fn ctx(&self) -> PrecisionCtx {
        PrecisionCtx { precision: self.precision, series_cutoff: self.cutoff, ..PrecisionCtx::default() }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum YesNo {
    Yes,
    No,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductOp {
    /// Shuffle, through letter words.
    Sha,
    /// Harmonic product.
    Ast,
    /// Twisted shuffle.
    Tsha,
    /// Twisted harmonic product.
    Tast,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    /// Multiple zeta value of level N.
    Zeta,
    /// Shuffle-regularised value.
    ZetaSha,
    /// Monotangent function at τ.
    Mono,
    /// Multitangent function at τ.
    Multi,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationId {
    DoubleShuffle,
    Distribution,
    Sum,
    WeightedSum,
    WeightedSumDerived,
    GenFunction,
    GenFunctionDerived,
    Antipode,
    G5,
    Cusp,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Default,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Product of two combinations of index words.
    Product {
        #[arg(long, value_enum)]
        op: ProductOp,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Coproduct of a combination of index words.
    Coproduct {
        #[arg(long)]
        index: String,
    },
    /// Normalised divisor series, exact in Q(η).
    Gseries {
        #[arg(long)]
        index: String,
        #[arg(long, value_enum, num_args = 0..=1, default_missing_value = "yes", default_value = "no")]
        regularized: YesNo,
    },
    /// Numerical value with an error bound.
    Eval {
        #[arg(long, value_enum)]
        what: Quantity,
        #[arg(long)]
        index: String,
        /// τ as `re,im` for mono and multi.
        #[arg(long, default_value = "0,1")]
        tau: String,
    },
    /// Fourier expansion of a multiple Eisenstein series.
    Expand {
        #[arg(long)]
        index: String,
        #[arg(long, value_enum, num_args = 0..=1, default_missing_value = "yes", default_value = "no")]
        regularized: YesNo,
    },
    /// Relation checks.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long, value_enum, conflicts_with = "suite", required_unless_present = "suite")]
    pub relation: Option<RelationId>,
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Shorthand for `--format json`.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub lhs: Option<String>,
    #[arg(long)]
    pub rhs: Option<String>,
    #[arg(long)]
    pub index: Option<String>,
    /// Entries n_1,…,n_r for the distribution relation.
    #[arg(long, value_delimiter = ',')]
    pub ns: Vec<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub a: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub a1: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub a2: i64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Kernel(mes_core::error::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(s) => f.write_str(s),
            Failure::Kernel(e) => write!(f, "{e}"),
        }
    }
}

impl From<mes_core::error::Error> for Failure {
    fn from(e: mes_core::error::Error) -> Self {
        Failure::Kernel(e)
    }
}

type Outcome = Result<(String, bool), Failure>;

fn parse_json(s: &str) -> Result<Value, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::Usage(format!("malformed JSON {s:?}: {e}")))
}

fn comb(level: u32, s: &str) -> Result<LinComb<IndexWord>, Failure> {
    Ok(lincomb_from_json(Some(level), &parse_json(s)?)?)
}

fn single_word(level: u32, s: &str) -> Result<IndexWord, Failure> {
    let u = comb(level, s)?;
    let mut terms = u.iter();
    match (terms.next(), terms.next()) {
        (Some((w, c)), None) if c.is_one() => Ok(w.clone()),
        _ => Err(Failure::Usage(format!("expected a single index word, got {u}"))),
    }
}

fn parse_tau(s: &str, prec: u32) -> Result<Complex, Failure> {
    let bad = || Failure::Usage(format!("τ must be given as re,im with im > 0, got {s:?}"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    if !(im > 0.0) {
        return Err(bad());
    }
    Ok(Complex::with_val(prec, (re, im)))
}

fn render(v: Value) -> String {
    serde_json::to_string_pretty(&with_schema(v)).expect("values serialise") + "\n"
}

fn estimate_text(e: &Estimate) -> String {
    let v = estimate_to_json(e);
    let im = v["im"].as_str().unwrap();
    let (sign, im) = match im.strip_prefix('-') {
        Some(abs) => ('-', abs),
        None => ('+', im),
    };
    format!("{} {sign} {im}i ± {}", v["re"].as_str().unwrap(), v["error_bound"].as_str().unwrap())
}

fn product(cfg: &Config, op: ProductOp, lhs: &str, rhs: &str) -> Result<LinComb<IndexWord>, Failure> {
    let (u, v) = (comb(cfg.level, lhs)?, comb(cfg.level, rhs)?);
    Ok(match op {
        ProductOp::Sha => index_shuffle(&u, &v)?,
        ProductOp::Ast => harmonic(&u, &v)?,
        ProductOp::Tsha => tsha(&u, &v)?,
        ProductOp::Tast => tast(&u, &v)?,
    })
}

fn gseries(cfg: &Config, index: &str, regularized: bool) -> Result<NormalizedDivisor, Failure> {
    let u = comb(cfg.level, index)?;
    let mut out: Option<NormalizedDivisor> = None;
    for (w, c) in u.iter() {
        let g = if regularized { g_sha_hat(w, cfg.order) } else { g_hat(w, cfg.order) };
        let term = g.series.scale(c);
        out = Some(match out {
            None => NormalizedDivisor { weight: g.weight, series: term },
            Some(acc) if acc.weight == g.weight => {
                NormalizedDivisor { weight: acc.weight, series: acc.series.checked_add(&term)? }
            }
            Some(acc) => {
                return Err(Failure::Usage(format!("mixed weights {} and {} in {u}", acc.weight, g.weight)));
            }
        });
    }
    Ok(out.unwrap_or(NormalizedDivisor { weight: 0, series: QSeries::zero(cfg.level, cfg.order) }))
}

fn eval(cfg: &Config, what: Quantity, index: &str, tau: &str) -> Result<Estimate, Failure> {
    let ctx = cfg.ctx();
    match what {
        Quantity::Zeta | Quantity::ZetaSha => {
            let cache = ZetaCache::new(ctx);
            let u = comb(cfg.level, index)?;
            let mut acc = Estimate::zero(ctx.precision);
            for (w, c) in u.iter() {
                let v = if what == Quantity::Zeta { cache.zeta(w)? } else { cache.zeta_tsha(w)? };
                acc = acc.add(&v.scale(&c.to_complex(ctx.precision + 32)));
            }
            Ok(acc)
        }
        Quantity::Mono | Quantity::Multi => {
            let w = single_word(cfg.level, index)?;
            let t = parse_tau(tau, ctx.precision + 32)?;
            if what == Quantity::Mono {
                if w.depth() != 1 {
                    return Err(Failure::Usage(format!("a monotangent takes one entry, got {w}")));
                }
                let (n, a) = w.entries()[0];
                Ok(psi_mono_numeric(n, a as i64, cfg.level, &t, &ctx)?)
            } else {
                let a: Vec<i64> = w.residues().iter().map(|&x| x as i64).collect();
                Ok(psi_multi_numeric(&w.ns(), &a, cfg.level, &t, &ctx)?)
            }
        }
    }
}

fn need<T>(v: Option<T>, flag: &str, relation: RelationId) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("{relation:?} needs --{flag}")))
}

fn check_one(cfg: &Config, args: &CheckArgs, relation: RelationId, e: &Expander) -> Result<RelationReport, Failure> {
    let (level, order) = (cfg.level, cfg.order);
    let r = match relation {
        RelationId::DoubleShuffle => {
            let lhs = single_word(level, &need(args.lhs.clone(), "lhs", relation)?)?;
            let rhs = single_word(level, &need(args.rhs.clone(), "rhs", relation)?)?;
            relations::check_restricted_double_shuffle(&lhs, &rhs, order, e)?
        }
        RelationId::Distribution => {
            if args.ns.is_empty() {
                return Err(Failure::Usage("Distribution needs --ns".into()));
            }
            relations::check_distribution(&args.ns, level, order, e)?
        }
        RelationId::Sum => relations::check_sum_formula(need(args.k, "k", relation)?, args.a, level, order, e)?,
        RelationId::WeightedSum => {
            relations::check_weighted_sum_formula(need(args.k, "k", relation)?, args.a, level, order, e)?
        }
        RelationId::WeightedSumDerived => {
            relations::check_weighted_sum_formula_derived(need(args.k, "k", relation)?, args.a, level, order, e)?
        }
        RelationId::GenFunction | RelationId::GenFunctionDerived => {
            let form = if relation == RelationId::GenFunction { GenFunctionForm::Printed } else { GenFunctionForm::Derived };
            let k = need(args.k, "k", relation)?;
            relations::check_gen_function_identity(k, args.a1, args.a2, level, order, form, e)?
        }
        RelationId::Antipode => {
            let w = single_word(level, &need(args.index.clone(), "index", relation)?)?;
            relations::check_antipode_zeta(&w, e.zetas())?
        }
        RelationId::G5 => relations::check_g5_identity(order, e)?,
        RelationId::Cusp => relations::cusp_decomposition_demo(order.min(10), e)?,
    };
    Ok(r)
}

fn check(cfg: &Config, args: &CheckArgs) -> Outcome {
    let as_json = args.json || cfg.format == Some(Format::Json);
    let reports = match (args.suite, args.relation) {
        (Some(Suite::Default), _) => relations::default_suite(cfg.order, &cfg.ctx())?,
        (None, Some(relation)) => vec![check_one(cfg, args, relation, &Expander::new(cfg.ctx()))?],
        (None, None) => return Err(Failure::Usage("check needs --relation or --suite".into())),
    };
    let ok = reports.iter().all(|r| r.pass);
    let text = if as_json {
        let docs: Vec<Value> = reports.iter().map(|r| with_schema(report_to_json(r))).collect();
        serde_json::to_string_pretty(&docs).expect("values serialise") + "\n"
    } else {
        let mut s = String::new();
        for r in &reports {
            let v = report_to_json(r);
            s += &format!(
                "{} {} residual={} tolerance={} {}\n",
                if r.pass { "PASS" } else { "FAIL" },
                r.relation,
                v["residual"].as_str().unwrap_or("?"),
                v["tolerance"].as_str().unwrap_or("?"),
                v["params"]
            );
        }
        s += &format!("{}/{} passed\n", reports.iter().filter(|r| r.pass).count(), reports.len());
        s
    };
    Ok((text, ok))
}

fn execute(cli: &Cli) -> Outcome {
    let cfg = &cli.config;
    cfg.ctx().validate()?;
    let text = cfg.format == Some(Format::Text);
    let out = match &cli.command {
        Command::Product { op, lhs, rhs } => {
            let p = product(cfg, *op, lhs, rhs)?;
            if text { format!("{p}\n") } else { render(lincomb_to_json(&p)) }
        }
        Command::Coproduct { index } => {
            let t = coproduct(&comb(cfg.level, index)?);
            if text { format!("{t}\n") } else { render(tensor_to_json(&t)) }
        }
        Command::Gseries { index, regularized } => {
            let g = gseries(cfg, index, *regularized == YesNo::Yes)?;
            if text {
                let mut s = format!("weight {}\n", g.weight);
                for (m, c) in g.series.coeffs().iter().enumerate() {
                    s += &format!("q^{m}: {c}\n");
                }
                s
            } else {
                render(divisor_to_json(&g))
            }
        }
        Command::Eval { what, index, tau } => {
            let v = eval(cfg, *what, index, tau)?;
            if text {
                estimate_text(&v) + "\n"
            } else {
                let q = match what {
                    Quantity::Zeta => "zeta",
                    Quantity::ZetaSha => "zeta-sha",
                    Quantity::Mono => "mono",
                    Quantity::Multi => "multi",
                };
                let mut doc = json!({ "N": cfg.level, "what": q, "index": parse_json(index)?, "value": estimate_to_json(&v) });
                if matches!(what, Quantity::Mono | Quantity::Multi) {
                    doc["tau"] = json!(tau);
                }
                render(doc)
            }
        }
        Command::Expand { index, regularized } => {
            let u = comb(cfg.level, index)?;
            let e = Expander::new(cfg.ctx());
            let f = if *regularized == YesNo::Yes { e.g_sha_fourier(&u, cfg.order)? } else { e.g_fourier(&u, cfg.order)? };
            if text {
                let mut s = String::new();
                for (m, c) in f.coeffs.iter().enumerate() {
                    s += &format!("q^{m}: {}\n", estimate_text(c));
                }
                s
            } else {
                render(expansion_to_json(&f))
            }
        }
        Command::Check(args) => return check(cfg, args),
    };
    Ok((out, true))
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// status. Output goes to `out`, diagnostics to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, ok)) => {
            let _ = out.write_all(text.as_bytes());
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
