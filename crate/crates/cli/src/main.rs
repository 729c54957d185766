use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cyclolab_core::arith::{is_fundamental_discriminant, jacobi, legendre, octic_symbol_at_8, quartic_symbol};
use cyclolab_core::bqf::{quad_field_report, Limits};
use cyclolab_core::characters::characters_of_subfield;
use cyclolab_core::galmod::{run_enumeration, solve_e1_e2, tate_cohomology, EnumCheck, EnumLimits, GModule};
use cyclolab_core::genus::{c4_condition, redei_four_rank, scholz_real, signature_of_alpha, solve_conic, DEFAULT_CONIC_BOUND};
use cyclolab_core::minusclass::h_minus;
use cyclolab_core::predict::{predict_pq, predict_pqq, predict_three_primes};
use cyclolab_core::suite::{run_paper_suite, SuiteOptions, SuiteReport};
use cyclolab_core::towers::{corollary_c2_check, corollary_pq_check, ozaki_search, scan_c2, OzakiLimits};
use cyclolab_core::{arith, Error};

const SCHEMA: u32 = 1;
const MEM_ENV: &str = "CYCLOLAB_MAX_MEM_MB";

#[derive(Parser, Debug)]
#[command(name = "cyclolab", version, about = "Exact computations with quadratic and cyclotomic fields")]
struct Cli {
    /// Output format; scans default to csv, paper-suite to text, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Search bound (conic search, Ozaki prime search).
    #[arg(long, global = true, allow_hyphen_values = true)]
    bound: Option<i64>,
    /// Worker threads.
    #[arg(long, global = true, allow_hyphen_values = true)]
    jobs: Option<i64>,
    /// Restrict paper-suite to one module.
    #[arg(long, global = true)]
    only: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Legendre, Jacobi, quartic and octic residue symbols.
    Symbols(SymbolsArgs),
    /// Class number, narrow class number, unit and class group of a quadratic field.
    Quad(QuadArgs),
    /// Rédei 4-rank, Scholz condition and conic points.
    Genus(GenusArgs),
    /// Parity predictions for plus class numbers.
    Predict(PredictArgs),
    /// Class field tower criteria.
    Towers(TowersArgs),
    /// Dirichlet characters of a cyclotomic subfield.
    Chars(CharsArgs),
    /// Minus class number of an imaginary abelian field.
    Hminus(HminusArgs),
    /// Galois-module laboratory.
    Galmod(GalmodArgs),
    /// Regression suite over the worked examples.
    PaperSuite,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SymbolsArgs {
    #[arg(long, num_args = 2, value_names = ["A", "P"], allow_hyphen_values = true)]
    legendre: Option<Vec<i64>>,
    #[arg(long, num_args = 2, value_names = ["A", "N"], allow_hyphen_values = true)]
    jacobi: Option<Vec<i64>>,
    #[arg(long, num_args = 2, value_names = ["Q", "P"], allow_hyphen_values = true)]
    quartic: Option<Vec<i64>>,
    #[arg(long, value_name = "Q", allow_hyphen_values = true)]
    octic8: Option<i64>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct QuadArgs {
    #[arg(long = "D", value_name = "D", allow_hyphen_values = true)]
    d: Option<i64>,
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
    range: Option<Vec<i64>>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct GenusArgs {
    #[arg(long, value_name = "D", allow_hyphen_values = true)]
    four_rank: Option<i64>,
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    scholz: Option<Vec<u64>>,
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    conic: Option<Vec<u64>>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct PredictArgs {
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    pq: Option<Vec<u64>>,
    #[arg(long, value_name = "M")]
    m: Option<u64>,
    #[arg(long, num_args = 3, value_names = ["P", "Q", "Q2"])]
    pqq: Option<Vec<u64>>,
}

#[derive(Args, Debug)]
struct TowersArgs {
    #[arg(long, value_name = "P", conflicts_with_all = ["pq", "ozaki", "scan_c2"])]
    c2: Option<u64>,
    #[arg(long, num_args = 2, value_names = ["P", "Q"], conflicts_with_all = ["ozaki", "scan_c2"])]
    pq: Option<Vec<u64>>,
    #[arg(long, num_args = 2, value_names = ["ELL", "N"], conflicts_with = "scan_c2")]
    ozaki: Option<Vec<u64>>,
    #[arg(long, requires_all = ["min", "max"])]
    scan_c2: bool,
    #[arg(long)]
    min: Option<u64>,
    #[arg(long)]
    max: Option<u64>,
}

#[derive(Args, Debug)]
struct CharsArgs {
    #[arg(long)]
    modulus: u64,
    #[arg(long)]
    degree: u64,
}

#[derive(Args, Debug)]
struct HminusArgs {
    #[arg(long)]
    modulus: u64,
    /// Degree of the subfield; the full cyclotomic field if omitted.
    #[arg(long)]
    degree: Option<u64>,
}

#[derive(Args, Debug)]
struct GalmodArgs {
    #[arg(long, value_name = "P", conflicts_with_all = ["enumerate", "tate"])]
    e1e2: Option<u64>,
    #[arg(long, num_args = 2, value_names = ["P", "MAX_ORDER"], requires = "check")]
    enumerate: Option<Vec<u64>>,
    /// Module descriptor `p:e1,e2,...:rowmajor-sigma`.
    #[arg(long, value_name = "DESCRIPTOR", conflicts_with = "enumerate")]
    tate: Option<String>,
    #[arg(long, value_name = "CHECK")]
    check: Option<EnumCheck>,
}

/// Errors that stop a command before it reports; exit status 2.
enum Failure {
    /// Bad configuration or a computation error.
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.to_string())
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: &'a str,
    #[serde(flatten)]
    body: T,
}

struct Ctx {
    format: Option<Format>,
    bound: Option<u64>,
    only: Option<String>,
    limits: EnumLimits,
    out: String,
}

impl Ctx {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn emit<T: Serialize>(&mut self, command: &str, body: T) -> Result<(), Failure> {
        let env = Envelope { schema: SCHEMA, command, body };
        let s = match self.format_or(Format::Json) {
            Format::Json => serde_json::to_string(&env),
            Format::Text => serde_json::to_string_pretty(&env),
            Format::Csv => return Err(Failure::Config(format!("csv output is only available for scans, not `{command}`"))),
        }
        .map_err(|e| Failure::Config(e.to_string()))?;
        writeln!(self.out, "{s}").unwrap();
        Ok(())
    }
}

fn pair<T: Copy>(v: &[T]) -> (T, T) {
    (v[0], v[1])
}

fn validate(cli: &Cli) -> Result<Ctx, Failure> {
    let bound = match cli.bound {
        Some(b) if b <= 0 => return Err(Failure::Config(format!("--bound must be positive, got {b}"))),
        Some(b) => Some(b as u64),
        None => None,
    };
    if let Some(j) = cli.jobs {
        if j <= 0 {
            return Err(Failure::Config(format!("--jobs must be positive, got {j}")));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j as usize)
            .build_global()
            .map_err(|e| Failure::Config(e.to_string()))?;
    }
    let limits = match std::env::var(MEM_ENV) {
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(mb) if mb > 0 => EnumLimits::from_memory_mb(mb),
            _ => return Err(Failure::Config(format!("{MEM_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => EnumLimits::default(),
    };
    if cli.only.is_some() && !matches!(cli.command, Command::PaperSuite) {
        return Err(Failure::Config("--only applies to paper-suite".into()));
    }
    Ok(Ctx { format: cli.format, bound, only: cli.only.clone(), limits, out: String::new() })
}

#[derive(Serialize)]
struct SymbolRecord {
    op: &'static str,
    args: Vec<i64>,
    value: i32,
}

fn symbols(ctx: &mut Ctx, a: &SymbolsArgs) -> Result<(), Failure> {
    let (op, args, sym) = if let Some(v) = &a.legendre {
        ("legendre", v.clone(), legendre(v[0], v[1])?)
    } else if let Some(v) = &a.jacobi {
        ("jacobi", v.clone(), jacobi(v[0], v[1])?)
    } else if let Some(v) = &a.quartic {
        ("quartic", v.clone(), quartic_symbol(v[0], v[1])?)
    } else {
        let q = a.octic8.unwrap();
        ("octic8", vec![q], octic_symbol_at_8(q)?)
    };
    let value = sym.value();
    if ctx.format_or(Format::Json) == Format::Text {
        writeln!(ctx.out, "{value:+}").unwrap();
        return Ok(());
    }
    ctx.emit("symbols", SymbolRecord { op, args, value })
}

fn quad(ctx: &mut Ctx, a: &QuadArgs) -> Result<(), Failure> {
    let limits = Limits::default();
    if let Some(d) = a.d {
        let report = quad_field_report(d, &limits)?;
        return ctx.emit("quad", report);
    }
    let (lo, hi) = pair(a.range.as_deref().unwrap());
    if lo > hi {
        return Err(Failure::Config(format!("empty range {lo}..{hi}")));
    }
    let ds: Vec<i64> = (lo..=hi).filter(|&d| is_fundamental_discriminant(d)).collect();
    let rows: Vec<_> = {
        use rayon::prelude::*;
        ds.par_iter().map(|&d| quad_field_report(d, &limits)).collect::<Result<_, _>>()?
    };
    match ctx.format_or(Format::Csv) {
        Format::Csv => {
            writeln!(ctx.out, "D,h,h_plus,unit_norm").unwrap();
            for r in &rows {
                writeln!(ctx.out, "{},{},{},{}", r.d, r.h, r.h_plus, r.unit_norm).unwrap();
            }
            Ok(())
        }
        _ => {
            #[derive(Serialize)]
            struct Rows<T> {
                fields: Vec<T>,
            }
            ctx.emit("quad", Rows { fields: rows })
        }
    }
}

fn genus(ctx: &mut Ctx, a: &GenusArgs) -> Result<(), Failure> {
    if let Some(d) = a.four_rank {
        #[derive(Serialize)]
        struct R {
            #[serde(rename = "D")]
            d: i64,
            four_rank: usize,
        }
        let four_rank = redei_four_rank(d)?;
        return ctx.emit("genus", R { d, four_rank });
    }
    if let Some(v) = &a.scholz {
        let (p, q) = pair(v);
        #[derive(Serialize)]
        struct R {
            p: u64,
            q: u64,
            p_mod_q_quartic: i32,
            q_mod_p_quartic: i32,
            c4: bool,
            scholz_real: bool,
        }
        let c4 = c4_condition(p, q)?;
        let real = scholz_real(p, q)?;
        let r = R {
            p,
            q,
            p_mod_q_quartic: quartic_symbol(p, q)?.value(),
            q_mod_p_quartic: quartic_symbol(q, p)?.value(),
            c4,
            scholz_real: real,
        };
        return ctx.emit("genus", r);
    }
    let (p, q) = pair(a.conic.as_deref().unwrap());
    let sol = solve_conic(p, q, ctx.bound.unwrap_or(DEFAULT_CONIC_BOUND))?;
    let (s1, s2) = signature_of_alpha(&sol, p);
    #[derive(Serialize)]
    struct R<S> {
        p: u64,
        q: u64,
        solution: S,
        signature: (i32, i32),
    }
    ctx.emit("genus", R { p, q, solution: sol, signature: (s1.value(), s2.value()) })
}

fn predict(ctx: &mut Ctx, a: &PredictArgs) -> Result<(), Failure> {
    #[derive(Serialize)]
    struct R<T> {
        predictions: Vec<T>,
    }
    let predictions = if let Some(v) = &a.pq {
        predict_pq(v[0], v[1])?
    } else if let Some(m) = a.m {
        predict_three_primes(m)?.into_iter().collect()
    } else {
        let v = a.pqq.as_deref().unwrap();
        predict_pqq(v[0], v[1], v[2], ctx.bound.unwrap_or(DEFAULT_CONIC_BOUND))?.into_iter().collect()
    };
    ctx.emit("predict", R { predictions })
}

fn towers(ctx: &mut Ctx, a: &TowersArgs) -> Result<(), Failure> {
    if let Some(p) = a.c2 {
        return ctx.emit("towers", corollary_c2_check(p)?);
    }
    if let Some(v) = &a.pq {
        return ctx.emit("towers", corollary_pq_check(v[0], v[1])?);
    }
    if let Some(v) = &a.ozaki {
        let mut limits = OzakiLimits::default();
        if let Some(b) = ctx.bound {
            limits.max_r = b;
        }
        let params = ozaki_search(v[0], v[1], limits)?;
        return ctx.emit("towers", params);
    }
    if !a.scan_c2 {
        return Err(Failure::Config("towers needs one of --c2, --pq, --ozaki, --scan-c2".into()));
    }
    let (lo, hi) = (a.min.unwrap(), a.max.unwrap());
    let rows = scan_c2(lo, hi)?;
    match ctx.format_or(Format::Csv) {
        Format::Csv => {
            writeln!(ctx.out, "p,h,infinite").unwrap();
            for r in &rows {
                writeln!(ctx.out, "{},{},{}", r.p, r.h, r.infinite).unwrap();
            }
            Ok(())
        }
        _ => {
            #[derive(Serialize)]
            struct R<T> {
                rows: Vec<T>,
            }
            ctx.emit("towers", R { rows })
        }
    }
}

fn chars(ctx: &mut Ctx, a: &CharsArgs) -> Result<(), Failure> {
    let field = characters_of_subfield(a.modulus, a.degree)?;
    ctx.emit("chars", field)
}

fn hminus(ctx: &mut Ctx, a: &HminusArgs) -> Result<(), Failure> {
    let degree = a.degree.unwrap_or_else(|| arith::euler_phi(a.modulus.max(1)));
    let field = characters_of_subfield(a.modulus, degree)?;
    ctx.emit("hminus", h_minus(&field)?)
}

fn galmod(ctx: &mut Ctx, a: &GalmodArgs) -> Result<Option<String>, Failure> {
    if let Some(p) = a.e1e2 {
        let sol = solve_e1_e2(p)?;
        let failed = (!sol.verified).then(|| format!("(E1)/(E2) residuals are nonzero for p = {p}"));
        ctx.emit("galmod", sol)?;
        return Ok(failed);
    }
    if let Some(v) = &a.enumerate {
        let (p, max_order) = pair(v);
        let report = run_enumeration(p, max_order, a.check.unwrap(), &ctx.limits)?;
        let failed = (!report.counterexamples.is_empty())
            .then(|| format!("{} counterexamples", report.counterexamples.len()));
        ctx.emit("galmod", report)?;
        return Ok(failed);
    }
    if a.check.is_some() {
        return Err(Failure::Config("--check applies to --enumerate".into()));
    }
    let Some(descriptor) = a.tate.as_deref() else {
        return Err(Failure::Config("galmod needs one of --e1e2, --enumerate, --tate".into()));
    };
    let m = GModule::parse(descriptor)?;
    #[derive(Serialize)]
    struct R<T> {
        module: String,
        h0: T,
        h_minus1: T,
    }
    let r = R { module: m.descriptor(), h0: tate_cohomology(&m, 0)?, h_minus1: tate_cohomology(&m, -1)? };
    ctx.emit("galmod", r)?;
    Ok(None)
}

fn suite_table(report: &SuiteReport) -> String {
    let mut s = String::new();
    writeln!(s, "{:>3}  {:<7}  {:<4}  {:>9}  {}", "id", "module", "pass", "seconds", "check").unwrap();
    for c in &report.checks {
        let mark = if c.pass { "PASS" } else { "FAIL" };
        let secs = c.elapsed.as_secs_f64();
        writeln!(s, "{:>3}  {:<7}  {:<4}  {:>9.3}  {}", c.id, c.module, mark, secs, c.title).unwrap();
        if c.pass {
            writeln!(s, "{:>28}  {}", "", c.actual).unwrap();
        } else {
            writeln!(s, "{:>28}  expected: {}", "", c.expected).unwrap();
            writeln!(s, "{:>28}  actual:   {}", "", c.actual).unwrap();
        }
    }
    let passed = report.checks.iter().filter(|c| c.pass).count();
    writeln!(s, "{passed}/{} checks passed", report.checks.len()).unwrap();
    s
}

fn paper_suite(ctx: &mut Ctx) -> Result<Option<String>, Failure> {
    let opts = SuiteOptions {
        only: ctx.only.clone(),
        conic_bound: ctx.bound.unwrap_or(DEFAULT_CONIC_BOUND),
        limits: ctx.limits,
    };
    let report = run_paper_suite(&opts)?;
    let failed: Vec<String> = report.checks.iter().filter(|c| !c.pass).map(|c| c.id.to_string()).collect();
    match ctx.format_or(Format::Text) {
        Format::Text => ctx.out.push_str(&suite_table(&report)),
        Format::Csv => {
            writeln!(ctx.out, "id,module,pass,expected,actual").unwrap();
            for c in &report.checks {
                let q = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
                writeln!(ctx.out, "{},{},{},{},{}", c.id, c.module, c.pass, q(&c.expected), q(&c.actual)).unwrap();
            }
        }
        Format::Json => ctx.emit("paper-suite", &report)?,
    }
    Ok((!failed.is_empty()).then(|| format!("failed checks: {}", failed.join(", "))))
}

fn run(cli: &Cli, ctx: &mut Ctx) -> Result<Option<String>, Failure> {
    match &cli.command {
        Command::Symbols(a) => symbols(ctx, a).map(|_| None),
        Command::Quad(a) => quad(ctx, a).map(|_| None),
        Command::Genus(a) => genus(ctx, a).map(|_| None),
        Command::Predict(a) => predict(ctx, a).map(|_| None),
        Command::Towers(a) => towers(ctx, a).map(|_| None),
        Command::Chars(a) => chars(ctx, a).map(|_| None),
        Command::Hminus(a) => hminus(ctx, a).map(|_| None),
        Command::Galmod(a) => galmod(ctx, a),
        Command::PaperSuite => paper_suite(ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = validate(&cli).and_then(|mut ctx| {
        let r = run(&cli, &mut ctx);
        std::io::stdout().write_all(ctx.out.as_bytes()).ok();
        r
    });
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(msg)) => {
            eprintln!("cyclolab: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("cyclolab: error: {msg}");
            ExitCode::from(2)
        }
    }
}
