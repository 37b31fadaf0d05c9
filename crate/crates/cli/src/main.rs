use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{ArgGroup, Args, CommandFactory, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use wieferich_core::abc::{abc_report, abc_report_for_scan, AbcReport, AbcTriple};
use wieferich_core::residue::{is_wieferich, rational_wieferich_scan, wieferich_residue};
use wieferich_core::scan::{harvest_nonwieferich, verify_growth_chain, FieldHeader, ScanDocument};
use wieferich_core::{
    Error, FactorBudget, FactorCache, Factorizer, Integers, NumberRing, PrimeElement, QuadraticField,
};

/// Non-Wieferich primes and abc heights in real quadratic fields.
///
/// Elements are written x+y*w, where w = (1+sqrt(m))/2 if m = 1 (mod 4) and
/// w = sqrt(m) otherwise. `--m 1` selects the rational integers where that
/// makes sense (factor, wieferich, scan, abc).
#[derive(Debug, Parser)]
#[command(name = "wieferich", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Opts {
    /// Emit JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV (scan only).
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    /// Write output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Pollard rho iteration cap per integer factorization.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget: u64,
    /// Seed for the randomized factoring steps.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON-lines factorization cache.
    #[arg(long, global = true, env = "WIEFERICH_CACHE", value_name = "FILE")]
    cache: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fundamental unit eps > 1.
    Unit {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
    },
    /// Factor an element into canonical prime elements.
    Factor {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Test base^(N(pi)-1) = 1 (mod pi^2).
    Wieferich {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        pi: String,
        #[arg(long, allow_hyphen_values = true)]
        base: String,
    },
    /// Stream the rational Wieferich primes p <= limit to an integer base.
    RationalScan {
        #[arg(long, allow_negative_numbers = true, default_value_t = 2)]
        base: i64,
        #[arg(long)]
        limit: u64,
    },
    /// Decompose eps^n - 1 for n <= n-max and harvest non-Wieferich primes.
    Scan {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, default_value_t = 18)]
        n_max: u64,
        /// Base unit; defaults to the fundamental unit (2 over Z).
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
    /// Height, radical and quality of an abc triple.
    #[command(group(ArgGroup::new("source").required(true).args(["triple", "from_scan"])))]
    Abc {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        /// Three elements separated by semicolons, summing to zero.
        #[arg(long, allow_hyphen_values = true)]
        triple: Option<String>,
        /// Use the triple (-eps^n, 1, eps^n - 1).
        #[arg(long, requires = "n")]
        from_scan: bool,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value = "1/10", value_parser = parse_rational)]
        delta: BigRational,
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
    /// Class number of Q(sqrt m).
    ClassNumber {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
    },
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let bad = || format!("`{s}` is not a rational number");
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Ring-specific defaults for the generic commands.
trait CliRing: NumberRing {
    fn prepare(&self) -> Result<(), Error>;
    fn default_base(&self) -> Self::Elem;
}

impl CliRing for Integers {
    fn prepare(&self) -> Result<(), Error> {
        Ok(())
    }

    fn default_base(&self) -> BigInt {
        BigInt::from(2)
    }
}

impl CliRing for QuadraticField {
    fn prepare(&self) -> Result<(), Error> {
        self.require_class_number_one()
    }

    fn default_base(&self) -> Self::Elem {
        self.epsilon().clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

struct Ctx<'a> {
    format: Format,
    fz: Factorizer<'a>,
    out: Box<dyn Write>,
}

impl Ctx<'_> {
    fn json<T: Serialize>(&mut self, value: &T) -> Result<(), Error> {
        let text = serde_json::to_string_pretty(value).map_err(|e| Error::Invalid(e.to_string()))?;
        self.line(&text)
    }

    fn line(&mut self, s: &str) -> Result<(), Error> {
        writeln!(self.out, "{s}").map_err(io_error)
    }
}

fn io_error(e: io::Error) -> Error {
    Error::Invalid(format!("write failed: {e}"))
}

#[derive(Serialize)]
struct WithField<T: Serialize> {
    field: FieldHeader,
    #[serde(flatten)]
    body: T,
}

fn with_field<R: NumberRing, T: Serialize>(ring: &R, body: T) -> WithField<T> {
    WithField {
        field: FieldHeader::of(ring),
        body,
    }
}

fn header_line<R: NumberRing>(ring: &R) -> String {
    let h = FieldHeader::of(ring);
    if ring.degree() == 1 {
        "# Z".to_string()
    } else {
        format!("# Q(sqrt({})), disc {}, elements {}", h.m, h.disc, h.basis)
    }
}

fn field(m: i64) -> Result<QuadraticField, Error> {
    QuadraticField::new(m)
}

fn cmd_unit(ctx: &mut Ctx, m: i64) -> Result<(), Error> {
    let k = field(m)?;
    let s = k.fundamental_unit().summary();
    match ctx.format {
        Format::Json => ctx.json(&with_field(&k, s)),
        _ => {
            ctx.line(&header_line(&k))?;
            ctx.line(&format!("epsilon = {}", s.epsilon))?;
            ctx.line(&format!("        = {}", s.sqrt_form))?;
            ctx.line(&format!("norm    = {}", s.norm))
        }
    }
}

fn cmd_class_number(ctx: &mut Ctx, m: i64) -> Result<(), Error> {
    let k = field(m)?;
    #[derive(Serialize)]
    struct Out {
        m: i64,
        disc: i64,
        class_number: u64,
    }
    let out = Out {
        m,
        disc: k.disc(),
        class_number: k.class_number(),
    };
    match ctx.format {
        Format::Json => ctx.json(&out),
        _ => ctx.line(&format!("h({k}) = {}", out.class_number)),
    }
}

#[derive(Serialize)]
struct FactorOut {
    element: String,
    unit: String,
    factors: Vec<FactorEntry>,
}

#[derive(Serialize)]
struct FactorEntry {
    pi: String,
    p: String,
    e: u32,
    f: u32,
    exponent: u32,
}

fn cmd_factor<R: CliRing>(ctx: &mut Ctx, ring: &R, element: &str) -> Result<(), Error> {
    ring.prepare()?;
    let a = ring.parse(element)?;
    let fac = ctx.fz.factor(ring, &a)?;
    let out = FactorOut {
        element: ring.format(&a),
        unit: ring.format(&fac.unit),
        factors: fac
            .factors
            .iter()
            .map(|(q, k)| FactorEntry {
                pi: ring.format(&q.pi),
                p: q.p.to_string(),
                e: q.e,
                f: q.f,
                exponent: *k,
            })
            .collect(),
    };
    match ctx.format {
        Format::Json => ctx.json(&with_field(ring, out)),
        _ => {
            ctx.line(&header_line(ring))?;
            let mut s = format!("{} = ({})", out.element, out.unit);
            for f in &out.factors {
                if f.exponent == 1 {
                    s.push_str(&format!(" * ({})", f.pi));
                } else {
                    s.push_str(&format!(" * ({})^{}", f.pi, f.exponent));
                }
            }
            ctx.line(&s)
        }
    }
}

fn as_prime<R: NumberRing>(ctx: &Ctx, ring: &R, pi: &R::Elem) -> Result<PrimeElement<R::Elem>, Error> {
    let fac = ctx.fz.factor(ring, pi)?;
    match fac.factors.as_slice() {
        [(q, 1)] => Ok(PrimeElement {
            pi: pi.clone(),
            p: q.p.clone(),
            f: q.f,
            e: q.e,
        }),
        _ => Err(Error::Invalid(format!("{} is not a prime element", ring.format(pi)))),
    }
}

fn cmd_wieferich<R: CliRing>(ctx: &mut Ctx, ring: &R, pi: &str, base: &str) -> Result<(), Error> {
    ring.prepare()?;
    let pi = ring.parse(pi)?;
    let base = ring.parse(base)?;
    let prime = as_prime(ctx, ring, &pi)?;
    if ring.exact_div(&base, &pi).is_some() {
        return Err(Error::BaseDivisible {
            p: prime.p.clone(),
            base: ring.format(&base),
        });
    }
    let residue = wieferich_residue(ring, &prime, &base);
    #[derive(Serialize)]
    struct Out {
        pi: String,
        base: String,
        wieferich: bool,
        residue: String,
    }
    let out = Out {
        pi: ring.format(&pi),
        base: ring.format(&base),
        wieferich: is_wieferich(ring, &prime, &base),
        residue: ring.format(&residue),
    };
    match ctx.format {
        Format::Json => ctx.json(&with_field(ring, out)),
        _ => {
            ctx.line(&header_line(ring))?;
            ctx.line(&format!(
                "({})^(N(pi)-1) = {} mod ({})^2: {}",
                out.base,
                out.residue,
                out.pi,
                if out.wieferich { "Wieferich" } else { "non-Wieferich" }
            ))
        }
    }
}

fn cmd_rational_scan(ctx: &mut Ctx, base: i64, limit: u64) -> Result<(), Error> {
    if ctx.format == Format::Json {
        let mut primes = Vec::new();
        rational_wieferich_scan(base, limit, |p| primes.push(p))?;
        #[derive(Serialize)]
        struct Out {
            base: i64,
            limit: u64,
            primes: Vec<u64>,
        }
        return ctx.json(&Out { base, limit, primes });
    }
    let mut failed = None;
    let out = &mut ctx.out;
    rational_wieferich_scan(base, limit, |p| {
        if failed.is_none() {
            if let Err(e) = writeln!(out, "{p}").and_then(|_| out.flush()) {
                failed = Some(e);
            }
        }
    })?;
    failed.map_or(Ok(()), |e| Err(io_error(e)))
}

fn parse_base<R: CliRing>(ring: &R, base: Option<&str>) -> Result<R::Elem, Error> {
    match base {
        Some(s) => ring.parse(s),
        None => Ok(ring.default_base()),
    }
}

fn cmd_scan<R: CliRing>(ctx: &mut Ctx, ring: &R, n_max: u64, base: Option<&str>) -> Result<(), Error> {
    ring.prepare()?;
    let base = parse_base(ring, base)?;
    let report = harvest_nonwieferich(ring, &base, n_max, &ctx.fz)?;
    let checks = verify_growth_chain(ring, &report)?;
    let doc = ScanDocument::build(ring, &report, checks);
    match ctx.format {
        Format::Json => ctx.json(&doc),
        Format::Csv => {
            let csv = doc.to_csv();
            ctx.out.write_all(csv.as_bytes()).map_err(io_error)
        }
        Format::Text => {
            ctx.line(&header_line(ring))?;
            ctx.line(&format!("# base {}", doc.unit))?;
            for (row, check) in doc.rows.iter().zip(&doc.chain_checks) {
                ctx.line(&format!(
                    "n={} Nu={} Nv={} u={} v={} unit={} exponent={:.6} primes=[{}]",
                    row.n,
                    row.nu,
                    row.nv,
                    row.u,
                    row.v,
                    row.unit,
                    check.quality_exponent,
                    row.primes.join(", ")
                ))?;
            }
            ctx.line(&format!(
                "distinct non-Wieferich primes ({}): {}",
                doc.distinct_primes.len(),
                doc.distinct_primes.join(", ")
            ))
        }
    }
}

fn print_abc<R: NumberRing>(ctx: &mut Ctx, ring: &R, report: &AbcReport) -> Result<(), Error> {
    if ctx.format == Format::Json {
        return ctx.json(&with_field(ring, report));
    }
    ctx.line(&header_line(ring))?;
    ctx.line(&format!("triple  = ({})", report.triple.join("; ")))?;
    ctx.line(&format!(
        "H       = {} ~ {:.6}",
        report.height_exact, report.height_approx
    ))?;
    ctx.line(&format!("rad     = {}", report.rad))?;
    match report.quality {
        Some(q) => ctx.line(&format!("quality = {q:.9}"))?,
        None => ctx.line("quality = undefined (rad = 1)")?,
    }
    for s in &report.support {
        ctx.line(&format!(
            "  {} over {}: {:?} -> {}",
            s.prime, s.p, s.valuations, s.contribution
        ))?;
    }
    if let Some(c) = &report.comparison {
        ctx.line(&format!(
            "|eps^{}| ~ {:.6} is {} than (Nu^2 sqrt(Nv))^(1+{}) ~ {:.6}",
            c.n, c.eps_pow_approx, c.ordering, c.delta, c.bound_approx
        ))?;
    }
    Ok(())
}

fn cmd_abc<R: CliRing>(
    ctx: &mut Ctx,
    ring: &R,
    triple: Option<&str>,
    n: Option<u64>,
    delta: &BigRational,
    base: Option<&str>,
) -> Result<(), Error> {
    ring.prepare()?;
    let report = match (triple, n) {
        (Some(t), _) => {
            let parts: Vec<&str> = t.split(';').collect();
            let [a, b, c] = parts.as_slice() else {
                return Err(Error::Parse {
                    input: t.to_string(),
                    reason: "expected three elements separated by `;`".into(),
                });
            };
            let t = AbcTriple::new(ring, ring.parse(a)?, ring.parse(b)?, ring.parse(c)?)?;
            abc_report(ring, &t, &ctx.fz)?
        }
        (None, Some(n)) => {
            let base = parse_base(ring, base)?;
            abc_report_for_scan(ring, &base, n, delta, &ctx.fz)?
        }
        (None, None) => unreachable!("clap enforces one source"),
    };
    print_abc(ctx, ring, &report)
}

fn run(cli: Cli) -> Result<(), Error> {
    let opts = &cli.opts;
    let format = if opts.json {
        Format::Json
    } else if opts.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let mut budget = FactorBudget::default().with_iterations(opts.budget);
    if let Some(seed) = opts.seed {
        budget = budget.with_seed(seed);
    }
    let cache = opts.cache.as_ref().map(FactorCache::open).transpose()?;
    let mut fz = Factorizer::new(budget);
    if let Some(c) = &cache {
        fz = fz.with_cache(c);
    }
    let out: Box<dyn Write> = match &opts.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    };
    let mut ctx = Ctx { format, fz, out };

    macro_rules! by_ring {
        ($m:expr, $f:ident ( $($arg:expr),* )) => {
            if $m == 1 {
                $f(&mut ctx, &Integers, $($arg),*)
            } else {
                let k = field($m)?;
                $f(&mut ctx, &k, $($arg),*)
            }
        };
    }

    match &cli.command {
        Command::Unit { m } => cmd_unit(&mut ctx, *m),
        Command::ClassNumber { m } => cmd_class_number(&mut ctx, *m),
        Command::Factor { m, element } => by_ring!(*m, cmd_factor(element)),
        Command::Wieferich { m, pi, base } => by_ring!(*m, cmd_wieferich(pi, base)),
        Command::RationalScan { base, limit } => cmd_rational_scan(&mut ctx, *base, *limit),
        Command::Scan { m, n_max, base } => by_ring!(*m, cmd_scan(*n_max, base.as_deref())),
        Command::Abc {
            m,
            triple,
            n,
            delta,
            base,
            ..
        } => by_ring!(*m, cmd_abc(triple.as_deref(), *n, delta, base.as_deref())),
    }?;
    ctx.out.flush().map_err(io_error)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.opts.csv && !matches!(cli.command, Command::Scan { .. }) {
        Cli::command()
            .error(ErrorKind::ArgumentConflict, "--csv is only supported by `scan`")
            .exit();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let body = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{body}");
            ExitCode::from(1)
        }
    }
}
