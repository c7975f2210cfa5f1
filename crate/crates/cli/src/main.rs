use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use fqtuples::charsum::{pattern_count, weil_check, weil_trials, CharSumResult};
use fqtuples::checks::{run_suite, Suite};
use fqtuples::constructions::{construct, ConstructOptions, MethodChoice, Variant};
use fqtuples::cyclotomic::{cyclo_int, cyclo_mod};
use fqtuples::diophantine::verify_tuple;
use fqtuples::oracle::{exact_m, OracleCache, DEFAULT_MAX_Q};
use fqtuples::{Error, FieldDescriptor, FieldElement, FpPolynomial};

mod scan;

const EXIT_OK: u8 = 0;
const EXIT_PROPERTY: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "fqtuples", version, about = "Diophantine tuples over finite fields")]
struct Cli {
    /// Seed for every random choice (greedy sampling, random trials).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Emit JSON where the default output is plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a certified Diophantine tuple.
    Construct(ConstructArgs),
    /// Check that a set of elements is a Diophantine tuple.
    Verify {
        #[arg(long)]
        field: String,
        /// Comma-separated element codes.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        elements: Vec<u64>,
    },
    /// Exact M(q) by maximum-clique search.
    ExactM {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = DEFAULT_MAX_Q)]
        max_q: u64,
        /// JSON-lines cache of previous results.
        #[arg(long)]
        cache: Option<std::path::PathBuf>,
    },
    /// Run the automatic construction over a family of fields.
    Scan(scan::ScanArgs),
    /// Run a property suite: cyclo, weil, pattern, bounds, maximal, ncount or all.
    Check { suite: String },
    /// Coefficients of the n-th cyclotomic polynomial, low to high.
    Cyclo {
        #[arg(long)]
        n: u64,
        /// Reduce modulo this prime.
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Character-sum bounds.
    Charsum {
        #[command(subcommand)]
        command: CharsumCommand,
    },
    /// Describe a field: modulus, order residues, square classes of -1 and 2.
    FieldInfo {
        #[arg(long)]
        field: String,
    },
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    field: String,
    /// auto, case1, case2, mod8-3 or subfield.
    #[arg(long, default_value = "auto")]
    method: String,
    /// thm1 or thm35.
    #[arg(long, default_value = "thm1")]
    variant: String,
    /// Tuple parameter for explicit methods; defaults to floor(Q) made even.
    #[arg(long)]
    m: Option<u64>,
}

#[derive(Subcommand)]
enum CharsumCommand {
    /// Sum of chi(f(x)) against (r - 1) sqrt(q).
    Weil {
        #[arg(long)]
        field: String,
        /// Coefficients c0,c1,... of a monic polynomial over F_p.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        poly: Option<Vec<i64>>,
        /// Number of random square-free monic polynomials to try.
        #[arg(long, default_value_t = 0)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
    },
    /// Count x with chi(x + a_i) = eps_i and compare with q / 2^k.
    Pattern {
        #[arg(long)]
        field: String,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        shifts: Vec<u64>,
        /// Comma-separated + and - signs.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        signs: Vec<String>,
    },
}

/// A failed command: either bad input or a violated property.
pub(crate) enum Failure {
    Usage(String),
    Property(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoWitness(_) | Error::Distinctness(_) | Error::NotDiophantine { .. } | Error::Overflow(_) => {
                Failure::Property(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<bool, Failure>;

fn field(spec: &str) -> Result<FieldDescriptor, Failure> {
    Ok(FieldDescriptor::parse(spec)?)
}

fn elements(ctx: &FieldDescriptor, codes: &[u64]) -> Result<Vec<FieldElement>, Failure> {
    codes
        .iter()
        .map(|&c| ctx.element(c).map_err(Failure::from))
        .collect()
}

fn cmd_construct(args: &ConstructArgs, seed: u64) -> CmdResult {
    let ctx = field(&args.field)?;
    let options = ConstructOptions {
        method: args.method.parse::<MethodChoice>()?,
        variant: args.variant.parse::<Variant>()?,
        m: args.m,
        rng_seed: seed,
    };
    let report = construct(&ctx, options)?;
    println!("{}", report.to_json());
    Ok(report.passes(&ctx))
}

fn cmd_verify(spec: &str, codes: &[u64]) -> CmdResult {
    let ctx = field(spec)?;
    let report = verify_tuple(&ctx, &elements(&ctx, codes)?)?;
    let pair = report
        .violating_pair
        .map(|(i, j)| json!([report.elements[i].code(), report.elements[j].code()]));
    let out = json!({
        "field": ctx.id(),
        "ok": report.ok,
        "elements": report.elements,
        "violating_pair": pair,
        "certificate": report.certificate.as_ref().map(|c| c.triples()),
    });
    println!("{out}");
    Ok(report.ok)
}

fn cmd_exact_m(spec: &str, max_q: u64, cache: Option<&std::path::Path>) -> CmdResult {
    let ctx = field(spec)?;
    let mut cache = cache.map(OracleCache::open).transpose()?;
    let (rec, _) = exact_m(&ctx, max_q, cache.as_mut())?;
    let out = json!({
        "field": rec.field,
        "q": rec.q,
        "M": rec.m,
        "witness": rec.witness,
        "nodes": rec.nodes,
    });
    println!("{out}");
    Ok(true)
}

fn cmd_check(suite: &str, seed: u64, as_json: bool) -> CmdResult {
    let suite: Suite = suite.parse()?;
    let outcomes = run_suite(suite, seed)?;
    for o in &outcomes {
        if as_json {
            println!("{}", json!({"property": o.name, "passed": o.passed, "detail": o.detail}));
        } else {
            println!("{o}");
        }
    }
    Ok(outcomes.iter().all(|o| o.passed))
}

fn cmd_cyclo(n: u64, modulus: Option<u64>, as_json: bool) -> CmdResult {
    let coeffs: Vec<i64> = match modulus {
        Some(p) => cyclo_mod(p, n)?.coeffs().iter().map(|&c| c as i64).collect(),
        None => cyclo_int(n)?.coeffs().to_vec(),
    };
    if as_json {
        println!("{}", json!(coeffs));
    } else {
        let text: Vec<String> = coeffs.iter().map(i64::to_string).collect();
        println!("{}", text.join(" "));
    }
    Ok(true)
}

fn weil_line(f: &FpPolynomial, r: &CharSumResult) -> serde_json::Value {
    json!({
        "poly": f.coeffs(),
        "sum": r.sum,
        "degree": r.degree,
        "distinct_roots": r.distinct_roots,
        "bound": r.bound,
        "within_bound": r.within_bound,
    })
}

fn cmd_charsum(cmd: &CharsumCommand, seed: u64) -> CmdResult {
    match cmd {
        CharsumCommand::Weil {
            field: spec,
            poly,
            trials,
            max_degree,
        } => {
            let ctx = field(spec)?;
            if poly.is_none() && *trials == 0 {
                return Err(Failure::Usage("give --poly, --trials, or both".into()));
            }
            let mut all_ok = true;
            if let Some(coeffs) = poly {
                let f = FpPolynomial::from_signed(ctx.characteristic(), coeffs);
                let r = weil_check(&ctx, &f)?;
                all_ok &= r.within_bound;
                println!("{}", weil_line(&f, &r));
            }
            if *trials > 0 {
                for (f, r) in weil_trials(&ctx, *trials, *max_degree, seed)? {
                    all_ok &= r.within_bound;
                    println!("{}", weil_line(&f, &r));
                }
            }
            Ok(all_ok)
        }
        CharsumCommand::Pattern {
            field: spec,
            shifts,
            signs,
        } => {
            let ctx = field(spec)?;
            let signs = signs
                .iter()
                .map(|s| match s.trim() {
                    "+" | "+1" | "1" => Ok(1),
                    "-" | "-1" => Ok(-1),
                    other => Err(Failure::Usage(format!("bad sign {other:?}; use + or -"))),
                })
                .collect::<Result<Vec<i8>, _>>()?;
            let shifts = elements(&ctx, shifts)?;
            let r = pattern_count(&ctx, &shifts, &signs)?;
            let k = shifts.len() as i32;
            println!(
                "{}",
                json!({
                    "field": ctx.id(),
                    "N": r.n,
                    "expected": ctx.order() as f64 / 2f64.powi(k),
                    "bound_ok": r.bound_ok,
                })
            );
            Ok(r.bound_ok)
        }
    }
}

fn cmd_field_info(spec: &str, as_json: bool) -> CmdResult {
    let ctx = field(spec)?;
    let minus_one = ctx.neg(FieldElement::ONE);
    let info = json!({
        "field": ctx.id(),
        "p": ctx.characteristic(),
        "n": ctx.degree(),
        "q": ctx.order(),
        "modulus": ctx.modulus().coeffs(),
        "q_mod_8": ctx.order() % 8,
        "minus_one_is_square": ctx.is_square(minus_one),
        "two_is_square": ctx.is_square(ctx.from_int(2)),
        "sqrt_minus_one": ctx.sqrt(minus_one),
    });
    if as_json {
        println!("{info}");
    } else {
        println!("field {}", ctx.id());
        println!("order {} = {}^{}", ctx.order(), ctx.characteristic(), ctx.degree());
        println!("modulus {}", ctx.modulus());
        println!("q mod 8 = {}", ctx.order() % 8);
        println!("-1 square: {}", info["minus_one_is_square"]);
        println!("2 square: {}", info["two_is_square"]);
    }
    Ok(true)
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Construct(args) => cmd_construct(args, cli.seed),
        Command::Verify { field, elements } => cmd_verify(field, elements),
        Command::ExactM {
            field,
            max_q,
            cache,
        } => cmd_exact_m(field, *max_q, cache.as_deref()),
        Command::Scan(args) => scan::run(args, cli.seed),
        Command::Check { suite } => cmd_check(suite, cli.seed, cli.json),
        Command::Cyclo { n, modulus } => cmd_cyclo(*n, *modulus, cli.json),
        Command::Charsum { command } => cmd_charsum(command, cli.seed),
        Command::FieldInfo { field } => cmd_field_info(field, cli.json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::from(EXIT_OK),
        Ok(false) => ExitCode::from(EXIT_PROPERTY),
        Err(Failure::Property(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PROPERTY)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
