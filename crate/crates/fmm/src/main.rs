//! Command-line surface: verify schemes, multiply matrices, compose
//! schemes, count multiplications, benchmark, export catalog entries.
//!
//! Exit codes: 0 success/PASS, 1 verification FAIL, 2 usage error, 3 I/O or
//! parse error.

use clap::{Parser, Subcommand};
use fmm::catalog;
use fmm::compose::{compose, multiplication_count, recursive_multiply_counted, RecursionPlan};
use fmm::matrix::{parse_matrix, serialize_matrix, Matrix};
use fmm::ring::{parse_rational, Ring, RingKind, RingSpec};
use fmm::scheme::{parse_scheme, serialize_scheme, BilinearScheme};
use fmm::with_ring;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "fmm", version, about = "Verified fast matrix multiplication schemes")]
struct Cli {
    /// Coefficient ring: rat, fp:<p>, int64 or f64
    #[arg(long, global = true, default_value = "rat")]
    ring: String,

    /// Value assigned to the free parameter L (a rational, e.g. 2 or 1/2)
    #[arg(long, global = true, default_value = "1")]
    ell: String,

    /// Seed for randomized inputs
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a scheme: symbolic Brent equations plus the basis oracle
    Verify {
        /// Catalog name or scheme file path
        scheme: String,
    },
    /// Multiply two matrices read from files
    Mul {
        a: PathBuf,
        b: PathBuf,
        /// Output path (stdout if omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Recursion plan, e.g. `makarov99,strassen,cutoff=4`, or `naive`
        #[arg(long, default_value = "naive")]
        plan: String,
        /// Print the bilinear multiplication count to stderr
        #[arg(long)]
        count: bool,
    },
    /// Compose two schemes (Kronecker product) and write the result
    Compose {
        outer: String,
        inner: String,
        /// Output path (stdout if omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the exact bilinear multiplication count of a plan on n x n
    Count { plan: String, n: usize },
    /// Write a catalog entry in the scheme text format
    Export {
        name: String,
        /// Output path (stdout if omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Time recursive_multiply against the naive kernel; CSV to stdout
    Bench {
        /// Comma-separated matrix sizes, e.g. 64,125
        #[arg(long, default_value = "64")]
        sizes: String,
        /// Recursion plan (repeatable)
        #[arg(long = "plan", required = true)]
        plans: Vec<String>,
    },
}

enum CliError {
    Usage(String),
    IoOrParse(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::IoOrParse(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::IoOrParse(m) => m,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn io_err(msg: impl Into<String>) -> CliError {
    CliError::IoOrParse(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = match ring_spec(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return ExitCode::from(e.code());
        }
    };
    match run(&cli, &spec) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn ring_spec(cli: &Cli) -> Result<RingSpec, CliError> {
    let kind = RingSpec::parse_kind(&cli.ring).map_err(|e| usage(e.to_string()))?;
    let ell = parse_rational(&cli.ell).map_err(|e| usage(e.to_string()))?;
    RingSpec::new(kind, ell).map_err(|e| usage(e.to_string()))
}

fn load_scheme(reference: &str) -> Result<BilinearScheme, CliError> {
    if let Some(s) = catalog::by_name(reference) {
        return Ok(s);
    }
    let text = std::fs::read_to_string(reference)
        .map_err(|e| io_err(format!("`{reference}` is not a catalog name and reading it as a file failed: {e}")))?;
    parse_scheme(&text).map_err(|e| io_err(format!("{reference}: {e}")))
}

fn write_output(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| io_err(format!("writing {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: &Cli, spec: &RingSpec) -> Result<u8, CliError> {
    match &cli.command {
        Command::Verify { scheme } => cmd_verify(scheme, spec),
        Command::Mul {
            a,
            b,
            output,
            plan,
            count,
        } => cmd_mul(a, b, output, plan, *count, spec),
        Command::Compose {
            outer,
            inner,
            output,
        } => cmd_compose(outer, inner, output),
        Command::Count { plan, n } => {
            let plan = RecursionPlan::parse(plan).map_err(|e| usage(e.to_string()))?;
            println!("{}", multiplication_count(&plan, *n));
            Ok(0)
        }
        Command::Export { name, output } => {
            let scheme =
                catalog::by_name(name).ok_or_else(|| usage(format!("unknown catalog name `{name}`")))?;
            write_output(output, &serialize_scheme(&scheme))?;
            Ok(0)
        }
        Command::Bench { sizes, plans } => cmd_bench(sizes, plans, spec, cli.seed),
    }
}

fn cmd_verify(scheme_ref: &str, spec: &RingSpec) -> Result<u8, CliError> {
    if !spec.is_exact() {
        return Err(usage(format!(
            "verification requires an exact ring (rat or fp:<p>), not `{:?}`",
            spec.kind
        )));
    }
    let scheme = load_scheme(scheme_ref)?;
    let brent = scheme.verify_brent();
    let basis = with_ring!(spec, ring => {
        scheme
            .verify_basis_oracle(&ring)
            .map_err(|e| usage(e.to_string()))
    })?;
    let mut pass = true;
    let mut line = String::new();
    if brent.pass() {
        let _ = write!(line, "BRENT PASS {}/{}", brent.total, brent.total);
    } else {
        pass = false;
        let _ = write!(
            line,
            "BRENT FAIL {}/{}",
            brent.total - brent.failures.len(),
            brent.total
        );
    }
    if basis.pass() {
        let _ = write!(line, "; BASIS PASS {}/{}", basis.total, basis.total);
    } else {
        pass = false;
        let _ = write!(
            line,
            "; BASIS FAIL {}/{}",
            basis.total - basis.failures.len(),
            basis.total
        );
    }
    let _ = write!(line, "; rank {}", scheme.count_multiplications());
    println!("{line}");
    for f in &brent.failures {
        let (i, j, k, l, m, n) = f.indices;
        println!("brent ({i},{j},{k},{l},{m},{n}): residual {}", f.residual);
    }
    for f in &basis.failures {
        println!(
            "basis (i={},j={},k={},l={}): residual matrix\n{}",
            f.i, f.j, f.k, f.l, f.residual
        );
    }
    Ok(if pass { 0 } else { 1 })
}

fn cmd_mul(
    a_path: &PathBuf,
    b_path: &PathBuf,
    output: &Option<PathBuf>,
    plan: &str,
    count: bool,
    spec: &RingSpec,
) -> Result<u8, CliError> {
    let plan = RecursionPlan::parse(plan).map_err(|e| usage(e.to_string()))?;
    let read = |p: &PathBuf| {
        std::fs::read_to_string(p).map_err(|e| io_err(format!("reading {}: {e}", p.display())))
    };
    let (a_text, b_text) = (read(a_path)?, read(b_path)?);
    with_ring!(spec, ring => {
        let a = parse_matrix(&ring, &a_text)
            .map_err(|e| io_err(format!("{}: {e}", a_path.display())))?;
        let b = parse_matrix(&ring, &b_text)
            .map_err(|e| io_err(format!("{}: {e}", b_path.display())))?;
        let (c, mults) = recursive_multiply_counted(&ring, &a, &b, &plan)
            .map_err(|e| usage(e.to_string()))?;
        if count {
            eprintln!("mult_count: {mults}");
        }
        write_output(output, &serialize_matrix(&ring, &c))?;
        Ok(0)
    })
}

fn cmd_compose(
    outer: &str,
    inner: &str,
    output: &Option<PathBuf>,
) -> Result<u8, CliError> {
    let outer = load_scheme(outer)?;
    let inner = load_scheme(inner)?;
    let composed = compose(&outer, &inner).map_err(|e| usage(e.to_string()))?;
    // polynomial identity test at 13 distinct L values over a large prime:
    // residual exponent span stays well below the sample count for catalog
    // compositions, so passing here certifies the composite
    let p = (1u64 << 61) - 1;
    let ells: Vec<u64> = (1..=13).collect();
    let report = composed
        .verify_brent_sampled(p, &ells)
        .map_err(|e| usage(e.to_string()))?;
    if !report.pass() {
        eprintln!(
            "composite failed sampled Brent check: {} residuals over {} samples",
            report.failures, report.samples
        );
        return Ok(1);
    }
    write_output(output, &serialize_scheme(&composed))?;
    Ok(0)
}

fn cmd_bench(sizes: &str, plans: &[String], spec: &RingSpec, seed: u64) -> Result<u8, CliError> {
    let sizes: Vec<usize> = sizes
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("bad --sizes `{sizes}`")))?;
    let plans: Vec<RecursionPlan> = plans
        .iter()
        .map(|p| RecursionPlan::parse(p).map_err(|e| usage(e.to_string())))
        .collect::<Result<_, _>>()?;
    if matches!(spec.kind, RingKind::Rationals) && sizes.iter().any(|&n| n > 32) {
        return Err(usage(
            "benchmarking arbitrary-precision rationals beyond n=32 is impractically slow; \
             hint: use --ring int64, --ring f64 or --ring fp:<p>",
        ));
    }
    println!("n,plan,wall_seconds,mult_count");
    with_ring!(spec, ring => {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for &n in &sizes {
            let mut rand_elem = || ring.from_bigint(&BigInt::from(rng.gen_range(-9i64..10)));
            let a = Matrix::from_fn(n, n, |_, _| rand_elem());
            let b = Matrix::from_fn(n, n, |_, _| rand_elem());
            let start = Instant::now();
            let c_naive = a
                .naive_multiply(&ring, &b)
                .map_err(|e| usage(e.to_string()))?;
            let naive_secs = start.elapsed().as_secs_f64();
            println!("{n},naive,{naive_secs:.6},{}", (n as u128).pow(3));
            for plan in &plans {
                let start = Instant::now();
                let (c, mults) = recursive_multiply_counted(&ring, &a, &b, plan)
                    .map_err(|e| usage(e.to_string()))?;
                let secs = start.elapsed().as_secs_f64();
                if ring.is_exact() && c != c_naive {
                    eprintln!("warning: plan {} disagrees with naive at n={n}", plan.describe());
                }
                println!("{n},\"{}\",{secs:.6},{mults}", plan.describe());
            }
        }
        Ok(0)
    })
}
