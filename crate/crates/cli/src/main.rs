use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use hyperdet::field::RandomScalar;
use hyperdet::hyperdet::{symbolic_hyperdet_with, variable_names, SymbolicOptions, DEFAULT_TERM_BUDGET};
use hyperdet::io::{parse_hypermatrix, AnyHypermatrix};
use hyperdet::oracles::{count_enumerate, count_formula, degenerate_pencil_oracle, CountMethod, CountReport, DEFAULT_ENUMERATION_BUDGET};
use hyperdet::poly::io::to_json_string;
use hyperdet::reduction::{log_to_json, replay, verify_group};
use hyperdet::{canonicalize, hyperdeterminant, transporter, Error, Field, Fp, GroupElement, Hypermatrix, PrimeModulus, Rational};

const BUDGET_VAR: &str = "HYPERDET_BUDGET";

#[derive(Parser)]
#[command(name = "hyperdet", version, about = "Hyperdeterminants of 2 x k x (k+1) hypermatrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hyperdeterminant of a hypermatrix.
    Det {
        /// Hypermatrix JSON file; stdin when absent or "-".
        input: Option<PathBuf>,
    },
    /// Reduce to the canonical form, printing the result.
    Reduce {
        input: Option<PathBuf>,
        /// Write the operation log here.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Replay the log and check the accumulated group element.
        #[arg(long)]
        verify: bool,
    },
    /// Degeneracy verdict, by reduction and by pencil minors.
    Check { input: Option<PathBuf> },
    /// A group element carrying the first hypermatrix to the second.
    Transporter { from: PathBuf, to: PathBuf },
    /// Nondegenerate hypermatrices over F_q.
    Count {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Mode::Formula)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Method::Algorithm)]
        method: Method,
        /// Largest number of hypermatrices to enumerate.
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// The hyperdeterminant as an explicit polynomial.
    Formula {
        #[arg(long)]
        k: usize,
        /// Leave both slices indeterminate instead of fixing slice 0 to [I; 0].
        #[arg(long)]
        general: bool,
        /// Print the JSON term list instead of text.
        #[arg(long)]
        json: bool,
        /// Cap on the terms held by intermediate entries.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Operation counts and timings of random instances, as CSV.
    Bench {
        #[arg(long)]
        kmin: usize,
        #[arg(long)]
        kmax: usize,
        #[arg(long, value_enum, default_value_t = BenchField::Fp)]
        field: BenchField,
        #[arg(long, default_value_t = 10007)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, value_enum, default_value_t = Progression::Doubling)]
        progression: Progression,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Formula,
    Enumerate,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Algorithm,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchField {
    Fp,
    Rational,
}

#[derive(Clone, Copy, ValueEnum)]
enum Progression {
    Doubling,
    Linear,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::InvalidModulus(_) | Error::Precondition(_) => 2,
            Error::DimensionMismatch(_) | Error::VariableCountMismatch { .. } => 3,
            Error::Degenerate(_) => 4,
            Error::BudgetExceeded { .. } | Error::Infeasible(_) => 5,
            _ => 1,
        };
        let message = match &e {
            Error::Degenerate(r) => format!("degenerate: {}: {r}", r.code()),
            other => other.to_string(),
        };
        Failure { code, message }
    }
}

type CmdResult = Result<(), Failure>;

fn read_input(path: Option<&Path>) -> Result<AnyHypermatrix, Failure> {
    let text = match path {
        None => read_stdin()?,
        Some(p) if p.as_os_str() == "-" => read_stdin()?,
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::new(2, format!("{}: {e}", p.display())))?,
    };
    Ok(parse_hypermatrix(&text)?)
}

fn read_stdin() -> Result<String, Failure> {
    let mut s = String::new();
    io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Failure::new(2, format!("stdin: {e}")))?;
    Ok(s)
}

fn emit(line: &str) -> CmdResult {
    let mut out = io::stdout().lock();
    match writeln!(out, "{line}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::new(1, e.to_string())),
        _ => Ok(()),
    }
}

/// Flag, then environment, then default.
fn budget_from<N: std::str::FromStr>(flag: Option<N>, default: N) -> Result<N, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::new(2, format!("{BUDGET_VAR}={v:?} is not a valid budget"))),
        Err(_) => Ok(default),
    }
}

fn set_threads(threads: Option<usize>) -> CmdResult {
    if let Some(n) = threads {
        if n == 0 {
            return Err(Failure::new(2, "--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::new(1, e.to_string()))?;
    }
    Ok(())
}

fn det_json<T: Field>(m: &Hypermatrix<T>) -> String {
    let d = hyperdeterminant(m);
    json!({"det": d.value.to_string(), "degenerate": d.degenerate, "ops": d.op_count}).to_string()
}

fn cmd_det(input: Option<&Path>) -> CmdResult {
    match read_input(input)? {
        AnyHypermatrix::Fp(m) => emit(&det_json(&m)),
        AnyHypermatrix::Rational(m) => emit(&det_json(&m)),
    }
}

fn reduce_generic<T: Field>(
    m: &Hypermatrix<T>,
    wrap: impl Fn(Hypermatrix<T>) -> AnyHypermatrix,
    log: Option<&Path>,
    verify: bool,
) -> CmdResult {
    let out = canonicalize(m);
    if let Some(reason) = out.degenerate_reason() {
        return Err(Error::Degenerate(reason).into());
    }
    if let Some(path) = log {
        fs::write(path, log_to_json(&out.log)).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))?;
    }
    if verify {
        let replayed = replay(m, &out.log)?;
        if !replayed.is_identity() || !verify_group(m, &out)? {
            return Err(Failure::new(1, "verification failed"));
        }
        eprintln!("verified: {} operations replay to the canonical form", out.log.len());
    }
    emit(&wrap(out.result).to_json())
}

fn cmd_reduce(input: Option<&Path>, log: Option<&Path>, verify: bool) -> CmdResult {
    match read_input(input)? {
        AnyHypermatrix::Fp(m) => reduce_generic(&m, AnyHypermatrix::Fp, log, verify),
        AnyHypermatrix::Rational(m) => reduce_generic(&m, AnyHypermatrix::Rational, log, verify),
    }
}

fn check_json<T: Field>(m: &Hypermatrix<T>) -> String {
    let out = canonicalize(m);
    let mut v = json!({
        "degenerate": !out.is_reduced(),
        "pencilDegenerate": degenerate_pencil_oracle(m),
    });
    if let Some(r) = out.degenerate_reason() {
        v["reason"] = json!(r.code());
    }
    v.to_string()
}

fn cmd_check(input: Option<&Path>) -> CmdResult {
    match read_input(input)? {
        AnyHypermatrix::Fp(m) => emit(&check_json(&m)),
        AnyHypermatrix::Rational(m) => emit(&check_json(&m)),
    }
}

fn group_json<T: Field>(g: &GroupElement<T>, field: &str, p: Option<u64>) -> String {
    let rows = |m: &hyperdet::linalg::Matrix<T>| -> Vec<Vec<String>> {
        m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    };
    let mut v = json!({"field": field, "k": g.k(), "a": rows(g.a()), "b": rows(g.b())});
    if let Some(p) = p {
        v["p"] = json!(p);
    }
    v.to_string()
}

fn cmd_transporter(from: &Path, to: &Path) -> CmdResult {
    let (m1, m2) = (read_input(Some(from))?, read_input(Some(to))?);
    if m1.k() != m2.k() {
        return Err(Failure::new(3, format!("k differs: {} vs {}", m1.k(), m2.k())));
    }
    match (m1, m2) {
        (AnyHypermatrix::Fp(a), AnyHypermatrix::Fp(b)) => {
            if a.ctx() != b.ctx() {
                return Err(Failure::new(2, "the hypermatrices live over different prime fields"));
            }
            let g = transporter(&a, &b)?;
            emit(&group_json(&g, "fp", Some(a.ctx().get())))
        }
        (AnyHypermatrix::Rational(a), AnyHypermatrix::Rational(b)) => {
            let g = transporter(&a, &b)?;
            emit(&group_json(&g, "rational", None))
        }
        _ => Err(Failure::new(2, "the hypermatrices live over different fields")),
    }
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut r = q;
            while r % p == 0 {
                r /= p;
            }
            return r == 1;
        }
        p += 1;
    }
    true
}

fn cmd_count(k: u32, q: u64, mode: Mode, method: Method, budget: Option<u128>, threads: Option<usize>) -> CmdResult {
    if k == 0 {
        return Err(Failure::new(2, "--k must be positive"));
    }
    if !is_prime_power(q) {
        return Err(Failure::new(2, format!("--q {q} is not a prime power")));
    }
    set_threads(threads)?;
    let formula = count_formula(k, q);
    let enumerated = match mode {
        Mode::Formula => None,
        Mode::Enumerate | Mode::Both => {
            let budget = budget_from(budget, DEFAULT_ENUMERATION_BUDGET)?;
            let method = match method {
                Method::Algorithm => CountMethod::Algorithm,
                Method::Oracle => CountMethod::Oracle,
            };
            Some(count_enumerate(k as usize, q, method, budget)?)
        }
    };
    emit(&CountReport::new(k, q, &formula, enumerated.as_ref()).to_json())
}

fn cmd_formula(k: usize, general: bool, as_json: bool, budget: Option<usize>) -> CmdResult {
    if k == 0 {
        return Err(Failure::new(2, "--k must be positive"));
    }
    let opts = SymbolicOptions {
        term_budget: budget_from(budget, DEFAULT_TERM_BUDGET)?,
        ..SymbolicOptions::new(!general)
    };
    let start = Instant::now();
    let poly = symbolic_hyperdet_with(k, &opts)?;
    let coeffs: Vec<Rational> = poly.terms().iter().map(|(_, c)| c.clone()).collect();
    let (lo, hi) = (coeffs.iter().min(), coeffs.iter().max());
    if as_json {
        emit(&to_json_string(&poly))?;
    } else {
        emit(&poly.to_text(&variable_names(k, !general)))?;
    }
    eprintln!(
        "{} terms, coefficients in [{}, {}], {:.1} s",
        poly.len(),
        lo.map_or("-".into(), |c| c.to_string()),
        hi.map_or("-".into(), |c| c.to_string()),
        start.elapsed().as_secs_f64()
    );
    Ok(())
}

/// A random hypermatrix that reduces; resamples degenerate draws.
fn random_nondegenerate<T: RandomScalar>(ctx: &T::Ctx, k: usize, rng: &mut ChaCha8Rng) -> Hypermatrix<T> {
    loop {
        let m = Hypermatrix::from_fn(ctx, k, |_, _, _| T::random(ctx, rng));
        if !hyperdeterminant(&m).degenerate {
            return m;
        }
    }
}

fn bench_row<T: RandomScalar>(ctx: &T::Ctx, k: usize, reps: usize, seed: u64) -> (u64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut ops = 0;
    let mut times = Vec::with_capacity(reps);
    for rep in 0..reps {
        let m = random_nondegenerate::<T>(ctx, k, &mut rng);
        let start = Instant::now();
        let d = hyperdeterminant(&m);
        times.push(start.elapsed().as_secs_f64() * 1e3);
        if rep == 0 {
            ops = d.op_count;
        }
    }
    times.sort_by(f64::total_cmp);
    (ops, times[times.len() / 2])
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    kmin: usize,
    kmax: usize,
    field: BenchField,
    p: u64,
    reps: usize,
    progression: Progression,
    seed: u64,
    threads: Option<usize>,
) -> CmdResult {
    if kmin == 0 || kmax < kmin {
        return Err(Failure::new(2, "need 0 < kmin <= kmax"));
    }
    if reps == 0 {
        return Err(Failure::new(2, "--reps must be positive"));
    }
    set_threads(threads)?;
    let modulus = PrimeModulus::new(p)?;
    let mut ks = vec![kmin];
    while let Some(&last) = ks.last() {
        let next = match progression {
            Progression::Doubling => last * 2,
            Progression::Linear => last + 1,
        };
        if next > kmax {
            break;
        }
        ks.push(next);
    }
    emit("k,opCount,wallTimeMs")?;
    for k in ks {
        let (ops, ms) = match field {
            BenchField::Fp => bench_row::<Fp>(&modulus, k, reps, seed),
            BenchField::Rational => bench_row::<Rational>(&(), k, reps, seed),
        };
        emit(&format!("{k},{ops},{ms:.3}"))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Det { input } => cmd_det(input.as_deref()),
        Command::Reduce { input, log, verify } => cmd_reduce(input.as_deref(), log.as_deref(), verify),
        Command::Check { input } => cmd_check(input.as_deref()),
        Command::Transporter { from, to } => cmd_transporter(&from, &to),
        Command::Count {
            k,
            q,
            mode,
            method,
            budget,
            threads,
        } => cmd_count(k, q, mode, method, budget, threads),
        Command::Formula {
            k,
            general,
            json,
            budget,
        } => cmd_formula(k, general, json, budget),
        Command::Bench {
            kmin,
            kmax,
            field,
            p,
            reps,
            progression,
            seed,
            threads,
        } => cmd_bench(kmin, kmax, field, p, reps, progression, seed, threads),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
