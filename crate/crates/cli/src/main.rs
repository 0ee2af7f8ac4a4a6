use std::error::Error as StdError;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_traits::Zero;
use qmf::detect::{census, macmahon_prime_tests, macmahon_tables, prime_detect_verdict};
use qmf::exact::parse_rational;
use qmf::newforms::{galois_trace_check_11, verify_hecke, Ingested, NewformRegistry, NewformSource};
use qmf::qseries::{parse_series_file, write_series_file, SeriesFile};
use qmf::quasimodular::{assemble_basis, Decomposer, PartSet};
use qmf_cli::evaluate;

type CliResult = Result<ExitCode, Box<dyn StdError>>;

/// Exit code for a clean run whose verdict is negative.
const VERDICT_FALSE: u8 = 2;

#[derive(Parser)]
#[command(name = "qmf", version, about = "Exact quasimodular forms on Gamma0(N) and prime-detecting series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the canonical basis of max weight 2k, optionally with expansions.
    Basis {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        maxweight: u32,
        #[arg(long, default_value = "all")]
        part: PartSet,
        #[arg(long)]
        prec: Option<usize>,
    },
    /// Expand a form to precision P as a q-series v1 file.
    Expand {
        #[arg(long)]
        form: String,
        #[arg(long)]
        prec: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coordinates of a q-series file in the basis of max weight 2k.
    Decompose {
        #[arg(long)]
        series: PathBuf,
        /// Defaults to the file's `level:` header.
        #[arg(long)]
        level: Option<u64>,
        /// Defaults to the file's `maxweight:` header.
        #[arg(long)]
        maxweight: Option<u32>,
    },
    /// Check that a form vanishes exactly at the primes not dividing N, up to X.
    Detect {
        #[arg(long)]
        form: String,
        #[arg(long)]
        level: u64,
        #[arg(long)]
        xmax: u64,
    },
    /// Count primes p <= X, p not dividing N, with vanishing coefficient.
    Census {
        #[arg(long)]
        form: String,
        #[arg(long)]
        level: u64,
        #[arg(long)]
        xmax: u64,
        /// Exponent of eps(X) in the reported bound, as a fraction or decimal.
        #[arg(long)]
        delta: String,
    },
    /// Nonzero values M_a(n) for n < nmax.
    Macmahon {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        nmax: usize,
        /// Print v(n) = (n^2-3n+2)M_1(n) - 8M_2(n) and its verdict instead.
        #[arg(long)]
        prime_test: bool,
    },
    /// Inspect and extend the newform catalog.
    Newforms {
        #[command(subcommand)]
        action: NewformsAction,
    },
}

#[derive(Subcommand)]
enum NewformsAction {
    /// List catalog records.
    List {
        #[arg(long)]
        level: Option<u64>,
        #[arg(long)]
        weight: Option<u32>,
    },
    /// Verify and add a newform from a q-series v1 file with level, weight and label headers.
    Ingest { file: PathBuf },
    /// Check the Hecke relations of every record.
    Check {
        #[arg(long, default_value_t = 500)]
        prec: usize,
    },
    /// Compare a(p) at level 11 with point counts on the attached elliptic curve.
    Trace {
        #[arg(long, default_value_t = 199)]
        pmax: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Basis { level, maxweight, part, prec } => basis(level, maxweight, part, prec),
        Command::Expand { form, prec, out } => expand(&form, prec, out),
        Command::Decompose { series, level, maxweight } => decompose(series, level, maxweight),
        Command::Detect { form, level, xmax } => detect(&form, level, xmax),
        Command::Census { form, level, xmax, delta } => run_census(&form, level, xmax, &delta),
        Command::Macmahon { a, nmax, prime_test } => run_macmahon(a, nmax, prime_test),
        Command::Newforms { action } => newforms(action),
    }
}

fn basis(level: u64, maxweight: u32, part: PartSet, prec: Option<usize>) -> CliResult {
    let registry = NewformRegistry::from_env()?;
    let atoms = assemble_basis(&registry, level, maxweight, part)?;
    for atom in &atoms {
        println!("{atom}");
    }
    if let Some(p) = prec {
        for atom in &atoms {
            let mut file = SeriesFile::new(atom.expand(p)?);
            file.level = Some(level);
            file.max_weight = Some(atom.weight());
            println!("# atom {atom}");
            print!("{}", write_series_file(&file)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn expand(form: &str, prec: usize, out: Option<PathBuf>) -> CliResult {
    if prec < 2 {
        return Err("precision must be at least 2".into());
    }
    let registry = NewformRegistry::from_env()?;
    let f = evaluate(form, &registry, prec)?;
    let mut file = SeriesFile::new(f.series);
    file.level = f.level;
    file.max_weight = f.weight;
    let text = write_series_file(&file)?;
    match out {
        Some(path) => fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn decompose(path: PathBuf, level: Option<u64>, maxweight: Option<u32>) -> CliResult {
    let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file = parse_series_file(&text)?;
    let level = level.or(file.level).ok_or("no level given and the file has no `level:` header")?;
    let maxweight =
        maxweight.or(file.max_weight).ok_or("no max weight given and the file has no `maxweight:` header")?;
    let registry = NewformRegistry::from_env()?;
    let decomposer = Decomposer::new(&registry, level, maxweight, PartSet::ALL)?;
    let d = match decomposer.decompose(&file.series) {
        Err(qmf::Error::InsufficientPrecision { required, available }) => {
            return Err(format!(
                "insufficient precision: the basis needs {required} coefficients, the file has {available}; \
                 re-expand with --prec {required}"
            )
            .into())
        }
        other => other?,
    };
    print!("{}", d.report());
    Ok(if d.residual() { ExitCode::from(VERDICT_FALSE) } else { ExitCode::SUCCESS })
}

fn detect(form: &str, level: u64, xmax: u64) -> CliResult {
    let registry = NewformRegistry::from_env()?;
    let f = evaluate(form, &registry, xmax as usize + 1)?;
    let v = prime_detect_verdict(&f.series, level, xmax)?;
    if v.prime_detecting() {
        println!("prime-detecting");
        return Ok(ExitCode::SUCCESS);
    }
    println!("not prime-detecting");
    println!("nonvanishing_primes: {}", join(&v.nonvanishing_primes));
    println!("vanishing_others: {}", join(&v.vanishing_others));
    Ok(ExitCode::from(VERDICT_FALSE))
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn run_census(form: &str, level: u64, xmax: u64, delta: &str) -> CliResult {
    let delta = parse_rational(delta)?;
    let registry = NewformRegistry::from_env()?;
    let f = evaluate(form, &registry, xmax as usize + 1)?;
    let report = census(&f.series, level, xmax, &delta)?;
    print!("{report}");
    if !report.has_nonvanishing_prime() {
        eprintln!("note: a_f(p) = 0 for every prime p <= {xmax} not dividing {level}; the density bound needs some a_f(p) != 0");
        return Ok(ExitCode::from(VERDICT_FALSE));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_macmahon(a: u32, nmax: usize, prime_test: bool) -> CliResult {
    if prime_test {
        for v in macmahon_prime_tests(nmax as u64)? {
            println!("{} {} {}", v.n, v.value, if v.prime { "prime" } else { "composite" });
        }
        return Ok(ExitCode::SUCCESS);
    }
    let t = macmahon_tables(a, nmax.max(2))?.pop().expect("a >= 1");
    for n in 0..nmax {
        let m = t.value(n);
        if !m.is_zero() {
            println!("{n}:{m}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn newforms(action: NewformsAction) -> CliResult {
    let mut registry = NewformRegistry::from_env()?;
    match action {
        NewformsAction::List { level, weight } => {
            for rec in registry.records() {
                if level.is_some_and(|l| l != rec.level()) || weight.is_some_and(|k| k != rec.weight()) {
                    continue;
                }
                let source = match rec.source() {
                    NewformSource::Eta(eta) => eta.to_string(),
                    NewformSource::Data(s) => format!("data precision {}", s.precision()),
                };
                println!("{} conductor {} {source}", rec.syntax(), rec.conductor());
            }
        }
        NewformsAction::Ingest { file } => {
            let outcome = registry.ingest_file(&file)?;
            let verb = match outcome {
                Ingested::Added(_) => "added",
                Ingested::Duplicate(_) => "duplicate of",
            };
            println!("{verb} {}", outcome.record().syntax());
        }
        NewformsAction::Check { prec } => {
            for rec in registry.records() {
                let p = rec.max_precision().map_or(prec, |m| m.min(prec));
                let r = verify_hecke(rec, p)?;
                println!(
                    "{} ok precision {} multiplicative {} prime_power {}",
                    rec.syntax(),
                    r.precision,
                    r.multiplicative_checks,
                    r.prime_power_checks
                );
            }
        }
        NewformsAction::Trace { pmax } => {
            let r = galois_trace_check_11(pmax)?;
            for (p, ap, count) in &r.rows {
                println!("{p} {ap} {count}");
            }
            println!("ok");
        }
    }
    Ok(ExitCode::SUCCESS)
}
