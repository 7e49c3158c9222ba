#![allow(clippy::result_large_err)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use zquartic::conic::{
    parametrization_completeness, residue_obstruction, ConicForm, ConicVariant,
};
use zquartic::descent::{
    ascend, build_certificate, descent_trace, relaxed_seed, verify_descent_certificate,
    DescentCertificate,
};
use zquartic::factor::{factor, in_g, nu};
use zquartic::resolvent::{quartic_to_system, resolvent_discriminant, resolvent_root, search_system};
use zquartic::search::{parse_equation, render, search, EquationKind, OutputFormat, SearchConfig};
use zquartic::selftest::{run_selftest, DEFAULT_SEED};
use zquartic::verify::verify_theorem;
use zquartic::{gcd, Error, GaussianInt};

const DEFAULT_BOUND: u32 = 8;

/// Bounded searches and proof-machinery checks for quartic equations
/// over the Gaussian integers.
///
/// Gaussian integers are written as `3`, `-2i`, `1+i`, `4-7i`.
#[derive(Parser, Debug)]
#[command(name = "zquartic", version)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Global {
    /// Box bound on max(|re|, |im|) of the searched coordinates
    /// (X and Y; X and Z for X^4 + eY^2 = Z^4). Default 8.
    #[arg(long, global = true)]
    bound: Option<u32>,

    /// Worker threads. Output does not depend on this.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Catalog id (3.1 3.2 3.3 3.4 3.5 3.6 3.6neg 3.9 3.9neg) or literals a,b,c,d
    /// for aX^4 + bX^2Y^2 + cY^4 = dZ^2.
    #[arg(long, global = true)]
    equation: Option<String>,

    /// key = value file with defaults for the flags above.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exhaustive search in the box.
    Search {
        /// Keep solutions whose gcd is not a unit.
        #[arg(long)]
        all: bool,
    },
    /// Compare the search result against the claimed solution set.
    Verify {
        /// 3.1 3.2 3.3 3.4 3.5 3.6 3.9
        tag: String,
    },
    /// Factor a Gaussian integer into canonical primes.
    Factor {
        #[arg(allow_hyphen_values = true)]
        z: String,
    },
    /// Canonical gcd of two Gaussian integers.
    Gcd {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Resolvent discriminant, root and system solution at (u, v).
    Resolvent {
        #[arg(allow_hyphen_values = true)]
        u: String,
        #[arg(allow_hyphen_values = true)]
        v: String,
    },
    /// Verify a certificate file, or run the descent on searched and
    /// synthetic system solutions.
    DescentCheck {
        certificate: Option<PathBuf>,
        /// Write the synthetic certificate to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Conic parametrization completeness or a residue obstruction table.
    Oracle {
        /// Coefficient e in X^2 + eY^2 = Z^2.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        eps: String,
        /// Use X^2 + eY^2 + Z^2 = 0.
        #[arg(long)]
        zero_form: bool,
        /// Obstruction case instead of the completeness check:
        /// 3.1/t=0 3.1/t=1 3.1/t=2 3.3/parity 3.4/parity trivial.
        #[arg(long)]
        obstruction: Option<String>,
    },
    /// Run all property suites.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

struct Settings {
    bound: u32,
    workers: usize,
    format: OutputFormat,
    equation: Option<String>,
}

fn read_config(path: &PathBuf) -> Result<BTreeMap<String, String>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", k + 1)))?;
        let key = key.trim();
        if !["bound", "workers", "format", "equation"].contains(&key) {
            return Err(Error::Config(format!("line {}: unknown key {key:?}", k + 1)));
        }
        out.insert(key.to_string(), value.trim().to_string());
    }
    Ok(out)
}

fn settings(g: &Global) -> Result<Settings, Error> {
    let file = match &g.config {
        Some(p) => read_config(p)?,
        None => BTreeMap::new(),
    };
    let num = |key: &str| -> Result<Option<u64>, Error> {
        file.get(key)
            .map(|v| v.parse().map_err(|_| Error::Config(format!("{key}: bad number {v:?}"))))
            .transpose()
    };
    let default_workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let bound = match g.bound {
        Some(b) => b,
        None => num("bound")?.map_or(Ok(DEFAULT_BOUND), |b| {
            u32::try_from(b).map_err(|_| Error::Config("bound out of range".into()))
        })?,
    };
    let workers = match g.workers {
        Some(w) => w,
        None => num("workers")?.map_or(default_workers, |w| w as usize),
    };
    if workers == 0 {
        return Err(Error::Config("workers must be at least 1".into()));
    }
    let format = match g.format {
        Some(f) => f,
        None => file.get("format").map_or(Ok(OutputFormat::Text), |f| f.parse())?,
    };
    let equation = g.equation.clone().or_else(|| file.get("equation").cloned());
    Ok(Settings {
        bound,
        workers,
        format,
        equation,
    })
}

/// Usage-type errors exit with 2, everything else with 1.
fn exit_for(e: &Error) -> ExitCode {
    match e {
        Error::Parse(_)
        | Error::UnknownCase(_)
        | Error::UnknownTheorem(_)
        | Error::UnknownEquation(_)
        | Error::UnsupportedEps(_)
        | Error::NoResolvent(_)
        | Error::Budget { .. }
        | Error::Config(_)
        | Error::Precondition(_)
        | Error::ZeroInput
        | Error::GcdOfZeros
        | Error::FactorBudget { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn lit(s: &str) -> Result<GaussianInt, Error> {
    s.parse()
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let st = settings(&cli.global)?;
    match cli.command {
        Command::Search { all } => {
            let spec = parse_equation(st.equation.as_deref().unwrap_or("3.1"))?;
            let cfg = SearchConfig {
                equation: spec,
                bound: st.bound,
                require_primitive: !all,
                workers: st.workers,
                format: st.format,
            };
            let records = search(&cfg)?;
            print!("{}", render(&cfg, &records)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { tag } => {
            let report = verify_theorem(&tag, st.bound, st.workers)?;
            match st.format {
                OutputFormat::Json => print!("{}", report.to_json()),
                _ => print!("{}", report.to_text()),
            }
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Factor { z } => {
            let z = lit(&z)?;
            let f = factor(&z)?;
            println!("{z} = {f}");
            println!("nu = {}", nu(&z)?.0);
            println!("in G: {}", in_g(&z)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Gcd { a, b } => {
            println!("{}", gcd(&lit(&a)?, &lit(&b)?)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Resolvent { u, v } => {
            let spec = parse_equation(st.equation.as_deref().unwrap_or("3.6"))?;
            let EquationKind::Quartic(eq) = &spec.kind else {
                return Err(Error::NoResolvent(spec.to_string()));
            };
            let (u, v) = (lit(&u)?, lit(&v)?);
            let disc = resolvent_discriminant(eq, &u, &v)?;
            println!("equation: {spec}");
            println!("discriminant: {disc}");
            match disc.is_square() {
                None => println!("square root: none"),
                Some(d) => {
                    println!("square root: {d}");
                    if let Some(r) = resolvent_root(eq, &u, &v)? {
                        println!("root: {r}");
                    }
                    for d in [d.clone(), -d] {
                        match quartic_to_system(eq, &u, &v, &d) {
                            Ok(s) => println!("d = {d}: {s}"),
                            Err(e) => println!("d = {d}: {e}"),
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::DescentCheck { certificate, emit } => {
            if let Some(path) = certificate {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                let verdict = verify_descent_certificate(&DescentCertificate::parse(&text)?);
                println!("{verdict}");
                return Ok(if verdict.valid { ExitCode::SUCCESS } else { ExitCode::from(1) });
            }
            let mut ok = true;
            for eps in ["1", "1+i"] {
                let sols = search_system(&lit(eps)?, st.bound)?;
                println!("system e = {eps}, bound {}: {} nontrivial solutions", st.bound, sols.len());
                for s in &sols {
                    match descent_trace(s) {
                        Ok(t) => println!("  {s} -> {} ({} -> {})", t.next, t.index_before, t.index_after),
                        Err(e) => {
                            ok &= !matches!(e, Error::ContradictionWitness { .. });
                            println!("  {s}: {e}");
                        }
                    }
                }
            }
            let start = ascend(&relaxed_seed())?;
            let (cert, stop) = build_certificate(&start, 16)?;
            println!("synthetic chain (e = 5), {} entries:", cert.chain.len());
            print!("{}", cert.to_text());
            if let Some(e) = stop {
                println!("stopped: {e}");
            }
            let verdict = verify_descent_certificate(&cert);
            println!("certificate: {verdict}");
            ok &= verdict.valid;
            if let Some(path) = emit {
                std::fs::write(&path, cert.to_text())
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Oracle {
            eps,
            zero_form,
            obstruction,
        } => {
            let variant = if zero_form { ConicVariant::ZeroForm } else { ConicVariant::Equation };
            let form = ConicForm::new(lit(&eps)?, variant)?;
            if let Some(case) = obstruction {
                let r = residue_obstruction(&form, &case)?;
                println!("case {} on {form}, modulus {}", r.case, r.modulus);
                println!("forced: {:?}", r.forced_values());
                println!("allowed: {:?}", r.allowed_values());
                println!("rows: {}", r.forced.len() + r.allowed.len());
                println!("{}", if r.impossible { "impossible" } else { "not excluded" });
                return Ok(if r.impossible || case == "trivial" {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                });
            }
            let r = parametrization_completeness(&form, st.bound)?;
            println!("{form}, bound {}", r.bound);
            println!("primitive solutions: {}", r.total);
            println!("with Y = 0 mod (1+i)^3: {}", r.eligible);
            println!("matched by the parametrization: {}", r.matched);
            for t in &r.unmatched {
                println!("unmatched: {t}");
            }
            Ok(if r.complete() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Selftest { seed } => {
            let r = run_selftest(seed);
            print!("{}", r.to_text());
            Ok(if r.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}
