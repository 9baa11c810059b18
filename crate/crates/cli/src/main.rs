//! `softtorus` command-line tool.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 no witness found,
//! 3 a verifier check failed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use softtorus::brep::{halmos_dilate, path_to_identity, random_brep};
use softtorus::certify::{certify_text, verify_certificate, CertifyError, SearchParams};
use softtorus::io::{self, CertificateFile, FamilyFile, MatrixFile};
use softtorus::NCPoly;

#[derive(Parser, Debug)]
#[command(name = "softtorus", version, about = "Finite dimensional witnesses for almost-commuting unitaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for a finite dimensional witness and write a certificate.
    Certify(CertifyArgs),
    /// Re-check a certificate file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Print a certificate summary without checking it.
    Inspect {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Spectral path from a unitary to the identity in steps of norm at most eps.
    Interp {
        #[arg(long)]
        eps: f64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unitary dilation of a contraction.
    Dilate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the normal ordered form `Σ b_k v^k`.
    Order {
        #[arg(long)]
        poly: String,
    },
    /// Seeded random family on `[lo, hi]`.
    Rand {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        dim: usize,
        #[arg(long, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, allow_hyphen_values = true)]
        hi: i64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    poly: String,
    /// Comma separated block sizes.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2])]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 400)]
    ascent_steps: usize,
    /// Averaging order; defaults to one more than the v-degree of a*a.
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => io::write_atomic(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_certify(args: CertifyArgs) -> Result<(), Failure> {
    let params = SearchParams {
        dims: args.dims,
        restarts: args.restarts,
        seed: args.seed,
        ascent_steps: args.ascent_steps,
        q: args.q,
    };
    let cert = match certify_text(&args.poly, args.eps, &params) {
        Ok(c) => c,
        Err(e @ CertifyError::NoWitnessFound { .. }) => {
            return Err(Failure {
                code: 2,
                message: e.to_string(),
            })
        }
        Err(CertifyError::ZeroPolynomial) => return Err("ZeroPolynomial: polynomial is formally zero".into()),
        Err(e) => return Err(e.into()),
    };
    let json = io::to_json(&CertificateFile::from(&cert))?;
    if let Some(path) = &args.out {
        io::write_atomic(path, &json)?;
    }
    println!("achieved_norm   {:.12}", cert.achieved_norm);
    println!("lower_bound     {:.12}", cert.lower_bound);
    println!("commutator_norm {:.12}", cert.commutator_norm);
    println!("n               {}", cert.n);
    if args.out.is_none() {
        print!("{json}");
    }
    Ok(())
}

fn cmd_verify(input: &Path, tol: f64) -> Result<(), Failure> {
    let cert = io::read_certificate(input)?;
    let report = verify_certificate(&cert, tol);
    for c in &report.checks {
        let status = if c.passed { "pass" } else { "FAIL" };
        println!("{status} {:<18} {}", c.name, c.detail);
    }
    if report.all_passed() {
        println!("certificate verified at tol {tol:e}");
        return Ok(());
    }
    let names: Vec<&str> = report.failures().map(|c| c.violation).collect();
    Err(Failure {
        code: 3,
        message: format!("verification failed: {}", names.join(", ")),
    })
}

fn cmd_inspect(input: &Path) -> Result<(), Failure> {
    let file: CertificateFile = io::read_json(input)?;
    println!("version         {}", file.version);
    println!("poly            {}", file.poly);
    println!("eps             {}", file.eps);
    println!("n = p·m         {} = {}·{}", file.n, file.p, file.m);
    println!("lambda          {}{:+}i", file.lambda.re, file.lambda.im);
    println!("q               {}", file.q);
    println!("seed            {}", file.seed);
    println!("achieved_norm   {}", file.achieved_norm);
    println!("lower_bound     {}", file.lower_bound);
    println!("commutator_norm {}", file.commutator_norm);
    Ok(())
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Certify(args) => cmd_certify(args),
        Command::Verify { input, tol } => cmd_verify(&input, tol),
        Command::Inspect { input } => cmd_inspect(&input),
        Command::Interp { eps, input, out } => {
            let w = io::read_json::<MatrixFile>(&input)?.to_unitary()?;
            let path = path_to_identity(&w, eps)?;
            emit(out.as_deref(), &io::to_json(&FamilyFile::from_units(eps, 0, &path))?)
        }
        Command::Dilate { input, out } => {
            let t = io::read_matrix(&input)?;
            let v = halmos_dilate(&t)?;
            emit(out.as_deref(), &io::to_json(&MatrixFile::from(v.matrix()))?)
        }
        Command::Order { poly } => {
            println!("{}", NCPoly::parse(&poly)?.normal_order()?);
            Ok(())
        }
        Command::Rand {
            eps,
            dim,
            lo,
            hi,
            seed,
            out,
        } => {
            let f = random_brep(eps, dim, (lo, hi), seed)?;
            emit(out.as_deref(), &io::to_json(&FamilyFile::from_units(eps, lo, f.units()))?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
