//! Command-line front end: load affine subspace files, run the
//! certifiers, witness constructors and oracles, and emit reports.
//!
//! Exit codes: 0 = property holds (or no counterexample found) and the
//! dimension bound is satisfied; 1 = counterexample or failed internal
//! assertion; 2 = usage or resource error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use affmat::diag;
use affmat::matrix::Matrix;
use affmat::nilpotency;
use affmat::normality;
use affmat::oracle::{self, OracleDomain, OracleProperty};
use affmat::report::CertReport;
use affmat::scalar::{FieldTag, Scalar};
use affmat::subspace::AffineSubspace;
use affmat::Error;

#[derive(Parser)]
#[command(name = "affmat", version, about = "Certify affine matrix spaces: all-nilpotent, all-normal, real-diagonalizable")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a property of a subspace loaded from JSON.
    Certify(CertifyArgs),
    /// Construct an extremal witness space (self-certified) and write it.
    Witness(WitnessArgs),
    /// Run a scripted demonstration with printed intermediate values.
    Demo(DemoArgs),
    /// Brute-force oracle over a finite domain.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Property {
    Nilpotent,
    Normal,
    Diagonalizable,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum MethodArg {
    Auto,
    Symbolic,
    Enumeration,
    Pairwise,
    Sampling,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long, value_enum)]
    property: Property,
    /// Subspace JSON file.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    /// Sample count for diagonalizability.
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumeration cap for finite fields.
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Variant {
    Linear,
    AffineNotLinear,
    Counterexample,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long, value_enum)]
    property: Property,
    #[arg(long)]
    n: Option<usize>,
    /// Q, Qi or GF:p.
    #[arg(long)]
    field: Option<String>,
    #[arg(long, value_enum)]
    variant: Variant,
    /// Self-certification sample count (diagonalizable witnesses).
    #[arg(long, default_value_t = 1_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    #[command(subcommand)]
    which: DemoKind,
}

#[derive(Subcommand)]
enum DemoKind {
    /// Check S2(R) - S2(R+U) = tr(RU) on random conjugated nilpotents.
    S2Identity {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Drive an antisymmetric pencil out of the real-diagonalizable set.
    PencilEscape,
    /// Simultaneous diagonalization of a conjugated-diagonal family.
    Simdiag,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_enum)]
    property: Property,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
    /// Lattice radius for spaces over Q.
    #[arg(long, default_value_t = 2)]
    lattice_radius: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Certify(args) => cmd_certify(args),
        Command::Witness(args) => cmd_witness(args),
        Command::Demo(args) => cmd_demo(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_space(path: &PathBuf) -> Result<AffineSubspace, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(report: &CertReport, format: Format, out: Option<&PathBuf>) -> Result<u8, String> {
    let body = match format {
        Format::Text => report.to_text(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
    };
    match out {
        Some(path) => fs::write(path, &body).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{body}"),
    }
    Ok(report.exit_code() as u8)
}

fn configure_jobs(jobs: usize) {
    if jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
}

fn cmd_certify(args: CertifyArgs) -> Result<u8, String> {
    configure_jobs(args.jobs);
    let space = load_space(&args.input)?;
    let mut report = match args.property {
        Property::Nilpotent => {
            match args.method {
                MethodArg::Auto => {}
                MethodArg::Symbolic if !space.field().is_finite() => {}
                MethodArg::Enumeration if space.field().is_finite() => {}
                _ => {
                    return Err(format!(
                        "nilpotency over {} is certified {} only",
                        space.field(),
                        if space.field().is_finite() {
                            "by enumeration"
                        } else {
                            "symbolically"
                        }
                    ))
                }
            }
            let cert = nilpotency::certify_nilpotent_capped(&space, args.cap)
                .map_err(|e| e.to_string())?;
            cert.to_report(&space)
        }
        Property::Normal => {
            let method = match args.method {
                MethodArg::Auto | MethodArg::Symbolic => affmat::Method::Symbolic,
                MethodArg::Pairwise => affmat::Method::PairwiseCertificate,
                _ => return Err("normality methods: symbolic, pairwise".into()),
            };
            let cert = normality::certify_normal_with(&space, method)
                .map_err(|e| e.to_string())?;
            cert.to_report(&space)
        }
        Property::Diagonalizable => {
            if !matches!(args.method, MethodArg::Auto | MethodArg::Sampling) {
                return Err("diagonalizability is sampling-based".into());
            }
            let cert = diag::sample_certify_diag_space(&space, args.samples, args.seed)
                .map_err(|e| e.to_string())?;
            cert.to_report(&space)
        }
    };
    report.seed = Some(args.seed);
    emit(&report, args.format, args.out.as_ref())
}

const SUPPORTED_WITNESSES: &str = "supported combinations:\n  \
    nilpotent linear (any field), nilpotent affine-not-linear (char 0), nilpotent counterexample (GF(2), n=2)\n  \
    normal linear (Q or Qi), normal affine-not-linear (n=2 over Q)\n  \
    diagonalizable linear (Q), diagonalizable affine-not-linear (Q)";

fn cmd_witness(args: WitnessArgs) -> Result<u8, String> {
    let field = match &args.field {
        Some(f) => Some(FieldTag::parse(f).map_err(|e| e.to_string())?),
        None => None,
    };
    let need_n = || args.n.ok_or_else(|| format!("--n is required\n{SUPPORTED_WITNESSES}"));
    let err = |e: Error| e.to_string();

    let space = match (args.property, args.variant) {
        (Property::Nilpotent, Variant::Linear) => {
            nilpotency::witness_max_nilpotent(need_n()?, field.unwrap_or(FieldTag::Q)).map_err(err)?
        }
        (Property::Nilpotent, Variant::AffineNotLinear) => {
            nilpotency::witness_affine_not_linear_nilpotent(need_n()?, field.unwrap_or(FieldTag::Q))
                .map_err(err)?
        }
        (Property::Nilpotent, Variant::Counterexample) => {
            if args.n.is_some_and(|n| n != 2) {
                return Err(format!("the counterexample lives at n = 2\n{SUPPORTED_WITNESSES}"));
            }
            nilpotency::char2_counterexample()
        }
        (Property::Normal, Variant::Linear) => {
            normality::diagonal_space(need_n()?, field.unwrap_or(FieldTag::Qi)).map_err(err)?
        }
        (Property::Normal, Variant::AffineNotLinear) => {
            if args.n.is_some_and(|n| n != 2) || field.is_some_and(|f| f != FieldTag::Q) {
                return Err(format!(
                    "the affine-not-linear normal witness lives at n = 2 over Q\n{SUPPORTED_WITNESSES}"
                ));
            }
            normality::affine_symmetric_2x2()
        }
        (Property::Diagonalizable, Variant::Linear) => {
            diag::witness_max_diag_linear(need_n()?).map_err(err)?
        }
        (Property::Diagonalizable, Variant::AffineNotLinear) => {
            diag::witness_max_diag_affine_not_linear(need_n()?).map_err(err)?
        }
        (Property::Normal | Property::Diagonalizable, Variant::Counterexample) => {
            return Err(format!("unsupported combination\n{SUPPORTED_WITNESSES}"))
        }
    };

    // self-certify: a witness that fails its own certification is a bug
    match args.property {
        Property::Nilpotent => {
            let cert = nilpotency::certify_nilpotent(&space).map_err(err)?;
            if cert.verdict != nilpotency::NilpotencyVerdict::AllNilpotent {
                return Err("witness failed its own certification".into());
            }
        }
        Property::Normal => {
            let cert = normality::certify_normal(&space).map_err(err)?;
            if cert.verdict != normality::NormalVerdict::AllNormal {
                return Err("witness failed its own certification".into());
            }
        }
        Property::Diagonalizable => {
            let cert = diag::sample_certify_diag_space(&space, args.samples, args.seed)
                .map_err(err)?;
            if cert.verdict != diag::SampleVerdict::NoCounterexampleFound {
                return Err("witness failed its own certification".into());
            }
        }
    }

    let mut body = serde_json::to_string_pretty(&space).map_err(|e| e.to_string())?;
    body.push('\n');
    match &args.out {
        Some(path) => fs::write(path, &body).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{body}"),
    }
    Ok(0)
}

fn cmd_demo(args: DemoArgs) -> Result<u8, String> {
    match args.which {
        DemoKind::S2Identity { trials, seed } => demo_s2(trials, seed),
        DemoKind::PencilEscape => demo_pencil_escape(),
        DemoKind::Simdiag => demo_simdiag(),
    }
}

fn demo_s2(trials: u64, seed: u64) -> Result<u8, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = 0u64;
    for trial in 0..trials {
        let n = rng.gen_range(2..=5);
        let r = random_int_matrix(&mut rng, n, 4);
        let c = random_invertible(&mut rng, n);
        let u = c
            .matmul(&random_strictly_upper(&mut rng, n))
            .and_then(|m| m.matmul(&c.inverse()?))
            .map_err(|e| e.to_string())?;
        let chk = nilpotency::check_s2_identity(&r, &u).map_err(|e| e.to_string())?;
        if trial < 3 {
            println!(
                "trial {trial}: n = {n}, S2(R) - S2(R+U) = {}, tr(RU) = {}",
                chk.lhs, chk.rhs
            );
        }
        if chk.equal {
            ok += 1;
        }
    }
    println!("{ok}/{trials} equal (seed {seed})");
    Ok(if ok == trials { 0 } else { 1 })
}

fn demo_pencil_escape() -> Result<u8, String> {
    let p = Matrix::<Scalar>::unit(2, FieldTag::Q, 0, 0);
    let y = Matrix::unit(2, FieldTag::Q, 0, 1)
        .sub(&Matrix::unit(2, FieldTag::Q, 1, 0))
        .map_err(|e| e.to_string())?;
    println!("P = E11, Y = E12 - E21");
    let esc = diag::antisymmetric_pencil_escape(&p, &y).map_err(|e| e.to_string())?;
    let member = p
        .add(&y.scale(&Scalar::Rat(esc.t.clone())))
        .map_err(|e| e.to_string())?;
    let chi = member.char_poly().to_unipoly();
    println!("found t = {} after {} candidates", esc.t, esc.tried);
    println!("chi(P + tY) = {chi}");
    if member.n() == 2 {
        let b = chi.coeff(1);
        let c = chi.coeff(0);
        let disc = &(&b * &b) - &(&Scalar::from_int(4, &FieldTag::Q) * &c);
        println!("disc = {disc}");
    }
    println!(
        "minimal polynomial {} has {} real roots of degree {}",
        esc.report.min_poly, esc.report.real_root_count, esc.report.degree
    );
    let expected = esc.t == BigRational::from_integer(1.into()) && esc.report.real_root_count == 0;
    Ok(if expected { 0 } else { 1 })
}

fn demo_simdiag() -> Result<u8, String> {
    let err = |e: Error| e.to_string();
    let c = affmat::matrix_from_int_rows(
        FieldTag::Q,
        &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]],
    )
    .map_err(err)?;
    let c_inv = c.inverse().map_err(err)?;
    let diag_of = |vals: &[i64]| {
        Matrix::from_fn(3, FieldTag::Q, |i, j| {
            Scalar::from_int(if i == j { vals[i] } else { 0 }, &FieldTag::Q)
        })
    };
    let family: Vec<Matrix<Scalar>> = [diag_of(&[1, 1, 2]), diag_of(&[3, 4, 4])]
        .iter()
        .map(|d| c.matmul(d).and_then(|m| m.matmul(&c_inv)))
        .collect::<affmat::Result<_>>()
        .map_err(err)?;
    println!("family: C diag(1,1,2) C^-1, C diag(3,4,4) C^-1 with C = [[1,1,0],[0,1,1],[1,0,1]]");
    let refinement = affmat::eigen::simultaneous_diagonalize_exact(&family).map_err(err)?;
    for (i, block) in refinement.blocks.iter().enumerate() {
        let evs: Vec<String> = block.eigenvalues.iter().map(|e| e.to_string()).collect();
        println!(
            "block {i}: dim {}, eigenvalues per matrix [{}]",
            block.basis.len(),
            evs.join(", ")
        );
        for v in &block.basis {
            let coords: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            println!("  [{}]", coords.join(", "));
        }
    }
    let ok = refinement.blocks.len() == 3;
    println!(
        "refinement into {} blocks; every basis vector is an exact common eigenvector",
        refinement.blocks.len()
    );
    Ok(if ok { 0 } else { 1 })
}

fn cmd_oracle(args: OracleArgs) -> Result<u8, String> {
    configure_jobs(args.jobs);
    let space = load_space(&args.input)?;
    let property = match args.property {
        Property::Nilpotent => OracleProperty::Nilpotent,
        Property::Normal => OracleProperty::Normal,
        Property::Diagonalizable => OracleProperty::DiagonalizableReal,
    };
    let domain = if space.field().is_finite() {
        OracleDomain::Enumerate
    } else {
        OracleDomain::Lattice {
            radius: args.lattice_radius,
        }
    };
    let verdict = oracle::oracle_all_property(&space, property, domain, args.cap)
        .map_err(|e| e.to_string())?;
    let mut report = verdict.to_report(&space);
    report.seed = Some(args.seed);
    emit(&report, args.format, args.out.as_ref())
}

fn random_int_matrix(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Matrix<Scalar> {
    Matrix::from_fn(n, FieldTag::Q, |_, _| {
        Scalar::from_int(rng.gen_range(-bound..=bound), &FieldTag::Q)
    })
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Scalar> {
    loop {
        let c = random_int_matrix(rng, n, 3);
        if !c.det().is_zero() {
            return c;
        }
    }
}

fn random_strictly_upper(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Scalar> {
    Matrix::from_fn(n, FieldTag::Q, |i, j| {
        Scalar::from_int(if j > i { rng.gen_range(-3..=3) } else { 0 }, &FieldTag::Q)
    })
}
