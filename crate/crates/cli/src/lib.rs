//! The `etale` command line: verification of DSL-described modules, the
//! built-in families, castling and dimension tables, all reported as JSON.

pub mod dsl;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use serde::Serialize;

use etale::castling::{preservation_check, PreservationReport};
use etale::exactmat::{parse_scalar, serde_exact, Scalar};
use etale::families::{dim_identities, stabilizer_chain_report, ChainReport, FamilyKind, IdentityRow};
use etale::rep::{Representation, Verdict, VerificationReport};
use etale::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const FALLBACK_SEEDS: u64 = 32;

#[derive(Parser, Debug)]
#[command(name = "etale", version, about = "Exact verification of prehomogeneous and etale modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a module for étale-ness at one point.
    Verify {
        #[arg(long)]
        spec: String,
        /// `canonical`, `random`, or comma-separated rationals.
        #[arg(long, default_value = "canonical")]
        point: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        bound: u64,
    },
    /// Build and verify one of the built-in families.
    Family {
        #[arg(long)]
        name: FamilyKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        chain_report: bool,
    },
    /// Castling transform of `<spec> @ gl(N) [dual]` with a prehomogeneity comparison.
    Castle {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        twice: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        bound: u64,
        #[arg(long, default_value_t = 5)]
        draws: u64,
    },
    /// Stabilizer and line-stabilizer subalgebras at a point.
    Stabilizer {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value = "canonical")]
        point: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        bound: u64,
    },
    /// Dimension identities for the chain families.
    Dims {
        #[arg(long)]
        n_max: usize,
    },
}

/// Parses `args` (including the program name), runs the command and writes
/// JSON to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command) {
        Ok((value, code)) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("reports serialize"));
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command) -> Result<(serde_json::Value, i32)> {
    match command {
        Command::Verify { spec, point, seed, bound } => verify(&spec, &point, seed, bound),
        Command::Family { name, n, chain_report } => family(name, n, chain_report),
        Command::Castle {
            spec,
            twice,
            seed,
            bound,
            draws,
        } => castle(&spec, twice, seed, bound, draws),
        Command::Stabilizer { spec, point, seed, bound } => stabilizer(&spec, &point, seed, bound),
        Command::Dims { n_max } => dims(n_max),
    }
}

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("reports serialize")
}

/// Ones on the diagonal of every matrix-shaped summand, `e_last` on vector
/// summands.
pub fn canonical_point(rep: &Representation) -> Vec<Scalar> {
    let mut point = Vec::with_capacity(rep.dim_v());
    for s in rep.summands() {
        if s.shape.len() <= 1 {
            point.extend((0..s.dim).map(|i| if i + 1 == s.dim { Scalar::from_integer(1.into()) } else { Scalar::from_integer(0.into()) }));
            continue;
        }
        for p in 0..s.dim {
            let mut rest = p;
            let mut digits = Vec::with_capacity(s.shape.len());
            for &d in s.shape.iter().rev() {
                digits.push(rest % d);
                rest /= d;
            }
            let diagonal = digits.windows(2).all(|w| w[0] == w[1]);
            point.push(Scalar::from_integer(i64::from(diagonal).into()));
        }
    }
    point
}

struct ChosenPoint {
    point: Vec<Scalar>,
    source: String,
}

fn choose_point(rep: &Representation, text: &str, seed: u64, bound: u64) -> Result<ChosenPoint> {
    match text.trim() {
        "canonical" => Ok(ChosenPoint {
            point: canonical_point(rep),
            source: "canonical".into(),
        }),
        "random" => Ok(ChosenPoint {
            point: rep.random_point(bound, seed),
            source: format!("random(seed={seed},bound={bound})"),
        }),
        list => {
            let point = list
                .split(',')
                .enumerate()
                .map(|(i, t)| {
                    parse_scalar(t).ok_or_else(|| Error::Parse {
                        line: 1,
                        column: 1,
                        message: format!("point entry {} (`{}`) is not a rational number", i + 1, t.trim()),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if point.len() != rep.dim_v() {
                return Err(Error::LengthMismatch {
                    expected: rep.dim_v(),
                    found: point.len(),
                });
            }
            Ok(ChosenPoint {
                point,
                source: "given".into(),
            })
        }
    }
}

fn verify(spec: &str, point: &str, seed: u64, bound: u64) -> Result<(serde_json::Value, i32)> {
    let (_, rep) = dsl::parse_spec(spec)?.build()?;
    let chosen = choose_point(&rep, point, seed, bound)?;
    let mut report = rep.is_etale_at(&chosen.point)?;
    report.point_source = chosen.source;
    if point.trim() == "canonical" && report.verdict != Verdict::Etale && rep.dim_g() == rep.dim_v() {
        for s in seed..seed + FALLBACK_SEEDS {
            let mut retry = rep.is_etale_at(&rep.random_point(bound, s))?;
            if retry.verdict == Verdict::Etale {
                retry.point_source = format!("fallback random(seed={s},bound={bound})");
                report = retry;
                break;
            }
        }
    }
    let code = if report.verdict == Verdict::Etale { EXIT_OK } else { EXIT_FAILED };
    Ok((to_json(&report), code))
}

#[derive(Serialize)]
struct FamilyOutput {
    family: FamilyKind,
    n: usize,
    #[serde(flatten)]
    report: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    chain_report: Option<ChainReport>,
}

fn family(kind: FamilyKind, n: Option<usize>, chain: bool) -> Result<(serde_json::Value, i32)> {
    let n = match (kind, n) {
        (FamilyKind::Helmstetter, n) => n.unwrap_or(2),
        (_, Some(n)) => n,
        (_, None) => {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("--n is required for {kind}"),
            })
        }
    };
    let instance = kind.build(n)?;
    let chain_report = if chain { Some(stabilizer_chain_report(&instance)?) } else { None };
    let ok = instance.report.verdict == Verdict::Etale && chain_report.as_ref().is_none_or(|c| c.passed);
    let output = FamilyOutput {
        family: kind,
        n: instance.n,
        report: instance.report,
        chain_report,
    };
    Ok((to_json(&output), if ok { EXIT_OK } else { EXIT_FAILED }))
}

#[derive(Serialize)]
struct ShapeSummary {
    shape: String,
    description: String,
    core_dim: usize,
    gl_size: usize,
    module_dim: usize,
    is_reduced: bool,
    is_casual: bool,
}

#[derive(Serialize)]
struct CastleOutput {
    input: ShapeSummary,
    transformed: ShapeSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    twice: Option<ShapeSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    involution_holds: Option<bool>,
    preservation: PreservationReport,
    /// Equivalence of modules is not decided; shapes and dimensions are compared.
    note: &'static str,
}

fn summary(core_text: &str, shape: &etale::castling::TensorShape) -> ShapeSummary {
    ShapeSummary {
        shape: dsl::print_tensor_shape(core_text, shape),
        description: shape.describe(),
        core_dim: shape.core_dim(),
        gl_size: shape.gl_size,
        module_dim: shape.module_dim(),
        is_reduced: shape.is_reduced(),
        is_casual: shape.is_casual(),
    }
}

fn castle(spec: &str, twice: bool, seed: u64, bound: u64, draws: u64) -> Result<(serde_json::Value, i32)> {
    let shape = dsl::parse_tensor_shape(spec)?;
    let core_text = spec[..spec.rfind('@').expect("parsed")].trim();
    let transformed = shape.castling_transform()?;
    let back = if twice { Some(transformed.castling_transform()?) } else { None };
    let seeds: Vec<u64> = (seed..seed + draws).collect();
    let preservation = preservation_check(&shape, &seeds, bound)?;
    let (before, after) = preservation.generic_counts();
    let involution_holds = back.as_ref().map(|b| *b == shape);
    let ok = preservation.stabilizers_agree && (before > 0) == (after > 0) && involution_holds != Some(false);
    let output = CastleOutput {
        input: summary(core_text, &shape),
        transformed: summary(core_text, &transformed),
        twice: back.as_ref().map(|b| summary(core_text, b)),
        involution_holds,
        preservation,
        note: "module equivalence is compared through shapes and dimensions only",
    };
    Ok((to_json(&output), if ok { EXIT_OK } else { EXIT_FAILED }))
}

#[derive(Serialize)]
struct StabilizerOutput {
    description: String,
    dim_g: usize,
    dim_v: usize,
    #[serde(serialize_with = "serde_exact::scalar_vec")]
    point: Vec<Scalar>,
    point_source: String,
    rank_beta: usize,
    stabilizer_dim: usize,
    #[serde(serialize_with = "serde_exact::scalar_vecs")]
    stabilizer_basis: Vec<Vec<Scalar>>,
    line_stabilizer_dim: Option<usize>,
    #[serde(serialize_with = "serde_exact::scalar_vecs")]
    line_stabilizer_basis: Vec<Vec<Scalar>>,
}

fn stabilizer(spec: &str, point: &str, seed: u64, bound: u64) -> Result<(serde_json::Value, i32)> {
    let (alg, rep) = dsl::parse_spec(spec)?.build()?;
    let chosen = choose_point(&rep, point, seed, bound)?;
    let report = rep.is_etale_at(&chosen.point)?;
    let line = match rep.line_stabilizer_algebra(&chosen.point) {
        Ok(basis) => Some(basis),
        Err(Error::ZeroPoint) => None,
        Err(e) => return Err(e),
    };
    let output = StabilizerOutput {
        description: format!("{} on {}", alg.describe(), rep.describe_module()),
        dim_g: report.dim_g,
        dim_v: report.dim_v,
        point: chosen.point,
        point_source: chosen.source,
        rank_beta: report.rank_beta,
        stabilizer_dim: report.stabilizer_dim,
        stabilizer_basis: report.stabilizer_basis,
        line_stabilizer_dim: line.as_ref().map(Vec::len),
        line_stabilizer_basis: line.unwrap_or_default(),
    };
    Ok((to_json(&output), EXIT_OK))
}

#[derive(Serialize)]
struct DimsOutput {
    rows: Vec<IdentityRow>,
    all_hold: bool,
}

fn dims(n_max: usize) -> Result<(serde_json::Value, i32)> {
    if n_max == 0 {
        return Err(Error::InvalidSize { kind: "--n-max", n: 0 });
    }
    let rows = dim_identities(n_max);
    let all_hold = rows.iter().all(|r| r.holds);
    Ok((to_json(&DimsOutput { rows, all_hold }), if all_hold { EXIT_OK } else { EXIT_FAILED }))
}
