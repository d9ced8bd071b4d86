//! `cubiform`: exact cubic-form computations for threefolds on the command
//! line. Emits and consumes JSON models; every command is deterministic.
//!
//! Exit codes: 0 success (or verdict OBSTRUCTED), 2 input error,
//! 3 inconclusive (no certificate).

mod model;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use cubiform::obstruct::{certify_rank1_trivial_with, ProverOptions};
use cubiform::quotient::DiagonalAction;
use cubiform::{
    abelian_cubic, decide_blowdown_obstruction, BigInt, CertifyOutcome, FieldElem,
    ResolutionModel, VerdictStatus,
};

use model::{load_form, load_model, load_resolution, ModelFile};

#[derive(Parser)]
#[command(
    name = "cubiform",
    version,
    about = "Exact cubic forms of threefolds: Hessian ranks, blow-ups, quotient cubics, and blow-down obstruction certificates"
)]
struct Cli {
    /// Worker threads for minor enumeration (default: available parallelism)
    #[arg(long, global = true, env = "CUBIFORM_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the 15-variable cubic of the complex 3-torus
    Abelian {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the quotient cubic of a diagonal cyclic action
    Quotient {
        /// Action generator: 1, -1, i, or -omega (order inferred)
        #[arg(long, allow_hyphen_values = true, conflicts_with = "action")]
        zeta: Option<String>,
        /// Action spec file {zeta, order} instead of --zeta
        #[arg(long)]
        action: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hessian rank of a form at a class, with the evaluated Hessian
    Rank {
        #[arg(long)]
        form: PathBuf,
        /// Class as inline JSON: an array of field elements, or an object
        /// keyed by basis names (z12, z1b2, zb1b2, ...) for 15- and
        /// 9-variable forms
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Hessian matrix of linear forms
    Hessian {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Blow up a point: new leading variable with cube a
    BlowupPoint {
        #[arg(long)]
        form: PathBuf,
        /// Exceptional self-intersection (nonzero rational)
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Blow up a curve: new leading variable with cube a and mixed terms b
    BlowupCurve {
        #[arg(long)]
        form: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// JSON array of m field elements
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a resolution model from a quotient cubic and exceptional cubes
    Resolve {
        #[arg(long)]
        form: PathBuf,
        /// Comma-separated nonzero integers a_i = E_i^3
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify that the Hessian-rank-at-most-1 locus of a form is trivial
    Certify {
        #[arg(long)]
        form: PathBuf,
        /// Maximum nesting of case splits
        #[arg(long, default_value_t = 4)]
        branch_depth: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide the blow-down obstruction for a resolution model
    Obstruct {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct RankReport {
    rank: usize,
    hessian: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct HessianReport {
    m: usize,
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
enum CertifyReport {
    Certificate { certificate: cubiform::RankCertificate },
    Counterexample { point: cubiform::Point, rank: usize },
    Inconclusive,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // ignore a second initialization (e.g. in tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Abelian { out } => {
            emit_json(out.as_deref(), &abelian_cubic())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Quotient { zeta, action, out } => {
            let act = match (zeta, action) {
                (Some(name), None) => DiagonalAction::from_name(&name)
                    .with_context(|| format!("invalid --zeta `{name}`"))?,
                (None, Some(path)) => match load_model(&path)? {
                    ModelFile::Action(spec) => spec.to_action()?,
                    _ => bail!("{} does not contain an action spec", path.display()),
                },
                _ => bail!("quotient needs exactly one of --zeta or --action"),
            };
            emit_json(out.as_deref(), &act.quotient_cubic())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Rank { form, point, out } => {
            let f = load_form(&form)?;
            let p = cubiform::cubic::parse_point_json(&f, &point)?;
            // promote whichever side is rational into the other's field
            let target = match (f.field_tag(), p.tag()) {
                (ft, pt) if ft == pt => ft,
                (cubiform::FieldTag::Q, pt) => pt,
                (ft, cubiform::FieldTag::Q) => ft,
                (ft, pt) => bail!("point field {pt} is incompatible with form field {ft}"),
            };
            let f = f.widened(target)?;
            let p = p.widened(target)?;
            let h = f.hessian_form().evaluate(&p)?;
            let rank = h.rank();
            let hessian: Vec<Vec<String>> = (0..h.rows())
                .map(|r| (0..h.cols()).map(|c| h.get(r, c).to_string()).collect())
                .collect();
            emit_json(out.as_deref(), &RankReport { rank, hessian })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Hessian { form, out } => {
            let f = load_form(&form)?;
            let h = f.hessian_form();
            let matrix: Vec<Vec<String>> = (0..h.m())
                .map(|r| (0..h.m()).map(|c| h.entry(r, c).render()).collect())
                .collect();
            emit_json(out.as_deref(), &HessianReport { m: h.m(), matrix })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::BlowupPoint { form, a, out } => {
            let f = load_form(&form)?;
            let a = parse_field_scalar(&a)?;
            emit_json(out.as_deref(), &f.blowup_point(&a)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::BlowupCurve { form, a, b, out } => {
            let f = load_form(&form)?;
            let a = parse_field_scalar(&a)?;
            let b: Vec<FieldElem> =
                serde_json::from_str(&b).context("--b must be a JSON array of field elements")?;
            let b = b
                .iter()
                .map(|x| x.widen(f.field_tag()))
                .collect::<cubiform::Result<Vec<_>>>()?;
            emit_json(out.as_deref(), &f.blowup_curve(&a, &b)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Resolve { form, a, out } => {
            let f = load_form(&form)?;
            let cubes = parse_integer_list(&a)?;
            let model = ResolutionModel::new(f, cubes)?;
            emit_json(out.as_deref(), &model)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify { form, branch_depth, out } => {
            let f = load_form(&form)?;
            let opts = ProverOptions { branch_depth };
            match certify_rank1_trivial_with(&f, &opts) {
                CertifyOutcome::Certified(certificate) => {
                    emit_json(out.as_deref(), &CertifyReport::Certificate { certificate })?;
                    Ok(ExitCode::SUCCESS)
                }
                CertifyOutcome::Counterexample(point) => {
                    let rank = f.hessian_rank_at(&point)?;
                    emit_json(out.as_deref(), &CertifyReport::Counterexample { point, rank })?;
                    Ok(ExitCode::from(3))
                }
                CertifyOutcome::Inconclusive => {
                    emit_json(out.as_deref(), &CertifyReport::Inconclusive)?;
                    Ok(ExitCode::from(3))
                }
            }
        }
        Command::Obstruct { model, out } => {
            let m = load_resolution(&model)?;
            let verdict = decide_blowdown_obstruction(&m);
            emit_json(out.as_deref(), &verdict)?;
            Ok(match verdict.status {
                VerdictStatus::Obstructed => ExitCode::SUCCESS,
                VerdictStatus::Inconclusive => ExitCode::from(3),
            })
        }
    }
}

/// Accepts either a bare rational like `-3/2` or a JSON field element.
fn parse_field_scalar(text: &str) -> Result<FieldElem> {
    if let Ok(r) = cubiform::field::parse_rational(text) {
        return Ok(FieldElem::from_rational(r));
    }
    serde_json::from_str(text)
        .with_context(|| format!("`{text}` is neither a rational nor a field element"))
}

fn parse_integer_list(text: &str) -> Result<Vec<BigInt>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<BigInt>()
                .with_context(|| format!("`{part}` is not an integer"))
        })
        .collect()
}

fn emit_json<T: serde::Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}
