//! hodgekit command line: parse JSON fixtures, dispatch, emit JSON reports.
//!
//! Exit status: 0 = computed (even when the mathematical verdict is
//! negative), 1 = input error, 2 = internal invariant violation.
//! Exact verbs are byte-stable given identical input; the float verb
//! (`probe`) prints values with 12 significant digits.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hodgekit::admissibility::{check_preadmissible, strip_splitting_probe};
use hodgekit::domains::{
    identify_in_quotient, reduce_sl2, reduce_unipotent, same_definable_structure,
    verify_fundamental_set, FundamentalSetDescriptor, GroupAction, GroupElement,
};
use hodgekit::error::Error;
use hodgekit::io::{
    int_vec_to_strings, matrix_to_grid, rational_to_string, DescriptorFile, DomainSpecFile,
    FiltrationFile, LimitFile, MhsFile, Model1dFile, RelwtFile,
};
use hodgekit::loci::{enumerate_hdg0_d, HodgeClassQuery};
use hodgekit::matrix::Matrix;
use hodgekit::mhs::{deligne_bigrading, validate_mhs};
use hodgekit::monodromy::{limit_mhs, relative_weight_filtration, LimitOutcome};
use hodgekit::scalar::{parse_gaussian, parse_rational};
use hodgekit::splitting::{delta_splitting, Retraction};
use hodgekit::{membership, VerticalStrip};

#[derive(Parser)]
#[command(
    name = "hodgekit",
    about = "exact computations with mixed Hodge structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the mixed Hodge axioms for a candidate triple.
    Validate {
        input: PathBuf,
        /// Use the triple-graded vanishing criterion instead of graded
        /// opposedness.
        #[arg(long)]
        thorough: bool,
    },
    /// Compute the Deligne bigrading.
    Bigrade { input: PathBuf },
    /// Compute the delta-splitting operator.
    Delta { input: PathBuf },
    /// Retract onto the real-split locus.
    Retract {
        input: PathBuf,
        #[arg(long, default_value = "delta")]
        retraction: String,
    },
    /// Relative weight filtration of a nilpotent operator.
    Relwt { input: PathBuf },
    /// Assemble and validate a limit mixed Hodge structure.
    Limit { input: PathBuf },
    /// One-variable pre-admissibility verdict for a local model.
    Admissible { input: PathBuf },
    /// Float boundedness probe on a vertical strip.
    Probe {
        input: PathBuf,
        /// Strip as `a,b,c` (rationals): `a < Re z < b`, `Im z > c`.
        #[arg(long)]
        strip: String,
        /// Grid as `nx,ny`.
        #[arg(long, default_value = "20,20")]
        grid: String,
        /// Top of the geometric height ladder (default `10*c`).
        #[arg(long)]
        top: Option<f64>,
        #[arg(long, default_value = "delta")]
        retraction: String,
    },
    /// Reduce to a fundamental domain.
    Reduce(ReduceArgs),
    /// Decide whether two points of a fundamental set are identified.
    Identify {
        descriptor: PathBuf,
        #[arg(long)]
        p1: String,
        #[arg(long)]
        p2: String,
        /// Translation step for strip actions (default 1).
        #[arg(long, default_value = "1")]
        step: String,
    },
    /// Compare the definable structures induced by two fundamental sets.
    CompareStructures { first: PathBuf, second: PathBuf },
    /// Enumerate bounded-norm integral Hodge classes.
    Hodge {
        input: PathBuf,
        /// Norm bound, a nonnegative rational.
        #[arg(long)]
        d: String,
    },
    /// Membership of a filtration in a mixed period domain.
    Membership { spec: PathBuf, point: PathBuf },
    /// Validate a JSON file against a schema without running mathematics.
    SchemaCheck {
        input: PathBuf,
        /// One of: mhs, model1d, descriptor, domain-spec, filtration,
        /// relwt, limit.
        #[arg(long)]
        schema: String,
    },
}

#[derive(Args)]
struct ReduceArgs {
    #[command(subcommand)]
    kind: ReduceKind,
}

#[derive(Subcommand)]
enum ReduceKind {
    /// Reduce a point of the upper half-plane modulo `SL_2(Z)`.
    Sl2 {
        #[arg(long)]
        point: String,
    },
    /// Reduce a chart coordinate modulo a translation lattice.
    Unipotent {
        /// Comma-separated rationals.
        #[arg(long)]
        coord: String,
        /// Semicolon-separated basis rows of comma-separated rationals.
        #[arg(long)]
        lattice: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(value) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("serializable report")
            );
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Internal(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn run(command: Command) -> Result<Value, Error> {
    match command {
        Command::Validate { input, thorough } => {
            let file: MhsFile = read_json(&input)?;
            let (rank, weight, hodge) = file.to_raw()?;
            let report = validate_mhs(rank, &weight, &hodge, thorough)?;
            Ok(json!({
                "valid": report.valid,
                "failures": report.failures
                    .iter()
                    .map(|(l, p)| json!({"weight": l, "p": p}))
                    .collect::<Vec<_>>(),
            }))
        }
        Command::Bigrade { input } => {
            let file: MhsFile = read_json(&input)?;
            let v = file.to_mhs()?;
            let b = deligne_bigrading(&v)?;
            let mut pieces = BTreeMap::new();
            for (&(p, q), s) in b.pieces() {
                pieces.insert(format!("{p},{q}"), matrix_to_grid(s.basis()));
            }
            Ok(json!({ "pieces": pieces }))
        }
        Command::Delta { input } => {
            let file: MhsFile = read_json(&input)?;
            let v = file.to_mhs()?;
            let delta = delta_splitting(&v)?;
            Ok(json!({ "delta": matrix_to_grid(&delta) }))
        }
        Command::Retract { input, retraction } => {
            let file: MhsFile = read_json(&input)?;
            let v = file.to_mhs()?;
            let retraction = Retraction::from_str(&retraction)?;
            let point = retraction.retract(&v)?;
            let split = retraction.split_structure(&v)?;
            let graded: BTreeMap<String, Value> = point
                .graded
                .iter()
                .map(|(k, filt)| {
                    let steps: BTreeMap<String, Value> = filt
                        .jumps()
                        .iter()
                        .map(|(p, s)| (p.to_string(), json!(matrix_to_grid(s.basis()))))
                        .collect();
                    (k.to_string(), json!(steps))
                })
                .collect();
            Ok(json!({
                "retraction": retraction.as_str(),
                "grading": matrix_to_grid(point.grading.matrix()),
                "graded": graded,
                "split_hodge": hodgekit::io::hodge_to_map(split.hodge()),
            }))
        }
        Command::Relwt { input } => {
            let file: RelwtFile = read_json(&input)?;
            let (n, weight) = file.to_parts()?;
            let rel = relative_weight_filtration(&n, &weight)?;
            match rel.filtration {
                Some(m) => Ok(json!({
                    "exists": true,
                    "m": hodgekit::io::weight_to_map(&m),
                })),
                None => Ok(json!({ "exists": false })),
            }
        }
        Command::Limit { input } => {
            let file: LimitFile = read_json(&input)?;
            let (f0, n, weight) = file.to_parts()?;
            match limit_mhs(&f0, &n, &weight)? {
                LimitOutcome::Limit(v) => Ok(json!({
                    "valid": true,
                    "mhs": MhsFile::from_mhs(&v),
                })),
                LimitOutcome::NoRelativeWeightFiltration => Ok(json!({
                    "valid": false,
                    "reason": "relative weight filtration does not exist",
                })),
                LimitOutcome::NotMixedHodge(report) => Ok(json!({
                    "valid": false,
                    "reason": "limit triple violates the mixed Hodge axioms",
                    "failures": report.failures
                        .iter()
                        .map(|(l, p)| json!({"weight": l, "p": p}))
                        .collect::<Vec<_>>(),
                })),
            }
        }
        Command::Admissible { input } => {
            let file: Model1dFile = read_json(&input)?;
            let model = file.to_model()?;
            let verdict = check_preadmissible(&model)?;
            Ok(json!({
                "cond1": verdict.cond1,
                "cond2": verdict.cond2,
                "preadmissible": verdict.preadmissible(),
                "failures": verdict.failures
                    .iter()
                    .map(|(p, k)| json!({"p": p, "weight": k}))
                    .collect::<Vec<_>>(),
            }))
        }
        Command::Probe {
            input,
            strip,
            grid,
            top,
            retraction,
        } => {
            let file: Model1dFile = read_json(&input)?;
            let model = file.to_model()?;
            let parts: Vec<&str> = strip.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Parse("--strip expects `a,b,c`".into()));
            }
            let strip = VerticalStrip::new(
                parse_rational(parts[0])?,
                parse_rational(parts[1])?,
                parse_rational(parts[2])?,
            )?;
            let grid: Vec<&str> = grid.split(',').collect();
            if grid.len() != 2 {
                return Err(Error::Parse("--grid expects `nx,ny`".into()));
            }
            let nx = grid[0]
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("nx: {e}")))?;
            let ny = grid[1]
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("ny: {e}")))?;
            let retraction = Retraction::from_str(&retraction)?;
            let report = strip_splitting_probe(&model, &strip, nx, ny, top, retraction)?;
            Ok(json!({
                "retraction": report.retraction.as_str(),
                "divergent": report.divergent,
                "rows": report.rows
                    .iter()
                    .map(|r| json!({
                        "height": float12(r.height),
                        "sup": float12(r.sup),
                    }))
                    .collect::<Vec<_>>(),
            }))
        }
        Command::Reduce(args) => match args.kind {
            ReduceKind::Sl2 { point } => {
                let tau = parse_gaussian(&point)?;
                let (gamma, reduced) = reduce_sl2(&tau)?;
                Ok(json!({
                    "gamma": [
                        [gamma[0][0].to_string(), gamma[0][1].to_string()],
                        [gamma[1][0].to_string(), gamma[1][1].to_string()],
                    ],
                    "point": reduced.to_string(),
                }))
            }
            ReduceKind::Unipotent { coord, lattice } => {
                let coord = parse_rational_list(&coord)?;
                let basis = lattice
                    .split(';')
                    .map(parse_rational_list)
                    .collect::<Result<Vec<_>, _>>()?;
                let (gamma, reduced) = reduce_unipotent(&coord, &basis)?;
                Ok(json!({
                    "gamma": gamma.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "reduced": reduced.iter().map(rational_to_string).collect::<Vec<_>>(),
                }))
            }
        },
        Command::Identify {
            descriptor,
            p1,
            p2,
            step,
        } => {
            let file: DescriptorFile = read_json(&descriptor)?;
            let desc = file.to_descriptor()?;
            let action = action_for(&desc, &step)?;
            let report = verify_fundamental_set(&desc, &action, 64)?;
            let p1 = parse_gaussian(&p1)?;
            let p2 = parse_gaussian(&p2)?;
            let related = identify_in_quotient(&p1, &p2, &desc, &action, &report.overlaps)?;
            Ok(json!({
                "related": related.is_some(),
                "gamma": related.map(group_element_json),
            }))
        }
        Command::CompareStructures { first, second } => {
            let f1: DescriptorFile = read_json(&first)?;
            let f2: DescriptorFile = read_json(&second)?;
            let same = same_definable_structure(&f1.to_descriptor()?, &f2.to_descriptor()?)?;
            Ok(json!({ "same": same }))
        }
        Command::Hodge { input, d } => {
            let file: MhsFile = read_json(&input)?;
            let v = file.to_mhs()?;
            let d = parse_rational(&d)?;
            let gr0 = v.weight().at(0).dim() - v.weight().at(-1).dim();
            let q0 = if gr0 == 0 {
                Matrix::zero(0, 0)
            } else {
                let pol = file.to_polarizations()?.ok_or_else(|| {
                    Error::Parse("polarizations are required for hodge enumeration".into())
                })?;
                pol.form(0)
                    .ok_or_else(|| {
                        Error::Parse("polarizations.0 is required for hodge enumeration".into())
                    })?
                    .clone()
            };
            let query = HodgeClassQuery::new(v, q0, d)?;
            let classes = enumerate_hdg0_d(&query)?;
            Ok(json!({
                "nonempty": !classes.is_empty(),
                "classes": classes
                    .iter()
                    .map(|(v, norm)| json!({
                        "vector": int_vec_to_strings(v),
                        "norm": rational_to_string(norm),
                    }))
                    .collect::<Vec<_>>(),
            }))
        }
        Command::Membership { spec, point } => {
            let spec_file: DomainSpecFile = read_json(&spec)?;
            let point_file: FiltrationFile = read_json(&point)?;
            let spec = spec_file.to_spec()?;
            let f = point_file.to_filtration()?;
            let report = membership(&spec, &f)?;
            Ok(json!({
                "in_compact_dual": report.in_compact_dual,
                "in_m": report.in_m,
                "in_m_r": report.in_m_r,
            }))
        }
        Command::SchemaCheck { input, schema } => {
            schema_check(&input, &schema)?;
            Ok(json!({ "ok": true, "schema": schema }))
        }
    }
}

fn schema_check(path: &PathBuf, schema: &str) -> Result<(), Error> {
    match schema {
        "mhs" => {
            let file: MhsFile = read_json(path)?;
            let (rank, weight, _) = file.to_raw()?;
            // Polarizations, when present, must cover every nonzero graded
            // piece of the weight filtration.
            if let Some(pol) = file.to_polarizations()? {
                for (k, s) in weight.jumps() {
                    let d = s.dim() - weight.at(k - 1).dim();
                    if d > 0 && pol.form(*k).is_none() {
                        return Err(Error::Parse(format!(
                            "polarizations.{k}: missing form for a nonzero graded piece"
                        )));
                    }
                }
            }
            let _ = rank;
            Ok(())
        }
        "model1d" => read_json::<Model1dFile>(path)?.to_model().map(|_| ()),
        "descriptor" => read_json::<DescriptorFile>(path)?
            .to_descriptor()
            .map(|_| ()),
        "domain-spec" => read_json::<DomainSpecFile>(path)?.to_spec().map(|_| ()),
        "filtration" => read_json::<FiltrationFile>(path)?
            .to_filtration()
            .map(|_| ()),
        "relwt" => read_json::<RelwtFile>(path)?.to_parts().map(|_| ()),
        "limit" => read_json::<LimitFile>(path)?.to_parts().map(|_| ()),
        other => Err(Error::Parse(format!("unknown schema `{other}`"))),
    }
}

fn action_for(desc: &FundamentalSetDescriptor, step: &str) -> Result<GroupAction, Error> {
    match desc {
        FundamentalSetDescriptor::Strip(_) | FundamentalSetDescriptor::StripUnion(_) => {
            Ok(GroupAction::IntegerTranslation {
                step: parse_rational(step)?,
            })
        }
        FundamentalSetDescriptor::HalfPlaneDomain { .. } => Ok(GroupAction::ModularGroup),
        FundamentalSetDescriptor::Product { .. } => Err(Error::Unsupported(
            "identify takes complex points; product descriptors use chart coordinates".into(),
        )),
    }
}

fn group_element_json(g: GroupElement) -> Value {
    match g {
        GroupElement::Translation(n) => json!({ "translation": n.to_string() }),
        GroupElement::LatticeTranslation(v) => {
            json!({ "lattice": v.iter().map(|x| x.to_string()).collect::<Vec<_>>() })
        }
        GroupElement::Modular(m) => json!({
            "matrix": [
                [m[0][0].to_string(), m[0][1].to_string()],
                [m[1][0].to_string(), m[1][1].to_string()],
            ]
        }),
    }
}

fn parse_rational_list(s: &str) -> Result<Vec<hodgekit::Rational>, Error> {
    s.split(',')
        .map(|part| parse_rational(part.trim()))
        .collect()
}

/// 12 significant digits, deterministic.
fn float12(x: f64) -> String {
    format!("{x:.11e}")
}
