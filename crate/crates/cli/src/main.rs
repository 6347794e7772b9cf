//! Command-line front end: generate families, run refuters, run the
//! classifiers, validate certificates, and drive the exhaustive oracle.
//!
//! Exit codes: 0 when a command decides, refutes or validates; 2 when the
//! outcome is inconclusive (a search cap or budget got in the way); 1 for
//! usage and input errors.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use coarse_core::adfamily::BinarySeed;
use coarse_core::ballean::modulus::ModulusTable;
use coarse_core::ballean::oracle::{
    effective_search_cap, minimal_expansion_at, search_bounded_bijection, SearchOutcome,
};
use coarse_core::ballean::{FiniteSpace, Point};
use coarse_core::certificate::{parse_certificate, serialize_certificate, CertificateDocument};
use coarse_core::classify::{
    classify_subset_taxonomy, decide_abelian_coarse_equiv, decide_locfin_asymorphic, AbelianSpec,
};
use coarse_core::fingen::{generate_intervals, refute_fingen_pair};
use coarse_core::locfin::refute_locfin_pair;
use coarse_core::CoarseError;

#[derive(Parser)]
#[command(name = "coarse", version, about = "Coarse non-equivalence toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout (atomically).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Generate building blocks.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Produce a non-equivalence certificate for a seed pair.
    Refute {
        #[command(subcommand)]
        what: RefuteCommand,
    },
    /// Run a classification decision procedure.
    Classify {
        #[command(subcommand)]
        what: ClassifyCommand,
    },
    /// Classify a subset of a truncation as large / thick / thin / small.
    Taxonomy(TaxonomyArgs),
    /// Re-check a certificate from its raw parameters.
    Validate {
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Exhaustive bounded-distortion bijection search.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        /// Instance size cap (COARSE_SEARCH_CAP overrides the default).
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// The canonical interval sequence.
    Intervals {
        #[arg(long)]
        count: usize,
    },
    /// Branch members for a file of seeds.
    Adfamily {
        #[arg(long)]
        seeds: PathBuf,
        #[arg(long)]
        n_max: u32,
    },
}

#[derive(Subcommand)]
enum RefuteCommand {
    /// Interval unions on the natural line.
    Fingen {
        #[arg(long)]
        seed_a: String,
        #[arg(long)]
        seed_b: String,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        t: u64,
    },
    /// Block families in the locally finite ambient group.
    Locfin {
        #[arg(long)]
        seed_a: String,
        #[arg(long)]
        seed_b: String,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        cantor_max: u64,
        /// Probe chain levels (defaults to the covering level).
        #[arg(long = "probe")]
        probes: Vec<u64>,
    },
}

#[derive(Subcommand)]
enum ClassifyCommand {
    /// Asymorphism of two locally finite cyclic sums.
    Locfin {
        #[arg(long)]
        spec_a: PathBuf,
        #[arg(long)]
        spec_b: PathBuf,
    },
    /// Coarse equivalence of two countable abelian groups.
    Abelian {
        #[arg(long)]
        spec_a: PathBuf,
        #[arg(long)]
        spec_b: PathBuf,
    },
}

#[derive(Args)]
struct TaxonomyArgs {
    /// The ambient truncation, e.g. `nat:1000` for `[0, 1000]` cut from
    /// the naturals.
    #[arg(long)]
    space: String,
    /// Subset description: a JSON file path or an inline JSON object.
    #[arg(long)]
    set: String,
    #[arg(long)]
    budget: u64,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(String),
    Inconclusive(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Input(_) => ExitCode::from(1),
            CliError::Inconclusive(_) => ExitCode::from(2),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Inconclusive(m) => {
                write!(f, "{m}")
            }
        }
    }
}

impl From<CoarseError> for CliError {
    fn from(e: CoarseError) -> Self {
        match e {
            CoarseError::CapExceeded { .. }
            | CoarseError::EnumerationCap(_)
            | CoarseError::BudgetExceeded(_)
            | CoarseError::WitnessNotFound(_) => CliError::Inconclusive(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Canonical JSON: sorted keys, pretty, trailing newline.
fn canonical(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}

fn write_atomic(path: &Path, content: &str) -> CliResult<()> {
    let tmp = path.with_extension("tmp-write");
    fs::write(&tmp, content)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| CliError::Input(format!("cannot move into place: {e}")))
}

fn emit(
    out: &Option<PathBuf>,
    format: Format,
    value: serde_json::Value,
    text: String,
) -> CliResult<()> {
    let rendered = match format {
        Format::Json => canonical(&value),
        Format::Text => {
            let mut t = text;
            if !t.ends_with('\n') {
                t.push('\n');
            }
            t
        }
    };
    match out {
        Some(path) => write_atomic(path, &rendered),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn parse_seed(spec: &str) -> CliResult<BinarySeed> {
    BinarySeed::parse(spec).map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> CliResult<()> {
    let Cli {
        command,
        out,
        format,
    } = cli;
    match command {
        Command::Gen { what } => run_gen(what, &out, format),
        Command::Refute { what } => run_refute(what, &out, format),
        Command::Classify { what } => run_classify(what, &out, format),
        Command::Taxonomy(args) => run_taxonomy(args, &out, format),
        Command::Validate { certificate } => run_validate(&certificate, &out, format),
        Command::Oracle { instance, cap } => run_oracle(&instance, cap, &out, format),
    }
}

fn run_gen(what: GenCommand, out: &Option<PathBuf>, format: Format) -> CliResult<()> {
    match what {
        GenCommand::Intervals { count } => {
            let seq = generate_intervals(count)?;
            let intervals: Vec<[String; 2]> = (0..count)
                .map(|n| {
                    let (a, b) = seq.entry(n).expect("generated to count");
                    [a.to_string(), b.to_string()]
                })
                .collect();
            let value = json!({
                "command": "gen-intervals",
                "count": count,
                "intervals": intervals,
            });
            let text = format!(
                "{count} intervals; last = [{}, {}]",
                intervals.last().map(|p| p[0].as_str()).unwrap_or("-"),
                intervals.last().map(|p| p[1].as_str()).unwrap_or("-"),
            );
            emit(out, format, value, text)
        }
        GenCommand::Adfamily { seeds, n_max } => {
            let raw = read_file(&seeds)?;
            let parsed: Vec<BinarySeed> = serde_json::from_str(&raw)
                .map_err(|e| CliError::Input(format!("seed file: {e}")))?;
            let mut branches = Vec::new();
            for seed in &parsed {
                let members: Vec<String> = seed
                    .members(n_max)?
                    .into_iter()
                    .map(|c| c.to_string())
                    .collect();
                branches.push(json!({
                    "seed": seed,
                    "members": members,
                }));
            }
            let value = json!({
                "command": "gen-adfamily",
                "n_max": n_max,
                "branches": branches,
            });
            let text = format!("{} branches up to depth {n_max}", parsed.len());
            emit(out, format, value, text)
        }
    }
}

fn run_refute(what: RefuteCommand, out: &Option<PathBuf>, format: Format) -> CliResult<()> {
    let (doc, text) = match what {
        RefuteCommand::Fingen {
            seed_a,
            seed_b,
            r,
            t,
        } => {
            let a = parse_seed(&seed_a)?;
            let b = parse_seed(&seed_b)?;
            let cert = refute_fingen_pair(&a, &b, r, t)?;
            let text = format!(
                "refuted: witness interval {} = [{}, {}], inverse witness {}",
                cert.m, cert.a_m, cert.b_m, cert.inverse_witness.m
            );
            (CertificateDocument::fingen(cert), text)
        }
        RefuteCommand::Locfin {
            seed_a,
            seed_b,
            t,
            cantor_max,
            probes,
        } => {
            let a = parse_seed(&seed_a)?;
            let b = parse_seed(&seed_b)?;
            let probes = if probes.is_empty() {
                None
            } else {
                Some(probes)
            };
            let cert = refute_locfin_pair(&a, &b, t, cantor_max, probes)?;
            let text = format!(
                "refuted: marked level {}, k = {}, l = {}",
                cert.s, cert.k, cert.l
            );
            (CertificateDocument::locfin(cert), text)
        }
    };
    let serialized = serialize_certificate(&doc)?;
    match format {
        Format::Json => match out {
            Some(path) => write_atomic(path, &serialized),
            None => {
                print!("{serialized}");
                Ok(())
            }
        },
        Format::Text => emit(out, format, serde_json::Value::Null, text),
    }
}

fn load_abelian_spec(path: &Path) -> CliResult<AbelianSpec> {
    let raw = read_file(path)?;
    serde_json::from_str(&raw).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn run_classify(what: ClassifyCommand, out: &Option<PathBuf>, format: Format) -> CliResult<()> {
    match what {
        ClassifyCommand::Locfin { spec_a, spec_b } => {
            let a = load_abelian_spec(&spec_a)?;
            let b = load_abelian_spec(&spec_b)?;
            let (AbelianSpec::CyclicSum(a), AbelianSpec::CyclicSum(b)) = (a, b) else {
                return Err(CliError::Input(
                    "this decision needs cyclic_sum specs on both sides".into(),
                ));
            };
            let decision = decide_locfin_asymorphic(&a, &b)?;
            let text = format!(
                "asymorphic: {}{}",
                decision.asymorphic,
                decision
                    .failing_prime
                    .map(|p| format!(" (fails at prime {p})"))
                    .unwrap_or_default()
            );
            let value = json!({
                "command": "classify-locfin",
                "decision": decision,
            });
            emit(out, format, value, text)
        }
        ClassifyCommand::Abelian { spec_a, spec_b } => {
            let a = load_abelian_spec(&spec_a)?;
            let b = load_abelian_spec(&spec_b)?;
            let decision = decide_abelian_coarse_equiv(&a, &b)?;
            let text = format!(
                "coarsely equivalent: {} (ranks {} vs {})",
                decision.equivalent, decision.rank_a, decision.rank_b
            );
            let value = json!({
                "command": "classify-abelian",
                "decision": decision,
            });
            emit(out, format, value, text)
        }
    }
}

/// Subset descriptions accepted by `taxonomy --set`.
#[derive(Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum SetSpec {
    Explicit { points: Vec<u64> },
    Arithmetic { first: u64, step: u64 },
    Squares,
    PowerBlocks { base: u64, width: u64 },
    IntervalUnion { seed: BinarySeed, count: usize },
}

impl SetSpec {
    fn materialize(&self, max: u64) -> CliResult<Vec<u64>> {
        Ok(match self {
            SetSpec::Explicit { points } => points.iter().copied().filter(|&p| p <= max).collect(),
            SetSpec::Arithmetic { first, step } => {
                if *step == 0 {
                    return Err(CliError::Input("arithmetic step must be positive".into()));
                }
                (*first..=max).step_by(*step as usize).collect()
            }
            SetSpec::Squares => (0..)
                .map(|n: u64| n * n)
                .take_while(|&v| v <= max)
                .collect(),
            SetSpec::PowerBlocks { base, width } => {
                if *base < 2 {
                    return Err(CliError::Input("power base must be at least 2".into()));
                }
                let mut points = Vec::new();
                let mut start = 1u64;
                while start <= max {
                    let end = (start.saturating_mul(*width)).min(max);
                    points.extend(start..=end);
                    match start.checked_mul(*base) {
                        Some(next) => start = next,
                        None => break,
                    }
                }
                points
            }
            SetSpec::IntervalUnion { seed, count } => {
                let seq = generate_intervals(*count)?;
                coarse_core::fingen::assemble_interval_union(seed, &seq, max)?.points
            }
        })
    }
}

fn parse_space(spec: &str) -> CliResult<(FiniteSpace, u64)> {
    let Some(rest) = spec.strip_prefix("nat:") else {
        return Err(CliError::Usage(format!(
            "unsupported space {spec:?}; expected nat:<max>"
        )));
    };
    let max: u64 = rest
        .parse()
        .map_err(|_| CliError::Usage(format!("bad bound in {spec:?}")))?;
    let space = FiniteSpace::nat_points_truncated((0..=max).collect(), max)?;
    Ok((space, max))
}

fn run_taxonomy(args: TaxonomyArgs, out: &Option<PathBuf>, format: Format) -> CliResult<()> {
    let (space, max) = parse_space(&args.space)?;
    let raw = if Path::new(&args.set).exists() {
        read_file(Path::new(&args.set))?
    } else {
        args.set.clone()
    };
    let spec: SetSpec =
        serde_json::from_str(&raw).map_err(|e| CliError::Input(format!("set spec: {e}")))?;
    let members: BTreeSet<Point> = spec.materialize(max)?.into_iter().map(Point::Nat).collect();
    if members.is_empty() {
        return Err(CliError::Input(
            "the set is empty on this truncation".into(),
        ));
    }
    let report = classify_subset_taxonomy(&space, &members, args.budget, &[])?;
    let text = format!(
        "large at: {:?}; thin at budget: {}; thick witnesses at {}/{} radii",
        report.large_at,
        report.thin.thin_at_budget,
        report.thick.iter().filter(|t| t.witness.is_some()).count(),
        report.thick.len(),
    );
    let value = json!({
        "command": "taxonomy",
        "space": args.space,
        "budget": args.budget,
        "set_size": members.len(),
        "report": report,
    });
    emit(out, format, value, text)
}

fn run_validate(path: &Path, out: &Option<PathBuf>, format: Format) -> CliResult<()> {
    let raw = read_file(path)?;
    let doc = parse_certificate(&raw)?;
    let outcome = doc.revalidate();
    let value = json!({
        "command": "validate",
        "status": if outcome.valid { "valid" } else { "invalid" },
        "failures": outcome.failures,
    });
    let text = if outcome.valid {
        "valid".to_string()
    } else {
        format!("invalid: {}", outcome.failures.join("; "))
    };
    emit(out, format, value, text)?;
    if outcome.valid {
        Ok(())
    } else {
        Err(CliError::Input("certificate does not revalidate".into()))
    }
}

/// Instance file for the oracle.
#[derive(Deserialize)]
struct OracleInstance {
    x_points: Vec<u64>,
    a_points: Vec<u64>,
    mode: OracleMode,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum OracleMode {
    /// Find the least expansion value at this radius admitting a bijection.
    Minimize { alpha: u64 },
    /// Decide whether a bijection exists within constant bounds.
    Decide {
        forward: ConstantBound,
        inverse: Option<ConstantBound>,
    },
}

#[derive(Deserialize)]
struct ConstantBound {
    budget: u64,
    value: u64,
}

fn run_oracle(
    instance: &Path,
    cap: Option<usize>,
    out: &Option<PathBuf>,
    format: Format,
) -> CliResult<()> {
    let raw = read_file(instance)?;
    let inst: OracleInstance =
        serde_json::from_str(&raw).map_err(|e| CliError::Input(format!("instance: {e}")))?;
    let x = FiniteSpace::nat_points(inst.x_points)?;
    let a = FiniteSpace::nat_points(inst.a_points)?;
    let cap = effective_search_cap(cap);
    match inst.mode {
        OracleMode::Minimize { alpha } => {
            let (minimum, witness) = minimal_expansion_at(&x, &a, alpha, cap)?;
            let pairs: Vec<[&Point; 2]> = witness.pairs().map(|(s, t)| [s, t]).collect();
            let value = json!({
                "command": "oracle",
                "mode": "minimize",
                "alpha": alpha,
                "minimum": minimum.to_string(),
                "witness": pairs,
            });
            let text = format!("minimal expansion at radius {alpha}: {minimum}");
            emit(out, format, value, text)
        }
        OracleMode::Decide { forward, inverse } => {
            let fwd = ModulusTable::constant(forward.budget, forward.value);
            let inv = inverse
                .map(|b| ModulusTable::constant(b.budget, b.value))
                .unwrap_or_else(ModulusTable::empty);
            let outcome = search_bounded_bijection(&x, &a, &fwd, &inv, cap)?;
            let (decision, witness) = match &outcome {
                SearchOutcome::Found(f) => (
                    "found",
                    Some(
                        f.pairs()
                            .map(|(s, t)| [s.clone(), t.clone()])
                            .collect::<Vec<_>>(),
                    ),
                ),
                SearchOutcome::ExhaustedNone => ("exhausted-none", None),
            };
            let value = json!({
                "command": "oracle",
                "mode": "decide",
                "decision": decision,
                "witness": witness,
            });
            emit(out, format, value, decision.to_string())
        }
    }
}
