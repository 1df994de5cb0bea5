//! Command-line front end: root-system construction, cascade and nilradical
//! decomposition, structural verification sweeps, exact Plancherel
//! densities, direct-limit chain checks and numeric inversion validation.
//! Reports are deterministic: canonical key order and fixed tile/subset
//! ordering, so identical inputs produce identical bytes (wall-clock
//! runtime fields excepted).

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use stepwise::cascade::build_cascade;
use stepwise::chevalley::build_constants;
use stepwise::density::build_plancherel;
use stepwise::heisenberg::{
    inversion_check, InversionProblem, NilradicalCase, NumericError, QuadratureConfig,
};
use stepwise::limits::{build_chain, check_family, ChainSpec};
use stepwise::parabolic::{decompose, invariance_classes, verify_structure, Invariance};
use stepwise::roots::{build_system, Family, MultPreset, RootSystem};
use stepwise::sweep::run_sweep;

#[derive(Parser)]
#[command(
    name = "stepwise",
    version,
    about = "Stepwise decompositions, Pfaffian Plancherel densities and limit checks for classical restricted root systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct SystemArgs {
    /// Root-system family: A, B, C, D or BC.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Restricted rank.
    #[arg(long)]
    rank: usize,
}

#[derive(Args)]
struct PhiArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Comma-separated 1-based simple-root indices in diagram order.
    #[arg(long, value_parser = parse_phi, default_value = "")]
    phi: PhiArg,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a restricted root system and list its positive roots.
    Roots(SystemArgs),
    /// Maximal strongly orthogonal cascade and its layer partition.
    Cascade(SystemArgs),
    /// Stepwise decomposition of the nilradical defined by Φ.
    Decompose(PhiArgs),
    /// Structural lemma checks for one (family, rank, Φ) triple.
    Verify(PhiArgs),
    /// Exact Pfaffian Plancherel density and weight ledger.
    Density(PhiArgs),
    /// Admissibility report for a propagation chain file.
    Chain {
        /// JSON chain description: {"family", "ranks", "phi"}.
        #[arg(long)]
        chain: PathBuf,
    },
    /// Numeric Fourier-inversion check on a small nilradical.
    VerifyNumeric {
        /// h3 (3-dimensional Heisenberg) or a3 (6-dimensional).
        #[arg(long, value_parser = parse_case)]
        case: NilradicalCase,
        /// Relative tolerance for the identity and its refinement check.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        /// Base quadrature points per axis.
        #[arg(long, default_value_t = 65)]
        grid: usize,
    },
    /// Verify + density over every Φ subset of a system.
    Sweep(SystemArgs),
}

#[derive(Clone, Debug)]
struct PhiArg(BTreeSet<usize>);

fn parse_phi(s: &str) -> Result<PhiArg, String> {
    let mut set = BTreeSet::new();
    if s.trim().is_empty() {
        return Ok(PhiArg(set));
    }
    for tok in s.split(',') {
        let t = tok.trim();
        let idx: usize = t
            .parse()
            .map_err(|_| format!("malformed Φ index {t:?}"))?;
        if idx == 0 {
            return Err(format!("malformed Φ index {t:?}: indices are 1-based"));
        }
        set.insert(idx - 1);
    }
    Ok(PhiArg(set))
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).ok_or_else(|| format!("unknown family {s:?} (expected A, B, C, D or BC)"))
}

fn parse_case(s: &str) -> Result<NilradicalCase, String> {
    NilradicalCase::parse(s).ok_or_else(|| format!("unknown case {s:?} (expected h3 or a3)"))
}

/// A finished report plus whether every check in it passed.
struct Outcome {
    json: serde_json::Value,
    text: String,
    passed: bool,
}

impl Outcome {
    fn pass(json: serde_json::Value, text: String) -> Outcome {
        Outcome {
            json,
            text,
            passed: true,
        }
    }
}

/// Input problems: reported on stderr with exit code 2.
struct UsageError(String);

impl<E: std::error::Error> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = init_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(&cli.command) {
        Ok(outcome) => {
            let rendered = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&outcome.json)
                        .expect("reports serialize");
                    s.push('\n');
                    s
                }
                Format::Text => outcome.text,
            };
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, &rendered) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{rendered}");
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("PC_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("PC_THREADS must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        return Err("PC_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn system_of(args: &SystemArgs) -> Result<RootSystem, UsageError> {
    Ok(build_system(args.family, args.rank, MultPreset::SplitOnes)?)
}

fn run(command: &Command) -> Result<Outcome, UsageError> {
    match command {
        Command::Roots(args) => {
            let sys = system_of(args)?;
            let json = sys.to_json();
            let mut text = format!(
                "{}{}: {} positive roots\n",
                args.family,
                args.rank,
                sys.positive_count()
            );
            for id in 0..sys.positive_count() {
                let r = sys.root(id);
                text.push_str(&format!(
                    "  coeffs {:?}  ambient {:?}  mult {}\n",
                    r.coords,
                    r.ambient,
                    sys.mult_of(id)
                ));
            }
            Ok(Outcome::pass(json, text))
        }
        Command::Cascade(args) => {
            let sys = system_of(args)?;
            let cascade = build_cascade(&sys);
            let json = cascade.to_json(&sys);
            let mut text = format!(
                "{}{}: cascade of length {}\n",
                args.family,
                args.rank,
                cascade.len()
            );
            for (r, &b) in cascade.betas.iter().enumerate() {
                text.push_str(&format!(
                    "  beta_{} = {:?}, layer size {}\n",
                    r + 1,
                    sys.root(b).coords,
                    cascade.layers[r].len()
                ));
            }
            Ok(Outcome::pass(json, text))
        }
        Command::Decompose(args) => {
            let sys = system_of(&args.system)?;
            let cascade = build_cascade(&sys);
            let dec = decompose(&sys, &cascade, &args.phi.0)?;
            let inv = invariance_classes(&sys, &dec);
            let mut json = dec.to_json(&sys);
            json["invariance"] = inv
                .iter()
                .map(|g| {
                    serde_json::json!({
                        "group": g.group + 1,
                        "invariant": g.status == Invariance::Invariant,
                    })
                })
                .collect();
            let mut text = format!(
                "{}{} with Φ = {:?}: {} groups\n",
                args.system.family,
                args.system.rank,
                args.phi.0.iter().map(|i| i + 1).collect::<Vec<_>>(),
                dec.groups.len()
            );
            for (j, g) in dec.groups.iter().enumerate() {
                let status = match inv[j].status {
                    Invariance::Invariant => "invariant",
                    Invariance::NotInvariant => "not invariant",
                };
                text.push_str(&format!(
                    "  I_{} = {:?}  restriction {:?}  dims l/z/v = {}/{}/{}  {}\n",
                    j + 1,
                    g.steps.iter().map(|r| r + 1).collect::<Vec<_>>(),
                    g.restriction,
                    g.dim_l,
                    g.dim_z,
                    g.dim_v,
                    status
                ));
            }
            Ok(Outcome::pass(json, text))
        }
        Command::Verify(args) => {
            let sys = system_of(&args.system)?;
            let cascade = build_cascade(&sys);
            let dec = decompose(&sys, &cascade, &args.phi.0)?;
            let report = verify_structure(&sys, &cascade, &dec);
            let passed = report.all_passed();
            let mut json = report.to_json();
            json["all_passed"] = serde_json::Value::Bool(passed);
            let mut text = String::new();
            for c in &report.checks {
                text.push_str(&format!(
                    "{}: {}\n",
                    c.name,
                    if c.passed { "pass" } else { "FAIL" }
                ));
                if let Some(w) = &c.witness {
                    text.push_str(&format!("  witness: {w}\n"));
                }
            }
            Ok(Outcome {
                json,
                text,
                passed,
            })
        }
        Command::Density(args) => {
            let sys = system_of(&args.system)?;
            let cascade = build_cascade(&sys);
            let dec = decompose(&sys, &cascade, &args.phi.0)?;
            let table = build_constants(&sys).map_err(|e| UsageError(e.to_string()))?;
            let data = build_plancherel(&sys, &cascade, &dec, &table)
                .map_err(|e| UsageError(e.to_string()))?;
            let json = data.to_json(&sys);
            let text = format!(
                "{}{} with Φ = {:?}\n  P = {}\n  Det = {}\n  c = {}\n  dim n = {}, dim s = {}\n",
                args.system.family,
                args.system.rank,
                args.phi.0.iter().map(|i| i + 1).collect::<Vec<_>>(),
                json["P"].as_str().unwrap_or("?"),
                json["Det"].as_str().unwrap_or("?"),
                data.c,
                data.dim_n,
                data.dim_s
            );
            Ok(Outcome::pass(json, text))
        }
        Command::Chain { chain } => {
            let raw = fs::read_to_string(chain)
                .map_err(|e| UsageError(format!("cannot read {}: {e}", chain.display())))?;
            let spec = ChainSpec::from_json(&raw)?;
            let built = build_chain(&spec)?;
            let report = check_family(&built);
            let passed = report.violations.is_empty();
            let json = report.to_json();
            let mut text = format!(
                "family {} over ranks {:?}\n  N {}  A {}  U {}  E {}  stepwise-stable {}\n",
                spec.family,
                spec.ranks,
                report.n_admissible,
                report.a_admissible,
                report.u_admissible,
                report.e_admissible,
                report.stepwise_stable
            );
            for v in &report.violations {
                text.push_str(&format!(
                    "  {} violated from rank {} to {}: {}\n",
                    v.level, v.from_rank, v.to_rank, v.witness
                ));
            }
            Ok(Outcome {
                json,
                text,
                passed,
            })
        }
        Command::VerifyNumeric { case, tol, grid } => {
            let config = QuadratureConfig::new(*grid, *tol).map_err(usage_from_numeric)?;
            let problem = InversionProblem::standard(*case);
            match inversion_check(&problem, &config) {
                Ok(r) => {
                    let passed = r.rel_err <= *tol;
                    let json = serde_json::json!({
                        "case": case.label(),
                        "lhs": r.lhs,
                        "rhs": r.rhs,
                        "rel_err": r.rel_err,
                        "grid": r.grid,
                        "runtime_ms": r.runtime_ms,
                    });
                    let text = format!(
                        "case {}: lhs {:.12}  rhs {:.12}  rel_err {:.3e}  grid {}  {} ms  -> {}\n",
                        case.label(),
                        r.lhs,
                        r.rhs,
                        r.rel_err,
                        r.grid,
                        r.runtime_ms,
                        if passed { "pass" } else { "FAIL" }
                    );
                    Ok(Outcome { json, text, passed })
                }
                Err(NumericError::QuadratureFailure {
                    stage,
                    disagreement,
                    tol: t,
                }) => {
                    let json = serde_json::json!({
                        "case": case.label(),
                        "error": format!("quadrature failure at {stage}: {disagreement:.3e} > {t:.3e}"),
                        "grid": grid,
                    });
                    let text = format!(
                        "case {}: quadrature failure at {stage} ({disagreement:.3e} > {t:.3e})\n",
                        case.label()
                    );
                    Ok(Outcome {
                        json,
                        text,
                        passed: false,
                    })
                }
                Err(e) => Err(usage_from_numeric(e)),
            }
        }
        Command::Sweep(args) => {
            let report =
                run_sweep(args.family, args.rank).map_err(|e| UsageError(e.to_string()))?;
            let passed = report.all_passed();
            let json = report.to_json();
            let text = format!(
                "{}{}: {} subsets, {} failures -> {}\n",
                args.family,
                args.rank,
                report.subsets(),
                report.failures(),
                if passed { "pass" } else { "FAIL" }
            );
            Ok(Outcome { json, text, passed })
        }
    }
}

fn usage_from_numeric(e: NumericError) -> UsageError {
    UsageError(e.to_string())
}
