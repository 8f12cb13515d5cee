//! Command-line front end: generate operators, run the checker suite,
//! recover structure from oracles, certify representations, fuzz for
//! checker soundness, and run brute-force grid enumerations.
//!
//! Exit codes: 0 pass/certified, 1 violation/refuted, 2 invalid input,
//! 3 inconclusive or not localizable.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use coneop::bruteforce::enumerate_report_with;
use coneop::error::RecoveryError;
use coneop::fixtures::fixture_oracle;
use coneop::operators::{
    as_oracle, random_op_with, MapOracle, PointMap, RandomOpOptions, WeightFunction,
    WeightedCompositionOp,
};
use coneop::recovery::{
    certify, check_duality, recover, recover_inverse, RecoverConfig, RecoveredMap,
    RecoveredWeight, RecoveryResult, RecoveryVerdict,
};
use coneop::scalar::Scalar;
use coneop::space::SpaceDescriptor;
use coneop::verification::{replay_witness, run_standard_suite, SuiteOptions, Witness};

const EXIT_PASS: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "coneop", version, about = "Weighted composition operators on positive cones: check, recover, certify, enumerate")]
struct Cli {
    /// Seed for all deterministic sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Comparison tolerance; defaults to 0 on discrete spaces and 1e-9
    /// (relative) on the PL line.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Trials per property check or certification pass.
    #[arg(long, global = true, default_value_t = 200)]
    trials: u32,

    /// Shard brute-force enumeration across threads.
    #[arg(long, global = true)]
    parallel: bool,

    /// Write the report JSON here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random weighted composition operator.
    Gen {
        /// Space spec: `discrete:N` or `pl[:resolution]`.
        #[arg(long, default_value = "discrete:4")]
        space: String,

        /// Weight range `lo:hi` (uniform; rational-rounded on discrete spaces).
        #[arg(long, default_value = "0.1:10", value_name = "LO:HI")]
        h_range: String,

        /// Generate an orientation-reversing PL point map.
        #[arg(long)]
        decreasing: bool,
    },

    /// Run the full checker suite against an operator file or fixture.
    Check {
        #[command(flatten)]
        oracle: OracleSpec,

        /// Operator file for the inverse map (enables backward checks).
        #[arg(long)]
        inverse_operator: Option<PathBuf>,

        /// Replay a serialized witness instead of sampling fresh trials.
        #[arg(long)]
        replay: Option<PathBuf>,
    },

    /// Recover the point map and weight from a black-box oracle, then
    /// certify the representation.
    Recover {
        #[command(flatten)]
        oracle: OracleSpec,

        /// Oracle spec for the inverse map: runs the backward recovery and
        /// the duality consistency checks.
        #[arg(long)]
        inverse_operator: Option<PathBuf>,

        #[command(flatten)]
        recovery: RecoveryArgs,
    },

    /// Certify a claimed operator file against an oracle.
    Certify {
        /// The claimed representation (an operator file).
        #[arg(long)]
        operator: PathBuf,

        /// Oracle to certify against: an operator file...
        #[arg(long)]
        against: Option<PathBuf>,

        /// ...or a named fixture.
        #[arg(long)]
        fixture: Option<String>,

        #[command(flatten)]
        recovery: RecoveryArgs,
    },

    /// Soundness sweep: random operators must pass every check and
    /// recover exactly; with --fixtures, the negative controls must keep
    /// failing across seeds.
    Fuzz {
        /// Number of random operators (and seeds per fixture).
        #[arg(long, default_value_t = 25)]
        count: u32,

        /// Space spec: `discrete:N` or `pl[:resolution]`.
        #[arg(long, default_value = "discrete:6")]
        space: String,

        /// Weight range `lo:hi`.
        #[arg(long, default_value = "0.1:10", value_name = "LO:HI")]
        h_range: String,

        /// Also sweep the negative-control fixtures: each must be
        /// rejected by at least one check at every seed.
        #[arg(long)]
        fixtures: bool,
    },

    /// Enumerate all norm-additive bijections of a tiny grid cone.
    Enumerate {
        #[arg(long)]
        points: usize,

        #[arg(long)]
        max: u32,

        #[arg(long, default_value_t = coneop::bruteforce::DEFAULT_ELEMENT_CAP)]
        element_cap: usize,

        #[arg(long, default_value_t = coneop::bruteforce::DEFAULT_PERMUTATION_CAP)]
        perm_cap: u64,
    },
}

#[derive(Args)]
struct OracleSpec {
    /// Operator JSON file (wrapped as an oracle).
    #[arg(long)]
    operator: Option<PathBuf>,

    /// Named in-tree fixture oracle.
    #[arg(long)]
    fixture: Option<String>,

    /// Space for fixture oracles: `discrete:N` or `pl[:resolution]`.
    #[arg(long, default_value = "discrete:3")]
    space: String,
}

#[derive(Args)]
struct RecoveryArgs {
    /// Probe budget per localized point.
    #[arg(long)]
    budget: Option<u64>,

    /// PL only: number of codomain grid samples.
    #[arg(long, default_value_t = 32)]
    grid: usize,

    /// PL only: grid range `lo:hi`.
    #[arg(long, default_value = "-8:8", value_name = "LO:HI")]
    grid_range: String,

    /// PL only: initial bracket `lo:hi` assumed to contain every
    /// localized point.
    #[arg(long, default_value = "-64:64", value_name = "LO:HI")]
    bracket: String,

    /// PL only: localization stop radius (defaults to the space
    /// resolution).
    #[arg(long)]
    stop_radius: Option<f64>,
}

/// Invalid-input failure (exit code 2), distinct from check violations.
struct Invalid(String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Invalid(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Invalid> {
    match &cli.command {
        Command::Gen {
            space,
            h_range,
            decreasing,
        } => cmd_gen(&cli, space, h_range, *decreasing),
        Command::Check {
            oracle,
            inverse_operator,
            replay,
        } => cmd_check(&cli, oracle, inverse_operator.as_deref(), replay.as_deref()),
        Command::Recover {
            oracle,
            inverse_operator,
            recovery,
        } => cmd_recover(&cli, oracle, inverse_operator.as_deref(), recovery),
        Command::Certify {
            operator,
            against,
            fixture,
            recovery,
        } => cmd_certify(&cli, operator, against.as_deref(), fixture.as_deref(), recovery),
        Command::Fuzz {
            count,
            space,
            h_range,
            fixtures,
        } => cmd_fuzz(&cli, *count, space, h_range, *fixtures),
        Command::Enumerate {
            points,
            max,
            element_cap,
            perm_cap,
        } => cmd_enumerate(&cli, *points, *max, *element_cap, *perm_cap),
    }
}

fn parse_space(spec: &str) -> Result<SpaceDescriptor, Invalid> {
    if let Some(rest) = spec.strip_prefix("discrete:") {
        let n: usize = rest
            .parse()
            .map_err(|_| Invalid(format!("bad discrete size {rest:?}")))?;
        return Ok(SpaceDescriptor::discrete(n)?);
    }
    if spec == "pl" {
        return Ok(SpaceDescriptor::pl_line(1e-9)?);
    }
    if let Some(rest) = spec.strip_prefix("pl:") {
        let r: f64 = rest
            .parse()
            .map_err(|_| Invalid(format!("bad resolution {rest:?}")))?;
        return Ok(SpaceDescriptor::pl_line(r)?);
    }
    Err(Invalid(format!(
        "bad space spec {spec:?} (expected discrete:N or pl[:resolution])"
    )))
}

fn parse_pair(spec: &str) -> Result<(f64, f64), Invalid> {
    let (a, b) = spec
        .split_once(':')
        .ok_or_else(|| Invalid(format!("expected LO:HI, got {spec:?}")))?;
    let lo: f64 = a.parse().map_err(|_| Invalid(format!("bad number {a:?}")))?;
    let hi: f64 = b.parse().map_err(|_| Invalid(format!("bad number {b:?}")))?;
    Ok((lo, hi))
}

fn load_operator(path: &std::path::Path) -> Result<WeightedCompositionOp, Invalid> {
    let text = fs::read_to_string(path)
        .map_err(|e| Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Invalid(format!("cannot parse operator {}: {e}", path.display())))
}

fn resolve_oracle(spec: &OracleSpec) -> Result<(MapOracle, Option<WeightedCompositionOp>), Invalid> {
    match (&spec.operator, &spec.fixture) {
        (Some(path), None) => {
            let op = load_operator(path)?;
            Ok((as_oracle(&op), Some(op)))
        }
        (None, Some(name)) => {
            let space = parse_space(&spec.space)?;
            Ok((fixture_oracle(name, &space)?, None))
        }
        _ => Err(Invalid(
            "exactly one of --operator and --fixture is required".into(),
        )),
    }
}

fn emit(cli: &Cli, value: &serde_json::Value) -> Result<(), Invalid> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Invalid(format!("serialization failed: {e}")))?;
    text.push('\n');
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn default_tol(cli: &Cli, space: &SpaceDescriptor) -> f64 {
    cli.tol.unwrap_or(if space.is_discrete() {
        0.0
    } else {
        coneop::verification::PL_CHECK_TOL
    })
}

fn cmd_gen(cli: &Cli, space: &str, h_range: &str, decreasing: bool) -> Result<u8, Invalid> {
    let space = parse_space(space)?;
    let h_range = parse_pair(h_range)?;
    let op = random_op_with(
        cli.seed,
        &space,
        &space,
        h_range,
        &RandomOpOptions { decreasing },
    )?;
    let tau_summary = match op.point_map() {
        PointMap::Permutation { map } => format!("permutation on {} points", map.len()),
        PointMap::PlHomeo(h) => format!(
            "pl_homeo ({}, {} nodes)",
            if h.is_increasing() {
                "increasing"
            } else {
                "decreasing"
            },
            h.breakpoints().len()
        ),
    };
    eprintln!(
        "generated operator: tau = {tau_summary}, h_min = {}, h_max = {}",
        op.h_min(),
        op.h_max()
    );
    emit(cli, &serde_json::to_value(&op).map_err(|e| Invalid(e.to_string()))?)?;
    Ok(EXIT_PASS)
}

fn cmd_check(
    cli: &Cli,
    spec: &OracleSpec,
    inverse: Option<&std::path::Path>,
    replay: Option<&std::path::Path>,
) -> Result<u8, Invalid> {
    let (oracle, op) = resolve_oracle(spec)?;
    let tol = default_tol(cli, oracle.domain());

    if let Some(witness_path) = replay {
        let text = fs::read_to_string(witness_path)
            .map_err(|e| Invalid(format!("cannot read {}: {e}", witness_path.display())))?;
        let witness: Witness = serde_json::from_str(&text)
            .map_err(|e| Invalid(format!("cannot parse witness: {e}")))?;
        let (lhs, rhs, disc) =
            replay_witness(&oracle, &witness).map_err(|e| Invalid(e.to_string()))?;
        let reproduced = !disc.within_tol(tol);
        let identical = disc == witness.discrepancy;
        emit(
            cli,
            &json!({
                "property": witness.property,
                "recorded_discrepancy": witness.discrepancy,
                "replayed": { "lhs": lhs, "rhs": rhs, "discrepancy": disc },
                "identical_discrepancy": identical,
                "reproduced": reproduced,
            }),
        )?;
        return Ok(if reproduced { EXIT_VIOLATION } else { EXIT_PASS });
    }

    let inverse_oracle = match inverse {
        Some(path) => Some(as_oracle(&load_operator(path)?)),
        None => None,
    };
    let mut options = SuiteOptions::for_space(oracle.domain(), cli.trials);
    options.tol = tol;
    options.known_h_max = op.as_ref().map(WeightedCompositionOp::h_max);
    let reports = run_standard_suite(&oracle, inverse_oracle.as_ref(), cli.seed, &options)
        .map_err(|e| Invalid(e.to_string()))?;
    let all_passed = reports.iter().all(|r| r.passed());
    emit(
        cli,
        &json!({
            "oracle": oracle.name(),
            "all_passed": all_passed,
            "reports": reports,
        }),
    )?;
    Ok(if all_passed { EXIT_PASS } else { EXIT_VIOLATION })
}

fn recovery_config(
    cli: &Cli,
    args: &RecoveryArgs,
    space: &SpaceDescriptor,
) -> Result<RecoverConfig, Invalid> {
    let mut config = RecoverConfig::for_space(space);
    config.certification_trials = cli.trials;
    config.certification_seed = cli.seed;
    if let Some(t) = cli.tol {
        config.certification_tol = t;
    }
    if let Some(b) = args.budget {
        config.budget_per_point = b;
    }
    let (glo, ghi) = parse_pair(&args.grid_range)?;
    config = config.with_grid(glo, ghi, args.grid);
    config.pl.bracket = parse_pair(&args.bracket)?;
    config.pl.stop_radius = args.stop_radius;
    Ok(config)
}

fn recovery_exit(result: &RecoveryResult) -> u8 {
    match result.verdict {
        RecoveryVerdict::Certified => EXIT_PASS,
        RecoveryVerdict::Refuted(_) => EXIT_VIOLATION,
        RecoveryVerdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn recovery_error_exit(err: &RecoveryError) -> Option<u8> {
    match err {
        RecoveryError::NotLocalizableZero { .. }
        | RecoveryError::NotLocalizableMultiple { .. }
        | RecoveryError::BudgetExhausted { .. } => Some(EXIT_INCONCLUSIVE),
        RecoveryError::TauNotBijective { .. }
        | RecoveryError::WeightZero { .. }
        | RecoveryError::WeightUnstable { .. } => Some(EXIT_VIOLATION),
        _ => None,
    }
}

fn cmd_recover(
    cli: &Cli,
    spec: &OracleSpec,
    inverse: Option<&std::path::Path>,
    args: &RecoveryArgs,
) -> Result<u8, Invalid> {
    let (oracle, _) = resolve_oracle(spec)?;
    let target = oracle.codomain().clone();
    let config = recovery_config(cli, args, &target)?;

    let result = match recover(&oracle, &target, &config) {
        Ok(r) => r,
        Err(e) => {
            if let Some(code) = recovery_error_exit(&e) {
                emit(cli, &json!({ "error": e.to_string() }))?;
                return Ok(code);
            }
            return Err(Invalid(e.to_string()));
        }
    };

    let mut payload = serde_json::to_value(&result).map_err(|e| Invalid(e.to_string()))?;
    let mut exit = recovery_exit(&result);

    if let Some(path) = inverse {
        let inv_op = load_operator(path)?;
        let inv_oracle = as_oracle(&inv_op);
        let inv_target = inv_oracle.codomain().clone();
        let inv_config = recovery_config(cli, args, &inv_target)?;
        match recover_inverse(&inv_oracle, &inv_target, &inv_config) {
            Ok(inverse_result) => {
                let duality =
                    check_duality(&result, &inverse_result).map_err(|e| Invalid(e.to_string()))?;
                if !duality.holds {
                    exit = exit.max(EXIT_VIOLATION);
                }
                let obj = payload.as_object_mut().expect("result is an object");
                obj.insert(
                    "inverse_recovery".into(),
                    serde_json::to_value(&inverse_result).map_err(|e| Invalid(e.to_string()))?,
                );
                obj.insert(
                    "duality".into(),
                    serde_json::to_value(&duality).map_err(|e| Invalid(e.to_string()))?,
                );
                exit = exit.max(recovery_exit(&inverse_result));
            }
            Err(e) => {
                if let Some(code) = recovery_error_exit(&e) {
                    let obj = payload.as_object_mut().expect("result is an object");
                    obj.insert("inverse_recovery_error".into(), json!(e.to_string()));
                    exit = exit.max(code);
                } else {
                    return Err(Invalid(e.to_string()));
                }
            }
        }
    }

    emit(cli, &payload)?;
    Ok(exit)
}

fn cmd_certify(
    cli: &Cli,
    claimed_path: &std::path::Path,
    against: Option<&std::path::Path>,
    fixture: Option<&str>,
    args: &RecoveryArgs,
) -> Result<u8, Invalid> {
    let claimed = load_operator(claimed_path)?;
    let oracle = match (against, fixture) {
        (Some(path), None) => as_oracle(&load_operator(path)?),
        (None, Some(name)) => fixture_oracle(name, claimed.domain())?,
        _ => {
            return Err(Invalid(
                "exactly one of --against and --fixture is required".into(),
            ))
        }
    };
    if oracle.domain() != claimed.domain() || oracle.codomain() != claimed.codomain() {
        return Err(Invalid(
            "claimed operator and oracle disagree about the spaces".into(),
        ));
    }
    let config = recovery_config(cli, args, claimed.codomain())?;

    // turn the claimed representation into recovered-form tables
    let (tau, weight) = match (claimed.point_map(), claimed.weight()) {
        (PointMap::Permutation { map }, WeightFunction::Discrete(w)) => (
            RecoveredMap::Permutation { map: map.clone() },
            RecoveredWeight::Discrete {
                values: w.values().to_vec(),
            },
        ),
        (PointMap::PlHomeo(h), WeightFunction::Pl(w)) => {
            let grid = config.pl.grid.clone();
            (
                RecoveredMap::Sampled {
                    points: grid.clone(),
                    values: grid.iter().map(|&y| h.eval(y)).collect(),
                    radii: vec![0.0; grid.len()],
                },
                RecoveredWeight::Sampled {
                    points: grid.clone(),
                    values: grid.iter().map(|&y| w.eval(y)).collect(),
                },
            )
        }
        _ => return Err(Invalid("claimed operator has mixed kinds".into())),
    };
    let skeleton = RecoveryResult {
        tau,
        weight,
        residual_max: zero_for(claimed.codomain()),
        residual_mean: zero_for(claimed.codomain()),
        inverse_residual_max: zero_for(claimed.codomain()),
        query_count: 0,
        localization_queries: 0,
        verdict: RecoveryVerdict::Inconclusive,
        ambiguities: Vec::new(),
    };
    let mut sampler = coneop::verification::Sampler::new(
        cli.seed,
        oracle.domain().clone(),
        config.sampler_params.clone(),
    );
    let mut result = certify(
        &oracle,
        skeleton,
        &mut sampler,
        config.certification_trials,
        config.certification_tol,
    )
    .map_err(|e| Invalid(e.to_string()))?;
    result.query_count = oracle.query_count();
    let exit = recovery_exit(&result);
    emit(
        cli,
        &serde_json::to_value(&result).map_err(|e| Invalid(e.to_string()))?,
    )?;
    Ok(exit)
}

fn zero_for(space: &SpaceDescriptor) -> Scalar {
    if space.is_discrete() {
        Scalar::zero_rational()
    } else {
        Scalar::zero_real()
    }
}

fn cmd_fuzz(
    cli: &Cli,
    count: u32,
    space: &str,
    h_range: &str,
    fixtures: bool,
) -> Result<u8, Invalid> {
    let space = parse_space(space)?;
    let h_range = parse_pair(h_range)?;
    let tol = default_tol(cli, &space);
    let mut failures: Vec<serde_json::Value> = Vec::new();

    for k in 0..count as u64 {
        let seed = cli.seed.wrapping_add(k);
        let op = random_op_with(seed, &space, &space, h_range, &RandomOpOptions::default())?;
        let oracle = as_oracle(&op);
        let inverse_oracle = as_oracle(&op.invert());
        let mut options = SuiteOptions::for_space(&space, cli.trials.min(50));
        options.tol = tol;
        options.known_h_max = Some(op.h_max());
        let reports = run_standard_suite(&oracle, Some(&inverse_oracle), seed, &options)
            .map_err(|e| Invalid(e.to_string()))?;
        for report in reports.iter().filter(|r| !r.passed()) {
            failures.push(json!({
                "seed": seed,
                "property": report.property,
                "witness": report.witness(),
            }));
        }

        let mut config = RecoverConfig::for_space(&space);
        config.certification_trials = cli.trials.min(20);
        config.certification_seed = seed;
        if !space.is_discrete() {
            config = config.with_grid(-8.0, 8.0, 16);
        }
        match recover(&oracle, oracle.codomain(), &config) {
            Ok(result) if result.certified() => {}
            Ok(result) => failures.push(json!({
                "seed": seed,
                "property": "recovery",
                "verdict": result.verdict,
            })),
            Err(e) => failures.push(json!({
                "seed": seed,
                "property": "recovery",
                "error": e.to_string(),
            })),
        }
    }

    let mut fixture_escapes: Vec<serde_json::Value> = Vec::new();
    if fixtures {
        // completeness side: every negative control must keep failing
        let names: Vec<&str> = coneop::fixtures::FIXTURE_NAMES
            .iter()
            .copied()
            .filter(|n| *n != "identity")
            .filter(|n| space.is_discrete() || *n != "order-swap")
            .collect();
        for name in names {
            let oracle = fixture_oracle(name, &space)?;
            for k in 0..count as u64 {
                let seed = cli.seed.wrapping_add(k);
                let mut options = SuiteOptions::for_space(&space, cli.trials.max(100));
                options.tol = tol;
                let reports = run_standard_suite(&oracle, None, seed, &options)
                    .map_err(|e| Invalid(e.to_string()))?;
                if reports.iter().all(|r| r.passed()) {
                    fixture_escapes.push(json!({ "fixture": name, "seed": seed }));
                }
            }
        }
    }

    let sound = failures.is_empty() && fixture_escapes.is_empty();
    emit(
        cli,
        &json!({
            "operators": count,
            "sound": sound,
            "failures": failures,
            "fixture_escapes": fixture_escapes,
        }),
    )?;
    Ok(if sound { EXIT_PASS } else { EXIT_VIOLATION })
}

fn cmd_enumerate(
    cli: &Cli,
    points: usize,
    max: u32,
    element_cap: usize,
    perm_cap: u64,
) -> Result<u8, Invalid> {
    let report = enumerate_report_with(points, max, element_cap, perm_cap, cli.parallel)?;
    emit(
        cli,
        &serde_json::to_value(&report).map_err(|e| Invalid(e.to_string()))?,
    )?;
    Ok(EXIT_PASS)
}
