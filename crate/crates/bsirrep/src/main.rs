use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use bsirrep::classify::{self, ClassifyOptions};
use bsirrep::cli::{
    parse_c_literal, render_report_table, rep_record_from_json, rep_record_to_json,
    report_to_json, RepRecordJson,
};
use bsirrep::cyclotomic::CycNum;
use bsirrep::error::Error;
use bsirrep::numtheory::Budget;
use bsirrep::oracle::{self, SweepConfig};
use bsirrep::repcore::{build_matrices, BSParams, RepSpec};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_DISAGREEMENT: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(
    name = "bsirrep",
    about = "Classify, construct, and verify finite-dimensional irreducible representations of Baumslag-Solitar groups BS(p, q) with gcd(p, q) = 1",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the irreducible representations of one dimension
    Classify(ClassifyArgs),
    /// Construct the canonical matrix pair for one representation
    Construct(ConstructArgs),
    /// Re-verify a representation record emitted by `construct`
    Verify(VerifyArgs),
    /// Decide equivalence of two representation records
    Equiv(EquivArgs),
    /// Cross-check the classification criterion against the brute-force
    /// oracles over a parameter range
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    p: i64,
    q: i64,
    dim: u32,
    /// Emit the report as JSON instead of a table
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Emit the report as an ASCII table (the default)
    #[arg(long)]
    table: bool,
    /// Confirm every verdict with the Burnside spanning oracle
    #[arg(long)]
    oracle: bool,
    /// Skip divisors of q^dim - p^dim above this bound
    #[arg(long, value_name = "N")]
    max_ell: Option<u64>,
}

#[derive(Args)]
struct ConstructArgs {
    p: i64,
    q: i64,
    dim: u32,
    ell: u64,
    t: u64,
    /// Scalar c for the matrix A, e.g. "1", "3/2", "zeta(8)^3", "2*zeta(4)"
    #[arg(default_value = "1")]
    c: String,
    /// Attach a floating-point rendering of the matrices
    #[arg(long)]
    float: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON file produced by `construct`
    file: PathBuf,
}

#[derive(Args)]
struct EquivArgs {
    file1: PathBuf,
    file2: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Check every |p| up to this bound
    pmax: i64,
    /// Check every q up to this bound
    qmax: i64,
    /// Check every dimension from 2 up to this bound
    dimmax: u32,
    /// Seed for the randomized identity spot-checks
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip moduli ell above this bound
    #[arg(long, value_name = "N", default_value_t = 2000)]
    max_ell: u64,
    /// Deliberately corrupt one oracle verdict (self-test of the harness)
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::FactorizationBudgetExceeded { .. }
        | Error::DivisorBudgetExceeded { .. }
        | Error::EllBudgetExceeded(..) => EXIT_BUDGET,
        _ => EXIT_INPUT,
    }
}

fn budget_from_env() -> Result<Budget, String> {
    let mut budget = Budget::default();
    if let Ok(v) = std::env::var("BSIRREP_MAX_FACTOR_BITS") {
        budget.max_factor_bits = v
            .parse()
            .map_err(|_| format!("BSIRREP_MAX_FACTOR_BITS: not a number: {v:?}"))?;
    }
    if let Ok(v) = std::env::var("BSIRREP_MAX_DIVISORS") {
        budget.max_divisors = v
            .parse()
            .map_err(|_| format!("BSIRREP_MAX_DIVISORS: not a number: {v:?}"))?;
    }
    Ok(budget)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = match budget_from_env() {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let code = match cli.command {
        Command::Classify(args) => cmd_classify(&args, &budget),
        Command::Construct(args) => cmd_construct(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Equiv(args) => cmd_equiv(&args),
        Command::Sweep(args) => cmd_sweep(&args),
    };
    ExitCode::from(code)
}

fn cmd_classify(args: &ClassifyArgs, budget: &Budget) -> u8 {
    let params = match BSParams::new(BigInt::from(args.p), BigInt::from(args.q)) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let mut opts = ClassifyOptions {
        budget: budget.clone(),
        ..ClassifyOptions::default()
    };
    if let Some(m) = args.max_ell {
        opts.max_ell = m;
    }
    let report = match classify::classify_dimension_with(&params, args.dim, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    if args.oracle {
        for record in &report.records {
            let t = if record.ell == 1 { 0 } else { record.orbit_reps[0] };
            let verdict = RepSpec::new(params.clone(), args.dim, record.ell, t, CycNum::one(1))
                .and_then(|spec| build_matrices(&spec))
                .and_then(|pair| oracle::burnside_irreducible(&pair));
            match verdict {
                Ok(oracle_irr) if oracle_irr == record.irreducible => {}
                Ok(oracle_irr) => {
                    eprintln!(
                        "oracle disagreement at ell = {}: criterion says irreducible = {}, \
                         Burnside spanning test says {}",
                        record.ell, record.irreducible, oracle_irr
                    );
                    return EXIT_DISAGREEMENT;
                }
                Err(e) => {
                    eprintln!("error: oracle failed at ell = {}: {e}", record.ell);
                    return exit_code_for(&e);
                }
            }
        }
        eprintln!("oracle: all {} verdicts confirmed", report.records.len());
    }
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report_to_json(&report)).expect("report serializes")
        );
    } else {
        print!("{}", render_report_table(&report));
    }
    EXIT_OK
}

fn cmd_construct(args: &ConstructArgs) -> u8 {
    let result = (|| {
        let params = BSParams::new(BigInt::from(args.p), BigInt::from(args.q))?;
        let c = parse_c_literal(&args.c)?;
        let spec = RepSpec::new(params, args.dim, args.ell, args.t, c)?;
        let pair = build_matrices(&spec)?;
        // Never emit a record whose matrices do not satisfy the group
        // relation; this is the last line of defence against a
        // construction bug.
        if !bsirrep::repcore::verify_relation(&pair, &spec.params)? {
            return Err(Error::StructureViolation(
                "constructed matrices fail the defining relation".into(),
            ));
        }
        Ok(rep_record_to_json(&spec, &pair, args.float))
    })();
    match result {
        Ok(record) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&record).expect("record serializes")
            );
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn read_record(path: &PathBuf) -> Result<RepRecordJson, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn cmd_verify(args: &VerifyArgs) -> u8 {
    let (spec, pair) = match read_record(&args.file).and_then(|r| rep_record_from_json(&r)) {
        Ok(sp) => sp,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let mut failed = false;
    let mut check = |name: &str, outcome: Result<bool, Error>| {
        let out = std::io::stdout();
        let mut out = out.lock();
        match outcome {
            Ok(true) => writeln!(out, "PASS {name}").unwrap(),
            Ok(false) => {
                failed = true;
                writeln!(out, "FAIL {name}").unwrap();
            }
            Err(e) => {
                failed = true;
                writeln!(out, "FAIL {name}: {e}").unwrap();
            }
        }
    };
    check(
        "defining relation A B^p A^-1 = B^q",
        bsirrep::repcore::verify_relation(&pair, &spec.params),
    );
    check(
        "conjugation law A^-1 B A = B^s",
        bsirrep::repcore::verify_conjugation_law(&pair, spec.s),
    );
    for k in -3i64..=3 {
        check(
            &format!("power identity B^(p^{k}) = A^(-{k}) B^(q^{k}) A^{k}"),
            bsirrep::repcore::verify_power_identity(&pair, &spec.params, k),
        );
    }
    check(
        "A^dim is the scalar c^dim",
        bsirrep::repcore::a_power_scalar(&pair).and_then(|got| {
            let want = spec.c.pow(spec.dim as i64)?;
            let (g, w) = bsirrep::cyclotomic::lift_to_common_order(&got, &want)?;
            Ok(g == w)
        }),
    );
    // Irreducibility is informational: a reducible pair is still a valid
    // representation.
    match oracle::burnside_irreducible(&pair) {
        Ok(irr) => println!(
            "INFO Burnside spanning test: {}",
            if irr { "irreducible" } else { "reducible" }
        ),
        Err(e) => println!("INFO Burnside spanning test unavailable: {e}"),
    }
    if failed {
        EXIT_CHECK_FAILED
    } else {
        println!("OK all structural checks passed");
        EXIT_OK
    }
}

fn cmd_equiv(args: &EquivArgs) -> u8 {
    let load = |p: &PathBuf| read_record(p).and_then(|r| rep_record_from_json(&r));
    let (spec1, spec2) = match (load(&args.file1), load(&args.file2)) {
        (Ok((s1, _)), Ok((s2, _))) => (s1, s2),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    match classify::intertwiner(&spec1, &spec2) {
        Ok(Some(witness)) => {
            println!("equivalent");
            println!(
                "{}",
                serde_json::to_string_pretty(
                    &(0..witness.rows())
                        .map(|i| (0..witness.cols())
                            .map(|j| bsirrep::cli::cycnum_to_json(witness.get(i, j)))
                            .collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                )
                .expect("witness serializes")
            );
            EXIT_OK
        }
        Ok(None) => {
            println!("inequivalent");
            EXIT_CHECK_FAILED
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_sweep(args: &SweepArgs) -> u8 {
    if args.dimmax < 2 {
        eprintln!("error: dimmax must be at least 2");
        return EXIT_INPUT;
    }
    let cfg = SweepConfig {
        p_max: args.pmax,
        q_max: args.qmax,
        dims: 2..=args.dimmax,
        max_ell: args.max_ell,
        seed: args.seed,
        inject_fault: args.inject_fault,
    };
    let summary = match oracle::run_sweep(&cfg) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    println!(
        "{} records checked, {} identity checks, {} disagreements{}",
        summary.records_checked,
        summary.identity_checks,
        summary.disagreements.len(),
        if summary.truncated { " (truncated)" } else { "" }
    );
    for d in &summary.disagreements {
        println!(
            "disagreement: BS({}, {}) dim {} ell {}: criterion = {}, oracle = {} ({})",
            d.p, d.q, d.dim, d.ell, d.criterion_irreducible, d.oracle_irreducible, d.detail
        );
    }
    if !summary.disagreements.is_empty() {
        EXIT_DISAGREEMENT
    } else if summary.truncated {
        EXIT_BUDGET
    } else {
        EXIT_OK
    }
}
