//! `gaussian-eof`: classify two-mode Gaussian states and report lower bounds on
//! their entanglement of formation.
//!
//! Exit codes: 0 success, 2 state rejected (unphysical or separable), 3 parse
//! error, 4 property violation.

mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use gaussian_eof::symmetrization::pipeline_trace;
use gaussian_eof::symplectic::ensure_physical;
use gaussian_eof::testkit::{self, EnsembleConfig};
use gaussian_eof::{
    bound_report, candidate_f1, candidate_f2, classify, cm_from_standard_form, epr_delta, invariants, lb1, lb2,
    standard_form, BoundReport, CovarianceMatrix, Error, StandardForm, StateTag, SymplecticInvariants, TABLE_I,
};

use input::ParseError;

#[derive(Parser)]
#[command(
    name = "gaussian-eof",
    version,
    about = "Entanglement-of-formation lower bounds for two-mode Gaussian states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one state and report both lower bounds.
    Analyze(AnalyzeArgs),
    /// Recompute the six reference states and their bounds.
    Table1 {
        /// Compare against the reference values and report the largest deviation.
        #[arg(long)]
        diff: bool,
    },
    /// Show that the two candidate closed forms fall below the bounds.
    Counterexamples,
    /// Run the seeded Monte-Carlo property suites.
    Check {
        #[arg(long, default_value_t = EnsembleConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = EnsembleConfig::default().count)]
        count: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "source")]
struct Source {
    /// Standard-form parameters `n,m,kx,kp`.
    #[arg(long, value_name = "N,M,KX,KP", allow_hyphen_values = true)]
    sf: Option<String>,
    /// File with a 4x4 covariance matrix over (X1, P1, X2, P2).
    #[arg(long, value_name = "PATH")]
    matrix: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    json: bool,
    /// Also print the invariants, the symmetrization angle and Delta.
    #[arg(long)]
    verbose: bool,
}

enum Failure {
    Rejected(String),
    Parse(String),
    Violation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Rejected(_) => 2,
            Failure::Parse(_) => 3,
            Failure::Violation(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Rejected(m) | Failure::Parse(m) | Failure::Violation(m) => m,
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e.0)
    }
}

/// Errors the library raises for states that are not physical.
fn rejection_or_violation(e: Error) -> Failure {
    match e {
        Error::Unphysical { .. }
        | Error::Singular { .. }
        | Error::NegativeBlockDeterminant { .. }
        | Error::ComplexRoot { .. } => Failure::Rejected(e.to_string()),
        Error::NotEntangled => Failure::Rejected("separable".into()),
        other => Failure::Violation(other.to_string()),
    }
}

/// Five decimals; `{:.5}` rounds the exact binary value half to even.
fn fmt5(x: f64) -> String {
    // Avoid printing "-0.00000".
    let s = format!("{:.5}", x);
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_owned()
    } else {
        s
    }
}

#[derive(Serialize)]
struct InvariantsJson {
    i1: f64,
    i2: f64,
    i3: f64,
    i4: f64,
    i5: f64,
}

impl From<&SymplecticInvariants> for InvariantsJson {
    fn from(v: &SymplecticInvariants) -> Self {
        Self {
            i1: v.i1,
            i2: v.i2,
            i3: v.i3,
            i4: v.i4,
            i5: v.i5,
        }
    }
}

#[derive(Serialize)]
struct AnalyzeJson {
    class: StateTag,
    n: f64,
    m: f64,
    kx: f64,
    kp: f64,
    lb1: f64,
    lb2: f64,
    best: f64,
    delta: f64,
    delta_optimized: f64,
    lb2_degenerate: bool,
    invariants: InvariantsJson,
}

struct Analysis {
    sf: StandardForm,
    report: BoundReport,
    invariants: SymplecticInvariants,
    tan_sq_theta: f64,
    input_delta: f64,
}

fn analyze_state(gamma: &CovarianceMatrix, sf: StandardForm) -> Result<Analysis, Failure> {
    let class = classify(&sf);
    match class.tag {
        StateTag::Entangled => {}
        tag => {
            let label = if tag == StateTag::Separable {
                "separable"
            } else {
                "unphysical"
            };
            let rule = class.violated_inequality.map_or("", |i| i.describe());
            let verb = if tag == StateTag::Separable {
                "fails"
            } else {
                "violates"
            };
            let (n, m, kx, kp) = sf.as_tuple();
            return Err(Failure::Rejected(format!(
                "{label}: ({n}, {m}, {kx}, {kp}) {verb} {rule}"
            )));
        }
    }
    let report = bound_report(&sf).map_err(rejection_or_violation)?;
    let trace = pipeline_trace(gamma).map_err(rejection_or_violation)?;
    Ok(Analysis {
        sf,
        report,
        invariants: invariants(gamma).map_err(rejection_or_violation)?,
        tan_sq_theta: trace.symmetrization.tan_sq_theta,
        input_delta: epr_delta(gamma).map_err(rejection_or_violation)?,
    })
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), Failure> {
    let (gamma, sf) = match (&args.source.sf, &args.source.matrix) {
        (Some(text), _) => {
            let sf = input::parse_standard_form(text)?;
            (cm_from_standard_form(&sf), sf)
        }
        (None, Some(path)) => {
            let gamma = input::read_matrix(path)?;
            ensure_physical(&gamma).map_err(rejection_or_violation)?;
            let sf = standard_form(&gamma).map_err(rejection_or_violation)?;
            (gamma, sf)
        }
        (None, None) => unreachable!("clap enforces one source"),
    };
    let a = analyze_state(&gamma, sf)?;
    let (n, m, kx, kp) = a.sf.as_tuple();
    let r = &a.report;

    if args.json {
        let out = AnalyzeJson {
            class: StateTag::Entangled,
            n,
            m,
            kx,
            kp,
            lb1: r.lb1,
            lb2: r.lb2,
            best: r.best,
            delta: r.delta_raw,
            delta_optimized: r.delta_optimized,
            lb2_degenerate: r.lb2_degenerate,
            invariants: (&a.invariants).into(),
        };
        println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
        return Ok(());
    }

    let swapped = if a.sf.modes_swapped() { "  (modes swapped)" } else { "" };
    let which = if r.lb1 >= r.lb2 { "LB1" } else { "LB2" };
    println!("class            entangled");
    println!(
        "n, m, kx, kp     {}, {}, {}, {}{swapped}",
        fmt5(n),
        fmt5(m),
        fmt5(kx),
        fmt5(kp)
    );
    println!("LB1              {}", fmt5(r.lb1));
    println!("LB2              {}", fmt5(r.lb2));
    println!("best             {} ({which})", fmt5(r.best));
    println!("delta            {}", fmt5(r.delta_raw));
    println!("delta_optimized  {}", fmt5(r.delta_optimized));
    println!("lb1_degenerate   {}", r.lb1_degenerate);
    println!("lb2_degenerate   {}", r.lb2_degenerate);
    if args.verbose {
        let inv = &a.invariants;
        println!(
            "invariants       i1={} i2={} i3={} i4={} i5={}",
            inv.i1, inv.i2, inv.i3, inv.i4, inv.i5
        );
        println!("tan^2 theta      {}", a.tan_sq_theta);
        println!("delta (input)    {}", a.input_delta);
    }
    Ok(())
}

fn cmd_table1(diff: bool) -> Result<(), Failure> {
    if diff {
        println!(
            "{:<24} {:>9} {:>9} {:>9} {:>9} {:>9}",
            "(n, m, kx, kp)", "LB1", "ref", "LB2", "ref", "|dev|"
        );
    } else {
        println!("{:<24} {:>9} {:>9}", "(n, m, kx, kp)", "LB1", "LB2");
    }
    let mut max_dev = 0.0f64;
    for (n, m, kx, kp, p1, p2) in TABLE_I {
        let sf = StandardForm::new(n, m, kx, kp);
        let (l1, l2) = (
            lb1(&sf).map_err(rejection_or_violation)?,
            lb2(&sf).map_err(rejection_or_violation)?,
        );
        let params = format!("({n}, {m}, {kx}, {kp})");
        if diff {
            let dev = (l1 - p1).abs().max((l2 - p2).abs());
            max_dev = max_dev.max(dev);
            println!(
                "{params:<24} {:>9} {:>9} {:>9} {:>9} {:>9.2e}",
                fmt5(l1),
                fmt5(p1),
                fmt5(l2),
                fmt5(p2),
                dev
            );
        } else {
            println!("{params:<24} {:>9} {:>9}", fmt5(l1), fmt5(l2));
        }
    }
    if diff {
        let note = if max_dev <= 1e-4 { "within" } else { "exceeds" };
        println!("max absolute deviation {max_dev:.3e} ({note} 1e-4)");
    }
    Ok(())
}

fn cmd_counterexamples() -> Result<(), Failure> {
    let first = StandardForm::new(2.0, 2.5, 1.3, -1.2);
    let second = StandardForm::new(1.5, 2.0, 1.1, -1.0);
    let (l1, f1) = (
        lb1(&first).map_err(rejection_or_violation)?,
        candidate_f1(&first).map_err(rejection_or_violation)?,
    );
    let (l2, f2) = (
        lb2(&second).map_err(rejection_or_violation)?,
        candidate_f2(&second).map_err(rejection_or_violation)?,
    );
    let mark = |ok: bool| if ok { "holds" } else { "FAILS" };
    println!(
        "(2, 2.5, 1.3, -1.2)  LB1 = {l1:.6}  f1 = {f1:.6}  LB1 > f1 {}",
        mark(l1 > f1)
    );
    println!(
        "(1.5, 2, 1.1, -1)    LB2 = {l2:.6}  f2 = {f2:.6}  LB2 > f2 {}",
        mark(l2 > f2)
    );
    if l1 > f1 && l2 > f2 {
        Ok(())
    } else {
        Err(Failure::Violation("a candidate exceeds its lower bound".into()))
    }
}

fn cmd_check(seed: u64, count: usize, json: bool) -> Result<(), Failure> {
    let cfg = EnsembleConfig::with_seed(seed, count);
    let reports = testkit::run_all(&cfg).map_err(|e| Failure::Violation(e.to_string()))?;
    if json {
        println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
    } else {
        for r in &reports {
            print!("{r}");
        }
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if failed == 0 {
        if !json {
            println!("all suites passed (seed {seed}, count {count})");
        }
        Ok(())
    } else {
        Err(Failure::Violation(format!("{failed} suite(s) reported violations")))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match &cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Table1 { diff } => cmd_table1(*diff),
        Command::Counterexamples => cmd_counterexamples(),
        Command::Check { seed, count, json } => cmd_check(*seed, *count, *json),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
