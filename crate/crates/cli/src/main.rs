//! Command-line entry points for the semantics workbench.
//!
//! Exit codes: 0 success (and agreeing comparison), 1 failed comparison
//! or law suite, 2 parse error, 3 type error, 4 configuration error,
//! 5 continuous primitive in an exact interpretation, 6 unconverged
//! fixed point.

use clap::{Args, Parser, Subcommand};
use ppcf_core::bang::checks;
use ppcf_core::lang::{
    self, compare_adequacy, denote_program, estimate_dist, op_eval, parse_program, typecheck,
    DenoteCtx, DenoteError, Span,
};
use ppcf_core::laws;
use ppcf_core::rat::{parse_rat, to_frac_string};
use ppcf_core::report::{meta, DistReport};
use ppcf_core::seed::SeedStream;
use serde_json::json;
use std::process::ExitCode;

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_TYPE: u8 = 3;
const EXIT_CONFIG: u8 = 4;
const EXIT_CONTINUOUS: u8 = 5;
const EXIT_UNCONVERGED: u8 = 6;

#[derive(Parser)]
#[command(
    name = "ppcf",
    about = "Exact and sampled semantics for a small probabilistic language",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Root seed for sampling (required by sampling commands; there is
    /// no ambient randomness)
    #[arg(long)]
    seed: Option<u64>,
    /// Number of Monte-Carlo samples
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Reduction-step budget per run; exhausted runs count as bottom
    #[arg(long, default_value_t = 10_000)]
    fuel: u64,
    /// Truncation degree for exponential computations
    #[arg(long, default_value_t = 8)]
    degree: usize,
    /// Fixed-point tolerance as an exact rational
    #[arg(long, default_value = "1/1000000000")]
    fix_tol: String,
    /// Iteration budget for fixed points
    #[arg(long, default_value_t = 10_000)]
    fix_max_iter: usize,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// One seeded operational run of a data-typed program
    Run {
        file: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Empirical distribution of a data-typed program
    Dist {
        file: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Exact denotational distribution (discrete fragment only)
    Denote {
        file: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Compare the exact denotation against the sampled distribution
    Compare {
        file: String,
        /// Agreement threshold in standard errors
        #[arg(long, default_value_t = 4.0)]
        z_sigma: f64,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run a law suite: monad, convex, exponential, comonoid, analytic, all
    Laws { suite: String },
    /// Exact numeric bound checks on the exponential construction
    PaperChecks {
        #[command(flatten)]
        opts: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version requests are not configuration errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match cli.command {
        Cmd::Run { file, opts } => cmd_run(&file, &opts),
        Cmd::Dist { file, opts } => cmd_dist(&file, &opts),
        Cmd::Denote { file, opts } => cmd_denote(&file, &opts),
        Cmd::Compare { file, z_sigma, opts } => cmd_compare(&file, z_sigma, &opts),
        Cmd::Laws { suite } => cmd_laws(&suite),
        Cmd::PaperChecks { opts } => cmd_paper_checks(&opts),
    }
}

fn load_program(path: &str) -> Result<lang::Term, ExitCode> {
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("cannot read {path}: {e}");
            return Err(ExitCode::from(EXIT_CONFIG));
        }
    };
    parse_program(&src).map_err(|e| {
        eprintln!("{path}: {e}");
        ExitCode::from(EXIT_PARSE)
    })
}

fn typecheck_or_exit(term: &lang::Term, path: &str) -> Result<lang::TypedTerm, ExitCode> {
    typecheck(term).map_err(|e| {
        eprintln!("{path}: {e}");
        ExitCode::from(EXIT_TYPE)
    })
}

fn need_data_type(typed: &lang::TypedTerm, path: &str) -> Result<(), ExitCode> {
    if typed.ty.is_data_type() {
        Ok(())
    } else {
        eprintln!("{path}: program has function type {}; sampling needs a data type", typed.ty);
        Err(ExitCode::from(EXIT_TYPE))
    }
}

fn need_seed(opts: &CommonOpts) -> Result<u64, ExitCode> {
    opts.seed.ok_or_else(|| {
        eprintln!("--seed is required for sampling commands");
        ExitCode::from(EXIT_CONFIG)
    })
}

fn fix_ctx(opts: &CommonOpts) -> Result<DenoteCtx, ExitCode> {
    let tol = parse_rat(&opts.fix_tol).filter(|t| *t > ppcf_core::rat::zero()).ok_or_else(|| {
        eprintln!("--fix-tol must be a positive rational, got `{}`", opts.fix_tol);
        ExitCode::from(EXIT_CONFIG)
    })?;
    if opts.fix_max_iter == 0 {
        eprintln!("--fix-max-iter must be positive");
        return Err(ExitCode::from(EXIT_CONFIG));
    }
    Ok(DenoteCtx { fix_tol: tol, max_iter: opts.fix_max_iter, ..DenoteCtx::default() })
}

fn denote_exit(e: &DenoteError) -> ExitCode {
    match e {
        DenoteError::ContinuousPrimitive { .. } => ExitCode::from(EXIT_CONTINUOUS),
        DenoteError::UnconvergedFix { .. } => ExitCode::from(EXIT_UNCONVERGED),
        _ => ExitCode::from(EXIT_CONFIG),
    }
}

fn cmd_run(path: &str, opts: &CommonOpts) -> ExitCode {
    let term = match load_program(path) {
        Ok(t) => t,
        Err(c) => return c,
    };
    match typecheck_or_exit(&term, path) {
        Ok(t) => {
            if let Err(c) = need_data_type(&t, path) {
                return c;
            }
        }
        Err(c) => return c,
    }
    let seed = match need_seed(opts) {
        Ok(s) => s,
        Err(c) => return c,
    };
    let mut stream = SeedStream::root(seed);
    let outcome = op_eval(&term, &mut stream, opts.fuel);
    if opts.json {
        let value = match &outcome {
            Some(v) => v.to_json(),
            None => serde_json::Value::Null,
        };
        let out = json!({
            "value": value,
            "bottom": outcome.is_none(),
            "meta": { "command": "run", "seed": seed, "fuel": opts.fuel },
        });
        println!("{out}");
    } else {
        match outcome {
            Some(v) => println!("{v}"),
            None => println!("bottom"),
        }
    }
    ExitCode::SUCCESS
}

fn cmd_dist(path: &str, opts: &CommonOpts) -> ExitCode {
    let term = match load_program(path) {
        Ok(t) => t,
        Err(c) => return c,
    };
    match typecheck_or_exit(&term, path) {
        Ok(t) => {
            if let Err(c) = need_data_type(&t, path) {
                return c;
            }
        }
        Err(c) => return c,
    }
    let seed = match need_seed(opts) {
        Ok(s) => s,
        Err(c) => return c,
    };
    let est = estimate_dist(&term, opts.samples, seed, opts.fuel);
    let report = DistReport::from_estimate(
        &est,
        meta(&[
            ("command", "dist".into()),
            ("seed", seed.into()),
            ("samples", opts.samples.into()),
            ("fuel", opts.fuel.into()),
        ]),
    );
    if opts.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text());
    }
    ExitCode::SUCCESS
}

fn cmd_denote(path: &str, opts: &CommonOpts) -> ExitCode {
    let term = match load_program(path) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let typed = match typecheck_or_exit(&term, path) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let ctx = match fix_ctx(opts) {
        Ok(c) => c,
        Err(c) => return c,
    };
    let denot = match denote_program(&typed, &ctx) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("{path}: {e}");
            return denote_exit(&e);
        }
    };
    let measure = match denot.data_measure(Span::default()) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{path}: {e}");
            return ExitCode::from(EXIT_TYPE);
        }
    };
    let report = DistReport::from_measure(
        &measure,
        meta(&[
            ("command", "denote".into()),
            ("fix_tol", to_frac_string(&ctx.fix_tol).into()),
            ("degree", opts.degree.into()),
        ]),
    );
    if opts.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text());
    }
    ExitCode::SUCCESS
}

fn cmd_compare(path: &str, z_sigma: f64, opts: &CommonOpts) -> ExitCode {
    let term = match load_program(path) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let typed = match typecheck_or_exit(&term, path) {
        Ok(t) => t,
        Err(c) => return c,
    };
    if let Err(c) = need_data_type(&typed, path) {
        return c;
    }
    let seed = match need_seed(opts) {
        Ok(s) => s,
        Err(c) => return c,
    };
    let ctx = match fix_ctx(opts) {
        Ok(c) => c,
        Err(c) => return c,
    };
    let report = match compare_adequacy(&typed, &term, z_sigma, &ctx, opts.samples, seed, opts.fuel)
    {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{path}: {e}");
            return denote_exit(&e);
        }
    };
    if opts.json {
        println!("{}", report.to_json());
    } else {
        for a in &report.atoms {
            println!(
                "{}\tdenoted {}\testimated {:.6}\t{}",
                a.value,
                to_frac_string(&a.denoted),
                a.estimated,
                if a.pass { "ok" } else { "MISMATCH" }
            );
        }
        println!(
            "bottom\tdenoted {}\testimated {:.6}\t{}",
            to_frac_string(&report.denoted_bottom),
            report.estimated_bottom,
            if report.bottom_pass { "ok" } else { "MISMATCH" }
        );
        println!("{}", if report.pass { "PASS" } else { "FAIL" });
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn cmd_laws(suite: &str) -> ExitCode {
    let Some(results) = laws::run_suite(suite) else {
        eprintln!(
            "unknown suite `{suite}`: expected monad, convex, exponential, comonoid, analytic or all"
        );
        return ExitCode::from(EXIT_CONFIG);
    };
    let mut all_pass = true;
    for r in &results {
        let kind = match r.kind {
            laws::LawKind::Exact => "exact",
            laws::LawKind::Statistical => "stat ",
        };
        println!(
            "{} [{kind}] {}/{} - {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.suite,
            r.name,
            r.detail
        );
        all_pass &= r.pass;
    }
    println!("{} laws, {}", results.len(), if all_pass { "all passing" } else { "FAILURES" });
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn cmd_paper_checks(opts: &CommonOpts) -> ExitCode {
    let mut all_pass = true;
    let mut rows: Vec<serde_json::Value> = Vec::new();
    let mut emit = |name: &str, value: String, bound: String, pass: bool| {
        all_pass &= pass;
        rows.push(json!({ "check": name, "value": value, "bound": bound, "pass": pass }));
        if !opts.json {
            println!("{} {name}: {value} vs {bound}", if pass { "PASS" } else { "FAIL" });
        }
    };

    // projection defect: the degree-3 to degree-2 projection is not onto
    let max = checks::projection_defect_max();
    emit(
        "projection-defect-max",
        to_frac_string(&max),
        "<= 2/3 over 216 vertex triples".to_string(),
        max <= ppcf_core::rat::rat(2, 3),
    );
    let witness = checks::projection_defect_witness();
    emit(
        "projection-defect-witness",
        to_frac_string(&witness),
        "= 1 in degree 2".to_string(),
        witness == ppcf_core::rat::one(),
    );

    // deep projections contract towards one half
    for n in 1..=3usize {
        let max = checks::deep_projection_max(n);
        let bound = checks::deep_projection_bound(n);
        emit(
            match n {
                1 => "deep-projection-max-2",
                2 => "deep-projection-max-4",
                _ => "deep-projection-max-6",
            },
            to_frac_string(&max),
            format!("<= {}", to_frac_string(&bound)),
            max <= bound,
        );
    }

    // the analytic-but-not-effective map stays inside the unit interval
    for trunc in [2usize, 4, 6] {
        if trunc > opts.degree {
            continue;
        }
        let ok = checks::four_p0p1_membership_valid(trunc, 8);
        emit(
            match trunc {
                2 => "four-p0p1-membership-2",
                4 => "four-p0p1-membership-4",
                _ => "four-p0p1-membership-6",
            },
            if ok { "inside".to_string() } else { "outside".to_string() },
            "unit interval on the simplex grid".to_string(),
            ok,
        );
    }

    if opts.json {
        println!("{}", json!({ "checks": rows, "pass": all_pass }));
    } else {
        println!("{}", if all_pass { "all checks hold" } else { "CHECK FAILURES" });
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
