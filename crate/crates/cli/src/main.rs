//! Command-line front end: parse, evaluate, build and reduce towers, test
//! zero, search relations, enumerate construction stages, certify the S5
//! quintic, and produce conjecture evidence reports.
//!
//! Exit codes: 0 for definite results, 2 for Unknown or budget-exhausted
//! verdicts, 1 for usage and guard errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use elnum::eval::{EvalBudget, EvalError};
use elnum::expr::{parse, render, ExprRef};
use elnum::lab::{self, evidence, galois};
use elnum::linrel::{self, RelationStatus};
use elnum::num::Dyadic;
use elnum::report::{BallRepr, RelationRepr, TowerRepr, VerdictRepr, FORMAT_VERSION};
use elnum::tower::{self, TowerError};
use elnum::zero::{self, ZeroVerdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;
use std::process::ExitCode;
use std::time::{Duration, Instant};

#[derive(Parser)]
#[command(name = "elnum", version, about = "exp-log closed-form number workbench")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Config {
    /// Working precision in bits (>= 64).
    #[arg(long, global = true, default_value_t = 256)]
    precision_bits: u32,
    /// Height bound for integer-relation searches (>= 1).
    #[arg(long, global = true, default_value_t = 50)]
    height_bound: u32,
    /// Wall-clock safety budget in milliseconds.
    #[arg(long, global = true, default_value_t = 30_000)]
    budget_ms: u64,
    /// Output mode.
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Text)]
    output: OutputMode,
    /// Seed recorded in reports (all computations are deterministic).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Comma-separated extra basis expressions for conjecture evidence.
    #[arg(long, global = true)]
    basis: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an expression and print its canonical form.
    Parse { expr: String },
    /// Evaluate to a rigorous complex enclosure.
    Eval { expr: String },
    /// Build the tower for an expression and verify its witnesses.
    Tower { expr: String },
    /// Build, reduce, and verify the tower for an expression.
    Reduce { expr: String },
    /// Three-valued zero test.
    Zero { expr: String },
    /// Search for an integer relation among two or more values.
    Relation { exprs: Vec<String> },
    /// Enumerate construction stages 0..=N with separation bounds.
    #[command(name = "enum")]
    Enumerate {
        /// Highest stage to enumerate (at most 4).
        #[arg(long, default_value_t = 2)]
        max_level: u32,
    },
    /// Certify the Galois group S5 for a degree-5 polynomial.
    S5 {
        /// Comma-separated rational coefficients, constant term first
        /// (default: the question quintic 2x^5 - 10x + 5).
        #[arg(long, allow_hyphen_values = true)]
        coefficients: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        prime_budget: usize,
    },
    /// Evidence report for conjecture 1 or 2.
    Conjecture { id: u8 },
}

#[derive(Serialize)]
struct Document {
    version: &'static str,
    command: String,
    precision_bits: u32,
    height_bound: u32,
    seed: u64,
    result: serde_json::Value,
}

struct Ctx {
    config: Config,
    budget: EvalBudget,
}

impl Ctx {
    fn emit(&self, command: &str, result: serde_json::Value, text: String) {
        match self.config.output {
            OutputMode::Text => println!("{}", text.trim_end()),
            OutputMode::Structured => {
                let doc = Document {
                    version: FORMAT_VERSION,
                    command: command.to_string(),
                    precision_bits: self.config.precision_bits,
                    height_bound: self.config.height_bound,
                    seed: self.config.seed,
                    result,
                };
                println!("{}", serde_json::to_string(&doc).expect("serialize"));
            }
        }
    }
}

fn main() -> ExitCode {
    // Usage errors exit 1 (clap's default of 2 is reserved for Unknown).
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if e.kind() == clap::error::ErrorKind::DisplayHelp
                || e.kind() == clap::error::ErrorKind::DisplayVersion =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    if cli.config.precision_bits < 64 {
        eprintln!("error: --precision-bits must be at least 64");
        return ExitCode::from(1);
    }
    if cli.config.height_bound < 1 {
        eprintln!("error: --height-bound must be at least 1");
        return ExitCode::from(1);
    }
    let budget = EvalBudget {
        max_precision_bits: (cli.config.precision_bits * 16).clamp(8192, 1 << 20),
        zero_test_budget: 6,
        deadline: Some(Instant::now() + Duration::from_millis(cli.config.budget_ms)),
    };
    let ctx = Ctx {
        config: cli.config.clone(),
        budget,
    };
    match run(&cli.command, &ctx) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_for_error(&e))
        }
    }
}

/// Guard violations are usage-class errors (1); undecidable or exhausted
/// verdicts are 2.
fn exit_for_error(e: &EvalError) -> u8 {
    match e {
        EvalError::DivisionByZero(_) | EvalError::LogOfZero(_) => 1,
        EvalError::GuardUndecided(_)
        | EvalError::BranchUndecided(_)
        | EvalError::BudgetExhausted
        | EvalError::MagnitudeOverflow => 2,
    }
}

fn run(cmd: &Command, ctx: &Ctx) -> Result<ExitCode, EvalError> {
    match cmd {
        Command::Parse { expr } => cmd_parse(expr, ctx),
        Command::Eval { expr } => cmd_eval(expr, ctx),
        Command::Tower { expr } => cmd_tower(expr, ctx, false),
        Command::Reduce { expr } => cmd_tower(expr, ctx, true),
        Command::Zero { expr } => cmd_zero(expr, ctx),
        Command::Relation { exprs } => cmd_relation(exprs, ctx),
        Command::Enumerate { max_level } => cmd_enum(*max_level, ctx),
        Command::S5 {
            coefficients,
            prime_budget,
        } => cmd_s5(coefficients.as_deref(), *prime_budget, ctx),
        Command::Conjecture { id } => cmd_conjecture(*id, ctx),
    }
}

fn parse_or_usage(text: &str) -> Result<ExprRef, ExitCode> {
    parse(text).map_err(|err| {
        eprintln!("syntax error: {}", err);
        ExitCode::from(1)
    })
}

fn cmd_parse(text: &str, ctx: &Ctx) -> Result<ExitCode, EvalError> {
    let e = match parse_or_usage(text) {
        Ok(e) => e,
        Err(code) => return Ok(code),
    };
    let meta = e.meta();
    ctx.emit(
        "parse",
        json!({
            "canonical": render(&e),
            "node_count": meta.node_count,
            "depth_bound": meta.depth,
        }),
        format!(
            "{}\nnodes: {}  depth bound: {}",
            render(&e),
            meta.node_count,
            meta.depth
        ),
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(text: &str, ctx: &Ctx) -> Result<ExitCode, EvalError> {
    let e = match parse_or_usage(text) {
        Ok(e) => e,
        Err(code) => return Ok(code),
    };
    let target = Dyadic::pow2(-(ctx.config.precision_bits as i64));
    // Prefer the absolute-radius refinement; values with astronomical
    // magnitude cannot reach it, so fall back to a plain enclosure at the
    // requested working precision (the printed radius shows the quality).
    let ball = match zero::refine(&e, &target, &ctx.budget) {
        Ok(b) => b,
        Err(EvalError::BudgetExhausted) => zero::eval(&e, ctx.config.precision_bits, &ctx.budget)?,
        Err(other) => return Err(other),
    };
    let repr = BallRepr::from_ball(&ball, ctx.config.precision_bits);
    ctx.emit(
        "eval",
        json!({ "enclosure": repr }),
        format!(
            "re  = {}\nim  = {}\nrad <= {}",
            repr.mid_re, repr.mid_im, repr.radius
        ),
    );
    Ok(ExitCode::SUCCESS)
}

fn tower_error_exit(e: &TowerError) -> u8 {
    match e {
        TowerError::Eval(inner) => exit_for_error(inner),
        TowerError::LengthMismatch { .. } | TowerError::ZeroDivisor => 1,
        _ => 2,
    }
}

fn cmd_tower(text: &str, ctx: &Ctx, reduce: bool) -> Result<ExitCode, EvalError> {
    let e = match parse_or_usage(text) {
        Ok(e) => e,
        Err(code) => return Ok(code),
    };
    let tol = Dyadic::pow2(-100);
    let built = match tower::build_tower(&e, &ctx.budget) {
        Ok(t) => t,
        Err(err) => {
            eprintln!("tower construction failed: {}", err);
            return Ok(ExitCode::from(tower_error_exit(&err)));
        }
    };
    let (final_tower, reduction_note) = if reduce {
        match tower::reduce_tower(
            &built,
            ctx.config.height_bound,
            ctx.config.precision_bits,
            &ctx.budget,
        ) {
            Ok(r) => {
                let note = format!(
                    "reduced {} -> {} entries (no relation up to height {} at {} bits)",
                    built.len(),
                    r.tower.len(),
                    r.height_bound,
                    r.precision_bits
                );
                (r.tower, Some(note))
            }
            Err(err) => {
                eprintln!("reduction failed: {}", err);
                return Ok(ExitCode::from(tower_error_exit(&err)));
            }
        }
    } else {
        (built, None)
    };
    let verify = match tower::verify_tower(&final_tower, &tol, &ctx.budget) {
        Ok(v) => v,
        Err(err) => {
            eprintln!("verification failed: {}", err);
            return Ok(ExitCode::from(tower_error_exit(&err)));
        }
    };
    let repr = TowerRepr::from_tower(&final_tower);
    let mut text_out = String::new();
    for (i, entry) in repr.entries.iter().enumerate() {
        text_out.push_str(&format!(
            "alpha_{} = {}   [m = {}, {} = {}]\n",
            i + 1,
            entry.alpha,
            entry.m,
            entry.witness_kind,
            entry.witness
        ));
    }
    if let Some(t) = &repr.target {
        text_out.push_str(&format!("target = {}\n", t));
    }
    if let Some(n) = &reduction_note {
        text_out.push_str(&format!("{}\n", n));
    }
    text_out.push_str(&format!(
        "witness verification: {}",
        if verify.all_passed { "pass" } else { "FAIL" }
    ));
    let verify_json: Vec<serde_json::Value> = verify
        .entries
        .iter()
        .map(|c| {
            json!({
                "index": c.index,
                "passed": c.passed,
                "residual_radius": c.residual_radius.to_decimal(3),
                "detail": c.detail,
            })
        })
        .collect();
    ctx.emit(
        if reduce { "reduce" } else { "tower" },
        json!({
            "tower": repr,
            "reduction": reduction_note,
            "verification": { "all_passed": verify.all_passed, "entries": verify_json },
        }),
        text_out,
    );
    Ok(if verify.all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_zero(text: &str, ctx: &Ctx) -> Result<ExitCode, EvalError> {
    let e = match parse_or_usage(text) {
        Ok(e) => e,
        Err(code) => return Ok(code),
    };
    let verdict = zero::is_zero(&e, &ctx.budget);
    let repr = VerdictRepr::from_verdict(&verdict, ctx.config.precision_bits);
    let text_out = match &verdict {
        ZeroVerdict::Zero { derivation } => {
            let mut s = String::from("Zero\n");
            for step in derivation {
                s.push_str(&format!(
                    "  [{}] {} => {}\n",
                    step.rule, step.before, step.after
                ));
            }
            s
        }
        ZeroVerdict::Nonzero { certificate } => {
            let b = BallRepr::from_ball(certificate, ctx.config.precision_bits);
            format!(
                "Nonzero\n  certificate: re = {}, im = {}, rad <= {}",
                b.mid_re, b.mid_im, b.radius
            )
        }
        ZeroVerdict::Unknown { diagnostic, .. } => format!(
            "Unknown{}",
            diagnostic
                .as_ref()
                .map(|d| format!("\n  {}", d))
                .unwrap_or_default()
        ),
    };
    ctx.emit("zero", json!({ "verdict": repr }), text_out);
    Ok(match verdict {
        ZeroVerdict::Unknown { .. } => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    })
}

fn cmd_relation(texts: &[String], ctx: &Ctx) -> Result<ExitCode, EvalError> {
    if texts.len() < 2 {
        eprintln!("error: relation needs at least two expressions");
        return Ok(ExitCode::from(1));
    }
    let mut values = Vec::new();
    for t in texts {
        match parse_or_usage(t) {
            Ok(e) => values.push(e),
            Err(code) => return Ok(code),
        }
    }
    let found = linrel::find_rational_relation(
        &values,
        ctx.config.height_bound,
        ctx.config.precision_bits,
        &ctx.budget,
    )?;
    match found {
        None => {
            ctx.emit(
                "relation",
                json!({
                    "relation": serde_json::Value::Null,
                    "note": "no integer relation within bounds",
                }),
                format!(
                    "no integer relation up to height {} at {} bits",
                    ctx.config.height_bound, ctx.config.precision_bits
                ),
            );
            Ok(ExitCode::SUCCESS)
        }
        Some(rel) => {
            let checked = linrel::verify_relation(&values, &rel, &ctx.budget);
            let rejected = checked
                .diagnostic
                .as_deref()
                .map(|d| d.contains("rejected"))
                .unwrap_or(false);
            let repr = RelationRepr {
                coefficients: checked.coefficients.clone(),
                height: checked.height,
                status: match checked.status {
                    RelationStatus::VerifiedSymbolic => "verified_symbolic".to_string(),
                    RelationStatus::CandidateNumeric => "candidate_numeric".to_string(),
                },
                height_bound: ctx.config.height_bound,
                precision_bits: ctx.config.precision_bits,
                diagnostic: checked.diagnostic.clone(),
            };
            let text_out = format!(
                "relation: {:?} (height {})\nstatus: {}{}",
                repr.coefficients,
                repr.height,
                repr.status,
                checked
                    .diagnostic
                    .as_ref()
                    .map(|d| format!("\n  {}", d))
                    .unwrap_or_default()
            );
            ctx.emit("relation", json!({ "relation": repr }), text_out);
            Ok(match checked.status {
                RelationStatus::VerifiedSymbolic => ExitCode::SUCCESS,
                RelationStatus::CandidateNumeric if rejected => ExitCode::SUCCESS,
                RelationStatus::CandidateNumeric => ExitCode::from(2),
            })
        }
    }
}

fn cmd_enum(max_level: u32, ctx: &Ctx) -> Result<ExitCode, EvalError> {
    if max_level > 4 {
        eprintln!("error: --max-level is capped at 4");
        return Ok(ExitCode::from(1));
    }
    let levels = lab::enumerate_levels(max_level, &lab::LevelCaps::default(), &ctx.budget)?;
    let mut text_out = String::new();
    let mut json_levels = Vec::new();
    let mut any_ambiguity = false;
    for level in &levels {
        any_ambiguity |= level.has_ambiguity();
        let members: Vec<String> = level
            .members
            .iter()
            .map(|m| render(&zero::exact_rewrites(&m.expr)))
            .collect();
        text_out.push_str(&format!(
            "E_{}: {} member{}{}\n  {{{}}}\n",
            level.n,
            level.len(),
            if level.len() == 1 { "" } else { "s" },
            if level.truncated { " (truncated)" } else { "" },
            members.join(", ")
        ));
        let sep_json = if level.len() >= 2 {
            let sep = lab::separation(level, &ctx.budget)
                .map_err(|e| EvalError::GuardUndecided(e.to_string()))?;
            text_out.push_str(&format!(
                "  separation >= {}{}\n",
                sep.epsilon.to_decimal(12),
                if sep.certified { "" } else { " (uncertified)" }
            ));
            json!({
                "epsilon": sep.epsilon.to_decimal(20),
                "certified": sep.certified,
                "undecided_pairs": sep.undecided_pairs,
            })
        } else {
            serde_json::Value::Null
        };
        json_levels.push(json!({
            "n": level.n,
            "members": members,
            "truncated": level.truncated,
            "ambiguous": level.has_ambiguity(),
            "separation": sep_json,
        }));
    }
    ctx.emit("enum", json!({ "levels": json_levels }), text_out);
    Ok(if any_ambiguity {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn parse_coefficients(text: &str) -> Result<Vec<BigRational>, String> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            let (num, den) = match s.split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (s, "1"),
            };
            let n: BigInt = num.parse().map_err(|_| format!("bad integer {:?}", num))?;
            let d: BigInt = den.parse().map_err(|_| format!("bad integer {:?}", den))?;
            if d == BigInt::from(0) {
                return Err("zero denominator".to_string());
            }
            Ok(BigRational::new(n, d))
        })
        .collect()
}

fn cmd_s5(coeffs: Option<&str>, prime_budget: usize, ctx: &Ctx) -> Result<ExitCode, EvalError> {
    let coefficients = match coeffs {
        Some(text) => match parse_coefficients(text) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {}", e);
                return Ok(ExitCode::from(1));
            }
        },
        None => lab::roots::question_quintic(),
    };
    match galois::certify_s5(&coefficients, prime_budget) {
        Ok(cert) => {
            let replay = galois::replay_certificate(&cert);
            let irr_text = match &cert.irreducibility {
                galois::IrreducibilityWitness::Eisenstein { prime } => {
                    format!("Eisenstein at p = {}", prime)
                }
                galois::IrreducibilityWitness::DegreeExclusion { witnesses } => {
                    format!("degree exclusion from {} mod-p patterns", witnesses.len())
                }
            };
            let text_out = format!(
                "S5 certificate for [{}]\n  irreducibility: {}\n  5-cycle witness: p = {} {:?}\n  transposition witness: p = {} {:?}{}\n  replay: {}",
                cert.coefficients
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(", "),
                irr_text,
                cert.five_cycle.0,
                cert.five_cycle.1,
                cert.transposition.0,
                cert.transposition.1,
                if cert.transposition_needs_cube { " (cubed)" } else { "" },
                if replay { "ok" } else { "FAILED" }
            );
            let irr_json = match &cert.irreducibility {
                galois::IrreducibilityWitness::Eisenstein { prime } => {
                    json!({ "kind": "eisenstein", "prime": prime })
                }
                galois::IrreducibilityWitness::DegreeExclusion { witnesses } => json!({
                    "kind": "degree_exclusion",
                    "witnesses": witnesses
                        .iter()
                        .map(|(p, pat)| json!({ "prime": p, "pattern": pat }))
                        .collect::<Vec<_>>(),
                }),
            };
            ctx.emit(
                "s5",
                json!({
                    "coefficients": cert
                        .coefficients
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>(),
                    "irreducibility": irr_json,
                    "five_cycle": { "prime": cert.five_cycle.0, "pattern": cert.five_cycle.1 },
                    "transposition": {
                        "prime": cert.transposition.0,
                        "pattern": cert.transposition.1,
                        "cubed": cert.transposition_needs_cube,
                    },
                    "replay_ok": replay,
                }),
                text_out,
            );
            Ok(if replay {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Err(galois::GaloisError::Reducible(msg)) => {
            ctx.emit(
                "s5",
                json!({ "refusal": format!("reducible: {}", msg) }),
                format!("certified refusal: polynomial is reducible ({})", msg),
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(galois::GaloisError::WrongDegree) => {
            eprintln!("error: polynomial must have degree 5");
            Ok(ExitCode::from(1))
        }
        Err(galois::GaloisError::BudgetExhausted) => {
            eprintln!("error: prime budget exhausted before certification");
            Ok(ExitCode::from(2))
        }
    }
}

/// Split on top-level commas only (commas inside parentheses belong to
/// function arguments like root(x, n, k)).
fn split_basis(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn cmd_conjecture(id: u8, ctx: &Ctx) -> Result<ExitCode, EvalError> {
    if id != 1 && id != 2 {
        eprintln!("error: conjecture id must be 1 or 2");
        return Ok(ExitCode::from(1));
    }
    let basis = match &ctx.config.basis {
        None => evidence::default_basis(),
        Some(text) => {
            let mut basis = evidence::default_basis();
            for piece in split_basis(text) {
                match parse_or_usage(&piece) {
                    Ok(e) => basis.push(e),
                    Err(code) => return Ok(code),
                }
            }
            basis
        }
    };
    let report = evidence::conjecture_evidence(
        id,
        ctx.config.height_bound,
        ctx.config.precision_bits,
        &basis,
        ctx.config.seed,
        &ctx.budget,
        false,
    )?;
    let mut text_out = format!("conjecture {} evidence\n", id);
    for (i, b) in report.root_enclosures.iter().enumerate() {
        text_out.push_str(&format!(
            "  root {}: re = {}, im = {}, rad <= {}\n",
            i + 1,
            b.mid_re,
            b.mid_im,
            b.radius
        ));
    }
    for s in &report.searches {
        let outcome = match &s.outcome {
            evidence::SearchOutcome::NoRelation => "no relation".to_string(),
            evidence::SearchOutcome::RelationFound {
                coefficients,
                status,
                ..
            } => format!("relation {:?} [{}]", coefficients, status),
            evidence::SearchOutcome::Error { message } => format!("error: {}", message),
        };
        text_out.push_str(&format!(
            "  search over {} values: {}\n",
            s.inputs.len(),
            outcome
        ));
    }
    text_out.push_str(&format!("verdict: {}", report.verdict));
    ctx.emit(
        "conjecture",
        serde_json::to_value(&report).expect("serialize report"),
        text_out,
    );
    Ok(ExitCode::SUCCESS)
}
