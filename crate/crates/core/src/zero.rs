//! Three-valued zero recognition.
//!
//! `Nonzero` is certified by an enclosure excluding zero, `Zero` by a
//! replayable exact derivation, and everything else is an honest `Unknown`.
//! Both positive verdicts are unconditionally sound; completeness is not
//! claimed (and cannot be, short of resolving the conjectures this library
//! exists to explore).
//!
//! The exact side has three engines, tried cheapest first: the pi-linear
//! fragment of `exact.rs`, a value-preserving rewrite system, and a fold of
//! the expression into a formal rational function over its maximal exp/log
//! subterms ("atoms"). If the fold's numerator is the zero polynomial, the
//! value is zero wherever the expression is defined at all; definedness is
//! confirmed by a guarded evaluation before the verdict is issued.

use crate::eval::{eval_with_guard, BallGuard, EvalBudget, EvalError, GuardVerdict, ZeroGuard};
use crate::exact::{branch_shift, pi_linear};
use crate::expr::{builtin, render, BuiltinName, ElExpr, ExprRef};
use crate::fieldelem::RatFunc;
use crate::num::{pi_dyadic, ComplexBall, RealBall};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero as NumZero};
use std::cmp::Ordering;
use std::collections::HashMap;


/// Verdict of the zero recognizer.
#[derive(Debug, Clone)]
pub enum ZeroVerdict {
    /// The enclosure excludes zero.
    Nonzero { certificate: ComplexBall },
    /// An exact derivation reduces the expression to the literal 0.
    Zero { derivation: Vec<RewriteStep> },
    /// Neither verdict within budget.
    Unknown {
        max_precision_bits: u32,
        rewrite_passes: u32,
        diagnostic: Option<String>,
    },
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, ZeroVerdict::Zero { .. })
    }

    pub fn is_nonzero(&self) -> bool {
        matches!(self, ZeroVerdict::Nonzero { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, ZeroVerdict::Unknown { .. })
    }
}

/// One step of an exact derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: &'static str,
    pub before: String,
    pub after: String,
}

const MAX_REWRITE_PASSES: u32 = 16;

/// Apply the value-preserving simplification rules to a fixpoint.
pub fn exact_rewrites(e: &ExprRef) -> ExprRef {
    exact_rewrites_traced(e).0
}

/// As `exact_rewrites`, also returning the rule applications in order.
pub fn exact_rewrites_traced(e: &ExprRef) -> (ExprRef, Vec<RewriteStep>) {
    let mut cur = e.clone();
    let mut trace = Vec::new();
    for _ in 0..MAX_REWRITE_PASSES {
        let next = rewrite_pass(&cur, &mut trace);
        if next == cur {
            break;
        }
        cur = next;
    }
    (cur, trace)
}

/// One bottom-up pass.
fn rewrite_pass(e: &ExprRef, trace: &mut Vec<RewriteStep>) -> ExprRef {
    let node = match &**e {
        ElExpr::Rational(_) => e.clone(),
        ElExpr::Add(a, b) => ElExpr::add(rewrite_pass(a, trace), rewrite_pass(b, trace)),
        ElExpr::Mul(a, b) => ElExpr::mul(rewrite_pass(a, trace), rewrite_pass(b, trace)),
        ElExpr::Neg(a) => ElExpr::neg(rewrite_pass(a, trace)),
        ElExpr::Inv(a) => ElExpr::inv(rewrite_pass(a, trace)),
        ElExpr::Exp(a) => ElExpr::exp(rewrite_pass(a, trace)),
        ElExpr::Log(a) => ElExpr::log(rewrite_pass(a, trace)),
    };
    match rewrite_root(&node) {
        Some((rule, out)) => {
            trace.push(RewriteStep {
                rule,
                before: render(&node),
                after: render(&out),
            });
            out
        }
        None => node,
    }
}

/// Try the rules at a single (already child-rewritten) node.
fn rewrite_root(e: &ExprRef) -> Option<(&'static str, ExprRef)> {
    match &**e {
        ElExpr::Add(a, b) => {
            let (ra, rb) = (a.as_rational(), b.as_rational());
            if let (Some(x), Some(y)) = (ra, rb) {
                return Some(("rational-fold", ElExpr::rational(x + y)));
            }
            if ra.map(|x| x.is_zero()).unwrap_or(false) {
                return Some(("add-zero", b.clone()));
            }
            if rb.map(|y| y.is_zero()).unwrap_or(false) {
                return Some(("add-zero", a.clone()));
            }
            None
        }
        ElExpr::Mul(a, b) => {
            let (ra, rb) = (a.as_rational(), b.as_rational());
            if let (Some(x), Some(y)) = (ra, rb) {
                return Some(("rational-fold", ElExpr::rational(x * y)));
            }
            if ra.map(|x| x.is_zero()).unwrap_or(false)
                || rb.map(|y| y.is_zero()).unwrap_or(false)
            {
                return Some(("mul-zero", ElExpr::from_int(0)));
            }
            if ra.map(|x| x.is_one()).unwrap_or(false) {
                return Some(("mul-one", b.clone()));
            }
            if rb.map(|y| y.is_one()).unwrap_or(false) {
                return Some(("mul-one", a.clone()));
            }
            let minus_one = -BigRational::one();
            if ra.map(|x| *x == minus_one).unwrap_or(false) {
                return Some(("mul-neg-one", ElExpr::neg(b.clone())));
            }
            if rb.map(|y| *y == minus_one).unwrap_or(false) {
                return Some(("mul-neg-one", ElExpr::neg(a.clone())));
            }
            // signs bubble out so the product rules below can see through
            if let ElExpr::Neg(x) = &**a {
                return Some(("neg-through-mul", ElExpr::neg(ElExpr::mul(x.clone(), b.clone()))));
            }
            if let ElExpr::Neg(y) = &**b {
                return Some(("neg-through-mul", ElExpr::neg(ElExpr::mul(a.clone(), y.clone()))));
            }
            // exp(a) * exp(b) -> exp(a + b)
            if let (ElExpr::Exp(x), ElExpr::Exp(y)) = (&**a, &**b) {
                return Some((
                    "exp-product",
                    ElExpr::exp(ElExpr::add(x.clone(), y.clone())),
                ));
            }
            None
        }
        ElExpr::Neg(a) => {
            if let Some(x) = a.as_rational() {
                return Some(("rational-fold", ElExpr::rational(-x.clone())));
            }
            if let ElExpr::Neg(x) = &**a {
                return Some(("neg-neg", x.clone()));
            }
            None
        }
        ElExpr::Inv(a) => {
            if let Some(r) = a.as_rational() {
                if r.is_zero() {
                    return None; // undefined; leave for the guards to report
                }
                return Some(("rational-fold", ElExpr::rational(r.recip())));
            }
            // 1/exp(x) = exp(-x), unconditionally (exp never vanishes)
            if let ElExpr::Exp(x) = &**a {
                return Some(("inv-exp", ElExpr::exp(ElExpr::neg(x.clone()))));
            }
            None
        }
        ElExpr::Exp(a) => {
            if let Some(r) = a.as_rational() {
                if r.is_zero() {
                    return Some(("exp-zero", ElExpr::from_int(1)));
                }
            }
            // exp(log(x)) -> x when x is certified nonzero
            if let ElExpr::Log(x) = &**a {
                if certified_nonzero(x) {
                    return Some(("exp-log", x.clone()));
                }
            }
            None
        }
        ElExpr::Log(a) => {
            if let Some(r) = a.as_rational() {
                if r.is_one() {
                    return Some(("log-one", ElExpr::from_int(0)));
                }
                if r.is_positive() {
                    if let Some(out) = log_of_rational_factored(r) {
                        if out != *e {
                            return Some(("log-rational-factor", out));
                        }
                    }
                }
            }
            // log(exp(x)) -> x - 2 pi i k
            if let ElExpr::Exp(x) = &**a {
                if let Some(out) = log_exp_branch(x) {
                    return Some(("log-exp", out));
                }
            }
            None
        }
        _ => None,
    }
}

/// Nonzero certification for rewrite side conditions: exact rational,
/// pi-linear, or a short ball refinement.
fn certified_nonzero(x: &ExprRef) -> bool {
    if let Some(r) = x.as_rational() {
        return !r.is_zero();
    }
    if let Some(p) = pi_linear(x) {
        return !p.is_zero();
    }
    let budget = EvalBudget::with_max_precision(512);
    let mut prec = 64;
    while prec <= budget.max_precision_bits {
        if let Ok(ball) = eval_with_guard(x, prec, &budget, &BallGuard) {
            if !ball.contains_zero() {
                return true;
            }
        } else {
            return false;
        }
        prec *= 2;
    }
    false
}

/// `log(exp(x))`: the unique shift `x - 2 pi i k` with imaginary part in
/// `(-pi, pi]`, when `k` is exactly decidable (pi-linear imaginary part) or
/// `k = 0` is certified by enclosures.
fn log_exp_branch(x: &ExprRef) -> Option<ExprRef> {
    if let Some(p) = pi_linear(x) {
        let (c, d) = p.im_parts();
        let k = branch_shift(&c, &d);
        if k.is_zero() {
            return Some(x.clone());
        }
        // x - k * 2 pi i
        let two_k = BigRational::from_integer(&k * BigInt::from(2));
        let offset = ElExpr::mul(
            ElExpr::rational(two_k),
            ElExpr::mul(builtin(BuiltinName::Pi), builtin(BuiltinName::I)),
        );
        return Some(ElExpr::sub(x.clone(), offset));
    }
    // Ball certification of k = 0: |Im x| strictly below pi.
    let budget = EvalBudget::with_max_precision(512);
    let mut prec = 64;
    while prec <= budget.max_precision_bits {
        let Ok(ball) = eval_with_guard(x, prec, &budget, &BallGuard) else {
            return None;
        };
        let (pi_mid, pi_err) = pi_dyadic(prec);
        let pi_low = pi_mid.sub_exact(&pi_err);
        let im_hi = ball.im.upper().abs();
        let im_lo = ball.im.lower().abs();
        let bound = if im_hi.cmp_exact(&im_lo) == Ordering::Greater {
            im_hi
        } else {
            im_lo
        };
        if bound.cmp_exact(&pi_low) == Ordering::Less {
            return Some(x.clone());
        }
        prec *= 2;
    }
    None
}

/// Rewrite `log(q)` for positive rational `q` into a combination of logs of
/// primes. Returns `None` when factoring stalls.
fn log_of_rational_factored(q: &BigRational) -> Option<ExprRef> {
    let mut factors: Vec<(BigInt, i64)> = Vec::new();
    collect_factors(q.numer(), 1, &mut factors)?;
    collect_factors(q.denom(), -1, &mut factors)?;
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    // merge equal primes (numerator/denominator are coprime, but be safe)
    let mut merged: Vec<(BigInt, i64)> = Vec::new();
    for (p, e) in factors {
        match merged.last_mut() {
            Some((lp, le)) if *lp == p => *le += e,
            _ => merged.push((p, e)),
        }
    }
    merged.retain(|(_, e)| *e != 0);
    if merged.is_empty() {
        return Some(ElExpr::from_int(0)); // q = 1
    }
    let term = |p: &BigInt, e: i64| -> ExprRef {
        let lg = ElExpr::log(ElExpr::rational(BigRational::from_integer(p.clone())));
        match e {
            1 => lg,
            -1 => ElExpr::neg(lg),
            _ => ElExpr::mul(
                ElExpr::rational(BigRational::from_integer(BigInt::from(e))),
                lg,
            ),
        }
    };
    let mut it = merged.iter();
    let (p0, e0) = it.next().unwrap();
    let mut acc = term(p0, *e0);
    for (p, e) in it {
        acc = ElExpr::add(acc, term(p, *e));
    }
    Some(acc)
}

/// Trial-division factorization of a positive integer; bails on a large
/// composite cofactor.
fn collect_factors(n: &BigInt, sign: i64, out: &mut Vec<(BigInt, i64)>) -> Option<()> {
    const LIMIT: u64 = 1 << 16;
    let mut n = n.clone();
    assert!(n.is_positive());
    let mut d: u64 = 2;
    while d < LIMIT {
        let dd = BigInt::from(d);
        let mut e = 0i64;
        loop {
            use num_integer::Integer;
            let (q, r) = n.div_rem(&dd);
            if r.is_zero() {
                n = q;
                e += 1;
            } else {
                break;
            }
        }
        if e != 0 {
            out.push((dd, sign * e));
        }
        if n.is_one() {
            return Some(());
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    if n.is_one() {
        return Some(());
    }
    // The cofactor has no prime factor below 2^16; it is prime iff below 2^32.
    if n < BigInt::from(LIMIT) * BigInt::from(LIMIT) {
        out.push((n, sign));
        return Some(());
    }
    None
}

/// Fold an expression into a formal rational function, treating maximal
/// exp/log subterms as opaque variables. `None` when a formal denominator
/// vanishes identically (the expression is then undefined).
pub fn field_fold(e: &ExprRef) -> Option<RatFunc> {
    let mut atoms: HashMap<ExprRef, u32> = HashMap::new();
    fold_rec(e, &mut atoms)
}

fn fold_rec(e: &ExprRef, atoms: &mut HashMap<ExprRef, u32>) -> Option<RatFunc> {
    match &**e {
        ElExpr::Rational(r) => Some(RatFunc::constant(r.clone())),
        ElExpr::Add(a, b) => Some(fold_rec(a, atoms)?.add(&fold_rec(b, atoms)?)),
        ElExpr::Mul(a, b) => Some(fold_rec(a, atoms)?.mul(&fold_rec(b, atoms)?)),
        ElExpr::Neg(a) => Some(fold_rec(a, atoms)?.neg()),
        ElExpr::Inv(a) => fold_rec(a, atoms)?.inv(),
        ElExpr::Exp(_) | ElExpr::Log(_) => {
            let next = atoms.len() as u32;
            let idx = *atoms.entry(e.clone()).or_insert(next);
            Some(RatFunc::var(idx))
        }
    }
}

/// Three-valued zero recognition.
pub fn is_zero(expr: &ExprRef, budget: &EvalBudget) -> ZeroVerdict {
    // Exact engines first: pi-linear, rewrites, field fold.
    if let Some(p) = pi_linear(expr) {
        if p.is_zero() {
            return confirm_zero(
                expr,
                vec![RewriteStep {
                    rule: "pi-linear",
                    before: render(expr),
                    after: "0".to_string(),
                }],
                budget,
            );
        }
        // Exactly nonzero; the numeric sweep below will certify it.
    }

    let (rewritten, mut trace) = exact_rewrites_traced(expr);
    if let Some(r) = rewritten.as_rational() {
        if r.is_zero() {
            return confirm_zero(expr, trace, budget);
        }
        // A nonzero literal: certify with an exact enclosure.
        if !r.is_zero() {
            let cert = ComplexBall::from_ratio(r.numer(), r.denom(), 96);
            if !cert.contains_zero() {
                return ZeroVerdict::Nonzero { certificate: cert };
            }
        }
    }
    if let Some(f) = field_fold(&rewritten) {
        if f.is_zero() {
            trace.push(RewriteStep {
                rule: "field-fold",
                before: render(&rewritten),
                after: "0".to_string(),
            });
            return confirm_zero(expr, trace, budget);
        }
    }

    // Numeric sweep: refine until the enclosure excludes zero.
    let recognizer = Recognizer;
    let mut prec = 64u32;
    let mut diagnostic = None;
    while prec <= budget.max_precision_bits {
        match eval_with_guard(expr, prec, budget, &recognizer) {
            Ok(ball) => {
                if !ball.contains_zero() {
                    return ZeroVerdict::Nonzero { certificate: ball };
                }
            }
            Err(e) => {
                diagnostic = Some(e.to_string());
                break;
            }
        }
        if budget.expired() {
            break;
        }
        prec = prec.saturating_mul(2);
    }
    ZeroVerdict::Unknown {
        max_precision_bits: budget.max_precision_bits,
        rewrite_passes: MAX_REWRITE_PASSES,
        diagnostic,
    }
}

/// A zero claim additionally requires the expression to be defined: every
/// division and logarithm guard must pass.
fn confirm_zero(expr: &ExprRef, trace: Vec<RewriteStep>, budget: &EvalBudget) -> ZeroVerdict {
    match eval_with_guard(expr, 64, budget, &Recognizer) {
        Ok(_) => ZeroVerdict::Zero { derivation: trace },
        Err(e) => ZeroVerdict::Unknown {
            max_precision_bits: budget.max_precision_bits,
            rewrite_passes: MAX_REWRITE_PASSES,
            diagnostic: Some(format!("exactly zero if defined, but: {}", e)),
        },
    }
}

/// Replay a Zero derivation: rerun the deterministic engine and require the
/// same rule sequence and a zero result.
pub fn replay_derivation(expr: &ExprRef, derivation: &[RewriteStep]) -> bool {
    if derivation.iter().any(|s| s.rule == "pi-linear") {
        return pi_linear(expr).map(|p| p.is_zero()).unwrap_or(false);
    }
    let (rewritten, trace) = exact_rewrites_traced(expr);
    let folded_zero = field_fold(&rewritten).map(|f| f.is_zero()).unwrap_or(false);
    let literal_zero = rewritten
        .as_rational()
        .map(|r| r.is_zero())
        .unwrap_or(false);
    let engine_steps: Vec<&RewriteStep> =
        derivation.iter().filter(|s| s.rule != "field-fold").collect();
    let same = engine_steps.len() == trace.len()
        && engine_steps.iter().zip(trace.iter()).all(|(a, b)| *a == b);
    same && (literal_zero || folded_zero)
}

/// The full zero oracle used by evaluation guards.
pub struct Recognizer;

impl ZeroGuard for Recognizer {
    fn classify(&self, expr: &ExprRef, budget: &EvalBudget) -> GuardVerdict {
        // Guard escalation runs under the zero-test allowance: a precision
        // ceiling of 64 * 2^zero_test_budget, capped by the main budget.
        let ceiling = 64u32
            .saturating_mul(1 << budget.zero_test_budget.min(16))
            .min(budget.max_precision_bits);
        let sub = EvalBudget {
            max_precision_bits: ceiling.max(64),
            zero_test_budget: budget.zero_test_budget,
            deadline: budget.deadline,
        };
        match is_zero(expr, &sub) {
            ZeroVerdict::Zero { .. } => GuardVerdict::Zero,
            ZeroVerdict::Nonzero { certificate } => GuardVerdict::Nonzero(certificate),
            ZeroVerdict::Unknown { .. } => GuardVerdict::Unknown,
        }
    }
}

/// Evaluate with the full recognizer as the guard oracle.
pub fn eval(expr: &ExprRef, precision_bits: u32, budget: &EvalBudget) -> Result<ComplexBall, EvalError> {
    eval_with_guard(expr, precision_bits, budget, &Recognizer)
}

/// Refine to a target radius with the full recognizer as the guard oracle.
pub fn refine(
    expr: &ExprRef,
    target: &crate::num::Dyadic,
    budget: &EvalBudget,
) -> Result<ComplexBall, EvalError> {
    crate::eval::refine_with_guard(expr, target, budget, &Recognizer)
}

/// Convenience: certified-distinct test via refinement of the difference.
pub fn certified_equal(a: &ExprRef, b: &ExprRef, budget: &EvalBudget) -> ZeroVerdict {
    is_zero(&ElExpr::sub(a.clone(), b.clone()), budget)
}

/// Real-interval enclosure of pi at the given precision.
pub fn pi_ball(prec: u32) -> RealBall {
    let (mid, err) = pi_dyadic(prec);
    RealBall::new(mid, err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn zb() -> EvalBudget {
        EvalBudget::default()
    }

    fn check_zero(text: &str) {
        let e = parse(text).unwrap();
        match is_zero(&e, &zb()) {
            ZeroVerdict::Zero { derivation } => {
                assert!(replay_derivation(&e, &derivation), "replay failed for {}", text);
            }
            other => panic!("{} expected Zero, got {:?}", text, other),
        }
    }

    fn check_nonzero(text: &str) {
        let e = parse(text).unwrap();
        match is_zero(&e, &zb()) {
            ZeroVerdict::Nonzero { certificate } => {
                assert!(!certificate.contains_zero());
            }
            other => panic!("{} expected Nonzero, got {:?}", text, other),
        }
    }

    #[test]
    fn euler_identity_is_zero() {
        check_zero("exp(log(-(1))) + 1");
    }

    #[test]
    fn log_exp_two_pi_i_is_zero() {
        check_zero("log(exp(2 * pi * i))");
    }

    #[test]
    fn i_squared_plus_one_is_zero() {
        check_zero("i * i + 1");
    }

    #[test]
    fn e_plus_pi_is_nonzero() {
        check_nonzero("exp(exp(0)) + pi");
    }

    #[test]
    fn field_cancellation() {
        check_zero("exp(1) * 2 - exp(1) - exp(1)");
        check_zero("pi - 2 * (pi * (1/2))");
        check_zero("exp(2) - exp(1) * exp(1)");
    }

    #[test]
    fn inv_exp_normalizes() {
        check_zero("inv(exp(1)) - exp(-1)");
        check_zero("(1)/exp(exp(0)) - exp(0 - exp(0))");
        check_zero("exp(1) * inv(exp(1)) - 1");
    }

    #[test]
    fn unit_laws_feed_product_rules() {
        // (0 + e)(0 - e) = -e^2
        check_zero("(0 + exp(1)) * (0 - exp(1)) + exp(2)");
        check_zero("1 * exp(1) - exp(1)");
        check_zero("-(-(exp(1))) - exp(1)");
        check_zero("(0 * pi) + (exp(3) * 0)");
    }

    #[test]
    fn log_eight_three_log_two() {
        check_zero("log(8) - 3 * log(2)");
        check_zero("log(6) - log(2) - log(3)");
        check_zero("log(1/2) + log(2)");
    }

    #[test]
    fn exp_log_rewrite() {
        let e = parse("exp(log(2))").unwrap();
        let r = exact_rewrites(&e);
        assert_eq!(r, ElExpr::from_int(2));
        let e = parse("log(exp(4))").unwrap();
        let r = exact_rewrites(&e);
        assert_eq!(r, ElExpr::from_int(4));
    }

    #[test]
    fn log_exp_ball_certified_shift() {
        // log(2) has no pi-linear form; k = 0 is certified by enclosures.
        check_zero("log(exp(log(2))) - log(2)");
        // an argument past the strip must NOT collapse to the naive k = 0:
        // log(exp(4 pi i)) = 0, not 4 pi i.
        check_zero("log(exp(4 * pi * i))");
        check_nonzero("log(exp(4 * pi * i)) - 4 * pi * i");
    }

    #[test]
    fn exp_zero_not_rewritten_blindly() {
        // exp(log(0)) must not fire exp-log (0 is not nonzero)
        let e = parse("exp(log(0))").unwrap();
        let r = exact_rewrites(&e);
        assert_eq!(render(&r), "exp(log(0))");
        // and is_zero must not claim anything definite positive
        match is_zero(&e, &zb()) {
            ZeroVerdict::Unknown { .. } => {}
            other => panic!("expected Unknown for undefined expr, got {:?}", other),
        }
    }

    #[test]
    fn division_by_undefined_is_unknown() {
        // 0 * inv(0) folds to nothing; the guard reports undefinedness.
        let e = parse("0 * inv(0)").unwrap();
        match is_zero(&e, &zb()) {
            ZeroVerdict::Unknown { diagnostic, .. } => {
                assert!(diagnostic.is_some());
            }
            other => panic!("expected Unknown, got {:?}", other),
        }
    }

    #[test]
    fn zero_literal_and_guards() {
        check_zero("0");
        check_zero("1 - 1");
        check_zero("1/2 + 1/2 - 1");
        check_nonzero("1/3 - 1/4");
    }

    #[test]
    fn hard_case_stays_unknown() {
        // e + pi - 353/60 is (presumably) nonzero but tiny-ish; with a small
        // budget the verdict must degrade to Unknown, never a false Zero.
        let e = parse("exp(exp(0)) + pi - 1000000007/170797071").unwrap();
        let tight = EvalBudget::with_max_precision(64);
        match is_zero(&e, &tight) {
            ZeroVerdict::Zero { .. } => panic!("unsound Zero"),
            _ => {}
        }
    }

    #[test]
    fn recognizer_guards_log_zero() {
        use crate::eval::EvalError;
        let e = parse("log(0)").unwrap();
        match eval(&e, 64, &zb()) {
            Err(EvalError::LogOfZero(_)) => {}
            other => panic!("expected LogOfZero, got {:?}", other),
        }
        let e = parse("inv(exp(log(-(1))) + 1)").unwrap();
        match eval(&e, 64, &zb()) {
            Err(EvalError::DivisionByZero(_)) => {}
            other => panic!("expected DivisionByZero, got {:?}", other),
        }
    }

    #[test]
    fn rewrites_preserve_value_spot_checks() {
        for text in [
            "exp(exp(0))",
            "log(8)",
            "exp(log(2)) + log(exp(4))",
            "exp(1) * exp(2)",
            "log(exp(2 * pi * i)) + 1",
        ] {
            let e = parse(text).unwrap();
            let r = exact_rewrites(&e);
            let b1 = eval(&e, 128, &zb()).unwrap();
            let b2 = eval(&r, 128, &zb()).unwrap();
            assert!(b1.overlaps(&b2), "{} vs {}", text, render(&r));
        }
    }
}
