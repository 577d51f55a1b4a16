//! Guarded adaptive-precision evaluation of EL expressions.
//!
//! Division and log are only defined away from zero, and log additionally
//! needs its argument off the branch cut before a continuous enclosure
//! exists. The evaluator certifies these side conditions by refinement,
//! falling back to a pluggable zero oracle (the recognizer) when balls keep
//! straddling, and to exact pi-linear analysis for cut decisions.

use crate::exact::{pi_linear, PiLinear};
use crate::expr::{render, ElExpr, ExprRef};
use crate::num::{ComplexBall, Dyadic, KernelError, LogBallError, RealBall};
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct EvalBudget {
    /// Refinement ceiling for any single enclosure.
    pub max_precision_bits: u32,
    /// Step allowance handed to the zero oracle on guard escalation.
    pub zero_test_budget: u32,
    /// Optional wall-clock safety net.
    pub deadline: Option<Instant>,
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget {
            max_precision_bits: 1 << 13,
            zero_test_budget: 6,
            deadline: None,
        }
    }
}

impl EvalBudget {
    pub fn with_max_precision(bits: u32) -> Self {
        EvalBudget {
            max_precision_bits: bits.max(32),
            ..Default::default()
        }
    }

    pub fn expired(&self) -> bool {
        self.deadline.map(|d| Instant::now() > d).unwrap_or(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero in {0}")]
    DivisionByZero(String),
    #[error("logarithm of zero in {0}")]
    LogOfZero(String),
    #[error("cannot decide whether {0} is zero within budget")]
    GuardUndecided(String),
    #[error("cannot decide the branch of log at {0} within budget")]
    BranchUndecided(String),
    #[error("budget exhausted")]
    BudgetExhausted,
    #[error("intermediate magnitude too large to evaluate")]
    MagnitudeOverflow,
}

/// Verdict of the zero oracle consulted by guards.
#[derive(Debug, Clone)]
pub enum GuardVerdict {
    Zero,
    Nonzero(ComplexBall),
    Unknown,
}

/// Re-entrant zero oracle; evaluation calls this on proper subterms only.
pub trait ZeroGuard {
    fn classify(&self, expr: &ExprRef, budget: &EvalBudget) -> GuardVerdict;
}

/// Refinement-only guard: certifies nonzero by balls, never zero.
pub struct BallGuard;

impl ZeroGuard for BallGuard {
    fn classify(&self, expr: &ExprRef, budget: &EvalBudget) -> GuardVerdict {
        let mut prec = 64;
        while prec <= budget.max_precision_bits {
            if let Ok(ball) = eval_with_guard(expr, prec, budget, self) {
                if !ball.contains_zero() {
                    return GuardVerdict::Nonzero(ball);
                }
            }
            prec *= 2;
        }
        GuardVerdict::Unknown
    }
}

/// Evaluate to a rigorous enclosure at roughly `prec` bits.
pub fn eval_with_guard(
    expr: &ExprRef,
    prec: u32,
    budget: &EvalBudget,
    guard: &dyn ZeroGuard,
) -> Result<ComplexBall, EvalError> {
    assert!(prec >= 32, "precision below floor");
    if budget.expired() {
        return Err(EvalError::BudgetExhausted);
    }
    let w = prec + 32;
    match &**expr {
        ElExpr::Rational(r) => Ok(ComplexBall::from_ratio(r.numer(), r.denom(), w)),
        ElExpr::Add(a, b) => {
            let x = eval_with_guard(a, prec, budget, guard)?;
            let y = eval_with_guard(b, prec, budget, guard)?;
            Ok(x.add(&y, w))
        }
        ElExpr::Mul(a, b) => {
            let x = eval_with_guard(a, prec, budget, guard)?;
            let y = eval_with_guard(b, prec, budget, guard)?;
            Ok(x.mul(&y, w))
        }
        ElExpr::Neg(a) => Ok(eval_with_guard(a, prec, budget, guard)?.neg()),
        ElExpr::Inv(a) => {
            let mut ball = ensure_nonzero(a, prec, budget, guard, || {
                EvalError::DivisionByZero(render(a))
            })?;
            // Excluding zero is not quite enough: the interval square in the
            // denominator can still touch zero when the rectangle is wide.
            let mut p = prec;
            loop {
                if let Some(r) = ball.recip(w) {
                    return Ok(r);
                }
                if p >= budget.max_precision_bits || budget.expired() {
                    return Err(EvalError::GuardUndecided(render(a)));
                }
                p = (p * 2).min(budget.max_precision_bits);
                ball = eval_with_guard(a, p, budget, guard)?;
            }
        }
        ElExpr::Exp(a) => {
            let ball = eval_with_guard(a, prec, budget, guard)?;
            ball.exp(w).map_err(|KernelError::ExpOverflow| EvalError::MagnitudeOverflow)
        }
        ElExpr::Log(a) => {
            let ball = ensure_nonzero(a, prec, budget, guard, || {
                EvalError::LogOfZero(render(a))
            })?;
            log_with_branch(a, ball, prec, budget, guard)
        }
    }
}

/// Guard protocol: refine until the child ball excludes zero, then escalate
/// to the zero oracle; a certified zero is a hard error.
fn ensure_nonzero(
    child: &ExprRef,
    prec: u32,
    budget: &EvalBudget,
    guard: &dyn ZeroGuard,
    on_zero: impl Fn() -> EvalError,
) -> Result<ComplexBall, EvalError> {
    let mut p = prec;
    let mut ball = eval_with_guard(child, p, budget, guard)?;
    while ball.contains_zero() {
        if p >= budget.max_precision_bits || budget.expired() {
            return match guard.classify(child, budget) {
                GuardVerdict::Zero => Err(on_zero()),
                GuardVerdict::Nonzero(cert) => Ok(cert),
                GuardVerdict::Unknown => Err(EvalError::GuardUndecided(render(child))),
            };
        }
        p = (p * 2).min(budget.max_precision_bits);
        ball = eval_with_guard(child, p, budget, guard)?;
    }
    Ok(ball)
}

/// Take the log of a nonzero child ball, resolving branch-cut contact by
/// refinement and, failing that, by exact analysis of the argument.
fn log_with_branch(
    child: &ExprRef,
    first: ComplexBall,
    prec: u32,
    budget: &EvalBudget,
    guard: &dyn ZeroGuard,
) -> Result<ComplexBall, EvalError> {
    let w = prec + 32;
    let mut ball = first;
    let mut p = prec;
    loop {
        match ball.log(w) {
            Ok(out) => return Ok(out),
            Err(LogBallError::ContainsZero) => {
                return Err(EvalError::GuardUndecided(render(child)))
            }
            Err(LogBallError::TooWide) | Err(LogBallError::StraddlesCut) => {
                if p < budget.max_precision_bits && !budget.expired() {
                    p = (p * 2).min(budget.max_precision_bits);
                    ball = eval_with_guard(child, p, budget, guard)?;
                    continue;
                }
                // Refinement alone could not clear the cut; use exactness.
                return log_via_exact_form(child, ball, prec, budget, guard);
            }
        }
    }
}

/// Branch resolution from the pi-linear form of the argument.
fn log_via_exact_form(
    child: &ExprRef,
    ball: ComplexBall,
    prec: u32,
    budget: &EvalBudget,
    guard: &dyn ZeroGuard,
) -> Result<ComplexBall, EvalError> {
    let w = prec + 32;
    let Some(form) = pi_linear(child) else {
        return Err(EvalError::BranchUndecided(render(child)));
    };
    if form.im_is_exactly_zero() {
        // The value is exactly real; its sign decides the side of the cut.
        match form.re_sign() {
            0 => Err(EvalError::LogOfZero(render(child))),
            sign => {
                let real = certify_real_sign(child, ball, sign, budget, guard)?;
                ComplexBall::new(real, RealBall::zero())
                    .log(w)
                    .map_err(|_| EvalError::BranchUndecided(render(child)))
            }
        }
    } else {
        // Im is exactly nonzero: refine until the rectangle leaves the axis.
        refine_off_axis(child, form, prec, budget, guard)
    }
}

/// Refine the child until its real interval has the exactly-known sign,
/// then return that interval (the value is exactly real).
fn certify_real_sign(
    child: &ExprRef,
    ball: ComplexBall,
    sign: i32,
    budget: &EvalBudget,
    guard: &dyn ZeroGuard,
) -> Result<RealBall, EvalError> {
    let mut b = ball;
    let mut p = 64;
    loop {
        if b.re.sign_certain() == Some(sign) {
            return Ok(b.re);
        }
        if p >= budget.max_precision_bits || budget.expired() {
            return Err(EvalError::BranchUndecided(render(child)));
        }
        p = (p * 2).min(budget.max_precision_bits);
        b = eval_with_guard(child, p, budget, guard)?;
    }
}

fn refine_off_axis(
    child: &ExprRef,
    form: PiLinear,
    prec: u32,
    budget: &EvalBudget,
    guard: &dyn ZeroGuard,
) -> Result<ComplexBall, EvalError> {
    let w = prec + 32;
    let sign = form.im_sign();
    debug_assert!(sign != 0);
    let mut p = prec;
    loop {
        if p >= budget.max_precision_bits || budget.expired() {
            return Err(EvalError::BranchUndecided(render(child)));
        }
        p = (p * 2).min(budget.max_precision_bits);
        let ball = eval_with_guard(child, p, budget, guard)?;
        if ball.im.sign_certain() == Some(sign) {
            match ball.log(w) {
                Ok(out) => return Ok(out),
                Err(_) => continue,
            }
        }
    }
}

/// Refine until the enclosure radius is at most `target`.
///
/// Starts at `max(64, target-implied bits)` and doubles, per the adaptive
/// schedule, up to the budget ceiling.
pub fn refine_with_guard(
    expr: &ExprRef,
    target: &Dyadic,
    budget: &EvalBudget,
    guard: &dyn ZeroGuard,
) -> Result<ComplexBall, EvalError> {
    assert!(target.is_positive(), "target radius must be positive");
    let implied = -(target.top().unwrap_or(0)) + 16;
    let mut p: u32 = implied.clamp(64, i64::from(u32::MAX / 2)) as u32;
    loop {
        let ball = eval_with_guard(expr, p, budget, guard)?;
        if ball.radius_upper().cmp_exact(target) != std::cmp::Ordering::Greater {
            return Ok(ball);
        }
        if p >= budget.max_precision_bits {
            return Err(EvalError::BudgetExhausted);
        }
        p = (p * 2).min(budget.max_precision_bits);
    }
}

/// A dyadic lower bound for `10^-digits`, handy as a refinement target.
pub fn pow10_target(digits: u32) -> Dyadic {
    // 10^-d >= 2^-(4 d): safe and cheap.
    Dyadic::pow2(-(4 * digits as i64))
}
