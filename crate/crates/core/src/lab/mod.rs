//! Desk-scale experiments: staged level-set enumeration, separation bounds,
//! partial-sum membership checks, Galois certificates, certified roots for
//! the two question equations, and relation-search evidence reports.

pub mod evidence;
pub mod galois;
pub mod roots;

use crate::eval::{EvalBudget, EvalError};
use crate::expr::{render, ElExpr, ExprRef};
use crate::num::{ComplexBall, Dyadic};
use crate::zero::{self, ZeroVerdict};
use num_rational::BigRational;
use std::cmp::Ordering;

/// Size limits for the enumeration (the construction explodes fast).
#[derive(Debug, Clone)]
pub struct LevelCaps {
    pub max_members: usize,
    /// Largest bit-size of a rational literal accepted in a folded member.
    pub literal_bits: u64,
}

impl Default for LevelCaps {
    fn default() -> Self {
        LevelCaps {
            max_members: 512,
            literal_bits: 64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LevelMember {
    pub expr: ExprRef,
    pub ball: ComplexBall,
    /// Indices of members this one could not be separated from (kept
    /// distinct, flagged; cardinalities are upper bounds when nonempty).
    pub ambiguous_with: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct LevelSet {
    pub n: u32,
    pub members: Vec<LevelMember>,
    pub truncated: bool,
}

impl LevelSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn has_ambiguity(&self) -> bool {
        self.members.iter().any(|m| !m.ambiguous_with.is_empty())
    }
}

const DISPLAY_PREC: u32 = 128;

/// Enumerate the staged sets: stage 0 is `{0}`, and each next stage applies
/// one field operation to a pair, or exp/log to an element, of the previous
/// stage (division by zero and log of zero excluded). Deduplication is by
/// the zero-recognizer on differences; undecided pairs are both kept and
/// flagged.
pub fn enumerate_levels(
    n_max: u32,
    caps: &LevelCaps,
    budget: &EvalBudget,
) -> Result<Vec<LevelSet>, EvalError> {
    assert!(n_max <= 4, "enumeration beyond stage 4 is not desk-scale");
    let zero_expr = ElExpr::from_int(0);
    let zero_ball = zero::eval(&zero_expr, DISPLAY_PREC, budget)?;
    let mut levels = vec![LevelSet {
        n: 0,
        members: vec![LevelMember {
            expr: zero_expr,
            ball: zero_ball,
            ambiguous_with: Vec::new(),
        }],
        truncated: false,
    }];

    for n in 1..=n_max {
        let prev = &levels[(n - 1) as usize];
        let mut next = LevelSet {
            n,
            members: Vec::new(),
            truncated: false,
        };
        let candidates = level_candidates(prev, caps, budget);
        for cand in candidates {
            if next.members.len() >= caps.max_members {
                next.truncated = true;
                break;
            }
            insert_candidate(&mut next, cand, budget)?;
        }
        levels.push(next);
    }
    Ok(levels)
}

/// All single-operation applications over a level, in deterministic order.
fn level_candidates(prev: &LevelSet, caps: &LevelCaps, budget: &EvalBudget) -> Vec<ExprRef> {
    let mut out = Vec::new();
    let members = &prev.members;
    for a in members {
        for b in members {
            out.push(ElExpr::add(a.expr.clone(), b.expr.clone()));
            out.push(ElExpr::sub(a.expr.clone(), b.expr.clone()));
            out.push(ElExpr::mul(a.expr.clone(), b.expr.clone()));
            // division requires a certified-nonzero divisor
            if let ZeroVerdict::Nonzero { .. } = zero::is_zero(&b.expr, budget) {
                out.push(ElExpr::div(a.expr.clone(), b.expr.clone()));
            }
        }
    }
    for a in members {
        out.push(ElExpr::exp(a.expr.clone()));
        if let ZeroVerdict::Nonzero { .. } = zero::is_zero(&a.expr, budget) {
            out.push(ElExpr::log(a.expr.clone()));
        }
    }
    // literal-size cap applies to the folded value when it is rational
    out.retain(|e| {
        let folded = zero::exact_rewrites(e);
        match folded.as_rational() {
            Some(r) => {
                r.numer().magnitude().bits() <= caps.literal_bits
                    && r.denom().magnitude().bits() <= caps.literal_bits
            }
            None => true,
        }
    });
    out
}

fn insert_candidate(
    level: &mut LevelSet,
    cand: ExprRef,
    budget: &EvalBudget,
) -> Result<(), EvalError> {
    let ball = match zero::eval(&cand, DISPLAY_PREC, budget) {
        Ok(b) => b,
        // candidates that fail guards are simply not values of this level
        Err(_) => return Ok(()),
    };
    let mut ambiguous = Vec::new();
    for (idx, m) in level.members.iter().enumerate() {
        // disjoint enclosures settle distinctness without the recognizer
        if !ball.overlaps(&m.ball) {
            continue;
        }
        match zero::certified_equal(&cand, &m.expr, budget) {
            ZeroVerdict::Zero { .. } => return Ok(()), // duplicate
            ZeroVerdict::Nonzero { .. } => continue,
            ZeroVerdict::Unknown { .. } => ambiguous.push(idx),
        }
    }
    let new_idx = level.members.len();
    for &idx in &ambiguous {
        level.members[idx].ambiguous_with.push(new_idx);
    }
    level.members.push(LevelMember {
        expr: cand,
        ball,
        ambiguous_with: ambiguous,
    });
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SeparationEstimate {
    pub n: u32,
    /// Certified lower bound on the minimal pairwise distance.
    pub epsilon: Dyadic,
    /// False when some pair could not be separated within budget.
    pub certified: bool,
    pub undecided_pairs: usize,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum LabError {
    #[error("separation needs at least two members (level has {0})")]
    TooFewMembers(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Certified lower bound on the minimum pairwise distance within a level.
pub fn separation(level: &LevelSet, budget: &EvalBudget) -> Result<SeparationEstimate, LabError> {
    if level.members.len() < 2 {
        return Err(LabError::TooFewMembers(level.members.len()));
    }
    let target = Dyadic::pow2(-64);
    let mut epsilon: Option<Dyadic> = None;
    let mut undecided = 0usize;
    for i in 0..level.members.len() {
        for j in (i + 1)..level.members.len() {
            let diff = ElExpr::sub(
                level.members[i].expr.clone(),
                level.members[j].expr.clone(),
            );
            let mut lower: Option<Dyadic> = None;
            let mut t = target.clone();
            for _ in 0..4 {
                match zero::refine(&diff, &t, budget) {
                    Ok(ball) => {
                        let low = tight_mag_lower(&ball);
                        if low.is_positive() {
                            lower = Some(low);
                            break;
                        }
                    }
                    Err(_) => break,
                }
                t = t.mul_pow2(-64);
            }
            match lower {
                Some(low) => {
                    epsilon = Some(match epsilon {
                        None => low,
                        Some(e) => {
                            if low.cmp_exact(&e) == Ordering::Less {
                                low
                            } else {
                                e
                            }
                        }
                    });
                }
                None => undecided += 1,
            }
        }
    }
    Ok(SeparationEstimate {
        n: level.n,
        epsilon: epsilon.unwrap_or_else(Dyadic::zero),
        certified: undecided == 0,
        undecided_pairs: undecided,
    })
}

/// A partial-sum plan: term expressions and claimed tail bounds per stage.
#[derive(Debug, Clone, Default)]
pub struct PartialSumSchedule {
    /// f(1), f(2), ... as expressions.
    pub terms: Vec<ExprRef>,
    /// Claimed bounds on the tail past each stage.
    pub tail_bounds: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelCheck {
    /// Partial sum certified in the level and tail bound below separation.
    Pass,
    MembershipFail,
    TailFail,
    Unknown(String),
}

#[derive(Debug, Clone)]
pub struct PartialSumReport {
    pub checks: Vec<(u32, LevelCheck)>,
}

/// Check a partial-sum plan against enumerated levels: at each stage the
/// partial sum must be certified inside the level and the claimed tail
/// bound must fall below the certified separation. No non-membership claim
/// is made beyond the enumerated caps.
pub fn partial_sum_search(
    schedule: &PartialSumSchedule,
    levels: &[LevelSet],
    budget: &EvalBudget,
) -> PartialSumReport {
    let mut checks = Vec::new();
    let n_max = schedule
        .terms
        .len()
        .min(schedule.tail_bounds.len())
        .min(levels.len().saturating_sub(1));
    for n in 1..=n_max {
        let partial = partial_sum(&schedule.terms[..n]);
        let level = &levels[n];
        let membership = check_membership(&partial, level, budget);
        let verdict = match membership {
            Membership::In => match separation(level, budget) {
                Ok(sep) if sep.certified => {
                    let tail = &schedule.tail_bounds[n - 1];
                    let (tail_up, terr) =
                        Dyadic::from_ratio(tail.numer(), tail.denom(), 64);
                    let tail_up = tail_up.add_exact(&terr);
                    if tail_up.cmp_exact(&sep.epsilon) == Ordering::Less {
                        LevelCheck::Pass
                    } else {
                        LevelCheck::TailFail
                    }
                }
                Ok(_) => LevelCheck::Unknown("separation uncertified".to_string()),
                Err(e) => LevelCheck::Unknown(e.to_string()),
            },
            Membership::Out => LevelCheck::MembershipFail,
            Membership::Undecided => {
                LevelCheck::Unknown(format!("membership of {} undecided", render(&partial)))
            }
        };
        checks.push((n as u32, verdict));
    }
    PartialSumReport { checks }
}

/// Full-precision lower bound on `|z|` over a rectangle: the largest
/// endpoint-exact bound among sign-definite components.
fn tight_mag_lower(ball: &ComplexBall) -> Dyadic {
    let comp = |b: &crate::num::RealBall| -> Dyadic {
        let lo = b.lower();
        let hi = b.upper();
        if lo.is_positive() {
            lo
        } else if hi.is_negative() {
            hi.neg()
        } else {
            Dyadic::zero()
        }
    };
    let r = comp(&ball.re);
    let i = comp(&ball.im);
    if r.cmp_exact(&i) == Ordering::Greater {
        r
    } else {
        i
    }
}

fn partial_sum(terms: &[ExprRef]) -> ExprRef {
    let mut it = terms.iter();
    let first = it.next().expect("nonempty").clone();
    it.fold(first, |acc, t| ElExpr::add(acc, t.clone()))
}

enum Membership {
    In,
    Out,
    Undecided,
}

fn check_membership(value: &ExprRef, level: &LevelSet, budget: &EvalBudget) -> Membership {
    let mut any_unknown = false;
    for m in &level.members {
        match zero::certified_equal(value, &m.expr, budget) {
            ZeroVerdict::Zero { .. } => return Membership::In,
            ZeroVerdict::Nonzero { .. } => continue,
            ZeroVerdict::Unknown { .. } => any_unknown = true,
        }
    }
    if any_unknown {
        Membership::Undecided
    } else {
        Membership::Out
    }
}
