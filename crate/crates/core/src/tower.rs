//! Towers: staged field extensions witnessing membership of an EL number.
//!
//! A tower is a sequence of nonzero numbers where each entry, raised to some
//! positive integer power, or exponentiated after such a multiple, lands in
//! the field generated by the earlier entries and their exponentials.
//! Witnesses are carried constructively as rational functions in the formal
//! generators `X_j` (the entry) and `Y_j` (its exponential), so "lies in the
//! base field" is always checked by evaluating an identity, never by
//! deciding membership in a transcendental field.
//!
//! `build_tower` constructs a tower for any expression that evaluates
//! cleanly, `divide_tower` divides entries by nonzero integers while
//! rewriting every witness, `reduce_tower` splices out rationally dependent
//! entries until the relation search finds nothing, and `verify_tower`
//! replays all witness identities numerically.

use crate::eval::{EvalBudget, EvalError};
use crate::expr::{render, ElExpr, ExprRef};
use crate::fieldelem::{tower_namer, tower_var_x, tower_var_y, RatFunc};
use crate::linrel::{self, RelationStatus};
use crate::num::{ComplexBall, Dyadic};
use crate::zero::{self, ZeroVerdict};
use num_rational::BigRational;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// `alpha^m` lies in the base field.
    PowerInBase,
    /// `exp(alpha * m)` lies in the base field.
    ExpInBase,
}

#[derive(Debug, Clone)]
pub struct TowerEntry {
    pub alpha: ExprRef,
    pub m: u64,
    pub witness_kind: WitnessKind,
    /// Element of the base field equal to `alpha^m` or `exp(alpha m)`.
    pub witness: RatFunc,
    /// Both tower conditions hold (the power form is preferred then).
    pub both_hold: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Tower {
    pub entries: Vec<TowerEntry>,
    /// The number this tower was built for, over the top field.
    pub target: Option<RatFunc>,
}

/// A tower whose entries passed a bounded independence search.
#[derive(Debug, Clone)]
pub struct ReducedTower {
    pub tower: Tower,
    pub height_bound: u32,
    pub precision_bits: u32,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum TowerError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("cannot certify that {0} is nonzero (tower entries must be nonzero)")]
    EntryUndecided(String),
    #[error("length of q ({got}) does not match tower length ({want})")]
    LengthMismatch { got: usize, want: usize },
    #[error("division by a zero integer")]
    ZeroDivisor,
    #[error("candidate relation failed symbolic verification: {0}")]
    RelationUnverified(String),
    #[error("relation with all leading coefficients zero")]
    DegenerateRelation,
}

impl Tower {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Enclosures of `(alpha_j, exp(alpha_j))` for all entries.
    pub fn generator_balls(
        &self,
        prec: u32,
        budget: &EvalBudget,
    ) -> Result<Vec<(ComplexBall, ComplexBall)>, EvalError> {
        let mut out = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let a = zero::eval(&e.alpha, prec, budget)?;
            let ea = zero::eval(&ElExpr::exp(e.alpha.clone()), prec, budget)?;
            out.push((a, ea));
        }
        Ok(out)
    }

    /// Enclosure of the target value over the generators.
    pub fn target_ball(
        &self,
        prec: u32,
        budget: &EvalBudget,
    ) -> Result<Option<ComplexBall>, EvalError> {
        let Some(target) = &self.target else {
            return Ok(None);
        };
        let gens = self.generator_balls(prec, budget)?;
        Ok(eval_ratfunc(target, &gens, prec))
    }

    /// Refine the target enclosure to a radius at most `tol`.
    pub fn target_refined(
        &self,
        tol: &Dyadic,
        budget: &EvalBudget,
    ) -> Result<Option<ComplexBall>, TowerError> {
        let Some(_) = &self.target else {
            return Ok(None);
        };
        let mut prec = 128u32;
        loop {
            if let Some(ball) = self.target_ball(prec, budget)? {
                if ball.radius_upper().cmp_exact(tol) != std::cmp::Ordering::Greater {
                    return Ok(Some(ball));
                }
            }
            if prec >= budget.max_precision_bits {
                return Err(TowerError::Eval(EvalError::BudgetExhausted));
            }
            prec = (prec * 2).min(budget.max_precision_bits);
        }
    }
}

fn eval_ratfunc(
    f: &RatFunc,
    gens: &[(ComplexBall, ComplexBall)],
    prec: u32,
) -> Option<ComplexBall> {
    f.eval(
        &|v| {
            let j = (v / 2) as usize;
            if v % 2 == 0 {
                gens[j].0.clone()
            } else {
                gens[j].1.clone()
            }
        },
        prec,
    )
}

/// Fold exact rational subtrees bottom-up without touching exp/log
/// structure (`exp(1+1)` contributes the entry `2`, but `log(8)` keeps its
/// argument).
fn fold_rationals(e: &ExprRef) -> ExprRef {
    match &**e {
        ElExpr::Rational(_) => e.clone(),
        ElExpr::Add(a, b) => {
            let (fa, fb) = (fold_rationals(a), fold_rationals(b));
            match (fa.as_rational(), fb.as_rational()) {
                (Some(x), Some(y)) => ElExpr::rational(x + y),
                _ => ElExpr::add(fa, fb),
            }
        }
        ElExpr::Mul(a, b) => {
            let (fa, fb) = (fold_rationals(a), fold_rationals(b));
            match (fa.as_rational(), fb.as_rational()) {
                (Some(x), Some(y)) => ElExpr::rational(x * y),
                _ => ElExpr::mul(fa, fb),
            }
        }
        ElExpr::Neg(a) => {
            let fa = fold_rationals(a);
            match fa.as_rational() {
                Some(x) => ElExpr::rational(-x.clone()),
                None => ElExpr::neg(fa),
            }
        }
        // Inv is left intact so `log(2)/3`-style spellings survive.
        ElExpr::Inv(a) => ElExpr::inv(fold_rationals(a)),
        ElExpr::Exp(a) => ElExpr::exp(fold_rationals(a)),
        ElExpr::Log(a) => ElExpr::log(fold_rationals(a)),
    }
}

/// Build a tower for an expression: every exp node contributes its argument
/// as an entry (unless certified zero), every log node contributes the log
/// itself (unless the argument is certified 1), duplicates shared by
/// structure, all multipliers 1.
pub fn build_tower(expr: &ExprRef, budget: &EvalBudget) -> Result<Tower, TowerError> {
    // Precondition: the expression evaluates without guard errors.
    zero::eval(expr, 64, budget)?;

    let folded = fold_rationals(expr);
    let mut builder = Builder {
        entries: Vec::new(),
        index: HashMap::new(),
        memo: HashMap::new(),
        budget,
    };
    let target = builder.walk(&folded)?;
    Ok(Tower {
        entries: builder.entries,
        target: Some(target),
    })
}

struct Builder<'a> {
    entries: Vec<TowerEntry>,
    /// alpha expression -> entry index
    index: HashMap<ExprRef, usize>,
    memo: HashMap<ExprRef, RatFunc>,
    budget: &'a EvalBudget,
}

impl Builder<'_> {
    fn walk(&mut self, e: &ExprRef) -> Result<RatFunc, TowerError> {
        if let Some(hit) = self.memo.get(e) {
            return Ok(hit.clone());
        }
        let out = match &**e {
            ElExpr::Rational(r) => RatFunc::constant(r.clone()),
            ElExpr::Add(a, b) => self.walk(a)?.add(&self.walk(b)?),
            ElExpr::Mul(a, b) => self.walk(a)?.mul(&self.walk(b)?),
            ElExpr::Neg(a) => self.walk(a)?.neg(),
            ElExpr::Inv(a) => {
                let fa = self.walk(a)?;
                match zero::is_zero(a, self.budget) {
                    ZeroVerdict::Zero { .. } => {
                        return Err(TowerError::Eval(EvalError::DivisionByZero(render(a))))
                    }
                    ZeroVerdict::Unknown { .. } => {
                        return Err(TowerError::Eval(EvalError::GuardUndecided(render(a))))
                    }
                    ZeroVerdict::Nonzero { .. } => {
                        fa.inv().expect("nonzero value with formally zero numerator")
                    }
                }
            }
            ElExpr::Exp(a) => {
                let fa = self.walk(a)?;
                // A constant-valued argument enters as the literal itself.
                let alpha = match fa.as_constant() {
                    Some(c) => ElExpr::rational(c),
                    None => a.clone(),
                };
                if let Some(&idx) = self.index.get(&alpha) {
                    RatFunc::var(tower_var_y(idx))
                } else {
                    match zero::is_zero(a, self.budget) {
                        ZeroVerdict::Zero { .. } => RatFunc::one(),
                        ZeroVerdict::Unknown { .. } => {
                            return Err(TowerError::EntryUndecided(render(a)))
                        }
                        ZeroVerdict::Nonzero { .. } => {
                            // Both conditions hold when the argument is a log
                            // whose own argument already lives in the base.
                            let both = matches!(&*alpha, ElExpr::Log(_));
                            let idx = self.push_entry(TowerEntry {
                                alpha,
                                m: 1,
                                witness_kind: WitnessKind::PowerInBase,
                                witness: fa,
                                both_hold: both,
                            });
                            RatFunc::var(tower_var_y(idx))
                        }
                    }
                }
            }
            ElExpr::Log(a) => {
                let fa = self.walk(a)?;
                let alpha = match fa.as_constant() {
                    Some(c) => ElExpr::log(ElExpr::rational(c)),
                    None => ElExpr::log(a.clone()),
                };
                if let Some(&idx) = self.index.get(&alpha) {
                    RatFunc::var(tower_var_x(idx))
                } else {
                    let one_test = ElExpr::sub(a.clone(), ElExpr::from_int(1));
                    match zero::is_zero(&one_test, self.budget) {
                        ZeroVerdict::Zero { .. } => RatFunc::zero(),
                        ZeroVerdict::Unknown { .. } => {
                            return Err(TowerError::EntryUndecided(render(&alpha)))
                        }
                        ZeroVerdict::Nonzero { .. } => {
                            let idx = self.push_entry(TowerEntry {
                                alpha: alpha.clone(),
                                m: 1,
                                witness_kind: WitnessKind::ExpInBase,
                                witness: fa,
                                both_hold: false,
                            });
                            RatFunc::var(tower_var_x(idx))
                        }
                    }
                }
            }
        };
        self.memo.insert(e.clone(), out.clone());
        Ok(out)
    }

    fn push_entry(&mut self, entry: TowerEntry) -> usize {
        let idx = self.entries.len();
        self.index.insert(entry.alpha.clone(), idx);
        self.entries.push(entry);
        idx
    }
}

/// Division Lemma transform: `beta_i = alpha_i / q_i` with witnesses
/// rewritten through `X_j -> q_j X_j`, `Y_j -> Y_j^(q_j)`.
pub fn divide_tower(t: &Tower, q: &[i64]) -> Result<Tower, TowerError> {
    if q.len() != t.entries.len() {
        return Err(TowerError::LengthMismatch {
            got: q.len(),
            want: t.entries.len(),
        });
    }
    if q.iter().any(|&x| x == 0) {
        return Err(TowerError::ZeroDivisor);
    }
    if q.iter().all(|&x| x == 1) {
        return Ok(t.clone());
    }

    let image = |v: u32| -> RatFunc {
        let j = (v / 2) as usize;
        if v % 2 == 0 {
            RatFunc::constant(BigRational::from_integer(q[j].into())).mul(&RatFunc::var(v))
        } else {
            RatFunc::var(v).pow_i64(q[j])
        }
    };

    let mut entries = Vec::with_capacity(t.entries.len());
    for (i, e) in t.entries.iter().enumerate() {
        let qi = q[i];
        let alpha = if qi == 1 {
            e.alpha.clone()
        } else {
            ElExpr::mul(e.alpha.clone(), ElExpr::inv(ElExpr::from_int(qi)))
        };
        let w = e.witness.subst(&image);
        let (m, witness) = match e.witness_kind {
            WitnessKind::PowerInBase => {
                // beta^m = alpha^m / q^m
                let scale = RatFunc::constant(
                    BigRational::from_integer(qi.into()).pow(e.m as i32).recip(),
                );
                (e.m, w.mul(&scale))
            }
            WitnessKind::ExpInBase => {
                // exp(beta |q| m) = exp(alpha m)^sign(q)
                let m = e.m * qi.unsigned_abs();
                let witness = if qi > 0 {
                    w
                } else {
                    w.inv().expect("exponential witness cannot vanish")
                };
                (m, witness)
            }
        };
        entries.push(TowerEntry {
            alpha,
            m,
            witness_kind: e.witness_kind,
            witness,
            both_hold: e.both_hold,
        });
    }
    Ok(Tower {
        entries,
        target: t.target.as_ref().map(|f| f.subst(&image)),
    })
}

/// Reduction Lemma: repeatedly find the shortest prefix carrying an integer
/// relation, divide it out, and splice away the dependent entry, until the
/// bounded search finds nothing.
pub fn reduce_tower(
    t: &Tower,
    height_bound: u32,
    precision_bits: u32,
    budget: &EvalBudget,
) -> Result<ReducedTower, TowerError> {
    let mut cur = t.clone();
    let schedule: Vec<u32> = [1u32, 2, 4]
        .iter()
        .map(|f| (precision_bits * f).min(budget.max_precision_bits.max(precision_bits)))
        .collect();
    let final_prec = *schedule.last().unwrap();

    'reduce: loop {
        if cur.entries.len() < 2 {
            break;
        }
        let alphas: Vec<ExprRef> = cur.entries.iter().map(|e| e.alpha.clone()).collect();
        for &prec in &schedule {
            for i in 2..=alphas.len() {
                let prefix = &alphas[..i];
                if let Some(rel) =
                    linrel::find_rational_relation(prefix, height_bound, prec, budget)?
                {
                    let verified = linrel::verify_relation(prefix, &rel, budget);
                    if verified.status != RelationStatus::VerifiedSymbolic {
                        return Err(TowerError::RelationUnverified(format!(
                            "{:?} among prefix of length {}: {}",
                            rel.coefficients,
                            i,
                            verified.diagnostic.unwrap_or_default()
                        )));
                    }
                    cur = splice(&cur, &verified.coefficients)?;
                    continue 'reduce;
                }
            }
        }
        break;
    }
    Ok(ReducedTower {
        tower: cur,
        height_bound,
        precision_bits: final_prec,
    })
}

/// Remove the entry carrying the relation `sum c_j alpha_j = 0` (last
/// nonzero coefficient at position i), dividing the prefix by `Q = -c_i`
/// and rewriting every later witness.
fn splice(t: &Tower, coeffs: &[i64]) -> Result<Tower, TowerError> {
    let i = coeffs
        .iter()
        .rposition(|&c| c != 0)
        .ok_or(TowerError::DegenerateRelation)?;
    if i == 0 {
        // c_0 alpha_0 = 0 contradicts the nonzero-entry invariant.
        return Err(TowerError::DegenerateRelation);
    }
    // Orient the relation so the prefix divisor Q = -c_i is positive,
    // keeping divided entries as alpha/q with positive q.
    let flip = if coeffs[i] > 0 { -1i64 } else { 1 };
    let q_div = -coeffs[i] * flip;
    let p: Vec<i64> = coeffs[..i].iter().map(|&c| c * flip).collect();

    // sigma maps old generator indices to rational functions over the new.
    // Old j < i: X_j -> Q X_j, Y_j -> Y_j^Q (the prefix got divided by Q).
    // Old i: X_i -> sum p_j X_j, Y_i -> prod Y_j^(p_j).
    // Old j > i: shift down one slot.
    let image = move |v: u32| -> RatFunc {
        let j = (v / 2) as usize;
        let is_x = v % 2 == 0;
        if j < i {
            if is_x {
                RatFunc::constant(BigRational::from_integer(q_div.into()))
                    .mul(&RatFunc::var(v))
            } else {
                RatFunc::var(v).pow_i64(q_div)
            }
        } else if j == i {
            if is_x {
                let mut acc = RatFunc::zero();
                for (jj, &pj) in p.iter().enumerate() {
                    if pj == 0 {
                        continue;
                    }
                    let term = RatFunc::constant(BigRational::from_integer(pj.into()))
                        .mul(&RatFunc::var(tower_var_x(jj)));
                    acc = acc.add(&term);
                }
                acc
            } else {
                let mut acc = RatFunc::one();
                for (jj, &pj) in p.iter().enumerate() {
                    if pj == 0 {
                        continue;
                    }
                    acc = acc.mul(&RatFunc::var(tower_var_y(jj)).pow_i64(pj));
                }
                acc
            }
        } else if is_x {
            RatFunc::var(tower_var_x(j - 1))
        } else {
            RatFunc::var(tower_var_y(j - 1))
        }
    };

    // Divide the prefix (entries before i) by Q.
    let prefix = Tower {
        entries: t.entries[..i].to_vec(),
        target: None,
    };
    let divided = divide_tower(&prefix, &vec![q_div; i])?;

    let mut entries = divided.entries;
    for e in &t.entries[i + 1..] {
        entries.push(TowerEntry {
            alpha: e.alpha.clone(),
            m: e.m,
            witness_kind: e.witness_kind,
            witness: e.witness.subst(&image),
            both_hold: e.both_hold,
        });
    }
    Ok(Tower {
        entries,
        target: t.target.as_ref().map(|f| f.subst(&image)),
    })
}

/// Per-entry witness check report.
#[derive(Debug, Clone)]
pub struct EntryCheck {
    pub index: usize,
    pub witness_kind: WitnessKind,
    pub passed: bool,
    pub residual_radius: Dyadic,
    pub detail: Option<String>,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub entries: Vec<EntryCheck>,
    pub all_passed: bool,
}

/// Evaluate both sides of every witness identity and confirm the residual
/// contains zero at radius `tol`. An empty tower passes vacuously.
pub fn verify_tower(
    t: &Tower,
    tol: &Dyadic,
    budget: &EvalBudget,
) -> Result<VerifyReport, TowerError> {
    let mut checks = Vec::with_capacity(t.entries.len());
    for (i, entry) in t.entries.iter().enumerate() {
        checks.push(verify_entry(t, i, entry, tol, budget)?);
    }
    let all_passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        entries: checks,
        all_passed,
    })
}

fn verify_entry(
    t: &Tower,
    index: usize,
    entry: &TowerEntry,
    tol: &Dyadic,
    budget: &EvalBudget,
) -> Result<EntryCheck, TowerError> {
    let mut prec = 128u32;
    loop {
        let gens = t.generator_balls(prec, budget)?;
        let lhs = match entry.witness_kind {
            WitnessKind::PowerInBase => gens[index].0.pow_i64(entry.m as i64, prec),
            WitnessKind::ExpInBase => {
                let scaled = ElExpr::mul(
                    entry.alpha.clone(),
                    ElExpr::from_int(entry.m as i64),
                );
                Some(zero::eval(&ElExpr::exp(scaled), prec, budget)?)
            }
        };
        let rhs = eval_ratfunc(&entry.witness, &gens[..index.max(0)], prec);
        if let (Some(lhs), Some(rhs)) = (lhs, rhs) {
            let residual = lhs.sub(&rhs, prec);
            let radius = residual.radius_upper();
            if !residual.contains_zero() {
                return Ok(EntryCheck {
                    index,
                    witness_kind: entry.witness_kind,
                    passed: false,
                    residual_radius: radius,
                    detail: Some("residual excludes zero".to_string()),
                });
            }
            if radius.cmp_exact(tol) != std::cmp::Ordering::Greater {
                return Ok(EntryCheck {
                    index,
                    witness_kind: entry.witness_kind,
                    passed: true,
                    residual_radius: radius,
                    detail: None,
                });
            }
        }
        if prec >= budget.max_precision_bits {
            return Ok(EntryCheck {
                index,
                witness_kind: entry.witness_kind,
                passed: false,
                residual_radius: Dyadic::one(),
                detail: Some("budget exhausted before reaching tolerance".to_string()),
            });
        }
        prec = (prec * 2).min(budget.max_precision_bits);
    }
}

/// Pretty form of an entry's witness in `X_j`/`Y_j` notation.
pub fn witness_text(f: &RatFunc) -> String {
    format!("{}", f.display(&tower_namer))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn budget() -> EvalBudget {
        EvalBudget::default()
    }

    fn tol30() -> Dyadic {
        Dyadic::pow2(-100) // below 1e-30
    }

    fn paper_gamma() -> ExprRef {
        parse("4 + log(1 + exp(log(2)/3))").unwrap()
    }

    #[test]
    fn paper_tower_shape() {
        let t = build_tower(&paper_gamma(), &budget()).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(render(&t.entries[0].alpha), "log(2)");
        assert_eq!(render(&t.entries[1].alpha), "log(2)/3");
        assert_eq!(
            render(&t.entries[2].alpha),
            "log(1 + exp(log(2)/3))"
        );
        assert!(t.entries.iter().all(|e| e.m == 1));
        assert_eq!(t.entries[0].witness_kind, WitnessKind::ExpInBase);
        assert_eq!(t.entries[1].witness_kind, WitnessKind::PowerInBase);
        assert_eq!(t.entries[2].witness_kind, WitnessKind::ExpInBase);
        // witnesses: e^a1 = 2; a2 = X_1/3; e^a3 = 1 + Y_2
        assert_eq!(witness_text(&t.entries[0].witness), "2");
        assert_eq!(witness_text(&t.entries[1].witness), "1/3*X_1");
        assert_eq!(witness_text(&t.entries[2].witness), "1 + Y_2");
    }

    #[test]
    fn rational_target_gives_empty_tower() {
        let t = build_tower(&parse("7/5").unwrap(), &budget()).unwrap();
        assert!(t.is_empty());
        let tb = t.target_ball(96, &budget()).unwrap().unwrap();
        let expected = ComplexBall::from_ratio(&7.into(), &5.into(), 96);
        assert!(tb.overlaps(&expected));
        // vacuous verification
        let report = verify_tower(&t, &tol30(), &budget()).unwrap();
        assert!(report.all_passed);
        assert!(report.entries.is_empty());
    }

    #[test]
    fn exp_of_sum_folds_to_rational_entry() {
        let t = build_tower(&parse("exp(1 + 1)").unwrap(), &budget()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(render(&t.entries[0].alpha), "2");
        assert_eq!(t.entries[0].witness_kind, WitnessKind::PowerInBase);
        assert_eq!(t.entries[0].m, 1);
        assert_eq!(witness_text(&t.entries[0].witness), "2");
        // target is Y_1
        assert_eq!(witness_text(t.target.as_ref().unwrap()), "Y_1");
    }

    #[test]
    fn exp_zero_contributes_no_entry() {
        let t = build_tower(&parse("exp(exp(0))").unwrap(), &budget()).unwrap();
        // inner exp(0) folds to 1; single entry alpha = 1
        assert_eq!(t.len(), 1);
        assert_eq!(render(&t.entries[0].alpha), "1");
    }

    #[test]
    fn build_verifies() {
        for text in [
            "4 + log(1 + exp(log(2)/3))",
            "exp(1 + 1)",
            "pi",
            "log(2) + log(8)",
            "exp(log(2)/3) * exp(pi)",
        ] {
            let t = build_tower(&parse(text).unwrap(), &budget()).unwrap();
            let report = verify_tower(&t, &tol30(), &budget()).unwrap();
            assert!(report.all_passed, "{} failed: {:?}", text, report);
            // target reproduces the expression value
            let direct = zero::refine(&parse(text).unwrap(), &tol30(), &budget()).unwrap();
            let via_tower = t.target_refined(&tol30(), &budget()).unwrap().unwrap();
            assert!(direct.overlaps(&via_tower), "{} target mismatch", text);
        }
    }

    #[test]
    fn divide_identity() {
        let t = build_tower(&paper_gamma(), &budget()).unwrap();
        let d = divide_tower(&t, &[1, 1, 1]).unwrap();
        assert_eq!(d.len(), t.len());
        assert_eq!(render(&d.entries[0].alpha), render(&t.entries[0].alpha));
    }

    #[test]
    fn divide_single_log_by_three() {
        let t = build_tower(&parse("log(2)").unwrap(), &budget()).unwrap();
        assert_eq!(t.len(), 1);
        let d = divide_tower(&t, &[3]).unwrap();
        assert_eq!(render(&d.entries[0].alpha), "log(2)/3");
        assert_eq!(d.entries[0].m, 3);
        assert_eq!(d.entries[0].witness_kind, WitnessKind::ExpInBase);
        assert_eq!(witness_text(&d.entries[0].witness), "2");
        let report = verify_tower(&d, &tol30(), &budget()).unwrap();
        assert!(report.all_passed, "{:?}", report);
    }

    #[test]
    fn divide_by_negative_integers() {
        // exp-witness case: exp(3 beta) = 2^(sign q) = 1/2
        let t = build_tower(&parse("log(2)").unwrap(), &budget()).unwrap();
        let d = divide_tower(&t, &[-3]).unwrap();
        assert_eq!(d.entries[0].m, 3);
        assert_eq!(witness_text(&d.entries[0].witness), "1/2");
        assert!(verify_tower(&d, &tol30(), &budget()).unwrap().all_passed);

        // power-witness case: beta = 2/(-3), beta^1 = -2/3
        let t = build_tower(&parse("exp(1 + 1)").unwrap(), &budget()).unwrap();
        let d = divide_tower(&t, &[-3]).unwrap();
        assert_eq!(d.entries[0].m, 1);
        assert_eq!(witness_text(&d.entries[0].witness), "-2/3");
        assert!(verify_tower(&d, &tol30(), &budget()).unwrap().all_passed);

        // mixed signs on the worked example preserve the target value
        let t = build_tower(&paper_gamma(), &budget()).unwrap();
        let before = t.target_refined(&tol30(), &budget()).unwrap().unwrap();
        let d = divide_tower(&t, &[-2, 3, -1]).unwrap();
        let after = d.target_refined(&tol30(), &budget()).unwrap().unwrap();
        assert!(before.overlaps(&after));
        assert!(verify_tower(&d, &tol30(), &budget()).unwrap().all_passed);
    }

    #[test]
    fn reduce_two_rational_entries() {
        // entries 2 and 3 are rationally dependent (3*2 - 2*3 = 0)
        let t = build_tower(&parse("exp(2) * exp(3)").unwrap(), &budget()).unwrap();
        assert_eq!(t.len(), 2);
        let before = t.target_refined(&tol30(), &budget()).unwrap().unwrap();
        let reduced = reduce_tower(&t, 10, 192, &budget()).unwrap();
        assert_eq!(reduced.tower.len(), 1);
        let after = reduced
            .tower
            .target_refined(&tol30(), &budget())
            .unwrap()
            .unwrap();
        assert!(before.overlaps(&after), "e^5 target drifted");
        assert!(verify_tower(&reduced.tower, &tol30(), &budget())
            .unwrap()
            .all_passed);
    }

    #[test]
    fn divide_preserves_target_value() {
        let t = build_tower(&paper_gamma(), &budget()).unwrap();
        let before = t.target_refined(&tol30(), &budget()).unwrap().unwrap();
        let d = divide_tower(&t, &[3, 1, 1]).unwrap();
        let after = d.target_refined(&tol30(), &budget()).unwrap().unwrap();
        assert!(before.overlaps(&after));
        let report = verify_tower(&d, &tol30(), &budget()).unwrap();
        assert!(report.all_passed, "{:?}", report);
    }

    #[test]
    fn reduce_paper_tower_to_length_two() {
        let t = build_tower(&paper_gamma(), &budget()).unwrap();
        let before = t.target_refined(&tol30(), &budget()).unwrap().unwrap();
        let reduced = reduce_tower(&t, 50, 256, &budget()).unwrap();
        assert_eq!(reduced.tower.len(), 2);
        let after = reduced
            .tower
            .target_refined(&tol30(), &budget())
            .unwrap()
            .unwrap();
        assert!(before.overlaps(&after), "target value changed");
        let report = verify_tower(&reduced.tower, &tol30(), &budget()).unwrap();
        assert!(report.all_passed, "{:?}", report);
    }

    #[test]
    fn reduce_log2_log8() {
        let t = build_tower(&parse("log(2) + log(8)").unwrap(), &budget()).unwrap();
        assert_eq!(t.len(), 2);
        let before = t.target_refined(&tol30(), &budget()).unwrap().unwrap();
        let reduced = reduce_tower(&t, 50, 256, &budget()).unwrap();
        assert_eq!(reduced.tower.len(), 1);
        let after = reduced
            .tower
            .target_refined(&tol30(), &budget())
            .unwrap()
            .unwrap();
        assert!(before.overlaps(&after));
    }

    #[test]
    fn reduce_already_reduced_is_identity() {
        let t = build_tower(&parse("log(2)").unwrap(), &budget()).unwrap();
        let reduced = reduce_tower(&t, 50, 256, &budget()).unwrap();
        assert_eq!(reduced.tower.len(), 1);
        assert_eq!(reduced.height_bound, 50);
    }

    #[test]
    fn corrupted_witness_fails() {
        let mut t = build_tower(&parse("log(2)").unwrap(), &budget()).unwrap();
        // replace the witness 2 by 3: |e^(log 2) - 3| = 1
        t.entries[0].witness = RatFunc::constant(BigRational::from_integer(3.into()));
        let report = verify_tower(&t, &tol30(), &budget()).unwrap();
        assert!(!report.all_passed);
        assert_eq!(
            report.entries[0].detail.as_deref(),
            Some("residual excludes zero")
        );
    }
}
