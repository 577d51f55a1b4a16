//! Integer-relation detection among complex constants.
//!
//! The search embeds the values in a lattice — identity block plus the
//! scaled real and imaginary parts (a Q-relation among complex numbers must
//! kill both simultaneously) — reduces it with exact-arithmetic LLL, and
//! filters short vectors through a residual enclosure check. A surviving
//! candidate is only numeric evidence; `verify_relation` upgrades it to
//! `VerifiedSymbolic` when the zero-recognizer proves the combination
//! vanishes exactly.

use crate::eval::{EvalBudget, EvalError};
use crate::expr::{ElExpr, ExprRef};
use crate::num::{ComplexBall, Dyadic};
use crate::zero::{self, ZeroVerdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationStatus {
    CandidateNumeric,
    VerifiedSymbolic,
}

/// A nonzero integer vector `c` with `sum c_j v_j = 0` (numerically
/// certified, possibly symbolically verified).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerRelation {
    pub coefficients: Vec<i64>,
    pub height: u64,
    pub status: RelationStatus,
    /// Populated when verification fails or is inapplicable.
    pub diagnostic: Option<String>,
}

impl IntegerRelation {
    fn new(coefficients: Vec<i64>, status: RelationStatus) -> Self {
        let height = coefficients.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
        assert!(height > 0, "relation must have a nonzero coefficient");
        IntegerRelation {
            coefficients,
            height,
            status,
            diagnostic: None,
        }
    }
}

/// A source of enclosures at requested target radii. Expression values and
/// purely numeric constants (certified roots) both fit this shape.
pub trait ValueProvider {
    fn enclosure(&self, target: &Dyadic, budget: &EvalBudget) -> Result<ComplexBall, EvalError>;
    /// Stable identity: two providers with the same key denote the same
    /// number exactly (used to recognize trivial cancellations).
    fn identity_key(&self) -> Option<String> {
        None
    }
    fn describe(&self) -> String;
}

/// Provider backed by an expression.
pub struct ExprProvider(pub ExprRef);

impl ValueProvider for ExprProvider {
    fn enclosure(&self, target: &Dyadic, budget: &EvalBudget) -> Result<ComplexBall, EvalError> {
        zero::refine(&self.0, target, budget)
    }

    fn identity_key(&self) -> Option<String> {
        Some(crate::expr::render(&self.0))
    }

    fn describe(&self) -> String {
        crate::expr::render(&self.0)
    }
}

/// Provider backed by a fixed refinement procedure (e.g. a certified root).
pub struct FnProvider<F: Fn(&Dyadic) -> Result<ComplexBall, EvalError>> {
    pub func: F,
    pub name: String,
}

impl<F: Fn(&Dyadic) -> Result<ComplexBall, EvalError>> ValueProvider for FnProvider<F> {
    fn enclosure(&self, target: &Dyadic, _budget: &EvalBudget) -> Result<ComplexBall, EvalError> {
        (self.func)(target)
    }

    fn identity_key(&self) -> Option<String> {
        Some(self.name.clone())
    }

    fn describe(&self) -> String {
        self.name.clone()
    }
}

/// Search for an integer relation among expression values.
///
/// Returns the lex-least minimal-height candidate of height at most `H`
/// whose residual passes the enclosure check at `2^-(prec/4)`, or `None`
/// when no candidate survives (no relation of height `<= H` at this
/// precision).
pub fn find_rational_relation(
    values: &[ExprRef],
    height_bound: u32,
    precision_bits: u32,
    budget: &EvalBudget,
) -> Result<Option<IntegerRelation>, EvalError> {
    let providers: Vec<Box<dyn ValueProvider>> = values
        .iter()
        .map(|e| Box::new(ExprProvider(e.clone())) as Box<dyn ValueProvider>)
        .collect();
    find_relation_over(&providers, height_bound, precision_bits, budget)
}

/// Provider-based search used by both the expression API and the lab.
pub fn find_relation_over(
    providers: &[Box<dyn ValueProvider>],
    height_bound: u32,
    precision_bits: u32,
    budget: &EvalBudget,
) -> Result<Option<IntegerRelation>, EvalError> {
    assert!(precision_bits >= 32, "precision below floor");
    let n = providers.len();
    if n < 2 {
        return Ok(None);
    }

    // Enclosures comfortably below the 2^-(prec/2) floor the scale needs.
    let target = Dyadic::pow2(-(precision_bits as i64) - 16);
    let mut balls = Vec::with_capacity(n);
    for p in providers {
        balls.push(p.enclosure(&target, budget)?);
    }

    // Lattice rows: identity | N*Re | N*Im, N = 2^(prec/2).
    let scale = precision_bits as i64 / 2;
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (j, b) in balls.iter().enumerate() {
        let mut row = vec![BigInt::zero(); n + 2];
        row[j] = BigInt::from(1);
        row[n] = scaled_int(b.re.mid(), scale);
        row[n + 1] = scaled_int(b.im.mid(), scale);
        basis.push(row);
    }
    lll_reduce(&mut basis);

    // Candidate filtering: short vectors within the height bound whose
    // residual enclosure fits in the acceptance disk.
    let acceptance = Dyadic::pow2(-(precision_bits as i64) / 4);
    let mut best: Option<Vec<i64>> = None;
    for row in &basis {
        let Some(c) = extract_coeffs(row, n, height_bound) else {
            continue;
        };
        let c = canonical_sign(c);
        let residual = combination_ball(providers, &c, &target, budget)?;
        let span = residual.mag_upper();
        if span.cmp_exact(&acceptance) == Ordering::Greater {
            continue;
        }
        if !residual.contains_zero() {
            continue;
        }
        best = Some(match best {
            None => c,
            Some(prev) => pick_candidate(prev, c),
        });
    }
    Ok(best.map(|c| IntegerRelation::new(c, RelationStatus::CandidateNumeric)))
}

/// Symbolic verification: prove `sum c_j v_j = 0` by exact rewrites, or
/// reject the candidate when refinement certifies the residual nonzero.
pub fn verify_relation(
    values: &[ExprRef],
    relation: &IntegerRelation,
    budget: &EvalBudget,
) -> IntegerRelation {
    assert_eq!(values.len(), relation.coefficients.len());
    let combo = combination_expr(values, &relation.coefficients);
    let mut out = relation.clone();
    match zero::is_zero(&combo, budget) {
        ZeroVerdict::Zero { .. } => {
            out.status = RelationStatus::VerifiedSymbolic;
            out.diagnostic = None;
        }
        ZeroVerdict::Nonzero { certificate } => {
            out.diagnostic = Some(format!(
                "residual certified nonzero (|mid| > {}); candidate rejected",
                certificate.radius_upper().to_decimal(3)
            ));
        }
        ZeroVerdict::Unknown { .. } => {
            out.diagnostic =
                Some("symbolic verification inconclusive; still a numeric candidate".to_string());
        }
    }
    out
}

/// Provider-level verification: exact when identical providers cancel
/// coefficient-wise, otherwise a stability check at doubled precision.
pub fn verify_relation_over(
    providers: &[Box<dyn ValueProvider>],
    relation: &IntegerRelation,
    precision_bits: u32,
    budget: &EvalBudget,
) -> Result<IntegerRelation, EvalError> {
    let mut out = relation.clone();
    // Merge coefficients of providers with equal identity keys.
    let mut merged: Vec<(Option<String>, i64)> = Vec::new();
    for (p, &c) in providers.iter().zip(&relation.coefficients) {
        let key = p.identity_key();
        match merged.iter_mut().find(|(k, _)| k.is_some() && *k == key) {
            Some((_, acc)) => *acc += c,
            None => merged.push((key, c)),
        }
    }
    if merged.iter().all(|(_, c)| *c == 0) {
        out.status = RelationStatus::VerifiedSymbolic;
        out.diagnostic = Some("coefficients cancel on identical inputs".to_string());
        return Ok(out);
    }
    // Stability: the residual must still contain zero at doubled precision.
    let target = Dyadic::pow2(-2 * (precision_bits as i64));
    let residual = combination_ball(providers, &relation.coefficients, &target, budget)?;
    if !residual.contains_zero() {
        out.diagnostic = Some("residual certified nonzero on refinement".to_string());
    } else {
        out.diagnostic = Some("stable under refinement; symbolic proof unavailable".to_string());
    }
    Ok(out)
}

/// `sum c_j v_j` as an expression.
pub fn combination_expr(values: &[ExprRef], coeffs: &[i64]) -> ExprRef {
    let mut acc: Option<ExprRef> = None;
    for (v, &c) in values.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        let term = if c == 1 {
            v.clone()
        } else {
            ElExpr::mul(ElExpr::from_int(c), v.clone())
        };
        acc = Some(match acc {
            None => term,
            Some(a) => ElExpr::add(a, term),
        });
    }
    acc.unwrap_or_else(|| ElExpr::from_int(0))
}

fn combination_ball(
    providers: &[Box<dyn ValueProvider>],
    coeffs: &[i64],
    target: &Dyadic,
    budget: &EvalBudget,
) -> Result<ComplexBall, EvalError> {
    let prec = (-(target.top().unwrap_or(-64))).max(64) as u32 + 32;
    let mut acc = ComplexBall::zero();
    for (p, &c) in providers.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        let b = p.enclosure(target, budget)?;
        let term = b.mul(&ComplexBall::from_i64(c), prec);
        acc = acc.add(&term, prec);
    }
    Ok(acc)
}

fn scaled_int(x: &Dyadic, scale_log2: i64) -> BigInt {
    let s = x.mul_pow2(scale_log2);
    // round toward zero to an integer
    let (r, _) = s.round_to(u32::MAX);
    let e = r.exponent();
    if e >= 0 {
        r.mantissa().clone() << (e as u64)
    } else {
        r.mantissa().clone() >> ((-e) as u64)
    }
}

fn extract_coeffs(row: &[BigInt], n: usize, height_bound: u32) -> Option<Vec<i64>> {
    let mut c = Vec::with_capacity(n);
    let bound = BigInt::from(height_bound);
    let mut nonzero = false;
    for v in &row[..n] {
        if v.abs() > bound {
            return None;
        }
        let x = v.to_i64()?;
        nonzero |= x != 0;
        c.push(x);
    }
    if nonzero {
        Some(c)
    } else {
        None
    }
}

/// Canonical representative of `{c, -c}`: the lexicographically smaller.
fn canonical_sign(c: Vec<i64>) -> Vec<i64> {
    let neg: Vec<i64> = c.iter().map(|x| -x).collect();
    if neg < c {
        neg
    } else {
        c
    }
}

/// Deterministic choice: minimal height, then lexicographic.
fn pick_candidate(a: Vec<i64>, b: Vec<i64>) -> Vec<i64> {
    let ha = a.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
    let hb = b.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
    match ha.cmp(&hb).then_with(|| a.cmp(&b)) {
        Ordering::Greater => b,
        _ => a,
    }
}

/// Exact-arithmetic LLL with delta = 99/100.
pub fn lll_reduce(basis: &mut Vec<Vec<BigInt>>) {
    let n = basis.len();
    if n == 0 {
        return;
    }
    let delta = BigRational::new(BigInt::from(99), BigInt::from(100));
    let mut gso = Gso::compute(basis);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            size_reduce(basis, &mut gso, k, j);
        }
        // Lovász: B[k] >= (delta - mu_{k,k-1}^2) B[k-1]
        let mu = gso.mu[k][k - 1].clone();
        let lhs = gso.b_norm[k].clone();
        let rhs = (&delta - &mu * &mu) * &gso.b_norm[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            gso = Gso::compute(basis);
            k = k.max(2) - 1;
        }
    }
}

struct Gso {
    mu: Vec<Vec<BigRational>>,
    b_norm: Vec<BigRational>,
}

impl Gso {
    fn compute(basis: &[Vec<BigInt>]) -> Gso {
        let n = basis.len();
        let dim = basis[0].len();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut b_norm = vec![BigRational::zero(); n];
        let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut v: Vec<BigRational> = basis[i]
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            for j in 0..i {
                let num = dot_int_rat(&basis[i], &star[j]);
                if b_norm[j].is_zero() {
                    mu[i][j] = BigRational::zero();
                } else {
                    mu[i][j] = num / &b_norm[j];
                }
                for d in 0..dim {
                    let t = &mu[i][j] * &star[j][d];
                    v[d] = &v[d] - t;
                }
            }
            mu[i][i] = BigRational::from_integer(BigInt::from(1));
            b_norm[i] = v.iter().map(|x| x * x).sum();
            star.push(v);
        }
        Gso { mu, b_norm }
    }
}

fn dot_int_rat(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| BigRational::from_integer(x.clone()) * y)
        .sum()
}

fn size_reduce(basis: &mut [Vec<BigInt>], gso: &mut Gso, k: usize, j: usize) {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if gso.mu[k][j].abs() <= half {
        return;
    }
    let q = round_rational(&gso.mu[k][j]);
    if q.is_zero() {
        return;
    }
    let dim = basis[0].len();
    for d in 0..dim {
        let t = &q * &basis[j][d];
        basis[k][d] -= t;
    }
    let qr = BigRational::from_integer(q);
    for d in 0..=j {
        let t = &qr * &gso.mu[j][d];
        gso.mu[k][d] = &gso.mu[k][d] - t;
    }
}

fn round_rational(r: &BigRational) -> BigInt {
    use num_integer::Integer;
    let two = BigInt::from(2);
    let (q, rem) = (r.numer() * &two + r.denom()).div_mod_floor(&(r.denom() * &two));
    let _ = rem;
    q
}
