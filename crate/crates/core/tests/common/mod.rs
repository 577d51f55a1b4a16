#![allow(dead_code)] // each test binary uses its own subset of these helpers

//! Independent oracles and generators for the integration suites.
//!
//! Everything here deliberately avoids the library's evaluation path: the
//! constants come from exact rational series with explicit tail bounds, so
//! they can referee the ball kernels.

use elnum::expr::{ElExpr, ExprRef};
use elnum::num::Dyadic;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::Rng;

/// Exact rational enclosure `[lo, hi]` of e from the factorial series:
/// tail after N terms is below 2/(N+1)!.
pub fn e_oracle(terms: u32) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    let mut fact = BigInt::one();
    for n in 0..=terms {
        if n > 0 {
            fact *= BigInt::from(n);
        }
        sum += BigRational::new(BigInt::one(), fact.clone());
    }
    let tail = BigRational::new(BigInt::from(2), &fact * BigInt::from(terms + 1));
    (sum.clone(), sum + tail)
}

/// Exact rational enclosure of `atan(1/x)` from the alternating series;
/// the error after k terms is bounded by the next term.
fn atan_inv_oracle(x: u64, terms: u32) -> (BigRational, BigRational) {
    let x = BigInt::from(x);
    let mut sum = BigRational::zero();
    let mut power = x.clone(); // x^(2k+1)
    let x2 = &x * &x;
    for k in 0..terms {
        let term = BigRational::new(BigInt::one(), &power * BigInt::from(2 * k + 1));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power *= &x2;
    }
    let next = BigRational::new(BigInt::one(), &power * BigInt::from(2 * terms + 1));
    if terms % 2 == 0 {
        // next term would be added
        (sum.clone(), sum + next)
    } else {
        (sum.clone() - next, sum)
    }
}

/// Exact rational enclosure of pi from the Machin formula
/// `pi = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi_oracle(terms: u32) -> (BigRational, BigRational) {
    let (a_lo, a_hi) = atan_inv_oracle(5, terms);
    let (b_lo, b_hi) = atan_inv_oracle(239, terms / 2 + 4);
    let sixteen = BigRational::from_integer(BigInt::from(16));
    let four = BigRational::from_integer(BigInt::from(4));
    (&sixteen * &a_lo - &four * &b_hi, &sixteen * &a_hi - &four * &b_lo)
}

/// Exact value of a dyadic as a rational.
pub fn dyadic_to_rational(d: &Dyadic) -> BigRational {
    let man = BigRational::from_integer(d.mantissa().clone());
    let e = d.exponent();
    if e >= 0 {
        man * BigRational::from_integer(BigInt::one() << (e as u64))
    } else {
        man / BigRational::from_integer(BigInt::one() << ((-e) as u64))
    }
}

/// `10^-digits` as an exact rational.
pub fn pow10_neg(digits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits))
}

/// A dyadic lower bound for `10^-digits` (safe refinement target).
pub fn pow10_target(digits: u32) -> Dyadic {
    let r = pow10_neg(digits);
    let (q, _err) = Dyadic::from_ratio(r.numer(), r.denom(), 64);
    // q is within 1 ulp below or equal; halve once to be safely below
    q.mul_pow2(-1)
}

/// Random nonzero Gaussian rational `a + bi` with small numerators.
pub fn random_gauss_rational(rng: &mut StdRng) -> ExprRef {
    loop {
        let a_num: i64 = rng.gen_range(-9..=9);
        let a_den: i64 = rng.gen_range(1..=9);
        let b_num: i64 = rng.gen_range(-9..=9);
        let b_den: i64 = rng.gen_range(1..=9);
        if a_num == 0 && b_num == 0 {
            continue;
        }
        let re = ElExpr::from_ratio(a_num, a_den);
        let im = ElExpr::mul(
            ElExpr::from_ratio(b_num, b_den),
            elnum::expr::builtin(elnum::expr::BuiltinName::I),
        );
        return if b_num == 0 {
            re
        } else if a_num == 0 {
            im
        } else {
            ElExpr::add(re, im)
        };
    }
}

/// Random expression of bounded depth over small rationals; guard-heavy
/// shapes (inv, log) take certified-nonzero-looking arguments but the
/// caller still has to reject candidates that fail evaluation.
pub fn random_expr(rng: &mut StdRng, depth: u32) -> ExprRef {
    if depth == 0 {
        let num: i64 = rng.gen_range(-4..=4);
        let den: i64 = rng.gen_range(1..=4);
        return ElExpr::from_ratio(num, den);
    }
    match rng.gen_range(0..8) {
        0 => ElExpr::add(random_expr(rng, depth - 1), random_expr(rng, depth - 1)),
        1 => ElExpr::mul(random_expr(rng, depth - 1), random_expr(rng, depth - 1)),
        2 => ElExpr::neg(random_expr(rng, depth - 1)),
        3 => ElExpr::inv(random_expr(rng, depth - 1)),
        4 | 5 => ElExpr::exp(random_expr(rng, depth - 1)),
        6 => ElExpr::log(random_expr(rng, depth - 1)),
        _ => {
            let num: i64 = rng.gen_range(-4..=4);
            let den: i64 = rng.gen_range(1..=4);
            ElExpr::from_ratio(num, den)
        }
    }
}

