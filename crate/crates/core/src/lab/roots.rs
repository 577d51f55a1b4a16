//! Certified root enclosures for the two fixed question instances:
//! the unique real root of `x + e^x` and the five roots of
//! `2x^5 - 10x + 5`.
//!
//! Existence and uniqueness inside each returned rectangle are certified by
//! the Krawczyk test: with `Y = 1/f'(m)`,
//! `K(Z) = m - Y f(m) + (1 - Y f'(Z)) (Z - m)`, and `K(Z) ⊆ Z` together
//! with `0 ∉ f'(Z)` pins exactly one zero in `Z`.

use crate::eval::EvalError;
use crate::num::{ComplexBall, Dyadic, RealBall};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::cmp::Ordering;

/// The question quintic `2x^5 - 10x + 5`, constant term first.
pub fn question_quintic() -> Vec<BigRational> {
    [5i64, -10, 0, 0, 0, 2]
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(c)))
        .collect()
}

/// Horner evaluation of a rational-coefficient polynomial on a ball.
pub fn poly_ball(coeffs: &[BigRational], z: &ComplexBall, prec: u32) -> ComplexBall {
    let mut acc = ComplexBall::zero();
    for c in coeffs.iter().rev() {
        let cb = ComplexBall::from_ratio(c.numer(), c.denom(), prec);
        acc = acc.mul(z, prec).add(&cb, prec);
    }
    acc
}

pub fn poly_derivative(coeffs: &[BigRational]) -> Vec<BigRational> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

/// One Krawczyk step; `None` when the derivative enclosure is unusable.
fn krawczyk_step(
    f: &dyn Fn(&ComplexBall, u32) -> Option<ComplexBall>,
    fp: &dyn Fn(&ComplexBall, u32) -> Option<ComplexBall>,
    z: &ComplexBall,
    prec: u32,
) -> Option<(ComplexBall, bool)> {
    let m = ComplexBall::new(
        RealBall::exact(z.re.mid().clone()),
        RealBall::exact(z.im.mid().clone()),
    );
    let fm = f(&m, prec)?;
    let fpm = fp(&m, prec)?;
    let y = fpm.recip(prec)?;
    let fpz = fp(z, prec)?;
    if fpz.contains_zero() {
        return None;
    }
    let one = ComplexBall::one();
    let zm = z.sub(&m, prec);
    let k = m
        .sub(&y.mul(&fm, prec), prec)
        .add(&one.sub(&y.mul(&fpz, prec), prec).mul(&zm, prec), prec);
    let certified = z.re.encloses(&k.re) && z.im.encloses(&k.im);
    Some((k, certified))
}

/// Refine a seed rectangle to a certified enclosure of radius <= target.
pub fn krawczyk_refine(
    f: &dyn Fn(&ComplexBall, u32) -> Option<ComplexBall>,
    fp: &dyn Fn(&ComplexBall, u32) -> Option<ComplexBall>,
    seed: ComplexBall,
    target: &Dyadic,
    max_prec: u32,
) -> Result<ComplexBall, EvalError> {
    let mut prec: u32 = 128;
    let mut z = seed;
    let mut certified = false;
    loop {
        let mut progressed = false;
        for _ in 0..64 {
            match krawczyk_step(f, fp, &z, prec) {
                Some((k, ok)) => {
                    certified = certified || ok;
                    let next = ComplexBall::new(
                        k.re.intersect(&z.re, prec).unwrap_or_else(|| k.re.clone()),
                        k.im.intersect(&z.im, prec).unwrap_or_else(|| k.im.clone()),
                    );
                    let before = z.radius_upper();
                    let after = next.radius_upper();
                    z = next;
                    if certified && after.cmp_exact(target) != Ordering::Greater {
                        return Ok(z);
                    }
                    // stop squeezing once the radius stalls at this precision
                    if after.cmp_exact(&before) != Ordering::Less {
                        break;
                    }
                    progressed = true;
                }
                None => break,
            }
        }
        if prec >= max_prec && !progressed {
            return Err(EvalError::BudgetExhausted);
        }
        prec = (prec * 2).min(max_prec);
        if prec == max_prec && z.radius_upper().cmp_exact(target) == Ordering::Greater && !progressed
        {
            return Err(EvalError::BudgetExhausted);
        }
    }
}

fn ball_from_f64(re: f64, im: f64, rad: f64) -> ComplexBall {
    let scale = 1u64 << 48;
    let d = |v: f64| Dyadic::new(BigInt::from((v * scale as f64) as i128), -48);
    ComplexBall::new(
        RealBall::new(d(re), d(rad.abs())),
        RealBall::new(d(im), d(rad.abs())),
    )
}

/// Certified enclosure of the unique real root of `x + e^x = 0`.
pub fn root_of_x_plus_exp_x(target: &Dyadic, max_prec: u32) -> Result<ComplexBall, EvalError> {
    let f = |z: &ComplexBall, prec: u32| -> Option<ComplexBall> {
        Some(z.exp(prec).ok()?.add(z, prec))
    };
    let fp = |z: &ComplexBall, prec: u32| -> Option<ComplexBall> {
        Some(z.exp(prec).ok()?.add(&ComplexBall::one(), prec))
    };
    // f(-0.7) < 0 < f(-0.4); the root is near -0.567143.
    let (mid, _) = Dyadic::from_ratio(&BigInt::from(-567143i64), &BigInt::from(1_000_000i64), 48);
    let seed = ComplexBall::new(
        RealBall::new(mid, Dyadic::pow2(-6)),
        RealBall::zero(),
    );
    krawczyk_refine(&f, &fp, seed, target, max_prec)
}

/// Certified enclosures of the five roots of the question quintic,
/// pairwise disjoint, ordered: three real ascending, then the conjugate
/// pair (positive imaginary part first).
pub fn quintic_roots(target: &Dyadic, max_prec: u32) -> Result<Vec<ComplexBall>, EvalError> {
    let coeffs = question_quintic();
    let deriv = poly_derivative(&coeffs);
    let f = move |z: &ComplexBall, prec: u32| -> Option<ComplexBall> {
        Some(poly_ball(&coeffs, z, prec))
    };
    let fp = move |z: &ComplexBall, prec: u32| -> Option<ComplexBall> {
        Some(poly_ball(&deriv, z, prec))
    };

    // Deterministic float seeds, then certified refinement.
    let seeds = quintic_seed_points();
    let mut out = Vec::with_capacity(5);
    for (re, im) in seeds {
        let seed = ball_from_f64(re, im, 2e-3);
        out.push(krawczyk_refine(&f, &fp, seed, target, max_prec)?);
    }
    Ok(out)
}

/// Certified enclosures for both question instances: the real root of
/// `x + e^x` and the five quintic roots.
pub fn question_roots(
    target: &Dyadic,
    max_prec: u32,
) -> Result<(ComplexBall, Vec<ComplexBall>), EvalError> {
    Ok((
        root_of_x_plus_exp_x(target, max_prec)?,
        quintic_roots(target, max_prec)?,
    ))
}

/// Float Newton from fixed starting points; the certification above does
/// not depend on these values being accurate.
fn quintic_seed_points() -> [(f64, f64); 5] {
    let poly = [5.0f64, -10.0, 0.0, 0.0, 0.0, 2.0];
    let eval = |z: (f64, f64)| -> (f64, f64) {
        let mut acc = (0.0, 0.0);
        for &c in poly.iter().rev() {
            acc = (
                acc.0 * z.0 - acc.1 * z.1 + c,
                acc.0 * z.1 + acc.1 * z.0,
            );
        }
        acc
    };
    let evalp = |z: (f64, f64)| -> (f64, f64) {
        let dp = [-10.0f64, 0.0, 0.0, 0.0, 10.0];
        let mut acc = (0.0, 0.0);
        for &c in dp.iter().rev() {
            acc = (
                acc.0 * z.0 - acc.1 * z.1 + c,
                acc.0 * z.1 + acc.1 * z.0,
            );
        }
        acc
    };
    let newton = |mut z: (f64, f64)| -> (f64, f64) {
        for _ in 0..64 {
            let fv = eval(z);
            let dv = evalp(z);
            let d2 = dv.0 * dv.0 + dv.1 * dv.1;
            if d2 == 0.0 {
                break;
            }
            z = (
                z.0 - (fv.0 * dv.0 + fv.1 * dv.1) / d2,
                z.1 - (fv.1 * dv.0 - fv.0 * dv.1) / d2,
            );
        }
        z
    };
    let r1 = newton((-1.65, 0.0));
    let r2 = newton((0.51, 0.0));
    let r3 = newton((1.35, 0.0));
    let c1 = newton((-0.1, 1.7));
    [r1, r2, r3, (c1.0, c1.1), (c1.0, -c1.1)]
}
