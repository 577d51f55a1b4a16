//! Fixed-point transcendental kernels with explicit error accounting.
//!
//! Values are scaled integers `V ~= v * 2^w`. Every routine returns the
//! scaled result together with an upper bound on its absolute error in units
//! of `2^-w` ("ulps"). Bounds are deliberately generous; tightness costs a
//! few guard bits which the callers already budget for.

use super::dyadic::Dyadic;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

/// Magnitude cap for exp arguments: `|Re z|, |Im z| < 2^40`.
const EXP_TOP_CAP: i64 = 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelError {
    /// Argument so large the result exponent would be astronomical.
    ExpOverflow,
}

/// `d` as a floor-rounded scaled integer at `2^-w`; error at most 1 ulp.
pub fn to_scaled(d: &Dyadic, w: u32) -> BigInt {
    let shift = d.exponent() + w as i64;
    if shift >= 0 {
        d.mantissa().clone() << (shift as u64)
    } else {
        d.mantissa().clone() >> ((-shift) as u64)
    }
}

pub fn from_scaled(v: BigInt, w: u32) -> Dyadic {
    Dyadic::new(v, -(w as i64))
}

pub fn ulps(err: u128, w: u32) -> Dyadic {
    Dyadic::new(BigInt::from(err), -(w as i64))
}

/// `sum_{k>=0} u^(2k+1)/(2k+1)` for a scaled `0 <= u <= 2^w/3` with input
/// error `err_u` ulps. Returns `(sum, err_ulps)`.
fn atanh_sum(u: &BigInt, err_u: u128, w: u32) -> (BigInt, u128) {
    let usq = (u * u) >> w;
    let mut p = u.clone();
    let mut sum = u.clone();
    let mut terms: u128 = 1;
    let mut k: u64 = 1;
    loop {
        p = (&p * &usq) >> w;
        let term = &p / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        sum += term;
        terms += 1;
        k += 1;
    }
    // Per term: one product shift and one division, each <= 1 ulp, inherited
    // error contracts by u^2 <= 1/9. Truncated tail <= 2 ulps.
    (sum, 5 * terms + 8 + 2 * err_u)
}

/// Alternating `sum (-1)^k u^(2k+1)/(2k+1)` for scaled `0 <= u < 2^w/8`.
fn atan_sum(u: &BigInt, err_u: u128, w: u32) -> (BigInt, u128) {
    let usq = (u * u) >> w;
    let mut p = u.clone();
    let mut sum = u.clone();
    let mut terms: u128 = 1;
    let mut k: u64 = 1;
    loop {
        p = (&p * &usq) >> w;
        let term = &p / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        terms += 1;
        k += 1;
    }
    (sum, 4 * terms + 8 + err_u)
}

/// `atan(1/x)` for a small integer `x >= 2`, scaled at `2^-w`.
fn atan_inv_small(x: u64, w: u32) -> (BigInt, u128) {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut p = (BigInt::from(1) << w) / BigInt::from(x);
    let mut sum = p.clone();
    let mut terms: u128 = 1;
    let mut k: u64 = 1;
    loop {
        p = &p / &x2;
        let term = &p / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        terms += 1;
        k += 1;
    }
    (sum, 3 * terms + 4)
}

#[derive(PartialEq, Eq, Hash, Clone, Copy)]
enum NamedConst {
    Ln2,
    Pi,
}

fn const_cache() -> &'static RwLock<HashMap<(NamedConst, u32), (BigInt, u128)>> {
    static CACHE: OnceLock<RwLock<HashMap<(NamedConst, u32), (BigInt, u128)>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached(which: NamedConst, w: u32, compute: impl FnOnce() -> (BigInt, u128)) -> (BigInt, u128) {
    if let Some(hit) = const_cache().read().unwrap().get(&(which, w)) {
        return hit.clone();
    }
    let v = compute();
    const_cache()
        .write()
        .unwrap()
        .insert((which, w), v.clone());
    v
}

/// `ln 2 = 2 atanh(1/3)` scaled at `2^-w`.
pub fn ln2_scaled(w: u32) -> (BigInt, u128) {
    cached(NamedConst::Ln2, w, || {
        let u = (BigInt::from(1) << w) / BigInt::from(3);
        let (s, e) = atanh_sum(&u, 1, w);
        (s << 1, 2 * e + 1)
    })
}

/// `pi = 16 atan(1/5) - 4 atan(1/239)` scaled at `2^-w`.
pub fn pi_scaled(w: u32) -> (BigInt, u128) {
    cached(NamedConst::Pi, w, || {
        let (a, ea) = atan_inv_small(5, w);
        let (b, eb) = atan_inv_small(239, w);
        ((a << 4) - (b << 2), 16 * ea + 4 * eb + 2)
    })
}

/// Rigorous enclosure of pi as `(mid, err)` dyadics.
pub fn pi_dyadic(prec: u32) -> (Dyadic, Dyadic) {
    let w = prec + 16;
    let (p, e) = pi_scaled(w);
    (from_scaled(p, w), ulps(e, w))
}

/// Rigorous enclosure of ln 2.
pub fn ln2_dyadic(prec: u32) -> (Dyadic, Dyadic) {
    let w = prec + 16;
    let (p, e) = ln2_scaled(w);
    (from_scaled(p, w), ulps(e, w))
}

/// Complex exponential of an exact dyadic point `a + bi`.
///
/// Returns `(re, im, err)` with the true value within `err` of `re + im*i`
/// in each component. Fails when the argument magnitude exceeds `2^40`.
pub fn exp_point(a: &Dyadic, b: &Dyadic, prec: u32) -> Result<(Dyadic, Dyadic, Dyadic), KernelError> {
    if a.top().unwrap_or(i64::MIN) > EXP_TOP_CAP || b.top().unwrap_or(i64::MIN) > EXP_TOP_CAP {
        return Err(KernelError::ExpOverflow);
    }

    // Halvings so that |(r + bi)/2^s| <= 5/8: r is reduced below 3/4.
    let s: u32 = ((b.top().unwrap_or(0) + 2).max(1)) as u32;

    // Working precision: guard for |k| ulp amplification of the ln2 error,
    // 2.5 bits per squaring, plus headroom for the series.
    let k_bits_est = 42u32; // |k| <= 1.45 * 2^40 by the cap above
    let w = prec + 64 + k_bits_est + (5 * s + 1) / 2;

    let (ln2, ln2_err) = ln2_scaled(w);
    let a_scaled = to_scaled(a, w);

    // Range-reduce the real part: a = k ln2 + r, |r| <= 3/4.
    let mut k: i64 = (a.to_f64() / std::f64::consts::LN_2).round() as i64;
    let hi = BigInt::from(3) << (w - 2);
    let lo = -hi.clone();
    let mut r;
    loop {
        r = &a_scaled - BigInt::from(k) * &ln2;
        if r > hi {
            let step = (&r / &ln2).to_i64().unwrap_or(1).max(1);
            k += step;
        } else if r < lo {
            let step = ((-&r) / &ln2).to_i64().unwrap_or(1).max(1);
            k -= step;
        } else {
            break;
        }
    }
    let err_r: u128 = (k.unsigned_abs() as u128) * ln2_err + 1;

    let b_scaled = to_scaled(b, w);
    let zr = r >> s;
    let zi = b_scaled >> s;
    let err_z: u128 = err_r >> s;
    let err_z = err_z + 4; // shift truncations and b's own scaling

    // Taylor term count: (5/8)^n / n! below 2^-(w+4).
    let mut n: u64 = 1;
    let mut acc_bits = 0f64;
    while acc_bits < (w + 4) as f64 {
        n += 1;
        acc_bits += 0.678 + (n as f64).log2();
    }

    // Horner: S = 1 + z(1 + z/2(1 + ... (1 + z/n)))
    let one = BigInt::from(1) << w;
    let mut sr = one.clone();
    let mut si = BigInt::zero();
    for j in (1..=n).rev() {
        let tr = (&zr * &sr - &zi * &si) >> w;
        let ti = (&zr * &si + &zi * &sr) >> w;
        let jj = BigInt::from(j);
        sr = &one + tr / &jj;
        si = ti / jj;
    }
    // Contraction |z|/j <= 5/8 bounds the accumulated rounding by
    // 6/(1-5/8) + tail; the input error enters through |exp'| < 1.9.
    let mut err: u128 = 24 + 2 * err_z;

    // Repeated squaring; |E_j| <= e^(3/4) < 2.2 throughout.
    for _ in 0..s {
        let nr = (&sr * &sr - &si * &si) >> w;
        let ni = (&sr * &si) >> (w - 1);
        sr = nr;
        si = ni;
        err = err * 9 / 2 + 4;
    }

    Ok((
        from_scaled(sr, w).mul_pow2(k),
        from_scaled(si, w).mul_pow2(k),
        ulps(err, w).mul_pow2(k),
    ))
}

/// Natural log of an exact positive dyadic.
pub fn ln_point(x: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    assert!(x.is_positive(), "ln_point requires a positive argument");
    let e_total_est = x.top().unwrap().unsigned_abs();
    let w = prec + 48 + 64 - e_total_est.leading_zeros();

    // Round x to w bits; the relative perturbation costs <= 4 ulps of ln.
    let (xr, _) = x.round_to(w);
    let man = xr.mantissa().magnitude().clone();
    let bits = man.bits();
    let e_total = xr.exponent() + bits as i64 - 1;

    // m' = man / 2^(bits-1) in [1,2), scaled at w; bits <= w after rounding.
    let ms = BigInt::from(man) << (w as u64 + 1 - bits);
    let one = BigInt::from(1) << w;
    let num = (&ms - &one) << w;
    let den = &ms + &one;
    let u = num / den;
    let (sum, es) = atanh_sum(&u, 1, w);
    let lnm = sum << 1;
    let err_lnm = 2 * es + 1;

    let (ln2, ln2_err) = ln2_scaled(w);
    let total = lnm + BigInt::from(e_total) * &ln2;
    let err = err_lnm + (e_total.unsigned_abs() as u128) * ln2_err + 6;
    (from_scaled(total, w), ulps(err, w))
}

/// Principal-branch `atan2(b, a)` of an exact dyadic point, in `(-pi, pi]`.
pub fn atan2_point(b: &Dyadic, a: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    assert!(
        !(a.is_zero() && b.is_zero()),
        "atan2_point at the origin"
    );
    let w = prec + 64;
    let (pi, pi_err) = pi_scaled(w);

    if b.is_zero() {
        return if a.is_positive() {
            (Dyadic::zero(), Dyadic::zero())
        } else {
            (from_scaled(pi, w), ulps(pi_err, w))
        };
    }
    if a.is_zero() {
        let half = pi >> 1;
        let v = from_scaled(half, w);
        let e = ulps(pi_err / 2 + 1, w);
        return if b.is_positive() { (v, e) } else { (v.neg(), e) };
    }

    // First-octant reduction: q = min/max of the magnitudes.
    let (aa, _) = a.abs().round_to(w);
    let bb = b.abs();
    let (bb, _) = bb.round_to(w);
    let swapped = bb.cmp_exact(&aa) == std::cmp::Ordering::Greater;
    let (num, den) = if swapped { (&aa, &bb) } else { (&bb, &aa) };
    let (qd, _) = num.div_round(den, w);
    let mut q = to_scaled(&qd, w);
    let mut err_q: u128 = 8; // rounding of a, b and the division

    // Three angle halvings: q <- q / (1 + sqrt(1 + q^2)).
    let one = BigInt::from(1) << w;
    for _ in 0..3 {
        let t = (&one * &one) + (&q * &q);
        let s2 = t.sqrt();
        let den = &one + s2;
        q = (q << w) / den;
        err_q = err_q / 2 + 3;
    }
    let (phi3, e3) = atan_sum(&q, err_q, w);
    let phi = phi3 << 3;
    let err_phi: u128 = (e3 << 3) + 8;

    // Reassemble the octant.
    let (theta, err): (BigInt, u128) = match (swapped, a.is_positive()) {
        (false, true) => (phi, err_phi),
        (false, false) => (&pi - phi, err_phi + pi_err),
        (true, apos) => {
            let half = pi >> 1;
            if apos {
                (&half - phi, err_phi + pi_err / 2 + 1)
            } else {
                (&half + phi, err_phi + pi_err / 2 + 1)
            }
        }
    };
    let signed = if b.is_positive() { theta } else { -theta };
    (from_scaled(signed, w), ulps(err + 2, w))
}
