//! Rectangular complex enclosures and the exp/log ball operations.

use super::dyadic::Dyadic;
use super::kernel::{self, KernelError};
use super::real::RealBall;
use num_bigint::BigInt;
use std::cmp::Ordering;

/// Complex enclosure as a product of two real intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

/// Why a ball logarithm could not be taken at the current width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBallError {
    /// The rectangle contains zero.
    ContainsZero,
    /// The rectangle meets the branch cut `(-inf, 0]` without being exactly
    /// real; refinement or an exactness argument must resolve the side.
    StraddlesCut,
    /// The rectangle is too wide relative to its distance from the origin.
    TooWide,
}

impl ComplexBall {
    pub fn new(re: RealBall, im: RealBall) -> Self {
        ComplexBall { re, im }
    }

    pub fn exact_real(d: Dyadic) -> Self {
        ComplexBall {
            re: RealBall::exact(d),
            im: RealBall::zero(),
        }
    }

    pub fn zero() -> Self {
        ComplexBall::exact_real(Dyadic::zero())
    }

    pub fn one() -> Self {
        ComplexBall::exact_real(Dyadic::one())
    }

    pub fn from_i64(v: i64) -> Self {
        ComplexBall::exact_real(Dyadic::from_i64(v))
    }

    /// Exact rational `p/q` as a real enclosure at `prec` bits.
    pub fn from_ratio(p: &BigInt, q: &BigInt, prec: u32) -> Self {
        let (mid, err) = Dyadic::from_ratio(p, q, prec);
        ComplexBall {
            re: RealBall::new(mid, err),
            im: RealBall::zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.re.rad().is_zero() && self.im.rad().is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains(&self, re: &Dyadic, im: &Dyadic) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn overlaps(&self, other: &ComplexBall) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    /// Upper bound on the enclosure "radius": covers the euclidean distance
    /// from the midpoint to any point of the rectangle.
    pub fn radius_upper(&self) -> Dyadic {
        self.re.rad().add_exact(self.im.rad()).round_up_mag(16)
    }

    /// Upper bound on `|z|` over the rectangle.
    pub fn mag_upper(&self) -> Dyadic {
        self.re
            .abs_upper()
            .add_exact(&self.im.abs_upper())
            .round_up_mag(16)
    }

    /// Lower bound on `|z|` over the rectangle (zero when it contains 0).
    pub fn mag_lower(&self) -> Dyadic {
        // max component lower bound works: |z| >= max(|x|, |y|) pointwise,
        // but only when the bound holds over the whole rectangle.
        let rl = self.re.abs_lower();
        let il = self.im.abs_lower();
        if rl.cmp_exact(&il) == Ordering::Greater {
            rl
        } else {
            il
        }
    }

    pub fn neg(&self) -> Self {
        ComplexBall {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexBall {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn add(&self, other: &ComplexBall, prec: u32) -> Self {
        ComplexBall {
            re: self.re.add(&other.re, prec),
            im: self.im.add(&other.im, prec),
        }
    }

    pub fn sub(&self, other: &ComplexBall, prec: u32) -> Self {
        ComplexBall {
            re: self.re.sub(&other.re, prec),
            im: self.im.sub(&other.im, prec),
        }
    }

    pub fn mul(&self, other: &ComplexBall, prec: u32) -> Self {
        let ac = self.re.mul(&other.re, prec);
        let bd = self.im.mul(&other.im, prec);
        let ad = self.re.mul(&other.im, prec);
        let bc = self.im.mul(&other.re, prec);
        ComplexBall {
            re: ac.sub(&bd, prec),
            im: ad.add(&bc, prec),
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        ComplexBall {
            re: self.re.mul_pow2(k),
            im: self.im.mul_pow2(k),
        }
    }

    /// Reciprocal; `None` when the rectangle does not exclude zero.
    pub fn recip(&self, prec: u32) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        // 1/z = conj(z) / (re^2 + im^2)
        let d = self
            .re
            .mul(&self.re, prec)
            .add(&self.im.mul(&self.im, prec), prec);
        let dinv = d.recip(prec)?;
        Some(ComplexBall {
            re: self.re.mul(&dinv, prec),
            im: self.im.neg().mul(&dinv, prec),
        })
    }

    pub fn div(&self, other: &ComplexBall, prec: u32) -> Option<Self> {
        Some(self.mul(&other.recip(prec)?, prec))
    }

    /// Integer power by binary exponentiation; negative powers require the
    /// base to exclude zero.
    pub fn pow_i64(&self, n: i64, prec: u32) -> Option<Self> {
        if n == 0 {
            return Some(ComplexBall::one());
        }
        let mut base = if n < 0 {
            self.recip(prec)?
        } else {
            self.clone()
        };
        let mut e = n.unsigned_abs();
        let mut acc = ComplexBall::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, prec);
            }
        }
        Some(acc)
    }

    /// Widen both components by `err`.
    pub fn widen(&self, err: &Dyadic) -> Self {
        ComplexBall {
            re: self.re.widen(err),
            im: self.im.widen(err),
        }
    }

    /// Ball exponential.
    pub fn exp(&self, prec: u32) -> Result<Self, KernelError> {
        let (er, ei, kerr) = kernel::exp_point(self.re.mid(), self.im.mid(), prec)?;
        // |e^(z+d) - e^z| <= |e^z| (e^|d| - 1), |d| <= rad_re + rad_im.
        // The true |e^mid| can exceed |er| + |ei| by one kernel error in
        // each component, so the magnitude bound carries both.
        let rho = self.re.rad().add_exact(self.im.rad());
        let mag = er
            .abs()
            .add_exact(&ei.abs())
            .add_exact(&kerr.mul_pow2(1))
            .round_up_mag(16);
        let spread = if rho.cmp_exact(&Dyadic::one()) != Ordering::Greater {
            // e^rho - 1 <= 3 rho on [0, 1]
            mag.mul_exact(&rho).mul_exact(&Dyadic::from_i64(3))
        } else {
            // crude: e^rho <= 2^(ceil(1.45 rho) + 1)
            let bits = ((rho.to_f64() * 1.45).ceil() as i64)
                .saturating_add(2)
                .min(1 << 40);
            mag.mul_exact(&Dyadic::pow2(bits))
        };
        let total = kerr.add_exact(&spread).round_up_mag(16);
        // A real argument has a real exponential; keep the imaginary part
        // exactly zero so branch decisions stay decidable downstream.
        if self.im.is_exactly_zero() {
            debug_assert!(ei.is_zero());
            return Ok(ComplexBall {
                re: RealBall::new(er, total),
                im: RealBall::zero(),
            });
        }
        Ok(ComplexBall {
            re: RealBall::new(er, total.clone()),
            im: RealBall::new(ei, total),
        })
    }

    /// Whether the rectangle meets the branch cut `(-inf, 0]` of log.
    /// Assumes the rectangle does not contain zero.
    pub fn meets_log_cut(&self) -> bool {
        self.re.lower().is_negative() && self.im.contains_zero()
    }

    /// Exactly real and entirely negative.
    pub fn is_exactly_negative_real(&self) -> bool {
        self.im.is_exactly_zero() && self.re.upper().is_negative()
    }

    /// Exactly real and entirely positive.
    pub fn is_exactly_positive_real(&self) -> bool {
        self.im.is_exactly_zero() && self.re.lower().is_positive()
    }

    /// Principal-branch ball logarithm, `Im in (-pi, pi]`.
    ///
    /// Exactly-real rectangles on either side of the origin are handled
    /// directly (the negative side maps to `ln|x| + i pi`). Otherwise the
    /// rectangle must avoid the cut; the caller resolves straddles.
    pub fn log(&self, prec: u32) -> Result<Self, LogBallError> {
        if self.contains_zero() {
            return Err(LogBallError::ContainsZero);
        }
        if self.im.is_exactly_zero() {
            if self.re.lower().is_positive() {
                let ln = real_interval_ln(&self.re, prec);
                return Ok(ComplexBall {
                    re: ln,
                    im: RealBall::zero(),
                });
            }
            if self.re.upper().is_negative() {
                let ln = real_interval_ln(&self.re.neg(), prec);
                let (pi, pi_err) = kernel::pi_dyadic(prec);
                return Ok(ComplexBall {
                    re: ln,
                    im: RealBall::new(pi, pi_err),
                });
            }
            // Interval straddles 0 but the rectangle excludes it: impossible
            // for an exactly-real rectangle.
            return Err(LogBallError::ContainsZero);
        }
        if self.meets_log_cut() {
            return Err(LogBallError::StraddlesCut);
        }

        let rho = self.re.rad().add_exact(self.im.rad());
        let mag_low = self.mag_lower();
        // Require rho < mag_low / 2 so the derivative bound is usable.
        if rho.mul_pow2(1).cmp_exact(&mag_low) != Ordering::Less {
            return Err(LogBallError::TooWide);
        }

        let a = self.re.mid();
        let b = self.im.mid();
        // ln|z| = ln(a^2 + b^2) / 2 on the exact midpoint.
        let h2 = a.mul_exact(a).add_exact(&b.mul_exact(b));
        let (lnh2, ln_err) = kernel::ln_point(&h2, prec + 2);
        let ln_mid = lnh2.mul_pow2(-1);
        let ln_err = ln_err.mul_pow2(-1);
        let (arg_mid, arg_err) = kernel::atan2_point(b, a, prec);

        // |log z' - log mid| <= |z' - mid| / (|mid| - rho) over the rectangle.
        let denom = mag_low.sub_exact(&rho);
        let (q, qe) = rho.div_round(&denom, 16);
        let prop = q.add_exact(&qe);

        Ok(ComplexBall {
            re: RealBall::new(ln_mid, ln_err.add_exact(&prop)),
            im: RealBall::new(arg_mid, arg_err.add_exact(&prop)),
        })
    }

    /// Render as the serialized `(mid_re, mid_im, radius)` decimal triple.
    pub fn to_decimal_parts(&self, digits: usize) -> (String, String, String) {
        (
            self.re.mid().to_decimal(digits),
            self.im.mid().to_decimal(digits),
            self.radius_upper().to_decimal(3),
        )
    }
}

/// ln over a positive real interval via the midpoint kernel plus the
/// derivative bound `|d ln| <= rad / lower`.
fn real_interval_ln(x: &RealBall, prec: u32) -> RealBall {
    debug_assert!(x.lower().is_positive());
    let (mid, kerr) = kernel::ln_point(x.mid(), prec);
    if x.rad().is_zero() {
        return RealBall::new(mid, kerr);
    }
    let (q, qe) = x.rad().div_round(&x.lower(), 16);
    RealBall::new(mid, kerr.add_exact(&q).add_exact(&qe))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cb(re: f64, im: f64) -> ComplexBall {
        let r = Dyadic::new(BigInt::from((re * 65536.0) as i64), -16);
        let i = Dyadic::new(BigInt::from((im * 65536.0) as i64), -16);
        ComplexBall::new(RealBall::exact(r), RealBall::exact(i))
    }

    #[test]
    fn mul_and_inv_roundtrip() {
        let z = cb(1.5, -2.25);
        let w = z.recip(96).unwrap();
        let p = z.mul(&w, 96);
        assert!(p.contains(&Dyadic::one(), &Dyadic::zero()));
    }

    #[test]
    fn exp_log_of_two() {
        let two = ComplexBall::from_i64(2);
        let l = two.log(96).unwrap();
        assert!(l.im.is_exactly_zero());
        let back = l.exp(96).unwrap();
        assert!(back.contains(&Dyadic::from_i64(2), &Dyadic::zero()));
        assert!(back.radius_upper().to_f64() < 1e-20);
    }

    #[test]
    fn log_of_negative_real_is_ln_plus_i_pi() {
        let minus_one = ComplexBall::from_i64(-1);
        let l = minus_one.log(96).unwrap();
        assert!(l.re.contains(&Dyadic::zero()));
        let pi_approx = Dyadic::new(BigInt::from(3_14159265358979i64), 0)
            .div_round(&Dyadic::new(BigInt::from(10i64).pow(14), 0), 64)
            .0;
        assert!(l.im.contains(&pi_approx) || l.im.overlaps(&RealBall::new(pi_approx, Dyadic::pow2(-40))));
    }

    #[test]
    fn log_straddle_detected() {
        let z = ComplexBall::new(
            RealBall::new(Dyadic::from_i64(-2), Dyadic::zero()),
            RealBall::new(Dyadic::zero(), Dyadic::pow2(-4)),
        );
        assert_eq!(z.log(64), Err(LogBallError::StraddlesCut));
    }

    #[test]
    fn euler_identity_ball() {
        // exp(log(-1)) + 1 contains 0
        let minus_one = ComplexBall::from_i64(-1);
        let l = minus_one.log(128).unwrap();
        let e = l.exp(128).unwrap();
        let s = e.add(&ComplexBall::one(), 128);
        assert!(s.contains_zero());
        assert!(s.radius_upper().to_f64() < 1e-30);
    }

    #[test]
    fn pow_i64_matches_repeated_mul(){
        let z = cb(0.75, 0.5);
        let p3 = z.pow_i64(3, 96).unwrap();
        let m3 = z.mul(&z, 96).mul(&z, 96);
        assert!(p3.overlaps(&m3));
        let pm2 = z.pow_i64(-2, 96).unwrap();
        let m2 = z.mul(&z, 96).recip(96).unwrap();
        assert!(pm2.overlaps(&m2));
    }
}
