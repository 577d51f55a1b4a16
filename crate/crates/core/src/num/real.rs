//! Real intervals `mid ± rad` with outward-rounded arithmetic.

use super::dyadic::Dyadic;
use std::cmp::Ordering;

/// Radii carry few mantissa bits; they only need an order of magnitude.
const RAD_BITS: u32 = 16;

/// A real enclosure: the true value lies in `[mid - rad, mid + rad]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealBall {
    mid: Dyadic,
    rad: Dyadic,
}

impl RealBall {
    pub fn exact(mid: Dyadic) -> Self {
        RealBall {
            mid,
            rad: Dyadic::zero(),
        }
    }

    pub fn new(mid: Dyadic, rad: Dyadic) -> Self {
        debug_assert!(!rad.is_negative());
        RealBall {
            mid,
            rad: rad.round_up_mag(RAD_BITS),
        }
    }

    pub fn zero() -> Self {
        RealBall::exact(Dyadic::zero())
    }

    pub fn from_i64(v: i64) -> Self {
        RealBall::exact(Dyadic::from_i64(v))
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub_exact(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add_exact(&self.rad)
    }

    /// Enlarge the radius by `err`.
    pub fn widen(&self, err: &Dyadic) -> Self {
        debug_assert!(!err.is_negative());
        RealBall {
            mid: self.mid.clone(),
            rad: self.rad.add_exact(err).round_up_mag(RAD_BITS),
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs().cmp_exact(&self.rad) != Ordering::Greater
    }

    pub fn contains(&self, point: &Dyadic) -> bool {
        self.mid
            .sub_exact(point)
            .abs()
            .cmp_exact(&self.rad)
            != Ordering::Greater
    }

    /// Certified sign: `Some(1)` when the whole interval is positive,
    /// `Some(-1)` when negative, `None` when it contains zero.
    pub fn sign_certain(&self) -> Option<i32> {
        if self.contains_zero() {
            if self.mid.is_zero() && self.rad.is_zero() {
                Some(0)
            } else {
                None
            }
        } else {
            Some(self.mid.signum())
        }
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }

    /// Upper bound on `|x|` over the interval.
    pub fn abs_upper(&self) -> Dyadic {
        self.mid
            .abs()
            .add_exact(&self.rad)
            .round_up_mag(RAD_BITS)
    }

    /// Lower bound on `|x|` over the interval (zero if it straddles).
    pub fn abs_lower(&self) -> Dyadic {
        let d = self.mid.abs().sub_exact(&self.rad);
        if d.is_negative() {
            Dyadic::zero()
        } else {
            // Truncation rounds magnitude down, keeping a valid lower bound.
            d.round_to(RAD_BITS).0
        }
    }

    pub fn neg(&self) -> Self {
        RealBall {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
        }
    }

    pub fn add(&self, other: &RealBall, prec: u32) -> Self {
        let (mid, err) = self.mid.add_prec(&other.mid, prec);
        let rad = self
            .rad
            .add_exact(&other.rad)
            .add_exact(&err)
            .round_up_mag(RAD_BITS);
        RealBall { mid, rad }
    }

    pub fn sub(&self, other: &RealBall, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &RealBall, prec: u32) -> Self {
        let (mid, err) = self.mid.mul_prec(&other.mid, prec);
        // |a|rb + |b|ra + ra rb, all rounded up.
        let a = self.mid.abs().round_up_mag(RAD_BITS);
        let b = other.mid.abs().round_up_mag(RAD_BITS);
        let rad = a
            .mul_exact(&other.rad)
            .add_exact(&b.mul_exact(&self.rad))
            .add_exact(&self.rad.mul_exact(&other.rad))
            .add_exact(&err)
            .round_up_mag(RAD_BITS);
        RealBall { mid, rad }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        RealBall {
            mid: self.mid.mul_pow2(k),
            rad: self.rad.mul_pow2(k),
        }
    }

    /// Multiplicative inverse; the interval must exclude zero.
    pub fn recip(&self, prec: u32) -> Option<Self> {
        let low = self.abs_lower();
        if low.is_zero() {
            return None;
        }
        let (mid, err) = Dyadic::one().div_round(&self.mid, prec);
        // |1/(m±r) - 1/m| <= r / (|m| (|m|-r)); `low` underestimates |m|-r.
        let denom = low.mul_exact(&self.mid.abs().round_to(RAD_BITS).0);
        let (q, qe) = self.rad.div_round(&denom, RAD_BITS);
        let rad = q
            .add_exact(&qe)
            .add_exact(&err)
            .round_up_mag(RAD_BITS);
        Some(RealBall { mid, rad })
    }

    pub fn div(&self, other: &RealBall, prec: u32) -> Option<Self> {
        Some(self.mul(&other.recip(prec)?, prec))
    }

    /// Square root over a nonnegative interval. A slightly negative lower
    /// endpoint is clamped to zero; the caller must know the true value is
    /// nonnegative.
    pub fn sqrt(&self, prec: u32) -> Option<Self> {
        let hi = self.upper();
        if hi.is_negative() {
            return None;
        }
        let lo = {
            let l = self.lower();
            if l.is_negative() {
                Dyadic::zero()
            } else {
                l
            }
        };
        let (slo, _) = lo.sqrt_round(prec);
        let (shi, ehi) = hi.sqrt_round(prec);
        let upper = shi.add_exact(&ehi);
        // Enclose [slo, upper].
        let two = Dyadic::pow2(1);
        let (mid, err) = slo.add_exact(&upper).div_round(&two, prec);
        let (half_width, hwe) = upper.sub_exact(&slo).div_round(&two, RAD_BITS);
        let rad = half_width
            .add_exact(&hwe)
            .add_exact(&err)
            .round_up_mag(RAD_BITS);
        Some(RealBall { mid, rad })
    }

    /// Whether two enclosures overlap (necessary condition for equality).
    pub fn overlaps(&self, other: &RealBall) -> bool {
        let gap = self.mid.sub_exact(&other.mid).abs();
        let span = self.rad.add_exact(&other.rad);
        gap.cmp_exact(&span) != Ordering::Greater
    }

    /// Intersection of two intervals, when nonempty.
    pub fn intersect(&self, other: &RealBall, prec: u32) -> Option<RealBall> {
        let lo = max_dyadic(self.lower(), other.lower());
        let hi = min_dyadic(self.upper(), other.upper());
        if lo.cmp_exact(&hi) == Ordering::Greater {
            return None;
        }
        let two = Dyadic::pow2(1);
        let (mid, err) = lo.add_exact(&hi).div_round(&two, prec);
        let (hw, hwe) = hi.sub_exact(&lo).div_round(&two, RAD_BITS);
        Some(RealBall {
            mid,
            rad: hw.add_exact(&hwe).add_exact(&err).round_up_mag(RAD_BITS),
        })
    }

    /// Whether `other` lies inside this interval.
    pub fn encloses(&self, other: &RealBall) -> bool {
        self.lower().cmp_exact(&other.lower()) != Ordering::Greater
            && self.upper().cmp_exact(&other.upper()) != Ordering::Less
    }
}

fn max_dyadic(a: Dyadic, b: Dyadic) -> Dyadic {
    if a.cmp_exact(&b) == Ordering::Greater {
        a
    } else {
        b
    }
}

fn min_dyadic(a: Dyadic, b: Dyadic) -> Dyadic {
    if a.cmp_exact(&b) == Ordering::Less {
        a
    } else {
        b
    }
}
