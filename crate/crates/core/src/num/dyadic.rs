//! Arbitrary-precision dyadic (binary) floating-point numbers.
//!
//! A [`Dyadic`] is `man * 2^exp` with a `BigInt` mantissa and an `i64`
//! exponent, normalized so the mantissa is odd (or zero). All rounding
//! operations report an error bound alongside the rounded value, so callers
//! can maintain rigorous enclosures.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Exact dyadic rational `man * 2^exp`, mantissa odd unless zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { man, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            man: BigInt::one(),
            exp: 0,
        }
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            man: BigInt::one(),
            exp: k,
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz;
            self.exp = self
                .exp
                .checked_add(tz as i64)
                .expect("dyadic exponent overflow");
        }
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.sign() == Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.man.sign() == Sign::Plus
    }

    /// Sign as -1 / 0 / +1.
    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Number of significant bits of the mantissa.
    pub fn man_bits(&self) -> u64 {
        self.man.magnitude().bits()
    }

    /// Exclusive upper bound `t` with `2^(t-1) <= |x| < 2^t`; `None` for zero.
    pub fn top(&self) -> Option<i64> {
        if self.man.is_zero() {
            return None;
        }
        Some(
            (self.man_bits() as i64)
                .checked_add(self.exp)
                .expect("dyadic exponent overflow"),
        )
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            man: -self.man.clone(),
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.man.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            man: self.man.clone(),
            exp: self.exp.checked_add(k).expect("dyadic exponent overflow"),
        }
    }

    /// Exact sum. Mantissa size grows with the exponent gap; use
    /// [`Dyadic::add_prec`] when the gap is unbounded.
    pub fn add_exact(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (lo, hi) = if self.exp <= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (hi.exp - lo.exp) as u64;
        let man = (hi.man.clone() << shift) + &lo.man;
        Dyadic::new(man, lo.exp)
    }

    pub fn sub_exact(&self, other: &Dyadic) -> Self {
        self.add_exact(&other.neg())
    }

    /// Exact product.
    pub fn mul_exact(&self, other: &Dyadic) -> Self {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            man: &self.man * &other.man,
            exp: self
                .exp
                .checked_add(other.exp)
                .expect("dyadic exponent overflow"),
        }
    }

    /// Round to at most `prec` mantissa bits toward zero.
    /// Returns `(rounded, err)` with `|self - rounded| <= err`.
    pub fn round_to(&self, prec: u32) -> (Dyadic, Dyadic) {
        let bits = self.man_bits();
        if bits <= prec as u64 {
            return (self.clone(), Dyadic::zero());
        }
        let drop = bits - prec as u64;
        let ulp_exp = self
            .exp
            .checked_add(drop as i64)
            .expect("dyadic exponent overflow");
        // Truncate the magnitude so the error is one final-place unit.
        let mag = self.man.magnitude() >> drop;
        let man = BigInt::from_biguint(self.man.sign(), mag);
        (Dyadic::new(man, ulp_exp), Dyadic::pow2(ulp_exp))
    }

    /// Round up in magnitude to at most `prec` mantissa bits. The result `r`
    /// satisfies `|r| >= |self|` and keeps the sign of `self`.
    pub fn round_up_mag(&self, prec: u32) -> Dyadic {
        let bits = self.man_bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let drop = bits - prec as u64;
        let ulp_exp = self
            .exp
            .checked_add(drop as i64)
            .expect("dyadic exponent overflow");
        let mag = (self.man.magnitude() >> drop) + 1u32;
        let man = BigInt::from_biguint(self.man.sign(), mag);
        Dyadic::new(man, ulp_exp)
    }

    /// Sum rounded to `prec` bits, tolerating arbitrary exponent gaps.
    /// Returns `(result, err)` with `|a + b - result| <= err`.
    pub fn add_prec(&self, other: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
        if self.is_zero() {
            return other.round_to(prec);
        }
        if other.is_zero() {
            return self.round_to(prec);
        }
        let ta = self.top().unwrap();
        let tb = other.top().unwrap();
        let gap_limit = prec as i64 + 4;
        if ta - tb > gap_limit {
            let (r, e) = self.round_to(prec);
            return (r, e.add_exact(&Dyadic::pow2(tb)));
        }
        if tb - ta > gap_limit {
            let (r, e) = other.round_to(prec);
            return (r, e.add_exact(&Dyadic::pow2(ta)));
        }
        self.add_exact(other).round_to(prec)
    }

    /// Product rounded to `prec` bits; `(result, err)`.
    pub fn mul_prec(&self, other: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
        self.mul_exact(other).round_to(prec)
    }

    /// Quotient `self / other` rounded toward zero with `other != 0`.
    /// Returns `(q, err)` with `|self/other - q| <= err`.
    pub fn div_round(&self, other: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let bits_a = self.man_bits() as i64;
        let bits_b = other.man_bits() as i64;
        let s = prec as i64 + 2 + (bits_b - bits_a).max(0);
        let num = self.man.magnitude() << (s as u64);
        let q = num / other.man.magnitude();
        let sign = if self.is_negative() != other.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        };
        let e = self
            .exp
            .checked_sub(other.exp)
            .and_then(|v| v.checked_sub(s))
            .expect("dyadic exponent overflow");
        let raw = Dyadic::new(BigInt::from_biguint(sign, q), e);
        let (r, re) = raw.round_to(prec);
        (r, re.add_exact(&Dyadic::pow2(e)))
    }

    /// Floor square root of a nonnegative dyadic; `(r, err)` with
    /// `r <= sqrt(self) <= r + err`.
    pub fn sqrt_round(&self, prec: u32) -> (Dyadic, Dyadic) {
        assert!(!self.is_negative(), "dyadic sqrt of negative");
        if self.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let bits = self.man_bits() as i64;
        let mut k = (2 * (prec as i64 + 2) - bits).max(0);
        if (self.exp - k).rem_euclid(2) != 0 {
            k += 1;
        }
        let m = self.man.magnitude() << (k as u64);
        let s = m.sqrt();
        let t = (self.exp - k) / 2;
        (
            Dyadic::new(BigInt::from_biguint(Sign::Plus, s), t),
            Dyadic::pow2(t),
        )
    }

    /// Rational `p/q` rounded to `prec` bits; `(r, err)`.
    pub fn from_ratio(p: &BigInt, q: &BigInt, prec: u32) -> (Dyadic, Dyadic) {
        Dyadic::from_bigint(p.clone()).div_round(&Dyadic::from_bigint(q.clone()), prec)
    }

    /// Lossy conversion for heuristics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let top = self.top().unwrap();
        if top > 1020 {
            return if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        if top < -1020 {
            return 0.0;
        }
        // Take the top 53 bits of the mantissa.
        let bits = self.man_bits();
        let (m, e) = if bits > 53 {
            let drop = bits - 53;
            let mag = self.man.magnitude() >> drop;
            (
                mag.to_u64_digits().first().copied().unwrap_or(0),
                self.exp + drop as i64,
            )
        } else {
            (
                self.man.magnitude().to_u64_digits().first().copied().unwrap_or(0),
                self.exp,
            )
        };
        let v = (m as f64) * 2f64.powi(e as i32);
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Exact comparison.
    pub fn cmp_exact(&self, other: &Dyadic) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same nonzero sign: compare magnitudes via top bounds first so huge
        // exponent gaps never materialize a shifted mantissa.
        let ta = self.top().unwrap();
        let tb = other.top().unwrap();
        if ta != tb {
            let mag = ta.cmp(&tb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let diff = self.sub_exact(other);
        diff.signum().cmp(&0)
    }

    /// Scientific-notation decimal rendering with `sig` significant digits,
    /// correct to within one unit in the last printed digit.
    pub fn to_decimal(&self, sig: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let sig = sig.max(1);
        // Decimal exponent estimate from the binary top.
        let top = self.top().unwrap();
        // floor(log10 |x|) is within 1 of top * log10(2).
        let mut e10 = ((top as f64 - 0.5) * std::f64::consts::LOG10_2).floor() as i64;
        // digits = floor(|x| * 10^(sig-1-e10)), retried if the estimate is off.
        loop {
            let p = sig as i64 - 1 - e10;
            let n = scaled_decimal(self.man.magnitude(), self.exp, p);
            let s = n.to_string();
            if s.len() > sig {
                e10 += (s.len() - sig) as i64;
                continue;
            }
            if s.len() < sig {
                e10 -= 1;
                continue;
            }
            let mantissa = if sig == 1 {
                s.clone()
            } else {
                format!("{}.{}", &s[..1], &s[1..sig])
            };
            let sign = if self.is_negative() { "-" } else { "" };
            return format!("{}{}e{}", sign, mantissa, e10);
        }
    }
}

/// floor(mag * 2^exp * 10^p) for nonnegative `mag`.
fn scaled_decimal(mag: &num_bigint::BigUint, exp: i64, p: i64) -> num_bigint::BigUint {
    use num_bigint::BigUint;
    let mut num = mag.clone();
    let mut den = BigUint::one();
    if exp >= 0 {
        num <<= exp as u64;
    } else {
        den <<= (-exp) as u64;
    }
    if p >= 0 {
        num *= BigUint::from(10u32).pow(p as u32);
    } else {
        den *= BigUint::from(10u32).pow((-p) as u32);
    }
    num.div_floor(&den)
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({} * 2^{} ~ {})", self.man, self.exp, self.to_f64())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_exact(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}
