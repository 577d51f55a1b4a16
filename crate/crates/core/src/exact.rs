//! Exact partial evaluation: Gaussian rationals and pi-linear forms.
//!
//! A surprising number of branch and zero decisions reduce to values of the
//! shape `a + b*pi` with `a, b` in Q(i): rationals, `i`, `log(-1) = i pi`,
//! `pi` itself, and the unit circle points `exp(i pi t)` for half-integer
//! `t`. Within this fragment equality and signs are decidable (pi is
//! transcendental, so `a + b*pi = 0` forces `a = b = 0`), which gives the
//! evaluator terminating branch-cut resolution and the zero-recognizer an
//! unconditional exact core.

use crate::expr::ElExpr;
use crate::num::{pi_dyadic, Dyadic, RealBall};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// An element of Q(i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn from_rational(r: BigRational) -> Self {
        GaussRational {
            re: r,
            im: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        GaussRational::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        GaussRational::from_rational(BigRational::one())
    }

    pub fn i() -> Self {
        GaussRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussRational {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn neg(&self) -> Self {
        GaussRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(GaussRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// Which fourth root of unity this is, if any: k with value = i^k.
    fn unit_power_of_i(&self) -> Option<u8> {
        let one = BigRational::one();
        if self.im.is_zero() {
            if self.re == one {
                return Some(0);
            }
            if self.re == -one.clone() {
                return Some(2);
            }
        } else if self.re.is_zero() {
            if self.im == one {
                return Some(1);
            }
            if self.im == -one {
                return Some(3);
            }
        }
        None
    }
}

/// Value `a + b*pi` with `a, b` in Q(i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiLinear {
    pub a: GaussRational,
    pub b: GaussRational,
}

impl PiLinear {
    pub fn constant(g: GaussRational) -> Self {
        PiLinear {
            a: g,
            b: GaussRational::zero(),
        }
    }

    pub fn pi_multiple(g: GaussRational) -> Self {
        PiLinear {
            a: GaussRational::zero(),
            b: g,
        }
    }

    /// Exact zero test; sound because pi is irrational.
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The value as a Gaussian rational, when it has no pi part.
    pub fn as_gauss(&self) -> Option<&GaussRational> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    /// Imaginary part as an exact `(c, d)` meaning `c + d*pi`.
    pub fn im_parts(&self) -> (BigRational, BigRational) {
        (self.a.im.clone(), self.b.im.clone())
    }

    pub fn re_parts(&self) -> (BigRational, BigRational) {
        (self.a.re.clone(), self.b.re.clone())
    }

    pub fn im_is_exactly_zero(&self) -> bool {
        self.a.im.is_zero() && self.b.im.is_zero()
    }

    /// Sign of the imaginary part (`-1, 0, 1`), decided exactly.
    pub fn im_sign(&self) -> i32 {
        let (c, d) = self.im_parts();
        real_pi_linear_sign(&c, &d)
    }

    pub fn re_sign(&self) -> i32 {
        let (c, d) = self.re_parts();
        real_pi_linear_sign(&c, &d)
    }
}

/// Sign of `c + d*pi` for rationals `c, d`, decided exactly. Zero only when
/// both vanish; otherwise pi's enclosure is refined until the sign shows.
pub fn real_pi_linear_sign(c: &BigRational, d: &BigRational) -> i32 {
    if d.is_zero() {
        return sign_of(c);
    }
    if c.is_zero() {
        return sign_of(d);
    }
    // sign(c + d pi) = sign(d) * sign(pi - (-c/d))
    let target = -(c / d);
    let cmp = compare_pi_to_rational(&target);
    sign_of(d)
        * match cmp {
            Ordering::Greater => 1,
            Ordering::Less => -1,
            Ordering::Equal => unreachable!("pi is irrational"),
        }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Compare pi with a rational exactly (never Equal).
pub fn compare_pi_to_rational(r: &BigRational) -> Ordering {
    let mut prec = 64;
    loop {
        let (mid, err) = pi_dyadic(prec);
        let ball = RealBall::new(mid, err);
        let (rd, rerr) = Dyadic::from_ratio(r.numer(), r.denom(), prec);
        let rball = RealBall::new(rd, rerr);
        if ball.lower().cmp_exact(&rball.upper()) == Ordering::Greater {
            return Ordering::Greater;
        }
        if ball.upper().cmp_exact(&rball.lower()) == Ordering::Less {
            return Ordering::Less;
        }
        prec *= 2;
        assert!(prec <= 1 << 20, "pi comparison failed to separate");
    }
}

/// Try to evaluate an expression into the `a + b*pi` fragment.
///
/// Returns `None` when the value leaves the fragment (or when a subterm is
/// undefined, e.g. `inv(0)` — no claims are made there).
pub fn pi_linear(e: &ElExpr) -> Option<PiLinear> {
    match e {
        ElExpr::Rational(r) => Some(PiLinear::constant(GaussRational::from_rational(r.clone()))),
        ElExpr::Add(x, y) => {
            let px = pi_linear(x)?;
            let py = pi_linear(y)?;
            Some(PiLinear {
                a: px.a.add(&py.a),
                b: px.b.add(&py.b),
            })
        }
        ElExpr::Neg(x) => {
            let p = pi_linear(x)?;
            Some(PiLinear {
                a: p.a.neg(),
                b: p.b.neg(),
            })
        }
        ElExpr::Mul(x, y) => {
            let px = pi_linear(x)?;
            let py = pi_linear(y)?;
            // (a1 + b1 pi)(a2 + b2 pi): a pi^2 term is out of the fragment.
            if px.b.is_zero() {
                Some(PiLinear {
                    a: px.a.mul(&py.a),
                    b: px.a.mul(&py.b),
                })
            } else if py.b.is_zero() {
                Some(PiLinear {
                    a: px.a.mul(&py.a),
                    b: px.b.mul(&py.a),
                })
            } else {
                None
            }
        }
        ElExpr::Inv(x) => {
            let p = pi_linear(x)?;
            // Only Gaussian rationals invert inside the fragment.
            let g = p.as_gauss()?;
            Some(PiLinear::constant(g.inv()?))
        }
        ElExpr::Exp(x) => {
            let p = pi_linear(x)?;
            // exp(a + b pi) stays in the fragment only for a = 0 and
            // b = i t with 2t integral: the value is i^(2t).
            if !p.a.is_zero() {
                return None;
            }
            if !p.b.re.is_zero() {
                return None;
            }
            let t2 = &p.b.im * BigRational::from_integer(BigInt::from(2));
            if !t2.denom().is_one() {
                return None;
            }
            let k = t2.numer().mod_floor(&BigInt::from(4));
            let k8: u8 = k.try_into().unwrap();
            Some(PiLinear::constant(unit_i_power(k8)))
        }
        ElExpr::Log(x) => {
            let p = pi_linear(x)?;
            let g = p.as_gauss()?;
            // log of a fourth root of unity: log(i^k) = i pi k'/2 with the
            // principal k' in {0, 1, 2(->pi), -1}.
            let k = g.unit_power_of_i()?;
            let half = BigRational::new(BigInt::from(1), BigInt::from(2));
            let coeff = match k {
                0 => return Some(PiLinear::constant(GaussRational::zero())),
                1 => half,
                2 => BigRational::one(),
                3 => -half,
                _ => unreachable!(),
            };
            Some(PiLinear::pi_multiple(GaussRational {
                re: BigRational::zero(),
                im: coeff,
            }))
        }
    }
}

fn unit_i_power(k: u8) -> GaussRational {
    match k {
        0 => GaussRational::one(),
        1 => GaussRational::i(),
        2 => GaussRational::one().neg(),
        3 => GaussRational::i().neg(),
        _ => unreachable!(),
    }
}

/// Branch-correction integer for `log(exp(x))`: the unique `k` such that
/// `Im(x) - 2 pi k` lies in `(-pi, pi]`, for `Im(x) = c + d pi` exact.
pub fn branch_shift(c: &BigRational, d: &BigRational) -> BigInt {
    if c.is_zero() {
        // Need d - 2k in (-1, 1]: k = ceil((d - 1) / 2).
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        return ceil_rational(&((d - BigRational::one()) * half));
    }
    // Never exactly on a boundary (c != 0): find k with
    // (2k - 1) pi < c + d pi < (2k + 1) pi via exact sign tests.
    let approx = (rational_f64(c) + rational_f64(d) * std::f64::consts::PI)
        / (2.0 * std::f64::consts::PI);
    let mut k = BigInt::from(approx.round() as i64);
    loop {
        // sign of c + (d - (2k+1)) pi must be negative,
        // sign of c + (d - (2k-1)) pi must be positive.
        let two_k = BigRational::from_integer(&k * BigInt::from(2));
        let upper = real_pi_linear_sign(c, &(d - (&two_k + BigRational::one())));
        let lower = real_pi_linear_sign(c, &(d - (&two_k - BigRational::one())));
        if upper < 0 && lower > 0 {
            return k;
        }
        if upper >= 0 {
            k += 1;
        } else {
            k -= 1;
        }
    }
}

fn ceil_rational(r: &BigRational) -> BigInt {
    use num_integer::Integer;
    let (q, rem) = r.numer().div_rem(r.denom());
    if rem.is_zero() || r.is_negative() {
        q
    } else {
        q + BigInt::one()
    }
}

fn rational_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(0.0)
}

use num_integer::Integer;
