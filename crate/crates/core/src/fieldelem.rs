//! Sparse multivariate rational functions with exact rational coefficients.
//!
//! These represent elements of the tower fields: formal rational functions
//! in the generators and their exponentials. Only evaluation, arithmetic,
//! and substitution are needed — no canonical form exists over a field with
//! undecided relations, so none is attempted. A light normalization (monic
//! denominator) keeps coefficient growth in check.

use crate::num::ComplexBall;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Product of variables with positive exponents, sorted by variable index.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.0
    }
}

/// Sparse multivariate polynomial over Q.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MPoly { terms }
    }

    pub fn var(v: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), BigRational::one());
        MPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn as_constant(&self) -> Option<&BigRational> {
        if self.terms.is_empty() {
            return None;
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::one()) {
                return Some(c);
            }
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitute rational functions for the variables.
    pub fn subst(&self, image: &impl Fn(u32) -> RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (m, c) in &self.terms {
            let mut term = RatFunc::constant(c.clone());
            for &(v, e) in m.exponents() {
                let img = image(v).pow_i64(e as i64);
                term = term.mul(&img);
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Evaluate under an assignment of enclosures to the variables.
    pub fn eval(&self, value: &impl Fn(u32) -> ComplexBall, prec: u32) -> ComplexBall {
        let mut acc = ComplexBall::zero();
        for (m, c) in &self.terms {
            let mut term = ComplexBall::from_ratio(c.numer(), c.denom(), prec);
            for &(v, e) in m.exponents() {
                // positive exponents only; pow_i64 cannot fail here
                let p = value(v).pow_i64(e as i64, prec).expect("positive power");
                term = term.mul(&p, prec);
            }
            acc = acc.add(&term, prec);
        }
        acc
    }

    /// Largest variable index + 1.
    pub fn var_bound(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.exponents().iter().map(|&(v, _)| v + 1))
            .max()
            .unwrap_or(0)
    }

    pub fn display<'a>(&'a self, namer: &'a dyn Fn(u32) -> String) -> MPolyDisplay<'a> {
        MPolyDisplay { poly: self, namer }
    }
}

pub struct MPolyDisplay<'a> {
    poly: &'a MPoly,
    namer: &'a dyn Fn(u32) -> String,
}

impl fmt::Display for MPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.poly.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{}", c)?;
            } else {
                if !c.is_one() {
                    write!(f, "{}*", c)?;
                }
                let mut firstv = true;
                for &(v, e) in m.exponents() {
                    if !firstv {
                        write!(f, "*")?;
                    }
                    firstv = false;
                    if e == 1 {
                        write!(f, "{}", (self.namer)(v))?;
                    } else {
                        write!(f, "{}^{}", (self.namer)(v), e)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Formal quotient of multivariate polynomials; denominator not the zero
/// polynomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    /// Build with a monic-denominator normalization.
    pub fn new(num: MPoly, den: MPoly) -> RatFunc {
        assert!(!den.is_zero(), "zero denominator polynomial");
        if num.is_zero() {
            return RatFunc {
                num: MPoly::zero(),
                den: MPoly::one(),
            };
        }
        // Scale so the denominator's leading coefficient is 1.
        let lead = den.terms.values().next_back().unwrap().clone();
        if lead.is_one() {
            RatFunc { num, den }
        } else {
            let inv = BigRational::one() / lead;
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> RatFunc {
        RatFunc::new(MPoly::zero(), MPoly::one())
    }

    pub fn one() -> RatFunc {
        RatFunc::new(MPoly::one(), MPoly::one())
    }

    pub fn constant(c: BigRational) -> RatFunc {
        RatFunc::new(MPoly::constant(c), MPoly::one())
    }

    pub fn var(v: u32) -> RatFunc {
        RatFunc::new(MPoly::var(v), MPoly::one())
    }

    pub fn from_poly(p: MPoly) -> RatFunc {
        RatFunc::new(p, MPoly::one())
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.num.is_zero() && self.den.is_one() {
            return Some(BigRational::zero());
        }
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return RatFunc::new(self.num.add(&other.num), self.den.clone());
        }
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// Formal inverse; `None` when the numerator is the zero polynomial.
    pub fn inv(&self) -> Option<RatFunc> {
        if self.num.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Option<RatFunc> {
        Some(self.mul(&other.inv()?))
    }

    pub fn pow_i64(&self, e: i64) -> RatFunc {
        if e == 0 {
            return RatFunc::one();
        }
        let p = self.num.pow(e.unsigned_abs() as u32);
        let q = self.den.pow(e.unsigned_abs() as u32);
        if e > 0 {
            RatFunc::new(p, q)
        } else {
            assert!(!p.is_zero(), "negative power of zero");
            RatFunc::new(q, p)
        }
    }

    pub fn subst(&self, image: &impl Fn(u32) -> RatFunc) -> RatFunc {
        let n = self.num.subst(image);
        let d = self.den.subst(image);
        n.div(&d).expect("substituted denominator vanished formally")
    }

    /// Evaluate to an enclosure; `None` when the denominator's enclosure
    /// does not exclude zero at this precision.
    pub fn eval(&self, value: &impl Fn(u32) -> ComplexBall, prec: u32) -> Option<ComplexBall> {
        let n = self.num.eval(value, prec);
        let d = self.den.eval(value, prec);
        n.div(&d, prec)
    }

    pub fn var_bound(&self) -> u32 {
        self.num.var_bound().max(self.den.var_bound())
    }

    pub fn display<'a>(&'a self, namer: &'a dyn Fn(u32) -> String) -> RatFuncDisplay<'a> {
        RatFuncDisplay { f: self, namer }
    }
}

pub struct RatFuncDisplay<'a> {
    f: &'a RatFunc,
    namer: &'a dyn Fn(u32) -> String,
}

impl fmt::Display for RatFuncDisplay<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.den.is_one() {
            write!(out, "{}", self.f.num.display(self.namer))
        } else {
            write!(
                out,
                "({}) / ({})",
                self.f.num.display(self.namer),
                self.f.den.display(self.namer)
            )
        }
    }
}

/// Variable naming for tower fields: `X_j` is the j-th generator and `Y_j`
/// its exponential, 1-based.
pub fn tower_var_x(j: usize) -> u32 {
    (j as u32) * 2
}

pub fn tower_var_y(j: usize) -> u32 {
    (j as u32) * 2 + 1
}

pub fn tower_namer(v: u32) -> String {
    if v % 2 == 0 {
        format!("X_{}", v / 2 + 1)
    } else {
        format!("Y_{}", v / 2 + 1)
    }
}
