//! EL expressions: rationals closed under field operations, exp, and
//! principal-branch log.
//!
//! The AST has exactly seven node kinds. Subtraction and division exist only
//! in the surface syntax and parse to `Neg`/`Inv`. Construction never
//! simplifies: `exp(log(x))` stays as written, so parsing and printing stay
//! bijective. Simplification is the zero-recognizer's job.

mod parse;
mod print;

pub use parse::{parse, ParseError};
pub use print::render;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

/// Shared expression handle. Expressions are immutable once built.
pub type ExprRef = Arc<ElExpr>;

/// An EL expression.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ElExpr {
    /// Rational literal in lowest terms, positive denominator.
    Rational(BigRational),
    Add(ExprRef, ExprRef),
    Mul(ExprRef, ExprRef),
    Neg(ExprRef),
    Inv(ExprRef),
    Exp(ExprRef),
    Log(ExprRef),
}

/// Structural metadata for an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExprMeta {
    /// Structural level bound: a coarse upper bound on the construction
    /// stage, counting the literal 0 as stage zero.
    pub depth: u64,
    pub node_count: u64,
}

impl ElExpr {
    pub fn rational(r: BigRational) -> ExprRef {
        Arc::new(ElExpr::Rational(r))
    }

    pub fn from_int(v: i64) -> ExprRef {
        ElExpr::rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(p: i64, q: i64) -> ExprRef {
        assert!(q != 0, "zero denominator");
        ElExpr::rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn add(a: ExprRef, b: ExprRef) -> ExprRef {
        Arc::new(ElExpr::Add(a, b))
    }

    pub fn mul(a: ExprRef, b: ExprRef) -> ExprRef {
        Arc::new(ElExpr::Mul(a, b))
    }

    pub fn neg(a: ExprRef) -> ExprRef {
        Arc::new(ElExpr::Neg(a))
    }

    pub fn inv(a: ExprRef) -> ExprRef {
        Arc::new(ElExpr::Inv(a))
    }

    pub fn exp(a: ExprRef) -> ExprRef {
        Arc::new(ElExpr::Exp(a))
    }

    pub fn log(a: ExprRef) -> ExprRef {
        Arc::new(ElExpr::Log(a))
    }

    /// `a - b` as `Add(a, Neg(b))`.
    pub fn sub(a: ExprRef, b: ExprRef) -> ExprRef {
        ElExpr::add(a, ElExpr::neg(b))
    }

    /// `a / b` as `Mul(a, Inv(b))`.
    pub fn div(a: ExprRef, b: ExprRef) -> ExprRef {
        ElExpr::mul(a, ElExpr::inv(b))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ElExpr::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn meta(&self) -> ExprMeta {
        match self {
            ElExpr::Rational(r) => ExprMeta {
                depth: if r.is_zero() { 0 } else { 1 },
                node_count: 1,
            },
            ElExpr::Add(a, b) | ElExpr::Mul(a, b) => {
                let (ma, mb) = (a.meta(), b.meta());
                ExprMeta {
                    depth: ma.depth.max(mb.depth) + 1,
                    node_count: ma.node_count + mb.node_count + 1,
                }
            }
            ElExpr::Neg(a) | ElExpr::Inv(a) | ElExpr::Exp(a) | ElExpr::Log(a) => {
                let m = a.meta();
                ExprMeta {
                    depth: m.depth + 1,
                    node_count: m.node_count + 1,
                }
            }
        }
    }

    /// Visit every node; the closure sees each subexpression once.
    pub fn visit(&self, f: &mut impl FnMut(&ElExpr)) {
        f(self);
        match self {
            ElExpr::Rational(_) => {}
            ElExpr::Add(a, b) | ElExpr::Mul(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            ElExpr::Neg(a) | ElExpr::Inv(a) | ElExpr::Exp(a) | ElExpr::Log(a) => a.visit(f),
        }
    }
}

/// The three constants the kernel provides by formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinName {
    E,
    I,
    Pi,
}

impl BuiltinName {
    pub fn from_str(s: &str) -> Option<Self> {
        match s {
            "e" => Some(BuiltinName::E),
            "i" => Some(BuiltinName::I),
            "pi" => Some(BuiltinName::Pi),
            _ => None,
        }
    }
}

/// `e = exp(exp(0))`, `i = exp(log(-1)/2)`, `pi = -i log(-1)`.
pub fn builtin(name: BuiltinName) -> ExprRef {
    let minus_one = ElExpr::neg(ElExpr::from_int(1));
    match name {
        BuiltinName::E => ElExpr::exp(ElExpr::exp(ElExpr::from_int(0))),
        BuiltinName::I => ElExpr::exp(ElExpr::mul(
            ElExpr::log(minus_one),
            ElExpr::inv(ElExpr::from_int(2)),
        )),
        BuiltinName::Pi => ElExpr::mul(
            ElExpr::neg(builtin(BuiltinName::I)),
            ElExpr::log(minus_one),
        ),
    }
}

/// Derived functions expanded eagerly into the core AST.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derived {
    /// `x^(p/q) = exp((p/q) log x)`
    RationalPow(BigRational),
    /// `exp((log x + k 2 pi i) / n)`, the k-th branch of the n-th root.
    NthRootBranch { n: u32, k: u32 },
    Sin,
    Cos,
    Tan,
    Tanh,
    Arccos,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DerivedError {
    #[error("root branch index {k} out of range for degree {n}")]
    BranchOutOfRange { n: u32, k: u32 },
    #[error("root degree must be positive")]
    ZeroDegree,
}

/// Expand a derived function applied to `x`.
pub fn derived(d: Derived, x: ExprRef) -> Result<ExprRef, DerivedError> {
    let i = || builtin(BuiltinName::I);
    Ok(match d {
        Derived::RationalPow(r) => {
            ElExpr::exp(ElExpr::mul(ElExpr::rational(r), ElExpr::log(x)))
        }
        Derived::NthRootBranch { n, k } => {
            if n == 0 {
                return Err(DerivedError::ZeroDegree);
            }
            if k >= n {
                return Err(DerivedError::BranchOutOfRange { n, k });
            }
            // (log x + k * 2 pi i) / n
            let offset = ElExpr::mul(
                ElExpr::from_int(2 * k as i64),
                ElExpr::mul(builtin(BuiltinName::Pi), i()),
            );
            ElExpr::exp(ElExpr::mul(
                ElExpr::add(ElExpr::log(x), offset),
                ElExpr::inv(ElExpr::from_int(n as i64)),
            ))
        }
        Derived::Sin => {
            // (exp(ix) - exp(-ix)) / (2i)
            let ix = ElExpr::mul(i(), x);
            let num = ElExpr::sub(ElExpr::exp(ix.clone()), ElExpr::exp(ElExpr::neg(ix)));
            ElExpr::div(num, ElExpr::mul(ElExpr::from_int(2), i()))
        }
        Derived::Cos => {
            // (exp(ix) + exp(-ix)) / 2
            let ix = ElExpr::mul(i(), x);
            let num = ElExpr::add(ElExpr::exp(ix.clone()), ElExpr::exp(ElExpr::neg(ix)));
            ElExpr::div(num, ElExpr::from_int(2))
        }
        Derived::Tan => {
            let s = derived(Derived::Sin, x.clone())?;
            let c = derived(Derived::Cos, x)?;
            ElExpr::mul(s, ElExpr::inv(c))
        }
        Derived::Tanh => {
            // (exp(x) - exp(-x)) / (exp(x) + exp(-x))
            let ex = ElExpr::exp(x.clone());
            let emx = ElExpr::exp(ElExpr::neg(x));
            ElExpr::div(
                ElExpr::sub(ex.clone(), emx.clone()),
                ElExpr::add(ex, emx),
            )
        }
        Derived::Arccos => {
            // -i log(x + exp(log(x^2 - 1)/2))
            let x2m1 = ElExpr::sub(ElExpr::mul(x.clone(), x.clone()), ElExpr::from_int(1));
            let root = ElExpr::exp(ElExpr::mul(
                ElExpr::log(x2m1),
                ElExpr::inv(ElExpr::from_int(2)),
            ));
            ElExpr::mul(ElExpr::neg(i()), ElExpr::log(ElExpr::add(x, root)))
        }
    })
}

/// Check the rational-literal invariant everywhere in a tree.
pub fn literals_normalized(e: &ElExpr) -> bool {
    let mut ok = true;
    e.visit(&mut |n| {
        if let ElExpr::Rational(r) = n {
            if !r.denom().is_positive() {
                ok = false;
            }
            let g = num_integer::gcd(r.numer().clone(), r.denom().clone());
            if !g.is_one() && !r.numer().is_zero() {
                ok = false;
            }
        }
    });
    ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_shapes() {
        // e = Exp(Exp(0))
        let e = builtin(BuiltinName::E);
        match &*e {
            ElExpr::Exp(inner) => match &**inner {
                ElExpr::Exp(z) => assert!(z.as_rational().unwrap().is_zero()),
                _ => panic!("e inner shape"),
            },
            _ => panic!("e outer shape"),
        }
        // i = Exp(Mul(Log(Neg(1)), Inv(2)))
        let i = builtin(BuiltinName::I);
        let expected = ElExpr::exp(ElExpr::mul(
            ElExpr::log(ElExpr::neg(ElExpr::from_int(1))),
            ElExpr::inv(ElExpr::from_int(2)),
        ));
        assert_eq!(i, expected);
        // pi = Mul(Neg(i), Log(Neg(1)))
        let pi = builtin(BuiltinName::Pi);
        let expected = ElExpr::mul(
            ElExpr::neg(builtin(BuiltinName::I)),
            ElExpr::log(ElExpr::neg(ElExpr::from_int(1))),
        );
        assert_eq!(pi, expected);
    }

    #[test]
    fn derived_rational_pow_shape() {
        let x = ElExpr::from_int(5);
        let p = derived(
            Derived::RationalPow(BigRational::new(BigInt::from(2), BigInt::from(3))),
            x.clone(),
        )
        .unwrap();
        let expected = ElExpr::exp(ElExpr::mul(ElExpr::from_ratio(2, 3), ElExpr::log(x)));
        assert_eq!(p, expected);
    }

    #[test]
    fn root_branch_range_checked() {
        let x = ElExpr::from_int(1);
        assert!(derived(Derived::NthRootBranch { n: 3, k: 3 }, x.clone()).is_err());
        assert!(derived(Derived::NthRootBranch { n: 3, k: 2 }, x).is_ok());
    }

    #[test]
    fn meta_counts() {
        let e = builtin(BuiltinName::E);
        let m = e.meta();
        assert_eq!(m.node_count, 3);
        assert_eq!(m.depth, 2);
        assert!(m.depth <= m.node_count);
    }

    #[test]
    fn only_seven_kinds() {
        // Exhaustive visitor: the match below fails to compile if a variant
        // is added, and counts every node it sees.
        let mut kinds = [0usize; 7];
        builtin(BuiltinName::Pi).visit(&mut |n| {
            let idx = match n {
                ElExpr::Rational(_) => 0,
                ElExpr::Add(_, _) => 1,
                ElExpr::Mul(_, _) => 2,
                ElExpr::Neg(_) => 3,
                ElExpr::Inv(_) => 4,
                ElExpr::Exp(_) => 5,
                ElExpr::Log(_) => 6,
            };
            kinds[idx] += 1;
        });
        assert_eq!(kinds.iter().sum::<usize>(), builtin(BuiltinName::Pi).meta().node_count as usize);
    }
}
