//! Deterministic expression rendering, inverse to the parser.
//!
//! `parse(render(e)) == e` structurally for every tree whose rational
//! literals are nonnegative (a negative literal prints with a leading `-`,
//! which reparses as `Neg` of the positive literal — same value, one
//! canonical spelling).

use super::ElExpr;
use num_traits::One;

pub fn render(e: &ElExpr) -> String {
    let mut out = String::new();
    write_expr(e, Ctx::Root, &mut out);
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    /// Top level or inside delimiters: no parens needed for any operator.
    Root,
    /// Right operand of `+`/`-`: parenthesize additive nodes.
    AddRight,
    /// Operand of `*`: parenthesize additive nodes and right-nested `*`.
    MulLeft,
    MulRight,
    /// Denominator of `/`: parenthesize everything non-atomic.
    Denominator,
}

fn is_additive(e: &ElExpr) -> bool {
    matches!(e, ElExpr::Add(_, _))
}

fn is_multiplicative(e: &ElExpr) -> bool {
    matches!(e, ElExpr::Mul(_, _))
}

fn write_expr(e: &ElExpr, ctx: Ctx, out: &mut String) {
    let parens = match ctx {
        Ctx::Root => false,
        Ctx::AddRight => is_additive(e),
        Ctx::MulLeft => is_additive(e),
        Ctx::MulRight => is_additive(e) || is_multiplicative(e),
        Ctx::Denominator => is_additive(e) || is_multiplicative(e),
    };
    if parens {
        out.push('(');
        write_expr(e, Ctx::Root, out);
        out.push(')');
        return;
    }
    match e {
        ElExpr::Rational(r) => {
            if r.denom().is_one() {
                out.push_str(&r.numer().to_string());
            } else {
                out.push_str(&format!("{}/{}", r.numer(), r.denom()));
            }
        }
        ElExpr::Add(a, b) => {
            write_expr(a, Ctx::Root, out);
            if let ElExpr::Neg(c) = &**b {
                out.push_str(" - ");
                write_expr(c, Ctx::AddRight, out);
            } else {
                out.push_str(" + ");
                write_expr(b, Ctx::AddRight, out);
            }
        }
        ElExpr::Mul(a, b) => {
            if let ElExpr::Inv(c) = &**b {
                // Prefer `a / c`, but an integer tail on `a` would fuse with
                // an integer `c` into a rational literal; fall back then.
                let mut lhs = String::new();
                write_expr(a, Ctx::MulLeft, &mut lhs);
                if lhs.ends_with(|ch: char| ch.is_ascii_digit()) {
                    out.push_str(&lhs);
                    out.push_str(" * inv(");
                    write_expr(c, Ctx::Root, out);
                    out.push(')');
                } else {
                    out.push_str(&lhs);
                    out.push('/');
                    write_expr(c, Ctx::Denominator, out);
                }
            } else {
                write_expr(a, Ctx::MulLeft, out);
                out.push_str(" * ");
                write_expr(b, Ctx::MulRight, out);
            }
        }
        ElExpr::Neg(a) => {
            out.push_str("-(");
            write_expr(a, Ctx::Root, out);
            out.push(')');
        }
        ElExpr::Inv(a) => {
            out.push_str("inv(");
            write_expr(a, Ctx::Root, out);
            out.push(')');
        }
        ElExpr::Exp(a) => {
            out.push_str("exp(");
            write_expr(a, Ctx::Root, out);
            out.push(')');
        }
        ElExpr::Log(a) => {
            out.push_str("log(");
            write_expr(a, Ctx::Root, out);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse, ElExpr};
    use super::*;

    fn roundtrip(e: &crate::expr::ExprRef) {
        let text = render(e);
        let back = parse(&text).unwrap_or_else(|err| panic!("reparse {:?}: {}", text, err));
        assert_eq!(&back, e, "render was {:?}", text);
    }

    #[test]
    fn spec_renderings() {
        assert_eq!(render(&ElExpr::exp(ElExpr::from_int(0))), "exp(0)");
        assert_eq!(render(&ElExpr::neg(ElExpr::from_ratio(1, 2))), "-(1/2)");
        let gamma = parse("4 + log(1 + exp(log(2)/3))").unwrap();
        assert_eq!(render(&gamma), "4 + log(1 + exp(log(2)/3))");
    }

    #[test]
    fn division_fallback_blocks_literal_fusion() {
        // Mul(2, Inv(3)) must not print as "2/3"
        let e = ElExpr::mul(ElExpr::from_int(2), ElExpr::inv(ElExpr::from_int(3)));
        assert_eq!(render(&e), "2 * inv(3)");
        roundtrip(&e);
    }

    #[test]
    fn nested_shapes_roundtrip() {
        for text in [
            "1 + 2 + 3",
            "1 - 2 - 3",
            "2 * inv(3) * 4",
            "(1 + 2) * 3",
            "exp(log(2)/3)",
            "-(1) * -(2)",
            "inv(inv(5))",
            "log(exp(1/2))",
            "1/2 + 3/4",
            "sin(1)",
            "pi * i",
        ] {
            let e = parse(text).unwrap();
            roundtrip(&e);
        }
    }

    #[test]
    fn right_nested_operations_parenthesize() {
        let e = ElExpr::add(
            ElExpr::from_int(1),
            ElExpr::add(ElExpr::from_int(2), ElExpr::from_int(3)),
        );
        assert_eq!(render(&e), "1 + (2 + 3)");
        roundtrip(&e);
        let m = ElExpr::mul(
            ElExpr::from_int(2),
            ElExpr::mul(ElExpr::from_int(3), ElExpr::from_int(5)),
        );
        assert_eq!(render(&m), "2 * (3 * 5)");
        roundtrip(&m);
    }
}
