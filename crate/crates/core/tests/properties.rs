//! Property tests for the library-level invariants: parse/render bijection,
//! enclosure containment and monotonicity, principal-branch behavior,
//! relation stability, and soundness guards of the zero recognizer.

mod common;

use common::*;
use elnum::eval::EvalBudget;
use elnum::expr::{builtin, parse, render, BuiltinName, Derived, ElExpr, ExprRef};
use elnum::linrel;
use elnum::num::Dyadic;
use elnum::tower;
use elnum::zero::{self, ZeroVerdict};
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn budget() -> EvalBudget {
    EvalBudget::default()
}

fn arb_expr() -> impl Strategy<Value = ExprRef> {
    let leaf = (0i64..=9, 1i64..=9).prop_map(|(p, q)| ElExpr::from_ratio(p, q));
    leaf.prop_recursive(4, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ElExpr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ElExpr::mul(a, b)),
            inner.clone().prop_map(ElExpr::neg),
            inner.clone().prop_map(ElExpr::inv),
            inner.clone().prop_map(ElExpr::exp),
            inner.clone().prop_map(ElExpr::log),
        ]
    })
}

proptest! {
    /// parse(render(e)) == e structurally, for trees with nonnegative
    /// literals (the generator's shape).
    #[test]
    fn parse_render_roundtrip(e in arb_expr()) {
        let text = render(&e);
        let back = parse(&text).map_err(|err| {
            TestCaseError::fail(format!("reparse of {:?} failed: {}", text, err))
        })?;
        prop_assert_eq!(&back, &e, "text was {:?}", text);
    }

    /// Values survive the renderer: when the expression evaluates at all,
    /// the reparsed tree evaluates to an overlapping enclosure.
    #[test]
    fn render_preserves_value(e in arb_expr()) {
        if let Ok(b1) = zero::eval(&e, 96, &budget()) {
            let back = parse(&render(&e)).unwrap();
            let b2 = zero::eval(&back, 96, &budget()).unwrap();
            prop_assert!(b1.overlaps(&b2));
        }
    }

    /// The parser rejects garbage with an error, never a panic.
    #[test]
    fn parser_never_panics(s in "[0-9a-z+*/()^, -]{0,40}") {
        let _ = parse(&s);
    }
}

/// i^2 is enclosed around -1 with radius below 2^-40 at 128 bits.
#[test]
fn i_squared_encloses_minus_one() {
    let i = builtin(BuiltinName::I);
    let sq = ElExpr::mul(i.clone(), i);
    let ball = zero::eval(&sq, 128, &budget()).unwrap();
    assert!(ball.contains(&Dyadic::from_i64(-1), &Dyadic::zero()));
    assert!(ball.radius_upper().cmp_exact(&Dyadic::pow2(-40)) == std::cmp::Ordering::Less);
}

/// sin^2 + cos^2 = 1 for 20 random rationals with |x| <= 4.
#[test]
fn sin_cos_pythagorean() {
    let mut rng = StdRng::seed_from_u64(0x51C0);
    for _ in 0..20 {
        let num: i64 = rng.gen_range(-16..=16);
        let den: i64 = rng.gen_range(4..=8);
        let x = ElExpr::from_ratio(num, den);
        let s = elnum::expr::derived(Derived::Sin, x.clone()).unwrap();
        let c = elnum::expr::derived(Derived::Cos, x).unwrap();
        let sum = ElExpr::add(
            ElExpr::mul(s.clone(), s),
            ElExpr::mul(c.clone(), c),
        );
        let ball = zero::eval(&sum, 128, &budget()).unwrap();
        assert!(
            ball.contains(&Dyadic::one(), &Dyadic::zero()),
            "sin^2+cos^2 enclosure missed 1 at {}/{}",
            num,
            den
        );
    }
}

/// sin(0) is certified zero.
#[test]
fn sin_zero_is_zero() {
    let s = elnum::expr::derived(Derived::Sin, ElExpr::from_int(0)).unwrap();
    assert!(zero::is_zero(&s, &budget()).is_zero());
}

/// The primitive cube root of 1 at branch 1 is (-1/2, +sqrt(3)/2).
#[test]
fn primitive_cube_root_branch() {
    let r = elnum::expr::derived(
        Derived::NthRootBranch { n: 3, k: 1 },
        ElExpr::from_int(1),
    )
    .unwrap();
    let ball = zero::eval(&r, 160, &budget()).unwrap();
    let re = dyadic_to_rational(ball.re.mid());
    let im = dyadic_to_rational(ball.im.mid());
    let half = BigRational::new((-1).into(), 2.into());
    assert!((re - half).abs() < pow10_neg(30));
    // sqrt(3)/2 = 0.86602540378...
    let sqrt3_half = BigRational::new(86602540378443864676u128.into(), 100000000000000000000u128.into());
    assert!((im - sqrt3_half).abs() < pow10_neg(18));
}

/// Containment and monotonicity: for random guarded expressions, the ball
/// at doubled precision sits inside the 2x-inflated ball, and its radius
/// does not grow.
#[test]
fn refinement_containment_and_monotonicity() {
    let mut rng = StdRng::seed_from_u64(0xC0417A1);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 100 {
        attempts += 1;
        assert!(attempts < 4000, "rejection sampling stalled");
        let e = random_expr(&mut rng, 6);
        let Ok(low) = zero::eval(&e, 96, &budget()) else {
            continue;
        };
        let Ok(high) = zero::eval(&e, 192, &budget()) else {
            continue;
        };
        // monotone radius
        assert!(
            high.radius_upper().cmp_exact(&low.radius_upper()) != std::cmp::Ordering::Greater,
            "radius grew on refinement for {}",
            render(&e)
        );
        // containment in the doubled ball
        let inflated = low.widen(&low.radius_upper());
        assert!(
            inflated.re.encloses(&high.re) && inflated.im.encloses(&high.im),
            "refined enclosure escaped for {}",
            render(&e)
        );
        checked += 1;
    }
}

/// exp(log x) - x vanishes within 1e-30 for random nonzero rationals.
#[test]
fn exp_log_roundtrip_on_rationals() {
    let mut rng = StdRng::seed_from_u64(0xE1_06);
    let target = pow10_target(30);
    for _ in 0..25 {
        let num: i64 = rng.gen_range(1..=50);
        let den: i64 = rng.gen_range(1..=50);
        let sign = if rng.gen() { 1 } else { -1 };
        let x = ElExpr::from_ratio(sign * num, den);
        let diff = ElExpr::sub(ElExpr::exp(ElExpr::log(x.clone())), x);
        let ball = zero::refine(&diff, &target, &budget()).unwrap();
        assert!(ball.contains_zero());
    }
}

/// A returned relation keeps its residual around zero at doubled precision.
#[test]
fn relations_stable_under_refinement() {
    let pairs = [
        ("log(2)", "log(8)"),
        ("pi", "pi * (1/2)"),
        ("log(4)", "log(2)"),
    ];
    for (a, b) in pairs {
        let values = vec![parse(a).unwrap(), parse(b).unwrap()];
        let rel = linrel::find_rational_relation(&values, 16, 128, &budget())
            .unwrap()
            .unwrap_or_else(|| panic!("no relation for ({}, {})", a, b));
        let combo = linrel::combination_expr(&values, &rel.coefficients);
        let refined = zero::refine(&combo, &Dyadic::pow2(-256), &budget()).unwrap();
        assert!(refined.contains_zero(), "({}, {}) destabilized", a, b);
    }
}

/// Scaling invariance on the small-instance oracle: multiplying every value
/// by the same nonzero rational leaves the relation vector unchanged.
#[test]
fn relation_scaling_invariance() {
    let scales = [(3i64, 1i64), (1, 3), (-2, 5)];
    let base = vec![parse("log(2)").unwrap(), parse("log(8)").unwrap()];
    let rel0 = linrel::find_rational_relation(&base, 8, 128, &budget())
        .unwrap()
        .unwrap();
    for (p, q) in scales {
        let scaled: Vec<ExprRef> = base
            .iter()
            .map(|v| ElExpr::mul(ElExpr::from_ratio(p, q), v.clone()))
            .collect();
        let rel = linrel::find_rational_relation(&scaled, 8, 128, &budget())
            .unwrap()
            .unwrap_or_else(|| panic!("scaling by {}/{} lost the relation", p, q));
        assert_eq!(rel.coefficients, rel0.coefficients);
    }
}

/// Nonzero verdicts are stable at a doubled budget.
#[test]
fn nonzero_verdicts_stable() {
    for text in ["exp(exp(0)) + pi", "log(2)", "1/3 - 1/4"] {
        let e = parse(text).unwrap();
        let small = EvalBudget::with_max_precision(256);
        let big = EvalBudget::with_max_precision(512);
        match (zero::is_zero(&e, &small), zero::is_zero(&e, &big)) {
            (ZeroVerdict::Nonzero { .. }, ZeroVerdict::Nonzero { certificate }) => {
                assert!(!certificate.contains_zero());
            }
            (a, b) => panic!("{}: {:?} then {:?}", text, a, b),
        }
    }
}

/// Never a false Zero on e + pi - q for rational surrogates q.
#[test]
fn no_false_zero_on_e_plus_pi() {
    let mut rng = StdRng::seed_from_u64(0xF00D);
    // include convergent-quality surrogates and random ones
    let mut surrogates: Vec<(i64, i64)> = vec![(41, 7), (5859874482, 1000000000), (6, 1)];
    for _ in 0..10 {
        surrogates.push((rng.gen_range(1..=10000), rng.gen_range(1..=1700)));
    }
    for (p, q) in surrogates {
        let e = ElExpr::sub(
            parse("exp(exp(0)) + pi").unwrap(),
            ElExpr::from_ratio(p, q),
        );
        match zero::is_zero(&e, &EvalBudget::with_max_precision(512)) {
            ZeroVerdict::Zero { .. } => panic!("false zero on surrogate {}/{}", p, q),
            _ => {}
        }
    }
}

/// Reduction evidence is idempotent: the recorded search bounds find no
/// relation in the reduced tower.
#[test]
fn reduced_towers_stay_reduced() {
    for text in [
        "4 + log(1 + exp(log(2)/3))",
        "log(2) + log(8)",
        "log(4) + log(2) + exp(2)",
    ] {
        let t = tower::build_tower(&parse(text).unwrap(), &budget()).unwrap();
        let reduced = tower::reduce_tower(&t, 20, 192, &budget()).unwrap();
        let alphas: Vec<ExprRef> = reduced
            .tower
            .entries
            .iter()
            .map(|e| e.alpha.clone())
            .collect();
        for i in 2..=alphas.len() {
            let found = linrel::find_rational_relation(
                &alphas[..i],
                reduced.height_bound,
                reduced.precision_bits,
                &budget(),
            )
            .unwrap();
            assert!(
                found.is_none(),
                "{}: prefix {} still dependent: {:?}",
                text,
                i,
                found
            );
        }
    }
}

/// Core values are immutable and shareable across threads.
#[test]
fn values_are_send_and_sync() {
    fn ok<T: Send + Sync>() {}
    ok::<ExprRef>();
    ok::<elnum::num::ComplexBall>();
    ok::<elnum::num::Dyadic>();
    ok::<elnum::tower::Tower>();
    ok::<elnum::fieldelem::RatFunc>();
}

/// Build-then-verify holds on random guarded expressions.
#[test]
fn random_towers_verify() {
    let mut rng = StdRng::seed_from_u64(0x70EE);
    let target = pow10_target(30);
    let mut done = 0;
    let mut attempts = 0;
    while done < 30 {
        attempts += 1;
        assert!(attempts < 1500, "rejection sampling stalled");
        let e = random_expr(&mut rng, 3);
        let Ok(t) = tower::build_tower(&e, &budget()) else {
            continue;
        };
        let report = tower::verify_tower(&t, &target, &budget()).unwrap();
        assert!(report.all_passed, "verify failed for {}", render(&e));
        done += 1;
    }
}
