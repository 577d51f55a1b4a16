//! Acceptance suite: one test per criterion, each printing a pass line with
//! its runtime. Tolerances are pinned in code; oracles live in `common` and
//! are independent of the evaluation path they referee.

mod common;

use common::*;
use elnum::eval::EvalBudget;
use elnum::expr::{builtin, parse, BuiltinName, ElExpr};
use elnum::lab::{self, evidence, galois, roots};
use elnum::linrel::{self, RelationStatus};
use elnum::num::{ComplexBall, Dyadic};
use elnum::tower;
use elnum::zero::{self, ZeroVerdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::Instant;

fn budget() -> EvalBudget {
    EvalBudget::default()
}

fn pass(name: &str, started: Instant, limit_s: f64) {
    let took = started.elapsed().as_secs_f64();
    assert!(
        took < limit_s,
        "{}: runtime {:.2}s exceeded the {:.0}s budget",
        name,
        took,
        limit_s
    );
    println!("ACCEPTANCE {}: PASS ({:.2}s)", name, took);
}

/// Constants: e and pi at 256 bits match the exact-rational oracles to 60
/// decimal digits; i^2 + 1 is certified zero. Runtime < 1 s each.
#[test]
fn acceptance_constants() {
    let t0 = Instant::now();
    let tol = pow10_neg(60);

    let e_ball = zero::eval(&builtin(BuiltinName::E), 256, &budget()).unwrap();
    let (e_lo, e_hi) = e_oracle(60);
    let e_mid = dyadic_to_rational(e_ball.re.mid());
    assert!((&e_mid - &e_lo).abs() < tol, "e drifts from the series oracle");
    assert!((&e_mid - &e_hi).abs() < tol);
    assert!(e_ball.im.contains_zero());
    pass("constants/e", t0, 1.0);

    let t1 = Instant::now();
    let pi_ball = zero::eval(&builtin(BuiltinName::Pi), 256, &budget()).unwrap();
    let (pi_lo, pi_hi) = pi_oracle(60);
    let pi_mid = dyadic_to_rational(pi_ball.re.mid());
    assert!((&pi_mid - &pi_lo).abs() < tol, "pi drifts from the Machin oracle");
    assert!((&pi_mid - &pi_hi).abs() < tol);
    assert!(pi_ball.im.contains_zero());
    pass("constants/pi", t1, 1.0);

    let t2 = Instant::now();
    let i = builtin(BuiltinName::I);
    let i2_plus_1 = ElExpr::add(ElExpr::mul(i.clone(), i), ElExpr::from_int(1));
    match zero::is_zero(&i2_plus_1, &budget()) {
        ZeroVerdict::Zero { derivation } => {
            assert!(zero::replay_derivation(&i2_plus_1, &derivation));
        }
        other => panic!("i^2 + 1 not certified zero: {:?}", other),
    }
    pass("constants/i_squared", t2, 1.0);
}

/// Branch semantics: 50 random nonzero Gaussian rationals satisfy
/// exp(log x) = x within 1e-30 and Im(log x) in (-pi, pi] within ball
/// tolerance; log(exp(2 pi i)) is certified Zero. Runtime < 10 s.
#[test]
fn acceptance_branch_semantics() {
    let t0 = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xE1_00B5);
    let target = pow10_target(30);
    let tol30 = pow10_neg(30);
    let (_, pi_hi) = pi_oracle(60);

    for trial in 0..50 {
        let x = random_gauss_rational(&mut rng);
        let round_trip = ElExpr::sub(ElExpr::exp(ElExpr::log(x.clone())), x.clone());
        let ball = zero::refine(&round_trip, &target, &budget())
            .unwrap_or_else(|e| panic!("trial {}: {}", trial, e));
        assert!(ball.contains_zero(), "trial {} round trip off", trial);
        assert!(dyadic_to_rational(&ball.radius_upper()) <= tol30);

        let lg = zero::eval(&ElExpr::log(x), 128, &budget()).unwrap();
        let im_mid = dyadic_to_rational(lg.im.mid()).abs();
        let slack = dyadic_to_rational(&lg.radius_upper());
        assert!(
            im_mid <= &pi_hi + &slack,
            "trial {}: principal branch violated",
            trial
        );
    }

    let two_pi_i = parse("log(exp(2 * pi * i))").unwrap();
    match zero::is_zero(&two_pi_i, &budget()) {
        ZeroVerdict::Zero { derivation } => {
            assert!(zero::replay_derivation(&two_pi_i, &derivation));
        }
        other => panic!("log(exp(2 pi i)) not certified zero: {:?}", other),
    }
    pass("branch_semantics", t0, 10.0);
}

/// Tower pipeline on the worked example: length 3 with unit multipliers,
/// reduction to length 2, value preserved within 1e-30, witnesses verified
/// before and after. Runtime < 30 s at 256 bits, height bound 50.
#[test]
fn acceptance_tower_pipeline() {
    let t0 = Instant::now();
    let gamma = parse("4 + log(1 + exp(log(2)/3))").unwrap();
    let target = pow10_target(30);

    let built = tower::build_tower(&gamma, &budget()).unwrap();
    assert_eq!(built.len(), 3);
    assert!(built.entries.iter().all(|e| e.m == 1));
    let before = tower::verify_tower(&built, &target, &budget()).unwrap();
    assert!(before.all_passed);
    let value_before = built.target_refined(&target, &budget()).unwrap().unwrap();

    let reduced = tower::reduce_tower(&built, 50, 256, &budget()).unwrap();
    assert_eq!(reduced.tower.len(), 2);
    let after = tower::verify_tower(&reduced.tower, &target, &budget()).unwrap();
    assert!(after.all_passed);
    let value_after = reduced
        .tower
        .target_refined(&target, &budget())
        .unwrap()
        .unwrap();
    assert!(value_before.overlaps(&value_after), "target value changed");
    pass("tower_pipeline", t0, 30.0);
}

/// Division Lemma: 100 random towers (from depth <= 3 expressions) and
/// random q in {1..5}^n preserve the target value and all witnesses at
/// 1e-30. Runtime < 2 min.
#[test]
fn acceptance_division_lemma() {
    let t0 = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xD1_715);
    let target = pow10_target(30);
    let mut done = 0;
    let mut attempts = 0;
    while done < 100 {
        attempts += 1;
        assert!(attempts < 3000, "rejection sampling stalled");
        let expr = random_expr(&mut rng, 3);
        let Ok(t) = tower::build_tower(&expr, &budget()) else {
            continue;
        };
        if t.is_empty() {
            continue; // a rational value exercises nothing
        }
        let q: Vec<i64> = (0..t.len()).map(|_| rng.gen_range(1..=5)).collect();
        let divided = match tower::divide_tower(&t, &q) {
            Ok(d) => d,
            Err(e) => panic!("divide failed on {:?}: {}", q, e),
        };
        let Ok(Some(before)) = t.target_refined(&target, &budget()) else {
            continue;
        };
        let after = divided.target_refined(&target, &budget()).unwrap().unwrap();
        assert!(
            before.overlaps(&after),
            "value not preserved for {} / {:?}",
            elnum::expr::render(&expr),
            q
        );
        let report = tower::verify_tower(&divided, &target, &budget()).unwrap();
        assert!(
            report.all_passed,
            "witness lost for {} / {:?}: {:?}",
            elnum::expr::render(&expr),
            q,
            report
        );
        done += 1;
    }
    pass("division_lemma", t0, 120.0);
}

/// Relation detection: (log 2, log 8) yields the verified relation (-3, 1);
/// (1, log 2, log 3) yields none at height 50 and 256 bits; the
/// small-instance brute-force oracle agrees with the lattice search on 50
/// random instances. Runtime < 2 min.
#[test]
fn acceptance_relation_detection() {
    let t0 = Instant::now();

    let values = vec![parse("log(2)").unwrap(), parse("log(8)").unwrap()];
    let rel = linrel::find_rational_relation(&values, 50, 256, &budget())
        .unwrap()
        .expect("relation missed");
    assert_eq!(rel.coefficients, vec![-3, 1]);
    let verified = linrel::verify_relation(&values, &rel, &budget());
    assert_eq!(verified.status, RelationStatus::VerifiedSymbolic);

    let indep = vec![
        parse("1").unwrap(),
        parse("log(2)").unwrap(),
        parse("log(3)").unwrap(),
    ];
    assert!(linrel::find_rational_relation(&indep, 50, 256, &budget())
        .unwrap()
        .is_none());

    // Oracle agreement on random small instances.
    let mut rng = StdRng::seed_from_u64(0x0AC1E);
    let prec: u32 = 128;
    let accept = Dyadic::pow2(-(prec as i64) / 4);
    let refine_target = Dyadic::pow2(-(prec as i64) - 16);
    for trial in 0..50 {
        let dependent: bool = rng.gen();
        let third = if dependent {
            let a: i64 = rng.gen_range(-2..=2);
            let b: i64 = rng.gen_range(-2..=2);
            ElExpr::add(
                ElExpr::mul(ElExpr::from_int(a), parse("log(2)").unwrap()),
                ElExpr::mul(ElExpr::from_int(b), parse("log(3)").unwrap()),
            )
        } else {
            [parse("exp(exp(0))").unwrap(), parse("pi").unwrap(), parse("log(5)").unwrap()]
                [rng.gen_range(0..3)]
            .clone()
        };
        let vals = vec![parse("log(2)").unwrap(), parse("log(3)").unwrap(), third];

        // brute force over heights <= 5, same residual acceptance rule
        let balls: Vec<ComplexBall> = vals
            .iter()
            .map(|v| zero::refine(v, &refine_target, &budget()).unwrap())
            .collect();
        let mut brute_found = false;
        'brute: for c1 in -5i64..=5 {
            for c2 in -5i64..=5 {
                for c3 in -5i64..=5 {
                    if c1 == 0 && c2 == 0 && c3 == 0 {
                        continue;
                    }
                    let mut acc = ComplexBall::zero();
                    for (c, b) in [(c1, &balls[0]), (c2, &balls[1]), (c3, &balls[2])] {
                        acc = acc.add(&b.mul(&ComplexBall::from_i64(c), prec), prec);
                    }
                    if acc.contains_zero()
                        && acc.mag_upper().cmp_exact(&accept) != std::cmp::Ordering::Greater
                    {
                        brute_found = true;
                        break 'brute;
                    }
                }
            }
        }
        let lattice = linrel::find_rational_relation(&vals, 5, prec, &budget()).unwrap();
        assert_eq!(
            brute_found,
            lattice.is_some(),
            "trial {}: oracle {} vs lattice {:?}",
            trial,
            brute_found,
            lattice
        );
    }
    pass("relation_detection", t0, 120.0);
}

/// Zero recognition: the Euler combination is Zero, e + pi is Nonzero at
/// radius below 1e-30, and a 200-expression sweep confirms the rewrites
/// preserve values. Runtime < 2 min.
#[test]
fn acceptance_zero_recognition() {
    let t0 = Instant::now();

    let euler = parse("exp(log(-(1))) + 1").unwrap();
    match zero::is_zero(&euler, &budget()) {
        ZeroVerdict::Zero { derivation } => {
            assert!(zero::replay_derivation(&euler, &derivation));
        }
        other => panic!("Euler combination: {:?}", other),
    }

    let e_plus_pi = parse("exp(exp(0)) + pi").unwrap();
    let tol30 = pow10_neg(30);
    let cert = zero::refine(&e_plus_pi, &pow10_target(30), &budget()).unwrap();
    assert!(!cert.contains_zero());
    assert!(dyadic_to_rational(&cert.radius_upper()) <= tol30);
    match zero::is_zero(&e_plus_pi, &budget()) {
        ZeroVerdict::Nonzero { .. } => {}
        other => panic!("e + pi: {:?}", other),
    }

    // Soundness sweep: the rewritten expression evaluates into an enclosure
    // meeting the original's.
    let mut rng = StdRng::seed_from_u64(0x5EED_200);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 200 {
        attempts += 1;
        assert!(attempts < 5000, "rejection sampling stalled");
        let e = random_expr(&mut rng, 4);
        let Ok(b1) = zero::eval(&e, 128, &budget()) else {
            continue;
        };
        let r = zero::exact_rewrites(&e);
        let b2 = zero::eval(&r, 128, &budget())
            .unwrap_or_else(|err| panic!("rewrite broke {}: {}", elnum::expr::render(&e), err));
        assert!(
            b1.overlaps(&b2),
            "value changed: {} vs {}",
            elnum::expr::render(&e),
            elnum::expr::render(&r)
        );
        checked += 1;
    }
    pass("zero_recognition", t0, 120.0);
}

/// Enumeration: stages 0, 1, 2 match the independent oracle exactly and
/// the stage-2 separation is e - 2 within 1e-12. Runtime < 30 s.
#[test]
fn acceptance_enumeration() {
    let t0 = Instant::now();
    let levels = lab::enumerate_levels(2, &lab::LevelCaps::default(), &budget()).unwrap();

    // Independent oracle: stage arithmetic over exact rationals plus the
    // single irrational (e) reachable by stage 2.
    #[derive(Clone, PartialEq, Debug)]
    enum V {
        Rat(BigRational),
        E,
    }
    let rat = |n: i64| V::Rat(BigRational::from_integer(BigInt::from(n)));
    let mut oracle: Vec<Vec<V>> = vec![vec![rat(0)]];
    for _ in 1..=2 {
        let prev = oracle.last().unwrap().clone();
        let mut next: Vec<V> = Vec::new();
        let push = |v: V, next: &mut Vec<V>| {
            if !next.contains(&v) {
                next.push(v);
            }
        };
        for a in &prev {
            for b in &prev {
                if let (V::Rat(x), V::Rat(y)) = (a, b) {
                    push(V::Rat(x + y), &mut next);
                    push(V::Rat(x - y), &mut next);
                    push(V::Rat(x * y), &mut next);
                    if !y.is_zero() {
                        push(V::Rat(x / y), &mut next);
                    }
                }
            }
        }
        for a in &prev {
            if let V::Rat(x) = a {
                if x.is_zero() {
                    push(V::Rat(BigRational::from_integer(BigInt::from(1))), &mut next);
                } else if x.is_one() {
                    push(V::E, &mut next);
                    push(V::Rat(BigRational::from_integer(BigInt::from(0))), &mut next);
                }
                // exp/log of other stage <= 1 values do not occur
            }
        }
        oracle.push(next);
    }
    use num_traits::{One, Zero};

    for n in 0..=2usize {
        let got: Vec<V> = levels[n]
            .members
            .iter()
            .map(|m| {
                let r = zero::exact_rewrites(&m.expr);
                match r.as_rational() {
                    Some(q) => V::Rat(q.clone()),
                    None => {
                        assert_eq!(
                            elnum::expr::render(&r),
                            "exp(1)",
                            "unexpected stage-{} member",
                            n
                        );
                        V::E
                    }
                }
            })
            .collect();
        assert_eq!(got.len(), oracle[n].len(), "stage {} cardinality", n);
        for v in &oracle[n] {
            assert!(got.contains(v), "stage {} missing {:?}", n, v);
        }
        assert!(!levels[n].has_ambiguity());
    }
    assert_eq!(levels[2].len(), 5);

    // separation at stage 2: e - 2 within 1e-12
    let sep = lab::separation(&levels[2], &budget()).unwrap();
    assert!(sep.certified);
    let eps = dyadic_to_rational(&sep.epsilon);
    let (e_lo, e_hi) = e_oracle(40);
    let two = BigRational::from_integer(BigInt::from(2));
    let tol = pow10_neg(12);
    assert!(eps <= &e_hi - &two, "claimed separation exceeds e - 2");
    assert!(
        (&e_lo - &two) - &eps < tol,
        "separation not within 1e-12 of e - 2: {}",
        sep.epsilon.to_decimal(20)
    );
    pass("enumeration", t0, 30.0);
}

/// S5 certificate for 2x^5 - 10x + 5: Eisenstein at 5 plus replayable
/// cycle-type witnesses within a 10000-prime budget. Runtime < 30 s.
#[test]
fn acceptance_s5_certificate() {
    let t0 = Instant::now();
    let cert = galois::certify_s5(&roots::question_quintic(), 10_000).unwrap();
    assert_eq!(
        cert.irreducibility,
        galois::IrreducibilityWitness::Eisenstein { prime: 5 }
    );
    assert_eq!(cert.five_cycle.1, vec![5]);
    assert!(
        cert.transposition.1 == vec![1, 1, 1, 2] || cert.transposition.1 == vec![2, 3],
        "{:?}",
        cert.transposition
    );
    assert!(galois::replay_certificate(&cert));
    pass("s5_certificate", t0, 30.0);
}

/// Question roots: R with residual |R + e^R| <= 1e-38; five pairwise
/// disjoint quintic root enclosures with residuals <= 1e-38 and a Vieta sum
/// containing 0. Runtime < 10 s.
#[test]
fn acceptance_question_roots() {
    let t0 = Instant::now();
    let tol38 = pow10_neg(38);
    let target = pow10_target(44);

    let r = roots::root_of_x_plus_exp_x(&target, 1 << 12).unwrap();
    let residual = r.exp(256).unwrap().add(&r, 256);
    assert!(residual.contains_zero());
    assert!(dyadic_to_rational(&residual.radius_upper()) <= tol38);
    // spot value: R = -0.567143290409783872999968...
    let approx = BigRational::new(
        BigInt::from(-567143290409783873i64),
        BigInt::from(1_000_000_000_000_000_000i64),
    );
    assert!((dyadic_to_rational(r.re.mid()) - approx).abs() < pow10_neg(15));

    let qroots = roots::quintic_roots(&target, 1 << 12).unwrap();
    assert_eq!(qroots.len(), 5);
    let coeffs = roots::question_quintic();
    let mut sum = ComplexBall::zero();
    for root in &qroots {
        let res = roots::poly_ball(&coeffs, root, 256);
        assert!(res.contains_zero());
        assert!(dyadic_to_rational(&res.radius_upper()) <= tol38);
        sum = sum.add(root, 256);
    }
    for i in 0..5 {
        for j in (i + 1)..5 {
            assert!(!qroots[i].overlaps(&qroots[j]), "roots {} and {} overlap", i, j);
        }
    }
    assert!(sum.contains_zero(), "Vieta sum violated");
    pass("question_roots", t0, 10.0);
}

/// Conjecture evidence for ids 1 and 2 at height 20 and 256 bits: verdicts
/// consistent, reports byte-reproducible under a fixed seed. Runtime < 5 min.
#[test]
fn acceptance_conjecture_evidence() {
    let t0 = Instant::now();
    for id in [1u8, 2] {
        let run = || {
            let report = evidence::conjecture_evidence(
                id,
                20,
                256,
                &evidence::default_basis(),
                1234,
                &budget(),
                false,
            )
            .unwrap();
            serde_json::to_string(&report).unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a, b, "conjecture {} report not byte-reproducible", id);
        let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert!(
            doc["verdict"].as_str().unwrap().contains("consistent"),
            "conjecture {} verdict: {}",
            id,
            doc["verdict"]
        );
        let n_searches = doc["searches"].as_array().unwrap().len();
        assert_eq!(n_searches, if id == 1 { 1 } else { 5 });
    }
    // The falsification path stays live: duplicating the root surfaces the
    // trivial relation and flips the verdict.
    let probe = evidence::conjecture_evidence(
        1,
        20,
        256,
        &evidence::default_basis(),
        1234,
        &budget(),
        true,
    )
    .unwrap();
    assert!(probe.verdict.contains("falsification"));
    pass("conjecture_evidence", t0, 300.0);
}
