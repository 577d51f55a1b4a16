//! Galois-group certification for quintics by Dedekind's theorem.
//!
//! Factoring a squarefree integer polynomial modulo an unramified prime
//! yields the cycle type of a Frobenius element of the Galois group. For a
//! degree-5 polynomial, transitivity (irreducibility) together with a
//! 5-cycle and a transposition forces the full symmetric group; a (2,3)
//! pattern works too, since its cube is a transposition.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Irreducibility witness for the certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IrreducibilityWitness {
    /// Eisenstein's criterion at this prime.
    Eisenstein { prime: u64 },
    /// Mod-p factorization degree patterns whose only common coarsening is
    /// the trivial partition {5}.
    DegreeExclusion { witnesses: Vec<(u64, Vec<u32>)> },
}

/// Replayable certificate forcing the Galois group to be S5.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct S5Certificate {
    /// Primitive integer coefficients, constant term first.
    pub coefficients: Vec<BigInt>,
    pub irreducibility: IrreducibilityWitness,
    /// Prime whose factorization pattern is {5} (a 5-cycle).
    pub five_cycle: (u64, Vec<u32>),
    /// Prime whose pattern is {1,1,1,2} or {2,3}; the latter is cubed.
    pub transposition: (u64, Vec<u32>),
    pub transposition_needs_cube: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GaloisError {
    #[error("polynomial must have degree exactly 5")]
    WrongDegree,
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("prime budget exhausted before all witnesses were found")]
    BudgetExhausted,
}

/// Certify that the Galois group of a degree-5 rational polynomial is S5.
///
/// `coeffs` lists rational coefficients from the constant term up; the
/// polynomial is normalized to a primitive integer polynomial first.
/// `prime_budget` caps how many primes the witness search may try.
pub fn certify_s5(coeffs: &[BigRational], prime_budget: usize) -> Result<S5Certificate, GaloisError> {
    let ints = normalize_to_primitive(coeffs);
    if ints.len() != 6 || ints[5].is_zero() {
        return Err(GaloisError::WrongDegree);
    }

    // Reducibility screen: a rational root gives a certified refusal.
    if let Some(root) = rational_root(&ints) {
        return Err(GaloisError::Reducible(format!("rational root {}", root)));
    }

    let primes = prime_iter().take(prime_budget).collect::<Vec<u64>>();

    let eisenstein = primes
        .iter()
        .copied()
        .filter(|&p| p < 1 << 20)
        .find(|&p| eisenstein_applies(&ints, p));

    // Collect factorization patterns at unramified primes.
    let mut witnesses: Vec<(u64, Vec<u32>)> = Vec::new();
    let mut five_cycle: Option<(u64, Vec<u32>)> = None;
    let mut transposition: Option<(u64, Vec<u32>, bool)> = None;
    // Partitions of 5 still consistent with every observed pattern.
    let mut viable: Vec<Vec<u32>> = partitions_of_five();

    for &p in &primes {
        if five_cycle.is_some() && transposition.is_some() && (eisenstein.is_some() || viable.len() == 1)
        {
            break;
        }
        let Some(poly) = reduce_mod_p(&ints, p) else {
            continue; // leading coefficient vanishes
        };
        if !squarefree_mod_p(&poly, p) {
            continue; // ramified or repeated factors; Dedekind needs squarefree
        }
        let pattern = factor_degree_pattern(poly, p);
        viable.retain(|part| refines(&pattern, part));
        if pattern == vec![5] && five_cycle.is_none() {
            five_cycle = Some((p, pattern.clone()));
        }
        if transposition.is_none() {
            if pattern == vec![1, 1, 1, 2] {
                transposition = Some((p, pattern.clone(), false));
            } else if pattern == vec![2, 3] {
                transposition = Some((p, pattern.clone(), true));
            }
        }
        if witnesses.len() < 24 {
            witnesses.push((p, pattern));
        }
    }

    let irreducibility = if let Some(p) = eisenstein {
        IrreducibilityWitness::Eisenstein { prime: p }
    } else if viable == vec![vec![5u32]] {
        IrreducibilityWitness::DegreeExclusion {
            witnesses: witnesses.clone(),
        }
    } else if viable.iter().all(|p| p.contains(&1)) && rational_root(&ints).is_none() {
        // Every surviving partition needs a linear factor, but there is no
        // rational root: the pattern evidence cannot conclude. Try harder
        // only within budget; otherwise report honestly.
        return Err(GaloisError::BudgetExhausted);
    } else {
        return Err(GaloisError::BudgetExhausted);
    };

    let five_cycle = five_cycle.ok_or(GaloisError::BudgetExhausted)?;
    let (tp, tpat, cube) = transposition.ok_or(GaloisError::BudgetExhausted)?;

    Ok(S5Certificate {
        coefficients: ints,
        irreducibility,
        five_cycle,
        transposition: (tp, tpat),
        transposition_needs_cube: cube,
    })
}

/// Replay a certificate's cycle-type witnesses: factoring modulo each
/// recorded prime must reproduce the recorded pattern.
pub fn replay_certificate(cert: &S5Certificate) -> bool {
    let mut checks = vec![
        (cert.five_cycle.0, cert.five_cycle.1.clone()),
        (cert.transposition.0, cert.transposition.1.clone()),
    ];
    if let IrreducibilityWitness::DegreeExclusion { witnesses } = &cert.irreducibility {
        checks.extend(witnesses.iter().cloned());
    }
    for (p, pattern) in checks {
        let Some(poly) = reduce_mod_p(&cert.coefficients, p) else {
            return false;
        };
        if !squarefree_mod_p(&poly, p) {
            return false;
        }
        if factor_degree_pattern(poly, p) != pattern {
            return false;
        }
    }
    if let IrreducibilityWitness::Eisenstein { prime } = cert.irreducibility {
        if !eisenstein_applies(&cert.coefficients, prime) {
            return false;
        }
    }
    true
}

/// Clear denominators and divide by content; constant term first.
fn normalize_to_primitive(coeffs: &[BigRational]) -> Vec<BigInt> {
    let mut denom_lcm = BigInt::one();
    for c in coeffs {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if !content.is_zero() && !content.is_one() {
        for c in &mut ints {
            *c /= &content;
        }
    }
    ints
}

/// Eisenstein at p: p divides all but the leading coefficient, p^2 does not
/// divide the constant term, p does not divide the leading coefficient.
fn eisenstein_applies(ints: &[BigInt], p: u64) -> bool {
    let p = BigInt::from(p);
    let lead = ints.last().unwrap();
    if lead.mod_floor(&p).is_zero() {
        return false;
    }
    for c in &ints[..ints.len() - 1] {
        if !c.mod_floor(&p).is_zero() {
            return false;
        }
    }
    let p2 = &p * &p;
    !ints[0].mod_floor(&p2).is_zero()
}

/// Rational-root screen using the rational root theorem.
fn rational_root(ints: &[BigInt]) -> Option<BigRational> {
    let a0 = &ints[0];
    let an = ints.last().unwrap();
    if a0.is_zero() {
        return Some(BigRational::zero());
    }
    let p_divs = small_divisors(a0);
    let q_divs = small_divisors(an);
    for p in &p_divs {
        for q in &q_divs {
            for sign in [1i64, -1] {
                let cand = BigRational::new(p * BigInt::from(sign), q.clone());
                if eval_rational_poly(ints, &cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    if let Some(m) = n.to_u64() {
        let mut d = 1u64;
        while d.saturating_mul(d) <= m {
            if m % d == 0 {
                out.push(BigInt::from(d));
                out.push(BigInt::from(m / d));
            }
            d += 1;
        }
    } else {
        out.push(BigInt::one());
        out.push(n.clone());
    }
    out.sort();
    out.dedup();
    out
}

fn eval_rational_poly(ints: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in ints.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

/// Does the mod-p degree multiset refine the rational partition? Each part
/// of `target` must be writable as a sum of distinct-index entries of
/// `pattern`, using every entry exactly once.
fn refines(pattern: &[u32], target: &[u32]) -> bool {
    fn assign(pattern: &mut Vec<u32>, target: &[u32]) -> bool {
        if target.is_empty() {
            return pattern.is_empty();
        }
        let goal = target[0];
        // choose a subset of `pattern` summing to `goal`
        let n = pattern.len();
        for mask in 1u32..(1 << n) {
            let sum: u32 = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| pattern[i])
                .sum();
            if sum == goal {
                let mut rest: Vec<u32> = (0..n)
                    .filter(|i| mask & (1 << i) == 0)
                    .map(|i| pattern[i])
                    .collect();
                if assign(&mut rest, &target[1..]) {
                    return true;
                }
            }
        }
        false
    }
    assign(&mut pattern.to_vec(), target)
}

fn partitions_of_five() -> Vec<Vec<u32>> {
    vec![
        vec![5],
        vec![1, 4],
        vec![2, 3],
        vec![1, 1, 3],
        vec![1, 2, 2],
        vec![1, 1, 1, 2],
        vec![1, 1, 1, 1, 1],
    ]
}

/// Ascending primes by sieve segments.
pub fn prime_iter() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime_u64(n))
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // deterministic Miller-Rabin for 64-bit
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if a % n == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

// --- dense univariate arithmetic mod p (tiny degrees) ---

/// Coefficients mod p, constant first, no trailing zeros, monic-normalized
/// on reduction. `None` when the leading coefficient vanishes mod p.
fn reduce_mod_p(ints: &[BigInt], p: u64) -> Option<Vec<u64>> {
    let pb = BigInt::from(p);
    let mut v: Vec<u64> = ints
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    if v.len() != ints.len() {
        return None; // degree dropped: p divides the leading coefficient
    }
    // make monic
    let lead = *v.last().unwrap();
    let inv = pow_mod(lead, p - 2, p);
    for c in &mut v {
        *c = mul_mod(*c, inv, p);
    }
    Some(v)
}

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_deg(v: &[u64]) -> usize {
    debug_assert!(v.last().map(|&c| c != 0).unwrap_or(true));
    v.len().saturating_sub(1)
}

fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = poly_deg(b);
    let lead_inv = pow_mod(b[db], p - 2, p);
    while a.len() > db && !a.is_empty() {
        let da = a.len() - 1;
        let c = mul_mod(a[da], lead_inv, p);
        if c != 0 {
            for i in 0..=db {
                let idx = da - db + i;
                let t = mul_mod(c, b[i], p);
                a[idx] = (a[idx] + p - t) % p;
            }
        }
        a.pop();
        poly_trim(&mut a);
        if a.is_empty() {
            break;
        }
    }
    a
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    // monic normalize
    if let Some(&lead) = a.last() {
        let inv = pow_mod(lead, p - 2, p);
        for c in &mut a {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    poly_trim(&mut prod);
    if prod.is_empty() {
        return prod;
    }
    poly_rem(prod, f, p)
}

fn poly_derivative(f: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(c, (i as u64) % p, p))
        .collect();
    poly_trim(&mut out);
    out
}

fn squarefree_mod_p(f: &[u64], p: u64) -> bool {
    let d = poly_derivative(f, p);
    if d.is_empty() {
        return false;
    }
    let g = poly_gcd(f.to_vec(), d, p);
    poly_deg(&g) == 0
}

/// `x^(p^k) mod f` by iterated Frobenius.
fn frobenius_powers(f: &[u64], p: u64, k_max: usize) -> Vec<Vec<u64>> {
    let x = vec![0u64, 1];
    let mut cur = x.clone();
    let mut out = Vec::with_capacity(k_max);
    for _ in 0..k_max {
        // cur <- cur^p mod f
        let mut acc = vec![1u64];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, f, p);
            }
            base = poly_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        cur = acc;
        out.push(cur.clone());
    }
    out
}

/// Multiset of irreducible factor degrees of a squarefree monic `f` mod p,
/// by distinct-degree factorization. Sorted ascending.
pub fn factor_degree_pattern(f: Vec<u64>, p: u64) -> Vec<u32> {
    let mut pattern = Vec::new();
    let mut rest = f;
    let deg = poly_deg(&rest);
    let frob = frobenius_powers(&rest, p, deg);
    let mut d = 1usize;
    while 2 * d <= poly_deg(&rest) {
        // gcd(x^(p^d) - x, rest)
        let mut xpd = poly_rem(frob[d - 1].clone(), &rest, p);
        // subtract x
        if xpd.len() < 2 {
            xpd.resize(2, 0);
        }
        xpd[1] = (xpd[1] + p - 1) % p;
        poly_trim(&mut xpd);
        let g = if xpd.is_empty() {
            rest.clone()
        } else {
            poly_gcd(rest.clone(), xpd, p)
        };
        let dg = poly_deg(&g);
        if dg > 0 {
            for _ in 0..dg / d {
                pattern.push(d as u32);
            }
            // divide rest by g via repeated remainder-free division
            rest = poly_div_exact(&rest, &g, p);
        }
        d += 1;
    }
    if poly_deg(&rest) > 0 {
        pattern.push(poly_deg(&rest) as u32);
    }
    pattern.sort();
    pattern
}

fn poly_div_exact(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let db = poly_deg(b);
    let da = poly_deg(&a);
    let lead_inv = pow_mod(b[db], p - 2, p);
    let mut q = vec![0u64; da - db + 1];
    while a.len() > db {
        let dcur = a.len() - 1;
        let c = mul_mod(*a.last().unwrap(), lead_inv, p);
        q[dcur - db] = c;
        if c != 0 {
            for i in 0..=db {
                let idx = dcur - db + i;
                let t = mul_mod(c, b[i], p);
                a[idx] = (a[idx] + p - t) % p;
            }
        }
        a.pop();
        poly_trim(&mut a);
        if a.is_empty() {
            break;
        }
    }
    poly_trim(&mut q);
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quintic(coeffs: [i64; 6]) -> Vec<BigRational> {
        coeffs
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect()
    }

    #[test]
    fn paper_quintic_eisenstein_at_five() {
        // 2x^5 - 10x + 5
        let cert = certify_s5(&quintic([5, -10, 0, 0, 0, 2]), 10_000).unwrap();
        assert_eq!(cert.irreducibility, IrreducibilityWitness::Eisenstein { prime: 5 });
        assert_eq!(cert.five_cycle.1, vec![5]);
        assert!(replay_certificate(&cert));
    }

    #[test]
    fn known_s5_quintic() {
        // x^5 - x - 1
        let cert = certify_s5(&quintic([-1, -1, 0, 0, 0, 1]), 10_000).unwrap();
        assert!(replay_certificate(&cert));
    }

    #[test]
    fn reducible_is_refused() {
        // x^5 - 1 has the root 1
        let err = certify_s5(&quintic([-1, 0, 0, 0, 0, 1]), 1000).unwrap_err();
        match err {
            GaloisError::Reducible(msg) => assert!(msg.contains("1")),
            other => panic!("expected Reducible, got {:?}", other),
        }
    }

    #[test]
    fn degree_patterns_mod_small_primes() {
        // x^5 - x - 1 mod 2 = (x^2+x+1)(x^3+x^2+1): pattern {2,3}
        let ints: Vec<BigInt> = [-1i64, -1, 0, 0, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        let f = reduce_mod_p(&ints, 2).unwrap();
        assert!(squarefree_mod_p(&f, 2));
        assert_eq!(factor_degree_pattern(f, 2), vec![2, 3]);
    }

    #[test]
    fn refinement_logic() {
        assert!(refines(&[2, 3], &[5]));
        assert!(refines(&[1, 1, 3], &[1, 4]));
        assert!(!refines(&[2, 3], &[1, 4]));
        assert!(refines(&[1, 1, 1, 1, 1], &[2, 3]));
    }

    #[test]
    fn prime_iterator_sane() {
        let ps: Vec<u64> = prime_iter().take(10).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
