//! Arbitrary-precision number theory: gcd, modular inverses, multiplicative
//! orders, Euler phi, factorization and divisor enumeration.
//!
//! Everything here is exact. Factorization runs trial division up to 10^6
//! followed by Pollard-Brent rho with Miller-Rabin certification; inputs whose
//! unfactored cofactor exceeds the configured bit budget are refused rather
//! than ground on forever.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Effort bounds for [`factorize_with`] and [`divisors_with`].
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Refuse to continue once the unfactored cofactor exceeds this many bits
    /// after the rho stage budget is spent.
    pub max_factor_bits: u64,
    /// Maximum number of divisors [`divisors`] will enumerate.
    pub max_divisors: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_factor_bits: 128,
            max_divisors: 1_000_000,
        }
    }
}

/// A complete prime factorization, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(BigInt, u32)] {
        &self.factors
    }

    /// The factored integer, Π prime^exponent.
    pub fn value(&self) -> BigInt {
        let mut v = BigInt::one();
        for (p, e) in &self.factors {
            v *= p.pow(*e);
        }
        v
    }

    /// Π (exponent + 1).
    pub fn divisor_count(&self) -> BigInt {
        let mut c = BigInt::one();
        for (_, e) in &self.factors {
            c *= BigInt::from(*e + 1);
        }
        c
    }
}

/// Nonnegative greatest common divisor; gcd(0, 0) = 0.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// The representative of `a` in [0, m), m >= 1.
pub fn mod_reduce(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Inverse of `a` modulo `m`: the x in [0, m) with a*x = 1 (mod m).
/// By convention the inverse modulo 1 is 0.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    if m < &BigInt::one() {
        return Err(Error::PreconditionFailed(format!("modulus {m} < 1")));
    }
    if m.is_one() {
        return Ok(BigInt::zero());
    }
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return Err(Error::NotInvertible(a.clone(), m.clone()));
    }
    Ok(e.x.mod_floor(m))
}

/// The unique s in [0, ell) with q*s = p (mod ell).
pub fn solve_s(p: &BigInt, q: &BigInt, ell: &BigInt) -> Result<BigInt> {
    let qinv = mod_inverse(q, ell)?;
    Ok((p * qinv).mod_floor(ell))
}

/// Smallest k >= 1 with s^k = 1 (mod m); returns 1 when m = 1.
///
/// Computed by reducing phi(m) along its prime factorization, so the cost is
/// dominated by factoring m and phi(m).
pub fn multiplicative_order(s: &BigInt, m: &BigInt) -> Result<u64> {
    multiplicative_order_with(s, m, &Budget::default())
}

pub fn multiplicative_order_with(s: &BigInt, m: &BigInt, budget: &Budget) -> Result<u64> {
    if m < &BigInt::one() {
        return Err(Error::PreconditionFailed(format!("modulus {m} < 1")));
    }
    if m.is_one() {
        return Ok(1);
    }
    let s = s.mod_floor(m);
    if !gcd(&s, m).is_one() {
        return Err(Error::NotInvertible(s, m.clone()));
    }
    let phi = euler_phi_with(m, budget)?;
    let phi_f = factorize_with(&phi, budget)?;
    let mut k = phi.clone();
    for (r, _) in phi_f.factors() {
        loop {
            let cand = &k / r;
            if (&k % r).is_zero() && s.modpow(&cand, m).is_one() {
                k = cand;
            } else {
                break;
            }
        }
    }
    k.to_u64()
        .ok_or_else(|| Error::PreconditionFailed(format!("order {k} does not fit in u64")))
}

/// Euler's totient, computed from the prime factorization.
pub fn euler_phi(m: &BigInt) -> Result<BigInt> {
    euler_phi_with(m, &Budget::default())
}

pub fn euler_phi_with(m: &BigInt, budget: &Budget) -> Result<BigInt> {
    let f = factorize_with(m, budget)?;
    let mut phi = BigInt::one();
    for (p, e) in f.factors() {
        phi *= (p - 1) * p.pow(e - 1);
    }
    Ok(phi)
}

/// q^k - p^k, exactly.
pub fn power_difference(p: &BigInt, q: &BigInt, k: u32) -> BigInt {
    q.pow(k) - p.pow(k)
}

/// The residual-finiteness / Hopficity trichotomy for BS(p, q).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopfianStatus {
    ResiduallyFinite,
    Hopfian,
    NonHopfian,
}

/// Positive integers are meshed when one divides the other or they share
/// exactly the same prime divisors.
fn meshed(p: &BigInt, q: &BigInt, budget: &Budget) -> Result<bool> {
    if (p % q).is_zero() || (q % p).is_zero() {
        return Ok(true);
    }
    let fp = factorize_with(p, budget)?;
    let fq = factorize_with(q, budget)?;
    let primes_p: Vec<&BigInt> = fp.factors().iter().map(|(p, _)| p).collect();
    let primes_q: Vec<&BigInt> = fq.factors().iter().map(|(p, _)| p).collect();
    Ok(primes_p == primes_q)
}

/// Classifies BS(p, q) as residually finite, Hopfian or non-Hopfian.
pub fn hopfian_status(p: &BigInt, q: &BigInt) -> Result<HopfianStatus> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let ap = p.abs();
    let aq = q.abs();
    if ap == aq || ap.is_one() || aq.is_one() {
        return Ok(HopfianStatus::ResiduallyFinite);
    }
    if meshed(&ap, &aq, &Budget::default())? {
        Ok(HopfianStatus::Hopfian)
    } else {
        Ok(HopfianStatus::NonHopfian)
    }
}

// ---------------------------------------------------------------------------
// Primality
// ---------------------------------------------------------------------------

/// Miller-Rabin. Deterministic base set below 3.3 * 10^24, plus 25
/// pseudorandom bases (fixed seed) beyond that.
pub fn is_probable_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    if n == &two || n == &BigInt::from(3) {
        return true;
    }
    if n.is_even() {
        return false;
    }
    let n_minus_1: BigInt = n - 1;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;

    let witness = |a: &BigInt| -> bool {
        // true = composite witness found
        let a = a.mod_floor(n);
        if a.is_zero() {
            return false;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };

    const BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    for b in BASES {
        if witness(&BigInt::from(b)) {
            return false;
        }
    }
    // Deterministic for n < 3_317_044_064_679_887_385_961_981 with the bases
    // above; larger inputs get extra random rounds.
    let det_limit: BigInt = "3317044064679887385961981".parse().unwrap();
    if n < &det_limit {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5d1c_e5);
    for _ in 0..25 {
        let a = rng.gen_bigint_range(&two, &(n - 2));
        if witness(&a) {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Pollard-Brent rho; returns a nontrivial factor of odd composite n, or None
/// once the iteration budget is exhausted.
fn pollard_brent(n: &BigInt, c: u64, max_iters: u64) -> Option<BigInt> {
    let one = BigInt::one();
    let c = BigInt::from(c);
    let f = |x: &BigInt| (x * x + &c) % n;
    let mut y = BigInt::from(2);
    let mut cycle_len: u64 = 1;
    let mut iters: u64 = 0;
    loop {
        let x = y.clone();
        for _ in 0..cycle_len {
            y = f(&y);
        }
        let mut k = 0u64;
        while k < cycle_len {
            let batch = std::cmp::min(128, cycle_len - k);
            let ys = y.clone();
            let mut acc = BigInt::one();
            for _ in 0..batch {
                y = f(&y);
                let diff = (&x - &y).abs();
                if !diff.is_zero() {
                    acc = (acc * diff) % n;
                }
            }
            iters += batch;
            let g = acc.gcd(n);
            if g > one && &g < n {
                return Some(g);
            }
            if g == *n {
                // backtrack one step at a time
                let mut yb = ys;
                loop {
                    yb = f(&yb);
                    let g = (&x - &yb).abs().gcd(n);
                    if g > one {
                        if &g < n {
                            return Some(g);
                        }
                        return None;
                    }
                }
            }
            if iters >= max_iters {
                return None;
            }
            k += batch;
        }
        cycle_len *= 2;
        if iters >= max_iters {
            return None;
        }
    }
}

/// Complete prime factorization of m >= 1 with the default budget.
pub fn factorize(m: &BigInt) -> Result<Factorization> {
    factorize_with(m, &Budget::default())
}

pub fn factorize_with(m: &BigInt, budget: &Budget) -> Result<Factorization> {
    if m < &BigInt::one() {
        return Err(Error::PreconditionFailed(format!(
            "factorize requires m >= 1, got {m}"
        )));
    }
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = m.clone();

    let push = |p: BigInt, e: u32, factors: &mut Vec<(BigInt, u32)>| {
        factors.push((p, e));
    };

    // trial division stage
    let mut d: u64 = 2;
    while d <= TRIAL_DIVISION_BOUND {
        let bd = BigInt::from(d);
        if &bd * &bd > rest {
            break;
        }
        if (&rest % &bd).is_zero() {
            let mut e = 0u32;
            while (&rest % &bd).is_zero() {
                rest /= &bd;
                e += 1;
            }
            push(bd, e, &mut factors);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        return Ok(Factorization { factors });
    }

    // rho stage on the remaining cofactor
    let mut stack = vec![rest];
    let mut found: Vec<BigInt> = Vec::new();
    while let Some(n) = stack.pop() {
        if n.is_one() {
            continue;
        }
        if is_probable_prime(&n) {
            found.push(n);
            continue;
        }
        // perfect power check keeps rho from stalling on p^k
        if let Some((base, _)) = perfect_power(&n) {
            stack.push(base.clone());
            stack.push(&n / &base);
            continue;
        }
        let over_budget = n.bits() > budget.max_factor_bits;
        let per_try = if over_budget { 1u64 << 22 } else { u64::MAX };
        let mut split = None;
        for c in 1..=64u64 {
            if let Some(g) = pollard_brent(&n, c, per_try) {
                split = Some(g);
                break;
            }
            if over_budget {
                break;
            }
        }
        match split {
            Some(g) => {
                stack.push(&n / &g);
                stack.push(g);
            }
            None => {
                return Err(Error::FactorizationBudgetExceeded {
                    cofactor: n,
                    max_bits: budget.max_factor_bits,
                });
            }
        }
    }
    found.sort();
    let mut i = 0;
    while i < found.len() {
        let p = found[i].clone();
        let mut e = 0u32;
        while i < found.len() && found[i] == p {
            e += 1;
            i += 1;
        }
        factors.push((p, e));
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { factors })
}

/// If n = b^k with k >= 2, returns (b, k) with b minimal.
fn perfect_power(n: &BigInt) -> Option<(BigInt, u32)> {
    let bits = n.bits();
    for k in (2..=bits.max(2)).rev() {
        let k32 = k as u32;
        if let Some(b) = integer_kth_root(n, k32) {
            if b.pow(k32) == *n && b > BigInt::one() {
                return Some((b, k32));
            }
        }
    }
    None
}

fn integer_kth_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n < &BigInt::zero() {
        return None;
    }
    let (_, mag) = n.clone().into_parts();
    let r = mag.nth_root(k);
    Some(BigInt::from_biguint(Sign::Plus, r))
}

/// All positive divisors in ascending order.
pub fn divisors(f: &Factorization) -> Result<Vec<BigInt>> {
    divisors_with(f, &Budget::default())
}

pub fn divisors_with(f: &Factorization, budget: &Budget) -> Result<Vec<BigInt>> {
    let count = f.divisor_count();
    if count > BigInt::from(budget.max_divisors) {
        return Err(Error::DivisorBudgetExceeded {
            count,
            max: budget.max_divisors,
        });
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in f.factors() {
        let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
        let mut pk = BigInt::one();
        for _ in 0..=*e {
            for d in &divs {
                next.push(d * &pk);
            }
            pk *= p;
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

/// phi for machine-sized arguments; panics only if phi overflows u64.
pub fn euler_phi_u64(m: u64) -> Result<u64> {
    let phi = euler_phi(&BigInt::from(m))?;
    Ok(phi.to_u64().expect("phi of a u64 fits in u64"))
}

pub fn to_biguint_abs(n: &BigInt) -> BigUint {
    n.abs().to_biguint().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    // Independent oracle: exhaustive divisor scan.
    fn gcd_oracle(a: u64, b: u64) -> u64 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        (1..=a.min(b)).rev().find(|d| a % d == 0 && b % d == 0).unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&bi(2), &bi(5)), bi(1));
        assert_eq!(gcd(&bi(0), &bi(7)), bi(7));
        assert_eq!(gcd(&bi(12), &bi(18)), bi(gcd_oracle(12, 18) as i64));
        assert_eq!(gcd(&bi(0), &bi(0)), bi(0));
        assert_eq!(gcd(&bi(-12), &bi(18)), bi(6));
    }

    #[test]
    fn mod_inverse_examples() {
        // oracle: direct scan over [0, 13)
        let inv = (0..13).find(|x| (5 * x) % 13 == 1).unwrap();
        assert_eq!(inv, 8);
        assert_eq!(mod_inverse(&bi(5), &bi(13)).unwrap(), bi(8));
        assert_eq!(mod_inverse(&bi(1), &bi(9)).unwrap(), bi(1));
        assert_eq!(
            mod_inverse(&bi(5), &bi(10)),
            Err(Error::NotInvertible(bi(5), bi(10)))
        );
        assert_eq!(mod_inverse(&bi(7), &bi(1)).unwrap(), bi(0));
    }

    #[test]
    fn solve_s_examples() {
        assert_eq!(solve_s(&bi(2), &bi(5), &bi(3)).unwrap(), bi(1));
        assert_eq!(solve_s(&bi(2), &bi(5), &bi(9)).unwrap(), bi(4));
        // oracle: scan s in [0, 13) for 5s = 2 (mod 13)
        let s = (0..13).find(|s| (5 * s) % 13 == 2).unwrap();
        assert_eq!(s, 3);
        assert_eq!(solve_s(&bi(2), &bi(5), &bi(13)).unwrap(), bi(3));
        assert!(solve_s(&bi(2), &bi(10), &bi(4)).is_err());
    }

    #[test]
    fn multiplicative_order_examples() {
        // oracle: iterate powers 4, 7, 1 mod 9
        let mut x = 1u64;
        let mut k = 0;
        loop {
            x = x * 4 % 9;
            k += 1;
            if x == 1 {
                break;
            }
        }
        assert_eq!(k, 3);
        assert_eq!(multiplicative_order(&bi(4), &bi(9)).unwrap(), 3);
        assert_eq!(multiplicative_order(&bi(1), &bi(7)).unwrap(), 1);
        assert_eq!(multiplicative_order(&bi(3), &bi(13)).unwrap(), 3);
        assert_eq!(multiplicative_order(&bi(5), &bi(1)).unwrap(), 1);
        assert!(multiplicative_order(&bi(3), &bi(9)).is_err());
    }

    #[test]
    fn euler_phi_examples() {
        // oracle: count coprime residues
        let count = (1..=9).filter(|k| gcd_oracle(*k, 9) == 1).count();
        assert_eq!(count, 6);
        assert_eq!(euler_phi(&bi(9)).unwrap(), bi(6));
        assert_eq!(euler_phi(&bi(1)).unwrap(), bi(1));
        assert_eq!(euler_phi(&bi(13)).unwrap(), bi(12));
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(&bi(117)).unwrap();
        assert_eq!(f.factors(), &[(bi(3), 2), (bi(13), 1)]);
        assert_eq!(f.value(), bi(117));
        assert_eq!(factorize(&bi(1)).unwrap().factors(), &[]);
        assert_eq!(factorize(&bi(1024)).unwrap().factors(), &[(bi(2), 10)]);
    }

    #[test]
    fn factorize_large_semiprime() {
        // 1000003 * 1000033, both above the trial division bound
        let n = bi(1_000_003) * bi(1_000_033);
        let f = factorize(&n).unwrap();
        assert_eq!(f.factors(), &[(bi(1_000_003), 1), (bi(1_000_033), 1)]);
    }

    #[test]
    fn factorize_budget_refusal() {
        // Product of the Mersenne primes 2^89 - 1 and 2^127 - 1: a 216-bit
        // semiprime the capped rho stage cannot split.
        let m89 = (BigInt::one() << 89) - 1;
        let m127 = (BigInt::one() << 127) - 1;
        let n = m89 * m127;
        let tight = Budget { max_factor_bits: 16, max_divisors: 1_000_000 };
        match factorize_with(&n, &tight) {
            Err(Error::FactorizationBudgetExceeded { .. }) => {}
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn divisors_examples() {
        // oracle: trial division scan
        let scan: Vec<i64> = (1..=117).filter(|d| 117 % d == 0).collect();
        assert_eq!(scan, vec![1, 3, 9, 13, 39, 117]);
        let f = factorize(&bi(117)).unwrap();
        let d = divisors(&f).unwrap();
        assert_eq!(d, scan.iter().map(|&x| bi(x)).collect::<Vec<_>>());
        assert_eq!(divisors(&factorize(&bi(1)).unwrap()).unwrap(), vec![bi(1)]);
        let d12 = divisors(&factorize(&bi(12)).unwrap()).unwrap();
        assert_eq!(d12, vec![bi(1), bi(2), bi(3), bi(4), bi(6), bi(12)]);
        assert_eq!(d12.len(), 6);
    }

    #[test]
    fn divisor_budget_refusal() {
        let f = factorize(&bi(720720)).unwrap();
        let tight = Budget { max_factor_bits: 128, max_divisors: 10 };
        assert!(matches!(
            divisors_with(&f, &tight),
            Err(Error::DivisorBudgetExceeded { .. })
        ));
    }

    #[test]
    fn power_difference_examples() {
        assert_eq!(power_difference(&bi(2), &bi(5), 3), bi(117));
        assert_eq!(power_difference(&bi(2), &bi(5), 2), bi(21));
        assert_eq!(power_difference(&bi(2), &bi(5), 1), bi(3));
        assert_eq!(power_difference(&bi(-2), &bi(5), 2), bi(21));
        assert_eq!(power_difference(&bi(-2), &bi(5), 3), bi(133));
    }

    #[test]
    fn hopfian_examples() {
        assert_eq!(hopfian_status(&bi(2), &bi(5)).unwrap(), HopfianStatus::NonHopfian);
        assert_eq!(
            hopfian_status(&bi(1), &bi(7)).unwrap(),
            HopfianStatus::ResiduallyFinite
        );
        assert_eq!(hopfian_status(&bi(2), &bi(4)).unwrap(), HopfianStatus::Hopfian);
        assert_eq!(
            hopfian_status(&bi(3), &bi(3)).unwrap(),
            HopfianStatus::ResiduallyFinite
        );
        // 12 and 18 share primes {2, 3} without dividing each other
        assert_eq!(hopfian_status(&bi(12), &bi(18)).unwrap(), HopfianStatus::Hopfian);
        assert_eq!(hopfian_status(&bi(6), &bi(10)).unwrap(), HopfianStatus::NonHopfian);
        assert_eq!(hopfian_status(&bi(0), &bi(5)), Err(Error::ZeroParameter));
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_probable_prime(&bi(2)));
        assert!(is_probable_prime(&bi(1_000_003)));
        assert!(!is_probable_prime(&bi(1)));
        assert!(!is_probable_prime(&(bi(1_000_003) * bi(17))));
        // Carmichael number
        assert!(!is_probable_prime(&bi(561)));
    }

    #[test]
    fn order_divides_phi_property() {
        for m in 2u64..=200 {
            for s in 2..m {
                if gcd_oracle(s, m) != 1 {
                    continue;
                }
                let ord = multiplicative_order(&bi(s as i64), &bi(m as i64)).unwrap();
                let phi = euler_phi(&bi(m as i64)).unwrap().to_u64().unwrap();
                assert_eq!(phi % ord, 0, "ord_{m}({s}) = {ord} must divide phi = {phi}");
            }
        }
    }

    #[test]
    fn inverse_property() {
        for m in 2i64..=60 {
            for a in 1..m {
                if gcd(&bi(a), &bi(m)).is_one() {
                    let x = mod_inverse(&bi(a), &bi(m)).unwrap();
                    assert_eq!((bi(a) * x).mod_floor(&bi(m)), bi(1));
                }
            }
        }
    }

    #[test]
    fn ell_dividing_power_difference_is_coprime_to_p_and_q() {
        for (p, q) in [(2i64, 5i64), (3, 7), (-2, 5), (4, 9)] {
            for k in 1..=4u32 {
                let d = power_difference(&bi(p), &bi(q), k);
                let f = factorize(&d.abs().max(bi(1))).unwrap();
                for ell in divisors(&f).unwrap() {
                    assert!(gcd(&ell, &bi(p)).is_one(), "ell={ell} p={p}");
                    assert!(gcd(&ell, &bi(q)).is_one(), "ell={ell} q={q}");
                }
            }
        }
    }
}
