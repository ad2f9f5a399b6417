//! Exact arithmetic in the cyclotomic fields Q(zeta_L).
//!
//! Elements are kept in canonical form: coordinates in the power basis
//! 1, zeta, ..., zeta^(phi(L)-1), reduced modulo the L-th cyclotomic
//! polynomial. Internally a common denominator is factored out of the
//! coordinate vector so that the hot paths run on integers; observable
//! coefficients are rationals in lowest terms.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

pub type Rational = BigRational;

// ---------------------------------------------------------------------------
// Cyclotomic polynomials
// ---------------------------------------------------------------------------

/// The L-th cyclotomic polynomial, monic with integer coefficients,
/// ascending degree; degree phi(L).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycPoly {
    order: u64,
    coeffs: Vec<BigInt>,
}

impl CycPoly {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients in ascending degree, including the leading 1.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }
}

fn divisors_u64(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Exact division of integer polynomials, divisor monic. Panics on nonzero
/// remainder; callers only divide known multiples.
fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    assert!(den[dn].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![BigInt::zero(); qn + 1];
    for j in (0..=qn).rev() {
        let c = std::mem::take(&mut rem[j + dn]);
        if !c.is_zero() {
            for k in 0..dn {
                rem[j + k] -= &c * &den[k];
            }
        }
        quot[j] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "nonzero remainder in exact division");
    quot
}

static PHI_CACHE: Lazy<Mutex<HashMap<u64, Arc<CycPoly>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// The L-th cyclotomic polynomial, by iterated exact division of x^L - 1 by
/// Phi_d over the proper divisors d of L. Results are memoized.
pub fn cyclotomic_polynomial(order: u64) -> Arc<CycPoly> {
    assert!(order >= 1, "cyclotomic order must be >= 1");
    if let Some(p) = PHI_CACHE.lock().unwrap().get(&order) {
        return p.clone();
    }
    let poly = if order == 1 {
        CycPoly {
            order: 1,
            coeffs: vec![BigInt::from(-1), BigInt::one()],
        }
    } else {
        // x^L - 1
        let mut num = vec![BigInt::zero(); order as usize + 1];
        num[0] = BigInt::from(-1);
        num[order as usize] = BigInt::one();
        for d in divisors_u64(order) {
            if d == order {
                continue;
            }
            let phi_d = cyclotomic_polynomial(d);
            num = exact_div_monic(&num, &phi_d.coeffs);
        }
        CycPoly { order, coeffs: num }
    };
    let arc = Arc::new(poly);
    PHI_CACHE.lock().unwrap().insert(order, arc.clone());
    arc
}

// ---------------------------------------------------------------------------
// Field elements
// ---------------------------------------------------------------------------

/// An exact element of Q(zeta_L).
///
/// Invariants: `coeffs.len() == phi(order)`; `denom >= 1`; the gcd of all
/// numerator coefficients with the denominator is 1; the zero element is the
/// all-zero vector over denominator 1. Equality is coefficient-vector
/// equality at matching order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    order: u64,
    coeffs: Vec<BigInt>,
    denom: BigInt,
}

/// Below this field degree the dense convolution is cheap enough that the
/// float-guided monomial recognition in `mul`/`pow` costs more than it saves.
const DEEP_DETECT_MIN_PHI: usize = 64;

/// Reduce `buf` in place modulo Phi_order; afterwards only the first phi
/// entries may be nonzero.
fn reduce_mod_phi(buf: &mut Vec<BigInt>, phi_poly: &CycPoly) {
    let phi = phi_poly.degree();
    for j in (phi..buf.len()).rev() {
        let c = std::mem::take(&mut buf[j]);
        if c.is_zero() {
            continue;
        }
        // x^phi = -(phi_0 + phi_1 x + ... + phi_{phi-1} x^{phi-1})
        for k in 0..phi {
            let t = &c * &phi_poly.coeffs[k];
            buf[j - phi + k] -= t;
        }
    }
    buf.truncate(phi);
}

impl CycNum {
    fn normalized(order: u64, mut coeffs: Vec<BigInt>, mut denom: BigInt) -> CycNum {
        debug_assert!(!denom.is_zero());
        if denom.is_negative() {
            denom = -denom;
            for c in &mut coeffs {
                *c = -std::mem::take(c);
            }
        }
        let mut g = denom.clone();
        for c in &coeffs {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if coeffs.iter().all(Zero::is_zero) {
            denom = BigInt::one();
        } else if !g.is_one() {
            denom /= &g;
            for c in &mut coeffs {
                *c /= &g;
            }
        }
        CycNum { order, coeffs, denom }
    }

    pub fn zero(order: u64) -> CycNum {
        let phi = cyclotomic_polynomial(order).degree();
        CycNum {
            order,
            coeffs: vec![BigInt::zero(); phi],
            denom: BigInt::one(),
        }
    }

    pub fn one(order: u64) -> CycNum {
        Self::from_rational(order, &Rational::one())
    }

    pub fn from_rational(order: u64, r: &Rational) -> CycNum {
        let phi = cyclotomic_polynomial(order).degree();
        let mut coeffs = vec![BigInt::zero(); phi];
        coeffs[0] = r.numer().clone();
        Self::normalized(order, coeffs, r.denom().clone())
    }

    pub fn from_integer(order: u64, n: i64) -> CycNum {
        Self::from_rational(order, &Rational::from(BigInt::from(n)))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Degree of the field over Q, phi(order).
    pub fn phi(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.denom.is_one()
            && self.coeffs[0].is_one()
            && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The i-th power-basis coordinate as a rational in lowest terms.
    pub fn coeff(&self, i: usize) -> Rational {
        Rational::new(self.coeffs[i].clone(), self.denom.clone())
    }

    pub fn coeffs_rational(&self) -> Vec<Rational> {
        (0..self.coeffs.len()).map(|i| self.coeff(i)).collect()
    }

    /// Builds an element from power-basis rational coordinates.
    pub fn from_coeffs(order: u64, coeffs: &[Rational]) -> Result<CycNum> {
        let phi = cyclotomic_polynomial(order).degree();
        if coeffs.len() != phi {
            return Err(Error::InvalidSpec(format!(
                "expected {phi} coefficients for order {order}, got {}",
                coeffs.len()
            )));
        }
        let mut denom = BigInt::one();
        for c in coeffs {
            denom = denom.lcm(c.denom());
        }
        let nums = coeffs
            .iter()
            .map(|c| c.numer() * (&denom / c.denom()))
            .collect();
        Ok(Self::normalized(order, nums, denom))
    }

    fn check_order(&self, other: &CycNum) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &CycNum) -> Result<CycNum> {
        self.check_order(other)?;
        let d = self.denom.lcm(&other.denom);
        let fa = &d / &self.denom;
        let fb = &d / &other.denom;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * &fa + b * &fb)
            .collect();
        Ok(Self::normalized(self.order, coeffs, d))
    }

    pub fn sub(&self, other: &CycNum) -> Result<CycNum> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycNum {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            denom: self.denom.clone(),
        }
    }

    pub fn mul(&self, other: &CycNum) -> Result<CycNum> {
        self.check_order(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.order));
        }
        // Monomial operands multiply by a cyclic shift instead of a full
        // convolution; the hot paths of this crate (shift/diagonal matrix
        // products) are almost exclusively of this shape. The float-guided
        // deep recognition only pays for itself in large fields.
        let deep = self.coeffs.len() >= DEEP_DETECT_MIN_PHI;
        if let Some((r, e)) = self.as_root_power_impl(deep) {
            return Ok(other.mul_zeta_power(e).scale(&r));
        }
        if let Some((r, e)) = other.as_root_power_impl(deep) {
            return Ok(self.mul_zeta_power(e).scale(&r));
        }
        let phi = self.coeffs.len();
        let mut buf = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                buf[i + j] += a * b;
            }
        }
        let phi_poly = cyclotomic_polynomial(self.order);
        reduce_mod_phi(&mut buf, &phi_poly);
        Ok(Self::normalized(self.order, buf, &self.denom * &other.denom))
    }

    pub fn scale(&self, r: &Rational) -> CycNum {
        let coeffs = self.coeffs.iter().map(|c| c * r.numer()).collect();
        Self::normalized(self.order, coeffs, &self.denom * r.denom())
    }

    /// If the element is `r * zeta^e` for a rational r, returns `(r, e)`.
    ///
    /// Recognition is float-guided but exact: candidate exponents are read
    /// off the complex argument, then confirmed (or rejected) by exact
    /// cross-multiplication, so a wrong guess can never produce a wrong
    /// answer, only a `None`.
    pub fn as_root_power(&self) -> Option<(Rational, u64)> {
        self.as_root_power_impl(true)
    }

    fn as_root_power_impl(&self, deep: bool) -> Option<(Rational, u64)> {
        if self.is_zero() {
            return None;
        }
        let mut nonzero = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero());
        let (j, cj) = nonzero.next().expect("nonzero element");
        if nonzero.next().is_none() {
            // single power-basis term: r * zeta^j with j < phi
            return Some((
                Rational::new(cj.clone(), self.denom.clone()),
                j as u64,
            ));
        }
        if !deep {
            return None;
        }
        // zeta^e with e >= phi reduces to a dense vector; recover e from the
        // complex argument (adding pi covers negative r).
        let (re, im) = self.to_complex();
        let theta = im.atan2(re);
        let l = self.order as i64;
        let scale = self.order as f64 / std::f64::consts::TAU;
        let mut candidates = Vec::with_capacity(6);
        for base in [theta, theta - std::f64::consts::PI] {
            let e0 = (base * scale).round() as i64;
            for delta in -1..=1i64 {
                candidates.push((e0 + delta).rem_euclid(l) as u64);
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        for e in candidates {
            if let Some(r) = self.matches_zeta_power(e) {
                return Some((r, e));
            }
        }
        None
    }

    /// Exact check that the element equals `r * zeta^e` for some rational r.
    fn matches_zeta_power(&self, e: u64) -> Option<Rational> {
        let v = zeta_power_vec(self.order, e as i64);
        let i = v.iter().position(|c| !c.is_zero())?;
        let (ci, vi) = (&self.coeffs[i], &v[i]);
        if ci.is_zero() {
            return None;
        }
        for k in 0..v.len() {
            if &self.coeffs[k] * vi != ci * &v[k] {
                return None;
            }
        }
        Some(Rational::new(ci.clone(), &self.denom * vi))
    }

    /// Multiplication by `zeta^e` as a cyclic coefficient shift modulo
    /// x^L - 1 followed by a single reduction modulo Phi_L. For prime L this
    /// is O(L) instead of the O(phi^2) general convolution.
    pub fn mul_zeta_power(&self, e: u64) -> CycNum {
        let e = (e % self.order) as usize;
        if e == 0 || self.is_zero() {
            return self.clone();
        }
        let l = self.order as usize;
        let mut buf = vec![BigInt::zero(); l.max(self.coeffs.len())];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                buf[(k + e) % l] += c;
            }
        }
        let phi_poly = cyclotomic_polynomial(self.order);
        reduce_mod_phi(&mut buf, &phi_poly);
        Self::normalized(self.order, buf, self.denom.clone())
    }

    /// Multiplicative inverse. Single-monomial elements invert by exponent
    /// negation; the general case runs the extended Euclidean algorithm of
    /// the coordinate polynomial against Phi_L.
    pub fn inverse(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // monomial fast path: r zeta^e  ->  (1/r) zeta^(L-e)
        if let Some((r, e)) = self.as_root_power() {
            let z = zeta(self.order, -(e as i64));
            return Ok(z.scale(&Rational::new(r.denom().clone(), r.numer().clone())));
        }
        let phi_poly = cyclotomic_polynomial(self.order);
        let a: Vec<Rational> = self.coeffs_rational();
        let b: Vec<Rational> = phi_poly
            .coeffs
            .iter()
            .map(|c| Rational::from(c.clone()))
            .collect();
        let inv = poly_modular_inverse(&a, &b)
            .expect("Phi_L is irreducible, every nonzero element is invertible");
        let mut buf: Vec<BigInt> = Vec::new();
        let mut denom = BigInt::one();
        for c in &inv {
            denom = denom.lcm(c.denom());
        }
        for c in &inv {
            buf.push(c.numer() * (&denom / c.denom()));
        }
        buf.resize(phi_poly.degree(), BigInt::zero());
        Ok(Self::normalized(self.order, buf, denom))
    }

    pub fn pow(&self, k: i64) -> Result<CycNum> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        if k <= u32::MAX as i64 {
            let deep = self.coeffs.len() >= DEEP_DETECT_MIN_PHI;
            if let Some((r, e)) = self.as_root_power_impl(deep) {
                let rk = Rational::new(r.numer().pow(k as u32), r.denom().pow(k as u32));
                let ek = ((e as u128 * k as u128) % self.order as u128) as i64;
                return Ok(zeta(self.order, ek).scale(&rk));
            }
        }
        let mut result = Self::one(self.order);
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Re-expresses the element in Q(zeta_M), where L | M, via
    /// zeta_L -> zeta_M^(M/L).
    pub fn change_order(&self, new_order: u64) -> Result<CycNum> {
        if new_order % self.order != 0 {
            return Err(Error::IncompatibleOrders(self.order, new_order));
        }
        if new_order == self.order {
            return Ok(self.clone());
        }
        let step = (new_order / self.order) as i64;
        let phi_poly = cyclotomic_polynomial(new_order);
        let phi = phi_poly.degree();
        let mut acc = vec![BigInt::zero(); phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = zeta_power_vec(new_order, (i as i64) * step);
            for (k, zc) in z.iter().enumerate() {
                if !zc.is_zero() {
                    acc[k] += c * zc;
                }
            }
        }
        Ok(Self::normalized(new_order, acc, self.denom.clone()))
    }

    /// Numeric embedding via zeta_L -> exp(2 pi i / L).
    pub fn to_complex(&self) -> (f64, f64) {
        let d = bigint_to_f64(&self.denom);
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * (i as f64) / (self.order as f64);
            let cf = bigint_to_f64(c) / d;
            re += cf * angle.cos();
            im += cf * angle.sin();
        }
        (re, im)
    }
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(f64::NAN)
}

/// zeta_L^t in canonical form; the exponent is taken mod L.
pub fn zeta(order: u64, t: i64) -> CycNum {
    let coeffs = zeta_power_vec(order, t);
    CycNum::normalized(order, coeffs, BigInt::one())
}

/// Integer coordinate vector of x^(t mod L) reduced modulo Phi_L.
pub(crate) fn zeta_power_vec(order: u64, t: i64) -> Vec<BigInt> {
    let e = t.rem_euclid(order as i64) as usize;
    let phi_poly = cyclotomic_polynomial(order);
    let phi = phi_poly.degree();
    let mut buf = vec![BigInt::zero(); (e + 1).max(phi)];
    buf[e] = BigInt::one();
    reduce_mod_phi(&mut buf, &phi_poly);
    buf.resize(phi, BigInt::zero());
    buf
}

/// Lifts both operands into Q(zeta_lcm(L1, L2)).
pub fn lift_to_common_order(x: &CycNum, y: &CycNum) -> Result<(CycNum, CycNum)> {
    let m = x.order.lcm(&y.order);
    Ok((x.change_order(m)?, y.change_order(m)?))
}

/// Extended Euclid over Q[x]: the inverse of a modulo b, with b irreducible
/// and deg a < deg b. Returns None only for a = 0.
fn poly_modular_inverse(a: &[Rational], b: &[Rational]) -> Option<Vec<Rational>> {
    fn deg(p: &[Rational]) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }
    fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
        while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
            p.pop();
        }
        p
    }
    // invariant: r0 = s0 * a (mod b), r1 = s1 * a (mod b)
    let mut r0 = trim(b.to_vec());
    let mut r1 = trim(a.to_vec());
    let mut s0: Vec<Rational> = vec![Rational::zero()];
    let mut s1: Vec<Rational> = vec![Rational::one()];
    while let Some(d1) = deg(&r1) {
        if d1 == 0 {
            // constant: inverse is s1 / r1[0]
            let c = r1[0].clone();
            return Some(s1.into_iter().map(|x| x / c.clone()).collect());
        }
        let d0 = deg(&r0).expect("r0 nonzero while r1 nonzero");
        if d0 < d1 {
            std::mem::swap(&mut r0, &mut r1);
            std::mem::swap(&mut s0, &mut s1);
            continue;
        }
        // r0 -= (lead0/lead1) x^(d0-d1) * r1, same update on s
        let f = r0[d0].clone() / r1[d1].clone();
        let shift = d0 - d1;
        for k in 0..=d1 {
            let t = &f * &r1[k];
            r0[k + shift] -= t;
        }
        let need = s1.len() + shift;
        if s0.len() < need {
            s0.resize(need, Rational::zero());
        }
        for k in 0..s1.len() {
            let t = &f * &s1[k];
            s0[k + shift] -= t;
        }
        r0 = trim(r0);
        std::mem::swap(&mut r0, &mut r1);
        std::mem::swap(&mut s0, &mut s1);
        r1 = trim(r1);
    }
    None
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let base = match i {
                0 => String::new(),
                1 => format!("*z{}", self.order),
                _ => format!("*z{}^{}", self.order, i),
            };
            if base.is_empty() {
                terms.push(format!("{c}"));
            } else {
                terms.push(format!("{c}{base}"));
            }
        }
        let body = terms.join(" + ");
        if self.denom.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.denom)
        }
    }
}

/// phi(L) for machine-sized L (degree of the field extension).
pub fn phi_degree(order: u64) -> usize {
    cyclotomic_polynomial(order).degree()
}

pub use crate::numtheory::euler_phi_u64;
