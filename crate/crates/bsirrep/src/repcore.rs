//! Canonical representations of BS(p, q): construction of the matrix pair
//! (A, B) from discrete data and exact verification of the defining relation
//! and the structural identities it implies.
//!
//! A is c times the cyclic shift e_i -> e_{i+1 mod dim}; B is the diagonal
//! of zeta_ell^(t s^i). All B-exponents are reduced mod ell before powering,
//! justified by B^ell = I.

use crate::cyclotomic::{zeta, CycNum};
use crate::error::{Error, Result};
use crate::exactlinalg::CycMatrix;
use crate::numtheory;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default bound on |k| for [`verify_power_identity`].
pub const POWER_IDENTITY_MAX_K: i64 = 6;

/// The pair (p, q) defining BS(p, q), normalized so q > 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BSParams {
    p: BigInt,
    q: BigInt,
    negated: bool,
}

impl BSParams {
    /// Validates and normalizes (p, q): both nonzero, coprime, not both of
    /// absolute value 1. BS(p, q) = BS(-p, -q), so q is made positive.
    pub fn new(p: BigInt, q: BigInt) -> Result<BSParams> {
        if p.is_zero() || q.is_zero() {
            return Err(Error::ZeroParameter);
        }
        if !numtheory::gcd(&p, &q).is_one() {
            return Err(Error::InvalidSpec(format!(
                "p = {p} and q = {q} are not relatively prime"
            )));
        }
        if p.abs().is_one() && q.abs().is_one() {
            return Err(Error::InvalidSpec(
                "p and q must not both be +-1".to_string(),
            ));
        }
        let negated = q.is_negative();
        let (p, q) = if negated { (-p, -q) } else { (p, q) };
        Ok(BSParams { p, q, negated })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// True when the input pair was replaced by (-p, -q) to normalize q > 0.
    pub fn was_negated(&self) -> bool {
        self.negated
    }

    /// q^dim - p^dim, the modulus every admissible ell divides.
    pub fn modulus(&self, dim: u32) -> BigInt {
        numtheory::power_difference(&self.p, &self.q, dim)
    }
}

/// Discrete data determining one canonical representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepSpec {
    pub params: BSParams,
    /// Matrix size (the paper's n + 1).
    pub dim: u32,
    /// Order of B.
    pub ell: u64,
    /// lambda = zeta_ell^t, gcd(t, ell) = 1.
    pub t: u64,
    /// Conjugation exponent: q s = p (mod ell).
    pub s: u64,
    /// Nonzero scalar in A.
    pub c: CycNum,
}

impl RepSpec {
    /// Builds a spec, solving for s and checking every invariant.
    pub fn new(params: BSParams, dim: u32, ell: u64, t: u64, c: CycNum) -> Result<RepSpec> {
        let s = numtheory::solve_s(&params.p, &params.q, &BigInt::from(ell))?
            .to_u64()
            .expect("s < ell fits in u64");
        let spec = RepSpec { params, dim, ell, t, s, c };
        spec.validate()?;
        Ok(spec)
    }

    /// Builds a spec without checking the existence divisibility; the other
    /// invariants (t range, coprimality, c nonzero) still apply. Used to
    /// exercise the failing direction of the relation check.
    pub fn new_unchecked(params: BSParams, dim: u32, ell: u64, t: u64, c: CycNum) -> Result<RepSpec> {
        let s = numtheory::solve_s(&params.p, &params.q, &BigInt::from(ell))?
            .to_u64()
            .expect("s < ell fits in u64");
        let spec = RepSpec { params, dim, ell, t, s, c };
        spec.validate_basic()?;
        Ok(spec)
    }

    fn validate_basic(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::InvalidSpec("dim must be >= 1".into()));
        }
        if self.ell < 1 {
            return Err(Error::InvalidSpec("ell must be >= 1".into()));
        }
        if self.t >= self.ell {
            return Err(Error::InvalidSpec(format!(
                "t = {} is not in [0, {})",
                self.t, self.ell
            )));
        }
        if !numtheory::gcd(&BigInt::from(self.t), &BigInt::from(self.ell)).is_one() {
            return Err(Error::InvalidSpec(format!(
                "gcd(t, ell) = gcd({}, {}) != 1",
                self.t, self.ell
            )));
        }
        if self.c.is_zero() {
            return Err(Error::InvalidSpec("c must be nonzero".into()));
        }
        let ell = BigInt::from(self.ell);
        let qs = (&self.params.q * BigInt::from(self.s)).mod_floor(&ell);
        if qs != self.params.p.mod_floor(&ell) {
            return Err(Error::InvalidSpec(format!(
                "q s != p (mod {}), s = {}",
                self.ell, self.s
            )));
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        self.validate_basic()?;
        if !self.existence_holds() {
            return Err(Error::InvalidSpec(format!(
                "existence criterion fails: {} does not divide q^{} - p^{}",
                self.ell, self.dim, self.dim
            )));
        }
        Ok(())
    }

    /// ell | q^dim - p^dim.
    pub fn existence_holds(&self) -> bool {
        (self.params.modulus(self.dim) % BigInt::from(self.ell)).is_zero()
    }
}

/// The exact matrices realizing a [`RepSpec`], at the common cyclotomic
/// order lcm(ell, order of c).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixPair {
    pub a: CycMatrix,
    pub b: CycMatrix,
    /// Common cyclotomic order of all entries.
    pub order: u64,
    /// Order of B.
    pub ell: u64,
}

impl MatrixPair {
    pub fn dim(&self) -> u32 {
        self.a.rows() as u32
    }
}

/// The diagonal exponents of B: [t s^0, t s^1, ..., t s^(dim-1)] mod ell.
pub fn eigenvalue_exponents(spec: &RepSpec) -> Vec<u64> {
    let ell = spec.ell as u128;
    let mut exps = Vec::with_capacity(spec.dim as usize);
    let mut e = (spec.t as u128) % ell.max(1);
    for _ in 0..spec.dim {
        exps.push(e as u64);
        e = e * (spec.s as u128) % ell;
    }
    exps
}

/// Constructs the canonical pair (A, B) of a valid spec.
pub fn build_matrices(spec: &RepSpec) -> Result<MatrixPair> {
    spec.validate()?;
    build_matrices_unchecked(spec)
}

/// The same construction without the existence check; the resulting pair
/// fails [`verify_relation`] exactly when ell does not divide q^dim - p^dim.
pub fn build_matrices_unchecked(spec: &RepSpec) -> Result<MatrixPair> {
    spec.validate_basic()?;
    let order = spec.ell.lcm(&spec.c.order());
    let dim = spec.dim as usize;
    let c = spec.c.change_order(order)?;
    let a = CycMatrix::from_fn(dim, dim, order, |i, j| {
        if (j + 1) % dim == i {
            c.clone()
        } else {
            CycNum::zero(order)
        }
    })?;
    let step = (order / spec.ell) as i64;
    let exps = eigenvalue_exponents(spec);
    let b = CycMatrix::from_fn(dim, dim, order, |i, j| {
        if i == j {
            zeta(order, exps[i] as i64 * step)
        } else {
            CycNum::zero(order)
        }
    })?;
    Ok(MatrixPair { a, b, order, ell: spec.ell })
}

/// base^k mod ell, with negative k via the modular inverse of base.
fn pow_mod_signed(base: &BigInt, k: i64, ell: u64) -> Result<u64> {
    let m = BigInt::from(ell);
    let b = if k < 0 {
        numtheory::mod_inverse(base, &m)?
    } else {
        base.mod_floor(&m)
    };
    let r = b.modpow(&BigInt::from(k.unsigned_abs()), &m);
    Ok(r.to_u64().expect("residue fits in u64"))
}

/// B to a signed exponent, reduced mod ell first.
fn b_power(pair: &MatrixPair, e: &BigInt) -> Result<CycMatrix> {
    let r = e.mod_floor(&BigInt::from(pair.ell));
    pair.b.mat_pow(r.to_i64().expect("reduced exponent fits in i64"))
}

/// True iff A B^p = B^q A exactly.
pub fn verify_relation(pair: &MatrixPair, params: &BSParams) -> Result<bool> {
    let left = pair.a.mat_mul(&b_power(pair, &params.p)?)?;
    let right = b_power(pair, &params.q)?.mat_mul(&pair.a)?;
    Ok(left == right)
}

/// True iff A^-1 B A = B^s exactly.
pub fn verify_conjugation_law(pair: &MatrixPair, s: u64) -> Result<bool> {
    let a_inv = pair.a.inverse().map_err(|_| Error::Singular)?;
    let left = a_inv.mat_mul(&pair.b)?.mat_mul(&pair.a)?;
    let right = b_power(pair, &BigInt::from(s))?;
    Ok(left == right)
}

/// True iff B^(p^k) = A^-k B^(q^k) A^k exactly, exponents reduced mod ell.
pub fn verify_power_identity(pair: &MatrixPair, params: &BSParams, k: i64) -> Result<bool> {
    if k.abs() > POWER_IDENTITY_MAX_K {
        return Err(Error::PreconditionFailed(format!(
            "|k| = {} exceeds the bound {POWER_IDENTITY_MAX_K}",
            k.abs()
        )));
    }
    let ep = pow_mod_signed(&params.p, k, pair.ell)?;
    let eq = pow_mod_signed(&params.q, k, pair.ell)?;
    let left = b_power(pair, &BigInt::from(ep))?;
    let right = pair
        .a
        .mat_pow(-k)?
        .mat_mul(&b_power(pair, &BigInt::from(eq))?)?
        .mat_mul(&pair.a.mat_pow(k)?)?;
    Ok(left == right)
}

/// Returns c^dim after asserting A^dim is that scalar matrix.
pub fn a_power_scalar(pair: &MatrixPair) -> Result<CycNum> {
    let n = pair.a.rows();
    let m = pair.a.mat_pow(n as i64)?;
    let scalar = m.get(0, 0).clone();
    for i in 0..n {
        for j in 0..n {
            let e = m.get(i, j);
            let ok = if i == j { e == &scalar } else { e.is_zero() };
            if !ok {
                return Err(Error::StructureViolation(
                    "A^dim is not a scalar matrix".to_string(),
                ));
            }
        }
    }
    Ok(scalar)
}
