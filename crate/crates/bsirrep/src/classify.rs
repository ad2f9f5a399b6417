//! The classification core: existence and irreducibility criteria, full
//! enumeration per dimension, and equivalence of canonical representations.
//!
//! Existence: an (A, B) pair of canonical form exists iff ell divides
//! q^dim - p^dim. Irreducibility: iff ell divides no q^k - p^k for
//! 1 <= k <= dim - 1. Distinct t in the same orbit of t -> t*s (mod ell)
//! give equivalent representations (a basis rotation); the intertwiner
//! computation is the ground truth for inequivalence across orbits.

use crate::error::{Error, Result};
use crate::exactlinalg::CycMatrix;
use crate::numtheory::{self, Budget, Factorization};
use crate::repcore::{build_matrices, BSParams, RepSpec};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Per-divisor classification data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRecord {
    pub ell: u64,
    /// The conjugation exponent solving q s = p (mod ell).
    pub s: u64,
    /// Minimal element of each orbit of t -> t s (mod ell) on the residues
    /// coprime to ell, ascending.
    pub orbit_reps: Vec<u64>,
    pub irreducible: bool,
    /// Size of each orbit: the multiplicative order of s mod ell.
    pub orbit_size: u64,
    /// phi(ell) / orbit_size for irreducible records, else 0.
    pub class_count: u64,
}

/// Classification of all canonical representations of one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub params: BSParams,
    pub dim: u32,
    /// q^dim - p^dim.
    pub modulus: BigInt,
    /// Factorization of |modulus|.
    pub factorization: Factorization,
    /// One record per divisor of |modulus|, ascending by ell.
    pub records: Vec<ClassRecord>,
}

/// Budgets for [`classify_dimension_with`].
#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub budget: Budget,
    /// Refuse divisors beyond this bound instead of enumerating orbits on
    /// enormous residue rings.
    pub max_ell: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            budget: Budget::default(),
            max_ell: 1_000_000,
        }
    }
}

/// True iff ell divides q^dim - p^dim.
pub fn exists_rep(params: &BSParams, dim: u32, ell: u64) -> bool {
    (params.modulus(dim) % BigInt::from(ell)).is_zero()
}

/// True iff ell divides no q^k - p^k for 1 <= k <= dim - 1.
/// Requires existence; vacuously true at dim = 1.
pub fn is_irreducible(params: &BSParams, dim: u32, ell: u64) -> Result<bool> {
    if !exists_rep(params, dim, ell) {
        return Err(Error::PreconditionFailed(format!(
            "no representation: {ell} does not divide q^{dim} - p^{dim}"
        )));
    }
    let ell = BigInt::from(ell);
    for k in 1..dim {
        if (numtheory::power_difference(params.p(), params.q(), k) % &ell).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Orbits of t -> t s (mod ell) on the residues coprime to ell; returns the
/// minimal representative of each orbit, ascending. For ell = 1 the single
/// residue is 0.
pub fn orbit_representatives(ell: u64, s: u64) -> Vec<u64> {
    if ell == 1 {
        return vec![0];
    }
    let mut visited = vec![false; ell as usize];
    let mut reps = Vec::new();
    for t in 1..ell {
        if visited[t as usize] || numtheory::gcd(&BigInt::from(t), &BigInt::from(ell)) != BigInt::from(1)
        {
            continue;
        }
        let mut rep = t;
        let mut x = t;
        loop {
            visited[x as usize] = true;
            rep = rep.min(x);
            x = ((x as u128 * s as u128) % ell as u128) as u64;
            if x == t {
                break;
            }
        }
        reps.push(rep);
    }
    reps.sort_unstable();
    reps
}

fn record_for(params: &BSParams, dim: u32, ell: u64, budget: &Budget) -> Result<ClassRecord> {
    let ell_big = BigInt::from(ell);
    let s = numtheory::solve_s(params.p(), params.q(), &ell_big)?
        .to_u64()
        .expect("s < ell");
    let orbit_size = numtheory::multiplicative_order_with(&BigInt::from(s), &ell_big, budget)?;
    let irreducible = is_irreducible(params, dim, ell)?;
    let phi = numtheory::euler_phi_with(&ell_big, budget)?
        .to_u64()
        .expect("phi(ell) fits in u64 for ell within budget");
    let class_count = if irreducible { phi / orbit_size } else { 0 };
    Ok(ClassRecord {
        ell,
        s,
        orbit_reps: orbit_representatives(ell, s),
        irreducible,
        orbit_size,
        class_count,
    })
}

/// One record per divisor ell of |q^dim - p^dim|, ascending.
pub fn classify_dimension(params: &BSParams, dim: u32) -> Result<ClassificationReport> {
    classify_dimension_with(params, dim, &ClassifyOptions::default())
}

pub fn classify_dimension_with(
    params: &BSParams,
    dim: u32,
    opts: &ClassifyOptions,
) -> Result<ClassificationReport> {
    let modulus = params.modulus(dim);
    let factorization = numtheory::factorize_with(&modulus.abs(), &opts.budget)?;
    let divisors = numtheory::divisors_with(&factorization, &opts.budget)?;
    let mut records = Vec::with_capacity(divisors.len());
    for ell in divisors {
        let Some(ell_u) = ell.to_u64().filter(|&e| e <= opts.max_ell) else {
            return Err(Error::EllBudgetExceeded(ell, opts.max_ell));
        };
        records.push(record_for(params, dim, ell_u, &opts.budget)?);
    }
    Ok(ClassificationReport {
        params: params.clone(),
        dim,
        modulus,
        factorization,
        records,
    })
}

/// Number of equivalence classes of irreducible canonical representations
/// (fixed c), summed over admissible ell.
pub fn count_irreducibles(params: &BSParams, dim: u32) -> Result<u64> {
    let report = classify_dimension(params, dim)?;
    Ok(report.records.iter().map(|r| r.class_count).sum())
}

/// Searches the space of intertwiners X with X A1 = A2 X and X B1 = B2 X for
/// an invertible element; returns it as an equivalence witness.
///
/// The kernel of the stacked Sylvester system is computed exactly. Every
/// kernel basis vector is tested for invertibility, then a fixed sequence of
/// small integer combinations; for irreducible pairs Schur's lemma makes any
/// nonzero intertwiner invertible, so the basis sweep is already decisive.
pub fn intertwiner(spec1: &RepSpec, spec2: &RepSpec) -> Result<Option<CycMatrix>> {
    if spec1.params != spec2.params || spec1.dim != spec2.dim {
        return Err(Error::IncompatibleSpecs(format!(
            "specs disagree on (p, q, dim): ({}, {}, {}) vs ({}, {}, {})",
            spec1.params.p(),
            spec1.params.q(),
            spec1.dim,
            spec2.params.p(),
            spec2.params.q(),
            spec2.dim
        )));
    }
    let pair1 = build_matrices(spec1)?;
    let pair2 = build_matrices(spec2)?;
    let d = spec1.dim as usize;
    let order = pair1.order.lcm(&pair2.order);
    let a1 = pair1.a.change_order(order)?;
    let b1 = pair1.b.change_order(order)?;
    let a2 = pair2.a.change_order(order)?;
    let b2 = pair2.b.change_order(order)?;

    // Unknown X flattened row-major: x[k * d + j] = X_{kj}.
    // Equations (per generator G): sum_k G2_{ik} X_{kj} - sum_k X_{ik} G1_{kj} = 0.
    let mut sys = CycMatrix::zero(2 * d * d, d * d, order);
    for (block, (g1, g2)) in [(&a1, &a2), (&b1, &b2)].into_iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                let row = block * d * d + i * d + j;
                for k in 0..d {
                    let cur = sys.get(row, k * d + j).add(g2.get(i, k))?;
                    *sys.get_mut(row, k * d + j) = cur;
                    let cur = sys.get(row, i * d + k).sub(g1.get(k, j))?;
                    *sys.get_mut(row, i * d + k) = cur;
                }
            }
        }
    }
    let kernel = sys.kernel_basis();
    if kernel.is_empty() {
        return Ok(None);
    }
    let reshape = |entries: &[crate::cyclotomic::CycNum]| -> Result<CycMatrix> {
        CycMatrix::new(d, d, order, entries.to_vec())
    };
    for v in &kernel {
        let x = reshape(v.entries())?;
        if x.rank() == d {
            return Ok(Some(x));
        }
    }
    // Small deterministic combinations cover the reducible corner where no
    // single basis vector is invertible.
    for trial in 1..=8i64 {
        let mut acc = CycMatrix::zero(d, d, order);
        let mut w = 1i64;
        for v in &kernel {
            let x = reshape(v.entries())?;
            let c = crate::cyclotomic::CycNum::from_integer(order, w);
            acc = acc.add(&x.scale(&c)?)?;
            w = w * trial + 1;
        }
        if acc.rank() == d {
            return Ok(Some(acc));
        }
    }
    Ok(None)
}

/// True iff an invertible intertwiner exists.
pub fn are_equivalent(spec1: &RepSpec, spec2: &RepSpec) -> Result<bool> {
    Ok(intertwiner(spec1, spec2)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{zeta, CycNum};

    fn bs(p: i64, q: i64) -> BSParams {
        BSParams::new(BigInt::from(p), BigInt::from(q)).unwrap()
    }

    #[test]
    fn exists_rep_examples() {
        let params = bs(2, 5);
        assert!(exists_rep(&params, 3, 9));
        assert!(!exists_rep(&params, 3, 7));
        assert!(exists_rep(&params, 3, 1));
        assert!(exists_rep(&params, 1, 1));
    }

    #[test]
    fn is_irreducible_examples() {
        let params = bs(2, 5);
        assert!(is_irreducible(&params, 3, 9).unwrap());
        assert!(!is_irreducible(&params, 3, 3).unwrap());
        // oracle: 13 divides neither 3 nor 21
        assert!(is_irreducible(&params, 3, 13).unwrap());
        assert!(matches!(
            is_irreducible(&params, 3, 7),
            Err(Error::PreconditionFailed(_))
        ));
        // dim 1 is vacuously irreducible
        assert!(is_irreducible(&params, 1, 3).unwrap());
    }

    #[test]
    fn classify_bs25_dim3() {
        let report = classify_dimension(&bs(2, 5), 3).unwrap();
        assert_eq!(report.modulus, BigInt::from(117));
        let ells: Vec<u64> = report.records.iter().map(|r| r.ell).collect();
        assert_eq!(ells, vec![1, 3, 9, 13, 39, 117]);
        let flags: Vec<bool> = report.records.iter().map(|r| r.irreducible).collect();
        assert_eq!(flags, vec![false, false, true, true, true, true]);
        // oracle: orbits of t -> 4t mod 9 are {1,4,7} and {2,8,5}
        let r9 = report.records.iter().find(|r| r.ell == 9).unwrap();
        assert_eq!(r9.s, 4);
        assert_eq!(r9.orbit_size, 3);
        assert_eq!(r9.class_count, 2);
        assert_eq!(r9.orbit_reps, vec![1, 2]);
    }

    #[test]
    fn classify_bs12_dim2() {
        // modulus 2^2 - 1 = 3; ell = 3: s = 2, ord_3(2) = 2 = dim
        let report = classify_dimension(&bs(1, 2), 2).unwrap();
        assert_eq!(report.modulus, BigInt::from(3));
        let r3 = report.records.iter().find(|r| r.ell == 3).unwrap();
        assert_eq!(r3.s, 2);
        assert!(r3.irreducible);
        assert_eq!(r3.class_count, 1);
    }

    #[test]
    fn count_irreducibles_examples() {
        assert_eq!(count_irreducibles(&bs(2, 5), 3).unwrap(), 38);
        // dim 1: ell in {1, 3}; phi(1) + phi(3) = 1 + 2 = 3
        assert_eq!(count_irreducibles(&bs(2, 5), 1).unwrap(), 3);
    }

    #[test]
    fn ell_budget_enforced() {
        let opts = ClassifyOptions {
            budget: Budget::default(),
            max_ell: 10,
        };
        assert!(matches!(
            classify_dimension_with(&bs(2, 5), 3, &opts),
            Err(Error::EllBudgetExceeded(_, 10))
        ));
    }

    #[test]
    fn equivalence_examples() {
        let params = bs(2, 5);
        let s1 = RepSpec::new(params.clone(), 3, 9, 1, CycNum::one(1)).unwrap();
        let s4 = RepSpec::new(params.clone(), 3, 9, 4, CycNum::one(1)).unwrap();
        let s2 = RepSpec::new(params.clone(), 3, 9, 2, CycNum::one(1)).unwrap();
        // reflexive
        assert!(are_equivalent(&s1, &s1).unwrap());
        // same orbit {1, 4, 7}: the basis rotation intertwines
        let w = intertwiner(&s1, &s4).unwrap().expect("same-orbit specs are equivalent");
        // witness actually intertwines: X A1 = A2 X and X B1 = B2 X
        let p1 = build_matrices(&s1).unwrap();
        let p4 = build_matrices(&s4).unwrap();
        assert_eq!(
            w.mat_mul(&p1.a).unwrap(),
            p4.a.mat_mul(&w).unwrap()
        );
        assert_eq!(
            w.mat_mul(&p1.b).unwrap(),
            p4.b.mat_mul(&w).unwrap()
        );
        // cross orbit: t = 2 lies in {2, 8, 5}
        assert!(!are_equivalent(&s1, &s2).unwrap());
    }

    #[test]
    fn equivalence_rejects_mismatched_specs() {
        let s1 = RepSpec::new(bs(2, 5), 3, 9, 1, CycNum::one(1)).unwrap();
        let s2 = RepSpec::new(bs(1, 2), 2, 3, 1, CycNum::one(1)).unwrap();
        assert!(matches!(
            are_equivalent(&s1, &s2),
            Err(Error::IncompatibleSpecs(_))
        ));
    }

    #[test]
    fn scaling_c_by_dim_th_root_is_equivalent() {
        let params = bs(2, 5);
        let c = CycNum::from_integer(1, 2);
        let omega_c = zeta(3, 1).scale(&crate::cyclotomic::Rational::from(BigInt::from(2)));
        let s1 = RepSpec::new(params.clone(), 3, 9, 1, c).unwrap();
        let s2 = RepSpec::new(params, 3, 9, 1, omega_c).unwrap();
        assert!(are_equivalent(&s1, &s2).unwrap());
    }

    #[test]
    fn mismatched_c_power_is_inequivalent() {
        let params = bs(2, 5);
        let s1 = RepSpec::new(params.clone(), 3, 9, 1, CycNum::one(1)).unwrap();
        let s2 = RepSpec::new(params, 3, 9, 1, CycNum::from_integer(1, 2)).unwrap();
        assert!(!are_equivalent(&s1, &s2).unwrap());
    }
}
