//! Independent brute-force verifiers. Nothing here reuses the divisibility
//! criteria from [`crate::classify`]: irreducibility is decided by Burnside
//! span closure, reducibility is certified by an explicit invariant-subspace
//! witness, and group identities are checked by evaluating free words.

use crate::cyclotomic::{zeta, CycNum};
use crate::error::{Error, Result};
use crate::exactlinalg::{CycMatrix, CycVector, RowSpan};
use crate::numtheory;
use crate::repcore::{eigenvalue_exponents, MatrixPair, RepSpec};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Generators of Gamma = BS(p, q).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    A,
    B,
}

/// A freely reduced word in a and b: nonzero exponents, adjacent syllables
/// on distinct generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupWord {
    syllables: Vec<(Generator, BigInt)>,
}

impl GroupWord {
    pub fn empty() -> GroupWord {
        GroupWord { syllables: Vec::new() }
    }

    /// Builds a word, merging adjacent same-generator syllables and dropping
    /// zero exponents.
    pub fn new(syllables: impl IntoIterator<Item = (Generator, BigInt)>) -> GroupWord {
        let mut out: Vec<(Generator, BigInt)> = Vec::new();
        for (g, e) in syllables {
            if e.is_zero() {
                continue;
            }
            match out.last_mut() {
                Some((lg, le)) if *lg == g => {
                    *le += e;
                    if le.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        GroupWord { syllables: out }
    }

    pub fn syllables(&self) -> &[(Generator, BigInt)] {
        &self.syllables
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        GroupWord::new(self.syllables.iter().cloned().chain(other.syllables.iter().cloned()))
    }
}

/// Applies the representation to a word: the exact product of generator
/// powers in word order. b-exponents are reduced mod ell (B^ell = I) unless
/// `reduce_b` is false, which keeps the unreduced path for verification.
pub fn evaluate_word_with(pair: &MatrixPair, word: &GroupWord, reduce_b: bool) -> Result<CycMatrix> {
    let dim = pair.a.rows();
    let mut acc = CycMatrix::identity(dim, pair.order);
    for (g, e) in &word.syllables {
        let m = match g {
            Generator::A => pair.a.mat_pow(
                e.to_i64()
                    .ok_or_else(|| Error::PreconditionFailed(format!("a-exponent {e} too large")))?,
            )?,
            Generator::B => {
                let e = if reduce_b {
                    e.mod_floor(&BigInt::from(pair.ell))
                } else {
                    e.clone()
                };
                pair.b.mat_pow(
                    e.to_i64()
                        .ok_or_else(|| Error::PreconditionFailed(format!("b-exponent {e} too large")))?,
                )?
            }
        };
        acc = acc.mat_mul(&m)?;
    }
    Ok(acc)
}

pub fn evaluate_word(pair: &MatrixPair, word: &GroupWord) -> Result<CycMatrix> {
    evaluate_word_with(pair, word, true)
}

/// The defining relation a b^p a^-1 b^-q as a word; evaluates to the
/// identity on every valid pair.
pub fn relation_word(p: &BigInt, q: &BigInt) -> GroupWord {
    GroupWord::new([
        (Generator::A, BigInt::from(1)),
        (Generator::B, p.clone()),
        (Generator::A, BigInt::from(-1)),
        (Generator::B, -q.clone()),
    ])
}

/// Burnside density test: the representation is irreducible iff its image
/// spans the full d x d matrix algebra.
///
/// When both matrices are monomial with root-of-unity entries (every
/// canonical pair with a root-of-unity c is), the group image consists of
/// monomial matrices tracked by permutation and exponent vector, and the
/// span closure runs on that exact combinatorial encoding. Other pairs fall
/// back to the generic dense closure.
pub fn burnside_irreducible(pair: &MatrixPair) -> Result<bool> {
    let d = pair.a.rows();
    if d == 1 {
        return Ok(true);
    }
    if let (Some((sa, ea)), Some((sb, eb))) =
        (monomial_profile(&pair.a), monomial_profile(&pair.b))
    {
        let b_diagonal = sb.iter().enumerate().all(|(i, &c)| i == c);
        if b_diagonal && is_full_cycle(&sa) {
            return burnside_monomial(pair.order, d, &sa, &ea, &eb);
        }
    }
    burnside_dense(pair)
}

/// Generic span-closure fallback: close the span of the identity under left
/// and right multiplication by A, A^-1 and B until the dimension stabilizes.
/// The dimension is strictly monotone until stable and bounded by d^2, so
/// the fixpoint terminates in at most d^2 rounds.
pub(crate) fn burnside_dense(pair: &MatrixPair) -> Result<bool> {
    let d = pair.a.rows();
    if d == 1 {
        return Ok(true);
    }
    let a_inv = pair.a.inverse()?;
    let gens = [&pair.a, &a_inv, &pair.b];
    let mut span = RowSpan::new(pair.order, d * d);
    span.insert(&CycMatrix::identity(d, pair.order).flatten())?;
    let mut frontier: Vec<CycMatrix> = vec![CycMatrix::identity(d, pair.order)];
    loop {
        let before = span.dimension();
        let mut next_frontier = Vec::new();
        for m in &frontier {
            for g in gens {
                for prod in [g.mat_mul(m)?, m.mat_mul(g)?] {
                    if span.insert(&prod.flatten())? {
                        next_frontier.push(prod);
                    }
                }
            }
        }
        if span.dimension() == before || span.dimension() == d * d {
            break;
        }
        frontier = next_frontier;
    }
    Ok(span.dimension() == d * d)
}

/// Reads a matrix as a monomial (generalized permutation) matrix with
/// root-of-unity entries: row i carries `zeta^(exps[i])` in column sigma[i].
/// Returns None if any row has zero or several nonzeros, sigma is not a
/// permutation, or an entry is not exactly a power of zeta.
fn monomial_profile(m: &CycMatrix) -> Option<(Vec<usize>, Vec<u64>)> {
    let d = m.rows();
    if m.cols() != d {
        return None;
    }
    let mut sigma = Vec::with_capacity(d);
    let mut exps = Vec::with_capacity(d);
    let mut seen = vec![false; d];
    for i in 0..d {
        let mut nonzero = (0..d).filter(|&j| !m.get(i, j).is_zero());
        let j = nonzero.next()?;
        if nonzero.next().is_some() {
            return None;
        }
        let (r, e) = m.get(i, j).as_root_power()?;
        let order = m.get(i, j).order();
        // -zeta^e = zeta^(e + L/2); any other scale is not a root of unity.
        let e = if r.is_one() {
            e
        } else if (-&r).is_one() && order % 2 == 0 {
            (e + order / 2) % order
        } else {
            return None;
        };
        if std::mem::replace(&mut seen[j], true) {
            return None;
        }
        sigma.push(j);
        exps.push(e);
    }
    Some((sigma, exps))
}

fn is_full_cycle(sigma: &[usize]) -> bool {
    let d = sigma.len();
    let mut i = 0;
    for step in 1..=d {
        i = sigma[i];
        if i == 0 {
            return step == d;
        }
    }
    false
}

/// A formal integer combination of zeta powers, kept sparse and unreduced;
/// exact zero tests go through one batched reduction modulo Phi_L.
#[derive(Debug, Clone)]
struct ZetaSum {
    terms: Vec<(u64, BigInt)>,
}

impl ZetaSum {
    fn monomial(e: u64) -> ZetaSum {
        ZetaSum { terms: vec![(e, BigInt::from(1))] }
    }

    fn merge(mut terms: Vec<(u64, BigInt)>) -> ZetaSum {
        terms.sort_unstable_by_key(|(e, _)| *e);
        let mut out: Vec<(u64, BigInt)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => {
                    *lc += c;
                    if lc.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push((e, c)),
            }
        }
        ZetaSum { terms: out }
    }

    fn mul(&self, other: &ZetaSum, order: u64) -> ZetaSum {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                terms.push(((ea + eb) % order, ca * cb));
            }
        }
        ZetaSum::merge(terms)
    }

    fn sub(&self, other: &ZetaSum) -> ZetaSum {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(e, c)| (*e, -c)));
        ZetaSum::merge(terms)
    }

    fn is_zero(&self, cache: &mut ZetaPowerCache) -> bool {
        match self.terms.len() {
            0 => return true,
            // coefficients are nonzero after merging
            1 => return false,
            2 => {
                // c1 zeta^e1 + c2 zeta^e2 = 0 forces zeta^(e1-e2) rational,
                // i.e. equal to -1 (e1 = e2 is merged away)
                let ((e1, c1), (e2, c2)) = (&self.terms[0], &self.terms[1]);
                let l = cache.order;
                return l % 2 == 0 && (e2 - e1) == l / 2 && c1 == c2;
            }
            _ => {}
        }
        let phi = crate::cyclotomic::phi_degree(cache.order);
        let mut acc = vec![BigInt::from(0); phi];
        for (e, c) in &self.terms {
            for (k, v) in cache.get(*e).iter().enumerate() {
                if !v.is_zero() {
                    acc[k] += c * v;
                }
            }
        }
        acc.iter().all(Zero::is_zero)
    }
}

/// Memoized power-basis coordinates of zeta^e, shared across one closure run.
struct ZetaPowerCache {
    order: u64,
    vecs: Vec<Option<std::rc::Rc<Vec<BigInt>>>>,
}

impl ZetaPowerCache {
    fn new(order: u64) -> ZetaPowerCache {
        ZetaPowerCache { order, vecs: vec![None; order as usize] }
    }

    fn get(&mut self, e: u64) -> std::rc::Rc<Vec<BigInt>> {
        let i = (e % self.order) as usize;
        self.vecs[i]
            .get_or_insert_with(|| {
                std::rc::Rc::new(crate::cyclotomic::zeta_power_vec(self.order, i as i64))
            })
            .clone()
    }
}

/// Fraction-free incremental echelon over ZetaSum scalars; the widths here
/// are at most the representation dimension, so coefficient growth stays
/// negligible.
struct ZetaSpan {
    order: u64,
    rows: Vec<Vec<ZetaSum>>,
    pivots: Vec<usize>,
}

impl ZetaSpan {
    fn new(order: u64) -> ZetaSpan {
        ZetaSpan { order, rows: Vec::new(), pivots: Vec::new() }
    }

    fn insert(&mut self, mut v: Vec<ZetaSum>, cache: &mut ZetaPowerCache) -> bool {
        let order = self.order;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if v[pc].is_zero(cache) {
                v[pc] = ZetaSum { terms: Vec::new() };
                continue;
            }
            // v := lead(row) * v - v[pc] * row, eliminating column pc
            let a = row[pc].clone();
            let b = v[pc].clone();
            for j in 0..v.len() {
                v[j] = v[j].mul(&a, order).sub(&row[j].mul(&b, order));
            }
            debug_assert!(v[pc].terms.is_empty());
        }
        for j in 0..v.len() {
            if !v[j].is_zero(cache) {
                self.rows.push(v);
                self.pivots.push(j);
                return true;
            }
        }
        false
    }
}

/// Exact Burnside closure on the monomial encoding. Elements are group
/// image matrices `M[i][sigma(i)] = zeta^(s_i)`; left multiplication by the
/// four generator matrices explores the image, and only elements that grow
/// the span are kept on the frontier (products of a dependent element are
/// linear combinations of products of basis elements, so dropping it loses
/// nothing).
fn burnside_monomial(
    order: u64,
    d: usize,
    sigma_a: &[usize],
    exps_a: &[u64],
    exps_b: &[u64],
) -> Result<bool> {
    type Elem = (Vec<usize>, Vec<u64>);
    let invert = |(sigma, exps): &Elem| -> Elem {
        let mut s = vec![0usize; d];
        let mut x = vec![0u64; d];
        for i in 0..d {
            s[sigma[i]] = i;
            x[sigma[i]] = (order - exps[i] % order) % order;
        }
        (s, x)
    };
    let a: Elem = (sigma_a.to_vec(), exps_a.to_vec());
    let b: Elem = ((0..d).collect(), exps_b.to_vec());
    let gens = [a.clone(), invert(&a), b.clone(), invert(&b)];
    let compose = |g: &Elem, m: &Elem| -> Elem {
        let mut sigma = vec![0usize; d];
        let mut exps = vec![0u64; d];
        for i in 0..d {
            sigma[i] = m.0[g.0[i]];
            exps[i] = (g.1[i] + m.1[g.0[i]]) % order;
        }
        (sigma, exps)
    };

    let mut buckets: std::collections::HashMap<Vec<usize>, ZetaSpan> =
        std::collections::HashMap::new();
    let mut cache = ZetaPowerCache::new(order);
    let mut total = 0usize;
    let identity: Elem = ((0..d).collect(), vec![0; d]);
    let mut frontier = vec![identity.clone()];
    buckets
        .entry(identity.0.clone())
        .or_insert_with(|| ZetaSpan::new(order))
        .insert(
            identity.1.iter().map(|&e| ZetaSum::monomial(e)).collect::<Vec<_>>(),
            &mut cache,
        )
        .then_some(())
        .expect("identity spans a line");
    total += 1;

    while let Some(m) = frontier.pop() {
        if total == d * d {
            break;
        }
        for g in &gens {
            let child = compose(g, &m);
            let span = buckets
                .entry(child.0.clone())
                .or_insert_with(|| ZetaSpan::new(order));
            let v = child.1.iter().map(|&e| ZetaSum::monomial(e)).collect::<Vec<_>>();
            if span.insert(v, &mut cache) {
                total += 1;
                frontier.push(child);
            }
        }
    }
    // distinct powers of a full cycle have pairwise disjoint supports, so
    // the bucket dimensions add up
    debug_assert!(buckets.len() <= d);
    Ok(total == d * d)
}

/// For a reducible canonical pair, constructs an explicit proper invariant
/// subspace and verifies it exactly before returning. Returns None when the
/// eigenvalue exponents of B are pairwise distinct (the irreducible case).
///
/// When m = ord_ell(s) < dim the diagonal of B is m-periodic, so the m-th
/// power of the shift underlying A commutes with both A and B; any of its
/// eigenspaces is invariant.
pub fn invariant_subspace_witness(
    pair: &MatrixPair,
    spec: &RepSpec,
) -> Result<Option<Vec<CycVector>>> {
    let dim = spec.dim as usize;
    let exps = eigenvalue_exponents(spec);
    let distinct = {
        let mut seen = exps.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == dim
    };
    if distinct {
        return Ok(None);
    }
    let m = numtheory::multiplicative_order(&BigInt::from(spec.s), &BigInt::from(spec.ell))?
        as usize;
    debug_assert!(m < dim && dim % m == 0);
    let r = (dim / m) as u64;
    // mu = primitive r-th root of unity, at an order containing both.
    let order = pair.order.lcm(&r);
    let mu_inv = zeta(order, -((order / r) as i64));
    let mut basis = Vec::with_capacity(m);
    for c in 0..m {
        let mut v = vec![CycNum::zero(order); dim];
        let mut w = CycNum::one(order);
        for k in 0..(r as usize) {
            v[c + k * m] = w.clone();
            w = w.mul(&mu_inv)?;
        }
        basis.push(CycVector::new(order, v)?);
    }
    // Exact verification that span(basis) is invariant. The basis vectors
    // have pairwise disjoint supports (independence is structural), and on
    // the canonical pair each generator maps a basis vector to an exact
    // scalar multiple of a basis vector: B v_c = lambda v_c because the
    // diagonal of B is m-periodic, and A shifts the support class by one.
    // Proportionality is checked entrywise, which proves membership in the
    // span without any elimination.
    let a = pair.a.change_order(order)?;
    let b = pair.b.change_order(order)?;
    for (c, v) in basis.iter().enumerate() {
        let bv = b.mul_vec(v)?;
        let lam = bv.entries()[c].clone();
        for i in 0..dim {
            if bv.entries()[i] != lam.mul(&v.entries()[i])? {
                return Err(Error::WitnessVerificationFailed);
            }
        }
        let av = a.mul_vec(v)?;
        let c2 = (0..dim)
            .find(|&i| !av.entries()[i].is_zero())
            .ok_or(Error::WitnessVerificationFailed)?
            % m;
        let w = &basis[c2];
        let mu = av.entries()[c2].clone();
        if mu.is_zero() {
            return Err(Error::WitnessVerificationFailed);
        }
        for i in 0..dim {
            if av.entries()[i] != mu.mul(&w.entries()[i])? {
                return Err(Error::WitnessVerificationFailed);
            }
        }
    }
    Ok(Some(basis))
}

// ---------------------------------------------------------------------------
// Sweep harness
// ---------------------------------------------------------------------------

/// One criterion/oracle disagreement found by [`run_sweep`].
#[derive(Debug, Clone)]
pub struct Disagreement {
    pub p: i64,
    pub q: i64,
    pub dim: u32,
    pub ell: u64,
    pub criterion_irreducible: bool,
    pub oracle_irreducible: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct SweepSummary {
    pub records_checked: u64,
    pub identity_checks: u64,
    pub disagreements: Vec<Disagreement>,
    /// True when a budget refusal truncated the sweep.
    pub truncated: bool,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub p_max: i64,
    pub q_max: i64,
    pub dims: std::ops::RangeInclusive<u32>,
    /// Skip divisors above this bound.
    pub max_ell: u64,
    pub seed: u64,
    /// Test hook: deliberately flip one oracle verdict.
    pub inject_fault: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            p_max: 7,
            q_max: 7,
            dims: 2..=4,
            max_ell: 2000,
            seed: 0,
            inject_fault: false,
        }
    }
}

/// Every normalized coprime pair with |p| <= p_max, 0 < q <= q_max,
/// excluding |p| = q = 1.
pub fn sweep_params(p_max: i64, q_max: i64) -> Vec<crate::repcore::BSParams> {
    let mut out = Vec::new();
    for p in -p_max..=p_max {
        if p == 0 {
            continue;
        }
        for q in 1..=q_max {
            if p.abs() == 1 && q == 1 {
                continue;
            }
            if let Ok(params) = crate::repcore::BSParams::new(BigInt::from(p), BigInt::from(q)) {
                out.push(params);
            }
        }
    }
    out
}

/// Runs the criterion/oracle agreement sweep plus word-identity checks on
/// every canonical representation (t = smallest primitive residue, c = 1)
/// within the configured bounds.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepSummary> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut summary = SweepSummary::default();
    let mut faulted = !cfg.inject_fault;
    for params in sweep_params(cfg.p_max, cfg.q_max) {
        for dim in cfg.dims.clone() {
            let modulus = params.modulus(dim).abs();
            let fact = match numtheory::factorize(&modulus) {
                Ok(f) => f,
                Err(Error::FactorizationBudgetExceeded { .. }) => {
                    summary.truncated = true;
                    continue;
                }
                Err(e) => return Err(e),
            };
            for ell in numtheory::divisors(&fact)? {
                let Some(ell) = ell.to_u64().filter(|&e| e <= cfg.max_ell) else {
                    continue;
                };
                let t = if ell == 1 { 0 } else { 1 };
                let spec = RepSpec::new(params.clone(), dim, ell, t, CycNum::one(1))?;
                let pair = crate::repcore::build_matrices(&spec)?;
                let criterion = crate::classify::is_irreducible(&params, dim, ell)?;
                let mut oracle = burnside_irreducible(&pair)?;
                if !faulted {
                    oracle = !oracle;
                    faulted = true;
                }
                summary.records_checked += 1;
                if criterion != oracle {
                    summary.disagreements.push(Disagreement {
                        p: params.p().to_i64().unwrap_or(0),
                        q: params.q().to_i64().unwrap_or(0),
                        dim,
                        ell,
                        criterion_irreducible: criterion,
                        oracle_irreducible: oracle,
                        detail: "Burnside span disagrees with the divisibility criterion".into(),
                    });
                    continue;
                }
                // witness exactly in the reducible cases
                let witness = invariant_subspace_witness(&pair, &spec)?;
                if witness.is_some() == criterion {
                    summary.disagreements.push(Disagreement {
                        p: params.p().to_i64().unwrap_or(0),
                        q: params.q().to_i64().unwrap_or(0),
                        dim,
                        ell,
                        criterion_irreducible: criterion,
                        oracle_irreducible: oracle,
                        detail: "invariant-subspace witness presence contradicts verdict".into(),
                    });
                    continue;
                }
                // group identities: the defining relation evaluates to I,
                // and a seeded random instance of b^(p^k) = a^-k b^(q^k) a^k
                let rel = relation_word(params.p(), params.q());
                let k = rng.gen_range(-3..=3);
                let identities_ok = evaluate_word(&pair, &rel)?.is_identity()
                    && crate::repcore::verify_power_identity(&pair, &params, k)?;
                if !identities_ok {
                    summary.disagreements.push(Disagreement {
                        p: params.p().to_i64().unwrap_or(0),
                        q: params.q().to_i64().unwrap_or(0),
                        dim,
                        ell,
                        criterion_irreducible: criterion,
                        oracle_irreducible: oracle,
                        detail: "a group identity does not evaluate to the identity matrix".into(),
                    });
                }
                summary.identity_checks += 1;
            }
        }
    }
    Ok(summary)
}
