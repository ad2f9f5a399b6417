//! Acceptance gate: seven end-to-end criteria, each printed as a single
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; any failure fails the corresponding test.

use std::time::{Duration, Instant};

use bsirrep::classify::{
    self, are_equivalent, classify_dimension, count_irreducibles, intertwiner, is_irreducible,
};
use bsirrep::cyclotomic::{cyclotomic_polynomial, zeta, CycNum, Rational};
use bsirrep::error::Result;
use bsirrep::numtheory::{
    self, divisors, euler_phi_u64, factorize, multiplicative_order, power_difference, solve_s,
};
use bsirrep::oracle::{
    burnside_irreducible, invariant_subspace_witness, run_sweep, sweep_params, SweepConfig,
};
use bsirrep::repcore::{
    self, build_matrices, build_matrices_unchecked, eigenvalue_exponents, BSParams, RepSpec,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bs(p: i64, q: i64) -> BSParams {
    BSParams::new(BigInt::from(p), BigInt::from(q)).unwrap()
}

fn report(criterion: u32, label: &str, pass: bool, elapsed: Duration) {
    println!(
        "ACCEPTANCE {criterion} {}: {label} ({:.2}s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(pass, "acceptance criterion {criterion} failed: {label}");
}

/// Criterion 1: the BS(2, 5), dim 3 worked example, exactly.
#[test]
fn criterion_1_worked_example() {
    let start = Instant::now();
    let params = bs(2, 5);

    let modulus = params.modulus(3);
    let mut ok = modulus == BigInt::from(117);
    let f = factorize(&modulus).unwrap();
    ok &= f.factors() == [(BigInt::from(3), 2), (BigInt::from(13), 1)];

    ok &= solve_s(&BigInt::from(2), &BigInt::from(5), &BigInt::from(3)).unwrap() == BigInt::one();
    ok &= solve_s(&BigInt::from(2), &BigInt::from(5), &BigInt::from(9)).unwrap()
        == BigInt::from(4);

    let spec = RepSpec::new(params.clone(), 3, 9, 1, CycNum::one(1)).unwrap();
    ok &= eigenvalue_exponents(&spec) == vec![1, 4, 7];

    ok &= !is_irreducible(&params, 3, 3).unwrap();
    ok &= is_irreducible(&params, 3, 9).unwrap();

    let elapsed = start.elapsed();
    report(
        1,
        "BS(2,5) dim 3 worked example reproduced exactly",
        ok && elapsed < Duration::from_secs(1),
        elapsed,
    );
}

/// Criterion 2: the classification criterion agrees with the Burnside
/// spanning oracle, and every reducible case yields a verified witness,
/// across |p|, |q| <= 7, dims 2-4, all divisors ell <= 2000.
#[test]
fn criterion_2_criterion_oracle_sweep() {
    let start = Instant::now();
    let cfg = SweepConfig {
        p_max: 7,
        q_max: 7,
        dims: 2..=4,
        max_ell: 2000,
        seed: 0xB5,
        inject_fault: false,
    };
    let summary = run_sweep(&cfg).unwrap();
    let ok = summary.disagreements.is_empty() && !summary.truncated && summary.records_checked > 0;
    let elapsed = start.elapsed();
    report(
        2,
        &format!(
            "criterion vs oracle on {} records, {} disagreements",
            summary.records_checked,
            summary.disagreements.len()
        ),
        ok && elapsed < Duration::from_secs(300),
        elapsed,
    );
}

fn random_c(rng: &mut ChaCha8Rng) -> CycNum {
    match rng.gen_range(0..4) {
        0 => CycNum::from_rational(
            1,
            &Rational::new(BigInt::from(rng.gen_range(1..=5i64)), BigInt::from(rng.gen_range(1..=4i64))),
        ),
        1 => CycNum::from_integer(1, *[-2, -1, 2, 3].iter().nth(rng.gen_range(0..4)).unwrap()),
        2 => {
            let order = [3u64, 4, 5, 8][rng.gen_range(0..4)];
            zeta(order, rng.gen_range(1..order as i64))
        }
        _ => {
            let order = [3u64, 4, 6][rng.gen_range(0..3)];
            zeta(order, 1)
                .scale(&Rational::new(BigInt::from(rng.gen_range(1..=3i64)), BigInt::one()))
        }
    }
}

fn random_coprime_t(rng: &mut ChaCha8Rng, ell: u64) -> u64 {
    if ell == 1 {
        return 0;
    }
    loop {
        let t = rng.gen_range(1..ell);
        if numtheory::gcd(&BigInt::from(t), &BigInt::from(ell)).is_one() {
            return t;
        }
    }
}

fn all_verifiers_pass(spec: &RepSpec) -> Result<bool> {
    let pair = build_matrices(spec)?;
    let mut ok = repcore::verify_relation(&pair, &spec.params)?;
    ok &= repcore::verify_conjugation_law(&pair, spec.s)?;
    for k in -3i64..=3 {
        ok &= repcore::verify_power_identity(&pair, &spec.params, k)?;
    }
    let scalar = repcore::a_power_scalar(&pair)?;
    let want = spec.c.pow(spec.dim as i64)?;
    let (g, w) = bsirrep::cyclotomic::lift_to_common_order(&scalar, &want)?;
    ok &= g == w;
    Ok(ok)
}

/// Criterion 3: 500 random valid specs pass every verifier exactly; 100
/// existence-violating specs fail the defining relation.
#[test]
fn criterion_3_relation_properties() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pool: Vec<BSParams> = sweep_params(5, 5);
    let mut valid_checked = 0u32;
    let mut ok = true;

    while valid_checked < 500 {
        let params = pool[rng.gen_range(0..pool.len())].clone();
        let dim = rng.gen_range(1..=6u32);
        let modulus = params.modulus(dim);
        if modulus.is_zero() {
            continue;
        }
        let f = factorize(&modulus.abs()).unwrap();
        let divs: Vec<BigInt> = divisors(&f)
            .unwrap()
            .into_iter()
            .filter(|d| *d <= BigInt::from(500))
            .collect();
        let ell = u64::try_from(&divs[rng.gen_range(0..divs.len())]).unwrap();
        let t = random_coprime_t(&mut rng, ell);
        let c = random_c(&mut rng);
        let spec = match RepSpec::new(params, dim, ell, t, c) {
            Ok(s) => s,
            Err(_) => continue,
        };
        match all_verifiers_pass(&spec) {
            Ok(true) => {}
            _ => {
                println!(
                    "verifier failure: BS({}, {}) dim {} ell {} t {}",
                    spec.params.p(),
                    spec.params.q(),
                    spec.dim,
                    spec.ell,
                    spec.t
                );
                ok = false;
            }
        }
        valid_checked += 1;
    }

    let mut violating_checked = 0u32;
    while violating_checked < 100 {
        let params = pool[rng.gen_range(0..pool.len())].clone();
        let dim = rng.gen_range(2..=6u32);
        let modulus = params.modulus(dim);
        if modulus.is_zero() {
            continue;
        }
        let ell = rng.gen_range(2..=500u64);
        let ell_big = BigInt::from(ell);
        // Violate only the existence divisibility: ell must not divide the
        // modulus, but q must stay invertible mod ell so the spec is
        // otherwise well-formed.
        if (&modulus % &ell_big).is_zero()
            || !numtheory::gcd(params.q(), &ell_big).is_one()
            || !numtheory::gcd(params.p(), &ell_big).is_one()
        {
            continue;
        }
        let t = random_coprime_t(&mut rng, ell);
        let spec = match RepSpec::new_unchecked(params, dim, ell, t, CycNum::one(1)) {
            Ok(s) => s,
            Err(_) => continue,
        };
        assert!(!spec.existence_holds());
        let pair = build_matrices_unchecked(&spec).unwrap();
        if repcore::verify_relation(&pair, &spec.params).unwrap() {
            println!(
                "relation unexpectedly held: BS({}, {}) dim {} ell {}",
                spec.params.p(),
                spec.params.q(),
                spec.dim,
                spec.ell
            );
            ok = false;
        }
        violating_checked += 1;
    }

    let elapsed = start.elapsed();
    report(
        3,
        "500 valid specs verified, 100 existence-violating specs rejected",
        ok,
        elapsed,
    );
}

/// Criterion 4: structure-theorem properties over the criterion-2 range.
#[test]
fn criterion_4_structure_theorem() {
    let start = Instant::now();
    let mut ok = true;
    let mut ells_seen = 0u32;
    for params in sweep_params(7, 7) {
        for dim in 2..=4u32 {
            let report_out = classify_dimension(&params, dim).unwrap();
            for rec in &report_out.records {
                ells_seen += 1;
                let ell = BigInt::from(rec.ell);
                if rec.ell > 1 {
                    let phi = euler_phi_u64(rec.ell).unwrap();
                    let diff = power_difference(params.p(), params.q(), phi as u32);
                    if !(&diff % &ell).is_zero() {
                        println!("ell = {} does not divide p^phi - q^phi", rec.ell);
                        ok = false;
                    }
                }
                let exists = classify::exists_rep(&params, dim, rec.ell);
                let irr = exists && is_irreducible(&params, dim, rec.ell).unwrap();
                let ord_is_dim = if rec.ell == 1 {
                    dim == 1
                } else {
                    multiplicative_order(&BigInt::from(rec.s), &ell).unwrap() == dim as u64
                };
                if irr != ord_is_dim {
                    println!(
                        "criterion mismatch at BS({}, {}) dim {} ell {}",
                        params.p(),
                        params.q(),
                        dim,
                        rec.ell
                    );
                    ok = false;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        4,
        &format!("structure theorem checked on {ells_seen} (params, dim, ell) records"),
        ok && ells_seen > 0,
        elapsed,
    );
}

fn verified_intertwiner(s1: &RepSpec, s2: &RepSpec) -> bool {
    match intertwiner(s1, s2) {
        Ok(Some(x)) => {
            let p1 = build_matrices(s1).unwrap();
            let p2 = build_matrices(s2).unwrap();
            let order = x.order();
            let (a1, b1) = (
                p1.a.change_order(order).unwrap(),
                p1.b.change_order(order).unwrap(),
            );
            let (a2, b2) = (
                p2.a.change_order(order).unwrap(),
                p2.b.change_order(order).unwrap(),
            );
            x.inverse().is_ok()
                && x.mat_mul(&a1).unwrap() == a2.mat_mul(&x).unwrap()
                && x.mat_mul(&b1).unwrap() == b2.mat_mul(&x).unwrap()
        }
        _ => false,
    }
}

/// Criterion 5: the equivalence suite.
#[test]
fn criterion_5_equivalence_suite() {
    let start = Instant::now();
    let params = bs(2, 5);
    let mut ok = true;

    // Same orbit: t = 1 and t = 1 * s = 4 at ell = 9.
    let t1 = RepSpec::new(params.clone(), 3, 9, 1, CycNum::one(1)).unwrap();
    let t4 = RepSpec::new(params.clone(), 3, 9, 4, CycNum::one(1)).unwrap();
    ok &= verified_intertwiner(&t1, &t4);

    // Twisting c by a dim-th root of unity preserves the class.
    let omega_c = RepSpec::new(params.clone(), 3, 9, 1, zeta(3, 1)).unwrap();
    ok &= verified_intertwiner(&t1, &omega_c);
    let omega2_c = RepSpec::new(params.clone(), 3, 9, 1, zeta(3, 2)).unwrap();
    ok &= verified_intertwiner(&t1, &omega2_c);

    // Cross-orbit (t = 2 is in the other orbit at ell = 9) and c^dim
    // mismatches are inequivalent.
    let t2 = RepSpec::new(params.clone(), 3, 9, 2, CycNum::one(1)).unwrap();
    ok &= !are_equivalent(&t1, &t2).unwrap();
    let c2 = RepSpec::new(params.clone(), 3, 9, 1, CycNum::from_integer(1, 2)).unwrap();
    ok &= !are_equivalent(&t1, &c2).unwrap();
    let c_i = RepSpec::new(params.clone(), 3, 9, 1, zeta(4, 1)).unwrap();
    ok &= !are_equivalent(&t1, &c_i).unwrap();

    // Reflexivity, symmetry, transitivity on sampled triples.
    let triples = [
        (t1.clone(), t4.clone(), omega_c.clone()),
        (t1.clone(), omega_c.clone(), omega2_c.clone()),
        (t2.clone(), c2.clone(), t1.clone()),
    ];
    for (x, y, z) in &triples {
        ok &= are_equivalent(x, x).unwrap();
        let xy = are_equivalent(x, y).unwrap();
        ok &= xy == are_equivalent(y, x).unwrap();
        let yz = are_equivalent(y, z).unwrap();
        if xy && yz {
            ok &= are_equivalent(x, z).unwrap();
        }
    }

    let elapsed = start.elapsed();
    report(
        5,
        "equivalence suite (orbits, c-twists, inequivalences, relation axioms)",
        ok && elapsed < Duration::from_secs(120),
        elapsed,
    );
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Criterion 6: cyclotomic kernel correctness.
#[test]
fn criterion_6_cyclotomic_kernel() {
    let start = Instant::now();
    let mut ok = true;

    for l in 1..=60u64 {
        let mut prod = vec![BigInt::one()];
        for d in 1..=l {
            if l % d == 0 {
                prod = poly_mul(&prod, cyclotomic_polynomial(d).coeffs());
            }
        }
        let mut want = vec![BigInt::zero(); l as usize + 1];
        want[0] = BigInt::from(-1);
        want[l as usize] = BigInt::one();
        if prod != want {
            println!("product of cyclotomic polynomials failed at L = {l}");
            ok = false;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let orders = [1u64, 2, 3, 4, 5, 6, 8, 9, 12, 15, 16, 20, 24];
    let rand_elem = |rng: &mut ChaCha8Rng, order: u64| {
        let deg = bsirrep::cyclotomic::phi_degree(order);
        let coeffs: Vec<Rational> = (0..deg)
            .map(|_| {
                Rational::new(
                    BigInt::from(rng.gen_range(-9..=9i64)),
                    BigInt::from(rng.gen_range(1..=4i64)),
                )
            })
            .collect();
        CycNum::from_coeffs(order, &coeffs).unwrap()
    };
    let close = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9;

    for _ in 0..1000 {
        let order = orders[rng.gen_range(0..orders.len())];
        let x = rand_elem(&mut rng, order);
        let y = rand_elem(&mut rng, order);
        let z = rand_elem(&mut rng, order);

        // Field axioms on the sampled triple.
        ok &= x.add(&y).unwrap() == y.add(&x).unwrap();
        ok &= x.mul(&y).unwrap() == y.mul(&x).unwrap();
        ok &= x.add(&y).unwrap().add(&z).unwrap() == x.add(&y.add(&z).unwrap()).unwrap();
        ok &= x.mul(&y).unwrap().mul(&z).unwrap() == x.mul(&y.mul(&z).unwrap()).unwrap();
        ok &= x.mul(&y.add(&z).unwrap()).unwrap()
            == x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
        ok &= x.sub(&x).unwrap().is_zero();
        if !x.is_zero() {
            ok &= x.mul(&x.inverse().unwrap()).unwrap().is_one();
        }

        // The embedding into C is a ring homomorphism.
        let (xf, yf) = (x.to_complex(), y.to_complex());
        let sum = x.add(&y).unwrap().to_complex();
        ok &= close(sum, (xf.0 + yf.0, xf.1 + yf.1));
        let prod = x.mul(&y).unwrap().to_complex();
        ok &= close(
            prod,
            (xf.0 * yf.0 - xf.1 * yf.1, xf.0 * yf.1 + xf.1 * yf.0),
        );
        if !ok {
            break;
        }
    }

    let elapsed = start.elapsed();
    report(
        6,
        "cyclotomic products to L = 60 and 1000 randomized field/embedding checks",
        ok,
        elapsed,
    );
}

/// Criterion 7: the count regression, triple-checked.
#[test]
fn criterion_7_count_regression() {
    let start = Instant::now();
    let params = bs(2, 5);
    let mut ok = count_irreducibles(&params, 3).unwrap() == 38;

    let report_out = classify_dimension(&params, 3).unwrap();
    let mut class_specs: Vec<RepSpec> = Vec::new();
    for rec in report_out.records.iter().filter(|r| r.irreducible) {
        for &t in &rec.orbit_reps {
            class_specs.push(RepSpec::new(params.clone(), 3, rec.ell, t, CycNum::one(1)).unwrap());
        }
    }
    ok &= class_specs.len() == 38;

    for spec in &class_specs {
        let pair = build_matrices(spec).unwrap();
        if !burnside_irreducible(&pair).unwrap() {
            println!("Burnside rejected ell = {} t = {}", spec.ell, spec.t);
            ok = false;
        }
        // The witness oracle must agree there is nothing to exhibit.
        if invariant_subspace_witness(&pair, spec).unwrap().is_some() {
            println!("unexpected witness at ell = {} t = {}", spec.ell, spec.t);
            ok = false;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let i = rng.gen_range(0..class_specs.len());
        let mut j = rng.gen_range(0..class_specs.len());
        while j == i {
            j = rng.gen_range(0..class_specs.len());
        }
        if intertwiner(&class_specs[i], &class_specs[j]).unwrap().is_some() {
            println!(
                "distinct classes found equivalent: (ell {}, t {}) vs (ell {}, t {})",
                class_specs[i].ell, class_specs[i].t, class_specs[j].ell, class_specs[j].t
            );
            ok = false;
        }
    }

    let elapsed = start.elapsed();
    report(
        7,
        "count 38 confirmed by orbit formula, Burnside oracle, intertwiner oracle",
        ok,
        elapsed,
    );
}
