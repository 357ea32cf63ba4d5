//! Acceptance gate: nine criteria covering the worked regressions, the
//! identity grids, the floating cross-check, the slice oracle, the
//! spherical bridge, and cyclotomic soundness.
//!
//! Each test prints exactly one `criterion N (...): PASS|FAIL` line (visible
//! under `--nocapture`) and then asserts, so the suite both documents and
//! enforces the contract.  Tolerances are pinned where a criterion allows
//! one; everything else is exact equality.

use std::time::{Duration, Instant};

use num::integer::lcm;
use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use isores::cyclotomic::eval_poly;
use isores::selfcheck::{
    check_closed_form_agreement, check_cyclotomic_roots, check_gamma_agreement,
    check_spherical_consistency, check_split_identity, check_swap_symmetry,
    check_zero_sum_identity,
};
use isores::{
    cyclotomic_polynomial, fiber_count, g_coefficient, rational::rat, CyclotomicElement, Rational,
    ResidueTuple, Signature, SubsetMask,
};

fn verdict(number: u32, label: &str, pass: bool) {
    let word = if pass { "PASS" } else { "FAIL" };
    println!("criterion {number} ({label}): {word}");
}

fn mask(indices: &[usize]) -> SubsetMask {
    SubsetMask::from_indices(indices).expect("in range")
}

#[test]
fn criterion_1_degree_regressions() {
    let cases: [(i64, i64, i64, Vec<i64>, i64); 6] = [
        (2, 1, 3, vec![2; 4], 9),
        (3, 4, -1, vec![3; 3], 4),
        (4, 5, -1, vec![4; 3], 5),
        (4, 13, 3, vec![4; 6], 8775),
        (2, 3, -1, vec![2; 3], 3),
        (2, 1, 1, vec![2; 3], 2),
    ];
    let mut failures = Vec::new();
    for (k, a1, a2, b, expected) in cases {
        let start = Instant::now();
        let got = Signature::new(k, a1, a2, b)
            .expect("valid signature")
            .degree_generic()
            .expect("valid signature");
        let elapsed = start.elapsed();
        if got != BigInt::from(expected) {
            failures.push(format!("({k}; {a1},{a2}): got {got}, expected {expected}"));
        }
        if elapsed > Duration::from_secs(1) {
            failures.push(format!("({k}; {a1},{a2}): took {elapsed:?}"));
        }
    }
    let pass = failures.is_empty();
    verdict(1, "degree regressions, exact, < 1 s each", pass);
    assert!(pass, "{failures:?}");
}

#[test]
fn criterion_2_fiber_regressions() {
    let mut failures = Vec::new();
    let mut timed = |label: &str, f: &mut dyn FnMut() -> Option<String>| {
        let start = Instant::now();
        if let Some(problem) = f() {
            failures.push(format!("{label}: {problem}"));
        }
        let elapsed = start.elapsed();
        if elapsed > Duration::from_secs(5) {
            failures.push(format!("{label}: took {elapsed:?}"));
        }
    };

    timed("three equal cube residues", &mut || {
        let sig = Signature::new(3, 4, -1, vec![3; 3]).unwrap();
        let rt = ResidueTuple::exact_parse(3, 1, &["1", "1", "1"]).unwrap();
        let report = fiber_count(&sig, &rt).unwrap();
        (*report.count() != BigInt::from(0)).then(|| format!("count {}", report.count()))
    });
    timed("three poles, obstructed tuple", &mut || {
        let sig = Signature::new(4, 5, -1, vec![4; 3]).unwrap();
        let rt = ResidueTuple::exact_parse(4, 4, &["1", "1", "1+z"]).unwrap();
        let report = fiber_count(&sig, &rt).unwrap();
        (*report.count() != BigInt::from(0)).then(|| format!("count {}", report.count()))
    });
    timed("six equal residues with shape subtotals", &mut || {
        let sig = Signature::new(4, 13, 3, vec![4; 6]).unwrap();
        let rt = ResidueTuple::exact_parse(4, 1, &["1"; 6]).unwrap();
        let report = fiber_count(&sig, &rt).unwrap();
        if *report.count() != BigInt::from(0) {
            return Some(format!("count {}", report.count()));
        }
        let expected: Vec<(Vec<u32>, Rational)> = vec![
            (vec![], rat(8775)),
            (vec![2], rat(-6075)),
            (vec![4], rat(-2430)),
            (vec![6], rat(-12000)),
            (vec![2, 2], rat(2295)),
            (vec![2, 4], rat(13770)),
            (vec![2, 2, 2], rat(-4335)),
        ];
        let got = report.subtotals_by_shape();
        (got != expected).then(|| format!("subtotals {got:?}"))
    });
    timed("single resonant pair", &mut || {
        let sig = Signature::new(2, 1, 3, vec![2; 4]).unwrap();
        let rt = ResidueTuple::exact_parse(2, 1, &["1", "3", "7", "-7"]).unwrap();
        let report = fiber_count(&sig, &rt).unwrap();
        (*report.count() != BigInt::from(8)).then(|| format!("count {}", report.count()))
    });

    let pass = failures.is_empty();
    verdict(2, "fiber regressions with subtotals, exact, < 5 s each", pass);
    assert!(pass, "{failures:?}");
}

#[test]
fn criterion_3_abelian_regressions() {
    let mut failures = Vec::new();
    let mut expect = |label: &str, got: u64, want: u64| {
        if got != want {
            failures.push(format!("{label}: got {got}, expected {want}"));
        }
    };

    let triple = ResidueTuple::exact_parse(3, 1, &["1", "1", "1"]).unwrap();
    expect(
        "three equal cube residues, full",
        triple.abelian_number(SubsetMask::full(3)).unwrap(),
        2,
    );

    let six = ResidueTuple::exact_parse(4, 1, &["1"; 6]).unwrap();
    expect("six 1s, pair", six.abelian_number(mask(&[1, 2])).unwrap(), 1);
    expect(
        "six 1s, quad",
        six.abelian_number(mask(&[1, 2, 3, 4])).unwrap(),
        9,
    );
    expect(
        "six 1s, full",
        six.abelian_number(SubsetMask::full(6)).unwrap(),
        100,
    );

    let worked = ResidueTuple::exact_parse(4, 4, &["1", "1", "1+z"]).unwrap();
    expect("worked pair", worked.abelian_number(mask(&[1, 2])).unwrap(), 1);
    expect(
        "worked full",
        worked.abelian_number(mask(&[1, 2, 3])).unwrap(),
        2,
    );

    let pass = failures.is_empty();
    verdict(3, "abelian number regressions, exact", pass);
    assert!(pass, "{failures:?}");
}

#[test]
fn criterion_4_g_coefficient_regressions() {
    let six = Signature::new(4, 13, 3, vec![4; 6]).unwrap();
    let small = Signature::new(4, 5, -1, vec![4; 3]).unwrap();
    let mut failures = Vec::new();
    let mut expect = |label: &str, got: Rational, want: Rational| {
        if got != want {
            failures.push(format!("{label}: got {got}, expected {want}"));
        }
    };

    expect(
        "single pair block",
        g_coefficient(&six, mask(&[3, 4, 5, 6]), &[mask(&[1, 2])]).unwrap(),
        rat(405),
    );
    expect(
        "two pair blocks",
        g_coefficient(&six, mask(&[5, 6]), &[mask(&[1, 2]), mask(&[3, 4])]).unwrap(),
        rat(51),
    );
    expect(
        "three pair blocks",
        g_coefficient(
            &six,
            SubsetMask::EMPTY,
            &[mask(&[1, 2]), mask(&[3, 4]), mask(&[5, 6])],
        )
        .unwrap(),
        rat(289),
    );
    let g = g_coefficient(
        &six,
        SubsetMask::EMPTY,
        &[mask(&[1, 2, 3, 4]), mask(&[5, 6])],
    )
    .unwrap();
    let f_quad = isores::abelian_f(3, 5).unwrap();
    let f_pair = isores::abelian_f(1, 3).unwrap();
    expect("quad+pair coefficient times f factors", g * f_quad * f_pair, rat(102));
    expect(
        "full-set block of the three-pole stratum",
        g_coefficient(&small, SubsetMask::EMPTY, &[mask(&[1, 2, 3])]).unwrap(),
        rat(1),
    );

    let pass = failures.is_empty();
    verdict(4, "G coefficient regressions, exact", pass);
    assert!(pass, "{failures:?}");
}

#[test]
fn criterion_5_identity_suites() {
    let start = Instant::now();
    let outcomes = [
        check_split_identity(),
        check_zero_sum_identity(),
        check_swap_symmetry(),
        check_closed_form_agreement(),
    ];
    let elapsed = start.elapsed();
    let mut failures: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.pass)
        .map(|o| format!("{}: {}", o.name, o.detail))
        .collect();
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("suites took {elapsed:?}"));
    }
    let pass = failures.is_empty();
    verdict(
        5,
        "identity suites: split grid, zero-sum, swap symmetry, closed form (k >= 2), < 60 s",
        pass,
    );
    assert!(pass, "{failures:?}");
}

#[test]
fn criterion_6_gamma_cross_check() {
    let outcome = check_gamma_agreement();
    verdict(
        6,
        "Gamma form within 1e-6 relative error, k in 2..=4, p <= 8",
        outcome.pass,
    );
    assert!(outcome.pass, "{}", outcome.detail);
}

/// Counts zero sums over all `k^d` root choices by an independent odometer
/// loop, no slicing.
fn unsliced_zero_sums(k: u32, roots: &[CyclotomicElement]) -> u64 {
    let mut conductor = k;
    for r in roots {
        conductor = lcm(conductor, r.conductor());
    }
    let zeta = CyclotomicElement::root_of_unity(conductor, (conductor / k) as i64);
    let scaled: Vec<Vec<CyclotomicElement>> = roots
        .iter()
        .map(|r| {
            let mut row = vec![r.embed(conductor).expect("lcm is a multiple")];
            for e in 1..k as usize {
                row.push(&row[e - 1] * &zeta);
            }
            row
        })
        .collect();
    let d = roots.len();
    let mut exponents = vec![0usize; d];
    let mut count = 0u64;
    loop {
        let mut sum = CyclotomicElement::zero(conductor);
        for (i, &e) in exponents.iter().enumerate() {
            sum = &sum + &scaled[i][e];
        }
        if sum.is_zero() {
            count += 1;
        }
        let mut pos = 0;
        loop {
            if pos == d {
                return count;
            }
            exponents[pos] += 1;
            if exponents[pos] < k as usize {
                break;
            }
            exponents[pos] = 0;
            pos += 1;
        }
    }
}

#[test]
fn criterion_7_slice_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0007);
    let mut failures = Vec::new();
    let instances = 240u32;
    for trial in 0..instances {
        let k = rng.gen_range(1u32..=5);
        let d = rng.gen_range(1usize..=4);
        let n = rng.gen_range(1u32..=4);
        let mut roots: Vec<CyclotomicElement> = Vec::with_capacity(d);
        while roots.len() < d {
            let coeffs = [
                rat(rng.gen_range(-2i128..=2)),
                rat(rng.gen_range(-2i128..=2)),
            ];
            let candidate = CyclotomicElement::from_power_coeffs(n, &coeffs);
            if !candidate.is_zero() {
                roots.push(candidate);
            }
        }
        if d >= 2 && rng.gen_range(0u32..3) == 0 {
            roots[d - 1] = -&roots[0];
        }
        let expected = unsliced_zero_sums(k, &roots);
        let tuple = ResidueTuple::exact_from_roots(k, roots).expect("nonzero roots");
        let sliced = tuple.abelian_number(SubsetMask::full(d)).expect("in range");
        if sliced * k as u64 != expected {
            failures.push(format!(
                "trial {trial}: k={k}, d={d}: {sliced} * k != {expected}"
            ));
        }
    }
    let pass = failures.is_empty();
    verdict(
        7,
        "abelian number times k equals the unsliced zero-sum count, 240 instances",
        pass,
    );
    assert!(pass, "{failures:?}");
}

#[test]
fn criterion_8_spherical_bridge() {
    let outcome = check_spherical_consistency();
    verdict(
        8,
        "spherical count equals the quadratic stratum degree, n <= 10",
        outcome.pass,
    );
    assert!(outcome.pass, "{}", outcome.detail);
}

#[test]
fn criterion_9_cyclotomic_soundness() {
    let mut failures = Vec::new();
    let roots = check_cyclotomic_roots();
    if !roots.pass {
        failures.push(format!("{}: {}", roots.name, roots.detail));
    }
    // Phi_N at every primitive power, small N, as a sharper variant.
    for n in 1u32..=16 {
        let phi = cyclotomic_polynomial(n);
        for e in 1..n {
            if num::integer::gcd(e, n) == 1 {
                let zeta = CyclotomicElement::root_of_unity(n, e as i64);
                if !eval_poly(&phi, &zeta).is_zero() {
                    failures.push(format!("Phi_{n}(zeta_{n}^{e}) != 0"));
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0009);
    let random_element = |rng: &mut ChaCha8Rng, n: u32| {
        let len = (n as usize).clamp(1, 6);
        let coeffs: Vec<Rational> = (0..len)
            .map(|_| rat(rng.gen_range(-3i128..=3)) / rat(rng.gen_range(1i128..=2)))
            .collect();
        CyclotomicElement::from_power_coeffs(n, &coeffs)
    };
    for trial in 0..160 {
        let n = rng.gen_range(1u32..=64);
        let x = random_element(&mut rng, n);
        let y = random_element(&mut rng, n);
        let z = random_element(&mut rng, n);
        let one = CyclotomicElement::one(n);
        let zero = CyclotomicElement::zero(n);
        let checks = [
            (&(&x + &y) + &z == &x + &(&y + &z), "add associativity"),
            (&(&x * &y) * &z == &x * &(&y * &z), "mul associativity"),
            (&x * &y == &y * &x, "mul commutativity"),
            (
                &x * &(&y + &z) == &(&x * &y) + &(&x * &z),
                "distributivity",
            ),
            (&x + &(-&x) == zero, "additive inverse"),
            (&x * &one == x, "multiplicative identity"),
        ];
        for (ok, law) in checks {
            if !ok {
                failures.push(format!("trial {trial}, N={n}: {law} fails"));
            }
        }
        if trial % 3 == 0 && !x.is_zero() {
            let inv = x.inverse().expect("nonzero");
            if &x * &inv != one {
                failures.push(format!("trial {trial}, N={n}: inverse fails"));
            }
        }
    }

    let pass = failures.is_empty();
    verdict(
        9,
        "cyclotomic roots vanish and field axioms hold, N <= 64",
        pass,
    );
    assert!(pass, "{failures:?}");
}
