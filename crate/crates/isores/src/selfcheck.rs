//! One-command verification of every identity and regression the library
//! rests on.
//!
//! Each check runs a grid or corpus in exact arithmetic and reports a
//! [`CheckOutcome`].  The same functions back the `selfcheck` CLI
//! subcommand and the integration test suite, so a green self-check is the
//! library vouching for itself: the counting kernels satisfy their
//! recurrences and split identities, the three degree formulas agree where
//! they overlap, and every worked number from the source examples is
//! reproduced.

use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counting::{abelian_f, fk_as_polynomial, partial_product};
use crate::cyclotomic::{cyclotomic_polynomial, eval_poly, CyclotomicElement};
use crate::fiber::{fiber_count, g_coefficient};
use crate::rational::{frac, pow_i64, rat, to_f64, Rational};
use crate::resonance::ResidueTuple;
use crate::spherical::SphericalAngles;
use crate::strata::{Side, Signature, SubsetMask};

/// Result of one named check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, detail: String) -> Self {
        CheckOutcome {
            name,
            pass: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        CheckOutcome {
            name,
            pass: false,
            detail,
        }
    }
}

fn factorial(r: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=r {
        acc *= i;
    }
    Rational::from_integer(acc)
}

/// The split identity: for `n >= 2`,
///
/// ```text
/// f_k(a2, n+1) = sum_{r=0}^{n-1} (-(a1+k))^r [ f^(r-1)(a1+a2, n)/(r-1)!
///                                            + (a1+a2+k) f^(r)(a1+a2, n)/r! ]
/// ```
///
/// with `f^(r)` the formal derivative of the polynomial `f_k(., n)` and the
/// `r = 0` convention `f^(-1) = 0`.  Checked exactly over the full grid
/// `n in 2..=8`, `k in 1..=5`, `a1, a2 in -6..=12`.
pub fn check_split_identity() -> CheckOutcome {
    const NAME: &str = "split identity grid";
    let mut instances = 0u64;
    for n in 2u32..=8 {
        for k in 1i64..=5 {
            let poly = fk_as_polynomial(k, n).expect("n >= 2 is polynomial");
            let derivatives: Vec<_> = (0..n as usize).map(|r| poly.nth_derivative(r)).collect();
            for a1 in -6i64..=12 {
                for a2 in -6i64..=12 {
                    let lhs = partial_product(k, a2 as i128, n + 1).expect("m >= 3");
                    let s = rat((a1 + a2) as i128);
                    let shifted = &s + rat(k as i128);
                    let base = rat(-(a1 + k) as i128);
                    let mut rhs = Rational::zero();
                    for r in 0..n as usize {
                        let mut bracket = Rational::zero();
                        if r >= 1 {
                            bracket += derivatives[r - 1].eval(&s) / factorial(r - 1);
                        }
                        bracket += &shifted * derivatives[r].eval(&s) / factorial(r);
                        rhs += pow_i64(&base, r as i64).expect("nonnegative power") * bracket;
                    }
                    if lhs != rhs {
                        return CheckOutcome::fail(
                            NAME,
                            format!("fails at k={k}, n={n}, a1={a1}, a2={a2}"),
                        );
                    }
                    instances += 1;
                }
            }
        }
    }
    CheckOutcome::pass(NAME, format!("{instances} instances, all exact"))
}

/// The zero-sum identity: for every `(a1; b_1..b_p)` with `k | b_i`,
///
/// ```text
/// sum_{I in {1..p}} (-1)^|I| f_k(c_{1,I} + (|I|-1)k, p+1) = 0
/// ```
///
/// where `c_{1,I} = a1 + k - sum_{i in I} b_i`.  Checked exactly over a
/// seeded random corpus with `p <= 6`.
pub fn check_zero_sum_identity() -> CheckOutcome {
    const NAME: &str = "zero-sum identity corpus";
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0001);
    let instances = 600u64;
    for trial in 0..instances {
        let p = rng.gen_range(1usize..=6);
        let k = rng.gen_range(1i64..=4);
        let a1 = rng.gen_range(-6i64..=12);
        let b: Vec<i64> = (0..p).map(|_| k * rng.gen_range(1i64..=5)).collect();
        let mut sum = Rational::zero();
        for mask in 0u64..(1 << p) {
            let picked: i128 = (0..p)
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| b[j] as i128)
                .sum();
            let size = mask.count_ones() as i128;
            let arg = (a1 + k) as i128 - picked + (size - 1) * k as i128;
            let f = partial_product(k, arg, p as u32 + 1).expect("m >= 2");
            let term = if size % 2 == 0 { f } else { -f };
            sum += term;
        }
        if !sum.is_zero() {
            return CheckOutcome::fail(
                NAME,
                format!("fails on trial {trial}: k={k}, a1={a1}, b={b:?}"),
            );
        }
    }
    CheckOutcome::pass(NAME, format!("{instances} instances, all exact"))
}

/// Draws a valid random signature with `p <= 7` from a seeded generator.
fn random_signature(rng: &mut ChaCha8Rng) -> Signature {
    loop {
        let k = rng.gen_range(1i64..=5);
        let p = rng.gen_range(1usize..=7);
        let b: Vec<i64> = (0..p).map(|_| k * rng.gen_range(1i64..=4)).collect();
        let total: i64 = b.iter().sum();
        let a1 = rng.gen_range(-k + 1..=2 * k.max(2));
        let a2 = total - 2 * k - a1;
        if let Ok(sig) = Signature::new(k, a1, a2, b) {
            return sig;
        }
    }
}

/// Exchanging the two distinguished orders exchanges the roles of the two
/// expansions of the degree; both must produce the same value.
pub fn check_swap_symmetry() -> CheckOutcome {
    const NAME: &str = "expansion swap symmetry";
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0002);
    let instances = 600u64;
    for trial in 0..instances {
        let sig = random_signature(&mut rng);
        let first = sig.degree_by_expansion(Side::First).expect("within bounds");
        let second = sig.degree_by_expansion(Side::Second).expect("within bounds");
        if first != second {
            return CheckOutcome::fail(NAME, format!("fails on trial {trial} for {sig}"));
        }
    }
    CheckOutcome::pass(NAME, format!("{instances} random signatures"))
}

/// The degree expansion must produce a nonnegative integer on every valid
/// signature.
pub fn check_degree_integrality() -> CheckOutcome {
    const NAME: &str = "degree integrality";
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0003);
    let instances = 600u64;
    for trial in 0..instances {
        let sig = random_signature(&mut rng);
        match sig.degree_generic() {
            Ok(d) if d >= BigInt::zero() => {}
            other => {
                return CheckOutcome::fail(
                    NAME,
                    format!("fails on trial {trial} for {sig}: {other:?}"),
                );
            }
        }
    }
    CheckOutcome::pass(NAME, format!("{instances} random signatures"))
}

/// Enumerates every valid signature whose poles all have order `k`, for the
/// given `k` and pole count.
fn order_k_signatures(k: i64, p: usize) -> Vec<Signature> {
    let mut out = Vec::new();
    let total = k * (p as i64 - 2);
    for a1 in (-k + 1)..(k * (p as i64 - 1)) {
        if let Ok(sig) = Signature::new(k, a1, total - a1, vec![k; p]) {
            out.push(sig);
        }
    }
    out
}

/// The closed form for all-order-`k` poles must match the subset expansion
/// on every such signature with `k in 2..=6`, `p <= 8`.  Level 1 is
/// excluded: on `(1; 0, 0; [1,1])` the expansion gives 0 (the residues of
/// an abelian differential always sum to zero, so the generic fiber is
/// empty) while the closed form gives 1.
pub fn check_closed_form_agreement() -> CheckOutcome {
    const NAME: &str = "closed form vs expansion";
    let mut instances = 0u64;
    for k in 2i64..=6 {
        for p in 1usize..=8 {
            for sig in order_k_signatures(k, p) {
                let closed = sig.degree_order_k_poles().expect("all poles have order k");
                let expanded = sig.degree_generic().expect("valid signature");
                if closed != expanded {
                    return CheckOutcome::fail(
                        NAME,
                        format!("{sig}: closed form {closed}, expansion {expanded}"),
                    );
                }
                instances += 1;
            }
        }
    }
    CheckOutcome::pass(NAME, format!("{instances} signatures, k in 2..=6"))
}

/// The floating Gamma-function form must agree with the exact degree within
/// relative 1e-6 on all-order-`k` signatures with `k in 2..=4`, `p <= 8`.
pub fn check_gamma_agreement() -> CheckOutcome {
    const NAME: &str = "Gamma form vs exact degree";
    let mut instances = 0u64;
    let mut worst = 0f64;
    for k in 2i64..=4 {
        for p in 1usize..=8 {
            for sig in order_k_signatures(k, p) {
                let exact = to_f64(&Rational::from_integer(
                    sig.degree_generic().expect("valid signature"),
                ));
                let gamma = sig.gamma_degree_estimate().expect("all poles have order k");
                let rel = (gamma - exact).abs() / exact.max(1.0);
                worst = worst.max(rel);
                if rel > 1e-6 {
                    return CheckOutcome::fail(
                        NAME,
                        format!("{sig}: Gamma form {gamma}, exact {exact}"),
                    );
                }
                instances += 1;
            }
        }
    }
    CheckOutcome::pass(
        NAME,
        format!("{instances} signatures, worst relative error {worst:.2e}"),
    )
}

/// The worked degree values: 9, 4, 5, 8775, 3, 2 and the one-pole stratum.
pub fn check_degree_regressions() -> CheckOutcome {
    const NAME: &str = "degree regressions";
    let cases: [(i64, i64, i64, Vec<i64>, i64); 7] = [
        (2, 1, 3, vec![2; 4], 9),
        (3, 4, -1, vec![3; 3], 4),
        (4, 5, -1, vec![4; 3], 5),
        (4, 13, 3, vec![4; 6], 8775),
        (2, 3, -1, vec![2; 3], 3),
        (2, 1, 1, vec![2; 3], 2),
        (4, -3, -1, vec![4], 1),
    ];
    for (k, a1, a2, b, expected) in cases {
        let sig = Signature::new(k, a1, a2, b).expect("valid signature");
        let got = sig.degree_generic().expect("valid signature");
        if got != BigInt::from(expected) {
            return CheckOutcome::fail(NAME, format!("{sig}: got {got}, expected {expected}"));
        }
    }
    CheckOutcome::pass(NAME, "7 worked degrees".to_string())
}

/// The worked fiber counts: the three empty fibers, the 8-element fiber,
/// and the six-pole shape subtotals.
pub fn check_fiber_regressions() -> CheckOutcome {
    const NAME: &str = "fiber regressions";
    let fail = |detail: String| CheckOutcome::fail(NAME, detail);

    let s63 = Signature::new(3, 4, -1, vec![3; 3]).expect("valid");
    let t63 = ResidueTuple::exact_parse(3, 1, &["1", "1", "1"]).expect("valid");
    match fiber_count(&s63, &t63) {
        Ok(r) if r.count().is_zero() => {}
        other => return fail(format!("three equal residues, level 3: {other:?}")),
    }

    let s64 = Signature::new(4, 5, -1, vec![4; 3]).expect("valid");
    let t64 = ResidueTuple::exact_parse(4, 4, &["1", "1", "1+z"]).expect("valid");
    match fiber_count(&s64, &t64) {
        Ok(r) if r.count().is_zero() => {
            let got: Vec<Rational> = r.terms().iter().map(|t| t.contribution().clone()).collect();
            if got != vec![rat(5), rat(-1), rat(-4)] {
                return fail(format!("three-pole ledger: {got:?}"));
            }
        }
        other => return fail(format!("three poles, level 4: {other:?}")),
    }

    let s65 = Signature::new(4, 13, 3, vec![4; 6]).expect("valid");
    let t65 = ResidueTuple::exact_parse(4, 1, &["1"; 6]).expect("valid");
    match fiber_count(&s65, &t65) {
        Ok(r) if r.count().is_zero() && r.terms().len() == 107 => {
            let shapes = r.subtotals_by_shape();
            let expected: Vec<(Vec<u32>, Rational)> = vec![
                (vec![], rat(8775)),
                (vec![2], rat(-6075)),
                (vec![4], rat(-2430)),
                (vec![6], rat(-12000)),
                (vec![2, 2], rat(2295)),
                (vec![2, 4], rat(13770)),
                (vec![2, 2, 2], rat(-4335)),
            ];
            if shapes != expected {
                return fail(format!("six-pole subtotals: {shapes:?}"));
            }
        }
        other => return fail(format!("six equal residues: {other:?}")),
    }

    let s62 = Signature::new(2, 1, 3, vec![2; 4]).expect("valid");
    let t62 = ResidueTuple::exact_parse(2, 1, &["1", "3", "7", "-7"]).expect("valid");
    match fiber_count(&s62, &t62) {
        Ok(r) if *r.count() == BigInt::from(8) => {}
        other => return fail(format!("single resonant pair: {other:?}")),
    }

    CheckOutcome::pass(NAME, "4 worked fibers with ledgers".to_string())
}

/// The worked abelian numbers: 2, then 1/9/100, then 1 and 2.
pub fn check_abelian_regressions() -> CheckOutcome {
    const NAME: &str = "abelian number regressions";
    let fail = |detail: String| CheckOutcome::fail(NAME, detail);
    let mask = |ix: &[usize]| SubsetMask::from_indices(ix).expect("in range");

    let triple = ResidueTuple::exact_parse(3, 1, &["1", "1", "1"]).expect("valid");
    if triple.abelian_number(mask(&[1, 2, 3])).expect("in range") != 2 {
        return fail("three equal cube residues".to_string());
    }

    let six = ResidueTuple::exact_parse(4, 1, &["1"; 6]).expect("valid");
    let checks = [
        (mask(&[1, 2]), 1u64),
        (mask(&[1, 2, 3, 4]), 9),
        (SubsetMask::full(6), 100),
    ];
    for (subset, expected) in checks {
        let got = six.abelian_number(subset).expect("in range");
        if got != expected {
            return fail(format!("six equal residues, {subset}: got {got}"));
        }
    }

    let worked = ResidueTuple::exact_parse(4, 4, &["1", "1", "1+z"]).expect("valid");
    if worked.abelian_number(mask(&[1, 2])).expect("in range") != 1
        || worked.abelian_number(mask(&[1, 2, 3])).expect("in range") != 2
    {
        return fail("three-pole worked tuple".to_string());
    }

    CheckOutcome::pass(NAME, "6 worked abelian numbers".to_string())
}

/// The worked G coefficients: 405, 51, 289, 3, 17 (and its 17*6 = 102
/// product with the f factors), and the full-set coefficient 1.
pub fn check_g_regressions() -> CheckOutcome {
    const NAME: &str = "G coefficient regressions";
    let fail = |detail: String| CheckOutcome::fail(NAME, detail);
    let mask = |ix: &[usize]| SubsetMask::from_indices(ix).expect("in range");
    let six = Signature::new(4, 13, 3, vec![4; 6]).expect("valid");

    let cases: [(SubsetMask, Vec<SubsetMask>, i128); 5] = [
        (mask(&[3, 4, 5, 6]), vec![mask(&[1, 2])], 405),
        (mask(&[5, 6]), vec![mask(&[1, 2]), mask(&[3, 4])], 51),
        (
            SubsetMask::EMPTY,
            vec![mask(&[1, 2]), mask(&[3, 4]), mask(&[5, 6])],
            289,
        ),
        (mask(&[5, 6]), vec![mask(&[1, 2, 3, 4])], 3),
        (SubsetMask::EMPTY, vec![mask(&[1, 2, 3, 4]), mask(&[5, 6])], 17),
    ];
    for (j0, blocks, expected) in cases {
        match g_coefficient(&six, j0, &blocks) {
            Ok(g) if g == rat(expected) => {}
            other => return fail(format!("expected {expected}, got {other:?}")),
        }
    }

    // The quad/pair term carries f factors 6 and 1: G * f-product = 102.
    let f_quad = abelian_f(16 / 4 - 1, 5).expect("positive");
    let f_pair = abelian_f(8 / 4 - 1, 3).expect("positive");
    if rat(17) * &f_quad * &f_pair != rat(102) {
        return fail(format!("f-product path: f = {f_quad}, {f_pair}"));
    }

    let small = Signature::new(4, 5, -1, vec![4; 3]).expect("valid");
    match g_coefficient(&small, SubsetMask::EMPTY, &[mask(&[1, 2, 3])]) {
        Ok(g) if g == rat(1) => {}
        other => return fail(format!("full-set coefficient: {other:?}")),
    }

    CheckOutcome::pass(NAME, "6 worked coefficients".to_string())
}

/// The worked resonance profiles, including the empty one.
pub fn check_resonance_regressions() -> CheckOutcome {
    const NAME: &str = "resonance profile regressions";
    let fail = |detail: String| CheckOutcome::fail(NAME, detail);

    let worked = ResidueTuple::exact_parse(4, 4, &["1", "1", "1+z"]).expect("valid");
    let profile = worked.resonant_subsets().expect("within bounds");
    let got: Vec<(u64, u64)> = profile
        .entries()
        .iter()
        .map(|e| (e.subset.bits(), e.abelian))
        .collect();
    if got != vec![(0b011, 1), (0b111, 2)] {
        return fail(format!("three-pole profile: {got:?}"));
    }

    let six = ResidueTuple::exact_parse(4, 1, &["1"; 6]).expect("valid");
    let profile = six.resonant_subsets().expect("within bounds");
    let sizes = profile
        .entries()
        .iter()
        .fold([0usize; 7], |mut acc, e| {
            acc[e.subset.len() as usize] += 1;
            acc
        });
    if profile.len() != 31 || sizes[2] != 15 || sizes[4] != 15 || sizes[6] != 1 {
        return fail(format!("six-pole profile sizes: {sizes:?}"));
    }

    let empty = ResidueTuple::exact_parse(3, 1, &["1", "2", "4"]).expect("valid");
    if !empty.resonant_subsets().expect("within bounds").is_empty() {
        return fail("cube residues 1, 8, 64 should be non-resonant".to_string());
    }

    CheckOutcome::pass(NAME, "3 worked profiles".to_string())
}

/// The worked residual systoles.
pub fn check_systole_regressions() -> CheckOutcome {
    const NAME: &str = "residual systole regressions";
    let cases: [(u32, Vec<&str>, f64); 3] = [
        (3, vec!["1", "1", "1"], 1.0),
        (2, vec!["1", "10"], 1.0),
        (1, vec!["3", "-3"], 3.0),
    ];
    for (k, roots, expected) in cases {
        let t = ResidueTuple::exact_parse(k, 1, &roots).expect("valid");
        let got = t.residual_systole().expect("nonzero sums exist");
        if (got - expected).abs() > 1e-9 {
            return CheckOutcome::fail(
                NAME,
                format!("k={k}, roots {roots:?}: got {got}, expected {expected}"),
            );
        }
    }
    CheckOutcome::pass(NAME, "3 worked systoles".to_string())
}

/// The dihedral metric count must match the degree of the associated
/// quadratic stratum for every odd `(a, b)` with `a + b = 2n`, `n <= 10`,
/// using provably generic prime-reciprocal angles.
pub fn check_spherical_consistency() -> CheckOutcome {
    const NAME: &str = "spherical count vs quadratic stratum";
    const PRIMES: [i128; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];
    let mut instances = 0u64;
    for n in 1usize..=10 {
        let c: Vec<Rational> = PRIMES[..n].iter().map(|&p| frac(1, p)).collect();
        for a in (1..=2 * n as i64 - 1).step_by(2) {
            let b = 2 * n as i64 - a;
            let angles = SphericalAngles::new(a, b, c.clone()).expect("valid angles");
            let count = match angles.spherical_count() {
                Ok(c) => c,
                Err(e) => {
                    return CheckOutcome::fail(NAME, format!("a={a}, b={b}, n={n}: {e}"));
                }
            };
            let stratum =
                Signature::new(2, a - 2, b - 2, vec![2; n]).expect("valid quadratic stratum");
            let degree = stratum.degree_order_k_poles().expect("order-2 poles");
            if count != degree {
                return CheckOutcome::fail(
                    NAME,
                    format!("a={a}, b={b}, n={n}: count {count}, degree {degree}"),
                );
            }
            instances += 1;
        }
    }
    CheckOutcome::pass(NAME, format!("{instances} angle systems, n <= 10"))
}

/// Cyclotomic soundness: `Phi_N(zeta_N) = 0` exactly for `N <= 64`.
pub fn check_cyclotomic_roots() -> CheckOutcome {
    const NAME: &str = "cyclotomic polynomial roots";
    for n in 1u32..=64 {
        let phi = cyclotomic_polynomial(n);
        let zeta = CyclotomicElement::root_of_unity(n, 1);
        if !eval_poly(&phi, &zeta).is_zero() {
            return CheckOutcome::fail(NAME, format!("Phi_{n}(zeta_{n}) != 0"));
        }
    }
    CheckOutcome::pass(NAME, "Phi_N(zeta_N) = 0 for N <= 64".to_string())
}

/// Runs every check in a fixed order.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        check_split_identity(),
        check_zero_sum_identity(),
        check_swap_symmetry(),
        check_degree_integrality(),
        check_closed_form_agreement(),
        check_gamma_agreement(),
        check_degree_regressions(),
        check_fiber_regressions(),
        check_abelian_regressions(),
        check_g_regressions(),
        check_resonance_regressions(),
        check_systole_regressions(),
        check_spherical_consistency(),
        check_cyclotomic_roots(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        let outcomes = run_all();
        assert_eq!(outcomes.len(), 14);
        for outcome in &outcomes {
            assert!(outcome.pass, "{}: {}", outcome.name, outcome.detail);
        }
    }

    #[test]
    fn checks_are_deterministic() {
        assert_eq!(check_zero_sum_identity(), check_zero_sum_identity());
        assert_eq!(check_swap_symmetry(), check_swap_symmetry());
    }
}
