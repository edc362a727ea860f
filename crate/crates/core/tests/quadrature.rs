use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sharpconst::quadrature::bari::{bari_inequality_check, bari_inverse, bari_substitution, CosinePolynomial, NestedBoxes};
use sharpconst::quadrature::{build_rule_body, lp_quasinorm, quasinorm_triangle_check, QuadratureRule};
use sharpconst::{ConvexBody, Error, Exponent};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn p(x: f64) -> Exponent {
    Exponent::finite(x).unwrap()
}

#[test]
fn rule_masses() {
    let disk = build_rule_body(&ConvexBody::ball(2, 1.0).unwrap(), 16, 128).unwrap();
    assert!((disk.total_weight() - PI).abs() <= 1e-6 * PI);
    let cross = build_rule_body(&ConvexBody::cube(2, 1.0).unwrap(), 16, 128).unwrap();
    assert!((cross.total_weight() - 2.0).abs() <= 1e-6 * 2.0);
    let octahedron = build_rule_body(&ConvexBody::cube(3, 1.0).unwrap(), 16, 32).unwrap();
    assert!((octahedron.total_weight() - 8.0 / 6.0).abs() <= 1e-6);
    let interval = build_rule_body(&ConvexBody::interval(1.0).unwrap(), 16, 0).unwrap();
    assert_eq!(interval.total_weight(), 2.0);
    assert!(interval.weights().iter().all(|w| *w > 0.0));
}

#[test]
fn rule_rejects_unsupported_inputs() {
    let body = ConvexBody::ball(4, 1.0).unwrap();
    assert!(matches!(build_rule_body(&body, 16, 16), Err(Error::Config(_))));
    assert!(build_rule_body(&ConvexBody::interval(1.0).unwrap(), 4, 0).is_err());
}

#[test]
fn quasinorm_examples() {
    let rule = build_rule_body(&ConvexBody::interval(1.0).unwrap(), 16, 0).unwrap();
    let two = p(2.0);
    assert!((lp_quasinorm(|_| re(1.0), &rule, two).unwrap().value - 2f64.sqrt()).abs() < 1e-14);
    assert!((lp_quasinorm(|x| re(x[0]), &rule, two).unwrap().value - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
    let c = Complex64::new(-3.0, 4.0);
    assert_eq!(lp_quasinorm(|_| c, &rule, Exponent::Infinity).unwrap().value, 5.0);
    let err = lp_quasinorm(|x| re(1.0 / (x[0] - x[0])), &rule, two).unwrap_err();
    assert!(matches!(err, Error::NonFinite { .. }));
}

#[test]
fn triangle_examples() {
    let rule = build_rule_body(&ConvexBody::interval(1.0).unwrap(), 32, 0).unwrap();
    let f = |x: &[f64]| re(1.0 + x[0] - 3.0 * x[0] * x[0]);
    for q in [p(0.5), p(1.0), p(2.0), Exponent::Infinity] {
        assert!(quasinorm_triangle_check(f, |_| re(0.0), &rule, q).unwrap());
    }
    assert!(quasinorm_triangle_check(f, |x| -f(x), &rule, p(2.0)).unwrap());
}

/// Closed-form moments `∫ x^{2a} y^{2b}` over the unit disk, and `∫ x^k` over `[-1, 1]`.
#[test]
fn ball_rules_integrate_low_degree_polynomials_exactly() {
    let disk = build_rule_body(&ConvexBody::ball(2, 1.0).unwrap(), 16, 128).unwrap();
    let moments = [
        (0, 0, PI),
        (1, 0, PI / 4.0),
        (2, 0, PI / 8.0),
        (1, 1, PI / 24.0),
        (3, 0, 5.0 * PI / 64.0),
        (2, 1, PI / 64.0),
    ];
    for (a, b, exact) in moments {
        let q = disk.integrate(|x| x[0].powi(2 * a) * x[1].powi(2 * b));
        assert!((q - exact).abs() <= 1e-8, "x^{} y^{}: {q} vs {exact}", 2 * a, 2 * b);
    }
    // Odd moments vanish by symmetry.
    assert!(disk.integrate(|x| x[0].powi(3) * x[1].powi(2)).abs() <= 1e-12);
    let interval = build_rule_body(&ConvexBody::ball(1, 1.0).unwrap(), 8, 0).unwrap();
    for k in 0..=6 {
        let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
        assert!((interval.integrate(|x| x[0].powi(k)) - exact).abs() <= 1e-12);
    }
}

#[test]
fn torus_rule_is_exact_for_trigonometric_polynomials() {
    let rule = QuadratureRule::torus(2, 16).unwrap();
    assert!((rule.total_weight() - 4.0 * PI * PI).abs() < 1e-12);
    let integral = rule.integrate(|x| (3.0 * x[0]).cos().powi(2) * (2.0 * x[1]).sin().powi(2));
    assert!((integral - PI * PI).abs() < 1e-12);
}

#[test]
fn bari_substitution_examples() {
    let (a, b) = ([PI / 3.0], [2.0 * PI / 3.0]);
    assert!(bari_substitution(&a, &a, &b).unwrap()[0].abs() < 1e-12);
    assert!((bari_substitution(&b, &a, &b).unwrap()[0] - PI).abs() < 1e-12);
    assert!((bari_substitution(&[PI / 2.0], &a, &b).unwrap()[0] - PI / 2.0).abs() < 1e-12);
    assert!(matches!(bari_substitution(&[0.1], &a, &b), Err(Error::InvalidInput(_))));
}

#[test]
fn bari_substitution_solves_its_defining_equation() {
    let (a, b) = (0.2, 2.9);
    for i in 0..=100 {
        let u = (a + (b - a) * i as f64 / 100.0).min(b);
        let t = bari_substitution(&[u], &[a], &[b]).unwrap()[0];
        let rhs = 0.5 * (a.cos() - b.cos()) * t.cos() + 0.5 * (a.cos() + b.cos());
        assert!((u.cos() - rhs).abs() < 1e-12);
        assert!((bari_inverse(&[t], &[a], &[b]).unwrap()[0] - u).abs() <= 1e-12);
    }
}

#[test]
fn bari_check_examples() {
    let boxes = NestedBoxes::new(vec![PI / 3.0], vec![2.0 * PI / 3.0], vec![PI / 2.0], vec![PI / 2.0]).unwrap();
    let one = CosinePolynomial::monomial(vec![0]).unwrap();
    let two = p(2.0);
    // T ≡ 1: ratio (outer length)^{-1/p} n^{-1/p}.
    for n in [1u32, 4, 16] {
        let ratio = bari_inequality_check(&one, n, &boxes, two, 64).unwrap();
        let expected = (PI / 3.0).powf(-0.5) * f64::from(n).powf(-0.5);
        assert!((ratio - expected).abs() <= 1e-8 * expected, "n = {n}: {ratio} vs {expected}");
    }
    let ratios: Vec<f64> = (4..=64)
        .step_by(4)
        .map(|n| {
            let t = CosinePolynomial::monomial(vec![n]).unwrap();
            bari_inequality_check(&t, n, &boxes, two, 512).unwrap()
        })
        .collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(l, h), r| (l.min(*r), h.max(*r)));
    assert!(lo > 0.0 && hi < 10.0 * lo, "cos(nx) ratios spread over [{lo}, {hi}]");
    assert!(NestedBoxes::new(vec![1.0], vec![2.0], vec![0.5], vec![1.5]).is_err());
}

fn cubic() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-2.0f64..2.0)
}

fn eval_cubic(c: &[f64; 4], x: f64) -> f64 {
    c[0] + x * (c[1] + x * (c[2] + x * c[3]))
}

proptest! {
    #[test]
    fn quasi_triangle_inequality_holds(
        f in cubic(),
        g in cubic(),
        q in prop::sample::select(vec![0.25, 0.5, 1.0, 1.5, 3.0, f64::INFINITY]),
    ) {
        let rule = build_rule_body(&ConvexBody::interval(1.0).unwrap(), 24, 0).unwrap();
        let q = if q.is_infinite() { Exponent::Infinity } else { p(q) };
        prop_assert!(quasinorm_triangle_check(|x| re(eval_cubic(&f, x[0])), |x| re(eval_cubic(&g, x[0])), &rule, q).unwrap());
    }

    #[test]
    fn quasinorm_is_monotone_in_the_domain(
        c in prop::array::uniform6(-2.0f64..2.0),
        q in prop::sample::select(vec![0.5, 1.0, 2.0, 4.0]),
    ) {
        // The polar of the ball of radius 1.5 is the disk of radius 2/3, inside the unit disk.
        let inner = build_rule_body(&ConvexBody::ball(2, 1.5).unwrap(), 24, 128).unwrap();
        let outer = build_rule_body(&ConvexBody::ball(2, 1.0).unwrap(), 24, 128).unwrap();
        let f = |x: &[f64]| re(c[0] + c[1] * x[0] + c[2] * x[1] + c[3] * x[0] * x[1] + c[4] * x[0] * x[0] + c[5] * x[1] * x[1]);
        let a = lp_quasinorm(f, &inner, p(q)).unwrap().value;
        let b = lp_quasinorm(f, &outer, p(q)).unwrap().value;
        prop_assert!(a <= b * (1.0 + 1e-9), "{a} > {b}");
    }

    /// `‖F‖_p / sup|F| = (∫ (|F|/sup)^p)^{1/p}` depends on the measure where `|F|` is nearly
    /// maximal: at `p = 64` it is within 2% of one for nearly flat `F`, while a peaked
    /// `F` needs a larger `p`.
    #[test]
    fn large_exponents_approach_the_sup(
        c in prop::array::uniform6(-2.0f64..2.0),
        base in prop::sample::select(vec![-3.0, 3.0]),
        flat in prop::array::uniform5(-0.01f64..0.01),
    ) {
        let rule = build_rule_body(&ConvexBody::ball(2, 1.0).unwrap(), 48, 256).unwrap();
        let quadratic = |k: &[f64], x: &[f64]| k[0] * x[0] + k[1] * x[1] + k[2] * x[0] * x[1] + k[3] * x[0] * x[0] + k[4] * x[1] * x[1];
        let nearly_flat = |x: &[f64]| re(base + quadratic(&flat, x));
        let sup = lp_quasinorm(nearly_flat, &rule, Exponent::Infinity).unwrap().value;
        let p64 = lp_quasinorm(nearly_flat, &rule, p(64.0)).unwrap().value;
        prop_assert!((p64 - sup).abs() <= 0.02 * sup, "p = 64: {p64}, sup {sup}");

        let general = |x: &[f64]| re(c[0] + quadratic(&c[1..], x));
        let sup = lp_quasinorm(general, &rule, Exponent::Infinity).unwrap().value;
        prop_assume!(sup > 1e-3);
        let p4096 = lp_quasinorm(general, &rule, p(4096.0)).unwrap().value;
        prop_assert!((p4096 - sup).abs() <= 0.02 * sup, "p = 4096: {p4096}, sup {sup}");
        let area = rule.total_weight();
        let p64 = lp_quasinorm(general, &rule, p(64.0)).unwrap().value;
        prop_assert!(p64 <= area.powf(1.0 / 64.0) * sup * (1.0 + 1e-12));
    }

    #[test]
    fn bari_substitution_is_increasing(a in 0.0f64..1.4, len in 0.2f64..1.7) {
        let b = (a + len).min(PI);
        let ts: Vec<f64> = (0..=200)
            .map(|i| bari_substitution(&[(a + (b - a) * i as f64 / 200.0).min(b)], &[a], &[b]).unwrap()[0])
            .collect();
        prop_assert!(ts.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn bari_random_family_ratio_is_finite(seed in 0u64..1000, n in 2u32..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = CosinePolynomial::random(1, n, &mut rng).unwrap();
        let boxes = NestedBoxes::new(vec![0.3], vec![2.8], vec![1.0], vec![2.0]).unwrap();
        let r = bari_inequality_check(&t, n, &boxes, p(0.5), 128).unwrap();
        prop_assert!(r.is_finite() && r > 0.0);
    }
}
