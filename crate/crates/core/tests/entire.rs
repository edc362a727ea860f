use std::f64::consts::PI;

use proptest::prelude::*;
use sharpconst::entire::{
    approx_decay_1d, bernstein_nikolskii_check, extremal_extraction, make_sample, ratio_lower_bound, EntireSample,
    SampleSpec,
};
use sharpconst::{ConvexBody, DiffOperator, Error, Exponent, MultiIndex};

fn p(x: f64) -> Exponent {
    Exponent::finite(x).unwrap()
}

#[test]
fn body_fourier_of_an_interval_is_a_sinc() {
    for sigma in [0.5, 1.0, 2.0] {
        let f = EntireSample::body_fourier(&ConvexBody::interval(sigma).unwrap(), 64, 0).unwrap();
        // V* = [-1/σ, 1/σ] means V = [-σ, σ], of length 2σ.
        let length = 2.0 * sigma;
        assert!((f.eval(&[0.0]).unwrap().re - length).abs() <= 1e-12 * length, "σ = {sigma}");
        for x in [0.4, 1.7, 6.0] {
            let exact = 2.0 * (sigma * x).sin() / x;
            assert!((f.eval(&[x]).unwrap() - exact).norm() <= 1e-11, "σ = {sigma}, x = {x}");
        }
    }
}

#[test]
fn body_fourier_of_a_disk_is_real_even_and_peaks_at_the_origin() {
    let f = EntireSample::body_fourier(&ConvexBody::ball(2, 1.0).unwrap(), 32, 128).unwrap();
    let at_zero = f.eval(&[0.0, 0.0]).unwrap();
    assert!((at_zero.re - PI).abs() <= 1e-10 && at_zero.im.abs() <= 1e-12);
    for x in [[0.3, -1.1], [2.0, 0.5], [-4.0, 3.0]] {
        let v = f.eval(&x).unwrap();
        let w = f.eval(&[-x[0], -x[1]]).unwrap();
        assert!((v - w).norm() <= 1e-10 && v.im.abs() <= 1e-10);
        assert!(v.norm() <= at_zero.re);
    }
    // Radial symmetry of the Fourier transform of a disk.
    let a = f.eval(&[1.5, 0.0]).unwrap().re;
    let b = f.eval(&[1.5 / 2f64.sqrt(), 1.5 / 2f64.sqrt()]).unwrap().re;
    assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
}

#[test]
fn sinc_norms_with_tails_bracket_the_closed_form() {
    let f = make_sample(SampleSpec::SincProduct { scales: vec![1.0], power: 2 }).unwrap();
    for q in [1.0, 2.0] {
        let exact = f.known_norm(p(q)).unwrap();
        assert!(exact.exact);
        let bound = f.norm_bound(p(q), 200.0).unwrap();
        assert!(bound.truncated_norm() <= exact.value * (1.0 + 1e-12));
        assert!(exact.value <= bound.upper() * (1.0 + 1e-12));
        assert!((bound.upper() - exact.value).abs() <= 0.01 * exact.value);
    }
    // L_2 norm of sinc(x/2)^2 squared: 2 ∫ (sin u/u)^4 du = 4π/3.
    assert!((f.known_norm(p(2.0)).unwrap().value.powi(2) - 4.0 * PI / 3.0).abs() < 1e-12);
}

#[test]
fn full_norm_rejects_short_truncations_and_non_integrable_samples() {
    let f = EntireSample::sinc_product(vec![1.0], 2).unwrap();
    assert!(matches!(f.full_norm(p(0.6), 1.0), Err(Error::InvalidInput(_))));
    assert!(matches!(f.full_norm(p(0.5), 1e6), Err(Error::InvalidInput(_))));
    assert!(EntireSample::sine().full_norm(p(1.0), 100.0).is_err());
    assert_eq!(EntireSample::sine().full_norm(Exponent::Infinity, 1.0).unwrap().value, 1.0);
}

#[test]
fn decay_of_the_sine_is_geometric() {
    let table = approx_decay_1d(&EntireSample::sine(), 0.5, 24).unwrap();
    assert_eq!(table.rows.first().unwrap().0, 4);
    assert!(table.error_at(24).unwrap() < 1e-5);
    let slope = table.log_slope().unwrap();
    // Faster than the square root of (eτ/2)^k, a crude rate for interpolating a type-one
    // function on a window of half-width τk.
    assert!(slope < (std::f64::consts::E * 0.5 / 2.0).ln() * 0.5, "{slope}");
    // Wider windows converge more slowly.
    let wide = approx_decay_1d(&EntireSample::sine(), 0.9, 24).unwrap();
    assert!(wide.error_at(24).unwrap() > table.error_at(24).unwrap());
}

#[test]
fn decay_of_the_interval_transform() {
    let f = EntireSample::body_fourier(&ConvexBody::interval(1.0).unwrap(), 64, 0).unwrap();
    let table = approx_decay_1d(&f, 0.5, 24).unwrap();
    let (e12, e24) = (table.error_at(12).unwrap(), table.error_at(24).unwrap());
    // Reference errors from an independent Chebyshev interpolation in double precision.
    assert!((e12 - 1.652732e-5).abs() <= 1e-3 * e12, "{e12}");
    assert!((e24 - 3.368211e-8).abs() <= 1e-3 * e24, "{e24}");
    assert!(table.log_slope().unwrap() < 0.0);
}

#[test]
fn lower_bounds_never_exceed_bernstein() {
    // ‖f'‖_∞ ≤ σ ‖f‖_∞ for type σ.
    let d1 = DiffOperator::pure(1, 1);
    for sigma in [0.5, 1.0, 3.0] {
        let f = EntireSample::sinc_product(vec![sigma], 4).unwrap();
        let lb = ratio_lower_bound(&f, &d1, Exponent::Infinity, 20.0 / sigma, 2001).unwrap();
        assert!(lb.value <= sigma * (1.0 + 1e-12) && lb.value > 0.0, "σ = {sigma}: {}", lb.value);
    }
}

#[test]
fn extracted_extremals_settle_down() {
    let op = DiffOperator::identity(1);
    let body = ConvexBody::interval(1.0).unwrap();
    let degrees = [3, 7, 15, 31];
    let report = extremal_extraction(p(2.0), &op, &body, &degrees, Default::default()).unwrap();
    let distances: Vec<f64> = report.rows.iter().filter_map(|r| r.dist_to_next).collect();
    assert_eq!(distances.len(), 3);
    for w in distances.windows(2) {
        assert!(w[1] < w[0], "{distances:?}");
    }
    for n in degrees {
        let q = report.rescaled(n).unwrap();
        assert!((q.eval(&[0.0]).unwrap() - 1.0).norm() <= 1e-10);
    }
    assert!(report.distance_to(4, |_| 0.0).is_err());
    assert!(extremal_extraction(p(2.0), &op, &body, &[5, 3], Default::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn harmonics_attain_their_frequency_in_bernstein(omega in 0.2f64..4.0, phase in 0.0f64..PI) {
        let f = EntireSample::harmonic(vec![omega], phase).unwrap();
        let r = bernstein_nikolskii_check(&f, &MultiIndex(vec![1]), Exponent::Infinity, 4.0 * PI / omega, 4001).unwrap();
        prop_assert!(r.bernstein <= omega * (1.0 + 1e-3));
        prop_assert!(r.bernstein >= omega * (1.0 - 1e-3));
    }

    #[test]
    fn body_fourier_is_even(x in prop::collection::vec(-30.0f64..30.0, 2)) {
        let f = EntireSample::body_fourier(&ConvexBody::cube(2, 1.0).unwrap(), 24, 64).unwrap();
        let (a, b) = (f.eval(&x).unwrap(), f.eval(&[-x[0], -x[1]]).unwrap());
        prop_assert!((a - b).norm() <= 1e-12);
        prop_assert!(a.im.abs() <= 1e-12);
    }

    #[test]
    fn sinc_products_are_even_and_bounded_by_one(
        scales in prop::collection::vec(0.3f64..3.0, 1..=3),
        power in 2u32..=6,
        x in prop::collection::vec(-20.0f64..20.0, 3),
    ) {
        let f = EntireSample::sinc_product(scales.clone(), power).unwrap();
        let x = &x[..scales.len()];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let (a, b) = (f.eval(x).unwrap(), f.eval(&neg).unwrap());
        prop_assert!((a - b).norm() <= 1e-15);
        prop_assert!(a.norm() <= 1.0 + 1e-15);
        prop_assert_eq!(f.eval(&vec![0.0; scales.len()]).unwrap().re, 1.0);
    }
}
