//! One-variable norms against direct integration over the disc and circle.

mod common;

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_rational::BigRational;

use radial_jet::scalar::{rational, rational_to_f64};
use radial_jet::spaces::{
    da_norm_sq, hms_norm_sq, hms_norm_sq_exact, inner_product, monomial_weight, MonomialWeightTable,
};
use radial_jet::{random_jet, Constraint, FloatJet, Jet, MultiIndex, SpaceParams};

/// `(1/2π)∫ g(e^{iθ}) dθ` by the trapezoid rule, exact for trigonometric
/// polynomials of degree below `points`.
fn circle_mean(g: impl Fn(Complex64) -> f64, radius: f64, points: usize) -> f64 {
    (0..points)
        .map(|k| {
            g(Complex64::from_polar(
                radius,
                TAU * k as f64 / points as f64,
            ))
        })
        .sum::<f64>()
        / points as f64
}

/// `∫_D |g|²(1−|z|²)^s dA/π` in polar coordinates.
fn disc_integral(g: &FloatJet, s: f64) -> f64 {
    common::integrate(
        |r| {
            2.0 * r
                * (1.0 - r * r).max(0.0).powf(s)
                * circle_mean(|z| g.evaluate(&[z]).norm_sqr(), r, 64)
        },
        0.0,
        1.0,
        1e-12,
    )
}

#[test]
fn besov_dirichlet_norm_matches_disc_integral() {
    for (seed, m, s) in [(1u64, 1u32, 0.0), (2, 2, 0.5), (3, 1, 1.0), (4, 3, 2.0)] {
        let h = random_jet::<Complex64>(1, 7, seed, Constraint::Free);
        let direct = h.constant_term().norm_sqr() + disc_integral(&h.radial_power(m), s);
        let s_rat = BigRational::from_float(s).unwrap();
        let formula = hms_norm_sq(&h, m, &s_rat).unwrap();
        assert!(
            (direct - formula).abs() <= 1e-10 * formula,
            "{direct} vs {formula}"
        );
    }
}

#[test]
fn drury_arveson_in_one_variable_is_hardy_space() {
    for seed in 0..5 {
        let h = random_jet::<Complex64>(1, 9, seed, Constraint::Free);
        let direct = circle_mean(|z| h.evaluate(&[z]).norm_sqr(), 1.0, 64);
        assert!((direct - da_norm_sq(&h)).abs() < 1e-13);
    }
}

#[test]
fn monomials_are_orthogonal() {
    let spaces = [
        SpaceParams::drury_arveson(2).unwrap(),
        SpaceParams::besov_dirichlet(2, 2, rational(1, 3)).unwrap(),
    ];
    let a: FloatJet = Jet::monomial(2, 4, &MultiIndex::new(vec![2, 1]), Complex64::new(1.0, 0.0));
    let b: FloatJet = Jet::monomial(2, 4, &MultiIndex::new(vec![1, 2]), Complex64::new(1.0, 0.0));
    for space in &spaces {
        assert_eq!(
            inner_product(space, &a, &b).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let self_ip = inner_product(space, &a, &a).unwrap();
        assert!(
            (self_ip.re - space.monomial_norm_sq_f64(&MultiIndex::new(vec![2, 1]))).abs() < 1e-16
        );
    }
}

#[test]
fn exact_and_float_norms_agree() {
    let s = rational(1, 2);
    for seed in 0..5 {
        let h = random_jet::<BigRational>(2, 5, seed, Constraint::Free);
        let exact = rational_to_f64(&hms_norm_sq_exact(&h, 2, &s).unwrap());
        let float = hms_norm_sq(&h.to_complex(), 2, &s).unwrap();
        assert!((exact - float).abs() <= 1e-13 * exact);
    }
}

#[test]
fn weight_table_matches_quadrature_for_fractional_s() {
    let s = rational(-1, 3);
    let table = MonomialWeightTable::new(2, &s, 4).unwrap();
    for alpha in common::indices_up_to(2, 4) {
        let idx = MultiIndex::new(alpha.clone());
        let w = rational_to_f64(table.get(&idx).unwrap());
        assert_eq!(
            table.get(&idx).unwrap(),
            &monomial_weight(&idx, &s).unwrap()
        );
        let q = common::weight_by_quadrature(&alpha, -1.0 / 3.0);
        assert!(((w - q) / w).abs() < 1e-8, "{alpha:?}: {w} vs {q}");
    }
}
