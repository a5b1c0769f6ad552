use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use radial_jet::coefficients::binomial;
use radial_jet::identities::{commutator_defect, leibniz_sum};
use radial_jet::scalar::rational;
use radial_jet::{random_jet, Constraint, ExactJet, Exponent, FloatJet, Jet};

fn exact(n: usize, cap: u32, seed: u64, c: Constraint) -> ExactJet {
    random_jet::<BigRational>(n, cap, seed, c)
}

fn binom(m: u32, k: u32) -> BigRational {
    BigRational::from_integer(binomial(m as i64, k as i64).unwrap().into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn radial_is_a_derivation(n in 1usize..=3, cap in 0u32..=5, s1: u64, s2: u64) {
        let f = exact(n, cap, s1, Constraint::Free);
        let g = exact(n, cap, s2, Constraint::Free);
        prop_assert_eq!((&f * &g).radial(), &(&f.radial() * &g) + &(&f * &g.radial()));
    }

    #[test]
    fn m_fold_leibniz(n in 1usize..=2, cap in 0u32..=5, m in 0u32..=4, s1: u64, s2: u64) {
        let f = exact(n, cap, s1, Constraint::Free);
        let g = exact(n, cap, s2, Constraint::Free);
        let mut rhs = Jet::zero(n, cap);
        for k in 0..=m {
            rhs = &rhs + &(&f.radial_power(k) * &g.radial_power(m - k)).scale(&binom(m, k));
        }
        prop_assert_eq!((&f * &g).radial_power(m), rhs);
    }

    #[test]
    fn defect_matches_leibniz_sum(n in 1usize..=2, cap in 1u32..=5, m in 1u32..=4, s1: u64, s2: u64) {
        let g = exact(n, cap, s1, Constraint::Free);
        let h = exact(n, cap, s2, Constraint::Free);
        let direct = &(&g * &h).radial_power(m) - &(&g * &h.radial_power(m));
        prop_assert_eq!(commutator_defect(&g, &h, m).unwrap(), direct.clone());
        prop_assert_eq!(leibniz_sum(&g, &h, m).unwrap(), direct);
    }

    #[test]
    fn exp_inverts_log(n in 1usize..=3, cap in 0u32..=5, seed: u64) {
        let f = exact(n, cap, seed, Constraint::UnitConstant);
        prop_assert_eq!(f.log().unwrap().exp().unwrap(), f);
    }

    #[test]
    fn rational_power_law(n in 1usize..=2, cap in 0u32..=4, p in -3i64..=3, q in 1i64..=3, seed: u64) {
        let f = exact(n, cap, seed, Constraint::UnitConstant);
        let root = f.real_pow(&Exponent::Rational(rational(p, q))).unwrap();
        prop_assert_eq!(root.int_pow(q).unwrap(), f.int_pow(p).unwrap());
    }

    #[test]
    fn inverse_is_two_sided(n in 1usize..=3, cap in 0u32..=5, seed: u64) {
        let f = exact(n, cap, seed, Constraint::Free);
        prop_assume!(*f.constant_term() != BigRational::from_integer(0.into()));
        prop_assert_eq!(&f * &f.inverse().unwrap(), Jet::one(n, cap));
    }

    /// Every operation only reads coefficients of degree at most its own,
    /// so computing at a larger cap and truncating changes nothing.
    #[test]
    fn truncation_commutes_with_operations(n in 1usize..=2, cap in 0u32..=4, extra in 1u32..=2, m in 1u32..=3, s1: u64, s2: u64) {
        let big_f = exact(n, cap + extra, s1, Constraint::UnitConstant);
        let big_h = exact(n, cap + extra, s2, Constraint::Free);
        let f = big_f.truncate(cap).unwrap();
        let h = big_h.truncate(cap).unwrap();
        let t = Exponent::Rational(rational(-2, 3));
        let big = &big_f.real_pow(&t).unwrap() * &big_h.radial_power(m);
        let small = &f.real_pow(&t).unwrap() * &h.radial_power(m);
        prop_assert_eq!(big.truncate(cap).unwrap(), small);
        prop_assert_eq!(big_f.log().unwrap().truncate(cap).unwrap(), f.log().unwrap());
    }

    #[test]
    fn float_regime_shadows_exact(n in 1usize..=2, cap in 0u32..=4, seed: u64) {
        let f = exact(n, cap, seed, Constraint::UnitConstant);
        let t = Exponent::Rational(rational(5, 3));
        let e = f.real_pow(&t).unwrap().to_complex();
        let x = f.to_complex().real_pow(&t).unwrap();
        prop_assert!(e.max_abs_diff(&x).unwrap().to_f64() < 1e-10);
    }
}

#[test]
fn float_power_of_nonunit_constant_uses_principal_branch() {
    let f: FloatJet = &Jet::constant(1, 3, Complex64::new(-4.0, 0.0)) + &Jet::variable(1, 3, 0);
    let root = f.real_pow(&Exponent::Float(0.5)).unwrap();
    let c = *root.constant_term();
    assert!((c - Complex64::new(0.0, 2.0)).norm() < 1e-14);
    let sq = &root * &root;
    assert!(sq.max_abs_diff(&f).unwrap().to_f64() < 1e-13);
}
