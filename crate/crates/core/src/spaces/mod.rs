//! Diagonal Hilbert function spaces on the unit ball.
//!
//! Both spaces handled here are monomial-orthogonal, so every norm, inner
//! product and reproducing kernel reduces to the squared monomial norms
//! `‖z^α‖²`:
//!
//! * Drury-Arveson `H²_n`: `‖z^α‖² = α!/|α|!`, read off the expansion of the
//!   kernel `1/(1 − ⟨ζ, z⟩)`.
//! * Besov-Dirichlet `H_{m,s}`: `‖h‖² = |h(0)|² + ∫_B |R^m h|²(1−|z|²)^s dv`,
//!   so `‖z^α‖² = |α|^{2m} w(α, s)` for `α ≠ 0` and `‖1‖² = 1`.
//!
//! Volume measure is normalized, `v(B) = 1`. With it,
//! `w(α, s) = n!·α!·Γ(s+1)/Γ(n+|α|+s+1)`, evaluated as the finite product
//! `n!·α!/∏_{j=1}^{n+|α|}(s+j)`, exact for rational `s`.

mod compression;
mod sampling;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::SpaceError;
use crate::jets::{factorial, FloatJet, Jet, MonomialBasis, MultiIndex};
use crate::scalar::{format_rational, rational_to_f64, Scalar};

pub use compression::compression_multiplier_norm;
pub use sampling::{inf_modulus_estimate, sample_points, sup_norm_estimate, SamplerConfig};

/// A diagonal function space on the ball of ℂⁿ.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceParams {
    DruryArveson { n: usize },
    BesovDirichlet { n: usize, m: u32, s: BigRational },
}

impl SpaceParams {
    pub fn drury_arveson(n: usize) -> Result<Self, SpaceError> {
        if n == 0 {
            return Err(SpaceError::NoVariables);
        }
        Ok(SpaceParams::DruryArveson { n })
    }

    pub fn besov_dirichlet(n: usize, m: u32, s: BigRational) -> Result<Self, SpaceError> {
        if n == 0 {
            return Err(SpaceError::NoVariables);
        }
        if m == 0 {
            return Err(SpaceError::DerivativeOrder);
        }
        check_s(&s)?;
        Ok(SpaceParams::BesovDirichlet { n, m, s })
    }

    pub fn n(&self) -> usize {
        match self {
            SpaceParams::DruryArveson { n } | SpaceParams::BesovDirichlet { n, .. } => *n,
        }
    }

    /// `‖z^α‖²`, exact.
    pub fn monomial_norm_sq(&self, alpha: &MultiIndex) -> BigRational {
        match self {
            SpaceParams::DruryArveson { .. } => BigRational::new(
                BigInt::from(alpha.factorial()),
                BigInt::from(factorial(alpha.weight())),
            ),
            SpaceParams::BesovDirichlet { m, s, .. } => {
                let d = alpha.weight();
                if d == 0 {
                    BigRational::one()
                } else {
                    let eig = BigRational::from_integer(BigInt::from(d).pow(2 * m));
                    eig * monomial_weight(alpha, s).expect("s validated on construction")
                }
            }
        }
    }

    pub fn monomial_norm_sq_f64(&self, alpha: &MultiIndex) -> f64 {
        rational_to_f64(&self.monomial_norm_sq(alpha))
    }

    fn check_dim<S: Scalar>(&self, h: &Jet<S>) -> Result<(), SpaceError> {
        if h.n() != self.n() {
            return Err(SpaceError::DimensionMismatch {
                jet: h.n(),
                space: self.n(),
            });
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self {
            SpaceParams::DruryArveson { n } => format!("da(n={n})"),
            SpaceParams::BesovDirichlet { n, m, s } => {
                format!("hms(n={n},m={m},s={})", format_rational(s))
            }
        }
    }
}

fn check_s(s: &BigRational) -> Result<(), SpaceError> {
    if *s <= -BigRational::one() {
        return Err(SpaceError::WeightExponent(format_rational(s)));
    }
    Ok(())
}

/// `w(α, s) = ∫_B |z^α|²(1−|z|²)^s dv(z)` with `v(B) = 1`; `n` is `α.len()`.
pub fn monomial_weight(alpha: &MultiIndex, s: &BigRational) -> Result<BigRational, SpaceError> {
    check_s(s)?;
    let n = alpha.len();
    if n == 0 {
        return Err(SpaceError::NoVariables);
    }
    let top = n as u32 + alpha.weight();
    let denom = (1..=top).fold(BigRational::one(), |acc, j| {
        acc * (s + BigRational::from_integer(BigInt::from(j)))
    });
    let numer = BigRational::from_integer(BigInt::from(factorial(n as u32) * alpha.factorial()));
    Ok(numer / denom)
}

/// Floating-point weight for real `s > −1`.
pub fn monomial_weight_f64(alpha: &MultiIndex, s: f64) -> Result<f64, SpaceError> {
    if !(s > -1.0) {
        return Err(SpaceError::WeightExponent(s.to_string()));
    }
    let n = alpha.len();
    if n == 0 {
        return Err(SpaceError::NoVariables);
    }
    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    let numer = fact(n as u32) * alpha.entries().iter().map(|&a| fact(a)).product::<f64>();
    let top = n as u32 + alpha.weight();
    let denom: f64 = (1..=top).map(|j| s + f64::from(j)).product();
    Ok(numer / denom)
}

/// Weights `w(α, s)` for every monomial of degree `≤ max_degree`, graded order.
#[derive(Debug, Clone)]
pub struct MonomialWeightTable {
    n: usize,
    s: BigRational,
    max_degree: u32,
    weights: Vec<BigRational>,
}

impl MonomialWeightTable {
    pub fn new(n: usize, s: &BigRational, max_degree: u32) -> Result<Self, SpaceError> {
        check_s(s)?;
        if n == 0 {
            return Err(SpaceError::NoVariables);
        }
        let basis = MonomialBasis::shared(n, max_degree);
        let weights = basis
            .monomials()
            .iter()
            .map(|a| monomial_weight(a, s))
            .collect::<Result<_, _>>()?;
        Ok(MonomialWeightTable {
            n,
            s: s.clone(),
            max_degree,
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> &BigRational {
        &self.s
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn get(&self, alpha: &MultiIndex) -> Option<&BigRational> {
        MonomialBasis::shared(self.n, self.max_degree)
            .index_of(alpha)
            .map(|i| &self.weights[i])
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }
}

/// `‖R^m h‖²_s = Σ_α |α|^{2m}|ĥ_α|² w(α, s)`, the weighted Bergman part.
pub fn radial_bergman_norm_sq<S: Scalar>(
    h: &Jet<S>,
    m: u32,
    s: &BigRational,
) -> Result<f64, SpaceError> {
    check_s(s)?;
    let mut acc = 0.0;
    for (alpha, c) in h.terms() {
        let d = alpha.weight();
        if d == 0 || c.is_zero() {
            continue;
        }
        let eig = f64::from(d).powi(2 * m as i32);
        acc += eig * c.to_complex().norm_sqr() * rational_to_f64(&monomial_weight(alpha, s)?);
    }
    Ok(acc)
}

/// `‖h‖²_{m,s} = |h(0)|² + Σ_{α≠0} |α|^{2m}|ĥ_α|² w(α, s)`.
pub fn hms_norm_sq<S: Scalar>(h: &Jet<S>, m: u32, s: &BigRational) -> Result<f64, SpaceError> {
    Ok(h.constant_term().to_complex().norm_sqr() + radial_bergman_norm_sq(h, m, s)?)
}

/// Exact `‖h‖²_{m,s}` for a rational jet and rational `s`.
pub fn hms_norm_sq_exact(
    h: &Jet<BigRational>,
    m: u32,
    s: &BigRational,
) -> Result<BigRational, SpaceError> {
    check_s(s)?;
    let mut acc = h.constant_term() * h.constant_term();
    for (alpha, c) in h.terms() {
        let d = alpha.weight();
        if d == 0 || c.is_zero() {
            continue;
        }
        let eig = BigRational::from_integer(BigInt::from(d).pow(2 * m));
        acc += eig * c * c * monomial_weight(alpha, s)?;
    }
    Ok(acc)
}

/// `‖h‖²_{H²_n} = Σ_α |ĥ_α|² α!/|α|!`.
pub fn da_norm_sq<S: Scalar>(h: &Jet<S>) -> f64 {
    let space = SpaceParams::DruryArveson { n: h.n() };
    h.terms()
        .filter(|(_, c)| !c.is_zero())
        .map(|(a, c)| c.to_complex().norm_sqr() * space.monomial_norm_sq_f64(a))
        .sum()
}

pub fn da_norm_sq_exact(h: &Jet<BigRational>) -> BigRational {
    let space = SpaceParams::DruryArveson { n: h.n() };
    h.terms()
        .filter(|(_, c)| !c.is_zero())
        .fold(BigRational::zero(), |acc, (a, c)| {
            acc + c * c * space.monomial_norm_sq(a)
        })
}

/// Squared norm in either space.
pub fn norm_sq<S: Scalar>(space: &SpaceParams, h: &Jet<S>) -> Result<f64, SpaceError> {
    space.check_dim(h)?;
    match space {
        SpaceParams::DruryArveson { .. } => Ok(da_norm_sq(h)),
        SpaceParams::BesovDirichlet { m, s, .. } => hms_norm_sq(h, *m, s),
    }
}

/// Exact squared norm of a rational jet.
pub fn norm_sq_exact(space: &SpaceParams, h: &Jet<BigRational>) -> Result<BigRational, SpaceError> {
    space.check_dim(h)?;
    match space {
        SpaceParams::DruryArveson { .. } => Ok(da_norm_sq_exact(h)),
        SpaceParams::BesovDirichlet { m, s, .. } => hms_norm_sq_exact(h, *m, s),
    }
}

/// `⟨a, b⟩ = Σ_α â_α conj(b̂_α) ‖z^α‖²` over the common truncation.
pub fn inner_product<S: Scalar, T: Scalar>(
    space: &SpaceParams,
    a: &Jet<S>,
    b: &Jet<T>,
) -> Result<Complex64, SpaceError> {
    space.check_dim(a)?;
    space.check_dim(b)?;
    let cap = a.cap().min(b.cap());
    let basis = MonomialBasis::shared(a.n(), cap);
    Ok(basis
        .monomials()
        .iter()
        .enumerate()
        .map(|(i, alpha)| {
            a.coeffs()[i].to_complex()
                * b.coeffs()[i].to_complex().conj()
                * space.monomial_norm_sq_f64(alpha)
        })
        .sum())
}

/// Degree-`cap` truncation of the reproducing kernel at `w`:
/// the coefficient of `z^α` is `conj(w)^α/‖z^α‖²`.
pub fn kernel_eval(space: &SpaceParams, w: &[Complex64], cap: u32) -> Result<FloatJet, SpaceError> {
    if w.len() != space.n() {
        return Err(SpaceError::DimensionMismatch {
            jet: w.len(),
            space: space.n(),
        });
    }
    let radius = w.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    if radius >= 1.0 {
        return Err(SpaceError::OutsideBall(radius));
    }
    let basis = MonomialBasis::shared(space.n(), cap);
    let terms = basis.monomials().iter().map(|alpha| {
        let conj_pow: Complex64 = alpha
            .entries()
            .iter()
            .zip(w)
            .map(|(&a, wj)| wj.conj().powu(a))
            .product();
        (alpha.clone(), conj_pow / space.monomial_norm_sq_f64(alpha))
    });
    Ok(Jet::from_terms(space.n(), cap, terms).expect("indices come from the basis"))
}

/// One row of the norm-equivalence scan.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EquivalenceRow {
    pub degree: u32,
    /// `‖z^α‖²_{H²_n} / ‖z^α‖²_{m₀,k₀}`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EquivalenceScan {
    pub n: usize,
    pub m0: u32,
    pub k0: u32,
    pub rows: Vec<EquivalenceRow>,
    pub min: f64,
    pub max: f64,
}

/// Ratios of Drury-Arveson to `H_{m₀,k₀}` monomial norms for degrees
/// `1..=d_max`, with `2m₀ − k₀ = n`.
///
/// The representative monomial is `z₁^d`. The ratio equals
/// `(n+d+k₀)!/(d!·n!·k₀!·d^{2m₀})` and does not depend on how the degree is
/// spread over the variables.
pub fn equivalence_scan(
    n: usize,
    m0: u32,
    k0: u32,
    d_max: u32,
) -> Result<EquivalenceScan, SpaceError> {
    if n == 0 {
        return Err(SpaceError::NoVariables);
    }
    if m0 == 0 || 2 * m0 as i64 - k0 as i64 != n as i64 {
        return Err(SpaceError::InvalidCompanion { n, m0, k0 });
    }
    let da = SpaceParams::drury_arveson(n)?;
    let hms = SpaceParams::besov_dirichlet(n, m0, BigRational::from_integer(BigInt::from(k0)))?;
    let rows: Vec<EquivalenceRow> = (1..=d_max)
        .map(|d| {
            let mut alpha = vec![0; n];
            alpha[0] = d;
            let alpha = MultiIndex::new(alpha);
            let ratio = da.monomial_norm_sq(&alpha) / hms.monomial_norm_sq(&alpha);
            EquivalenceRow {
                degree: d,
                ratio: rational_to_f64(&ratio),
            }
        })
        .collect();
    let min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let max = rows
        .iter()
        .map(|r| r.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(EquivalenceScan {
        n,
        m0,
        k0,
        rows,
        min,
        max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::{random_jet, Constraint, ExactJet};
    use crate::scalar::rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn idx(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn weights_examples() {
        assert_eq!(
            monomial_weight(&idx(&[0, 0, 0]), &rational(0, 1)).unwrap(),
            rational(1, 1)
        );
        assert_eq!(
            monomial_weight(&idx(&[1]), &rational(0, 1)).unwrap(),
            rational(1, 2)
        );
        assert_eq!(
            monomial_weight(&idx(&[1, 0]), &rational(1, 1)).unwrap(),
            rational(1, 12)
        );
        // α = 0: n!Γ(s+1)/Γ(n+s+1); n = 1, s = 1/2: 1/(3/2) = 2/3.
        assert_eq!(
            monomial_weight(&idx(&[0]), &rational(1, 2)).unwrap(),
            rational(2, 3)
        );
        assert!(monomial_weight(&idx(&[1]), &rational(-1, 1)).is_err());
        assert!(monomial_weight_f64(&idx(&[1]), -1.5).is_err());
    }

    #[test]
    fn weights_are_permutation_symmetric() {
        let s = rational(1, 3);
        assert_eq!(
            monomial_weight(&idx(&[3, 1, 0]), &s).unwrap(),
            monomial_weight(&idx(&[0, 3, 1]), &s).unwrap()
        );
        let t = MonomialWeightTable::new(2, &s, 4).unwrap();
        assert_eq!(t.get(&idx(&[1, 2])), t.get(&idx(&[2, 1])));
        assert!(t.weights().iter().all(|w| *w > BigRational::zero()));
    }

    #[test]
    fn float_weight_matches_exact() {
        for alpha in [idx(&[2, 1]), idx(&[0, 0, 4]), idx(&[6])] {
            for s in [rational(0, 1), rational(1, 2), rational(7, 3)] {
                let e = rational_to_f64(&monomial_weight(&alpha, &s).unwrap());
                let f = monomial_weight_f64(&alpha, rational_to_f64(&s)).unwrap();
                assert!((e - f).abs() <= 1e-14 * e);
            }
        }
    }

    #[test]
    fn hms_examples() {
        let s0 = rational(0, 1);
        let one: ExactJet = Jet::one(2, 3);
        assert_eq!(hms_norm_sq_exact(&one, 1, &s0).unwrap(), rational(1, 1));
        let z1: ExactJet = Jet::variable(2, 3, 0);
        assert_eq!(hms_norm_sq_exact(&z1, 1, &s0).unwrap(), rational(1, 3));
        assert_eq!(
            hms_norm_sq_exact(&(&one + &z1), 1, &s0).unwrap(),
            rational(4, 3)
        );
        assert!((hms_norm_sq(&(&one + &z1), 1, &s0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn da_examples() {
        let z1: ExactJet = Jet::variable(2, 3, 0);
        let z2: ExactJet = Jet::variable(2, 3, 1);
        assert_eq!(da_norm_sq_exact(&z1), rational(1, 1));
        assert_eq!(da_norm_sq_exact(&(&z1 * &z2)), rational(1, 2));
        assert_eq!(da_norm_sq_exact(&(&z1 * &z1)), rational(1, 1));
        let h = &Jet::one(1, 2) + &Jet::variable(1, 2, 0);
        assert_eq!(da_norm_sq_exact(&h), rational(2, 1));
        assert!((da_norm_sq(&h) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_examples() {
        let da = SpaceParams::drury_arveson(1).unwrap();
        let k = kernel_eval(&da, &[Complex64::new(0.5, 0.0)], 6).unwrap();
        for d in 0..=6u32 {
            let c = k.coeff(&idx(&[d]));
            assert!((c - Complex64::new(0.5f64.powi(d as i32), 0.0)).norm() < 1e-15);
        }
        let hms = SpaceParams::besov_dirichlet(2, 2, rational(1, 2)).unwrap();
        let k0 = kernel_eval(&hms, &[Complex64::new(0.0, 0.0); 2], 4).unwrap();
        assert_eq!(k0.coeff(&idx(&[0, 0])), Complex64::new(1.0, 0.0));
        assert!(k0.truncate(0).is_ok());
        assert_eq!(k0.degree(), Some(0));
        assert!(kernel_eval(
            &hms,
            &[Complex64::new(0.8, 0.0), Complex64::new(0.0, 0.6)],
            3
        )
        .is_err());
    }

    #[test]
    fn kernel_reproduces_and_eigen_shadow() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spaces = [
            SpaceParams::drury_arveson(2).unwrap(),
            SpaceParams::besov_dirichlet(2, 1, rational(1, 2)).unwrap(),
        ];
        for space in &spaces {
            for trial in 0..10 {
                let h = random_jet::<Complex64>(2, 5, trial, Constraint::Free);
                let w = [
                    Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)),
                    Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)),
                ];
                let k = kernel_eval(space, &w, 5).unwrap();
                let ip = inner_product(space, &h, &k).unwrap();
                assert!((ip - h.evaluate(&w)).norm() < 1e-12);

                // deg f + deg h ≤ D: <fh, K_w> = f(w)h(w).
                let f = random_jet::<Complex64>(2, 2, trial + 100, Constraint::Free)
                    .extend(5)
                    .unwrap();
                let g = random_jet::<Complex64>(2, 3, trial + 200, Constraint::Free)
                    .extend(5)
                    .unwrap();
                let ip = inner_product(space, &(&f * &g), &k).unwrap();
                assert!((ip - f.evaluate(&w) * g.evaluate(&w)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn scan_examples() {
        let scan = equivalence_scan(2, 1, 0, 40).unwrap();
        assert_eq!(scan.rows.len(), 40);
        assert!((scan.rows[0].ratio - 3.0).abs() < 1e-15);
        for row in &scan.rows {
            let d = f64::from(row.degree);
            let expected = (d + 2.0) * (d + 1.0) / (2.0 * d * d);
            assert!((row.ratio - expected).abs() < 1e-14);
        }
        assert!(scan.min >= 0.4 && scan.max <= 3.1);
        assert!(equivalence_scan(2, 1, 1, 10).is_err());
        assert!(equivalence_scan(3, 2, 1, 10).is_ok());
    }

    #[test]
    fn scan_ratio_is_alpha_independent() {
        let n = 3;
        let da = SpaceParams::drury_arveson(n).unwrap();
        let hms = SpaceParams::besov_dirichlet(n, 2, rational(1, 1)).unwrap();
        for d in 1..=6 {
            let ratios: Vec<BigRational> = crate::jets::indices_of_weight(n, d)
                .iter()
                .map(|a| da.monomial_norm_sq(a) / hms.monomial_norm_sq(a))
                .collect();
            assert!(ratios.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn space_validation() {
        assert!(SpaceParams::besov_dirichlet(2, 0, rational(0, 1)).is_err());
        assert!(SpaceParams::besov_dirichlet(2, 1, rational(-1, 1)).is_err());
        assert!(SpaceParams::besov_dirichlet(2, 1, rational(-1, 2)).is_ok());
        assert!(SpaceParams::drury_arveson(0).is_err());
        let da = SpaceParams::drury_arveson(3).unwrap();
        assert!(norm_sq(&da, &Jet::<BigRational>::one(2, 2)).is_err());
    }
}
