//! Total-degree-truncated power series at the origin of ℂⁿ.
//!
//! A [`Jet`] stores every Taylor coefficient of weight `|α| ≤ D` densely, in
//! graded order. Multiplication is the Cauchy product with everything above
//! weight `D` discarded. Because the radial derivative `R = Σ z_j ∂_j` acts on
//! `z^α` by the scalar `|α|` and multiplication only raises degree, every
//! operation here commutes with truncation: coefficients of weight `≤ D`
//! computed from a jet are exactly those of the untruncated analytic
//! functions. Identities between analytic germs can therefore be checked
//! coefficient-for-coefficient on jets.

mod calculus;
mod index;
mod json;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use index::{factorial, indices_of_weight, MonomialBasis, MultiIndex};

use crate::error::JetError;
use crate::scalar::{Magnitude, Regime, Scalar};

/// Constraint on the constant term of a random jet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// Force `f(0) = 1`.
    UnitConstant,
    Free,
}

#[derive(Clone)]
pub struct Jet<S> {
    basis: Arc<MonomialBasis>,
    coeffs: Vec<S>,
}

impl<S: Scalar> Jet<S> {
    pub fn zero(n: usize, cap: u32) -> Self {
        assert!(n >= 1, "jets need at least one variable");
        let basis = MonomialBasis::shared(n, cap);
        let coeffs = vec![S::zero(); basis.len()];
        Jet { basis, coeffs }
    }

    pub fn constant(n: usize, cap: u32, c: S) -> Self {
        let mut j = Self::zero(n, cap);
        j.coeffs[0] = c;
        j
    }

    pub fn one(n: usize, cap: u32) -> Self {
        Self::constant(n, cap, S::one())
    }

    /// The coordinate function `z_{j+1}` (0-based `j`).
    pub fn variable(n: usize, cap: u32, j: usize) -> Self {
        assert!(j < n, "variable index out of range");
        Self::monomial(n, cap, &MultiIndex::unit(n, j), S::one())
    }

    /// `c·z^α`; the zero jet if `|α| > cap`.
    pub fn monomial(n: usize, cap: u32, alpha: &MultiIndex, c: S) -> Self {
        let mut j = Self::zero(n, cap);
        if let Some(i) = j.basis.index_of(alpha) {
            j.coeffs[i] = c;
        }
        j
    }

    /// Builds a jet from `(α, c)` terms, summing repeats and dropping terms of
    /// weight above `cap`.
    pub fn from_terms<I>(n: usize, cap: u32, terms: I) -> Result<Self, JetError>
    where
        I: IntoIterator<Item = (MultiIndex, S)>,
    {
        if n == 0 {
            return Err(JetError::NoVariables);
        }
        let mut j = Self::zero(n, cap);
        for (alpha, c) in terms {
            if alpha.len() != n {
                return Err(JetError::IndexLength {
                    got: alpha.len(),
                    expected: n,
                    alpha: alpha.entries().to_vec(),
                });
            }
            if let Some(i) = j.basis.index_of(&alpha) {
                j.coeffs[i] += &c;
            }
        }
        Ok(j)
    }

    pub(crate) fn from_raw(basis: Arc<MonomialBasis>, coeffs: Vec<S>) -> Self {
        debug_assert_eq!(basis.len(), coeffs.len());
        Jet { basis, coeffs }
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    /// Total-degree cap `D`.
    pub fn cap(&self) -> u32 {
        self.basis.cap()
    }

    pub fn regime(&self) -> Regime {
        S::REGIME
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> S {
        self.basis
            .index_of(alpha)
            .map(|i| self.coeffs[i].clone())
            .unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> &S {
        &self.coeffs[0]
    }

    /// `(α, coefficient)` over every stored monomial, including zeros.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.basis.monomials().iter().zip(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(num_traits::Zero::is_zero)
    }

    /// Largest weight carrying a nonzero coefficient; `None` for the zero jet.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .find(|(_, c)| !c.is_zero())
            .map(|(i, _)| self.basis.weight(i))
    }

    pub fn same_shape(&self, other: &Jet<S>) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis)
            || (self.n() == other.n() && self.cap() == other.cap())
    }

    pub fn check_shape(&self, other: &Jet<S>) -> Result<(), JetError> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(JetError::ShapeMismatch {
                left_n: self.n(),
                left_d: self.cap(),
                right_n: other.n(),
                right_d: other.cap(),
            })
        }
    }

    /// Drop every coefficient of weight above `cap`.
    pub fn truncate(&self, cap: u32) -> Result<Self, JetError> {
        if cap > self.cap() {
            return Err(JetError::TruncationAboveCap {
                requested: cap,
                cap: self.cap(),
            });
        }
        let basis = MonomialBasis::shared(self.n(), cap);
        let coeffs = self.coeffs[..basis.len()].to_vec();
        Ok(Jet { basis, coeffs })
    }

    /// Re-embed into a larger cap, padding with zeros.
    pub fn extend(&self, cap: u32) -> Result<Self, JetError> {
        if cap < self.cap() {
            return self.truncate(cap);
        }
        let basis = MonomialBasis::shared(self.n(), cap);
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(basis.len(), S::zero());
        Ok(Jet { basis, coeffs })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Jet<T> {
        Jet {
            basis: Arc::clone(&self.basis),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_complex(&self) -> Jet<Complex64> {
        self.map(S::to_complex)
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    /// `R^m`: multiplies the coefficient of `z^α` by `|α|^m`.
    pub fn radial_power(&self, m: u32) -> Self {
        if m == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let w = self.basis.weight(i) as i64;
                if w == 0 || c.is_zero() {
                    S::zero()
                } else {
                    c.clone() * S::from_integer(w.pow(m))
                }
            })
            .collect();
        Jet::from_raw(Arc::clone(&self.basis), coeffs)
    }

    /// `R f`.
    pub fn radial(&self) -> Self {
        self.radial_power(1)
    }

    pub fn checked_add(&self, other: &Jet<S>) -> Result<Self, JetError> {
        self.check_shape(other)?;
        let mut coeffs = self.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(Jet::from_raw(Arc::clone(&self.basis), coeffs))
    }

    pub fn checked_sub(&self, other: &Jet<S>) -> Result<Self, JetError> {
        self.check_shape(other)?;
        let mut coeffs = self.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        Ok(Jet::from_raw(Arc::clone(&self.basis), coeffs))
    }

    /// Truncated Cauchy product.
    pub fn checked_mul(&self, other: &Jet<S>) -> Result<Self, JetError> {
        self.check_shape(other)?;
        let coeffs = S::convolve(
            self.basis.pairs(),
            self.basis.len(),
            &self.coeffs,
            &other.coeffs,
        );
        Ok(Jet::from_raw(Arc::clone(&self.basis), coeffs))
    }

    /// Non-negative integer power by repeated squaring.
    pub fn powu(&self, k: u32) -> Self {
        let mut result = Jet::one(self.n(), self.cap());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `f^k` for any integer `k`; negative powers need `f(0) ≠ 0`.
    pub fn int_pow(&self, k: i64) -> Result<Self, JetError> {
        if k >= 0 {
            Ok(self.powu(k as u32))
        } else {
            Ok(self.inverse()?.powu(k.unsigned_abs() as u32))
        }
    }

    /// Largest coefficient-wise `|self − other|`.
    pub fn max_abs_diff(&self, other: &Jet<S>) -> Result<Magnitude, JetError> {
        self.check_shape(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(Magnitude::zero(S::REGIME), Magnitude::max))
    }

    /// Evaluate the polynomial at a point of ℂⁿ.
    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n(), "point dimension");
        self.terms()
            .filter(|(_, c)| !c.is_zero())
            .map(|(alpha, c)| {
                let mono: Complex64 = alpha
                    .entries()
                    .iter()
                    .zip(z)
                    .map(|(&a, zj)| zj.powu(a))
                    .product();
                c.to_complex() * mono
            })
            .sum()
    }
}

/// Seeded random jet. Exact coefficients are `p/q` with `p ∈ [−9, 9]`,
/// `q ∈ [1, 9]`; float coefficients have real and imaginary parts in `[−½, ½)`.
pub fn random_jet<S: Scalar>(n: usize, cap: u32, seed: u64, constraint: Constraint) -> Jet<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = MonomialBasis::shared(n, cap);
    let mut coeffs: Vec<S> = (0..basis.len()).map(|_| S::sample(&mut rng)).collect();
    if constraint == Constraint::UnitConstant {
        coeffs[0] = S::one();
    }
    Jet::from_raw(basis, coeffs)
}

/// Convenience for exact jets.
pub type ExactJet = Jet<BigRational>;
/// Convenience for complex-float jets.
pub type FloatJet = Jet<Complex64>;

impl<S: Scalar> PartialEq for Jet<S> {
    fn eq(&self, other: &Self) -> bool {
        self.same_shape(other) && self.coeffs == other.coeffs
    }
}

impl<S: Scalar> fmt::Debug for Jet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet[n={}, D={}, {}](", self.n(), self.cap(), S::REGIME)?;
        let mut first = true;
        for (alpha, c) in self.terms().filter(|(_, c)| !c.is_zero()) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}·z^{alpha}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

// Operator impls panic on shape mismatch; use the `checked_*` methods at API
// boundaries.
macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<S: Scalar> $tr<&Jet<S>> for &Jet<S> {
            type Output = Jet<S>;
            fn $method(self, rhs: &Jet<S>) -> Jet<S> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<S: Scalar> $tr<Jet<S>> for Jet<S> {
            type Output = Jet<S>;
            fn $method(self, rhs: Jet<S>) -> Jet<S> {
                (&self).$method(&rhs)
            }
        }
        impl<S: Scalar> $tr<&Jet<S>> for Jet<S> {
            type Output = Jet<S>;
            fn $method(self, rhs: &Jet<S>) -> Jet<S> {
                (&self).$method(rhs)
            }
        }
        impl<S: Scalar> $tr<Jet<S>> for &Jet<S> {
            type Output = Jet<S>;
            fn $method(self, rhs: Jet<S>) -> Jet<S> {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<S: Scalar> Neg for &Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        self.map(|c| -c.clone())
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        -&self
    }
}
