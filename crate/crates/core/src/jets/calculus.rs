//! Analytic functional calculus on jets.
//!
//! Each function splits off the constant term and sums a finite nilpotent
//! series: if `u(0) = 0` then `u^k` vanishes below weight `k`, so `k ≤ D`
//! terms are exact.

use crate::error::JetError;
use crate::scalar::{Exponent, Scalar};

use super::Jet;

impl<S: Scalar> Jet<S> {
    /// Splits `f = c·(1 + u)` with `u(0) = 0`.
    fn normalized(&self, what: &'static str) -> Result<(S, Jet<S>), JetError> {
        let c = self.constant_term().clone();
        if c.is_zero() {
            return Err(JetError::VanishingConstant(what));
        }
        let mut u = self.scale(&(S::one() / c.clone()));
        u.coeffs[0] = S::zero();
        Ok((c, u))
    }

    /// `Σ_{k=0}^{D} weights[k]·u^k` for `u(0) = 0`.
    fn nilpotent_series(u: &Jet<S>, weight: impl Fn(u32) -> S) -> Jet<S> {
        let mut acc = Jet::constant(u.n(), u.cap(), weight(0));
        let mut power = Jet::one(u.n(), u.cap());
        for k in 1..=u.cap() {
            power = &power * u;
            let w = weight(k);
            if !w.is_zero() {
                acc = &acc + &power.scale(&w);
            }
        }
        acc
    }

    /// `1/f`, requires `f(0) ≠ 0` (any nonzero constant, in both regimes).
    pub fn inverse(&self) -> Result<Jet<S>, JetError> {
        let (c, u) = self.normalized("inverse")?;
        let series = Self::nilpotent_series(&u, |k| if k % 2 == 0 { S::one() } else { -S::one() });
        Ok(series.scale(&(S::one() / c)))
    }

    /// Logarithm via the Mercator series.
    ///
    /// Exact regime: `f(0) = 1` and the result has zero constant term.
    /// Float regime: `f(0) ≠ 0`, principal branch at the origin.
    pub fn log(&self) -> Result<Jet<S>, JetError> {
        let (c, u) = self.normalized("log")?;
        let log_c = c.log_constant().ok_or(JetError::NonUnitConstant("log"))?;
        let mut series = Self::nilpotent_series(&u, |k| match k {
            0 => S::zero(),
            k if k % 2 == 1 => S::one() / S::from_integer(k as i64),
            k => -(S::one() / S::from_integer(k as i64)),
        });
        series.coeffs[0] = log_c;
        Ok(series)
    }

    /// `exp(g) = e^{g(0)}·Σ_k v^k/k!` with `v = g − g(0)`.
    ///
    /// Exact regime requires `g(0) = 0`.
    pub fn exp(&self) -> Result<Jet<S>, JetError> {
        let e_c = self
            .constant_term()
            .exp_constant()
            .ok_or(JetError::NonZeroConstant("exp"))?;
        let mut v = self.clone();
        v.coeffs[0] = S::zero();
        let mut inv_fact = Vec::with_capacity(self.cap() as usize + 1);
        let mut acc = S::one();
        inv_fact.push(acc.clone());
        for k in 1..=self.cap() {
            acc = acc / S::from_integer(k as i64);
            inv_fact.push(acc.clone());
        }
        Ok(Self::nilpotent_series(&v, |k| inv_fact[k as usize].clone()).scale(&e_c))
    }

    /// `f^t = exp(t·log f)`.
    ///
    /// Exact regime: `f(0) = 1` and `t` rational. Float regime: `f(0) ≠ 0`,
    /// `f(0)^t` taken on the principal branch.
    pub fn real_pow(&self, t: &Exponent) -> Result<Jet<S>, JetError> {
        let t = S::exponent(t)?;
        if S::REGIME == crate::scalar::Regime::Exact && !self.constant_term().is_one() {
            return Err(if self.constant_term().is_zero() {
                JetError::VanishingConstant("real power")
            } else {
                JetError::NonUnitConstant("real power")
            });
        }
        self.log()?.scale(&t).exp()
    }
}
