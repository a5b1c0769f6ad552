//! Numerical check of the norm bounds implied by the power and logarithm
//! identities in `H_{m,s}`.
//!
//! From the power identity,
//! `‖R^m(f^t h)‖_s ≤ Σ_{k=0}^m |ρ_k|·sup|f^{t−k}|·‖R^m(f^k h)‖_s`,
//! and from the logarithm identity,
//! `‖R^m((log f) h)‖_s ≤ sup|log f|·‖R^m h‖_s + Σ_{k=0}^m |a_k|·sup|f^{−k}|·‖R^m(f^k h)‖_s`.
//! Suprema are estimated on a point cloud and inflated by [`HEADROOM`].

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use crate::coefficients::{a_coefficients, rho_closed_form_f64, rho_coefficients};
use crate::error::IdentityError;
use crate::jets::{FloatJet, Jet};
use crate::scalar::{rational_to_f64, Exponent};
use crate::spaces::{hms_norm_sq, radial_bergman_norm_sq, sample_points, SamplerConfig};

/// Factor applied to sampled suprema to cover points the cloud misses.
pub const HEADROOM: f64 = 1.1;

/// Below this sampled `min |f|`, negative powers of `f` are not bounded.
const MIN_MODULUS: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum BoundMode {
    Power(Exponent),
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub mode: String,
    pub m: u32,
    /// `‖F h‖_{m,s}` with `F = f^t` or `log f`.
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// `‖R^m(F h)‖_s`.
    pub lhs_radial: f64,
    pub rhs_radial: f64,
    pub min_modulus: f64,
    pub holds: bool,
}

/// Evaluates both sides of the bound for polynomial `f`, `h`.
///
/// The jets must be polynomials whose products `f^k h`, `k ≤ m`, fit in the
/// cap, so every norm on the right is exact. The left side is a truncation
/// of a nonnegative series and therefore a lower bound of the true norm.
pub fn norm_bound_demo(
    f: &FloatJet,
    h: &FloatJet,
    m: u32,
    s: &BigRational,
    mode: &BoundMode,
    sampler: &SamplerConfig,
) -> Result<BoundReport, IdentityError> {
    if m == 0 {
        return Err(IdentityError::Order(m));
    }
    f.check_shape(h)?;
    let needed = m * f.degree().unwrap_or(0) + h.degree().unwrap_or(0);
    if needed > f.cap() {
        return Err(IdentityError::InsufficientCap {
            cap: f.cap(),
            needed,
        });
    }
    let points = sample_points(f.n(), sampler)?;
    let values: Vec<Complex64> = points.iter().map(|z| f.evaluate(z)).collect();
    let min_modulus = values
        .iter()
        .map(|v| v.norm())
        .fold(f64::INFINITY, f64::min);
    if min_modulus < MIN_MODULUS {
        return Err(IdentityError::NearZero(min_modulus));
    }

    let radial = |g: &FloatJet| radial_bergman_norm_sq(g, m, s).map(f64::sqrt);
    let full = |g: &FloatJet| hms_norm_sq(g, m, s).map(f64::sqrt);
    let mut fk_h = Vec::with_capacity(m as usize + 1);
    let mut acc = h.clone();
    for _ in 0..=m {
        fk_h.push((radial(&acc)?, full(&acc)?));
        acc = &acc * f;
    }
    let h_full = fk_h[0].1;
    let f0 = *f.constant_term();

    let (label, big_f, head, weights) = match mode {
        BoundMode::Power(t) => {
            let tf = t.to_f64();
            let rho = match t {
                Exponent::Rational(q) => {
                    let pc = rho_coefficients(m, q)?;
                    (0..=m).map(|k| rational_to_f64(pc.rho_k(k))).collect()
                }
                Exponent::Float(x) => rho_closed_form_f64(m, *x),
            };
            let weights: Vec<f64> = (0..=m)
                .map(|k| {
                    let sup = values
                        .iter()
                        .map(|v| v.norm().powf(tf - f64::from(k)))
                        .fold(0.0, f64::max);
                    rho[k as usize].abs() * HEADROOM * sup
                })
                .collect();
            (
                format!("power(t={t})"),
                f.real_pow(t)?,
                f0.norm().powf(tf),
                weights,
            )
        }
        BoundMode::Log => {
            if values.iter().any(|v| (v / f0).re <= 0.0) {
                return Err(IdentityError::BranchAmbiguous);
            }
            let log0 = f0.ln();
            let sup_log = values
                .iter()
                .map(|v| (log0 + (v / f0).ln()).norm())
                .fold(0.0, f64::max);
            let a = a_coefficients(m)?;
            let c = min_modulus / HEADROOM;
            let weights: Vec<f64> = (0..=m)
                .map(|k| rational_to_f64(a.a_k(k)).abs() * c.powi(-(k as i32)))
                .collect();
            let log_part = HEADROOM * sup_log;
            // The sup|log f|·R^m h term rides on k = 0.
            let mut weights = weights;
            weights[0] += log_part;
            ("log".to_string(), f.log()?, log0.norm(), weights)
        }
    };

    let product: Jet<Complex64> = &big_f * h;
    let lhs_radial = radial(&product)?;
    let lhs = full(&product)?;
    let rhs_radial: f64 = weights.iter().zip(&fk_h).map(|(w, (r, _))| w * r).sum();
    let rhs = head * h_full
        + weights
            .iter()
            .zip(&fk_h)
            .map(|(w, (_, n))| w * n)
            .sum::<f64>();
    Ok(BoundReport {
        mode: label,
        m,
        lhs,
        rhs,
        slack: rhs - lhs,
        lhs_radial,
        rhs_radial,
        min_modulus,
        holds: lhs_radial <= rhs_radial && lhs <= rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn poly(n: usize, cap: u32, terms: &[(&[u32], f64)]) -> FloatJet {
        Jet::from_terms(
            n,
            cap,
            terms.iter().map(|(a, c)| {
                (
                    crate::jets::MultiIndex::new(a.to_vec()),
                    Complex64::new(*c, 0.0),
                )
            }),
        )
        .unwrap()
    }

    #[test]
    fn power_bound_example() {
        let f = poly(2, 8, &[(&[0, 0], 1.0), (&[1, 0], 0.3)]);
        let h = poly(2, 8, &[(&[0, 1], 1.0)]);
        let mode = BoundMode::Power(Exponent::Rational(rational(1, 2)));
        let rep =
            norm_bound_demo(&f, &h, 1, &rational(0, 1), &mode, &SamplerConfig::default()).unwrap();
        assert!(rep.holds && rep.slack > 0.0, "{rep:?}");
    }

    #[test]
    fn log_bound_holds() {
        let f = poly(2, 8, &[(&[0, 0], 2.0), (&[1, 1], 0.5), (&[0, 1], -0.4)]);
        let h = poly(2, 8, &[(&[1, 0], 1.0), (&[0, 2], 0.7)]);
        let rep = norm_bound_demo(
            &f,
            &h,
            2,
            &rational(1, 2),
            &BoundMode::Log,
            &SamplerConfig::default(),
        )
        .unwrap();
        assert!(rep.holds, "{rep:?}");
    }

    #[test]
    fn refusals() {
        let cfg = SamplerConfig::default();
        let s = rational(0, 1);
        let f = poly(1, 6, &[(&[1], 1.0)]);
        let h = poly(1, 6, &[(&[1], 1.0)]);
        let half = BoundMode::Power(Exponent::Float(0.5));
        assert!(matches!(
            norm_bound_demo(&f, &h, 1, &s, &half, &cfg),
            Err(IdentityError::NearZero(_))
        ));
        let f = poly(1, 3, &[(&[0], 1.0), (&[1], 0.5)]);
        let h3 = poly(1, 3, &[(&[1], 1.0)]);
        assert!(matches!(
            norm_bound_demo(&f, &h3, 3, &s, &half, &cfg),
            Err(IdentityError::InsufficientCap { .. })
        ));
        let f = poly(1, 6, &[(&[0], 0.2), (&[1], 0.9)]);
        assert!(matches!(
            norm_bound_demo(&f, &h, 1, &s, &BoundMode::Log, &cfg),
            Err(IdentityError::BranchAmbiguous)
        ));
    }
}
