//! Norm of a polynomial multiplier compressed to low degrees.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::SpaceError;
use crate::jets::{FloatJet, MonomialBasis};

use super::SpaceParams;

/// Operator norm of `h ↦ f·h` from polynomials of degree `≤ d` into the
/// space, measured in its orthonormal monomial basis.
///
/// The product `f·h` must be exact, so `d + deg f` may not exceed the
/// capacity of `f`. Columns are `z^α/‖z^α‖` with `|α| ≤ d`, rows are
/// `z^β/‖z^β‖` with `|β| ≤ d + deg f`, and the result is the largest
/// singular value. It is nondecreasing in `d` and bounded by `‖M_f‖`.
pub fn compression_multiplier_norm(
    f: &FloatJet,
    space: &SpaceParams,
    d: u32,
) -> Result<f64, SpaceError> {
    if f.n() != space.n() {
        return Err(SpaceError::DimensionMismatch {
            jet: f.n(),
            space: space.n(),
        });
    }
    let deg = f.degree().unwrap_or(0);
    if d + deg > f.cap() {
        return Err(SpaceError::CapacityExceeded {
            deg,
            d,
            cap: f.cap(),
        });
    }
    let n = f.n();
    let cols = MonomialBasis::shared(n, d);
    let rows = MonomialBasis::shared(n, d + deg);
    let norms: Vec<f64> = rows
        .monomials()
        .iter()
        .map(|b| space.monomial_norm_sq_f64(b).sqrt())
        .collect();
    let f_terms: Vec<_> = f
        .terms()
        .filter(|(a, c)| a.weight() <= deg && **c != Complex64::new(0.0, 0.0))
        .map(|(a, c)| (a.clone(), *c))
        .collect();
    let mut m = DMatrix::<Complex64>::zeros(rows.len(), cols.len());
    for (j, alpha) in cols.monomials().iter().enumerate() {
        for (gamma, c) in &f_terms {
            let beta = alpha.add(gamma);
            let i = rows.index_of(&beta).expect("degree within row basis");
            m[(i, j)] += c * (norms[i] / norms[j]);
        }
    }
    Ok(m.singular_values().iter().copied().fold(0.0, f64::max))
}
