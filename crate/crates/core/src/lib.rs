//! Exact truncated power series on the unit ball of ℂⁿ, the radial derivative
//! `R = z₁∂₁ + ⋯ + zₙ∂ₙ`, and the commutator identities for `R^m(f^t h)` and
//! `R^m((log f) h)`, plus a numerical layer for Besov-Dirichlet and
//! Drury-Arveson norms.

pub mod coefficients;
pub mod error;
pub mod identities;
pub mod jets;
pub mod scalar;
pub mod spaces;

pub use error::{CoefficientError, IdentityError, JetError, SpaceError};
pub use identities::{
    norm_bound_demo, run_sweep, BoundMode, BoundReport, IdentityId, SweepConfig, VerificationReport,
};
pub use jets::{random_jet, Constraint, ExactJet, FloatJet, Jet, MonomialBasis, MultiIndex};
pub use scalar::{format_rational, parse_rational, Exponent, Magnitude, Regime, Scalar};
pub use spaces::{SamplerConfig, SpaceParams};
