//! Seeded batches of verification trials.

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::IdentityError;
use crate::jets::{random_jet, Constraint, Jet};
use crate::scalar::{Exponent, Regime, Scalar};

use super::{
    verify_fdb_power, verify_log_identity, verify_log_leibniz, verify_power_identity,
    verify_power_leibniz, verify_reciprocal_identity, verify_reciprocal_triangle, verify_x_lemma,
    IdentityId, VerificationReport,
};

/// Parameters for a batch of randomized trials.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub id: IdentityId,
    pub n: usize,
    /// Derivative order; the Faà di Bruno order `ν` for [`IdentityId::FdbPower`].
    pub m: u32,
    pub cap: u32,
    pub t: Option<Exponent>,
    /// Column for [`IdentityId::Lemma`]; `None` checks every `1 ≤ r ≤ m`.
    pub r: Option<u32>,
    /// Power for [`IdentityId::FdbPower`].
    pub k: Option<u32>,
    pub trials: u32,
    pub seed: u64,
    pub regime: Regime,
    pub tolerance: f64,
}

/// The `(f, h)` pair used by trial `seed`. `f(0) = 1` except for the
/// reciprocal formula, which takes a random nonzero constant.
pub fn trial_jets<S: Scalar>(id: IdentityId, n: usize, cap: u32, seed: u64) -> (Jet<S>, Jet<S>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (seed_f, seed_h) = (rng.random::<u64>(), rng.random::<u64>());
    let f = if id == IdentityId::Reciprocal {
        let f = random_jet::<S>(n, cap, seed_f, Constraint::Free);
        if f.constant_term().is_zero() {
            &f + &Jet::one(n, cap)
        } else {
            f
        }
    } else {
        random_jet::<S>(n, cap, seed_f, Constraint::UnitConstant)
    };
    let h = random_jet::<S>(n, cap, seed_h, Constraint::Free);
    (f, h)
}

fn run_trial<S: Scalar>(cfg: &SweepConfig, seed: u64) -> Result<VerificationReport, IdentityError> {
    let (f, h) = trial_jets::<S>(cfg.id, cfg.n, cfg.cap, seed);
    let tol = cfg.tolerance;
    let t = || cfg.t.as_ref().ok_or(IdentityError::MissingParameter("t"));
    let mut report = match cfg.id {
        IdentityId::Power => verify_power_identity(&f, &h, cfg.m, t()?, tol)?,
        IdentityId::Log => verify_log_identity(&f, &h, cfg.m, tol)?,
        IdentityId::Reciprocal => verify_reciprocal_identity(&f, &h, cfg.m, tol)?,
        IdentityId::Triangle => verify_reciprocal_triangle(&f, &h, cfg.m, tol)?,
        IdentityId::PowerLeibniz => verify_power_leibniz(&f, &h, cfg.m, t()?, false, tol)?,
        IdentityId::PowerX => verify_power_leibniz(&f, &h, cfg.m, t()?, true, tol)?,
        IdentityId::LogLeibniz => verify_log_leibniz(&f, &h, cfg.m, false, tol)?,
        IdentityId::LogX => verify_log_leibniz(&f, &h, cfg.m, true, tol)?,
        IdentityId::FdbPower => {
            let k = cfg.k.ok_or(IdentityError::MissingParameter("k"))?;
            verify_fdb_power(&f, k, cfg.m, tol)?
        }
        IdentityId::Lemma => match cfg.r {
            Some(r) => verify_x_lemma(&f, &h, cfg.m, r, tol)?,
            None => {
                let mut reports = (1..=cfg.m)
                    .map(|r| verify_x_lemma(&f, &h, cfg.m, r, tol))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut worst = reports.remove(0);
                for rep in reports {
                    worst.residual = worst.residual.max(rep.residual);
                    worst.pass &= rep.pass;
                    worst.elapsed += rep.elapsed;
                }
                worst.r = None;
                worst
            }
        },
    };
    report.seed = Some(seed);
    Ok(report)
}

/// Runs trials `seed, seed + 1, …, seed + trials − 1`. Trials run in
/// parallel on the current rayon pool; reports come back in trial order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<VerificationReport>, IdentityError> {
    let seeds: Vec<u64> = (0..cfg.trials as u64)
        .map(|i| cfg.seed.wrapping_add(i))
        .collect();
    match cfg.regime {
        Regime::Exact => seeds
            .par_iter()
            .map(|&s| run_trial::<BigRational>(cfg, s))
            .collect(),
        Regime::Float => seeds
            .par_iter()
            .map(|&s| run_trial::<Complex64>(cfg, s))
            .collect(),
    }
}
