//! Residual checks for the radial-derivative commutator identities.
//!
//! Every check evaluates both sides of an identity on jets and reports the
//! largest coefficient difference. In the exact regime a check passes only
//! when that difference is literally zero.

mod bounds;
mod sweep;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::coefficients::{
    a_coefficients, binomial, c_table, falling_factorial, fdb_table, log_derivative,
    rho_closed_form_f64, rho_coefficients, CTable,
};
use crate::error::IdentityError;
use crate::jets::{Jet, MultiIndex};
use crate::scalar::{Exponent, Magnitude, Regime, Scalar};

pub use bounds::{norm_bound_demo, BoundMode, BoundReport, HEADROOM};
pub use sweep::{run_sweep, trial_jets, SweepConfig};

/// Default absolute tolerance for float-regime comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Which identity a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityId {
    /// `R^m(f^{-1}h)` as a combination of `f^{-(m-k+1)} R^m(f^{m-k}h)`.
    Reciprocal,
    /// Power identity for `f^t`.
    Power,
    /// Logarithm identity.
    Log,
    /// `Σ_k c_{k,r} f^{-k} Σ_ν C^m_ν (R^ν f^k)(R^{m−ν}h) = X_{f,r}h`.
    Lemma,
    /// Leibniz form of the power identity through the c table.
    PowerLeibniz,
    /// Leibniz form of the power identity through `X_{f,r}`.
    PowerX,
    /// Leibniz form of the logarithm identity through the c table.
    LogLeibniz,
    /// Leibniz form of the logarithm identity through `X_{f,r}`.
    LogX,
    /// Faà di Bruno expansion of `R^ν f^k`.
    FdbPower,
    /// Power identity at `t = −1`, reciprocal formula and direct evaluation, pairwise.
    Triangle,
}

impl IdentityId {
    pub const ALL: [IdentityId; 10] = [
        IdentityId::Reciprocal,
        IdentityId::Power,
        IdentityId::Log,
        IdentityId::Lemma,
        IdentityId::PowerLeibniz,
        IdentityId::PowerX,
        IdentityId::LogLeibniz,
        IdentityId::LogX,
        IdentityId::FdbPower,
        IdentityId::Triangle,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::Reciprocal => "eq1.2",
            IdentityId::Power => "eq1.3",
            IdentityId::Log => "eq1.4",
            IdentityId::Lemma => "eq3.4",
            IdentityId::PowerLeibniz => "eq3.6",
            IdentityId::PowerX => "eq3.7",
            IdentityId::LogLeibniz => "eq3.9",
            IdentityId::LogX => "eq3.10",
            IdentityId::FdbPower => "fdb",
            IdentityId::Triangle => "triangle",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = IdentityError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| IdentityError::UnknownIdentity(s.to_string()))
    }
}

/// Outcome of one verification trial.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub id: IdentityIdLabel,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(rename = "D")]
    pub cap: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub regime: Regime,
    pub residual: Magnitude,
    pub pass: bool,
    /// Wall time; kept out of serialized reports so replays are byte-identical.
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Serializes as the identity's string id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityIdLabel(pub IdentityId);

impl Serialize for IdentityIdLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.0.as_str())
    }
}

impl VerificationReport {
    fn new<S: Scalar>(
        id: IdentityId,
        f: &Jet<S>,
        m: Option<u32>,
        residual: Magnitude,
        tolerance: f64,
        started: Instant,
    ) -> Self {
        VerificationReport {
            id: IdentityIdLabel(id),
            n: f.n(),
            m,
            cap: f.cap(),
            t: None,
            r: None,
            k: None,
            nu: None,
            seed: None,
            regime: S::REGIME,
            pass: residual.within(tolerance),
            residual,
            elapsed: started.elapsed(),
        }
    }

    fn with_t(mut self, t: &Exponent) -> Self {
        self.t = Some(t.to_string());
        self
    }

    pub fn identity(&self) -> IdentityId {
        self.id.0
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report fields are plain data")
    }
}

fn check_order(m: u32) -> Result<(), IdentityError> {
    if m == 0 {
        Err(IdentityError::Order(m))
    } else {
        Ok(())
    }
}

fn binom<S: Scalar>(m: u32, nu: u32) -> S {
    let b = binomial(m as i64, nu as i64).expect("0 ≤ ν ≤ m");
    S::from_rational(&BigRational::from_integer(BigInt::from(b)))
}

fn rat<S: Scalar>(q: &BigRational) -> S {
    S::from_rational(q)
}

/// `Σ_{ν=1}^m C^m_ν (R^ν g)(R^{m−ν} h)`.
pub fn leibniz_sum<S: Scalar>(g: &Jet<S>, h: &Jet<S>, m: u32) -> Result<Jet<S>, IdentityError> {
    g.check_shape(h)?;
    let mut acc = Jet::zero(g.n(), g.cap());
    for nu in 1..=m {
        let term = &g.radial_power(nu) * &h.radial_power(m - nu);
        acc = &acc + &term.scale(&binom(m, nu));
    }
    Ok(acc)
}

/// `R^m(gh) − g·R^m h`, cross-checked against the Leibniz expansion.
pub fn commutator_defect<S: Scalar>(
    g: &Jet<S>,
    h: &Jet<S>,
    m: u32,
) -> Result<Jet<S>, IdentityError> {
    g.check_shape(h)?;
    let direct = &(g * h).radial_power(m) - &(g * &h.radial_power(m));
    let expanded = leibniz_sum(g, h, m)?;
    let diff = direct.max_abs_diff(&expanded)?;
    let scale = direct
        .coeffs()
        .iter()
        .map(|c| c.magnitude().to_f64())
        .fold(1.0, f64::max);
    if !diff.within(DEFAULT_TOLERANCE * scale) {
        return Err(IdentityError::Disagreement("commutator defect"));
    }
    Ok(direct)
}

/// `ρ_0, …, ρ_m` as scalars; float exponents use the closed form in floating point.
fn rho_scalars<S: Scalar>(m: u32, t: &Exponent) -> Result<Vec<S>, IdentityError> {
    match t {
        Exponent::Rational(q) => {
            let p = rho_coefficients(m, q)?;
            Ok((0..=m).map(|k| rat(p.rho_k(k))).collect())
        }
        Exponent::Float(x) => {
            if S::REGIME == Regime::Exact {
                return Err(crate::error::JetError::FloatExponentInExactRegime(*x).into());
            }
            Ok(rho_closed_form_f64(m, *x)
                .into_iter()
                .map(|r| S::from_f64(r))
                .collect())
        }
    }
}

/// `u(r) = t(t−1)⋯(t−r+1)` evaluated in the scalar field.
fn falling_power_scalar<S: Scalar>(t: &S, r: u32) -> S {
    (0..r).fold(S::one(), |acc, j| {
        acc * (t.clone() - S::from_integer(j as i64))
    })
}

/// Cached powers of `f` shared by the identity checks.
struct Powers<S: Scalar> {
    pos: Vec<Jet<S>>,
    neg: Vec<Jet<S>>,
}

impl<S: Scalar> Powers<S> {
    fn new(f: &Jet<S>, max: u32) -> Result<Self, IdentityError> {
        let inv = f.inverse()?;
        let mut pos = vec![Jet::one(f.n(), f.cap())];
        let mut neg = vec![Jet::one(f.n(), f.cap())];
        for k in 1..=max as usize {
            pos.push(&pos[k - 1] * f);
            neg.push(&neg[k - 1] * &inv);
        }
        Ok(Powers { pos, neg })
    }

    fn pos(&self, k: u32) -> &Jet<S> {
        &self.pos[k as usize]
    }

    fn neg(&self, k: u32) -> &Jet<S> {
        &self.neg[k as usize]
    }
}

/// `Σ_{k=1}^m coef_k · f^{−k}·{R^m(f^k h) − f^k R^m h}`.
fn defect_combination<S: Scalar>(
    powers: &Powers<S>,
    h: &Jet<S>,
    m: u32,
    coef: impl Fn(u32) -> S,
) -> Jet<S> {
    let rmh = h.radial_power(m);
    let mut acc = Jet::zero(h.n(), h.cap());
    for k in 1..=m {
        let c = coef(k);
        if c.is_zero() {
            continue;
        }
        let fk = powers.pos(k);
        let defect = &(fk * h).radial_power(m) - &(fk * &rmh);
        acc = &acc + &(powers.neg(k) * &defect).scale(&c);
    }
    acc
}

fn require_unit_or_nonzero<S: Scalar>(f: &Jet<S>, what: &'static str) -> Result<(), IdentityError> {
    let c = f.constant_term();
    if c.is_zero() {
        return Err(crate::error::JetError::VanishingConstant(what).into());
    }
    if S::REGIME == Regime::Exact && !c.is_one() {
        return Err(crate::error::JetError::NonUnitConstant(what).into());
    }
    Ok(())
}

/// `R^m(f^t h) − f^t R^m h = f^t Σ_k ρ_k f^{−k}{R^m(f^k h) − f^k R^m h}`.
pub fn verify_power_identity<S: Scalar>(
    f: &Jet<S>,
    h: &Jet<S>,
    m: u32,
    t: &Exponent,
    tolerance: f64,
) -> Result<VerificationReport, IdentityError> {
    let started = Instant::now();
    check_order(m)?;
    f.check_shape(h)?;
    require_unit_or_nonzero(f, "power identity")?;
    let rho = rho_scalars::<S>(m, t)?;
    let g = f.real_pow(t)?;
    let lhs = commutator_defect(&g, h, m)?;
    let powers = Powers::new(f, m)?;
    let rhs = &g * &defect_combination(&powers, h, m, |k| rho[k as usize].clone());
    let residual = lhs.max_abs_diff(&rhs)?;
    Ok(
        VerificationReport::new(IdentityId::Power, f, Some(m), residual, tolerance, started)
            .with_t(t),
    )
}

/// `R^m((log f)h) − (log f)R^m h = Σ_k a_k f^{−k}{R^m(f^k h) − f^k R^m h}`.
pub fn verify_log_identity<S: Scalar>(
    f: &Jet<S>,
    h: &Jet<S>,
    m: u32,
    tolerance: f64,
) -> Result<VerificationReport, IdentityError> {
    let started = Instant::now();
    check_order(m)?;
    f.check_shape(h)?;
    require_unit_or_nonzero(f, "log identity")?;
    let a = a_coefficients(m)?;
    let log_f = f.log()?;
    let lhs = commutator_defect(&log_f, h, m)?;
    let powers = Powers::new(f, m)?;
    let rhs = defect_combination(&powers, h, m, |k| rat(a.a_k(k)));
    let residual = lhs.max_abs_diff(&rhs)?;
    Ok(VerificationReport::new(
        IdentityId::Log,
        f,
        Some(m),
        residual,
        tolerance,
        started,
    ))
}

/// `Σ_{k=0}^m (−1)^{m−k} C(m+1, k) f^{−(m−k+1)} R^m(f^{m−k} h)`.
fn reciprocal_rhs<S: Scalar>(powers: &Powers<S>, h: &Jet<S>, m: u32) -> Jet<S> {
    let mut acc = Jet::zero(h.n(), h.cap());
    for k in 0..=m {
        let mut c: S = binom(m + 1, k);
        if (m - k) % 2 == 1 {
            c = -c;
        }
        let inner = (powers.pos(m - k) * h).radial_power(m);
        acc = &acc + &(powers.neg(m - k + 1) * &inner).scale(&c);
    }
    acc
}

/// Reciprocal formula; `f(0)` may be any nonzero constant in both regimes.
pub fn verify_reciprocal_identity<S: Scalar>(
    f: &Jet<S>,
    h: &Jet<S>,
    m: u32,
    tolerance: f64,
) -> Result<VerificationReport, IdentityError> {
    let started = Instant::now();
    check_order(m)?;
    f.check_shape(h)?;
    let powers = Powers::new(f, m + 1)?;
    let lhs = (powers.neg(1) * h).radial_power(m);
    let rhs = reciprocal_rhs(&powers, h, m);
    let residual = lhs.max_abs_diff(&rhs)?;
    Ok(VerificationReport::new(
        IdentityId::Reciprocal,
        f,
        Some(m),
        residual,
        tolerance,
        started,
    ))
}

/// `R^m(f^{−1}h)` three ways: directly, from the power identity at `t = −1`
/// (with `f^{−1}` from the exp-log route), and from the reciprocal formula.
/// The residual is the largest pairwise difference.
pub fn verify_reciprocal_triangle<S: Scalar>(
    f: &Jet<S>,
    h: &Jet<S>,
    m: u32,
    tolerance: f64,
) -> Result<VerificationReport, IdentityError> {
    let started = Instant::now();
    check_order(m)?;
    f.check_shape(h)?;
    require_unit_or_nonzero(f, "reciprocal triangle")?;
    let t = Exponent::Rational(BigRational::from_integer((-1).into()));
    let powers = Powers::new(f, m + 1)?;
    let direct = (powers.neg(1) * h).radial_power(m);

    let g = f.real_pow(&t)?;
    let rho = rho_scalars::<S>(m, &t)?;
    let via_power = &(&g * &h.radial_power(m))
        + &(&g * &defect_combination(&powers, h, m, |k| rho[k as usize].clone()));

    let via_reciprocal = reciprocal_rhs(&powers, h, m);

    let residual = direct
        .max_abs_diff(&via_power)?
        .max(direct.max_abs_diff(&via_reciprocal)?)
        .max(via_power.max_abs_diff(&via_reciprocal)?);
    Ok(VerificationReport::new(
        IdentityId::Triangle,
        f,
        Some(m),
        residual,
        tolerance,
        started,
    )
    .with_t(&t))
}

/// `[Rf, R²f, …, R^ν f]`.
fn radial_ladder<S: Scalar>(f: &Jet<S>, nu: u32) -> Vec<Jet<S>> {
    let mut out = Vec::with_capacity(nu as usize);
    let mut cur = f.clone();
    for _ in 0..nu {
        cur = cur.radial();
        out.push(cur.clone());
    }
    out
}

/// `(Rf, …, R^ν f)^α`.
fn ladder_monomial<S: Scalar>(ladder: &[Jet<S>], alpha: &MultiIndex) -> Jet<S> {
    let first = &ladder[0];
    let mut acc = Jet::one(first.n(), first.cap());
    for (j, &a) in alpha.entries().iter().enumerate() {
        if a > 0 {
            acc = &acc * &ladder[j].powu(a);
        }
    }
    acc
}

/// `Σ_{α ∈ A_{ν,i}} b_α (Rf, …, R^ν f)^α`.
fn stratum_sum<S: Scalar>(ladder: &[Jet<S>], nu: u32, i: u32) -> Result<Jet<S>, IdentityError> {
    let table = fdb_table(nu)?;
    let first = &ladder[0];
    let mut acc = Jet::zero(first.n(), first.cap());
    for (alpha, b) in table.stratum(i) {
        let term = ladder_monomial(&ladder[..nu as usize], alpha);
        acc = &acc + &term.scale(&S::from_integer(*b as i64));
    }
    Ok(acc)
}

/// `X_{f,i}h = f^{−i} Σ_{ν=i}^m C^m_ν Σ_{α∈A_{ν,i}} b_α (Rf,…,R^ν f)^α R^{m−ν}h`.
pub fn x_operator<S: Scalar>(
    f: &Jet<S>,
    h: &Jet<S>,
    m: u32,
    i: u32,
) -> Result<Jet<S>, IdentityError> {
    check_order(m)?;
    if i == 0 || i > m {
        return Err(IdentityError::IndexRange {
            name: "i",
            value: i,
            max: m,
        });
    }
    f.check_shape(h)?;
    let inv_i = f.int_pow(-(i as i64))?;
    let ladder = radial_ladder(f, m);
    Ok(&inv_i * &x_sum(&ladder, h, m, i)?)
}

fn x_sum<S: Scalar>(
    ladder: &[Jet<S>],
    h: &Jet<S>,
    m: u32,
    i: u32,
) -> Result<Jet<S>, IdentityError> {
    let mut acc = Jet::zero(h.n(), h.cap());
    for nu in i..=m {
        let strata = stratum_sum(ladder, nu, i)?;
        let term = &strata * &h.radial_power(m - nu);
        acc = &acc + &term.scale(&binom(m, nu));
    }
    Ok(acc)
}

/// `Σ_k c_{k,r} f^{−k} Σ_ν C^m_ν (R^ν f^k)(R^{m−ν} h)`.
fn lemma_lhs<S: Scalar>(
    powers: &Powers<S>,
    leibniz: &[Jet<S>],
    c: &CTable,
    m: u32,
    r: u32,
) -> Jet<S> {
    let first = &leibniz[0];
    let mut acc = Jet::zero(first.n(), first.cap());
    for k in 1..=m {
        let ckr = c.entry(k, r);
        if num_traits::Zero::is_zero(ckr) {
            continue;
        }
        acc = &acc + &(powers.neg(k) * &leibniz[k as usize - 1]).scale(&rat(ckr));
    }
    acc
}

fn power_leibniz_sums<S: Scalar>(
    powers: &Powers<S>,
    h: &Jet<S>,
    m: u32,
) -> Result<Vec<Jet<S>>, IdentityError> {
    (1..=m).map(|k| leibniz_sum(powers.pos(k), h, m)).collect()
}

/// Lemma: `Σ_k c_{k,r} f^{−k} Σ_ν C^m_ν (R^ν f^k)(R^{m−ν}h) = X_{f,r}h`.
pub fn verify_x_lemma<S: Scalar>(
    f: &Jet<S>,
    h: &Jet<S>,
    m: u32,
    r: u32,
    tolerance: f64,
) -> Result<VerificationReport, IdentityError> {
    let started = Instant::now();
    check_order(m)?;
    if r == 0 || r > m {
        return Err(IdentityError::IndexRange {
            name: "r",
            value: r,
            max: m,
        });
    }
    f.check_shape(h)?;
    let c = c_table(m)?;
    let powers = Powers::new(f, m)?;
    let leibniz = power_leibniz_sums(&powers, h, m)?;
    let lhs = lemma_lhs(&powers, &leibniz, &c, m, r);
    let rhs = x_operator(f, h, m, r)?;
    let residual = lhs.max_abs_diff(&rhs)?;
    let mut report =
        VerificationReport::new(IdentityId::Lemma, f, Some(m), residual, tolerance, started);
    report.r = Some(r);
    Ok(report)
}

/// `R^ν f^k = Σ_i β_{i,k} f^{k−i} Σ_{α∈A_{ν,i}} b_α (Rf,…,R^ν f)^α`.
pub fn verify_fdb_power<S: Scalar>(
    f: &Jet<S>,
    k: u32,
    nu: u32,
    tolerance: f64,
) -> Result<VerificationReport, IdentityError> {
    let started = Instant::now();
    if k == 0 {
        return Err(IdentityError::Order(k));
    }
    check_order(nu)?;
    let lhs = f.powu(k).radial_power(nu);
    let ladder = radial_ladder(f, nu);
    let mut rhs = Jet::zero(f.n(), f.cap());
    for i in 1..=nu.min(k) {
        let beta = falling_factorial(k, i);
        let beta: S = S::from_rational(&BigRational::from_integer(BigInt::from(beta)));
        let term = &f.powu(k - i) * &stratum_sum(&ladder, nu, i)?;
        rhs = &rhs + &term.scale(&beta);
    }
    let residual = lhs.max_abs_diff(&rhs)?;
    let mut report =
        VerificationReport::new(IdentityId::FdbPower, f, None, residual, tolerance, started);
    report.k = Some(k);
    report.nu = Some(nu);
    Ok(report)
}

/// Leibniz form of the power identity, either through the c table (`via_x =
/// false`) or through `X_{f,r}` (`via_x = true`).
pub fn verify_power_leibniz<S: Scalar>(
    f: &Jet<S>,
    h: &Jet<S>,
    m: u32,
    t: &Exponent,
    via_x: bool,
    tolerance: f64,
) -> Result<VerificationReport, IdentityError> {
    let started = Instant::now();
    check_order(m)?;
    f.check_shape(h)?;
    require_unit_or_nonzero(f, "power identity")?;
    let t_s = S::exponent(t)?;
    let g = f.real_pow(t)?;
    let lhs = leibniz_sum(&g, h, m)?;
    let inner = inner_combination(f, h, m, via_x, |r| falling_power_scalar(&t_s, r))?;
    let rhs = &g * &inner;
    let residual = lhs.max_abs_diff(&rhs)?;
    let id = if via_x {
        IdentityId::PowerX
    } else {
        IdentityId::PowerLeibniz
    };
    Ok(VerificationReport::new(id, f, Some(m), residual, tolerance, started).with_t(t))
}

/// Leibniz form of the logarithm identity, through the c table or `X_{f,r}`.
pub fn verify_log_leibniz<S: Scalar>(
    f: &Jet<S>,
    h: &Jet<S>,
    m: u32,
    via_x: bool,
    tolerance: f64,
) -> Result<VerificationReport, IdentityError> {
    let started = Instant::now();
    check_order(m)?;
    f.check_shape(h)?;
    require_unit_or_nonzero(f, "log identity")?;
    let lhs = leibniz_sum(&f.log()?, h, m)?;
    let rhs = inner_combination(f, h, m, via_x, |r| rat(&log_derivative(r)))?;
    let residual = lhs.max_abs_diff(&rhs)?;
    let id = if via_x {
        IdentityId::LogX
    } else {
        IdentityId::LogLeibniz
    };
    Ok(VerificationReport::new(
        id,
        f,
        Some(m),
        residual,
        tolerance,
        started,
    ))
}

/// `Σ_r w(r)·Y_r` with `Y_r` either the c-table sum or `X_{f,r}h`.
fn inner_combination<S: Scalar>(
    f: &Jet<S>,
    h: &Jet<S>,
    m: u32,
    via_x: bool,
    weight: impl Fn(u32) -> S,
) -> Result<Jet<S>, IdentityError> {
    let mut acc = Jet::zero(f.n(), f.cap());
    if via_x {
        let inv = f.inverse()?;
        let ladder = radial_ladder(f, m);
        let mut inv_r = Jet::one(f.n(), f.cap());
        for r in 1..=m {
            inv_r = &inv_r * &inv;
            let x = &inv_r * &x_sum(&ladder, h, m, r)?;
            acc = &acc + &x.scale(&weight(r));
        }
    } else {
        let c = c_table(m)?;
        let powers = Powers::new(f, m)?;
        let leibniz = power_leibniz_sums(&powers, h, m)?;
        for r in 1..=m {
            acc = &acc + &lemma_lhs(&powers, &leibniz, &c, m, r).scale(&weight(r));
        }
    }
    Ok(acc)
}
