//! Exact coefficient tables for the power and logarithm commutator identities.
//!
//! The falling-factorial matrix `β_{i,k} = k!/(k−i)!` encodes the derivatives
//! of `x ↦ x^k`; its inverse `c` converts derivative data of `x^t` and `log x`
//! (the vectors `u` and `v`) into the coefficients `ρ_k` and `a_k`. Every table
//! is produced by two independent routes that must agree exactly: a
//! triangular solve and a closed form.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::CoefficientError;
use crate::jets::{factorial, MultiIndex};
use crate::scalar::format_rational;

/// Largest Faà di Bruno order whose coefficients fit in `u64`.
pub const MAX_FDB_ORDER: u32 = 20;

fn check_order(m: u32) -> Result<(), CoefficientError> {
    if m == 0 {
        Err(CoefficientError::OrderTooSmall(m))
    } else {
        Ok(())
    }
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn uint(v: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `C(m, ν) = m!/(ν!(m−ν)!)` for `0 ≤ ν ≤ m`.
pub fn binomial(m: i64, nu: i64) -> Result<BigUint, CoefficientError> {
    if nu < 0 || m < 0 || nu > m {
        return Err(CoefficientError::BinomialRange { m, nu });
    }
    let (m, nu) = (m as u64, nu.min(m - nu) as u64);
    let mut acc = BigUint::one();
    for i in 0..nu {
        acc = acc * (m - i) / (i + 1);
    }
    Ok(acc)
}

/// `k!/(k−i)!`, zero when `i > k`.
pub fn falling_factorial(k: u32, i: u32) -> BigUint {
    if i > k {
        return BigUint::zero();
    }
    ((k - i + 1)..=k).fold(BigUint::one(), |acc, j| acc * j)
}

/// `u(r) = t(t−1)⋯(t−r+1)`, the `r`-th derivative coefficient of `x^t`.
pub fn falling_power(t: &BigRational, r: u32) -> BigRational {
    (0..r).fold(BigRational::one(), |acc, j| acc * (t - int(j)))
}

/// `v(r) = (r−1)!(−1)^{r−1}`, the `r`-th derivative coefficient of `log x`.
pub fn log_derivative(r: u32) -> BigRational {
    let mag = uint(factorial(r - 1));
    if r % 2 == 1 {
        mag
    } else {
        -mag
    }
}

/// The upper-triangular matrix `β_{i,k} = k!/(k−i)!`, `1 ≤ i, k ≤ m`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaMatrix {
    m: u32,
    entries: Vec<Vec<BigUint>>,
}

impl BetaMatrix {
    pub fn order(&self) -> u32 {
        self.m
    }

    /// 1-based entry `β_{i,k}`.
    pub fn entry(&self, i: u32, k: u32) -> &BigUint {
        &self.entries[i as usize - 1][k as usize - 1]
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.entries
    }
}

pub fn beta_matrix(m: u32) -> Result<BetaMatrix, CoefficientError> {
    check_order(m)?;
    let entries = (1..=m)
        .map(|i| (1..=m).map(|k| falling_factorial(k, i)).collect())
        .collect();
    Ok(BetaMatrix { m, entries })
}

/// The inverse `c` of the β matrix: `Σ_k β_{i,k} c_{k,r} = δ_{i,r}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CTable {
    m: u32,
    entries: Vec<Vec<BigRational>>,
}

impl CTable {
    pub fn order(&self) -> u32 {
        self.m
    }

    /// 1-based entry `c_{k,r}`.
    pub fn entry(&self, k: u32, r: u32) -> &BigRational {
        &self.entries[k as usize - 1][r as usize - 1]
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.entries
    }
}

/// `c` by back-substitution, one column `β x = e_r` at a time.
pub fn c_table_by_solve(m: u32) -> Result<CTable, CoefficientError> {
    let beta = beta_matrix(m)?;
    let size = m as usize;
    let b: Vec<Vec<BigRational>> = beta
        .rows()
        .iter()
        .map(|row| row.iter().cloned().map(uint).collect())
        .collect();
    let mut entries = vec![vec![BigRational::zero(); size]; size];
    for r in 0..size {
        for i in (0..size).rev() {
            let mut rhs = if i == r {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            for k in (i + 1)..size {
                rhs -= &b[i][k] * &entries[k][r];
            }
            entries[i][r] = rhs / &b[i][i];
        }
    }
    Ok(CTable { m, entries })
}

/// `c_{k,r} = (−1)^{r−k}/(k!(r−k)!)` for `r ≥ k`, else 0.
pub fn c_table_closed_form(m: u32) -> Result<CTable, CoefficientError> {
    check_order(m)?;
    let entries = (1..=m)
        .map(|k| {
            (1..=m)
                .map(|r| {
                    if r < k {
                        BigRational::zero()
                    } else {
                        let mag = BigRational::new(
                            BigInt::one(),
                            BigInt::from(factorial(k) * factorial(r - k)),
                        );
                        if (r - k) % 2 == 0 {
                            mag
                        } else {
                            -mag
                        }
                    }
                })
                .collect()
        })
        .collect();
    Ok(CTable { m, entries })
}

/// The c table, checked across both computation routes.
pub fn c_table(m: u32) -> Result<CTable, CoefficientError> {
    let solved = c_table_by_solve(m)?;
    let closed = c_table_closed_form(m)?;
    if solved != closed {
        return Err(CoefficientError::Disagreement {
            table: "c",
            detail: format!("m = {m}: triangular solve differs from closed form"),
        });
    }
    Ok(solved)
}

/// Coefficients `ρ_0, …, ρ_m` of the power identity for exponent `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerCoefficients {
    pub m: u32,
    pub t: BigRational,
    /// `u(1), …, u(m)`.
    pub u: Vec<BigRational>,
    /// `ρ_1, …, ρ_m`.
    pub rho: Vec<BigRational>,
    /// `ρ_0 = 1 − ρ_1 − ⋯ − ρ_m`.
    pub rho0: BigRational,
}

impl PowerCoefficients {
    /// `ρ_k` for `0 ≤ k ≤ m`.
    pub fn rho_k(&self, k: u32) -> &BigRational {
        if k == 0 {
            &self.rho0
        } else {
            &self.rho[k as usize - 1]
        }
    }
}

/// `ρ_k = (−1)^k/(k!(m−k)!)·∏_{i ∈ {0..m}∖{k}} (i − t)`, `k = 1..m`.
pub fn rho_closed_form(m: u32, t: &BigRational) -> Vec<BigRational> {
    (1..=m)
        .map(|k| {
            let prod = (0..=m)
                .filter(|&i| i != k)
                .fold(BigRational::one(), |acc, i| acc * (int(i) - t));
            let scale = BigRational::new(
                if k % 2 == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                },
                BigInt::from(factorial(k) * factorial(m - k)),
            );
            prod * scale
        })
        .collect()
}

/// Floating-point `ρ_0, …, ρ_m` from the closed form, for real `t`.
pub fn rho_closed_form_f64(m: u32, t: f64) -> Vec<f64> {
    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    let mut rho: Vec<f64> = (1..=m)
        .map(|k| {
            let prod: f64 = (0..=m)
                .filter(|&i| i != k)
                .map(|i| f64::from(i) - t)
                .product();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * prod / (fact(k) * fact(m - k))
        })
        .collect();
    let rho0 = 1.0 - rho.iter().sum::<f64>();
    rho.insert(0, rho0);
    rho
}

pub fn rho_coefficients(m: u32, t: &BigRational) -> Result<PowerCoefficients, CoefficientError> {
    let c = c_table(m)?;
    let u: Vec<BigRational> = (1..=m).map(|r| falling_power(t, r)).collect();
    let rho: Vec<BigRational> = (1..=m)
        .map(|k| {
            (1..=m).fold(BigRational::zero(), |acc, r| {
                acc + &u[r as usize - 1] * c.entry(k, r)
            })
        })
        .collect();
    let closed = rho_closed_form(m, t);
    if rho != closed {
        return Err(CoefficientError::Disagreement {
            table: "rho",
            detail: format!("m = {m}, t = {}", format_rational(t)),
        });
    }
    let rho0 = rho.iter().fold(BigRational::one(), |acc, r| acc - r);
    Ok(PowerCoefficients {
        m,
        t: t.clone(),
        u,
        rho,
        rho0,
    })
}

/// Coefficients `a_0, …, a_m` of the logarithm identity.
#[derive(Debug, Clone, PartialEq)]
pub struct LogCoefficients {
    pub m: u32,
    /// `v(1), …, v(m)`.
    pub v: Vec<BigRational>,
    /// `a_1, …, a_m`.
    pub a: Vec<BigRational>,
    /// `a_0 = −a_1 − ⋯ − a_m`.
    pub a0: BigRational,
}

impl LogCoefficients {
    pub fn a_k(&self, k: u32) -> &BigRational {
        if k == 0 {
            &self.a0
        } else {
            &self.a[k as usize - 1]
        }
    }
}

/// `a_k = ((−1)^{k+1}/k)·C(m, k)`.
pub fn a_closed_form(m: u32) -> Vec<BigRational> {
    (1..=m)
        .map(|k| {
            let c = uint(binomial(m as i64, k as i64).expect("k ≤ m"));
            let q = c / int(k);
            if k % 2 == 1 {
                q
            } else {
                -q
            }
        })
        .collect()
}

pub fn a_coefficients(m: u32) -> Result<LogCoefficients, CoefficientError> {
    let c = c_table(m)?;
    let v: Vec<BigRational> = (1..=m).map(log_derivative).collect();
    let a: Vec<BigRational> = (1..=m)
        .map(|k| {
            (1..=m).fold(BigRational::zero(), |acc, r| {
                acc + &v[r as usize - 1] * c.entry(k, r)
            })
        })
        .collect();
    if a != a_closed_form(m) {
        return Err(CoefficientError::Disagreement {
            table: "a",
            detail: format!("m = {m}"),
        });
    }
    let a0 = -a.iter().fold(BigRational::zero(), |acc, x| acc + x);
    Ok(LogCoefficients { m, v, a, a0 })
}

/// Faà di Bruno coefficients `b_α` for `α ∈ A_ν`, i.e.
/// `d^ν/dx^ν F(G) = Σ_α b_α F^{(|α|)}(G)·∏_j (G^{(j)})^{α_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FdBTable {
    order: u32,
    entries: Vec<(MultiIndex, u64)>,
}

impl FdBTable {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// All `(α, b_α)`, ordered by `|α|` then lexicographically descending.
    pub fn entries(&self) -> &[(MultiIndex, u64)] {
        &self.entries
    }

    pub fn get(&self, alpha: &MultiIndex) -> Option<u64> {
        self.entries
            .iter()
            .find(|(a, _)| a == alpha)
            .map(|(_, b)| *b)
    }

    /// The stratum `A_{ν,i} = {α ∈ A_ν : |α| = i}`.
    pub fn stratum(&self, i: u32) -> impl Iterator<Item = &(MultiIndex, u64)> {
        self.entries.iter().filter(move |(a, _)| a.weight() == i)
    }

    pub fn to_json(&self) -> Value {
        let b: serde_json::Map<String, Value> = self
            .entries
            .iter()
            .map(|(a, b)| {
                (
                    serde_json::to_string(a.entries()).expect("plain integers"),
                    json!(b),
                )
            })
            .collect();
        json!({ "nu": self.order, "b": b })
    }
}

fn graded_order(a: &MultiIndex, b: &MultiIndex) -> std::cmp::Ordering {
    a.weight()
        .cmp(&b.weight())
        .then_with(|| b.entries().cmp(a.entries()))
}

/// Builds the table by differentiating once more per step: the chain-rule
/// term bumps `α_1`; differentiating `(G^{(j)})^{α_j}` moves one unit from
/// `α_j` to `α_{j+1}` with multiplicity `α_j`.
pub fn fdb_table(nu: u32) -> Result<FdBTable, CoefficientError> {
    check_order(nu)?;
    if nu > MAX_FDB_ORDER {
        return Err(CoefficientError::Disagreement {
            table: "fdb",
            detail: format!("order {nu} exceeds supported maximum {MAX_FDB_ORDER}"),
        });
    }
    let mut current: BTreeMap<Vec<u32>, u64> = BTreeMap::from([(vec![1], 1)]);
    for order in 1..nu {
        let mut next: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (alpha, &b) in &current {
            let mut padded = alpha.clone();
            padded.push(0);

            let mut chain = padded.clone();
            chain[0] += 1;
            *next.entry(chain).or_default() += b;

            for j in 0..order as usize {
                if padded[j] == 0 {
                    continue;
                }
                let mut moved = padded.clone();
                moved[j] -= 1;
                moved[j + 1] += 1;
                *next.entry(moved).or_default() += u64::from(padded[j]) * b;
            }
        }
        current = next;
    }
    let mut entries: Vec<(MultiIndex, u64)> = current
        .into_iter()
        .map(|(a, b)| (MultiIndex::new(a), b))
        .collect();
    entries.sort_by(|(a, _), (b, _)| graded_order(a, b));
    Ok(FdBTable { order: nu, entries })
}

/// Everything the `coeffs` command reports for one order `m`.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    pub beta: BetaMatrix,
    pub c: CTable,
    pub power: Option<PowerCoefficients>,
    pub log: LogCoefficients,
}

impl CoefficientTable {
    pub fn new(m: u32, t: Option<&BigRational>) -> Result<Self, CoefficientError> {
        Ok(CoefficientTable {
            beta: beta_matrix(m)?,
            c: c_table(m)?,
            power: t.map(|t| rho_coefficients(m, t)).transpose()?,
            log: a_coefficients(m)?,
        })
    }

    pub fn to_json(&self) -> Value {
        let rats = |v: &[BigRational]| v.iter().map(format_rational).collect::<Vec<_>>();
        let beta: Vec<Vec<Value>> = self
            .beta
            .rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|b| match b.to_u64() {
                        Some(x) => json!(x),
                        None => json!(b.to_string()),
                    })
                    .collect()
            })
            .collect();
        let c: Vec<Vec<String>> = self.c.rows().iter().map(|row| rats(row)).collect();
        let mut doc = json!({
            "m": self.beta.order(),
            "beta": beta,
            "c": c,
            "a": rats(&self.log.a),
            "a0": format_rational(&self.log.a0),
        });
        if let Some(p) = &self.power {
            doc["t"] = json!(format_rational(&p.t));
            doc["rho"] = json!(rats(&p.rho));
            doc["rho0"] = json!(format_rational(&p.rho0));
        }
        doc
    }
}

/// Sign of a rational as −1, 0 or 1.
pub fn sign(q: &BigRational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}
