//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Gauss–Kronrod 7/15 on `[a, b]`: (Kronrod value, |Kronrod − Gauss|).
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let (k, err) = gk15(f, a, b);
    if err <= tol * whole.abs().max(f64::MIN_POSITIVE) * (b - a) || depth == 0 {
        return k;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, whole, tol, depth - 1) + adapt(f, m, b, whole, tol, depth - 1)
}

/// Adaptive Gauss–Kronrod integral of `f` over `[a, b]` to relative `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let whole = gk15(&f, a, b).0;
    adapt(&f, a, b, whole, tol, 48)
}

fn fact(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// `∫_B |z^α|²(1−|z|²)^s dv` with `v(B) = 1`, by polar coordinates:
/// the sphere moment `(n−1)!α!/(n−1+|α|)!` times the radial integral
/// `2n∫_0^1 r^{2n−1+2|α|}(1−r²)^s dr`, the latter by quadrature.
/// For `−1 < s < 0` the radial integral is taken after a change of variables.
pub fn weight_by_quadrature(alpha: &[u32], s: f64) -> f64 {
    let n = alpha.len() as u32;
    let d: u32 = alpha.iter().sum();
    let sphere = fact(n - 1) * alpha.iter().map(|&a| fact(a)).product::<f64>() / fact(n - 1 + d);
    let radial = if s >= 0.0 {
        let p = (2 * n - 1 + 2 * d) as i32;
        2.0 * f64::from(n)
            * integrate(
                |r| r.powi(p) * (1.0 - r * r).max(0.0).powf(s),
                0.0,
                1.0,
                1e-13,
            )
    } else {
        // x = r², then y = (1−x)^{s+1} absorbs the endpoint singularity.
        let a = (n - 1 + d) as i32;
        let e = 1.0 / (s + 1.0);
        f64::from(n) / (s + 1.0) * integrate(|y| (1.0 - y.powf(e)).powi(a), 0.0, 1.0, 1e-13)
    };
    sphere * radial
}

/// Uniform points in the unit ball of ℂⁿ, stored as `(|z_1|², …, |z_n|²)`.
pub fn ball_moduli(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let g: Vec<f64> = (0..2 * n).map(|_| rng.sample(StandardNormal)).collect();
            let norm2: f64 = g.iter().map(|x| x * x).sum();
            let u: f64 = rng.random();
            let r2 = u.powf(1.0 / n as f64);
            g.chunks(2)
                .map(|p| (p[0] * p[0] + p[1] * p[1]) / norm2 * r2)
                .collect()
        })
        .collect()
}

/// Monte-Carlo mean of `|z^α|²(1−|z|²)^s` over precomputed ball samples.
pub fn weight_by_monte_carlo(samples: &[Vec<f64>], alpha: &[u32], s: f64) -> f64 {
    let total: f64 = samples
        .iter()
        .map(|x| {
            let r2: f64 = x.iter().sum();
            let mono: f64 = x
                .iter()
                .zip(alpha)
                .map(|(v, &a)| v.powi(a as i32))
                .product();
            mono * (1.0 - r2).powf(s)
        })
        .sum();
    total / samples.len() as f64
}

/// All `α ∈ ℕⁿ` with `|α| ≤ d`, any order.
pub fn indices_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for a in 0..=d {
        for mut rest in indices_up_to(n - 1, d - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

/// `ν!/∏_j (α_j!·(j!)^{α_j})`, the number of set partitions of `ν` points
/// with `α_j` blocks of size `j`.
pub fn fdb_closed_form(alpha: &[u32]) -> u64 {
    let nu: u32 = alpha
        .iter()
        .enumerate()
        .map(|(j, &a)| (j as u32 + 1) * a)
        .sum();
    let mut denom: u128 = 1;
    for (j, &a) in alpha.iter().enumerate() {
        denom *= (1..=a as u128).product::<u128>();
        denom *= (1..=(j as u128 + 1)).product::<u128>().pow(a);
    }
    ((1..=nu as u128).product::<u128>() / denom) as u64
}

/// Bell numbers `B_0, …, B_max` from `B_{k+1} = Σ_i C(k,i) B_i`.
pub fn bell_numbers(max: usize) -> Vec<u64> {
    let mut bell = vec![1u64];
    for k in 0..max {
        let mut binom = 1u64;
        let mut next = 0u64;
        for (i, b) in bell.iter().enumerate() {
            next += binom * b;
            binom = binom * (k - i) as u64 / (i as u64 + 1);
        }
        bell.push(next);
    }
    bell
}

/// Integer partition counts `p(0), …, p(max)` by the coin-change recurrence.
pub fn partition_counts(max: usize) -> Vec<u64> {
    let mut p = vec![0u64; max + 1];
    p[0] = 1;
    for part in 1..=max {
        for total in part..=max {
            p[total] += p[total - part];
        }
    }
    p
}
