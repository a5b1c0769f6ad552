//! Deterministic point clouds in the ball for sup and inf estimates.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::SpaceError;
use crate::jets::FloatJet;

/// Point-cloud settings. Interior points are quasi-random inside the ball of
/// radius `min(radius, 0.95)`; boundary points lie on the sphere of radius
/// `radius`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    pub seed: u64,
    pub ball_points: usize,
    pub sphere_points: usize,
    pub radius: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            ball_points: 4096,
            sphere_points: 1024,
            radius: 0.99,
        }
    }
}

const PRIMES: [u32; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = f64::from(base);
    let (mut inv, mut out) = (1.0 / b, 0.0);
    while i > 0 {
        out += (i % base as u64) as f64 * inv;
        i /= base as u64;
        inv /= b;
    }
    out
}

/// Shifted Halton point `i` in `[0,1)^dim`.
fn halton(i: u64, shift: &[f64]) -> Vec<f64> {
    shift
        .iter()
        .zip(PRIMES)
        .map(|(s, p)| (radical_inverse(i, p) + s).fract())
        .collect()
}

/// Unit vector in ℂⁿ = ℝ^{2n} from `2n` uniforms, via Box–Muller.
fn direction(u: &[f64]) -> Vec<f64> {
    let mut x: Vec<f64> = u
        .chunks(2)
        .flat_map(|p| {
            let r = (-2.0 * (1.0 - p[0]).ln()).sqrt();
            let th = std::f64::consts::TAU * p[1];
            [r * th.cos(), r * th.sin()]
        })
        .collect();
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        x[0] = 1.0;
    } else {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    x
}

fn to_complex(x: &[f64], scale: f64) -> Vec<Complex64> {
    x.chunks(2)
        .map(|p| Complex64::new(scale * p[0], scale * p[1]))
        .collect()
}

/// The origin, then the interior points, then the sphere points.
pub fn sample_points(n: usize, cfg: &SamplerConfig) -> Result<Vec<Vec<Complex64>>, SpaceError> {
    if n == 0 {
        return Err(SpaceError::NoVariables);
    }
    if !(cfg.radius > 0.0 && cfg.radius < 1.0) {
        return Err(SpaceError::OutsideBall(cfg.radius));
    }
    let dim = 2 * n + 1;
    if dim > PRIMES.len() {
        return Err(SpaceError::DimensionMismatch {
            jet: n,
            space: (PRIMES.len() - 1) / 2,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let shift: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    let inner = cfg.radius.min(0.95);
    let mut pts = Vec::with_capacity(1 + cfg.ball_points + cfg.sphere_points);
    pts.push(vec![Complex64::new(0.0, 0.0); n]);
    for i in 0..cfg.ball_points {
        let u = halton(i as u64 + 1, &shift);
        let r = u[2 * n].powf(1.0 / (2 * n) as f64);
        pts.push(to_complex(&direction(&u[..2 * n]), inner * r));
    }
    for i in 0..cfg.sphere_points {
        let u = halton((cfg.ball_points + i) as u64 + 1, &shift);
        pts.push(to_complex(&direction(&u[..2 * n]), cfg.radius));
    }
    Ok(pts)
}

/// `max |f|` over the sample cloud.
pub fn sup_norm_estimate(f: &FloatJet, cfg: &SamplerConfig) -> Result<f64, SpaceError> {
    Ok(sample_points(f.n(), cfg)?
        .iter()
        .map(|z| f.evaluate(z).norm())
        .fold(0.0, f64::max))
}

/// `min |f|` over the sample cloud.
pub fn inf_modulus_estimate(f: &FloatJet, cfg: &SamplerConfig) -> Result<f64, SpaceError> {
    Ok(sample_points(f.n(), cfg)?
        .iter()
        .map(|z| f.evaluate(z).norm())
        .fold(f64::INFINITY, f64::min))
}
