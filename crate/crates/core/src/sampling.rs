//! Deterministic sampling of base points and directions.
//!
//! Base points are drawn uniformly from the domain box and rejected when the
//! metric is inadmissible there. Directions are uniform on the `α`-unit sphere:
//! with `a = L Lᵀ` and `u` uniform on the Euclidean sphere, `y = L^{-T} u`.

use ndarray::Array2;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::MetricSpec;
use crate::riemann::BaseGeometry;

/// Rejection attempts allowed per requested sample.
pub const ATTEMPTS_PER_SAMPLE: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub x: Vec<f64>,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct SampleSet {
    pub seed: u64,
    pub samples: Vec<Sample>,
    pub skipped: Vec<SkippedPoint>,
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Uniform on `[0, 1)` with 53 random bits.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn uniform_in(rng: &mut impl RngCore, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * uniform(rng)
}

/// Standard normal deviate (Box-Muller).
pub fn gaussian(rng: &mut impl RngCore) -> f64 {
    let u1 = 1.0 - uniform(rng);
    let u2 = uniform(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Lower Cholesky factor, `None` unless `m` is positive definite.
pub fn cholesky(m: &Array2<f64>) -> Option<Array2<f64>> {
    let n = m.nrows();
    let mut l = Array2::<f64>::zeros((n, n));
    for j in 0..n {
        let mut d = m[[j, j]];
        for k in 0..j {
            d -= l[[j, k]] * l[[j, k]];
        }
        if !(d > 0.0) {
            return None;
        }
        l[[j, j]] = d.sqrt();
        for i in j + 1..n {
            let mut v = m[[i, j]];
            for k in 0..j {
                v -= l[[i, k]] * l[[j, k]];
            }
            l[[i, j]] = v / l[[j, j]];
        }
    }
    Some(l)
}

/// Solve `Lᵀ y = u` for lower-triangular `L`.
fn back_substitute(l: &Array2<f64>, u: &[f64]) -> Vec<f64> {
    let n = u.len();
    let mut y = vec![0.0; n];
    for i in (0..n).rev() {
        let mut v = u[i];
        for k in i + 1..n {
            v -= l[[k, i]] * y[k];
        }
        y[i] = v / l[[i, i]];
    }
    y
}

/// Uniformly distributed direction with `α(y) = 1`.
pub fn alpha_unit_direction(a: &Array2<f64>, rng: &mut impl RngCore) -> Result<Vec<f64>> {
    let l = cholesky(a).ok_or_else(|| Error::Invalid("`a` is not positive definite".into()))?;
    let n = a.nrows();
    loop {
        let u: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
        let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-12 {
            let u: Vec<f64> = u.iter().map(|v| v / norm).collect();
            return Ok(back_substitute(&l, &u));
        }
    }
}

/// Rescale `y` so that `α(y) = 1`.
pub fn alpha_normalize(a: &Array2<f64>, y: &[f64]) -> Vec<f64> {
    let q = crate::riemann::quadratic_form(a, y).sqrt();
    y.iter().map(|v| v / q).collect()
}

/// `α`-unit directions `e_i`, `e_i + e_j (i < j)` and `e_i − e_{i+1}`; the first
/// `n(n+1)/2` determine a quadratic form.
pub fn direction_frame(a: &Array2<f64>) -> Vec<Vec<f64>> {
    let n = a.nrows();
    let mut frame = Vec::with_capacity(n * (n + 1) / 2 + n);
    let unit = |i: usize| {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        e
    };
    for i in 0..n {
        frame.push(unit(i));
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut e = unit(i);
            e[j] = 1.0;
            frame.push(e);
        }
    }
    for i in 0..n {
        let mut e = unit(i);
        e[(i + 1) % n] -= 1.0;
        if n == 1 {
            e[0] = -1.0;
        }
        frame.push(e);
    }
    frame.iter().map(|e| alpha_normalize(a, e)).collect()
}

/// Draw `count` admissible base points with an `α`-unit direction each.
pub fn draw_samples(spec: &MetricSpec, count: usize, seed: u64) -> Result<SampleSet> {
    let mut r = rng(seed, 0);
    let mut samples = Vec::with_capacity(count);
    let mut skipped = Vec::new();
    let attempts = ATTEMPTS_PER_SAMPLE * count.max(1);
    for _ in 0..attempts {
        if samples.len() == count {
            break;
        }
        let x: Vec<f64> = spec.domain().iter().map(|&(lo, hi)| uniform_in(&mut r, lo, hi)).collect();
        match BaseGeometry::at(spec, &x) {
            Ok(geo) => {
                let y = alpha_unit_direction(&geo.riemann.a, &mut r)?;
                samples.push(Sample { x, y });
            }
            Err(e) => skipped.push(SkippedPoint { x, reason: e.to_string() }),
        }
    }
    if samples.is_empty() {
        return Err(Error::NoAdmissibleSamples { skipped: skipped.len() });
    }
    Ok(SampleSet { seed, samples, skipped })
}
