//! Symmetric p-stable variates via the Chambers–Mallows–Stuck formula,
//! normalised so that `E e^{itZ} = e^{-|t|^p}`.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::rng::{seeded_rng, sub_seed};

/// Samples per independently seeded chunk; fixes the seed schedule so the
/// output does not depend on the thread count.
const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StableSampleConfig {
    /// Stability exponent in `(0, 2)`.
    pub p: f64,
    pub count: usize,
    pub seed: u64,
    /// Optional truncation level; exceeding it marks the batch.
    pub trunc_threshold: Option<f64>,
}

impl StableSampleConfig {
    pub fn new(p: f64, count: usize, seed: u64) -> Self {
        Self {
            p,
            count,
            seed,
            trunc_threshold: None,
        }
    }

    pub fn with_threshold(mut self, t: f64) -> Self {
        self.trunc_threshold = Some(t);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_stability(self.p)?;
        if self.count == 0 {
            return Err(Error::domain("sample count must be at least 1"));
        }
        if let Some(t) = self.trunc_threshold {
            if !(t > 0.0) {
                return Err(Error::domain(format!(
                    "truncation threshold must be positive, got {t}"
                )));
            }
        }
        Ok(())
    }
}

fn check_stability(p: f64) -> Result<()> {
    if p > 0.0 && p < 2.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "stability exponent must lie in (0, 2), got {p}"
        )))
    }
}

/// A batch of draws and whether any of them exceeded the threshold.
#[derive(Debug, Clone)]
pub struct StableBatch {
    pub samples: Vec<f64>,
    pub exceeded: bool,
    pub max_abs: f64,
}

/// One draw from `θ ∈ (-π/2, π/2)` and `r ∈ (0, 1]`:
/// `Z = sin(pθ)/cos(θ)^{1/p} · (cos((1-p)θ)/ln(1/r))^{(1-p)/p}`.
/// At `p = 1` the second factor is identically one (`Z = tan θ`).
#[inline]
pub fn stable_transform(p: f64, theta: f64, r: f64) -> f64 {
    let head = (p * theta).sin() / theta.cos().powf(1.0 / p);
    let exponent = (1.0 - p) / p;
    if exponent == 0.0 {
        return head;
    }
    let w = -r.ln();
    head * ((((1.0 - p) * theta).cos()) / w).powf(exponent)
}

/// Draws a single p-stable variate from `rng`.
#[inline]
pub fn draw_stable<R: Rng + ?Sized>(p: f64, rng: &mut R) -> f64 {
    loop {
        // open intervals keep cos θ and ln(1/r) away from zero
        let u: f64 = rng.random();
        let theta = (u - 0.5) * std::f64::consts::PI;
        let r: f64 = 1.0 - rng.random::<f64>();
        if theta.abs() < FRAC_PI_2 && r < 1.0 {
            let z = stable_transform(p, theta, r);
            if z.is_finite() {
                return z;
            }
        }
    }
}

pub fn sample_p_stable(cfg: &StableSampleConfig) -> Result<StableBatch> {
    cfg.validate()?;
    let chunks = cfg.count.div_ceil(CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = CHUNK.min(cfg.count - c * CHUNK);
            let mut rng = seeded_rng(sub_seed(cfg.seed, c as u64));
            (0..len).map(|_| draw_stable(cfg.p, &mut rng)).collect()
        })
        .collect();
    let samples: Vec<f64> = parts.concat();
    let max_abs = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let exceeded = cfg.trunc_threshold.is_some_and(|t| max_abs > t);
    Ok(StableBatch {
        samples,
        exceeded,
        max_abs,
    })
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

/// `C_{p,q} = (E|Z|^q)^{1/q}` by seeded Monte-Carlo; the standard error is
/// propagated through the `1/q` power by the delta method.
pub fn stable_q_moment(p: f64, q: f64, samples: usize, seed: u64) -> Result<MomentEstimate> {
    check_stability(p)?;
    if !(q > 0.0 && q < p) {
        return Err(Error::domain(format!(
            "the q-th moment of a {p}-stable variable is finite only for 0 < q < p, got q={q}"
        )));
    }
    if samples < 2 {
        return Err(Error::domain("need at least two samples"));
    }
    let batch = sample_p_stable(&StableSampleConfig::new(p, samples, seed))?;
    Ok(moment_from_samples(&batch.samples, q, seed))
}

pub(crate) fn moment_from_samples(samples: &[f64], q: f64, seed: u64) -> MomentEstimate {
    let n = samples.len() as f64;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for &z in samples {
        let v = z.abs().powf(q);
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n;
    let var = ((sum_sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
    let se_mean = (var / n).sqrt();
    let value = mean.powf(1.0 / q);
    MomentEstimate {
        value,
        stderr: value / (q * mean) * se_mean,
        samples: samples.len(),
        seed,
    }
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a − F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// KS distance between single draws and `k^{-1/p}`-scaled sums of `k` iid
/// draws; zero in the large-sample limit exactly when the law is p-stable.
pub fn stability_ks_statistic(p: f64, count: usize, k: usize, seed: u64) -> Result<f64> {
    let single = sample_p_stable(&StableSampleConfig::new(p, count, sub_seed(seed, 0)))?;
    let pooled = sample_p_stable(&StableSampleConfig::new(p, count * k, sub_seed(seed, 1)))?;
    let scale = (k as f64).powf(-1.0 / p);
    let sums: Vec<f64> = pooled
        .samples
        .chunks_exact(k)
        .map(|c| scale * c.iter().sum::<f64>())
        .collect();
    Ok(ks_two_sample(&single.samples, &sums))
}
