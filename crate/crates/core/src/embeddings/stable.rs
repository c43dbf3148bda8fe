use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::embeddings::EmbeddingReport;
use crate::error::{Error, Result};
use crate::linalg::norms::norm;
use crate::linalg::{DenseMatrix, Exponent, NormKind};
use crate::numerics::stable::{draw_stable, moment_from_samples};
use crate::numerics::{sample_p_stable, seeded_rng, sub_seed, StableSampleConfig};
use crate::scalar::Scalar;

/// Tuning for [`schechtman_embedding`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchechtmanConfig {
    /// Samples for `C_{p,q}` and the tail constant.
    pub moment_samples: usize,
    /// Rows drawn to measure the `L_∞` bound `M`.
    pub pilot_rows: usize,
    /// `m = ⌈row_constant · n · M^q⌉`.
    pub row_constant: f64,
    pub max_rows: usize,
}

impl Default for SchechtmanConfig {
    fn default() -> Self {
        Self {
            moment_samples: 1_000_000,
            pilot_rows: 10_000,
            row_constant: 4.0,
            max_rows: 4_000_000,
        }
    }
}

// The tail constant is fitted on order statistics with at least this many
// samples beyond them.
const MIN_TAIL_COUNT: usize = 100;

#[derive(Debug, Clone, Serialize)]
pub struct SchechtmanEmbedding<T> {
    #[serde(skip)]
    pub matrix: DenseMatrix<T>,
    pub m: usize,
    /// Monte-Carlo `(E|Z|^q)^{1/q}`.
    pub c_pq: f64,
    /// Truncation level: rows with any `|Z_i|` above it are zeroed.
    pub tau: f64,
    /// Empirical `sup_t t^p·P(|Z| ≥ t)`.
    pub tail_constant: f64,
    /// Measured `L_∞` bound on the unit `L_q` ball of the image.
    pub m_hat: f64,
    /// Fraction of rows that were truncated.
    pub truncated_fraction: f64,
}

/// Embeds `ℓ_p^n` into `ℓ_q^m` for `0 < q < p < 2` with truncated
/// p-stable rows scaled by `1/(C_{p,q} m^{1/q})`.
///
/// With `δ = (p/q − 1)/2` the truncation level is the smallest `τ` with
/// `ρ·(n C_p/τ^p)^{δ/(q(1+δ))} <= eps`, where `ρ = C_{p,(1+δ)q}/C_{p,q}` and
/// `C_p` are measured. The row count follows `C n M^q` with `M` measured on
/// a pilot batch.
pub fn schechtman_embedding<T: Scalar>(
    n: usize,
    p: f64,
    q: f64,
    eps: f64,
    seed: u64,
    cfg: &SchechtmanConfig,
) -> Result<SchechtmanEmbedding<T>> {
    if !(0.0 < q && q < p && p < 2.0) {
        return Err(Error::domain(format!(
            "need 0 < q < p < 2, got p = {p}, q = {q}"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    if n == 0 {
        return Err(Error::domain("embedding needs n >= 1"));
    }
    let batch = sample_p_stable(&StableSampleConfig::new(
        p,
        cfg.moment_samples,
        sub_seed(seed, 0),
    ))?;
    let delta = (p / q - 1.0) / 2.0;
    let c_pq = moment_from_samples(&batch.samples, q, seed).value;
    let rho = moment_from_samples(&batch.samples, (1.0 + delta) * q, seed).value / c_pq;
    let tail_constant = tail_constant(&batch.samples, p);
    let exponent = q * (1.0 + delta) / delta;
    let tau = (n as f64 * tail_constant / (eps / rho).min(1.0).powf(exponent)).powf(1.0 / p);

    let p_dual = Exponent::new(p / (p - 1.0))?;
    let pilot = truncated_rows(n, p, tau, cfg.pilot_rows, sub_seed(seed, 1));
    let max_row = pilot
        .chunks_exact(n)
        .map(|row| norm(row, p_dual, NormKind::Counting))
        .fold(0.0f64, f64::max);
    // Hölder: |<a, Y>| <= ‖a‖_p ‖Y‖_{p*}, and ‖a‖_p <= ‖φ(a)‖_q / (1 − eps)
    let m_hat = max_row / (1.0 - eps);
    let m_real = (cfg.row_constant * n as f64 * m_hat.powf(q)).ceil();
    if !(m_real <= cfg.max_rows as f64) {
        return Err(Error::resource(format!(
            "embedding needs {m_real} rows, above the cap {}",
            cfg.max_rows
        )));
    }
    let m = (m_real as usize).max(n);
    let rows = truncated_rows(n, p, tau, m, sub_seed(seed, 2));
    let zeroed = rows
        .chunks_exact(n)
        .filter(|r| r.iter().all(|&v| v == 0.0))
        .count();
    let scale = 1.0 / (c_pq * (m as f64).powf(1.0 / q));
    let matrix = DenseMatrix::new(m, n, rows.into_iter().map(|v| T::of(v * scale)).collect())?;
    Ok(SchechtmanEmbedding {
        matrix,
        m,
        c_pq,
        tau,
        tail_constant,
        m_hat,
        truncated_fraction: zeroed as f64 / m as f64,
    })
}

/// `max_t t^p·P̂(|Z| >= t)` over the upper order statistics.
fn tail_constant(samples: &[f64], p: f64) -> f64 {
    let mut abs: Vec<f64> = samples.iter().map(|v| v.abs()).collect();
    abs.sort_by(|a, b| b.total_cmp(a));
    let n = abs.len() as f64;
    abs.iter()
        .enumerate()
        .skip(MIN_TAIL_COUNT - 1)
        .map(|(k, &t)| t.powf(p) * (k + 1) as f64 / n)
        .fold(0.0, f64::max)
}

/// `count` rows of `n` iid p-stable draws, zeroed where any entry exceeds
/// `tau`. Each row has its own sub-seed.
fn truncated_rows(n: usize, p: f64, tau: f64, count: usize, seed: u64) -> Vec<f64> {
    (0..count)
        .into_par_iter()
        .flat_map_iter(|j| {
            let mut rng = seeded_rng(sub_seed(seed, j as u64));
            let mut row: Vec<f64> = (0..n).map(|_| draw_stable(p, &mut rng)).collect();
            if row.iter().any(|v| v.abs() > tau) {
                row.iter_mut().for_each(|v| *v = 0.0);
            }
            row
        })
        .collect()
}

/// `|‖Ex‖_q / ‖x‖_p − 1|` over random `x` cycling through three ensembles:
/// Gaussian, sparse Gaussian on about a third of the coordinates, and random
/// signs.
pub fn lp_isometry_report<T: Scalar>(
    e: &DenseMatrix<T>,
    p: f64,
    q: f64,
    trials: usize,
    seed: u64,
) -> Result<EmbeddingReport> {
    let (pe, qe) = (Exponent::new(p)?, Exponent::new(q)?);
    let n = e.cols();
    let devs: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = seeded_rng(sub_seed(seed, t as u64));
            let x: Vec<f64> = match t % 3 {
                0 => (0..n).map(|_| rng.sample(StandardNormal)).collect(),
                1 => {
                    let mut x = vec![0.0; n];
                    for i in sample(&mut rng, n, n.div_ceil(3)) {
                        x[i] = rng.sample(StandardNormal);
                    }
                    x
                }
                _ => (0..n)
                    .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
                    .collect(),
            };
            let x: Vec<T> = x.into_iter().map(T::of).collect();
            let img = norm(&e.matvec(&x), qe, NormKind::Counting).as_f64();
            (img / norm(&x, pe, NormKind::Counting).as_f64() - 1.0).abs()
        })
        .collect();
    Ok(EmbeddingReport::from_deviations(1.0, &devs, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SchechtmanConfig {
        SchechtmanConfig {
            moment_samples: 200_000,
            pilot_rows: 2_000,
            row_constant: 1.0,
            max_rows: 400_000,
        }
    }

    #[test]
    fn domain_errors() {
        assert!(schechtman_embedding::<f64>(4, 1.2, 1.5, 0.2, 0, &small()).is_err());
        assert!(schechtman_embedding::<f64>(4, 1.5, 1.2, 1.2, 0, &small()).is_err());
    }

    #[test]
    fn linear_and_homogeneous() {
        let emb = schechtman_embedding::<f64>(6, 1.5, 1.2, 0.2, 3, &small()).unwrap();
        let e = &emb.matrix;
        assert!(e.matvec(&[0.0; 6]).iter().all(|&v| v == 0.0));
        let a = [0.3, -1.0, 0.2, 0.0, 2.0, 0.5];
        let a2: Vec<f64> = a.iter().map(|v| 2.0 * v).collect();
        let (pe, qe) = (Exponent::new(1.5).unwrap(), Exponent::new(1.2).unwrap());
        let r1 = norm(&e.matvec(&a), qe, NormKind::Counting) / norm(&a, pe, NormKind::Counting);
        let r2 = norm(&e.matvec(&a2), qe, NormKind::Counting) / norm(&a2, pe, NormKind::Counting);
        assert!((r1 - r2).abs() < 1e-12 * r1);
        assert!(emb.truncated_fraction <= 0.02);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = schechtman_embedding::<f64>(3, 1.5, 1.0, 0.3, 9, &small()).unwrap();
        let b = schechtman_embedding::<f64>(3, 1.5, 1.0, 0.3, 9, &small()).unwrap();
        assert_eq!(a.matrix, b.matrix);
        assert_eq!(a.m, b.m);
    }

    #[test]
    fn identity_control() {
        let i = DenseMatrix::<f64>::identity(5);
        let r = lp_isometry_report(&i, 1.5, 1.5, 30, 0).unwrap();
        assert!(r.max_rel_dev < 1e-14);
    }
}
