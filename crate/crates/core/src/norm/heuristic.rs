use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::norms::{duality_map, norm};
use crate::linalg::{DenseMatrix, ExponentPair, NormKind};
use crate::norm::estimate::{witness_ratio, Method, NormEstimate};
use crate::numerics::{seeded_rng, sub_seed};
use crate::scalar::Scalar;

/// Settings for the power-type ascent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeuristicConfig {
    /// Number of random Gaussian starts on top of the deterministic ones.
    pub restarts: usize,
    /// Stop once the relative ratio improvement drops below this.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            tol: 1e-10,
            max_iter: 10_000,
            seed: 0,
        }
    }
}

impl HeuristicConfig {
    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

const POWER_ITERATIONS: usize = 500;
const SIGN_STREAM: u64 = 0x5157_4e53;

/// Lower bound on `‖A‖_{p→q}` by nonlinear power ascent
/// `x ← ψ_{p*}(Aᵀ ψ_q(Ax))`, whose ratio never decreases.
///
/// Starts are the all-ones vector, the top right singular vector and
/// `restarts` Gaussian vectors (plus `restarts` random output sign patterns
/// pulled back through Aᵀ when q = 1); the best ratio wins, earliest start on ties.
pub fn norm_heuristic<T: Scalar>(
    a: &DenseMatrix<T>,
    pq: ExponentPair,
    kind: NormKind,
    cfg: &HeuristicConfig,
) -> Result<NormEstimate<T>> {
    norm_heuristic_seeded(a, pq, kind, cfg, &[])
}

/// As [`norm_heuristic`], with caller-supplied starts tried first.
pub fn norm_heuristic_seeded<T: Scalar>(
    a: &DenseMatrix<T>,
    pq: ExponentPair,
    kind: NormKind,
    cfg: &HeuristicConfig,
    extra_starts: &[Vec<T>],
) -> Result<NormEstimate<T>> {
    if !(cfg.tol >= 0.0) || cfg.max_iter == 0 {
        return Err(Error::domain("heuristic needs tol >= 0 and max_iter >= 1"));
    }
    if let Some(s) = extra_starts.iter().find(|s| s.len() != a.cols()) {
        return Err(Error::domain(format!(
            "start of length {} for a matrix with {} columns",
            s.len(),
            a.cols()
        )));
    }
    if a.max_abs() == T::zero() {
        return Ok(NormEstimate::zero(a.cols(), pq, kind, Method::HeuristicLb));
    }
    let mut starts: Vec<Vec<T>> = extra_starts.to_vec();
    starts.push(vec![T::one(); a.cols()]);
    starts.push(top_right_singular_vector(a, cfg.seed));
    starts
        .extend((0..cfg.restarts).map(|k| gaussian_start(a.cols(), sub_seed(cfg.seed, k as u64))));
    if pq.q.is_one() {
        // fixed points are pinned by the sign pattern of Ax, so also start from output signs
        starts.extend((0..cfg.restarts).map(|k| {
            let s = sign_start::<T>(a.rows(), sub_seed(cfg.seed ^ SIGN_STREAM, k as u64));
            duality_map(&a.matvec_transpose(&s), pq.p.dual())
        }));
    }

    let results: Vec<(T, Vec<T>)> = starts
        .into_par_iter()
        .map(|x0| ascend(a, pq, x0, cfg))
        .collect();
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.0 > results[best].0 {
            best = i;
        }
    }
    let witness = results.into_iter().nth(best).unwrap().1;
    Ok(NormEstimate::from_witness(
        a,
        pq,
        kind,
        Method::HeuristicLb,
        witness,
    ))
}

/// One ascent run; returns the best counting ratio seen and its iterate.
pub(crate) fn ascend<T: Scalar>(
    a: &DenseMatrix<T>,
    pq: ExponentPair,
    x0: Vec<T>,
    cfg: &HeuristicConfig,
) -> (T, Vec<T>) {
    let mut x = normalize(x0, pq);
    if x.iter().all(|&v| v == T::zero()) {
        x = normalize(vec![T::one(); a.cols()], pq);
    }
    let mut ratio = witness_ratio(a, &x, pq, NormKind::Counting);
    let tol = T::of(cfg.tol);
    let q_dual = pq.q;
    let p_dual = pq.p.dual();
    for _ in 0..cfg.max_iter {
        let y = a.matvec(&x);
        let z = duality_map(&y, q_dual);
        let w = a.matvec_transpose(&z);
        let next = normalize(duality_map(&w, p_dual), pq);
        if next.iter().all(|&v| v == T::zero()) {
            break;
        }
        let r = witness_ratio(a, &next, pq, NormKind::Counting);
        if !(r > ratio) {
            break;
        }
        let gain = r - ratio;
        x = next;
        ratio = r;
        if gain <= tol * ratio {
            break;
        }
    }
    (ratio, x)
}

fn normalize<T: Scalar>(x: Vec<T>, pq: ExponentPair) -> Vec<T> {
    let s = norm(&x, pq.p, NormKind::Counting);
    if s > T::zero() && s.is_finite() {
        x.into_iter().map(|v| v / s).collect()
    } else {
        x
    }
}

fn gaussian_start<T: Scalar>(n: usize, seed: u64) -> Vec<T> {
    let mut rng = seeded_rng(seed);
    (0..n)
        .map(|_| T::of(rng.sample::<f64, _>(StandardNormal)))
        .collect()
}

fn sign_start<T: Scalar>(n: usize, seed: u64) -> Vec<T> {
    let mut rng = seeded_rng(seed);
    (0..n)
        .map(|_| {
            if rng.random::<bool>() {
                T::one()
            } else {
                -T::one()
            }
        })
        .collect()
}

/// Power iteration on `AᵀA` from a seeded Gaussian start.
pub(crate) fn top_right_singular_vector<T: Scalar>(a: &DenseMatrix<T>, seed: u64) -> Vec<T> {
    let mut v: Vec<T> = gaussian_start(a.cols(), sub_seed(seed, u64::MAX));
    let mut last = T::zero();
    for _ in 0..POWER_ITERATIONS {
        let w = a.matvec_transpose(&a.matvec(&v));
        let s = w.iter().map(|&t| t * t).sum::<T>().sqrt();
        if s == T::zero() {
            break;
        }
        v = w.into_iter().map(|t| t / s).collect();
        if (s - last).abs() <= T::of(1e-14) * s {
            break;
        }
        last = s;
    }
    v
}
