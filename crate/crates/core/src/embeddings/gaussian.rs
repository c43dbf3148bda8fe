use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::embeddings::EmbeddingReport;
use crate::error::{Error, Result};
use crate::linalg::norms::norm;
use crate::linalg::{DenseMatrix, Exponent, NormKind};
use crate::numerics::{gaussian_moment, seeded_rng, sub_seed};
use crate::scalar::Scalar;

/// `m × n` matrix of iid standard normals. Row `i` is drawn from its own
/// sub-seed, so the matrix does not depend on the thread count.
pub fn gaussian_embedding<T: Scalar>(n: usize, m: usize, seed: u64) -> Result<DenseMatrix<T>> {
    if n == 0 || m < n {
        return Err(Error::domain(format!(
            "gaussian embedding needs 1 <= n <= m, got n = {n}, m = {m}"
        )));
    }
    let data: Vec<T> = (0..m)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = seeded_rng(sub_seed(seed, i as u64));
            (0..n)
                .map(move |_| T::of(rng.sample::<f64, _>(StandardNormal)))
                .collect::<Vec<_>>()
        })
        .collect();
    DenseMatrix::new(m, n, data)
}

/// `|‖Bx‖_q / (m^{1/q} γ_q) − 1|` over `trials` random unit vectors.
pub fn isometry_report<T: Scalar>(
    b: &DenseMatrix<T>,
    q: f64,
    trials: usize,
    seed: u64,
) -> Result<EmbeddingReport> {
    if !(q >= 2.0) {
        return Err(Error::domain(format!(
            "isometry report needs q >= 2, got {q}"
        )));
    }
    let qe = Exponent::new(q)?;
    let target = (b.rows() as f64).powf(1.0 / q) * gaussian_moment(q)?;
    let devs: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let x: Vec<T> = random_unit(b.cols(), sub_seed(seed, t as u64));
            (norm(&b.matvec(&x), qe, NormKind::Counting).as_f64() / target - 1.0).abs()
        })
        .collect();
    Ok(EmbeddingReport::from_deviations(target, &devs, seed))
}

/// Uniform point on the Euclidean unit sphere.
pub(crate) fn random_unit<T: Scalar>(n: usize, seed: u64) -> Vec<T> {
    let mut rng = seeded_rng(seed);
    let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let s = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    g.into_iter().map(|v| T::of(v / s)).collect()
}
