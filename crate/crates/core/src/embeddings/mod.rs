//! Random and derandomised embeddings into `ℓ_q`, with isometry harnesses.

mod gaussian;
mod kwise;
mod stable;

use serde::Serialize;

pub use gaussian::{gaussian_embedding, isometry_report};
pub use kwise::{
    check_kwise_uniform, derandomized_embedding, kwise_space, BinaryField, KWiseCheck, KWiseSpace,
};
pub use stable::{lp_isometry_report, schechtman_embedding, SchechtmanConfig, SchechtmanEmbedding};

/// Deviation statistics of image norms against their ideal value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport {
    /// Ideal image norm factor.
    pub target: f64,
    pub max_rel_dev: f64,
    pub mean_rel_dev: f64,
    pub trials: usize,
    pub seed: u64,
}

impl EmbeddingReport {
    pub(crate) fn from_deviations(target: f64, devs: &[f64], seed: u64) -> Self {
        let max_rel_dev = devs.iter().fold(0.0f64, |m, &d| m.max(d));
        let mean_rel_dev = if devs.is_empty() {
            0.0
        } else {
            devs.iter().sum::<f64>() / devs.len() as f64
        };
        Self {
            target,
            max_rel_dev,
            mean_rel_dev: mean_rel_dev.min(max_rel_dev),
            trials: devs.len(),
            seed,
        }
    }
}
