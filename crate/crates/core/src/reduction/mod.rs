//! Label Cover instances and the Fourier-analytic operator built from them.

mod build;
mod instance;

pub use build::{
    build_reduction_matrix, completeness_vector, constraint_matrix, fourier_pair,
    soundness_estimate, ReductionConfig, ReductionOutput, SoundnessEstimate, DEFAULT_MAX_DIM,
    DEFAULT_RANK_CUTOFF,
};
pub use instance::{
    generate_planted, instance_stats, Edge, InstanceStats, LabelCoverInstance, Labeling,
};
