//! Scalar probability machinery: Gaussian moments, Rademacher moments,
//! p-stable sampling and hardness-factor arithmetic.

pub mod gaussian;
pub mod quadrature;
pub mod rademacher;
pub mod rng;
pub mod stable;

pub use gaussian::{gaussian_moment, gaussian_moment_quadrature, hardness_factor, GammaValue};
pub use rademacher::{
    khintchine_gap, rademacher_moment_enumerated, rademacher_moment_exact,
    rademacher_moment_multinomial, spread_moment_ratio,
};
pub use rng::{seeded_rng, sub_seed};
pub use stable::{
    ks_two_sample, sample_p_stable, stability_ks_statistic, stable_q_moment, MomentEstimate,
    StableBatch, StableSampleConfig,
};
