//! Operator norms `‖A‖_{p→q}` with a witness vector.
//!
//! [`estimate_norm`] dispatches to the cheapest route that is exact when one
//! exists and falls back to a certified lower bound otherwise.

mod checks;
mod closed_form;
mod estimate;
mod grid;
mod heuristic;
mod signenum;

use serde::Serialize;

pub use checks::{composition_check, duality_check, CompositionReport, DualityReport};
pub use closed_form::{norm_closed_form, spectral_norm, MAX_SPECTRAL_SVD_COLS};
pub use estimate::{witness_ratio, Method, NormEstimate};
pub use grid::{norm_grid_oracle, MAX_GRID_DIM};
pub use heuristic::{norm_heuristic, norm_heuristic_seeded, HeuristicConfig};
pub use signenum::{norm_exact_dual_signenum, norm_exact_signenum, DEFAULT_MAX_ENUM_DIM};

use crate::error::Result;
use crate::linalg::{DenseMatrix, ExponentPair, NormKind};
use crate::scalar::Scalar;

/// Limits shared by all routes of [`estimate_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EngineBudget {
    pub heuristic: HeuristicConfig,
    /// Sign enumeration is used up to this many free coordinates.
    pub max_enum_dim: usize,
}

impl Default for EngineBudget {
    fn default() -> Self {
        Self {
            heuristic: HeuristicConfig::default(),
            max_enum_dim: DEFAULT_MAX_ENUM_DIM,
        }
    }
}

/// `‖A‖_{p→q}` in the requested kind.
///
/// Routes in order: closed form (`p = 1` or `q = ∞`), sign enumeration
/// (`p = ∞`, few columns), dual sign enumeration (`q = 1`, few rows), the
/// spectral norm for `p = q = 2`, then the ascent heuristic.
pub fn estimate_norm<T: Scalar>(
    a: &DenseMatrix<T>,
    pq: ExponentPair,
    kind: NormKind,
    budget: &EngineBudget,
) -> Result<NormEstimate<T>> {
    estimate_norm_seeded(a, pq, kind, budget, &[])
}

/// As [`estimate_norm`], with extra starts handed to the heuristic route.
pub fn estimate_norm_seeded<T: Scalar>(
    a: &DenseMatrix<T>,
    pq: ExponentPair,
    kind: NormKind,
    budget: &EngineBudget,
    starts: &[Vec<T>],
) -> Result<NormEstimate<T>> {
    match exact_route(a, pq, kind, budget) {
        Some(e) => e,
        None => norm_heuristic_seeded(a, pq, kind, &budget.heuristic, starts),
    }
}

fn exact_route<T: Scalar>(
    a: &DenseMatrix<T>,
    pq: ExponentPair,
    kind: NormKind,
    budget: &EngineBudget,
) -> Option<Result<NormEstimate<T>>> {
    if let Some(e) = norm_closed_form(a, pq, kind) {
        return Some(Ok(e));
    }
    if pq.p.is_infinite() && a.cols() <= budget.max_enum_dim {
        return Some(norm_exact_signenum(a, pq, kind, budget.max_enum_dim));
    }
    if pq.q.is_one() && a.rows() <= budget.max_enum_dim {
        return Some(norm_exact_dual_signenum(a, pq, kind, budget.max_enum_dim));
    }
    if pq.p.value() == 2.0 && pq.q.value() == 2.0 {
        return spectral_norm(a, kind).map(Ok);
    }
    None
}
