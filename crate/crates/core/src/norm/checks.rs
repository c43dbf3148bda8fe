use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Exponent, ExponentPair, NormKind};
use crate::norm::estimate::Method;
use crate::norm::{estimate_norm, EngineBudget};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub primal: f64,
    pub dual: f64,
    pub primal_method: Method,
    pub dual_method: Method,
    pub rel_diff: f64,
}

/// Compares `‖A‖_{p→q}` with `‖Aᵀ‖_{q*→p*}`, both in counting norms.
pub fn duality_check<T: Scalar>(
    a: &DenseMatrix<T>,
    pq: ExponentPair,
    budget: &EngineBudget,
) -> Result<DualityReport> {
    let primal = estimate_norm(a, pq, NormKind::Counting, budget)?;
    let dual = estimate_norm(&a.transpose(), pq.dual(), NormKind::Counting, budget)?;
    let (pv, dv) = (primal.value.as_f64(), dual.value.as_f64());
    let scale = pv.max(dv);
    Ok(DualityReport {
        primal: pv,
        dual: dv,
        primal_method: primal.method,
        dual_method: dual.method,
        rel_diff: if scale == 0.0 {
            0.0
        } else {
            (pv - dv).abs() / scale
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CompositionReport {
    /// `‖BC‖_{p→q}`.
    pub lhs: f64,
    /// `‖B‖_{r→q}·‖C‖_{p→r}`.
    pub rhs: f64,
    /// `rhs - lhs`, nonnegative when the bound holds.
    pub slack: f64,
}

/// Submultiplicativity `‖BC‖_{p→q} ≤ ‖B‖_{r→q} ‖C‖_{p→r}`.
pub fn composition_check<T: Scalar>(
    b: &DenseMatrix<T>,
    c: &DenseMatrix<T>,
    p: Exponent,
    r: Exponent,
    q: Exponent,
    budget: &EngineBudget,
) -> Result<CompositionReport> {
    if b.cols() != c.rows() {
        return Err(Error::dimension(format!(
            "cannot compose {}x{} with {}x{}",
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    let bc = b.matmul(c)?;
    let lhs = estimate_norm(&bc, ExponentPair::new(p, q), NormKind::Counting, budget)?
        .value
        .as_f64();
    let nb = estimate_norm(b, ExponentPair::new(r, q), NormKind::Counting, budget)?
        .value
        .as_f64();
    let nc = estimate_norm(c, ExponentPair::new(p, r), NormKind::Counting, budget)?
        .value
        .as_f64();
    let rhs = nb * nc;
    Ok(CompositionReport {
        lhs,
        rhs,
        slack: rhs - lhs,
    })
}
