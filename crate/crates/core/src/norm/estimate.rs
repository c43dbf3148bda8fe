use std::fmt;

use serde::Serialize;

use crate::linalg::norms::norm;
use crate::linalg::{DenseMatrix, ExponentPair, NormKind};
use crate::scalar::Scalar;

/// How a [`NormEstimate`] was obtained. Only `ExactEnum` and `ClosedForm`
/// claim exactness; the other two are certified lower bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactEnum,
    ClosedForm,
    HeuristicLb,
    GridOracle,
}

impl Method {
    pub fn is_exact(self) -> bool {
        matches!(self, Method::ExactEnum | Method::ClosedForm)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ExactEnum => "exact-enum",
            Method::ClosedForm => "closed-form",
            Method::HeuristicLb => "heuristic-lb",
            Method::GridOracle => "grid-oracle",
        })
    }
}

/// A value of `‖A‖_{p→q}` together with a vector attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate<T> {
    pub value: T,
    pub method: Method,
    /// Normalised to unit `p`-norm of the requested kind.
    pub witness: Vec<T>,
    pub kind: NormKind,
    pub pq: ExponentPair,
    /// Set when the matrix is zero and the witness is arbitrary.
    pub degenerate: bool,
}

impl<T: Scalar> NormEstimate<T> {
    /// Builds an estimate whose value is recomputed from the witness, so the
    /// witness reproduces it by construction.
    pub(crate) fn from_witness(
        a: &DenseMatrix<T>,
        pq: ExponentPair,
        kind: NormKind,
        method: Method,
        witness: Vec<T>,
    ) -> Self {
        let scale = norm(&witness, pq.p, kind);
        let witness: Vec<T> = if scale > T::zero() {
            witness.iter().map(|&v| v / scale).collect()
        } else {
            witness
        };
        let value = witness_ratio(a, &witness, pq, kind);
        Self {
            value,
            method,
            witness,
            kind,
            pq,
            degenerate: false,
        }
    }

    pub(crate) fn zero(cols: usize, pq: ExponentPair, kind: NormKind, method: Method) -> Self {
        let mut witness = vec![T::zero(); cols];
        witness[0] = T::one();
        Self {
            value: T::zero(),
            method,
            witness,
            kind,
            pq,
            degenerate: true,
        }
    }

    /// Relative disagreement between `value` and the witness ratio.
    pub fn witness_residual(&self, a: &DenseMatrix<T>) -> T {
        let r = witness_ratio(a, &self.witness, self.pq, self.kind);
        if self.value == T::zero() {
            r.abs()
        } else {
            (r - self.value).abs() / self.value
        }
    }
}

/// `‖Ax‖_q / ‖x‖_p` under the given kind; zero for `x = 0`.
pub fn witness_ratio<T: Scalar>(
    a: &DenseMatrix<T>,
    x: &[T],
    pq: ExponentPair,
    kind: NormKind,
) -> T {
    let den = norm(x, pq.p, kind);
    if den == T::zero() {
        return T::zero();
    }
    norm(&a.matvec(x), pq.q, kind) / den
}
