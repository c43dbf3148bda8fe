use crate::linalg::norms::{duality_map, norm};
use crate::linalg::{decomp, DenseMatrix, Exponent, ExponentPair, NormKind};
use crate::norm::estimate::{Method, NormEstimate};
use crate::scalar::Scalar;

/// Largest column count for which `‖A‖_{2→2}` is taken from a full SVD.
pub const MAX_SPECTRAL_SVD_COLS: usize = 512;

/// Closed forms: `p = 1` is the largest column `q`-norm, `q = ∞` the largest
/// row `p*`-norm. `None` when neither applies.
pub fn norm_closed_form<T: Scalar>(
    a: &DenseMatrix<T>,
    pq: ExponentPair,
    kind: NormKind,
) -> Option<NormEstimate<T>> {
    if a.max_abs() == T::zero() && (pq.p.is_one() || pq.q.is_infinite()) {
        return Some(NormEstimate::zero(a.cols(), pq, kind, Method::ClosedForm));
    }
    if pq.p.is_one() {
        let best = argmax((0..a.cols()).map(|j| norm(&a.column(j), pq.q, NormKind::Counting)));
        let mut w = vec![T::zero(); a.cols()];
        w[best] = T::one();
        return Some(NormEstimate::from_witness(
            a,
            pq,
            kind,
            Method::ClosedForm,
            w,
        ));
    }
    if pq.q.is_infinite() {
        let p_dual = pq.p.dual();
        let best = argmax((0..a.rows()).map(|i| norm(a.row(i), p_dual, NormKind::Counting)));
        // Hölder equality case for the selected row
        let w = duality_map(a.row(best), p_dual);
        return Some(NormEstimate::from_witness(
            a,
            pq,
            kind,
            Method::ClosedForm,
            w,
        ));
    }
    None
}

/// `‖A‖_{2→2}` as the top singular value, witness the top right singular
/// vector. `None` unless `p = q = 2` and the matrix is small enough.
pub fn spectral_norm<T: Scalar>(a: &DenseMatrix<T>, kind: NormKind) -> Option<NormEstimate<T>> {
    let pq = ExponentPair::new(Exponent::TWO, Exponent::TWO);
    if a.cols() > MAX_SPECTRAL_SVD_COLS {
        return None;
    }
    if a.max_abs() == T::zero() {
        return Some(NormEstimate::zero(a.cols(), pq, kind, Method::ClosedForm));
    }
    let svd = decomp::jacobi_svd(a);
    let w = svd.right_vectors.column(0);
    Some(NormEstimate::from_witness(
        a,
        pq,
        kind,
        Method::ClosedForm,
        w,
    ))
}

/// Index of the first maximum.
pub(crate) fn argmax<T: Scalar>(values: impl Iterator<Item = T>) -> usize {
    let mut best = (0, T::neg_infinity());
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(p: f64, q: f64) -> ExponentPair {
        ExponentPair::from_f64(p, q).unwrap()
    }

    #[test]
    fn examples() {
        let i3 = DenseMatrix::<f64>::identity(3);
        let e = norm_closed_form(&i3, pair(1.0, 2.0), NormKind::Counting).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.witness, vec![1.0, 0.0, 0.0]);

        let a = DenseMatrix::<f64>::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let e = norm_closed_form(&a, pair(1.0, 1.0), NormKind::Counting).unwrap();
        assert_eq!(e.value, 6.0);
        assert_eq!(e.witness, vec![0.0, 1.0]);

        let e = norm_closed_form(&a, pair(2.0, f64::INFINITY), NormKind::Counting).unwrap();
        assert!((e.value - 5.0).abs() < 1e-15);
        assert!(e.witness_residual(&a) < 1e-12);

        assert!(norm_closed_form(&a, pair(2.0, 2.0), NormKind::Counting).is_none());
    }

    #[test]
    fn infinity_to_infinity_is_max_row_sum() {
        let a = DenseMatrix::<f64>::from_rows(&[[1.0, -2.0, 0.5], [3.0, 0.0, -1.0]]).unwrap();
        let e =
            norm_closed_form(&a, pair(f64::INFINITY, f64::INFINITY), NormKind::Counting).unwrap();
        assert_eq!(e.value, 4.0);
        assert_eq!(e.witness, vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn spectral_of_diagonal() {
        let a = DenseMatrix::<f64>::diagonal(&[1.0, -2.0, 3.0]);
        let e = spectral_norm(&a, NormKind::Counting).unwrap();
        assert!((e.value - 3.0).abs() < 1e-15);
        let z = spectral_norm(&DenseMatrix::<f64>::zeros(2, 2), NormKind::Counting).unwrap();
        assert!(z.degenerate && z.value == 0.0);
    }

    #[test]
    fn expectation_kind_rescales() {
        let a = DenseMatrix::<f64>::from_rows(&[[1.0, 2.0], [3.0, 4.0], [0.0, 1.0]]).unwrap();
        let pq = pair(1.0, 2.0);
        let c = norm_closed_form(&a, pq, NormKind::Counting).unwrap();
        let e = norm_closed_form(&a, pq, NormKind::Expectation).unwrap();
        let f = crate::linalg::operator_kind_factor(
            3,
            2,
            pq,
            NormKind::Counting,
            NormKind::Expectation,
        );
        assert!((e.value - c.value * f).abs() < 1e-14);
    }
}
