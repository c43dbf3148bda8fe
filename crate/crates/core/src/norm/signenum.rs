use crate::error::{Error, Result};
use crate::linalg::norms::{duality_map, norm};
use crate::linalg::{DenseMatrix, ExponentPair, NormKind};
use crate::norm::estimate::{Method, NormEstimate};
use crate::scalar::Scalar;

/// Default dimension limit for exhaustive sign enumeration.
pub const DEFAULT_MAX_ENUM_DIM: usize = 24;

// Incremental updates are re-synchronised from scratch this often.
const RESYNC_PERIOD: u64 = 1 << 14;
// Relative margin a candidate must beat the incumbent by.
const TIE_TOLERANCE: f64 = 1e-12;

/// Exact `‖A‖_{∞→q}`: the maximum of `‖Ax‖_q` is attained at a sign vector.
///
/// Ties resolve to the lexicographically smallest sign vector with `+`
/// ordered before `-`. Since `x` and `-x` give the same value, the first
/// coordinate is fixed to `+`.
pub fn norm_exact_signenum<T: Scalar>(
    a: &DenseMatrix<T>,
    pq: ExponentPair,
    kind: NormKind,
    max_dim: usize,
) -> Result<NormEstimate<T>> {
    if !pq.p.is_infinite() {
        return Err(Error::domain(format!(
            "sign enumeration needs p = inf, got p = {}",
            pq.p
        )));
    }
    if a.cols() > max_dim {
        return Err(Error::resource(format!(
            "sign enumeration limited to {max_dim} columns, matrix has {}",
            a.cols()
        )));
    }
    if a.max_abs() == T::zero() {
        return Ok(NormEstimate::zero(a.cols(), pq, kind, Method::ExactEnum));
    }
    let signs = best_signs(a, pq.q);
    Ok(NormEstimate::from_witness(
        a,
        pq,
        kind,
        Method::ExactEnum,
        signs,
    ))
}

/// Exact `‖A‖_{p→1}` through the dual problem `‖Aᵀ‖_{∞→p*}`. The witness
/// is the Hölder dual of `Aᵀs` for the optimal sign vector `s`.
pub fn norm_exact_dual_signenum<T: Scalar>(
    a: &DenseMatrix<T>,
    pq: ExponentPair,
    kind: NormKind,
    max_dim: usize,
) -> Result<NormEstimate<T>> {
    if !pq.q.is_one() {
        return Err(Error::domain(format!(
            "dual sign enumeration needs q = 1, got q = {}",
            pq.q
        )));
    }
    if a.rows() > max_dim {
        return Err(Error::resource(format!(
            "dual sign enumeration limited to {max_dim} rows, matrix has {}",
            a.rows()
        )));
    }
    if a.max_abs() == T::zero() {
        return Ok(NormEstimate::zero(a.cols(), pq, kind, Method::ExactEnum));
    }
    let at = a.transpose();
    let p_dual = pq.p.dual();
    let s = best_signs(&at, p_dual);
    let w = duality_map(&at.matvec(&s), p_dual);
    Ok(NormEstimate::from_witness(
        a,
        pq,
        kind,
        Method::ExactEnum,
        w,
    ))
}

/// Sign vector maximising `‖Ax‖_q`, in lexicographic order with the first
/// coordinate fixed to `+`.
fn best_signs<T: Scalar>(a: &DenseMatrix<T>, q: crate::linalg::Exponent) -> Vec<T> {
    let n = a.cols();
    let columns: Vec<Vec<T>> = (0..n).map(|j| a.column(j)).collect();
    let mut x = vec![T::one(); n];
    let mut y = a.matvec(&x);
    let mut best = norm(&y, q, NormKind::Counting);
    let mut best_x = x.clone();
    let free = n.saturating_sub(1);
    let total: u64 = 1u64 << free;
    let two = T::of(2.0);
    let margin = T::of(1.0 + TIE_TOLERANCE);
    for k in 1..total {
        // binary increment: coordinate n-1-b flips for each trailing bit b
        let flips = k.trailing_zeros() as usize + 1;
        for b in 0..flips {
            let j = n - 1 - b;
            let delta = -two * x[j];
            x[j] = -x[j];
            for (yi, &c) in y.iter_mut().zip(&columns[j]) {
                *yi += delta * c;
            }
        }
        if k % RESYNC_PERIOD == 0 {
            y = a.matvec(&x);
        }
        let v = norm(&y, q, NormKind::Counting);
        if v > best * margin {
            best = v;
            best_x.copy_from_slice(&x);
        }
    }
    best_x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::seeded_rng;
    use rand::Rng;

    fn brute(a: &DenseMatrix<f64>, q: f64) -> f64 {
        let n = a.cols();
        let qe = crate::linalg::Exponent::new(q).unwrap();
        (0..1u32 << n)
            .map(|m| {
                let x: Vec<f64> = (0..n)
                    .map(|j| if m >> j & 1 == 1 { -1.0 } else { 1.0 })
                    .collect();
                norm(&a.matvec(&x), qe, NormKind::Counting)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = seeded_rng(3);
        for q in [1.0, 1.5, 2.0, 3.0] {
            for _ in 0..10 {
                let a = DenseMatrix::<f64>::from_fn(4, 6, |_, _| rng.random_range(-1.0..1.0));
                let pq = ExponentPair::from_f64(f64::INFINITY, q).unwrap();
                let e = norm_exact_signenum(&a, pq, NormKind::Counting, 24).unwrap();
                assert!((e.value - brute(&a, q)).abs() < 1e-12);
                assert!(e.witness.iter().all(|v| v.abs() == 1.0));
                assert_eq!(e.witness[0], 1.0);
            }
        }
    }

    #[test]
    fn infinity_to_one_example() {
        let a = DenseMatrix::<f64>::from_rows(&[[1.0, 1.0], [1.0, -1.0]]).unwrap();
        let pq = ExponentPair::from_f64(f64::INFINITY, 1.0).unwrap();
        let e = norm_exact_signenum(&a, pq, NormKind::Counting, 24).unwrap();
        assert_eq!(e.value, 2.0);
        assert_eq!(e.witness, vec![1.0, 1.0]);
    }

    #[test]
    fn dual_enumeration_agrees_with_primal() {
        let mut rng = seeded_rng(5);
        for p in [1.5, 2.0, 4.0] {
            let a = DenseMatrix::<f64>::from_fn(5, 4, |_, _| rng.random_range(-1.0..1.0));
            let pq = ExponentPair::from_f64(p, 1.0).unwrap();
            let d = norm_exact_dual_signenum(&a, pq, NormKind::Counting, 24).unwrap();
            let t = norm_exact_signenum(&a.transpose(), pq.dual(), NormKind::Counting, 24).unwrap();
            assert!((d.value - t.value).abs() < 1e-10 * t.value);
            assert!(d.witness_residual(&a) < 1e-12);
        }
    }

    #[test]
    fn rejects_wide_matrices() {
        let a = DenseMatrix::<f64>::zeros(1, 25);
        let pq = ExponentPair::from_f64(f64::INFINITY, 2.0).unwrap();
        assert!(norm_exact_signenum(&a, pq, NormKind::Counting, 24).is_err());
    }
}
