//! Rank-revealing factorizations.
//!
//! The floating-point route is a one-sided (Hestenes) Jacobi SVD; the exact
//! route is plain Gaussian elimination over any exact field such
//! as `BigRational`. The two are deliberately unrelated so they can check
//! each other.

use num_traits::Num;

use crate::linalg::matrix::DenseMatrix;
use crate::scalar::Scalar;

/// Singular values and right singular vectors of a matrix.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    /// Non-increasing.
    pub singular_values: Vec<T>,
    /// `cols × cols`; column `k` pairs with `singular_values[k]`.
    pub right_vectors: DenseMatrix<T>,
}

const MAX_SWEEPS: usize = 80;

/// One-sided Jacobi SVD (right side only).
pub fn jacobi_svd<T: Scalar>(a: &DenseMatrix<T>) -> Svd<T> {
    let (m, n) = a.shape();
    let mut w: Vec<Vec<T>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect();
    let tol = T::epsilon() * T::of_usize(m.max(n));
    let dot = |x: &[T], y: &[T]| x.iter().zip(y).map(|(&p, &q)| p * q).sum::<T>();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha = dot(&w[i], &w[i]);
                let beta = dot(&w[j], &w[j]);
                let gamma = dot(&w[i], &w[j]);
                if gamma == T::zero() || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let two = T::one() + T::one();
                let zeta = (beta - alpha) / (two * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = (T::one() + t * t).sqrt().recip();
                let s = c * t;
                rotate(&mut w, i, j, c, s);
                rotate(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<T> = w.iter().map(|col| dot(col, col).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        norms[y]
            .partial_cmp(&norms[x])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let singular_values = order.iter().map(|&k| norms[k]).collect();
    let right_vectors = DenseMatrix::from_fn(n, n, |r, c| v[order[c]][r]);
    Svd {
        singular_values,
        right_vectors,
    }
}

fn rotate<T: Scalar>(cols: &mut [Vec<T>], i: usize, j: usize, c: T, s: T) {
    let (lo, hi) = cols.split_at_mut(j);
    for (x, y) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
        let (xi, yj) = (*x, *y);
        *x = c * xi - s * yj;
        *y = s * xi + c * yj;
    }
}

/// Number of singular values above `rel_tol · σ_max`.
pub fn numerical_rank<T: Scalar>(a: &DenseMatrix<T>, rel_tol: f64) -> usize {
    rank_of(&jacobi_svd(a).singular_values, rel_tol)
}

fn rank_of<T: Scalar>(sv: &[T], rel_tol: f64) -> usize {
    let top = sv.first().copied().unwrap_or_else(T::zero);
    if top == T::zero() {
        return 0;
    }
    let cut = top * T::of(rel_tol);
    sv.iter().filter(|&&s| s > cut).count()
}

/// Orthogonal projector onto the null space of `a`, and the numerical rank
/// of `a` at the cutoff `rel_tol · σ_max`.
pub fn null_space_projector<T: Scalar>(
    a: &DenseMatrix<T>,
    rel_tol: f64,
) -> (DenseMatrix<T>, usize) {
    let svd = jacobi_svd(a);
    let rank = rank_of(&svd.singular_values, rel_tol);
    let n = a.cols();
    let vecs = &svd.right_vectors;
    let mut p = DenseMatrix::identity(n);
    for r in 0..n {
        for c in 0..n {
            let mut acc = T::zero();
            for k in 0..rank {
                acc += vecs[(r, k)] * vecs[(c, k)];
            }
            p[(r, c)] -= acc;
        }
    }
    (p, rank)
}

/// Exact rank by Gaussian elimination over a field with exact arithmetic.
pub fn exact_rank<F: Num + Clone>(mut rows: Vec<Vec<F>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone() / pivot_row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x = x.clone() - factor.clone() * p.clone();
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn singular_values_of_diagonal() {
        let a = DenseMatrix::diagonal(&[1.0, -3.0, 2.0]);
        let svd = jacobi_svd(&a);
        assert_eq!(svd.singular_values, vec![3.0, 2.0, 1.0]);
        assert_eq!(
            svd.right_vectors
                .column(0)
                .iter()
                .map(|v: &f64| v.abs())
                .collect::<Vec<_>>(),
            vec![0.0, 1.0, 0.0]
        );
    }

    #[test]
    fn reconstructs_gram_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a: DenseMatrix<f64> = DenseMatrix::from_fn(7, 4, |_, _| rng.random_range(-1.0..1.0));
        let svd = jacobi_svd(&a);
        // AᵀA = V Σ² Vᵀ
        let ata = a.transpose().matmul(&a).unwrap();
        let v = &svd.right_vectors;
        let rebuilt = DenseMatrix::from_fn(4, 4, |r, c| {
            (0..4)
                .map(|k| v[(r, k)] * svd.singular_values[k].powi(2) * v[(c, k)])
                .sum()
        });
        assert!(ata.max_abs_diff(&rebuilt) < 1e-12);
        let vtv = v.transpose().matmul(v).unwrap();
        assert!(vtv.max_abs_diff(&DenseMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn projector_is_orthogonal_and_kills_rows() {
        // wide matrix with a duplicated row: rank 2 in R^5
        let a: DenseMatrix<f64> = DenseMatrix::from_rows(&[
            [1.0, -1.0, 0.0, 0.0, 1.0],
            [0.0, 1.0, 1.0, -1.0, 0.0],
            [1.0, -1.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        let (p, rank) = null_space_projector(&a, 1e-10);
        assert_eq!(rank, 2);
        assert!(p.symmetry_residual() < 1e-14);
        assert!(p.matmul(&p).unwrap().max_abs_diff(&p) < 1e-13);
        assert!((p.trace() - 3.0).abs() < 1e-13);
        assert!(a.matmul(&p).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn exact_rank_examples() {
        let q = |v: i64| BigRational::from_integer(v.into());
        let m = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(0), q(1), q(1)],
        ];
        assert_eq!(exact_rank(m), 2);
        assert_eq!(exact_rank::<BigRational>(vec![]), 0);
        assert_eq!(exact_rank(vec![vec![q(0), q(0)]]), 0);
    }
}
