//! Kronecker products.
//!
//! Index pairing: row `(i, j)` of `A ⊗ B` is `i * rows(B) + j` and column
//! `(k, l)` is `k * cols(B) + l`, so entry `((i,j),(k,l)) = A[i,k] · B[j,l]`.
//! The same pairing applies to vectors: `(x ⊗ y)[k * len(y) + l] = x[k] y[l]`.

use crate::error::{Error, Result};
use crate::linalg::matrix::DenseMatrix;
use crate::scalar::Scalar;

/// Default cap on the number of entries of any constructed matrix (2^26).
pub const DEFAULT_MAX_ENTRIES: usize = 1 << 26;

pub fn kron<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    kron_capped(a, b, DEFAULT_MAX_ENTRIES)
}

pub fn kron_capped<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
    max_entries: usize,
) -> Result<DenseMatrix<T>> {
    let rows = a.rows().checked_mul(b.rows());
    let cols = a.cols().checked_mul(b.cols());
    let (rows, cols) = match (rows, cols) {
        (Some(r), Some(c)) if r.checked_mul(c).is_some_and(|n| n <= max_entries) => (r, c),
        _ => {
            return Err(Error::resource(format!(
                "kron of {}x{} and {}x{} exceeds the {max_entries}-entry cap",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )))
        }
    };
    let (br, bc) = b.shape();
    Ok(DenseMatrix::from_fn(rows, cols, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    }))
}

/// `x ⊗ y` under the pairing documented at module level.
pub fn kron_vec<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    x.iter()
        .flat_map(|&a| y.iter().map(move |&b| a * b))
        .collect()
}

/// `A^{⊗k}`, `k ≥ 1`.
pub fn kron_power<T: Scalar>(
    a: &DenseMatrix<T>,
    k: usize,
    max_entries: usize,
) -> Result<DenseMatrix<T>> {
    if k == 0 {
        return Err(Error::domain("tensor power needs k >= 1"));
    }
    let mut out = a.clone();
    for _ in 1..k {
        out = kron_capped(&out, a, max_entries)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::decomp::{exact_rank, numerical_rank};
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_scalar_cases() {
        let i2 = DenseMatrix::<f64>::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), DenseMatrix::identity(4));
        let b = DenseMatrix::from_rows(&[[1.0, -2.0, 0.5], [3.0, 4.0, 7.0]]).unwrap();
        let two = DenseMatrix::new(1, 1, vec![2.0]).unwrap();
        assert_eq!(kron(&two, &b).unwrap(), b.scale(2.0));
    }

    #[test]
    fn pairing_matches_documentation() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[[0.0, 5.0, 1.0], [6.0, 7.0, 2.0]]).unwrap();
        let k = kron(&a, &b).unwrap();
        assert_eq!(k.shape(), (4, 6));
        for i in 0..2 {
            for j in 0..2 {
                for kk in 0..2 {
                    for l in 0..3 {
                        assert_eq!(k[(i * 2 + j, kk * 3 + l)], a[(i, kk)] * b[(j, l)]);
                    }
                }
            }
        }
        // (A ⊗ B)(x ⊗ y) = Ax ⊗ By
        let x = [0.3f64, -1.1];
        let y = [2.0, 0.5, -0.25];
        let lhs = k.matvec(&kron_vec(&x, &y));
        let rhs = kron_vec(&a.matvec(&x), &b.matvec(&y));
        for (l, r) in lhs.iter().zip(&rhs) {
            assert!((l - r).abs() < 1e-12);
        }
    }

    #[test]
    fn associativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut rand_mat =
            |r, c| DenseMatrix::<f64>::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0));
        let (a, b, c) = (rand_mat(2, 3), rand_mat(3, 1), rand_mat(2, 2));
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        assert_eq!(left.shape(), right.shape());
        assert!(left.max_abs_diff(&right) <= 1e-15);
    }

    #[test]
    fn cap_is_enforced() {
        let a = DenseMatrix::<f64>::identity(10);
        assert!(matches!(kron_capped(&a, &a, 99), Err(Error::Resource(_))));
        assert!(kron_capped(&a, &a, 10_000).is_ok());
        assert!(kron_power(&a, 0, 100).is_err());
    }

    /// Rank is multiplicative; checked with exact rational elimination on
    /// integer matrices of prescribed low rank, and again numerically.
    #[test]
    fn rank_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..20 {
            let mut low_rank = |r: usize| {
                let u = DenseMatrix::from_fn(3, r, |_, _| rng.random_range(-3i32..=3) as f64);
                let v = DenseMatrix::from_fn(r, 3, |_, _| rng.random_range(-3i32..=3) as f64);
                u.matmul(&v).unwrap()
            };
            let a = low_rank(1 + trial % 3);
            let b = low_rank(1 + (trial / 3) % 3);
            let to_q = |m: &DenseMatrix<f64>| -> Vec<Vec<BigRational>> {
                (0..m.rows())
                    .map(|i| {
                        m.row(i)
                            .iter()
                            .map(|&v| BigRational::from_integer((v as i64).into()))
                            .collect()
                    })
                    .collect()
            };
            let k = kron(&a, &b).unwrap();
            let (ra, rb, rk) = (
                exact_rank(to_q(&a)),
                exact_rank(to_q(&b)),
                exact_rank(to_q(&k)),
            );
            assert_eq!(rk, ra * rb);
            assert_eq!(numerical_rank(&k, 1e-10), rk);
        }
    }
}
