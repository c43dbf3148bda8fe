use crate::error::{Error, Result};
use crate::linalg::exponent::{Exponent, ExponentPair, NormKind};
use crate::scalar::Scalar;

/// ℓ_p norm of `x` under the counting or expectation normalisation.
/// For `p = ∞` both kinds are `max |x_i|`.
pub fn vector_norm<T: Scalar>(x: &[T], p: Exponent, kind: NormKind) -> Result<T> {
    if let Exponent::Finite(pv) = p {
        if !(pv >= 1.0) {
            return Err(Error::domain(format!("vector norm needs p >= 1, got {pv}")));
        }
    }
    Ok(norm(x, p, kind))
}

/// Infallible form of [`vector_norm`] for exponents already validated by
/// [`Exponent::new`].
pub(crate) fn norm<T: Scalar>(x: &[T], p: Exponent, kind: NormKind) -> T {
    let counting = match p {
        Exponent::Infinity => return x.iter().map(|v| v.abs()).fold(T::zero(), T::max),
        Exponent::Finite(pv) if pv == 1.0 => x.iter().map(|v| v.abs()).sum(),
        Exponent::Finite(pv) if pv == 2.0 => {
            // scaled to avoid overflow/underflow on extreme magnitudes
            let m = x.iter().map(|v| v.abs()).fold(T::zero(), T::max);
            if m == T::zero() {
                return T::zero();
            }
            m * x.iter().map(|&v| (v / m) * (v / m)).sum::<T>().sqrt()
        }
        Exponent::Finite(pv) => {
            let m = x.iter().map(|v| v.abs()).fold(T::zero(), T::max);
            if m == T::zero() {
                return T::zero();
            }
            let e = T::of(pv);
            m * x
                .iter()
                .map(|&v| (v.abs() / m).powf(e))
                .sum::<T>()
                .powf(e.recip())
        }
    };
    match kind {
        NormKind::Counting => counting,
        NormKind::Expectation => counting / T::of_usize(x.len()).powf(T::of(p.reciprocal())),
    }
}

/// Converts an ℓ_p vector norm of an `n`-vector between kinds:
/// `counting = expectation · n^{1/p}`.
pub fn norm_kind_convert(value: f64, n: usize, p: Exponent, from: NormKind, to: NormKind) -> f64 {
    assert!(n >= 1, "vector length must be positive");
    let f = (n as f64).powf(p.reciprocal());
    match (from, to) {
        (NormKind::Expectation, NormKind::Counting) => value * f,
        (NormKind::Counting, NormKind::Expectation) => value / f,
        _ => value,
    }
}

/// Multiplier taking `‖A‖_{p→q}` of a `rows × cols` matrix from one kind to
/// another: `‖A‖^E = ‖A‖^C · cols^{1/p} / rows^{1/q}`.
pub fn operator_kind_factor(
    rows: usize,
    cols: usize,
    pq: ExponentPair,
    from: NormKind,
    to: NormKind,
) -> f64 {
    let e_over_c = (cols as f64).powf(pq.p.reciprocal()) / (rows as f64).powf(pq.q.reciprocal());
    match (from, to) {
        (NormKind::Counting, NormKind::Expectation) => e_over_c,
        (NormKind::Expectation, NormKind::Counting) => 1.0 / e_over_c,
        _ => 1.0,
    }
}

/// Hölder dual map `z ↦ sign(z)|z|^{r-1}` applied coordinatewise; for
/// `r = 1` this is the sign map. For `r = ∞` it returns the signed basis
/// vector at the first largest coordinate, which is still a norming
/// functional.
pub(crate) fn duality_map<T: Scalar>(z: &[T], r: Exponent) -> Vec<T> {
    match r {
        Exponent::Finite(rv) if rv == 1.0 => z
            .iter()
            .map(|&v| {
                if v == T::zero() {
                    T::zero()
                } else {
                    v.signum()
                }
            })
            .collect(),
        Exponent::Finite(rv) if rv == 2.0 => z.to_vec(),
        Exponent::Finite(rv) => {
            let e = T::of(rv - 1.0);
            z.iter().map(|&v| v.signed_pow(e)).collect()
        }
        Exponent::Infinity => {
            let mut out = vec![T::zero(); z.len()];
            let mut best: Option<usize> = None;
            for (i, v) in z.iter().enumerate() {
                if best.map_or(true, |b| v.abs() > z[b].abs()) {
                    best = Some(i);
                }
            }
            if let Some(b) = best {
                out[b] = if z[b] < T::zero() {
                    -T::one()
                } else {
                    T::one()
                };
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GRID: [Exponent; 5] = [
        Exponent::Finite(1.0),
        Exponent::Finite(1.5),
        Exponent::Finite(2.0),
        Exponent::Finite(3.0),
        Exponent::Infinity,
    ];

    #[test]
    fn examples() {
        let c = NormKind::Counting;
        let e = NormKind::Expectation;
        assert_eq!(vector_norm(&[3.0, 4.0], Exponent::TWO, c).unwrap(), 5.0);
        assert_eq!(vector_norm(&[1.0; 4], Exponent::ONE, e).unwrap(), 1.0);
        for kind in [c, e] {
            assert_eq!(
                vector_norm(&[1.0, -2.0], Exponent::Infinity, kind).unwrap(),
                2.0
            );
        }
        assert!(vector_norm(&[1.0f64], Exponent::Finite(0.5), c).is_err());
    }

    #[test]
    fn kind_conversion() {
        let (c, e) = (NormKind::Counting, NormKind::Expectation);
        assert_eq!(norm_kind_convert(1.0, 16, Exponent::TWO, e, c), 4.0);
        assert_eq!(norm_kind_convert(3.5, 16, Exponent::Infinity, e, c), 3.5);
        for p in GRID {
            let v = 1.2345;
            let back = norm_kind_convert(norm_kind_convert(v, 7, p, c, e), 7, p, e, c);
            assert!((back - v).abs() <= 1e-15 * v);
        }
    }

    fn vec_strategy() -> impl Strategy<Value = Vec<f64>> {
        (1usize..12).prop_flat_map(|n| prop::collection::vec(-10.0f64..10.0, n))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn nesting(x in vec_strategy()) {
            let tol = 1e-12 * (1.0 + x.iter().map(|v| v.abs()).sum::<f64>());
            for w in GRID.windows(2) {
                let c0 = norm(&x, w[0], NormKind::Counting);
                let c1 = norm(&x, w[1], NormKind::Counting);
                prop_assert!(c1 <= c0 + tol);
                let e0 = norm(&x, w[0], NormKind::Expectation);
                let e1 = norm(&x, w[1], NormKind::Expectation);
                prop_assert!(e0 <= e1 + tol);
            }
        }
    }

    proptest! {
        #[test]
        fn triangle_and_homogeneity(
            (x, y) in (1usize..10).prop_flat_map(|n| (
                prop::collection::vec(-5.0f64..5.0, n),
                prop::collection::vec(-5.0f64..5.0, n),
            )),
            c in -4.0f64..4.0,
        ) {
            let s: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            let cx: Vec<f64> = x.iter().map(|a| c * a).collect();
            for kind in [NormKind::Counting, NormKind::Expectation] {
                for p in GRID {
                    let (nx, ny, ns) = (norm(&x, p, kind), norm(&y, p, kind), norm(&s, p, kind));
                    prop_assert!(ns <= nx + ny + 1e-10);
                    let ncx = norm(&cx, p, kind);
                    prop_assert!((ncx - c.abs() * nx).abs() <= 1e-10 * (1.0 + ncx));
                }
            }
        }
    }
}
