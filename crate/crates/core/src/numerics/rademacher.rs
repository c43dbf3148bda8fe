//! Exact moments of Rademacher sums `⟨R, x⟩`, `R` uniform on `{±1}^n`.

use crate::error::{Error, Result};
use crate::linalg::{norms::norm, Exponent, NormKind};
use crate::numerics::gaussian::gaussian_moment;

/// Largest dimension handled by full enumeration of sign vectors.
pub const MAX_ENUMERATION_DIM: usize = 24;
/// Largest dimension for [`spread_moment_ratio`].
pub const MAX_SPREAD_DIM: usize = 20;

fn check_even(q: u32) -> Result<()> {
    if q >= 2 && q % 2 == 0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "moment order must be an even integer >= 2, got {q}"
        )))
    }
}

/// `E_R ⟨R, x⟩^q` for even `q`: enumeration up to [`MAX_ENUMERATION_DIM`]
/// coordinates, multinomial expansion beyond.
pub fn rademacher_moment_exact(x: &[f64], q: u32) -> Result<f64> {
    check_even(q)?;
    if x.len() <= MAX_ENUMERATION_DIM {
        rademacher_moment_enumerated(x, q)
    } else {
        rademacher_moment_multinomial(x, q)
    }
}

/// Averages `⟨s, x⟩^q` over all `2^n` sign vectors. Since `q` is even the
/// first sign is fixed to `+1`, and the remaining ones walk a Gray code.
pub fn rademacher_moment_enumerated(x: &[f64], q: u32) -> Result<f64> {
    check_even(q)?;
    if x.len() > MAX_ENUMERATION_DIM {
        return Err(Error::resource(format!(
            "sign enumeration is capped at {MAX_ENUMERATION_DIM} coordinates, got {}",
            x.len()
        )));
    }
    let Some((&first, rest)) = x.split_first() else {
        return Ok(0.0);
    };
    let mut signs = vec![1.0; rest.len()];
    let mut dot = first + rest.iter().sum::<f64>();
    let mut total = dot.powi(q as i32);
    for step in 1u64..(1u64 << rest.len()) {
        let flip = step.trailing_zeros() as usize;
        signs[flip] = -signs[flip];
        dot += 2.0 * signs[flip] * rest[flip];
        total += dot.powi(q as i32);
    }
    Ok(total / (1u64 << rest.len()) as f64)
}

/// `E⟨R,x⟩^q = q! Σ_{k even, |k| = q} Π x_i^{k_i} / k_i!`, accumulated by a
/// dynamic program over coordinates (odd exponents vanish in expectation).
pub fn rademacher_moment_multinomial(x: &[f64], q: u32) -> Result<f64> {
    check_even(q)?;
    let q = q as usize;
    let mut inv_fact = vec![1.0; q + 1];
    for k in 1..=q {
        inv_fact[k] = inv_fact[k - 1] / k as f64;
    }
    // dp[j] = Σ over assignments of total (even) degree j so far
    let mut dp = vec![0.0; q + 1];
    dp[0] = 1.0;
    for &xi in x {
        let mut next = dp.clone();
        let x2 = xi * xi;
        for j in (2..=q).step_by(2) {
            let mut pow = 1.0;
            let mut acc = 0.0;
            for k in (2..=j).step_by(2) {
                pow *= x2;
                acc += dp[j - k] * pow * inv_fact[k];
            }
            next[j] += acc;
        }
        dp = next;
    }
    let q_fact: f64 = (1..=q).map(|k| k as f64).product();
    Ok(q_fact * dp[q])
}

/// `γ_q ‖x‖₂ − (E⟨R,x⟩^q)^{1/q}`; non-negative by the Khintchine inequality
/// with Haagerup's optimal constant.
pub fn khintchine_gap(x: &[f64], q: u32) -> Result<f64> {
    let l2 = norm(x, Exponent::TWO, NormKind::Counting);
    if l2 == 0.0 {
        return Err(Error::domain("khintchine gap needs a nonzero vector"));
    }
    let moment = rademacher_moment_exact(x, q)?;
    Ok(gaussian_moment(q as f64)? * l2 - moment.powf(1.0 / q as f64))
}

/// `(E_x |⟨x, y⟩|^r)^{1/r} / ‖y‖₂` over the full hypercube, i.e. the
/// expectation r-norm of the linear Boolean function with coefficients `y`
/// relative to its Fourier 2-norm.
pub fn spread_moment_ratio(y: &[f64], r: f64) -> Result<f64> {
    if !(1.0..2.0).contains(&r) {
        return Err(Error::domain(format!(
            "spread ratio needs r in [1, 2), got {r}"
        )));
    }
    if y.is_empty() || y.len() > MAX_SPREAD_DIM {
        return Err(Error::resource(format!(
            "spread ratio enumerates the hypercube; need 1..={MAX_SPREAD_DIM} coordinates, got {}",
            y.len()
        )));
    }
    let l2 = norm(y, Exponent::TWO, NormKind::Counting);
    if l2 == 0.0 {
        return Err(Error::domain("spread ratio needs a nonzero vector"));
    }
    // |⟨x,y⟩| is symmetric under x → -x, so fix x_1 = +1
    let (&first, rest) = y.split_first().expect("non-empty");
    let mut signs = vec![1.0; rest.len()];
    let mut dot = first + rest.iter().sum::<f64>();
    let mut total = dot.abs().powf(r);
    for step in 1u64..(1u64 << rest.len()) {
        let flip = step.trailing_zeros() as usize;
        signs[flip] = -signs[flip];
        dot += 2.0 * signs[flip] * rest[flip];
        total += dot.abs().powf(r);
    }
    let mean = total / (1u64 << rest.len()) as f64;
    Ok(mean.powf(1.0 / r) / l2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Plain enumeration over all 2^n sign vectors with no symmetry tricks.
    fn brute_force(x: &[f64], q: i32) -> f64 {
        let n = x.len();
        let mut total = 0.0;
        for mask in 0u32..(1 << n) {
            let dot: f64 = (0..n)
                .map(|i| if mask >> i & 1 == 1 { -x[i] } else { x[i] })
                .sum();
            total += dot.powi(q);
        }
        total / (1u64 << n) as f64
    }

    #[test]
    fn examples() {
        assert_eq!(rademacher_moment_exact(&[1.0, 1.0], 4).unwrap(), 8.0);
        assert_eq!(brute_force(&[1.0, 1.0], 4), 8.0);
        let mut e1 = vec![0.0; 9];
        e1[0] = 1.0;
        assert_eq!(rademacher_moment_exact(&e1, 4).unwrap(), 1.0);
        assert_eq!(rademacher_moment_exact(&[1.0, 1.0, 1.0], 2).unwrap(), 3.0);
        assert!(rademacher_moment_exact(&[1.0], 3).is_err());
        assert!(rademacher_moment_multinomial(&[1.0], 0).is_err());
    }

    #[test]
    fn enumeration_and_multinomial_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=12 {
            for q in [2u32, 4, 6, 8] {
                let x: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
                let e = rademacher_moment_enumerated(&x, q).unwrap();
                let m = rademacher_moment_multinomial(&x, q).unwrap();
                let b = brute_force(&x, q as i32);
                assert!((e - m).abs() <= 1e-12 * e, "n={n} q={q}: {e} vs {m}");
                assert!((e - b).abs() <= 1e-12 * e);
            }
        }
    }

    #[test]
    fn second_moment_is_squared_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [1, 5, 17, 30] {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let l2sq: f64 = x.iter().map(|v| v * v).sum();
            let m = rademacher_moment_exact(&x, 2).unwrap();
            assert!((m - l2sq).abs() <= 1e-12 * l2sq);
        }
    }

    #[test]
    fn khintchine_examples() {
        let g4 = gaussian_moment(4.0).unwrap();
        let gap = khintchine_gap(&[1.0, 1.0], 4).unwrap();
        let expected = 3f64.powf(0.25) * 2f64.sqrt() - 8f64.powf(0.25);
        assert!((gap - expected).abs() < 1e-12 && (gap - 0.179).abs() < 1e-3);
        let gap = khintchine_gap(&[1.0, 0.0, 0.0], 4).unwrap();
        assert!((gap - (g4 - 1.0)).abs() < 1e-12 && gap > 0.0);
        assert!(khintchine_gap(&[0.0, 0.0], 4).is_err());
        // flat vectors approach the Gaussian constant
        let gaps: Vec<f64> = [4usize, 8, 16, 22]
            .iter()
            .map(|&n| khintchine_gap(&vec![1.0 / (n as f64).sqrt(); n], 4).unwrap())
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
        assert!(gaps[3] < 0.02);
    }

    #[test]
    fn khintchine_holds_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let n = rng.random_range(1..=14);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
            for q in [2, 4, 6] {
                assert!(khintchine_gap(&x, q).unwrap() >= -1e-9);
            }
        }
    }

    #[test]
    fn spread_examples() {
        assert_eq!(spread_moment_ratio(&[1.0, 0.0, 0.0], 1.0).unwrap(), 1.0);
        let s = 0.5f64.sqrt();
        let r = spread_moment_ratio(&[s, s], 1.0).unwrap();
        assert!((r - s).abs() < 1e-15);
        let flat = vec![0.25; 16];
        let r = spread_moment_ratio(&flat, 1.0).unwrap();
        assert!((r - gaussian_moment(1.0).unwrap()).abs() < 0.05);
        assert!(spread_moment_ratio(&flat, 2.0).is_err());
        assert!(spread_moment_ratio(&vec![1.0; 21], 1.0).is_err());
    }

    #[test]
    fn dictator_beats_flat() {
        let mut e1 = vec![0.0; 16];
        e1[0] = 1.0;
        let flat = vec![0.25; 16];
        for r in [1.0, 1.25, 1.5, 1.8] {
            let g = gaussian_moment(r).unwrap();
            let d = spread_moment_ratio(&e1, r).unwrap();
            let f = spread_moment_ratio(&flat, r).unwrap();
            assert!((d - 1.0).abs() < 1e-15);
            assert!(f <= g + 0.05);
            assert!(d > f);
            if r <= 1.5 {
                assert!(d > g + 0.05);
            }
        }
    }
}
