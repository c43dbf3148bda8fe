//! Absolute moments of the standard Gaussian, `γ_p = (E|g|^p)^{1/p}`.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Exponent;
use crate::numerics::quadrature;

/// Upper end of the admissible exponent range (keeps `Γ((p+1)/2)` tame).
pub const MAX_MOMENT_EXPONENT: f64 = 64.0;

/// `γ_p` tagged with its exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaValue {
    pub p: f64,
    pub value: f64,
}

impl GammaValue {
    pub fn new(p: f64) -> Result<Self> {
        Ok(Self {
            p,
            value: gaussian_moment(p)?,
        })
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if (1.0..=MAX_MOMENT_EXPONENT).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "gaussian moment exponent must lie in [1, {MAX_MOMENT_EXPONENT}], got {p}"
        )))
    }
}

/// `γ_p = (2^{p/2} Γ((p+1)/2) / √π)^{1/p}`, evaluated in the log domain.
pub fn gaussian_moment(p: f64) -> Result<f64> {
    check_exponent(p)?;
    if p == 2.0 {
        return Ok(1.0);
    }
    let ln_moment = 0.5 * p * LN_2 + libm::lgamma(0.5 * (p + 1.0)) - 0.5 * PI.ln();
    Ok((ln_moment / p).exp())
}

/// `γ_p` by adaptive quadrature of `2∫_0^∞ t^p φ(t) dt`. Independent of the
/// Gamma-function route; used to cross-check it.
pub fn gaussian_moment_quadrature(p: f64) -> Result<f64> {
    check_exponent(p)?;
    let norm = (2.0 / PI).sqrt();
    // integrand peaks at √p and has Gaussian fall-off beyond it
    let upper = p.sqrt() + 40.0;
    let q = quadrature::integrate(
        |t| {
            if t == 0.0 {
                0.0
            } else {
                norm * (p * t.ln() - 0.5 * t * t).exp()
            }
        },
        0.0,
        upper,
        0.0,
        1e-15,
        4000,
    );
    Ok(q.value.powf(1.0 / p))
}

/// NP-hardness factor `1/(γ_{p*} γ_q)` for the regime `p ≥ 2 ≥ q`.
pub fn hardness_factor(p: Exponent, q: Exponent) -> Result<f64> {
    if p.value() < 2.0 || q.value() > 2.0 {
        return Err(Error::domain(format!(
            "hardness factor is defined for p >= 2 >= q, got p={p}, q={q}"
        )));
    }
    let p_dual = p.dual().value();
    Ok(1.0 / (gaussian_moment(p_dual)? * gaussian_moment(q.value())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        assert_eq!(gaussian_moment(2.0).unwrap(), 1.0);
        assert!((gaussian_moment(1.0).unwrap() - (2.0 / PI).sqrt()).abs() < 1e-15);
        assert!((gaussian_moment(4.0).unwrap() - 3f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn quadrature_oracle_values() {
        // E|g| and E g^4 computed by quadrature alone
        let g1 = gaussian_moment_quadrature(1.0).unwrap();
        assert!((g1 - 0.797_884_560_802_865_4).abs() < 1e-12, "{g1}");
        let g4 = gaussian_moment_quadrature(4.0).unwrap();
        assert!((g4.powi(4) - 3.0).abs() < 1e-11, "{g4}");
    }

    #[test]
    fn routes_agree() {
        for p in [1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 8.0, 4.0 / 3.0, 17.3, 64.0] {
            let a = gaussian_moment(p).unwrap();
            let b = gaussian_moment_quadrature(p).unwrap();
            assert!((a - b).abs() <= 1e-10 * a, "p={p}: {a} vs {b}");
        }
    }

    #[test]
    fn monotone_and_straddles_one() {
        let grid: Vec<f64> = (0..=126).map(|k| 1.0 + 0.5 * k as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&p| gaussian_moment(p).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] < w[1]));
        for (&p, &g) in grid.iter().zip(&vals) {
            if p < 2.0 {
                assert!(g < 1.0);
            } else if p > 2.0 {
                assert!(g > 1.0);
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(gaussian_moment(0.5).is_err());
        assert!(gaussian_moment(65.0).is_err());
        assert!(gaussian_moment(f64::NAN).is_err());
        assert!(hardness_factor(Exponent::Finite(1.5), Exponent::ONE).is_err());
        assert!(hardness_factor(Exponent::Infinity, Exponent::Finite(3.0)).is_err());
    }

    #[test]
    fn hardness_examples() {
        let f = hardness_factor(Exponent::Infinity, Exponent::ONE).unwrap();
        assert!((f - PI / 2.0).abs() < 1e-12);
        assert_eq!(hardness_factor(Exponent::TWO, Exponent::TWO).unwrap(), 1.0);
        // p = 4 → p* = 4/3; reference value from quadrature only
        let f = hardness_factor(Exponent::Finite(4.0), Exponent::TWO).unwrap();
        let oracle = 1.0 / gaussian_moment_quadrature(4.0 / 3.0).unwrap();
        assert!((f - oracle).abs() < 1e-10 * oracle);
        assert!(f > 1.0);
    }
}
