//! Kronecker powers and multiplicativity of `p→q` norms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kron_capped, kron_power, kron_vec, DenseMatrix, ExponentPair, NormKind};
use crate::norm::{
    estimate_norm_seeded, norm_grid_oracle, EngineBudget, Method, NormEstimate, MAX_GRID_DIM,
};
use crate::scalar::Scalar;

/// Limits for oracle-grade estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleBudget {
    pub engine: EngineBudget,
    /// Grid cells per half-turn for matrices with at most three columns.
    pub grid_resolution: usize,
    pub max_entries: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            engine: EngineBudget::default(),
            grid_resolution: 512,
            max_entries: crate::linalg::DEFAULT_MAX_ENTRIES,
        }
    }
}

/// Exact route when one exists, the grid oracle for at most three columns,
/// otherwise the seeded heuristic.
pub fn oracle_estimate<T: Scalar>(
    a: &DenseMatrix<T>,
    pq: ExponentPair,
    budget: &OracleBudget,
    starts: &[Vec<T>],
) -> Result<NormEstimate<T>> {
    let e = estimate_norm_seeded(a, pq, NormKind::Counting, &budget.engine, starts)?;
    if e.method == Method::HeuristicLb && a.cols() <= MAX_GRID_DIM {
        let g = norm_grid_oracle(a, pq, NormKind::Counting, budget.grid_resolution)?;
        return Ok(if g.value >= e.value { g } else { e });
    }
    Ok(e)
}

#[derive(Debug, Clone, Serialize)]
pub struct AmplificationRun {
    pub pq: ExponentPair,
    pub norm_a: f64,
    pub norm_b: f64,
    pub norm_kron: f64,
    pub method_a: Method,
    pub method_b: Method,
    pub method_kron: Method,
    /// `‖(A⊗B)(x⊗y)‖_q / ‖x⊗y‖_p` for the factor witnesses.
    pub product_witness_value: f64,
    /// `|‖A⊗B‖ − ‖A‖‖B‖| / (‖A‖‖B‖)`; only an equality claim when `p <= q`.
    pub rel_gap: f64,
    /// Whether `p <= q`, where the upper bound holds as well.
    pub equality_expected: bool,
    pub all_exact: bool,
}

impl AmplificationRun {
    pub fn product(&self) -> f64 {
        self.norm_a * self.norm_b
    }

    /// Both directions when `p <= q`, the product-witness direction otherwise.
    pub fn holds(&self, tol: f64) -> bool {
        let lower = self.norm_kron >= self.product() * (1.0 - tol);
        lower && (!self.equality_expected || self.rel_gap <= tol)
    }
}

/// Compares `‖A⊗B‖_{p→q}` with `‖A‖_{p→q}·‖B‖_{p→q}`. The product norm's
/// heuristic is started from the tensor product of the factor witnesses.
pub fn tensor_norm_check<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
    pq: ExponentPair,
    budget: &OracleBudget,
) -> Result<AmplificationRun> {
    let ea = oracle_estimate(a, pq, budget, &[])?;
    let eb = oracle_estimate(b, pq, budget, &[])?;
    let ab = kron_capped(a, b, budget.max_entries)?;
    let start = kron_vec(&ea.witness, &eb.witness);
    let ekron = oracle_estimate(&ab, pq, budget, std::slice::from_ref(&start))?;
    let product_witness_value =
        crate::norm::witness_ratio(&ab, &start, pq, NormKind::Counting).as_f64();
    let (na, nb, nk) = (ea.value.as_f64(), eb.value.as_f64(), ekron.value.as_f64());
    let product = na * nb;
    Ok(AmplificationRun {
        pq,
        norm_a: na,
        norm_b: nb,
        norm_kron: nk,
        method_a: ea.method,
        method_b: eb.method,
        method_kron: ekron.method,
        product_witness_value,
        rel_gap: if product == 0.0 {
            nk
        } else {
            (nk - product).abs() / product
        },
        equality_expected: pq.p.value() <= pq.q.value(),
        all_exact: ea.method.is_exact() && eb.method.is_exact() && ekron.method.is_exact(),
    })
}

/// `A^{⊗k}` with the pairing of [`crate::linalg::kron`].
pub fn tensor_power<T: Scalar>(
    a: &DenseMatrix<T>,
    k: usize,
    max_entries: usize,
) -> Result<DenseMatrix<T>> {
    kron_power(a, k, max_entries)
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerCheck {
    pub k: usize,
    pub base: f64,
    pub power: f64,
    /// `|ln ‖A^{⊗k}‖ − k ln ‖A‖|`.
    pub log_gap: f64,
}

/// Estimates `‖A^{⊗k}‖` starting from the `k`-fold product of the base
/// witness and compares with `‖A‖^k` in the log domain.
pub fn tensor_power_check<T: Scalar>(
    a: &DenseMatrix<T>,
    pq: ExponentPair,
    k: usize,
    budget: &OracleBudget,
) -> Result<PowerCheck> {
    let base = oracle_estimate(a, pq, budget, &[])?;
    let (power, _) = power_estimate(a, &base, pq, k, budget)?;
    let (b, p) = (base.value.as_f64(), power.value.as_f64());
    Ok(PowerCheck {
        k,
        base: b,
        power: p,
        log_gap: (p.ln() - k as f64 * b.ln()).abs(),
    })
}

fn power_estimate<T: Scalar>(
    a: &DenseMatrix<T>,
    base: &NormEstimate<T>,
    pq: ExponentPair,
    k: usize,
    budget: &OracleBudget,
) -> Result<(NormEstimate<T>, DenseMatrix<T>)> {
    let ak = tensor_power(a, k, budget.max_entries)?;
    let mut w = base.witness.clone();
    for _ in 1..k {
        w = kron_vec(&w, &base.witness);
    }
    let e = oracle_estimate(&ak, pq, budget, &[w])?;
    Ok((e, ak))
}

#[derive(Debug, Clone, Serialize)]
pub struct GapRow {
    pub k: usize,
    pub good: f64,
    pub bad: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapGrowth {
    pub rows: Vec<GapRow>,
    /// Least-squares slope of `ln ratio` against `k`.
    pub log_rate: f64,
    /// `ratio` is non-decreasing in `k`.
    pub monotone: bool,
}

/// Ratio of the norms of `A_good^{⊗k}` and `A_bad^{⊗k}` for `k = 1..=k_max`.
pub fn gap_growth_report<T: Scalar>(
    good: &DenseMatrix<T>,
    bad: &DenseMatrix<T>,
    pq: ExponentPair,
    k_max: usize,
    budget: &OracleBudget,
) -> Result<GapGrowth> {
    if k_max == 0 {
        return Err(Error::domain("k_max must be at least 1"));
    }
    let base_good = oracle_estimate(good, pq, budget, &[])?;
    let base_bad = oracle_estimate(bad, pq, budget, &[])?;
    let mut rows = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let g = power_estimate(good, &base_good, pq, k, budget)?
            .0
            .value
            .as_f64();
        let b = power_estimate(bad, &base_bad, pq, k, budget)?
            .0
            .value
            .as_f64();
        rows.push(GapRow {
            k,
            good: g,
            bad: b,
            ratio: g / b,
        });
    }
    let monotone = rows
        .windows(2)
        .all(|w| w[1].ratio >= w[0].ratio * (1.0 - 1e-9));
    let log_rate = slope(rows.iter().map(|r| (r.k as f64, r.ratio.ln())));
    Ok(GapGrowth {
        rows,
        log_rate,
        monotone,
    })
}

fn slope(points: impl Iterator<Item = (f64, f64)>) -> f64 {
    let pts: Vec<(f64, f64)> = points.collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return pts.first().map_or(0.0, |&(x, y)| y / x);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
