//! Acceptance suites. Each runs at fixed seeds and tolerances and returns a
//! [`CriterionResult`]; a suite passes only within its time budget.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::amplify::{tensor_norm_check, OracleBudget};
use crate::embeddings::{
    check_kwise_uniform, derandomized_embedding, gaussian_embedding, isometry_report, kwise_space,
    lp_isometry_report, schechtman_embedding, SchechtmanConfig,
};
use crate::error::Result;
use crate::linalg::{DenseMatrix, Exponent, ExponentPair, NormKind};
use crate::norm::{
    composition_check, norm_exact_dual_signenum, norm_exact_signenum, norm_heuristic, EngineBudget,
    HeuristicConfig, DEFAULT_MAX_ENUM_DIM,
};
use crate::numerics::{
    gaussian_moment, gaussian_moment_quadrature, hardness_factor, khintchine_gap,
    rademacher_moment_enumerated, seeded_rng, spread_moment_ratio, stability_ks_statistic,
    sub_seed,
};
use crate::reduction::{
    build_reduction_matrix, completeness_vector, generate_planted, soundness_estimate,
    ReductionConfig,
};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_secs: f64,
    pub budget_secs: f64,
}

type Check = fn() -> Result<(bool, String)>;

struct Suite {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: Check,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const SUITES: [Suite; 15] = [
    Suite {
        id: 1,
        name: "gamma-values",
        budget: secs(1),
        run: gamma_values,
    },
    Suite {
        id: 2,
        name: "hardness-factor",
        budget: secs(1),
        run: hardness_table,
    },
    Suite {
        id: 3,
        name: "reduction-completeness",
        budget: secs(30),
        run: reduction_completeness,
    },
    Suite {
        id: 4,
        name: "reduction-spectral",
        budget: secs(30),
        run: reduction_spectral,
    },
    Suite {
        id: 5,
        name: "derandomized-identity",
        budget: secs(60),
        run: derandomized_identity,
    },
    Suite {
        id: 6,
        name: "kwise-uniformity",
        budget: secs(60),
        run: kwise_uniformity,
    },
    Suite {
        id: 7,
        name: "gaussian-isometry",
        budget: secs(120),
        run: gaussian_isometry,
    },
    Suite {
        id: 8,
        name: "khintchine",
        budget: secs(30),
        run: khintchine,
    },
    Suite {
        id: 9,
        name: "stable-embedding",
        budget: secs(120),
        run: stable_embedding,
    },
    Suite {
        id: 10,
        name: "stable-sampler",
        budget: secs(60),
        run: stable_sampler,
    },
    Suite {
        id: 11,
        name: "multiplicativity",
        budget: secs(300),
        run: multiplicativity,
    },
    Suite {
        id: 12,
        name: "duality",
        budget: secs(120),
        run: duality,
    },
    Suite {
        id: 13,
        name: "composition",
        budget: secs(60),
        run: composition,
    },
    Suite {
        id: 14,
        name: "dictatorship",
        budget: secs(30),
        run: dictatorship,
    },
    Suite {
        id: 15,
        name: "soundness-direction",
        budget: secs(300),
        run: soundness_direction,
    },
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// Runs one suite by name or number; `None` if there is no such suite.
pub fn run_suite(name: &str) -> Option<CriterionResult> {
    let suite = SUITES
        .iter()
        .find(|s| s.name == name || s.id.to_string() == name)?;
    Some(run(suite))
}

pub fn run_all() -> Vec<CriterionResult> {
    SUITES.iter().map(run).collect()
}

fn run(s: &Suite) -> CriterionResult {
    let start = Instant::now();
    let outcome = (s.run)();
    let elapsed = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = elapsed <= s.budget;
    CriterionResult {
        id: s.id,
        name: s.name,
        passed: ok && in_time,
        detail: if in_time {
            detail
        } else {
            format!("{detail}; over the time budget")
        },
        elapsed_secs: elapsed.as_secs_f64(),
        budget_secs: s.budget.as_secs_f64(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn pair(p: f64, q: f64) -> ExponentPair {
    ExponentPair::from_f64(p, q).expect("valid exponents")
}

fn gamma_values() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for p in [1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 8.0] {
        worst = worst.max(rel(gaussian_moment_quadrature(p)?, gaussian_moment(p)?));
    }
    let exact = [(1.0, (2.0 / PI).sqrt()), (2.0, 1.0), (4.0, 3f64.powf(0.25))];
    let mut worst_exact: f64 = 0.0;
    for (p, v) in exact {
        worst_exact = worst_exact.max((gaussian_moment(p)? - v).abs());
    }
    Ok((
        worst <= 1e-10 && worst_exact <= 1e-12,
        format!("closed form vs quadrature {worst:.1e}, known values {worst_exact:.1e}"),
    ))
}

fn hardness_table() -> Result<(bool, String)> {
    let h = hardness_factor(Exponent::Infinity, Exponent::ONE)?;
    let d = (h - FRAC_PI_2).abs();
    Ok((
        d <= 1e-12,
        format!("factor(inf, 1) = {h:.15}, off by {d:.1e}"),
    ))
}

/// `(V, degree, R, L)` for the `k`-th instance of the reduction suites.
fn reduction_params(k: usize) -> (usize, usize, usize, usize) {
    let v = 2 + k % 5;
    let degree = if v % 2 == 0 && k % 3 == 0 { 3 } else { 2 };
    let r = 2 + (k / 5) % 5;
    let l = 1 + (k / 2) % r;
    (v, degree, r, l)
}

fn reduction_completeness() -> Result<(bool, String)> {
    let (mut fixed, mut sym, mut idem): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut signs_ok = true;
    for k in 0..50 {
        let (v, d, r, l) = reduction_params(k);
        let (inst, labeling) = generate_planted(v, d, r, l, sub_seed(3, k as u64), true)?;
        let out = build_reduction_matrix::<f64>(&inst, &ReductionConfig::default())?;
        let f = completeness_vector::<f64>(&inst, &labeling.expect("satisfiable"))?;
        signs_ok &= f.iter().all(|x| x.abs() == 1.0);
        let a = &out.matrix;
        fixed = fixed.max(
            a.matvec(&f)
                .iter()
                .zip(&f)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
        );
        sym = sym.max(a.symmetry_residual());
        idem = idem.max(a.matmul(a)?.max_abs_diff(a));
    }
    Ok((
        fixed <= 1e-9 && signs_ok && sym <= 1e-8 && idem <= 1e-8,
        format!("50 instances: |Af - f| {fixed:.1e}, symmetry {sym:.1e}, idempotence {idem:.1e}"),
    ))
}

fn reduction_spectral() -> Result<(bool, String)> {
    let (mut worst, mut trace_gap): (f64, f64) = (0.0, 0.0);
    let (mut rank_mismatch, mut nonzero) = (0, 0);
    let pq = ExponentPair::new(Exponent::TWO, Exponent::TWO);
    let cfg = HeuristicConfig::default().with_restarts(4);
    for k in 0..50 {
        let (v, d, r, l) = reduction_params(k);
        let (inst, _) = generate_planted(v, d, r, l, sub_seed(4, k as u64), k % 2 == 0)?;
        let out = build_reduction_matrix::<f64>(&inst, &ReductionConfig::default())?;
        let tr = out.matrix.trace();
        trace_gap = trace_gap.max((tr - tr.round()).abs());
        if tr.round() as usize != v * r - out.constraint_rank
            || out.projector_rank != v * r - out.constraint_rank
        {
            rank_mismatch += 1;
        }
        if out.projector_rank == 0 {
            continue;
        }
        nonzero += 1;
        let e = norm_heuristic(
            &out.matrix,
            pq,
            NormKind::Expectation,
            &cfg.with_seed(k as u64),
        )?;
        worst = worst.max((e.value - 1.0).abs());
    }
    Ok((
        worst <= 1e-6 && rank_mismatch == 0 && trace_gap <= 1e-8,
        format!(
            "{nonzero} nonzero instances: |norm - 1| {worst:.1e}; trace vs exact rank mismatches {rank_mismatch}, \
             trace off integer by {trace_gap:.1e}"
        ),
    ))
}

fn derandomized_identity() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    let mut rng = seeded_rng(5);
    for n in 4..=12 {
        for q in [2usize, 4] {
            let b: DenseMatrix<f64> = derandomized_embedding(n, q)?;
            let m = b.rows() as f64;
            for _ in 0..100 {
                let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                let lhs: f64 = b.matvec(&x).iter().map(|v| v.powi(q as i32)).sum();
                let rhs = m * rademacher_moment_enumerated(&x, q as u32)?;
                worst = worst.max(rel(lhs, rhs));
            }
        }
    }
    Ok((
        worst <= 1e-9,
        format!("worst relative gap {worst:.1e} over 1800 vectors"),
    ))
}

fn kwise_uniformity() -> Result<(bool, String)> {
    let mut parts = Vec::new();
    let mut ok = true;
    for (n, k) in [(4, 2), (8, 4), (10, 4)] {
        let s = kwise_space(n, k)?;
        let c = check_kwise_uniform(&s, k, 6)?;
        ok &= c.exhaustive && c.passed();
        parts.push(format!(
            "({n},{k}): {} vectors, {} subsets, error {}",
            s.size(),
            c.subsets_checked,
            c.max_cell_error
        ));
    }
    Ok((ok, parts.join("; ")))
}

/// Seeds for the randomized embedding suites.
pub const EMBEDDING_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

fn gaussian_isometry() -> Result<(bool, String)> {
    let mut devs = Vec::new();
    for seed in EMBEDDING_SEEDS {
        let b: DenseMatrix<f64> = gaussian_embedding(20, 20_000, seed)?;
        devs.push(isometry_report(&b, 4.0, 1000, sub_seed(seed, 7))?.max_rel_dev);
    }
    let worst = devs.iter().fold(0.0f64, |m, &d| m.max(d));
    Ok((worst <= 0.10, format!("max deviation per seed {devs:.4?}")))
}

fn khintchine() -> Result<(bool, String)> {
    let mut rng = seeded_rng(8);
    let mut worst = f64::INFINITY;
    for t in 0..500 {
        let n = rng.random_range(1..=12);
        let q = [2, 4, 6][t % 3];
        let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        worst = worst.min(khintchine_gap(&x, q)?);
    }
    let flat = vec![0.25; 16];
    let flat_gap = khintchine_gap(&flat, 4)?;
    let bound = 0.08 * gaussian_moment(4.0)?;
    Ok((
        worst >= -1e-9 && flat_gap < bound,
        format!("smallest gap {worst:.2e}; flat n=16 gap {flat_gap:.4} vs bound {bound:.4}"),
    ))
}

fn stable_embedding() -> Result<(bool, String)> {
    let (p, q, eps) = (1.5, 1.2, 0.2);
    let mut parts = Vec::new();
    let mut ok = true;
    for seed in EMBEDDING_SEEDS {
        let emb = schechtman_embedding::<f64>(10, p, q, eps, seed, &SchechtmanConfig::default())?;
        let r = lp_isometry_report(&emb.matrix, p, q, 200, sub_seed(seed, 9))?;
        ok &= r.max_rel_dev <= 0.25 && emb.truncated_fraction <= eps / 10.0;
        parts.push(format!("m={} dev={:.3}", emb.m, r.max_rel_dev));
    }
    Ok((ok, parts.join("; ")))
}

fn stable_sampler() -> Result<(bool, String)> {
    let mut stats = Vec::new();
    for (i, p) in [0.8, 1.2, 1.5, 1.8].into_iter().enumerate() {
        stats.push(stability_ks_statistic(p, 100_000, 8, 1000 + i as u64)?);
    }
    let worst = stats.iter().fold(0.0f64, |m, &d| m.max(d));
    Ok((worst <= 0.02, format!("KS statistics {stats:.4?}")))
}

fn random_square(rng: &mut impl Rng, n: usize) -> DenseMatrix<f64> {
    DenseMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0))
}

fn multiplicativity() -> Result<(bool, String)> {
    let budget = OracleBudget::default();
    let mut parts = Vec::new();
    let mut ok = true;
    for (p, q, tol) in [
        (1.5, 3.0, 1e-3),
        (2.0, 4.0, 1e-3),
        (1.0, 2.0, 1e-3),
        (2.0, 2.0, 1e-9),
    ] {
        let mut rng = seeded_rng(11);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let (a, b) = (random_square(&mut rng, 2), random_square(&mut rng, 2));
            let run = tensor_norm_check(&a, &b, pair(p, q), &budget)?;
            worst = worst.max(run.rel_gap);
            ok &= run.holds(tol);
            if tol < 1e-6 {
                ok &= run.all_exact;
            }
        }
        parts.push(format!("({p},{q}) worst gap {worst:.1e}"));
    }
    Ok((ok, parts.join("; ")))
}

fn duality() -> Result<(bool, String)> {
    let mut rng = seeded_rng(12);
    let mut exact_worst: f64 = 0.0;
    for _ in 0..200 {
        let (rows, cols) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let a = DenseMatrix::<f64>::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0));
        let q = [1.0, 1.25, 1.5, 2.0, 3.0, 4.0, f64::INFINITY][rng.random_range(0..7)];
        let primal = norm_exact_signenum(
            &a,
            pair(f64::INFINITY, q),
            NormKind::Counting,
            DEFAULT_MAX_ENUM_DIM,
        )?;
        let dual_pq = pair(f64::INFINITY, q).dual();
        let dual = norm_exact_dual_signenum(
            &a.transpose(),
            dual_pq,
            NormKind::Counting,
            DEFAULT_MAX_ENUM_DIM,
        )?;
        exact_worst = exact_worst.max(rel(dual.value, primal.value));
    }
    let mut heur_worst: f64 = 0.0;
    let cfg = HeuristicConfig::default();
    for k in 0..50 {
        let a = random_square(&mut rng, 4);
        let cfg = cfg.with_seed(k);
        let primal = norm_heuristic(&a, pair(f64::INFINITY, 1.5), NormKind::Counting, &cfg)?;
        let dual = norm_heuristic(&a.transpose(), pair(3.0, 1.0), NormKind::Counting, &cfg)?;
        heur_worst = heur_worst.max(rel(dual.value, primal.value));
    }
    Ok((
        exact_worst <= 1e-9 && heur_worst <= 1e-3,
        format!("exact engines {exact_worst:.1e} over 200 cases; heuristics {heur_worst:.1e} over 50 cases"),
    ))
}

fn composition() -> Result<(bool, String)> {
    let mut rng = seeded_rng(13);
    let budget = EngineBudget::default();
    let mut worst = f64::INFINITY;
    let inner = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];
    for _ in 0..200 {
        let (m, k, n) = (
            rng.random_range(1..=5),
            rng.random_range(1..=5),
            rng.random_range(1..=5),
        );
        let b = DenseMatrix::<f64>::from_fn(m, k, |_, _| rng.random_range(-1.0..1.0));
        let c = DenseMatrix::<f64>::from_fn(k, n, |_, _| rng.random_range(-1.0..1.0));
        let r = Exponent::new(inner[rng.random_range(0..inner.len())])?;
        let rep = composition_check(&b, &c, Exponent::Infinity, r, Exponent::ONE, &budget)?;
        worst = worst.min(rep.slack / rep.rhs.max(1e-300));
    }
    Ok((
        worst >= -1e-9,
        format!("smallest relative slack {worst:.2e} over 200 triples"),
    ))
}

fn dictatorship() -> Result<(bool, String)> {
    let mut e1 = vec![0.0; 16];
    e1[0] = 1.0;
    let flat = vec![0.25; 16];
    let mut ok = true;
    let mut parts = Vec::new();
    for r in [1.0, 1.5, 1.8] {
        let d = spread_moment_ratio(&e1, r)?;
        let f = spread_moment_ratio(&flat, r)?;
        let g = gaussian_moment(r)?;
        ok &= (d - 1.0).abs() <= 1e-12 && f <= g + 0.05;
        parts.push(format!(
            "r={r}: dictator {d:.12}, flat {f:.4}, gamma {g:.4}"
        ));
    }
    Ok((ok, parts.join("; ")))
}

/// Instance shape for the paired soundness comparison.
pub const SOUNDNESS_SHAPE: (usize, usize, usize, usize) = (6, 3, 6, 4);

fn soundness_direction() -> Result<(bool, String)> {
    let (v, d, r, l) = SOUNDNESS_SHAPE;
    let mut complete = true;
    let mut smaller = 0;
    let mut parts = Vec::new();
    for seed in 0..5u64 {
        let cfg = HeuristicConfig::default().with_seed(seed);
        let (good, _) = generate_planted(v, d, r, l, seed, true)?;
        let (bad, _) = generate_planted(v, d, r, l, seed, false)?;
        let g = soundness_estimate(
            &build_reduction_matrix::<f64>(&good, &ReductionConfig::default())?,
            1.0,
            &cfg,
        )?;
        let b = soundness_estimate(
            &build_reduction_matrix::<f64>(&bad, &ReductionConfig::default())?,
            1.0,
            &cfg,
        )?;
        complete &= g.norm_2_to_r >= 1.0 - 1e-6;
        if b.norm_2_to_r < g.norm_2_to_r {
            smaller += 1;
        }
        parts.push(format!("{:.4}/{:.4}", g.norm_2_to_r, b.norm_2_to_r));
    }
    Ok((
        complete && smaller >= 4,
        format!(
            "satisfiable/scrambled 2->1: {}; scrambled smaller on {smaller}/5",
            parts.join(" ")
        ),
    ))
}
