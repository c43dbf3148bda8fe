use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{decomp, DenseMatrix, Exponent, ExponentPair, NormKind};
use crate::norm::{norm_heuristic_seeded, HeuristicConfig};
use rand::Rng;

use crate::numerics::{gaussian_moment, seeded_rng, sub_seed};
use crate::reduction::instance::{LabelCoverInstance, Labeling};
use crate::scalar::Scalar;

/// Default cap on `|V|·2^R`.
pub const DEFAULT_MAX_DIM: usize = 8192;
/// Singular values below this fraction of the largest are treated as zero.
pub const DEFAULT_RANK_CUTOFF: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReductionConfig {
    pub max_dim: usize,
    pub rank_cutoff: f64,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        Self {
            max_dim: DEFAULT_MAX_DIM,
            rank_cutoff: DEFAULT_RANK_CUTOFF,
        }
    }
}

/// The reduction operator in the standard basis of functions on
/// `V × {±1}^R`. Row `v·2^R + b` is the point `(v, x)` where bit `i` of `b`
/// is set exactly when `x_i = -1`.
#[derive(Debug, Clone)]
pub struct ReductionOutput<T> {
    pub matrix: DenseMatrix<T>,
    pub vertices: usize,
    pub big_labels: usize,
    /// Rank of the projector on the linear coefficients.
    pub projector_rank: usize,
    /// Rank of the constraint matrix from exact rational elimination.
    pub constraint_rank: usize,
    pub instance: LabelCoverInstance,
}

impl<T> ReductionOutput<T> {
    pub fn dim(&self) -> usize {
        self.vertices << self.big_labels
    }

    pub fn index(&self, v: usize, x: &[i8]) -> usize {
        let bits = x.iter().enumerate().fold(
            0usize,
            |acc, (i, &s)| if s < 0 { acc | 1 << i } else { acc },
        );
        (v << self.big_labels) + bits
    }

    /// Inverse of [`index`](Self::index).
    pub fn point(&self, row: usize) -> (usize, Vec<i8>) {
        let bits = row & ((1 << self.big_labels) - 1);
        let x = (0..self.big_labels)
            .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
            .collect();
        (row >> self.big_labels, x)
    }
}

/// Value of `x_i` at hypercube point `b`.
fn chi(b: usize, i: usize) -> f64 {
    if b >> i & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Constraint rows over the linear coefficients `(v, j)`, one per edge and
/// small label: the preimage sums at the two endpoints must agree.
pub fn constraint_matrix(inst: &LabelCoverInstance) -> Vec<Vec<i64>> {
    let r = inst.big_labels();
    let mut rows = Vec::with_capacity(inst.edges().len() * inst.small_labels());
    for e in inst.edges() {
        for i in 0..inst.small_labels() {
            let mut row = vec![0i64; inst.vertices() * r];
            for j in 0..r {
                if e.pi_u[j] == i {
                    row[e.u * r + j] += 1;
                }
                if e.pi_v[j] == i {
                    row[e.v * r + j] -= 1;
                }
            }
            rows.push(row);
        }
    }
    rows
}

pub fn build_reduction_matrix<T: Scalar>(
    inst: &LabelCoverInstance,
    cfg: &ReductionConfig,
) -> Result<ReductionOutput<T>> {
    let (nv, r) = (inst.vertices(), inst.big_labels());
    let dim = (r < 32)
        .then(|| nv.checked_mul(1usize << r))
        .flatten()
        .filter(|&d| d <= cfg.max_dim)
        .ok_or_else(|| {
            Error::resource(format!(
                "reduction dimension |V|*2^R exceeds the cap {} (V = {nv}, R = {r})",
                cfg.max_dim
            ))
        })?;
    let rows = constraint_matrix(inst);
    let vr = nv * r;
    let (proj, rank) = if rows.is_empty() {
        (DenseMatrix::identity(vr), 0)
    } else {
        let c = DenseMatrix::<f64>::from_fn(rows.len(), vr, |i, j| rows[i][j] as f64);
        decomp::null_space_projector(&c, cfg.rank_cutoff)
    };
    let constraint_rank = exact_constraint_rank(&rows);

    // block (v, w) is 2^{-R} X P_{vw} X^T with X the 2^R × R sign matrix
    let cube = 1usize << r;
    let weight = 1.0 / cube as f64;
    let mut a = DenseMatrix::<T>::zeros(dim, dim);
    let mut px = vec![0.0; r * cube];
    for v in 0..nv {
        for w in 0..nv {
            // px[i][y] = sum_j P[(v,i),(w,j)] y_j
            let mut nonzero = false;
            for i in 0..r {
                for y in 0..cube {
                    let s: f64 = (0..r)
                        .map(|j| proj[(v * r + i, w * r + j)] * chi(y, j))
                        .sum();
                    px[i * cube + y] = s;
                    nonzero |= s != 0.0;
                }
            }
            if !nonzero {
                continue;
            }
            for x in 0..cube {
                for y in 0..cube {
                    let s: f64 = (0..r).map(|i| chi(x, i) * px[i * cube + y]).sum();
                    a[(v * cube + x, w * cube + y)] = T::of(weight * s);
                }
            }
        }
    }
    Ok(ReductionOutput {
        matrix: a,
        vertices: nv,
        big_labels: r,
        projector_rank: vr - rank,
        constraint_rank,
        instance: inst.clone(),
    })
}

/// The vector `f(v, x) = x_{ℓ(v)}`.
pub fn completeness_vector<T: Scalar>(
    inst: &LabelCoverInstance,
    labeling: &Labeling,
) -> Result<Vec<T>> {
    inst.check_labeling(labeling)?;
    let r = inst.big_labels();
    let cube = 1usize << r;
    Ok((0..inst.vertices() * cube)
        .map(|row| T::of(chi(row % cube, labeling.label(row / cube))))
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct SoundnessEstimate {
    /// Lower bound on `‖A‖_{2→r}` with expectation norms on both sides.
    pub norm_2_to_r: f64,
    /// `norm_2_to_r - γ_r`.
    pub gamma_gap: f64,
}

/// Rounds of dictator rounding after the first ascent.
const ROUNDING_PASSES: usize = 3;
/// Labelings are enumerated exhaustively up to this many.
const MAX_ENUMERATED_LABELINGS: usize = 1 << 20;
/// Labelings with the most satisfied edges used as starts.
const LABELING_STARTS: usize = 8;

/// Heuristic lower bound on the expectation-norm `‖A‖_{2→r}` for `1 <= r < 2`.
///
/// The ascent is started from the image of every single-coordinate function
/// `(v, x) ↦ x_i` and of labeling functions `(v, x) ↦ x_{ℓ(v)}` for the
/// labelings satisfying the most edges (all labelings when there are few,
/// greedy local search from `cfg.restarts` random ones otherwise). The best
/// witness is then rounded to one label per vertex, its dominant linear
/// coefficient, and the ascent restarted from the rounded function.
pub fn soundness_estimate<T: Scalar>(
    out: &ReductionOutput<T>,
    r: f64,
    cfg: &HeuristicConfig,
) -> Result<SoundnessEstimate> {
    if !(1.0..2.0).contains(&r) {
        return Err(Error::domain(format!(
            "soundness needs 1 <= r < 2, got {r}"
        )));
    }
    let pq = ExponentPair::new(Exponent::TWO, Exponent::new(r)?);
    let (nv, nr) = (out.vertices, out.big_labels);
    let mut labelings: Vec<Vec<(usize, T)>> = (0..nv)
        .flat_map(|v| (0..nr).map(move |i| (v, i)))
        .map(|(v, i)| vec![(v * nr + i, T::one())])
        .collect();
    labelings.extend(
        best_labelings(&out.instance, cfg.restarts, cfg.seed)
            .into_iter()
            .map(|l| (0..nv).map(|v| (v * nr + l.label(v), T::one())).collect()),
    );
    let starts: Vec<Vec<T>> = labelings
        .iter()
        .map(|coeffs| out.matrix.matvec(&linear_function(out, coeffs)))
        .filter(|s| s.iter().any(|&t| t != T::zero()))
        .collect();
    let mut est = norm_heuristic_seeded(&out.matrix, pq, NormKind::Expectation, cfg, &starts)?;
    let quick = cfg.with_restarts(0);
    for _ in 0..ROUNDING_PASSES {
        if est.degenerate {
            break;
        }
        let rounded = out
            .matrix
            .matvec(&linear_function(out, &round_to_labels(out, &est.witness)));
        let next = norm_heuristic_seeded(
            &out.matrix,
            pq,
            NormKind::Expectation,
            &quick,
            &[est.witness.clone(), rounded],
        )?;
        if !(next.value > est.value) {
            break;
        }
        est = next;
    }
    let value = est.value.as_f64();
    Ok(SoundnessEstimate {
        norm_2_to_r: value,
        gamma_gap: value - gaussian_moment(r)?,
    })
}

/// Up to [`LABELING_STARTS`] labelings with the most satisfied edges,
/// best first, earliest found on ties.
fn best_labelings(inst: &LabelCoverInstance, restarts: usize, seed: u64) -> Vec<Labeling> {
    let (nv, nr) = (inst.vertices(), inst.big_labels());
    let mut found: Vec<(usize, Vec<usize>)> = Vec::new();
    let total = (0..nv).try_fold(1usize, |acc, _| {
        acc.checked_mul(nr)
            .filter(|&t| t <= MAX_ENUMERATED_LABELINGS)
    });
    if let Some(total) = total {
        let mut labels = vec![0usize; nv];
        for k in 0..total {
            let mut rest = k;
            for l in labels.iter_mut() {
                *l = rest % nr;
                rest /= nr;
            }
            found.push((satisfied(inst, &labels), labels.clone()));
        }
    } else {
        let mut rng = seeded_rng(sub_seed(seed, u64::MAX - 1));
        for _ in 0..restarts.max(1) {
            let mut labels: Vec<usize> = (0..nv).map(|_| rng.random_range(0..nr)).collect();
            let mut score = satisfied(inst, &labels);
            loop {
                let mut improved = false;
                for v in 0..nv {
                    let keep = labels[v];
                    for cand in 0..nr {
                        labels[v] = cand;
                        let s = satisfied(inst, &labels);
                        if s > score {
                            score = s;
                            improved = true;
                            break;
                        }
                        labels[v] = keep;
                    }
                }
                if !improved {
                    break;
                }
            }
            found.push((score, labels));
        }
    }
    // stable sort keeps discovery order among ties
    found.sort_by(|a, b| b.0.cmp(&a.0));
    found.dedup_by(|a, b| a.1 == b.1);
    found
        .into_iter()
        .take(LABELING_STARTS)
        .map(|(_, l)| Labeling::new(l))
        .collect()
}

fn satisfied(inst: &LabelCoverInstance, labels: &[usize]) -> usize {
    inst.edges()
        .iter()
        .filter(|e| e.pi_u[labels[e.u]] == e.pi_v[labels[e.v]])
        .count()
}

/// `Σ c·x_i` over the given `(v·R + i, c)` coefficients.
fn linear_function<T: Scalar>(out: &ReductionOutput<T>, coeffs: &[(usize, T)]) -> Vec<T> {
    let (nr, cube) = (out.big_labels, 1usize << out.big_labels);
    let mut f = vec![T::zero(); out.dim()];
    for &(k, c) in coeffs {
        let (v, i) = (k / nr, k % nr);
        for x in 0..cube {
            f[v * cube + x] += c * T::of(chi(x, i));
        }
    }
    f
}

/// Per vertex, the label with the largest linear coefficient, keeping its sign.
fn round_to_labels<T: Scalar>(out: &ReductionOutput<T>, f: &[T]) -> Vec<(usize, T)> {
    let (nr, cube) = (out.big_labels, 1usize << out.big_labels);
    (0..out.vertices)
        .map(|v| {
            let coef = |i: usize| {
                (0..cube)
                    .map(|x| f[v * cube + x] * T::of(chi(x, i)))
                    .sum::<T>()
            };
            let best = (0..nr)
                .max_by(|&a, &b| {
                    coef(a)
                        .abs()
                        .partial_cmp(&coef(b).abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(0);
            let c = coef(best);
            (
                v * nr + best,
                if c < T::zero() { -T::one() } else { T::one() },
            )
        })
        .collect()
}

fn exact_constraint_rank(rows: &[Vec<i64>]) -> usize {
    let exact: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    decomp::exact_rank(exact)
}

/// The partial Fourier transform `F` (`V·R × V·2^R`, taking linear
/// coefficients) and its inverse on linear functions `G` (`V·2^R × V·R`).
pub fn fourier_pair<T: Scalar>(
    vertices: usize,
    big_labels: usize,
) -> (DenseMatrix<T>, DenseMatrix<T>) {
    let cube = 1usize << big_labels;
    let weight = 1.0 / cube as f64;
    let f = DenseMatrix::from_fn(vertices * big_labels, vertices * cube, |row, col| {
        let (v, i) = (row / big_labels, row % big_labels);
        if col / cube == v {
            T::of(weight * chi(col % cube, i))
        } else {
            T::zero()
        }
    });
    let g = DenseMatrix::from_fn(vertices * cube, vertices * big_labels, |row, col| {
        let (v, i) = (col / big_labels, col % big_labels);
        if row / cube == v {
            T::of(chi(row % cube, i))
        } else {
            T::zero()
        }
    });
    (f, g)
}
