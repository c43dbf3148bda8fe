use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, ExponentPair, NormKind};
use crate::norm::estimate::{witness_ratio, Method, NormEstimate};
use crate::scalar::Scalar;

/// Largest column count the grid oracle accepts.
pub const MAX_GRID_DIM: usize = 3;
/// Number of best grid cells refined by compass search.
const POLISHED_CANDIDATES: usize = 6;
const MIN_STEP: f64 = 1e-14;
const MAX_POLISH_STEPS: usize = 200_000;

/// Brute-force maximiser over the Euclidean unit sphere for at most three
/// columns, parametrised by angles. A uniform grid with `resolution` cells per
/// half-turn locates the maximum, then compass search refines it.
///
/// It shares no code with the ascent heuristic and is used to check it.
pub fn norm_grid_oracle<T: Scalar>(
    a: &DenseMatrix<T>,
    pq: ExponentPair,
    kind: NormKind,
    resolution: usize,
) -> Result<NormEstimate<T>> {
    let n = a.cols();
    if n == 0 || n > MAX_GRID_DIM {
        return Err(Error::domain(format!(
            "grid oracle needs 1..={MAX_GRID_DIM} columns, got {n}"
        )));
    }
    if resolution < 4 {
        return Err(Error::domain("grid resolution must be at least 4"));
    }
    if a.max_abs() == T::zero() {
        return Ok(NormEstimate::zero(n, pq, kind, Method::GridOracle));
    }
    if n == 1 {
        return Ok(NormEstimate::from_witness(
            a,
            pq,
            kind,
            Method::GridOracle,
            vec![T::one()],
        ));
    }
    let f = |angles: &[f64]| -> f64 {
        witness_ratio(a, &point::<T>(angles), pq, NormKind::Counting).as_f64()
    };
    let h = PI / resolution as f64;

    // x and -x agree, so one half of the sphere suffices
    let mut cells: Vec<(f64, Vec<f64>)> = Vec::new();
    if n == 2 {
        for i in 0..resolution {
            let t = [i as f64 * h];
            cells.push((f(&t), t.to_vec()));
        }
    } else {
        for i in 0..=resolution {
            for j in 0..2 * resolution {
                let t = [i as f64 * h, j as f64 * h];
                cells.push((f(&t), t.to_vec()));
            }
        }
    }
    cells.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for (v, t) in cells.into_iter().take(POLISHED_CANDIDATES) {
        let polished = compass_search(&f, t, v, h);
        if polished.0 > best.0 {
            best = polished;
        }
    }
    Ok(NormEstimate::from_witness(
        a,
        pq,
        kind,
        Method::GridOracle,
        point(&best.1),
    ))
}

fn point<T: Scalar>(angles: &[f64]) -> Vec<T> {
    let v = match *angles {
        [t] => vec![t.cos(), t.sin()],
        [t, s] => vec![t.cos(), t.sin() * s.cos(), t.sin() * s.sin()],
        _ => unreachable!(),
    };
    v.into_iter().map(T::of).collect()
}

fn compass_search(
    f: &impl Fn(&[f64]) -> f64,
    mut t: Vec<f64>,
    mut value: f64,
    mut step: f64,
) -> (f64, Vec<f64>) {
    let dirs: Vec<Vec<f64>> = if t.len() == 1 {
        vec![vec![1.0], vec![-1.0]]
    } else {
        let mut d = Vec::new();
        for a in [-1.0, 0.0, 1.0] {
            for b in [-1.0, 0.0, 1.0] {
                if a != 0.0 || b != 0.0 {
                    d.push(vec![a, b]);
                }
            }
        }
        d
    };
    let mut steps = 0;
    while step > MIN_STEP && steps < MAX_POLISH_STEPS {
        steps += 1;
        let mut moved = false;
        for d in &dirs {
            let cand: Vec<f64> = t.iter().zip(d).map(|(x, dx)| x + step * dx).collect();
            let v = f(&cand);
            if v > value {
                value = v;
                t = cand;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (value, t)
}
