//! Recovering `d = min(m, n)`-dimensional hyperbit vectors from a Gram matrix.

use nalgebra::DMatrix;

use super::ascent::{dot, GramSolution};
use super::{GammaVector, HyperbitStrategy};
use crate::error::{Error, Result};
use crate::game::GameMatrix;

/// Pivots at or below this are treated as zero rank.
pub const PIVOT_TOLERANCE: f64 = 1e-10;

/// Extraction fails if the recovered vectors miss a Gram entry by more.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-6;

/// Pivoted Cholesky of a positive semidefinite matrix.
///
/// Returns one row vector per input index such that `v_i . v_j = a_ij` on
/// the numerically nonzero part; vectors have length `a.nrows()` and are
/// zero past the detected rank.
pub fn pivoted_cholesky(a: &DMatrix<f64>, tol: f64) -> (Vec<Vec<f64>>, usize) {
    let k = a.nrows();
    let mut work = a.clone();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut l = DMatrix::<f64>::zeros(k, k);
    let mut rank = 0;
    for j in 0..k {
        // first index wins ties so the factor is deterministic
        let (p, pivot) = (j + 1..k).fold((j, work[(j, j)]), |best, i| {
            if work[(i, i)] > best.1 {
                (i, work[(i, i)])
            } else {
                best
            }
        });
        if pivot <= tol {
            break;
        }
        if p != j {
            work.swap_rows(p, j);
            work.swap_columns(p, j);
            l.swap_rows(p, j);
            perm.swap(p, j);
        }
        let d = work[(j, j)].sqrt();
        l[(j, j)] = d;
        for i in j + 1..k {
            l[(i, j)] = work[(i, j)] / d;
        }
        for i in j + 1..k {
            for c in j + 1..=i {
                let v = work[(i, c)] - l[(i, j)] * l[(c, j)];
                work[(i, c)] = v;
                work[(c, i)] = v;
            }
        }
        rank += 1;
    }
    let mut rows = vec![Vec::new(); k];
    for (pos, &orig) in perm.iter().enumerate() {
        rows[orig] = l.row(pos).iter().copied().collect();
    }
    (rows, rank)
}

fn unit_or_basis(mut v: Vec<f64>) -> Vec<f64> {
    let norm = dot(&v, &v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|c| *c /= norm);
    } else if !v.is_empty() {
        v[0] = 1.0;
    }
    v
}

/// Builds the hyperbit strategy for `gamma` from the Gram matrix of its
/// subproblem. The smaller of the two diagonal blocks is factorized and the
/// other side follows from the best-response formula, giving vectors of
/// dimension `min(m, n)`.
pub fn extract_vectors(
    g: &GramSolution,
    gamma: &GammaVector,
    c: &GameMatrix,
) -> Result<HyperbitStrategy> {
    let hyper_cols = gamma.hyperbit_columns();
    let (m, n) = (c.rows(), hyper_cols.len());
    if g.m != m || g.n != n {
        return Err(Error::DimensionMismatch {
            left: "gram blocks",
            left_rows: g.m,
            left_cols: g.n,
            right: "game/gamma",
            right_rows: m,
            right_cols: n,
        });
    }
    let d = m.min(n);
    let mut x = vec![Vec::new(); m];
    let mut y = vec![vec![0.0; d]; c.cols()];

    if m <= n {
        let (rows, _) = pivoted_cholesky(&g.xx_block(), PIVOT_TOLERANCE);
        for (s, row) in rows.into_iter().enumerate() {
            x[s] = unit_or_basis(row);
        }
        for &t in &hyper_cols {
            let mut v = vec![0.0; d];
            for (s, xs) in x.iter().enumerate() {
                let cst = c.get(s, t);
                v.iter_mut().zip(xs).for_each(|(a, b)| *a += cst * b);
            }
            y[t] = unit_or_basis(v);
        }
    } else {
        let (rows, _) = pivoted_cholesky(&g.yy_block(), PIVOT_TOLERANCE);
        for (&t, row) in hyper_cols.iter().zip(rows) {
            y[t] = unit_or_basis(row);
        }
        for (s, xs) in x.iter_mut().enumerate() {
            let mut v = vec![0.0; d];
            for &t in &hyper_cols {
                let cst = c.get(s, t);
                v.iter_mut().zip(&y[t]).for_each(|(a, b)| *a += cst * b);
            }
            *xs = unit_or_basis(v);
        }
    }

    let deviation = gram_deviation(g, &x, &y, &hyper_cols, &active_vectors(c, &hyper_cols));
    if deviation > CONSISTENCY_TOLERANCE {
        return Err(Error::GramInconsistent {
            deviation,
            tolerance: CONSISTENCY_TOLERANCE,
        });
    }
    HyperbitStrategy::new(gamma.clone(), x, y, d)
}

/// Which Gram indices (rows, then hyperbit columns) touch a nonzero
/// coefficient. The others never enter the objective, so their Gram
/// entries are arbitrary.
pub fn active_vectors(c: &GameMatrix, hyper_cols: &[usize]) -> Vec<bool> {
    let rows = (0..c.rows()).map(|s| hyper_cols.iter().any(|&t| c.get(s, t) != 0.0));
    let cols = hyper_cols.iter().map(|&t| (0..c.rows()).any(|s| c.get(s, t) != 0.0));
    rows.chain(cols).collect()
}

/// Largest difference between the recovered inner products and `g` over
/// the active indices.
pub fn gram_deviation(
    g: &GramSolution,
    x: &[Vec<f64>],
    y: &[Vec<f64>],
    hyper_cols: &[usize],
    active: &[bool],
) -> f64 {
    let vectors: Vec<&[f64]> = x
        .iter()
        .map(Vec::as_slice)
        .chain(hyper_cols.iter().map(|&t| y[t].as_slice()))
        .collect();
    let k = vectors.len();
    let mut worst = 0.0f64;
    for i in (0..k).filter(|&i| active[i]) {
        for j in (0..k).filter(|&j| active[j]) {
            worst = worst.max((dot(vectors[i], vectors[j]) - g.gram[(i, j)]).abs());
        }
    }
    worst
}
